#pragma once

// Direct-call graph over the analyzed file set. Edges come from CallExpr
// callee path text resolved by qualified then unqualified name; ambiguous
// names produce no edge so the recursion check cannot report a cycle that
// is not syntactically evidenced.

#include "misrust/ast.hpp"
#include "misrust/unsafe_analysis.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace misrust {

struct CallGraphNode {
    std::string name;           // bare function name
    std::string qualified;      // "Type::name" for impl methods, else name
    const SourceUnit* unit = nullptr;
    NodeId decl = invalid_node;
    Span span;
};

struct CallGraph {
    std::vector<CallGraphNode> nodes;
    std::vector<std::set<std::size_t>> edges; // adjacency by node index

    std::size_t size() const { return nodes.size(); }
};

inline CallGraph build_call_graph(const std::vector<const SourceUnit*>& units) {
    CallGraph g;
    std::map<std::string, std::vector<std::size_t>> by_name;
    std::map<std::string, std::vector<std::size_t>> by_qualified;
    std::map<std::pair<const SourceUnit*, std::string>, std::vector<std::size_t>> by_file_name;

    for (const SourceUnit* unit : units) {
        unit->walk([&](const SyntaxNode& n) {
            if (n.kind != NodeKind::FunctionItem || n.props.name.empty())
                return;
            CallGraphNode node;
            node.name = n.props.name;
            node.qualified = n.props.name;
            const SyntaxNode* impl = unit->find_ancestor(n.node_id, [](const SyntaxNode& a) {
                return a.kind == NodeKind::ImplBlock;
            });
            if (impl)
                node.qualified =
                    AnalysisIndex::base_type_name(impl->props.type_text) + "::" + n.props.name;
            node.unit = unit;
            node.decl = n.node_id;
            node.span = n.span;
            std::size_t idx = g.nodes.size();
            g.nodes.push_back(node);
            by_name[node.name].push_back(idx);
            by_qualified[node.qualified].push_back(idx);
            by_file_name[{unit, node.name}].push_back(idx);
        });
    }
    g.edges.assign(g.nodes.size(), {});

    auto resolve = [&](const SourceUnit* unit, const std::string& self_type,
                       const std::string& path) -> std::vector<std::size_t> {
        std::string p = path;
        for (const char* prefix : {"crate::", "self::"})
            if (p.starts_with(prefix))
                p = p.substr(std::string(prefix).size());
        if (p.starts_with("Self::") && !self_type.empty())
            p = self_type + p.substr(4);
        // qualified: try the last two segments
        auto pos = p.rfind("::");
        if (pos != std::string::npos) {
            std::string tail = p;
            auto pos2 = p.rfind("::", pos - 1);
            if (pos2 != std::string::npos)
                tail = p.substr(pos2 + 2);
            auto it = by_qualified.find(tail);
            if (it != by_qualified.end() && it->second.size() == 1)
                return it->second;
            return {};
        }
        // unqualified: same file first, then a unique cross-file match
        auto fit = by_file_name.find({unit, p});
        if (fit != by_file_name.end() && fit->second.size() == 1)
            return fit->second;
        auto it = by_name.find(p);
        if (it != by_name.end() && it->second.size() == 1)
            return it->second;
        return {};
    };

    // edge per call site, attributed to the nearest enclosing function
    std::map<std::pair<const SourceUnit*, NodeId>, std::size_t> decl_to_idx;
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
        decl_to_idx[{g.nodes[i].unit, g.nodes[i].decl}] = i;

    for (const SourceUnit* unit : units) {
        unit->walk([&](const SyntaxNode& n) {
            if (n.kind != NodeKind::CallExpr || n.props.path_text.empty())
                return;
            const SyntaxNode* fn = unit->find_ancestor(n.node_id, [](const SyntaxNode& a) {
                return a.kind == NodeKind::FunctionItem;
            });
            if (!fn)
                return;
            auto cit = decl_to_idx.find({unit, fn->node_id});
            if (cit == decl_to_idx.end())
                return;
            std::string self_type;
            const SyntaxNode* impl = unit->find_ancestor(n.node_id, [](const SyntaxNode& a) {
                return a.kind == NodeKind::ImplBlock;
            });
            if (impl)
                self_type = AnalysisIndex::base_type_name(impl->props.type_text);
            for (std::size_t callee : resolve(unit, self_type, n.props.path_text))
                g.edges[cit->second].insert(callee);
        });
    }
    return g;
}

/// Functions participating in a call cycle (self or mutual), via Tarjan's
/// strongly-connected components.
inline std::set<std::size_t> recursive_functions(const CallGraph& g) {
    std::set<std::size_t> out;
    std::size_t n = g.size();
    std::vector<int> index(n, -1), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    int counter = 0;

    auto strongconnect = [&](auto&& self, std::size_t v) -> void {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
        for (std::size_t w : g.edges[v]) {
            if (index[w] < 0) {
                self(self, w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack[w]) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] == index[v]) {
            std::vector<std::size_t> scc;
            while (true) {
                std::size_t w = stack.back();
                stack.pop_back();
                on_stack[w] = false;
                scc.push_back(w);
                if (w == v)
                    break;
            }
            bool cyclic = scc.size() > 1 ||
                          (scc.size() == 1 && g.edges[scc[0]].count(scc[0]) > 0);
            if (cyclic)
                for (std::size_t w : scc)
                    out.insert(w);
        }
    };
    for (std::size_t v = 0; v < n; ++v)
        if (index[v] < 0)
            strongconnect(strongconnect, v);
    return out;
}

} // namespace misrust
