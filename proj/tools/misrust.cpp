// misrust command-line front end: analysis runs, registry queries, rule
// explanations, and corpus execution.

#include "misrust/misrust.hpp"
#include "misrust/embedded_dataset.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace misrust;

namespace {

constexpr int exit_clean = 0;
constexpr int exit_findings = 1;
constexpr int exit_tool_error = 2;

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

LoadResult load_registry_from(const std::string& flag_path, std::vector<std::string>& notes) {
    std::string path = flag_path;
    if (path.empty()) {
        if (const char* env = std::getenv("MISRUST_REGISTRY"))
            path = env;
    }
    if (path.empty()) {
        auto res = load_registry(embedded_dataset_json, "embedded dataset");
        for (const auto& w : res.warnings)
            notes.push_back(w);
        return res;
    }
    auto res = load_registry(read_file(path), path);
    for (const auto& w : res.warnings)
        notes.push_back(w);
    return res;
}

std::vector<SourceInput> collect_sources(const std::vector<std::string>& paths) {
    std::vector<fs::path> files;
    for (const std::string& p : paths) {
        fs::path path(p);
        if (!fs::exists(path))
            throw std::runtime_error("path does not exist: " + p);
        if (fs::is_directory(path)) {
            for (const auto& e : fs::recursive_directory_iterator(path))
                if (e.is_regular_file() && e.path().extension() == ".rs")
                    files.push_back(e.path());
        } else {
            files.push_back(path);
        }
    }
    std::sort(files.begin(), files.end());
    std::vector<SourceInput> out;
    for (const fs::path& f : files)
        out.push_back({f.generic_string(), read_file(f)});
    return out;
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j)
        prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

int cmd_check(const std::vector<std::string>& paths, const std::string& profile_flag,
              const std::string& format, const std::string& config_path,
              const std::string& registry_path) {
    std::vector<std::string> notes;
    LoadResult lr = load_registry_from(registry_path, notes);

    Config cfg;
    if (!config_path.empty())
        cfg = parse_config(read_file(config_path));
    if (!profile_flag.empty())
        cfg.profile = profile_flag;
    Profile profile = cfg.to_profile();

    std::vector<SourceInput> sources = collect_sources(paths);
    AnalysisResult result = analyze_sources(lr.registry, profile, sources);

    for (const std::string& n : notes)
        std::cerr << "warning: " << n << "\n";
    if (format == "json")
        std::cout << render_json(lr.registry, result);
    else if (format == "summary")
        std::cout << render_summary(lr.registry, result);
    else
        std::cout << render_text(result);

    if (result.files_failed_parse > 0)
        return exit_tool_error;
    return result.unsuppressed_count() > 0 ? exit_findings : exit_clean;
}

int cmd_explain(const std::string& rule_id, const std::string& registry_path) {
    std::vector<std::string> notes;
    LoadResult lr = load_registry_from(registry_path, notes);
    const Guideline* g = lr.registry.find(rule_id);
    if (!g) {
        std::string nearest;
        std::size_t best = SIZE_MAX;
        for (const Guideline& cand : lr.registry.guidelines) {
            std::size_t d = edit_distance(rule_id, cand.id);
            if (d < best) {
                best = d;
                nearest = cand.id;
            }
        }
        std::cerr << "error: unknown guideline `" << rule_id << "`";
        if (!nearest.empty())
            std::cerr << "; nearest known id is `" << nearest << "`";
        std::cerr << "\n";
        return exit_tool_error;
    }
    std::cout << "guideline " << g->id << " (" << to_string(g->kind) << ")\n";
    std::cout << "  summary:       " << g->title_summary << "\n";
    std::cout << "  topic:         " << g->topic << "\n";
    std::cout << "  class:         " << to_string(g->guideline_class);
    switch (g->guideline_class) {
        case GuidelineClass::C1_StdLibOnly:
            std::cout << " (not applicable: standard-library usage restriction)";
            break;
        case GuidelineClass::C2_NoSuchFeature:
            std::cout << " (not applicable: feature absent from the language)";
            break;
        case GuidelineClass::C3_SatisfiedByLanguage:
            std::cout << " (satisfied by language)";
            break;
        case GuidelineClass::C4_RequiredInUnsafe:
            std::cout << " (required in unsafe code)";
            break;
        case GuidelineClass::C5_NeedsAdaptation:
            std::cout << " (requires adaptation)";
            break;
    }
    std::cout << "\n";
    std::cout << "  safe_required: " << (g->safe_required ? "yes" : "no") << "\n";
    std::cout << "  decidability:  " << to_string(g->decidability) << "\n";
    std::cout << "  severity:      " << to_string(g->severity) << "\n";
    if (g->adaptation_note)
        std::cout << "  adaptation:    " << *g->adaptation_note << "\n";
    if (g->check_id)
        std::cout << "  check:         " << *g->check_id << " (implemented)\n";
    else
        std::cout << "  check:         none (" << to_string(g->decidability) << " review)\n";
    return exit_clean;
}

int cmd_stats(const std::string& registry_path) {
    std::vector<std::string> notes;
    LoadResult lr = load_registry_from(registry_path, notes);
    for (const std::string& n : notes)
        std::cerr << "warning: " << n << "\n";
    std::cout << render_stats(lr.registry);
    return validate_aggregates(lr.registry).all_pass() ? exit_clean : exit_findings;
}

int cmd_corpus(const std::string& root, const std::string& profile_flag,
               const std::string& registry_path) {
    std::vector<std::string> notes;
    LoadResult lr = load_registry_from(registry_path, notes);
    Config cfg;
    cfg.profile = profile_flag.empty() ? "all" : profile_flag;
    cfg.toolchain = "corpus";
    CorpusRunResult result = run_corpus(root, lr.registry, cfg.to_profile());
    std::cout << render_corpus(result);
    return result.all_passed() ? exit_clean : exit_findings;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"MISRA-derived guideline checker for Rust source"};
    app.require_subcommand(1);

    std::string registry_path;
    app.add_option("--registry", registry_path, "registry dataset JSON (default: embedded)");

    auto* check = app.add_subcommand("check", "analyze source files");
    std::vector<std::string> paths;
    std::string profile = "";
    std::string format = "text";
    std::string config_path;
    check->add_option("paths", paths, "files or directories")->required();
    check->add_option("--profile", profile, "safe|unsafe|all|custom");
    check->add_option("--format", format, "text|json|summary")
        ->check(CLI::IsMember({"text", "json", "summary"}));
    check->add_option("--config", config_path, "configuration JSON");
    check->add_option("--registry", registry_path, "registry dataset JSON");

    auto* explain = app.add_subcommand("explain", "describe one guideline");
    std::string rule_id;
    explain->add_option("rule_id", rule_id, "guideline id, e.g. 12.3.1")->required();
    explain->add_option("--registry", registry_path, "registry dataset JSON");

    auto* stats = app.add_subcommand("stats", "registry distribution and validation");
    stats->add_option("--registry", registry_path, "registry dataset JSON");

    auto* corpus = app.add_subcommand("corpus", "run the conformance corpus");
    std::string corpus_root;
    std::string corpus_profile;
    corpus->add_option("root", corpus_root, "corpus root directory")->required();
    corpus->add_option("--profile", corpus_profile, "safe|unsafe|all|custom");
    corpus->add_option("--registry", registry_path, "registry dataset JSON");

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed())
            return cmd_check(paths, profile, format, config_path, registry_path);
        if (explain->parsed())
            return cmd_explain(rule_id, registry_path);
        if (stats->parsed())
            return cmd_stats(registry_path);
        if (corpus->parsed())
            return cmd_corpus(corpus_root, corpus_profile, registry_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_tool_error;
    }
    return exit_tool_error;
}
