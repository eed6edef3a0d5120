#pragma once

// Conformance corpus harness. Layout:
//   <root>/<check_id>/violate_NN.rs + violate_NN.expected.json
//   <root>/<check_id>/conform_NN.rs [+ conform_NN.expected.json]
// A case passes iff the engine's unsuppressed findings for that check match
// the expected (rule_id, line) set exactly, order ignored.

#include "misrust/engine.hpp"
#include "misrust/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace misrust {

struct ExpectedFinding {
    std::string rule_id;
    std::size_t line = 0;

    bool operator==(const ExpectedFinding&) const = default;
    bool operator<(const ExpectedFinding& o) const {
        return std::tie(rule_id, line) < std::tie(o.rule_id, o.line);
    }
};

enum class CaseKind { Violating, Conforming };

struct CorpusCase {
    std::string check_id;
    CaseKind kind = CaseKind::Conforming;
    std::string source_path;
    std::vector<ExpectedFinding> expected;
    bool compile = true;
    std::string compile_reason;
};

struct CaseResult {
    CorpusCase corpus_case;
    bool passed = false;
    std::optional<std::string> error; // harness-level failure (missing sidecar, parse error)
    std::vector<ExpectedFinding> actual;
};

struct CorpusRunResult {
    std::vector<CaseResult> cases;
    std::size_t passed = 0;
    std::size_t failed = 0;
    std::size_t errored = 0;

    bool all_passed() const { return failed == 0 && errored == 0 && !cases.empty(); }
};

namespace corpus_detail {

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline CorpusCase load_sidecar(const std::filesystem::path& p, CorpusCase base) {
    nlohmann::json doc = nlohmann::json::parse(read_file(p));
    if (!doc.is_object())
        throw std::runtime_error("sidecar must be a JSON object");
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        const std::string& k = it.key();
        if (k != "check_id" && k != "compile" && k != "expected" && k != "compile_reason")
            throw std::runtime_error("sidecar: unknown field `" + k + "`");
    }
    base.check_id = doc.at("check_id").get<std::string>();
    base.compile = doc.at("compile").get<bool>();
    if (doc.contains("compile_reason"))
        base.compile_reason = doc["compile_reason"].get<std::string>();
    for (const auto& e : doc.at("expected")) {
        ExpectedFinding f;
        f.rule_id = e.at("rule_id").get<std::string>();
        f.line = e.at("line").get<std::size_t>();
        base.expected.push_back(f);
    }
    return base;
}

/// Option adjustments individual checks need to fire on a single-file case.
inline Profile case_profile(const Profile& base, const CorpusCase& c) {
    Profile p = base;
    if (c.check_id == "CHK-6.0.3")
        p.options.crate_roots = {c.source_path};
    if (c.check_id == "CHK-ALLOC")
        p.options.no_alloc = true;
    return p;
}

} // namespace corpus_detail

inline CorpusRunResult run_corpus(const std::filesystem::path& corpus_root,
                                  const Registry& registry, const Profile& profile) {
    namespace fs = std::filesystem;
    CorpusRunResult result;
    if (!fs::exists(corpus_root))
        return result;

    std::vector<fs::path> dirs;
    for (const auto& e : fs::directory_iterator(corpus_root))
        if (e.is_directory())
            dirs.push_back(e.path());
    std::sort(dirs.begin(), dirs.end());

    for (const fs::path& dir : dirs) {
        std::vector<fs::path> samples;
        for (const auto& e : fs::directory_iterator(dir))
            if (e.is_regular_file() && e.path().extension() == ".rs")
                samples.push_back(e.path());
        std::sort(samples.begin(), samples.end());

        for (const fs::path& sample : samples) {
            std::string stem = sample.stem().string();
            CorpusCase c;
            c.check_id = dir.filename().string();
            c.kind = stem.starts_with("violate") ? CaseKind::Violating : CaseKind::Conforming;
            c.source_path = sample.string();

            CaseResult cr;
            fs::path sidecar = dir / (stem + ".expected.json");
            try {
                if (fs::exists(sidecar)) {
                    c = corpus_detail::load_sidecar(sidecar, c);
                } else if (c.kind == CaseKind::Violating) {
                    throw std::runtime_error("violating case lacks sidecar " + sidecar.string());
                }
                cr.corpus_case = c;

                Profile p = corpus_detail::case_profile(profile, c);
                AnalysisResult analysis = analyze_sources(
                    registry, p, {{c.source_path, corpus_detail::read_file(sample)}});
                if (analysis.files_failed_parse > 0) {
                    std::string msg = "sample failed to parse";
                    for (const Diagnostic& d : analysis.diagnostics)
                        if (d.check_id == "PARSE")
                            msg += ": " + d.message;
                    throw std::runtime_error(msg);
                }

                for (const Diagnostic& d : analysis.diagnostics) {
                    if (d.suppressed || d.check_id != c.check_id)
                        continue;
                    cr.actual.push_back({d.rule_id, d.span.line_start});
                }
                std::vector<ExpectedFinding> want = c.expected;
                std::vector<ExpectedFinding> got = cr.actual;
                std::sort(want.begin(), want.end());
                std::sort(got.begin(), got.end());
                cr.passed = want == got;
            } catch (const std::exception& e) {
                cr.corpus_case = c;
                cr.error = e.what();
            }

            if (cr.error)
                result.errored++;
            else if (cr.passed)
                result.passed++;
            else
                result.failed++;
            result.cases.push_back(std::move(cr));
        }
    }
    return result;
}

inline std::string render_corpus(const CorpusRunResult& result) {
    std::ostringstream out;
    for (const CaseResult& cr : result.cases) {
        if (cr.error) {
            out << "ERROR " << cr.corpus_case.source_path << ": " << *cr.error << "\n";
            continue;
        }
        out << (cr.passed ? "PASS  " : "FAIL  ") << cr.corpus_case.source_path;
        if (!cr.passed) {
            out << "\n  expected:";
            for (const auto& f : cr.corpus_case.expected)
                out << " " << f.rule_id << "@" << f.line;
            out << "\n  actual:  ";
            for (const auto& f : cr.actual)
                out << " " << f.rule_id << "@" << f.line;
        }
        out << "\n";
    }
    out << result.passed << " passed, " << result.failed << " failed, " << result.errored
        << " errored\n";
    return out.str();
}

} // namespace misrust
