#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

#include <json.hpp>

using namespace misrust;
using testsupport::profile_all;
using testsupport::shipped_registry;

namespace {

AnalysisResult analyze(const std::vector<SourceInput>& inputs) {
    return analyze_sources(shipped_registry(), profile_all(), inputs);
}

} // namespace

TEST_CASE("safe-only runs report 57 not-applicable and 89 language-guaranteed rules") {
    AnalysisResult r = analyze({{"a.rs", "fn main() { let x = 1; let _ = x; }\n"}});
    ComplianceReport c = build_compliance(shipped_registry(), r);
    CHECK(c.totals[GuidelineStatusKind::NotApplicable] == 57);
    CHECK(c.totals[GuidelineStatusKind::GuaranteedByLanguage] >= 89);
    std::size_t sum = 0;
    for (const auto& [kind, n] : c.totals)
        sum += n;
    CHECK(sum == 179);
}

TEST_CASE("one union violation shows as Violated(1) for 12.3.1") {
    AnalysisResult r = analyze({{"u.rs", "union U { a: u32 }\n"}});
    ComplianceReport c = build_compliance(shipped_registry(), r);
    const GuidelineStatus& s = c.per_guideline.at("12.3.1");
    CHECK(s.kind == GuidelineStatusKind::Violated);
    CHECK(s.violated_count == 1);
}

TEST_CASE("suppressed findings do not count toward Violated") {
    AnalysisResult r = analyze(
        {{"u.rs", "// misrust-deviation(12.3.1): register overlay\nunion U { a: u32 }\n"}});
    ComplianceReport c = build_compliance(shipped_registry(), r);
    CHECK(c.per_guideline.at("12.3.1").kind == GuidelineStatusKind::Compliant);
}

TEST_CASE("an empty run leaves checkable guidelines unchecked but still covers 179") {
    AnalysisResult r = run(shipped_registry(), profile_all(), {});
    ComplianceReport c = build_compliance(shipped_registry(), r);
    CHECK(c.per_guideline.size() == 179);
    std::size_t sum = 0;
    for (const auto& [kind, n] : c.totals)
        sum += n;
    CHECK(sum == 179);
    CHECK(c.per_guideline.at("12.3.1").kind == GuidelineStatusKind::Unchecked);
    CHECK(c.per_guideline.at("6.5.1").kind == GuidelineStatusKind::ManualReview);
    CHECK(c.per_guideline.at("19.2.1").kind == GuidelineStatusKind::GuaranteedByLanguage);
    CHECK(c.per_guideline.at("9.6.1").kind == GuidelineStatusKind::NotApplicable);
}

TEST_CASE("unknown rule ids in diagnostics are a reporting error") {
    AnalysisResult r;
    Diagnostic d;
    d.rule_id = "99.9.9";
    d.check_id = "CHK-X";
    d.file = "x.rs";
    r.diagnostics.push_back(d);
    CHECK_THROWS_AS(build_compliance(shipped_registry(), r), ReportError);
}

TEST_CASE("text rendering emits the fixed per-diagnostic line format") {
    AnalysisResult r = analyze({{"u.rs", "union U { a: u32 }\n"}});
    std::string text = render_text(r);
    CHECK(text.find("u.rs:1:1: [12.3.1] required: union `U` declared") != std::string::npos);
}

TEST_CASE("json of an empty result keeps the schema shape") {
    AnalysisResult r = run(shipped_registry(), profile_all(), {});
    std::string json_text = render_json(shipped_registry(), r);
    auto doc = nlohmann::json::parse(json_text);
    CHECK(doc["diagnostics"].is_array());
    CHECK(doc["diagnostics"].empty());
    CHECK(doc["files_analyzed"] == 0);
    CHECK(doc["deviations"].is_array());
    CHECK(doc["compliance"].size() == 179);
    CHECK(doc["totals"]["not_applicable"] == 57);
    // fixed key order
    std::vector<std::string> keys;
    auto ordered = nlohmann::ordered_json::parse(json_text);
    for (auto it = ordered.begin(); it != ordered.end(); ++it)
        keys.push_back(it.key());
    CHECK(keys == std::vector<std::string>{"tool_version", "toolchain", "profile",
                                           "files_analyzed", "files_failed_parse", "diagnostics",
                                           "deviations", "compliance", "totals"});
}

TEST_CASE("json round-trips the diagnostics list exactly") {
    AnalysisResult r = analyze({
        {"u.rs", "union U { a: u32 }\nfn f(v: Option<u32>) -> u32 { v.unwrap() }\n"},
    });
    auto doc = nlohmann::json::parse(render_json(shipped_registry(), r));
    std::vector<Diagnostic> live;
    for (const auto& d : r.diagnostics)
        if (!d.suppressed)
            live.push_back(d);
    REQUIRE(doc["diagnostics"].size() == live.size());
    for (std::size_t i = 0; i < live.size(); ++i) {
        const auto& j = doc["diagnostics"][i];
        CHECK(j["file"] == live[i].file);
        CHECK(j["line"] == live[i].span.line_start);
        CHECK(j["col"] == live[i].span.col_start);
        CHECK(j["rule_id"] == live[i].rule_id);
        CHECK(j["check_id"] == live[i].check_id);
        CHECK(j["severity"] == live[i].severity);
        CHECK(j["message"] == live[i].message);
    }
}

TEST_CASE("suppressed findings appear under the deviations key") {
    AnalysisResult r = analyze(
        {{"u.rs", "// misrust-deviation(12.3.1): register overlay\nunion U { a: u32 }\n"}});
    auto doc = nlohmann::json::parse(render_json(shipped_registry(), r));
    CHECK(doc["diagnostics"].empty());
    REQUIRE(doc["deviations"].size() == 1);
    CHECK(doc["deviations"][0]["rule_id"] == "12.3.1");
    CHECK(doc["deviations"][0]["line"] == 2);
    CHECK(doc["deviations"][0]["justification"] == "register overlay");
}

TEST_CASE("summary shows the per-status totals line") {
    AnalysisResult r = analyze({{"a.rs", "fn main() {}\n"}});
    std::string summary = render_summary(shipped_registry(), r);
    CHECK(summary.find("not_applicable: 57") != std::string::npos);
    CHECK(summary.find("guideline") != std::string::npos);
    CHECK(summary.find("12.3.1") != std::string::npos);
}

TEST_CASE("matrix coverage: every registry id appears exactly once in the summary") {
    AnalysisResult r = analyze({{"a.rs", "fn main() {}\n"}});
    std::string summary = render_summary(shipped_registry(), r);
    for (const Guideline& g : shipped_registry().guidelines) {
        std::string needle = "\n" + g.id + " ";
        auto first = summary.find(needle);
        REQUIRE(first != std::string::npos);
        CHECK(summary.find(needle, first + 1) == std::string::npos);
    }
}

TEST_CASE("rendering is pure") {
    AnalysisResult r = analyze({{"u.rs", "union U { a: u32 }\n"}});
    CHECK(render_text(r) == render_text(r));
    CHECK(render_json(shipped_registry(), r) == render_json(shipped_registry(), r));
    CHECK(render_summary(shipped_registry(), r) == render_summary(shipped_registry(), r));
}

TEST_CASE("stats output reproduces the distribution table") {
    std::string stats = render_stats(shipped_registry());
    CHECK(stats.find("57/179") != std::string::npos);
    CHECK(stats.find("31.84") != std::string::npos);
    CHECK(stats.find("11/179") != std::string::npos);
    CHECK(stats.find("6.15") != std::string::npos);
    CHECK(stats.find("Expressions") != std::string::npos);
    CHECK(stats.find("17/24") != std::string::npos);
    CHECK(stats.find("FAIL") == std::string::npos);
}
