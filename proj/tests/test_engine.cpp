#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace misrust;
using testsupport::profile_all;
using testsupport::profile_safe;
using testsupport::shipped_registry;

namespace {

AnalysisResult analyze(const std::string& src, Profile profile = profile_all(),
                       const std::string& path = "t.rs") {
    return analyze_sources(shipped_registry(), profile, {{path, src}});
}

std::vector<Diagnostic> unsuppressed(const AnalysisResult& r) {
    std::vector<Diagnostic> out;
    for (const auto& d : r.diagnostics)
        if (!d.suppressed)
            out.push_back(d);
    return out;
}

} // namespace

TEST_CASE("deviation comments parse in their exact format") {
    SourceUnit unit = parse(
        "t.rs",
        "// misrust-deviation(12.3.1): hardware register overlay\nunion U { a: u32 }\n");
    DeviationScan scan = scan_deviations(unit);
    REQUIRE(scan.deviations.size() == 1);
    CHECK(scan.deviations[0].rule_id == "12.3.1");
    CHECK(scan.deviations[0].justification == "hardware register overlay");
    CHECK(scan.deviations[0].applies_to == DeviationTarget::EnclosingItem);
    CHECK(scan.diagnostics.empty());
}

TEST_CASE("empty deviation justification yields DEV-EMPTY") {
    SourceUnit unit = parse("t.rs", "// misrust-deviation(12.3.1):\nunion U { a: u32 }\n");
    DeviationScan scan = scan_deviations(unit);
    CHECK(scan.deviations.empty());
    REQUIRE(scan.diagnostics.size() == 1);
    CHECK(scan.diagnostics[0].check_id == "DEV-EMPTY");
}

TEST_CASE("malformed deviation rule ids yield DEV-BADID") {
    SourceUnit unit = parse("t.rs", "// misrust-deviation(12..1): why\nfn main() {}\n");
    DeviationScan scan = scan_deviations(unit);
    CHECK(scan.deviations.empty());
    REQUIRE(scan.diagnostics.size() == 1);
    CHECK(scan.diagnostics[0].check_id == "DEV-BADID");
}

TEST_CASE("ordinary comments are not deviations") {
    SourceUnit unit = parse("t.rs", "// just a note\nfn main() {}\n");
    DeviationScan scan = scan_deviations(unit);
    CHECK(scan.deviations.empty());
    CHECK(scan.diagnostics.empty());
}

TEST_CASE("an empty file list produces an empty result") {
    AnalysisResult r = run(shipped_registry(), profile_all(), {});
    CHECK(r.files_analyzed == 0);
    CHECK(r.diagnostics.empty());
}

TEST_CASE("a union-only file yields exactly one unsuppressed finding") {
    AnalysisResult r = analyze("union U { a: u32 }\n");
    auto live = unsuppressed(r);
    REQUIRE(live.size() == 1);
    CHECK(live[0].rule_id == "12.3.1");
    CHECK_FALSE(live[0].suppressed);
}

TEST_CASE("a well-formed deviation flips the finding to suppressed") {
    AnalysisResult r = analyze(
        "// misrust-deviation(12.3.1): hardware register overlay\nunion U { a: u32 }\n");
    REQUIRE(r.diagnostics.size() == 1);
    CHECK(r.diagnostics[0].suppressed);
    CHECK(r.diagnostics[0].suppression_justification == "hardware register overlay");
    CHECK(r.unsuppressed_count() == 0);
}

TEST_CASE("suppression is per-occurrence: only the target line is covered") {
    AnalysisResult r = analyze(
        "// misrust-deviation(12.3.1): first only\nunion A { x: u32 }\nunion B { y: u32 }\n");
    REQUIRE(r.diagnostics.size() == 2);
    CHECK(r.diagnostics[0].suppressed);
    CHECK_FALSE(r.diagnostics[1].suppressed);
}

TEST_CASE("suppression also keys on check ids for tool findings") {
    AnalysisResult r = analyze(
        "// misrust-deviation(CHK-STATIC-MUT): boot scratch area\nstatic mut S: u8 = 0;\nfn main() {}\n");
    REQUIRE(r.diagnostics.size() == 1);
    CHECK(r.diagnostics[0].suppressed);
}

TEST_CASE("deterministic output: identical runs render identical JSON") {
    const std::string src = R"(static mut C: u32 = 0;
union U { a: u32 }
fn f(v: Option<u32>) -> u32 { v.unwrap() }
fn main() {
    let p: *const u8 = core::ptr::null();
    let a = p as usize;
    // SAFETY: demo
    unsafe { C += 1; }
    let _ = (a, f(None));
}
)";
    AnalysisResult r1 = analyze(src);
    AnalysisResult r2 = analyze(src);
    CHECK(render_json(shipped_registry(), r1) == render_json(shipped_registry(), r2));
}

TEST_CASE("gated rules stay silent on safe units and fire on unsafe ones") {
    const std::string cast_code = R"(fn main() {
    let x: i32 = 7;
    let p: *const i32 = &x;
    let addr = p as usize;
    let _ = addr;
}
)";
    AnalysisResult safe_run = analyze(cast_code);
    for (const auto& d : safe_run.diagnostics)
        CHECK(d.rule_id != "8.2.7");

    const std::string cast_code_unsafe = R"(fn main() {
    let x: i32 = 7;
    let p: *const i32 = &x;
    let addr = p as usize;
    // SAFETY: p outlives the block
    let v = unsafe { *p };
    let _ = (addr, v);
}
)";
    AnalysisResult unsafe_run = analyze(cast_code_unsafe);
    bool found = false;
    for (const auto& d : unsafe_run.diagnostics)
        found = found || d.rule_id == "8.2.7";
    CHECK(found);
}

TEST_CASE("gating invariant holds for every unsafe-gated rule") {
    const std::string src = "fn main() { let x = 1; let _ = x; }\n";
    AnalysisResult r = analyze(src);
    const Registry& reg = shipped_registry();
    for (const auto& d : r.diagnostics) {
        if (d.rule_id == "tool")
            continue;
        const Guideline* g = reg.find(d.rule_id);
        REQUIRE(g != nullptr);
        bool gated = g->guideline_class == GuidelineClass::C4_RequiredInUnsafe &&
                     !g->safe_required;
        CHECK_FALSE(gated);
    }
}

TEST_CASE("profiles are monotone: safe findings are a subset of all findings") {
    const std::string src = R"(union U { a: u32 }
fn fact(n: u64) -> u64 { if n == 0 { 1 } else { n * fact(n - 1) } }
fn main() {
    let x: i32 = 7;
    let p: *const i32 = &x;
    let a = p as usize;
    // SAFETY: demo
    let v = unsafe { *p };
    let _ = (a, v, fact(3));
}
)";
    auto key = [](const Diagnostic& d) {
        return d.file + "|" + std::to_string(d.span.byte_start) + "|" + d.rule_id + "|" +
               d.check_id;
    };
    AnalysisResult safe_run = analyze(src, profile_safe());
    AnalysisResult all_run = analyze(src, profile_all());
    std::set<std::string> all_keys;
    for (const auto& d : all_run.diagnostics)
        all_keys.insert(key(d));
    for (const auto& d : safe_run.diagnostics) {
        INFO("missing under all: " << key(d));
        CHECK(all_keys.count(key(d)) == 1);
    }
    // and the safe profile must not activate the gated pointer-cast rule
    for (const auto& d : safe_run.diagnostics)
        CHECK(d.rule_id != "8.2.7");
}

TEST_CASE("missing toolchain pin is a run-level finding") {
    Profile p = profile_all();
    p.options.toolchain = "";
    AnalysisResult r = analyze_sources(shipped_registry(), p, {{"t.rs", "fn main() {}\n"}});
    bool found = false;
    for (const auto& d : r.diagnostics)
        found = found || (d.rule_id == "4.1.1" && d.file == "<config>");
    CHECK(found);

    AnalysisResult pinned = analyze("fn main() {}\n");
    for (const auto& d : pinned.diagnostics)
        CHECK(d.rule_id != "4.1.1");
}

TEST_CASE("parse failures surface as PARSE tool diagnostics and count separately") {
    AnalysisResult r = analyze_sources(shipped_registry(), profile_all(),
                                       {{"bad.rs", "fn f( {"}, {"ok.rs", "fn main() {}\n"}});
    CHECK(r.files_analyzed == 1);
    CHECK(r.files_failed_parse == 1);
    bool parse_diag = false;
    for (const auto& d : r.diagnostics)
        parse_diag = parse_diag || (d.check_id == "PARSE" && d.file == "bad.rs");
    CHECK(parse_diag);
}

TEST_CASE("diagnostics are sorted by file, offset, then rule") {
    AnalysisResult r = analyze_sources(
        shipped_registry(), profile_all(),
        {{"b.rs", "union U { a: u32 }\n"}, {"a.rs", "union V { b: u16 }\n"}});
    REQUIRE(r.diagnostics.size() == 2);
    CHECK(r.diagnostics[0].file == "a.rs");
    CHECK(r.diagnostics[1].file == "b.rs");
    CHECK(std::is_sorted(r.diagnostics.begin(), r.diagnostics.end(), diagnostic_order));
}

TEST_CASE("set-level checks resolve across the analyzed file set") {
    SECTION("mutual recursion across files") {
        AnalysisResult r = analyze_sources(
            shipped_registry(), profile_all(),
            {{"a.rs", "fn alpha(n: u32) -> u32 { if n == 0 { 0 } else { beta(n - 1) } }\n"},
             {"b.rs", "fn beta(n: u32) -> u32 { if n == 0 { 1 } else { alpha(n - 1) } }\n"}});
        std::set<std::string> files_flagged;
        for (const auto& d : r.diagnostics)
            if (d.rule_id == "8.2.10")
                files_flagged.insert(d.file);
        CHECK(files_flagged == std::set<std::string>{"a.rs", "b.rs"});
    }
    SECTION("trait shadowing with the trait declared in another file") {
        AnalysisResult r = analyze_sources(
            shipped_registry(), profile_all(),
            {{"traits.rs", "pub trait Greet { fn hello(&self); }\n"},
             {"impls.rs", "struct S;\nimpl Greet for S { fn hello(&self) {} }\n"
                          "impl S { fn hello(&self) {} }\n"}});
        bool found = false;
        for (const auto& d : r.diagnostics)
            found = found || (d.rule_id == "6.4.2" && d.file == "impls.rs");
        CHECK(found);
    }
    SECTION("Drop implemented in a sibling file satisfies the raw-holder rule") {
        AnalysisResult r = analyze_sources(
            shipped_registry(), profile_all(),
            {{"types.rs", "pub struct Buf { p: *mut u8 }\n"},
             {"drops.rs", "impl Drop for Buf { fn drop(&mut self) {} }\n"}});
        for (const auto& d : r.diagnostics)
            CHECK(d.rule_id != "21.6.2");
    }
}

TEST_CASE("crate-root detection honors configured roots and falls back to main.rs") {
    const std::string src = "struct S;\nfn main() {}\n";
    AnalysisResult by_name = analyze(src, profile_all(), "src/main.rs");
    bool root_hit = false;
    for (const auto& d : by_name.diagnostics)
        root_hit = root_hit || d.rule_id == "6.0.3";
    CHECK(root_hit);

    AnalysisResult not_root = analyze(src, profile_all(), "src/util.rs");
    for (const auto& d : not_root.diagnostics)
        CHECK(d.rule_id != "6.0.3");
}
