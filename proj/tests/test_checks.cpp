#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace misrust;
using testsupport::run_check_on;

TEST_CASE("union declarations are flagged once each, in source order") {
    auto one = run_check_on("CHK-12.3.1", "union U { a: u32, b: f32 }\nfn main() {}\n");
    REQUIRE(one.size() == 1);
    CHECK(one[0].rule_id == "12.3.1");
    CHECK(one[0].span.line_start == 1);

    CHECK(run_check_on("CHK-12.3.1", "enum E { A(u32), B(f32) }\nfn main() {}\n").empty());

    auto two = run_check_on("CHK-12.3.1",
                            "union A { x: u32 }\nfn mid() {}\nunion B { y: u16 }\n");
    REQUIRE(two.size() == 2);
    CHECK(two[0].span.line_start == 1);
    CHECK(two[1].span.line_start == 3);
}

TEST_CASE("attribute validity accepts built-ins and configured namespaces") {
    CHECK(run_check_on("CHK-19.0.1", "#[derive(Clone)]\nstruct S;\n").empty());

    auto bad = run_check_on("CHK-19.0.1", "#[dervie(Clone)]\nstruct S;\n");
    REQUIRE(bad.size() == 1);
    CHECK(bad[0].message.find("dervie") != std::string::npos);

    CHECK_FALSE(run_check_on("CHK-19.0.1", "#[mytool::trace]\nfn f() {}\n").empty());
    CheckOptions opts;
    opts.tool_attribute_namespaces = {"mytool"};
    CHECK(run_check_on("CHK-19.0.1", "#[mytool::trace]\nfn f() {}\n", opts).empty());

    // 2024-edition unsafe attribute wrapper names the inner attribute
    CHECK(run_check_on("CHK-19.0.1", "#[unsafe(no_mangle)]\nfn f() {}\n").empty());
    CHECK_FALSE(run_check_on("CHK-19.0.1", "#[unsafe(no_mangel)]\nfn f() {}\n").empty());
}

TEST_CASE("glob imports are flagged unless they glob a prelude") {
    auto glob = run_check_on("CHK-19.2.2", "use std::collections::*;\n");
    REQUIRE(glob.size() == 1);
    CHECK(glob[0].rule_id == "19.2.2");

    CHECK(run_check_on("CHK-19.2.2", "use mylib::prelude::*;\n").empty());
    CHECK(run_check_on("CHK-19.2.2", "use std::fmt;\n").empty());
}

TEST_CASE("crate-root items outside the allowlist are flagged only at roots") {
    CheckOptions opts;
    opts.crate_roots = {"test.rs"};

    auto hit = run_check_on("CHK-6.0.3", "struct S;\nfn main() {}\n", opts);
    REQUIRE(hit.size() == 1);
    CHECK(hit[0].span.line_start == 1);

    CHECK(run_check_on("CHK-6.0.3", "mod a {}\nfn main() {}\n", opts).empty());

    // not a crate root: no findings regardless of contents
    CHECK(run_check_on("CHK-6.0.3", "struct S;\nfn main() {}\n").empty());
}

TEST_CASE("inherent methods shadowing implemented trait methods are flagged") {
    const char* shadowed = R"(trait T { fn go(&self); }
struct S;
impl T for S { fn go(&self) {} }
impl S {
    fn go(&self) {}
}
fn main() {}
)";
    auto hits = run_check_on("CHK-6.4.2", shadowed);
    REQUIRE(hits.size() == 1);
    CHECK(hits[0].span.line_start == 5);

    const char* distinct = R"(trait T { fn go(&self); }
struct S;
impl T for S { fn go(&self) {} }
impl S { fn start(&self) {} }
fn main() {}
)";
    CHECK(run_check_on("CHK-6.4.2", distinct).empty());

    const char* inherent_only = R"(struct S;
impl S { fn go(&self) {} }
fn main() {}
)";
    CHECK(run_check_on("CHK-6.4.2", inherent_only).empty());
}

TEST_CASE("panic paths are flagged outside test items") {
    auto unwrap = run_check_on("CHK-18.5.1", "fn f(v: Option<u32>) -> u32 { v.unwrap() }\n");
    REQUIRE(unwrap.size() == 1);
    CHECK(unwrap[0].severity == "advisory");

    CHECK(run_check_on("CHK-18.5.1",
                       "#[test]\nfn t() { let v = Some(1); let _ = v.unwrap(); }\n")
              .empty());

    auto panics = run_check_on("CHK-18.5.1", "fn f() { panic!(\"boom\"); }\n");
    REQUIRE(panics.size() == 1);
    CHECK(panics[0].message.find("panic!") != std::string::npos);
}

TEST_CASE("raw-pointer-holding structs need a Drop implementation") {
    auto missing = run_check_on("CHK-21.6.2", "struct H { p: *mut u8 }\nfn main() {}\n");
    REQUIRE(missing.size() == 1);
    CHECK(missing[0].rule_id == "21.6.2");

    const char* with_drop = R"(struct H { p: *mut u8 }
impl Drop for H {
    fn drop(&mut self) {}
}
fn main() {}
)";
    CHECK(run_check_on("CHK-21.6.2", with_drop).empty());

    CHECK(run_check_on("CHK-21.6.2", "struct H { v: Vec<u8>, n: usize }\nfn main() {}\n")
              .empty());
}

TEST_CASE("assertions over constant expressions belong in const blocks") {
    auto hit = run_check_on("CHK-22.3.1", "fn main() { assert!(1 + 1 == 2); }\n");
    REQUIRE(hit.size() == 1);
    CHECK(hit[0].rule_id == "22.3.1");

    CHECK(run_check_on("CHK-22.3.1", "fn main() { const { assert!(1 + 1 == 2) }; }\n").empty());
    CHECK(run_check_on("CHK-22.3.1", "fn main() { let x = 1; assert!(x > 0); }\n").empty());
}

TEST_CASE("pointer-to-integer casts are flagged on declared-type evidence") {
    const char* annotated = R"(fn main() {
    let p: *const u8 = core::ptr::null();
    let a = p as usize;
    let _ = a;
}
)";
    auto hits = run_check_on("CHK-8.2.7", annotated);
    REQUIRE(hits.size() == 1);
    CHECK(hits[0].span.line_start == 3);

    const char* chained = R"(fn main() {
    let x: i32 = 5;
    let a = (&x as *const i32) as usize;
    let _ = a;
}
)";
    CHECK(run_check_on("CHK-8.2.7", chained).size() == 1);

    const char* integer_only = R"(fn main() {
    let b: u32 = 9;
    let a = b as usize;
    let _ = a;
}
)";
    CHECK(run_check_on("CHK-8.2.7", integer_only).empty());
}

TEST_CASE("mutable statics are flagged at declaration and at each access") {
    auto decl_only = run_check_on("CHK-STATIC-MUT", "static mut G: i32 = 0;\nfn main() {}\n");
    REQUIRE(decl_only.size() == 1);
    CHECK(decl_only[0].span.line_start == 1);

    const char* with_access = R"(static mut G: i32 = 0;
fn main() {
    // SAFETY: single-threaded
    unsafe { G += 1; }
}
)";
    auto both = run_check_on("CHK-STATIC-MUT", with_access);
    CHECK(both.size() == 2);

    CHECK(run_check_on("CHK-STATIC-MUT", "static G: i32 = 0;\nfn main() {}\n").empty());
}

TEST_CASE("unsafe constructs require a SAFETY comment directly above") {
    const char* annotated = R"(fn main() {
    let x = 0u8;
    let p: *const u8 = &x;
    // SAFETY: index checked above
    let v = unsafe { *p };
    let _ = v;
}
)";
    CHECK(run_check_on("CHK-SAFETY-COMMENT", annotated).empty());

    const char* bare = R"(fn main() {
    let x = 0u8;
    let p: *const u8 = &x;
    let v = unsafe { *p };
    let _ = v;
}
)";
    auto hits = run_check_on("CHK-SAFETY-COMMENT", bare);
    REQUIRE(hits.size() == 1);
    CHECK(hits[0].rule_id == "tool");
    CHECK(hits[0].span.line_start == 4);

    CHECK(run_check_on("CHK-SAFETY-COMMENT", "fn main() { let x = 1; let _ = x; }\n").empty());
}

TEST_CASE("recursion is flagged per participating function") {
    auto self_rec = run_check_on("CHK-RECURSION", "fn f() { f(); }\nfn main() { f(); }\n");
    REQUIRE(self_rec.size() == 1);
    CHECK(self_rec[0].span.line_start == 1);
    CHECK(self_rec[0].rule_id == "8.2.10");

    auto mutual = run_check_on("CHK-RECURSION", "fn f() { g(); }\nfn g() { f(); }\nfn main() {}\n");
    CHECK(mutual.size() == 2);

    auto chain = run_check_on("CHK-RECURSION",
                              "fn f() { g(); }\nfn g() { h(); }\nfn h() {}\nfn main() { f(); }\n");
    CHECK(chain.empty());
}

TEST_CASE("allocation calls are flagged only under no_alloc") {
    CheckOptions no_alloc;
    no_alloc.no_alloc = true;

    auto hits = run_check_on("CHK-ALLOC", "fn main() { let v = vec![1, 2]; let _ = v; }\n",
                             no_alloc);
    REQUIRE(hits.size() == 1);
    CHECK(hits[0].rule_id == "21.6.1");

    CHECK(run_check_on("CHK-ALLOC", "fn main() { let v = vec![1, 2]; let _ = v; }\n").empty());
    CHECK(run_check_on("CHK-ALLOC", "fn main() { let x = [0u8; 4]; let _ = x; }\n", no_alloc)
              .empty());
}

TEST_CASE("float equality comparisons are flagged") {
    auto lit = run_check_on("CHK-0.3.1", "fn f(a: f64) { if a == 0.1 {} }\n");
    REQUIRE(lit.size() == 1);
    CHECK(lit[0].rule_id == "0.3.1");
    CHECK(lit[0].severity == "advisory");

    const char* typed = R"(fn f(y: f64) {
    let x: f64 = helper();
    if x != y {}
}
fn helper() -> f64 { 0.0 }
)";
    CHECK(run_check_on("CHK-0.3.1", typed).size() == 1);

    CHECK(run_check_on("CHK-0.3.1", "fn f(a: u32, b: u32) { if a == b {} }\n").empty());
}

TEST_CASE("evidence rule: every finding's span covers its witnessing token") {
    struct Expectation {
        const char* check;
        const char* source;
        const char* witness;
    };
    const Expectation cases[] = {
        {"CHK-12.3.1", "union U { a: u32 }\nfn main() {}\n", "union"},
        {"CHK-19.2.2", "use std::collections::*;\n", "*"},
        {"CHK-18.5.1", "fn f(v: Option<u32>) -> u32 { v.unwrap() }\n", "unwrap"},
        {"CHK-22.3.1", "fn main() { assert!(2 == 2); }\n", "assert"},
        {"CHK-STATIC-MUT", "static mut G: i32 = 0;\nfn main() {}\n", "static mut"},
    };
    for (const auto& c : cases) {
        SourceUnit unit = parse("test.rs", c.source);
        auto diags = run_check_on(c.check, c.source);
        REQUIRE_FALSE(diags.empty());
        for (const auto& d : diags) {
            std::string covered(unit.source.substr(d.span.byte_start,
                                                   d.span.byte_end - d.span.byte_start));
            INFO(c.check << " span: " << covered);
            CHECK(covered.find(c.witness) != std::string::npos);
        }
    }
}

TEST_CASE("checks are idempotent") {
    const char* src = "union U { a: u32 }\nfn f() { f(); }\nfn main() {}\n";
    for (const char* check : {"CHK-12.3.1", "CHK-RECURSION"}) {
        auto a = run_check_on(check, src);
        auto b = run_check_on(check, src);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].span == b[i].span);
            CHECK(a[i].message == b[i].message);
        }
    }
}

TEST_CASE("descriptor gating mirrors the registry classes") {
    const Registry& reg = testsupport::shipped_registry();
    for (const CheckDescriptor& c : all_checks()) {
        if (c.rule_id == "tool")
            continue;
        const Guideline* g = reg.find(c.rule_id);
        REQUIRE(g != nullptr);
        REQUIRE(g->check_id.has_value());
        CHECK(*g->check_id == c.check_id);
        bool gated_class = g->guideline_class == GuidelineClass::C4_RequiredInUnsafe &&
                           !g->safe_required;
        CHECK(c.gated_on_unsafe == gated_class);
    }
}
