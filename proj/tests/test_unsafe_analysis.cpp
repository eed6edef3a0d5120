#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace misrust;

namespace {

std::vector<UnsafeOperation> inventory_of(const std::string& src, InventoryOptions opts = {}) {
    SourceUnit unit = parse("t.rs", src);
    UnsafeContextMap ctx = classify_contexts(unit);
    return inventory(unit, ctx, nullptr, opts);
}

std::size_t count_kind(const std::vector<UnsafeOperation>& ops, UnsafeOperationKind k) {
    std::size_t n = 0;
    for (const auto& op : ops)
        n += op.kind == k;
    return n;
}

} // namespace

TEST_CASE("a file without unsafe has no unsafe contexts") {
    SourceUnit unit = parse("t.rs", "fn main() { let x = 1; helper(x); }\nfn helper(_: i32) {}");
    UnsafeContextMap ctx = classify_contexts(unit);
    unit.walk([&](const SyntaxNode& n) { CHECK_FALSE(ctx.node_in_unsafe(n.node_id)); });
}

TEST_CASE("the body of an unsafe fn is an unsafe context") {
    SourceUnit unit = parse("t.rs", "unsafe fn g() { h(); }\nunsafe fn h() {}");
    UnsafeContextMap ctx = classify_contexts(unit);
    bool saw_call = false;
    unit.walk([&](const SyntaxNode& n) {
        if (n.kind == NodeKind::CallExpr) {
            saw_call = true;
            CHECK(ctx.node_in_unsafe(n.node_id));
        }
    });
    CHECK(saw_call);
}

TEST_CASE("nested unsafe blocks mark inner and outer contents") {
    SourceUnit unit = parse("t.rs", "fn f() { unsafe { unsafe { g(); } } }\nfn g() {}");
    UnsafeContextMap ctx = classify_contexts(unit);
    unit.walk([&](const SyntaxNode& n) {
        if (n.kind == NodeKind::CallExpr)
            CHECK(ctx.node_in_unsafe(n.node_id));
        if (n.kind == NodeKind::UnsafeBlock) {
            for (NodeId c : n.children)
                CHECK(ctx.node_in_unsafe(c));
        }
    });
}

TEST_CASE("a safe fn nested in an unsafe impl stays in unsafe context per the model") {
    SourceUnit unit = parse("t.rs", "unsafe impl Send for S {}\nstruct S;");
    UnsafeContextMap ctx = classify_contexts(unit);
    unit.walk([&](const SyntaxNode& n) {
        if (n.kind == NodeKind::ImplBlock)
            CHECK(ctx.node_in_unsafe(n.node_id));
    });
}

TEST_CASE("mutable static access is inventoried") {
    auto ops = inventory_of("static mut C: u32 = 0;\nfn f() { unsafe { C += 1; } }");
    CHECK(count_kind(ops, UnsafeOperationKind::StaticMutAccess) == 1);
    for (const auto& op : ops)
        if (op.kind == UnsafeOperationKind::StaticMutAccess) {
            CHECK(op.span.line_start == 2);
            CHECK(op.enclosing_unsafe_span.has_value());
        }
}

TEST_CASE("unsafe trait implementations are inventoried") {
    auto ops = inventory_of("struct T;\nunsafe impl Send for T {}");
    CHECK(count_kind(ops, UnsafeOperationKind::UnsafeTraitImpl) == 1);
}

TEST_CASE("a safe-only file has an empty inventory") {
    auto ops = inventory_of("fn main() { let x = [1, 2]; let _ = x[0]; }");
    CHECK(ops.empty());
}

TEST_CASE("raw pointer dereference requires declared-type evidence") {
    const char* src = R"(fn f(p: *const u8) -> u8 {
    // SAFETY: caller contract
    unsafe { *p }
}
fn g(x: &u8) -> u8 {
    *x
}
)";
    auto ops = inventory_of(src);
    CHECK(count_kind(ops, UnsafeOperationKind::RawPointerDeref) == 1);
}

TEST_CASE("union field access is inventoried via the binding's evident type") {
    const char* src = R"(union U { a: u32, b: f32 }
fn f() -> u32 {
    let u = U { a: 1 };
    unsafe { u.a }
}
)";
    auto ops = inventory_of(src);
    CHECK(count_kind(ops, UnsafeOperationKind::UnionFieldAccess) == 1);
}

TEST_CASE("unsafe calls resolve against declarations in the analysis set") {
    const char* src = R"(unsafe fn danger() {}
fn safe_helper() {}
fn main() {
    // SAFETY: demo
    unsafe {
        danger();
        safe_helper();
    }
}
)";
    auto ops = inventory_of(src);
    CHECK(count_kind(ops, UnsafeOperationKind::UnsafeFunctionCall) == 1);
}

TEST_CASE("unknown callees are unsafe only under the assume option") {
    const char* src = R"(fn main() {
    // SAFETY: demo
    unsafe {
        libc_call();
    }
}
)";
    CHECK(count_kind(inventory_of(src), UnsafeOperationKind::UnsafeFunctionCall) == 0);
    InventoryOptions opts;
    opts.assume_unknown_calls_unsafe = true;
    CHECK(count_kind(inventory_of(src, opts), UnsafeOperationKind::UnsafeFunctionCall) == 1);
}

TEST_CASE("unit_has_unsafe matches the gate definition") {
    CHECK_FALSE(unit_has_unsafe(parse("t.rs", "fn main() {}")));
    CHECK(unit_has_unsafe(parse("t.rs", "fn main() { unsafe {} }")));
    CHECK(unit_has_unsafe(parse("t.rs", "unsafe fn f() {}")));
    CHECK(unit_has_unsafe(parse("t.rs", "struct S;\nunsafe impl Send for S {}")));
}

TEST_CASE("soundness: a safe unit inventories nothing but declarations") {
    // a bare `static mut` declaration is not an access
    auto ops = inventory_of("static mut G: [u8; 4] = [0; 4];\nfn main() {}");
    CHECK(ops.empty());
}

TEST_CASE("monotonicity: removing an unsafe block never adds inventory entries") {
    const char* with_block = R"(static mut C: u32 = 0;
fn f(p: *const u8) -> u8 {
    // SAFETY: demo
    unsafe {
        C += 1;
        *p
    }
}
)";
    const char* without_block = R"(static mut C: u32 = 0;
fn f(p: *const u8) -> u8 {
    0
}
)";
    auto a = inventory_of(with_block);
    auto b = inventory_of(without_block);
    CHECK(b.size() <= a.size());
    CHECK(b.empty());
}

TEST_CASE("every inventory span lies within the file") {
    const char* src = R"(static mut C: u32 = 0;
union U { a: u32 }
unsafe fn touch(p: *mut u8) {
    *p = 1;
    C += 1;
}
)";
    SourceUnit unit = parse("t.rs", src);
    UnsafeContextMap ctx = classify_contexts(unit);
    for (const auto& op : inventory(unit, ctx)) {
        CHECK(op.span.byte_end <= unit.source.size());
        CHECK(op.span.byte_start < op.span.byte_end);
    }
}
