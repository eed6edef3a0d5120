#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

#include <filesystem>
#include <fstream>
#include <map>

using namespace misrust;
namespace fs = std::filesystem;

namespace {

fs::path corpus_root() { return fs::path(MISRUST_SOURCE_DIR) / "corpus"; }

Profile corpus_profile() {
    Profile p = testsupport::profile_all();
    return p;
}

} // namespace

TEST_CASE("the shipped corpus passes completely") {
    CorpusRunResult r = run_corpus(corpus_root(), testsupport::shipped_registry(),
                                   corpus_profile());
    for (const CaseResult& c : r.cases) {
        INFO(c.corpus_case.source_path);
        if (c.error)
            FAIL_CHECK(*c.error);
        else
            CHECK(c.passed);
    }
    CHECK(r.all_passed());
}

TEST_CASE("corpus coverage: at least two violating and two conforming cases per check") {
    CorpusRunResult r = run_corpus(corpus_root(), testsupport::shipped_registry(),
                                   corpus_profile());
    std::map<std::string, std::pair<int, int>> per_check; // violating, conforming
    for (const CaseResult& c : r.cases) {
        if (c.corpus_case.kind == CaseKind::Violating)
            per_check[c.corpus_case.check_id].first++;
        else
            per_check[c.corpus_case.check_id].second++;
    }
    int file_scoped = 0;
    for (const CheckDescriptor& d : all_checks()) {
        if (d.run_level)
            continue;
        ++file_scoped;
        INFO(d.check_id);
        REQUIRE(per_check.count(d.check_id) == 1);
        CHECK(per_check[d.check_id].first >= 2);
        CHECK(per_check[d.check_id].second >= 2);
    }
    CHECK(file_scoped >= 13);
}

TEST_CASE("violating sidecar expectations are non-empty and match file lines") {
    CorpusRunResult r = run_corpus(corpus_root(), testsupport::shipped_registry(),
                                   corpus_profile());
    for (const CaseResult& c : r.cases) {
        if (c.corpus_case.kind != CaseKind::Violating)
            continue;
        INFO(c.corpus_case.source_path);
        CHECK_FALSE(c.corpus_case.expected.empty());
        std::ifstream in(c.corpus_case.source_path);
        std::size_t lines = 0;
        std::string line;
        while (std::getline(in, line))
            ++lines;
        for (const ExpectedFinding& f : c.corpus_case.expected) {
            CHECK(f.line >= 1);
            CHECK(f.line <= lines);
        }
    }
}

TEST_CASE("an off-by-one expectation fails with an actual-vs-expected diff") {
    fs::path tmp = fs::temp_directory_path() / "misrust_corpus_test";
    fs::remove_all(tmp);
    fs::create_directories(tmp / "CHK-12.3.1");
    {
        std::ofstream f(tmp / "CHK-12.3.1" / "violate_01.rs");
        f << "union U { a: u32 }\nfn main() {}\n";
    }
    {
        std::ofstream f(tmp / "CHK-12.3.1" / "violate_01.expected.json");
        f << R"({"check_id":"CHK-12.3.1","compile":true,)"
          << R"("expected":[{"rule_id":"12.3.1","line":2}]})";
    }
    CorpusRunResult r = run_corpus(tmp, testsupport::shipped_registry(), corpus_profile());
    REQUIRE(r.cases.size() == 1);
    CHECK_FALSE(r.cases[0].passed);
    REQUIRE(r.cases[0].actual.size() == 1);
    CHECK(r.cases[0].actual[0].line == 1);
    std::string rendered = render_corpus(r);
    CHECK(rendered.find("expected:") != std::string::npos);
    CHECK(rendered.find("actual:") != std::string::npos);
    fs::remove_all(tmp);
}

TEST_CASE("a violating case without a sidecar is a harness error, not a crash") {
    fs::path tmp = fs::temp_directory_path() / "misrust_corpus_test2";
    fs::remove_all(tmp);
    fs::create_directories(tmp / "CHK-12.3.1");
    {
        std::ofstream f(tmp / "CHK-12.3.1" / "violate_01.rs");
        f << "union U { a: u32 }\n";
    }
    {
        std::ofstream f(tmp / "CHK-12.3.1" / "conform_01.rs");
        f << "fn main() {}\n";
    }
    CorpusRunResult r = run_corpus(tmp, testsupport::shipped_registry(), corpus_profile());
    REQUIRE(r.cases.size() == 2);
    CHECK(r.errored == 1);
    CHECK(r.passed == 1);
    CHECK_FALSE(r.all_passed());
    fs::remove_all(tmp);
}

TEST_CASE("an unparseable sample is a case error and the harness continues") {
    fs::path tmp = fs::temp_directory_path() / "misrust_corpus_test3";
    fs::remove_all(tmp);
    fs::create_directories(tmp / "CHK-12.3.1");
    {
        std::ofstream f(tmp / "CHK-12.3.1" / "violate_01.rs");
        f << "fn broken( {\n";
    }
    {
        std::ofstream f(tmp / "CHK-12.3.1" / "violate_01.expected.json");
        f << R"({"check_id":"CHK-12.3.1","compile":false,)"
          << R"("expected":[{"rule_id":"12.3.1","line":1}]})";
    }
    {
        std::ofstream f(tmp / "CHK-12.3.1" / "conform_01.rs");
        f << "fn main() {}\n";
    }
    CorpusRunResult r = run_corpus(tmp, testsupport::shipped_registry(), corpus_profile());
    REQUIRE(r.cases.size() == 2);
    CHECK(r.errored == 1);
    CHECK(r.passed == 1);
    fs::remove_all(tmp);
}

TEST_CASE("inventoried operations in compilable samples sit in unsafe contexts") {
    // the compile gate means raw derefs, unsafe calls, and mutable-static
    // accesses can only appear inside unsafe regions
    for (const auto& entry : fs::recursive_directory_iterator(corpus_root())) {
        if (!entry.is_regular_file() || entry.path().extension() != ".rs")
            continue;
        std::ifstream in(entry.path());
        std::ostringstream ss;
        ss << in.rdbuf();
        SourceUnit unit = parse(entry.path().string(), ss.str());
        UnsafeContextMap ctx = classify_contexts(unit);
        for (const UnsafeOperation& op : inventory(unit, ctx)) {
            if (op.kind == UnsafeOperationKind::UnsafeTraitImpl)
                continue;
            INFO(entry.path().string() << " op at line " << op.span.line_start);
            CHECK((op.enclosing_unsafe_span.has_value() || ctx.node_in_unsafe(op.node)));
        }
    }
}

TEST_CASE("gated checks ship paired unsafe/safe case sets") {
    // violate_01 and conform_01 of each gated check differ only in the unsafe
    // construct; the violating side must find, the safe side must not
    for (const CheckDescriptor& d : all_checks()) {
        if (!d.gated_on_unsafe)
            continue;
        fs::path dir = corpus_root() / d.check_id;
        INFO(d.check_id);
        REQUIRE(fs::exists(dir / "violate_01.rs"));
        REQUIRE(fs::exists(dir / "conform_01.rs"));
        auto read = [](const fs::path& p) {
            std::ifstream in(p);
            std::ostringstream ss;
            ss << in.rdbuf();
            return ss.str();
        };
        SourceUnit v = parse("v.rs", read(dir / "violate_01.rs"));
        SourceUnit c = parse("c.rs", read(dir / "conform_01.rs"));
        CHECK(unit_has_unsafe(v));
        CHECK_FALSE(unit_has_unsafe(c));
    }
}
