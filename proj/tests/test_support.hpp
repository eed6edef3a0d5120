#pragma once

#include "misrust/misrust.hpp"
#include "misrust/embedded_dataset.hpp"

#include <string>
#include <vector>

namespace testsupport {

inline const misrust::Registry& shipped_registry() {
    static misrust::Registry reg = [] {
        auto res = misrust::load_registry(misrust::embedded_dataset_json, "embedded");
        return res.registry;
    }();
    return reg;
}

inline misrust::Profile profile_all() {
    misrust::Profile p;
    p.name = misrust::ProfileName::All;
    p.options.toolchain = "rustc 1.92.0 (ded5c06cf 2025-12-08)";
    return p;
}

inline misrust::Profile profile_safe() {
    misrust::Profile p = profile_all();
    p.name = misrust::ProfileName::Safe;
    return p;
}

/// Run one check over a single in-memory source file.
inline std::vector<misrust::Diagnostic> run_check_on(const std::string& check_id,
                                                     const std::string& source,
                                                     misrust::CheckOptions options = {},
                                                     const std::string& path = "test.rs") {
    using namespace misrust;
    const CheckDescriptor* desc = find_check(check_id);
    REQUIRE(desc != nullptr);
    REQUIRE(desc->run != nullptr);
    SourceUnit unit = parse(path, source);
    UnsafeContextMap ctx = classify_contexts(unit);
    std::vector<const SourceUnit*> units{&unit};
    AnalysisIndex index = build_index(units);
    InventoryOptions inv;
    inv.assume_unknown_calls_unsafe = options.assume_unknown_calls_unsafe;
    std::vector<UnsafeOperation> ops = inventory(unit, ctx, &index, inv);
    bool is_root = false;
    for (const auto& r : options.crate_roots)
        is_root = is_root || r == path;
    CheckInput input{unit, ctx, ops, index, units, shipped_registry(), options, is_root};
    return desc->run(input);
}

inline std::vector<std::size_t> lines_of(const std::vector<misrust::Diagnostic>& diags) {
    std::vector<std::size_t> out;
    for (const auto& d : diags)
        out.push_back(d.span.line_start);
    return out;
}

} // namespace testsupport
