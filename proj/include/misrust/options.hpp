#pragma once

#include <string>
#include <vector>

namespace misrust {

/// Check-specific configuration. Defaults match the shipped check set;
/// everything here is settable through the config file's "options" object.
struct CheckOptions {
    std::string toolchain; // declared reference toolchain, e.g. "rustc 1.92.0 (...)"
    std::vector<std::string> crate_roots; // files treated as crate roots (empty: main.rs/lib.rs)
    std::vector<std::string> tool_attribute_namespaces;
    std::vector<std::string> alloc_calls = {
        "Box::new",  "Vec::new", "Vec::with_capacity", "String::from",
        "Rc::new",   "Arc::new",
    };
    std::vector<std::string> alloc_macros = {"vec", "format"};
    std::vector<std::string> alloc_methods = {"to_string", "to_owned"};
    std::vector<std::string> root_item_allowlist = {"ModuleItem", "UseDecl", "Attribute",
                                                    "FunctionItem:main", "ConstItem"};
    std::vector<std::string> panic_macros = {"panic", "todo", "unimplemented", "unreachable"};
    std::vector<std::string> panic_methods = {"unwrap", "expect"};
    bool assume_unknown_calls_unsafe = false;
    bool no_alloc = false;
};

} // namespace misrust
