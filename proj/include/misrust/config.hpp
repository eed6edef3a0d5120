#pragma once

// Tool configuration file: UTF-8 JSON, single flat schema, unknown keys
// rejected at every level.

#include "misrust/registry.hpp"

#include <json.hpp>

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace misrust {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Config {
    std::string toolchain;
    std::string profile = "all";
    std::set<std::string> enabled_rules;
    std::set<std::string> disabled_rules;
    CheckOptions options;

    Profile to_profile() const {
        Profile p;
        auto name = profile_from_string(profile);
        if (!name)
            throw ConfigError("unknown profile `" + profile + "` (expected safe|unsafe|all|custom)");
        p.name = *name;
        p.enabled_overrides = enabled_rules;
        p.disabled_overrides = disabled_rules;
        p.options = options;
        p.options.toolchain = toolchain;
        return p;
    }
};

namespace detail {

inline std::vector<std::string> string_array(const nlohmann::json& v, const std::string& where) {
    if (!v.is_array())
        throw ConfigError(where + " must be an array of strings");
    std::vector<std::string> out;
    for (const auto& e : v) {
        if (!e.is_string())
            throw ConfigError(where + " must contain only strings");
        out.push_back(e.get<std::string>());
    }
    return out;
}

} // namespace detail

inline Config parse_config(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object())
        throw ConfigError("config top level must be an object");

    Config cfg;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        const std::string& key = it.key();
        const nlohmann::json& v = it.value();
        if (key == "toolchain") {
            if (!v.is_string())
                throw ConfigError("config `toolchain` must be a string");
            cfg.toolchain = v.get<std::string>();
        } else if (key == "profile") {
            if (!v.is_string())
                throw ConfigError("config `profile` must be a string");
            cfg.profile = v.get<std::string>();
        } else if (key == "crate_roots") {
            cfg.options.crate_roots = detail::string_array(v, "config `crate_roots`");
        } else if (key == "rules") {
            if (!v.is_object())
                throw ConfigError("config `rules` must be an object");
            for (auto rit = v.begin(); rit != v.end(); ++rit) {
                if (rit.key() == "enable") {
                    for (auto& id : detail::string_array(rit.value(), "config `rules.enable`"))
                        cfg.enabled_rules.insert(id);
                } else if (rit.key() == "disable") {
                    for (auto& id : detail::string_array(rit.value(), "config `rules.disable`"))
                        cfg.disabled_rules.insert(id);
                } else {
                    throw ConfigError("config: unknown field `rules." + rit.key() + "`");
                }
            }
        } else if (key == "options") {
            if (!v.is_object())
                throw ConfigError("config `options` must be an object");
            for (auto oit = v.begin(); oit != v.end(); ++oit) {
                const std::string& ok = oit.key();
                if (ok == "tool_attribute_namespaces")
                    cfg.options.tool_attribute_namespaces =
                        detail::string_array(oit.value(), "config `options." + ok + "`");
                else if (ok == "alloc_calls")
                    cfg.options.alloc_calls =
                        detail::string_array(oit.value(), "config `options." + ok + "`");
                else if (ok == "alloc_macros")
                    cfg.options.alloc_macros =
                        detail::string_array(oit.value(), "config `options." + ok + "`");
                else if (ok == "alloc_methods")
                    cfg.options.alloc_methods =
                        detail::string_array(oit.value(), "config `options." + ok + "`");
                else if (ok == "root_item_allowlist")
                    cfg.options.root_item_allowlist =
                        detail::string_array(oit.value(), "config `options." + ok + "`");
                else if (ok == "panic_macros")
                    cfg.options.panic_macros =
                        detail::string_array(oit.value(), "config `options." + ok + "`");
                else if (ok == "panic_methods")
                    cfg.options.panic_methods =
                        detail::string_array(oit.value(), "config `options." + ok + "`");
                else if (ok == "assume_unknown_calls_unsafe") {
                    if (!oit.value().is_boolean())
                        throw ConfigError("config `options." + ok + "` must be a boolean");
                    cfg.options.assume_unknown_calls_unsafe = oit.value().get<bool>();
                } else if (ok == "no_alloc") {
                    if (!oit.value().is_boolean())
                        throw ConfigError("config `options." + ok + "` must be a boolean");
                    cfg.options.no_alloc = oit.value().get<bool>();
                } else {
                    throw ConfigError("config: unknown field `options." + ok + "`");
                }
            }
        } else {
            throw ConfigError("config: unknown field `" + key + "`");
        }
    }

    for (const std::string& id : cfg.enabled_rules)
        if (cfg.disabled_rules.count(id))
            throw ConfigError("config: rule `" + id + "` is both enabled and disabled");
    return cfg;
}

} // namespace misrust
