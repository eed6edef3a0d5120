#pragma once

// Guideline registry: the 179-entry classification dataset, its aggregate
// validation, filtered queries, and per-unit effective rule sets.

#include "misrust/options.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace misrust {

enum class GuidelineClass {
    C1_StdLibOnly,        // rationale tied to the C++ standard library
    C2_NoSuchFeature,     // the C++ feature has no counterpart
    C3_SatisfiedByLanguage,
    C4_RequiredInUnsafe,  // safe_required=true marks the subset needed in safe code too
    C5_NeedsAdaptation,
};

enum class GuidelineKind { Rule, Directive };
enum class Decidability { Automatic, Manual, Hybrid };
enum class Severity { Mandatory, Required, Advisory };

inline const char* to_string(GuidelineClass c) {
    switch (c) {
        case GuidelineClass::C1_StdLibOnly: return "C1";
        case GuidelineClass::C2_NoSuchFeature: return "C2";
        case GuidelineClass::C3_SatisfiedByLanguage: return "C3";
        case GuidelineClass::C4_RequiredInUnsafe: return "C4";
        case GuidelineClass::C5_NeedsAdaptation: return "C5";
    }
    return "?";
}
inline const char* to_string(GuidelineKind k) {
    return k == GuidelineKind::Rule ? "rule" : "directive";
}
inline const char* to_string(Decidability d) {
    switch (d) {
        case Decidability::Automatic: return "automatic";
        case Decidability::Manual: return "manual";
        case Decidability::Hybrid: return "hybrid";
    }
    return "?";
}
inline const char* to_string(Severity s) {
    switch (s) {
        case Severity::Mandatory: return "mandatory";
        case Severity::Required: return "required";
        case Severity::Advisory: return "advisory";
    }
    return "?";
}

struct Guideline {
    std::string id;
    GuidelineKind kind = GuidelineKind::Rule;
    std::string title_summary;
    std::string topic;
    GuidelineClass guideline_class = GuidelineClass::C4_RequiredInUnsafe;
    bool safe_required = false; // meaningful only for C4
    Decidability decidability = Decidability::Manual;
    Severity severity = Severity::Required;
    std::optional<std::string> adaptation_note;
    std::optional<std::string> check_id;

    bool relevant() const {
        return guideline_class == GuidelineClass::C4_RequiredInUnsafe ||
               guideline_class == GuidelineClass::C5_NeedsAdaptation;
    }
};

struct RegistryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Registry {
    std::vector<Guideline> guidelines;
    std::string dataset_version;
    std::string source_attribution;

    const Guideline* find(const std::string& id) const {
        for (const Guideline& g : guidelines)
            if (g.id == id)
                return &g;
        return nullptr;
    }

    std::set<std::string> topics() const {
        std::set<std::string> out;
        for (const Guideline& g : guidelines)
            out.insert(g.topic);
        return out;
    }
};

struct LoadResult {
    Registry registry;
    std::vector<std::string> warnings;
};

namespace detail {

inline GuidelineClass parse_class(const std::string& s, const std::string& where) {
    if (s == "C1") return GuidelineClass::C1_StdLibOnly;
    if (s == "C2") return GuidelineClass::C2_NoSuchFeature;
    if (s == "C3") return GuidelineClass::C3_SatisfiedByLanguage;
    if (s == "C4") return GuidelineClass::C4_RequiredInUnsafe;
    if (s == "C5") return GuidelineClass::C5_NeedsAdaptation;
    throw RegistryError(where + ": unknown class `" + s + "`");
}
inline GuidelineKind parse_kind(const std::string& s, const std::string& where) {
    if (s == "rule") return GuidelineKind::Rule;
    if (s == "directive") return GuidelineKind::Directive;
    throw RegistryError(where + ": unknown kind `" + s + "`");
}
inline Decidability parse_decidability(const std::string& s, const std::string& where) {
    if (s == "automatic") return Decidability::Automatic;
    if (s == "manual") return Decidability::Manual;
    if (s == "hybrid") return Decidability::Hybrid;
    throw RegistryError(where + ": unknown decidability `" + s + "`");
}
inline Severity parse_severity(const std::string& s, const std::string& where) {
    if (s == "mandatory") return Severity::Mandatory;
    if (s == "required") return Severity::Required;
    if (s == "advisory") return Severity::Advisory;
    throw RegistryError(where + ": unknown severity `" + s + "`");
}

} // namespace detail

/// Parse a registry dataset. Throws RegistryError on malformed entries or
/// duplicate ids; a total count other than 179 only produces a warning.
inline LoadResult load_registry(const std::string& json_text,
                                std::string source_attribution = "dataset") {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw RegistryError(std::string("dataset is not valid JSON: ") + e.what());
    }
    if (!doc.is_object())
        throw RegistryError("dataset top level must be an object");
    for (auto it = doc.begin(); it != doc.end(); ++it)
        if (it.key() != "dataset_version" && it.key() != "guidelines")
            throw RegistryError("dataset: unknown top-level field `" + it.key() + "`");
    if (!doc.contains("dataset_version") || !doc["dataset_version"].is_string())
        throw RegistryError("dataset: missing string field `dataset_version`");
    if (!doc.contains("guidelines") || !doc["guidelines"].is_array())
        throw RegistryError("dataset: missing array field `guidelines`");

    static const char* fields[] = {"id",    "kind",        "title_summary", "topic",
                                   "class", "safe_required", "decidability", "severity",
                                   "adaptation_note", "check_id"};

    LoadResult out;
    out.registry.dataset_version = doc["dataset_version"].get<std::string>();
    out.registry.source_attribution = std::move(source_attribution);

    std::set<std::string> seen_ids;
    std::size_t idx = 0;
    for (const auto& e : doc["guidelines"]) {
        std::string where = "guideline entry " + std::to_string(idx);
        if (!e.is_object())
            throw RegistryError(where + ": not an object");
        for (auto it = e.begin(); it != e.end(); ++it) {
            bool known = false;
            for (const char* f : fields)
                known = known || it.key() == f;
            if (!known)
                throw RegistryError(where + ": unknown field `" + it.key() + "`");
        }
        for (const char* f : fields)
            if (!e.contains(f))
                throw RegistryError(where + ": missing field `" + std::string(f) + "`");

        auto str_field = [&](const char* f) -> std::string {
            if (!e[f].is_string())
                throw RegistryError(where + ": field `" + std::string(f) + "` must be a string");
            return e[f].get<std::string>();
        };

        Guideline g;
        g.id = str_field("id");
        where += " (" + g.id + ")";
        g.kind = detail::parse_kind(str_field("kind"), where);
        g.title_summary = str_field("title_summary");
        g.topic = str_field("topic");
        g.guideline_class = detail::parse_class(str_field("class"), where);
        if (!e["safe_required"].is_boolean())
            throw RegistryError(where + ": field `safe_required` must be a boolean");
        g.safe_required = e["safe_required"].get<bool>();
        g.decidability = detail::parse_decidability(str_field("decidability"), where);
        g.severity = detail::parse_severity(str_field("severity"), where);
        if (!e["adaptation_note"].is_null()) {
            if (!e["adaptation_note"].is_string())
                throw RegistryError(where + ": field `adaptation_note` must be string or null");
            g.adaptation_note = e["adaptation_note"].get<std::string>();
        }
        if (!e["check_id"].is_null()) {
            if (!e["check_id"].is_string())
                throw RegistryError(where + ": field `check_id` must be string or null");
            g.check_id = e["check_id"].get<std::string>();
        }

        if (g.safe_required && g.guideline_class != GuidelineClass::C4_RequiredInUnsafe)
            throw RegistryError(where + ": safe_required=true requires class C4");
        if (g.guideline_class == GuidelineClass::C5_NeedsAdaptation && !g.adaptation_note)
            throw RegistryError(where + ": class C5 requires an adaptation_note");
        if (g.check_id && g.decidability == Decidability::Manual)
            throw RegistryError(where + ": a checked guideline cannot be decidability=manual");
        if (!seen_ids.insert(g.id).second)
            throw RegistryError(where + ": duplicate id `" + g.id + "`");

        out.registry.guidelines.push_back(std::move(g));
        ++idx;
    }

    if (out.registry.guidelines.size() != 179)
        out.warnings.push_back("dataset holds " + std::to_string(out.registry.guidelines.size()) +
                               " guidelines, expected 179");
    return out;
}

// ---- aggregate validation ----------------------------------------------------

struct ValidationCheck {
    std::string constraint;
    std::string expected;
    std::string actual;
    bool pass = false;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;

    bool all_pass() const {
        return std::all_of(checks.begin(), checks.end(),
                           [](const ValidationCheck& c) { return c.pass; });
    }
};

/// Checks every published aggregate: class counts, their derived identities,
/// and the per-topic relevant/total distribution. Pure evaluation; failures
/// are reported, never thrown.
inline ValidationReport validate_aggregates(const Registry& reg) {
    ValidationReport report;
    auto count = [&](auto&& pred) {
        return static_cast<long>(std::count_if(reg.guidelines.begin(), reg.guidelines.end(), pred));
    };
    auto expect = [&](std::string name, long expected, long actual) {
        report.checks.push_back({std::move(name), std::to_string(expected),
                                 std::to_string(actual), expected == actual});
    };

    long c1 = count([](const Guideline& g) { return g.guideline_class == GuidelineClass::C1_StdLibOnly; });
    long c2 = count([](const Guideline& g) { return g.guideline_class == GuidelineClass::C2_NoSuchFeature; });
    long c3 = count([](const Guideline& g) { return g.guideline_class == GuidelineClass::C3_SatisfiedByLanguage; });
    long c4 = count([](const Guideline& g) { return g.guideline_class == GuidelineClass::C4_RequiredInUnsafe; });
    long c5 = count([](const Guideline& g) { return g.guideline_class == GuidelineClass::C5_NeedsAdaptation; });
    long c6 = count([](const Guideline& g) {
        return g.guideline_class == GuidelineClass::C4_RequiredInUnsafe && g.safe_required;
    });

    expect("total guidelines", 179, static_cast<long>(reg.guidelines.size()));
    expect("|C1|", 15, c1);
    expect("|C2|", 42, c2);
    expect("|C1 u C2| (not applicable)", 57, c1 + c2);
    expect("|C3|", 53, c3);
    expect("|C4|", 58, c4);
    expect("|C4 & safe_required| (C6)", 22, c6);
    expect("|C5|", 11, c5);
    expect("|C4 u C5| (still relevant)", 69, c4 + c5);
    expect("applicable |C3 u C4 u C5|", 122, c3 + c4 + c5);
    expect("as-is applicable (122 - 11)", 111, c3 + c4);
    expect("auto-satisfied in safe (53 + 36)", 89, c3 + (c4 - c6));
    expect("class partition covers all", static_cast<long>(reg.guidelines.size()),
           c1 + c2 + c3 + c4 + c5);

    {
        double ratio = (c3 + c4) > 0 ? static_cast<double>(c3) / static_cast<double>(c3 + c4) : 0.0;
        bool pass = std::abs(ratio - 0.4775) <= 0.0005;
        std::ostringstream actual;
        actual.precision(4);
        actual << std::fixed << ratio;
        report.checks.push_back({"auto-enforced share 53/111", "0.4775 +/- 0.0005", actual.str(), pass});
    }

    static const struct { const char* topic; long relevant; long total; } topic_rows[] = {
        {"Language independent issues", 5, 10}, {"General principles", 4, 4},
        {"Lexical conventions", 1, 12},         {"Basic concepts", 13, 21},
        {"Standard conversions", 5, 9},         {"Expressions", 17, 24},
        {"Statements", 1, 11},                  {"Declarations", 2, 8},
        {"Declarators", 3, 5},                  {"Classes", 1, 4},
        {"Derived classes", 1, 6},              {"Member access control", 1, 1},
        {"Special member functions", 1, 8},     {"Exception handling", 2, 8},
        {"Preprocessing directives", 6, 16},    {"Language support library", 4, 12},
        {"Diagnostics library", 1, 2},          {"Algorithms library", 1, 5},
    };
    long numerator_sum = 0;
    long denominator_sum = 0;
    for (const auto& row : topic_rows) {
        long rel = count([&](const Guideline& g) { return g.topic == row.topic && g.relevant(); });
        long tot = count([&](const Guideline& g) { return g.topic == row.topic; });
        expect(std::string("topic relevant: ") + row.topic, row.relevant, rel);
        expect(std::string("topic total: ") + row.topic, row.total, tot);
        numerator_sum += rel;
        denominator_sum += tot;
    }
    expect("topic relevant sum", 69, numerator_sum);
    expect("topic totals sum (tabulated topics)", 166, denominator_sum);

    return report;
}

// ---- queries --------------------------------------------------------------------

struct QueryFilter {
    std::optional<GuidelineClass> guideline_class;
    std::optional<bool> safe_required;
    std::optional<std::string> topic;
    std::optional<Decidability> decidability;
    std::optional<GuidelineKind> kind;
};

/// Entries matching all present filter fields, in registry order.
/// Throws std::invalid_argument for a topic name absent from the registry.
inline std::vector<const Guideline*> query(const Registry& reg, const QueryFilter& filter) {
    if (filter.topic) {
        auto topics = reg.topics();
        if (!topics.count(*filter.topic)) {
            std::string msg = "unknown topic `" + *filter.topic + "`; valid topics:";
            for (const auto& t : topics)
                msg += " `" + t + "`";
            throw std::invalid_argument(msg);
        }
    }
    std::vector<const Guideline*> out;
    for (const Guideline& g : reg.guidelines) {
        if (filter.guideline_class && g.guideline_class != *filter.guideline_class)
            continue;
        if (filter.safe_required && g.safe_required != *filter.safe_required)
            continue;
        if (filter.topic && g.topic != *filter.topic)
            continue;
        if (filter.decidability && g.decidability != *filter.decidability)
            continue;
        if (filter.kind && g.kind != *filter.kind)
            continue;
        out.push_back(&g);
    }
    return out;
}

// ---- profiles and effective rule sets ----------------------------------------------

enum class ProfileName { Safe, Unsafe, All, Custom };

inline const char* to_string(ProfileName p) {
    switch (p) {
        case ProfileName::Safe: return "safe";
        case ProfileName::Unsafe: return "unsafe";
        case ProfileName::All: return "all";
        case ProfileName::Custom: return "custom";
    }
    return "?";
}

inline std::optional<ProfileName> profile_from_string(const std::string& s) {
    if (s == "safe") return ProfileName::Safe;
    if (s == "unsafe") return ProfileName::Unsafe;
    if (s == "all") return ProfileName::All;
    if (s == "custom") return ProfileName::Custom;
    return std::nullopt;
}

struct Profile {
    ProfileName name = ProfileName::All;
    std::set<std::string> enabled_overrides;
    std::set<std::string> disabled_overrides;
    CheckOptions options;
};

/// Disjoint partition of all guideline ids for one compilation unit.
struct EffectiveRuleSet {
    std::vector<std::string> active_checks;
    std::vector<std::string> guaranteed_by_language;
    std::vector<std::string> manual_review;
    std::vector<std::string> not_applicable;

    std::size_t size() const {
        return active_checks.size() + guaranteed_by_language.size() + manual_review.size() +
               not_applicable.size();
    }
};

/// Class semantics: C1/C2 never apply; C3 is guaranteed by the language; the
/// 36 gated C4 rules are guaranteed only while the unit stays in the safe
/// subset; C4-with-safe_required and C5 stay active regardless. Overrides are
/// applied last.
inline EffectiveRuleSet effective_rule_set(const Registry& reg, const Profile& profile,
                                           bool unit_has_unsafe) {
    EffectiveRuleSet out;
    auto activate = [&](const Guideline& g) {
        if (g.check_id)
            out.active_checks.push_back(g.id);
        else
            out.manual_review.push_back(g.id);
    };
    for (const Guideline& g : reg.guidelines) {
        if (profile.disabled_overrides.count(g.id)) {
            out.not_applicable.push_back(g.id);
            continue;
        }
        if (profile.enabled_overrides.count(g.id)) {
            activate(g);
            continue;
        }
        switch (g.guideline_class) {
            case GuidelineClass::C1_StdLibOnly:
            case GuidelineClass::C2_NoSuchFeature:
                out.not_applicable.push_back(g.id);
                break;
            case GuidelineClass::C3_SatisfiedByLanguage:
                out.guaranteed_by_language.push_back(g.id);
                break;
            case GuidelineClass::C4_RequiredInUnsafe:
                if (!g.safe_required) {
                    if (!unit_has_unsafe) {
                        out.guaranteed_by_language.push_back(g.id);
                    } else if (profile.name == ProfileName::Safe) {
                        // gated rules are not activated under the safe profile
                        out.manual_review.push_back(g.id);
                    } else {
                        activate(g);
                    }
                } else {
                    activate(g);
                }
                break;
            case GuidelineClass::C5_NeedsAdaptation:
                activate(g);
                break;
        }
    }
    return out;
}

} // namespace misrust
