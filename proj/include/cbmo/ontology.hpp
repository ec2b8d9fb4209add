#ifndef CBMO_ONTOLOGY_HPP
#define CBMO_ONTOLOGY_HPP

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace cbmo {

// ---------------------------------------------------------------------------
// Concepts
// ---------------------------------------------------------------------------

/// The closed set of business-model concepts. The nine Osterwalder blocks,
/// the five customer-cognition blocks, plus Target Customer sub-concepts
/// (CQ, CR) and the Profit output.
enum class ConceptId : std::uint8_t {
    VP, TC, CAP, CH, TCR, CQ, CR, VC, PRT, INF, EM, EN, TH, PRF, RV, CS, PF,
};

inline constexpr std::size_t concept_count = 17;

inline constexpr std::array<ConceptId, concept_count> all_concepts = {
    ConceptId::VP, ConceptId::TC, ConceptId::CAP, ConceptId::CH, ConceptId::TCR, ConceptId::CQ,
    ConceptId::CR, ConceptId::VC, ConceptId::PRT, ConceptId::INF, ConceptId::EM, ConceptId::EN,
    ConceptId::TH, ConceptId::PRF, ConceptId::RV, ConceptId::CS, ConceptId::PF,
};

namespace detail {

struct ConceptInfo {
    std::string_view symbol;
    std::string_view name;
};

inline constexpr std::array<ConceptInfo, concept_count> concept_table = {{
    {"VP", "Value Proposition"},
    {"TC", "Target Customer"},
    {"CAP", "Capability"},
    {"CH", "Channel"},
    {"TCR", "Relationship"},
    {"CQ", "Customer Segment"},
    {"CR", "Criteria"},
    {"VC", "Value Configuration"},
    {"PRT", "Partnership"},
    {"INF", "Information and Knowledge"},
    {"EM", "Emotions"},
    {"EN", "Environment"},
    {"TH", "Thoughts"},
    {"PRF", "Preferences"},
    {"RV", "Revenue"},
    {"CS", "Cost"},
    {"PF", "Profit"},
}};

} // namespace detail

constexpr std::string_view symbol(ConceptId id) noexcept
{
    return detail::concept_table[static_cast<std::size_t>(id)].symbol;
}

constexpr std::string_view display_name(ConceptId id) noexcept
{
    return detail::concept_table[static_cast<std::size_t>(id)].name;
}

/// Resolves a concept symbol. "CP" is accepted as an alias of CAP.
constexpr std::optional<ConceptId> concept_from_symbol(std::string_view text) noexcept
{
    if (text == "CP") {
        return ConceptId::CAP;
    }
    for (ConceptId id : all_concepts) {
        if (symbol(id) == text) {
            return id;
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Relation verbs
// ---------------------------------------------------------------------------

enum class RelationVerb : std::uint8_t {
    rep, comp, base, recv, delv, delv_to, conc, estab, cont, set_of, allo, prov, rely, has, sup, inf_on, inf_of,
};

inline constexpr std::size_t verb_count = 17;

inline constexpr std::array<RelationVerb, verb_count> all_verbs = {
    RelationVerb::rep, RelationVerb::comp, RelationVerb::base, RelationVerb::recv, RelationVerb::delv,
    RelationVerb::delv_to, RelationVerb::conc, RelationVerb::estab, RelationVerb::cont, RelationVerb::set_of,
    RelationVerb::allo, RelationVerb::prov, RelationVerb::rely, RelationVerb::has, RelationVerb::sup,
    RelationVerb::inf_on, RelationVerb::inf_of,
};

namespace detail {

struct VerbInfo {
    std::string_view symbol;
    std::string_view gloss;
};

inline constexpr std::array<VerbInfo, verb_count> verb_table = {{
    {"rep", "represents value for"},
    {"comp", "is composed of"},
    {"base", "is based on"},
    {"recv", "it receives a"},
    {"delv", "it delivers a"},
    {"delv_to", "it delivers to a"},
    {"conc", "it concerns a"},
    {"estab", "it is established with"},
    {"cont", "it contributes to"},
    {"set_of", "it set of"},
    {"allo", "it allows to provide the"},
    {"prov", "it provides"},
    {"rely", "it relies on"},
    {"has", "it has a type"},
    {"sup", "it supports the"},
    {"inf_on", "it influences on"},
    {"inf_of", "it influences of"},
}};

} // namespace detail

constexpr std::string_view symbol(RelationVerb verb) noexcept
{
    return detail::verb_table[static_cast<std::size_t>(verb)].symbol;
}

constexpr std::string_view gloss(RelationVerb verb) noexcept
{
    return detail::verb_table[static_cast<std::size_t>(verb)].gloss;
}

/// Resolves a verb symbol. "con" aliases conc; the hyphenated spellings
/// (inf-on, Set-of, ...) are accepted alongside the underscore forms.
inline std::optional<RelationVerb> verb_from_symbol(std::string_view text)
{
    if (text == "con") {
        return RelationVerb::conc;
    }
    std::string normalized(text);
    std::replace(normalized.begin(), normalized.end(), '-', '_');
    if (normalized == "Set_of") {
        normalized = "set_of";
    }
    for (RelationVerb verb : all_verbs) {
        if (symbol(verb) == normalized) {
            return verb;
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Assertions, schema, instances
// ---------------------------------------------------------------------------

/// subject verb object [to target]. target is set iff verb is delv_to.
struct RelationAssertion {
    ConceptId subject{};
    RelationVerb verb{};
    ConceptId object{};
    std::optional<ConceptId> target;

    bool well_formed() const noexcept { return target.has_value() == (verb == RelationVerb::delv_to); }

    friend auto operator<=>(const RelationAssertion&, const RelationAssertion&) = default;
};

inline std::string to_string(const RelationAssertion& rel)
{
    // delv_to is spelled "delv X to Y" in the model notation.
    std::string_view verb = rel.verb == RelationVerb::delv_to ? "delv" : symbol(rel.verb);
    std::string out;
    out.append(symbol(rel.subject)).append(" ").append(verb).append(" ").append(symbol(rel.object));
    if (rel.target) {
        out.append(" to ").append(symbol(*rel.target));
    }
    return out;
}

struct ConceptSchema {
    std::vector<ConceptId> concepts;
    std::vector<RelationVerb> verbs;
    std::vector<RelationAssertion> assertions;
    /// Model inputs in column order; the first baseline_input_count are the
    /// original nine-block ontology.
    std::vector<ConceptId> input_elements;
    ConceptId output_element = ConceptId::PF;

    static constexpr std::size_t baseline_input_count = 9;

    bool contains(const RelationAssertion& rel) const
    {
        return std::find(assertions.begin(), assertions.end(), rel) != assertions.end();
    }

    /// Position of rel in the assertion list, or nullopt.
    std::optional<std::size_t> index_of(const RelationAssertion& rel) const
    {
        auto it = std::find(assertions.begin(), assertions.end(), rel);
        if (it == assertions.end()) {
            return std::nullopt;
        }
        return static_cast<std::size_t>(it - assertions.begin());
    }

    std::vector<ConceptId> baseline_inputs() const
    {
        auto count = std::min(baseline_input_count, input_elements.size());
        return {input_elements.begin(), input_elements.begin() + static_cast<std::ptrdiff_t>(count)};
    }

    /// Input and output elements; a valid instance must declare all of them.
    std::vector<ConceptId> required_elements() const
    {
        std::vector<ConceptId> out = input_elements;
        out.push_back(output_element);
        return out;
    }
};

namespace detail {

inline ConceptSchema build_canonical_schema()
{
    using C = ConceptId;
    using V = RelationVerb;
    ConceptSchema schema;
    schema.concepts.assign(all_concepts.begin(), all_concepts.end());
    schema.verbs.assign(all_verbs.begin(), all_verbs.end());
    schema.assertions = {
        {C::VP, V::rep, C::TC, {}},
        {C::VP, V::base, C::CAP, {}},
        {C::TC, V::recv, C::VP, {}},
        {C::TC, V::comp, C::CR, {}},
        {C::CH, V::delv_to, C::VP, C::TC},
        {C::TCR, V::conc, C::VP, {}},
        {C::TCR, V::estab, C::TC, {}},
        {C::TCR, V::cont, C::CQ, {}},
        {C::CAP, V::allo, C::VP, {}},
        {C::VC, V::prov, C::VP, {}},
        {C::VC, V::rely, C::CAP, {}},
        {C::PRT, V::sup, C::VP, {}},
        {C::PRT, V::rely, C::CAP, {}},
        {C::INF, V::inf_on, C::PRF, {}},
        {C::INF, V::inf_of, C::PRF, {}},
        {C::EM, V::estab, C::TH, {}},
        {C::EN, V::inf_on, C::PRF, {}},
        {C::TH, V::inf_on, C::PRF, {}},
        {C::TH, V::inf_on, C::INF, {}},
        {C::TH, V::inf_of, C::INF, {}},
        {C::PRF, V::inf_of, C::INF, {}},
        {C::PRF, V::inf_of, C::EM, {}},
        {C::PRF, V::inf_of, C::EN, {}},
        {C::PRF, V::inf_of, C::TH, {}},
        {C::CS, V::estab, C::VC, {}},
        {C::CS, V::estab, C::CAP, {}},
        {C::RV, V::rely, C::CQ, {}},
        {C::PF, V::rely, C::RV, {}},
        {C::PF, V::rely, C::CS, {}},
    };
    schema.input_elements = {
        C::CAP, C::PRT, C::VP, C::VC, C::TC, C::TCR, C::CH, C::RV, C::CS,
        C::INF, C::EM, C::EN, C::TH, C::PRF,
    };
    schema.output_element = C::PF;
    return schema;
}

} // namespace detail

/// The fixed cognitive business-model ontology (29 assertions, 14 inputs).
inline const ConceptSchema& canonical_schema()
{
    static const ConceptSchema schema = detail::build_canonical_schema();
    return schema;
}

struct BusinessModelInstance {
    std::string name;
    std::set<ConceptId> elements;
    std::vector<RelationAssertion> relations;
    std::map<std::string, std::string> metadata;

    /// Structural equality: relations compare as a multiset.
    friend bool operator==(const BusinessModelInstance& lhs, const BusinessModelInstance& rhs)
    {
        if (lhs.name != rhs.name || lhs.elements != rhs.elements || lhs.metadata != rhs.metadata
            || lhs.relations.size() != rhs.relations.size()) {
            return false;
        }
        auto a = lhs.relations;
        auto b = rhs.relations;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        return a == b;
    }
};

/// Every schema concept declared and every schema assertion present.
inline BusinessModelInstance make_full_instance(const ConceptSchema& schema, std::string name = "canonical")
{
    BusinessModelInstance instance;
    instance.name = std::move(name);
    instance.elements.insert(schema.concepts.begin(), schema.concepts.end());
    instance.relations = schema.assertions;
    return instance;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

/// Declaration order is the report ordering.
enum class ViolationCode : std::uint8_t {
    MissingElement,
    UnknownRelation,
    MissingRequiredRelation,
    DanglingReference,
    MalformedAssertion,
};

constexpr std::string_view to_string(ViolationCode code) noexcept
{
    switch (code) {
    case ViolationCode::MissingElement: return "MissingElement";
    case ViolationCode::UnknownRelation: return "UnknownRelation";
    case ViolationCode::MissingRequiredRelation: return "MissingRequiredRelation";
    case ViolationCode::DanglingReference: return "DanglingReference";
    case ViolationCode::MalformedAssertion: return "MalformedAssertion";
    }
    return "Unknown";
}

struct Violation {
    ViolationCode code{};
    ConceptId subject{};
    std::string detail;

    friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidationReport {
    bool valid = true;
    std::vector<Violation> violations;

    friend bool operator==(const ValidationReport&, const ValidationReport&) = default;

    std::size_t count(ViolationCode code) const
    {
        return static_cast<std::size_t>(std::count_if(
            violations.begin(), violations.end(), [code](const Violation& v) { return v.code == code; }));
    }

    bool contains(ViolationCode code, ConceptId subject) const
    {
        return std::any_of(violations.begin(), violations.end(),
                           [&](const Violation& v) { return v.code == code && v.subject == subject; });
    }
};

/// Checks an instance against a schema. All problems are collected; nothing
/// throws. Violations are ordered by code, then subject symbol; ties keep
/// discovery order (schema order for missing relations, instance order
/// otherwise).
inline ValidationReport validate_instance(const BusinessModelInstance& instance, const ConceptSchema& schema)
{
    ValidationReport report;
    auto& out = report.violations;
    auto declared = [&](ConceptId id) { return instance.elements.count(id) > 0; };

    for (ConceptId id : schema.required_elements()) {
        if (!declared(id)) {
            out.push_back({ViolationCode::MissingElement, id,
                           std::string(symbol(id)) + " (" + std::string(display_name(id)) + ") is not declared"});
        }
    }

    for (const auto& rel : instance.relations) {
        if (!rel.well_formed()) {
            out.push_back({ViolationCode::MalformedAssertion, rel.subject,
                           to_string(rel) + ": target is required for delv_to and only for delv_to"});
            continue;
        }
        if (!schema.contains(rel)) {
            out.push_back({ViolationCode::UnknownRelation, rel.subject, to_string(rel) + " is not a schema assertion"});
        }
        std::vector<ConceptId> missing;
        for (auto endpoint : {std::optional<ConceptId>(rel.subject), std::optional<ConceptId>(rel.object), rel.target}) {
            if (endpoint && !declared(*endpoint)
                && std::find(missing.begin(), missing.end(), *endpoint) == missing.end()) {
                missing.push_back(*endpoint);
            }
        }
        if (!missing.empty()) {
            std::string names;
            for (auto id : missing) {
                names.append(names.empty() ? "" : ", ").append(symbol(id));
            }
            out.push_back({ViolationCode::DanglingReference, rel.subject,
                           to_string(rel) + " references undeclared " + names});
        }
    }

    for (const auto& required : schema.assertions) {
        bool endpoints_declared = declared(required.subject) && declared(required.object)
                                  && (!required.target || declared(*required.target));
        if (!endpoints_declared) {
            continue;
        }
        if (std::find(instance.relations.begin(), instance.relations.end(), required) == instance.relations.end()) {
            out.push_back({ViolationCode::MissingRequiredRelation, required.subject,
                           to_string(required) + " is required by the schema"});
        }
    }

    std::stable_sort(out.begin(), out.end(), [](const Violation& a, const Violation& b) {
        return std::tuple(a.code, symbol(a.subject)) < std::tuple(b.code, symbol(b.subject));
    });
    report.valid = out.empty();
    return report;
}

} // namespace cbmo

#endif // CBMO_ONTOLOGY_HPP
