#ifndef CBMO_MODEL_DSL_HPP
#define CBMO_MODEL_DSL_HPP

// Line-oriented business-model text format (.cbm):
//
//   # comment
//   model <name>
//   element <ConceptId>
//   relation <subject> <verb> <object> [to <target>]
//   meta <key> <value>
//
// "relation CH delv VP to TC" denotes the delv_to verb. Only whole-line
// comments are recognised; '#' inside a name or meta value is kept.

#include <cbmo/error.hpp>
#include <cbmo/ontology.hpp>
#include <cbmo/text.hpp>

#include <algorithm>
#include <string>
#include <string_view>
#include <tuple>

namespace cbmo {

namespace detail {

inline ConceptId parse_concept_token(std::string_view token, std::size_t line)
{
    if (auto id = concept_from_symbol(token)) {
        return *id;
    }
    throw ParseError(line, ParseErrorKind::UnknownConcept, "unknown concept '" + std::string(token) + "'");
}

inline RelationAssertion parse_relation_line(const std::vector<std::string_view>& tokens, std::size_t line)
{
    if (tokens.size() != 4 && tokens.size() != 6) {
        throw ParseError(line, ParseErrorKind::BadArity,
                         "relation expects '<subject> <verb> <object> [to <target>]'");
    }
    RelationAssertion rel;
    rel.subject = parse_concept_token(tokens[1], line);
    auto verb = verb_from_symbol(tokens[2]);
    if (!verb) {
        throw ParseError(line, ParseErrorKind::UnknownVerb, "unknown verb '" + std::string(tokens[2]) + "'");
    }
    rel.verb = *verb;
    rel.object = parse_concept_token(tokens[3], line);

    if (tokens.size() == 6) {
        if (tokens[4] != "to") {
            throw ParseError(line, ParseErrorKind::Syntax, "expected 'to' before target, found '"
                                                               + std::string(tokens[4]) + "'");
        }
        if (rel.verb != RelationVerb::delv && rel.verb != RelationVerb::delv_to) {
            throw ParseError(line, ParseErrorKind::BadArity,
                             "verb '" + std::string(symbol(rel.verb)) + "' takes no target");
        }
        rel.verb = RelationVerb::delv_to;
        rel.target = parse_concept_token(tokens[5], line);
    } else if (rel.verb == RelationVerb::delv_to) {
        throw ParseError(line, ParseErrorKind::BadArity, "delv_to requires 'to <target>'");
    }
    return rel;
}

/// Position in schema order, with non-schema relations after all schema
/// ones and ordered by their symbols.
inline auto relation_sort_key(const RelationAssertion& rel, const ConceptSchema& schema)
{
    auto index = schema.index_of(rel).value_or(schema.assertions.size());
    std::string_view target = rel.target ? symbol(*rel.target) : std::string_view{};
    return std::tuple(index, symbol(rel.subject), symbol(rel.verb), symbol(rel.object), target);
}

} // namespace detail

/// Parses .cbm text. Fails fast with a ParseError on the first offending
/// line. Relations may reference elements that are not declared; that is a
/// validation concern, not a syntax one.
inline BusinessModelInstance parse_model(std::string_view source)
{
    BusinessModelInstance instance;
    bool seen_model = false;
    auto lines = text::split_lines(source);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t line = i + 1;
        auto content = text::trim(lines[i]);
        if (content.empty() || content.front() == '#') {
            continue;
        }
        auto tokens = text::split_whitespace(content);
        auto keyword = tokens.front();

        if (keyword == "model") {
            if (seen_model) {
                throw ParseError(line, ParseErrorKind::Syntax, "duplicate 'model' statement");
            }
            seen_model = true;
            instance.name = std::string(text::rest_after_tokens(content, 1));
        } else if (keyword == "element") {
            if (tokens.size() != 2) {
                throw ParseError(line, ParseErrorKind::BadArity, "element expects exactly one concept");
            }
            auto id = detail::parse_concept_token(tokens[1], line);
            if (!instance.elements.insert(id).second) {
                throw ParseError(line, ParseErrorKind::DuplicateElement,
                                 "element " + std::string(symbol(id)) + " declared twice");
            }
        } else if (keyword == "relation") {
            instance.relations.push_back(detail::parse_relation_line(tokens, line));
        } else if (keyword == "meta") {
            if (tokens.size() < 3) {
                throw ParseError(line, ParseErrorKind::BadArity, "meta expects '<key> <value>'");
            }
            std::string key(tokens[1]);
            if (instance.metadata.count(key) > 0) {
                throw ParseError(line, ParseErrorKind::Syntax, "duplicate meta key '" + key + "'");
            }
            instance.metadata.emplace(std::move(key), std::string(text::rest_after_tokens(content, 2)));
        } else {
            throw ParseError(line, ParseErrorKind::Syntax, "unknown statement '" + std::string(keyword) + "'");
        }
    }
    return instance;
}

/// Canonical text: model line, elements by symbol, relations in schema
/// order (then lexicographic), metadata by key. Equal instances serialize
/// to identical bytes.
inline std::string serialize_model(const BusinessModelInstance& instance,
                                   const ConceptSchema& schema = canonical_schema())
{
    std::string out = "model";
    if (!instance.name.empty()) {
        out.append(" ").append(instance.name);
    }
    out.append("\n");

    std::vector<std::string_view> symbols;
    for (auto id : instance.elements) {
        symbols.push_back(symbol(id));
    }
    std::sort(symbols.begin(), symbols.end());
    for (auto s : symbols) {
        out.append("element ").append(s).append("\n");
    }

    auto relations = instance.relations;
    std::stable_sort(relations.begin(), relations.end(), [&](const auto& a, const auto& b) {
        return detail::relation_sort_key(a, schema) < detail::relation_sort_key(b, schema);
    });
    for (const auto& rel : relations) {
        out.append("relation ").append(to_string(rel)).append("\n");
    }

    for (const auto& [key, value] : instance.metadata) {
        out.append("meta ").append(key).append(" ").append(value).append("\n");
    }
    return out;
}

} // namespace cbmo

#endif // CBMO_MODEL_DSL_HPP
