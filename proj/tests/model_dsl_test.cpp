#include <cbmo/model_dsl.hpp>

#include "generators.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace cbmo;

namespace {

ParseError parse_error(std::string_view source)
{
    try {
        parse_model(source);
    } catch (const ParseError& e) {
        return e;
    }
    ADD_FAILURE() << "no ParseError for: " << source;
    return ParseError(0, ParseErrorKind::Syntax, "");
}

} // namespace

TEST(ParseModel, SmallInstance)
{
    auto m = parse_model("model m\nelement VP\nelement TC\nrelation VP rep TC");
    EXPECT_EQ(m.name, "m");
    EXPECT_EQ(m.elements.size(), 2u);
    ASSERT_EQ(m.relations.size(), 1u);
    EXPECT_EQ(m.relations[0], (RelationAssertion{ConceptId::VP, RelationVerb::rep, ConceptId::TC, std::nullopt}));
}

TEST(ParseModel, DelvWithTargetBecomesDelvTo)
{
    auto m = parse_model("relation CH delv VP to TC");
    ASSERT_EQ(m.relations.size(), 1u);
    EXPECT_EQ(m.relations[0].verb, RelationVerb::delv_to);
    EXPECT_EQ(m.relations[0].target, ConceptId::TC);
    EXPECT_TRUE(canonical_schema().contains(m.relations[0]));
}

TEST(ParseModel, CommentsBlankLinesAndCrLf)
{
    auto m = parse_model("# header\r\n\r\nmodel  acme corp \r\n  element PF\r\nmeta source annual report 2020\r\n");
    EXPECT_EQ(m.name, "acme corp");
    EXPECT_EQ(m.elements, std::set<ConceptId>{ConceptId::PF});
    EXPECT_EQ(m.metadata.at("source"), "annual report 2020");
}

TEST(ParseModel, AliasesResolve)
{
    auto a = parse_model("element CP\nrelation TCR con VP\nrelation INF inf-on PRF");
    auto b = parse_model("element CAP\nrelation TCR conc VP\nrelation INF inf_on PRF");
    EXPECT_EQ(a, b);
}

TEST(ParseModel, Errors)
{
    auto e = parse_error("element XX");
    EXPECT_EQ(e.line(), 1u);
    EXPECT_EQ(e.kind(), ParseErrorKind::UnknownConcept);

    e = parse_error("model m\n\nrelation VP likes TC");
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.kind(), ParseErrorKind::UnknownVerb);

    e = parse_error("element VP\nelement VP");
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.kind(), ParseErrorKind::DuplicateElement);

    EXPECT_EQ(parse_error("element VP TC").kind(), ParseErrorKind::BadArity);
    EXPECT_EQ(parse_error("relation VP rep").kind(), ParseErrorKind::BadArity);
    EXPECT_EQ(parse_error("relation VP rep TC to CQ").kind(), ParseErrorKind::BadArity);
    EXPECT_EQ(parse_error("relation CH delv_to VP").kind(), ParseErrorKind::BadArity);
    EXPECT_EQ(parse_error("relation CH delv VP at TC").kind(), ParseErrorKind::Syntax);
    EXPECT_EQ(parse_error("elements VP").kind(), ParseErrorKind::Syntax);
    EXPECT_EQ(parse_error("model a\nmodel b").kind(), ParseErrorKind::Syntax);
    EXPECT_EQ(parse_error("meta k v\nmeta k w").kind(), ParseErrorKind::Syntax);
    EXPECT_EQ(parse_error("meta k").kind(), ParseErrorKind::BadArity);
}

TEST(ParseModel, FailsOnFirstOffendingLine)
{
    auto e = parse_error("element VP\nelement QQ\nrelation VP nope TC");
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.kind(), ParseErrorKind::UnknownConcept);
}

TEST(SerializeModel, SingleElement)
{
    BusinessModelInstance m;
    m.name = "m";
    m.elements.insert(ConceptId::VP);
    EXPECT_EQ(serialize_model(m), "model m\nelement VP\n");
}

TEST(SerializeModel, CanonicalOrdering)
{
    BusinessModelInstance m;
    m.name = "m";
    m.elements = {ConceptId::VP, ConceptId::CAP, ConceptId::TC};
    m.relations = {{ConceptId::VP, RelationVerb::base, ConceptId::CAP, std::nullopt},
                   {ConceptId::VP, RelationVerb::rep, ConceptId::TC, std::nullopt}};
    m.metadata = {{"z", "last"}, {"a", "first"}};
    EXPECT_EQ(serialize_model(m), "model m\n"
                                  "element CAP\n"
                                  "element TC\n"
                                  "element VP\n"
                                  "relation VP rep TC\n"
                                  "relation VP base CAP\n"
                                  "meta a first\n"
                                  "meta z last\n");
}

TEST(SerializeModel, InsertionOrderDoesNotMatter)
{
    auto a = make_full_instance(canonical_schema());
    auto b = a;
    std::mt19937_64 rng(3);
    std::shuffle(b.relations.begin(), b.relations.end(), rng);
    EXPECT_EQ(serialize_model(a), serialize_model(b));
}

TEST(SerializeModel, FullInstanceRoundTrip)
{
    auto full = make_full_instance(canonical_schema());
    EXPECT_EQ(parse_model(serialize_model(full)), full);
}

TEST(SerializeModelProperty, RoundTripGeneratedInstances)
{
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        auto x = testgen::random_instance(seed);
        auto text = serialize_model(x);
        auto y = parse_model(text);
        ASSERT_EQ(y, x) << "seed " << seed << "\n" << text;
        ASSERT_EQ(serialize_model(y), text) << "seed " << seed;
    }
}
