#include <gtest/gtest.h>

#include <set>

#include "sqa/relation.hpp"

using namespace sqa;

TEST(Relation, ReverseIsAnInvolution) {
    for (auto r : kAllRelations) EXPECT_EQ(reverse(reverse(r)), r) << to_string(r);
}

TEST(Relation, ReversePairs) {
    EXPECT_EQ(reverse(RelationType::LEFT), RelationType::RIGHT);
    EXPECT_EQ(reverse(RelationType::BELOW), RelationType::ABOVE);
    EXPECT_EQ(reverse(RelationType::BEHIND), RelationType::FRONT);
    EXPECT_EQ(reverse(RelationType::TPP), RelationType::TPPI);
    EXPECT_EQ(reverse(RelationType::NTPPI), RelationType::NTPP);
}

TEST(Relation, SymmetricRelationsAreTheirOwnReverse) {
    for (auto r : kAllRelations)
        if (is_symmetric(r)) {
            EXPECT_EQ(reverse(r), r) << to_string(r);
        }
    for (auto r : {RelationType::DC, RelationType::EC, RelationType::PO, RelationType::EQ, RelationType::FAR,
                   RelationType::NEAR})
        EXPECT_TRUE(is_symmetric(r));
}

TEST(Relation, Classes) {
    EXPECT_EQ(class_of(RelationType::FRONT), RelationClass::Dir);
    EXPECT_EQ(class_of(RelationType::NEAR), RelationClass::Dis);
    EXPECT_EQ(class_of(RelationType::TPPI), RelationClass::PP);
    EXPECT_EQ(class_of(RelationType::PO), RelationClass::RccNonPp);
    std::size_t dir = 0, dis = 0, pp = 0, rest = 0;
    for (auto r : kAllRelations) switch (class_of(r)) {
            case RelationClass::Dir: ++dir; break;
            case RelationClass::Dis: ++dis; break;
            case RelationClass::PP: ++pp; break;
            case RelationClass::RccNonPp: ++rest; break;
        }
    EXPECT_EQ(dir, 6u);
    EXPECT_EQ(dis, 2u);
    EXPECT_EQ(pp, 4u);
    EXPECT_EQ(rest, 4u);
}

TEST(Relation, NamesRoundTrip) {
    for (auto r : kAllRelations) EXPECT_EQ(relation_from_string(to_string(r)), r);
    EXPECT_EQ(relation_from_string("left"), RelationType::LEFT);
    EXPECT_FALSE(relation_from_string("SIDEWAYS").has_value());
}

TEST(Relation, CanonicalOrder) {
    std::vector<RelationType> v(kAllRelations.begin(), kAllRelations.end());
    EXPECT_TRUE(std::is_sorted(v.begin(), v.end()));
    EXPECT_EQ(to_string(v.front()), "DC");
    EXPECT_EQ(to_string(v.back()), "NEAR");
}

TEST(Lexicon, DefaultsCoverEveryRelation) {
    const auto& lex = RelationLexicon::defaults();
    EXPECT_NO_THROW(lex.validate());
    for (auto r : kAllRelations) EXPECT_FALSE(lex.expressions_for(r).empty()) << to_string(r);
}

TEST(Lexicon, WholePhraseLookup) {
    const auto& lex = RelationLexicon::defaults();
    EXPECT_EQ(lookup_expression(lex, "in front of"), RelationType::FRONT);
    EXPECT_EQ(lookup_expression(lex, "  To the LEFT of "), RelationType::LEFT);
    EXPECT_EQ(lookup_expression(lex, "under"), RelationType::BELOW);
    EXPECT_EQ(lookup_expression(lex, "contains"), RelationType::NTPPI);
    EXPECT_FALSE(lookup_expression(lex, "left of the").has_value());
    EXPECT_FALSE(lookup_expression(lex, "nowhere near").has_value());
}

TEST(Lexicon, LongestPrefixWins) {
    const auto& lex = RelationLexicon::defaults();
    std::vector<std::string> tokens{"in", "front", "of", "the", "house"};
    auto m = lex.match_prefix(tokens);
    ASSERT_TRUE(m.has_value());
    EXPECT_EQ(m->relation, RelationType::FRONT);
    EXPECT_EQ(m->token_count, 3u);

    std::vector<std::string> inside{"in", "the", "box"};
    m = lex.match_prefix(inside);
    ASSERT_TRUE(m.has_value());
    EXPECT_EQ(m->relation, RelationType::NTPP);
    EXPECT_EQ(m->token_count, 1u);

    std::vector<std::string> none{"beside", "the", "box"};
    EXPECT_FALSE(lex.match_prefix(none).has_value());
}

TEST(Lexicon, ParseAndSerializeRoundTrip) {
    auto text = RelationLexicon::defaults().serialize();
    auto again = RelationLexicon::parse(text);
    EXPECT_EQ(again.serialize(), text);
    for (auto r : kAllRelations)
        EXPECT_EQ(again.preferred_expression(r), RelationLexicon::defaults().preferred_expression(r));
}

TEST(Lexicon, ParseErrors) {
    EXPECT_THROW(RelationLexicon::parse("left of LEFT\n"), LexiconError);
    EXPECT_THROW(RelationLexicon::parse("left of\tSIDEWAYS\n"), LexiconError);
    EXPECT_THROW(RelationLexicon::parse("left of\tLEFT\n"), LexiconError);
    EXPECT_NO_THROW(RelationLexicon::parse("# comment\n\n" + RelationLexicon::defaults().serialize()));
}

TEST(Lexicon, ConflictingMappingRejected) {
    RelationLexicon lex;
    lex.add("left of", RelationType::LEFT);
    EXPECT_NO_THROW(lex.add("Left  of", RelationType::LEFT));
    EXPECT_THROW(lex.add("left of", RelationType::RIGHT), LexiconError);
}

TEST(Lexicon, ValidateReportsMissingRelation) {
    RelationLexicon lex;
    lex.add("left of", RelationType::LEFT);
    EXPECT_THROW(lex.validate(), LexiconError);
    EXPECT_THROW(lex.preferred_expression(RelationType::FAR), LexiconError);
}

TEST(Lexicon, LoadMissingFile) {
    EXPECT_THROW(RelationLexicon::load("/nonexistent/relations.tsv"), LexiconError);
}
