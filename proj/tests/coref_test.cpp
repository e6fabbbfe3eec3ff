#include <gtest/gtest.h>

#include "sqa/coref.hpp"
#include "sqa/relation.hpp"

using namespace sqa;

namespace {

Mention mention(const std::string& text, std::size_t sentence = 0) {
    auto words = split_words(text);
    return make_mention(words, sentence, AttributeLexicon::defaults());
}

std::vector<CorefChain> link(const std::vector<Mention>& ms) { return link_story(ms); }

}  // namespace

TEST(Mention, Attributes) {
    auto m = mention("a small black circle");
    EXPECT_EQ(m.attributes.determiner, "a");
    EXPECT_EQ(m.attributes.size, "small");
    EXPECT_EQ(m.attributes.color, "black");
    EXPECT_EQ(m.attributes.noun, "circle");
    EXPECT_EQ(m.cardinality, Cardinality::Singular);
    EXPECT_EQ(m.head(), "small black circle");
}

TEST(Mention, BlockLetter) {
    auto m = mention("block a");
    EXPECT_EQ(m.attributes.noun, "block");
    EXPECT_EQ(m.attributes.letter, "a");
}

TEST(Mention, PluralAndGroup) {
    auto two = mention("two circles");
    EXPECT_EQ(two.cardinality, Cardinality::Plural);
    EXPECT_EQ(two.count, 2u);
    EXPECT_EQ(two.attributes.noun, "circle");
    auto all = mention("all blue boxes");
    EXPECT_EQ(all.cardinality, Cardinality::Group);
    EXPECT_EQ(all.attributes.noun, "box");
    EXPECT_EQ(all.attributes.color, "blue");
    auto one = mention("one circle");
    EXPECT_EQ(one.cardinality, Cardinality::Singular);
}

TEST(Mention, GenericAndPronoun) {
    auto g = mention("the object");
    EXPECT_TRUE(g.attributes.noun.empty());
    auto p = mention("it");
    EXPECT_TRUE(p.pronoun);
}

TEST(Mention, Malformed) {
    std::vector<std::string> empty;
    EXPECT_THROW(make_mention(empty, 0, AttributeLexicon::defaults()), std::invalid_argument);
    EXPECT_THROW(mention("the circle square"), std::invalid_argument);
}

TEST(Attributes, SubsetAndCompatibility) {
    Attributes car{"", "", "grey", "car", ""};
    Attributes just_car{"", "", "", "car", ""};
    Attributes red_car{"", "", "red", "car", ""};
    EXPECT_TRUE(just_car.subset_of(car));
    EXPECT_FALSE(car.subset_of(just_car));
    EXPECT_FALSE(red_car.compatible_with(car));
    EXPECT_TRUE(just_car.compatible_with(red_car));
}

TEST(Link, DefiniteJoinsIndefinite) {
    auto chains = link({mention("a grey car", 0), mention("the car", 1)});
    ASSERT_EQ(chains.size(), 1u);
    EXPECT_EQ(chains[0].id, 0u);
    EXPECT_EQ(chains[0].mentions, (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(chains[0].canonical.color, "grey");
}

TEST(Link, ExactMatchBeatsPartial) {
    auto chains = link({mention("a small circle", 0), mention("a big circle", 1), mention("the small circle", 2)});
    ASSERT_EQ(chains.size(), 2u);
    EXPECT_EQ(chains[0].mentions, (std::vector<std::size_t>{0, 2}));
}

TEST(Link, IndefiniteAlwaysOpensChain) {
    auto chains = link({mention("a circle", 0), mention("a circle", 1)});
    EXPECT_EQ(chains.size(), 2u);
}

TEST(Link, MostRecentPartialMatchWins) {
    auto chains = link({mention("a red circle", 0), mention("a blue circle", 1), mention("the circle", 2)});
    ASSERT_EQ(chains.size(), 2u);
    EXPECT_EQ(chains[1].mentions, (std::vector<std::size_t>{1, 2}));
}

TEST(Link, SameSentenceTieIsAmbiguous) {
    std::vector<Mention> ms{mention("a red circle", 0), mention("a blue circle", 0), mention("the circle", 1)};
    EXPECT_THROW(link(ms), AmbiguityError);
}

TEST(Link, BlockLetters) {
    auto chains = link({mention("block a", 0), mention("block b", 0), mention("block a", 1)});
    ASSERT_EQ(chains.size(), 2u);
    EXPECT_EQ(chains[0].mentions, (std::vector<std::size_t>{0, 2}));
}

TEST(Link, PronounJoinsLatestSingular) {
    auto chains = link({mention("a red circle", 0), mention("a blue square", 0), mention("it", 1)});
    ASSERT_EQ(chains.size(), 2u);
    EXPECT_EQ(chains[1].mentions, (std::vector<std::size_t>{1, 2}));
    LinkOptions off;
    off.resolve_pronouns = false;
    std::vector<Mention> ms{mention("a red circle", 0), mention("it", 1)};
    EXPECT_EQ(link_story(ms, off).size(), 2u);
}

TEST(Link, PluralGroupCollectsMembers) {
    auto chains = link({mention("block a", 0), mention("two circles", 0), mention("the red circle", 1),
                        mention("the blue circle", 1), mention("the red circle", 2)});
    ASSERT_EQ(chains.size(), 4u);
    const auto& group = chains[1];
    EXPECT_TRUE(group.is_group());
    EXPECT_EQ(group.declared_count, 2u);
    EXPECT_EQ(group.members, (std::vector<EntityId>{2, 3}));
    EXPECT_EQ(expand_group(group), (std::vector<EntityId>{2, 3}));
    EXPECT_EQ(chains[2].mentions, (std::vector<std::size_t>{2, 4}));
}

TEST(Link, GroupArity) {
    auto chains = link({mention("three circles", 0), mention("the red circle", 1), mention("the blue circle", 1)});
    EXPECT_THROW(expand_group(chains[0]), ArityError);
    EXPECT_THROW(expand_group(chains[1]), ArityError);
}

TEST(Link, ChainOfMentions) {
    std::vector<Mention> ms{mention("a grey car", 0), mention("a grey house", 0), mention("the car", 1)};
    auto chains = link_story(ms);
    EXPECT_EQ(chain_of_mentions(chains, ms.size()), (std::vector<EntityId>{0, 1, 0}));
}

TEST(Resolve, UniqueByPartialMatch) {
    std::vector<Mention> story{mention("a grey car", 0), mention("a grey house", 0)};
    auto chains = link_story(story);
    auto r = resolve_question_entity(mention("the car"), chains, story);
    EXPECT_EQ(r.selector.quantifier, Quantifier::Unique);
    EXPECT_EQ(r.ids, (std::vector<EntityId>{0}));
    r = resolve_question_entity(mention("the grey house"), chains, story);
    EXPECT_EQ(r.ids, (std::vector<EntityId>{1}));
}

TEST(Resolve, QuantifiedSelectors) {
    std::vector<Mention> story{mention("a red circle", 0), mention("a blue square", 0), mention("a blue circle", 1)};
    auto chains = link_story(story);
    auto all = resolve_question_entity(mention("all circles"), chains, story);
    EXPECT_EQ(all.selector.quantifier, Quantifier::All);
    EXPECT_EQ(all.ids, (std::vector<EntityId>{0, 2}));
    auto any = resolve_question_entity(mention("any blue object"), chains, story);
    EXPECT_EQ(any.selector.quantifier, Quantifier::Any);
    EXPECT_EQ(any.ids, (std::vector<EntityId>{1, 2}));
}

TEST(Resolve, NoMatch) {
    std::vector<Mention> story{mention("a red circle", 0)};
    auto chains = link_story(story);
    EXPECT_THROW(resolve_question_entity(mention("the square"), chains, story), NoMatchError);
    EXPECT_THROW(resolve_question_entity(mention("all squares"), chains, story), NoMatchError);
}

TEST(AttributeLexicon, JsonRoundTrip) {
    auto text = AttributeLexicon::defaults().to_json_text();
    auto again = AttributeLexicon::from_json_text(text);
    EXPECT_EQ(again.colors, AttributeLexicon::defaults().colors);
    EXPECT_EQ(again.shapes, AttributeLexicon::defaults().shapes);
    EXPECT_TRUE(again.is_pronoun("it"));
    EXPECT_EQ(again.shape_of("boxes"), "box");
    EXPECT_EQ(again.shape_of("circles"), "circle");
    EXPECT_FALSE(again.shape_of("block").has_value());
}

TEST(AttributeLexicon, BadJson) {
    EXPECT_ANY_THROW(AttributeLexicon::from_json_text("{\"colors\": 3}"));
    EXPECT_ANY_THROW(AttributeLexicon::from_json_text("not json"));
}

TEST(Quantifier, Names) {
    for (auto q : {Quantifier::Unique, Quantifier::Any, Quantifier::All})
        EXPECT_EQ(quantifier_from_string(to_string(q)), q);
}
