#include "sqa/parser.hpp"

#include <algorithm>
#include <cctype>

namespace sqa {

std::string_view to_string(QuestionMode m) { return m == QuestionMode::YN ? "YN" : "FR"; }

std::optional<QuestionMode> question_mode_from_string(std::string_view s) {
    if (s == "YN") return QuestionMode::YN;
    if (s == "FR") return QuestionMode::FR;
    return std::nullopt;
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
    };
    for (char ch : text) {
        auto c = static_cast<unsigned char>(ch);
        if (std::isspace(c)) {
            flush();
        } else if (ch == '.' || ch == '?' || ch == ',') {
            flush();
            out.emplace_back(1, ch);
        } else {
            cur.push_back(static_cast<char>(std::tolower(c)));
        }
    }
    flush();
    return out;
}

namespace {

bool is_word(std::string_view t) {
    return !t.empty() && std::all_of(t.begin(), t.end(), [](char c) {
        return std::isalpha(static_cast<unsigned char>(c)) || c == '-' || c == '\'';
    });
}

bool reserved(std::string_view t) {
    return t == "is" || t == "are" || t == "and" || t == "has" || t == "contains" || t == "relative";
}

bool is_letter(std::string_view t) { return t.size() == 1 && t[0] >= 'a' && t[0] <= 'z'; }

class Cursor {
public:
    Cursor(std::vector<std::string> tokens, const ParserContext& ctx) : tokens_(std::move(tokens)), ctx_(ctx) {}

    bool done() const { return pos_ >= tokens_.size(); }
    std::size_t pos() const { return pos_; }
    const std::string& peek(std::size_t ahead = 0) const {
        static const std::string empty;
        return pos_ + ahead < tokens_.size() ? tokens_[pos_ + ahead] : empty;
    }
    void advance(std::size_t n = 1) { pos_ += n; }

    [[noreturn]] void fail(const std::string& what) const {
        std::string near = done() ? "end of input" : "'" + peek() + "'";
        throw GrammarError(what + " at " + near, pos_);
    }

    void expect(std::string_view tok) {
        if (peek() != tok) fail("expected '" + std::string(tok) + "'");
        advance();
    }

    bool np_starts(bool question) const {
        const auto& t = peek();
        if (t == "block" && is_letter(peek(1))) return true;
        if (question) return t == "the" || t == "any" || t == "all" || t == "a" || t == "an";
        if (ctx_.attributes->is_pronoun(t)) return true;
        return t == "a" || t == "an" || t == "the" || number_word(t).has_value();
    }

    // Returns the token span of an NP (story) or QNP (question).
    std::vector<std::string> noun_phrase(bool question) {
        if (!np_starts(question)) fail(question ? "expected a question noun phrase" : "expected a noun phrase");
        std::size_t start = pos_;
        if (peek() == "block" && is_letter(peek(1))) {
            advance(2);
        } else if (!question && ctx_.attributes->is_pronoun(peek())) {
            advance();
        } else {
            advance();   // determiner or number
            if (ctx_.attributes->is_size(peek()) && noun_after(1)) advance();
            if (ctx_.attributes->is_color(peek()) && noun_after(1)) advance();
            if (!is_word(peek()) || reserved(peek())) fail("expected a noun");
            advance();
        }
        return {tokens_.begin() + static_cast<std::ptrdiff_t>(start), tokens_.begin() + static_cast<std::ptrdiff_t>(pos_)};
    }

    std::optional<LexiconMatch> relation_expression() const {
        if (done()) return std::nullopt;
        return ctx_.relations->match_prefix(std::span<const std::string>(tokens_).subspan(pos_));
    }

    std::string take_words_until_np(bool question) {
        std::string words;
        while (!done() && !np_starts(question) && peek() != "." && peek() != "?") {
            if (!words.empty()) words.push_back(' ');
            words += peek();
            advance();
        }
        return words;
    }

private:
    // An attribute word is only consumed when a noun can still follow it.
    bool noun_after(std::size_t ahead) const {
        const auto& t = peek(ahead);
        return is_word(t) && !reserved(t);
    }

    std::vector<std::string> tokens_;
    const ParserContext& ctx_;
    std::size_t pos_ = 0;
};

class SentenceParser {
public:
    SentenceParser(std::string_view sentence, std::size_t index, const ParserContext& ctx)
        : cur_(tokenize(sentence), ctx), ctx_(ctx), index_(index) {}

    SentenceParse run() {
        try {
            parse();
        } catch (const GrammarError&) {
            if (ctx_.mode == ParseMode::Strict) throw;
            out_.triplets.clear();
        }
        return std::move(out_);
    }

private:
    std::size_t mention() {
        auto tokens = cur_.noun_phrase(false);
        try {
            out_.mentions.push_back(make_mention(tokens, index_, *ctx_.attributes));
        } catch (const std::invalid_argument& e) {
            cur_.fail(e.what());
        }
        return out_.mentions.size() - 1;
    }

    void emit(std::size_t trajector, std::string indicator, std::optional<RelationType> rel, std::size_t landmark) {
        ParsedTriplet t;
        t.trajector = out_.mentions[trajector];
        t.landmark = out_.mentions[landmark];
        t.indicator = std::move(indicator);
        t.relation = rel;
        t.sentence = index_;
        t.trajector_mention = trajector;
        t.landmark_mention = landmark;
        out_.triplets.push_back(std::move(t));
    }

    void parse() {
        if (cur_.done()) return;
        auto subject = mention();
        const auto verb = cur_.peek();
        if (verb == "is" || verb == "are") {
            cur_.advance();
            while (true) {
                if (auto m = cur_.relation_expression()) {
                    std::string indicator(m->expression);
                    cur_.advance(m->token_count);
                    auto object = mention();
                    emit(subject, std::move(indicator), m->relation, object);
                } else if (ctx_.mode == ParseMode::Lenient) {
                    auto words = cur_.take_words_until_np(false);
                    if (words.empty() || !cur_.np_starts(false)) return;
                    auto object = mention();
                    emit(subject, std::move(words), std::nullopt, object);
                } else {
                    cur_.fail("expected a relation expression");
                }
                if (cur_.peek() != "and") break;
                cur_.advance();
            }
        } else if (verb == "has" || verb == "contains") {
            cur_.advance();
            auto rel = lookup_expression(*ctx_.relations, verb).value_or(RelationType::NTPPI);
            while (true) {
                auto object = mention();
                emit(subject, verb, rel, object);
                if (cur_.peek() != "and") break;
                cur_.advance();
            }
        } else {
            cur_.fail("expected 'is', 'are', 'has' or 'contains'");
        }
        if (cur_.done() && ctx_.mode == ParseMode::Lenient) return;
        cur_.expect(".");
        if (!cur_.done()) cur_.fail("unexpected trailing tokens");
    }

    Cursor cur_;
    const ParserContext& ctx_;
    std::size_t index_;
    SentenceParse out_;
};

}  // namespace

SentenceParse parse_sentence_full(std::string_view sentence, std::size_t sentence_index, const ParserContext& ctx) {
    return SentenceParser(sentence, sentence_index, ctx).run();
}

std::vector<ParsedTriplet> parse_sentence(std::string_view sentence, const ParserContext& ctx,
                                          std::size_t sentence_index) {
    return parse_sentence_full(sentence, sentence_index, ctx).triplets;
}

ParsedQuestion parse_question(std::string_view question, const ParserContext& ctx,
                              const std::vector<RelationType>& fr_candidates) {
    Cursor cur(tokenize(question), ctx);
    ParsedQuestion q;
    auto qnp = [&] {
        auto tokens = cur.noun_phrase(true);
        try {
            return make_mention(tokens, 0, *ctx.attributes);
        } catch (const std::invalid_argument& e) {
            cur.fail(e.what());
        }
    };

    if (cur.peek() == "is" || cur.peek() == "are") {
        q.mode = QuestionMode::YN;
        cur.advance();
        q.trajector = qnp();
        auto m = cur.relation_expression();
        if (!m) cur.fail("expected a relation expression");
        q.relation = m->relation;
        cur.advance(m->token_count);
        q.landmark = qnp();
    } else if (cur.peek() == "what") {
        q.mode = QuestionMode::FR;
        for (auto w : {"what", "is", "the", "position", "of"}) cur.expect(w);
        q.trajector = qnp();
        cur.expect("relative");
        cur.expect("to");
        q.landmark = qnp();
        if (fr_candidates.empty()) cur.fail("FR question needs a non-empty candidate list");
        q.candidates = fr_candidates;
    } else {
        cur.fail("expected 'Is', 'Are' or 'What is the position of'");
    }
    cur.expect("?");
    if (!cur.done()) cur.fail("unexpected trailing tokens");

    q.trajector_selector = {q.trajector.attributes, quantifier_of(q.trajector)};
    q.landmark_selector = {q.landmark.attributes, quantifier_of(q.landmark)};
    q.trajector_selector.attributes.determiner.clear();
    q.landmark_selector.attributes.determiner.clear();
    return q;
}

StoryExtraction extract_story(const std::vector<std::string>& sentences, const ParserContext& ctx) {
    StoryExtraction out;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        auto parsed = parse_sentence_full(sentences[i], i, ctx);
        const auto offset = out.mentions.size();
        for (auto& t : parsed.triplets) {
            t.trajector_mention += offset;
            t.landmark_mention += offset;
            out.triplets.push_back(std::move(t));
        }
        for (auto& m : parsed.mentions) out.mentions.push_back(std::move(m));
    }
    return out;
}

}  // namespace sqa
