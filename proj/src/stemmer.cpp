// Snowball English stemmer (the Porter2 algorithm): steps 0-5 with R1/R2
// regions, exceptional forms and the short-word rule. Internally a
// consonant 'y' is marked as 'Y' so the vowel tests can treat plain 'y'
// as a vowel; the mark is undone before returning.

#include "peerscope/stemmer.hpp"

#include <algorithm>
#include <array>
#include <cstddef>
#include <utility>

namespace peerscope::textprep {
namespace {

bool is_vowel(char c) {
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
}

bool is_double(std::string_view w) {
    if (w.size() < 2) return false;
    char c = w[w.size() - 1];
    if (c != w[w.size() - 2]) return false;
    static constexpr std::string_view doubles = "bdfgmnprt";
    return doubles.find(c) != std::string_view::npos;
}

bool valid_li_ending(char c) {
    static constexpr std::string_view endings = "cdeghkmnrt";
    return endings.find(c) != std::string_view::npos;
}

bool ends_with(std::string_view w, std::string_view suffix) {
    return w.size() >= suffix.size() &&
           w.compare(w.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// True when the last syllable of w is short: a vowel followed by a
// non-vowel other than w/x/Y and preceded by a non-vowel, or a word-initial
// vowel followed by a non-vowel.
bool ends_in_short_syllable(std::string_view w) {
    std::size_t n = w.size();
    if (n >= 3) {
        char c2 = w[n - 1], c1 = w[n - 2], c0 = w[n - 3];
        if (!is_vowel(c2) && c2 != 'w' && c2 != 'x' && c2 != 'Y' &&
            is_vowel(c1) && !is_vowel(c0)) {
            return true;
        }
    }
    if (n == 2 && is_vowel(w[0]) && !is_vowel(w[1])) return true;
    return false;
}

struct ExceptionEntry {
    std::string_view word;
    std::string_view stem;
};

// Exceptional forms handled before the algorithm proper.
constexpr std::array<ExceptionEntry, 18> kException1 = {{
    {"skis", "ski"},     {"skies", "sky"},   {"dying", "die"},
    {"lying", "lie"},    {"tying", "tie"},   {"idly", "idl"},
    {"gently", "gentl"}, {"ugly", "ugli"},   {"early", "earli"},
    {"only", "onli"},    {"singly", "singl"},{"sky", "sky"},
    {"news", "news"},    {"howe", "howe"},   {"atlas", "atlas"},
    {"cosmos", "cosmos"},{"bias", "bias"},   {"andes", "andes"},
}};

// Words left alone after step 1a.
constexpr std::array<std::string_view, 8> kException2 = {
    "inning", "outing", "canning", "herring",
    "earring", "proceed", "exceed", "succeed",
};

class Stemmer {
public:
    explicit Stemmer(std::string word) : w_(std::move(word)) {}

    std::string run() {
        for (const auto& e : kException1) {
            if (w_ == e.word) return std::string(e.stem);
        }
        if (w_.size() <= 2) return w_;

        prelude();
        mark_regions();
        step_0();
        step_1a();
        if (!is_exception2()) {
            step_1b();
            step_1c();
            step_2();
            step_3();
            step_4();
            step_5();
        }
        postlude();
        return w_;
    }

private:
    std::string w_;
    std::size_t p1_ = 0;
    std::size_t p2_ = 0;

    bool in_r1(std::size_t pos) const { return pos >= p1_; }
    bool in_r2(std::size_t pos) const { return pos >= p2_; }

    void prelude() {
        if (!w_.empty() && w_[0] == '\'') w_.erase(0, 1);
        for (std::size_t i = 0; i < w_.size(); ++i) {
            if (w_[i] == 'y' && (i == 0 || is_vowel(w_[i - 1]))) w_[i] = 'Y';
        }
    }

    // First non-vowel past a vowel, scanning from `from`; end of word if none.
    std::size_t region_after(std::size_t from) const {
        std::size_t i = from;
        while (i < w_.size() && !is_vowel(w_[i])) ++i;
        while (i < w_.size() && is_vowel(w_[i])) ++i;
        return i < w_.size() ? i + 1 : w_.size();
    }

    void mark_regions() {
        p1_ = w_.size();
        p2_ = w_.size();
        static constexpr std::array<std::string_view, 3> prefixes = {
            "gener", "commun", "arsen"};
        bool prefixed = false;
        for (auto p : prefixes) {
            if (w_.compare(0, p.size(), p) == 0) {
                p1_ = p.size();
                prefixed = true;
                break;
            }
        }
        if (!prefixed) p1_ = region_after(0);
        p2_ = region_after(p1_);
    }

    // Longest of 's , 's, ' removed.
    void step_0() {
        for (std::string_view s : {"'s'", "'s", "'"}) {
            if (ends_with(w_, s)) {
                w_.erase(w_.size() - s.size());
                return;
            }
        }
    }

    void step_1a() {
        if (ends_with(w_, "sses")) {
            w_.erase(w_.size() - 2);  // sses -> ss
            return;
        }
        if (ends_with(w_, "ied") || ends_with(w_, "ies")) {
            // Preceded by more than one letter -> i, otherwise -> ie.
            if (w_.size() > 4) {
                w_.erase(w_.size() - 2);
            } else {
                w_.erase(w_.size() - 1);
            }
            return;
        }
        if (ends_with(w_, "us") || ends_with(w_, "ss")) return;
        if (ends_with(w_, "s")) {
            // Delete if a vowel occurs before the immediately preceding char.
            if (w_.size() >= 3) {
                for (std::size_t i = 0; i + 2 < w_.size(); ++i) {
                    if (is_vowel(w_[i])) {
                        w_.pop_back();
                        return;
                    }
                }
            }
        }
    }

    bool is_exception2() const {
        return std::find(kException2.begin(), kException2.end(), w_) !=
               kException2.end();
    }

    bool has_vowel_before(std::size_t pos) const {
        for (std::size_t i = 0; i < pos; ++i) {
            if (is_vowel(w_[i])) return true;
        }
        return false;
    }

    void step_1b() {
        for (std::string_view s : {"eedly", "eed"}) {
            if (ends_with(w_, s)) {
                if (in_r1(w_.size() - s.size())) {
                    w_.erase(w_.size() - s.size());
                    w_ += "ee";
                }
                return;
            }
        }
        for (std::string_view s : {"ingly", "edly", "ing", "ed"}) {
            if (!ends_with(w_, s)) continue;
            std::size_t stem_len = w_.size() - s.size();
            if (!has_vowel_before(stem_len)) return;
            w_.erase(stem_len);
            if (ends_with(w_, "at") || ends_with(w_, "bl") || ends_with(w_, "iz")) {
                w_ += 'e';
            } else if (is_double(w_)) {
                w_.pop_back();
            } else if (p1_ == w_.size() && ends_in_short_syllable(w_)) {
                w_ += 'e';
            }
            return;
        }
    }

    void step_1c() {
        std::size_t n = w_.size();
        if (n < 3) return;
        char last = w_[n - 1];
        if ((last == 'y' || last == 'Y') && !is_vowel(w_[n - 2])) {
            w_[n - 1] = 'i';
        }
    }

    struct Rule {
        std::string_view suffix;
        std::string_view replacement;
    };

    // Longest listed suffix; replace only if it lies in R1.
    void step_2() {
        static constexpr std::array<Rule, 24> rules = {{
            {"ization", "ize"}, {"ational", "ate"}, {"fulness", "ful"},
            {"ousness", "ous"}, {"iveness", "ive"}, {"tional", "tion"},
            {"biliti", "ble"},  {"lessli", "less"}, {"entli", "ent"},
            {"ation", "ate"},   {"alism", "al"},    {"aliti", "al"},
            {"ousli", "ous"},   {"iviti", "ive"},   {"fulli", "ful"},
            {"enci", "ence"},   {"anci", "ance"},   {"abli", "able"},
            {"izer", "ize"},    {"ator", "ate"},    {"alli", "al"},
            {"bli", "ble"},     {"ogi", "og"},      {"li", ""},
        }};
        for (const auto& r : rules) {
            if (!ends_with(w_, r.suffix)) continue;
            std::size_t pos = w_.size() - r.suffix.size();
            if (!in_r1(pos)) return;
            if (r.suffix == "ogi") {
                if (pos == 0 || w_[pos - 1] != 'l') return;
            } else if (r.suffix == "li") {
                if (pos == 0 || !valid_li_ending(w_[pos - 1])) return;
            }
            w_.erase(pos);
            w_ += r.replacement;
            return;
        }
    }

    void step_3() {
        static constexpr std::array<Rule, 9> rules = {{
            {"ational", "ate"}, {"tional", "tion"}, {"alize", "al"},
            {"icate", "ic"},    {"iciti", "ic"},    {"ative", ""},
            {"ical", "ic"},     {"ness", ""},       {"ful", ""},
        }};
        for (const auto& r : rules) {
            if (!ends_with(w_, r.suffix)) continue;
            std::size_t pos = w_.size() - r.suffix.size();
            if (!in_r1(pos)) return;
            if (r.suffix == "ative" && !in_r2(pos)) return;
            w_.erase(pos);
            w_ += r.replacement;
            return;
        }
    }

    void step_4() {
        static constexpr std::array<std::string_view, 18> suffixes = {
            "ement", "ance", "ence", "able", "ible", "ment",
            "ant",   "ent",  "ism",  "ate",  "iti",  "ous",
            "ive",   "ize",  "ion",  "al",   "er",   "ic",
        };
        for (std::string_view s : suffixes) {
            if (!ends_with(w_, s)) continue;
            std::size_t pos = w_.size() - s.size();
            if (!in_r2(pos)) return;
            if (s == "ion") {
                if (pos == 0 || (w_[pos - 1] != 's' && w_[pos - 1] != 't')) return;
            }
            w_.erase(pos);
            return;
        }
    }

    void step_5() {
        if (ends_with(w_, "e")) {
            std::size_t pos = w_.size() - 1;
            std::string_view before{w_.data(), pos};
            if (in_r2(pos) ||
                (in_r1(pos) && !ends_in_short_syllable(before))) {
                w_.pop_back();
            }
            return;
        }
        if (ends_with(w_, "l")) {
            std::size_t pos = w_.size() - 1;
            if (in_r2(pos) && pos > 0 && w_[pos - 1] == 'l') w_.pop_back();
        }
    }

    void postlude() {
        for (char& c : w_) {
            if (c == 'Y') c = 'y';
        }
    }
};

}  // namespace

std::string stem(std::string_view token) {
    return Stemmer{std::string(token)}.run();
}

}  // namespace peerscope::textprep
