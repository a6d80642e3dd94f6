// Bundled token lists. The stopword list is the alphabetic subset of the
// common English stopword list shipped by NLTK (entries containing
// apostrophes can never match an alphabetic token and are omitted).
// The blocklist is a starter set of corporate legal-form boilerplate;
// override with --blocklist.
#include "peerscope/textprep.hpp"

namespace peerscope::textprep {

const TokenSet& default_stopwords() {
    static const TokenSet set = {
        "i",       "me",      "my",       "myself",  "we",        "our",
        "ours",    "ourselves", "you",    "your",    "yours",     "yourself",
        "yourselves", "he",   "him",      "his",     "himself",   "she",
        "her",     "hers",    "herself",  "it",      "its",       "itself",
        "they",    "them",    "their",    "theirs",  "themselves", "what",
        "which",   "who",     "whom",     "this",    "that",      "these",
        "those",   "am",      "is",       "are",     "was",       "were",
        "be",      "been",    "being",    "have",    "has",       "had",
        "having",  "do",      "does",     "did",     "doing",     "a",
        "an",      "the",     "and",      "but",     "if",        "or",
        "because", "as",      "until",    "while",   "of",        "at",
        "by",      "for",     "with",     "about",   "against",   "between",
        "into",    "through", "during",   "before",  "after",     "above",
        "below",   "to",      "from",     "up",      "down",      "in",
        "out",     "on",      "off",      "over",    "under",     "again",
        "further", "then",    "once",     "here",    "there",     "when",
        "where",   "why",     "how",      "all",     "any",       "both",
        "each",    "few",     "more",     "most",    "other",     "some",
        "such",    "no",      "nor",      "not",     "only",      "own",
        "same",    "so",      "than",     "too",     "very",      "s",
        "t",       "can",     "will",     "just",    "don",       "should",
        "now",     "d",       "ll",       "m",       "o",         "re",
        "ve",      "y",       "ain",      "aren",    "couldn",    "didn",
        "doesn",   "hadn",    "hasn",     "haven",   "isn",       "ma",
        "mightn",  "mustn",   "needn",    "shan",    "shouldn",   "wasn",
        "weren",   "won",     "wouldn",
    };
    return set;
}

const TokenSet& default_blocklist() {
    static const TokenSet set = {
        "inc",     "incorporated", "corp",   "corporation", "company",
        "companies", "co",    "ltd",        "limited",     "llc",
        "llp",     "lp",      "plc",        "holdings",    "holding",
        "group",   "sa",      "ag",         "nv",
    };
    return set;
}

}  // namespace peerscope::textprep
