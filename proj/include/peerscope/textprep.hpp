#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "peerscope/corpus.hpp"
#include "peerscope/stemmer.hpp"

namespace peerscope::textprep {

using TokenSet = std::unordered_set<std::string>;

// Bundled English stopword list (surface forms, lowercase).
const TokenSet& default_stopwords();
// Starter blocklist of corporate boilerplate tokens ("inc", "corp", ...).
const TokenSet& default_blocklist();

// One token per line, UTF-8, '#' starts a comment. Tokens are lowercased.
TokenSet load_token_file(const std::filesystem::path& path);

struct PipelineConfig {
    TokenSet stopwords = default_stopwords();
    TokenSet blocklist = default_blocklist();
    int min_token_len = 2;
};

// Splits on maximal runs of non-ASCII-alphabetic bytes, lowercases, drops
// tokens shorter than min_token_len and members of stopwords/blocklist.
// Order is preserved. No stemming here.
std::vector<std::string> clean_and_tokenize(std::string_view raw_text,
                                            const PipelineConfig& config);

struct ProcessedDocument {
    std::string ticker;
    std::vector<std::string> tokens;  // stemmed, lowercase, [a-z]+
};

struct PreprocessResult {
    std::vector<ProcessedDocument> documents;  // corpus order
    std::vector<std::string> warnings;         // e.g. documents left empty
};

// clean_and_tokenize + stem over every corpus document.
PreprocessResult preprocess(const corpus::Corpus& corpus,
                            const PipelineConfig& config);

}  // namespace peerscope::textprep
