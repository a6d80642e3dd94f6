#include "peerscope/textprep.hpp"

#include <cctype>
#include <fstream>

namespace peerscope::textprep {

TokenSet load_token_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open token file " + path.string());
    TokenSet set;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string token;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c)))
                token += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (!token.empty()) set.insert(std::move(token));
    }
    return set;
}

std::vector<std::string> clean_and_tokenize(std::string_view raw_text,
                                            const PipelineConfig& config) {
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (current.size() >= static_cast<size_t>(config.min_token_len) &&
            !config.stopwords.count(current) && !config.blocklist.count(current))
            tokens.push_back(current);
        current.clear();
    };
    for (unsigned char c : raw_text) {
        if (c >= 'A' && c <= 'Z')
            current += static_cast<char>(c - 'A' + 'a');
        else if (c >= 'a' && c <= 'z')
            current += static_cast<char>(c);
        else
            flush();
    }
    flush();
    return tokens;
}

PreprocessResult preprocess(const corpus::Corpus& corpus, const PipelineConfig& config) {
    PreprocessResult result;
    result.documents.reserve(corpus.documents.size());
    for (const auto& doc : corpus.documents) {
        ProcessedDocument out;
        out.ticker = doc.meta.ticker;
        for (const auto& token : clean_and_tokenize(doc.raw_text, config))
            out.tokens.push_back(stem(token));
        if (out.tokens.empty())
            result.warnings.push_back("document " + out.ticker +
                                      " has no tokens after preprocessing");
        result.documents.push_back(std::move(out));
    }
    return result;
}

}  // namespace peerscope::textprep
