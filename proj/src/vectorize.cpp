#include "peerscope/vectorize.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

#include "peerscope/csv.hpp"

namespace peerscope::vectorize {

Vocabulary build_vocabulary(const std::vector<textprep::ProcessedDocument>& docs,
                            size_t min_df, double max_df_ratio) {
    if (min_df < 1) throw std::runtime_error("min_df must be >= 1");
    if (max_df_ratio <= 0.0 || max_df_ratio > 1.0)
        throw std::runtime_error("max_df_ratio must be in (0, 1]");

    std::map<std::string, size_t> df;  // ordered -> terms come out sorted
    for (const auto& doc : docs) {
        std::set<std::string> uniq(doc.tokens.begin(), doc.tokens.end());
        for (const auto& t : uniq) ++df[t];
    }

    Vocabulary vocab;
    vocab.n_docs = docs.size();
    size_t max_df = static_cast<size_t>(max_df_ratio * static_cast<double>(docs.size()));
    for (const auto& [term, freq] : df) {
        if (freq < min_df || freq > max_df) continue;
        vocab.term_index.emplace(term, vocab.terms.size());
        vocab.terms.push_back(term);
        vocab.doc_freq.push_back(freq);
    }
    if (vocab.terms.empty())
        throw std::runtime_error(
            "empty vocabulary: no term satisfies min_df=" + std::to_string(min_df) +
            ", max_df_ratio=" + std::to_string(max_df_ratio) + " over " +
            std::to_string(docs.size()) + " documents");
    return vocab;
}

TfIdfMatrix tfidf(const std::vector<textprep::ProcessedDocument>& docs,
                  const Vocabulary& vocab) {
    TfIdfMatrix matrix;
    matrix.n_docs = docs.size();
    matrix.n_terms = vocab.terms.size();
    double n = static_cast<double>(vocab.n_docs);

    for (const auto& doc : docs) {
        matrix.row_tickers.push_back(doc.ticker);
        std::map<size_t, double> counts;
        for (const auto& token : doc.tokens) {
            auto it = vocab.term_index.find(token);
            if (it != vocab.term_index.end()) counts[it->second] += 1.0;
        }
        std::vector<std::pair<size_t, double>> row;
        double norm_sq = 0.0;
        for (const auto& [col, tf] : counts) {
            double idf =
                std::log((1.0 + n) / (1.0 + static_cast<double>(vocab.doc_freq[col]))) + 1.0;
            double w = tf * idf;
            row.emplace_back(col, w);
            norm_sq += w * w;
        }
        if (norm_sq > 0.0) {
            double inv = 1.0 / std::sqrt(norm_sq);
            for (auto& [col, w] : row) w *= inv;
        }
        matrix.rows.push_back(std::move(row));
    }
    return matrix;
}

Eigen::MatrixXd to_dense(const TfIdfMatrix& matrix) {
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(
        static_cast<Eigen::Index>(matrix.n_docs), static_cast<Eigen::Index>(matrix.n_terms));
    for (size_t i = 0; i < matrix.rows.size(); ++i)
        for (const auto& [col, w] : matrix.rows[i])
            dense(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(col)) = w;
    return dense;
}

void write_triples(const TfIdfMatrix& matrix, const Vocabulary& vocab,
                   const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "ticker,term,weight\n";
    for (size_t i = 0; i < matrix.rows.size(); ++i)
        for (const auto& [col, w] : matrix.rows[i])
            csv::write_row(out, {matrix.row_tickers[i], vocab.terms[col],
                                 std::to_string(w)});
}

}  // namespace peerscope::vectorize
