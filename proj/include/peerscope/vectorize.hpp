#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "peerscope/textprep.hpp"

namespace peerscope::vectorize {

struct Vocabulary {
    std::vector<std::string> terms;                        // sorted
    std::unordered_map<std::string, size_t> term_index;    // term -> column
    std::vector<size_t> doc_freq;                          // by column
    size_t n_docs = 0;                                     // corpus size at build time
};

struct TfIdfMatrix {
    size_t n_docs = 0;
    size_t n_terms = 0;
    // Sparse rows: (column, weight) sorted by column; unit L2 norm unless empty.
    std::vector<std::vector<std::pair<size_t, double>>> rows;
    std::vector<std::string> row_tickers;
};

// Terms with min_df <= doc_freq <= floor(max_df_ratio * n_docs).
Vocabulary build_vocabulary(const std::vector<textprep::ProcessedDocument>& docs,
                            size_t min_df = 2, double max_df_ratio = 0.8);

// weight(d,t) = tf * (ln((1+N)/(1+df)) + 1), rows L2-normalized.
TfIdfMatrix tfidf(const std::vector<textprep::ProcessedDocument>& docs,
                  const Vocabulary& vocab);

Eigen::MatrixXd to_dense(const TfIdfMatrix& matrix);

// (ticker, term, weight) triples for inspection.
void write_triples(const TfIdfMatrix& matrix, const Vocabulary& vocab,
                   const std::filesystem::path& path);

}  // namespace peerscope::vectorize
