#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "peerscope/vectorize.hpp"

namespace peerscope::cluster {

enum class AffinityKind { rbf, cosine, knn_graph };
enum class Assign { kmeans, discretize };
enum class Linkage { single, complete, average, ward };
enum class Metric { euclidean, cosine };
enum class Algorithm { spectral, agglomerative };

struct AffinityMatrix {
    Eigen::Index n = 0;
    Eigen::MatrixXd entries;  // symmetric, nonnegative
    AffinityKind kind = AffinityKind::cosine;
};

struct ClusteringConfig {
    Algorithm algorithm = Algorithm::spectral;
    int n_clusters = 2;
    AffinityKind affinity = AffinityKind::cosine;  // spectral only
    Assign assign = Assign::kmeans;                // spectral only
    Linkage linkage = Linkage::average;            // agglomerative only
    Metric metric = Metric::euclidean;             // agglomerative only
    double rbf_gamma = 1.0;
    int knn_k = 10;
    std::uint64_t rng_seed = 0;

    void validate() const;  // throws on inconsistent combinations
};

struct ClusterAssignment {
    std::vector<int> labels;
    // Total clusters carried by `labels`. For spectral runs this is the
    // requested n_clusters plus one singleton per isolated vertex.
    int n_clusters = 0;
    ClusteringConfig config;
    std::vector<int> empty_clusters;  // labels no point carries (k-means edge case)
};

// rbf: exp(-gamma * ||xi - xj||^2), diagonal 1. cosine: xi . xj, diagonal 1.
// knn_graph: 0/1 adjacency symmetrized as max(W, W^T), diagonal 0.
AffinityMatrix affinity_from_points(const Eigen::MatrixXd& points, AffinityKind kind,
                                    double rbf_gamma = 1.0, int knn_k = 10);
AffinityMatrix affinity(const vectorize::TfIdfMatrix& matrix, AffinityKind kind,
                        double rbf_gamma = 1.0, int knn_k = 10);

// Rows of the k smallest eigenvectors of L_sym = I - D^(-1/2) A D^(-1/2),
// row-normalized. Requires every vertex to have nonzero degree.
Eigen::MatrixXd normalized_laplacian_embedding(const AffinityMatrix& A, int k);

// SVD-based alternating rotation of the spectral embedding onto one-hot
// indicators; deterministic given rng_seed.
std::vector<int> discretize(const Eigen::MatrixXd& embedding, std::uint64_t rng_seed = 0);

ClusterAssignment spectral_cluster_points(const Eigen::MatrixXd& points,
                                          const ClusteringConfig& config);
ClusterAssignment spectral_cluster(const vectorize::TfIdfMatrix& matrix,
                                   const ClusteringConfig& config);

struct Merge {
    int a = 0, b = 0;      // cluster ids merged (a < b); result keeps id a
    double height = 0.0;   // linkage distance at the merge
};

struct AgglomerativeResult {
    std::vector<int> labels;      // 0..k-1, ordered by smallest member index
    std::vector<Merge> merges;    // in merge order
};

// Lance-Williams agglomeration down to n_clusters. Ties broken by the
// lexicographically smallest (i, j) cluster-id pair.
AgglomerativeResult agglomerate(const Eigen::MatrixXd& points, Linkage linkage,
                                Metric metric, int n_clusters);

ClusterAssignment agglomerative_cluster_points(const Eigen::MatrixXd& points,
                                               const ClusteringConfig& config);
ClusterAssignment agglomerative_cluster(const vectorize::TfIdfMatrix& matrix,
                                        const ClusteringConfig& config);

// Dispatches on config.algorithm.
ClusterAssignment run_clustering(const vectorize::TfIdfMatrix& matrix,
                                 const ClusteringConfig& config);

std::string to_string(AffinityKind kind);
std::string to_string(Assign assign);
std::string to_string(Linkage linkage);
std::string to_string(Metric metric);
std::string to_string(Algorithm algorithm);

}  // namespace peerscope::cluster
