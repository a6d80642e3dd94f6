#include "peerscope/cluster.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "peerscope/kmeans.hpp"
#include "peerscope/linalg.hpp"
#include "peerscope/rng.hpp"

namespace peerscope::cluster {

void ClusteringConfig::validate() const {
    if (n_clusters < 2) throw std::runtime_error("n_clusters must be >= 2");
    if (rbf_gamma <= 0.0) throw std::runtime_error("rbf_gamma must be positive");
    if (knn_k < 1) throw std::runtime_error("knn_k must be >= 1");
    if (algorithm == Algorithm::agglomerative && linkage == Linkage::ward &&
        metric != Metric::euclidean)
        throw std::runtime_error("ward linkage requires the euclidean metric");
}

AffinityMatrix affinity_from_points(const Eigen::MatrixXd& points, AffinityKind kind,
                                    double rbf_gamma, int knn_k) {
    const Eigen::Index n = points.rows();
    if (n < 2) throw std::runtime_error("affinity: need at least 2 points");

    AffinityMatrix A;
    A.n = n;
    A.kind = kind;
    A.entries = Eigen::MatrixXd::Zero(n, n);

    switch (kind) {
        case AffinityKind::rbf: {
            if (rbf_gamma <= 0.0) throw std::runtime_error("rbf_gamma must be positive");
            for (Eigen::Index i = 0; i < n; ++i) {
                A.entries(i, i) = 1.0;
                for (Eigen::Index j = i + 1; j < n; ++j) {
                    double d2 = (points.row(i) - points.row(j)).squaredNorm();
                    double v = std::exp(-rbf_gamma * d2);
                    A.entries(i, j) = A.entries(j, i) = v;
                }
            }
            break;
        }
        case AffinityKind::cosine: {
            for (Eigen::Index i = 0; i < n; ++i) {
                A.entries(i, i) = 1.0;
                for (Eigen::Index j = i + 1; j < n; ++j) {
                    double v = points.row(i).dot(points.row(j));
                    A.entries(i, j) = A.entries(j, i) = std::max(0.0, v);
                }
            }
            break;
        }
        case AffinityKind::knn_graph: {
            if (knn_k >= n)
                throw std::runtime_error("knn_k must be smaller than the number of points");
            Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n, n);
            for (Eigen::Index i = 0; i < n; ++i) {
                std::vector<std::pair<double, Eigen::Index>> dists;
                dists.reserve(static_cast<size_t>(n) - 1);
                for (Eigen::Index j = 0; j < n; ++j) {
                    if (j == i) continue;
                    dists.emplace_back((points.row(i) - points.row(j)).squaredNorm(), j);
                }
                std::sort(dists.begin(), dists.end());
                for (int m = 0; m < knn_k; ++m) W(i, dists[static_cast<size_t>(m)].second) = 1.0;
            }
            A.entries = W.cwiseMax(W.transpose());
            A.entries.diagonal().setZero();
            break;
        }
    }
    return A;
}

AffinityMatrix affinity(const vectorize::TfIdfMatrix& matrix, AffinityKind kind,
                        double rbf_gamma, int knn_k) {
    return affinity_from_points(vectorize::to_dense(matrix), kind, rbf_gamma, knn_k);
}

Eigen::MatrixXd normalized_laplacian_embedding(const AffinityMatrix& A, int k) {
    const Eigen::Index n = A.n;
    if (k >= n)
        throw std::runtime_error("embedding dimension must be below the vertex count");
    Eigen::VectorXd degree = A.entries.rowwise().sum();
    for (Eigen::Index i = 0; i < n; ++i)
        if (degree(i) <= 0.0)
            throw std::runtime_error("isolated vertex " + std::to_string(i) +
                                     " in affinity graph; remove it first");

    Eigen::VectorXd dinv = degree.array().rsqrt();
    Eigen::MatrixXd lsym = Eigen::MatrixXd::Identity(n, n) -
                           dinv.asDiagonal() * A.entries * dinv.asDiagonal();
    linalg::EighResult eig = linalg::eigh(lsym);

    Eigen::MatrixXd embedding = eig.eigenvectors.leftCols(k);
    for (Eigen::Index i = 0; i < n; ++i) {
        double norm = embedding.row(i).norm();
        if (norm > 0.0) embedding.row(i) /= norm;
    }
    return embedding;
}

std::vector<int> discretize(const Eigen::MatrixXd& embedding, std::uint64_t rng_seed) {
    const Eigen::Index n = embedding.rows();
    const Eigen::Index k = embedding.cols();
    rng::SplitMix64 rng(rng_seed);

    auto kmeans_fallback = [&] {
        return kmeans(embedding, static_cast<int>(k), rng_seed).labels;
    };

    // Greedy init: rotation columns are embedding rows picked to be mutually
    // far in |dot|; first row random per seed.
    Eigen::MatrixXd rotation(k, k);
    rotation.col(0) =
        embedding.row(static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::uint64_t>(n))))
            .transpose();
    Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
    for (Eigen::Index j = 1; j < k; ++j) {
        c += (embedding * rotation.col(j - 1)).cwiseAbs();
        Eigen::Index pick;
        c.minCoeff(&pick);
        rotation.col(j) = embedding.row(pick).transpose();
    }

    std::vector<int> labels(static_cast<size_t>(n), 0);
    double last_objective = 0.0;
    bool have_objective = false;
    for (int iter = 0; iter < 30; ++iter) {
        Eigen::MatrixXd t = embedding * rotation;  // n x k
        for (Eigen::Index i = 0; i < n; ++i) {
            Eigen::Index arg;
            t.row(i).maxCoeff(&arg);
            labels[static_cast<size_t>(i)] = static_cast<int>(arg);
        }
        // X^T * embedding with X the one-hot indicator of labels.
        Eigen::MatrixXd xe = Eigen::MatrixXd::Zero(k, k);
        for (Eigen::Index i = 0; i < n; ++i)
            xe.row(labels[static_cast<size_t>(i)]) += embedding.row(i);

        Eigen::JacobiSVD<Eigen::MatrixXd> svd(xe, Eigen::ComputeFullU | Eigen::ComputeFullV);
        if (!svd.singularValues().allFinite()) return kmeans_fallback();
        double objective = svd.singularValues().sum();
        if (have_objective && std::abs(objective - last_objective) < 1e-7) break;
        last_objective = objective;
        have_objective = true;
        rotation = svd.matrixV() * svd.matrixU().transpose();
        if (!rotation.allFinite()) return kmeans_fallback();
    }
    return labels;
}

namespace {

ClusterAssignment assemble_with_isolated(const Eigen::MatrixXd& points,
                                         const ClusteringConfig& config) {
    AffinityMatrix A =
        affinity_from_points(points, config.affinity, config.rbf_gamma, config.knn_k);

    const Eigen::Index n = A.n;
    std::vector<Eigen::Index> keep, isolated;
    for (Eigen::Index i = 0; i < n; ++i) {
        double off = A.entries.row(i).sum() - A.entries(i, i);
        (off > 0.0 ? keep : isolated).push_back(i);
    }

    const int k = config.n_clusters;
    if (static_cast<Eigen::Index>(k) > static_cast<Eigen::Index>(keep.size()))
        throw std::runtime_error("n_clusters exceeds the number of connected documents");

    Eigen::MatrixXd sub(static_cast<Eigen::Index>(keep.size()),
                        static_cast<Eigen::Index>(keep.size()));
    for (size_t a = 0; a < keep.size(); ++a)
        for (size_t b = 0; b < keep.size(); ++b)
            sub(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                A.entries(keep[a], keep[b]);

    AffinityMatrix A_sub{static_cast<Eigen::Index>(keep.size()), std::move(sub), A.kind};

    std::vector<int> sub_labels;
    if (static_cast<Eigen::Index>(k) == A_sub.n) {
        // Embedding needs k < n; saturated case is the identity partition.
        sub_labels.resize(keep.size());
        std::iota(sub_labels.begin(), sub_labels.end(), 0);
    } else {
        Eigen::MatrixXd embedding = normalized_laplacian_embedding(A_sub, k);
        sub_labels = config.assign == Assign::kmeans
                         ? kmeans(embedding, k, config.rng_seed).labels
                         : discretize(embedding, config.rng_seed);
    }
    std::vector<bool> used(static_cast<size_t>(k), false);
    for (int lbl : sub_labels) used[static_cast<size_t>(lbl)] = true;
    std::vector<int> empty_clusters;
    for (int c = 0; c < k; ++c)
        if (!used[static_cast<size_t>(c)]) empty_clusters.push_back(c);

    ClusterAssignment assignment;
    assignment.config = config;
    assignment.n_clusters = k + static_cast<int>(isolated.size());
    assignment.labels.assign(static_cast<size_t>(n), -1);
    for (size_t a = 0; a < keep.size(); ++a)
        assignment.labels[static_cast<size_t>(keep[a])] = sub_labels[a];
    for (size_t a = 0; a < isolated.size(); ++a)
        assignment.labels[static_cast<size_t>(isolated[a])] = k + static_cast<int>(a);
    assignment.empty_clusters = std::move(empty_clusters);
    return assignment;
}

}  // namespace

ClusterAssignment spectral_cluster_points(const Eigen::MatrixXd& points,
                                          const ClusteringConfig& config) {
    if (config.algorithm != Algorithm::spectral)
        throw std::runtime_error("spectral_cluster called with a non-spectral config");
    config.validate();
    if (config.n_clusters > points.rows())
        throw std::runtime_error("n_clusters exceeds number of documents");
    return assemble_with_isolated(points, config);
}

ClusterAssignment spectral_cluster(const vectorize::TfIdfMatrix& matrix,
                                   const ClusteringConfig& config) {
    return spectral_cluster_points(vectorize::to_dense(matrix), config);
}

ClusterAssignment agglomerative_cluster_points(const Eigen::MatrixXd& points,
                                               const ClusteringConfig& config) {
    if (config.algorithm != Algorithm::agglomerative)
        throw std::runtime_error("agglomerative_cluster called with a non-agglomerative config");
    config.validate();
    if (config.n_clusters > points.rows())
        throw std::runtime_error("n_clusters exceeds number of documents");
    AgglomerativeResult res =
        agglomerate(points, config.linkage, config.metric, config.n_clusters);
    ClusterAssignment assignment;
    assignment.labels = std::move(res.labels);
    assignment.n_clusters = config.n_clusters;
    assignment.config = config;
    return assignment;
}

ClusterAssignment agglomerative_cluster(const vectorize::TfIdfMatrix& matrix,
                                        const ClusteringConfig& config) {
    return agglomerative_cluster_points(vectorize::to_dense(matrix), config);
}

ClusterAssignment run_clustering(const vectorize::TfIdfMatrix& matrix,
                                 const ClusteringConfig& config) {
    return config.algorithm == Algorithm::spectral ? spectral_cluster(matrix, config)
                                                   : agglomerative_cluster(matrix, config);
}

std::string to_string(AffinityKind kind) {
    switch (kind) {
        case AffinityKind::rbf: return "rbf";
        case AffinityKind::cosine: return "cosine";
        case AffinityKind::knn_graph: return "knn_graph";
    }
    return "?";
}
std::string to_string(Assign assign) {
    return assign == Assign::kmeans ? "kmeans" : "discretize";
}
std::string to_string(Linkage linkage) {
    switch (linkage) {
        case Linkage::single: return "single";
        case Linkage::complete: return "complete";
        case Linkage::average: return "average";
        case Linkage::ward: return "ward";
    }
    return "?";
}
std::string to_string(Metric metric) {
    return metric == Metric::euclidean ? "euclidean" : "cosine";
}
std::string to_string(Algorithm algorithm) {
    return algorithm == Algorithm::spectral ? "spectral" : "agglomerative";
}

}  // namespace peerscope::cluster
