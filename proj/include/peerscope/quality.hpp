#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <string>
#include <vector>

#include "peerscope/cluster.hpp"
#include "peerscope/corpus.hpp"

namespace peerscope::quality {

struct QualityReport {
    double silhouette = 0.0;          // SC, mean of per_point_s
    double calinski_harabasz = 0.0;
    double davies_bouldin = 0.0;
    std::vector<double> per_point_s;
    int n_clusters = 0;
};

enum class Criterion { silhouette, calinski, davies, combined_sil_cal };

struct SweepEntry {
    cluster::ClusteringConfig config;
    QualityReport report;
};

struct SweepResult {
    std::vector<SweepEntry> entries;  // ascending k
    size_t best = 0;                  // index into entries
    Criterion criterion = Criterion::silhouette;
};

// s(x) = (b - a) / max(a, b); singletons score 0; SC = mean.
QualityReport silhouette(const Eigen::MatrixXd& points, const std::vector<int>& labels,
                         cluster::Metric metric = cluster::Metric::euclidean);

// (B / (k-1)) / (W / (n-k)), euclidean; +inf when W == 0.
double calinski_harabasz(const Eigen::MatrixXd& points, const std::vector<int>& labels);

// mean_i max_{j != i} (s_i + s_j) / d(c_i, c_j); +inf terms on coincident centroids.
double davies_bouldin(const Eigen::MatrixXd& points, const std::vector<int>& labels);

QualityReport score(const Eigen::MatrixXd& points, const std::vector<int>& labels,
                    int n_clusters);

// Clusters at each k in [k_min, k_max] and picks the best per `criterion`.
// combined_sil_cal = silhouette-rank + calinski-rank, lower wins; ties fall
// to silhouette rank, then to smaller k.
SweepResult sweep(const vectorize::TfIdfMatrix& matrix, cluster::ClusteringConfig base,
                  int k_min, int k_max, Criterion criterion);
SweepResult sweep_points(const Eigen::MatrixXd& points, cluster::ClusteringConfig base,
                         int k_min, int k_max, Criterion criterion);

struct DistributionRow {
    int cluster = 0;
    size_t size = 0;
    std::vector<std::pair<std::string, size_t>> sector_counts;  // sorted by sector
};

std::vector<DistributionRow> distribution_report(
    const cluster::ClusterAssignment& assignment,
    const std::vector<corpus::CompanyMeta>& metas);

Criterion criterion_from_string(const std::string& name);
std::string to_string(Criterion criterion);

}  // namespace peerscope::quality
