#include "peerscope/quality.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>

namespace peerscope::quality {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double pair_distance(const Eigen::MatrixXd& points, Eigen::Index i, Eigen::Index j,
                     cluster::Metric metric) {
    if (metric == cluster::Metric::euclidean)
        return (points.row(i) - points.row(j)).norm();
    double ni = points.row(i).norm(), nj = points.row(j).norm();
    if (ni == 0.0 || nj == 0.0) return 1.0;
    return 1.0 - points.row(i).dot(points.row(j)) / (ni * nj);
}

std::vector<std::vector<Eigen::Index>> group_by_label(const std::vector<int>& labels) {
    int max_label = -1;
    for (int l : labels) max_label = std::max(max_label, l);
    std::vector<std::vector<Eigen::Index>> groups(static_cast<size_t>(max_label + 1));
    for (size_t i = 0; i < labels.size(); ++i)
        groups[static_cast<size_t>(labels[i])].push_back(static_cast<Eigen::Index>(i));
    groups.erase(std::remove_if(groups.begin(), groups.end(),
                                [](const auto& g) { return g.empty(); }),
                 groups.end());
    return groups;
}

}  // namespace

QualityReport silhouette(const Eigen::MatrixXd& points, const std::vector<int>& labels,
                         cluster::Metric metric) {
    const size_t n = labels.size();
    if (static_cast<Eigen::Index>(n) != points.rows())
        throw std::runtime_error("silhouette: labels/points size mismatch");
    auto groups = group_by_label(labels);
    if (groups.size() < 2)
        throw std::runtime_error("silhouette undefined for fewer than 2 clusters");

    std::vector<size_t> group_of(n);
    for (size_t g = 0; g < groups.size(); ++g)
        for (Eigen::Index i : groups[g]) group_of[static_cast<size_t>(i)] = g;

    QualityReport report;
    report.n_clusters = static_cast<int>(groups.size());
    report.per_point_s.resize(n, 0.0);

    double total = 0.0;
    for (size_t idx = 0; idx < n; ++idx) {
        Eigen::Index i = static_cast<Eigen::Index>(idx);
        const auto& own = groups[group_of[idx]];
        if (own.size() == 1) {
            report.per_point_s[idx] = 0.0;  // singleton convention
            continue;
        }
        double a = 0.0;
        for (Eigen::Index j : own)
            if (j != i) a += pair_distance(points, i, j, metric);
        a /= static_cast<double>(own.size() - 1);

        double b = kInf;
        for (size_t g = 0; g < groups.size(); ++g) {
            if (g == group_of[idx]) continue;
            double mean = 0.0;
            for (Eigen::Index j : groups[g]) mean += pair_distance(points, i, j, metric);
            mean /= static_cast<double>(groups[g].size());
            b = std::min(b, mean);
        }
        double denom = std::max(a, b);
        report.per_point_s[idx] = denom > 0.0 ? (b - a) / denom : 0.0;
        total += report.per_point_s[idx];
    }
    report.silhouette = total / static_cast<double>(n);
    return report;
}

double calinski_harabasz(const Eigen::MatrixXd& points, const std::vector<int>& labels) {
    const Eigen::Index n = points.rows();
    auto groups = group_by_label(labels);
    const size_t k = groups.size();
    if (k < 2) throw std::runtime_error("calinski_harabasz needs >= 2 clusters");
    if (static_cast<Eigen::Index>(k) == n)
        throw std::runtime_error("calinski_harabasz undefined when every point is a cluster");

    Eigen::RowVectorXd mu = points.colwise().mean();
    double between = 0.0, within = 0.0;
    for (const auto& g : groups) {
        Eigen::RowVectorXd c = Eigen::RowVectorXd::Zero(points.cols());
        for (Eigen::Index i : g) c += points.row(i);
        c /= static_cast<double>(g.size());
        between += static_cast<double>(g.size()) * (c - mu).squaredNorm();
        for (Eigen::Index i : g) within += (points.row(i) - c).squaredNorm();
    }
    if (within == 0.0) return kInf;
    return (between / static_cast<double>(k - 1)) /
           (within / static_cast<double>(n - static_cast<Eigen::Index>(k)));
}

double davies_bouldin(const Eigen::MatrixXd& points, const std::vector<int>& labels) {
    auto groups = group_by_label(labels);
    const size_t k = groups.size();
    if (k < 2) throw std::runtime_error("davies_bouldin needs >= 2 clusters");

    std::vector<Eigen::RowVectorXd> centroids(k);
    std::vector<double> scatter(k, 0.0);
    for (size_t g = 0; g < k; ++g) {
        Eigen::RowVectorXd c = Eigen::RowVectorXd::Zero(points.cols());
        for (Eigen::Index i : groups[g]) c += points.row(i);
        c /= static_cast<double>(groups[g].size());
        centroids[g] = c;
        for (Eigen::Index i : groups[g]) scatter[g] += (points.row(i) - c).norm();
        scatter[g] /= static_cast<double>(groups[g].size());
    }

    double total = 0.0;
    for (size_t i = 0; i < k; ++i) {
        double worst = 0.0;
        for (size_t j = 0; j < k; ++j) {
            if (j == i) continue;
            double d = (centroids[i] - centroids[j]).norm();
            double r = d > 0.0 ? (scatter[i] + scatter[j]) / d : kInf;
            worst = std::max(worst, r);
        }
        total += worst;
    }
    return total / static_cast<double>(k);
}

QualityReport score(const Eigen::MatrixXd& points, const std::vector<int>& labels,
                    int n_clusters) {
    QualityReport report = silhouette(points, labels);
    report.calinski_harabasz = calinski_harabasz(points, labels);
    report.davies_bouldin = davies_bouldin(points, labels);
    report.n_clusters = n_clusters;
    return report;
}

namespace {

SweepResult sweep_impl(const Eigen::MatrixXd& points,
                       const std::function<std::vector<int>(int)>& cluster_at,
                       cluster::ClusteringConfig base, int k_min, int k_max,
                       Criterion criterion) {
    const Eigen::Index n = points.rows();
    if (k_min < 2 || k_max < k_min || static_cast<Eigen::Index>(k_max) > n - 1)
        throw std::runtime_error("sweep: k range must lie within [2, n-1]");

    SweepResult result;
    result.criterion = criterion;
    for (int k = k_min; k <= k_max; ++k) {
        SweepEntry entry;
        entry.config = base;
        entry.config.n_clusters = k;
        std::vector<int> labels = cluster_at(k);
        entry.report = score(points, labels, k);
        result.entries.push_back(std::move(entry));
    }

    const auto& entries = result.entries;
    auto pick_extreme = [&](auto value, bool maximize) {
        size_t best = 0;
        for (size_t i = 1; i < entries.size(); ++i) {
            double v = value(entries[i]), b = value(entries[best]);
            if (maximize ? v > b : v < b) best = i;  // ties keep the smaller k
        }
        return best;
    };

    switch (criterion) {
        case Criterion::silhouette:
            result.best = pick_extreme(
                [](const SweepEntry& e) { return e.report.silhouette; }, true);
            break;
        case Criterion::calinski:
            result.best = pick_extreme(
                [](const SweepEntry& e) { return e.report.calinski_harabasz; }, true);
            break;
        case Criterion::davies:
            result.best = pick_extreme(
                [](const SweepEntry& e) { return e.report.davies_bouldin; }, false);
            break;
        case Criterion::combined_sil_cal: {
            // Competition ranks (0-based, ties share), lower rank-sum wins.
            auto rank_of = [&](auto value) {
                std::vector<size_t> ranks(entries.size(), 0);
                for (size_t i = 0; i < entries.size(); ++i)
                    for (size_t j = 0; j < entries.size(); ++j)
                        if (value(entries[j]) > value(entries[i])) ++ranks[i];
                return ranks;
            };
            auto sil_ranks =
                rank_of([](const SweepEntry& e) { return e.report.silhouette; });
            auto cal_ranks =
                rank_of([](const SweepEntry& e) { return e.report.calinski_harabasz; });
            size_t best = 0;
            for (size_t i = 1; i < entries.size(); ++i) {
                size_t si = sil_ranks[i] + cal_ranks[i];
                size_t sb = sil_ranks[best] + cal_ranks[best];
                if (si < sb || (si == sb && sil_ranks[i] < sil_ranks[best])) best = i;
            }
            result.best = best;
            break;
        }
    }
    return result;
}

}  // namespace

SweepResult sweep_points(const Eigen::MatrixXd& points, cluster::ClusteringConfig base,
                         int k_min, int k_max, Criterion criterion) {
    return sweep_impl(
        points,
        [&](int k) {
            cluster::ClusteringConfig c = base;
            c.n_clusters = k;
            return base.algorithm == cluster::Algorithm::spectral
                       ? cluster::spectral_cluster_points(points, c).labels
                       : cluster::agglomerative_cluster_points(points, c).labels;
        },
        base, k_min, k_max, criterion);
}

SweepResult sweep(const vectorize::TfIdfMatrix& matrix, cluster::ClusteringConfig base,
                  int k_min, int k_max, Criterion criterion) {
    return sweep_points(vectorize::to_dense(matrix), base, k_min, k_max, criterion);
}

std::vector<DistributionRow> distribution_report(
    const cluster::ClusterAssignment& assignment,
    const std::vector<corpus::CompanyMeta>& metas) {
    if (assignment.labels.size() != metas.size())
        throw std::runtime_error("distribution_report: assignment/metas size mismatch");

    std::vector<DistributionRow> rows(static_cast<size_t>(assignment.n_clusters));
    for (size_t c = 0; c < rows.size(); ++c) rows[c].cluster = static_cast<int>(c);

    std::vector<std::map<std::string, size_t>> sectors(rows.size());
    for (size_t i = 0; i < assignment.labels.size(); ++i) {
        size_t c = static_cast<size_t>(assignment.labels[i]);
        ++rows[c].size;
        ++sectors[c][metas[i].sector];
    }
    for (size_t c = 0; c < rows.size(); ++c)
        rows[c].sector_counts.assign(sectors[c].begin(), sectors[c].end());
    return rows;
}

Criterion criterion_from_string(const std::string& name) {
    if (name == "silhouette") return Criterion::silhouette;
    if (name == "calinski") return Criterion::calinski;
    if (name == "davies") return Criterion::davies;
    if (name == "combined_sil_cal" || name == "combined") return Criterion::combined_sil_cal;
    throw std::runtime_error("unknown criterion: " + name);
}

std::string to_string(Criterion criterion) {
    switch (criterion) {
        case Criterion::silhouette: return "silhouette";
        case Criterion::calinski: return "calinski";
        case Criterion::davies: return "davies";
        case Criterion::combined_sil_cal: return "combined_sil_cal";
    }
    return "?";
}

}  // namespace peerscope::quality
