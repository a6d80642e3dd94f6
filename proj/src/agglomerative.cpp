#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <vector>

#include "peerscope/cluster.hpp"

namespace peerscope::cluster {

namespace {

double point_distance(const Eigen::MatrixXd& points, Eigen::Index i, Eigen::Index j,
                      Metric metric) {
    if (metric == Metric::euclidean) return (points.row(i) - points.row(j)).norm();
    double ni = points.row(i).norm(), nj = points.row(j).norm();
    if (ni == 0.0 || nj == 0.0) return 1.0;
    return 1.0 - points.row(i).dot(points.row(j)) / (ni * nj);
}

}  // namespace

AgglomerativeResult agglomerate(const Eigen::MatrixXd& points, Linkage linkage,
                                Metric metric, int n_clusters) {
    const Eigen::Index n = points.rows();
    if (n_clusters < 1 || n_clusters > n)
        throw std::runtime_error("agglomerate: n_clusters out of range");
    if (linkage == Linkage::ward && metric != Metric::euclidean)
        throw std::runtime_error("ward linkage requires the euclidean metric");

    // Ward maintains squared distances through the recurrence; the reported
    // merge height is the square root.
    const bool squared = linkage == Linkage::ward;

    std::vector<bool> active(static_cast<size_t>(n), true);
    std::vector<int> size(static_cast<size_t>(n), 1);
    std::vector<std::vector<double>> dist(static_cast<size_t>(n),
                                          std::vector<double>(static_cast<size_t>(n), 0.0));
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) {
            double d = point_distance(points, i, j, metric);
            if (squared) d = d * d;
            dist[static_cast<size_t>(i)][static_cast<size_t>(j)] = d;
            dist[static_cast<size_t>(j)][static_cast<size_t>(i)] = d;
        }

    AgglomerativeResult result;
    int remaining = static_cast<int>(n);
    while (remaining > n_clusters) {
        int bi = -1, bj = -1;
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            if (!active[static_cast<size_t>(i)]) continue;
            for (int j = i + 1; j < n; ++j) {
                if (!active[static_cast<size_t>(j)]) continue;
                double d = dist[static_cast<size_t>(i)][static_cast<size_t>(j)];
                if (d < best) { best = d; bi = i; bj = j; }
                // Equal distances fall through: the scan order already visits
                // (i, j) pairs in lexicographic order, so the first hit wins.
            }
        }

        double height = squared ? std::sqrt(best) : best;
        result.merges.push_back({bi, bj, height});

        const double ni = size[static_cast<size_t>(bi)];
        const double nj = size[static_cast<size_t>(bj)];
        for (int k = 0; k < n; ++k) {
            if (!active[static_cast<size_t>(k)] || k == bi || k == bj) continue;
            const double dki = dist[static_cast<size_t>(k)][static_cast<size_t>(bi)];
            const double dkj = dist[static_cast<size_t>(k)][static_cast<size_t>(bj)];
            double merged;
            switch (linkage) {
                case Linkage::single:
                    merged = std::min(dki, dkj);
                    break;
                case Linkage::complete:
                    merged = std::max(dki, dkj);
                    break;
                case Linkage::average:
                    merged = (ni * dki + nj * dkj) / (ni + nj);
                    break;
                case Linkage::ward: {
                    const double nk = size[static_cast<size_t>(k)];
                    merged = ((ni + nk) * dki + (nj + nk) * dkj - nk * best) /
                             (ni + nj + nk);
                    break;
                }
            }
            dist[static_cast<size_t>(bi)][static_cast<size_t>(k)] = merged;
            dist[static_cast<size_t>(k)][static_cast<size_t>(bi)] = merged;
        }
        size[static_cast<size_t>(bi)] += size[static_cast<size_t>(bj)];
        active[static_cast<size_t>(bj)] = false;
        --remaining;
    }

    // Trace each point to its surviving cluster id, then number clusters by
    // their smallest member.
    std::vector<int> owner(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) owner[static_cast<size_t>(i)] = i;
    for (const Merge& m : result.merges)
        for (int i = 0; i < n; ++i)
            if (owner[static_cast<size_t>(i)] == m.b) owner[static_cast<size_t>(i)] = m.a;

    std::map<int, int> relabel;  // ordered: first-seen == smallest member index
    result.labels.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        auto [it, inserted] =
            relabel.emplace(owner[static_cast<size_t>(i)], static_cast<int>(relabel.size()));
        result.labels[static_cast<size_t>(i)] = it->second;
    }
    return result;
}

}  // namespace peerscope::cluster
