#include "peerscope/kmeans.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "peerscope/rng.hpp"

namespace peerscope::cluster {

namespace {

double sq_dist(const Eigen::MatrixXd& points, Eigen::Index i, const Eigen::RowVectorXd& c) {
    return (points.row(i) - c).squaredNorm();
}

Eigen::MatrixXd seed_plus_plus(const Eigen::MatrixXd& points, int k, rng::SplitMix64& rng) {
    const Eigen::Index n = points.rows();
    Eigen::MatrixXd centers(k, points.cols());
    std::vector<bool> chosen(static_cast<size_t>(n), false);

    Eigen::Index first = static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::uint64_t>(n)));
    centers.row(0) = points.row(first);
    chosen[static_cast<size_t>(first)] = true;

    std::vector<double> d2(static_cast<size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
        d2[static_cast<size_t>(i)] = sq_dist(points, i, centers.row(0));

    for (int c = 1; c < k; ++c) {
        double total = std::accumulate(d2.begin(), d2.end(), 0.0);
        Eigen::Index pick = -1;
        if (total > 0.0) {
            double r = rng.uniform() * total;
            double acc = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                acc += d2[static_cast<size_t>(i)];
                if (r <= acc) { pick = i; break; }
            }
            if (pick < 0) pick = n - 1;
        } else {
            // All remaining points coincide with a center; take the first unchosen.
            for (Eigen::Index i = 0; i < n; ++i)
                if (!chosen[static_cast<size_t>(i)]) { pick = i; break; }
            if (pick < 0) pick = 0;
        }
        centers.row(c) = points.row(pick);
        chosen[static_cast<size_t>(pick)] = true;
        for (Eigen::Index i = 0; i < n; ++i)
            d2[static_cast<size_t>(i)] =
                std::min(d2[static_cast<size_t>(i)], sq_dist(points, i, centers.row(c)));
    }
    return centers;
}

KMeansResult lloyd(const Eigen::MatrixXd& points, int k, rng::SplitMix64& rng, int max_iter) {
    const Eigen::Index n = points.rows();
    KMeansResult res;
    res.centers = seed_plus_plus(points, k, rng);
    res.labels.assign(static_cast<size_t>(n), -1);

    for (int iter = 0; iter < max_iter; ++iter) {
        bool changed = false;
        double inertia = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            int best = 0;
            double best_d = sq_dist(points, i, res.centers.row(0));
            for (int c = 1; c < k; ++c) {
                double d = sq_dist(points, i, res.centers.row(c));
                if (d < best_d) { best_d = d; best = c; }
            }
            inertia += best_d;
            if (res.labels[static_cast<size_t>(i)] != best) {
                res.labels[static_cast<size_t>(i)] = best;
                changed = true;
            }
        }
        res.inertia = inertia;
        res.inertia_history.push_back(inertia);
        if (!changed) break;

        std::vector<Eigen::Index> counts(static_cast<size_t>(k), 0);
        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, points.cols());
        for (Eigen::Index i = 0; i < n; ++i) {
            sums.row(res.labels[static_cast<size_t>(i)]) += points.row(i);
            ++counts[static_cast<size_t>(res.labels[static_cast<size_t>(i)])];
        }

        // Empty clusters grab the points farthest from their assigned centers.
        std::vector<int> empties;
        for (int c = 0; c < k; ++c)
            if (counts[static_cast<size_t>(c)] == 0) empties.push_back(c);
        if (!empties.empty()) {
            std::vector<Eigen::Index> by_contrib(static_cast<size_t>(n));
            std::iota(by_contrib.begin(), by_contrib.end(), 0);
            std::vector<double> contrib(static_cast<size_t>(n));
            for (Eigen::Index i = 0; i < n; ++i)
                contrib[static_cast<size_t>(i)] =
                    sq_dist(points, i, res.centers.row(res.labels[static_cast<size_t>(i)]));
            std::sort(by_contrib.begin(), by_contrib.end(), [&](Eigen::Index a, Eigen::Index b) {
                if (contrib[static_cast<size_t>(a)] != contrib[static_cast<size_t>(b)])
                    return contrib[static_cast<size_t>(a)] > contrib[static_cast<size_t>(b)];
                return a < b;
            });
            for (size_t e = 0; e < empties.size() && e < by_contrib.size(); ++e) {
                Eigen::Index src = by_contrib[e];
                sums.row(res.labels[static_cast<size_t>(src)]) -= points.row(src);
                --counts[static_cast<size_t>(res.labels[static_cast<size_t>(src)])];
                res.labels[static_cast<size_t>(src)] = empties[e];
                sums.row(empties[e]) = points.row(src);
                counts[static_cast<size_t>(empties[e])] = 1;
                changed = true;
            }
        }

        for (int c = 0; c < k; ++c)
            if (counts[static_cast<size_t>(c)] > 0)
                res.centers.row(c) =
                    sums.row(c) / static_cast<double>(counts[static_cast<size_t>(c)]);
    }

    res.empty_clusters.clear();
    std::vector<bool> used(static_cast<size_t>(k), false);
    for (int lbl : res.labels) used[static_cast<size_t>(lbl)] = true;
    for (int c = 0; c < k; ++c)
        if (!used[static_cast<size_t>(c)]) res.empty_clusters.push_back(c);
    return res;
}

}  // namespace

KMeansResult kmeans(const Eigen::MatrixXd& points, int n_clusters,
                    std::uint64_t rng_seed, int n_init, int max_iter) {
    const Eigen::Index n = points.rows();
    if (n_clusters < 1) throw std::runtime_error("kmeans: n_clusters must be >= 1");
    if (n_clusters > n)
        throw std::runtime_error("kmeans: n_clusters exceeds number of points");

    rng::SplitMix64 seeder(rng_seed);
    KMeansResult best;
    double best_inertia = std::numeric_limits<double>::infinity();
    for (int run = 0; run < n_init; ++run) {
        rng::SplitMix64 rng(seeder.next());
        KMeansResult res = lloyd(points, n_clusters, rng, max_iter);
        if (res.inertia < best_inertia) {
            best_inertia = res.inertia;
            best = std::move(res);
        }
    }
    return best;
}

}  // namespace peerscope::cluster
