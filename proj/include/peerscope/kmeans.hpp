#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace peerscope::cluster {

struct KMeansResult {
    std::vector<int> labels;
    double inertia = 0.0;
    Eigen::MatrixXd centers;               // n_clusters x d
    std::vector<double> inertia_history;   // per Lloyd iteration, winning restart
    std::vector<int> empty_clusters;       // labels that ended with no members
};

// k-means++ seeding, Lloyd iterations (<= 300) until labels are stable,
// n_init = 10 restarts with seeds derived from rng_seed, minimum-inertia
// winner. Empty clusters are re-seeded to the farthest point.
KMeansResult kmeans(const Eigen::MatrixXd& points, int n_clusters,
                    std::uint64_t rng_seed, int n_init = 10, int max_iter = 300);

}  // namespace peerscope::cluster
