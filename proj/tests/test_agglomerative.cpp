#include <doctest.h>

#include <Eigen/Dense>

#include "peerscope/cluster.hpp"
#include "support/oracles.hpp"

using namespace peerscope;
using cluster::Linkage;
using cluster::Metric;

TEST_CASE("three points on a line merge nearest pair first") {
    Eigen::MatrixXd p(3, 1);
    p << 0.0, 1.0, 10.0;
    cluster::AgglomerativeResult r =
        cluster::agglomerate(p, Linkage::single, Metric::euclidean, 1);
    REQUIRE(r.merges.size() == 2);
    CHECK(r.merges[0].a == 0);
    CHECK(r.merges[0].b == 1);
    CHECK(r.merges[0].height == doctest::Approx(1.0));
    CHECK(r.merges[1].height == doctest::Approx(9.0));  // single linkage: d(1,10)

    cluster::AgglomerativeResult two =
        cluster::agglomerate(p, Linkage::single, Metric::euclidean, 2);
    CHECK(two.labels == std::vector<int>{0, 0, 1});
}

TEST_CASE("complete and average linkage heights differ as expected") {
    Eigen::MatrixXd p(3, 1);
    p << 0.0, 1.0, 10.0;
    auto complete = cluster::agglomerate(p, Linkage::complete, Metric::euclidean, 1);
    CHECK(complete.merges[1].height == doctest::Approx(10.0));  // d(0,10)
    auto average = cluster::agglomerate(p, Linkage::average, Metric::euclidean, 1);
    CHECK(average.merges[1].height == doctest::Approx(9.5));  // mean of 9 and 10
}

TEST_CASE("ward reduces to euclidean distance for singleton merges") {
    Eigen::MatrixXd p(2, 2);
    p << 0, 0, 3, 4;
    auto r = cluster::agglomerate(p, Linkage::ward, Metric::euclidean, 1);
    REQUIRE(r.merges.size() == 1);
    CHECK(r.merges[0].height == doctest::Approx(5.0));
}

TEST_CASE("ward with cosine metric is rejected") {
    Eigen::MatrixXd p(3, 2);
    p << 1, 0, 0, 1, 1, 1;
    CHECK_THROWS(cluster::agglomerate(p, Linkage::ward, Metric::cosine, 1));
}

TEST_CASE("cosine distance treats zero vectors as maximally distant") {
    Eigen::MatrixXd p(3, 2);
    p << 1, 0, 1, 0, 0, 0;  // third row is the zero vector
    auto r = cluster::agglomerate(p, Linkage::single, Metric::cosine, 2);
    CHECK(r.labels == std::vector<int>{0, 0, 1});
    CHECK(r.merges[0].height == doctest::Approx(0.0));
}

TEST_CASE("labels are numbered by smallest member index") {
    Eigen::MatrixXd p(4, 1);
    p << 100.0, 0.0, 0.2, 100.1;
    auto r = cluster::agglomerate(p, Linkage::average, Metric::euclidean, 2);
    // Cluster containing point 0 gets label 0 even though it merged later.
    CHECK(r.labels == std::vector<int>{0, 1, 1, 0});
}

TEST_CASE("merge heights are monotone for the supported linkages") {
    for (Linkage linkage :
         {Linkage::single, Linkage::complete, Linkage::average, Linkage::ward}) {
        Eigen::MatrixXd pts = testsupport::make_blobs(
            {Eigen::Vector2d(0, 0), Eigen::Vector2d(5, 5)}, 10, 1.5,
            static_cast<std::uint64_t>(linkage) + 17, nullptr);
        auto r = cluster::agglomerate(pts, linkage, Metric::euclidean, 1);
        for (size_t i = 1; i < r.merges.size(); ++i)
            CHECK(r.merges[i].height >= r.merges[i - 1].height - 1e-9);
    }
}

TEST_CASE("agglomerative matches the from-definition oracle on random instances") {
    rng::SplitMix64 rng{2024};
    for (int trial = 0; trial < 40; ++trial) {
        int n = 4 + static_cast<int>(rng.uniform_index(5));  // 4..8
        Eigen::MatrixXd pts(n, 2);
        for (int i = 0; i < n; ++i) {
            pts(i, 0) = rng.uniform() * 10.0;
            pts(i, 1) = rng.uniform() * 10.0;
        }
        int k = 1 + static_cast<int>(rng.uniform_index(static_cast<size_t>(n)));
        for (Linkage linkage :
             {Linkage::single, Linkage::complete, Linkage::average, Linkage::ward}) {
            auto r = cluster::agglomerate(pts, linkage, Metric::euclidean, k);
            auto want = testsupport::agglomerative_oracle(pts, linkage, k);
            CHECK_MESSAGE(r.labels == want,
                          "trial " << trial << " linkage " << cluster::to_string(linkage)
                                   << " k " << k);
        }
    }
}

TEST_CASE("blob recovery through the config interface") {
    std::vector<int> truth;
    Eigen::MatrixXd pts = testsupport::make_blobs(
        {Eigen::Vector2d(0, 0), Eigen::Vector2d(9, 0), Eigen::Vector2d(4, 8)}, 16, 0.6,
        5, &truth);
    cluster::ClusteringConfig config;
    config.algorithm = cluster::Algorithm::agglomerative;
    config.n_clusters = 3;
    config.linkage = cluster::Linkage::ward;
    cluster::ClusterAssignment r = cluster::agglomerative_cluster_points(pts, config);
    CHECK(testsupport::adjusted_rand_index(r.labels, truth) == doctest::Approx(1.0));
    CHECK(r.n_clusters == 3);
}
