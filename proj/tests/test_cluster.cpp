#include <doctest.h>

#include <Eigen/Dense>

#include "peerscope/cluster.hpp"
#include "peerscope/linalg.hpp"
#include "support/oracles.hpp"

using namespace peerscope;

TEST_CASE("rbf affinity matches exp(-gamma d^2) with unit diagonal") {
    Eigen::MatrixXd p(2, 2);
    p << 0, 0, 1, 1;  // distance sqrt(2)
    cluster::AffinityMatrix a = cluster::affinity_from_points(p, cluster::AffinityKind::rbf, 1.0);
    CHECK(a.entries(0, 0) == doctest::Approx(1.0));
    CHECK(a.entries(0, 1) == doctest::Approx(0.1353352832366127).epsilon(1e-15));
    CHECK(a.entries(1, 0) == a.entries(0, 1));
}

TEST_CASE("cosine affinity clamps negative similarity to zero") {
    Eigen::MatrixXd p(2, 2);
    p << 1, 0, -1, 0;  // opposite directions
    cluster::AffinityMatrix a =
        cluster::affinity_from_points(p, cluster::AffinityKind::cosine);
    CHECK(a.entries(0, 1) == 0.0);
    CHECK(a.entries(0, 0) == 1.0);
}

TEST_CASE("knn_graph affinity is a symmetrized 0/1 adjacency with zero diagonal") {
    Eigen::MatrixXd p(4, 1);
    p << 0.0, 1.0, 2.0, 10.0;
    cluster::AffinityMatrix a =
        cluster::affinity_from_points(p, cluster::AffinityKind::knn_graph, 1.0, 1);
    CHECK(a.entries(0, 0) == 0.0);
    CHECK(a.entries(0, 1) == 1.0);   // 0's nearest is 1
    CHECK(a.entries(3, 2) == 1.0);   // 3's nearest is 2, symmetrized back
    CHECK(a.entries(2, 3) == 1.0);
    CHECK(a.entries == a.entries.transpose().eval());
    CHECK_THROWS(cluster::affinity_from_points(p, cluster::AffinityKind::knn_graph, 1.0, 4));
}

TEST_CASE("laplacian embedding rows are unit length and separate blocks") {
    // Two disjoint cliques -> embedding must separate them perfectly.
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(6, 6);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a(i, j) = a(i + 3, j + 3) = 1.0;
    cluster::AffinityMatrix am;
    am.n = 6;
    am.entries = a;
    Eigen::MatrixXd emb = cluster::normalized_laplacian_embedding(am, 2);
    REQUIRE(emb.rows() == 6);
    REQUIRE(emb.cols() == 2);
    for (Eigen::Index i = 0; i < 6; ++i)
        CHECK(emb.row(i).norm() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK((emb.row(0) - emb.row(1)).norm() < 1e-8);
    CHECK((emb.row(0) - emb.row(3)).norm() > 0.5);
}

TEST_CASE("laplacian eigenvalues live in [0, 2]") {
    std::vector<int> truth;
    Eigen::MatrixXd pts = testsupport::make_blobs(
        {Eigen::Vector2d(0, 0), Eigen::Vector2d(3, 1)}, 15, 1.0, 21, &truth);
    cluster::AffinityMatrix am =
        cluster::affinity_from_points(pts, cluster::AffinityKind::rbf, 0.5);
    Eigen::Index n = am.n;
    Eigen::VectorXd deg = am.entries.rowwise().sum();
    Eigen::VectorXd inv_sqrt = deg.array().rsqrt();
    Eigen::MatrixXd lsym = Eigen::MatrixXd::Identity(n, n) -
                           inv_sqrt.asDiagonal() * am.entries * inv_sqrt.asDiagonal();
    lsym = 0.5 * (lsym + lsym.transpose().eval());
    linalg::EighResult r = linalg::eigh(lsym);
    CHECK(r.eigenvalues.minCoeff() >= -1e-9);
    CHECK(r.eigenvalues.maxCoeff() <= 2.0 + 1e-9);
}

TEST_CASE("spectral clustering recovers blobs with both assignment modes") {
    std::vector<int> truth;
    Eigen::MatrixXd pts = testsupport::make_blobs(
        {Eigen::Vector2d(0, 0), Eigen::Vector2d(8, 0), Eigen::Vector2d(4, 7)}, 18, 0.5,
        99, &truth);
    cluster::ClusteringConfig config;
    config.n_clusters = 3;
    config.affinity = cluster::AffinityKind::rbf;
    config.rbf_gamma = 0.5;

    SUBCASE("kmeans assignment") {
        config.assign = cluster::Assign::kmeans;
        cluster::ClusterAssignment r = cluster::spectral_cluster_points(pts, config);
        CHECK(testsupport::adjusted_rand_index(r.labels, truth) == doctest::Approx(1.0));
        CHECK(r.n_clusters == 3);
    }
    SUBCASE("discretize assignment") {
        config.assign = cluster::Assign::discretize;
        cluster::ClusterAssignment r = cluster::spectral_cluster_points(pts, config);
        CHECK(testsupport::adjusted_rand_index(r.labels, truth) == doctest::Approx(1.0));
    }
}

TEST_CASE("isolated vertices become trailing singleton clusters") {
    // Unit vectors; point 4 is orthogonal to everything else, so its cosine
    // affinity row is zero off the diagonal.
    Eigen::MatrixXd pts = Eigen::MatrixXd::Zero(5, 3);
    pts(0, 0) = pts(1, 0) = 1.0;
    pts(2, 1) = pts(3, 1) = 1.0;
    pts(4, 2) = 1.0;

    cluster::ClusteringConfig config;
    config.n_clusters = 2;
    config.affinity = cluster::AffinityKind::cosine;
    cluster::ClusterAssignment r = cluster::spectral_cluster_points(pts, config);
    CHECK(r.labels[4] == 2);  // singleton label appended after the k requested
    CHECK(r.n_clusters == 3);
    CHECK(r.labels[0] == r.labels[1]);
    CHECK(r.labels[2] == r.labels[3]);
    CHECK(r.labels[0] != r.labels[2]);
}

TEST_CASE("k equal to point count yields the identity partition") {
    Eigen::MatrixXd pts = testsupport::make_blobs({Eigen::Vector2d(0, 0)}, 5, 1.0, 2, nullptr);
    cluster::ClusteringConfig config;
    config.n_clusters = 5;
    config.affinity = cluster::AffinityKind::rbf;  // strictly positive, nobody isolated
    cluster::ClusterAssignment r = cluster::spectral_cluster_points(pts, config);
    std::vector<int> expect = {0, 1, 2, 3, 4};
    CHECK(r.labels == expect);
}

TEST_CASE("config validation rejects inconsistent combinations") {
    cluster::ClusteringConfig config;
    config.algorithm = cluster::Algorithm::agglomerative;
    config.linkage = cluster::Linkage::ward;
    config.metric = cluster::Metric::cosine;
    CHECK_THROWS(config.validate());

    cluster::ClusteringConfig bad_k;
    bad_k.n_clusters = 0;
    CHECK_THROWS(bad_k.validate());

    cluster::ClusteringConfig bad_gamma;
    bad_gamma.affinity = cluster::AffinityKind::rbf;
    bad_gamma.rbf_gamma = -1.0;
    CHECK_THROWS(bad_gamma.validate());
}

TEST_CASE("discretize recovers labels from a clean indicator embedding") {
    Eigen::MatrixXd emb(6, 2);
    emb << 1, 0, 1, 0, 1, 0, 0, 1, 0, 1, 0, 1;
    std::vector<int> labels = cluster::discretize(emb, 3);
    CHECK(labels[0] == labels[1]);
    CHECK(labels[1] == labels[2]);
    CHECK(labels[3] == labels[4]);
    CHECK(labels[4] == labels[5]);
    CHECK(labels[0] != labels[3]);
}
