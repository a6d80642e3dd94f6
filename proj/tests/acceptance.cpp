// Acceptance gate: one PASS/FAIL line per criterion, exit = failure count.
#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "peerscope/cluster.hpp"
#include "peerscope/corpus.hpp"
#include "peerscope/csv.hpp"
#include "peerscope/linalg.hpp"
#include "peerscope/peers.hpp"
#include "peerscope/quality.hpp"
#include "peerscope/rng.hpp"
#include "peerscope/stemmer.hpp"
#include "peerscope/valuation.hpp"
#include "support/oracles.hpp"
#include "support/paths.hpp"

using namespace peerscope;
namespace fs = std::filesystem;

namespace {

struct Gate {
    bool ok = true;
    std::vector<std::string> notes;

    void expect(bool cond, const std::string& msg) {
        if (!cond) {
            ok = false;
            notes.push_back(msg);
        }
    }
    void note(const std::string& msg) { notes.push_back(msg); }
};

std::string fmt(double v, int prec = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    return buf;
}

int run_command(const std::string& cmd) {
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// ---- criterion 1: beverage comps reproduction ------------------------------

void criterion_beverage(Gate& gate) {
    peers::FinancialTable fin =
        peers::load_financials(testsupport::data_dir() / "beverage_financials.csv");
    valuation::CompsTable table = valuation::comps_table(fin.records);

    const std::map<std::string, std::array<const char*, 4>> expected = {
        {"KO", {"4.0x", "14.1x", "16.6x", "22.8x"}},
        {"PEP", {"2.2x", "11.7x", "14.6x", "22.1x"}},
        {"DPS", {"2.1x", "9.7x", "11.6x", "16.7x"}},
        {"MNST", {"4.9x", "18.1x", "18.9x", "32.5x"}},
        {"FIZZ", {"1.5x", "12.5x", "14.6x", "23.5x"}},
    };
    const std::array<const char*, 4> expected_mean = {"2.9x", "13.2x", "15.3x", "23.5x"};
    const std::array<const char*, 4> expected_median = {"2.2x", "12.5x", "14.6x", "22.8x"};
    const std::array<const char*, 4> col_names = {"EV/Sales", "EV/EBITDA", "EV/EBIT", "P/E"};

    auto check_row = [&](const std::string& label,
                         const std::array<std::optional<double>, 4>& got,
                         const std::array<const char*, 4>& want) {
        for (size_t c = 0; c < 4; ++c) {
            std::string shown = valuation::format_multiple(got[c]);
            gate.expect(shown == want[c], label + " " + col_names[c] + ": computed " +
                                              shown + ", published " + want[c] +
                                              (got[c] ? " (raw " + fmt(*got[c], 10) + ")" : ""));
        }
    };

    for (const auto& row : table.rows) {
        auto it = expected.find(row.ticker);
        if (it == expected.end()) continue;
        check_row(row.ticker, {row.ev_sales, row.ev_ebitda, row.ev_ebit, row.pe},
                  it->second);
    }
    check_row("mean",
              {table.mean_row.ev_sales, table.mean_row.ev_ebitda, table.mean_row.ev_ebit,
               table.mean_row.pe},
              expected_mean);
    check_row("median",
              {table.median_row.ev_sales, table.median_row.ev_ebitda,
               table.median_row.ev_ebit, table.median_row.pe},
              expected_median);
    if (!gate.ok)
        gate.note("computed values follow from the stated inputs; the published grid "
                  "appears to round from unrounded source data");
}

// ---- criterion 2: Microsoft cost-of-equity ---------------------------------

void criterion_msft_coe(Gate& gate) {
    peers::FinancialTable fin =
        peers::load_financials(testsupport::data_dir() / "msft_peer_coe.csv");
    valuation::PrivateCoeResult r =
        valuation::private_cost_of_equity(fin.records, valuation::CoeMethod::avg_coe);
    gate.expect(r.used.size() == 7, "expected 7 contributing peers, got " +
                                        std::to_string(r.used.size()));
    gate.expect(std::abs(r.value - 0.0735) <= 0.00005,
                "avg_coe = " + fmt(r.value, 10) + ", want 0.0735 +/- 0.00005");
    double true_coe = 0.073, industry_avg = 0.0635;
    gate.expect(std::abs(r.value - true_coe) < std::abs(industry_avg - true_coe),
                "peer average is not closer to the true cost of equity than the "
                "industry average");
}

// ---- criterion 3: formula identities ----------------------------------------

void criterion_identities(Gate& gate) {
    for (double rf : {0.0, 0.02, 0.05}) {
        for (double rm : {0.04, 0.08}) {
            gate.expect(std::abs(valuation::capm({rf, 0.0, rm}) - rf) <= 1e-12,
                        "capm(beta=0) != Rf at rf=" + fmt(rf));
            gate.expect(std::abs(valuation::capm({rf, 1.0, rm}) - rm) <= 1e-12,
                        "capm(beta=1) != Rm at rm=" + fmt(rm));
        }
    }
    for (double re : {0.05, 0.073, 0.12}) {
        double w = valuation::wacc({812.0, 0.0, re, 0.04, 0.3});
        gate.expect(std::abs(w - re) <= 1e-12, "wacc(D=0) != Re at re=" + fmt(re));
    }
    for (double g : {0.0, 0.025, 0.06}) {
        double ke = valuation::gordon_growth_cost_of_equity({0.0, 37.5, g});
        gate.expect(std::abs(ke - g) <= 1e-12, "gordon(D1=0) != g at g=" + fmt(g));
    }
}

// ---- criterion 4: clustering oracle suite ----------------------------------

void criterion_clustering(Gate& gate) {
    // (a) nested rings, knn_graph affinity
    std::vector<int> ring_truth;
    Eigen::MatrixXd rings = testsupport::make_rings(100, 1.0, 3.0, 0.05, 424, &ring_truth);
    cluster::ClusteringConfig rc;
    rc.n_clusters = 2;
    rc.affinity = cluster::AffinityKind::knn_graph;
    rc.knn_k = 10;
    cluster::ClusterAssignment ra = cluster::spectral_cluster_points(rings, rc);
    double ring_ari = testsupport::adjusted_rand_index(ra.labels, ring_truth);
    gate.expect(ring_ari == 1.0, "rings ARI = " + fmt(ring_ari, 12) + ", want 1.0");

    // (b) three Gaussian blobs, spectral and agglomerative
    std::vector<int> blob_truth;
    Eigen::MatrixXd blobs = testsupport::make_blobs(
        {Eigen::Vector2d(0, 0), Eigen::Vector2d(10, 0), Eigen::Vector2d(5, 9)}, 50, 0.8,
        425, &blob_truth);
    cluster::ClusteringConfig sc;
    sc.n_clusters = 3;
    sc.affinity = cluster::AffinityKind::rbf;
    sc.rbf_gamma = 0.5;
    double ari_spec = testsupport::adjusted_rand_index(
        cluster::spectral_cluster_points(blobs, sc).labels, blob_truth);
    gate.expect(ari_spec >= 0.99, "spectral blob ARI = " + fmt(ari_spec, 12));

    cluster::ClusteringConfig ac;
    ac.algorithm = cluster::Algorithm::agglomerative;
    ac.n_clusters = 3;
    ac.linkage = cluster::Linkage::ward;
    double ari_aggl = testsupport::adjusted_rand_index(
        cluster::agglomerative_cluster_points(blobs, ac).labels, blob_truth);
    gate.expect(ari_aggl >= 0.99, "agglomerative blob ARI = " + fmt(ari_aggl, 12));

    // (c) brute-force merge oracle on small random instances
    rng::SplitMix64 rng{426};
    int mismatches = 0;
    for (int trial = 0; trial < 100; ++trial) {
        int n = 3 + static_cast<int>(rng.uniform_index(6));  // 3..8
        Eigen::MatrixXd pts(n, 2);
        for (int i = 0; i < n; ++i) {
            pts(i, 0) = rng.uniform() * 8.0;
            pts(i, 1) = rng.uniform() * 8.0;
        }
        int k = 1 + static_cast<int>(rng.uniform_index(static_cast<size_t>(n)));
        for (cluster::Linkage linkage :
             {cluster::Linkage::single, cluster::Linkage::complete,
              cluster::Linkage::average, cluster::Linkage::ward}) {
            auto got = cluster::agglomerate(pts, linkage, cluster::Metric::euclidean, k);
            auto want = testsupport::agglomerative_oracle(pts, linkage, k);
            if (got.labels != want) {
                ++mismatches;
                if (mismatches == 1)
                    gate.note("first mismatch: trial " + std::to_string(trial) +
                              ", linkage " + cluster::to_string(linkage) + ", k " +
                              std::to_string(k));
            }
        }
    }
    gate.expect(mismatches == 0,
                std::to_string(mismatches) + " oracle mismatches out of 400 runs");
}

// ---- criterion 5: index oracles and sweep selection ------------------------

void criterion_indices(Gate& gate) {
    rng::SplitMix64 rng{525};
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        int n = 8 + static_cast<int>(rng.uniform_index(25));
        int k = 2 + static_cast<int>(rng.uniform_index(4));
        Eigen::MatrixXd pts(n, 3);
        std::vector<int> labels(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) {
            for (int d = 0; d < 3; ++d) pts(i, d) = rng.uniform() * 5.0;
            labels[static_cast<size_t>(i)] =
                static_cast<int>(rng.uniform_index(static_cast<size_t>(k)));
        }
        for (int c = 0; c < k && c < n; ++c) labels[static_cast<size_t>(c)] = c;
        double got = quality::silhouette(pts, labels).silhouette;
        double want = testsupport::silhouette_oracle(pts, labels);
        worst = std::max(worst, std::abs(got - want));
    }
    gate.expect(worst <= 1e-10,
                "max |silhouette - oracle| = " + fmt(worst, 12) + " > 1e-10");

    cluster::ClusteringConfig base;
    base.affinity = cluster::AffinityKind::rbf;
    base.rbf_gamma = 0.5;

    std::vector<int> unused;
    Eigen::MatrixXd two = testsupport::make_blobs(
        {Eigen::Vector2d(0, 0), Eigen::Vector2d(11, 0)}, 25, 0.8, 526, &unused);
    quality::SweepResult s2 =
        quality::sweep_points(two, base, 2, 10, quality::Criterion::silhouette);
    int best2 = s2.entries[s2.best].config.n_clusters;
    gate.expect(best2 == 2, "two-blob sweep picked k=" + std::to_string(best2));

    Eigen::MatrixXd three = testsupport::make_blobs(
        {Eigen::Vector2d(0, 0), Eigen::Vector2d(11, 0), Eigen::Vector2d(5, 10)}, 17, 0.8,
        527, &unused);
    for (quality::Criterion crit :
         {quality::Criterion::silhouette, quality::Criterion::calinski,
          quality::Criterion::davies, quality::Criterion::combined_sil_cal}) {
        quality::SweepResult s3 = quality::sweep_points(three, base, 2, 10, crit);
        int best3 = s3.entries[s3.best].config.n_clusters;
        gate.expect(best3 == 3, "three-blob sweep picked k=" + std::to_string(best3) +
                                    " under " + quality::to_string(crit));
    }
}

// ---- criterion 6: eigensolver quality ---------------------------------------

void criterion_eigensolver(Gate& gate) {
    rng::SplitMix64 rng{626};
    for (Eigen::Index n : {2, 3, 5, 20, 50, 100, 200}) {
        Eigen::MatrixXd m(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) m(i, j) = 2.0 * rng.uniform() - 1.0;
        Eigen::MatrixXd s = 0.5 * (m + m.transpose());
        linalg::EighResult r = linalg::eigh(s);
        double recon = (r.eigenvectors * r.eigenvalues.asDiagonal() *
                            r.eigenvectors.transpose() -
                        s).norm();
        double ortho = (r.eigenvectors.transpose() * r.eigenvectors -
                        Eigen::MatrixXd::Identity(n, n)).norm();
        gate.expect(recon <= 1e-7 * s.norm(), "n=" + std::to_string(n) + ": recon " +
                                                  fmt(recon, 6) + " vs " +
                                                  fmt(1e-7 * s.norm(), 6));
        gate.expect(ortho <= 1e-8,
                    "n=" + std::to_string(n) + ": orthonormality " + fmt(ortho, 6));
    }

    // L_sym spectrum stays in [0, 2]
    std::vector<int> unused;
    Eigen::MatrixXd pts = testsupport::make_blobs(
        {Eigen::Vector2d(0, 0), Eigen::Vector2d(2, 2)}, 30, 1.2, 627, &unused);
    cluster::AffinityMatrix A =
        cluster::affinity_from_points(pts, cluster::AffinityKind::rbf, 0.7);
    Eigen::VectorXd deg = A.entries.rowwise().sum();
    Eigen::VectorXd dinv = deg.array().rsqrt();
    Eigen::MatrixXd lsym = Eigen::MatrixXd::Identity(A.n, A.n) -
                           dinv.asDiagonal() * A.entries * dinv.asDiagonal();
    lsym = 0.5 * (lsym + lsym.transpose().eval());
    linalg::EighResult r = linalg::eigh(lsym);
    gate.expect(r.eigenvalues.minCoeff() >= -1e-9,
                "smallest L_sym eigenvalue " + fmt(r.eigenvalues.minCoeff(), 10));
    gate.expect(r.eigenvalues.maxCoeff() <= 2.0 + 1e-9,
                "largest L_sym eigenvalue " + fmt(r.eigenvalues.maxCoeff(), 10));
}

// ---- criterion 7: stemmer agreement -----------------------------------------

void criterion_stemmer(Gate& gate) {
    std::ifstream in(testsupport::data_dir() / "snowball_reference.tsv");
    gate.expect(in.good(), "cannot open snowball_reference.tsv");
    if (!in.good()) return;
    std::string line;
    size_t total = 0, bad = 0;
    std::string first_bad;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto tab = line.find('\t');
        std::string word = line.substr(0, tab), want = line.substr(tab + 1);
        std::string got = textprep::stem(word);
        if (got != want) {
            if (bad == 0) first_bad = word + " -> " + got + " (want " + want + ")";
            ++bad;
        }
        ++total;
    }
    gate.expect(total >= 1000, "reference sample has only " + std::to_string(total) +
                                   " pairs; need >= 1000");
    gate.expect(bad == 0, std::to_string(bad) + "/" + std::to_string(total) +
                              " mismatches; first: " + first_bad);
    gate.note(std::to_string(total) + " reference pairs checked");
}

// ---- criterion 8: end-to-end mini corpus -----------------------------------

std::map<std::string, std::string> mini_industries() {
    csv::Table meta = csv::read_file(testsupport::data_dir() / "mini" / "meta.csv");
    size_t c_t = meta.column("ticker"), c_i = meta.column("industry");
    std::map<std::string, std::string> out;
    for (const auto& row : meta.rows) out[row[c_t]] = row[c_i];
    return out;
}

void criterion_mini_corpus(Gate& gate) {
    fs::path out = fs::path("scratch") / "acceptance_mini";
    fs::remove_all(out);
    fs::create_directories(out);
    fs::path data = testsupport::data_dir();

    std::string pipeline_cmd =
        testsupport::cli_path() + " pipeline --corpus " + (data / "mini" / "corpus").string() +
        " --meta " + (data / "mini" / "meta.csv").string() + " --fin " +
        (data / "mini" / "financials.csv").string() + " --out " + (out / "run").string() +
        " --seed 1 > " + (out / "pipeline.log").string() + " 2>&1";
    int code = run_command(pipeline_cmd);
    gate.expect(code == 0, "pipeline exited " + std::to_string(code));
    if (code != 0) return;

    auto industries = mini_industries();
    csv::Table assignment = csv::read_file(out / "run" / "assignment.csv");
    size_t c_t = assignment.column("ticker"), c_c = assignment.column("cluster");
    std::vector<int> got, want;
    std::map<std::string, int> industry_ids;
    std::vector<std::string> tickers;
    for (const auto& row : assignment.rows) {
        tickers.push_back(row[c_t]);
        got.push_back(std::stoi(row[c_c]));
        const std::string& ind = industries.at(row[c_t]);
        auto [it, inserted] = industry_ids.emplace(ind, static_cast<int>(industry_ids.size()));
        want.push_back(it->second);
    }
    gate.expect(got.size() == 24, "assignment has " + std::to_string(got.size()) + " rows");
    double ari = testsupport::adjusted_rand_index(got, want);
    int best_k = *std::max_element(got.begin(), got.end()) + 1;
    gate.note("sweep-selected k = " + std::to_string(best_k) + ", ARI = " + fmt(ari, 10));
    gate.expect(ari >= 0.95, "pipeline ARI " + fmt(ari, 10) + " < 0.95");

    // peers --target <any ticker> must stay inside the target's industry
    for (const auto& ticker : tickers) {
        std::string peers_cmd = testsupport::cli_path() + " peers --target " + ticker +
                                " --n 5 --out " + (out / "run").string() + " > " +
                                (out / "peers.log").string() + " 2>&1";
        int pcode = run_command(peers_cmd);
        gate.expect(pcode == 0, "peers --target " + ticker + " exited " +
                                    std::to_string(pcode));
        if (pcode != 0) continue;
        std::ifstream in(out / "run" / "peers" / (ticker + ".json"));
        nlohmann::json j = nlohmann::json::parse(in);
        gate.expect(!j["peers"].empty(), ticker + ": no peers returned");
        for (const auto& p : j["peers"]) {
            std::string peer = p["ticker"].get<std::string>();
            gate.expect(industries.at(peer) == industries.at(ticker),
                        ticker + ": peer " + peer + " is in " + industries.at(peer) +
                            ", not " + industries.at(ticker));
        }
    }
}

// ---- criterion 9: determinism ------------------------------------------------

void criterion_determinism(Gate& gate) {
    fs::path out = fs::path("scratch") / "acceptance_det";
    fs::remove_all(out);
    fs::create_directories(out);
    fs::path data = testsupport::data_dir();

    auto run_once = [&](const std::string& tag) {
        std::string cmd =
            testsupport::cli_path() + " pipeline --corpus " +
            (data / "mini" / "corpus").string() + " --meta " +
            (data / "mini" / "meta.csv").string() + " --out " + (out / tag).string() +
            " --seed 3 > " + (out / (tag + ".log")).string() + " 2>&1";
        return run_command(cmd);
    };
    gate.expect(run_once("a") == 0, "first pipeline run failed");
    gate.expect(run_once("b") == 0, "second pipeline run failed");

    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    for (const char* name : {"assignment.csv", "sweep.csv"}) {
        std::string a = slurp(out / "a" / name), b = slurp(out / "b" / name);
        gate.expect(!a.empty(), std::string(name) + " is empty");
        gate.expect(a == b, std::string(name) + " differs between identical runs");
    }
}

struct Criterion {
    int id;
    std::string name;
    std::function<void(Gate&)> body;
    double budget_seconds;  // 0 = no stated budget
};

}  // namespace

int main() {
    std::vector<Criterion> criteria = {
        {1, "beverage comps reproduction", criterion_beverage, 1.0},
        {2, "Microsoft cost-of-equity reproduction", criterion_msft_coe, 1.0},
        {3, "formula identities", criterion_identities, 0.0},
        {4, "clustering oracle suite", criterion_clustering, 30.0},
        {5, "index oracles and sweep selection", criterion_indices, 30.0},
        {6, "eigensolver quality", criterion_eigensolver, 0.0},
        {7, "stemmer reference agreement", criterion_stemmer, 0.0},
        {8, "end-to-end mini corpus", criterion_mini_corpus, 10.0},
        {9, "pipeline determinism", criterion_determinism, 0.0},
    };

    int failures = 0;
    for (auto& c : criteria) {
        Gate gate;
        auto start = std::chrono::steady_clock::now();
        try {
            c.body(gate);
        } catch (const std::exception& e) {
            gate.expect(false, std::string("exception: ") + e.what());
        }
        double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.budget_seconds > 0.0)
            gate.expect(seconds <= c.budget_seconds,
                        "runtime " + fmt(seconds, 3) + " s exceeds " +
                            fmt(c.budget_seconds, 3) + " s budget");

        std::printf("%s  criterion %d: %s [%.2f s]\n", gate.ok ? "PASS" : "FAIL", c.id,
                    c.name.c_str(), seconds);
        for (const auto& note : gate.notes) std::printf("      - %s\n", note.c_str());
        if (!gate.ok) ++failures;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
                criteria.size());
    return failures;
}
