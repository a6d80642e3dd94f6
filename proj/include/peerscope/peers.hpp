#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "peerscope/cluster.hpp"

namespace peerscope::peers {

struct FinancialRecord {
    std::string ticker;
    std::optional<double> price;
    std::optional<double> market_cap;
    std::optional<double> net_debt;
    std::optional<double> enterprise_value;  // derived from mc + nd when absent
    std::optional<double> sales;
    std::optional<double> ebitda;
    std::optional<double> ebit;
    std::optional<double> earnings;
    std::optional<double> beta;
    std::optional<double> cost_of_equity;
    std::optional<double> cost_of_debt;
    std::optional<double> tax_rate;
    std::optional<double> dividend_next;
    std::optional<double> dividend_growth;
};

struct FinancialTable {
    std::vector<FinancialRecord> records;
    std::string units;  // from the "# units:" comment, may be empty
};

// CSV: ticker,price,market_cap,net_debt,enterprise_value,sales,ebitda,ebit,
// earnings,beta,cost_of_equity,cost_of_debt,tax_rate,dividend_next,
// dividend_growth. Blank cells mean missing. Enforces market_cap > 0 and
// EV = market_cap + net_debt within 0.5% when all three are present.
FinancialTable load_financials(const std::filesystem::path& path);

const std::vector<std::string>& default_features();  // ev_sales ... market_cap

// n x d feature matrix over `features` (NaN = missing/undefined), rows
// aligned with `records`.
Eigen::MatrixXd financial_feature_matrix(const std::vector<FinancialRecord>& records,
                                         const std::vector<std::string>& features);

enum class Space { busdesc, financial };

struct PeerInfo {
    std::string ticker;
    double distance = 0.0;
    bool imputed = false;          // financial space only
    std::vector<int> imputed_cols; // feature columns that were imputed
};

struct PeerGroup {
    std::string target;
    std::vector<PeerInfo> peers;  // ascending distance; may exceed n on ties
    Space space = Space::busdesc;
    int cluster_id = 0;
    bool truncated = false;  // cluster smaller than requested n
};

// Nearest neighbours of `target` inside its cluster, euclidean. Financial
// space z-scores each column over the cluster's members after cluster-median
// imputation of missing cells. Candidates tied with the n-th distance are all
// included.
PeerGroup knn_peers(const std::string& target,
                    const cluster::ClusterAssignment& assignment,
                    const Eigen::MatrixXd& features,
                    const std::vector<std::string>& row_tickers, int n_peers,
                    Space space);

struct OverlapStats {
    double precision = 0.0;
    double recall = 0.0;
    double jaccard = 0.0;
};

// Set overlap of model peers vs an expert list; expert tickers missing from
// `corpus_tickers` are excluded before scoring.
OverlapStats benchmark_overlap(const PeerGroup& model_peers,
                               const std::set<std::string>& expert_peers,
                               const std::set<std::string>& corpus_tickers);

}  // namespace peerscope::peers
