#include "peerscope/peers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "peerscope/csv.hpp"

namespace peerscope::peers {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::optional<double> parse_cell(const std::vector<std::string>& row, size_t col) {
    if (col == csv::Table::npos || col >= row.size() || row[col].empty())
        return std::nullopt;
    return std::stod(row[col]);
}

double ratio_or_nan(const std::optional<double>& num, const std::optional<double>& den) {
    if (!num || !den || *den <= 0.0) return kNaN;
    return *num / *den;
}

}  // namespace

FinancialTable load_financials(const std::filesystem::path& path) {
    csv::Table table = csv::read_file(path);
    FinancialTable out;
    for (const auto& comment : table.comments) {
        auto pos = comment.find("units:");
        if (pos != std::string::npos) {
            out.units = comment.substr(pos + 6);
            while (!out.units.empty() && out.units.front() == ' ') out.units.erase(0, 1);
        }
    }

    size_t c_ticker = table.column("ticker");
    if (c_ticker == csv::Table::npos)
        throw std::runtime_error(path.string() + ": financial CSV needs a ticker column");
    auto col = [&](const char* name) { return table.column(name); };
    size_t c_price = col("price"), c_mc = col("market_cap"), c_nd = col("net_debt"),
           c_ev = col("enterprise_value"), c_sales = col("sales"), c_ebitda = col("ebitda"),
           c_ebit = col("ebit"), c_earn = col("earnings"), c_beta = col("beta"),
           c_coe = col("cost_of_equity"), c_cod = col("cost_of_debt"),
           c_tax = col("tax_rate"), c_d1 = col("dividend_next"),
           c_g = col("dividend_growth");

    for (const auto& row : table.rows) {
        FinancialRecord rec;
        rec.ticker = row[c_ticker];
        rec.price = parse_cell(row, c_price);
        rec.market_cap = parse_cell(row, c_mc);
        rec.net_debt = parse_cell(row, c_nd);
        rec.enterprise_value = parse_cell(row, c_ev);
        rec.sales = parse_cell(row, c_sales);
        rec.ebitda = parse_cell(row, c_ebitda);
        rec.ebit = parse_cell(row, c_ebit);
        rec.earnings = parse_cell(row, c_earn);
        rec.beta = parse_cell(row, c_beta);
        rec.cost_of_equity = parse_cell(row, c_coe);
        rec.cost_of_debt = parse_cell(row, c_cod);
        rec.tax_rate = parse_cell(row, c_tax);
        rec.dividend_next = parse_cell(row, c_d1);
        rec.dividend_growth = parse_cell(row, c_g);

        if (rec.market_cap && *rec.market_cap <= 0.0)
            throw std::runtime_error(rec.ticker + ": market_cap must be positive");
        if (rec.market_cap && rec.net_debt) {
            double derived = *rec.market_cap + *rec.net_debt;
            if (rec.enterprise_value) {
                double ref = std::max(std::abs(*rec.enterprise_value), 1e-12);
                if (std::abs(*rec.enterprise_value - derived) / ref > 0.005)
                    throw std::runtime_error(
                        rec.ticker + ": enterprise_value differs from market_cap + net_debt by >0.5%");
            } else {
                rec.enterprise_value = derived;
            }
        }
        out.records.push_back(std::move(rec));
    }
    return out;
}

const std::vector<std::string>& default_features() {
    static const std::vector<std::string> features = {"ev_sales", "ev_ebitda", "ev_ebit",
                                                      "pe", "market_cap"};
    return features;
}

Eigen::MatrixXd financial_feature_matrix(const std::vector<FinancialRecord>& records,
                                         const std::vector<std::string>& features) {
    auto value = [](const FinancialRecord& r, const std::string& f) -> double {
        auto plain = [](const std::optional<double>& v) { return v ? *v : kNaN; };
        if (f == "ev_sales") return ratio_or_nan(r.enterprise_value, r.sales);
        if (f == "ev_ebitda") return ratio_or_nan(r.enterprise_value, r.ebitda);
        if (f == "ev_ebit") return ratio_or_nan(r.enterprise_value, r.ebit);
        if (f == "pe") return ratio_or_nan(r.market_cap, r.earnings);
        if (f == "market_cap") return plain(r.market_cap);
        if (f == "price") return plain(r.price);
        if (f == "net_debt") return plain(r.net_debt);
        if (f == "enterprise_value") return plain(r.enterprise_value);
        if (f == "sales") return plain(r.sales);
        if (f == "ebitda") return plain(r.ebitda);
        if (f == "ebit") return plain(r.ebit);
        if (f == "earnings") return plain(r.earnings);
        if (f == "beta") return plain(r.beta);
        throw std::runtime_error("unknown financial feature: " + f);
    };

    Eigen::MatrixXd m(static_cast<Eigen::Index>(records.size()),
                      static_cast<Eigen::Index>(features.size()));
    for (size_t i = 0; i < records.size(); ++i)
        for (size_t j = 0; j < features.size(); ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                value(records[i], features[j]);
    return m;
}

PeerGroup knn_peers(const std::string& target,
                    const cluster::ClusterAssignment& assignment,
                    const Eigen::MatrixXd& features,
                    const std::vector<std::string>& row_tickers, int n_peers,
                    Space space) {
    if (n_peers < 1) throw std::runtime_error("n_peers must be >= 1");
    if (static_cast<size_t>(features.rows()) != row_tickers.size() ||
        row_tickers.size() != assignment.labels.size())
        throw std::runtime_error("knn_peers: features/tickers/labels misaligned");

    auto it = std::find(row_tickers.begin(), row_tickers.end(), target);
    if (it == row_tickers.end())
        throw std::runtime_error("unknown ticker: " + target);
    size_t target_idx = static_cast<size_t>(it - row_tickers.begin());
    int cluster_id = assignment.labels[target_idx];

    std::vector<size_t> members;
    for (size_t i = 0; i < assignment.labels.size(); ++i)
        if (assignment.labels[i] == cluster_id) members.push_back(i);

    PeerGroup group;
    group.target = target;
    group.space = space;
    group.cluster_id = cluster_id;
    if (members.size() <= 1) {
        group.truncated = true;
        return group;
    }

    // Working copy of the cluster's rows; financial space gets imputation +
    // per-column z-scores over exactly these rows.
    Eigen::MatrixXd sub(static_cast<Eigen::Index>(members.size()), features.cols());
    for (size_t a = 0; a < members.size(); ++a)
        sub.row(static_cast<Eigen::Index>(a)) =
            features.row(static_cast<Eigen::Index>(members[a]));

    std::vector<std::vector<int>> imputed(members.size());
    if (space == Space::financial) {
        for (Eigen::Index j = 0; j < sub.cols(); ++j) {
            std::vector<double> present;
            for (Eigen::Index a = 0; a < sub.rows(); ++a)
                if (!std::isnan(sub(a, j))) present.push_back(sub(a, j));
            double median = 0.0;
            if (!present.empty()) {
                std::sort(present.begin(), present.end());
                size_t m = present.size();
                median = m % 2 ? present[m / 2]
                               : (present[m / 2 - 1] + present[m / 2]) / 2.0;
            }
            for (Eigen::Index a = 0; a < sub.rows(); ++a)
                if (std::isnan(sub(a, j))) {
                    sub(a, j) = median;
                    imputed[static_cast<size_t>(a)].push_back(static_cast<int>(j));
                }

            double mean = sub.col(j).mean();
            double var = (sub.col(j).array() - mean).square().mean();
            double sd = std::sqrt(var);
            if (sd > 0.0)
                sub.col(j) = (sub.col(j).array() - mean) / sd;
            else
                sub.col(j).setZero();
        }
    }

    Eigen::Index target_row = -1;
    for (size_t a = 0; a < members.size(); ++a)
        if (members[a] == target_idx) target_row = static_cast<Eigen::Index>(a);

    std::vector<PeerInfo> candidates;
    for (size_t a = 0; a < members.size(); ++a) {
        if (static_cast<Eigen::Index>(a) == target_row) continue;
        PeerInfo info;
        info.ticker = row_tickers[members[a]];
        info.distance = (sub.row(static_cast<Eigen::Index>(a)) - sub.row(target_row)).norm();
        info.imputed = !imputed[a].empty();
        info.imputed_cols = imputed[a];
        candidates.push_back(std::move(info));
    }
    std::sort(candidates.begin(), candidates.end(), [](const PeerInfo& x, const PeerInfo& y) {
        if (x.distance != y.distance) return x.distance < y.distance;
        return x.ticker < y.ticker;
    });

    size_t cut = std::min(static_cast<size_t>(n_peers), candidates.size());
    while (cut < candidates.size() &&
           candidates[cut].distance == candidates[cut - 1].distance)
        ++cut;  // keep everything tied with the n-th distance
    candidates.resize(cut);
    group.peers = std::move(candidates);
    group.truncated = members.size() - 1 < static_cast<size_t>(n_peers);
    return group;
}

OverlapStats benchmark_overlap(const PeerGroup& model_peers,
                               const std::set<std::string>& expert_peers,
                               const std::set<std::string>& corpus_tickers) {
    if (expert_peers.empty()) throw std::runtime_error("expert peer set is empty");
    std::set<std::string> expert;
    for (const auto& t : expert_peers)
        if (corpus_tickers.count(t)) expert.insert(t);

    std::set<std::string> model;
    for (const auto& p : model_peers.peers) model.insert(p.ticker);

    size_t inter = 0;
    for (const auto& t : model) inter += expert.count(t);
    size_t uni = model.size() + expert.size() - inter;

    OverlapStats stats;
    stats.precision = model.empty() ? 0.0 : static_cast<double>(inter) / model.size();
    stats.recall = expert.empty() ? 0.0 : static_cast<double>(inter) / expert.size();
    stats.jaccard = uni == 0 ? 0.0 : static_cast<double>(inter) / uni;
    return stats;
}

}  // namespace peerscope::peers
