#pragma once

#include <optional>
#include <string>
#include <vector>

#include "peerscope/peers.hpp"

namespace peerscope::valuation {

enum class MultipleKind { ev_sales, ev_ebitda, ev_ebit, pe };

struct CompsRow {
    std::string ticker;
    std::optional<double> price, market_cap, enterprise_value;
    std::optional<double> sales, ebitda, ebit, earnings;
    // Undefined (nullopt) when the denominator is missing or <= 0.
    std::optional<double> ev_sales, ev_ebitda, ev_ebit, pe;
};

struct SummaryRow {
    std::optional<double> ev_sales, ev_ebitda, ev_ebit, pe;
    int n_ev_sales = 0, n_ev_ebitda = 0, n_ev_ebit = 0, n_pe = 0;  // contributors
};

struct CompsTable {
    std::vector<CompsRow> rows;  // input order
    SummaryRow mean_row;
    SummaryRow median_row;
};

CompsRow comps_row(const peers::FinancialRecord& record);
CompsTable comps_table(const std::vector<peers::FinancialRecord>& records);

// "12.4x" at one decimal; undefined prints as "n.m.".
std::string format_multiple(const std::optional<double>& multiple);

// EV-type multiples imply enterprise value; pe implies equity value.
double implied_value(double target_metric, const std::optional<double>& peer_multiple,
                     MultipleKind kind);

struct CapmInputs {
    double risk_free_rate = 0.0;        // Rf
    double beta = 0.0;                  // beta_i
    double expected_market_return = 0.0;  // E(Rm)
};
double capm(const CapmInputs& inputs);  // Rf + beta * (Rm - Rf)

struct WaccInputs {
    double equity_value = 0.0;  // E
    double debt_value = 0.0;    // D
    double cost_of_equity = 0.0;
    double cost_of_debt = 0.0;
    double tax_rate = 0.0;
};
double wacc(const WaccInputs& inputs);  // E/V * Re + D/V * Rd * (1 - T)

struct GgmInputs {
    double dividend_next = 0.0;  // D1
    double price = 0.0;          // P0
    double growth = 0.0;         // g
};
double gordon_growth_cost_of_equity(const GgmInputs& inputs);  // D1/P0 + g

enum class CoeMethod { avg_coe, avg_beta_capm };

struct PrivateCoeResult {
    double value = 0.0;
    std::vector<std::string> used;     // peers contributing
    std::vector<std::string> skipped;  // peers lacking the needed field
};

// avg_coe: mean of the peers' cost_of_equity. avg_beta_capm: CAPM at the
// peers' mean beta with the supplied market inputs.
PrivateCoeResult private_cost_of_equity(const std::vector<peers::FinancialRecord>& peer_records,
                                        CoeMethod method, double risk_free_rate = 0.0,
                                        double expected_market_return = 0.0);

}  // namespace peerscope::valuation
