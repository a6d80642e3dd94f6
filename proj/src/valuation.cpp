#include "peerscope/valuation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace peerscope::valuation {

namespace {

std::optional<double> safe_ratio(const std::optional<double>& num,
                                 const std::optional<double>& den) {
    if (!num || !den || *den <= 0.0) return std::nullopt;
    return *num / *den;
}

void summarize(std::vector<double> values, std::optional<double>& mean_out,
               std::optional<double>& median_out, int& count_out) {
    count_out = static_cast<int>(values.size());
    if (values.empty()) {
        mean_out = std::nullopt;
        median_out = std::nullopt;
        return;
    }
    double sum = 0.0;
    for (double v : values) sum += v;
    mean_out = sum / static_cast<double>(values.size());
    std::sort(values.begin(), values.end());
    size_t m = values.size();
    median_out = m % 2 ? values[m / 2] : (values[m / 2 - 1] + values[m / 2]) / 2.0;
}

}  // namespace

CompsRow comps_row(const peers::FinancialRecord& record) {
    CompsRow row;
    row.ticker = record.ticker;
    row.price = record.price;
    row.market_cap = record.market_cap;
    row.enterprise_value = record.enterprise_value;
    row.sales = record.sales;
    row.ebitda = record.ebitda;
    row.ebit = record.ebit;
    row.earnings = record.earnings;
    row.ev_sales = safe_ratio(record.enterprise_value, record.sales);
    row.ev_ebitda = safe_ratio(record.enterprise_value, record.ebitda);
    row.ev_ebit = safe_ratio(record.enterprise_value, record.ebit);
    row.pe = safe_ratio(record.market_cap, record.earnings);
    return row;
}

CompsTable comps_table(const std::vector<peers::FinancialRecord>& records) {
    if (records.empty()) throw std::runtime_error("comps_table needs at least one record");
    CompsTable table;
    std::vector<double> v_sales, v_ebitda, v_ebit, v_pe;
    for (const auto& rec : records) {
        CompsRow row = comps_row(rec);
        if (row.ev_sales) v_sales.push_back(*row.ev_sales);
        if (row.ev_ebitda) v_ebitda.push_back(*row.ev_ebitda);
        if (row.ev_ebit) v_ebit.push_back(*row.ev_ebit);
        if (row.pe) v_pe.push_back(*row.pe);
        table.rows.push_back(std::move(row));
    }
    summarize(v_sales, table.mean_row.ev_sales, table.median_row.ev_sales,
              table.mean_row.n_ev_sales);
    summarize(v_ebitda, table.mean_row.ev_ebitda, table.median_row.ev_ebitda,
              table.mean_row.n_ev_ebitda);
    summarize(v_ebit, table.mean_row.ev_ebit, table.median_row.ev_ebit,
              table.mean_row.n_ev_ebit);
    summarize(v_pe, table.mean_row.pe, table.median_row.pe, table.mean_row.n_pe);
    table.median_row.n_ev_sales = table.mean_row.n_ev_sales;
    table.median_row.n_ev_ebitda = table.mean_row.n_ev_ebitda;
    table.median_row.n_ev_ebit = table.mean_row.n_ev_ebit;
    table.median_row.n_pe = table.mean_row.n_pe;
    return table;
}

std::string format_multiple(const std::optional<double>& multiple) {
    if (!multiple) return "n.m.";
    // Half away from zero at one decimal, independent of printf tie rules.
    double rounded = std::round(*multiple * 10.0) / 10.0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1fx", rounded);
    return buf;
}

double implied_value(double target_metric, const std::optional<double>& peer_multiple,
                     MultipleKind kind) {
    if (!peer_multiple) {
        const char* name = kind == MultipleKind::ev_sales     ? "ev_sales"
                           : kind == MultipleKind::ev_ebitda ? "ev_ebitda"
                           : kind == MultipleKind::ev_ebit   ? "ev_ebit"
                                                             : "pe";
        throw std::runtime_error(std::string("implied_value: ") + name +
                                 " multiple is undefined");
    }
    return target_metric * *peer_multiple;
}

double capm(const CapmInputs& in) {
    return in.risk_free_rate + in.beta * (in.expected_market_return - in.risk_free_rate);
}

double wacc(const WaccInputs& in) {
    if (in.equity_value < 0.0 || in.debt_value < 0.0)
        throw std::runtime_error("wacc: E and D must be nonnegative");
    double v = in.equity_value + in.debt_value;
    if (v <= 0.0) throw std::runtime_error("wacc: E + D must be positive");
    if (in.tax_rate < 0.0 || in.tax_rate >= 1.0)
        throw std::runtime_error("wacc: tax rate must lie in [0, 1)");
    return in.equity_value / v * in.cost_of_equity +
           in.debt_value / v * in.cost_of_debt * (1.0 - in.tax_rate);
}

double gordon_growth_cost_of_equity(const GgmInputs& in) {
    if (in.price <= 0.0) throw std::runtime_error("gordon growth: price must be positive");
    return in.dividend_next / in.price + in.growth;
}

PrivateCoeResult private_cost_of_equity(const std::vector<peers::FinancialRecord>& peer_records,
                                        CoeMethod method, double risk_free_rate,
                                        double expected_market_return) {
    PrivateCoeResult result;
    double sum = 0.0;
    for (const auto& rec : peer_records) {
        const std::optional<double>& field =
            method == CoeMethod::avg_coe ? rec.cost_of_equity : rec.beta;
        if (field) {
            sum += *field;
            result.used.push_back(rec.ticker);
        } else {
            result.skipped.push_back(rec.ticker);
        }
    }
    if (result.used.empty())
        throw std::runtime_error(method == CoeMethod::avg_coe
                                     ? "no peer provides cost_of_equity"
                                     : "no peer provides beta");
    double mean = sum / static_cast<double>(result.used.size());
    result.value = method == CoeMethod::avg_coe
                       ? mean
                       : capm({risk_free_rate, mean, expected_market_return});
    return result;
}

}  // namespace peerscope::valuation
