#include "goast/report.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/core.h>

namespace goast {

std::optional<double> record_quantity(const ConvergenceRecord& r, const std::string& name) {
  std::optional<double> v;
  if (name == "l2_Q_error") v = r.l2_Q_error;
  else if (name == "l2_h1_error") v = r.l2_h1_error;
  else if (name == "J_error") v = r.J_error;
  else if (name == "eta_h") v = r.eta_h;
  else throw std::invalid_argument("unknown rate quantity: " + name);
  if (v) v = std::abs(*v);
  return v;
}

const RateRow* RateTable::find(const std::string& quantity) const {
  for (const auto& r : rows)
    if (r.quantity == quantity) return &r;
  return nullptr;
}

double least_squares_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("least_squares_slope: need two or more points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw std::invalid_argument("least_squares_slope: degenerate abscissae");
  return sxy / sxx;
}

std::optional<double> tail_slope(std::span<const ConvergenceRecord> records, const std::string& quantity, int count) {
  std::vector<double> x, y;
  for (const auto& r : records) {
    const auto q = record_quantity(r, quantity);
    if (q && *q > 0.0) {
      x.push_back(std::log(static_cast<double>(r.dofs)));
      y.push_back(std::log(*q));
    }
  }
  if (static_cast<int>(x.size()) > count) {
    x.erase(x.begin(), x.end() - count);
    y.erase(y.begin(), y.end() - count);
  }
  if (x.size() < 2) return std::nullopt;
  return least_squares_slope(x, y);
}

RateTable report_rates(std::span<const ConvergenceRecord> records, int d) {
  if (records.size() < 3) throw std::invalid_argument("report_rates: at least 3 records are required");
  const int D = d + 1;
  RateTable table;
  table.d = d;
  for (const char* name : kRateQuantities) {
    RateRow row;
    row.quantity = name;
    bool any = false;
    for (std::size_t i = 1; i < records.size(); ++i) {
      const auto a = record_quantity(records[i - 1], name);
      const auto b = record_quantity(records[i], name);
      const double ratio = static_cast<double>(records[i].dofs) / records[i - 1].dofs;
      if (a && b && *a > 0.0 && *b > 0.0 && ratio != 1.0) {
        // log(e_{i-1}/e_i) / log(h_{i-1}/h_i) with h = N^{-1/D}
        const double r = std::log(*a / *b) / std::log(ratio);
        row.order_h.push_back(D * r);
        row.order_h_spatial.push_back(d * r);
        any = true;
      } else {
        row.order_h.push_back(std::nullopt);
        row.order_h_spatial.push_back(std::nullopt);
      }
    }
    if (!any) continue;
    row.slope_dofs = tail_slope(records, name, static_cast<int>(records.size()));
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string format_rates(const RateTable& table) {
  auto fmt_opt = [](const std::optional<double>& v) { return v ? fmt::format("{:.3f}", *v) : std::string("-"); };
  std::string out;
  out += fmt::format("# observed orders, h = dofs^(-1/{}) (in brackets: h = dofs^(-1/{}))\n", table.d + 1, table.d);
  for (const auto& row : table.rows) {
    out += fmt::format("# {}:", row.quantity);
    for (std::size_t i = 0; i < row.order_h.size(); ++i)
      out += fmt::format(" {} [{}]", fmt_opt(row.order_h[i]), fmt_opt(row.order_h_spatial[i]));
    out += fmt::format("\n# {} slope vs dofs: {}\n", row.quantity, fmt_opt(row.slope_dofs));
  }
  return out;
}

}  // namespace goast
