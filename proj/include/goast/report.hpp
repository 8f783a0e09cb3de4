#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "goast/adaptivity.hpp"

namespace goast {

// Quantities tracked by the rate report, in output order.
inline constexpr const char* kRateQuantities[] = {"l2_Q_error", "l2_h1_error", "J_error", "eta_h"};

// |value| of a named record quantity, if present.
std::optional<double> record_quantity(const ConvergenceRecord& r, const std::string& name);

struct RateRow {
  std::string quantity;
  // Between consecutive levels i-1 and i (entry i-1), h = dofs^(-1/D).
  std::vector<std::optional<double>> order_h;
  // Same with h = dofs^(-1/d), the spatial dimension only.
  std::vector<std::optional<double>> order_h_spatial;
  // Least-squares slope of log|q| against log(dofs) over all records.
  std::optional<double> slope_dofs;
};

struct RateTable {
  int d = 1;
  std::vector<RateRow> rows;

  const RateRow* find(const std::string& quantity) const;
};

// Throws std::invalid_argument for fewer than 3 records.
RateTable report_rates(std::span<const ConvergenceRecord> records, int d);

double least_squares_slope(std::span<const double> x, std::span<const double> y);

// Slope of log|q| against log(dofs) over the last `count` records carrying q.
std::optional<double> tail_slope(std::span<const ConvergenceRecord> records, const std::string& quantity, int count);

// Lines starting with '#', suitable as a CSV footer.
std::string format_rates(const RateTable& table);

}  // namespace goast
