#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vmirror/metrics.hpp"

namespace vmirror {

/// Sample Pearson product-moment correlation. Throws std::invalid_argument
/// on length mismatch, n < 3 or a constant series ("zero variance").
double pearson(std::span<const double> xs, std::span<const double> ys);

/// I_x(a, b) by Lentz's continued fraction, accurate to ~1e-14.
double regularized_incomplete_beta(double a, double b, double x);

/// Student-t distribution function with `df` degrees of freedom.
double student_t_cdf(double t, double df);

/// Two-tailed significance of r with n samples: t = r*sqrt((n-2)/(1-r^2)),
/// p = 2*(1 - F_t(|t|; n-2)). |r| = 1 gives 0. Throws for n < 3.
double two_tailed_p(double r, std::size_t n);

/// "**" for p < 0.01, "*" for p < 0.05, empty otherwise.
std::string significance_stars(double p);

struct CorrelationCell {
  double r = 0.0;
  std::optional<double> p;  // empty on the diagonal
  std::size_t n = 0;
};

/// Symmetric matrix over the requested columns. Off-diagonal cells are
/// empty when fewer than 3 complete pairs exist or a series is constant.
struct CorrelationTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::optional<CorrelationCell>>> cells;

  std::size_t index_of(std::string_view column) const;  // throws std::out_of_range
  const std::optional<CorrelationCell>& cell(std::string_view a, std::string_view b) const;
};

/// Pairwise-complete correlation of named columns. `data[row][col]` holds
/// the value of column `col` for one observation; missing cells are skipped
/// per pair.
CorrelationTable correlation_matrix(const std::vector<std::string>& columns,
                                    const std::vector<std::vector<std::optional<double>>>& data);

/// Correlation over team metric rows. Column names are resolved through
/// canonical_column; an unknown name throws std::invalid_argument naming it.
/// Requires at least 3 rows and 2 columns.
CorrelationTable correlation_matrix(std::span<const TeamMetricsRow> rows,
                                    const std::vector<std::string>& columns);

}  // namespace vmirror
