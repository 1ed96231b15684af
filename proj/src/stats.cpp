#include "vmirror/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vmirror {
namespace {

// Continued fraction for I_x(a,b), modified Lentz method.
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIterations = 10000;
  constexpr double kEpsilon = 1e-15;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEpsilon) return h;
  }
  throw std::runtime_error("incomplete beta: continued fraction did not converge");
}

}  // namespace

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("pearson: length mismatch");
  const std::size_t n = xs.size();
  if (n < 3) throw std::invalid_argument("pearson: need at least 3 observations");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw std::invalid_argument("pearson: zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double regularized_incomplete_beta(double a, double b, double x) {
  if (a <= 0.0 || b <= 0.0) throw std::invalid_argument("incomplete beta: a, b must be > 0");
  if (x < 0.0 || x > 1.0) throw std::invalid_argument("incomplete beta: x outside [0,1]");
  if (x == 0.0 || x == 1.0) return x;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  // The fraction converges fastest for x < (a+1)/(a+b+2); use symmetry otherwise.
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double df) {
  if (!(df > 0)) throw std::invalid_argument("student_t_cdf: df must be > 0");
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  const double tail = 0.5 * regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
  return t >= 0 ? 1.0 - tail : tail;
}

double two_tailed_p(double r, std::size_t n) {
  if (n < 3) throw std::invalid_argument("two_tailed_p: need n >= 3");
  if (std::fabs(r) >= 1.0) return 0.0;
  const double df = static_cast<double>(n - 2);
  const double t2 = r * r * df / (1.0 - r * r);
  // 2*(1 - F(|t|)) = I_{df/(df+t^2)}(df/2, 1/2), evaluated without cancellation.
  return std::clamp(regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t2)), 0.0, 1.0);
}

std::string significance_stars(double p) {
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  return "";
}

std::size_t CorrelationTable::index_of(std::string_view column) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == column) return i;
  }
  auto canon = canonical_column(column);
  if (canon) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (canonical_column(columns[i]) == canon) return i;
    }
  }
  throw std::out_of_range("correlation table has no column " + std::string(column));
}

const std::optional<CorrelationCell>& CorrelationTable::cell(std::string_view a,
                                                             std::string_view b) const {
  return cells[index_of(a)][index_of(b)];
}

CorrelationTable correlation_matrix(const std::vector<std::string>& columns,
                                    const std::vector<std::vector<std::optional<double>>>& data) {
  const std::size_t k = columns.size();
  CorrelationTable table{columns, std::vector<std::vector<std::optional<CorrelationCell>>>(
                                      k, std::vector<std::optional<CorrelationCell>>(k))};
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t n_i = 0;
    for (const auto& row : data) n_i += row.at(i).has_value() ? 1 : 0;
    table.cells[i][i] = CorrelationCell{1.0, std::nullopt, n_i};
    for (std::size_t j = i + 1; j < k; ++j) {
      std::vector<double> xs, ys;
      for (const auto& row : data) {
        if (row.at(i) && row.at(j)) {
          xs.push_back(*row[i]);
          ys.push_back(*row[j]);
        }
      }
      std::optional<CorrelationCell> cell;
      if (xs.size() >= 3) {
        try {
          const double r = pearson(xs, ys);
          cell = CorrelationCell{r, two_tailed_p(r, xs.size()), xs.size()};
        } catch (const std::invalid_argument&) {
          // constant column: correlation undefined
        }
      }
      table.cells[i][j] = cell;
      table.cells[j][i] = cell;
    }
  }
  return table;
}

CorrelationTable correlation_matrix(std::span<const TeamMetricsRow> rows,
                                    const std::vector<std::string>& columns) {
  if (columns.size() < 2) throw std::invalid_argument("need >= 2 columns");
  if (rows.size() < 3) throw std::invalid_argument("need >= 3 rows");
  for (const auto& c : columns) {
    auto canon = canonical_column(c);
    if (!canon || *canon == "team") throw std::invalid_argument("missing column: " + c);
  }
  std::vector<std::vector<std::optional<double>>> data;
  data.reserve(rows.size());
  for (const auto& row : rows) {
    std::vector<std::optional<double>> values;
    for (const auto& c : columns) values.push_back(column_value(row, c));
    data.push_back(std::move(values));
  }
  return correlation_matrix(columns, data);
}

}  // namespace vmirror
