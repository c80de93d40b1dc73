#include "amlnet/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/students_t.hpp>
#include <fmt/format.h>

#include "amlnet/error.hpp"

namespace amlnet {

std::string_view stars(Significance s) {
  switch (s) {
    case Significance::P01: return "**";
    case Significance::P05: return "*";
    case Significance::None: return "";
  }
  return "";
}

Significance CorrelationReport::significance(std::size_t i,
                                             std::size_t j) const {
  const auto& p = p_values.at(i).at(j);
  if (!p) return Significance::None;
  if (*p < 0.01) return Significance::P01;
  if (*p < 0.05) return Significance::P05;
  return Significance::None;
}

std::optional<double> pearson(std::span<const double> x,
                              std::span<const double> y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 2) return std::nullopt;
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double correlation_p_value(double r, std::size_t n) {
  if (n < 3) return 1.0;
  if (std::abs(r) >= 1.0) return 0.0;
  const double df = static_cast<double>(n - 2);
  const double t = r * std::sqrt(df / (1.0 - r * r));
  boost::math::students_t dist(df);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

CorrelationReport pearson_matrix(
    std::vector<std::string> names,
    const std::vector<std::vector<double>>& cols) {
  if (names.size() != cols.size()) {
    throw ValidationError("column names and data disagree in count");
  }
  const std::size_t n = cols.empty() ? 0 : cols.front().size();
  for (const auto& c : cols) {
    if (c.size() != n) throw ValidationError("ragged correlation columns");
  }
  if (n < 3) {
    throw ValidationError(fmt::format(
        "correlation needs at least 3 fit-eligible rows, got {}", n));
  }
  CorrelationReport rep;
  rep.columns = std::move(names);
  rep.n = n;
  const std::size_t k = cols.size();
  rep.r.assign(k, std::vector<std::optional<double>>(k));
  rep.p_values.assign(k, std::vector<std::optional<double>>(k));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      std::optional<double> r = pearson(cols[i], cols[j]);
      if (r && i == j) r = 1.0;
      rep.r[i][j] = rep.r[j][i] = r;
      if (r) rep.p_values[i][j] = rep.p_values[j][i] = correlation_p_value(*r, n);
    }
  }
  return rep;
}

CorrelationReport pearson_matrix(std::span<const ClientFeatureRow> rows) {
  std::vector<std::vector<double>> cols(kFeatureCount);
  for (const auto& row : rows) {
    if (!row.fit_eligible()) continue;
    for (std::size_t c = 0; c < kFeatureCount; ++c) {
      cols[c].push_back(row.value(c));
    }
  }
  return pearson_matrix(
      std::vector<std::string>(kFeatureColumns.begin(), kFeatureColumns.end()),
      cols);
}

void write_correlation_table(std::ostream& out, const CorrelationReport& rep) {
  const std::size_t k = rep.columns.size();
  std::size_t width = 0;
  for (const auto& c : rep.columns) width = std::max(width, c.size());
  width += 4;
  out << fmt::format("{:<{}}", "", width);
  for (std::size_t j = 0; j < k; ++j) out << fmt::format("{:>9}", j + 1);
  out << '\n';
  for (std::size_t i = 0; i < k; ++i) {
    out << fmt::format("{:<{}}", fmt::format("{} {}", i + 1, rep.columns[i]),
                       width);
    for (std::size_t j = 0; j <= i; ++j) {
      std::string cell = "NA";
      if (rep.r[i][j]) {
        cell = i == j ? "1" : fmt::format("{:.3f}", *rep.r[i][j]);
        if (i != j) cell += stars(rep.significance(i, j));
      }
      out << fmt::format("{:>9}", cell);
    }
    out << '\n';
  }
  out << fmt::format("\nn = {}; **p<.01; *p<.05.\n", rep.n);
}

void write_correlation_csv(std::ostream& out, const CorrelationReport& rep) {
  out << "row,column,r,p_value,stars\n";
  const std::size_t k = rep.columns.size();
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      out << rep.columns[i] << ',' << rep.columns[j] << ',';
      if (rep.r[i][j]) {
        out << fmt::format("{},{},{}", *rep.r[i][j], *rep.p_values[i][j],
                           stars(rep.significance(i, j)));
      } else {
        out << "NA,NA,";
      }
      out << '\n';
    }
  }
}

}  // namespace amlnet
