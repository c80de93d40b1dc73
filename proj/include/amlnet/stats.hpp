#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "amlnet/features.hpp"

namespace amlnet {

enum class Significance { None, P05, P01 };

std::string_view stars(Significance s);

/// Pearson correlation matrix; entries are empty (NA) when either column
/// is constant over the rows used.
struct CorrelationReport {
  std::vector<std::string> columns;
  std::size_t n = 0;
  std::vector<std::vector<std::optional<double>>> r;
  std::vector<std::vector<std::optional<double>>> p_values;

  Significance significance(std::size_t i, std::size_t j) const;
};

/// Pearson r of two equally long samples; empty if either is constant.
std::optional<double> pearson(std::span<const double> x,
                              std::span<const double> y);

/// Two-sided p-value of r under the t distribution with n - 2 df.
double correlation_p_value(double r, std::size_t n);

/// Throws ValidationError with fewer than 3 rows or ragged columns.
CorrelationReport pearson_matrix(std::vector<std::string> names,
                                 const std::vector<std::vector<double>>& cols);

/// Correlates the 20 feature columns over fit-eligible rows only.
CorrelationReport pearson_matrix(std::span<const ClientFeatureRow> rows);

/// Lower-triangular layout with significance stars.
void write_correlation_table(std::ostream& out, const CorrelationReport& rep);
void write_correlation_csv(std::ostream& out, const CorrelationReport& rep);

}  // namespace amlnet
