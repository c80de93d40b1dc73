#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace amlnet {

/// Bad input data or configuration. Carries the 1-based data row when the
/// problem is tied to a specific CSV row (header is row 0).
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what)
      : std::runtime_error(what) {}
  ValidationError(const std::string& what, std::size_t row)
      : std::runtime_error("row " + std::to_string(row) + ": " + what),
        row_(row) {}

  std::optional<std::size_t> row() const { return row_; }

 private:
  std::optional<std::size_t> row_;
};

/// Non-convergence, separation, or another numerical breakdown.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Filesystem read/write failure.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace amlnet
