#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace prandtl_lab {

// Raised when a time integrator produces NaN/Inf, exceeds the blow-up
// ceiling, or loses monotonicity. Carries the failure time.
class SolverDiverged : public std::runtime_error {
 public:
  SolverDiverged(const std::string& what, double t, std::string verdict)
      : std::runtime_error(what), time_(t), verdict_(std::move(verdict)) {}

  double time() const noexcept { return time_; }
  const std::string& verdict() const noexcept { return verdict_; }

 private:
  double time_;
  std::string verdict_;
};

// The Crocco change of variables needs a strictly monotone column.
class CroccoUndefined : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Barrier constant recipes that cannot be satisfied by the measured data.
class InadmissibleEnvelope : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, std::string key)
      : std::runtime_error(what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

// Malformed or incomplete CSV input. row is the 1-based file line, 0 when
// the problem is not tied to a row.
class CsvError : public std::runtime_error {
 public:
  CsvError(const std::string& what, std::size_t row = 0)
      : std::runtime_error(what), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

// Filesystem failures while writing artifacts.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace prandtl_lab
