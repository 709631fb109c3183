#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace wick {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

// Every library error carries a short machine-readable code that the CLI
// copies into the run manifest.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

class InvalidGeometry : public Error {
 public:
  explicit InvalidGeometry(const std::string& what) : Error("invalid-geometry", what) {}
};

class ContractViolation : public Error {
 public:
  explicit ContractViolation(const std::string& what) : Error("contract-violation", what) {}
};

class OutsideCone : public Error {
 public:
  explicit OutsideCone(const std::string& what) : Error("outside-cone", what) {}
};

class SizeLimitExceeded : public Error {
 public:
  explicit SizeLimitExceeded(const std::string& what) : Error("size-limit", what) {}
};

class ContourBreakdown : public Error {
 public:
  explicit ContourBreakdown(const std::string& what) : Error("contour-breakdown", what) {}
};

class FitWindowError : public Error {
 public:
  explicit FitWindowError(const std::string& what) : Error("fit-window", what) {}
};

class InternalConsistency : public Error {
 public:
  explicit InternalConsistency(const std::string& what) : Error("internal-consistency", what) {}
};

class ConfigError : public Error {
 public:
  ConfigError(int line, const std::string& what)
      : Error("config-schema", line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

// min(theta, pi - theta): the half-opening of the semigroup sector.
inline double theta_tilde(double theta) { return theta < kPi - theta ? theta : kPi - theta; }

}  // namespace wick
