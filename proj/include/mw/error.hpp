#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mw {

enum class ErrorCode {
  Argument = 1,
  Domain = 2,
  Config = 3,
  Validation = 4,
  Quadrature = 5,
  Precondition = 6,
  Iteration = 7,
  Io = 8,
  Parse = 9,
  Numeric = 10,
  DominationLost = 11,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

struct ArgumentError : Error {
  explicit ArgumentError(const std::string& w) : Error(ErrorCode::Argument, w) {}
};
struct DomainError : Error {
  explicit DomainError(const std::string& w) : Error(ErrorCode::Domain, w) {}
};
struct ConfigError : Error {
  explicit ConfigError(const std::string& w) : Error(ErrorCode::Config, w) {}
};
struct ValidationError : Error {
  explicit ValidationError(const std::string& w) : Error(ErrorCode::Validation, w) {}
};
struct PreconditionError : Error {
  explicit PreconditionError(const std::string& w) : Error(ErrorCode::Precondition, w) {}
};
struct ParseError : Error {
  ParseError(const std::string& w, std::size_t pos)
      : Error(ErrorCode::Parse, w + " at offset " + std::to_string(pos)), position(pos) {}
  std::size_t position;
};
struct IoError : Error {
  explicit IoError(const std::string& w, std::string path = {}) : Error(ErrorCode::Io, w), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};
struct NumericError : Error {
  explicit NumericError(const std::string& w) : Error(ErrorCode::Numeric, w) {}
};

/// Quadrature did not reach the requested tolerance; carries the best estimate
/// (flattened real/imag pairs) and its error estimate.
struct QuadratureError : Error {
  QuadratureError(const std::string& w, std::vector<double> best, double err)
      : Error(ErrorCode::Quadrature, w), best_estimate(std::move(best)), error_estimate(err) {}
  std::vector<double> best_estimate;
  double error_estimate;
};

/// Newton-type iteration failed; carries the residual norm per iteration.
struct IterationError : Error {
  IterationError(const std::string& w, std::vector<double> history)
      : Error(ErrorCode::Iteration, w), residual_history(std::move(history)) {}
  std::vector<double> residual_history;
};

struct DominationLostError : Error {
  DominationLostError(const std::string& w, std::vector<double> history)
      : Error(ErrorCode::DominationLost, w), residual_history(std::move(history)) {}
  std::vector<double> residual_history;
};

}  // namespace mw
