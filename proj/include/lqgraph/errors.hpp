#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace lqg {

/// Invalid argument or malformed configuration (bad parameter value,
/// out-of-range vertex or time, dimension mismatch).
class ParameterError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// The input is well formed but outside the domain where the model is
/// defined (isolated vertices for a Laplacian, irregular graph for the
/// equilibrium kernel, ...).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// A numerical routine failed or produced a result violating a checked
/// invariant.
class NumericError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Random graph generation exhausted its retry budget.
class GenerationError : public std::runtime_error {
public:
  GenerationError(const std::string &what, int attempts)
      : std::runtime_error(what), attempts_(attempts) {}
  int attempts() const { return attempts_; }

private:
  int attempts_;
};

/// Non-fatal diagnostics (default sink writes one line to stderr).
using WarningSink = std::function<void(const std::string &)>;
WarningSink set_warning_sink(WarningSink sink);
void warn(const std::string &message);

} // namespace lqg
