#pragma once

#include <stdexcept>
#include <string>

namespace shks {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user-supplied parameter; the message names the offending field.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A quantity that must be finite was not.  `time` is the simulated time of
/// the step that produced it (NaN when no time context applies).
class NonFiniteError : public Error {
 public:
  NonFiniteError(const std::string& what, double time) : Error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// A study (convergence, comparison) could not complete.
class StudyAbort : public Error {
 public:
  using Error::Error;
};

}  // namespace shks
