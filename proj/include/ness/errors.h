#ifndef NESS_ERRORS_H_
#define NESS_ERRORS_H_

#include <stdexcept>
#include <string>
#include <vector>

namespace ness {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed domain, scenario or formula text.
class SyntaxError : public Error {
 public:
  SyntaxError(int line, int column, std::vector<std::string> expected,
              const std::string& found);

  int line() const { return line_; }
  int column() const { return column_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  int line_;
  int column_;
  std::vector<std::string> expected_;
};

/// Well-formed text describing an invalid context or scenario.
class SemanticError : public Error {
 public:
  using Error::Error;
};

/// A computation exceeded one of the configured size bounds.
class SizeLimitError : public Error {
 public:
  using Error::Error;
};

class SimulationError : public Error {
 public:
  enum class Kind {
    kPreconditionViolated,
    kUnresolvedInterference,
    kScenarioActionConflict,
    kIncoherentEffects,
  };

  SimulationError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// A causal query that cannot be answered for the given setting.
class QueryError : public Error {
 public:
  enum class Kind {
    kNotOccurred,
    kNotScheduled,
    kNoWitness,
    kRecursionDepthExceeded,
    kTimeOutOfRange,
  };

  QueryError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

}  // namespace ness

#endif  // NESS_ERRORS_H_
