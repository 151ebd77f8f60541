#ifndef BEAMFOLD_ERRORS_HPP
#define BEAMFOLD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace beamfold {

// Evaluation outside [0, r*(1-guard)] or a non-finite evaluator result.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Base for solver failures so continuation can treat them uniformly.
class SolveError : public std::runtime_error {
 public:
  explicit SolveError(const std::string& what) : std::runtime_error(what) {}
};

class NoConvergenceError : public SolveError {
 public:
  explicit NoConvergenceError(const std::string& what) : SolveError(what) {}
};

class SingularMatrixError : public SolveError {
 public:
  explicit SingularMatrixError(const std::string& what) : SolveError(what) {}
};

// Returned lambda <= 0 from an augmented solve: the iterate left the
// positive-solution regime.
class NegativeLambdaError : public SolveError {
 public:
  explicit NegativeLambdaError(const std::string& what) : SolveError(what) {}
};

class HypothesisError : public std::runtime_error {
 public:
  explicit HypothesisError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace beamfold

#endif
