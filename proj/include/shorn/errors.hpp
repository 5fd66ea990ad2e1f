#pragma once

#include <stdexcept>
#include <string>

namespace shorn {

/// Operand shapes do not fit together (dimension mismatch, index out of range).
class DimensionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Input is malformed: non-finite entries, values outside their domain,
/// unparsable files.
class InputError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A mathematical precondition does not hold (x not majorised by y, a
/// non-integer trace, an infeasible sequence). `defect()` quantifies how far
/// the input is from satisfying it, when that is meaningful.
class PreconditionError : public std::domain_error {
public:
  explicit PreconditionError(const std::string& what, double defect = 0.0)
      : std::domain_error(what), defect_(defect) {}
  double defect() const noexcept { return defect_; }

private:
  double defect_;
};

/// An internal numerical procedure failed (eigensolver did not converge, a
/// construction left its guaranteed range).
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace shorn
