#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qtele/linalg.hpp"

namespace qtele {

enum class DensityViolationKind { Dimension, NonFinite, Hermiticity, Trace, Positivity };

struct DensityViolation {
  DensityViolationKind kind;
  double measured;
  double limit;
  std::string detail;
};

struct DensityCheck;

/// A validated two-qubit (dim 4) or three-qubit (dim 8) density matrix:
/// Hermitian, unit trace and PSD within the validation tolerance.
class DensityMatrix {
 public:
  static constexpr double kDefaultTolerance = 1e-10;

  static DensityCheck validate(Matrix m, double tol = kDefaultTolerance);

  const Matrix& matrix() const { return mat_; }
  int dim() const { return static_cast<int>(mat_.rows()); }
  double tolerance() const { return tol_; }

 private:
  DensityMatrix(Matrix m, double tol) : mat_(std::move(m)), tol_(tol) {}
  Matrix mat_;
  double tol_;
};

struct DensityCheck {
  std::optional<DensityMatrix> state;
  std::vector<DensityViolation> violations;
  bool ok() const { return violations.empty(); }
};

inline DensityCheck validate_density(Matrix m, double tol = DensityMatrix::kDefaultTolerance) {
  return DensityMatrix::validate(std::move(m), tol);
}

/// Unit-norm state vector of a 2-, 4- or 8-dimensional register.
struct PureState {
  Vector amplitudes;

  static PureState normalized(Vector amps);
  Matrix projector() const { return amplitudes * amplitudes.adjoint(); }
  int dim() const { return static_cast<int>(amplitudes.size()); }
};

std::string describe(const DensityViolation& v);

}  // namespace qtele
