#include "qtele/density.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qtele {

DensityCheck DensityMatrix::validate(Matrix m, double tol) {
  DensityCheck out;
  const Eigen::Index n = m.rows();
  if (m.cols() != n || (n != 4 && n != 8)) {
    out.violations.push_back({DensityViolationKind::Dimension, static_cast<double>(n), 0,
                              "dimension must be 4 or 8"});
    return out;
  }
  bool finite = true;
  for (Eigen::Index i = 0; i < n && finite; ++i)
    for (Eigen::Index j = 0; j < n && finite; ++j)
      finite = std::isfinite(m(i, j).real()) && std::isfinite(m(i, j).imag());
  if (!finite) {
    out.violations.push_back({DensityViolationKind::NonFinite, 0, 0, "non-finite entry"});
    return out;
  }

  const double herm_err = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm_err > tol) {
    out.violations.push_back(
        {DensityViolationKind::Hermiticity, herm_err, tol, "max |rho - rho^dagger| entry"});
  }
  const double trace_err = std::abs(m.trace() - Complex(1, 0));
  if (trace_err > tol) {
    out.violations.push_back({DensityViolationKind::Trace, trace_err, tol, "|tr(rho) - 1|"});
  }
  if (herm_err <= tol) {
    const auto evals = hermitian_eigenvalues(m, std::max(tol, 1e-8));
    const double min_eval = evals.back();
    if (min_eval < -tol) {
      out.violations.push_back(
          {DensityViolationKind::Positivity, min_eval, -tol, "minimum eigenvalue"});
    }
  }
  if (out.violations.empty()) {
    out.state = DensityMatrix(std::move(m), tol);
  }
  return out;
}

PureState PureState::normalized(Vector amps) {
  const double n = amps.norm();
  if (n < 1e-300) throw std::invalid_argument("PureState: zero vector");
  return PureState{amps / n};
}

std::string describe(const DensityViolation& v) {
  std::ostringstream os;
  switch (v.kind) {
    case DensityViolationKind::Dimension: os << "dimension"; break;
    case DensityViolationKind::NonFinite: os << "non-finite"; break;
    case DensityViolationKind::Hermiticity: os << "hermiticity"; break;
    case DensityViolationKind::Trace: os << "trace"; break;
    case DensityViolationKind::Positivity: os << "positivity"; break;
  }
  os << " violation (" << v.detail << "): measured " << v.measured << ", limit " << v.limit;
  return os.str();
}

}  // namespace qtele
