#include "qtele/metrics.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace qtele {

Matrix4 spin_flip(const Matrix4& rho) {
  static const Matrix4 yy = [] {
    Matrix4 m = kron(pauli_y(), pauli_y());
    return m;
  }();
  return yy * rho.conjugate() * yy;
}

namespace {

// Square roots amplify rounding noise around zero into visible artifacts:
// a characteristic-polynomial constant term carries absolute noise of order
// eps, which lands exact-zero eigenvalues anywhere below ~1e-12 of the
// spectrum scale. Both routes therefore treat eigenvalues under 1e-10 of the
// scale as exact zeros before taking roots.
void floor_then_sqrt(std::array<double, 4>& vals) {
  const double floor = 1e-10 * std::max(1e-30, std::abs(vals[0]));
  for (double& v : vals) v = (v < floor) ? 0.0 : std::sqrt(v);
}

}  // namespace

std::array<double, 4> wootters_values_hermitian(const Matrix4& rho) {
  const Matrix4 rho_tilde = spin_flip(rho);
  const Matrix root = psd_sqrt(rho);
  const Matrix inner = root * rho_tilde * root;
  const auto evals = hermitian_eigenvalues(inner);
  std::array<double, 4> out{};
  for (int i = 0; i < 4; ++i)
    out[static_cast<size_t>(i)] = clamp_small_negative(evals[static_cast<size_t>(i)]);
  std::sort(out.begin(), out.end(), std::greater<>());
  floor_then_sqrt(out);
  return out;
}

std::array<double, 4> wootters_values_charpoly(const Matrix4& rho) {
  const Matrix4 rho_tilde = spin_flip(rho);
  const auto roots = general_eigenvalues_product_4x4(rho, rho_tilde);
  std::array<double, 4> out{};
  for (size_t i = 0; i < 4; ++i) {
    if (std::abs(roots[i].imag()) > 1e-6) {
      std::ostringstream msg;
      msg << "wootters_values_charpoly: eigenvalue imaginary part " << roots[i].imag()
          << " exceeds tolerance";
      throw std::runtime_error(msg.str());
    }
    out[i] = clamp_small_negative(roots[i].real(), 1e-7);
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  floor_then_sqrt(out);
  return out;
}

namespace {

double concurrence_from(const std::array<double, 4>& l) {
  return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

}  // namespace

double concurrence(const Matrix4& rho) { return concurrence_from(wootters_values_hermitian(rho)); }

double concurrence_charpoly(const Matrix4& rho) {
  return concurrence_from(wootters_values_charpoly(rho));
}

Eigen::Matrix3d correlation_matrix(const Matrix4& rho) {
  Eigen::Matrix3d t;
  for (int n = 1; n <= 3; ++n) {
    for (int m = 1; m <= 3; ++m) {
      const Complex tr = (rho * kron(pauli(n), pauli(m))).trace();
      if (std::abs(tr.imag()) > 1e-9) {
        std::ostringstream msg;
        msg << "correlation_matrix: imaginary residue " << tr.imag() << " in t[" << n << "][" << m
            << "]";
        throw std::runtime_error(msg.str());
      }
      t(n - 1, m - 1) = tr.real();
    }
  }
  return t;
}

std::array<double, 3> correlation_eigenvalues(const Matrix4& rho) {
  const Eigen::Matrix3d t = correlation_matrix(rho);
  const Eigen::Matrix3d tt = t.transpose() * t;
  const auto evals = hermitian_eigenvalues(tt.cast<Complex>());
  return {evals[0], evals[1], evals[2]};
}

double n_value(const Matrix4& rho) {
  const auto u = correlation_eigenvalues(rho);
  double n = 0.0;
  for (double ui : u) n += std::sqrt(clamp_small_negative(ui));
  return n;
}

double teleport_fidelity(const Matrix4& rho) { return 0.5 * (1.0 + n_value(rho) / 3.0); }

double linear_entropy(const Matrix4& rho) {
  const double purity = (rho * rho).trace().real();
  return (4.0 / 3.0) * (1.0 - purity);
}

double bell_chsh_m(const Matrix4& rho) {
  const auto u = correlation_eigenvalues(rho);
  return u[0] + u[1];
}

double ppt_min_eigenvalue(const Matrix4& rho) {
  const auto evals = hermitian_eigenvalues(partial_transpose_second(rho));
  return evals.back();
}

MetricsReport MetricsReport::evaluate(const StateFamily& fam, const DensityMatrix& rho) {
  return evaluate(family_token(fam.family),
                  family_uses_bell(fam.family) ? bell_token(fam.bell) : std::string{}, fam.param,
                  Matrix4(rho.matrix()));
}

MetricsReport MetricsReport::evaluate(std::string family, std::string bell, double param,
                                      const Matrix4& rho) {
  MetricsReport r;
  r.family = std::move(family);
  r.bell = std::move(bell);
  r.param = param;
  const double raw_c = qtele::concurrence(rho);
  const double raw_n = qtele::n_value(rho);
  const double raw_f = 0.5 * (1.0 + raw_n / 3.0);
  const double raw_l = qtele::linear_entropy(rho);
  const double raw_m = qtele::bell_chsh_m(rho);
  // Report fields are clamped to their defined ranges; the metric functions
  // themselves stay raw for diagnostics.
  r.concurrence = std::clamp(raw_c, 0.0, 1.0);
  r.n_value = std::max(0.0, raw_n);
  r.fidelity = std::clamp(raw_f, 0.0, 1.0);
  r.linear_entropy = std::clamp(raw_l, 0.0, 1.0);
  r.m_value = std::clamp(raw_m, 0.0, 2.0);
  r.is_x = is_x_state(rho);
  r.useful_for_teleport = raw_n > 1.0;
  r.violates_bell = raw_m > 1.0;
  return r;
}

nlohmann::ordered_json MetricsReport::to_json() const {
  nlohmann::ordered_json j;
  j["family"] = family;
  j["bell"] = bell;
  j["param"] = param;
  j["C"] = concurrence;
  j["f"] = fidelity;
  j["N"] = n_value;
  j["L"] = linear_entropy;
  j["M"] = m_value;
  j["isX"] = is_x;
  j["useful"] = useful_for_teleport;
  j["violates"] = violates_bell;
  return j;
}

std::string MetricsReport::csv_header() {
  return "family,bell,param,C,f,N,L,M,isX,useful,violates,"
         "C_disp,f_disp,N_disp,L_disp,M_disp";
}

std::string MetricsReport::csv_row() const {
  std::ostringstream os;
  auto disp = [](double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", static_cast<double>(round_cents(x)) / 100.0);
    return std::string(buf);
  };
  os << family << ',' << bell << ',' << format_full(param) << ',' << format_full(concurrence)
     << ',' << format_full(fidelity) << ',' << format_full(n_value) << ','
     << format_full(linear_entropy) << ',' << format_full(m_value) << ',' << (is_x ? 1 : 0) << ','
     << (useful_for_teleport ? 1 : 0) << ',' << (violates_bell ? 1 : 0) << ',' << disp(concurrence)
     << ',' << disp(fidelity) << ',' << disp(n_value) << ',' << disp(linear_entropy) << ','
     << disp(m_value);
  return os.str();
}

long long round_cents(double x) { return std::llround(x * 100.0); }

std::string format_full(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return std::string(buf);
}

}  // namespace qtele
