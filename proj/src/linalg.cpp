#include "qtele/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace qtele {

namespace {

int insert_bit(int bits, int pos_from_left, int value, int n_qubits) {
  // bits holds n_qubits-1 labels; re-insert `value` at the given position.
  const int shift = n_qubits - 1 - pos_from_left;
  const int high = bits >> shift;
  const int low = bits & ((1 << shift) - 1);
  return (high << (shift + 1)) | (value << shift) | low;
}

}  // namespace

Matrix partial_trace(const Matrix& rho8, int traced_qubit) {
  if (rho8.rows() != 8 || rho8.cols() != 8) {
    throw std::invalid_argument("partial_trace expects an 8x8 matrix");
  }
  if (traced_qubit < 0 || traced_qubit > 2) {
    std::ostringstream msg;
    msg << "partial_trace: traced qubit index " << traced_qubit << " not in {0,1,2}";
    throw std::invalid_argument(msg.str());
  }
  Matrix out = Matrix::Zero(4, 4);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      Complex sum = 0;
      for (int v = 0; v < 2; ++v) {
        sum += rho8(insert_bit(r, traced_qubit, v, 3), insert_bit(c, traced_qubit, v, 3));
      }
      out(r, c) = sum;
    }
  }
  return out;
}

Matrix2 trace_out_front_pair(const Matrix8& rho8) {
  // Basis index is 4*q0 + 2*q1 + q2; summing q0,q1 walks 2*a + b with a = 2*q0 + q1.
  Matrix2 out = Matrix2::Zero();
  for (int b = 0; b < 2; ++b)
    for (int bp = 0; bp < 2; ++bp)
      for (int a = 0; a < 4; ++a) out(b, bp) += rho8(2 * a + b, 2 * a + bp);
  return out;
}

Matrix partial_transpose_second(const Matrix& rho4) {
  if (rho4.rows() != 4 || rho4.cols() != 4) {
    throw std::invalid_argument("partial_transpose_second expects a 4x4 matrix");
  }
  Matrix out(4, 4);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int ap = 0; ap < 2; ++ap)
        for (int bp = 0; bp < 2; ++bp) out(2 * a + b, 2 * ap + bp) = rho4(2 * a + bp, 2 * ap + b);
  return out;
}

HermitianEigen jacobi_hermitian(Matrix a, double herm_tol) {
  const Eigen::Index n = a.rows();
  if (n != a.cols() || n < 1) throw std::invalid_argument("jacobi_hermitian expects a square matrix");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  const double herm_err = (a - a.adjoint()).cwiseAbs().maxCoeff();
  if (herm_err > herm_tol * scale) {
    std::ostringstream msg;
    msg << "jacobi_hermitian: input deviates from Hermitian by " << herm_err;
    throw std::invalid_argument(msg.str());
  }
  a = 0.5 * (a + a.adjoint().eval());

  Matrix v = Matrix::Identity(n, n);
  constexpr int kMaxSweeps = 80;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (std::sqrt(off) <= 1e-13 * scale) break;

    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double m = std::abs(a(p, q));
        if (m <= 1e-300) continue;
        const Complex phase = a(p, q) / m;
        const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * m);
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // J = [[c, s*phase], [-s*conj(phase), c]] on the (p,q) plane zeroes a(p,q).
        const Complex jpq = s * phase;
        const Complex jqp = -s * std::conj(phase);
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * c + akq * jqp;
          a(k, q) = akp * jpq + akq * c;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk + std::conj(jqp) * aqk;
          a(q, k) = std::conj(jpq) * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * c + vkq * jqp;
          v(k, q) = vkp * jpq + vkq * c;
        }
        a(p, q) = 0;
        a(q, p) = 0;
      }
    }
  }

  HermitianEigen out;
  out.values.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) out.values[i] = a(i, i).real();
  out.vectors = v;
  std::vector<int> idx(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) idx[static_cast<size_t>(i)] = static_cast<int>(i);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int i, int j) { return out.values[i] > out.values[j]; });
  Eigen::VectorXd sorted_vals(n);
  Matrix sorted_vecs(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    sorted_vals[i] = out.values[idx[static_cast<size_t>(i)]];
    sorted_vecs.col(i) = out.vectors.col(idx[static_cast<size_t>(i)]);
  }
  out.values = sorted_vals;
  out.vectors = sorted_vecs;
  return out;
}

std::vector<double> hermitian_eigenvalues(const Matrix& a, double herm_tol) {
  const HermitianEigen e = jacobi_hermitian(a, herm_tol);
  return std::vector<double>(e.values.data(), e.values.data() + e.values.size());
}

std::array<Complex, 4> charpoly_4x4(const Matrix& a) {
  if (a.rows() != 4 || a.cols() != 4) throw std::invalid_argument("charpoly_4x4 expects a 4x4 matrix");
  // Faddeev-LeVerrier: B1 = A, a1 = -tr B1; B_{k+1} = A (B_k + a_k I).
  Matrix b = a;
  const Complex a1 = -b.trace();
  b = a * (b + a1 * Matrix::Identity(4, 4));
  const Complex a2 = -b.trace() / 2.0;
  b = a * (b + a2 * Matrix::Identity(4, 4));
  const Complex a3 = -b.trace() / 3.0;
  b = a * (b + a3 * Matrix::Identity(4, 4));
  const Complex a4 = -b.trace() / 4.0;
  return {a4, a3, a2, a1};
}

namespace {

// ---------------------------------------------------------------------------
// Compensated (double-double) arithmetic. The characteristic polynomial of a
// matrix with clustered eigenvalues is the bottleneck of the whole route: a
// coefficient rounded at 1e-16 makes root separations below ~1e-5 physically
// unresolvable no matter how the roots are extracted. Accumulating the
// Faddeev-LeVerrier recurrence in double-double pushes the coefficient noise
// to ~1e-30 and the resolvable separation to ~1e-10.
// ---------------------------------------------------------------------------

struct Dd {
  double hi = 0, lo = 0;
};

Dd quick_two_sum(double a, double b) {
  const double s = a + b;
  return {s, b - (s - a)};
}

Dd two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

Dd two_prod(double a, double b) {
  const double p = a * b;
  constexpr double kSplit = 134217729.0;  // 2^27 + 1
  const double ca = kSplit * a;
  const double ahi = ca - (ca - a);
  const double alo = a - ahi;
  const double cb = kSplit * b;
  const double bhi = cb - (cb - b);
  const double blo = b - bhi;
  const double err = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo;
  return {p, err};
}

Dd dd_add(Dd a, Dd b) {
  Dd s = two_sum(a.hi, b.hi);
  return quick_two_sum(s.hi, s.lo + a.lo + b.lo);
}

Dd dd_neg(Dd a) { return {-a.hi, -a.lo}; }

Dd dd_sub(Dd a, Dd b) { return dd_add(a, dd_neg(b)); }

Dd dd_mul(Dd a, Dd b) {
  Dd p = two_prod(a.hi, b.hi);
  return quick_two_sum(p.hi, p.lo + a.hi * b.lo + a.lo * b.hi);
}

Dd dd_div_double(Dd a, double k) {
  const double q0 = a.hi / k;
  const Dd r = dd_sub(a, two_prod(q0, k));
  return quick_two_sum(q0, (r.hi + r.lo) / k);
}

Dd dd_from(double x) { return {x, 0}; }
double dd_val(Dd a) { return a.hi + a.lo; }

struct DdC {
  Dd re, im;
};

DdC ddc_from(Complex z) { return {dd_from(z.real()), dd_from(z.imag())}; }
Complex ddc_val(const DdC& z) { return Complex(dd_val(z.re), dd_val(z.im)); }
double ddc_abs(const DdC& z) { return std::abs(ddc_val(z)); }

DdC ddc_add(const DdC& a, const DdC& b) { return {dd_add(a.re, b.re), dd_add(a.im, b.im)}; }
DdC ddc_neg(const DdC& a) { return {dd_neg(a.re), dd_neg(a.im)}; }

DdC ddc_mul(const DdC& a, const DdC& b) {
  return {dd_sub(dd_mul(a.re, b.re), dd_mul(a.im, b.im)),
          dd_add(dd_mul(a.re, b.im), dd_mul(a.im, b.re))};
}

DdC ddc_div_double(const DdC& a, double k) {
  return {dd_div_double(a.re, k), dd_div_double(a.im, k)};
}

/// Monic polynomial with compensated coefficients for z^0 .. z^{d-1}.
struct PrecisePoly {
  std::vector<DdC> c;

  size_t degree() const { return c.size(); }

  DdC eval(Complex z) const {
    const DdC zz = ddc_from(z);
    DdC acc = ddc_from(Complex(1, 0));
    for (size_t k = c.size(); k-- > 0;) acc = ddc_add(ddc_mul(acc, zz), c[k]);
    return acc;
  }

  DdC deriv(Complex z) const {
    const size_t d = c.size();
    const DdC zz = ddc_from(z);
    DdC acc = ddc_from(Complex(static_cast<double>(d), 0));
    for (size_t k = d; k-- > 1;) {
      DdC term = c[k];
      term.re = dd_mul(term.re, dd_from(static_cast<double>(k)));
      term.im = dd_mul(term.im, dd_from(static_cast<double>(k)));
      acc = ddc_add(ddc_mul(acc, zz), term);
    }
    return acc;
  }

  PrecisePoly deflate_zero_root() const {
    return PrecisePoly{std::vector<DdC>(c.begin() + 1, c.end())};
  }

  std::vector<Complex> doubles() const {
    std::vector<Complex> out(c.size());
    for (size_t k = 0; k < c.size(); ++k) out[k] = ddc_val(c[k]);
    return out;
  }
};

using DdMatrix = std::array<DdC, 16>;

DdMatrix ddm_from(const Matrix& a) {
  DdMatrix m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m[static_cast<size_t>(4 * i + j)] = ddc_from(a(i, j));
  return m;
}

DdMatrix ddm_mul(const DdMatrix& a, const DdMatrix& b) {
  DdMatrix out;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      DdC acc = ddc_from(Complex(0, 0));
      for (int k = 0; k < 4; ++k) {
        acc = ddc_add(acc, ddc_mul(a[static_cast<size_t>(4 * i + k)],
                                   b[static_cast<size_t>(4 * k + j)]));
      }
      out[static_cast<size_t>(4 * i + j)] = acc;
    }
  }
  return out;
}

DdC ddm_trace(const DdMatrix& a) {
  DdC acc = ddc_from(Complex(0, 0));
  for (int i = 0; i < 4; ++i) acc = ddc_add(acc, a[static_cast<size_t>(5 * i)]);
  return acc;
}

void ddm_add_diag(DdMatrix& a, const DdC& v) {
  for (int i = 0; i < 4; ++i) {
    a[static_cast<size_t>(5 * i)] = ddc_add(a[static_cast<size_t>(5 * i)], v);
  }
}

PrecisePoly charpoly_4x4_dd(const DdMatrix& m) {
  DdMatrix b = m;
  const DdC a1 = ddc_neg(ddm_trace(b));
  ddm_add_diag(b, a1);
  b = ddm_mul(m, b);
  const DdC a2 = ddc_neg(ddc_div_double(ddm_trace(b), 2.0));
  ddm_add_diag(b, a2);
  b = ddm_mul(m, b);
  const DdC a3 = ddc_neg(ddc_div_double(ddm_trace(b), 3.0));
  ddm_add_diag(b, a3);
  b = ddm_mul(m, b);
  const DdC a4 = ddc_neg(ddc_div_double(ddm_trace(b), 4.0));
  return PrecisePoly{{a4, a3, a2, a1}};
}

// Residual bound for the compensated evaluation, including the coefficient
// uncertainty left by the recurrence itself: coefficient k carries an
// absolute error of order kCoeffEps * S^{d-k} where S is the root scale.
constexpr double kCoeffEps = 1e-28;

std::array<Complex, 2> eig2x2(Complex a, Complex b, Complex c, Complex d) {
  const Complex tr = a + d;
  const Complex det = a * d - b * c;
  const Complex disc = std::sqrt(tr * tr - 4.0 * det);
  return {0.5 * (tr + disc), 0.5 * (tr - disc)};
}

std::array<Complex, 2> quadratic_roots_stable(Complex b, Complex c) {
  // z^2 + b z + c; the larger root first, the smaller via the product.
  const Complex disc = std::sqrt(b * b - 4.0 * c);
  const Complex q = (std::real(std::conj(b) * disc) >= 0) ? -0.5 * (b + disc) : -0.5 * (b - disc);
  if (std::abs(q) < 1e-300) return {Complex(0), Complex(0)};
  return {q, c / q};
}

// One explicit-shift QR step on the isolated diagonal block [lo, hi] of a
// Hessenberg matrix: S = block - shift*I = QR, block <- RQ + shift*I.
void qr_step(Matrix& h, int lo, int hi, Complex shift) {
  const int m = hi - lo + 1;
  Matrix s = h.block(lo, lo, m, m);
  for (int i = 0; i < m; ++i) s(i, i) -= shift;

  std::vector<std::pair<Complex, Complex>> rot(static_cast<size_t>(m - 1));
  for (int k = 0; k < m - 1; ++k) {
    const Complex x = s(k, k), y = s(k + 1, k);
    const double r = std::sqrt(std::norm(x) + std::norm(y));
    Complex c = 1, g = 0;
    if (r > 1e-300) {
      c = x / r;
      g = y / r;
    }
    rot[static_cast<size_t>(k)] = {c, g};
    for (int j = k; j < m; ++j) {
      const Complex t1 = s(k, j), t2 = s(k + 1, j);
      s(k, j) = std::conj(c) * t1 + std::conj(g) * t2;
      s(k + 1, j) = -g * t1 + c * t2;
    }
  }
  for (int k = 0; k < m - 1; ++k) {
    const auto [c, g] = rot[static_cast<size_t>(k)];
    for (int i = 0; i <= std::min(k + 1, m - 1); ++i) {
      const Complex t1 = s(i, k), t2 = s(i, k + 1);
      s(i, k) = t1 * c + t2 * g;
      s(i, k + 1) = -t1 * std::conj(g) + t2 * std::conj(c);
    }
  }
  for (int i = 0; i < m; ++i) s(i, i) += shift;
  h.block(lo, lo, m, m) = s;
}

// Shifted QR on the d x d companion matrix of a monic polynomial whose roots
// are O(1); d is 3 or 4 here.
std::vector<Complex> companion_qr_roots(const std::vector<Complex>& c) {
  const int d = static_cast<int>(c.size());
  Matrix h = Matrix::Zero(d, d);
  for (int i = 1; i < d; ++i) h(i, i - 1) = 1;
  for (int i = 0; i < d; ++i) h(i, d - 1) = -c[static_cast<size_t>(i)];

  std::vector<Complex> roots;
  int hi = d - 1;
  const double deflate_eps = 1e-14;
  int iter = 0;
  const int max_iter = 500;
  while (hi >= 0 && iter < max_iter) {
    for (int k = 1; k <= hi; ++k) {
      if (std::abs(h(k, k - 1)) <=
          deflate_eps * (std::abs(h(k, k)) + std::abs(h(k - 1, k - 1)) + 1e-30)) {
        h(k, k - 1) = 0;
      }
    }
    if (hi == 0 || std::abs(h(hi, hi - 1)) == 0.0) {
      roots.push_back(h(hi, hi));
      --hi;
      continue;
    }
    if (hi == 1 || std::abs(h(hi - 1, hi - 2)) == 0.0) {
      const auto pair = eig2x2(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
      roots.push_back(pair[0]);
      roots.push_back(pair[1]);
      hi -= 2;
      continue;
    }
    int lo = hi - 1;
    while (lo > 0 && std::abs(h(lo, lo - 1)) != 0.0) --lo;
    Complex shift;
    if (iter > 0 && iter % 12 == 0) {
      // Exceptional shift breaks cycling on defective blocks.
      shift = h(hi, hi) + Complex(1.317 * std::abs(h(hi, hi - 1)), 0.421 * std::abs(h(hi, hi)) + 1e-3);
    } else {
      const auto pair = eig2x2(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
      shift = (std::abs(pair[0] - h(hi, hi)) < std::abs(pair[1] - h(hi, hi))) ? pair[0] : pair[1];
    }
    qr_step(h, lo, hi, shift);
    ++iter;
  }
  if (hi >= 0) {
    std::ostringstream msg;
    msg << "companion_qr_roots: QR iteration did not converge; residual subdiagonals:";
    for (int k = 1; k < d; ++k) msg << " " << std::abs(h(k, k - 1));
    throw std::runtime_error(msg.str());
  }
  return roots;
}

// Monic polynomial roots for degree <= 4: structural zeros (vanishing
// constant term) are split off first, degrees 1 and 2 are closed-form, and 3
// and 4 go through the companion QR, a compensated Newton polish and a
// cluster pass for multiple eigenvalues.
std::vector<Complex> poly_roots_precise(const PrecisePoly& poly) {
  const size_t d = poly.degree();
  if (d == 0) return {};

  const std::vector<Complex> cdbl = poly.doubles();
  double s = 1.0;
  for (size_t k = 0; k < d; ++k) {
    s = std::max(s, std::pow(std::abs(cdbl[k]), 1.0 / static_cast<double>(d - k)));
  }

  if (ddc_abs(poly.c[0]) <= 1e-27 * std::pow(s, static_cast<double>(d))) {
    std::vector<Complex> roots = poly_roots_precise(poly.deflate_zero_root());
    roots.push_back(Complex(0));
    return roots;
  }

  std::vector<Complex> roots;
  if (d == 1) {
    roots = {-cdbl[0]};
  } else if (d == 2) {
    const auto r = quadratic_roots_stable(cdbl[1], cdbl[0]);
    roots = {r[0], r[1]};
  } else {
    // scaled[k] = c[k] / s^{d-k} so the scaled roots are O(1).
    std::vector<Complex> scaled(d);
    for (size_t k = 0; k < d; ++k) {
      scaled[k] = cdbl[k];
      for (size_t j = 0; j < d - k; ++j) scaled[k] /= s;
    }
    roots = companion_qr_roots(scaled);
    for (Complex& r : roots) r *= s;
  }

  for (Complex& r : roots) {
    for (int it = 0; it < 4; ++it) {
      const Complex p = ddc_val(poly.eval(r));
      const Complex dp = ddc_val(poly.deriv(r));
      if (std::abs(dp) < 1e-250) break;
      const Complex step = p / dp;
      if (!(std::abs(step) < 0.5 * s + 1.0)) break;
      r -= step;
    }
  }
  if (d == 2) return roots;

  // Evaluation-plus-coefficient noise bound for p at z; a residual at this
  // level is indistinguishable from an exact zero.
  const auto eval_noise = [&](Complex z) {
    const double nz = std::abs(z);
    double acc = std::pow(nz, static_cast<double>(d));
    double sk = std::pow(s, static_cast<double>(d));
    double zk = 1.0;
    for (size_t k = 0; k < d; ++k) {
      sk /= s;
      acc += std::max(std::abs(cdbl[k]), sk) * zk;
      zk *= nz;
    }
    return kCoeffEps * acc;
  };

  // Candidate clusters are contiguous windows over the roots sorted by real
  // part, largest windows first, so a genuine multiple root is found even
  // when an unrelated root sits nearby. A true multiple leaves a residual at
  // rounding level at the window mean; two distinct roots delta apart leave
  // one of order (delta/2)^k, which the noise gate resolves down to
  // separations around 1e-10.
  const double cluster_radius = 1e-3 * s + 1e-10;
  std::vector<size_t> order(roots.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (roots[a].real() != roots[b].real()) return roots[a].real() < roots[b].real();
    return roots[a].imag() < roots[b].imag();
  });
  std::vector<std::vector<size_t>> clusters;
  std::vector<bool> assigned(roots.size(), false);
  for (size_t width = roots.size(); width >= 2; --width) {
    for (size_t start = 0; start + width <= order.size(); ++start) {
      std::vector<size_t> members;
      Complex sum = 0;
      for (size_t k = start; k < start + width; ++k) {
        if (assigned[order[k]]) {
          members.clear();
          break;
        }
        members.push_back(order[k]);
        sum += roots[order[k]];
      }
      if (members.size() != width) continue;
      if (std::abs(roots[members.back()] - roots[members.front()]) >= cluster_radius) continue;
      const Complex mean = sum / static_cast<double>(width);
      if (ddc_abs(poly.eval(mean)) > 64.0 * eval_noise(mean)) continue;
      for (size_t j : members) assigned[j] = true;
      clusters.push_back(std::move(members));
    }
  }
  for (const auto& members : clusters) {
    Complex sum = 0;
    for (size_t j : members) sum += roots[j];
    Complex mean = sum / static_cast<double>(members.size());
    if (clusters.size() == 1) {
      // Newton's first identity pins the cluster: the root sum equals
      // -c_{d-1} and the simple roots outside it are polished to machine
      // accuracy.
      Complex others = 0;
      for (size_t j = 0; j < roots.size(); ++j) {
        if (!assigned[j]) others += roots[j];
      }
      mean = (ddc_val(ddc_neg(poly.c[d - 1])) - others) / static_cast<double>(members.size());
    }
    for (size_t j : members) roots[j] = mean;
  }

  // A genuinely distinct but barely separated pair sits at the edge of
  // Newton's convergence basin. Its symmetric functions are exactly
  // recoverable, though: the pair sum from the trace identity and the pair
  // product from the constant term divided by the other roots, so the stable
  // quadratic resolves the split far below what the iteration can.
  if (clusters.empty() && d >= 3) {
    size_t best_i = 0, best_j = 0;
    double best_gap = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < roots.size(); ++i) {
      for (size_t j = i + 1; j < roots.size(); ++j) {
        const double gap = std::abs(roots[i] - roots[j]);
        if (gap < best_gap) {
          best_gap = gap;
          best_i = i;
          best_j = j;
        }
      }
    }
    if (best_gap < 1e-5 * s) {
      Complex others_sum = 0;
      Complex others_prod = 1;
      bool others_ok = true;
      for (size_t k = 0; k < roots.size(); ++k) {
        if (k == best_i || k == best_j) continue;
        others_sum += roots[k];
        others_prod *= roots[k];
        if (std::abs(roots[k]) < 1e-280) others_ok = false;
      }
      if (others_ok) {
        const Complex pair_sum = ddc_val(ddc_neg(poly.c[d - 1])) - others_sum;
        const double sign = (d % 2 == 0) ? 1.0 : -1.0;
        const Complex pair_prod = sign * ddc_val(poly.c[0]) / others_prod;
        const auto refined = quadratic_roots_stable(-pair_sum, pair_prod);
        // Keep the refinement only when it stays in the same neighborhood.
        if (std::abs(refined[0] - roots[best_i]) + std::abs(refined[1] - roots[best_j]) <
                4.0 * best_gap + 1e-12 * s ||
            std::abs(refined[1] - roots[best_i]) + std::abs(refined[0] - roots[best_j]) <
                4.0 * best_gap + 1e-12 * s) {
          roots[best_i] = refined[0];
          roots[best_j] = refined[1];
        }
      }
    }
  }
  return roots;
}

std::array<Complex, 4> checked_quartic(const PrecisePoly& poly) {
  const std::vector<Complex> roots = poly_roots_precise(poly);
  const std::vector<Complex> cdbl = poly.doubles();
  double s = 1.0;
  for (size_t k = 0; k < 4; ++k) {
    s = std::max(s, std::pow(std::abs(cdbl[k]), 1.0 / static_cast<double>(4 - k)));
  }
  const double res_scale = std::max(1.0, s * s * s * s);
  std::array<Complex, 4> out{};
  for (size_t i = 0; i < 4; ++i) {
    out[i] = roots[i];
    const double residual = ddc_abs(poly.eval(out[i]));
    if (residual > 1e-6 * res_scale) {
      std::ostringstream msg;
      msg << "quartic_roots: residual " << residual << " at root (" << out[i].real() << ","
          << out[i].imag() << ") exceeds tolerance";
      throw std::runtime_error(msg.str());
    }
  }
  return out;
}

}  // namespace

std::array<Complex, 4> quartic_roots(Complex c3, Complex c2, Complex c1, Complex c0) {
  return checked_quartic(PrecisePoly{{ddc_from(c0), ddc_from(c1), ddc_from(c2), ddc_from(c3)}});
}

std::array<Complex, 4> general_eigenvalues_4x4(const Matrix& a) {
  if (a.rows() != 4 || a.cols() != 4) {
    throw std::invalid_argument("general_eigenvalues_4x4 expects a 4x4 matrix");
  }
  return checked_quartic(charpoly_4x4_dd(ddm_from(a)));
}

std::array<Complex, 4> general_eigenvalues_product_4x4(const Matrix& a, const Matrix& b) {
  if (a.rows() != 4 || a.cols() != 4 || b.rows() != 4 || b.cols() != 4) {
    throw std::invalid_argument("general_eigenvalues_product_4x4 expects 4x4 matrices");
  }
  return checked_quartic(charpoly_4x4_dd(ddm_mul(ddm_from(a), ddm_from(b))));
}

Matrix psd_sqrt(const Matrix& a, double clamp_tol) {
  const HermitianEigen e = jacobi_hermitian(a);
  const Eigen::Index n = a.rows();
  Eigen::VectorXd vals = e.values;
  for (Eigen::Index i = 0; i < n; ++i) vals[i] = clamp_small_negative(vals[i], clamp_tol);
  Matrix d = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) d(i, i) = std::sqrt(vals[i]);
  return e.vectors * d * e.vectors.adjoint();
}

double clamp_small_negative(double x, double clamp_tol) {
  if (x >= 0) return x;
  if (x >= -clamp_tol) return 0.0;
  std::ostringstream msg;
  msg << "eigenvalue " << x << " is below the clamping tolerance -" << clamp_tol;
  throw std::invalid_argument(msg.str());
}

}  // namespace qtele
