#pragma once

// First-order theta functions with integer characteristic
//
//   theta[eps; eps'](z, sigma) =
//     sum_{N in Z^g} exp(2 pi i [ 1/2 n^t sigma n + n^t (z + eps'/2) ]),  n = N + eps/2,
//
// on the Siegel upper half space. The lattice sum is truncated to a box
// around the maximum of the Gaussian envelope, with a certified tail bound.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "h2/error.hpp"

namespace h2 {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Complex symmetric g x g matrix with positive-definite imaginary part.
class SiegelPoint {
public:
  static constexpr double symmetry_tolerance = 1e-12;

  explicit SiegelPoint(CMatrix sigma) : sigma_(std::move(sigma)) {
    const auto g = sigma_.rows();
    if (g < 1 || sigma_.cols() != g) {
      throw invalid_input_error("SiegelPoint: matrix must be square and non-empty");
    }
    if (!sigma_.allFinite()) {
      throw invalid_input_error("SiegelPoint: non-finite entry");
    }
    for (Eigen::Index i = 0; i < g; ++i) {
      for (Eigen::Index j = i + 1; j < g; ++j) {
        if (std::abs(sigma_(i, j) - sigma_(j, i)) > symmetry_tolerance) {
          throw invalid_input_error("SiegelPoint: matrix is not symmetric");
        }
      }
    }
    imag_ = sigma_.imag();
    Eigen::LLT<RMatrix> llt(imag_);
    if (llt.info() != Eigen::Success) {
      throw invalid_input_error("SiegelPoint: imaginary part is not positive definite");
    }
    imag_inverse_ = llt.solve(RMatrix::Identity(g, g));
    min_eigenvalue_ = Eigen::SelfAdjointEigenSolver<RMatrix>(imag_, Eigen::EigenvaluesOnly).eigenvalues()(0);
    if (!(min_eigenvalue_ > 0.0)) {
      throw invalid_input_error("SiegelPoint: imaginary part is not positive definite");
    }
  }

  /// Symmetrizes first; for matrices that are symmetric only up to roundoff.
  static SiegelPoint symmetrized(const CMatrix &m) {
    CMatrix s = 0.5 * (m + m.transpose());
    return SiegelPoint(s);
  }

  int genus() const { return static_cast<int>(sigma_.rows()); }
  const CMatrix &matrix() const { return sigma_; }
  cplx operator()(int i, int j) const { return sigma_(i, j); }
  const RMatrix &imag() const { return imag_; }
  const RMatrix &imag_inverse() const { return imag_inverse_; }
  double min_imag_eigenvalue() const { return min_eigenvalue_; }

private:
  CMatrix sigma_;
  RMatrix imag_;
  RMatrix imag_inverse_;
  double min_eigenvalue_ = 0.0;
};

struct ThetaCharacteristic {
  std::vector<std::int64_t> eps;
  std::vector<std::int64_t> eps_prime;

  int genus() const { return static_cast<int>(eps.size()); }

  /// eps . eps' mod 2: 1 for odd characteristics.
  int parity() const {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < eps.size(); ++i) {
      s += eps[i] * eps_prime[i];
    }
    return static_cast<int>(((s % 2) + 2) % 2);
  }

  /// Component-wise reduction into {0, 1}.
  ThetaCharacteristic reduced() const {
    ThetaCharacteristic r = *this;
    for (auto *v : {&r.eps, &r.eps_prime}) {
      for (auto &x : *v) {
        x = ((x % 2) + 2) % 2;
      }
    }
    return r;
  }

  friend ThetaCharacteristic operator+(const ThetaCharacteristic &a, const ThetaCharacteristic &b) {
    ThetaCharacteristic r = a;
    for (std::size_t i = 0; i < r.eps.size(); ++i) {
      r.eps[i] += b.eps[i];
      r.eps_prime[i] += b.eps_prime[i];
    }
    return r;
  }

  friend bool operator==(const ThetaCharacteristic &, const ThetaCharacteristic &) = default;
};

/// All 4^g characteristics with entries in {0, 1}, ordered by the integer
/// whose binary digits are (eps_1 .. eps_g, eps'_1 .. eps'_g), most significant first.
inline std::vector<ThetaCharacteristic> half_integer_characteristics(int g) {
  std::vector<ThetaCharacteristic> out;
  const int n = 2 * g;
  for (int code = 0; code < (1 << n); ++code) {
    ThetaCharacteristic c{std::vector<std::int64_t>(g), std::vector<std::int64_t>(g)};
    for (int k = 0; k < n; ++k) {
      const int bit = (code >> (n - 1 - k)) & 1;
      if (k < g) {
        c.eps[k] = bit;
      } else {
        c.eps_prime[k - g] = bit;
      }
    }
    out.push_back(std::move(c));
  }
  return out;
}

struct ThetaEvaluation {
  cplx value;
  int radius;             ///< half-width of the summation box
  double log_tail_bound;  ///< natural log of the certified bound on the discarded terms
  std::size_t terms;
};

namespace detail {

inline constexpr int theta_max_radius = 64;
inline constexpr int theta_max_genus = 4;

/// log of sum_{m >= R} (2m + 4)^g exp(-pi lambda m^2).
inline double log_gaussian_shell_tail(int R, int g, double lambda) {
  const double pi = std::numbers::pi;
  double log_max = -std::numeric_limits<double>::infinity();
  std::vector<double> logs;
  for (int m = R;; ++m) {
    const double lt = g * std::log(2.0 * m + 4.0) - pi * lambda * double(m) * double(m);
    logs.push_back(lt);
    log_max = std::max(log_max, lt);
    // Successive ratios are below exp(-pi lambda (2m + 1)) * ((2m + 6)/(2m + 4))^g;
    // stop once the remaining terms are negligible against the running maximum.
    if (m > R + 4 && lt < log_max - 60.0) {
      break;
    }
    if (m > R + 100000) {
      break;
    }
  }
  double s = 0.0;
  for (double lt : logs) {
    s += std::exp(lt - log_max);
  }
  // The stopping rule leaves a geometric remainder smaller than e^-50 of the sum.
  return log_max + std::log(s) + 1e-12;
}

} // namespace detail

inline ThetaEvaluation theta_eval_detailed(const ThetaCharacteristic &chr, const CVector &z, const SiegelPoint &sigma,
                                           double tol) {
  const int g = sigma.genus();
  if (chr.genus() != g || static_cast<int>(chr.eps_prime.size()) != g || z.size() != g) {
    throw invalid_input_error("theta_eval: characteristic, argument and period matrix disagree on genus");
  }
  if (g > detail::theta_max_genus) {
    throw invalid_input_error("theta_eval: genus above " + std::to_string(detail::theta_max_genus));
  }
  if (!(tol >= 1e-14) || !std::isfinite(tol)) {
    throw invalid_input_error("theta_eval: tolerance must be finite and at least 1e-14");
  }
  if (!z.allFinite()) {
    throw invalid_input_error("theta_eval: non-finite argument");
  }
  const double pi = std::numbers::pi;
  const RVector im_z = z.imag();
  const RVector center = -sigma.imag_inverse() * im_z;  // maximum of |term| over real n
  const double log_envelope = pi * im_z.dot(sigma.imag_inverse() * im_z);
  const double lambda = sigma.min_imag_eigenvalue();
  const double log_tol = std::log(tol);

  int radius = 1;
  double log_tail = log_envelope + detail::log_gaussian_shell_tail(radius, g, lambda);
  while (log_tail >= log_tol) {
    if (++radius > detail::theta_max_radius) {
      throw tail_certification_error("theta_eval: cannot certify tail below tolerance (min eigenvalue of Im sigma = " +
                                     std::to_string(lambda) + ")");
    }
    log_tail = log_envelope + detail::log_gaussian_shell_tail(radius, g, lambda);
  }

  std::vector<std::int64_t> lo(g), hi(g);
  for (int i = 0; i < g; ++i) {
    const double c = center(i) - 0.5 * double(chr.eps[i]);
    lo[i] = static_cast<std::int64_t>(std::ceil(c - radius));
    hi[i] = static_cast<std::int64_t>(std::floor(c + radius));
  }

  const CMatrix &s = sigma.matrix();
  CVector shifted(g);
  for (int i = 0; i < g; ++i) {
    shifted(i) = z(i) + 0.5 * double(chr.eps_prime[i]);
  }
  const cplx two_pi_i(0.0, 2.0 * pi);

  std::vector<std::int64_t> idx = lo;
  Eigen::VectorXd n(g);
  cplx sum = 0.0;
  std::size_t terms = 0;
  for (;;) {
    for (int i = 0; i < g; ++i) {
      n(i) = double(idx[i]) + 0.5 * double(chr.eps[i]);
    }
    cplx quad = 0.0;
    for (int i = 0; i < g; ++i) {
      cplx row = 0.0;
      for (int j = 0; j < g; ++j) {
        row += s(i, j) * n(j);
      }
      quad += n(i) * row;
    }
    cplx lin = 0.0;
    for (int i = 0; i < g; ++i) {
      lin += n(i) * shifted(i);
    }
    sum += std::exp(two_pi_i * (0.5 * quad + lin));
    ++terms;
    // lexicographic odometer, last index fastest
    int k = g - 1;
    while (k >= 0 && idx[k] == hi[k]) {
      idx[k] = lo[k];
      --k;
    }
    if (k < 0) {
      break;
    }
    ++idx[k];
  }
  return {sum, radius, log_tail, terms};
}

inline cplx theta_eval(const ThetaCharacteristic &chr, const CVector &z, const SiegelPoint &sigma, double tol = 1e-12) {
  return theta_eval_detailed(chr, z, sigma, tol).value;
}

/// Residuals of the four transformation laws, each |lhs - rhs| / max(1, |lhs|, |rhs|):
///   [0] z -> z + e_k          factor (-1)^{eps_k}
///   [1] z -> z + sigma e_k    factor exp(2 pi i (-z_k - sigma_kk / 2 - eps'_k / 2))
///   [2] z -> -z               factor (-1)^{eps . eps'}
///   [3] (eps, eps') -> (eps + 2 nu, eps' + 2 nu')   factor exp(pi i eps . nu')
/// Values grow like exp(pi Im z^t (Im sigma)^{-1} Im z), so the residuals are scaled.
inline std::array<double, 4> check_quasiperiodicity(const ThetaCharacteristic &chr, const CVector &z,
                                                    const SiegelPoint &sigma, int k,
                                                    const std::vector<std::int64_t> &nu,
                                                    const std::vector<std::int64_t> &nu_prime, double tol = 1e-12) {
  const int g = sigma.genus();
  if (k < 0 || k >= g) {
    throw invalid_input_error("check_quasiperiodicity: column index out of range");
  }
  if (static_cast<int>(nu.size()) != g || static_cast<int>(nu_prime.size()) != g) {
    throw invalid_input_error("check_quasiperiodicity: shift vectors have the wrong length");
  }
  const double pi = std::numbers::pi;
  const cplx i_unit(0.0, 1.0);
  auto rel = [](cplx lhs, cplx rhs) {
    return std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
  };
  const cplx base = theta_eval(chr, z, sigma, tol);
  std::array<double, 4> out{};

  CVector z1 = z;
  z1(k) += 1.0;
  out[0] = rel(theta_eval(chr, z1, sigma, tol), std::exp(pi * i_unit * double(chr.eps[k])) * base);

  CVector z2 = z + sigma.matrix().col(k);
  const cplx f2 = std::exp(2.0 * pi * i_unit * (-z(k) - 0.5 * sigma(k, k) - 0.5 * double(chr.eps_prime[k])));
  out[1] = rel(theta_eval(chr, z2, sigma, tol), f2 * base);

  std::int64_t dot = 0;
  for (int i = 0; i < g; ++i) {
    dot += chr.eps[i] * chr.eps_prime[i];
  }
  out[2] = rel(theta_eval(chr, -z, sigma, tol), std::exp(pi * i_unit * double(dot)) * base);

  ThetaCharacteristic shifted = chr;
  std::int64_t dot_nu = 0;
  for (int i = 0; i < g; ++i) {
    shifted.eps[i] += 2 * nu[i];
    shifted.eps_prime[i] += 2 * nu_prime[i];
    dot_nu += chr.eps[i] * nu_prime[i];
  }
  out[3] = rel(theta_eval(shifted, z, sigma, tol), std::exp(pi * i_unit * double(dot_nu)) * base);
  return out;
}

} // namespace h2
