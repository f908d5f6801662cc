#pragma once

// Period matrices of hyperelliptic curves w^2 = prod (z - lambda_i) of genus
// 1 and 2, and recovery of the branch points from the period matrix through
// squared theta quotients.
//
// Cut system: s_k = [lambda_{2k-1}, lambda_{2k}] for k <= g and
// s_{g+1} = ray from lambda_{2g+1} to infinity. The sheet-one branch w1 of w
// is analytic off the cuts: it is the product of one factor
// sqrt((z - p)(z - q)) per finite cut, each with its cut on [p, q], and one
// factor sqrt(z - lambda_{2g+1}) with its cut on the ray. Cycles:
//   b_k  counter-clockwise loop around s_k on sheet one, i.e. -2 x (integral
//        along s_k with the boundary value of w1 from the left of s_k);
//   a_g  lift of the gap [lambda_{2g}, lambda_{2g+1}]  (2 x its integral);
//   a_1  (g = 2) lift of [lambda_2, lambda_3] plus a_2.
// These satisfy <a_i, b_j> = delta_ij and place the Weierstrass points at
//   phi(P_1) = 0, phi(P_2) = pi1 / 2, ..., phi(P_{2g+2}) = e1 / 2.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "h2/error.hpp"
#include "h2/theta.hpp"

namespace h2 {

struct BranchPoint {
  cplx value{};
  bool infinite = false;

  static BranchPoint at(cplx z) { return {z, false}; }
  static BranchPoint infinity() { return {{}, true}; }
};

namespace geom {

inline double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

inline double point_segment_distance(cplx x, cplx p, cplx q) {
  const cplx d = q - p;
  const double len2 = std::norm(d);
  if (len2 == 0.0) {
    return std::abs(x - p);
  }
  const double t = std::clamp(((x - p) * std::conj(d)).real() / len2, 0.0, 1.0);
  return std::abs(x - (p + t * d));
}

/// True if the closed segments [a, b] and [p, q] meet anywhere other than at a
/// shared endpoint.
inline bool segments_conflict(cplx a, cplx b, cplx p, cplx q) {
  const double scale = std::max({1.0, std::abs(a), std::abs(b), std::abs(p), std::abs(q)});
  const double eps = 1e-12 * scale;
  std::optional<cplx> shared;
  for (cplx u : {a, b}) {
    for (cplx v : {p, q}) {
      if (u == v) {
        shared = u;
      }
    }
  }
  const cplx r = b - a;
  const cplx s = q - p;
  const double denom = cross(r, s);
  if (std::abs(denom) > eps * std::max(std::abs(r), std::abs(s))) {
    const double t = cross(p - a, s) / denom;
    const double u = cross(p - a, r) / denom;
    const double slack_t = eps / std::abs(r);
    const double slack_u = eps / std::abs(s);
    if (t < -slack_t || t > 1 + slack_t || u < -slack_u || u > 1 + slack_u) {
      return false;
    }
    const cplx x = a + t * r;
    return !(shared && std::abs(x - *shared) <= 1e3 * eps);
  }
  // parallel
  if (std::abs(cross(p - a, r)) > eps * std::abs(r)) {
    return false;
  }
  const double len2 = std::norm(r);
  double t0 = ((p - a) * std::conj(r)).real() / len2;
  double t1 = ((q - a) * std::conj(r)).real() / len2;
  if (t0 > t1) {
    std::swap(t0, t1);
  }
  const double lo = std::max(0.0, t0);
  const double hi = std::min(1.0, t1);
  if (hi < lo) {
    return false;
  }
  return !(shared && (hi - lo) * std::abs(r) <= 1e3 * eps);
}

} // namespace geom

/// Ordered branch points lambda_1 .. lambda_{2g+2}, g in {1, 2}; at most one
/// point at infinity, and only in the last slot.
class BranchConfig {
public:
  static constexpr double distinctness_tolerance = 1e-12;

  BranchConfig(int genus, std::vector<BranchPoint> points) : genus_(genus), points_(std::move(points)) {
    if (genus_ != 1 && genus_ != 2) {
      throw invalid_input_error("BranchConfig: genus must be 1 or 2");
    }
    if (static_cast<int>(points_.size()) != 2 * genus_ + 2) {
      throw invalid_input_error("BranchConfig: expected " + std::to_string(2 * genus_ + 2) + " branch points");
    }
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (points_[i].infinite && i + 1 != points_.size()) {
        throw invalid_input_error("BranchConfig: infinity may only occupy the last slot");
      }
      if (!points_[i].infinite && !(std::isfinite(points_[i].value.real()) && std::isfinite(points_[i].value.imag()))) {
        throw invalid_input_error("BranchConfig: non-finite branch point");
      }
    }
    for (std::size_t i = 0; i < points_.size(); ++i) {
      for (std::size_t j = i + 1; j < points_.size(); ++j) {
        if (!points_[i].infinite && !points_[j].infinite &&
            std::abs(points_[i].value - points_[j].value) <= distinctness_tolerance) {
          throw invalid_input_error("BranchConfig: branch points " + std::to_string(i + 1) + " and " +
                                    std::to_string(j + 1) + " coincide");
        }
      }
    }
    choose_ray();
    const auto cuts = finite_cuts();
    for (std::size_t i = 0; i < cuts.size(); ++i) {
      for (std::size_t j = i + 1; j < cuts.size(); ++j) {
        if (geom::segments_conflict(cuts[i][0], cuts[i][1], cuts[j][0], cuts[j][1])) {
          throw invalid_input_error("BranchConfig: straight cuts s" + std::to_string(i + 1) + " and s" +
                                    std::to_string(j + 1) + " intersect; reorder the branch points");
        }
      }
    }
  }

  /// Normalized genus-g configuration {0, 1, finite..., inf}.
  static BranchConfig normalized_from(const std::vector<cplx> &finite_tail) {
    std::vector<BranchPoint> pts{BranchPoint::at(0.0), BranchPoint::at(1.0)};
    for (cplx z : finite_tail) {
      pts.push_back(BranchPoint::at(z));
    }
    pts.push_back(BranchPoint::infinity());
    const int g = static_cast<int>(pts.size()) / 2 - 1;
    return BranchConfig(g, std::move(pts));
  }

  int genus() const { return genus_; }
  const std::vector<BranchPoint> &points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  /// 1-based access.
  const BranchPoint &lambda(int j) const { return points_.at(j - 1); }
  cplx finite(int j) const {
    if (lambda(j).infinite) {
      throw invalid_input_error("branch point " + std::to_string(j) + " is at infinity");
    }
    return lambda(j).value;
  }

  bool has_infinity() const { return points_.back().infinite; }

  bool is_normalized() const {
    return has_infinity() && points_[0].value == cplx(0.0) && points_[1].value == cplx(1.0);
  }

  /// Moebius image with lambda_1 -> 0, lambda_2 -> 1, lambda_{2g+2} -> infinity.
  BranchConfig normalized() const {
    const cplx l1 = points_[0].value;
    const cplx l2 = points_[1].value;
    std::vector<BranchPoint> out;
    for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
      const cplx z = points_[i].value;
      cplx w;
      if (has_infinity()) {
        w = (z - l1) / (l2 - l1);
      } else {
        const cplx ll = points_.back().value;
        w = ((z - l1) / (z - ll)) * ((l2 - ll) / (l2 - l1));
      }
      out.push_back(BranchPoint::at(w));
    }
    out[0].value = 0.0;
    out[1].value = 1.0;
    out.push_back(BranchPoint::infinity());
    return BranchConfig(genus_, std::move(out));
  }

  /// Direction of the last cut when it runs to infinity.
  cplx ray_direction() const { return ray_direction_; }

  /// Finite cut endpoints; the last cut is truncated far out along the ray.
  std::vector<std::array<cplx, 2>> finite_cuts() const {
    std::vector<std::array<cplx, 2>> cuts;
    for (int k = 1; k <= genus_ + 1; ++k) {
      const cplx p = points_[2 * k - 2].value;
      if (points_[2 * k - 1].infinite) {
        cuts.push_back({p, p + far_distance() * ray_direction_});
      } else {
        cuts.push_back({p, points_[2 * k - 1].value});
      }
    }
    return cuts;
  }

  /// Gap segments [lambda_{2k}, lambda_{2k+1}], k = 1..g.
  std::vector<std::array<cplx, 2>> gaps() const {
    std::vector<std::array<cplx, 2>> out;
    for (int k = 1; k <= genus_; ++k) {
      out.push_back({points_[2 * k - 1].value, points_[2 * k].value});
    }
    return out;
  }

  /// Whether the polyline lambda_1 -> ... -> lambda_{2g+1} -> (ray) is simple,
  /// i.e. gaps cross neither the cuts nor each other.
  bool chain_is_simple() const { return chain_simple_; }

  double far_distance() const {
    double m = 1.0;
    for (const auto &p : points_) {
      if (!p.infinite) {
        m = std::max(m, std::abs(p.value));
      }
    }
    return 1e4 * m;
  }

private:
  bool chain_conflicts(cplx ray_dir, bool include_gaps) const {
    const cplx origin = points_[2 * genus_].value;
    const cplx far = origin + far_distance() * ray_dir;
    for (int k = 1; k <= genus_; ++k) {
      if (geom::segments_conflict(points_[2 * k - 2].value, points_[2 * k - 1].value, origin, far)) {
        return true;
      }
    }
    if (include_gaps) {
      const auto gs = gaps();
      std::vector<std::array<cplx, 2>> cuts;
      for (int k = 1; k <= genus_; ++k) {
        cuts.push_back({points_[2 * k - 2].value, points_[2 * k - 1].value});
      }
      cuts.push_back({origin, far});
      for (const auto &gp : gs) {
        for (const auto &c : cuts) {
          if (geom::segments_conflict(gp[0], gp[1], c[0], c[1])) {
            return true;
          }
        }
      }
      for (std::size_t i = 0; i < gs.size(); ++i) {
        for (std::size_t j = i + 1; j < gs.size(); ++j) {
          if (geom::segments_conflict(gs[i][0], gs[i][1], gs[j][0], gs[j][1])) {
            return true;
          }
        }
      }
    }
    return false;
  }

  double ray_clearance(cplx dir) const {
    const cplx origin = points_[2 * genus_].value;
    const cplx far = origin + far_distance() * dir;
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < 2 * genus_; ++j) {
      best = std::min(best, geom::point_segment_distance(points_[j].value, origin, far));
    }
    return best;
  }

  void choose_ray() {
    if (!has_infinity()) {
      chain_simple_ = !chain_conflicts_finite();
      return;
    }
    const cplx origin = points_[2 * genus_].value;
    cplx centroid = 0.0;
    for (int j = 0; j < 2 * genus_; ++j) {
      centroid += points_[j].value;
    }
    centroid /= double(2 * genus_);
    const double outward = std::abs(origin - centroid) > 0 ? std::arg(origin - centroid) : 0.0;
    constexpr int steps = 720;
    const double pi = std::numbers::pi;
    for (bool include_gaps : {true, false}) {
      std::vector<std::pair<cplx, double>> candidates;
      double best = -1.0;
      for (int k = 0; k < steps; ++k) {
        // outward first, then alternating either side
        const int offset = (k % 2 == 0) ? k / 2 : -(k + 1) / 2;
        const cplx dir = std::polar(1.0, outward + 2.0 * pi * offset / steps);
        if (chain_conflicts(dir, include_gaps)) {
          continue;
        }
        const double c = ray_clearance(dir);
        candidates.emplace_back(dir, c);
        best = std::max(best, c);
      }
      for (const auto &[dir, c] : candidates) {
        if (c >= 0.5 * best) {
          ray_direction_ = dir;
          chain_simple_ = include_gaps;
          return;
        }
      }
    }
    throw invalid_input_error("BranchConfig: no straight ray from the last finite branch point avoids the other cuts");
  }

  bool chain_conflicts_finite() const {
    const auto cuts = finite_cuts();
    const auto gs = gaps();
    for (const auto &gp : gs) {
      for (const auto &c : cuts) {
        if (geom::segments_conflict(gp[0], gp[1], c[0], c[1])) {
          return true;
        }
      }
    }
    return false;
  }

  int genus_;
  std::vector<BranchPoint> points_;
  cplx ray_direction_{1.0, 0.0};
  bool chain_simple_ = false;
};

// ---------------------------------------------------------------------------
// Quadrature

namespace detail {

/// sqrt((z - p)(z - q)) with its branch cut on the segment [p, q]; ~ z at
/// infinity. Takes the differences dp = z - p, dq = z - q.
inline cplx segment_root(cplx dp, cplx dq) { return dp * std::sqrt(dq / dp); }

/// sqrt(-d), with a signed zero in Im d folded to +0 so the sign is reproducible.
inline cplx ray_scale(cplx d) { return std::sqrt(cplx(-d.real(), 0.0 - d.imag())); }

/// sqrt(z - p) with its branch cut on the ray p + t d, t >= 0.
inline cplx ray_root(cplx dp, cplx d) { return ray_scale(d) * std::sqrt(-dp / d); }

/// A point on a straight path between branch points. The differences to the
/// path's endpoints are supplied directly so they keep full relative accuracy
/// at the Chebyshev nodes crowding the ends.
struct PathPoint {
  cplx z;
  int from = 0, to = 0;  ///< 1-based endpoint indices, 0 if unused
  cplx d_from, d_to;     ///< z - lambda_from, z - lambda_to

  cplx diff(const BranchConfig &cfg, int j) const {
    if (j == from) {
      return d_from;
    }
    if (j == to) {
      return d_to;
    }
    return z - cfg.finite(j);
  }
};

/// Product of all sheet-one root factors except cut number `skip` (0-based; -1 for none).
inline cplx w1_except(const BranchConfig &cfg, const PathPoint &pt, int skip) {
  const int g = cfg.genus();
  cplx r = 1.0;
  for (int k = 0; k <= g; ++k) {
    if (k == skip) {
      continue;
    }
    const cplx dp = pt.diff(cfg, 2 * k + 1);
    if (cfg.lambda(2 * k + 2).infinite) {
      r *= ray_root(dp, cfg.ray_direction());
    } else {
      r *= segment_root(dp, pt.diff(cfg, 2 * k + 2));
    }
  }
  return r;
}

inline cplx w1_except(const BranchConfig &cfg, cplx z, int skip) { return w1_except(cfg, PathPoint{z, 0, 0, {}, {}}, skip); }

/// Chebyshev nodes of the first kind mapped to (0, 1), as pairs (t, 1 - t)
/// with both entries accurate near the ends.
inline std::vector<std::pair<double, double>> chebyshev_nodes01(int n) {
  std::vector<std::pair<double, double>> t(n);
  const double pi = std::numbers::pi;
  for (int k = 1; k <= n; ++k) {
    const double half = (2.0 * k - 1.0) * pi / (4.0 * n);
    const double c = std::cos(half), s = std::sin(half);
    t[k - 1] = {c * c, s * s};
  }
  return t;
}

inline constexpr int quadrature_min_nodes = 32;
inline constexpr int quadrature_max_nodes = 1 << 17;

/// Integrates h(t, 1 - t) / sqrt(t (1 - t)) over (0, 1) for monomial powers 0..pmax,
/// doubling the node count until successive values agree.
template <class F>
std::vector<cplx> chebyshev_integrate(F &&h, int pmax, double tol, const char *what) {
  const double pi = std::numbers::pi;
  std::vector<cplx> prev;
  for (int n = quadrature_min_nodes; n <= quadrature_max_nodes; n *= 2) {
    std::vector<cplx> acc(pmax + 1, 0.0);
    std::vector<cplx> term(pmax + 1);
    std::vector<double> mag(pmax + 1, 0.0);
    for (auto [t, tc] : chebyshev_nodes01(n)) {
      std::fill(term.begin(), term.end(), cplx(0.0));
      h(t, tc, term);
      for (int p = 0; p <= pmax; ++p) {
        acc[p] += term[p];
        mag[p] += std::abs(term[p]);
      }
    }
    for (int p = 0; p <= pmax; ++p) {
      acc[p] *= pi / n;
      mag[p] *= pi / n;
    }
    if (!prev.empty()) {
      bool converged = true;
      for (int p = 0; p <= pmax; ++p) {
        if (!std::isfinite(acc[p].real()) || !std::isfinite(acc[p].imag())) {
          throw quadrature_error(std::string(what) + ": non-finite integrand");
        }
        // below the summation roundoff level further doubling cannot help
        const double floor = 64.0 * std::numeric_limits<double>::epsilon() * mag[p];
        if (std::abs(acc[p] - prev[p]) > std::max(0.1 * tol * std::max(1.0, std::abs(acc[p])), floor)) {
          converged = false;
        }
      }
      if (converged) {
        return acc;
      }
    }
    prev = std::move(acc);
  }
  throw quadrature_error(std::string(what) + ": Gauss-Chebyshev quadrature did not converge");
}

} // namespace detail

inline constexpr double segment_clearance = 1e-9;

/// Integrals of z^p dz / w, p = 0..pmax, along the straight path from branch
/// point `from` to branch point `to` (1-based). On a cut the boundary value of
/// w1 from the left of the cut (oriented lambda_{2k-1} -> lambda_{2k}) is used;
/// elsewhere the path may not cross a cut and w = w1.
inline std::vector<cplx> segment_integrals(const BranchConfig &cfg, int from, int to, int pmax, double tol = 1e-13) {
  const int npts = static_cast<int>(cfg.size());
  if (from < 1 || from > npts || to < 1 || to > npts) {
    throw invalid_input_error("segment_integral: branch index out of range");
  }
  if (from == to) {
    throw invalid_input_error("segment_integral: endpoints coincide");
  }
  if (pmax < 0) {
    throw invalid_input_error("segment_integral: negative monomial power");
  }
  if (from > to) {
    auto v = segment_integrals(cfg, to, from, pmax, tol);
    for (auto &x : v) {
      x = -x;
    }
    return v;
  }
  const int g = cfg.genus();
  const bool is_cut = (from % 2 == 1) && (to == from + 1);
  const int cut_index = (from - 1) / 2;  // 0-based, meaningful when is_cut

  if (cfg.lambda(to).infinite) {
    if (!is_cut) {
      throw invalid_input_error("segment_integral: infinity is reachable only along the last cut");
    }
    if (pmax > g - 1) {
      throw invalid_input_error("segment_integral: z^p dz / w is not integrable at infinity for p >= g");
    }
    const cplx origin = cfg.finite(from);
    const cplx d = cfg.ray_direction();
    for (int j = 1; j <= npts; ++j) {
      if (j != from && !cfg.lambda(j).infinite &&
          geom::point_segment_distance(cfg.finite(j), origin, origin + cfg.far_distance() * d) < segment_clearance) {
        throw quadrature_error("segment_integral: branch point " + std::to_string(j) + " lies on the ray");
      }
    }
    // z = origin + d s / (1 - s); w on the left = sqrt(-d) (-i) sqrt(s / (1 - s)) * (other factors)
    const cplx neg_i = cplx(0.0, -1.0) * detail::ray_scale(d);
    auto h = [&](double s, double sc, std::vector<cplx> &acc) {
      const cplx z = origin + d * (s / sc);
      const cplx base = d / (neg_i * sc * detail::w1_except(cfg, z, cut_index));
      cplx zp = 1.0;
      for (int p = 0; p <= pmax; ++p) {
        acc[p] += zp * base;
        zp *= z;
      }
    };
    return detail::chebyshev_integrate(h, pmax, tol, "segment_integral");
  }

  const cplx a = cfg.finite(from);
  const cplx b = cfg.finite(to);
  for (int j = 1; j <= npts; ++j) {
    if (j == from || j == to || cfg.lambda(j).infinite) {
      continue;
    }
    if (geom::point_segment_distance(cfg.finite(j), a, b) < segment_clearance) {
      throw quadrature_error("segment_integral: branch point " + std::to_string(j) + " lies within " +
                             std::to_string(segment_clearance) + " of the path");
    }
  }
  if (is_cut) {
    // dz / w_left = dt / (i sqrt(t (1 - t)) * other factors)
    const cplx i_unit(0.0, 1.0);
    auto h = [&](double t, double, std::vector<cplx> &acc) {
      const cplx z = a + t * (b - a);
      const cplx base = 1.0 / (i_unit * detail::w1_except(cfg, z, cut_index));
      cplx zp = 1.0;
      for (int p = 0; p <= pmax; ++p) {
        acc[p] += zp * base;
        zp *= z;
      }
    };
    return detail::chebyshev_integrate(h, pmax, tol, "segment_integral");
  }
  int k = 0;
  for (const auto &c : cfg.finite_cuts()) {
    ++k;
    if (geom::segments_conflict(a, b, c[0], c[1])) {
      throw quadrature_error("segment_integral: path from " + std::to_string(from) + " to " + std::to_string(to) +
                             " crosses cut s" + std::to_string(k));
    }
  }
  auto h = [&](double t, double tc, std::vector<cplx> &acc) {
    const detail::PathPoint pt{a + t * (b - a), from, to, t * (b - a), -tc * (b - a)};
    const cplx base = std::sqrt(t * tc) * (b - a) / detail::w1_except(cfg, pt, -1);
    cplx zp = 1.0;
    for (int p = 0; p <= pmax; ++p) {
      acc[p] += zp * base;
      zp *= pt.z;
    }
  };
  return detail::chebyshev_integrate(h, pmax, tol, "segment_integral");
}

inline cplx segment_integral(const BranchConfig &cfg, int from, int to, int power, double tol = 1e-13) {
  return segment_integrals(cfg, from, to, power, tol).at(power);
}

// ---------------------------------------------------------------------------
// Period matrix

struct PeriodData {
  CMatrix A;  ///< A(i, k) = integral over a_k of z^i dz / w
  CMatrix B;  ///< B(i, k) = integral over b_k of z^i dz / w
  CMatrix raw_pi;
  double symmetry_defect;
  SiegelPoint Pi;
};

inline constexpr double period_symmetry_abort = 1e-6;

inline PeriodData period_matrix(const BranchConfig &cfg, double tol = 1e-13) {
  if (!cfg.is_normalized()) {
    throw invalid_input_error("period_matrix: configuration must be normalized (0, 1, ..., inf)");
  }
  if (!cfg.chain_is_simple()) {
    throw invalid_input_error(
        "period_matrix: the path lambda_1 -> ... -> lambda_{2g+1} crosses a cut; reorder the branch points");
  }
  const int g = cfg.genus();
  const int pmax = g - 1;
  CMatrix A(g, g), B(g, g);
  for (int k = 1; k <= g; ++k) {
    const auto cut = segment_integrals(cfg, 2 * k - 1, 2 * k, pmax, tol);
    for (int i = 0; i <= pmax; ++i) {
      B(i, k - 1) = -2.0 * cut[i];
    }
  }
  const auto last_gap = segment_integrals(cfg, 2 * g, 2 * g + 1, pmax, tol);
  for (int i = 0; i <= pmax; ++i) {
    A(i, g - 1) = 2.0 * last_gap[i];
  }
  if (g == 2) {
    const auto first_gap = segment_integrals(cfg, 2, 3, pmax, tol);
    for (int i = 0; i <= pmax; ++i) {
      A(i, 0) = 2.0 * first_gap[i] + A(i, 1);
    }
  }
  Eigen::PartialPivLU<CMatrix> lu(A);
  CMatrix pi = lu.solve(B);
  double defect = 0.0;
  const double scale = std::max(1.0, pi.cwiseAbs().maxCoeff());
  for (int i = 0; i < g; ++i) {
    for (int j = i + 1; j < g; ++j) {
      defect = std::max(defect, std::abs(pi(i, j) - pi(j, i)) / scale);
    }
  }
  if (!(defect <= period_symmetry_abort)) {
    throw verification_error("period_matrix: period matrix is not symmetric (defect " + std::to_string(defect) +
                             "); cycle bookkeeping is inconsistent");
  }
  try {
    SiegelPoint sp = SiegelPoint::symmetrized(pi);
    return PeriodData{A, B, pi, defect, std::move(sp)};
  } catch (const invalid_input_error &e) {
    throw verification_error(std::string("period_matrix: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Abel images of the Weierstrass points

/// value = x + Pi y, lattice coordinates x, y in [0, 1)^g.
struct AbelPoint {
  RVector x;
  RVector y;
  CVector value;
};

inline AbelPoint abel_point(const SiegelPoint &pi, RVector x, RVector y) {
  CVector v = x.cast<cplx>() + pi.matrix() * y.cast<cplx>();
  return {std::move(x), std::move(y), std::move(v)};
}

/// Reduces an arbitrary vector modulo the lattice spanned by (Id, Pi).
/// Coordinates within 1e-12 below an integer are taken as that integer.
inline AbelPoint reduce_to_lattice_cell(const SiegelPoint &pi, const CVector &v) {
  RVector y = pi.imag_inverse() * v.imag();
  RVector x = v.real() - pi.matrix().real() * y;
  auto frac = [](double t) {
    double f = t - std::floor(t);
    return f >= 1.0 - 1e-12 ? 0.0 : f;
  };
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    x(i) = frac(x(i));
    y(i) = frac(y(i));
  }
  return abel_point(pi, x, y);
}

/// phi(P_1), ..., phi(P_{2g+2}) for the cycle basis above.
inline std::vector<AbelPoint> half_periods(const SiegelPoint &pi) {
  const int g = pi.genus();
  auto vec = [g](std::initializer_list<double> v) {
    RVector r = RVector::Zero(g);
    int i = 0;
    for (double x : v) {
      if (i < g) {
        r(i) = x;
      }
      ++i;
    }
    return r;
  };
  std::vector<AbelPoint> out;
  if (g == 1) {
    out.push_back(abel_point(pi, vec({0}), vec({0})));
    out.push_back(abel_point(pi, vec({0}), vec({0.5})));
    out.push_back(abel_point(pi, vec({0.5}), vec({0.5})));
    out.push_back(abel_point(pi, vec({0.5}), vec({0})));
  } else if (g == 2) {
    out.push_back(abel_point(pi, vec({0, 0}), vec({0, 0})));
    out.push_back(abel_point(pi, vec({0, 0}), vec({0.5, 0})));
    out.push_back(abel_point(pi, vec({0.5, 0.5}), vec({0.5, 0})));
    out.push_back(abel_point(pi, vec({0.5, 0.5}), vec({0.5, 0.5})));
    out.push_back(abel_point(pi, vec({0.5, 0}), vec({0.5, 0.5})));
    out.push_back(abel_point(pi, vec({0.5, 0}), vec({0, 0})));
  } else {
    throw invalid_input_error("half_periods: genus must be 1 or 2");
  }
  return out;
}

inline std::vector<AbelPoint> half_periods(const PeriodData &pd) { return half_periods(pd.Pi); }

// ---------------------------------------------------------------------------
// Branch point recovery

/// Numerator / denominator characteristics of the coordinate quotient:
/// eps = (1, 0, ..), eps' = (1, 1, 0, ..) over eps = (1, 0, ..), eps' = (0, 1, 0, ..).
inline std::array<ThetaCharacteristic, 2> coordinate_characteristics(int g) {
  ThetaCharacteristic num{std::vector<std::int64_t>(g, 0), std::vector<std::int64_t>(g, 0)};
  ThetaCharacteristic den = num;
  num.eps[0] = 1;
  den.eps[0] = 1;
  num.eps_prime[0] = 1;
  if (g >= 2) {
    num.eps_prime[1] = 1;
    den.eps_prime[1] = 1;
  }
  return {num, den};
}

/// Characteristic shift (eps; eps') = (0, 0; 0, 1) added to both coordinate
/// characteristics to obtain a quotient that does not degenerate at P_5.
/// Selected by calibrate_lambda5_shift against quadrature ground truth.
inline ThetaCharacteristic lambda5_shift() { return ThetaCharacteristic{{0, 0}, {0, 1}}; }

inline constexpr double degenerate_theta_threshold = 1e-10;

namespace detail {

inline cplx squared_theta_quotient(const std::array<ThetaCharacteristic, 2> &chars, const CVector &u,
                                   const SiegelPoint &pi, double tol) {
  const cplx num = theta_eval(chars[0], u, pi, tol);
  const cplx den = theta_eval(chars[1], u, pi, tol);
  const double scale = std::exp(std::numbers::pi * u.imag().dot(pi.imag_inverse() * u.imag()));
  if (std::abs(den) <= degenerate_theta_threshold * scale) {
    throw degenerate_index_error("theta quotient denominator vanishes at this argument");
  }
  return (num * num) / (den * den);
}

/// z(P) = Q(u) / Q(phi(P_2)) for a quotient Q with divisor 2 P_1 - 2 P_{2g+2}.
inline cplx normalized_quotient(const std::array<ThetaCharacteristic, 2> &chars, const CVector &u,
                                const SiegelPoint &pi, double tol) {
  const auto hp = half_periods(pi);
  const cplx c = squared_theta_quotient(chars, hp[1].value, pi, tol);
  if (std::abs(c) <= degenerate_theta_threshold) {
    throw degenerate_index_error("theta quotient vanishes at P_2");
  }
  return squared_theta_quotient(chars, u, pi, tol) / c;
}

inline std::array<ThetaCharacteristic, 2> shifted(const std::array<ThetaCharacteristic, 2> &chars,
                                                  const ThetaCharacteristic &eta) {
  return {(chars[0] + eta).reduced(), (chars[1] + eta).reduced()};
}

} // namespace detail

/// The meromorphic coordinate z evaluated at a point u of C^g through the
/// squared theta quotient; equals z(P) when u = phi(P).
inline cplx branch_coordinate(const SiegelPoint &pi, const CVector &u, double tol = 1e-14) {
  return detail::normalized_quotient(coordinate_characteristics(pi.genus()), u, pi, tol);
}

/// Indices at which the quotient is usable: {3} for g = 1, {3, 4} for g = 2.
inline bool recoverable_index(int g, int j) { return j == 3 || (g == 2 && j == 4); }

inline cplx recover_branch_point(const SiegelPoint &pi, int j, double tol = 1e-14) {
  const int g = pi.genus();
  if (g != 1 && g != 2) {
    throw invalid_input_error("recover_branch_point: genus must be 1 or 2");
  }
  if (!recoverable_index(g, j)) {
    throw degenerate_index_error("recover_branch_point: index " + std::to_string(j) +
                                 " is degenerate (numerator and denominator both vanish or index is fixed by "
                                 "normalization); usable indices are " +
                                 (g == 1 ? std::string("{3}") : std::string("{3, 4}")));
  }
  const auto hp = half_periods(pi);
  return branch_coordinate(pi, hp[j - 1].value, tol);
}

inline cplx recover_branch_point(const PeriodData &pd, int j, double tol = 1e-14) {
  return recover_branch_point(pd.Pi, j, tol);
}

/// lambda_5 of a genus-2 curve from the quotient with characteristics shifted by eta.
inline cplx recover_lambda5_with_shift(const SiegelPoint &pi, const ThetaCharacteristic &eta, double tol = 1e-14) {
  if (pi.genus() != 2) {
    throw invalid_input_error("recover_lambda5: genus must be 2");
  }
  const auto chars = detail::shifted(coordinate_characteristics(2), eta);
  const auto hp = half_periods(pi);
  return detail::normalized_quotient(chars, hp[4].value, pi, tol);
}

inline cplx recover_lambda5(const SiegelPoint &pi, double tol = 1e-14) {
  return recover_lambda5_with_shift(pi, lambda5_shift(), tol);
}

/// Normalized configuration {0, 1, lambda_3, [lambda_4, lambda_5,] inf}.
inline BranchConfig recover_all(const SiegelPoint &pi, double tol = 1e-14) {
  const int g = pi.genus();
  std::vector<cplx> tail{recover_branch_point(pi, 3, tol)};
  if (g == 2) {
    tail.push_back(recover_branch_point(pi, 4, tol));
    tail.push_back(recover_lambda5(pi, tol));
  }
  return BranchConfig::normalized_from(tail);
}

inline BranchConfig recover_all(const PeriodData &pd, double tol = 1e-14) { return recover_all(pd.Pi, tol); }

struct CalibrationEntry {
  ThetaCharacteristic shift;
  double max_error;  ///< infinity when the quotient degenerates on some corpus member
};

/// Scores every shift of the coordinate characteristics by a half-integer
/// characteristic as a lambda_5 formula over a corpus with known lambda_5.
inline std::vector<CalibrationEntry> calibrate_lambda5_shift(const std::vector<std::pair<SiegelPoint, cplx>> &corpus,
                                                             double tol = 1e-14) {
  std::vector<CalibrationEntry> out;
  for (const auto &eta : half_integer_characteristics(2)) {
    double worst = 0.0;
    for (const auto &[pi, lambda5] : corpus) {
      try {
        const cplx got = recover_lambda5_with_shift(pi, eta, tol);
        const double err = std::abs(got - lambda5);
        worst = std::isfinite(err) ? std::max(worst, err) : std::numeric_limits<double>::infinity();
      } catch (const degenerate_index_error &) {
        worst = std::numeric_limits<double>::infinity();
      }
    }
    out.push_back({eta, worst});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Random corpora

struct CorpusOptions {
  int genus = 2;
  double radius = 5.0;        ///< |lambda| <= radius
  double separation = 0.3;    ///< pairwise distance between finite branch points
  bool real_only = false;
};

/// Draws a normalized configuration whose cut chain is simple. Complex points
/// are drawn uniformly in the disk; the free points are tried in every order.
template <class Rng>
BranchConfig random_branch_config(Rng &rng, const CorpusOptions &opt = {}) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int free = 2 * opt.genus - 1;
  for (int attempt = 0; attempt < 100000; ++attempt) {
    std::vector<cplx> pts;
    for (int i = 0; i < free; ++i) {
      if (opt.real_only) {
        pts.emplace_back(-opt.radius + 2.0 * opt.radius * unit(rng), 0.0);
      } else {
        const double r = opt.radius * std::sqrt(unit(rng));
        const double th = 2.0 * std::numbers::pi * unit(rng);
        pts.push_back(std::polar(r, th));
      }
    }
    std::vector<cplx> all{0.0, 1.0};
    all.insert(all.end(), pts.begin(), pts.end());
    bool ok = true;
    for (std::size_t i = 0; i < all.size() && ok; ++i) {
      for (std::size_t j = i + 1; j < all.size(); ++j) {
        if (std::abs(all[i] - all[j]) < opt.separation) {
          ok = false;
          break;
        }
      }
    }
    if (!ok) {
      continue;
    }
    std::sort(pts.begin(), pts.end(), [](cplx a, cplx b) {
      return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    do {
      try {
        BranchConfig cfg = BranchConfig::normalized_from(pts);
        if (cfg.chain_is_simple()) {
          return cfg;
        }
      } catch (const invalid_input_error &) {
      }
    } while (std::next_permutation(pts.begin(), pts.end(), [](cplx a, cplx b) {
      return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    }));
  }
  throw invalid_input_error("random_branch_config: could not draw a valid configuration");
}

} // namespace h2
