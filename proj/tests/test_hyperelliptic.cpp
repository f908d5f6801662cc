#include <catch_amalgamated.hpp>

#include <random>

#include "h2/hyperelliptic.hpp"
#include "oracles.hpp"

using namespace h2;

namespace {

double sign_free_error(cplx got, cplx want) {
  return std::min(std::abs(got - want), std::abs(got + want)) / std::max(1.0, std::abs(want));
}

std::vector<cplx> finite_roots(const BranchConfig &c) {
  std::vector<cplx> r;
  for (const auto &p : c.points()) {
    if (!p.infinite) {
      r.push_back(p.value);
    }
  }
  return r;
}

const BranchConfig &reference_config() {
  static const BranchConfig c = BranchConfig::normalized_from({2.1, 3.4, {0.5, 1.2}});
  return c;
}

} // namespace

TEST_CASE("segment integral on w^2 = z (z - 1)(z + 1)") {
  const auto cfg = BranchConfig::normalized_from({-1.0});
  const cplx v = segment_integral(cfg, 1, 2, 0);
  // w^2 < 0 on (0, 1), so the integral is purely imaginary
  CHECK(std::abs(v.real()) < 1e-13);
  CHECK(std::abs(std::abs(v) - std::sqrt(2.0) * oracle::ellipk(0.5)) < 1e-12);
  CHECK(std::abs(segment_integral(cfg, 2, 1, 0) + v) < 1e-15);
}

TEST_CASE("segment integrals agree with an independent quadrature") {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 8; ++trial) {
    const BranchConfig cfg = random_branch_config(rng);
    const auto roots = finite_roots(cfg);
    for (auto [a, b] : std::vector<std::pair<int, int>>{{1, 2}, {3, 4}, {2, 3}, {4, 5}}) {
      for (int p : {0, 1}) {
        const cplx got = segment_integral(cfg, a, b, p);
        const cplx want = oracle::path_integral(roots, cfg.finite(a), cfg.finite(b), p);
        INFO("segment " << a << "->" << b << " power " << p);
        CHECK(sign_free_error(got, want) < 1e-8);
      }
    }
  }
}

TEST_CASE("cut integrals use the left boundary value") {
  // ray from 4 along +1. On (0, 1) from above: sqrt((z - 0)(z - 1)) -> i sqrt(t (1 - t)),
  // the [2, 3] factor ~ z is t - 2 < 0 times a positive root, and sqrt(z - 4) = i sqrt(4 - t).
  // So w_left = i * (negative) * i = positive and dz / w_left > 0.
  const auto cfg = BranchConfig::normalized_from({2.0, 3.0, 4.0});
  REQUIRE(std::abs(cfg.ray_direction() - 1.0) < 1e-12);
  const cplx v = segment_integral(cfg, 1, 2, 0);
  CHECK(std::abs(v.imag()) < 1e-13);
  CHECK(v.real() > 0);
}

TEST_CASE("genus one period matches the elliptic integral ratio") {
  for (double l : {1.5, 2.0, 2.5, 4.0, 9.0}) {
    const auto cfg = BranchConfig::normalized_from({l});
    const PeriodData pd = period_matrix(cfg);
    const double m = 1.0 / l;
    const cplx tau(0.0, oracle::ellipk(m) / oracle::ellipk(1.0 - m));
    CHECK(std::abs(pd.Pi(0, 0) - tau) < 1e-12);
  }
}

TEST_CASE("genus one period has the j-invariant of the curve") {
  for (cplx l : {cplx(0.3, 1.1), cplx(-2.0, 0.5), cplx(3.0, -2.0), cplx(0.5, -0.7)}) {
    const auto cfg = BranchConfig::normalized_from({l});
    const PeriodData pd = period_matrix(cfg);
    const cplx jt = oracle::j_from_tau(pd.Pi(0, 0));
    const cplx jl = oracle::j_from_lambda(l);
    CHECK(std::abs(jt - jl) / std::max(1.0, std::abs(jl)) < 1e-8);
  }
}

TEST_CASE("genus one round trip") {
  for (cplx l : {cplx(2.5, 0.0), cplx(0.3, 1.1), cplx(-2.0, 0.5), cplx(3.0, -2.0)}) {
    const PeriodData pd = period_matrix(BranchConfig::normalized_from({l}));
    CHECK(std::abs(recover_branch_point(pd, 3) - l) < 1e-7);
  }
}

TEST_CASE("period matrix of the reference curve") {
  const PeriodData pd = period_matrix(reference_config());
  CHECK(pd.symmetry_defect < 1e-10);
  CHECK(pd.Pi.min_imag_eigenvalue() > 0);
  CHECK(std::abs(recover_branch_point(pd, 3) - 2.1) < 1e-8);
  CHECK(std::abs(recover_branch_point(pd, 4) - 3.4) < 1e-8);
  CHECK(std::abs(recover_lambda5(pd.Pi) - cplx(0.5, 1.2)) < 1e-8);
}

TEST_CASE("Riemann relations on a random corpus") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 15; ++trial) {
    const BranchConfig cfg = random_branch_config(rng);
    const PeriodData pd = period_matrix(cfg);
    CHECK(pd.symmetry_defect < 1e-8);
    CHECK(pd.Pi.min_imag_eigenvalue() > 0);
  }
}

TEST_CASE("coordinate quotient is 1 at P2 and 0 at P1") {
  const PeriodData pd = period_matrix(reference_config());
  const auto hp = half_periods(pd);
  CHECK(std::abs(branch_coordinate(pd.Pi, hp[1].value) - 1.0) < 1e-8);
  CHECK(std::abs(branch_coordinate(pd.Pi, hp[0].value)) < 1e-8);
  const auto chars = coordinate_characteristics(2);
  // the denominator vanishes at the point over infinity
  CHECK(std::abs(theta_eval(chars[1], hp[5].value, pd.Pi)) < 1e-10);
}

TEST_CASE("unusable indices are rejected") {
  const PeriodData pd = period_matrix(reference_config());
  for (int j : {1, 2, 5, 6, 0, 7}) {
    CHECK_THROWS_AS(recover_branch_point(pd, j), degenerate_index_error);
  }
  const auto chars = coordinate_characteristics(2);
  const auto hp = half_periods(pd);
  // at P5 both theta values vanish, so the quotient is 0 / 0
  CHECK(std::abs(theta_eval(chars[0], hp[4].value, pd.Pi)) < 1e-10);
  CHECK(std::abs(theta_eval(chars[1], hp[4].value, pd.Pi)) < 1e-10);
  const PeriodData p1 = period_matrix(BranchConfig::normalized_from({2.5}));
  CHECK_THROWS_AS(recover_branch_point(p1, 4), degenerate_index_error);
}

TEST_CASE("lambda5 shift is the first calibration winner") {
  std::mt19937_64 rng(12);
  std::vector<std::pair<SiegelPoint, cplx>> corpus;
  corpus.emplace_back(period_matrix(reference_config()).Pi, cplx(0.5, 1.2));
  for (int i = 0; i < 4; ++i) {
    const BranchConfig cfg = random_branch_config(rng);
    corpus.emplace_back(period_matrix(cfg).Pi, cfg.finite(5));
  }
  const auto table = calibrate_lambda5_shift(corpus);
  REQUIRE(table.size() == 16);
  std::optional<ThetaCharacteristic> first;
  for (const auto &e : table) {
    if (e.max_error < 1e-6) {
      first = e.shift;
      break;
    }
  }
  REQUIRE(first.has_value());
  CHECK(*first == lambda5_shift());
  // the unshifted pair does not produce lambda5
  CHECK(!(table[0].max_error < 1e-6));
}

TEST_CASE("half periods carry lattice coordinates") {
  const PeriodData pd = period_matrix(reference_config());
  const auto hp = half_periods(pd);
  REQUIRE(hp.size() == 6);
  for (const auto &p : hp) {
    const AbelPoint r = reduce_to_lattice_cell(pd.Pi, p.value);
    CHECK((r.x - p.x).norm() < 1e-12);
    CHECK((r.y - p.y).norm() < 1e-12);
    CHECK(((2.0 * p.x).array() - (2.0 * p.x).array().round()).abs().maxCoeff() < 1e-15);
  }
  CVector shifted = hp[3].value;
  shifted += pd.Pi.matrix().col(0) + CVector::Ones(2);
  const AbelPoint r = reduce_to_lattice_cell(pd.Pi, shifted);
  CHECK((r.value - hp[3].value).norm() < 1e-12);
}

TEST_CASE("periods vary continuously with the branch points") {
  const cplx base(0.5, 1.2);
  CMatrix prev;
  for (int k = 0; k <= 10; ++k) {
    const cplx l5 = base + cplx(0.01 * k, -0.005 * k);
    const PeriodData pd = period_matrix(BranchConfig::normalized_from({2.1, 3.4, l5}));
    if (k > 0) {
      CHECK((pd.Pi.matrix() - prev).cwiseAbs().maxCoeff() < 0.05);
    }
    prev = pd.Pi.matrix();
  }
}

TEST_CASE("normalization by a Moebius map") {
  const BranchConfig raw(2, {BranchPoint::at({1.0, 1.0}), BranchPoint::at({3.0, 1.0}), BranchPoint::at({4.0, 2.0}),
                             BranchPoint::at({5.0, 3.5}), BranchPoint::at({2.0, 4.0}), BranchPoint::at({-2.0, 0.0})});
  const BranchConfig n = raw.normalized();
  CHECK(n.is_normalized());
  // cross-ratios are preserved
  auto cr = [](cplx a, cplx b, cplx c, cplx d) { return ((a - c) * (b - d)) / ((a - d) * (b - c)); };
  const cplx before = cr(raw.finite(3), raw.finite(4), raw.finite(5), raw.finite(1));
  const cplx after = cr(n.finite(3), n.finite(4), n.finite(5), n.finite(1));
  CHECK(std::abs(before - after) < 1e-12);
}

TEST_CASE("invalid configurations") {
  CHECK_THROWS_AS(BranchConfig::normalized_from({2.0, 2.0, 3.0}), invalid_input_error);
  CHECK_THROWS_AS(BranchConfig(3, std::vector<BranchPoint>(8)), invalid_input_error);
  CHECK_THROWS_AS(BranchConfig(2, {BranchPoint::at(0.0), BranchPoint::infinity(), BranchPoint::at(1.0),
                                   BranchPoint::at(2.0), BranchPoint::at(3.0), BranchPoint::at(4.0)}),
                  invalid_input_error);
  // s2 = [0.5 - i, 0.5 + i] crosses s1 = [0, 1]
  CHECK_THROWS_AS(BranchConfig::normalized_from({{0.5, -1.0}, {0.5, 1.0}, 3.0}), invalid_input_error);
  // a valid cut system whose gap [lambda_4, lambda_5] crosses s1
  const auto tangled = BranchConfig::normalized_from({{0.5, 2.0}, {0.5, 1.0}, {0.5, -1.0}});
  CHECK_FALSE(tangled.chain_is_simple());
  CHECK_THROWS_AS(period_matrix(tangled), invalid_input_error);
  // not normalized
  const BranchConfig raw(1, {BranchPoint::at(0.0), BranchPoint::at(2.0), BranchPoint::at(3.0),
                             BranchPoint::infinity()});
  CHECK_THROWS_AS(period_matrix(raw), invalid_input_error);
}

TEST_CASE("segment integral error cases") {
  const auto cfg = BranchConfig::normalized_from({2.1, 3.4, {0.5, 1.2}});
  // z^2 dz / w ~ z^(-1/2) dz is not integrable at infinity; z dz / w is
  CHECK_THROWS_AS(segment_integral(cfg, 5, 6, 2), invalid_input_error);
  CHECK_NOTHROW(segment_integral(cfg, 5, 6, 1));
  CHECK_THROWS_AS(segment_integral(cfg, 1, 6, 0), invalid_input_error);
  CHECK_THROWS_AS(segment_integral(cfg, 2, 2, 0), invalid_input_error);
  CHECK_THROWS_AS(segment_integral(cfg, 0, 2, 0), invalid_input_error);
  // 1 -> 3 runs along [0, 1] and then past lambda_2
  CHECK_THROWS_AS(segment_integral(cfg, 1, 3, 0), quadrature_error);
  // a path crossing the cut s1
  const auto c2 = BranchConfig::normalized_from({{0.5, 1.0}, {0.5, 2.0}, {0.5, -1.0}});
  CHECK_THROWS_AS(segment_integral(c2, 5, 3, 0), quadrature_error);
}

TEST_CASE("random corpus respects its constraints") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 30; ++i) {
    const BranchConfig c = random_branch_config(rng);
    CHECK(c.is_normalized());
    CHECK(c.chain_is_simple());
    const auto r = finite_roots(c);
    for (std::size_t a = 0; a < r.size(); ++a) {
      CHECK(std::abs(r[a]) <= 5.0);
      for (std::size_t b = a + 1; b < r.size(); ++b) {
        CHECK(std::abs(r[a] - r[b]) >= 0.3);
      }
    }
  }
}
