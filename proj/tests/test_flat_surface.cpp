#include <catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "h2/flat_surface.hpp"

using namespace h2;

namespace {

using GR = GaussianRational;
using ExactChain = ParallelogramChain<GR>;
using FloatChain = ParallelogramChain<std::complex<double>>;

GR gr(int re, int im) { return {rational(re), rational(im)}; }

ExactChain square_chain() { return ExactChain::build(gr(1, 0), gr(0, 1), gr(-1, 0), gr(0, -1)); }

/// Random exact chain: rational points with small denominators satisfying the P+ conditions.
ExactChain random_exact_chain(std::mt19937_64 &rng) {
  std::uniform_int_distribution<int> num(-12, 12);
  std::uniform_int_distribution<int> den(1, 4);
  auto draw = [&] { return GR(rational(num(rng), den(rng)), rational(num(rng), den(rng))); };
  for (;;) {
    const GR a = draw(), b = draw(), c = draw(), d = draw();
    if (cross(a, b) > 0 && cross(b, c) > 0 && cross(c, d) > 0) {
      return ExactChain::build(a, b, c, d);
    }
  }
}

} // namespace

TEST_CASE("build validates the P+ conditions") {
  const auto c = square_chain();
  CHECK(c.area() == 3);
  const auto big = ExactChain::build(gr(2, 0), gr(0, 2), gr(-2, 0), gr(0, -2));
  CHECK(big.area() == 12);
  try {
    ExactChain::build(gr(1, 0), gr(0, 1), gr(1, 0), gr(0, 1));
    FAIL("expected invalid_input_error");
  } catch (const invalid_input_error &e) {
    CHECK(std::string(e.what()).find("condition 2") != std::string::npos);
  }
  CHECK_THROWS_AS(FloatChain::build({1, 0}, {2, 0}, {0, 1}, {-1, 0}), invalid_input_error);
}

TEST_CASE("period vector of the identity frame") {
  const auto c = square_chain();
  const auto v = c.period_vector();
  CHECK(v[0] == gr(1, 0));
  CHECK(v[1] == gr(0, 1));
  CHECK(v[2] == gr(-1, 0));
  CHECK(v[3] == gr(0, -2));
}

TEST_CASE("T moves") {
  const Decomposition<GR> d(square_chain());
  const auto t = d.t_move(+1);
  CHECK(t.chain().z(1) == gr(1, 1));
  CHECK(t.frame() == gen::T);
  CHECK(t.chain().area() == d.chain().area());
  const auto back = t.t_move(-1);
  CHECK(back.chain() == d.chain());
  CHECK(back.frame() == IntMat4::identity());
  CHECK_THROWS_AS(d.t_move(2), invalid_input_error);
}

TEST_CASE("S moves") {
  const Decomposition<GR> d(square_chain());
  const auto s = d.s_move();
  CHECK(s.chain() == ExactChain::build(gr(0, -1), gr(1, 0), gr(0, 1), gr(-1, 0)));
  const auto v = s.period_vector();
  CHECK(v == PeriodVector<GR>{gr(0, -1), gr(1, 0), gr(0, 1), gr(-2, 0)});
  CHECK(v == act(gen::S, d.period_vector()));
  auto four = d;
  for (int k = 0; k < 4; ++k) {
    four = four.s_move();
  }
  CHECK(four.chain() == d.chain());
  CHECK(four.frame() == IntMat4::identity());
  CHECK(d.s_move().s_inverse().chain() == d.chain());
  CHECK(d.s_inverse().frame() == symplectic_inverse(gen::S));
}

TEST_CASE("R moves and realizability") {
  const Decomposition<GR> d(square_chain());
  // z3' = z3 + (z4 - z2) = -1 - 2i: Im(conj(i)(-1 - 2i)) = 1 > 0, Im(conj(-1 - 2i)(-i)) = 1 > 0
  const auto up = d.r_move(+1);
  REQUIRE(up.realizable());
  CHECK(up.result->chain().z(3) == gr(-1, -2));
  CHECK(up.result->frame() == gen::R);
  CHECK(up.result->chain().area() == d.chain().area());
  // z3' = -1 + 2i: Im(conj(i)(-1 + 2i)) = 1 > 0, Im(conj(-1 + 2i)(-i)) = 1 > 0
  const auto down = d.r_move(-1);
  REQUIRE(down.realizable());
  CHECK(down.result->chain().z(3) == gr(-1, 2));

  const Decomposition<GR> e(ExactChain::build(gr(1, 0), gr(0, 1), gr(-1, 1), gr(-1, 0)));
  // z3' = (-1 + i) + (-1 - i) = -2: Im(conj(i)(-2)) = 2 > 0, Im(conj(-2)(-1)) = 0 fails
  const auto fail = e.r_move(+1);
  CHECK_FALSE(fail.realizable());
  CHECK(fail.failed_condition == 3);
  // z3' = (-1 + i) - (-1 - i) = 2i: Im(conj(i) 2i) = 0 fails
  const auto fail2 = e.r_move(-1);
  CHECK_FALSE(fail2.realizable());
  CHECK(fail2.failed_condition == 2);
}

TEST_CASE("R realizability is exactly the P+ test on the candidate") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const ExactChain c = random_exact_chain(rng);
    const Decomposition<GR> d(c);
    for (int sign : {+1, -1}) {
      const auto out = d.r_move(sign);
      const GR shift = c.z(4) - c.z(2);
      const GR z3 = sign > 0 ? c.z(3) + shift : c.z(3) - shift;
      const bool valid = cross(c.z(2), z3) > 0 && cross(z3, c.z(4)) > 0;
      CHECK(out.realizable() == valid);
    }
  }
}

TEST_CASE("word parsing") {
  CHECK(format_word(parse_word("TSRtsr")) == "TSRtsr");
  CHECK(format_word(parse_word("T T^-1 S")) == "TtS");
  CHECK(format_word(parse_word("TT⁻¹")) == "Tt");
  CHECK_THROWS_AS(parse_word("TX"), invalid_input_error);
  CHECK_THROWS_AS(parse_word("t^-1"), invalid_input_error);
  CHECK(parse_word("").empty());
}

TEST_CASE("move matrices agree with the geometric action") {
  const auto c = square_chain();
  CHECK(verify_move_matrices(c, parse_word("Tt")).ok);
  const auto s4 = verify_move_matrices(c, parse_word("SSSS"));
  CHECK(s4.ok);
  CHECK(s4.product == IntMat4::identity());

  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    const ExactChain start = trial % 2 == 0 ? c : random_exact_chain(rng);
    const auto word = random_realizable_word(rng, start, 10);
    const auto rep = verify_move_matrices(start, word);
    INFO(format_word(word) << ": " << rep.message);
    CHECK(rep.ok);
    CHECK(rep.product_in_gamma);
    REQUIRE(rep.final_state.has_value());
    CHECK(rep.final_state->frame() == rep.product);
    CHECK(rep.final_state->chain().area() == start.area());
    CHECK(rep.final_state->period_vector() == rep.final_state->predicted_period_vector());
  }
}

TEST_CASE("unrealizable word is reported with its index") {
  const auto c = ExactChain::build(gr(1, 0), gr(0, 1), gr(-1, 1), gr(-1, 0));
  const auto rep = verify_move_matrices(c, parse_word("TR"));
  CHECK_FALSE(rep.ok);
  REQUIRE(rep.failed_index.has_value());
  CHECK(*rep.failed_index == 1);
}

TEST_CASE("floating chains follow the same moves") {
  const FloatChain c = FloatChain::build({1.0, 0.1}, {0.2, 1.0}, {-1.0, 0.3}, {-0.1, -1.0});
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const auto word = random_realizable_word(rng, c, 10);
    CHECK(verify_move_matrices(c, word).ok);
  }
}

TEST_CASE("Weierstrass points") {
  const auto c = square_chain();
  const auto w = weierstrass_points(c);
  std::set<std::pair<int, std::string>> distinct;
  for (const auto &p : w) {
    std::ostringstream os;
    os << p.position;
    distinct.insert({static_cast<int>(p.piece), os.str()});
  }
  CHECK(distinct.size() == 6);
  CHECK(w[3].piece == SurfacePiece::B);
  CHECK(w[3].position == GR(rational(-1, 2), rational(1, 2)));
  int in_a = 0, in_c = 0;
  for (const auto &p : w) {
    in_a += p.piece == SurfacePiece::A;
    in_c += p.piece == SurfacePiece::C;
  }
  CHECK(in_a == 2);
  CHECK(in_c == 2);
}

TEST_CASE("Weierstrass points are the fixed points of the half-turn on each cylinder") {
  // A glued along its z1-sides is a cylinder of circumference z2; rotation by
  // pi about the centre sends p to (z1 + z2) - p. A point of the closed
  // parallelogram is fixed iff (z1 + z2) - 2p is a multiple of z2 and p is not
  // on the other (z2-) sides. Search the half-lattice {(s z1 + t z2) / 2}.
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 20; ++trial) {
    const ExactChain c = random_exact_chain(rng);
    const auto w = weierstrass_points(c);
    for (auto piece : {SurfacePiece::A, SurfacePiece::C}) {
      // A is glued along its z1-sides (circumference z2), C along its z4-sides (circumference z3)
      const GR glued = piece == SurfacePiece::A ? c.z(1) : c.z(4);
      const GR circ = piece == SurfacePiece::A ? c.z(2) : c.z(3);
      // p = (s glued + t circ) / 2, s in (0, 2) off the cylinder boundary, t mod 2
      std::vector<GR> fixed;
      for (int t = 0; t < 2; ++t) {
        fixed.push_back(scalar_traits<GR>::half(glued + GR(t) * circ));
      }
      // the two fixed points are s = 1 with t = 0 (glued-side midpoint) and t = 1 (centre)
      REQUIRE(fixed.size() == 2);
      int found = 0;
      for (const auto &p : w) {
        if (p.piece == piece) {
          found += std::count(fixed.begin(), fixed.end(), p.position) > 0;
        }
      }
      CHECK(found == 2);
    }
  }
}

TEST_CASE("exact arithmetic of Gaussian rationals") {
  const GR a(rational(1, 3), rational(-2, 5));
  const GR b(rational(7, 2), rational(1, 7));
  CHECK((a * b) - (b * a) == GR(0));
  CHECK(cross(a, b) == a.re * b.im - a.im * b.re);
  CHECK(GR::from_double(0.5, -0.25) == GR(rational(1, 2), rational(-1, 4)));
  CHECK(GR::from_double(0.1, 0.0).re == rational(0.1));
  CHECK_THROWS_AS(GR::from_double(std::nan(""), 0.0), invalid_input_error);
}
