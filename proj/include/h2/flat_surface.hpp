#pragma once

// Genus-2 translation surfaces with one double zero, built from three
// parallelograms A = <z1, z2>, B = <z2, z3>, C = <z3, z4>, and the elementary
// moves T, S, R on their parallelogram decompositions.
//
// Period vector: periods of the symplectic basis (a, b, c, e), i.e.
// (z1, z2, z3, z4 - z2). Each move M changes the decomposition so that the
// new period vector is M times the old one; the frame accumulates the product.

#include <algorithm>
#include <array>
#include <complex>
#include <optional>
#include <random>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "h2/error.hpp"
#include "h2/gamma_group.hpp"
#include "h2/symplectic.hpp"

namespace h2 {

using rational = boost::multiprecision::cpp_rational;

/// Exact complex number with rational parts.
struct GaussianRational {
  rational re{0};
  rational im{0};

  GaussianRational() = default;
  GaussianRational(rational r, rational i = rational(0)) : re(std::move(r)), im(std::move(i)) {}
  GaussianRational(int r) : re(r) {}
  GaussianRational(std::int64_t r) : re(r) {}
  /// Exact: every finite double is a dyadic rational.
  static GaussianRational from_double(double r, double i) {
    if (!std::isfinite(r) || !std::isfinite(i)) {
      throw invalid_input_error("GaussianRational: non-finite component");
    }
    return {rational(r), rational(i)};
  }

  friend GaussianRational operator+(const GaussianRational &a, const GaussianRational &b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussianRational operator-(const GaussianRational &a, const GaussianRational &b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussianRational operator*(const GaussianRational &a, const GaussianRational &b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  GaussianRational operator-() const { return {-re, -im}; }
  GaussianRational &operator+=(const GaussianRational &b) { return *this = *this + b; }
  friend bool operator==(const GaussianRational &a, const GaussianRational &b) {
    return a.re == b.re && a.im == b.im;
  }
  friend std::ostream &operator<<(std::ostream &os, const GaussianRational &z) {
    return os << '(' << z.re << ',' << z.im << ')';
  }
};

inline GaussianRational conj(const GaussianRational &z) { return {z.re, -z.im}; }

template <class Scalar>
struct scalar_traits;

template <>
struct scalar_traits<std::complex<double>> {
  using real_type = double;
  static constexpr bool exact = false;
  static double re(const std::complex<double> &z) { return z.real(); }
  static double im(const std::complex<double> &z) { return z.imag(); }
  static std::complex<double> from_int(std::int64_t k) { return {static_cast<double>(k), 0.0}; }
  static std::complex<double> half(const std::complex<double> &z) { return 0.5 * z; }
  static std::complex<double> to_complex(const std::complex<double> &z) { return z; }
  static double magnitude(const std::complex<double> &z) { return std::abs(z); }
};

template <>
struct scalar_traits<GaussianRational> {
  using real_type = rational;
  static constexpr bool exact = true;
  static rational re(const GaussianRational &z) { return z.re; }
  static rational im(const GaussianRational &z) { return z.im; }
  static GaussianRational from_int(std::int64_t k) { return GaussianRational(k); }
  static GaussianRational half(const GaussianRational &z) { return {z.re / 2, z.im / 2}; }
  static std::complex<double> to_complex(const GaussianRational &z) {
    return {z.re.convert_to<double>(), z.im.convert_to<double>()};
  }
  static double magnitude(const GaussianRational &z) { return std::abs(to_complex(z)); }
};

/// Im(conj(a) b): twice the signed area of the triangle (0, a, b).
template <class Scalar>
typename scalar_traits<Scalar>::real_type cross(const Scalar &a, const Scalar &b) {
  using tr = scalar_traits<Scalar>;
  return tr::re(a) * tr::im(b) - tr::im(a) * tr::re(b);
}

template <class Scalar>
using PeriodVector = std::array<Scalar, 4>;

/// Frame times period vector, exact in the scalar's arithmetic.
template <class Scalar>
PeriodVector<Scalar> act(const IntMat4 &m, const PeriodVector<Scalar> &v) {
  using tr = scalar_traits<Scalar>;
  PeriodVector<Scalar> out{};
  for (int i = 0; i < 4; ++i) {
    Scalar acc = tr::from_int(0);
    for (int j = 0; j < 4; ++j) {
      if (m(i, j) != 0) {
        acc = acc + tr::from_int(m(i, j)) * v[j];
      }
    }
    out[i] = acc;
  }
  return out;
}

/// Equality of period data: exact for exact scalars, otherwise relative 1e-12.
template <class Scalar>
bool periods_agree(const PeriodVector<Scalar> &a, const PeriodVector<Scalar> &b) {
  using tr = scalar_traits<Scalar>;
  if constexpr (tr::exact) {
    return a == b;
  } else {
    double scale = 1.0;
    for (int i = 0; i < 4; ++i) {
      scale = std::max({scale, tr::magnitude(a[i]), tr::magnitude(b[i])});
    }
    for (int i = 0; i < 4; ++i) {
      if (tr::magnitude(a[i] - b[i]) > 1e-12 * scale) {
        return false;
      }
    }
    return true;
  }
}

template <class Scalar>
class ParallelogramChain {
public:
  using traits = scalar_traits<Scalar>;
  using real_type = typename traits::real_type;

  /// Validates (z1, z2), (z2, z3), (z3, z4) in P+, i.e. Im(conj(z_i) z_{i+1}) > 0.
  static ParallelogramChain build(Scalar z1, Scalar z2, Scalar z3, Scalar z4) {
    ParallelogramChain c(std::array<Scalar, 4>{std::move(z1), std::move(z2), std::move(z3), std::move(z4)});
    if (auto bad = c.first_violation()) {
      throw invalid_input_error("ParallelogramChain: condition " + std::to_string(*bad) + " fails, Im(conj(z" +
                                std::to_string(*bad) + ") z" + std::to_string(*bad + 1) + ") <= 0");
    }
    return c;
  }

  /// Index i in {1, 2, 3} of the first pair (z_i, z_{i+1}) outside P+.
  std::optional<int> first_violation() const {
    for (int i = 0; i < 3; ++i) {
      if (!(cross(z_[i], z_[i + 1]) > real_type(0))) {
        return i + 1;
      }
    }
    return std::nullopt;
  }

  const Scalar &z(int i) const { return z_.at(i - 1); }
  const std::array<Scalar, 4> &values() const { return z_; }

  /// Areas of A, B, C.
  std::array<real_type, 3> piece_areas() const {
    return {cross(z_[0], z_[1]), cross(z_[1], z_[2]), cross(z_[2], z_[3])};
  }
  real_type area() const {
    const auto a = piece_areas();
    return a[0] + a[1] + a[2];
  }

  /// (z1, z2, z3, z4 - z2): periods of a, b, c, e.
  PeriodVector<Scalar> period_vector() const { return {z_[0], z_[1], z_[2], z_[3] - z_[1]}; }

  friend bool operator==(const ParallelogramChain &a, const ParallelogramChain &b) { return a.z_ == b.z_; }

private:
  template <class>
  friend class Decomposition;
  explicit ParallelogramChain(std::array<Scalar, 4> z) : z_(std::move(z)) {}
  std::array<Scalar, 4> z_;
};

enum class Move { T, TInv, S, SInv, R, RInv };

inline char to_char(Move m) {
  switch (m) {
  case Move::T: return 'T';
  case Move::TInv: return 't';
  case Move::S: return 'S';
  case Move::SInv: return 's';
  case Move::R: return 'R';
  case Move::RInv: return 'r';
  }
  return '?';
}

inline IntMat4 move_matrix(Move m) {
  switch (m) {
  case Move::T: return gen::T;
  case Move::TInv: return symplectic_inverse(gen::T);
  case Move::S: return gen::S;
  case Move::SInv: return symplectic_inverse(gen::S);
  case Move::R: return gen::R;
  case Move::RInv: return symplectic_inverse(gen::R);
  }
  throw invalid_input_error("move_matrix: unknown move");
}

/// Letters T S R apply a move, lower case t s r its inverse; an upper-case
/// letter followed by "^-1" or U+207B U+00B9 is also an inverse. Whitespace is
/// ignored.
inline std::vector<Move> parse_word(std::string_view w) {
  std::vector<Move> out;
  std::size_t i = 0;
  auto invert = [](Move m) {
    switch (m) {
    case Move::T: return Move::TInv;
    case Move::S: return Move::SInv;
    case Move::R: return Move::RInv;
    default: return m;
    }
  };
  while (i < w.size()) {
    const char c = w[i];
    if (c == ' ' || c == '\t' || c == ',') {
      ++i;
      continue;
    }
    Move m;
    switch (c) {
    case 'T': m = Move::T; break;
    case 't': m = Move::TInv; break;
    case 'S': m = Move::S; break;
    case 's': m = Move::SInv; break;
    case 'R': m = Move::R; break;
    case 'r': m = Move::RInv; break;
    default:
      throw invalid_input_error("parse_word: unexpected character '" + std::string(1, c) + "' at position " +
                                std::to_string(i));
    }
    ++i;
    const bool upper = (c == 'T' || c == 'S' || c == 'R');
    if (w.substr(i, 3) == "^-1") {
      if (!upper) {
        throw invalid_input_error("parse_word: inverse marker after an inverse letter");
      }
      m = invert(m);
      i += 3;
    } else if (w.substr(i, 5) == "⁻¹") {
      if (!upper) {
        throw invalid_input_error("parse_word: inverse marker after an inverse letter");
      }
      m = invert(m);
      i += 5;
    }
    out.push_back(m);
  }
  return out;
}

inline std::string format_word(const std::vector<Move> &w) {
  std::string s;
  for (Move m : w) {
    s += to_char(m);
  }
  return s;
}

template <class Scalar>
class Decomposition;

template <class Scalar>
struct RMoveOutcome {
  std::optional<Decomposition<Scalar>> result;
  int failed_condition = 0;  ///< 2 or 3: index i of the failing pair (z_i, z_{i+1}); 0 on success
  bool realizable() const { return result.has_value(); }
};

template <class Scalar>
class Decomposition {
public:
  using Chain = ParallelogramChain<Scalar>;
  using traits = scalar_traits<Scalar>;

  explicit Decomposition(Chain initial) : chain_(initial), initial_(std::move(initial)), frame_(IntMat4::identity()) {}

  const Chain &chain() const { return chain_; }
  const Chain &initial() const { return initial_; }
  const IntMat4 &frame() const { return frame_; }
  const std::vector<Move> &word() const { return word_; }

  /// Periods of the current basis: the chain's own (z1, z2, z3, z4 - z2).
  PeriodVector<Scalar> period_vector() const { return chain_.period_vector(); }
  /// frame times the initial period vector; equals period_vector() by construction.
  PeriodVector<Scalar> predicted_period_vector() const { return act(frame_, initial_.period_vector()); }

  Decomposition t_move(int sign) const {
    check_sign(sign);
    const auto &z = chain_.values();
    const Scalar z1 = sign > 0 ? z[0] + z[1] : z[0] - z[1];
    return next(Chain({z1, z[1], z[2], z[3]}), sign > 0 ? Move::T : Move::TInv);
  }

  Decomposition s_move() const {
    const auto &z = chain_.values();
    return next(Chain({z[3], -z[2], z[1], -z[0]}), Move::S);
  }

  Decomposition s_inverse() const {
    const auto &z = chain_.values();
    return next(Chain({-z[3], z[2], -z[1], z[0]}), Move::SInv);
  }

  RMoveOutcome<Scalar> r_move(int sign) const {
    check_sign(sign);
    const auto &z = chain_.values();
    const Scalar shift = z[3] - z[1];
    if (shift == traits::from_int(0)) {
      throw invalid_input_error("r_move: z4 = z2, the candidate chain is degenerate");
    }
    const Scalar z3 = sign > 0 ? z[2] + shift : z[2] - shift;
    using R = typename traits::real_type;
    if (!(cross(z[1], z3) > R(0))) {
      return {std::nullopt, 2};
    }
    if (!(cross(z3, z[3]) > R(0))) {
      return {std::nullopt, 3};
    }
    return {next(Chain({z[0], z[1], z3, z[3]}), sign > 0 ? Move::R : Move::RInv), 0};
  }

  /// Applies one move; std::nullopt when an R move is not realizable.
  std::optional<Decomposition> apply_move(Move m) const {
    switch (m) {
    case Move::T: return t_move(+1);
    case Move::TInv: return t_move(-1);
    case Move::S: return s_move();
    case Move::SInv: return s_inverse();
    case Move::R: return r_move(+1).result;
    case Move::RInv: return r_move(-1).result;
    }
    return std::nullopt;
  }

private:
  static void check_sign(int sign) {
    if (sign != 1 && sign != -1) {
      throw invalid_input_error("move sign must be +1 or -1");
    }
  }

  Decomposition next(Chain c, Move m) const {
    Decomposition d = *this;
    d.chain_ = std::move(c);
    d.frame_ = move_matrix(m) * frame_;
    d.word_.push_back(m);
    return d;
  }

  Chain chain_;
  Chain initial_;
  IntMat4 frame_;
  std::vector<Move> word_;
};

template <class Scalar>
struct MoveVerificationReport {
  bool ok = true;
  std::optional<std::size_t> failed_index;  ///< 0-based position of the first failing move
  std::string message;
  IntMat4 product = IntMat4::identity();
  bool product_in_gamma = true;
  std::optional<Decomposition<Scalar>> final_state;
};

/// Applies `word` geometrically and checks after every move that the period
/// vector equals (product of move matrices) x (initial period vector), that
/// the area is unchanged, and finally that the product lies in Gamma.
template <class Scalar>
MoveVerificationReport<Scalar> verify_move_matrices(const ParallelogramChain<Scalar> &chain,
                                                    const std::vector<Move> &word) {
  MoveVerificationReport<Scalar> rep;
  Decomposition<Scalar> d(chain);
  const auto initial_periods = chain.period_vector();
  const auto area0 = chain.area();
  for (std::size_t k = 0; k < word.size(); ++k) {
    auto nd = d.apply_move(word[k]);
    const std::string where = "move " + std::to_string(k) + " (" + std::string(1, to_char(word[k])) + ")";
    if (!nd) {
      rep.ok = false;
      rep.failed_index = k;
      rep.message = where + " is not realizable";
      break;
    }
    d = std::move(*nd);
    rep.product = move_matrix(word[k]) * rep.product;
    if (!periods_agree(d.period_vector(), act(rep.product, initial_periods))) {
      rep.ok = false;
      rep.failed_index = k;
      rep.message = where + ": period vector differs from the matrix product";
      break;
    }
    bool area_ok;
    if constexpr (scalar_traits<Scalar>::exact) {
      area_ok = d.chain().area() == area0;
    } else {
      area_ok = std::abs(d.chain().area() - area0) <= 1e-12 * std::max(1.0, std::abs(area0));
    }
    if (!area_ok) {
      rep.ok = false;
      rep.failed_index = k;
      rep.message = where + ": area changed";
      break;
    }
    if (d.chain().first_violation()) {
      rep.ok = false;
      rep.failed_index = k;
      rep.message = where + ": chain left P+";
      break;
    }
  }
  rep.product_in_gamma = gamma_member(rep.product);
  if (rep.ok && !rep.product_in_gamma) {
    rep.ok = false;
    rep.message = "matrix product is not in Gamma";
  }
  if (rep.ok) {
    rep.final_state = d;
  }
  return rep;
}

enum class SurfacePiece { Vertex, A, B, C };

inline const char *to_string(SurfacePiece p) {
  switch (p) {
  case SurfacePiece::Vertex: return "W";
  case SurfacePiece::A: return "A";
  case SurfacePiece::B: return "B";
  case SurfacePiece::C: return "C";
  }
  return "?";
}

/// A point given in the chart of one parallelogram: A = {s z1 + t z2},
/// B = {s z2 + t z3}, C = {s z3 + t z4}, 0 <= s, t <= 1. The cone point uses 0.
template <class Scalar>
struct FlatPoint {
  SurfacePiece piece;
  Scalar position;
  friend bool operator==(const FlatPoint &a, const FlatPoint &b) {
    return a.piece == b.piece && a.position == b.position;
  }
};

/// Fixed points of the hyperelliptic involution. Gluing the z1-sides of A
/// gives a cylinder with circumference z2, so the involution fixes the
/// centre c and c + z2/2, which the gluing identifies with z1/2. Likewise
/// C closes up along z3 and fixes its centre and z4/2.
template <class Scalar>
std::array<FlatPoint<Scalar>, 6> weierstrass_points(const ParallelogramChain<Scalar> &c) {
  using tr = scalar_traits<Scalar>;
  const auto &z = c.values();
  return {FlatPoint<Scalar>{SurfacePiece::Vertex, tr::from_int(0)},
          FlatPoint<Scalar>{SurfacePiece::A, tr::half(z[0] + z[1])},
          FlatPoint<Scalar>{SurfacePiece::A, tr::half(z[0])},
          FlatPoint<Scalar>{SurfacePiece::B, tr::half(z[1] + z[2])},
          FlatPoint<Scalar>{SurfacePiece::C, tr::half(z[2] + z[3])},
          FlatPoint<Scalar>{SurfacePiece::C, tr::half(z[3])}};
}

/// A word of exactly `length` moves, each realizable from the running chain.
/// Letters are drawn uniformly; an unrealizable R draw is redrawn.
template <class Scalar, class Rng>
std::vector<Move> random_realizable_word(Rng &rng, const ParallelogramChain<Scalar> &chain, std::size_t length) {
  static constexpr std::array<Move, 6> letters{Move::T, Move::TInv, Move::S, Move::SInv, Move::R, Move::RInv};
  std::uniform_int_distribution<int> pick(0, 5);
  Decomposition<Scalar> d(chain);
  std::vector<Move> word;
  while (word.size() < length) {
    const Move m = letters[pick(rng)];
    if (auto nd = d.apply_move(m)) {
      d = std::move(*nd);
      word.push_back(m);
    }
  }
  return word;
}

} // namespace h2
