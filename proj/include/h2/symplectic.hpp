#pragma once

// Exact 4x4 integer matrices over the symplectic form diag(J, J),
// J = [[0, 1], [-1, 0]], together with their reductions mod 2.
//
// Matrices act on column vectors of basis symbols (a, b, c, e)^T. The mod-2
// action used for orbit computations is right multiplication on row vectors.

#include <array>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <string>

#include "h2/error.hpp"

namespace h2 {

namespace detail {

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) {
    throw overflow_error("integer overflow in matrix addition");
  }
  return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw overflow_error("integer overflow in matrix multiplication");
  }
  return r;
}

inline std::int64_t checked_neg(std::int64_t a) {
  if (a == INT64_MIN) {
    throw overflow_error("integer overflow in negation");
  }
  return -a;
}

} // namespace detail

class IntMat4 {
public:
  using Rows = std::array<std::array<std::int64_t, 4>, 4>;

  constexpr IntMat4() : m_{} {}
  constexpr explicit IntMat4(const Rows &rows) : m_(rows) {}
  IntMat4(std::initializer_list<std::initializer_list<std::int64_t>> rows) : m_{} {
    if (rows.size() != 4) {
      throw invalid_input_error("IntMat4 needs 4 rows");
    }
    std::size_t i = 0;
    for (const auto &row : rows) {
      if (row.size() != 4) {
        throw invalid_input_error("IntMat4 rows need 4 entries");
      }
      std::size_t j = 0;
      for (auto v : row) {
        m_[i][j++] = v;
      }
      ++i;
    }
  }

  static constexpr IntMat4 identity() {
    IntMat4 r;
    for (int i = 0; i < 4; ++i) {
      r.m_[i][i] = 1;
    }
    return r;
  }

  static IntMat4 diagonal(std::int64_t d0, std::int64_t d1, std::int64_t d2, std::int64_t d3) {
    IntMat4 r;
    r.m_[0][0] = d0;
    r.m_[1][1] = d1;
    r.m_[2][2] = d2;
    r.m_[3][3] = d3;
    return r;
  }

  constexpr std::int64_t operator()(int i, int j) const { return m_[i][j]; }
  constexpr const Rows &rows() const { return m_; }

  IntMat4 with(int i, int j, std::int64_t v) const {
    IntMat4 r = *this;
    r.m_[i][j] = v;
    return r;
  }

  IntMat4 transpose() const {
    IntMat4 r;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        r.m_[i][j] = m_[j][i];
      }
    }
    return r;
  }

  IntMat4 operator-() const {
    IntMat4 r;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        r.m_[i][j] = detail::checked_neg(m_[i][j]);
      }
    }
    return r;
  }

  friend IntMat4 operator*(const IntMat4 &a, const IntMat4 &b) {
    IntMat4 r;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        std::int64_t s = 0;
        for (int k = 0; k < 4; ++k) {
          s = detail::checked_add(s, detail::checked_mul(a.m_[i][k], b.m_[k][j]));
        }
        r.m_[i][j] = s;
      }
    }
    return r;
  }

  friend IntMat4 operator+(const IntMat4 &a, const IntMat4 &b) {
    IntMat4 r;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        r.m_[i][j] = detail::checked_add(a.m_[i][j], b.m_[i][j]);
      }
    }
    return r;
  }

  friend bool operator==(const IntMat4 &, const IntMat4 &) = default;

  friend std::ostream &operator<<(std::ostream &os, const IntMat4 &m) {
    os << '[';
    for (int i = 0; i < 4; ++i) {
      os << (i ? ",[" : "[");
      for (int j = 0; j < 4; ++j) {
        os << (j ? "," : "") << m.m_[i][j];
      }
      os << ']';
    }
    return os << ']';
  }

private:
  Rows m_;
};

inline IntMat4 multiply(const IntMat4 &a, const IntMat4 &b) { return a * b; }

/// Exact integer determinant (Laplace expansion, checked).
inline std::int64_t determinant(const IntMat4 &m) {
  using detail::checked_add;
  using detail::checked_mul;
  auto det3 = [&](int skip_col) {
    int c[3];
    for (int j = 0, k = 0; j < 4; ++j) {
      if (j != skip_col) {
        c[k++] = j;
      }
    }
    auto e = [&](int r, int k) { return m(r, c[k]); };
    std::int64_t t0 = checked_mul(e(1, 0), checked_add(checked_mul(e(2, 1), e(3, 2)), -checked_mul(e(2, 2), e(3, 1))));
    std::int64_t t1 = checked_mul(e(1, 1), checked_add(checked_mul(e(2, 0), e(3, 2)), -checked_mul(e(2, 2), e(3, 0))));
    std::int64_t t2 = checked_mul(e(1, 2), checked_add(checked_mul(e(2, 0), e(3, 1)), -checked_mul(e(2, 1), e(3, 0))));
    return checked_add(checked_add(t0, -t1), t2);
  };
  std::int64_t d = 0;
  for (int j = 0; j < 4; ++j) {
    std::int64_t term = checked_mul(m(0, j), det3(j));
    d = checked_add(d, (j % 2 == 0) ? term : -term);
  }
  return d;
}

/// The symplectic form diag(J, J).
inline const IntMat4 &omega() {
  static const IntMat4 w{{0, 1, 0, 0}, {-1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, -1, 0}};
  return w;
}

inline bool is_symplectic(const IntMat4 &m) { return m.transpose() * omega() * m == omega(); }

/// m^{-1} = omega^{-1} m^T omega; throws not_symplectic_error otherwise.
inline IntMat4 symplectic_inverse(const IntMat4 &m) {
  if (!is_symplectic(m)) {
    throw not_symplectic_error("symplectic_inverse: matrix does not preserve diag(J, J)");
  }
  return -omega() * m.transpose() * omega();
}

/// Integer power; negative exponents go through symplectic_inverse.
inline IntMat4 power(const IntMat4 &m, std::int64_t k) {
  IntMat4 base = k < 0 ? symplectic_inverse(m) : m;
  std::uint64_t e = k < 0 ? static_cast<std::uint64_t>(-(k + 1)) + 1 : static_cast<std::uint64_t>(k);
  IntMat4 r = IntMat4::identity();
  while (e) {
    if (e & 1U) {
      r = r * base;
    }
    e >>= 1U;
    if (e) {
      base = base * base;
    }
  }
  return r;
}

/// Conjugates by the basis permutation (a1, b1, a2, b2) -> (a1, a2, b1, b2),
/// turning a diag(J, J)-symplectic matrix into one for [[0, I], [-I, 0]].
inline IntMat4 to_block_form(const IntMat4 &m) {
  static constexpr int perm[4] = {0, 2, 1, 3};
  IntMat4::Rows r{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      r[i][j] = m(perm[i], perm[j]);
    }
  }
  return IntMat4(r);
}

inline IntMat4 from_block_form(const IntMat4 &m) { return to_block_form(m); }

inline const IntMat4 &block_omega() {
  static const IntMat4 w{{0, 0, 1, 0}, {0, 0, 0, 1}, {-1, 0, 0, 0}, {0, -1, 0, 0}};
  return w;
}

// ---------------------------------------------------------------------------
// Named matrices

namespace gen {

inline const IntMat4 T{{1, 1, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
inline const IntMat4 S{{0, 1, 0, 1}, {0, 0, -1, 0}, {0, 1, 0, 0}, {-1, 0, 1, 0}};
inline const IntMat4 R{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 1}, {0, 0, 0, 1}};
inline const IntMat4 U{{0, 0, 0, -1}, {0, 0, 1, 0}, {0, -1, 0, 0}, {1, 0, 0, 0}};
/// Not in Gamma; conjugating T by it leaves Gamma.
inline const IntMat4 T_prime{{1, 0, 0, 0}, {1, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
inline const IntMat4 X{{1, 0, 2, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, -2, 0, 1}};
inline const IntMat4 Y{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 1, 1}};
inline const IntMat4 S1{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, -1}, {0, 0, 1, 0}};
inline const IntMat4 S2{{0, -1, 0, 0}, {1, 0, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};

} // namespace gen

/// Elementary symplectic matrix E_ij (1-based, i != j) for g = 2:
/// Id + e_ij when i = sigma(j), else Id + e_ij - (-1)^{i+j} e_{sigma(j) sigma(i)},
/// where sigma swaps 1<->2 and 3<->4.
inline IntMat4 elementary_matrix(int i, int j) {
  if (i < 1 || i > 4 || j < 1 || j > 4) {
    throw invalid_input_error("elementary_matrix: indices must lie in 1..4");
  }
  if (i == j) {
    throw invalid_input_error("elementary_matrix: i == j");
  }
  auto sigma = [](int k) { return (k % 2 == 1) ? k + 1 : k - 1; };
  IntMat4::Rows r = IntMat4::identity().rows();
  r[i - 1][j - 1] += 1;
  if (i != sigma(j)) {
    const std::int64_t sign = ((i + j) % 2 == 0) ? 1 : -1;
    r[sigma(j) - 1][sigma(i) - 1] -= sign;
  }
  return IntMat4(r);
}

// ---------------------------------------------------------------------------
// Mod-2 reductions

/// Row vector of (Z/2Z)^4; bit j holds coordinate j (0-based).
struct GF2Vec {
  std::uint8_t bits = 0;

  static GF2Vec of(int v0, int v1, int v2, int v3) {
    return GF2Vec{static_cast<std::uint8_t>((v0 & 1) | ((v1 & 1) << 1) | ((v2 & 1) << 2) | ((v3 & 1) << 3))};
  }
  int operator[](int j) const { return (bits >> j) & 1; }
  bool is_zero() const { return bits == 0; }
  std::array<int, 4> coords() const { return {(*this)[0], (*this)[1], (*this)[2], (*this)[3]}; }

  friend bool operator==(GF2Vec, GF2Vec) = default;
  friend auto operator<=>(GF2Vec a, GF2Vec b) { return a.coords() <=> b.coords(); }
};

/// 4x4 matrix over F_2; bit 4*i + j holds entry (i, j).
class GF2Mat4 {
public:
  constexpr GF2Mat4() = default;
  static constexpr GF2Mat4 from_bits(std::uint16_t bits) {
    GF2Mat4 m;
    m.bits_ = bits;
    return m;
  }
  static constexpr GF2Mat4 identity() { return from_bits(0x8421); }

  constexpr std::uint16_t bits() const { return bits_; }
  constexpr int operator()(int i, int j) const { return (bits_ >> (4 * i + j)) & 1; }
  constexpr GF2Vec row(int i) const { return GF2Vec{static_cast<std::uint8_t>((bits_ >> (4 * i)) & 0xF)}; }

  friend GF2Vec operator*(GF2Vec v, GF2Mat4 m) {
    std::uint8_t acc = 0;
    for (int i = 0; i < 4; ++i) {
      if (v[i]) {
        acc ^= m.row(i).bits;
      }
    }
    return GF2Vec{acc};
  }

  friend GF2Mat4 operator*(GF2Mat4 a, GF2Mat4 b) {
    std::uint16_t out = 0;
    for (int i = 0; i < 4; ++i) {
      out |= static_cast<std::uint16_t>((a.row(i) * b).bits) << (4 * i);
    }
    return from_bits(out);
  }

  friend bool operator==(GF2Mat4, GF2Mat4) = default;

private:
  std::uint16_t bits_ = 0;
};

inline GF2Mat4 reduce_mod2(const IntMat4 &m) {
  std::uint16_t bits = 0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (m(i, j) % 2 != 0) {
        bits |= static_cast<std::uint16_t>(1U << (4 * i + j));
      }
    }
  }
  return GF2Mat4::from_bits(bits);
}

} // namespace h2
