#pragma once

// The subgroup Gamma = <T, S, R> of Sp(4, Z).
//
// Membership is decided through the finite quotient Sp(4, F_2) (order 720):
// an integral symplectic matrix lies in Gamma iff its reduction mod 2 maps the
// five-element orbit O1 of e1 = (1, 0, 0, 0) onto itself (right action on row
// vectors). This rests on two facts checked by brute force when the oracle is
// first used:
//   (a) <T, S, R> mod 2 has order 120, i.e. index 6 in the order-720 image of
//       <T, S, R, U> = Sp(4, Z);
//   (b) <T, S, R> mod 2 is exactly the setwise stabilizer of O1.
// Gamma contains the preimage of its image only if it contains the level-2
// congruence kernel; that follows from [Sp(4, Z) : Gamma] = 6 together with
// (a), since the preimage of the image also has index 6. The index-6 count is
// taken as given; it is not re-derived here.

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "h2/error.hpp"
#include "h2/symplectic.hpp"

namespace h2 {

struct NamedMatrix {
  std::string name;
  IntMat4 matrix;
};

inline std::vector<NamedMatrix> gamma_generators() {
  return {{"T", gen::T}, {"S", gen::S}, {"R", gen::R}};
}

inline std::vector<NamedMatrix> sp4_generators() {
  return {{"T", gen::T}, {"S", gen::S}, {"R", gen::R}, {"U", gen::U}};
}

/// Closure of {seed} under v -> v * (g mod 2). Result sorted.
inline std::vector<GF2Vec> orbit_mod2(GF2Vec seed, const std::vector<IntMat4> &generators) {
  if (seed.is_zero()) {
    throw invalid_input_error("orbit_mod2: zero seed");
  }
  std::vector<GF2Mat4> reduced;
  reduced.reserve(generators.size());
  for (const auto &g : generators) {
    reduced.push_back(reduce_mod2(g));
  }
  std::array<bool, 16> seen{};
  std::deque<GF2Vec> queue{seed};
  seen[seed.bits] = true;
  std::vector<GF2Vec> out;
  while (!queue.empty()) {
    GF2Vec v = queue.front();
    queue.pop_front();
    out.push_back(v);
    for (auto g : reduced) {
      GF2Vec w = v * g;
      if (!seen[w.bits]) {
        seen[w.bits] = true;
        queue.push_back(w);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<GF2Vec> orbit_mod2(GF2Vec seed, const std::vector<NamedMatrix> &generators) {
  std::vector<IntMat4> gs;
  for (const auto &g : generators) {
    gs.push_back(g.matrix);
  }
  return orbit_mod2(seed, gs);
}

/// A finite subgroup of Sp(4, F_2) with a shortest generating word per element.
class GF2Group {
public:
  std::size_t order() const { return words_.size(); }
  bool contains(GF2Mat4 m) const { return words_.count(m.bits()) != 0; }
  const std::string &word(GF2Mat4 m) const { return words_.at(m.bits()); }

  std::vector<GF2Mat4> elements() const {
    std::vector<GF2Mat4> out;
    out.reserve(words_.size());
    for (const auto &[bits, _] : words_) {
      out.push_back(GF2Mat4::from_bits(bits));
    }
    std::sort(out.begin(), out.end(), [](GF2Mat4 a, GF2Mat4 b) { return a.bits() < b.bits(); });
    return out;
  }

private:
  friend GF2Group enumerate_sp4_f2(const std::vector<NamedMatrix> &);
  std::unordered_map<std::uint16_t, std::string> words_;
};

/// Breadth-first closure of the generators' reductions mod 2. Words are
/// space-separated generator names, read left to right as a matrix product;
/// the identity has the empty word.
inline GF2Group enumerate_sp4_f2(const std::vector<NamedMatrix> &generators) {
  for (const auto &g : generators) {
    if (!is_symplectic(g.matrix)) {
      throw not_symplectic_error("enumerate_sp4_f2: generator " + g.name + " is not symplectic");
    }
  }
  GF2Group group;
  const GF2Mat4 id = GF2Mat4::identity();
  group.words_.emplace(id.bits(), "");
  std::deque<GF2Mat4> queue{id};
  while (!queue.empty()) {
    GF2Mat4 a = queue.front();
    queue.pop_front();
    const std::string base = group.words_.at(a.bits());
    for (const auto &g : generators) {
      GF2Mat4 b = a * reduce_mod2(g.matrix);
      if (group.words_.count(b.bits()) == 0) {
        group.words_.emplace(b.bits(), base.empty() ? g.name : base + " " + g.name);
        queue.push_back(b);
      }
    }
  }
  return group;
}

// ---------------------------------------------------------------------------
// Membership oracle

namespace detail {

inline bool stabilizes(GF2Mat4 m, const std::vector<GF2Vec> &orbit) {
  return std::all_of(orbit.begin(), orbit.end(), [&](GF2Vec v) {
    return std::binary_search(orbit.begin(), orbit.end(), v * m);
  });
}

struct MembershipOracle {
  std::vector<GF2Vec> o1;
  std::size_t sp4_order = 0;
  std::size_t gamma_order = 0;
  bool stabilizer_matches = false;

  MembershipOracle() {
    o1 = orbit_mod2(GF2Vec::of(1, 0, 0, 0), gamma_generators());
    const GF2Group full = enumerate_sp4_f2(sp4_generators());
    const GF2Group sub = enumerate_sp4_f2(gamma_generators());
    sp4_order = full.order();
    gamma_order = sub.order();
    stabilizer_matches = true;
    for (GF2Mat4 m : full.elements()) {
      if (stabilizes(m, o1) != sub.contains(m)) {
        stabilizer_matches = false;
      }
    }
    if (sp4_order != 720 || gamma_order * 6 != sp4_order || !stabilizer_matches) {
      throw verification_error("membership oracle preconditions failed: |Sp4(F2)| = " + std::to_string(sp4_order) +
                               ", |Gamma mod 2| = " + std::to_string(gamma_order) +
                               ", stabilizer match = " + (stabilizer_matches ? "yes" : "no"));
    }
  }
};

inline const MembershipOracle &membership_oracle() {
  static const MembershipOracle oracle;
  return oracle;
}

} // namespace detail

/// The orbit O1 of e1 under Gamma mod 2 (five vectors, sorted).
inline const std::vector<GF2Vec> &orbit_o1() { return detail::membership_oracle().o1; }

inline bool gamma_member(const IntMat4 &m) {
  if (!is_symplectic(m)) {
    throw not_symplectic_error("gamma_member: matrix is not symplectic");
  }
  return detail::stabilizes(reduce_mod2(m), orbit_o1());
}

// ---------------------------------------------------------------------------
// Cosets

enum class CosetTag { Gamma, U, RU, SRU, URU, USRU };

inline constexpr std::array<CosetTag, 6> all_coset_tags{CosetTag::Gamma, CosetTag::U,   CosetTag::RU,
                                                        CosetTag::SRU,   CosetTag::URU, CosetTag::USRU};

inline std::string_view to_string(CosetTag t) {
  switch (t) {
  case CosetTag::Gamma: return "Gamma";
  case CosetTag::U: return "U.Gamma";
  case CosetTag::RU: return "RU.Gamma";
  case CosetTag::SRU: return "SRU.Gamma";
  case CosetTag::URU: return "URU.Gamma";
  case CosetTag::USRU: return "USRU.Gamma";
  }
  return "?";
}

inline IntMat4 coset_representative(CosetTag t) {
  using namespace gen;
  switch (t) {
  case CosetTag::Gamma: return IntMat4::identity();
  case CosetTag::U: return U;
  case CosetTag::RU: return R * U;
  case CosetTag::SRU: return S * R * U;
  case CosetTag::URU: return U * R * U;
  case CosetTag::USRU: return U * S * R * U;
  }
  throw invalid_input_error("unknown coset tag");
}

struct CosetLabel {
  CosetTag tag;
  IntMat4 representative;
};

/// The label L with rep(L)^{-1} m in Gamma. Throws verification_error if the
/// six representatives do not partition (zero or several matches).
inline CosetLabel coset_of(const IntMat4 &m) {
  if (!is_symplectic(m)) {
    throw not_symplectic_error("coset_of: matrix is not symplectic");
  }
  std::optional<CosetTag> found;
  for (CosetTag t : all_coset_tags) {
    if (gamma_member(symplectic_inverse(coset_representative(t)) * m)) {
      if (found) {
        throw verification_error("coset_of: matrix lies in two cosets (" + std::string(to_string(*found)) + ", " +
                                 std::string(to_string(t)) + ")");
      }
      found = t;
    }
  }
  if (!found) {
    throw verification_error("coset_of: matrix lies in none of the six cosets");
  }
  return {*found, coset_representative(*found)};
}

/// Row generators of the action table, in display order.
inline std::vector<NamedMatrix> coset_table_generators() {
  using namespace gen;
  return {{"T", T},
          {"R", R},
          {"S", S},
          {"U", U},
          {"T^-1", symplectic_inverse(T)},
          {"R^-1", symplectic_inverse(R)},
          {"S^-1", symplectic_inverse(S)}};
}

/// Expected left action x . C of each row generator on each coset.
inline const std::array<std::array<CosetTag, 6>, 7> &expected_coset_table() {
  using C = CosetTag;
  static const std::array<std::array<CosetTag, 6>, 7> table{{
      {C::Gamma, C::U, C::RU, C::URU, C::SRU, C::USRU},  // T
      {C::Gamma, C::RU, C::U, C::SRU, C::URU, C::USRU},  // R
      {C::Gamma, C::U, C::SRU, C::RU, C::USRU, C::URU},  // S
      {C::U, C::Gamma, C::URU, C::USRU, C::RU, C::SRU},  // U
      {C::Gamma, C::U, C::RU, C::URU, C::SRU, C::USRU},  // T^-1
      {C::Gamma, C::RU, C::U, C::SRU, C::URU, C::USRU},  // R^-1
      {C::Gamma, C::U, C::SRU, C::RU, C::USRU, C::URU},  // S^-1 (same as S)
  }};
  return table;
}

struct CosetTableCell {
  std::string generator;
  CosetTag column;
  CosetTag expected;
  CosetTag computed;
};

struct CosetTableReport {
  std::array<std::array<CosetTag, 6>, 7> computed{};
  std::vector<CosetTableCell> mismatches;
  bool representatives_distinct = false;
  bool ok() const { return mismatches.empty() && representatives_distinct; }
};

inline CosetTableReport verify_coset_table() {
  CosetTableReport report;
  report.representatives_distinct = true;
  for (CosetTag t : all_coset_tags) {
    if (coset_of(coset_representative(t)).tag != t) {
      report.representatives_distinct = false;
    }
  }
  const auto gens = coset_table_generators();
  const auto &expected = expected_coset_table();
  for (std::size_t r = 0; r < gens.size(); ++r) {
    for (std::size_t c = 0; c < 6; ++c) {
      const CosetTag col = all_coset_tags[c];
      const CosetTag got = coset_of(gens[r].matrix * coset_representative(col)).tag;
      report.computed[r][c] = got;
      if (got != expected[r][c]) {
        report.mismatches.push_back({gens[r].name, col, expected[r][c], got});
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Generation of Sp(4, Z) by T, S, R, U

struct IdentityCheck {
  std::string name;
  bool holds;
};

struct GenerationReport {
  std::vector<IdentityCheck> checks;
  bool ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck &c) { return c.holds; });
  }
  std::vector<std::string> failures() const {
    std::vector<std::string> out;
    for (const auto &c : checks) {
      if (!c.holds) {
        out.push_back(c.name);
      }
    }
    return out;
  }
};

/// Every elementary matrix E_ij is a word in T, S, R, U; checks the explicit
/// words and the displayed E_ij matrices.
inline GenerationReport verify_generation() {
  using namespace gen;
  const auto inv = [](const IntMat4 &m) { return symplectic_inverse(m); };
  const auto E = [](int i, int j) { return elementary_matrix(i, j); };
  GenerationReport r;
  auto add = [&](std::string name, bool holds) { r.checks.push_back({std::move(name), holds}); };

  add("E12 = T", E(1, 2) == T);
  add("E12 = E21^t", E(1, 2) == E(2, 1).transpose());
  add("E34 = R", E(3, 4) == R);
  add("E34 = E43^t", E(3, 4) == E(4, 3).transpose());
  add("E13 = E42^-1", E(1, 3) == inv(E(4, 2)));
  add("E31 = E24^-1", E(3, 1) == inv(E(2, 4)));
  add("E14 = E32", E(1, 4) == E(3, 2));
  add("E41 = E23", E(4, 1) == E(2, 3));
  add("E12 in Gamma", gamma_member(E(1, 2)));
  add("E34 in Gamma", gamma_member(E(3, 4)));
  add("E43 in Gamma", gamma_member(E(4, 3)));
  add("E21 = U^-1 R^-1 U", E(2, 1) == inv(U) * inv(R) * U);
  // the same conjugation applied to T lands on E43 instead
  add("U^-1 T^-1 U = E43", inv(U) * inv(T) * U == E(4, 3));
  add("E13 = S U", E(1, 3) == S * U);
  add("S1 in Gamma", gamma_member(S1));
  add("S2 = U^-1 S1 U", S2 == inv(U) * S1 * U);
  const IntMat4 s12 = S1 * S2;
  add("E31 = (S1 S2) E13^-1 (S1 S2)^-1", E(3, 1) == s12 * inv(E(1, 3)) * inv(s12));
  add("E14 = S1 E13 S1^-1", E(1, 4) == S1 * E(1, 3) * inv(S1));
  add("E41 = S2 E13 S2^-1", E(4, 1) == S2 * E(1, 3) * inv(S2));
  for (int i = 1; i <= 4; ++i) {
    for (int j = 1; j <= 4; ++j) {
      if (i != j) {
        add("E" + std::to_string(i) + std::to_string(j) + " symplectic", is_symplectic(E(i, j)));
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// gamma(l, m, n) = T^m X^l Y^n

struct GammaLmnFactorization {
  IntMat4 display;
  IntMat4 product;
  std::string word;
  bool commute;
  bool equal() const { return display == product; }
};

inline IntMat4 gamma_lmn(std::int64_t l, std::int64_t m, std::int64_t n) {
  const std::int64_t two_l = detail::checked_mul(2, l);
  return IntMat4{{1, m, two_l, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, detail::checked_neg(two_l), n, 1}};
}

inline bool pairwise_commute(const std::vector<IntMat4> &ms) {
  for (std::size_t i = 0; i < ms.size(); ++i) {
    for (std::size_t j = i + 1; j < ms.size(); ++j) {
      if (ms[i] * ms[j] != ms[j] * ms[i]) {
        return false;
      }
    }
  }
  return true;
}

inline GammaLmnFactorization factor_gamma_lmn(std::int64_t l, std::int64_t m, std::int64_t n) {
  using namespace gen;
  GammaLmnFactorization f{gamma_lmn(l, m, n), power(T, m) * power(X, l) * power(Y, n),
                         "T^" + std::to_string(m) + " X^" + std::to_string(l) + " Y^" + std::to_string(n),
                         pairwise_commute({T, X, Y})};
  return f;
}

/// X = S D S D with D = diag(1, 1, -1, -1), and Y = S^-1 T^-1 S.
inline bool x_y_words_hold() {
  using namespace gen;
  const IntMat4 d = IntMat4::diagonal(1, 1, -1, -1);
  return S * d * S * d == X && symplectic_inverse(S) * symplectic_inverse(T) * S == Y;
}

// ---------------------------------------------------------------------------
// Structure of Gamma

/// Displayed orbits of e1 and e2 under Gamma mod 2.
inline std::vector<GF2Vec> displayed_o1() {
  std::vector<GF2Vec> v{GF2Vec::of(1, 0, 0, 0), GF2Vec::of(1, 1, 0, 0), GF2Vec::of(0, 1, 1, 0),
                        GF2Vec::of(0, 1, 0, 1), GF2Vec::of(0, 1, 1, 1)};
  std::sort(v.begin(), v.end());
  return v;
}

inline std::vector<GF2Vec> displayed_o2() {
  std::vector<GF2Vec> v{GF2Vec::of(0, 1, 0, 0), GF2Vec::of(0, 0, 1, 0), GF2Vec::of(0, 0, 0, 1),
                        GF2Vec::of(1, 0, 1, 0), GF2Vec::of(1, 0, 0, 1), GF2Vec::of(0, 0, 1, 1),
                        GF2Vec::of(1, 1, 1, 0), GF2Vec::of(1, 1, 0, 1), GF2Vec::of(1, 0, 1, 1),
                        GF2Vec::of(1, 1, 1, 1)};
  std::sort(v.begin(), v.end());
  return v;
}

/// Orders, orbits and the displayed conjugation identities of Gamma.
inline GenerationReport verify_group_structure() {
  using namespace gen;
  const auto inv = [](const IntMat4 &m) { return symplectic_inverse(m); };
  const IntMat4 id = IntMat4::identity();
  GenerationReport r;
  auto add = [&](std::string name, bool holds) { r.checks.push_back({std::move(name), holds}); };

  add("S^2 = -Id", S * S == -id);
  add("S^4 = Id", power(S, 4) == id);
  add("U^2 = -Id", U * U == -id);
  add("S^-1 T S = [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,-1,1]]",
      inv(S) * T * S == IntMat4{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, -1, 1}});
  const IntMat4 conj = inv(T_prime) * T * T_prime;
  add("T'^-1 T T' = [[2,1,0,0],[-1,0,0,0],[0,0,1,0],[0,0,0,1]]",
      conj == IntMat4{{2, 1, 0, 0}, {-1, 0, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}});
  add("T in Gamma", gamma_member(T));
  add("T'^-1 T T' not in Gamma", !gamma_member(conj));
  add("X = S D S D, Y = S^-1 T^-1 S", x_y_words_hold());
  add("X, Y in Gamma", gamma_member(X) && gamma_member(Y));
  for (const auto &g : sp4_generators()) {
    add(g.name + " symplectic", is_symplectic(g.matrix));
  }

  const auto o1 = orbit_mod2(GF2Vec::of(1, 0, 0, 0), gamma_generators());
  const auto o2 = orbit_mod2(GF2Vec::of(0, 1, 0, 0), gamma_generators());
  const auto all = orbit_mod2(GF2Vec::of(1, 0, 0, 0), sp4_generators());
  add("orbit of e1 under <T,S,R> mod 2 = O1", o1 == displayed_o1());
  add("orbit of e2 under <T,S,R> mod 2 = O2", o2 == displayed_o2());
  add("orbit of e1 under <T,S,R,U> mod 2 has 15 vectors", all.size() == 15);

  const GF2Group full = enumerate_sp4_f2(sp4_generators());
  const GF2Group sub = enumerate_sp4_f2(gamma_generators());
  add("|<T,S,R,U> mod 2| = 720", full.order() == 720);
  add("|<T,S,R> mod 2| = 120", sub.order() == 120);
  bool stab = true;
  for (GF2Mat4 m : full.elements()) {
    stab = stab && (detail::stabilizes(m, o1) == sub.contains(m));
  }
  add("<T,S,R> mod 2 = setwise stabilizer of O1", stab);
  return r;
}

} // namespace h2
