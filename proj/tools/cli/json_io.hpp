#pragma once

// JSON encodings: complex numbers as [re, im] (a bare number is real),
// infinity as "inf", matrices row-major as arrays of rows.

#include <complex>
#include <string>
#include <vector>

#include <json.hpp>

#include "h2/flat_surface.hpp"
#include "h2/hyperelliptic.hpp"
#include "h2/symplectic.hpp"
#include "h2/theta.hpp"

namespace h2::io {

using json = nlohmann::json;

inline json parse(const std::string &text, const std::string &what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error &e) {
    throw invalid_input_error(what + ": malformed JSON (" + e.what() + ")");
  }
}

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline cplx complex_from(const json &j, const std::string &what) {
  if (j.is_number()) {
    return {j.get<double>(), 0.0};
  }
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw invalid_input_error(what + ": expected a number or [re, im], got " + j.dump());
}

inline bool is_infinity(const json &j) {
  if (!j.is_string()) {
    return false;
  }
  const auto s = j.get<std::string>();
  return s == "inf" || s == "infinity" || s == "∞";
}

inline json to_json(const BranchPoint &p) { return p.infinite ? json("inf") : to_json(p.value); }

inline json to_json(const BranchConfig &c) {
  json out = json::array();
  for (const auto &p : c.points()) {
    out.push_back(to_json(p));
  }
  return out;
}

inline BranchConfig branch_config_from(const json &j) {
  if (!j.is_array()) {
    throw invalid_input_error("lambdas: expected a JSON array");
  }
  std::vector<BranchPoint> pts;
  for (const auto &e : j) {
    pts.push_back(is_infinity(e) ? BranchPoint::infinity() : BranchPoint::at(complex_from(e, "lambdas")));
  }
  const int n = static_cast<int>(pts.size());
  if (n != 4 && n != 6) {
    throw invalid_input_error("lambdas: expected 4 (genus 1) or 6 (genus 2) branch points");
  }
  return BranchConfig(n / 2 - 1, std::move(pts));
}

inline json to_json(const CVector &v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out.push_back(to_json(v(i)));
  }
  return out;
}

inline json to_json(const RVector &v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out.push_back(v(i));
  }
  return out;
}

inline json to_json(const CMatrix &m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      row.push_back(to_json(m(i, k)));
    }
    out.push_back(row);
  }
  return out;
}

inline CVector cvector_from(const json &j, const std::string &what) {
  if (!j.is_array()) {
    throw invalid_input_error(what + ": expected an array");
  }
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = complex_from(j[i], what);
  }
  return v;
}

inline CMatrix cmatrix_from(const json &j, const std::string &what) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    throw invalid_input_error(what + ": expected an array of rows");
  }
  const auto rows = j.size();
  const auto cols = j[0].size();
  CMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) {
      throw invalid_input_error(what + ": ragged rows");
    }
    for (std::size_t k = 0; k < cols; ++k) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = complex_from(j[i][k], what);
    }
  }
  return m;
}

inline std::vector<std::int64_t> int_vector_from(const json &j, const std::string &what) {
  if (!j.is_array()) {
    throw invalid_input_error(what + ": expected an array of integers");
  }
  std::vector<std::int64_t> out;
  for (const auto &e : j) {
    if (!e.is_number_integer()) {
      throw invalid_input_error(what + ": expected integers, got " + e.dump());
    }
    out.push_back(e.get<std::int64_t>());
  }
  return out;
}

inline json to_json(const IntMat4 &m) {
  json out = json::array();
  for (int i = 0; i < 4; ++i) {
    out.push_back(json::array({m(i, 0), m(i, 1), m(i, 2), m(i, 3)}));
  }
  return out;
}

inline IntMat4 intmat_from(const json &j, const std::string &what) {
  if (!j.is_array() || j.size() != 4) {
    throw invalid_input_error(what + ": expected 4 rows");
  }
  IntMat4::Rows r{};
  for (int i = 0; i < 4; ++i) {
    const auto row = int_vector_from(j[i], what);
    if (row.size() != 4) {
      throw invalid_input_error(what + ": expected 4 columns");
    }
    for (int k = 0; k < 4; ++k) {
      r[i][k] = row[k];
    }
  }
  return IntMat4(r);
}

inline json to_json(const GF2Vec &v) {
  const auto c = v.coords();
  return json::array({c[0], c[1], c[2], c[3]});
}

inline json to_json(const GaussianRational &z) {
  // exact values as strings "p/q"; a double approximation alongside
  return json{{"exact", json::array({z.re.str(), z.im.str()})},
              {"approx", to_json(scalar_traits<GaussianRational>::to_complex(z))}};
}

template <class Scalar>
json to_json(const std::array<Scalar, 4> &v) {
  json out = json::array();
  for (const auto &x : v) {
    out.push_back(to_json(x));
  }
  return out;
}

} // namespace h2::io
