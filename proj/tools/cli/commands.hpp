#pragma once

// Command-line front end. `run` parses argv, dispatches to the library and
// returns a JSON report {command, status, details, timings} with exit code
// 0 (pass), 1 (verification failure) or 2 (usage error).

#include <chrono>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cli/json_io.hpp"
#include "h2/flat_surface.hpp"
#include "h2/gamma_group.hpp"
#include "h2/hyperelliptic.hpp"
#include "h2/theta.hpp"

namespace h2::cli {

using io::json;

struct Result {
  int exit_code = 0;
  json report;
};

struct Outcome {
  bool pass = true;
  json details;
};

namespace detail {

inline json checks_to_json(const GenerationReport &r) {
  json out = json::array();
  for (const auto &c : r.checks) {
    out.push_back({{"name", c.name}, {"holds", c.holds}});
  }
  return out;
}

inline json orbit_to_json(const std::vector<GF2Vec> &orbit) {
  json out = json::array();
  for (auto v : orbit) {
    out.push_back(io::to_json(v));
  }
  return out;
}

inline std::vector<NamedMatrix> generators_named(const std::string &letters) {
  std::vector<NamedMatrix> out;
  for (char c : letters) {
    switch (c) {
    case 'T': out.push_back({"T", gen::T}); break;
    case 'S': out.push_back({"S", gen::S}); break;
    case 'R': out.push_back({"R", gen::R}); break;
    case 'U': out.push_back({"U", gen::U}); break;
    default: throw invalid_input_error("generators: unknown letter '" + std::string(1, c) + "'");
    }
  }
  if (out.empty()) {
    throw invalid_input_error("generators: empty set");
  }
  return out;
}

inline json coset_table_to_json(const CosetTableReport &rep) {
  json rows = json::object();
  const auto gens = coset_table_generators();
  for (std::size_t r = 0; r < gens.size(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < 6; ++c) {
      row.push_back(std::string(to_string(rep.computed[r][c])));
    }
    rows[gens[r].name] = row;
  }
  json columns = json::array();
  for (auto t : all_coset_tags) {
    columns.push_back(std::string(to_string(t)));
  }
  json mism = json::array();
  for (const auto &m : rep.mismatches) {
    mism.push_back({{"generator", m.generator},
                    {"coset", std::string(to_string(m.column))},
                    {"expected", std::string(to_string(m.expected))},
                    {"computed", std::string(to_string(m.computed))}});
  }
  return {{"columns", columns},
          {"rows", rows},
          {"mismatches", mism},
          {"representatives_distinct", rep.representatives_distinct}};
}

inline ThetaCharacteristic characteristic_from(const std::string &eps, const std::string &eps_prime, int g) {
  ThetaCharacteristic c;
  c.eps = eps.empty() ? std::vector<std::int64_t>(g, 0) : io::int_vector_from(io::parse(eps, "--eps"), "--eps");
  c.eps_prime = eps_prime.empty() ? std::vector<std::int64_t>(g, 0)
                                  : io::int_vector_from(io::parse(eps_prime, "--eps-prime"), "--eps-prime");
  if (static_cast<int>(c.eps.size()) != g || static_cast<int>(c.eps_prime.size()) != g) {
    throw invalid_input_error("characteristic length does not match the genus of --sigma");
  }
  return c;
}

inline CVector point_from(const std::string &z, int g) {
  if (z.empty()) {
    return CVector::Zero(g);
  }
  CVector v = io::cvector_from(io::parse(z, "--z"), "--z");
  if (v.size() != g) {
    throw invalid_input_error("--z length does not match the genus of --sigma");
  }
  return v;
}

template <class Scalar>
ParallelogramChain<Scalar> chain_from(const std::string &text) {
  const json j = io::parse(text, "--chain");
  if (!j.is_array() || j.size() != 4) {
    throw invalid_input_error("--chain: expected four complex numbers");
  }
  std::array<Scalar, 4> z;
  for (int i = 0; i < 4; ++i) {
    const cplx c = io::complex_from(j[i], "--chain");
    if constexpr (std::is_same_v<Scalar, GaussianRational>) {
      z[i] = GaussianRational::from_double(c.real(), c.imag());
    } else {
      z[i] = c;
    }
  }
  return ParallelogramChain<Scalar>::build(z[0], z[1], z[2], z[3]);
}

inline json real_to_json(double x) { return x; }
inline json real_to_json(const rational &x) { return json{{"exact", x.str()}, {"approx", x.convert_to<double>()}}; }

template <class Scalar>
json chain_summary(const ParallelogramChain<Scalar> &c) {
  json areas = json::array();
  for (const auto &a : c.piece_areas()) {
    areas.push_back(real_to_json(a));
  }
  json wp = json::array();
  for (const auto &p : weierstrass_points(c)) {
    wp.push_back({{"piece", to_string(p.piece)}, {"position", io::to_json(p.position)}});
  }
  return {{"chain", io::to_json(c.values())},
          {"area", real_to_json(c.area())},
          {"piece_areas", areas},
          {"period_vector", io::to_json(c.period_vector())},
          {"weierstrass_points", wp}};
}

inline double max_error(const BranchConfig &a, const BranchConfig &b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.points()[i].infinite != b.points()[i].infinite) {
      return std::numeric_limits<double>::infinity();
    }
    if (!a.points()[i].infinite) {
      e = std::max(e, std::abs(a.points()[i].value - b.points()[i].value));
    }
  }
  return e;
}

inline json roundtrip_one(const BranchConfig &input, double tol, double &worst) {
  const BranchConfig cfg = input.is_normalized() ? input : input.normalized();
  const PeriodData pd = period_matrix(cfg, tol);
  const BranchConfig rec = recover_all(pd);
  const double err = max_error(cfg, rec);
  worst = std::max(worst, err);
  return {{"lambdas", io::to_json(cfg)},
          {"recovered", io::to_json(rec)},
          {"max_error", err},
          {"symmetry_defect", pd.symmetry_defect}};
}

} // namespace detail

/// Parses and executes one command line (without the program name).
inline Result run(const std::vector<std::string> &args, std::ostream &out = std::cout, std::ostream &err = std::cerr) {
  const auto start = std::chrono::steady_clock::now();
  std::string command_echo;
  for (const auto &a : args) {
    command_echo += (command_echo.empty() ? "" : " ") + a;
  }

  CLI::App app{"Verification and computation for the genus-2 symplectic and flat-surface toolkit", "h2"};
  app.require_subcommand(1);
  std::optional<double> tol_flag;
  std::uint64_t seed = 20240601;
  bool quiet = false;
  std::string output_path;
  app.add_option("--tol", tol_flag, "Numerical tolerance (defaults per command)");
  app.add_option("--seed", seed, "Seed for randomized corpora");
  app.add_flag("--quiet", quiet, "Suppress the JSON report on stdout");
  app.add_option("--output", output_path, "Also write the JSON report to this file");

  std::function<Outcome()> action;
  auto tol_or = [&](double d) { return tol_flag.value_or(d); };

  // ---- group
  auto *group = app.add_subcommand("group", "Gamma inside Sp(4, Z)");
  group->require_subcommand(1);

  auto *g_verify = group->add_subcommand("verify", "Run the full group battery");
  g_verify->callback([&] {
    action = [&] {
      const auto structure = verify_group_structure();
      const auto generation = verify_generation();
      const auto table = verify_coset_table();
      std::size_t factor_cases = 0;
      json factor_failures = json::array();
      for (int l = -3; l <= 3; ++l) {
        for (int m = -3; m <= 3; ++m) {
          for (int n = -3; n <= 3; ++n) {
            ++factor_cases;
            const auto f = factor_gamma_lmn(l, m, n);
            if (!f.equal() || !f.commute || !gamma_member(f.product)) {
              factor_failures.push_back(json::array({l, m, n}));
            }
          }
        }
      }
      Outcome o;
      o.pass = structure.ok() && generation.ok() && table.ok() && factor_failures.empty();
      o.details = {{"structure", detail::checks_to_json(structure)},
                   {"generation", detail::checks_to_json(generation)},
                   {"coset_table", detail::coset_table_to_json(table)},
                   {"factorization", {{"cases", factor_cases}, {"failures", factor_failures}}}};
      json failed = json::array();
      for (const auto &f : structure.failures()) {
        failed.push_back(f);
      }
      for (const auto &f : generation.failures()) {
        failed.push_back(f);
      }
      o.details["failed"] = failed;
      return o;
    };
  });

  std::string orbit_vector;
  std::string orbit_generators = "TSR";
  auto *g_orbits = group->add_subcommand("orbits", "Orbits on (Z/2)^4 \\ {0}");
  g_orbits->add_option("--vector", orbit_vector, "Seed vector, e.g. [1,0,0,0]");
  g_orbits->add_option("--generators", orbit_generators, "Generator letters from T, S, R, U");
  g_orbits->callback([&] {
    action = [&] {
      Outcome o;
      if (!orbit_vector.empty()) {
        const auto v = io::int_vector_from(io::parse(orbit_vector, "--vector"), "--vector");
        if (v.size() != 4) {
          throw invalid_input_error("--vector: expected four entries");
        }
        const auto orbit = orbit_mod2(GF2Vec::of(int(v[0]), int(v[1]), int(v[2]), int(v[3])),
                                      detail::generators_named(orbit_generators));
        o.details = {{"generators", orbit_generators}, {"orbit", detail::orbit_to_json(orbit)},
                     {"size", orbit.size()}};
        return o;
      }
      const auto o1 = orbit_mod2(GF2Vec::of(1, 0, 0, 0), gamma_generators());
      const auto o2 = orbit_mod2(GF2Vec::of(0, 1, 0, 0), gamma_generators());
      const auto all = orbit_mod2(GF2Vec::of(1, 0, 0, 0), sp4_generators());
      o.pass = o1 == displayed_o1() && o2 == displayed_o2() && all.size() == 15;
      o.details = {{"O1", detail::orbit_to_json(o1)},
                   {"O2", detail::orbit_to_json(o2)},
                   {"TSRU_orbit_size", all.size()},
                   {"matches_display", o.pass}};
      return o;
    };
  });

  std::string member_matrix;
  auto *g_member = group->add_subcommand("member", "Decide membership in Gamma");
  g_member->add_option("--matrix", member_matrix, "4x4 integer matrix, row-major")->required();
  g_member->callback([&] {
    action = [&] {
      const IntMat4 m = io::intmat_from(io::parse(member_matrix, "--matrix"), "--matrix");
      const bool member = gamma_member(m);
      const auto label = coset_of(m);
      Outcome o;
      o.details = {{"matrix", io::to_json(m)}, {"member", member}, {"coset", std::string(to_string(label.tag))}};
      return o;
    };
  });

  std::string coset_matrix;
  auto *g_cosets = group->add_subcommand("cosets", "Coset labels and the left-action table");
  g_cosets->add_option("--matrix", coset_matrix, "Label this matrix instead of printing the table");
  g_cosets->callback([&] {
    action = [&] {
      Outcome o;
      if (!coset_matrix.empty()) {
        const IntMat4 m = io::intmat_from(io::parse(coset_matrix, "--matrix"), "--matrix");
        const auto label = coset_of(m);
        o.details = {{"matrix", io::to_json(m)},
                     {"coset", std::string(to_string(label.tag))},
                     {"representative", io::to_json(label.representative)}};
        return o;
      }
      const auto rep = verify_coset_table();
      o.pass = rep.ok();
      o.details = detail::coset_table_to_json(rep);
      return o;
    };
  });

  std::int64_t fl = 0, fm = 0, fn = 0;
  auto *g_factor = group->add_subcommand("factor", "gamma(l, m, n) = T^m X^l Y^n");
  g_factor->add_option("--l", fl)->required();
  g_factor->add_option("--m", fm)->required();
  g_factor->add_option("--n", fn)->required();
  g_factor->callback([&] {
    action = [&] {
      const auto f = factor_gamma_lmn(fl, fm, fn);
      Outcome o;
      o.pass = f.equal() && f.commute;
      o.details = {{"display", io::to_json(f.display)},
                   {"product", io::to_json(f.product)},
                   {"word", f.word},
                   {"equal", f.equal()},
                   {"pairwise_commute", f.commute}};
      return o;
    };
  });

  // ---- theta
  auto *theta = app.add_subcommand("theta", "Theta functions with characteristics");
  theta->require_subcommand(1);
  std::string t_eps, t_eps_prime, t_z, t_sigma;
  auto add_theta_inputs = [&](CLI::App *sc) {
    sc->add_option("--eps", t_eps, "Integer vector eps (default zeros)");
    sc->add_option("--eps-prime", t_eps_prime, "Integer vector eps' (default zeros)");
    sc->add_option("--z", t_z, "Complex vector z (default zeros)");
    sc->add_option("--sigma", t_sigma, "Symmetric complex matrix with Im > 0")->required();
  };
  auto *t_eval = theta->add_subcommand("eval", "Evaluate theta[eps; eps'](z, sigma)");
  add_theta_inputs(t_eval);
  t_eval->callback([&] {
    action = [&] {
      const SiegelPoint sigma(io::cmatrix_from(io::parse(t_sigma, "--sigma"), "--sigma"));
      const auto chr = detail::characteristic_from(t_eps, t_eps_prime, sigma.genus());
      const CVector z = detail::point_from(t_z, sigma.genus());
      const auto ev = theta_eval_detailed(chr, z, sigma, tol_or(1e-12));
      Outcome o;
      o.details = {{"value", io::to_json(ev.value)},
                   {"radius", ev.radius},
                   {"terms", ev.terms},
                   {"log_tail_bound", ev.log_tail_bound}};
      return o;
    };
  });

  int t_k = 0;
  std::string t_nu, t_nu_prime;
  double t_threshold = 1e-10;
  auto *t_check = theta->add_subcommand("check", "Residuals of the four quasi-periodicity laws");
  add_theta_inputs(t_check);
  t_check->add_option("--k", t_k, "Column index for the z -> z + e_k and z -> z + sigma e_k laws");
  t_check->add_option("--nu", t_nu, "Integer shift of eps (default zeros)");
  t_check->add_option("--nu-prime", t_nu_prime, "Integer shift of eps' (default zeros)");
  t_check->add_option("--threshold", t_threshold, "Pass threshold for every residual");
  t_check->callback([&] {
    action = [&] {
      const SiegelPoint sigma(io::cmatrix_from(io::parse(t_sigma, "--sigma"), "--sigma"));
      const int g = sigma.genus();
      const auto chr = detail::characteristic_from(t_eps, t_eps_prime, g);
      const CVector z = detail::point_from(t_z, g);
      const auto nu = t_nu.empty() ? std::vector<std::int64_t>(g, 0)
                                   : io::int_vector_from(io::parse(t_nu, "--nu"), "--nu");
      const auto nup = t_nu_prime.empty() ? std::vector<std::int64_t>(g, 0)
                                          : io::int_vector_from(io::parse(t_nu_prime, "--nu-prime"), "--nu-prime");
      const auto res = check_quasiperiodicity(chr, z, sigma, t_k, nu, nup, tol_or(1e-12));
      Outcome o;
      o.pass = std::all_of(res.begin(), res.end(), [&](double r) { return r < t_threshold; });
      o.details = {{"residuals", {{"z+e_k", res[0]}, {"z+sigma e_k", res[1]}, {"negation", res[2]},
                                  {"char shift", res[3]}}},
                   {"threshold", t_threshold}};
      return o;
    };
  });

  // ---- periods / recover / roundtrip
  std::string lambdas_text;
  auto *periods = app.add_subcommand("periods", "Period matrix of w^2 = prod (z - lambda_i)");
  periods->add_option("--lambdas", lambdas_text, "Branch points, e.g. [0,1,2.1,3.4,[0.5,1.2],\"inf\"]")
      ->required();
  periods->callback([&] {
    action = [&] {
      const BranchConfig input = io::branch_config_from(io::parse(lambdas_text, "--lambdas"));
      const BranchConfig cfg = input.is_normalized() ? input : input.normalized();
      const PeriodData pd = period_matrix(cfg, tol_or(1e-13));
      Outcome o;
      o.pass = pd.symmetry_defect <= 1e-8;
      o.details = {{"lambdas", io::to_json(cfg)},
                   {"A", io::to_json(pd.A)},
                   {"B", io::to_json(pd.B)},
                   {"Pi", io::to_json(pd.Pi.matrix())},
                   {"symmetry_defect", pd.symmetry_defect},
                   {"min_eigenvalue_im_pi", pd.Pi.min_imag_eigenvalue()},
                   {"ray_direction", io::to_json(cfg.ray_direction())}};
      return o;
    };
  });

  std::string r_sigma;
  std::optional<int> r_index;
  auto *recover = app.add_subcommand("recover", "Branch points from a period matrix");
  recover->add_option("--sigma", r_sigma, "Period matrix (genus 1 or 2)")->required();
  recover->add_option("--index", r_index, "Single branch index j");
  recover->callback([&] {
    action = [&] {
      const SiegelPoint pi = SiegelPoint::symmetrized(io::cmatrix_from(io::parse(r_sigma, "--sigma"), "--sigma"));
      const double tol = tol_or(1e-14);
      Outcome o;
      if (r_index) {
        const cplx v = (*r_index == 5 && pi.genus() == 2) ? recover_lambda5(pi, tol)
                                                          : recover_branch_point(pi, *r_index, tol);
        o.details = {{"index", *r_index}, {"lambda", io::to_json(v)}};
        return o;
      }
      o.details = {{"lambdas", io::to_json(recover_all(pi, tol))}};
      return o;
    };
  });

  int rt_random = 0;
  int rt_genus = 2;
  double rt_threshold = 1e-6;
  auto *roundtrip = app.add_subcommand("roundtrip", "lambda -> Pi -> lambda");
  roundtrip->add_option("--lambdas", lambdas_text, "Branch points");
  roundtrip->add_option("--random", rt_random, "Use this many random configurations instead");
  roundtrip->add_option("--genus", rt_genus, "Genus of random configurations")->check(CLI::IsMember({1, 2}));
  roundtrip->add_option("--threshold", rt_threshold, "Pass threshold on the max error");
  roundtrip->callback([&] {
    action = [&] {
      const double tol = tol_or(1e-13);
      double worst = 0.0;
      json cases = json::array();
      if (rt_random > 0) {
        std::mt19937_64 rng(seed);
        CorpusOptions opt;
        opt.genus = rt_genus;
        for (int i = 0; i < rt_random; ++i) {
          cases.push_back(detail::roundtrip_one(random_branch_config(rng, opt), tol, worst));
        }
      } else if (!lambdas_text.empty()) {
        cases.push_back(
            detail::roundtrip_one(io::branch_config_from(io::parse(lambdas_text, "--lambdas")), tol, worst));
      } else {
        throw invalid_input_error("roundtrip: give --lambdas or --random N");
      }
      Outcome o;
      o.pass = worst < rt_threshold;
      o.details = {{"cases", cases}, {"max_error", worst}, {"threshold", rt_threshold}};
      return o;
    };
  });

  // ---- surface
  auto *surface = app.add_subcommand("surface", "Three-parallelogram surfaces and T/S/R moves");
  surface->require_subcommand(1);
  std::string s_chain, s_word;
  bool s_exact = false;
  int s_random = 0;
  int s_length = 10;
  auto add_chain = [&](CLI::App *sc) {
    sc->add_option("--chain", s_chain, "[z1, z2, z3, z4] as [re, im] pairs")->required();
    sc->add_flag("--exact", s_exact, "Use exact Gaussian-rational arithmetic");
  };

  auto *s_build = surface->add_subcommand("build", "Validate a chain and report its invariants");
  add_chain(s_build);
  s_build->callback([&] {
    action = [&] {
      Outcome o;
      if (s_exact) {
        o.details = detail::chain_summary(detail::chain_from<GaussianRational>(s_chain));
      } else {
        o.details = detail::chain_summary(detail::chain_from<cplx>(s_chain));
      }
      return o;
    };
  });

  auto run_moves = [&]<class Scalar>(const ParallelogramChain<Scalar> &chain) {
    const auto word = parse_word(s_word);
    Decomposition<Scalar> d(chain);
    for (std::size_t k = 0; k < word.size(); ++k) {
      auto nd = d.apply_move(word[k]);
      if (!nd) {
        const auto r = word[k] == Move::R ? d.r_move(+1) : d.r_move(-1);
        Outcome o;
        o.pass = false;
        o.details = {{"failed_move", k},
                     {"move", std::string(1, to_char(word[k]))},
                     {"failed_condition", r.failed_condition},
                     {"reason", "R move not realizable: Im(conj(z" + std::to_string(r.failed_condition) + ") z" +
                                    std::to_string(r.failed_condition + 1) + ") <= 0 for the candidate chain"},
                     {"state", detail::chain_summary(d.chain())}};
        return o;
      }
      d = std::move(*nd);
    }
    Outcome o;
    o.pass = periods_agree(d.period_vector(), d.predicted_period_vector()) && gamma_member(d.frame());
    o.details = detail::chain_summary(d.chain());
    o.details["word"] = format_word(d.word());
    o.details["frame"] = io::to_json(d.frame());
    o.details["frame_in_gamma"] = gamma_member(d.frame());
    o.details["predicted_period_vector"] = io::to_json(d.predicted_period_vector());
    return o;
  };

  auto *s_move = surface->add_subcommand("move", "Apply a move word, e.g. TSRt");
  add_chain(s_move);
  s_move->add_option("--word", s_word, "Letters T S R (inverse t s r)")->required();
  s_move->callback([&] {
    action = [&] {
      return s_exact ? run_moves(detail::chain_from<GaussianRational>(s_chain))
                     : run_moves(detail::chain_from<cplx>(s_chain));
    };
  });

  auto verify_words = [&]<class Scalar>(const ParallelogramChain<Scalar> &chain) {
    std::vector<std::vector<Move>> words;
    if (!s_word.empty()) {
      words.push_back(parse_word(s_word));
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> len(0, std::max(0, s_length));
    for (int i = 0; i < s_random; ++i) {
      words.push_back(random_realizable_word(rng, chain, static_cast<std::size_t>(len(rng))));
    }
    if (words.empty()) {
      throw invalid_input_error("surface verify: give --word or --random N");
    }
    Outcome o;
    json results = json::array();
    for (const auto &w : words) {
      const auto rep = verify_move_matrices(chain, w);
      json r = {{"word", format_word(w)}, {"ok", rep.ok}, {"product", io::to_json(rep.product)},
                {"product_in_gamma", rep.product_in_gamma}};
      if (!rep.ok) {
        r["message"] = rep.message;
        if (rep.failed_index) {
          r["failed_index"] = *rep.failed_index;
        }
      }
      o.pass = o.pass && rep.ok;
      results.push_back(r);
    }
    o.details = {{"words", results}, {"exact", scalar_traits<Scalar>::exact}};
    return o;
  };

  auto *s_verify = surface->add_subcommand("verify", "Check move matrices against the geometric action");
  add_chain(s_verify);
  s_verify->add_option("--word", s_word, "Letters T S R (inverse t s r)");
  s_verify->add_option("--random", s_random, "Also check this many random realizable words");
  s_verify->add_option("--length", s_length, "Maximum length of random words");
  s_verify->callback([&] {
    action = [&] {
      return s_exact ? verify_words(detail::chain_from<GaussianRational>(s_chain))
                     : verify_words(detail::chain_from<cplx>(s_chain));
    };
  });

  auto finish = [&](int code, const std::string &status, json details) {
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    Result res;
    res.exit_code = code;
    res.report = {{"command", command_echo}, {"status", status}, {"details", std::move(details)},
                  {"timings", {{"total_ms", ms}}}};
    const std::string text = res.report.dump(2);
    if (!quiet) {
      out << text << '\n';
    }
    if (!output_path.empty()) {
      std::ofstream f(output_path);
      if (!f) {
        err << "h2: cannot write " << output_path << '\n';
        res.exit_code = 2;
      } else {
        f << text << '\n';
      }
    }
    return res;
  };

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return {0, json{{"command", command_echo}, {"status", "help"}}};
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return {0, json{{"command", command_echo}, {"status", "help"}}};
  } catch (const CLI::ParseError &e) {
    err << "h2: " << e.what() << '\n';
    return finish(2, "usage-error", json{{"error", e.what()}});
  }

  if (!action) {
    err << "h2: no command given\n";
    return finish(2, "usage-error", json{{"error", "no command given"}});
  }
  try {
    Outcome o = action();
    return finish(o.pass ? 0 : 1, o.pass ? "pass" : "fail", std::move(o.details));
  } catch (const invalid_input_error &e) {
    err << "h2: " << e.what() << '\n';
    return finish(2, "usage-error", json{{"error", e.what()}});
  } catch (const not_symplectic_error &e) {
    err << "h2: " << e.what() << '\n';
    return finish(2, "usage-error", json{{"error", e.what()}});
  } catch (const h2::error &e) {
    err << "h2: " << e.what() << '\n';
    return finish(1, "fail", json{{"error", e.what()}});
  }
}

} // namespace h2::cli
