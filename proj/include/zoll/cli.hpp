#pragma once

// Command-line front end. Exit codes: 0 success or Zoll, 1 mathematical
// negative (non-Zoll, rigidity, failed structure check), 2 invalid input,
// 3 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "zoll/dynamics.hpp"
#include "zoll/errors.hpp"
#include "zoll/figures.hpp"
#include "zoll/flatmap.hpp"
#include "zoll/geometry.hpp"
#include "zoll/io.hpp"
#include "zoll/multienergy.hpp"
#include "zoll/profiles.hpp"
#include "zoll/spectral.hpp"

namespace zoll::cli {

enum ExitCode : int { kOk = 0, kNegative = 1, kInvalid = 2, kNumerical = 3 };

namespace fs = std::filesystem;

struct RunConfig {
  std::string command;
  std::vector<std::string> argv;
  std::optional<std::uint64_t> rng_seed;

  nlohmann::json to_json() const {
    nlohmann::json j{{"command", command}, {"argv", argv}};
    j["rng_seed"] = rng_seed ? nlohmann::json(*rng_seed) : nlohmann::json(nullptr);
    return j;
  }
};

inline nlohmann::json report_header(const RunConfig& cfg, nlohmann::json tolerances) {
  return {{"config", cfg.to_json()}, {"version", kToolVersion}, {"tolerances", std::move(tolerances)}};
}

inline nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  try {
    nlohmann::json j;
    in >> j;
    return j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput("malformed JSON in '" + path + "': " + e.what());
  }
}

inline DeformationProfile load_deformation(const std::string& path) {
  nlohmann::json j = load_json_file(path);
  try {
    return as_deformation(profile_from_json(j));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput("bad profile in '" + path + "': " + e.what());
  }
}

// ---- verify-zoll ---------------------------------------------------------------

struct VerifyArgs {
  std::string profile;
  std::optional<double> h;
  int grid = 32;
  std::string method = "quadrature";
  std::optional<double> tol;
  std::string out = "zoll_out";
};

inline ZollReport scan_with(const DeformationProfile& f, double h, int grid, ScanMethod method, double tol) {
  if (method == ScanMethod::quadrature) return zoll_scan_quadrature(to_besse(f, h), grid, h, tol);
  return zoll_scan_integration(DeformedKepler(RotSystem{h, f, {constant(0.0), h}}), grid, tol);
}

inline nlohmann::json zoll_report_json(const ZollReport& r, int grid) {
  nlohmann::json j{{"verdict", to_string(r.verdict)},
                   {"method", to_string(r.method)},
                   {"grid", grid},
                   {"h", r.h},
                   {"max_dtheta_dev", r.max_dtheta_dev},
                   {"max_period_dev", r.max_period_dev},
                   {"energy_drift", r.max_energy_drift},
                   {"tol", r.tol}};
  j["failed_at"] = r.failed_at ? nlohmann::json(*r.failed_at) : nlohmann::json(nullptr);
  j["failure"] = r.failure;
  return j;
}

inline CsvTable zoll_samples_csv(const ZollReport& r) {
  CsvTable t{{"c", "p_theta", "dtheta", "period", "energy_drift"}, {}, 12};
  for (std::size_t i = 0; i < r.dtheta.size(); ++i) {
    t.add({r.clairaut[i], r.p_theta[i], r.dtheta[i], r.period[i], r.energy_drift[i]});
  }
  return t;
}

inline int verdict_exit(Verdict v) {
  switch (v) {
    case Verdict::zoll: return kOk;
    case Verdict::non_zoll: return kNegative;
    default: return kNumerical;
  }
}

inline int cmd_verify_zoll(const VerifyArgs& a, const RunConfig& cfg, std::ostream& out) {
  ScanMethod method;
  if (a.method == "quadrature") {
    method = ScanMethod::quadrature;
  } else if (a.method == "integration") {
    method = ScanMethod::integration;
  } else {
    throw InvalidInput("method must be 'quadrature' or 'integration'");
  }
  double tol = a.tol.value_or(method == ScanMethod::quadrature ? kQuadratureTol : kIntegrationTol);
  if (!(tol > 0)) throw InvalidInput("tolerance must be positive");

  // (suffix, profile, h) for every level to scan.
  std::vector<std::tuple<std::string, DeformationProfile, double>> jobs;
  nlohmann::json j = load_json_file(a.profile);
  if (j.is_object() && j.value("kind", "") == "extended") {
    ExtendedProfile ext = extended_from_json(j);
    for (std::size_t i = 0; i < ext.ladder.size(); ++i) {
      jobs.emplace_back("_level" + std::to_string(i + 1), ext.level_profile(i), ext.ladder.h[i]);
    }
  } else {
    ProfileFile p;
    try {
      p = profile_from_json(j);
    } catch (const nlohmann::json::exception& e) {
      throw InvalidInput("bad profile in '" + a.profile + "': " + e.what());
    }
    std::optional<double> h = a.h ? a.h : p.h;
    if (!h) throw InvalidInput("no energy parameter: pass --h or set \"h\" in the profile");
    require_positive_h(*h);
    jobs.emplace_back("", as_deformation(p), *h);
  }

  int code = kOk;
  for (const auto& [suffix, f, h] : jobs) {
    ZollReport r = scan_with(f, h, a.grid, method, tol);
    nlohmann::json rep = zoll_report_json(r, a.grid);
    rep.update(report_header(cfg, {{"quadrature", kQuadratureTol}, {"integration", kIntegrationTol}, {"used", tol}}));
    write_json(fs::path(a.out) / ("zoll_report" + suffix + ".json"), rep);
    write_text(fs::path(a.out) / ("zoll_samples" + suffix + ".csv"), zoll_samples_csv(r).str());
    out << "h=" << format_number(h) << " verdict=" << to_string(r.verdict)
        << " max|dtheta-2pi|=" << format_number(r.max_dtheta_dev, 3)
        << " max|period-2pi|=" << format_number(r.max_period_dev, 3) << "\n";
    if (!r.failure.empty()) out << "  " << r.failure << "\n";
    code = std::max(code, verdict_exit(r.verdict));
  }
  return code;
}

// ---- extend ---------------------------------------------------------------------

struct ExtendArgs {
  std::vector<std::string> energies;
  std::string seed_file;
  std::optional<std::string> extension_file;
  std::optional<std::string> pair_case;
  std::string construction = "auto";
  std::optional<double> snap;
  std::string out = "extended_profile.json";
  bool verify = false;
  int grid = 32;
  double target_gap = 0.01;
  long max_steps = 100000;
};

inline bool chain_condition(const EnergyLadder& L) {
  for (std::size_t i = 0; i + 1 < L.size(); ++i) {
    bool ok = (L.exact[i] && L.exact[i + 1]) ? *L.exact[i] >= 2 * *L.exact[i + 1]
                                             : L.h[i] >= 2 * L.h[i + 1] * (1 - 1e-12);
    if (!ok) return false;
  }
  return true;
}

inline bool looks_like_core(const DeformationProfile& f) {
  const Interval& s = f.support;
  return s.lo > -1.0 && s.hi < 1.0 && std::abs(s.lo + s.hi) < 1e-12 && validate_profile(f).odd;
}

inline int cmd_extend(const ExtendArgs& a, const RunConfig& cfg, std::ostream& out) {
  EnergyLadder ladder = ladder_from_strings(a.energies);
  if (a.snap) {
    if (!(*a.snap > 0)) throw InvalidInput("--snap-rational needs a positive tolerance");
    ladder = snap_ladder(ladder, *a.snap);
    out << "snapped energies:";
    for (const auto& e : ladder.exact) out << " " << to_string(*e);
    out << "\n";
  }
  DeformationProfile seed = load_deformation(a.seed_file);
  std::optional<DeformationProfile> extension;
  if (a.extension_file) extension = load_deformation(*a.extension_file);
  std::optional<PairCase> expected;
  if (a.pair_case) {
    if (*a.pair_case == "1" || *a.pair_case == "Case1") {
      expected = PairCase::case1;
    } else if (*a.pair_case == "2" || *a.pair_case == "Case2") {
      expected = PairCase::case2;
    } else if (*a.pair_case == "3" || *a.pair_case == "Case3") {
      expected = PairCase::case3;
    } else {
      throw InvalidInput("--case must be 1, 2 or 3");
    }
  }

  ExtendedProfile ext;
  if (ladder.size() == 2 && a.construction != "rational") {
    ext = extend_pair(seed, ladder, expected, extension);
  } else {
    if (expected) throw InvalidInput("--case applies to two energies only");
    bool use_chain = a.construction == "chain" ||
                     (a.construction == "auto" && chain_condition(ladder) && looks_like_core(seed));
    if (use_chain) {
      ext = extend_chain(seed, ladder, extension);
    } else {
      if (a.construction != "auto" && a.construction != "rational") {
        throw InvalidInput("--construction must be auto, chain or rational");
      }
      LadderStructure st = analyze_ladder(ladder);
      if (st.kind == LadderStructure::Kind::irrational) {
        auto [k, l] = *st.independent_pair;
        auto xi = xi_values(ladder);
        if (st.smallness) {
          ReflectionOrbit orb = reflection_orbit(std::max(xi[k], xi[l]), std::min(xi[k], xi[l]), a.target_gap, a.max_steps);
          out << "rigidity: xi_" << k + 1 << " = " << format_number(xi[k]) << " and xi_" << l + 1 << " = "
              << format_number(xi[l]) << " are rationally independent with xi_" << k + 1 << " + xi_" << l + 1
              << " < 1.\n"
              << "  Their reflection orbit is dense (gap " << format_number(orb.gap, 3) << " after " << orb.steps
              << " steps), so only the zero profile, i.e. Kepler itself, is Zoll at all these energies.\n"
              << "  Use --snap-rational <eps> to move to nearby energies that admit a construction.\n";
          return kNegative;
        }
        throw InvalidInput("xi values are rationally independent but xi_k + xi_l >= 1; no construction is available");
      }
      if (st.kind == LadderStructure::Kind::ambiguous) {
        throw InvalidInput("cannot decide whether the xi values are rationally dependent; pass exact energies or "
                           "--snap-rational <eps>");
      }
      ext = build_multi_profile(seed, ladder);
    }
  }

  nlohmann::json j = extended_to_json(ext);
  nlohmann::json checks;
  checks["oddness_residuals"] = verify_F_oddness(ext);
  checks["reflection_residuals"] = reflection_residuals(ext);
  checks["sup_norms"] = extension_sup_norms(ext);
  int code = kOk;
  if (a.verify) {
    auto verdicts = nlohmann::json::array();
    for (std::size_t i = 0; i < ext.ladder.size(); ++i) {
      ZollReport r = scan_with(ext.level_profile(i), ext.ladder.h[i], a.grid, ScanMethod::quadrature, kQuadratureTol);
      verdicts.push_back(zoll_report_json(r, a.grid));
      code = std::max(code, verdict_exit(r.verdict));
    }
    checks["zoll"] = verdicts;
  }
  j["checks"] = checks;
  j.update(report_header(cfg, {{"quadrature", kQuadratureTol}, {"oddness", 1e-12}}));
  // Profiles are inputs to later runs, so keep full precision here.
  write_text(a.out, j.dump(2) + "\n");

  out << "construction: " << ext.construction << "\n";
  if (ext.gamma_exact) {
    out << "gamma = " << to_string(*ext.gamma_exact) << "\n";
  } else if (ext.gamma) {
    out << "gamma = " << format_number(*ext.gamma) << "\n";
  }
  for (const auto& line : ext.log) out << "  " << line << "\n";
  out << "wrote " << a.out << "\n";
  return code;
}

// ---- flat-potential ---------------------------------------------------------------

struct FlatArgs {
  double h = 0;
  std::string profile;
  std::string out = "flat_out";
  bool verify = false;
  int grid = 16;
  int samples = 2048;
};

inline int cmd_flat_potential(const FlatArgs& a, const RunConfig& cfg, std::ostream& out) {
  require_positive_h(a.h);
  if (a.samples < 16) throw InvalidInput("--samples must be at least 16");
  DeformationProfile f = load_deformation(a.profile);
  ExoticPotential pot(ConformalMap(a.h, f));
  const ConformalMap& map = pot.map();

  // Chebyshev-Lobatto nodes on [sigma_min, sigma_max], increasing.
  CsvTable t{{"sigma", "P", "dP_dsigma"}, {}, 10};
  double lo = pot.sigma_min(), hi = pot.sigma_max();
  auto nodes = chebyshev_lobatto(a.samples);
  for (auto it = nodes.rbegin(); it != nodes.rend(); ++it) {
    double s = lo + (hi - lo) * (*it + 1) / 2;
    t.add({s, pot.P(s), pot.dP(s)});
  }
  write_text(fs::path(a.out) / "potential.csv", t.str());

  nlohmann::json meta{{"h", a.h},
                      {"profile", a.profile},
                      {"expr", expr_to_json(f.fn)},
                      {"sigma_min", lo},
                      {"sigma_max", hi},
                      {"identity_end", map.identity_end()},
                      {"tail_start", map.tail_start()},
                      {"tail_slope", map.tail_slope()}};
  meta.update(report_header(cfg, {{"ode_rtol", 1e-13}, {"integration", kIntegrationTol}}));
  write_json(fs::path(a.out) / "potential.json", meta);
  out << "sigma_max = " << format_number(hi) << ", identity up to sigma = " << format_number(map.identity_end())
      << ", wrote " << (fs::path(a.out) / "potential.csv").string() << "\n";

  if (!a.verify) return kOk;
  ZollReport r = verify_flat_zoll(pot, a.grid);
  nlohmann::json rep = zoll_report_json(r, a.grid);
  rep.update(report_header(cfg, {{"integration", kIntegrationTol}, {"energy_drift", kFlatDriftBound}}));
  write_json(fs::path(a.out) / "flat_zoll_report.json", rep);
  write_text(fs::path(a.out) / "flat_zoll_samples.csv", zoll_samples_csv(r).str());
  out << "flat system verdict=" << to_string(r.verdict) << " max|dtheta-2pi|=" << format_number(r.max_dtheta_dev, 3)
      << "\n";
  return verdict_exit(r.verdict);
}

// ---- rigidity ------------------------------------------------------------------------

struct RigidityArgs {
  std::string mode = "matrix";
  int order = 40;
  std::vector<std::string> xi;
  double target_gap = 0.01;
  long max_steps = 100000;
  std::string out = "rigidity_out";
};

inline double parse_real(const std::string& s) {
  auto r = parse_rational(s);
  if (!r) throw InvalidInput("cannot parse number '" + s + "'");
  return to_double(*r);
}

inline int cmd_rigidity(const RigidityArgs& a, const RunConfig& cfg, std::ostream& out) {
  if (a.mode == "matrix") {
    RigidityMatrix M = rigidity_matrix(a.order);
    StructureReport s = check_structure(M);
    std::string csv = "h";
    for (int k = 2; k <= 2 * M.N; k += 2) csv += ",k" + std::to_string(k);
    csv += '\n';
    for (int h = 1; h <= M.N; ++h) {
      csv += std::to_string(h);
      for (int k = 2; k <= 2 * M.N; k += 2) csv += "," + M.at(h, k).str();
      csv += '\n';
    }
    write_text(fs::path(a.out) / "rigidity_matrix.csv", csv);
    nlohmann::json rep{{"N", s.N},
                       {"upper_triangular", s.upper_triangular},
                       {"diagonal_ok", s.diagonal_ok},
                       {"kernel_trivial", s.kernel_trivial},
                       {"rank", s.rank},
                       {"failures", s.failures}};
    rep.update(report_header(cfg, {{"arithmetic", "exact"}}));
    write_json(fs::path(a.out) / "rigidity_report.json", rep);
    out << "N=" << s.N << " upper_triangular=" << s.upper_triangular << " diagonal_ok=" << s.diagonal_ok
        << " kernel_trivial=" << s.kernel_trivial << "\n";
    return s.pass() ? kOk : kNegative;
  }
  if (a.mode == "orbit") {
    if (a.xi.size() != 2) throw InvalidInput("--xi takes two values xi_k,xi_l");
    double x1 = parse_real(a.xi[0]), x2 = parse_real(a.xi[1]);
    ReflectionOrbit orb = reflection_orbit(std::max(x1, x2), std::min(x1, x2), a.target_gap, a.max_steps);
    CsvTable t{{"order", "a", "b", "x"}, {}, 12};
    for (std::size_t i = 0; i < orb.lattice.size(); ++i) {
      auto [p, q] = orb.lattice[i];
      t.add({double(i), double(p), double(q), 2.0 * (double(p) * orb.xi_k + double(q) * orb.xi_l)});
    }
    write_text(fs::path(a.out) / "orbit.csv", t.str());
    nlohmann::json rep{{"xi_k", orb.xi_k}, {"xi_l", orb.xi_l},         {"gap", orb.gap},
                       {"steps", orb.steps}, {"points", orb.points.size()}, {"exhausted", orb.exhausted},
                       {"reached_target", orb.reached_target}, {"gammas", orb.gammas}};
    rep.update(report_header(cfg, {{"target_gap", a.target_gap}, {"max_steps", a.max_steps}}));
    write_json(fs::path(a.out) / "orbit_report.json", rep);
    out << "orbit: " << orb.points.size() << " points, gap " << format_number(orb.gap, 4) << " after " << orb.steps
        << " steps" << (orb.exhausted ? " (finite orbit)" : "") << "\n";
    return kOk;
  }
  throw InvalidInput("--mode must be 'matrix' or 'orbit'");
}

// ---- figures ------------------------------------------------------------------------

struct FigureArgs {
  std::string which = "all";
  std::string out = "figures";
  int samples = 1001;
};

inline int cmd_figures(const FigureArgs& a, const RunConfig&, std::ostream& out) {
  std::vector<int> ids;
  if (a.which == "all") {
    ids = {1, 2, 3, 4};
  } else {
    ids = {int(parse_real(a.which))};
  }
  for (int id : ids) {
    for (const auto& fig : figure_data(id, a.samples)) {
      write_text(fs::path(a.out) / (fig.name + ".csv"), fig.table.str());
      write_text(fs::path(a.out) / (fig.name + ".svg"), svg_from_table(fig.title, fig.table));
      out << "wrote " << (fs::path(a.out) / (fig.name + ".csv")).string() << "\n";
    }
  }
  return kOk;
}

// ---- make-profile ------------------------------------------------------------------

struct MakeProfileArgs {
  std::string kind = "odd-bump";
  double a = 0.1, b = 0.6, amp = 0.1;
  std::optional<double> h;
  std::uint64_t rng_seed = 1;
  std::string out = "profile.json";
};

inline int cmd_make_profile(const MakeProfileArgs& m, const RunConfig& cfg, std::ostream& out) {
  ProfileFile p;
  p.h = m.h;
  if (m.kind == "kepler") {
    p.expr = constant(0.0);
  } else if (m.kind == "odd-bump") {
    p.expr = odd_bump(m.a, m.b, m.amp);
    double r = std::max(std::abs(m.a), std::abs(m.b));
    p.support = {-r, r};
  } else if (m.kind == "bump") {
    // A plain (not antisymmetrized) bump, used as a seed or free extension.
    p.expr = scale(m.amp, unit_bump(m.a, m.b));
    p.support = {m.a, m.b};
  } else if (m.kind == "even-perturbation") {
    p.expr = odd_bump(m.a, m.b, m.amp) + scale(0.1, polynomial({1.0, 0.0, -1.0}));
  } else if (m.kind == "random") {
    std::mt19937_64 rng(m.rng_seed);
    DeformationProfile f = random_odd_profile(rng);
    p.expr = f.fn;
    p.support = f.support;
  } else {
    throw InvalidInput("--kind must be kepler, odd-bump, bump, even-perturbation or random");
  }
  nlohmann::json j = profile_to_json(p);
  j["generator"] = cfg.to_json();
  write_text(m.out, j.dump(2) + "\n");
  out << "wrote " << m.out << "\n";
  return kOk;
}

// ---- entry point -----------------------------------------------------------------------

inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Zoll deformations of the Kepler problem", "zoll_cli"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);
  app.set_help_flag("--help", "Print help and exit");  // -h would clash with the energy option

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify-zoll", "Scan return angles and periods over a Clairaut grid");
  verify->add_option("--profile", va.profile, "Profile JSON (deformation or extended)")->required();
  verify->add_option("--h", va.h, "Energy parameter h > 0 (overrides the profile's)");
  verify->add_option("--grid", va.grid, "Number of Clairaut constants")->check(CLI::Range(8, 100000));
  verify->add_option("--method", va.method, "quadrature or integration");
  verify->add_option("--tol", va.tol, "Zoll tolerance");
  verify->add_option("--out", va.out, "Output directory");

  ExtendArgs ea;
  auto* extend = app.add_subcommand("extend", "Build a profile that is Zoll at several energies");
  extend->add_option("--energies", ea.energies, "Decreasing energies h_1,...,h_n")->delimiter(',')->required();
  extend->add_option("--seed-file", ea.seed_file, "Core profile (Case1/2, chains) or seed (Case3, rational)")
      ->required();
  extend->add_option("--extension-file", ea.extension_file, "Free Case1 piece supported in (-xi, -1)");
  extend->add_option("--case", ea.pair_case, "Expected case for two energies: 1, 2 or 3");
  extend->add_option("--construction", ea.construction, "auto, chain or rational");
  extend->add_option("--snap-rational", ea.snap, "Snap energies to nearby rationals within eps");
  extend->add_option("--out", ea.out, "Output profile JSON");
  extend->add_flag("--verify", ea.verify, "Run quadrature Zoll scans at every level");
  extend->add_option("--grid", ea.grid, "Scan grid size")->check(CLI::Range(8, 100000));

  FlatArgs fa;
  auto* flat = app.add_subcommand("flat-potential", "Tabulate a Zoll central potential on the flat plane");
  flat->add_option("--h", fa.h, "Energy parameter h > 0")->required();
  flat->add_option("--profile", fa.profile, "Deformation profile vanishing near x = 1")->required();
  flat->add_option("--out", fa.out, "Output directory");
  flat->add_flag("--verify", fa.verify, "Integrate the flat system and check the Zoll property");
  flat->add_option("--grid", fa.grid, "Verification grid size")->check(CLI::Range(8, 100000));
  flat->add_option("--samples", fa.samples, "Table size");

  RigidityArgs ra;
  auto* rig = app.add_subcommand("rigidity", "Exact operator truncations and reflection orbits");
  rig->add_option("--mode", ra.mode, "matrix or orbit");
  rig->add_option("--order", ra.order, "Truncation order N");
  rig->add_option("--xi", ra.xi, "Two xi values for orbit mode")->delimiter(',');
  rig->add_option("--target-gap", ra.target_gap, "Stop once the largest gap is below this");
  rig->add_option("--max-steps", ra.max_steps, "Expansion budget");
  rig->add_option("--out", ra.out, "Output directory");

  FigureArgs ga;
  auto* figs = app.add_subcommand("figures", "Regenerate figure data as CSV and SVG");
  figs->add_option("--which", ga.which, "1, 2, 3, 4 or all");
  figs->add_option("--out", ga.out, "Output directory");
  figs->add_option("--samples", ga.samples, "Samples per curve")->check(CLI::Range(2, 1000000));

  MakeProfileArgs ma;
  std::optional<std::uint64_t> seed;
  auto* make = app.add_subcommand("make-profile", "Write a profile JSON");
  make->add_option("--kind", ma.kind, "kepler, odd-bump, bump, even-perturbation or random");
  make->add_option("--a", ma.a, "Left end of the bump support");
  make->add_option("--b", ma.b, "Right end of the bump support");
  make->add_option("--amp", ma.amp, "Amplitude");
  make->add_option("--h", ma.h, "Energy parameter stored in the file");
  make->add_option("--rng-seed", seed, "Seed for --kind random");
  make->add_option("--out", ma.out, "Output file");

  for (auto* sub : {verify, extend, flat, rig, figs, make}) sub->set_help_flag("--help", "Print help and exit");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  }

  RunConfig cfg;
  cfg.argv = args;
  cfg.command = app.get_subcommands().front()->get_name();
  if (seed) {
    ma.rng_seed = *seed;
    cfg.rng_seed = *seed;
  }

  try {
    if (*verify) return cmd_verify_zoll(va, cfg, out);
    if (*extend) return cmd_extend(ea, cfg, out);
    if (*flat) return cmd_flat_potential(fa, cfg, out);
    if (*rig) return cmd_rigidity(ra, cfg, out);
    if (*figs) return cmd_figures(ga, cfg, out);
    if (*make) return cmd_make_profile(ma, cfg, out);
  } catch (const InvalidInput& e) {
    err << "invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const DomainError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const fs::filesystem_error& e) {
    err << "invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  }
  return kInvalid;
}

}  // namespace zoll::cli
