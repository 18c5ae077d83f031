#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hypgas/bounds.hpp"
#include "hypgas/error.hpp"
#include "hypgas/manifolds.hpp"
#include "hypgas/oracles.hpp"
#include "hypgas/report.hpp"
#include "hypgas/scattering.hpp"

namespace hypgas::cli {

enum ExitCode : int { kOk = 0, kNotCertified = 1, kUsage = 2, kNumeric = 3 };

/// One sweep axis, parsed from name:min:max:count[:log].
struct SweepAxis {
  std::string name;
  double min = 0.0;
  double max = 0.0;
  int count = 1;
  bool log = false;

  friend bool operator==(const SweepAxis&, const SweepAxis&) = default;

  [[nodiscard]] std::vector<double> values() const {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
      const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
      out.push_back(log ? min * std::pow(max / min, t) : min + t * (max - min));
    }
    if (count > 1) out.back() = max;
    return out;
  }
};

inline const std::vector<std::string>& sweep_parameters() {
  static const std::vector<std::string> names{"rho", "mu", "eps", "gap", "R"};
  return names;
}

[[nodiscard]] inline SweepAxis parse_axis(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() != 4 && parts.size() != 5) throw DomainError("axis must be name:min:max:count[:log]");
  SweepAxis ax;
  ax.name = parts[0];
  if (std::find(sweep_parameters().begin(), sweep_parameters().end(), ax.name) == sweep_parameters().end()) {
    throw DomainError("unknown sweep parameter '" + ax.name + "'");
  }
  try {
    std::size_t used = 0;
    ax.min = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("min");
    ax.max = std::stod(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument("max");
    ax.count = std::stoi(parts[3], &used);
    if (used != parts[3].size()) throw std::invalid_argument("count");
  } catch (const std::logic_error&) {
    throw DomainError("malformed axis '" + spec + "'");
  }
  if (parts.size() == 5) {
    if (parts[4] != "log" && parts[4] != "lin") throw DomainError("axis scale must be log or lin");
    ax.log = parts[4] == "log";
  }
  if (ax.count < 1) throw DomainError("axis count must be at least 1");
  if (!std::isfinite(ax.min) || !std::isfinite(ax.max)) throw DomainError("axis bounds must be finite");
  if (ax.log && !(ax.min > 0.0 && ax.max > 0.0)) throw DomainError("log axis needs positive bounds");
  return ax;
}

/// Worker cap from HYPGAS_THREADS; defaults to the hardware concurrency.
[[nodiscard]] inline unsigned thread_cap() {
  unsigned cap = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("HYPGAS_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) cap = static_cast<unsigned>(v);
  }
  return cap;
}

/// Runs fn(i) for i in [0, n) on at most @p threads workers; rethrows the first failure by index.
inline void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto workers = static_cast<std::size_t>(std::min<std::size_t>(threads, n));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct SweepReport {
  std::vector<SweepAxis> axes;
  std::vector<BoundReport> rows;

  friend bool operator==(const SweepReport&, const SweepReport&) = default;
};

/// Bound reports over the Cartesian grid of @p axes, first axis outermost.
[[nodiscard]] inline SweepReport run_sweep(const BoundInputs& base, const Potential& V, std::vector<SweepAxis> axes,
                                           unsigned threads, const SolverOptions& opts = {}) {
  if (axes.empty() || axes.size() > 2) throw DomainError("sweep needs one or two axes");
  if (axes.size() == 2 && axes[0].name == axes[1].name) throw DomainError("sweep axes must differ");
  std::vector<std::vector<double>> vals;
  std::size_t total = 1;
  for (const auto& ax : axes) {
    vals.push_back(ax.values());
    total *= vals.back().size();
  }

  std::vector<BoundInputs> inputs(total, base);
  for (std::size_t k = 0; k < total; ++k) {
    std::size_t rem = k;
    for (std::size_t ai = axes.size(); ai-- > 0;) {
      const double v = vals[ai][rem % vals[ai].size()];
      rem /= vals[ai].size();
      auto& in = inputs[k];
      const auto& n = axes[ai].name;
      if (n == "rho") in.rho = v;
      else if (n == "mu") in.mu = v;
      else if (n == "eps") in.eps = v;
      else if (n == "gap") in.gap = v;
      else in.R = v;
    }
  }

  // The scattering length depends on mu only; solve once per distinct mu.
  std::vector<double> mus;
  for (const auto& in : inputs) mus.push_back(in.mu);
  std::sort(mus.begin(), mus.end());
  mus.erase(std::unique(mus.begin(), mus.end()), mus.end());
  std::vector<double> lengths(mus.size());
  const Dimension d(base.d);
  parallel_for(mus.size(), threads,
               [&](std::size_t i) { lengths[i] = scattering_length(V, ScatteringParams(mus[i], d), opts).a; });

  SweepReport rep{std::move(axes), std::vector<BoundReport>(total)};
  parallel_for(total, threads, [&](std::size_t k) {
    BoundInputs in = inputs[k];
    in.a = lengths[static_cast<std::size_t>(std::lower_bound(mus.begin(), mus.end(), in.mu) - mus.begin())];
    rep.rows[k] = evaluate_bounds(in);
  });
  return rep;
}

[[nodiscard]] inline std::string csv_line(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += cells[i];
  }
  return out + '\n';
}

[[nodiscard]] inline std::string sweep_csv(const SweepReport& rep) {
  std::string out = csv_line(bound_csv_columns());
  for (const auto& r : rep.rows) out += csv_line(bound_csv_row(r));
  return out;
}

[[nodiscard]] inline json to_json(const SweepReport& rep) {
  json axes = json::array();
  for (const auto& ax : rep.axes) {
    axes.push_back({{"name", ax.name}, {"min", ax.min}, {"max", ax.max}, {"count", ax.count}, {"log", ax.log}});
  }
  json rows = json::array();
  for (const auto& r : rep.rows) rows.push_back(hypgas::to_json(r));
  return {{"axes", axes}, {"rows", rows}};
}

[[nodiscard]] inline SweepReport sweep_report_from_json(const json& j) {
  SweepReport rep;
  for (const auto& a : j.at("axes")) {
    rep.axes.push_back({a.at("name").get<std::string>(), a.at("min").get<double>(), a.at("max").get<double>(),
                        a.at("count").get<int>(), a.at("log").get<bool>()});
  }
  for (const auto& r : j.at("rows")) rep.rows.push_back(bound_report_from_json(r));
  return rep;
}

/// Options shared by the subcommands; unused fields keep their defaults.
struct Options {
  std::string potential;
  int d = 2;
  double mu = 1.0;
  double rho = 0.0;
  std::string model;
  long N = 0;
  long L = 1;
  long g = 2;
  double alpha = 1.0 / 16.0;
  double volume = 0.0;
  double gap = 0.0;
  double vol_x1 = 0.0;
  long index = 1;
  std::string gap_policy;
  double eps = 0.1;
  double R = 0.0;
  std::string format = "json";
  std::string out;
  double tol = 0.0;
  std::vector<std::string> axes;
  int profile_points = 65;
};

namespace detail {

[[nodiscard]] inline Potential load_potential(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open potential file '" + path + "'");
  return potential_from_json(json::parse(in));
}

[[nodiscard]] inline ManifoldModel build_model(const Options& o, const CLI::App& sub) {
  std::optional<GapPolicy> policy;
  if (!o.gap_policy.empty()) policy = gap_policy_from_string(o.gap_policy);
  auto need = [&sub](const char* flag) {
    if (sub.count(flag) == 0) throw DomainError(std::string("model needs ") + flag);
  };
  if (o.model == "modular") {
    need("--L");
    return ManifoldModel(ModularSurface{o.L}, policy);
  }
  if (o.model == "congruence3") {
    need("--L");
    need("--vol-x1");
    need("--index");
    return ManifoldModel(CongruenceQuotient3{o.L, o.vol_x1, o.index}, policy);
  }
  if (o.model == "random") {
    need("--g");
    return ManifoldModel(RandomSurface{o.g, o.alpha}, policy);
  }
  need("--volume");
  need("--gap");
  return ManifoldModel(CustomManifold{o.d, o.volume, o.gap}, policy);
}

[[nodiscard]] inline SolverOptions solver_options(const Options& o, const CLI::App& sub) {
  SolverOptions s;
  if (sub.count("--tol")) {
    if (!(o.tol > 0.0)) throw DomainError("--tol must be positive");
    s.abs_tol = o.tol;
    s.rel_tol = o.tol;
  }
  return s;
}

inline void emit(const Options& o, const std::string& text, std::ostream& out) {
  if (o.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary | std::ios::trunc);
  if (!f) throw DomainError("cannot write '" + o.out + "'");
  f << text;
}

[[nodiscard]] inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

/// Single-row CSV from the scalar fields of a report's inputs and derived sections.
[[nodiscard]] inline std::string flat_csv(const json& report) {
  std::vector<std::string> header;
  std::vector<std::string> row;
  for (const char* section : {"inputs", "derived"}) {
    for (const auto& [k, v] : report.at(section).items()) {
      if (v.is_object() || v.is_array()) continue;
      header.push_back(k);
      if (v.is_null()) row.emplace_back();
      else if (v.is_boolean()) row.emplace_back(v.get<bool>() ? "true" : "false");
      else if (v.is_number_float()) row.push_back(format_number(v.get<double>()));
      else if (v.is_number()) row.push_back(v.dump());
      else row.push_back(v.get<std::string>());
    }
  }
  return csv_line(header) + csv_line(row);
}

}  // namespace detail

/**
 * @brief Entry point of the hypgas executable.
 *
 * Exit status: 0 success, 1 not certified / verification failed / regime
 * failure, 2 usage, parse or domain error, 3 numerical failure.
 */
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Scattering lengths, energy bounds and condensation certificates for Bose gases on hyperbolic manifolds",
               "hypgas"};
  app.require_subcommand(1);
  Options o;

  auto* scatter = app.add_subcommand("scatter", "scattering length, C_d, E_R and the radial profile");
  auto* bound = app.add_subcommand("bound", "diluteness, Y0, energy upper bounds and fraction lower bound");
  auto* certify = app.add_subcommand("certify", "condensation certificate for a manifold model");
  auto* sweep = app.add_subcommand("sweep", "bound reports over a one- or two-parameter grid");
  auto* verify = app.add_subcommand("verify", "run the finite-difference and inequality oracles");

  const auto formats = CLI::IsMember({"json", "csv"});
  const auto models = CLI::IsMember({"modular", "congruence3", "random", "custom"});
  for (auto* sub : {scatter, bound, certify, sweep, verify}) {
    sub->add_option("--format", o.format, "json or csv")->check(formats);
    sub->add_option("--out", o.out, "write the report to this file");
    sub->add_option("--tol", o.tol, "solver tolerance (verify: oracle relative tolerance)");
  }
  for (auto* sub : {scatter, bound, certify, sweep}) {
    sub->add_option("--potential", o.potential, "potential JSON file")->required()->check(CLI::ExistingFile);
    sub->add_option("--mu", o.mu, "kinetic prefactor");
  }
  for (auto* sub : {scatter, bound, certify, sweep}) sub->add_option("--d", o.d, "dimension")->check(CLI::IsMember({2, 3}));
  for (auto* sub : {scatter, bound, sweep}) sub->add_option("--R", o.R, "radius override");
  scatter->add_option("--profile-points", o.profile_points, "number of sampled profile points");
  for (auto* sub : {bound, certify, sweep}) {
    sub->add_option("--eps", o.eps, "target per-particle energy fraction");
    sub->add_option("--model", o.model, "manifold family")->check(models);
    sub->add_option("--N", o.N, "particle number");
    sub->add_option("--L", o.L, "congruence level");
    sub->add_option("--g", o.g, "genus");
    sub->add_option("--alpha", o.alpha, "random-surface gap offset");
    sub->add_option("--volume", o.volume, "custom manifold volume");
    sub->add_option("--gap", o.gap, "spectral gap");
    sub->add_option("--vol-x1", o.vol_x1, "vol(X_1) for congruence3");
    sub->add_option("--index", o.index, "subgroup index for congruence3");
    sub->add_option("--gap-policy", o.gap_policy, "gap policy");
  }
  for (auto* sub : {bound, sweep}) sub->add_option("--rho", o.rho, "density");
  sweep->add_option("--axis", o.axes, "name:min:max:count[:log]; names rho, mu, eps, gap, R")->required();
  certify->get_option("--model")->required();
  certify->get_option("--N")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    (void)app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (scatter->parsed()) {
      const auto opts = detail::solver_options(o, *scatter);
      const Potential V = detail::load_potential(o.potential);
      std::optional<double> R;
      if (scatter->count("--R")) R = o.R;
      const auto rep = make_scatter_report(V, Dimension(o.d), o.mu, R, o.profile_points, opts);
      if (o.format == "csv") {
        std::string text = csv_line({"r", "f"});
        for (std::size_t i = 0; i < rep.profile_r.size(); ++i) {
          text += csv_line({format_number(rep.profile_r[i]), format_number(rep.profile_f[i])});
        }
        detail::emit(o, text, out);
      } else {
        detail::emit(o, detail::dump(to_json(rep)), out);
      }
      return kOk;
    }

    if (certify->parsed()) {
      const auto opts = detail::solver_options(o, *certify);
      const Potential V = detail::load_potential(o.potential);
      const ManifoldModel model = detail::build_model(o, *certify);
      const auto cert = certify_bec(model, o.N, V, o.mu, o.eps, opts);
      json j = to_json(cert);
      j["settings"] = settings_to_json(opts);
      detail::emit(o, o.format == "csv" ? detail::flat_csv(j) : detail::dump(j), out);
      return cert.certified ? kOk : kNotCertified;
    }

    if (bound->parsed() || sweep->parsed()) {
      auto* sub = bound->parsed() ? bound : sweep;
      const auto opts = detail::solver_options(o, *sub);
      const Potential V = detail::load_potential(o.potential);
      BoundInputs in;
      in.mu = o.mu;
      in.eps = o.eps;
      in.R0 = V.support_radius();
      if (sub->count("--model")) {
        if (sub->count("--rho")) throw DomainError("give either --rho or --model, not both");
        if (sub->count("--N") == 0) throw DomainError("--model needs --N");
        const ManifoldModel model = detail::build_model(o, *sub);
        in.d = model.dimension().value();
        in.rho = static_cast<double>(o.N) / volume(model);
        in.gap = spectral_gap(model);
      } else {
        if (sub->count("--rho") == 0) throw DomainError("give --rho or --model with --N");
        in.d = Dimension(o.d).value();
        in.rho = o.rho;
        in.gap = sub->count("--gap") ? o.gap : (in.d == 2 ? kKimSarnakGap : kDim3Gap);
      }
      if (!(in.rho >= 0.0) || !std::isfinite(in.rho)) throw DomainError("density must be nonnegative");
      if (sub->count("--R")) in.R = o.R;

      if (sweep->parsed()) {
        std::vector<SweepAxis> axes;
        for (const auto& s : o.axes) axes.push_back(parse_axis(s));
        const auto rep = run_sweep(in, V, std::move(axes), thread_cap(), opts);
        json j = to_json(rep);
        j["settings"] = settings_to_json(opts);
        detail::emit(o, o.format == "csv" ? sweep_csv(rep) : detail::dump(j), out);
        return kOk;
      }
      in.a = scattering_length(V, ScatteringParams(in.mu, Dimension(in.d)), opts).a;
      const auto rep = evaluate_bounds(in);
      json j = to_json(rep);
      j["inputs"]["potential"] = potential_to_json(V);
      j["settings"] = settings_to_json(opts);
      detail::emit(o, o.format == "csv" ? detail::flat_csv(j) : detail::dump(j), out);
      return kOk;
    }

    // verify
    OracleSettings set;
    if (verify->count("--tol")) {
      if (!(o.tol > 0.0)) throw DomainError("--tol must be positive");
      set.energy_rel_tol = o.tol;
    }
    const auto grid = default_oracle_grid();
    VerifyReport rep;
    rep.oracle_settings = set;
    rep.oracle.resize(grid.size());
    parallel_for(grid.size(), thread_cap(), [&](std::size_t i) { rep.oracle[i] = check_oracle_case(grid[i], set); });
    const auto cases = default_inequality_grid();
    rep.inequality.cases.resize(cases.size());
    parallel_for(cases.size(), thread_cap(), [&](std::size_t i) {
      auto one = inequality_report({cases[i]});
      rep.inequality.cases[i] = std::move(one.cases.front());
    });
    rep.inequality.passed = std::all_of(rep.inequality.cases.begin(), rep.inequality.cases.end(),
                                        [](const auto& c) { return c.passed; });
    rep.passed = rep.inequality.passed &&
                 std::all_of(rep.oracle.begin(), rep.oracle.end(), [](const auto& r) { return r.passed; });
    if (o.format == "csv") {
      std::string text = csv_line({"suite", "d", "a", "R", "check", "lhs", "rhs", "slack", "passed"});
      for (const auto& r : rep.oracle) {
        text += csv_line({"oracle", std::to_string(r.input.d), format_number(r.input.a), format_number(r.input.R),
                          "energy", format_number(r.energy_extrapolated), format_number(r.energy_closed_form),
                          format_number(r.rel_error), r.passed ? "true" : "false"});
      }
      for (const auto& c : rep.inequality.cases) {
        for (const auto& k : c.checks) {
          text += csv_line({"inequality", std::to_string(c.input.d), format_number(c.input.a),
                            format_number(c.input.R), k.name, format_number(k.lhs), format_number(k.rhs),
                            format_number(k.slack), k.passed ? "true" : "false"});
        }
      }
      detail::emit(o, text, out);
    } else {
      detail::emit(o, detail::dump(to_json(rep)), out);
    }
    return rep.passed ? kOk : kNotCertified;
  } catch (const RegimeError& e) {
    err << "hypgas: regime: " << e.what() << '\n';
    return kNotCertified;
  } catch (const DomainError& e) {
    err << "hypgas: " << e.what() << '\n';
    return kUsage;
  } catch (const json::exception& e) {
    err << "hypgas: malformed input: " << e.what() << '\n';
    return kUsage;
  } catch (const NumericError& e) {
    err << "hypgas: numerical failure: " << e.what() << '\n';
    return kNumeric;
  } catch (const std::exception& e) {
    err << "hypgas: internal error: " << e.what() << '\n';
    return kNumeric;
  }
}

}  // namespace hypgas::cli
