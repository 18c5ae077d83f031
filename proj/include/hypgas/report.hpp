#pragma once

#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "json.hpp"

#include "hypgas/bounds.hpp"
#include "hypgas/error.hpp"
#include "hypgas/manifolds.hpp"
#include "hypgas/oracles.hpp"
#include "hypgas/potential.hpp"
#include "hypgas/scattering.hpp"

// JSON schema for potentials, manifold models and every report type. Reports
// share one layout: inputs, derived, printed_variant, provenance, warnings.
namespace hypgas {

using json = nlohmann::json;

namespace detail {

inline json opt_to_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

inline std::optional<double> opt_from_json(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

inline json variants_to_json(const std::map<std::string, std::optional<double>>& m) {
  json out = json::object();
  for (const auto& [k, v] : m) out[k] = opt_to_json(v);
  return out;
}

inline std::map<std::string, std::optional<double>> variants_from_json(const json& j) {
  std::map<std::string, std::optional<double>> out;
  for (const auto& [k, v] : j.items()) out[k] = opt_from_json(v);
  return out;
}

}  // namespace detail

/// Shortest decimal text that round-trips to the same double.
[[nodiscard]] inline std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  if (res.ec != std::errc{}) throw NumericError("number formatting failed");
  return {buf, res.ptr};
}

// ---- potentials ----------------------------------------------------------

/// {"kind": "hardcore" | "piecewise" | "sampled", "r0": number, "pieces": [[r, v], ...]}
[[nodiscard]] inline json potential_to_json(const Potential& V) {
  json pieces = json::array();
  for (const auto& p : V.pieces()) pieces.push_back(json::array({p.radius, p.value}));
  return {{"kind", std::string(to_string(V.kind()))}, {"r0", V.support_radius()}, {"pieces", pieces}};
}

[[nodiscard]] inline Potential potential_from_json(const json& j) {
  if (!j.is_object()) throw DomainError("potential must be a JSON object");
  const auto kind = potential_kind_from_string(j.at("kind").get<std::string>());
  if (kind == PotentialKind::hardcore) return Potential::hardcore(j.at("r0").get<double>());
  std::vector<PotentialPiece> pieces;
  for (const auto& p : j.at("pieces")) {
    if (!p.is_array() || p.size() != 2) throw DomainError("potential pieces must be [radius, value] pairs");
    pieces.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  Potential V = Potential::from_pieces(kind, std::move(pieces));
  if (j.contains("r0") && j.at("r0").get<double>() != V.support_radius()) {
    throw DomainError("r0 must equal the last piece radius");
  }
  return V;
}

// ---- manifold models -----------------------------------------------------

[[nodiscard]] inline json model_to_json(const ManifoldModel& m) {
  json j{{"family", std::string(m.family_name())}, {"gap_policy", std::string(to_string(m.policy()))}};
  std::visit(
      [&j](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ModularSurface>) {
          j["L"] = f.L;
        } else if constexpr (std::is_same_v<T, CongruenceQuotient3>) {
          j["L"] = f.L;
          j["vol_x1"] = f.vol_x1;
          j["index"] = f.index;
        } else if constexpr (std::is_same_v<T, RandomSurface>) {
          j["g"] = f.g;
          j["alpha"] = f.alpha;
        } else {
          j["d"] = f.d;
          j["volume"] = f.volume;
          j["gap"] = f.gap;
        }
      },
      m.family());
  return j;
}

[[nodiscard]] inline ManifoldModel model_from_json(const json& j) {
  const auto family = j.at("family").get<std::string>();
  std::optional<GapPolicy> policy;
  if (j.contains("gap_policy")) policy = gap_policy_from_string(j.at("gap_policy").get<std::string>());
  if (family == "modular") return ManifoldModel(ModularSurface{j.at("L").get<long>()}, policy);
  if (family == "congruence3") {
    return ManifoldModel(
        CongruenceQuotient3{j.at("L").get<long>(), j.at("vol_x1").get<double>(), j.at("index").get<long>()}, policy);
  }
  if (family == "random") return ManifoldModel(RandomSurface{j.at("g").get<long>(), j.at("alpha").get<double>()}, policy);
  if (family == "custom") {
    return ManifoldModel(
        CustomManifold{j.at("d").get<int>(), j.at("volume").get<double>(), j.at("gap").get<double>()}, policy);
  }
  throw DomainError("unknown manifold family '" + family + "'");
}

// ---- solver settings -----------------------------------------------------

[[nodiscard]] inline json settings_to_json(const SolverOptions& o) {
  return {{"abs_tol", o.abs_tol}, {"rel_tol", o.rel_tol}, {"start_radius", o.start_radius}, {"min_cells", o.min_cells}};
}

[[nodiscard]] inline SolverOptions settings_from_json(const json& j) {
  return {j.at("abs_tol").get<double>(), j.at("rel_tol").get<double>(), j.at("start_radius").get<double>(),
          j.at("min_cells").get<int>()};
}

// ---- scatter -------------------------------------------------------------

struct ScatterReport {
  Potential potential;
  int d = 2;
  double mu = 1.0;
  double R = 0.0;
  int profile_points = 0;
  SolverOptions settings{};

  double a = 0.0;
  /// Exterior solution alpha + beta F_d, normalised so that f(R) = 1.
  double alpha = 0.0;
  double beta = 0.0;
  double c_d = 0.0;
  double energy = 0.0;
  std::vector<double> profile_r{};
  std::vector<double> profile_f{};
  std::map<std::string, std::optional<double>> printed_variant{};
  std::map<std::string, std::string> provenance{};
  std::vector<std::string> warnings{};

  friend bool operator==(const ScatterReport&, const ScatterReport&) = default;
};

/// Scattering length, C_d, E_R and f_R sampled at @p profile_points equispaced radii on [0, R].
[[nodiscard]] inline ScatterReport make_scatter_report(const Potential& V, Dimension d, double mu,
                                                       std::optional<double> R, int profile_points,
                                                       const SolverOptions& opts = {}) {
  if (profile_points < 2) throw DomainError("profile needs at least two points");
  const ScatteringParams params(mu, d);
  ScatterReport rep{.potential = V, .d = d.value(), .mu = mu, .profile_points = profile_points, .settings = opts};
  const double R0 = V.support_radius();
  double radius = 0.0;
  if (R) {
    radius = *R;
  } else {
    radius = std::max(R0, scattering_length(V, params, opts).a + 1.0);
  }
  const auto sol = scattering_length(V, params, opts, radius);
  rep.R = radius;
  rep.a = sol.a;
  rep.alpha = sol.alpha;
  rep.beta = sol.beta;
  rep.c_d = sol.c_d;
  rep.energy = scattering_energy(d, sol.a, mu, radius);
  for (int i = 0; i < profile_points; ++i) {
    const double r = radius * static_cast<double>(i) / static_cast<double>(profile_points - 1);
    rep.profile_r.push_back(r);
    rep.profile_f.push_back(sol.profile(r));
  }
  if (!d.is2()) {
    rep.printed_variant["E_R_with_a"] =
        sol.a > 0.0 ? std::optional<double>(scattering_energy_printed_d3(sol.a, mu, radius)) : std::nullopt;
  }
  rep.provenance = {
      {"a", "root of the exterior harmonic solution alpha + beta F_d"},
      {"c_d", d.is2() ? "1" : "tanh a"},
      {"energy", d.is2() ? "2 pi mu / ln(tanh(R/2) / tanh(a/2))" : "4 pi mu tanh a / (1 - tanh a / tanh R)"},
      {"profile", "zero-energy solution normalised to f(R) = 1"},
  };
  if (V.is_zero()) rep.warnings.push_back("potential vanishes identically: a = 0 and E_R = 0");
  if (!R) rep.warnings.push_back("R defaulted to max(R0, a + 1)");
  return rep;
}

[[nodiscard]] inline json to_json(const ScatterReport& r) {
  return {
      {"inputs",
       {{"potential", potential_to_json(r.potential)},
        {"d", r.d},
        {"mu", r.mu},
        {"R", r.R},
        {"profile_points", r.profile_points}}},
      {"derived",
       {{"a", r.a},
        {"alpha", r.alpha},
        {"beta", r.beta},
        {"c_d", r.c_d},
        {"energy", r.energy},
        {"profile", {{"r", r.profile_r}, {"f", r.profile_f}}}}},
      {"printed_variant", detail::variants_to_json(r.printed_variant)},
      {"provenance", r.provenance},
      {"settings", settings_to_json(r.settings)},
      {"warnings", r.warnings},
  };
}

[[nodiscard]] inline ScatterReport scatter_report_from_json(const json& j) {
  const auto& in = j.at("inputs");
  const auto& dv = j.at("derived");
  ScatterReport r{.potential = potential_from_json(in.at("potential"))};
  r.d = in.at("d").get<int>();
  r.mu = in.at("mu").get<double>();
  r.R = in.at("R").get<double>();
  r.profile_points = in.at("profile_points").get<int>();
  r.settings = settings_from_json(j.at("settings"));
  r.a = dv.at("a").get<double>();
  r.alpha = dv.at("alpha").get<double>();
  r.beta = dv.at("beta").get<double>();
  r.c_d = dv.at("c_d").get<double>();
  r.energy = dv.at("energy").get<double>();
  r.profile_r = dv.at("profile").at("r").get<std::vector<double>>();
  r.profile_f = dv.at("profile").at("f").get<std::vector<double>>();
  r.printed_variant = detail::variants_from_json(j.at("printed_variant"));
  r.provenance = j.at("provenance").get<std::map<std::string, std::string>>();
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  return r;
}

// ---- bounds --------------------------------------------------------------

[[nodiscard]] inline json to_json(const BoundReport& r) {
  const auto& in = r.inputs;
  return {
      {"inputs",
       {{"d", in.d},
        {"rho", in.rho},
        {"mu", in.mu},
        {"eps", in.eps},
        {"gap", in.gap},
        {"a", in.a},
        {"R0", in.R0},
        {"R", detail::opt_to_json(in.R)}}},
      {"derived",
       {{"Y", r.Y},
        {"y0", r.y0},
        {"y_cap", r.y_cap},
        {"R_used", r.R_used},
        {"proviso_value", r.proviso_value},
        {"y_threshold_ok", r.y_threshold_ok},
        {"proviso_ok", r.proviso_ok},
        {"energy_upper_per_particle", detail::opt_to_json(r.energy_upper_per_particle)},
        {"explicit_energy_upper", detail::opt_to_json(r.explicit_energy_upper)},
        {"fraction_lower", detail::opt_to_json(r.fraction_lower)}}},
      {"printed_variant", detail::variants_to_json(r.printed_variant)},
      {"provenance", r.provenance},
      {"warnings", r.warnings},
  };
}

[[nodiscard]] inline BoundReport bound_report_from_json(const json& j) {
  const auto& in = j.at("inputs");
  const auto& dv = j.at("derived");
  BoundReport r;
  r.inputs.d = in.at("d").get<int>();
  r.inputs.rho = in.at("rho").get<double>();
  r.inputs.mu = in.at("mu").get<double>();
  r.inputs.eps = in.at("eps").get<double>();
  r.inputs.gap = in.at("gap").get<double>();
  r.inputs.a = in.at("a").get<double>();
  r.inputs.R0 = in.at("R0").get<double>();
  r.inputs.R = detail::opt_from_json(in.at("R"));
  r.Y = dv.at("Y").get<double>();
  r.y0 = dv.at("y0").get<double>();
  r.y_cap = dv.at("y_cap").get<double>();
  r.R_used = dv.at("R_used").get<double>();
  r.proviso_value = dv.at("proviso_value").get<double>();
  r.y_threshold_ok = dv.at("y_threshold_ok").get<bool>();
  r.proviso_ok = dv.at("proviso_ok").get<bool>();
  r.energy_upper_per_particle = detail::opt_from_json(dv.at("energy_upper_per_particle"));
  r.explicit_energy_upper = detail::opt_from_json(dv.at("explicit_energy_upper"));
  r.fraction_lower = detail::opt_from_json(dv.at("fraction_lower"));
  r.printed_variant = detail::variants_from_json(j.at("printed_variant"));
  r.provenance = j.at("provenance").get<std::map<std::string, std::string>>();
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  return r;
}

/// Column order of bound rows in CSV output.
inline const std::vector<std::string>& bound_csv_columns() {
  static const std::vector<std::string> cols{
      "d",      "rho",           "mu",           "eps",        "gap",
      "a",      "R0",            "R_used",       "Y",          "y0",
      "y_cap",  "proviso_value", "y_threshold_ok", "proviso_ok", "energy_upper_per_particle",
      "explicit_energy_upper",   "fraction_lower"};
  return cols;
}

[[nodiscard]] inline std::vector<std::string> bound_csv_row(const BoundReport& r) {
  auto num = [](double x) { return format_number(x); };
  auto opt = [](const std::optional<double>& x) { return x ? format_number(*x) : std::string(); };
  auto flag = [](bool b) { return std::string(b ? "true" : "false"); };
  const auto& in = r.inputs;
  return {std::to_string(in.d), num(in.rho),           num(in.mu),         num(in.eps),
          num(in.gap),          num(in.a),             num(in.R0),         num(r.R_used),
          num(r.Y),             num(r.y0),             num(r.y_cap),       num(r.proviso_value),
          flag(r.y_threshold_ok), flag(r.proviso_ok), opt(r.energy_upper_per_particle),
          opt(r.explicit_energy_upper), opt(r.fraction_lower)};
}

// ---- certificates --------------------------------------------------------

[[nodiscard]] inline json to_json(const CondensateCertificate& c) {
  json warnings = json::array();
  if (c.failure_reason) warnings.push_back(*c.failure_reason);
  return {
      {"inputs",
       {{"model", model_to_json(c.model)},
        {"N", c.N},
        {"potential", potential_to_json(c.potential)},
        {"mu", c.mu},
        {"eps", c.eps}}},
      {"derived",
       {{"volume", c.volume},
        {"rho", c.rho},
        {"a", c.a},
        {"R0", c.R0},
        {"Y", c.Y},
        {"gap", c.gap},
        {"y0", c.y0},
        {"y_cap", c.y_cap},
        {"y_threshold_ok", c.y_threshold_ok},
        {"corollary_condition_met", c.corollary_condition_met},
        {"energy_upper", detail::opt_to_json(c.energy_upper)},
        {"fraction_lower", c.fraction_lower},
        {"direct_route_certified", c.direct_route_certified},
        {"certified", c.certified},
        {"failure_reason", c.failure_reason ? json(*c.failure_reason) : json(nullptr)}}},
      {"printed_variant", detail::variants_to_json(c.printed_variant)},
      {"provenance", c.provenance},
      {"warnings", warnings},
  };
}

[[nodiscard]] inline CondensateCertificate certificate_from_json(const json& j) {
  const auto& in = j.at("inputs");
  const auto& dv = j.at("derived");
  CondensateCertificate c{.model = model_from_json(in.at("model")),
                          .N = in.at("N").get<long>(),
                          .potential = potential_from_json(in.at("potential")),
                          .mu = in.at("mu").get<double>(),
                          .eps = in.at("eps").get<double>()};
  c.volume = dv.at("volume").get<double>();
  c.rho = dv.at("rho").get<double>();
  c.a = dv.at("a").get<double>();
  c.R0 = dv.at("R0").get<double>();
  c.Y = dv.at("Y").get<double>();
  c.gap = dv.at("gap").get<double>();
  c.y0 = dv.at("y0").get<double>();
  c.y_cap = dv.at("y_cap").get<double>();
  c.y_threshold_ok = dv.at("y_threshold_ok").get<bool>();
  c.corollary_condition_met = dv.at("corollary_condition_met").get<bool>();
  c.energy_upper = detail::opt_from_json(dv.at("energy_upper"));
  c.fraction_lower = dv.at("fraction_lower").get<double>();
  c.direct_route_certified = dv.at("direct_route_certified").get<bool>();
  c.certified = dv.at("certified").get<bool>();
  if (!dv.at("failure_reason").is_null()) c.failure_reason = dv.at("failure_reason").get<std::string>();
  c.printed_variant = detail::variants_from_json(j.at("printed_variant"));
  c.provenance = j.at("provenance").get<std::map<std::string, std::string>>();
  return c;
}

// ---- verification --------------------------------------------------------

struct VerifyReport {
  OracleSettings oracle_settings{};
  std::vector<OracleEnergyResult> oracle{};
  InequalityReport inequality{};
  bool passed = false;

  friend bool operator==(const VerifyReport&, const VerifyReport&) = default;
};

[[nodiscard]] inline json to_json(const VerifyReport& v) {
  json oracle = json::array();
  for (const auto& o : v.oracle) {
    oracle.push_back({{"inputs", {{"d", o.input.d}, {"a", o.input.a}, {"R", o.input.R}, {"mu", o.input.mu}}},
                      {"h", o.h},
                      {"energy_extrapolated", o.energy_extrapolated},
                      {"energy_closed_form", o.energy_closed_form},
                      {"rel_error", o.rel_error},
                      {"order", detail::opt_to_json(o.order)},
                      {"profile_h", o.profile_h},
                      {"profile_deviation", o.profile_deviation},
                      {"passed", o.passed}});
  }
  json cases = json::array();
  for (const auto& c : v.inequality.cases) {
    json checks = json::array();
    for (const auto& k : c.checks) {
      checks.push_back({{"name", k.name},
                        {"lhs", k.lhs},
                        {"rhs", k.rhs},
                        {"slack", k.slack},
                        {"passed", k.passed},
                        {"informational", k.informational}});
    }
    const auto& in = c.input;
    cases.push_back(
        {{"inputs",
          {{"d", in.d}, {"a", in.a}, {"R", in.R}, {"rho", in.rho}, {"mu", in.mu}, {"R0", in.R0}}},
         {"skipped", c.skipped},
         {"reason", c.reason},
         {"checks", checks},
         {"passed", c.passed}});
  }
  const auto& s = v.oracle_settings;
  json warnings = json::array();
  for (const auto& c : v.inequality.cases) {
    if (c.skipped) warnings.push_back("inequality case skipped: " + c.reason);
  }
  return {
      {"inputs",
       {{"oracle_settings",
         {{"h", s.h},
          {"profile_h", s.profile_h},
          {"energy_rel_tol", s.energy_rel_tol},
          {"profile_tol", s.profile_tol},
          {"min_order", s.min_order}}}}},
      {"derived", {{"oracle", oracle}, {"inequality", {{"cases", cases}, {"passed", v.inequality.passed}}}}},
      {"passed", v.passed},
      {"provenance",
       {{"oracle", "P1 finite elements with midpoint weights, three grids, Richardson p = 2"},
        {"inequality", "Simpson quadrature of I and K for the hard-core minimiser of radius a"}}},
      {"warnings", warnings},
  };
}

[[nodiscard]] inline VerifyReport verify_report_from_json(const json& j) {
  VerifyReport v;
  const auto& s = j.at("inputs").at("oracle_settings");
  v.oracle_settings = {s.at("h").get<double>(), s.at("profile_h").get<double>(), s.at("energy_rel_tol").get<double>(),
                       s.at("profile_tol").get<double>(), s.at("min_order").get<double>()};
  for (const auto& o : j.at("derived").at("oracle")) {
    const auto& in = o.at("inputs");
    OracleEnergyResult r;
    r.input = {in.at("d").get<int>(), in.at("a").get<double>(), in.at("R").get<double>(), in.at("mu").get<double>()};
    r.h = o.at("h").get<double>();
    r.energy_extrapolated = o.at("energy_extrapolated").get<double>();
    r.energy_closed_form = o.at("energy_closed_form").get<double>();
    r.rel_error = o.at("rel_error").get<double>();
    r.order = detail::opt_from_json(o.at("order"));
    r.profile_h = o.at("profile_h").get<double>();
    r.profile_deviation = o.at("profile_deviation").get<double>();
    r.passed = o.at("passed").get<bool>();
    v.oracle.push_back(r);
  }
  const auto& iq = j.at("derived").at("inequality");
  for (const auto& c : iq.at("cases")) {
    const auto& in = c.at("inputs");
    InequalityCaseResult r;
    r.input = {in.at("d").get<int>(),    in.at("a").get<double>(),  in.at("R").get<double>(),
               in.at("rho").get<double>(), in.at("mu").get<double>(), in.at("R0").get<double>()};
    r.skipped = c.at("skipped").get<bool>();
    r.reason = c.at("reason").get<std::string>();
    for (const auto& k : c.at("checks")) {
      r.checks.push_back({k.at("name").get<std::string>(), k.at("lhs").get<double>(), k.at("rhs").get<double>(),
                          k.at("slack").get<double>(), k.at("passed").get<bool>(),
                          k.at("informational").get<bool>()});
    }
    r.passed = c.at("passed").get<bool>();
    v.inequality.cases.push_back(std::move(r));
  }
  v.inequality.passed = iq.at("passed").get<bool>();
  v.passed = j.at("passed").get<bool>();
  return v;
}

}  // namespace hypgas
