#include <algorithm>
#include <cmath>
#include <numbers>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "catch_amalgamated.hpp"

#include "hypgas/cli.hpp"

using namespace hypgas;
namespace fs = std::filesystem;

namespace {

const std::string kData = HYPGAS_DATA_DIR;
const std::string kHard05 = kData + "/potentials/hardcore_0.5.json";
const std::string kHard001 = kData + "/potentials/hardcore_0.01.json";
const std::string kZero = kData + "/potentials/zero.json";
const std::string kStep = kData + "/potentials/step_4_on_1.json";

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"hypgas"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Same shape, same strings and flags, numbers within a relative tolerance.
bool json_close(const json& a, const json& b, double tol) {
  if (a.is_number() && b.is_number()) {
    const double x = a.get<double>();
    const double y = b.get<double>();
    return std::abs(x - y) <= tol * std::max(std::abs(x), std::abs(y)) + 1e-14;
  }
  if (a.type() != b.type()) return false;
  if (a.is_object()) {
    if (a.size() != b.size()) return false;
    for (const auto& [k, v] : a.items()) {
      if (!b.contains(k) || !json_close(v, b.at(k), tol)) return false;
    }
    return true;
  }
  if (a.is_array()) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!json_close(a[i], b[i], tol)) return false;
    }
    return true;
  }
  return a == b;
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("scatter on a hard core reports a = R0") {
  const auto r = run_cli({"scatter", "--potential", kHard05, "--d", "2"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(std::abs(j["derived"]["a"].get<double>() - 0.5) <= 1e-8);
  CHECK(j["derived"]["c_d"].get<double>() == 1.0);
  CHECK(j.contains("settings"));
  CHECK(j.contains("provenance"));
  CHECK(j.contains("warnings"));
  CHECK(j["derived"]["profile"]["r"].size() == 65);

  const auto csv = run_cli({"scatter", "--potential", kHard05, "--d", "3", "--format", "csv", "--profile-points", "11"});
  REQUIRE(csv.code == 0);
  CHECK(count_lines(csv.out) == 12);
  CHECK(csv.out.rfind("r,f\n", 0) == 0);
}

TEST_CASE("bound on a vanishing potential") {
  const auto r = run_cli({"bound", "--potential", kZero, "--rho", "0.01"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["derived"]["Y"].get<double>() == 0.0);
  CHECK(j["derived"]["energy_upper_per_particle"].get<double>() == 0.0);
  CHECK(j["derived"]["fraction_lower"].get<double>() == 1.0);
}

TEST_CASE("bound derives density and gap from a model") {
  const auto r = run_cli({"bound", "--potential", kHard001, "--model", "modular", "--L", "50", "--N", "200"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(std::abs(j["inputs"]["rho"].get<double>() - 200.0 / (30000.0 * std::numbers::pi)) < 1e-15);
  CHECK(j["inputs"]["gap"].get<double>() == 975.0 / 4096.0);
  CHECK(run_cli({"bound", "--potential", kHard001, "--model", "modular", "--L", "50"}).code == 2);
  CHECK(run_cli({"bound", "--potential", kHard001, "--model", "modular", "--L", "50", "--N", "9", "--rho", "1"}).code ==
        2);
}

TEST_CASE("certify: golden case certifies, crowded case does not") {
  const auto ok = run_cli({"certify", "--model", "modular", "--L", "50", "--N", "200", "--potential", kHard001});
  REQUIRE(ok.code == 0);
  const auto j = json::parse(ok.out);
  CHECK(j["derived"]["certified"].get<bool>());
  CHECK(j["derived"]["fraction_lower"].get<double>() >= 0.9);

  const auto no = run_cli({"certify", "--model", "modular", "--L", "50", "--N", "5000", "--potential", kHard001});
  CHECK(no.code == 1);
  CHECK_FALSE(json::parse(no.out)["derived"]["certified"].get<bool>());

  CHECK(run_cli({"certify", "--model", "random", "--g", "1000", "--alpha", "0.05", "--N", "2", "--potential", kHard001})
            .code == 0);
  CHECK(run_cli({"certify", "--model", "congruence3", "--L", "2", "--vol-x1", "3", "--index", "24", "--N", "2",
             "--potential", kHard001})
            .code == 0);
  CHECK(run_cli({"certify", "--model", "custom", "--d", "3", "--volume", "1e6", "--gap", "0.5", "--N", "100",
             "--potential", kHard001})
            .code == 0);
  CHECK(run_cli({"certify", "--model", "congruence3", "--L", "2", "--N", "2", "--potential", kHard001}).code == 2);
  CHECK(run_cli({"certify", "--model", "random", "--g", "3", "--alpha", "0.1875", "--N", "10", "--potential", kHard001})
            .code == 2);
}

TEST_CASE("exit codes for malformed input") {
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"scatter"}).code == 2);
  CHECK(run_cli({"scatter", "--potential", kData + "/potentials/missing.json"}).code == 2);
  CHECK(run_cli({"scatter", "--potential", kHard05, "--d", "4"}).code == 2);
  CHECK(run_cli({"scatter", "--potential", kHard05, "--format", "xml"}).code == 2);
  CHECK(run_cli({"scatter", "--potential", kHard05, "--R", "0.5"}).code == 2);
  CHECK(run_cli({"sweep", "--potential", kHard05, "--rho", "1e-3", "--axis", "temperature:1:2:3"}).code == 2);
  CHECK(run_cli({"sweep", "--potential", kHard05, "--rho", "1e-3", "--axis", "rho:0:1:3:log"}).code == 2);
  CHECK(run_cli({"sweep", "--potential", kHard05, "--rho", "1e-3", "--axis", "rho:1:2"}).code == 2);
  CHECK(run_cli({"bound", "--potential", kHard05, "--rho", "1e-3", "--tol", "-1"}).code == 2);

  const auto dir = fs::temp_directory_path() / "hypgas_cli_test";
  fs::create_directories(dir);
  const auto broken = (dir / "broken.json").string();
  std::ofstream(broken) << R"({"kind": "piecewise", "pieces": [[1.0, 2.0])";
  CHECK(run_cli({"scatter", "--potential", broken}).code == 2);
  const auto negative = (dir / "negative.json").string();
  std::ofstream(negative) << R"({"kind": "piecewise", "r0": 1.0, "pieces": [[1.0, -2.0]]})";
  CHECK(run_cli({"scatter", "--potential", negative}).code == 2);
  CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("exit code 3 on numerical breakdown") {
  // exp(sqrt(V/2) r) overflows inside a single grid cell.
  const auto dir = fs::temp_directory_path() / "hypgas_cli_test";
  fs::create_directories(dir);
  const auto stiff = (dir / "stiff.json").string();
  std::ofstream(stiff) << R"({"kind": "piecewise", "r0": 1.0, "pieces": [[1.0, 1e300]]})";
  const auto r = run_cli({"scatter", "--potential", stiff, "--d", "3"});
  CHECK(r.code == 3);
  CHECK(r.err.find("numerical") != std::string::npos);
}

TEST_CASE("sweep rows: count, order, determinism across thread counts") {
  const std::vector<std::string> args{"sweep",  "--potential", kStep, "--rho", "1e-4", "--d", "3",
                                      "--axis", "rho:1e-5:1e-3:4:log", "--axis", "mu:0.5:2:3", "--format", "csv"};
  ::setenv("HYPGAS_THREADS", "1", 1);
  const auto one = run_cli(args);
  ::setenv("HYPGAS_THREADS", "4", 1);
  const auto four = run_cli(args);
  ::unsetenv("HYPGAS_THREADS");
  REQUIRE(one.code == 0);
  CHECK(one.out == four.out);
  CHECK(count_lines(one.out) == 1 + 4 * 3);

  std::istringstream lines(one.out);
  std::string header;
  std::getline(lines, header);
  CHECK(header.rfind("d,rho,mu,eps,gap,a,R0", 0) == 0);
  std::vector<std::pair<double, double>> keys;
  for (std::string row; std::getline(lines, row);) {
    std::istringstream cells(row);
    std::string d, rho, mu;
    std::getline(cells, d, ',');
    std::getline(cells, rho, ',');
    std::getline(cells, mu, ',');
    keys.emplace_back(std::stod(rho), std::stod(mu));
  }
  CHECK(std::is_sorted(keys.begin(), keys.end()));
  CHECK(keys.front().first == 1e-5);
  CHECK(keys.back().first == 1e-3);

  const auto js = run_cli({"sweep", "--potential", kStep, "--rho", "1e-4", "--axis", "eps:0.01:1:5:log"});
  REQUIRE(js.code == 0);
  auto j = json::parse(js.out);
  CHECK(j["rows"].size() == 5);
  CHECK(j["axes"][0]["log"].get<bool>());
  j.erase("settings");
  CHECK(cli::to_json(cli::sweep_report_from_json(j)) == j);
}

TEST_CASE("golden reports: typed round trip and reproduction") {
  struct Golden {
    std::string file;
    std::vector<std::string> args;
  };
  const std::vector<Golden> cases{
      {"scatter_hardcore_d2.json", {"scatter", "--potential", kHard05, "--d", "2", "--profile-points", "9"}},
      {"scatter_step_d3.json", {"scatter", "--potential", kStep, "--d", "3", "--R", "3", "--profile-points", "9"}},
      {"bound_zero.json", {"bound", "--potential", kZero, "--rho", "0.01"}},
      {"certify_modular_L50.json",
       {"certify", "--model", "modular", "--L", "50", "--N", "200", "--potential", kHard001}},
  };
  for (const auto& g : cases) {
    INFO(g.file);
    const json golden = json::parse(slurp(kData + "/golden/" + g.file));
    const auto r = run_cli(g.args);
    REQUIRE(r.code == 0);
    CHECK(json_close(json::parse(r.out), golden, 1e-9));

    json core = golden;
    json typed;
    if (g.file.rfind("scatter", 0) == 0) {
      typed = to_json(scatter_report_from_json(golden));
    } else if (g.file.rfind("bound", 0) == 0) {
      core.erase("settings");
      core["inputs"].erase("potential");
      typed = to_json(bound_report_from_json(core));
    } else {
      core.erase("settings");
      typed = to_json(certificate_from_json(core));
    }
    CHECK(typed == core);
  }

  const auto csv = run_cli({"sweep", "--potential", kHard001, "--rho", "1e-4", "--axis", "rho:1e-4:1e-2:3:log", "--axis",
                        "eps:0.05:0.2:2", "--format", "csv"});
  REQUIRE(csv.code == 0);
  const std::string golden_csv = slurp(kData + "/golden/sweep_rho_eps.csv");
  CHECK(count_lines(golden_csv) == 7);
  std::istringstream a(csv.out);
  std::istringstream b(golden_csv);
  for (std::string x, y; std::getline(a, x) && std::getline(b, y);) {
    std::istringstream xs(x);
    std::istringstream ys(y);
    for (std::string u, v; std::getline(xs, u, ',') && std::getline(ys, v, ',');) {
      char* end = nullptr;
      const double du = std::strtod(u.c_str(), &end);
      if (end == u.c_str() || *end != '\0') {
        CHECK(u == v);
      } else {
        const double dv = std::stod(v);
        CHECK(std::abs(du - dv) <= 1e-9 * std::max(std::abs(du), std::abs(dv)) + 1e-14);
      }
    }
  }
}

TEST_CASE("reruns are byte identical and --out writes the same bytes") {
  const std::vector<std::string> args{"certify", "--model", "modular", "--L", "50", "--N", "200", "--potential", kHard001};
  const auto first = run_cli(args);
  const auto second = run_cli(args);
  CHECK(first.out == second.out);

  const auto path = (fs::temp_directory_path() / "hypgas_cli_test_out.json").string();
  fs::remove(path);
  auto with_out = args;
  with_out.insert(with_out.end(), {"--out", path});
  const auto r = run_cli(with_out);
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  CHECK(slurp(path) == first.out);
  CHECK(first.out.back() == '\n');
}

TEST_CASE("verify passes and is thread-count independent") {
  ::setenv("HYPGAS_THREADS", "1", 1);
  const auto one = run_cli({"verify"});
  ::setenv("HYPGAS_THREADS", "8", 1);
  const auto many = run_cli({"verify"});
  ::unsetenv("HYPGAS_THREADS");
  REQUIRE(one.code == 0);
  CHECK(one.out == many.out);
  const auto j = json::parse(one.out);
  CHECK(j["passed"].get<bool>());
  CHECK(verify_report_from_json(j) == verify_report_from_json(json::parse(many.out)));
  CHECK(run_cli({"verify", "--format", "csv"}).code == 0);
}
