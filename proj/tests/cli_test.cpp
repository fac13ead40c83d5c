#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>
#include <sys/wait.h>

using nlohmann::json;

namespace {

struct CliResult {
  int exit_code;
  std::string out;
};

CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(KRC_CLI_PATH) + " " + args +
                          " 2>/dev/null";
  std::array<char, 4096> buf{};
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (std::size_t got = std::fread(buf.data(), 1, buf.size(), pipe)) {
    out.append(buf.data(), got);
  }
  const int status = pclose(pipe);
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return CliResult{code, out};
}

std::filesystem::path write_temp(const std::string& name,
                                 const std::string& body) {
  const auto dir = std::filesystem::temp_directory_path() / "krc_cli_tests";
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream(path) << body;
  return path;
}

const char* kTvProblem = R"({
  "version": 1,
  "space": {"labels": ["0", "1"], "metric": "discrete"},
  "measures": {"mu": [0.7, 0.3], "nu": [0.4, 0.6]}
})";

const char* kUntightProblem = R"({
  "space": {"labels": ["a", "b", "c"],
            "cost": [[0, 1, 5], [1, 0, 1], [5, 1, 0]]},
  "measures": {"mu": [1.0, 0.0, 0.0], "nu": [0.0, 0.0, 1.0]}
})";

const char* kJointProblem = R"({
  "space": {"labels": ["0", "1"], "metric": "discrete"},
  "joint": {"omega_labels": ["a", "b"], "table": [[0.3, 0.2], [0.1, 0.4]]}
})";

const char* kDiagonalProblem = R"({
  "space": {"labels": ["0", "1"], "metric": "discrete"},
  "joint": {"omega_labels": ["a", "b"], "table": [[0.5, 0.0], [0.0, 0.5]]}
})";

const char* kChainProblem = R"({
  "space": {"labels": ["0", "1"], "metric": "discrete"},
  "chain": {"transition": [[0.75, 0.25], [0.25, 0.75]], "init": [0.5, 0.5]}
})";

}  // namespace

TEST_CASE("validate accepts a metric file and reports tightness") {
  const auto file = write_temp("tv.json", kTvProblem);
  const auto r = run_cli("validate " + file.string() + " --json");
  CHECK(r.exit_code == 0);
  const json report = json::parse(r.out);
  CHECK(report["results"]["cost"]["tight"] == true);
}

TEST_CASE("validate flags the triangle violation with exit 1") {
  const auto file = write_temp("untight.json", kUntightProblem);
  const auto r = run_cli("validate " + file.string() + " --json");
  CHECK(r.exit_code == 1);
  const json report = json::parse(r.out);
  CHECK(report["results"]["cost"]["tight"] == false);
  CHECK(report["results"]["cost"]["gap"] == 3.0);
}

TEST_CASE("malformed JSON exits 2") {
  const auto file = write_temp("broken.json", "{\"space\": [");
  const auto r = run_cli("validate " + file.string());
  CHECK(r.exit_code == 2);
  const auto missing = run_cli("validate /nonexistent/problem.json");
  CHECK(missing.exit_code == 2);
}

TEST_CASE("ot solves the two-point instance") {
  const auto file = write_temp("tv.json", kTvProblem);
  const auto r = run_cli("ot " + file.string() + " --mu mu --nu nu --json");
  CHECK(r.exit_code == 0);
  const json report = json::parse(r.out);
  CHECK(std::abs(report["results"]["value"].get<double>() - 0.3) <= 1e-12);
  CHECK(std::abs(report["certificates"]["duality_gap"].get<double>()) <=
        1e-9);
  CHECK(report["certificates"]["potential_is_lipschitz"] == true);
}

TEST_CASE("ot of a measure with itself is free") {
  const auto file = write_temp("tv.json", kTvProblem);
  const auto r = run_cli("ot " + file.string() + " --mu mu --nu mu --json");
  CHECK(r.exit_code == 0);
  const json report = json::parse(r.out);
  CHECK(report["results"]["value"].get<double>() == 0.0);
}

TEST_CASE("unknown measures exit 2") {
  const auto file = write_temp("tv.json", kTvProblem);
  const auto r = run_cli("ot " + file.string() + " --mu mu --nu ghost");
  CHECK(r.exit_code == 2);
}

TEST_CASE("untight cost without --closure exits 1, with --closure solves") {
  const auto file = write_temp("untight.json", kUntightProblem);
  const auto refused = run_cli("ot " + file.string() + " --mu mu --nu nu");
  CHECK(refused.exit_code == 1);
  const auto closed =
      run_cli("ot " + file.string() + " --mu mu --nu nu --closure --json");
  CHECK(closed.exit_code == 0);
  const json report = json::parse(closed.out);
  CHECK(std::abs(report["results"]["value"].get<double>() - 2.0) <= 1e-9);
}

TEST_CASE("tau reports the frozen coefficients") {
  const auto file = write_temp("joint.json", kJointProblem);
  const auto r = run_cli("tau " + file.string() + " --beta --json");
  CHECK(r.exit_code == 0);
  const json report = json::parse(r.out);
  CHECK(std::abs(report["results"]["tau_c"].get<double>() - 0.2) <= 1e-12);
  CHECK(std::abs(report["results"]["beta"].get<double>() - 0.2) <= 1e-12);
  CHECK(report["certificates"]["primal_dual_difference"].get<double>() <=
        1e-9);
}

TEST_CASE("tau of a product joint is zero") {
  const char* product = R"({
    "space": {"labels": ["0", "1"], "metric": "discrete"},
    "joint": {"omega_labels": ["a", "b"], "table": [[0.2, 0.3], [0.2, 0.3]]}
  })";
  const auto file = write_temp("tau_product.json", product);
  const auto r = run_cli("tau " + file.string() + " --beta --json");
  CHECK(r.exit_code == 0);
  const json report = json::parse(r.out);
  CHECK(report["results"]["tau_c"].get<double>() <= 1e-12);
  CHECK(report["results"]["beta"].get<double>() <= 1e-12);
}

TEST_CASE("tau bound report holds") {
  const auto file = write_temp("diag.json", kDiagonalProblem);
  const auto r =
      run_cli("tau " + file.string() + " --beta --bound 0 --bound-min --json");
  CHECK(r.exit_code == 0);
  const json report = json::parse(r.out);
  CHECK(std::abs(report["results"]["tau_c"].get<double>() - 0.5) <= 1e-12);
  CHECK(report["results"]["bound"]["holds"] == true);
  CHECK(std::abs(report["results"]["bound"]["value"].get<double>() - 1.0) <=
        1e-12);
  CHECK(report["results"]["bound_min"]["holds"] == true);
}

TEST_CASE("reconstruct certifies the coupling and samples reproducibly") {
  const auto file = write_temp("diag.json", kDiagonalProblem);
  const auto csv_a =
      std::filesystem::temp_directory_path() / "krc_cli_tests" / "a.csv";
  const auto csv_b =
      std::filesystem::temp_directory_path() / "krc_cli_tests" / "b.csv";
  const std::string base = "reconstruct " + file.string() +
                           " --sample 2000 --seed 42 --json --csv ";
  const auto ra = run_cli(base + csv_a.string());
  CHECK(ra.exit_code == 0);
  const json report = json::parse(ra.out);
  CHECK(std::abs(report["results"]["expected_cost"].get<double>() - 0.5) <=
        1e-12);
  CHECK(report["certificates"]["independence_deviation"].get<double>() <=
        1e-9);
  CHECK(report["certificates"]["margin_recovery"].get<double>() <= 1e-9);

  const auto rb = run_cli(base + csv_b.string());
  CHECK(rb.exit_code == 0);
  std::ifstream fa(csv_a), fb(csv_b);
  const std::string bytes_a((std::istreambuf_iterator<char>(fa)),
                            std::istreambuf_iterator<char>());
  const std::string bytes_b((std::istreambuf_iterator<char>(fb)),
                            std::istreambuf_iterator<char>());
  CHECK(bytes_a == bytes_b);
  CHECK(bytes_a.substr(0, 30) == "omega_label,x_label,y_label,u\n");
}

TEST_CASE("product joint reconstructs at zero cost") {
  const char* product = R"({
    "space": {"labels": ["0", "1"], "metric": "discrete"},
    "joint": {"omega_labels": ["a", "b"], "table": [[0.2, 0.3], [0.2, 0.3]]}
  })";
  const auto file = write_temp("product.json", product);
  const auto r = run_cli("reconstruct " + file.string() + " --json");
  CHECK(r.exit_code == 0);
  const json report = json::parse(r.out);
  CHECK(report["results"]["expected_cost"].get<double>() <= 1e-12);
}

TEST_CASE("chain reports the closed-form decay") {
  const auto file = write_temp("chain.json", kChainProblem);
  const auto r = run_cli("chain " + file.string() + " --steps 6 --json");
  CHECK(r.exit_code == 0);
  const json report = json::parse(r.out);
  const auto series = report["results"]["tau_series"];
  REQUIRE(series.size() == 6);
  for (std::size_t k = 1; k <= 6; ++k) {
    const double expected = 0.5 * std::pow(0.5, double(k));
    CHECK(std::abs(series[k - 1].get<double>() - expected) <= 1e-10);
  }
  CHECK(std::abs(report["results"]["fitted_rate"].get<double>() - 0.5) <=
        1e-6);
}

TEST_CASE("json reports round-trip") {
  const auto file = write_temp("tv.json", kTvProblem);
  for (const std::string cmd :
       {std::string("validate "), std::string("ot --mu mu --nu nu ")}) {
    std::string args = cmd.substr(0, cmd.find(' ') + 1) + file.string() +
                       cmd.substr(cmd.find(' ')) + " --json";
    const auto r = run_cli(args);
    REQUIRE(r.exit_code == 0);
    const json parsed = json::parse(r.out);
    CHECK(json::parse(parsed.dump()) == parsed);
  }
}

TEST_CASE("flat problem layout and standalone joint blocks parse") {
  const char* flat = R"({
    "labels": ["0", "1"],
    "cost": [[0, 1], [1, 0]],
    "measures": {"mu": [0.7, 0.3], "nu": [0.4, 0.6]}
  })";
  const auto file = write_temp("flat.json", flat);
  const auto r = run_cli("ot " + file.string() + " --mu mu --nu nu --json");
  CHECK(r.exit_code == 0);
  CHECK(std::abs(json::parse(r.out)["results"]["value"].get<double>() - 0.3) <=
        1e-12);

  const char* with_s_labels = R"({
    "space": {"labels": ["0", "1"], "metric": "discrete"},
    "joint": {"omega_labels": ["a", "b"], "s_labels": ["0", "1"],
              "table": [[0.3, 0.2], [0.1, 0.4]]}
  })";
  const auto jf = write_temp("slabels.json", with_s_labels);
  const auto rj = run_cli("tau " + jf.string() + " --json");
  CHECK(rj.exit_code == 0);

  const char* mismatched = R"({
    "space": {"labels": ["0", "1"], "metric": "discrete"},
    "joint": {"omega_labels": ["a"], "s_labels": ["x", "y"],
              "table": [[0.5, 0.5]]}
  })";
  const auto mf = write_temp("mismatch.json", mismatched);
  CHECK(run_cli("tau " + mf.string()).exit_code == 2);
}

TEST_CASE("missing subcommand or bad flags exit 2") {
  const auto none = run_cli("");
  CHECK(none.exit_code == 2);
  const auto bad = run_cli("frobnicate foo.json");
  CHECK(bad.exit_code == 2);
}
