#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "homc/fixtures.hpp"
#include "homc/io.hpp"
#include "homc/tensor.hpp"
#include "homc/version.hpp"
#include "support.hpp"

using namespace homc;
using homc::testing::max_abs_diff;

namespace {

namespace fs = std::filesystem;

// Per-process scratch directory for chain files and captured output.
const fs::path& scratch_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() /
                 ("homc_cli_tests_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

// Runs the installed binary with the given argument string, capturing exit
// code and both streams.
CliResult run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path out_path = scratch_dir() / ("stdout." + std::to_string(counter));
  const fs::path err_path = scratch_dir() / ("stderr." + std::to_string(counter));
  ++counter;
  const std::string cmd = std::string("\"") + HOMC_CLI_PATH + "\" " + args +
                          " > \"" + out_path.string() + "\" 2> \"" +
                          err_path.string() + "\"";
  const int raw = std::system(cmd.c_str());
  CliResult result;
  REQUIRE(raw != -1);
  if (WIFEXITED(raw)) result.exit_code = WEXITSTATUS(raw);
  result.out = slurp(out_path);
  result.err = slurp(err_path);
  return result;
}

// Writes the named built-in chain to a spec file and returns the path.
std::string chain_file(const std::string& name, bool sparse = false) {
  const fs::path path =
      scratch_dir() / (name + (sparse ? ".sparse.json" : ".json"));
  save_chain_spec(path.string(), fixture(name).chain, sparse);
  return path.string();
}

std::string write_text(const std::string& filename, const std::string& body) {
  const fs::path path = scratch_dir() / filename;
  std::ofstream out(path);
  out << body;
  return path.string();
}

ordered_json parse_report(const CliResult& r) {
  CAPTURE(r.out);
  CAPTURE(r.err);
  REQUIRE(r.exit_code == 0);
  return ordered_json::parse(r.out);
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("version and help") {
  const CliResult version = run_cli("--version");
  CHECK(version.exit_code == 0);
  CHECK(version.out.find(kVersion) != std::string::npos);
  const CliResult help = run_cli("--help");
  CHECK(help.exit_code == 0);
  CHECK(help.out.find("analyze") != std::string::npos);
  CHECK(help.out.find("simulate") != std::string::npos);
}

TEST_CASE("validate") {
  SUBCASE("dense spelling") {
    const ordered_json j = parse_report(run_cli("validate " + chain_file("s6_uniform")));
    CHECK(j["schema"] == kReportSchema);
    CHECK(j["command"] == "validate");
    CHECK(j["valid"] == true);
    CHECK(j["spelling"] == "entries");
    CHECK(j["chain"]["order"] == 2);
    CHECK(j["chain"]["states"] == 3);
    CHECK(j["max_column_deviation"].get<double>() <= 1e-12);
    CHECK(j["tolerances"]["stochastic"] == 1e-9);
  }
  SUBCASE("sparse spelling") {
    const ordered_json j =
        parse_report(run_cli("validate " + chain_file("s5_two_state", true)));
    CHECK(j["valid"] == true);
    CHECK(j["spelling"] == "sparse_entries");
  }
}

TEST_CASE("malformed input exits with code 2") {
  SUBCASE("missing file") {
    const CliResult r = run_cli("validate /nonexistent/chain.json");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("error:") != std::string::npos);
  }
  SUBCASE("not JSON") {
    const std::string path = write_text("junk.json", "not json at all\n");
    const CliResult r = run_cli("validate " + path);
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("valid JSON") != std::string::npos);
  }
  SUBCASE("column sums off") {
    const std::string path = write_text(
        "bad_sum.json",
        R"({"order": 1, "states": 2, "entries": [0.6, 0.6, 0.5, 0.5]})");
    const CliResult r = run_cli("validate " + path);
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("error:") != std::string::npos);
  }
  SUBCASE("duplicate sparse index") {
    const std::string path = write_text(
        "dup.json",
        R"({"order": 1, "states": 2, "sparse_entries": [
             {"index": [1, 1], "p": 0.5}, {"index": [1, 1], "p": 0.5},
             {"index": [2, 1], "p": 0.5}, {"index": [1, 2], "p": 1.0}]})");
    const CliResult r = run_cli("validate " + path);
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("duplicate") != std::string::npos);
  }
  SUBCASE("unknown flag value") {
    const CliResult r =
        run_cli("--format yaml validate " + chain_file("s6_uniform"));
    CHECK(r.exit_code == 2);
  }
}

TEST_CASE("analyze") {
  SUBCASE("non-ergodic chain report") {
    const ordered_json j = parse_report(
        run_cli("analyze " + chain_file("s4_irreducible_not_ergodic")));
    CHECK(j["command"] == "analyze");
    CHECK(j["irreducible"] == true);
    CHECK(j["irreducibility_witness"].is_null());
    CHECK(j["ergodic"] == false);
    CHECK(j["ergodic_witness"] == ordered_json::array({2, 2, 2}));
    CHECK(j["regularity_index"].is_null());
    CHECK(j["orbit"]["closed"] == true);
  }
  SUBCASE("regular chain report") {
    const ordered_json j = parse_report(
        run_cli("analyze " + chain_file("s4_regular_reducible_reduction")));
    CHECK(j["ergodic"] == true);
    CHECK(j["ergodic_witness"].is_null());
    CHECK(j["regularity_index"] == 2);
  }
  SUBCASE("dense and sparse spellings produce identical reports") {
    const CliResult dense = run_cli("analyze " + chain_file("s4_fourstate"));
    const CliResult sparse = run_cli("analyze " + chain_file("s4_fourstate", true));
    REQUIRE(dense.exit_code == 0);
    REQUIRE(sparse.exit_code == 0);
    CHECK(dense.out == sparse.out);
  }
}

TEST_CASE("chain files round-trip byte-identically") {
  for (const bool sparse : {false, true}) {
    CAPTURE(sparse);
    const fs::path first =
        scratch_dir() / (sparse ? "rt_sparse_1.json" : "rt_dense_1.json");
    const fs::path second =
        scratch_dir() / (sparse ? "rt_sparse_2.json" : "rt_dense_2.json");
    const StochasticTensor& original = fixture("s4_fourstate").chain;
    save_chain_spec(first.string(), original, sparse);
    const ChainSpecFile loaded = load_chain_spec(first.string());
    CHECK(loaded.sparse == sparse);
    CHECK(max_abs_diff(loaded.chain.tensor(), original.tensor()) == 0.0);
    save_chain_spec(second.string(), loaded.chain, sparse);
    CHECK(slurp(first) == slurp(second));
  }
}

TEST_CASE("reduce") {
  const fs::path dot_path = scratch_dir() / "regular.dot";
  const ordered_json j = parse_report(
      run_cli("reduce " + chain_file("s4_regular_reducible_reduction") +
              " --dot " + dot_path.string()));
  CHECK(j["size"] == 9);
  CHECK(j["labels"][2] == "31");
  for (const auto& v : j["matrix"][2]) CHECK(v.get<double>() == 0.0);
  const std::string dot = slurp(dot_path);
  CHECK(dot.find("digraph") != std::string::npos);
  CHECK(dot.find("s31 [label=\"31\"];") != std::string::npos);
  CHECK(dot.find("-> s31 ") == std::string::npos);
}

TEST_CASE("kstep") {
  SUBCASE("uniform chain stays uniform at every power") {
    const ordered_json j =
        parse_report(run_cli("kstep " + chain_file("s6_uniform") + " --k 2"));
    CHECK(j["k"] == 2);
    for (const auto& slice : j["tensor"])
      for (const auto& row : slice)
        for (const auto& v : row)
          CHECK(v.get<double>() == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  }
  SUBCASE("the step count is required") {
    const CliResult r = run_cli("kstep " + chain_file("s6_uniform"));
    CHECK(r.exit_code == 2);
  }
}

TEST_CASE("everreach") {
  const ordered_json j =
      parse_report(run_cli("everreach " + chain_file("s5_no_recurrent")));
  CHECK(j["passage"]["converged"] == true);
  CHECK(j["passage"]["stop_reason"] == "increment-below-tol");
  // Nesting is outermost-last-index: F[i3-1][i2-1][i1-1].
  CHECK(j["F"][0][0][0].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(j["F"][0][2][2].get<double>() == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(j["tolerances"]["tol"] == 1e-12);
}

TEST_CASE("classify") {
  const ordered_json j =
      parse_report(run_cli("classify " + chain_file("s5_mixed_classes")));
  CHECK(j["states"][0]["transient"] == true);
  CHECK(j["states"][0]["fully_transient"] == false);
  CHECK(j["states"][0]["recurrent"] == false);
  CHECK(j["states"][2]["recurrent"] == true);
  CHECK(j["classes"] == ordered_json::array({{1, 3}, {2}}));
  CHECK(j["consistent"] == true);
  CHECK(j["reachability"][0][2] == true);
  CHECK(j["reachability"][1][0] == false);
}

TEST_CASE("mfpt") {
  SUBCASE("uniform chain") {
    const ordered_json j = parse_report(run_cli("mfpt " + chain_file("s6_uniform")));
    CHECK(j["residual"].get<double>() <= 1e-9);
    CHECK(j["mu"][0][0][0].get<double>() == doctest::Approx(3.0).epsilon(1e-9));
  }
  SUBCASE("non-ergodic chains exit with code 1") {
    const CliResult r =
        run_cli("mfpt " + chain_file("s4_irreducible_not_ergodic"));
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("error:") != std::string::npos);
  }
}

TEST_CASE("limit") {
  const std::string file = chain_file("s4_fourstate");
  const double expected[] = {2.0 / 7.0, 2.0 / 7.0, 2.0 / 7.0, 1.0 / 7.0};
  SUBCASE("stationary route") {
    const ordered_json j = parse_report(run_cli("limit " + file));
    CHECK(j["method"] == "stationary");
    CHECK(j["stationary"]["method"] == "cesaro");
    CHECK(j["stationary"]["residual"].get<double>() <= 1e-10);
    for (int i = 0; i < 4; ++i)
      CHECK(j["pi"][i].get<double>() == doctest::Approx(expected[i]).epsilon(1e-8));
  }
  SUBCASE("power route") {
    const ordered_json j = parse_report(run_cli("limit " + file + " --method powers"));
    CHECK(j["k_used"].get<int>() >= 1);
    CHECK(j["spread"].get<double>() < 1e-10);
    for (int i = 0; i < 4; ++i)
      CHECK(j["pi"][i].get<double>() == doctest::Approx(expected[i]).epsilon(1e-8));
  }
  SUBCASE("non-regular chains exit with code 1 on the power route") {
    const CliResult r =
        run_cli("limit " + chain_file("s4_irreducible_not_ergodic") +
                " --method powers --kmax 300");
    CHECK(r.exit_code == 1);
  }
}

TEST_CASE("simulate") {
  const std::string file = chain_file("s6_uniform");
  SUBCASE("k-step estimate brackets the exact value") {
    const ordered_json j = parse_report(
        run_cli("simulate " + file +
                " --quantity kstep --tuple 2,1,1 --k 3 --samples 2000 --seed 9"));
    CHECK(j["contributing_samples"] == 2000);
    CHECK(j["seed"] == 9);
    const double value = j["value"].get<double>();
    const double se = j["std_error"].get<double>();
    CHECK(std::abs(value - 1.0 / 3.0) <= 4.0 * se + 1e-9);
    CHECK(j["unreliable"] == false);
  }
  SUBCASE("occupancy needs no tuple") {
    const ordered_json j = parse_report(
        run_cli("simulate " + file +
                " --quantity occupancy --state 1 --tmax 400 --samples 50 --seed 3"));
    const double value = j["value"].get<double>();
    const double se = j["std_error"].get<double>();
    CHECK(std::abs(value - 1.0 / 3.0) <= 5.0 * se + 0.02);
  }
  SUBCASE("a tuple is required for the other quantities") {
    const CliResult r = run_cli("simulate " + file + " --quantity mfpt --samples 10");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("--tuple") != std::string::npos);
  }
}

TEST_CASE("examples") {
  SUBCASE("list names all built-in chains") {
    const ordered_json j = parse_report(run_cli("examples list"));
    REQUIRE(j["examples"].size() == 7);
    bool has_uniform = false;
    for (const auto& e : j["examples"]) {
      CHECK(e.contains("name"));
      CHECK(e.contains("order"));
      CHECK(e.contains("states"));
      CHECK(e.contains("criteria"));
      CHECK(e.contains("description"));
      has_uniform = has_uniform || e["name"] == "s6_uniform";
    }
    CHECK(has_uniform);
  }
  SUBCASE("running a classification example prints both tensors and passes") {
    const ordered_json j = parse_report(run_cli("examples run s5_no_recurrent"));
    CHECK(j["example"] == "s5_no_recurrent");
    CHECK(j.contains("computed_ever_reach"));
    CHECK(j.contains("expected_ever_reach"));
    CHECK(j["passed"] == true);
    REQUIRE(j["criteria"].size() == 1);
    CHECK(j["criteria"][0]["passed"] == true);
  }
  SUBCASE("unknown names exit with code 2") {
    const CliResult r = run_cli("examples run bogus_name");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("bogus_name") != std::string::npos);
  }
  SUBCASE("a name or --all is required") {
    const CliResult r = run_cli("examples run");
    CHECK(r.exit_code == 2);
  }
}

TEST_CASE("global output options") {
  const std::string file = chain_file("s4_irreducible_not_ergodic");
  SUBCASE("--output writes the report to a file") {
    const fs::path path = scratch_dir() / "analyze_report.json";
    const CliResult r = run_cli("--output " + path.string() + " analyze " + file);
    CHECK(r.exit_code == 0);
    CHECK(r.out.empty());
    const ordered_json j = ordered_json::parse(slurp(path));
    CHECK(j["ergodic"] == false);
  }
  SUBCASE("--format text renders flat key-value lines") {
    const CliResult r = run_cli("--format text analyze " + file);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("irreducible: true") != std::string::npos);
    CHECK(r.out.find('{') == std::string::npos);
  }
}

TEST_SUITE_END();
