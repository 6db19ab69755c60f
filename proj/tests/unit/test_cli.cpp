#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "diracgap/cli.hpp"
#include "diracgap/errors.hpp"
#include "diracgap/io.hpp"
#include "doctest.h"

using namespace diracgap;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

int run_main(std::vector<std::string> args) {
  args.insert(args.begin(), "diracgap");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return cli::main_entry(static_cast<int>(argv.size()), argv.data());
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "diracgap_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir.parent_path());
  return dir;
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string l;
  std::getline(in, l);
  return l;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("command list") {
    const auto& names = cli::command_names();
    for (const char* c : {"keller-1d", "bs-spectrum", "radial", "scf", "lt", "wp-exact"})
      CHECK(std::find(names.begin(), names.end(), c) != names.end());
  }

  TEST_CASE("config resolution") {
    cli::RunConfig r;
    r.command = "scf";
    r.config = {{"p", 4.0}};
    r.seed = 9;
    r.tol = 1e-7;
    const json c = cli::resolved_config(r);
    CHECK(c.at("p") == 4.0);
    CHECK(c.at("seed") == 9);
    CHECK(c.at("conv_tol") == 1e-7);
    CHECK(c.at("lambda") == 0.5);

    cli::RunConfig k;
    k.command = "keller-1d";
    k.seed = 5;
    k.tol = 1e-4;
    const json ck = cli::resolved_config(k);
    CHECK_FALSE(ck.contains("seed"));
    CHECK(ck.at("tol") == 1e-4);

    k.config = {{"nonsense", 1}};
    CHECK_THROWS_AS(cli::resolved_config(k), ValidationError);
    k.config = json::array();
    CHECK_THROWS_AS(cli::resolved_config(k), ValidationError);
    k.config = json::object();
    k.tol = -1.0;
    CHECK_THROWS_AS(cli::resolved_config(k), ValidationError);
  }

  TEST_CASE("exit codes") {
    CHECK(cli::exit_code_for(nullptr) == 0);
    CHECK(cli::exit_code_for(std::make_exception_ptr(SupercriticalError("x"))) == 4);
    CHECK(cli::exit_code_for(std::make_exception_ptr(ConvergenceError("x", 1.0))) == 3);
    CHECK(cli::exit_code_for(std::make_exception_ptr(NoSolutionError("x"))) == 3);
    CHECK(cli::exit_code_for(std::make_exception_ptr(IntegrationError("x"))) == 3);
    CHECK(cli::exit_code_for(std::make_exception_ptr(ValidationError("x"))) == 2);
    CHECK(cli::exit_code_for(std::make_exception_ptr(DomainError("x"))) == 2);
    CHECK(cli::exit_code_for(std::make_exception_ptr(SingularityError("x"))) == 2);
    CHECK(cli::exit_code_for(std::make_exception_ptr(std::runtime_error("x"))) == 1);
    try {
      (void)json::parse("{");
    } catch (...) {
      CHECK(cli::exit_code_for(std::current_exception()) == 2);
    }
  }

  TEST_CASE("wp-exact end to end") {
    const auto out = scratch("wp");
    const auto cfg = out.string() + ".json";
    std::ofstream(cfg) << R"({"d": 2, "p": 3, "n_r": 101})";
    CHECK(run_main({"--config", cfg, "--out", out.string(), "wp-exact"}) == 0);
    REQUIRE(fs::exists(out / "summary.json"));
    std::ifstream in(out / "summary.json");
    const json s = json::parse(in);
    CHECK(s.at("command") == "wp-exact");
    CHECK(s.at("norm_p_closed_form").get<double>() == doctest::Approx(27.0 * M_PI).epsilon(1e-12));
    CHECK(s.at("config_hash") == io::config_hash(s.at("config")));
    CHECK(first_line(out / "wp_exact.csv") == "# config_hash: " + s.at("config_hash").get<std::string>());
  }

  TEST_CASE("keller-1d writes its tables") {
    const auto out = scratch("k1");
    const auto cfg = out.string() + ".json";
    std::ofstream(cfg) << R"({"n_p": 50, "n_alpha": 10, "curve_p": [2]})";
    CHECK(run_main({"--config", cfg, "--out", out.string(), "keller-1d"}) == 0);
    for (const char* f : {"alpha_star.csv", "lambda_curves.csv", "summary.json"}) CHECK(fs::exists(out / f));
    std::ifstream in(out / "alpha_star.csv");
    int rows = 0;
    for (std::string l; std::getline(in, l);)
      if (!l.empty() && l[0] != '#' && l != "p,alpha_star") ++rows;
    CHECK(rows == 50);
  }

  TEST_CASE("failures map to exit codes") {
    const auto out = scratch("bad");
    CHECK(run_main({"no-such-command"}) == 2);
    CHECK(run_main({}) == 2);
    const auto cfg = out.string() + ".json";
    std::ofstream(cfg) << R"({"bogus": true})";
    CHECK(run_main({"--config", cfg, "--out", out.string(), "radial"}) == 2);
    std::ofstream(cfg) << "{ not json";
    CHECK(run_main({"--config", cfg, "--out", out.string(), "radial"}) == 2);
    CHECK(run_main({"--config", out.string() + ".absent", "radial"}) == 2);
    std::ofstream(cfg) << R"({"p": 1.5})";
    CHECK(run_main({"--config", cfg, "--out", out.string(), "scf"}) == 2);
  }
}
