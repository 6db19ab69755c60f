#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "diracgap/errors.hpp"
#include "diracgap/exact_1d.hpp"
#include "diracgap/io.hpp"
#include "diracgap/potentials.hpp"
#include "doctest.h"

using namespace diracgap;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "diracgap_io_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::vector<std::string> lines_of(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

void write_text(const fs::path& p, const std::string& s) { std::ofstream(p) << s; }

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("config hash is FNV-1a of the sorted compact dump") {
    CHECK(io::config_hash(json(1)) == "af63ac4c86019afc");
    CHECK(io::config_hash(json::parse(R"({"b":[2,3],"a":1})")) == "55bed68470220de4");
    json x = json::object();
    x["z"] = 1;
    x["a"] = 2;
    json y = json::object();
    y["a"] = 2;
    y["z"] = 1;
    CHECK(io::config_hash(x) == io::config_hash(y));
    CHECK(io::config_hash(x) != io::config_hash(json{{"a", 2}, {"z", 1.5}}));
  }

  TEST_CASE("number formatting round-trips") {
    CHECK(io::fmt(0.1) == "0.1");
    CHECK(io::fmt(-2.0) == "-2");
    CHECK(io::fmt(1e-300) == "1e-300");
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-50.0, 50.0);
    for (int i = 0; i < 1000; ++i) {
      const double v = u(rng) * std::exp(u(rng));
      CHECK(std::stod(io::fmt(v)) == v);
    }
  }

  TEST_CASE("CSV writer layout") {
    const auto path = scratch("layout.csv");
    const json cfg{{"k", 3}};
    {
      io::CsvWriter w(path.string(), {"a", "b"}, cfg, {{"note", "x"}});
      w.row(std::vector<double>{1.5, 2.0});
      w.row(std::vector<std::string>{"3", "four"});
      CHECK_THROWS_AS(w.row(std::vector<double>{1.0}), ValidationError);
    }
    const auto l = lines_of(path);
    REQUIRE(l.size() == 5);
    CHECK(l[0] == "# config_hash: " + io::config_hash(cfg));
    CHECK(l[1] == "# note: x");
    CHECK(l[2] == "a,b");
    CHECK(l[3] == "1.5,2");
    CHECK(l[4] == "3,four");
    CHECK_THROWS_AS(io::CsvWriter("/nonexistent-dir/x.csv", {"a"}, cfg), ValidationError);
  }

  TEST_CASE("potential CSV round trip") {
    for (int d = 1; d <= 2; ++d) {
      const bs::GridSpec g{d, 3.5, 16};
      const auto V = potentials::sample(potentials::gaussian(d, 2.0, 4.0), g);
      const auto path = scratch("pot" + std::to_string(d) + ".csv");
      io::write_potential_csv(path.string(), V, json{{"d", d}});
      const auto R = io::read_potential_csv(path.string());
      CHECK(R.grid.d == d);
      CHECK(R.grid.L == 16);
      CHECK(R.grid.a == doctest::Approx(3.5).epsilon(1e-15));
      CHECK(R.values == V.values);
    }
  }

  TEST_CASE("potential CSV rejects malformed input") {
    std::ostringstream good;
    good << "x1,V\n";
    for (int j = 0; j < 16; ++j) good << (-2.0 + 0.25 * j) << ",1\n";
    const auto p = scratch("bad.csv");
    write_text(p, good.str());
    CHECK(io::read_potential_csv(p.string()).grid.a == doctest::Approx(2.0));

    std::string s = good.str();
    write_text(p, s.substr(0, s.rfind("1.75,1\n")) + "1.8,1\n");
    CHECK_THROWS_AS(io::read_potential_csv(p.string()), ValidationError);
    write_text(p, s.substr(0, s.rfind("1.75,1\n")) + "1.5,1\n");
    CHECK_THROWS_AS(io::read_potential_csv(p.string()), ValidationError);
    write_text(p, s + "2.0\n");
    CHECK_THROWS_AS(io::read_potential_csv(p.string()), ValidationError);
    write_text(p, s.substr(0, s.rfind("1.75,1\n")) + "1.75,-1\n");
    CHECK_THROWS_AS(io::read_potential_csv(p.string()), ValidationError);
    write_text(p, s + "x,y\n");
    CHECK_THROWS_AS(io::read_potential_csv(p.string()), ValidationError);
    write_text(p, "x1,V\n");
    CHECK_THROWS_AS(io::read_potential_csv(p.string()), ValidationError);
    CHECK_THROWS_AS(io::read_potential_csv((p.string() + ".missing")), ValidationError);
  }

  TEST_CASE("analytic potential families") {
    const auto g = potentials::gaussian(2, 2.0, 4.0);
    CHECK(g.V({1.0, 1.0, 0.0}) == doctest::Approx(2.0 * std::exp(-0.5)));
    CHECK(g.support_radius == 0.0);

    // Bump mass by a fine trapezoid rule.
    for (double w : {1.0, 0.1}) {
      const auto b = potentials::bump(1, 1.0, w);
      const int n = 20000;
      double s = 0.0;
      for (int i = 1; i < n; ++i) s += b.V({-w + 2.0 * w * i / n, 0.0, 0.0});
      CHECK(s * 2.0 * w / n == doctest::Approx(1.0).epsilon(1e-8));
      CHECK(b.V({w * 1.01, 0.0, 0.0}) == 0.0);
      const auto c = potentials::to_compact_1d(b);
      CHECK(c.left == doctest::Approx(-w));
      CHECK(c.right == doctest::Approx(w));
    }
    // 2D bump mass in polar coordinates.
    {
      const auto b = potentials::bump(2, 3.0, 0.5);
      const int n = 20000;
      double s = 0.0;
      for (int i = 1; i < n; ++i) {
        const double r = 0.5 * i / n;
        s += b.V({r, 0.0, 0.0}) * 2.0 * M_PI * r;
      }
      CHECK(s * 0.5 / n == doctest::Approx(3.0).epsilon(1e-8));
    }

    const auto k = potentials::from_json({{"family", "keller-1d-subcritical"}, {"p", 2.0}, {"lambda", 0.3}}, 1);
    CHECK(k.V({0.7, 0.0, 0.0}) == doctest::Approx(exact1d::potential_subcritical({1.0, 2.0, 0.3}, 0.7)));
    const auto kc = potentials::from_json({{"family", "keller-1d-critical"}, {"p", 3.0}}, 1);
    CHECK(kc.V({0.2, 0.0, 0.0}) == doctest::Approx(exact1d::potential_critical(1.0, 3.0, 0.2)));
    const auto dflt = potentials::from_json({{"family", "gaussian"}}, 2);
    CHECK(dflt.V({0.0, 0.0, 0.0}) == doctest::Approx(2.0));
    CHECK(dflt.V({2.0, 0.0, 0.0}) == doctest::Approx(2.0 * std::exp(-1.0)));

    CHECK_THROWS_AS(potentials::from_json({{"family", "square"}}, 1), ValidationError);
    CHECK_THROWS_AS(potentials::from_json({{"family", "keller-1d-critical"}}, 2), ValidationError);
    CHECK_THROWS_AS(potentials::from_json({{"family", "gaussian"}, {"amplitude", "big"}}, 1), ValidationError);
    CHECK_THROWS_AS(potentials::gaussian(1, -1.0, 1.0), ValidationError);
    CHECK_THROWS_AS(potentials::to_compact_1d(g), ValidationError);
    CHECK_THROWS_AS(potentials::sample(g, bs::GridSpec{1, 3.0, 16}), ValidationError);
  }
}
