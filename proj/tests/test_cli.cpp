#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "doublequad/cli.hpp"
#include "doublequad/groups.hpp"

using namespace dq;
using namespace dq::cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args, const std::string& stdin_text = "") {
  args.insert(args.begin(), "doublequad");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::istringstream in(stdin_text);
  std::ostringstream out, err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), in, out, err);
  return {code, out.str(), err.str()};
}

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t col(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    FAIL("missing column " << name);
    return 0;
  }
  double at(std::size_t row, const std::string& name) const { return rows[row][col(name)]; }
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

Csv parse_csv(const std::string& text) {
  REQUIRE(text.find('\r') == std::string::npos);
  std::istringstream in(text);
  std::string line;
  Csv csv;
  REQUIRE(std::getline(in, line));
  csv.header = split(line);
  while (std::getline(in, line)) {
    std::vector<double> row;
    for (const auto& cell : split(line)) row.push_back(std::stod(cell));
    REQUIRE(row.size() == csv.header.size());
    csv.rows.push_back(row);
  }
  return csv;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

const std::map<std::string, std::string>& sample_configs() {
  static const std::map<std::string, std::string> c{
      {"casimir_sl2c",
       R"({"system": {"name": "casimir_sl2c", "F": 1, "u0": {"r": 2, "gamma": [0, 0]},
           "g0": {"alpha": [1, 0], "nu": [0, 0]}}, "t1": 5, "dt": 0.01, "oracle": true})"},
      {"casimir_random",
       R"({"system": {"name": "casimir_sl2c", "F": {"c": 0.5, "k": 1}, "u0": "random", "g0": "random"},
           "t1": 2, "dt": 0.05, "oracle": true, "seed": 7})"},
      {"rotator", R"({"system": {"name": "rotator", "p": [0.2, -0.4, 0.9], "F": {"c": 2, "k": -1}},
                      "t1": 3, "dt": 0.1, "oracle": true})"},
      {"momenta_su2", R"({"system": {"name": "momenta_su2", "u0": {"r": 1.5, "gamma": [0.2, -0.1]},
                          "momenta": {"alpha": [0.6, 0], "nu": [0, 0.8]}, "F": 0.7},
                          "t1": 3, "dt": 0.1, "oracle": true})"},
      {"noncasimir_h", R"({"system": {"name": "noncasimir_h", "u0": "random", "momenta": "random"},
                           "t1": 3, "dt": 0.1, "oracle": true, "seed": 3})"},
      {"perturbed", R"({"system": {"name": "perturbed", "u0": {"r": 1.2, "gamma": [0.3, 0.4]},
                        "F": {"c": 1, "k": 2}, "lambda": 0.6, "g0": "random"},
                        "t1": 3, "dt": 0.1, "oracle": true, "seed": 11})"},
      {"action_angle", R"({"system": {"name": "action_angle", "I0": [1.0], "phi0": [1.0, 0.0],
                           "model": {"type": "linear", "D": [[0.1]], "A": [[0, 0], [0, 0]],
                                     "B": [[[0, -1], [1, 0]]]}},
                           "t1": 1.5, "dt": 0.1, "oracle": true})"},
      {"action_angle_frequency", R"({"system": {"name": "action_angle", "I0": [1.0, 2.0], "phi0": [0.1, 0.2],
                                     "model": {"type": "frequency", "W": [[1, 0], [0, -1]]}},
                                     "t1": 4, "dt": 0.5, "oracle": true})"},
  };
  return c;
}

// Membership invariants of every row, by column family.
void check_membership(const Csv& csv) {
  const auto has = [&](const std::string& n) {
    return std::find(csv.header.begin(), csv.header.end(), n) != csv.header.end();
  };
  for (std::size_t i = 0; i < csv.rows.size(); ++i) {
    if (i > 0) CHECK(csv.at(i, "t") > csv.at(i - 1, "t"));
    if (has("z1_re")) {
      Mat2 a;
      for (int k = 0; k < 4; ++k) {
        const std::string z = "z" + std::to_string(k + 1);
        a.e[k] = {csv.at(i, z + "_re"), csv.at(i, z + "_im")};
      }
      CHECK(sl2_membership_error(a) < 1e-10);
    }
    if (has("alpha_re")) {
      const Complex alpha{csv.at(i, "alpha_re"), csv.at(i, "alpha_im")};
      const Complex nu{csv.at(i, "nu_re"), csv.at(i, "nu_im")};
      CHECK(std::abs(std::norm(alpha) + std::norm(nu) - 1.0) < 1e-10);
      CHECK(csv.at(i, "r") > 0.0);
      CHECK(std::abs(csv.at(i, "det_re") - 1.0) < 1e-10);
    }
    if (has("g11")) {
      Mat3R g;
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) g(r, c) = csv.at(i, "g" + std::to_string(r + 1) + std::to_string(c + 1));
      CHECK(orthogonality_error(g) < 1e-10);
      CHECK(std::abs(det(g) - 1.0) < 1e-10);
    }
    if (has("phi_mod1")) {
      CHECK(csv.at(i, "phi_mod1") >= 0.0);
      CHECK(csv.at(i, "phi_mod1") < 2.0 * M_PI);
    }
  }
}

}  // namespace

TEST_CASE("config parsing") {
  SUBCASE("valid document") {
    const RunConfig c = parse_config(sample_configs().at("casimir_sl2c"));
    CHECK(c.system == "casimir_sl2c");
    CHECK(c.t1 == 5.0);
    CHECK(c.dt == 0.01);
    CHECK(c.oracle);
    CHECK(c.h == 1e-3);
    CHECK(c.max_dev == 1e-5);
  }
  SUBCASE("errors name the field") {
    const auto message = [](const std::string& text) {
      try {
        parse_config(text);
      } catch (const ConfigError& e) {
        return std::string(e.what());
      }
      return std::string("no error");
    };
    CHECK(message("{").rfind("config: invalid JSON", 0) == 0);
    CHECK(message(R"({"t1": 1, "dt": 0.1})") == "config.system: missing");
    CHECK(message(R"({"system": "rotator", "dt": 0.1})") == "config.t1: missing");
    CHECK(message(R"({"system": "rotator", "t1": -1, "dt": 0.1})") == "t1: must be positive");
    CHECK(message(R"({"system": "rotator", "t1": 1, "dt": 2})") == "dt: must not exceed t1");
    CHECK(message(R"({"system": "rotator", "t1": 1, "dt": 0.1, "seed": -3})") ==
          "seed: expected a non-negative integer");
    const std::string unknown = message(R"({"system": "bogus", "t1": 1, "dt": 0.1})");
    for (const auto& n : system_names()) CHECK(unknown.find(n) != std::string::npos);
  }
  SUBCASE("system parameter errors are reported at simulate time") {
    const auto message = [](const std::string& text) {
      try {
        simulate(parse_config(text));
      } catch (const ConfigError& e) {
        return std::string(e.what());
      }
      return std::string("no error");
    };
    CHECK(message(R"({"system": "rotator", "t1": 1, "dt": 0.1})") == "system.p: missing");
    CHECK(message(R"({"system": {"name": "casimir_sl2c", "u0": {"r": 0}}, "t1": 1, "dt": 0.1})") ==
          "system.u0.r: must be positive");
    CHECK(message(R"({"system": {"name": "perturbed", "u0": {"r": 1}}, "t1": 1, "dt": 0.1})") ==
          "system.lambda: missing");
    CHECK(message(R"({"system": {"name": "momenta_su2", "u0": {"r": 1}, "momenta": {"alpha": 2, "nu": 0}},
                      "t1": 1, "dt": 0.1})")
              .rfind("system.momenta:", 0) == 0);
    CHECK(message(R"({"system": {"name": "rotator", "p": [1, 2]}, "t1": 1, "dt": 0.1})") ==
          "system.p: expected an array of 3 numbers");
    CHECK(message(R"({"system": {"name": "noncasimir_h", "u0": {"r": 1}, "momenta": "random", "variant": "x"},
                      "t1": 1, "dt": 0.1})") == "system.variant: expected \"bracket\" or \"printed\"");
  }
}

TEST_CASE("casimir_sl2c example: H0 = 17/8 and small oracle deviation") {
  const auto res = simulate(parse_config(sample_configs().at("casimir_sl2c")));
  const Csv csv = parse_csv(res.csv);
  CHECK(csv.rows.size() == 501);
  CHECK(csv.header.back() == "oracle_dev");
  for (std::size_t i = 0; i < csv.rows.size(); ++i) {
    CHECK(std::abs(csv.at(i, "H0") - 17.0 / 8.0) < 1e-8);
    CHECK(csv.at(i, "oracle_dev") < 1e-6);
  }
  CHECK(csv.at(500, "t") == 5.0);
  REQUIRE(res.max_oracle_dev);
  CHECK(*res.max_oracle_dev < 1e-6);
}

TEST_CASE("rotator example returns to the identity after 2 pi") {
  const auto res = simulate(
      parse_config(R"({"system": {"name": "rotator", "p": [0, 0, 1]}, "t1": 6.283185307179586, "dt": 0.1})"));
  const Csv csv = parse_csv(res.csv);
  const std::size_t last = csv.rows.size() - 1;
  CHECK(csv.at(last, "t") == 6.283185307179586);
  for (int r = 1; r <= 3; ++r)
    for (int c = 1; c <= 3; ++c)
      CHECK(std::abs(csv.at(last, "g" + std::to_string(r) + std::to_string(c)) - (r == c ? 1.0 : 0.0)) < 1e-10);
  CHECK(csv.at(last, "|p|") == 1.0);
}

TEST_CASE("every sample config re-ingests with valid memberships and a small oracle deviation") {
  for (const auto& [name, text] : sample_configs()) {
    CAPTURE(name);
    const auto res = simulate(parse_config(text));
    const Csv csv = parse_csv(res.csv);
    CHECK(csv.header.front() == "t");
    check_membership(csv);
    REQUIRE(res.max_oracle_dev);
    CHECK(*res.max_oracle_dev < 1e-6);
  }
}

TEST_CASE("CSV formatting") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(2.0) == "2");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  const auto res = simulate(parse_config(sample_configs().at("rotator")));
  CHECK(res.csv.back() == '\n');
  CHECK(res.csv.find("\r") == std::string::npos);
  CHECK(res.csv.rfind("t,g11,g12,g13,g21,g22,g23,g31,g32,g33,p1,p2,p3,|p|,oracle_dev\n", 0) == 0);
}

TEST_CASE("sample times land on t1") {
  const auto csv = parse_csv(simulate(parse_config(R"({"system": {"name": "rotator", "p": [0, 0, 1]},
                                                       "t1": 1, "dt": 0.3})"))
                                 .csv);
  REQUIRE(csv.rows.size() == 5);
  CHECK(csv.at(3, "t") == doctest::Approx(0.9));
  CHECK(csv.at(4, "t") == 1.0);
}

TEST_CASE("simulate command line") {
  const auto dir = std::filesystem::temp_directory_path() / "doublequad_cli_test";
  std::filesystem::create_directories(dir);
  const auto cfg = dir / "cas.json";
  {
    std::ofstream f(cfg);
    f << sample_configs().at("casimir_sl2c");
  }
  const auto out = dir / "cas.csv";
  std::filesystem::remove(out);

  SUBCASE("writes the file atomically and exits 0") {
    const Run r = run({"simulate", "--config", cfg.string(), "--out", out.string()});
    CHECK(r.code == kOk);
    CHECK(std::filesystem::exists(out));
    for (const auto& entry : std::filesystem::directory_iterator(dir))
      CHECK(entry.path().filename().string().find(".tmp.") == std::string::npos);
    CHECK(parse_csv(read_file(out)).rows.size() == 501);
  }
  SUBCASE("config from stdin, CSV to stdout, flag overrides") {
    const Run r = run({"simulate", "--config", "-", "--t1", "1", "--dt", "0.5"}, sample_configs().at("rotator"));
    CHECK(r.code == kOk);
    CHECK(parse_csv(r.out).rows.size() == 3);
  }
  SUBCASE("unknown system exits 2 and lists valid names") {
    const Run r = run({"simulate", "--config", "-"}, R"({"system": "bogus", "t1": 1, "dt": 0.1})");
    CHECK(r.code == kUsageError);
    CHECK(r.err.find("casimir_sl2c") != std::string::npos);
    CHECK(r.err.find("action_angle") != std::string::npos);
  }
  SUBCASE("bad override exits 2") {
    const Run r = run({"simulate", "--config", cfg.string(), "--dt", "-1"});
    CHECK(r.code == kUsageError);
    CHECK(r.err.find("dt") != std::string::npos);
  }
  SUBCASE("missing config file exits 2") {
    CHECK(run({"simulate", "--config", (dir / "nope.json").string()}).code == kUsageError);
  }
  SUBCASE("oracle deviation above max-dev exits 3") {
    // The printed-variant prefactor disagrees with the bracket-table oracle.
    const Run r = run({"simulate", "--config", "-", "--oracle"},
                      R"({"system": {"name": "noncasimir_h", "u0": {"r": 1.3, "gamma": [0.1, 0.2]},
                          "momenta": {"alpha": [0.6, 0], "nu": [0.3, 0.74161984870956632]}, "variant": "printed"},
                          "t1": 2, "dt": 0.1})");
    CHECK(r.code == kOracleDeviation);
    CHECK(!r.out.empty());
  }
  SUBCASE("max-dev flag") {
    const Run r = run({"simulate", "--config", cfg.string(), "--out", out.string(), "--max-dev", "1e-20"});
    CHECK(r.code == kOracleDeviation);
  }
}

TEST_CASE("verify command") {
  SUBCASE("brackets report") {
    const Run r = run({"verify", "--suite", "brackets", "--seed", "42", "--samples", "20"});
    CHECK(r.code == kOk);
    CHECK(r.out.find("\"brackets.jacobi.sl2c_det1\"") != std::string::npos);
    CHECK(r.out.find("\"pass\": false") == std::string::npos);
  }
  SUBCASE("unknown suite exits 2") {
    CHECK(run({"verify", "--suite", "bogus", "--seed", "1", "--samples", "5"}).code == kUsageError);
  }
  SUBCASE("report is deterministic per seed") {
    const Run a = run({"verify", "--suite", "legendre", "--seed", "5", "--samples", "30"});
    const Run b = run({"verify", "--suite", "legendre", "--seed", "5", "--samples", "30"});
    CHECK(a.out == b.out);
    const Run c = run({"verify", "--suite", "legendre", "--seed", "6", "--samples", "30"});
    CHECK(a.out != c.out);
  }
}

TEST_CASE("legendre command") {
  SUBCASE("map r = 2 gives -+15i/16 on the diagonal") {
    const Run r = run({"legendre", "map", "--r", "2", "--F", "1"});
    CHECK(r.code == kOk);
    CHECK(r.out.find("v11 0 -0.9375\n") != std::string::npos);
    CHECK(r.out.find("v22 0 0.9375\n") != std::string::npos);
    CHECK(r.out.find("round_trip_residual 0\n") != std::string::npos);
  }
  SUBCASE("invert of zero velocity") {
    const Run r = run({"legendre", "invert", "--s", "0", "--w-re", "0", "--w-im", "0"});
    CHECK(r.code == kOk);
    CHECK(r.out == "r 1\ngamma 0 0\nround_trip_residual 0\n");
  }
  SUBCASE("invert of map round trips") {
    const Run m = run({"legendre", "map", "--r", "1.7", "--gamma-re", "0.4", "--gamma-im", "-0.9", "--F", "1.3"});
    std::istringstream in(m.out);
    std::string name;
    double v11re, v11im, v12re, v12im;
    in >> name >> v11re >> v11im >> name >> v12re >> v12im;
    // v = -(i/2) [[s, w], [conj w, -s]]
    const double s = -2.0 * v11im;
    const double wre = -2.0 * v12im, wim = 2.0 * v12re;
    CHECK(v11re == 0.0);
    const Run r = run({"legendre", "invert", "--s", format_double(s), "--w-re", format_double(wre), "--w-im",
                       format_double(wim), "--F", "1.3"});
    std::istringstream out(r.out);
    double rr, gre, gim;
    out >> name >> rr >> name >> gre >> gim;
    CHECK(std::abs(rr - 1.7) < 1e-10);
    CHECK(std::abs(gre - 0.4) < 1e-10);
    CHECK(std::abs(gim + 0.9) < 1e-10);
  }
  SUBCASE("r <= 0 exits 2") {
    CHECK(run({"legendre", "map", "--r", "0"}).code == kUsageError);
    CHECK(run({"legendre", "map", "--r", "-1"}).code == kUsageError);
  }
  SUBCASE("F = 0 cannot be inverted") {
    CHECK(run({"legendre", "invert", "--s", "1", "--F", "0"}).code == kUsageError);
  }
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == kUsageError);
  CHECK(run({"frobnicate"}).code == kUsageError);
  CHECK(run({"verify"}).code == kUsageError);
  CHECK(run({"--help"}).code == kOk);
}
