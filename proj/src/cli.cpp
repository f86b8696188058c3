#include "doublequad/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unistd.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "doublequad/dynamics.hpp"
#include "doublequad/verify.hpp"

namespace dq::cli {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) { throw ConfigError(path + ": " + msg); }

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) fail(path + "." + key, "missing");
  return obj.at(key);
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) fail(path, "must be finite");
  return x;
}

// A number or [re, im].
Complex complex_value(const json& j, const std::string& path) {
  if (j.is_number()) return number(j, path);
  if (j.is_array() && j.size() == 2) return {number(j[0], path + "[0]"), number(j[1], path + "[1]")};
  fail(path, "expected a number or [re, im]");
}

std::vector<double> vector_value(const json& j, const std::string& path, std::size_t n = 0) {
  if (!j.is_array() || (n != 0 && j.size() != n) || j.empty()) {
    fail(path, n ? "expected an array of " + std::to_string(n) + " numbers" : "expected a non-empty array");
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

Eigen::MatrixXd matrix_value(const json& j, const std::string& path, std::size_t rows, std::size_t cols) {
  if (!j.is_array() || j.size() != rows) fail(path, "expected " + std::to_string(rows) + " rows");
  Eigen::MatrixXd m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto row = vector_value(j[i], path + "[" + std::to_string(i) + "]", cols);
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = row[k];
  }
  return m;
}

bool is_random(const json& j) { return j.is_string() && j.get<std::string>() == "random"; }

template <class Fn>
auto wrap_invariant(const std::string& path, Fn&& fn) {
  try {
    return fn();
  } catch (const InvariantViolation& e) {
    fail(path, e.what());
  }
}

SU2Element su2_value(const json& params, const std::string& key, const std::string& path, std::uint64_t seed,
                     std::uint64_t stream, bool required) {
  if (!params.contains(key)) {
    if (required) fail(path + "." + key, "missing");
    return SU2Element();
  }
  const json& j = params.at(key);
  const std::string p = path + "." + key;
  if (is_random(j)) return random_su2(derive_seed(seed, stream, 0));
  const Complex alpha = complex_value(require(j, "alpha", p), p + ".alpha");
  const Complex nu = complex_value(require(j, "nu", p), p + ".nu");
  return wrap_invariant(p, [&] { return SU2Element(alpha, nu); });
}

SB2Element sb2_value(const json& params, const std::string& key, const std::string& path, std::uint64_t seed,
                     std::uint64_t stream) {
  const json& j = require(params, key, path);
  const std::string p = path + "." + key;
  if (is_random(j)) return random_sb2(derive_seed(seed, stream, 0));
  const double r = number(require(j, "r", p), p + ".r");
  if (!(r > 0.0)) fail(p + ".r", "must be positive");
  const Complex gamma = j.contains("gamma") ? complex_value(j.at("gamma"), p + ".gamma") : Complex{0.0};
  return SB2Element(r, gamma);
}

// c x^k; a bare number is the constant c.
struct PowerLaw {
  double c = 1.0;
  double k = 0.0;
  double operator()(double x) const { return k == 0.0 ? c : c * std::pow(x, k); }
};

PowerLaw power_law(const json& params, const std::string& path) {
  if (!params.contains("F")) return {};
  const json& j = params.at("F");
  const std::string p = path + ".F";
  if (j.is_number()) return {number(j, p), 0.0};
  if (j.is_object()) {
    PowerLaw f{number(require(j, "c", p), p + ".c"), 0.0};
    if (j.contains("k")) f.k = number(j.at("k"), p + ".k");
    return f;
  }
  fail(p, "expected a number or {\"c\": ..., \"k\": ...}");
}

// Streams for random initial conditions.
enum : std::uint64_t { kRandomG0 = 101, kRandomU0, kRandomMomenta };

struct Runner {
  std::vector<std::string> columns;
  std::function<std::vector<double>(double)> row;
  std::function<State(double)> closed_form;  // in the oracle layout
  Field oracle_field;
  State oracle_y0;
};

void complex_columns(std::vector<std::string>& cols, const std::string& name) {
  cols.push_back(name + "_re");
  cols.push_back(name + "_im");
}

void push_complex(std::vector<double>& row, Complex z) {
  row.push_back(z.real());
  row.push_back(z.imag());
}

std::vector<std::string> double_columns() {
  std::vector<std::string> c;
  complex_columns(c, "alpha");
  complex_columns(c, "nu");
  c.push_back("r");
  complex_columns(c, "gamma");
  for (const char* n : {"H0", "det_re", "det_im"}) c.push_back(n);
  return c;
}

std::vector<double> double_row(const DoubleFlowState& s) {
  std::vector<double> row;
  push_complex(row, s.g.alpha());
  push_complex(row, s.g.nu());
  row.push_back(s.u.r());
  push_complex(row, s.u.gamma());
  const Mat2 a = s.g.matrix() * s.u.matrix();
  row.push_back(free_hamiltonian(a));
  push_complex(row, det(a));
  return row;
}

Runner build_casimir(const json& p, const std::string& path, std::uint64_t seed) {
  const SU2Element g0 = su2_value(p, "g0", path, seed, kRandomG0, false);
  const SB2Element u0 = sb2_value(p, "u0", path, seed, kRandomU0);
  const PowerLaw law = power_law(p, path);
  const SB2Function F = [law](const SB2Element& u) { return law(free_hamiltonian(u)); };
  Runner r;
  for (int k = 1; k <= 4; ++k) complex_columns(r.columns, "z" + std::to_string(k));
  for (const char* n : {"H0", "det_re", "det_im"}) r.columns.push_back(n);
  r.row = [=](double t) {
    const Mat2 a = casimir_flow(g0, u0, F, t).recomposed().matrix();
    std::vector<double> row;
    for (const auto& z : a.e) push_complex(row, z);
    row.push_back(free_hamiltonian(a));
    push_complex(row, det(a));
    return row;
  };
  r.closed_form = [=](double t) { return pack(casimir_flow(g0, u0, F, t).recomposed().matrix()); };
  r.oracle_field = sl2c_field(F);
  r.oracle_y0 = pack(compose(g0, u0).matrix());
  return r;
}

Runner build_rotator(const json& p, const std::string& path, std::uint64_t) {
  Mat3R g0 = Mat3R::identity();
  if (p.contains("g0")) {
    const Eigen::MatrixXd m = matrix_value(p.at("g0"), path + ".g0", 3, 3);
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) g0(i, k) = m(i, k);
    if (orthogonality_error(g0) > kRenormalizeTolerance || std::abs(det(g0) - 1.0) > kRenormalizeTolerance) {
      fail(path + ".g0", "must be a rotation matrix");
    }
  }
  const auto pv = vector_value(require(p, "p", path), path + ".p", 3);
  const Vec3 pp{{pv[0], pv[1], pv[2]}};
  const PowerLaw law = power_law(p, path);
  const Vec3Function F = [law](const Vec3& x) { return law(norm(x)); };
  Runner r;
  for (int i = 1; i <= 3; ++i)
    for (int k = 1; k <= 3; ++k) r.columns.push_back("g" + std::to_string(i) + std::to_string(k));
  for (const char* n : {"p1", "p2", "p3", "|p|"}) r.columns.push_back(n);
  r.row = [=](double t) {
    const auto s = rotator_flow(g0, pp, F, t);
    std::vector<double> row(s.g.e.begin(), s.g.e.end());
    for (int k = 0; k < 3; ++k) row.push_back(s.p[k]);
    row.push_back(norm(s.p));
    return row;
  };
  r.closed_form = [=](double t) { return pack(rotator_flow(g0, pp, F, t).g); };
  r.oracle_field = rotator_field(pp, F);
  r.oracle_y0 = pack(g0);
  return r;
}

Runner build_momenta_su2(const json& p, const std::string& path, std::uint64_t seed) {
  const SB2Element u0 = sb2_value(p, "u0", path, seed, kRandomU0);
  const SU2Element m = su2_value(p, "momenta", path, seed, kRandomMomenta, true);
  const PowerLaw law = power_law(p, path);
  const SU2Function F = [law](const SU2Element& g) { return law(std::abs(g.nu())); };
  Runner r;
  r.columns = double_columns();
  r.row = [=](double t) { return double_row(momenta_su2_flow(u0, m.alpha(), m.nu(), F, t)); };
  r.closed_form = [=](double t) {
    const SB2Element u = momenta_su2_flow(u0, m.alpha(), m.nu(), F, t).u;
    return State{u.r(), u.gamma().real(), u.gamma().imag()};
  };
  r.oracle_field = momenta_su2_field(momenta_su2_generator(m.alpha(), m.nu(), F(m)));
  r.oracle_y0 = {u0.r(), u0.gamma().real(), u0.gamma().imag()};
  return r;
}

Runner build_noncasimir(const json& p, const std::string& path, std::uint64_t seed) {
  const SB2Element u0 = sb2_value(p, "u0", path, seed, kRandomU0);
  const SU2Element m = su2_value(p, "momenta", path, seed, kRandomMomenta, true);
  NoncasimirVariant variant = NoncasimirVariant::bracket;
  if (p.contains("variant")) {
    const json& v = p.at("variant");
    if (v == "printed") {
      variant = NoncasimirVariant::printed;
    } else if (v != "bracket") {
      fail(path + ".variant", "expected \"bracket\" or \"printed\"");
    }
  }
  Runner r;
  r.columns = double_columns();
  r.row = [=](double t) { return double_row(noncasimir_flow(u0, m.alpha(), m.nu(), t, variant)); };
  r.closed_form = [=](double t) {
    const auto s = noncasimir_flow(u0, m.alpha(), m.nu(), t, variant);
    return pack_double(s.g, s.u);
  };
  r.oracle_field = bracket_field(ExactSU2H{});
  r.oracle_y0 = pack_double(m, u0);
  return r;
}

Runner build_perturbed(const json& p, const std::string& path, std::uint64_t seed) {
  const SU2Element g0 = su2_value(p, "g0", path, seed, kRandomG0, false);
  const SB2Element u0 = sb2_value(p, "u0", path, seed, kRandomU0);
  const PowerLaw law = power_law(p, path);
  const RadialFunction F = [law](double r) { return law(r); };
  const double lambda = number(require(p, "lambda", path), path + ".lambda");
  Runner r;
  r.columns = double_columns();
  r.row = [=](double t) { return double_row(perturbed_flow(g0, u0, F, lambda, t)); };
  r.closed_form = [=](double t) {
    const auto s = perturbed_flow(g0, u0, F, lambda, t);
    return State{s.g.alpha().real(), s.g.alpha().imag(), s.g.nu().real(),
                 s.g.nu().imag(),    s.u.gamma().real(), s.u.gamma().imag()};
  };
  r.oracle_field = perturbed_field(u0.r(), F, lambda);
  r.oracle_y0 = r.closed_form(0.0);
  return r;
}

// nu(I) = W I + b, or I' = D I with A(I) = A + sum_k I_k B_k.
Runner build_action_angle(const json& p, const std::string& path, std::uint64_t) {
  ActionAngleSpec spec;
  spec.I0 = vector_value(require(p, "I0", path), path + ".I0");
  spec.phi0 = vector_value(require(p, "phi0", path), path + ".phi0");
  const std::size_t m = spec.I0.size(), n = spec.phi0.size();
  const json& model = require(p, "model", path);
  const std::string mp = path + ".model";
  const json& type = require(model, "type", mp);
  if (type == "frequency") {
    const Eigen::MatrixXd W = model.contains("W") ? matrix_value(model.at("W"), mp + ".W", n, m)
                                                  : Eigen::MatrixXd::Zero(n, m).eval();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    if (model.contains("b")) {
      const auto bv = vector_value(model.at("b"), mp + ".b", n);
      b = Eigen::Map<const Eigen::VectorXd>(bv.data(), n);
    }
    spec.model = FrequencyModel{[W, b](const std::vector<double>& I) {
      const Eigen::VectorXd nu = W * Eigen::Map<const Eigen::VectorXd>(I.data(), I.size()) + b;
      return std::vector<double>(nu.data(), nu.data() + nu.size());
    }};
  } else if (type == "linear") {
    const Eigen::MatrixXd D = model.contains("D") ? matrix_value(model.at("D"), mp + ".D", m, m)
                                                  : Eigen::MatrixXd::Zero(m, m).eval();
    const Eigen::MatrixXd A = matrix_value(require(model, "A", mp), mp + ".A", n, n);
    std::vector<Eigen::MatrixXd> B;
    if (model.contains("B")) {
      const json& jb = model.at("B");
      if (!jb.is_array() || jb.size() != m) fail(mp + ".B", "expected one matrix per action");
      for (std::size_t k = 0; k < m; ++k) B.push_back(matrix_value(jb[k], mp + ".B[" + std::to_string(k) + "]", n, n));
    }
    LinearFiberModel lm;
    lm.drift = [D](const std::vector<double>& I) {
      const Eigen::VectorXd d = D * Eigen::Map<const Eigen::VectorXd>(I.data(), I.size());
      return std::vector<double>(d.data(), d.data() + d.size());
    };
    lm.matrix = [A, B](const std::vector<double>& I) {
      Eigen::MatrixXd out = A;
      for (std::size_t k = 0; k < B.size(); ++k) out += I[k] * B[k];
      return out;
    };
    if (model.contains("step")) {
      lm.step = number(model.at("step"), mp + ".step");
      if (!(lm.step > 0.0)) fail(mp + ".step", "must be positive");
    }
    spec.model = lm;
  } else {
    fail(mp + ".type", "expected \"frequency\" or \"linear\"");
  }
  Runner r;
  for (std::size_t k = 1; k <= m; ++k) r.columns.push_back("I" + std::to_string(k));
  for (std::size_t k = 1; k <= n; ++k) r.columns.push_back("phi" + std::to_string(k));
  for (std::size_t k = 1; k <= n; ++k) r.columns.push_back("phi_mod" + std::to_string(k));
  r.row = [spec](double t) {
    const auto s = action_angle_flow(spec, t);
    std::vector<double> row = s.I;
    row.insert(row.end(), s.phi.begin(), s.phi.end());
    row.insert(row.end(), s.phi_mod.begin(), s.phi_mod.end());
    return row;
  };
  r.closed_form = [spec](double t) {
    const auto s = action_angle_flow(spec, t);
    State y = s.I;
    y.insert(y.end(), s.phi.begin(), s.phi.end());
    return y;
  };
  r.oracle_field = action_angle_field(spec);
  r.oracle_y0 = spec.I0;
  r.oracle_y0.insert(r.oracle_y0.end(), spec.phi0.begin(), spec.phi0.end());
  return r;
}

using Builder = Runner (*)(const json&, const std::string&, std::uint64_t);

const std::vector<std::pair<std::string, Builder>>& builders() {
  static const std::vector<std::pair<std::string, Builder>> b{
      {"casimir_sl2c", build_casimir},   {"rotator", build_rotator},     {"momenta_su2", build_momenta_su2},
      {"noncasimir_h", build_noncasimir}, {"perturbed", build_perturbed}, {"action_angle", build_action_angle},
  };
  return b;
}

std::string joined_system_names() {
  std::string s;
  for (const auto& n : system_names()) s += (s.empty() ? "" : ", ") + n;
  return s;
}

void validate(const RunConfig& c) {
  const auto& names = system_names();
  if (std::find(names.begin(), names.end(), c.system) == names.end()) {
    fail("system", "unknown system '" + c.system + "' (valid: " + joined_system_names() + ")");
  }
  if (!(c.t1 > 0.0) || !std::isfinite(c.t1)) fail("t1", "must be positive");
  if (!(c.dt > 0.0) || !std::isfinite(c.dt)) fail("dt", "must be positive");
  if (c.dt > c.t1) fail("dt", "must not exceed t1");
  if (!(c.h > 0.0) || !std::isfinite(c.h)) fail("h", "must be positive");
  if (!(c.max_dev > 0.0)) fail("max_dev", "must be positive");
}

std::vector<double> sample_times(double t1, double dt) {
  std::vector<double> times;
  const auto n = static_cast<long long>(std::floor(t1 / dt * (1.0 + 1e-12)));
  for (long long k = 0; k <= n; ++k) times.push_back(std::min(t1, static_cast<double>(k) * dt));
  if (t1 - times.back() > 1e-12 * t1) times.push_back(t1);
  return times;
}

}  // namespace

const std::vector<std::string>& system_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [n, b] : builders()) v.push_back(n);
    return v;
  }();
  return names;
}

RunConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("config", "expected a JSON object");
  RunConfig c;
  const json& sys = require(doc, "system", "config");
  if (sys.is_string()) {
    c.system = sys.get<std::string>();
    c.system_params = "{}";
  } else if (sys.is_object()) {
    const json& name = require(sys, "name", "system");
    if (!name.is_string()) fail("system.name", "expected a string");
    c.system = name.get<std::string>();
    c.system_params = sys.dump();
  } else {
    fail("system", "expected a name or an object with a \"name\" field");
  }
  c.t1 = number(require(doc, "t1", "config"), "t1");
  c.dt = number(require(doc, "dt", "config"), "dt");
  if (doc.contains("oracle")) {
    if (!doc.at("oracle").is_boolean()) fail("oracle", "expected true or false");
    c.oracle = doc.at("oracle").get<bool>();
  }
  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_unsigned()) fail("seed", "expected a non-negative integer");
    c.seed = doc.at("seed").get<std::uint64_t>();
  }
  if (doc.contains("output")) {
    if (!doc.at("output").is_string()) fail("output", "expected a path");
    c.output = doc.at("output").get<std::string>();
  }
  if (doc.contains("h")) c.h = number(doc.at("h"), "h");
  if (doc.contains("max_dev")) c.max_dev = number(doc.at("max_dev"), "max_dev");
  validate(c);
  return c;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

SimulationResult simulate(const RunConfig& config) {
  validate(config);
  const json params = json::parse(config.system_params);
  Runner runner;
  for (const auto& [name, build] : builders()) {
    if (name == config.system) runner = build(params, "system", config.seed);
  }
  const std::vector<double> times = sample_times(config.t1, config.dt);

  std::vector<State> oracle;
  if (config.oracle) oracle = rk4_sample(runner.oracle_field, runner.oracle_y0, 0.0, times, config.h).states;

  std::string csv = "t";
  for (const auto& c : runner.columns) csv += "," + c;
  if (config.oracle) csv += ",oracle_dev";
  csv += "\n";
  SimulationResult result;
  if (config.oracle) result.max_oracle_dev = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    csv += format_double(times[i]);
    for (double v : runner.row(times[i])) csv += "," + format_double(v);
    if (config.oracle) {
      const State y = runner.closed_form(times[i]);
      double dev = 0.0;
      for (std::size_t k = 0; k < y.size(); ++k) dev = std::max(dev, std::abs(y[k] - oracle[i][k]));
      result.max_oracle_dev = std::max(*result.max_oracle_dev, dev);
      csv += "," + format_double(dev);
    }
    csv += "\n";
  }
  result.csv = std::move(csv);
  return result;
}

void write_file_atomically(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot open " + tmp + " for writing");
    f << contents;
    f.flush();
    if (!f) {
      std::remove(tmp.c_str());
      throw Error("failed writing " + tmp);
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw Error("cannot rename " + tmp + " to " + path);
  }
}

int run_simulate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  SimulationResult result;
  try {
    result = simulate(config);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kUsageError;
  }
  if (config.output.empty()) {
    out << result.csv;
  } else {
    write_file_atomically(config.output, result.csv);
  }
  if (result.max_oracle_dev) {
    err << "max oracle deviation " << format_double(*result.max_oracle_dev) << "\n";
    if (*result.max_oracle_dev > config.max_dev) {
      err << "oracle deviation exceeds max-dev " << format_double(config.max_dev) << "\n";
      return kOracleDeviation;
    }
  }
  return kOk;
}

int run_verify(const std::string& suite, std::uint64_t seed, std::size_t samples, std::ostream& out,
               std::ostream& err) {
  std::vector<Check> checks;
  try {
    checks = run_suite(suite, seed, samples);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
  bool all = true;
  ordered_json report;
  report["suite"] = suite;
  report["seed"] = seed;
  report["samples"] = samples;
  ordered_json list = ordered_json::array();
  for (const auto& c : checks) {
    all = all && c.pass;
    ordered_json j;
    j["name"] = c.name;
    j["pass"] = c.pass;
    j["residual"] = c.residual;
    j["tolerance"] = c.tolerance;
    j["samples"] = c.samples;
    j["seed"] = c.seed;
    list.push_back(std::move(j));
  }
  report["pass"] = all;
  report["checks"] = std::move(list);
  out << report.dump(2) << "\n";
  return all ? kOk : kVerificationFailure;
}

int run_legendre_map(double r, double gamma_re, double gamma_im, double F, std::ostream& out, std::ostream& err) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    err << "error: r must be positive\n";
    return kUsageError;
  }
  const SB2Element u(r, {gamma_re, gamma_im});
  const Mat2 v = legendre_map(u, F).mat();
  const char* names[4] = {"v11", "v12", "v21", "v22"};
  for (int k = 0; k < 4; ++k) {
    out << names[k] << " " << format_double(v.e[k].real()) << " " << format_double(v.e[k].imag()) << "\n";
  }
  double residual = 0.0;
  if (F != 0.0) {
    const SB2Element back = legendre_invert(AlgebraElement::su2(v), F);
    residual = std::max(std::abs(back.r() - u.r()), std::abs(back.gamma() - u.gamma()));
  }
  out << "round_trip_residual " << format_double(residual) << "\n";
  return kOk;
}

int run_legendre_invert(double s, double w_re, double w_im, double F, bool paper_verbatim, std::ostream& out,
                        std::ostream& err) {
  using namespace std::complex_literals;
  const Complex w{w_re, w_im};
  const AlgebraElement v = AlgebraElement::su2(-0.5i * Mat2::of(s, w, std::conj(w), -s));
  SB2Element u;
  try {
    u = legendre_invert(v, F, paper_verbatim ? LegendreInverse::paper_verbatim : LegendreInverse::quartic);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
  out << "r " << format_double(u.r()) << "\n";
  out << "gamma " << format_double(u.gamma().real()) << " " << format_double(u.gamma().imag()) << "\n";
  out << "round_trip_residual " << format_double(max_abs_diff(legendre_map(u, F).mat(), v.mat())) << "\n";
  return kOk;
}

int cli_main(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Closed-form flows on SL(2,C) = SU(2) SB(2,C) and SO(3), with an RK4 oracle"};
  app.require_subcommand(1);

  auto* sim = app.add_subcommand("simulate", "Write a trajectory CSV for a system config");
  std::string config_path, out_path;
  bool oracle = false;
  std::optional<double> max_dev, t1, dt, h;
  std::optional<std::uint64_t> sim_seed;
  sim->add_option("--config", config_path, "JSON config file, or - for stdin")->required();
  sim->add_option("--out", out_path, "CSV output path (default: config output, else stdout)");
  sim->add_flag("--oracle", oracle, "Also integrate with RK4 and report oracle_dev");
  sim->add_option("--max-dev", max_dev, "Oracle deviation that fails the run (default 1e-5)");
  sim->add_option("--t1", t1, "Override t1");
  sim->add_option("--dt", dt, "Override dt");
  sim->add_option("--step", h, "Override the RK4 step of the oracle");
  sim->add_option("--seed", sim_seed, "Override seed");

  auto* ver = app.add_subcommand("verify", "Run invariant suites and print a JSON report");
  std::string suite;
  std::uint64_t seed = 42;
  std::size_t samples = 100;
  ver->add_option("--suite", suite, "brackets, decompositions, legendre, flows or all")->required();
  ver->add_option("--seed", seed, "Sampling seed");
  ver->add_option("--samples", samples, "Samples per check")->check(CLI::PositiveNumber);

  auto* leg = app.add_subcommand("legendre", "Legendre map and its inverse");
  leg->require_subcommand(1);
  auto* lmap = leg->add_subcommand("map", "Velocity for the momentum u = [[r, gamma], [0, 1/r]]");
  double r = 1.0, gre = 0.0, gim = 0.0, F = 1.0;
  lmap->add_option("--r", r, "Diagonal entry r")->required();
  lmap->add_option("--gamma-re", gre, "Re gamma");
  lmap->add_option("--gamma-im", gim, "Im gamma");
  lmap->add_option("--F", F, "Value of F");
  auto* linv = leg->add_subcommand("invert", "Momentum for the velocity -(i/2) [[s, w], [conj w, -s]]");
  double s = 0.0, wre = 0.0, wim = 0.0;
  bool verbatim = false;
  linv->add_option("--s", s, "Diagonal parameter s");
  linv->add_option("--w-re", wre, "Re w");
  linv->add_option("--w-im", wim, "Im w");
  linv->add_option("--F", F, "Value of F");
  linv->add_flag("--paper-verbatim", verbatim, "Use the printed closed form instead of the quartic root");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (*sim) {
      std::string text;
      if (config_path == "-") {
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
      } else {
        std::ifstream f(config_path, std::ios::binary);
        if (!f) {
          err << "config error: config: cannot read " << config_path << "\n";
          return kUsageError;
        }
        std::ostringstream ss;
        ss << f.rdbuf();
        text = ss.str();
      }
      RunConfig config;
      try {
        config = parse_config(text);
        if (!out_path.empty()) config.output = out_path;
        if (oracle) config.oracle = true;
        if (max_dev) config.max_dev = *max_dev;
        if (t1) config.t1 = *t1;
        if (dt) config.dt = *dt;
        if (h) config.h = *h;
        if (sim_seed) config.seed = *sim_seed;
        validate(config);
      } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kUsageError;
      }
      return run_simulate(config, out, err);
    }
    if (*ver) return run_verify(suite, seed, samples, out, err);
    if (*lmap) return run_legendre_map(r, gre, gim, F, out, err);
    if (*linv) return run_legendre_invert(s, wre, wim, F, verbatim, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace dq::cli
