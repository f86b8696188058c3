#include "doublequad/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "json.hpp"

#include "doublequad/errors.hpp"

namespace dq {

using namespace std::complex_literals;

namespace {

Complex ipow(Complex x, int e) {
  Complex out{1.0};
  const Complex base = e < 0 ? 1.0 / x : x;
  for (int k = 0; k < std::abs(e); ++k) out *= base;
  return out;
}

void require_same_system(System a, System b, const char* what) {
  if (a != b) {
    throw IndexMismatchError(std::string(what) + ": system " + to_string(a) +
                             " does not match " + to_string(b));
  }
}

}  // namespace

const char* to_string(System s) {
  switch (s) {
    case System::sl2c: return "sl2c";
    case System::su2: return "su2";
    case System::sb2: return "sb2";
    case System::double_group: return "double";
    case System::so3_dual: return "so3_dual";
  }
  return "?";
}

System system_from_string(std::string_view name) {
  for (System s : {System::sl2c, System::su2, System::sb2, System::double_group, System::so3_dual}) {
    if (name == to_string(s)) return s;
  }
  throw IndexMismatchError("unknown coordinate system '" + std::string(name) + "'");
}

// ---------------------------------------------------------------- Polynomial

Polynomial::Polynomial(std::size_t num_vars, std::vector<Monomial> terms)
    : num_vars_(num_vars), terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    if (t.exponents.size() != num_vars_) {
      throw DimensionMismatchError("Polynomial: monomial has wrong number of exponents");
    }
  }
  canonicalize();
}

Polynomial Polynomial::constant(std::size_t num_vars, Complex c) {
  return Polynomial(num_vars, {Monomial{c, std::vector<int>(num_vars, 0)}});
}

Polynomial Polynomial::variable(std::size_t num_vars, std::size_t k) {
  std::vector<int> e(num_vars, 0);
  e.at(k) = 1;
  return Polynomial(num_vars, {Monomial{1.0, e}});
}

void Polynomial::canonicalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const Monomial& a, const Monomial& b) { return a.exponents < b.exponents; });
  std::vector<Monomial> merged;
  for (auto& t : terms_) {
    if (!merged.empty() && merged.back().exponents == t.exponents) {
      merged.back().coeff += t.coeff;
    } else {
      merged.push_back(std::move(t));
    }
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(),
                              [](const Monomial& m) { return m.coeff == Complex{0.0}; }),
               merged.end());
  terms_ = std::move(merged);
}

Complex Polynomial::evaluate(const std::vector<Complex>& x) const {
  if (x.size() != num_vars_) throw DimensionMismatchError("Polynomial::evaluate: wrong point size");
  Complex sum{0.0};
  for (const auto& t : terms_) {
    Complex term = t.coeff;
    for (std::size_t k = 0; k < num_vars_; ++k) {
      if (t.exponents[k] != 0) term *= ipow(x[k], t.exponents[k]);
    }
    sum += term;
  }
  return sum;
}

Polynomial Polynomial::derivative(std::size_t k) const {
  std::vector<Monomial> out;
  for (const auto& t : terms_) {
    const int e = t.exponents.at(k);
    if (e == 0) continue;
    Monomial d = t;
    d.coeff *= static_cast<double>(e);
    d.exponents[k] = e - 1;
    out.push_back(std::move(d));
  }
  return Polynomial(num_vars_, std::move(out));
}

Polynomial Polynomial::conjugated(const std::vector<std::size_t>& conjugate_of) const {
  std::vector<Monomial> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    Monomial c{std::conj(t.coeff), std::vector<int>(num_vars_, 0)};
    for (std::size_t k = 0; k < num_vars_; ++k) c.exponents[conjugate_of[k]] += t.exponents[k];
    out.push_back(std::move(c));
  }
  return Polynomial(num_vars_, std::move(out));
}

Polynomial Polynomial::operator-() const { return Complex{-1.0} * *this; }

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  if (a.num_vars_ != b.num_vars_) throw DimensionMismatchError("Polynomial: variable count mismatch");
  std::vector<Monomial> t = a.terms_;
  t.insert(t.end(), b.terms_.begin(), b.terms_.end());
  return Polynomial(a.num_vars_, std::move(t));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.num_vars_ != b.num_vars_) throw DimensionMismatchError("Polynomial: variable count mismatch");
  std::vector<Monomial> t;
  for (const auto& x : a.terms_) {
    for (const auto& y : b.terms_) {
      Monomial m{x.coeff * y.coeff, x.exponents};
      for (std::size_t k = 0; k < a.num_vars_; ++k) m.exponents[k] += y.exponents[k];
      t.push_back(std::move(m));
    }
  }
  return Polynomial(a.num_vars_, std::move(t));
}

Polynomial operator*(Complex s, const Polynomial& a) {
  std::vector<Monomial> t = a.terms_;
  for (auto& m : t) m.coeff *= s;
  return Polynomial(a.num_vars_, std::move(t));
}

bool operator==(const Polynomial& a, const Polynomial& b) {
  if (a.num_vars_ != b.num_vars_ || a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (a.terms_[i].coeff != b.terms_[i].coeff) return false;
    if (a.terms_[i].exponents != b.terms_[i].exponents) return false;
  }
  return true;
}

// -------------------------------------------------------------- BracketTable

std::size_t BracketTable::index_of(std::string_view name) const {
  for (std::size_t k = 0; k < names_.size(); ++k) {
    if (names_[k] == name) return k;
  }
  throw IndexMismatchError("coordinate '" + std::string(name) + "' is not part of system " +
                           to_string(system_));
}

CoordinateIndex BracketTable::coordinate(std::string_view name) const {
  return {system_, index_of(name)};
}

std::size_t BracketTable::antisymmetry_defects() const {
  std::size_t bad = 0;
  for (std::size_t a = 0; a < size(); ++a)
    for (std::size_t b = 0; b < size(); ++b)
      if (!(entry(b, a) == -entry(a, b))) ++bad;
  return bad;
}

std::size_t BracketTable::reality_defects() const {
  std::size_t bad = 0;
  for (std::size_t a = 0; a < size(); ++a)
    for (std::size_t b = 0; b < size(); ++b)
      if (!(entry(conjugate_of_[a], conjugate_of_[b]) == entry(a, b).conjugated(conjugate_of_))) ++bad;
  return bad;
}

double BracketTable::conjugate_consistency_error(const PoissonPoint& p) const {
  require_same_system(system_, p.system, "conjugate_consistency_error");
  double worst = 0.0;
  for (std::size_t k = 0; k < size(); ++k) {
    worst = std::max(worst, std::abs(p.values[conjugate_of_[k]] - std::conj(p.values[k])));
  }
  return worst;
}

Polynomial BracketTable::monomial(Complex coeff, std::string_view factors) const {
  std::vector<int> e(size(), 0);
  std::size_t pos = 0;
  while (pos < factors.size()) {
    while (pos < factors.size() && factors[pos] == ' ') ++pos;
    if (pos >= factors.size()) break;
    std::size_t end = factors.find(' ', pos);
    if (end == std::string_view::npos) end = factors.size();
    std::string_view tok = factors.substr(pos, end - pos);
    int power = 1;
    if (auto caret = tok.find('^'); caret != std::string_view::npos) {
      power = std::stoi(std::string(tok.substr(caret + 1)));
      tok = tok.substr(0, caret);
    }
    e[index_of(tok)] += power;
    pos = end;
  }
  return Polynomial(size(), {Monomial{coeff, e}});
}

BracketTable BracketTable::from_entries(System system, std::vector<std::string> names,
                                        std::vector<std::size_t> conjugate_of,
                                        std::vector<Polynomial> entries) {
  const std::size_t n = names.size();
  if (conjugate_of.size() != n || entries.size() != n * n) {
    throw DimensionMismatchError("BracketTable: inconsistent table dimensions");
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (conjugate_of[k] >= n || conjugate_of[conjugate_of[k]] != k) {
      throw IndexMismatchError("BracketTable: conjugation map is not an involution");
    }
  }
  BracketTable t;
  t.system_ = system;
  t.names_ = std::move(names);
  t.conjugate_of_ = std::move(conjugate_of);
  t.entries_ = std::move(entries);
  return t;
}

BracketTable BracketTable::from_seeds(System system, std::vector<std::string> names,
                                      std::vector<std::string> conjugate_names,
                                      const std::vector<Seed>& seeds) {
  const std::size_t n = names.size();
  BracketTable t;
  t.system_ = system;
  t.names_ = std::move(names);
  t.conjugate_of_.resize(n);
  for (std::size_t k = 0; k < n; ++k) t.conjugate_of_[k] = t.index_of(conjugate_names.at(k));

  std::vector<std::optional<Polynomial>> slots(n * n);
  bool changed = false;
  auto assign = [&](std::size_t a, std::size_t b, const Polynomial& v) {
    auto& slot = slots[a * n + b];
    if (!slot) {
      slot = v;
      changed = true;
    } else if (!(*slot == v)) {
      throw IndexMismatchError("BracketTable: conflicting derivations of {" + t.names_[a] + ", " +
                               t.names_[b] + "}");
    }
  };
  for (std::size_t a = 0; a < n; ++a) assign(a, a, Polynomial(n));
  for (const auto& s : seeds) assign(t.index_of(s.a), t.index_of(s.b), s.value);
  do {
    changed = false;
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        if (!slots[a * n + b]) continue;
        const Polynomial v = *slots[a * n + b];
        assign(b, a, -v);
        assign(t.conjugate_of_[a], t.conjugate_of_[b], v.conjugated(t.conjugate_of_));
      }
    }
  } while (changed);

  t.entries_.reserve(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (!slots[a * n + b]) {
        throw IndexMismatchError("BracketTable: {" + t.names_[a] + ", " + t.names_[b] +
                                 "} is not determined by the listed brackets");
      }
      t.entries_.push_back(*slots[a * n + b]);
    }
  }
  return t;
}

// -------------------------------------------------------------------- tables

namespace {

using Seed = BracketTable::Seed;

// Builds a table skeleton so monomial() can resolve names while listing seeds.
BracketTable skeleton(System system, const std::vector<std::string>& names,
                      const std::vector<std::string>& conj) {
  std::vector<std::size_t> idx(names.size());
  for (std::size_t k = 0; k < names.size(); ++k) {
    idx[k] = static_cast<std::size_t>(std::find(names.begin(), names.end(), conj[k]) - names.begin());
  }
  return BracketTable::from_entries(system, names, idx,
                                    std::vector<Polynomial>(names.size() * names.size(),
                                                            Polynomial(names.size())));
}

const std::vector<std::string> kSl2cNames = {"z1",    "z2",    "z3",    "z4",
                                             "z1bar", "z2bar", "z3bar", "z4bar"};
const std::vector<std::string> kSl2cConj = {"z1bar", "z2bar", "z3bar", "z4bar",
                                            "z1",    "z2",    "z3",    "z4"};
const std::vector<std::string> kSu2Names = {"alpha", "alphabar", "nu", "nubar"};
const std::vector<std::string> kSu2Conj = {"alphabar", "alpha", "nubar", "nu"};
const std::vector<std::string> kSb2Names = {"r", "gamma", "gammabar"};
const std::vector<std::string> kSb2Conj = {"r", "gammabar", "gamma"};

std::vector<std::string> concat(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::string> out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

BracketTable build_sl2c() {
  const BracketTable k = skeleton(System::sl2c, kSl2cNames, kSl2cConj);
  auto m = [&](Complex c, std::string_view f) { return k.monomial(c, f); };
  const Polynomial zero(8);
  const Complex h = 0.5i;
  std::vector<Seed> seeds = {
      {"z1", "z2", m(-h, "z1 z2")},
      {"z1", "z3", m(h, "z1 z3")},
      {"z1", "z4", zero},
      {"z2", "z3", m(1i, "z1 z4")},
      {"z2", "z4", m(h, "z2 z4")},
      {"z3", "z4", m(-h, "z3 z4")},
      {"z1", "z1bar", m(-h, "z1 z1bar") + m(-1i, "z3 z3bar")},
      {"z2", "z2bar", m(-h, "z2 z2bar") + m(-1i, "z1 z1bar") + m(-1i, "z4 z4bar")},
      {"z3", "z3bar", m(-h, "z3 z3bar")},
      {"z4", "z4bar", m(-h, "z4 z4bar") + m(-1i, "z3 z3bar")},
      {"z1", "z2bar", m(-1i, "z3 z4bar")},
      {"z2", "z3bar", m(h, "z2 z3bar")},
      {"z1", "z3bar", zero},
      {"z2", "z4bar", m(-1i, "z1 z3bar")},
      {"z1", "z4bar", m(h, "z1 z4bar")},
      {"z3", "z4bar", zero},
  };
  return BracketTable::from_seeds(System::sl2c, kSl2cNames, kSl2cConj, seeds);
}

std::vector<Seed> su2_seeds(const BracketTable& k) {
  auto m = [&](Complex c, std::string_view f) { return k.monomial(c, f); };
  const Complex h = 0.5i;
  return {
      {"alpha", "alphabar", m(-1i, "nu nubar")},
      {"nu", "nubar", Polynomial(k.size())},
      {"alpha", "nu", m(h, "alpha nu")},
      {"alphabar", "nubar", m(-h, "alphabar nubar")},
      {"alpha", "nubar", m(h, "alpha nubar")},
      {"alphabar", "nu", m(-h, "alphabar nu")},
  };
}

std::vector<Seed> sb2_seeds(const BracketTable& k) {
  auto m = [&](Complex c, std::string_view f) { return k.monomial(c, f); };
  return {
      {"gamma", "r", m(0.5i, "gamma r")},
      {"gammabar", "gamma", m(1i, "r^2") + m(-1i, "r^-2")},
  };
}

// Interaction between the SU(2) and SB(2,C) coordinates.
std::vector<Seed> cross_seeds(const BracketTable& k) {
  auto m = [&](Complex c, std::string_view f) { return k.monomial(c, f); };
  const Complex q = 0.25i;
  return {
      {"nu", "gamma", m(-q, "nu gamma") + m(-1i, "alphabar r^-1")},
      {"alpha", "gamma", m(-q, "alpha gamma") + m(1i, "nubar r^-1")},
      {"nubar", "gamma", m(q, "nubar gamma")},
      {"alphabar", "gamma", m(q, "alphabar gamma")},
      {"nu", "r", m(-q, "nu r")},
      {"alpha", "r", m(-q, "alpha r")},
  };
}

BracketTable build_su2() {
  const BracketTable k = skeleton(System::su2, kSu2Names, kSu2Conj);
  return BracketTable::from_seeds(System::su2, kSu2Names, kSu2Conj, su2_seeds(k));
}

BracketTable build_sb2() {
  const BracketTable k = skeleton(System::sb2, kSb2Names, kSb2Conj);
  return BracketTable::from_seeds(System::sb2, kSb2Names, kSb2Conj, sb2_seeds(k));
}

BracketTable build_double() {
  const auto names = concat(kSu2Names, kSb2Names);
  const auto conj = concat(kSu2Conj, kSb2Conj);
  const BracketTable k = skeleton(System::double_group, names, conj);
  std::vector<Seed> seeds = su2_seeds(k);
  for (auto& s : sb2_seeds(k)) seeds.push_back(std::move(s));
  for (auto& s : cross_seeds(k)) seeds.push_back(std::move(s));
  return BracketTable::from_seeds(System::double_group, names, conj, seeds);
}

BracketTable build_so3_dual() {
  const std::vector<std::string> names = {"p1", "p2", "p3"};
  const BracketTable k = skeleton(System::so3_dual, names, names);
  // {p_j, p_k} = eps_ijk p_i
  std::vector<Seed> seeds = {
      {"p1", "p2", k.monomial(1.0, "p3")},
      {"p2", "p3", k.monomial(1.0, "p1")},
      {"p3", "p1", k.monomial(1.0, "p2")},
  };
  return BracketTable::from_seeds(System::so3_dual, names, names, seeds);
}

}  // namespace

const BracketTable& sl2c_table() {
  static const BracketTable t = build_sl2c();
  return t;
}

const BracketTable& su2_table() {
  static const BracketTable t = build_su2();
  return t;
}

const BracketTable& sb2_table() {
  static const BracketTable t = build_sb2();
  return t;
}

const BracketTable& double_table() {
  static const BracketTable t = build_double();
  return t;
}

const BracketTable& so3_dual_table() {
  static const BracketTable t = build_so3_dual();
  return t;
}

const BracketTable& table_for(System s) {
  switch (s) {
    case System::sl2c: return sl2c_table();
    case System::su2: return su2_table();
    case System::sb2: return sb2_table();
    case System::double_group: return double_table();
    case System::so3_dual: return so3_dual_table();
  }
  throw IndexMismatchError("table_for: unknown system");
}

// ------------------------------------------------------------- serialization

std::string table_to_json(const BracketTable& table) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["system"] = to_string(table.system());
  doc["coordinates"] = table.names();
  doc["conjugates"] = table.conjugates();
  ordered_json entries = ordered_json::array();
  for (std::size_t a = 0; a < table.size(); ++a) {
    for (std::size_t b = 0; b < table.size(); ++b) {
      const Polynomial& p = table.entry(a, b);
      if (p.is_zero()) continue;
      ordered_json terms = ordered_json::array();
      for (const auto& t : p.terms()) {
        terms.push_back({{"re", t.coeff.real()}, {"im", t.coeff.imag()}, {"exponents", t.exponents}});
      }
      entries.push_back({{"a", table.names()[a]}, {"b", table.names()[b]}, {"terms", terms}});
    }
  }
  doc["entries"] = entries;
  return doc.dump(2) + "\n";
}

BracketTable table_from_json(std::string_view text) {
  const auto doc = nlohmann::json::parse(text);
  const System system = system_from_string(doc.at("system").get<std::string>());
  auto names = doc.at("coordinates").get<std::vector<std::string>>();
  auto conj = doc.at("conjugates").get<std::vector<std::size_t>>();
  const std::size_t n = names.size();
  std::vector<Polynomial> entries(n * n, Polynomial(n));
  const BracketTable k = skeleton(system, names, [&] {
    std::vector<std::string> c;
    for (auto i : conj) c.push_back(names.at(i));
    return c;
  }());
  for (const auto& e : doc.at("entries")) {
    std::vector<Monomial> terms;
    for (const auto& t : e.at("terms")) {
      terms.push_back({Complex{t.at("re").get<double>(), t.at("im").get<double>()},
                       t.at("exponents").get<std::vector<int>>()});
    }
    const std::size_t a = k.index_of(e.at("a").get<std::string>());
    const std::size_t b = k.index_of(e.at("b").get<std::string>());
    entries[a * n + b] = Polynomial(n, std::move(terms));
  }
  return BracketTable::from_entries(system, std::move(names), std::move(conj), std::move(entries));
}

// -------------------------------------------------------------------- points

PoissonPoint point_sl2c(const Mat2& a) {
  PoissonPoint p{System::sl2c, std::vector<Complex>(8)};
  for (int k = 0; k < 4; ++k) {
    p.values[k] = a.e[k];
    p.values[k + 4] = std::conj(a.e[k]);
  }
  return p;
}

PoissonPoint point_su2(Complex alpha, Complex nu) {
  return {System::su2, {alpha, std::conj(alpha), nu, std::conj(nu)}};
}

PoissonPoint point_sb2(double r, Complex gamma) {
  return {System::sb2, {r, gamma, std::conj(gamma)}};
}

PoissonPoint point_double(Complex alpha, Complex nu, double r, Complex gamma) {
  return {System::double_group,
          {alpha, std::conj(alpha), nu, std::conj(nu), r, gamma, std::conj(gamma)}};
}

PoissonPoint point_double(const SU2Element& g, const SB2Element& u) {
  return point_double(g.alpha(), g.nu(), u.r(), u.gamma());
}

PoissonPoint point_so3(const Vec3& p) { return {System::so3_dual, {p[0], p[1], p[2]}}; }

Complex value_of(const PoissonPoint& p, std::string_view name) {
  return p.values.at(table_for(p.system).index_of(name));
}

// ---------------------------------------------------------------- evaluators

Complex bracket_eval(const BracketTable& table, CoordinateIndex a, CoordinateIndex b,
                     const PoissonPoint& p) {
  require_same_system(table.system(), a.system, "bracket_eval");
  require_same_system(table.system(), b.system, "bracket_eval");
  require_same_system(table.system(), p.system, "bracket_eval");
  if (a.index >= table.size() || b.index >= table.size()) {
    throw IndexMismatchError("bracket_eval: coordinate index out of range");
  }
  return table.entry(a.index, b.index).evaluate(p.values);
}

std::vector<Complex> hamiltonian_field(const BracketTable& table, const std::vector<Complex>& eta,
                                       const PoissonPoint& p) {
  require_same_system(table.system(), p.system, "hamiltonian_field");
  const std::size_t n = table.size();
  if (eta.size() != n || p.values.size() != n) {
    throw DimensionMismatchError("hamiltonian_field: expected " + std::to_string(n) +
                                 " covector components, got " + std::to_string(eta.size()));
  }
  std::vector<Complex> rate(n);
  for (std::size_t a = 0; a < n; ++a) {
    Complex s{0.0};
    for (std::size_t b = 0; b < n; ++b) {
      if (eta[b] == Complex{0.0}) continue;
      s += table.entry(a, b).evaluate(p.values) * eta[b];
    }
    rate[a] = s;
  }
  return rate;
}

std::vector<Complex> differential(const Polynomial& f, const PoissonPoint& p) {
  std::vector<Complex> d(f.num_vars());
  for (std::size_t k = 0; k < f.num_vars(); ++k) d[k] = f.derivative(k).evaluate(p.values);
  return d;
}

double jacobi_residual(const BracketTable& table, std::size_t a, std::size_t b, std::size_t c,
                       const PoissonPoint& p) {
  require_same_system(table.system(), p.system, "jacobi_residual");
  const std::size_t n = table.size();
  if (a >= n || b >= n || c >= n) throw IndexMismatchError("jacobi_residual: index out of range");
  // {{x,y},z} = sum_d d_d{x,y} {x_d, z}
  auto term = [&](std::size_t x, std::size_t y, std::size_t z) {
    Complex s{0.0};
    for (std::size_t d = 0; d < n; ++d) {
      s += table.entry(x, y).derivative(d).evaluate(p.values) * table.entry(d, z).evaluate(p.values);
    }
    return s;
  };
  return std::abs(term(a, b, c) + term(b, c, a) + term(c, a, b));
}

double max_jacobi_residual(const BracketTable& table, const PoissonPoint& p) {
  require_same_system(table.system(), p.system, "max_jacobi_residual");
  const std::size_t n = table.size();
  std::vector<Complex> val(n * n);
  std::vector<Complex> grad(n * n * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      val[a * n + b] = table.entry(a, b).evaluate(p.values);
      for (std::size_t d = 0; d < n; ++d) {
        grad[(a * n + b) * n + d] = table.entry(a, b).derivative(d).evaluate(p.values);
      }
    }
  }
  auto term = [&](std::size_t x, std::size_t y, std::size_t z) {
    Complex s{0.0};
    for (std::size_t d = 0; d < n; ++d) s += grad[(x * n + y) * n + d] * val[d * n + z];
    return s;
  };
  double worst = 0.0;
  // The cyclic sum is totally antisymmetric, so strictly increasing triples cover everything.
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t c = b + 1; c < n; ++c)
        worst = std::max(worst, std::abs(term(a, b, c) + term(b, c, a) + term(c, a, b)));
  return worst;
}

NamedFunction named_function_from_string(std::string_view name) {
  if (name == "det") return NamedFunction::det;
  if (name == "conj_det") return NamedFunction::conj_det;
  if (name == "H_su2_norm" || name == "su2_norm") return NamedFunction::su2_norm;
  if (name == "H0_sb2" || name == "sb2_free_hamiltonian") return NamedFunction::sb2_free_hamiltonian;
  if (name == "H0_so3" || name == "so3_free_hamiltonian") return NamedFunction::so3_free_hamiltonian;
  throw IndexMismatchError("unknown function name '" + std::string(name) + "'");
}

Polynomial named_polynomial(const BracketTable& table, NamedFunction f) {
  auto m = [&](Complex c, std::string_view s) { return table.monomial(c, s); };
  switch (f) {
    case NamedFunction::det:
      return m(1.0, "z1 z4") + m(-1.0, "z2 z3");
    case NamedFunction::conj_det:
      return m(1.0, "z1bar z4bar") + m(-1.0, "z2bar z3bar");
    case NamedFunction::su2_norm:
      return m(1.0, "alpha alphabar") + m(1.0, "nu nubar");
    case NamedFunction::sb2_free_hamiltonian:
      return m(0.5, "gamma gammabar") + m(0.5, "r^2") + m(0.5, "r^-2");
    case NamedFunction::so3_free_hamiltonian:
      return m(0.5, "p1^2") + m(0.5, "p2^2") + m(0.5, "p3^2");
  }
  throw IndexMismatchError("named_polynomial: unknown function");
}

double casimir_residual(const BracketTable& table, NamedFunction f, const PoissonPoint& p) {
  const auto rate = hamiltonian_field(table, differential(named_polynomial(table, f), p), p);
  double worst = 0.0;
  for (const auto& x : rate) worst = std::max(worst, std::abs(x));
  return worst;
}

SymmetryReport table_symmetry_checks(const BracketTable& table, const PoissonPoint& p) {
  require_same_system(table.system(), p.system, "table_symmetry_checks");
  const std::size_t n = table.size();
  const auto& cj = table.conjugates();
  SymmetryReport rep;
  std::vector<Complex> val(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) val[a * n + b] = table.entry(a, b).evaluate(p.values);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      rep.reality = std::max(rep.reality, std::abs(val[cj[a] * n + cj[b]] - std::conj(val[a * n + b])));

  if (table.system() == System::sl2c) {
    // a -> a^{-1}: z1 <-> z4, z2 -> -z2, z3 -> -z3 (same on the conjugates)
    const std::size_t perm[8] = {3, 1, 2, 0, 7, 5, 6, 4};
    const double sign[8] = {1, -1, -1, 1, 1, -1, -1, 1};
    std::vector<Complex> moved(n);
    for (std::size_t k = 0; k < n; ++k) moved[k] = sign[k] * p.values[perm[k]];
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        const Complex substituted = table.entry(a, b).evaluate(moved);
        const Complex bracketed = sign[a] * sign[b] * val[perm[a] * n + perm[b]];
        rep.inversion = std::max(rep.inversion, std::abs(substituted - bracketed));
      }
    }
  }
  return rep;
}

// ------------------------------------------------------------------ covector

namespace {

struct CovectorBuilder {
  const BracketTable& table;
  const PoissonPoint& p;
  std::vector<Complex> eta;

  CovectorBuilder(const BracketTable& t, const PoissonPoint& pt)
      : table(t), p(pt), eta(t.size(), Complex{0.0}) {}

  Complex get(std::string_view name) const { return p.values[table.index_of(name)]; }
  void add(std::string_view name, Complex c) { eta[table.index_of(name)] += c; }

  bool has_sb2() const {
    return table.system() == System::sb2 || table.system() == System::double_group;
  }
  bool has_su2() const {
    return table.system() == System::su2 || table.system() == System::double_group;
  }

  void require(bool ok, const char* form) const {
    if (!ok) {
      throw IndexMismatchError(std::string("covector: ") + form + " is not defined on system " +
                               to_string(table.system()));
    }
  }

  // c * dH0 on SB(2,C) coordinates.
  void add_sb2_free_hamiltonian(double c) {
    const double r = get("r").real();
    const Complex gamma = get("gamma");
    add("r", c * (r - 1.0 / (r * r * r)));
    add("gamma", 0.5 * c * std::conj(gamma));
    add("gammabar", 0.5 * c * gamma);
  }
};

}  // namespace

std::vector<Complex> covector(const BracketTable& table, const OneFormSpec& eta,
                              const PoissonPoint& p) {
  require_same_system(table.system(), p.system, "covector");
  CovectorBuilder b(table, p);
  std::visit(
      [&](const auto& form) {
        using T = std::decay_t<decltype(form)>;
        if constexpr (std::is_same_v<T, CasimirSO3>) {
          b.require(table.system() == System::so3_dual, "CASIMIR_SO3");
          const Vec3 mom{{p.values[0].real(), p.values[1].real(), p.values[2].real()}};
          const double f = form.F(mom);
          for (int k = 0; k < 3; ++k) b.eta[k] = f * mom[k];
        } else if constexpr (std::is_same_v<T, CasimirSB2>) {
          if (table.system() == System::sl2c) {
            const SL2Element a(p.values[0], p.values[1], p.values[2], p.values[3]);
            const double f = form.F(iwasawa_gu(a).second);
            for (int k = 0; k < 4; ++k) {
              b.eta[k] = 0.5 * f * p.values[k + 4];
              b.eta[k + 4] = 0.5 * f * p.values[k];
            }
          } else {
            b.require(b.has_sb2(), "CASIMIR_SB2");
            b.add_sb2_free_hamiltonian(form.F(SB2Element(b.get("r").real(), b.get("gamma"))));
          }
        } else if constexpr (std::is_same_v<T, CasimirSU2>) {
          b.require(b.has_su2(), "CASIMIR_SU2");
          const Complex nu = b.get("nu");
          const double f = form.F(SU2Element(b.get("alpha"), nu));
          b.add("nu", -1i * f * std::conj(nu));
          b.add("nubar", 1i * f * nu);
        } else if constexpr (std::is_same_v<T, ExactSU2H>) {
          b.require(b.has_su2(), "EXACT_SU2_H");
          const Complex nu = b.get("nu");
          b.add("nu", 0.5 * std::conj(nu));
          b.add("nubar", 0.5 * nu);
        } else if constexpr (std::is_same_v<T, PerturbedSB2>) {
          b.require(b.has_sb2(), "PERTURBED_SB2");
          const double r = b.get("r").real();
          b.add_sb2_free_hamiltonian(form.F(r));
          b.add("r", form.lambda);
        }
      },
      eta);
  return b.eta;
}

}  // namespace dq
