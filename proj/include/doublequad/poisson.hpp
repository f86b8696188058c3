#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "doublequad/groups.hpp"
#include "doublequad/mat2.hpp"

namespace dq {

/// Coordinate systems carrying an explicit bracket table.
///   sl2c:         z1..z4, z1bar..z4bar   (quadratic bracket on C^4, restricted to det = 1)
///   su2:          alpha, alphabar, nu, nubar
///   sb2:          r, gamma, gammabar     (r is real and its own conjugate)
///   double_group: su2 coordinates then sb2 coordinates, including the cross brackets
///   so3_dual:     p1, p2, p3             (linear Lie-Poisson structure)
enum class System { sl2c, su2, sb2, double_group, so3_dual };

const char* to_string(System s);
System system_from_string(std::string_view name);

/// c * prod_k x_k^{e_k}; exponents may be negative (r^-1, r^-2 appear in the sb2 entries).
struct Monomial {
  Complex coeff;
  std::vector<int> exponents;
};

/// Laurent polynomial in a fixed list of variables, kept in canonical form:
/// terms sorted by exponent vector, like terms merged, exact zeros dropped.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::size_t num_vars) : num_vars_(num_vars) {}
  Polynomial(std::size_t num_vars, std::vector<Monomial> terms);

  static Polynomial constant(std::size_t num_vars, Complex c);
  static Polynomial variable(std::size_t num_vars, std::size_t k);

  std::size_t num_vars() const { return num_vars_; }
  const std::vector<Monomial>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  Complex evaluate(const std::vector<Complex>& x) const;
  Polynomial derivative(std::size_t k) const;
  /// Conjugates coefficients and renames variable k to conjugate_of[k].
  Polynomial conjugated(const std::vector<std::size_t>& conjugate_of) const;

  Polynomial operator-() const;
  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Complex s, const Polynomial& a);
  /// Exact coefficient-level equality.
  friend bool operator==(const Polynomial& a, const Polynomial& b);

 private:
  void canonicalize();

  std::size_t num_vars_ = 0;
  std::vector<Monomial> terms_;
};

struct CoordinateIndex {
  System system;
  std::size_t index;
};

/// Values of every coordinate of one system; conjugate slots hold the
/// conjugates of their base slots.
struct PoissonPoint {
  System system;
  std::vector<Complex> values;
};

/// Antisymmetric table of structure functions entry(a, b) = {x_a, x_b}.
class BracketTable {
 public:
  System system() const { return system_; }
  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<std::size_t>& conjugates() const { return conjugate_of_; }
  std::size_t index_of(std::string_view name) const;
  CoordinateIndex coordinate(std::string_view name) const;

  const Polynomial& entry(std::size_t a, std::size_t b) const { return entries_[a * size() + b]; }

  /// Number of ordered pairs whose entry(b, a) differs from -entry(a, b) at coefficient level.
  std::size_t antisymmetry_defects() const;
  /// Number of ordered pairs whose entry(conj a, conj b) differs from conj(entry(a, b)).
  std::size_t reality_defects() const;

  /// Conjugate-consistency residual of a point: max |x_{conj k} - conj(x_k)|.
  double conjugate_consistency_error(const PoissonPoint& p) const;

  /// Builds a table from the entries the caller lists explicitly; the rest
  /// follow from antisymmetry and reality. Throws if a pair stays undetermined
  /// or if two derivations of the same pair disagree.
  struct Seed {
    std::string a;
    std::string b;
    Polynomial value;
  };
  static BracketTable from_seeds(System system, std::vector<std::string> names,
                                 std::vector<std::string> conjugate_names,
                                 const std::vector<Seed>& seeds);
  /// Raw constructor used by deserialization; entries are taken verbatim.
  static BracketTable from_entries(System system, std::vector<std::string> names,
                                   std::vector<std::size_t> conjugate_of,
                                   std::vector<Polynomial> entries);

  /// coeff times the product of space-separated factors, each "name" or "name^k",
  /// e.g. monomial(-1i, "alphabar r^-1").
  Polynomial monomial(Complex coeff, std::string_view factors) const;

 private:
  System system_ = System::sl2c;
  std::vector<std::string> names_;
  std::vector<std::size_t> conjugate_of_;
  std::vector<Polynomial> entries_;
};

const BracketTable& sl2c_table();
const BracketTable& su2_table();
const BracketTable& sb2_table();
const BracketTable& double_table();
const BracketTable& so3_dual_table();
const BracketTable& table_for(System s);

/// Audit serialization. Coefficients are written with round-trip precision, so
/// table_from_json(table_to_json(t)) reproduces t exactly.
std::string table_to_json(const BracketTable& table);
BracketTable table_from_json(std::string_view text);

PoissonPoint point_sl2c(const Mat2& a);
PoissonPoint point_su2(Complex alpha, Complex nu);
PoissonPoint point_sb2(double r, Complex gamma);
PoissonPoint point_double(Complex alpha, Complex nu, double r, Complex gamma);
PoissonPoint point_double(const SU2Element& g, const SB2Element& u);
PoissonPoint point_so3(const Vec3& p);

Complex value_of(const PoissonPoint& p, std::string_view name);

/// {x_a, x_b}(p). Throws IndexMismatchError when a, b or p belong to another system.
Complex bracket_eval(const BracketTable& table, CoordinateIndex a, CoordinateIndex b,
                     const PoissonPoint& p);

/// rate(a) = sum_b entry(a, b)(p) eta_b, with Wirtinger covector components.
std::vector<Complex> hamiltonian_field(const BracketTable& table, const std::vector<Complex>& eta,
                                       const PoissonPoint& p);

/// Wirtinger differential of f at p: component k is df/dx_k.
std::vector<Complex> differential(const Polynomial& f, const PoissonPoint& p);

/// |{{a,b},c} + {{b,c},a} + {{c,a},b}|(p), with analytic derivatives of the entries.
double jacobi_residual(const BracketTable& table, std::size_t a, std::size_t b, std::size_t c,
                       const PoissonPoint& p);

/// Worst Jacobi residual over every ordered coordinate triple.
double max_jacobi_residual(const BracketTable& table, const PoissonPoint& p);

enum class NamedFunction { det, conj_det, su2_norm, sb2_free_hamiltonian, so3_free_hamiltonian };

NamedFunction named_function_from_string(std::string_view name);
/// The named function as a polynomial on the table's coordinates. Throws
/// IndexMismatchError if it is not defined there.
Polynomial named_polynomial(const BracketTable& table, NamedFunction f);

/// max_a |{f, x_a}|(p).
double casimir_residual(const BracketTable& table, NamedFunction f, const PoissonPoint& p);

struct SymmetryReport {
  double reality = 0.0;
  /// Only meaningful for the sl2c table; 0 otherwise.
  double inversion = 0.0;
};

/// Reality: {conj a, conj b} = conj {a, b}. Inversion (sl2c): the substitution
/// z1 <-> z4, z2 -> -z2, z3 -> -z3 commutes with the bracket.
SymmetryReport table_symmetry_checks(const BracketTable& table, const PoissonPoint& p);

/// Covector fields on the momentum spaces.
struct CasimirSO3 {
  std::function<double(const Vec3&)> F;
};
struct CasimirSB2 {
  std::function<double(const SB2Element&)> F;
};
struct CasimirSU2 {
  std::function<double(const SU2Element&)> F;
};
struct ExactSU2H {};
struct PerturbedSB2 {
  std::function<double(double)> F;
  double lambda = 0.0;
};

using OneFormSpec = std::variant<CasimirSO3, CasimirSB2, CasimirSU2, ExactSU2H, PerturbedSB2>;

/// Components of the (pulled back) one-form in the table's coordinates.
///   CasimirSO3   F(p) dH0, H0 = |p|^2/2                       on so3_dual
///   CasimirSB2   F(u) dH0, H0 = (|gamma|^2 + r^2 + r^-2)/2      on sb2, double_group, sl2c
///   CasimirSU2   i F (nu dnubar - nubar dnu)                    on su2, double_group
///   ExactSU2H    dH, H = |nu|^2/2                               on su2, double_group
///   PerturbedSB2 F(r) dH0 + lambda dr                           on sb2, double_group
/// On sl2c the SB(2,C) factor u is read off by iwasawa_gu.
std::vector<Complex> covector(const BracketTable& table, const OneFormSpec& eta,
                              const PoissonPoint& p);

}  // namespace dq
