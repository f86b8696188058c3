#include "doctest.h"

#include <cmath>
#include <random>

#include "doublequad/errors.hpp"
#include "doublequad/poisson.hpp"

using namespace dq;
using namespace std::complex_literals;

namespace {

PoissonPoint random_c4_point(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Mat2 a;
  for (auto& z : a.e) z = {n(rng), n(rng)};
  return point_sl2c(a);
}

// Iwasawa g u coordinates (alpha, nu, r, gamma) written out for any invertible
// matrix. Off det = 1 this is just some smooth extension, which is enough for
// brackets since det is a Casimir.
std::array<Complex, 4> gu_coordinates(const Mat2& a) {
  const double s = 1.0 / std::sqrt(std::norm(a(0, 0)) + std::norm(a(1, 0)));
  return {s * a(0, 0), s * a(1, 0), Complex(1.0 / s),
          s * (std::conj(a(0, 0)) * a(0, 1) + std::conj(a(1, 0)) * a(1, 1))};
}

// Wirtinger derivatives d/dz_k and d/dconj(z_k) by central differences.
std::array<std::array<Complex, 8>, 4> wirtinger_jacobian(const Mat2& a) {
  const double h = 1e-6;
  std::array<std::array<Complex, 8>, 4> J{};
  for (int k = 0; k < 4; ++k) {
    Mat2 px = a, mx = a, py = a, my = a;
    px.e[k] += h;
    mx.e[k] -= h;
    py.e[k] += 1.0i * h;
    my.e[k] -= 1.0i * h;
    const auto fpx = gu_coordinates(px), fmx = gu_coordinates(mx);
    const auto fpy = gu_coordinates(py), fmy = gu_coordinates(my);
    for (int c = 0; c < 4; ++c) {
      const Complex dx = (fpx[c] - fmx[c]) / (2 * h);
      const Complex dy = (fpy[c] - fmy[c]) / (2 * h);
      J[c][k] = 0.5 * (dx - 1.0i * dy);
      J[c][k + 4] = 0.5 * (dx + 1.0i * dy);
    }
  }
  return J;
}

}  // namespace

TEST_CASE("tables are antisymmetric and real at coefficient level") {
  for (System s : {System::sl2c, System::su2, System::sb2, System::double_group, System::so3_dual}) {
    const auto& t = table_for(s);
    CHECK(t.antisymmetry_defects() == 0);
    CHECK(t.reality_defects() == 0);
  }
  CHECK(sl2c_table().size() == 8);
  CHECK(su2_table().size() == 4);
  CHECK(sb2_table().size() == 3);
  CHECK(double_table().size() == 7);
}

TEST_CASE("a few printed entries") {
  const auto& t = sl2c_table();
  const PoissonPoint p = point_sl2c(random_sl2(1).matrix());
  const Complex z1 = p.values[0], z2 = p.values[1], z3 = p.values[2];
  CHECK(std::abs(bracket_eval(t, t.coordinate("z1"), t.coordinate("z2"), p) + 0.5i * z1 * z2) < 1e-14);
  CHECK(std::abs(bracket_eval(t, t.coordinate("z2"), t.coordinate("z1"), p) - 0.5i * z1 * z2) < 1e-14);
  CHECK(std::abs(bracket_eval(t, t.coordinate("z2"), t.coordinate("z3"), p) - 1.0i * z1 * p.values[3]) < 1e-14);
  CHECK(std::abs(bracket_eval(t, t.coordinate("z1"), t.coordinate("z3bar"), p)) == 0.0);
  (void)z3;
  const auto& s = so3_dual_table();
  const PoissonPoint q = point_so3(Vec3{{1.0, 2.0, 3.0}});
  CHECK(bracket_eval(s, s.coordinate("p1"), s.coordinate("p2"), q) == Complex(3.0));
}

TEST_CASE("bracket_eval rejects mismatched systems") {
  const PoissonPoint p = point_su2(1.0, 0.0);
  CHECK_THROWS_AS(bracket_eval(sl2c_table(), sl2c_table().coordinate("z1"), sl2c_table().coordinate("z2"), p),
                  IndexMismatchError);
  CHECK_THROWS_AS(bracket_eval(sl2c_table(), su2_table().coordinate("alpha"), sl2c_table().coordinate("z2"),
                               point_sl2c(Mat2::identity())),
                  IndexMismatchError);
  CHECK_THROWS_AS(sl2c_table().index_of("alpha"), IndexMismatchError);
}

TEST_CASE("Jacobi identity") {
  std::mt19937_64 rng(2024);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    CHECK(max_jacobi_residual(sl2c_table(), point_sl2c(random_sl2(seed).matrix())) < 1e-10);
    CHECK(max_jacobi_residual(sl2c_table(), random_c4_point(rng)) < 1e-10);
    CHECK(max_jacobi_residual(su2_table(), point_su2(random_su2(seed).alpha(), random_su2(seed).nu())) < 1e-10);
    const SB2Element u = random_sb2(seed);
    CHECK(max_jacobi_residual(sb2_table(), point_sb2(u.r(), u.gamma())) < 1e-10);
    CHECK(max_jacobi_residual(double_table(), point_double(random_su2(seed), u)) < 1e-10);
    CHECK(max_jacobi_residual(so3_dual_table(), point_so3(Vec3{{0.3, -1.0, 2.0}})) < 1e-12);
  }
}

TEST_CASE("Jacobi residual detects a broken table") {
  // {x, y} = x^2 z, {y, z} = x, {z, x} = y fails Jacobi.
  const std::vector<std::string> names{"p1", "p2", "p3"};
  const auto& base = so3_dual_table();
  std::vector<BracketTable::Seed> seeds{{"p1", "p2", base.monomial(1.0, "p1^2 p3")},
                                        {"p2", "p3", base.monomial(1.0, "p1")},
                                        {"p3", "p1", base.monomial(1.0, "p2")}};
  const auto broken = BracketTable::from_seeds(System::so3_dual, names, names, seeds);
  CHECK(max_jacobi_residual(broken, point_so3(Vec3{{1.0, 2.0, 3.0}})) > 0.1);
}

TEST_CASE("from_seeds rejects inconsistent or incomplete input") {
  const std::vector<std::string> names{"p1", "p2", "p3"};
  const auto& base = so3_dual_table();
  CHECK_THROWS_AS(BracketTable::from_seeds(System::so3_dual, names, names,
                                           {{"p1", "p2", base.monomial(1.0, "p3")},
                                            {"p2", "p1", base.monomial(1.0, "p3")},
                                            {"p2", "p3", base.monomial(1.0, "p1")},
                                            {"p3", "p1", base.monomial(1.0, "p2")}}),
                  IndexMismatchError);
  CHECK_THROWS_AS(BracketTable::from_seeds(System::so3_dual, names, names,
                                           {{"p1", "p2", base.monomial(1.0, "p3")}}),
                  IndexMismatchError);
}

TEST_CASE("Casimir functions") {
  std::mt19937_64 rng(7);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const PoissonPoint a = point_sl2c(random_sl2(seed).matrix());
    const PoissonPoint b = random_c4_point(rng);
    CHECK(casimir_residual(sl2c_table(), NamedFunction::det, a) < 1e-12);
    CHECK(casimir_residual(sl2c_table(), NamedFunction::conj_det, a) < 1e-12);
    CHECK(casimir_residual(sl2c_table(), NamedFunction::det, b) < 1e-12);
    const SU2Element g = random_su2(seed);
    CHECK(casimir_residual(su2_table(), NamedFunction::su2_norm, point_su2(g.alpha(), g.nu())) < 1e-12);
    CHECK(casimir_residual(so3_dual_table(), NamedFunction::so3_free_hamiltonian,
                           point_so3(Vec3{{0.1, 0.2, -0.4}})) < 1e-12);
  }
  CHECK(named_function_from_string("det") == NamedFunction::det);
  CHECK(named_function_from_string("H0_sb2") == NamedFunction::sb2_free_hamiltonian);
  CHECK_THROWS_AS(named_function_from_string("bogus"), IndexMismatchError);
  CHECK_THROWS_AS(named_polynomial(su2_table(), NamedFunction::det), IndexMismatchError);
}

TEST_CASE("free Hamiltonian on SB(2,C) is a Casimir there, but not on the double") {
  const SB2Element u(1.7, 0.3 - 0.2i);
  CHECK(casimir_residual(sb2_table(), NamedFunction::sb2_free_hamiltonian, point_sb2(u.r(), u.gamma())) < 1e-12);
  CHECK(casimir_residual(double_table(), NamedFunction::sb2_free_hamiltonian, point_double(random_su2(2), u)) >
        1e-3);
}

TEST_CASE("Casimir one-forms generate no momentum motion") {
  const SU2Element g = random_su2(3);
  const SB2Element u = random_sb2(4);
  const auto& t = double_table();
  const PoissonPoint p = point_double(g, u);
  const auto sb2_rate = hamiltonian_field(t, covector(t, CasimirSB2{[](const SB2Element&) { return 1.3; }}, p), p);
  for (const char* name : {"r", "gamma", "gammabar"}) CHECK(std::abs(sb2_rate[t.index_of(name)]) < 1e-12);
  const auto su2_rate = hamiltonian_field(t, covector(t, CasimirSU2{[](const SU2Element&) { return 0.8; }}, p), p);
  for (const char* name : {"alpha", "alphabar", "nu", "nubar"}) CHECK(std::abs(su2_rate[t.index_of(name)]) < 1e-12);
}

TEST_CASE("reality and inversion symmetry") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 10; ++i) {
    const auto rep = table_symmetry_checks(sl2c_table(), random_c4_point(rng));
    CHECK(rep.reality < 1e-12);
    CHECK(rep.inversion < 1e-12);
  }
  const SB2Element u = random_sb2(1);
  CHECK(table_symmetry_checks(sb2_table(), point_sb2(u.r(), u.gamma())).reality < 1e-12);
}

TEST_CASE("sub-tables are the pushforward of the SL(2,C) bracket under g u") {
  const auto& big = sl2c_table();
  const auto& dbl = double_table();
  const char* coords[4] = {"alpha", "nu", "r", "gamma"};
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const SL2Element a = random_sl2(seed + 50);
    const PoissonPoint p = point_sl2c(a.matrix());
    const auto J = wirtinger_jacobian(a.matrix());
    // Conjugate rows: d conj(f)/dz_k = conj(d f/dconj(z_k)).
    std::array<std::array<Complex, 8>, 8> rows{};
    for (int c = 0; c < 4; ++c) {
      rows[c] = J[c];
      for (int k = 0; k < 4; ++k) {
        rows[c + 4][k] = std::conj(J[c][k + 4]);
        rows[c + 4][k + 4] = std::conj(J[c][k]);
      }
    }
    std::array<std::array<Complex, 8>, 8> P{};
    for (std::size_t i = 0; i < 8; ++i)
      for (std::size_t j = 0; j < 8; ++j) P[i][j] = big.entry(i, j).evaluate(p.values);
    const auto [g, u] = iwasawa_gu(a);
    const PoissonPoint q = point_double(g, u);
    for (int c = 0; c < 8; ++c) {
      for (int d = 0; d < 8; ++d) {
        Complex pushed = 0.0;
        for (int i = 0; i < 8; ++i)
          for (int j = 0; j < 8; ++j) pushed += rows[c][i] * P[i][j] * rows[d][j];
        const std::string nc = c < 4 ? coords[c] : std::string(coords[c - 4]) + "bar";
        const std::string nd = d < 4 ? coords[d] : std::string(coords[d - 4]) + "bar";
        if (nc == "rbar" || nd == "rbar") continue;
        const Complex table_value = bracket_eval(dbl, dbl.coordinate(nc), dbl.coordinate(nd), q);
        CHECK_MESSAGE(std::abs(pushed - table_value) < 1e-7, nc << " " << nd);
      }
    }
  }
}

TEST_CASE("JSON round trip is exact") {
  for (System s : {System::sl2c, System::su2, System::sb2, System::double_group, System::so3_dual}) {
    const auto& t = table_for(s);
    const std::string text = table_to_json(t);
    const BracketTable back = table_from_json(text);
    CHECK(table_to_json(back) == text);
    CHECK(back.names() == t.names());
    CHECK(back.conjugates() == t.conjugates());
    for (std::size_t a = 0; a < t.size(); ++a)
      for (std::size_t b = 0; b < t.size(); ++b) CHECK(back.entry(a, b) == t.entry(a, b));
  }
  CHECK_THROWS(table_from_json("{\"system\": \"sl2c\"}"));
}

TEST_CASE("polynomial algebra") {
  const auto& t = sb2_table();
  const Polynomial x = t.monomial(2.0, "r^-2 gamma");
  const Polynomial dx = x.derivative(t.index_of("r"));
  CHECK(dx == t.monomial(-4.0, "r^-3 gamma"));
  CHECK((x - x).is_zero());
  CHECK(x * t.monomial(1.0, "r^2") == t.monomial(2.0, "gamma"));
  const Polynomial c = x.conjugated(t.conjugates());
  CHECK(c == t.monomial(2.0, "r^-2 gammabar"));
  CHECK(system_from_string("double") == System::double_group);
  CHECK_THROWS_AS(system_from_string("nope"), IndexMismatchError);
}

TEST_CASE("listed bracket examples") {
  const auto& t = sl2c_table();
  const PoissonPoint id = point_sl2c(Mat2::identity());
  CHECK(bracket_eval(t, t.coordinate("z2"), t.coordinate("z3"), id) == Complex(0.0, 1.0));
  CHECK(bracket_eval(t, t.coordinate("z1"), t.coordinate("z1bar"), id) == Complex(0.0, -0.5));
  const PoissonPoint p = point_sl2c(random_sl2(4).matrix());
  CHECK(bracket_eval(t, t.coordinate("z1"), t.coordinate("z4"), p) == Complex(0.0));

  const std::vector<Complex> zero(8, 0.0);
  for (const auto& v : hamiltonian_field(t, zero, p)) CHECK(v == Complex(0.0));
  const auto ddet = differential(named_polynomial(t, NamedFunction::det), p);
  for (const auto& v : hamiltonian_field(t, ddet, p)) CHECK(std::abs(v) < 1e-12);
  const auto at_id = hamiltonian_field(t, covector(t, CasimirSB2{[](const SB2Element&) { return 1.0; }}, id), id);
  for (const auto& v : at_id) CHECK(std::abs(v) < 1e-15);
  CHECK_THROWS_AS(hamiltonian_field(t, std::vector<Complex>(3, 0.0), p), DimensionMismatchError);

  const std::size_t z1 = t.index_of("z1"), z2 = t.index_of("z2"), z3 = t.index_of("z3"), z4 = t.index_of("z4");
  const std::size_t z2b = t.index_of("z2bar");
  CHECK(jacobi_residual(t, z1, z1, z2, p) < 1e-15);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const PoissonPoint q = point_sl2c(random_sl2(s + 100).matrix());
    CHECK(jacobi_residual(t, z1, z2, z3, q) < 1e-10);
    CHECK(jacobi_residual(t, z1, z2b, z4, q) < 1e-10);
  }
  const auto rep = table_symmetry_checks(t, id);
  CHECK(rep.reality == 0.0);
  CHECK(rep.inversion == 0.0);
}
