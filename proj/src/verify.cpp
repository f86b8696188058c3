#include "doublequad/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "doublequad/dynamics.hpp"
#include "doublequad/errors.hpp"

namespace dq {

using namespace std::complex_literals;

namespace {

double max_entry_dev(const State& a, const State& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

PoissonPoint gaussian_c4_point(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  Mat2 a;
  for (auto& z : a.e) z = {n(rng), n(rng)};
  return point_sl2c(a);
}

double uniform(std::uint64_t seed, double lo, double hi) {
  std::mt19937_64 rng(seed);
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Streams for derive_seed.
enum Stream : std::uint64_t {
  kSl2Points = 1,
  kC4Points,
  kSu2Points,
  kSb2Points,
  kDecomp,
  kLegendre,
  kLegendreF,
  kStartsG,
  kStartsU,
  kLambda,
};

}  // namespace

Check make_check(std::string name, double residual, double tolerance, std::size_t samples,
                 std::uint64_t seed) {
  return {std::move(name), residual <= tolerance, residual, tolerance, samples, seed};
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

std::vector<Check> bracket_checks(std::uint64_t seed, std::size_t points) {
  const std::vector<const BracketTable*> tables{&sl2c_table(), &su2_table(), &sb2_table(), &double_table(),
                                                &so3_dual_table()};
  std::size_t antisym = 0, reality = 0;
  for (const auto* t : tables) {
    antisym += t->antisymmetry_defects();
    reality += t->reality_defects();
  }
  double jac_det1 = 0, jac_c4 = 0, jac_su2 = 0, jac_sb2 = 0, jac_double = 0, jac_so3 = 0;
  double cas_det = 0, cas_conj_det = 0, cas_su2 = 0, cas_sb2 = 0, cas_so3 = 0;
  double sym_reality = 0, sym_inversion = 0, field = 0;
  for (std::size_t i = 0; i < points; ++i) {
    const SL2Element a = random_sl2(derive_seed(seed, kSl2Points, i));
    const PoissonPoint p = point_sl2c(a.matrix());
    const PoissonPoint c4 = gaussian_c4_point(derive_seed(seed, kC4Points, i));
    const SU2Element g = random_su2(derive_seed(seed, kSu2Points, i));
    const SB2Element u = random_sb2(derive_seed(seed, kSb2Points, i));
    const PoissonPoint ps = point_su2(g.alpha(), g.nu());
    const PoissonPoint pb = point_sb2(u.r(), u.gamma());
    const PoissonPoint pd = point_double(g, u);
    const PoissonPoint po = point_so3(Vec3{{g.alpha().real(), g.alpha().imag(), u.r()}});

    jac_det1 = std::max(jac_det1, max_jacobi_residual(sl2c_table(), p));
    jac_c4 = std::max(jac_c4, max_jacobi_residual(sl2c_table(), c4));
    jac_su2 = std::max(jac_su2, max_jacobi_residual(su2_table(), ps));
    jac_sb2 = std::max(jac_sb2, max_jacobi_residual(sb2_table(), pb));
    jac_double = std::max(jac_double, max_jacobi_residual(double_table(), pd));
    jac_so3 = std::max(jac_so3, max_jacobi_residual(so3_dual_table(), po));

    cas_det = std::max({cas_det, casimir_residual(sl2c_table(), NamedFunction::det, p),
                        casimir_residual(sl2c_table(), NamedFunction::det, c4)});
    cas_conj_det = std::max({cas_conj_det, casimir_residual(sl2c_table(), NamedFunction::conj_det, p),
                             casimir_residual(sl2c_table(), NamedFunction::conj_det, c4)});
    cas_su2 = std::max(cas_su2, casimir_residual(su2_table(), NamedFunction::su2_norm, ps));
    cas_sb2 = std::max(cas_sb2, casimir_residual(sb2_table(), NamedFunction::sb2_free_hamiltonian, pb));
    cas_so3 = std::max(cas_so3, casimir_residual(so3_dual_table(), NamedFunction::so3_free_hamiltonian, po));

    for (const auto& q : {p, c4}) {
      const auto rep = table_symmetry_checks(sl2c_table(), q);
      sym_reality = std::max(sym_reality, rep.reality);
      sym_inversion = std::max(sym_inversion, rep.inversion);
    }
    for (const auto* t : {&su2_table(), &sb2_table(), &double_table()}) {
      const PoissonPoint& q = t == &su2_table() ? ps : (t == &sb2_table() ? pb : pd);
      sym_reality = std::max(sym_reality, table_symmetry_checks(*t, q).reality);
    }

    const double F = 0.5 + 0.1 * static_cast<double>(i % 7);
    const auto rate = hamiltonian_field(
        sl2c_table(), covector(sl2c_table(), CasimirSB2{[F](const SB2Element&) { return F; }}, p), p);
    const Mat2 vf = sl2c_vf(a, F);
    for (int k = 0; k < 4; ++k) field = std::max(field, std::abs(rate[k] - vf.e[k]));
  }
  return {
      make_check("brackets.antisymmetry_defects", static_cast<double>(antisym), 0.0, tables.size(), seed),
      make_check("brackets.reality_defects", static_cast<double>(reality), 0.0, tables.size(), seed),
      make_check("brackets.jacobi.sl2c_det1", jac_det1, 1e-10, points, seed),
      make_check("brackets.jacobi.sl2c_c4", jac_c4, 1e-10, points, seed),
      make_check("brackets.jacobi.su2", jac_su2, 1e-10, points, seed),
      make_check("brackets.jacobi.sb2", jac_sb2, 1e-10, points, seed),
      make_check("brackets.jacobi.double", jac_double, 1e-10, points, seed),
      make_check("brackets.jacobi.so3_dual", jac_so3, 1e-10, points, seed),
      make_check("brackets.casimir.det", cas_det, 1e-12, 2 * points, seed),
      make_check("brackets.casimir.conj_det", cas_conj_det, 1e-12, 2 * points, seed),
      make_check("brackets.casimir.su2_norm", cas_su2, 1e-12, points, seed),
      make_check("brackets.casimir.sb2_free_hamiltonian", cas_sb2, 1e-12, points, seed),
      make_check("brackets.casimir.so3_free_hamiltonian", cas_so3, 1e-12, points, seed),
      make_check("brackets.symmetry.reality", sym_reality, 1e-12, 5 * points, seed),
      make_check("brackets.symmetry.inversion", sym_inversion, 1e-12, 2 * points, seed),
      make_check("brackets.hamiltonian_field_matches_sl2c_vf", field, 1e-12, points, seed),
  };
}

std::vector<Check> decomposition_checks(std::uint64_t seed, std::size_t samples) {
  double gu_rec = 0, gu_mem = 0, ug_rec = 0, ug_mem = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const SL2Element a = random_sl2(derive_seed(seed, kDecomp, i));
    const auto [g, u] = iwasawa_gu(a);
    gu_rec = std::max(gu_rec, max_abs_diff(g.matrix() * u.matrix(), a.matrix()));
    gu_mem = std::max({gu_mem, su2_membership_error(g.matrix()), SB2Element::membership_error(u.matrix())});
    const auto [u2, g2] = iwasawa_ug(a);
    ug_rec = std::max(ug_rec, max_abs_diff(u2.matrix() * g2.matrix(), a.matrix()));
    ug_mem = std::max({ug_mem, su2_membership_error(g2.matrix()), SB2Element::membership_error(u2.matrix())});
  }
  return {
      make_check("decompositions.gu.recompose", gu_rec, 1e-12, samples, seed),
      make_check("decompositions.gu.membership", gu_mem, 1e-12, samples, seed),
      make_check("decompositions.ug.recompose", ug_rec, 1e-12, samples, seed),
      make_check("decompositions.ug.membership", ug_mem, 1e-12, samples, seed),
  };
}

std::vector<Check> legendre_checks(std::uint64_t seed, std::size_t samples) {
  double forward = 0, quartic = 0;
  std::size_t verbatim_round_trips = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const SB2Element u = random_sb2(derive_seed(seed, kLegendre, i));
    const double F = uniform(derive_seed(seed, kLegendreF, i), 0.2, 2.0);
    const AlgebraElement v = legendre_map(u, F);
    forward = std::max(forward, v.kind_residual());
    const SB2Element back = legendre_invert(v, F);
    quartic = std::max({quartic, std::abs(back.r() - u.r()), std::abs(back.gamma() - u.gamma()),
                        max_abs_diff(legendre_map(back, F).mat(), v.mat())});
    const SB2Element printed = legendre_invert(v, F, LegendreInverse::paper_verbatim);
    const double err = std::max(std::abs(printed.r() - u.r()), std::abs(printed.gamma() - u.gamma()));
    if (err <= 1e-10) ++verbatim_round_trips;
  }
  return {
      make_check("legendre.forward_in_su2", forward, 1e-12, samples, seed),
      make_check("legendre.quartic_round_trip", quartic, 1e-10, samples, seed),
      // Expected failure: the printed inverse must not round trip on any sample.
      make_check("legendre.printed_inverse_round_trips", static_cast<double>(verbatim_round_trips), 0.0, samples,
                 seed),
  };
}

std::vector<Check> flow_checks(std::uint64_t seed, std::size_t starts) {
  const double h = 1e-3;
  const SB2Function one = [](const SB2Element&) { return 1.0; };

  double drift_h0 = 0, drift_det = 0, drift_momenta = 0, casimir_dev = 0;
  double noncasimir_dev = 0, perturbed_dev = 0, perturbed_modulus = 0, momenta_membership = 0;
  for (std::size_t i = 0; i < starts; ++i) {
    const SU2Element g0 = random_su2(derive_seed(seed, kStartsG, i));
    const SB2Element u0 = random_sb2(derive_seed(seed, kStartsU, i));
    const Mat2 a0 = compose(g0, u0).matrix();

    // Conservation along RK4 on [0, 10].
    const auto traj = rk4_integrate(sl2c_field(one), pack(a0), 0.0, 10.0, h);
    const double h00 = free_hamiltonian(a0);
    for (std::size_t k = 0; k < traj.size(); ++k) {
      const Mat2 a = unpack_mat2(traj.states[k]);
      drift_h0 = std::max(drift_h0, std::abs(free_hamiltonian(a) - h00));
      drift_det = std::max(drift_det, std::abs(det(a) - 1.0));
      const double s = 1.0 / std::sqrt(std::norm(a(0, 0)) + std::norm(a(1, 0)));
      const Complex gamma = s * (std::conj(a(0, 0)) * a(0, 1) + std::conj(a(1, 0)) * a(1, 1));
      drift_momenta = std::max({drift_momenta, std::abs(1.0 / s - u0.r()), std::abs(gamma.real() - u0.gamma().real()),
                                std::abs(gamma.imag() - u0.gamma().imag())});
      // Closed form on [0, 5].
      if (traj.times[k] <= 5.0) {
        const auto cf = casimir_flow(g0, u0, one, traj.times[k]);
        casimir_dev = std::max(casimir_dev, max_entry_dev(pack(cf.recomposed().matrix()), traj.states[k]));
      }
    }

    // Noncasimir closed form against the bracket-table field.
    const auto ntraj = rk4_integrate(bracket_field(ExactSU2H{}), pack_double(g0, u0), 0.0, 5.0, h);
    for (std::size_t k = 0; k < ntraj.size(); k += 10) {
      const auto s = noncasimir_flow(u0, g0.alpha(), g0.nu(), ntraj.times[k]);
      noncasimir_dev = std::max(noncasimir_dev, max_entry_dev(pack_double(s.g, s.u), ntraj.states[k]));
    }

    // Perturbed closed form against the velocity ODE.
    const double lambda = uniform(derive_seed(seed, kLambda, i), -1.0, 1.0);
    const RadialFunction F = [](double r) { return 0.5 + 0.25 * r; };
    const State y0{g0.alpha().real(), g0.alpha().imag(), g0.nu().real(), g0.nu().imag(), u0.gamma().real(),
                   u0.gamma().imag()};
    const auto ptraj = rk4_integrate(perturbed_field(u0.r(), F, lambda), y0, 0.0, 5.0, h);
    for (std::size_t k = 0; k < ptraj.size(); k += 10) {
      const auto s = perturbed_flow(g0, u0, F, lambda, ptraj.times[k]);
      const State y{s.g.alpha().real(), s.g.alpha().imag(), s.g.nu().real(), s.g.nu().imag(),
                    s.u.gamma().real(),  s.u.gamma().imag()};
      perturbed_dev = std::max(perturbed_dev, max_entry_dev(y, ptraj.states[k]));
      perturbed_modulus = std::max(perturbed_modulus, std::abs(std::abs(s.u.gamma()) - std::abs(u0.gamma())));
    }

    // Momenta in SU(2): upper triangular u(t).
    for (int k = 0; k <= 20; ++k) {
      const auto s = momenta_su2_flow(u0, g0.alpha(), g0.nu(), [](const SU2Element&) { return 1.0; }, 0.5 * k);
      momenta_membership = std::max(momenta_membership, SB2Element::membership_error(s.u.matrix()));
    }
  }

  // Rotator.
  const Vec3Function Fp = [](const Vec3&) { return 1.0; };
  const Vec3 p{{0.0, 0.0, 1.0}};
  double rot_orth = 0, rot_norm = 0;
  const Vec3 q{{0.3, -0.5, 0.8}};
  for (int k = 0; k <= 1000; ++k) {
    const auto s = rotator_flow(Mat3R::identity(), q, Fp, 0.1 * k);
    rot_orth = std::max({rot_orth, orthogonality_error(s.g), std::abs(det(s.g) - 1.0)});
    rot_norm = std::max(rot_norm, std::abs(norm(s.p) - norm(q)));
  }
  const double period = max_abs_diff(rotator_flow(Mat3R::identity(), p, Fp, 2.0 * std::numbers::pi).g,
                                     Mat3R::identity());

  // Quadrature guard.
  const SU2Element m = random_su2(derive_seed(seed, kStartsG, starts));
  const SB2Element u0 = random_sb2(derive_seed(seed, kStartsU, starts));
  std::vector<Mat2> nodes;
  for (int k = 0; k <= 32; ++k) nodes.push_back(noncasimir_velocity(u0.r(), m.alpha(), m.nu(), 2.0 * k / 32).mat());
  const double accepted_commutator = max_commutator(nodes).max_norm;
  const VelocityPath path = [&](double s) { return noncasimir_velocity(u0.r(), m.alpha(), m.nu(), s); };
  const Mat2 quad = commuting_quadrature_flow(Mat2::identity(), path, 2.0, {1e-9, 64}) * u0.matrix();
  const double quad_dev = max_abs_diff(quad, noncasimir_flow(u0, m.alpha(), m.nu(), 2.0).u.matrix());
  double rejected = 1.0;
  try {
    commuting_quadrature_flow(Mat2::identity(), [](double s) {
      return AlgebraElement::su2(Mat2::of(0.0, std::exp(1.0i * s), -std::exp(-1.0i * s), 0.0));
    }, 1.0);
  } catch (const CommutativityViolation&) {
    rejected = 0.0;
  }

  // RK4 order on y' = i y.
  const Field rotation = [](double, const State& y) { return State{-y[1], y[0]}; };
  const auto endpoint = [&](double step) {
    const State y = rk4_integrate(rotation, {1.0, 0.0}, 0.0, 1.0, step).states.back();
    return std::hypot(y[0] - std::cos(1.0), y[1] - std::sin(1.0));
  };
  const double ratio = endpoint(0.02) / endpoint(0.01);

  return {
      make_check("flows.conservation.H0", drift_h0, 1e-8, starts, seed),
      make_check("flows.conservation.det", drift_det, 1e-8, starts, seed),
      make_check("flows.conservation.momenta", drift_momenta, 1e-8, starts, seed),
      make_check("flows.casimir_vs_rk4", casimir_dev, 1e-6, starts, seed),
      make_check("flows.noncasimir_vs_rk4", noncasimir_dev, 1e-6, starts, seed),
      make_check("flows.perturbed_vs_rk4", perturbed_dev, 1e-6, starts, seed),
      make_check("flows.perturbed_gamma_modulus", perturbed_modulus, 1e-12, starts, seed),
      make_check("flows.momenta_su2_membership", momenta_membership, 1e-12, starts, seed),
      make_check("flows.rotator.norm_p", rot_norm, 0.0, 1001, seed),
      make_check("flows.rotator.orthogonality", rot_orth, 1e-10, 1001, seed),
      make_check("flows.rotator.period", period, 1e-10, 1, seed),
      make_check("flows.quadrature.accepts_commuting_path", accepted_commutator, 1e-9, 33, seed),
      make_check("flows.quadrature.matches_closed_form", quad_dev, 1e-8, 1, seed),
      make_check("flows.quadrature.rejects_noncommuting_path", rejected, 0.0, 1, seed),
      make_check("flows.rk4_order_ratio_minus_16", std::abs(ratio - 16.0), 2.0, 2, seed),
  };
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"brackets", "decompositions", "legendre", "flows", "all"};
  return names;
}

std::vector<Check> run_suite(const std::string& suite, std::uint64_t seed, std::size_t samples) {
  // Flow starts each integrate over [0, 10]; more than 20 adds time but no coverage.
  const std::size_t starts = std::min<std::size_t>(samples, 20);
  std::vector<Check> out;
  const auto append = [&](std::vector<Check> v) { out.insert(out.end(), v.begin(), v.end()); };
  if (suite == "brackets" || suite == "all") append(bracket_checks(seed, samples));
  if (suite == "decompositions" || suite == "all") append(decomposition_checks(seed, samples));
  if (suite == "legendre" || suite == "all") append(legendre_checks(seed, samples));
  if (suite == "flows" || suite == "all") append(flow_checks(seed, starts));
  if (std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end()) {
    std::string valid;
    for (const auto& n : suite_names()) valid += (valid.empty() ? "" : ", ") + n;
    throw InvalidArgument("unknown suite '" + suite + "' (valid: " + valid + ")");
  }
  return out;
}

}  // namespace dq
