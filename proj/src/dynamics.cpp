#include "doublequad/dynamics.hpp"

#include <cmath>
#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

#include "doublequad/errors.hpp"

namespace dq {

using namespace std::complex_literals;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// sin(x)/x
double sinc(double x) {
  if (std::abs(x) < 1e-6) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

// int_0^t exp(-i w s) ds, stable as w -> 0.
Complex rotating_phase_integral(double w, double t) {
  return t * std::exp(-0.5i * w * t) * sinc(0.5 * w * t);
}

Mat2 su2_velocity_matrix(double diag, Complex off) {
  return -0.25i * Mat2::of(diag, 2.0 * off, 2.0 * std::conj(off), -diag);
}

}  // namespace

// ------------------------------------------------------------ free Hamiltonian

double free_hamiltonian(const Mat2& a) {
  double s = 0.0;
  for (const auto& z : a.e) s += std::norm(z);
  return 0.5 * s;
}

double free_hamiltonian(const SL2Element& a) { return free_hamiltonian(a.matrix()); }

double free_hamiltonian(const SB2Element& u) {
  const double r = u.r();
  return 0.5 * (std::norm(u.gamma()) + r * r + 1.0 / (r * r));
}

double free_hamiltonian(const PoissonPoint& p) {
  switch (p.system) {
    case System::sl2c: {
      double s = 0.0;
      for (int k = 0; k < 4; ++k) s += (p.values[k] * p.values[k + 4]).real();
      return 0.5 * s;
    }
    case System::sb2:
    case System::double_group:
      return free_hamiltonian(SB2Element(value_of(p, "r").real(), value_of(p, "gamma")));
    default:
      throw IndexMismatchError(std::string("free_hamiltonian: undefined on system ") +
                               to_string(p.system));
  }
}

Mat2 sl2c_vf(const Mat2& a, double F_value) {
  const double h0 = free_hamiltonian(a);
  const Complex c = -0.5i * F_value;
  const Complex z1 = a(0, 0), z2 = a(0, 1), z3 = a(1, 0), z4 = a(1, 1);
  return Mat2::of(c * (h0 * z1 - std::conj(z4)), c * (h0 * z2 + std::conj(z3)),
                  c * (h0 * z3 + std::conj(z2)), c * (h0 * z4 - std::conj(z1)));
}

Mat2 sl2c_vf(const SL2Element& a, double F_value) { return sl2c_vf(a.matrix(), F_value); }

// -------------------------------------------------------------- Legendre map

AlgebraElement legendre_map(const SB2Element& u, double F_value) {
  const double r = u.r();
  const Complex g = u.gamma();
  const double diag = r * r - 1.0 / (r * r) + std::norm(g);
  return AlgebraElement::su2(F_value * su2_velocity_matrix(diag, g / r));
}

SB2Element legendre_invert(const AlgebraElement& v, double F_value, LegendreInverse method) {
  if (v.kind != AlgebraKind::su2 || !(v.kind_residual() <= 1e-10 * std::max(1.0, frobenius_norm(v.mat())))) {
    throw InvariantViolation("legendre_invert: velocity is not traceless anti-Hermitian");
  }
  if (F_value == 0.0) {
    if (frobenius_norm(v.mat()) == 0.0) return SB2Element::identity();
    throw InvalidArgument("legendre_invert: F = 0 maps every momentum to zero velocity");
  }
  // v / F = -(i/2) [[s, w], [conj w, -s]]
  const Mat2 m = (1.0 / F_value) * v.mat();
  const double s = (2.0i * m(0, 0)).real();
  const Complex w = 2.0i * m(0, 1);
  const double w2 = std::norm(w);

  double r = 1.0;
  if (method == LegendreInverse::paper_verbatim) {
    r = s + std::sqrt(s * s + w2 + 1.0);
  } else {
    const double q = 1.0 + w2;
    const double root = std::sqrt(s * s + q);
    // Two algebraically equal forms of the positive root; pick the one without cancellation.
    const double r2 = s >= 0.0 ? (s + root) / q : 1.0 / (root - s);
    r = std::sqrt(r2);
  }
  return SB2Element(r, r * w);
}

// -------------------------------------------------------------------- flows

DoubleFlowState casimir_flow(const SU2Element& g0, const SB2Element& u0, const SB2Function& F,
                             double t) {
  const AlgebraElement velocity = legendre_map(u0, F(u0));
  return {t, g0 * exp_su2(t * velocity.mat()), u0};
}

RotatorState rotator_flow(const Mat3R& g0, const Vec3& p, const Vec3Function& F, double t) {
  if (orthogonality_error(g0) > kRenormalizeTolerance || std::abs(det(g0) - 1.0) > kRenormalizeTolerance) {
    throw InvariantViolation("rotator_flow: g0 is not a rotation");
  }
  return {t, g0 * rodrigues3(F(p) * p, t), p};
}

Mat2 momenta_su2_generator(Complex alpha, Complex nu, double F_value) {
  const double n2 = std::norm(nu);
  const Complex off = 2.0i * alpha * (nu.real() - nu.imag());
  return (-0.5 * F_value) * Mat2::of(n2, off, 0.0, -n2);
}

DoubleFlowState momenta_su2_flow(const SB2Element& u0, Complex alpha, Complex nu,
                                 const SU2Function& F, double t) {
  const SU2Element momenta(alpha, nu);
  const Mat2 L = momenta_su2_generator(momenta.alpha(), momenta.nu(), F(momenta));
  return {t, momenta, exp_sb2(t * L) * u0};
}

namespace {

// gamma' = -(i/2) conj(alpha(t)) c / r with c depending on the variant.
Complex noncasimir_coupling(Complex nu0, NoncasimirVariant variant) {
  return variant == NoncasimirVariant::bracket ? -std::conj(nu0) : Complex{nu0.real() + nu0.imag()};
}

}  // namespace

Mat2 noncasimir_prefactor(double r0, Complex alpha0, Complex nu0, double t,
                          NoncasimirVariant variant) {
  const double w = 0.5 * std::norm(nu0);
  const Complex c = noncasimir_coupling(nu0, variant);
  // r * (gamma(t) - gamma0) = -(i/2) c conj(alpha0) int_0^t exp(-i w s) ds
  const Complex shift = -0.5i * c * std::conj(alpha0) * rotating_phase_integral(w, t);
  (void)r0;
  return Mat2::of(1.0, shift, 0.0, 1.0);
}

AlgebraElement noncasimir_velocity(double r0, Complex alpha0, Complex nu0, double t,
                                   NoncasimirVariant variant) {
  (void)r0;
  const double w = 0.5 * std::norm(nu0);
  const Complex alpha_t = alpha0 * std::exp(1.0i * w * t);
  const Complex c = noncasimir_coupling(nu0, variant);
  return AlgebraElement::sb2(Mat2::of(0.0, -0.5i * std::conj(alpha_t) * c, 0.0, 0.0));
}

DoubleFlowState noncasimir_flow(const SB2Element& u0, Complex alpha0, Complex nu0, double t,
                                NoncasimirVariant variant) {
  const SU2Element m0(alpha0, nu0);
  if (m0.nu() == Complex{0.0}) return {t, m0, u0};
  const double w = 0.5 * std::norm(m0.nu());
  const SU2Element momenta(m0.alpha() * std::exp(1.0i * w * t), m0.nu());
  const Mat2 P = noncasimir_prefactor(u0.r(), m0.alpha(), m0.nu(), t, variant);
  return {t, momenta, SB2Element::from_matrix(P * u0.matrix())};
}

SU2Element interaction_picture_flow(const SU2Element& g0, const InteractionPictureData& data,
                                    double t) {
  const Mat2 x = data.X.mat();
  const Mat2 a0 = data.A0.mat();
  return g0 * exp_su2(t * (x + a0)) * exp_su2(-t * x);
}

Mat2 perturbed_velocity(double r, Complex gamma, double F_value, double lambda) {
  const double diag = F_value * (r * r - 1.0 / (r * r) + std::norm(gamma)) - lambda * r;
  return su2_velocity_matrix(diag, F_value * gamma / r);
}

InteractionPictureData perturbed_generators(const SB2Element& u0, const RadialFunction& F,
                                            double lambda) {
  const double r0 = u0.r();
  const double q = 0.25 * lambda * r0;
  InteractionPictureData d;
  d.X = AlgebraElement::su2(Mat2::diag(-1.0i * q, 1.0i * q));
  d.A0 = AlgebraElement::su2(perturbed_velocity(r0, u0.gamma(), F(r0), lambda));
  return d;
}

DoubleFlowState perturbed_flow(const SU2Element& g0, const SB2Element& u0, const RadialFunction& F,
                               double lambda, double t) {
  const double r0 = u0.r();
  const SB2Element u(r0, u0.gamma() * std::exp(-0.5i * lambda * r0 * t));
  return {t, interaction_picture_flow(g0, perturbed_generators(u0, F, lambda), t), u};
}

CommutatorCheck max_commutator(const std::vector<Mat2>& samples) {
  CommutatorCheck c;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (std::size_t j = i + 1; j < samples.size(); ++j) {
      const double n = frobenius_norm(commutator(samples[i], samples[j]));
      if (n > c.max_norm) c = {n, i, j};
    }
  }
  return c;
}

Mat2 commuting_quadrature_flow(const Mat2& g0, const VelocityPath& path, double t1,
                               const QuadratureOptions& opts) {
  if (opts.intervals < 2 || opts.intervals % 2 != 0) {
    throw InvalidArgument("commuting_quadrature_flow: interval count must be even and >= 2");
  }
  const int n = opts.intervals;
  std::vector<Mat2> nodes;
  nodes.reserve(n + 1);
  for (int k = 0; k <= n; ++k) {
    const AlgebraElement l = path(t1 * k / n);
    if (l.kind == AlgebraKind::so3) {
      throw InvalidArgument("commuting_quadrature_flow: so3 paths are not supported");
    }
    nodes.push_back(l.mat());
  }
  const CommutatorCheck check = max_commutator(nodes);
  if (check.max_norm >= opts.tolerance) {
    throw CommutativityViolation(
        "commuting_quadrature_flow: velocities at samples " + std::to_string(check.first) + " and " +
            std::to_string(check.second) + " do not commute (commutator norm " +
            std::to_string(check.max_norm) + ")",
        check.max_norm, check.first, check.second);
  }
  const double h = t1 / n;
  Mat2 integral = nodes.front() + nodes.back();
  for (int k = 1; k < n; ++k) integral += Complex{(k % 2 == 1) ? 4.0 : 2.0} * nodes[k];
  integral *= h / 3.0;
  return g0 * expm2(integral);
}

// ------------------------------------------------------- action-angle models

ActionAngleState action_angle_flow(const ActionAngleSpec& spec, double t) {
  ActionAngleState out;
  out.time = t;
  if (const auto* fm = std::get_if<FrequencyModel>(&spec.model)) {
    out.I = spec.I0;
    const auto nu = fm->frequencies(spec.I0);
    if (nu.size() != spec.phi0.size()) {
      throw DimensionMismatchError("action_angle_flow: frequency count differs from angle count");
    }
    out.phi.resize(nu.size());
    for (std::size_t k = 0; k < nu.size(); ++k) out.phi[k] = spec.phi0[k] + nu[k] * t;
  } else {
    const auto& lm = std::get<LinearFiberModel>(spec.model);
    if (t < 0.0) throw InvalidArgument("action_angle_flow: linear fiber model needs t >= 0");
    const int n = lm.quadrature.intervals;
    if (n < 2 || n % 2 != 0) throw InvalidArgument("action_angle_flow: interval count must be even");
    const std::size_t dim = spec.phi0.size();
    std::vector<double> nodes(n + 1);
    for (int k = 0; k <= n; ++k) nodes[k] = t * k / n;

    std::vector<std::vector<double>> actions;
    if (t == 0.0) {
      actions.assign(n + 1, spec.I0);
    } else {
      const Field drift = [&](double, const State& y) { return lm.drift(y); };
      actions = rk4_sample(drift, spec.I0, 0.0, nodes, lm.step).states;
    }
    std::vector<Eigen::MatrixXd> mats;
    for (const auto& I : actions) {
      mats.push_back(lm.matrix(I));
      if (mats.back().rows() != static_cast<Eigen::Index>(dim) ||
          mats.back().cols() != static_cast<Eigen::Index>(dim)) {
        throw DimensionMismatchError("action_angle_flow: A(I) has the wrong shape");
      }
    }
    CommutatorCheck worst;
    for (std::size_t i = 0; i < mats.size(); ++i) {
      for (std::size_t j = i + 1; j < mats.size(); ++j) {
        const double c = (mats[i] * mats[j] - mats[j] * mats[i]).norm();
        if (c > worst.max_norm) worst = {c, i, j};
      }
    }
    if (worst.max_norm >= lm.quadrature.tolerance) {
      throw CommutativityViolation("action_angle_flow: A(I(s)) samples " + std::to_string(worst.first) +
                                       " and " + std::to_string(worst.second) + " do not commute",
                                   worst.max_norm, worst.first, worst.second);
    }
    Eigen::MatrixXd integral = Eigen::MatrixXd::Zero(dim, dim);
    const double h = t / n;
    for (int k = 0; k <= n; ++k) {
      const double w = (k == 0 || k == n) ? 1.0 : ((k % 2 == 1) ? 4.0 : 2.0);
      integral += w * mats[k];
    }
    integral *= h / 3.0;
    const Eigen::MatrixXd propagator = integral.exp();
    const Eigen::VectorXd phi0 = Eigen::Map<const Eigen::VectorXd>(spec.phi0.data(), dim);
    const Eigen::VectorXd phi = propagator * phi0;
    out.I = actions.back();
    out.phi.assign(phi.data(), phi.data() + dim);
  }
  out.phi_mod.resize(out.phi.size());
  for (std::size_t k = 0; k < out.phi.size(); ++k) {
    double m = std::fmod(out.phi[k], kTwoPi);
    if (m < 0.0) m += kTwoPi;
    out.phi_mod[k] = m;
  }
  return out;
}

// --------------------------------------- equations of motion for the oracle

State pack(const Mat2& a) {
  State y(8);
  for (int k = 0; k < 4; ++k) {
    y[2 * k] = a.e[k].real();
    y[2 * k + 1] = a.e[k].imag();
  }
  return y;
}

Mat2 unpack_mat2(const State& y) {
  Mat2 a;
  for (int k = 0; k < 4; ++k) a.e[k] = {y.at(2 * k), y.at(2 * k + 1)};
  return a;
}

State pack(const Mat3R& g) { return State(g.e.begin(), g.e.end()); }

Mat3R unpack_mat3(const State& y) {
  Mat3R g;
  for (int k = 0; k < 9; ++k) g.e[k] = y.at(k);
  return g;
}

State pack_double(const SU2Element& g, const SB2Element& u) {
  return {g.alpha().real(), g.alpha().imag(), g.nu().real(), g.nu().imag(),
          u.r(),            u.gamma().real(), u.gamma().imag()};
}

DoubleFlowState unpack_double(const State& y, double time) {
  return {time, SU2Element({y.at(0), y.at(1)}, {y.at(2), y.at(3)}),
          SB2Element(y.at(4), {y.at(5), y.at(6)})};
}

Field sl2c_field(const SB2Function& F) {
  return [F](double, const State& y) {
    const Mat2 a = unpack_mat2(y);
    // F lives on SB(2,C); read u off the Iwasawa factor of the current point.
    const double s = 1.0 / std::sqrt(std::norm(a(0, 0)) + std::norm(a(1, 0)));
    const SB2Element u(1.0 / s, s * (std::conj(a(0, 0)) * a(0, 1) + std::conj(a(1, 0)) * a(1, 1)));
    return pack(sl2c_vf(a, F(u)));
  };
}

Field rotator_field(const Vec3& p, const Vec3Function& F) {
  const Mat3R gen = hat(F(p) * p);
  return [gen](double, const State& y) { return pack(unpack_mat3(y) * gen); };
}

Field momenta_su2_field(const Mat2& generator) {
  return [generator](double, const State& y) {
    const Mat2 u = Mat2::of(y.at(0), Complex{y.at(1), y.at(2)}, 0.0, 1.0 / y.at(0));
    const Mat2 du = generator * u;
    return State{du(0, 0).real(), du(0, 1).real(), du(0, 1).imag()};
  };
}

Field bracket_field(const OneFormSpec& eta) {
  return [eta](double, const State& y) {
    const PoissonPoint p =
        point_double({y.at(0), y.at(1)}, {y.at(2), y.at(3)}, y.at(4), {y.at(5), y.at(6)});
    const BracketTable& table = double_table();
    const auto rate = hamiltonian_field(table, covector(table, eta, p), p);
    const Complex da = rate[table.index_of("alpha")];
    const Complex dn = rate[table.index_of("nu")];
    const Complex dr = rate[table.index_of("r")];
    const Complex dg = rate[table.index_of("gamma")];
    return State{da.real(), da.imag(), dn.real(), dn.imag(), dr.real(), dg.real(), dg.imag()};
  };
}

Field perturbed_field(double r, const RadialFunction& F, double lambda) {
  const double f = F(r);
  return [r, f, lambda](double, const State& y) {
    const Complex alpha{y.at(0), y.at(1)}, nu{y.at(2), y.at(3)}, gamma{y.at(4), y.at(5)};
    const Mat2 g = Mat2::of(alpha, -std::conj(nu), nu, std::conj(alpha));
    const Mat2 dg = g * perturbed_velocity(r, gamma, f, lambda);
    const Complex dgamma = -0.5i * lambda * r * gamma;
    return State{dg(0, 0).real(), dg(0, 0).imag(), dg(1, 0).real(),
                 dg(1, 0).imag(), dgamma.real(),   dgamma.imag()};
  };
}

Field action_angle_field(const ActionAngleSpec& spec) {
  const std::size_t m = spec.I0.size();
  const std::size_t n = spec.phi0.size();
  return [spec, m, n](double, const State& y) {
    const std::vector<double> I(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(m));
    State dy(m + n, 0.0);
    if (const auto* fm = std::get_if<FrequencyModel>(&spec.model)) {
      const auto nu = fm->frequencies(I);
      for (std::size_t k = 0; k < n; ++k) dy[m + k] = nu.at(k);
    } else {
      const auto& lm = std::get<LinearFiberModel>(spec.model);
      const auto d = lm.drift(I);
      for (std::size_t k = 0; k < m; ++k) dy[k] = d.at(k);
      const Eigen::MatrixXd A = lm.matrix(I);
      const Eigen::VectorXd phi =
          Eigen::Map<const Eigen::VectorXd>(y.data() + m, static_cast<Eigen::Index>(n));
      const Eigen::VectorXd dphi = A * phi;
      for (std::size_t k = 0; k < n; ++k) dy[m + k] = dphi[static_cast<Eigen::Index>(k)];
    }
    return dy;
  };
}

}  // namespace dq
