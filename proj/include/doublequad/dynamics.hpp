#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "doublequad/groups.hpp"
#include "doublequad/mat2.hpp"
#include "doublequad/poisson.hpp"
#include "doublequad/quadrature.hpp"

namespace dq {

using SB2Function = std::function<double(const SB2Element&)>;
using SU2Function = std::function<double(const SU2Element&)>;
using Vec3Function = std::function<double(const Vec3&)>;
using RadialFunction = std::function<double(double r)>;

// ------------------------------------------------------------ free Hamiltonian

/// H0 = Tr(a a^*)/2 = sum |z_i|^2 / 2.
double free_hamiltonian(const Mat2& a);
double free_hamiltonian(const SL2Element& a);
/// (|gamma|^2 + r^2 + r^-2) / 2
double free_hamiltonian(const SB2Element& u);
/// Accepts sl2c, sb2 and double_group points.
double free_hamiltonian(const PoissonPoint& p);

/// Right-hand side of the Casimir dynamics on SL(2,C) with F frozen at F_value:
///   z1' = -(i/2) F (H0 z1 - conj z4),   z2' = -(i/2) F (H0 z2 + conj z3),
///   z3' = -(i/2) F (H0 z3 + conj z2),   z4' = -(i/2) F (H0 z4 - conj z1).
Mat2 sl2c_vf(const Mat2& a, double F_value);
Mat2 sl2c_vf(const SL2Element& a, double F_value);

// -------------------------------------------------------------- Legendre map

/// Velocity -(i/4) F [[r^2 - r^-2 + |g|^2, 2 g/r], [2 conj(g)/r, r^-2 - r^2 - |g|^2]] in su(2).
AlgebraElement legendre_map(const SB2Element& u, double F_value);

enum class LegendreInverse {
  /// Positive root of (1 + |w|^2) r^4 - 2 s r^2 - 1 = 0; inverts legendre_map exactly.
  quartic,
  /// r = s + sqrt(s^2 + |w|^2 + 1), gamma = r w; does not invert legendre_map.
  paper_verbatim,
};

/// Momentum for the velocity v = -(i/2) [[s, w], [conj w, -s]] under legendre_map(., F_value).
SB2Element legendre_invert(const AlgebraElement& v, double F_value = 1.0,
                           LegendreInverse method = LegendreInverse::quartic);

// -------------------------------------------------------------------- flows

/// Split coordinates (g, u) of a point of the double. For the systems whose
/// momenta live in SU(2), g carries the momenta (alpha, nu).
struct DoubleFlowState {
  double time = 0.0;
  SU2Element g;
  SB2Element u;

  SL2Element recomposed() const { return compose(g, u); }
};

struct RotatorState {
  double time = 0.0;
  Mat3R g = Mat3R::identity();
  Vec3 p;
};

/// Casimir one-form F dH0 on SB(2,C): u is frozen and g(t) = g0 exp(t L(u0)).
DoubleFlowState casimir_flow(const SU2Element& g0, const SB2Element& u0, const SB2Function& F,
                             double t);

/// Rigid rotator generalization: p frozen, g(t) = g0 exp(t F(p) hat(p)).
RotatorState rotator_flow(const Mat3R& g0, const Vec3& p, const Vec3Function& F, double t);

/// sb(2,C) generator -F/2 [[|nu|^2, 2i alpha (Re nu - Im nu)], [0, -|nu|^2]].
Mat2 momenta_su2_generator(Complex alpha, Complex nu, double F_value);

/// SU(2) momenta (alpha, nu) frozen, u(t) = exp(t L) u0.
DoubleFlowState momenta_su2_flow(const SB2Element& u0, Complex alpha, Complex nu,
                                 const SU2Function& F, double t);

enum class NoncasimirVariant {
  /// gamma' = (i/2) conj(alpha) conj(nu) / r, which is what the bracket table gives.
  bracket,
  /// gamma' = -(i/2) conj(alpha) (Re nu + Im nu) / r.
  printed,
};

/// One-form dH with H = |nu|^2/2 on SU(2) momenta: nu and r frozen,
/// alpha(t) = alpha0 exp(i |nu0|^2 t / 2), gamma from the exact antiderivative.
DoubleFlowState noncasimir_flow(const SB2Element& u0, Complex alpha0, Complex nu0, double t,
                                NoncasimirVariant variant = NoncasimirVariant::bracket);

/// The unipotent factor P(t) with u(t) = P(t) u0 for noncasimir_flow.
Mat2 noncasimir_prefactor(double r0, Complex alpha0, Complex nu0, double t,
                          NoncasimirVariant variant = NoncasimirVariant::bracket);

/// Velocity u' u^-1 of noncasimir_flow at time t: a multiple of [[0, 1], [0, 0]].
AlgebraElement noncasimir_velocity(double r0, Complex alpha0, Complex nu0, double t,
                                   NoncasimirVariant variant = NoncasimirVariant::bracket);

/// Generators X and A0 of a time-dependent velocity exp(tX) A0 exp(-tX).
struct InteractionPictureData {
  AlgebraElement X = AlgebraElement::su2(Mat2::zero());
  AlgebraElement A0 = AlgebraElement::su2(Mat2::zero());
};

/// g(t) = g0 exp(t (X + A0)) exp(-t X).
SU2Element interaction_picture_flow(const SU2Element& g0, const InteractionPictureData& data,
                                    double t);

/// Velocity of the perturbed system at momentum (r, gamma):
///   -(i/4) [[F (r^2 - r^-2 + |g|^2) - l r, 2 F g / r], [2 F conj(g) / r, F (r^-2 - r^2 - |g|^2) + l r]].
Mat2 perturbed_velocity(double r, Complex gamma, double F_value, double lambda);

/// X = diag(-(i/4) l r0, (i/4) l r0) and A0 = perturbed_velocity(r0, gamma0, F(r0), l).
InteractionPictureData perturbed_generators(const SB2Element& u0, const RadialFunction& F,
                                            double lambda);

/// One-form F(r) dH0 + l dr: r frozen, gamma(t) = gamma0 exp(-(i/2) l r0 t),
/// g(t) = g0 exp(t (X + A0)) exp(-t X).
DoubleFlowState perturbed_flow(const SU2Element& g0, const SB2Element& u0, const RadialFunction& F,
                               double lambda, double t);

struct QuadratureOptions {
  /// Frobenius-norm bound on pairwise commutators of sampled velocities.
  double tolerance = 1e-9;
  /// Simpson intervals; the commutativity check uses the same intervals + 1 nodes.
  int intervals = 32;
};

using VelocityPath = std::function<AlgebraElement(double)>;

/// g0 exp(int_0^t1 L(s) ds), after checking that the sampled L(s) commute.
/// Throws CommutativityViolation with the worst pair otherwise.
Mat2 commuting_quadrature_flow(const Mat2& g0, const VelocityPath& path, double t1,
                               const QuadratureOptions& opts = {});

/// Largest pairwise commutator norm over the Simpson nodes of [0, t1], with the pair.
struct CommutatorCheck {
  double max_norm = 0.0;
  std::size_t first = 0;
  std::size_t second = 0;
};
CommutatorCheck max_commutator(const std::vector<Mat2>& samples);

// ------------------------------------------------------- action-angle models

using VectorMap = std::function<std::vector<double>(const std::vector<double>&)>;
using MatrixMap = std::function<Eigen::MatrixXd(const std::vector<double>&)>;

/// I' = 0, phi' = nu(I).
struct FrequencyModel {
  VectorMap frequencies;
};

/// I' = F(I), phi' = A(I) phi.
struct LinearFiberModel {
  VectorMap drift;
  MatrixMap matrix;
  /// RK4 step for I' = F(I).
  double step = 1e-3;
  QuadratureOptions quadrature;
};

struct ActionAngleSpec {
  std::vector<double> I0;
  std::vector<double> phi0;
  std::variant<FrequencyModel, LinearFiberModel> model;
};

struct ActionAngleState {
  double time = 0.0;
  std::vector<double> I;
  /// Value produced by the quadrature formula.
  std::vector<double> phi;
  /// phi reduced to [0, 2 pi).
  std::vector<double> phi_mod;
};

ActionAngleState action_angle_flow(const ActionAngleSpec& spec, double t);

// ------------------------------------------------------------- system specs

struct RotatorSpec {
  Mat3R g0 = Mat3R::identity();
  Vec3 p;
  Vec3Function F;
};

struct CasimirSL2CSpec {
  SU2Element g0;
  SB2Element u0;
  SB2Function F;
};

struct MomentaSU2Spec {
  SB2Element u0;
  SU2Element momenta;
  SU2Function F;
};

struct NoncasimirHSpec {
  SB2Element u0;
  SU2Element momenta;
  NoncasimirVariant variant = NoncasimirVariant::bracket;
};

struct PerturbedSpec {
  SU2Element g0;
  SB2Element u0;
  RadialFunction F;
  double lambda = 0.0;
};

using SystemSpec = std::variant<RotatorSpec, CasimirSL2CSpec, MomentaSU2Spec, NoncasimirHSpec,
                                PerturbedSpec, ActionAngleSpec>;

// --------------------------------------- equations of motion for the oracle
//
// Flat real layouts:
//   sl2c     [z1.re, z1.im, ..., z4.re, z4.im]
//   so3      g row-major (9)
//   sb2      [r, gamma.re, gamma.im]
//   double   [alpha.re, alpha.im, nu.re, nu.im, r, gamma.re, gamma.im]
//   su2+sb2  [alpha.re, alpha.im, nu.re, nu.im, gamma.re, gamma.im] (r held fixed)

State pack(const Mat2& a);
Mat2 unpack_mat2(const State& y);
State pack(const Mat3R& g);
Mat3R unpack_mat3(const State& y);
State pack_double(const SU2Element& g, const SB2Element& u);
DoubleFlowState unpack_double(const State& y, double time);

/// Equation of motion on SL(2,C) with F evaluated on the SB(2,C) factor of the current point.
Field sl2c_field(const SB2Function& F);
/// g' = g hat(F(p) p).
Field rotator_field(const Vec3& p, const Vec3Function& F);
/// u' = L u on the sb2 layout.
Field momenta_su2_field(const Mat2& generator);
/// rate(a) = sum_b {x_a, x_b} eta_b on the double layout, from the bracket table.
Field bracket_field(const OneFormSpec& eta);
/// gamma' = -(i/2) l r gamma, g' = g perturbed_velocity(r, gamma, F(r), l) on the su2+sb2 layout.
Field perturbed_field(double r, const RadialFunction& F, double lambda);
/// [I, phi] layout.
Field action_angle_field(const ActionAngleSpec& spec);

}  // namespace dq
