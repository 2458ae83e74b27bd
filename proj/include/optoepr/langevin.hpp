#pragma once

// Exact frequency-domain solutions of the linearized Langevin systems, output
// covariance assembly and standard-form reduction.
//
// Operator conventions: x(w) is the Fourier component of x(t) and x^dag(w) the
// component of x^dag(t), i.e. [x(-w)]^dag. Every component at a given
// frequency is an independent bosonic mode; the entangled pair is
// b1 = a1_out(w), b2 = a2_out(-w).

#include <complex>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "optoepr/adiabatic.hpp"
#include "optoepr/covariance.hpp"
#include "optoepr/steady_state.hpp"

namespace optoepr {

using ResponseMatrix = Eigen::Matrix<std::complex<double>, 4, 6>;

/// Input columns: a1_in, a1_in^dag, a2_in, a2_in^dag, am_in, am_in^dag.
/// Output rows:   a1_out, a1_out^dag, a2_out, a2_out^dag.
struct LinearResponse {
  double omega = 0.0;
  ResponseMatrix map = ResponseMatrix::Zero();
};

namespace col {
inline constexpr int a1 = 0, a1_dag = 1, a2 = 2, a2_dag = 3, am = 4, am_dag = 5;
}
namespace row {
inline constexpr int a1 = 0, a1_dag = 1, a2 = 2, a2_dag = 3;
}

/// Three-mode rotating-wave system {a1, a2^dag, a_m}. Throws SingularDrift.
LinearResponse rwa3_solve(const DerivedParams& derived, double omega);

/// Six-operator system with counter-rotating terms, in the per-mode laser
/// frames. The sideband `omega` maps to frame frequency omega + omega_m + delta.
LinearResponse full6_solve(const DerivedParams& derived, double omega);

/// full6 response at a raw frame frequency (no sideband offset).
LinearResponse full6_frame_response(const DerivedParams& derived, double frame_omega);

/// How mechanical noise reaches a2_out^dag in the eliminated model.
enum class NoiseRouting {
  Exact,     // inversion of the 2x2 drift matrix: -I(-w)^*
  AsPrinted  // same transfer as a1_out with opposite sign: -I(w)
};

/// Two-mode model after eliminating a_m, with input-output relations applied.
LinearResponse adiabatic_response(const DerivedParams& derived, double omega,
                                  NoiseRouting routing = NoiseRouting::Exact);

/// Symmetrized covariance of (X1, P1, X2, P2) for the pair (a1_out(w), a2_out(-w)).
/// Optical inputs are vacuum, the mechanical input has occupancy n_m.
Covariance4 assemble_covariance(const LinearResponse& resp, double n_m);

/// Bosonic commutators [b, b^dag] of the two output modes of the pair.
std::pair<double, double> output_commutators(const LinearResponse& resp);

/// Standard-form parameters without the symmetry check.
StandardForm standard_form_parameters(const Covariance4& V);

/// Standard form; throws NotSymmetricState if the diagonal blocks deviate from
/// n I by more than 5% of n.
StandardForm standard_form_reduce(const Covariance4& V);

/// Logarithmic negativity from the smaller partially transposed symplectic eigenvalue.
double log_negativity(const Covariance4& V);

/// Smaller partially transposed symplectic eigenvalue.
double pt_symplectic_min(const Covariance4& V);

/// <a1^dag a1> from the rwa3 intracavity spectrum integrated over [-delta, delta].
double intracavity_occupation(const DerivedParams& derived);

enum class ModelKind { Adiabatic, AdiabaticExact, Rwa3, Full6 };

std::string to_string(ModelKind kind);
ModelKind model_from_string(const std::string& name);

/// One spectrum row for any model. Closed form for Adiabatic; the others go
/// through assemble_covariance and standard-form reduction. Asymmetric states
/// carry an error and a NaN EOF but keep n, k_x and the log negativity.
SpectrumPoint evaluate_point(const DerivedParams& derived, double omega, ModelKind kind);

std::vector<SpectrumPoint> model_spectrum(const DerivedParams& derived,
                                          std::span<const double> omega_grid, ModelKind kind);

struct ComparisonRow {
  double omega = 0.0;
  std::vector<SpectrumPoint> points;  // one per model, in report order
  std::vector<double> rel_dev;        // |x_m - x_ref| / x_ref on epr_variance; [0] = 0
};

struct ComparisonReport {
  std::vector<ModelKind> models;  // models[0] is the reference
  std::vector<ComparisonRow> rows;
  std::vector<double> max_rel_dev;  // per model over successful rows
};

ComparisonReport compare_models(const DerivedParams& derived, std::span<const double> omega_grid,
                                std::vector<ModelKind> models = {ModelKind::Adiabatic,
                                                                 ModelKind::Rwa3,
                                                                 ModelKind::Full6});

}  // namespace optoepr
