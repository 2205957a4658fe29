#pragma once

#include <vector>

#include "spinsim/qcore.hpp"

namespace spinsim {
namespace dynamics {

using qcore::DensityOperator;
using qcore::SubsystemLayout;

// Column-stacking vectorization: vec(A X B) = (B^T kron A) vec(X).
CVec vectorize(const Mat& m);
Mat unvectorize(const CVec& v, int d);
Mat left_mult(const Mat& a);    // superoperator of X -> A X
Mat right_mult(const Mat& b);   // superoperator of X -> X B

// Gamma[A,B](rho) = A rho B - (B A rho + rho B A)/2, scaled by rate.
struct DissipatorTerm {
  Mat a, b;
  double rate = 0.0;
};

Mat build_dissipator(const DissipatorTerm& term);

struct Liouvillian {
  int dim = 0;          // Hilbert-space dimension
  Mat op;               // d^2 x d^2 superoperator
  Mat hamiltonian_part;
  Mat dissipative_part;
};

Liouvillian build_liouvillian(const Mat& hamiltonian,
                              const std::vector<DissipatorTerm>& terms);
Liouvillian dissipative_only(int dim, const std::vector<DissipatorTerm>& terms);

// exp(L t) applied to the vectorized state; the result is re-validated.
DensityOperator propagate(const Liouvillian& l, const DensityOperator& rho0, double t);
Mat propagate_mat(const Liouvillian& l, const Mat& rho0, double t);

// Fixed-step classical RK4 on the vectorized master equation. Kept free of
// matrix exponentials so it can serve as an independent cross-check.
Mat propagate_rk4(const Liouvillian& l, const Mat& rho0, double t, double dt);

struct DecayMode {
  Complex lambda;
  Mat right;  // matrix form of the right eigenvector
  Mat left;   // matrix form of the left eigenvector, <left_i, right_j> = delta_ij
};

// Eigenmodes sorted by |Re lambda| ascending; mode 0 carries the steady state.
// Throws when the eigenvector matrix is ill-conditioned (defective L).
std::vector<DecayMode> decay_modes(const Liouvillian& l);

// Two-spin homonuclear relaxation parameters. b and omega0 are angular
// frequencies (rad/s), tau_c in seconds, epsilon the dimensionless purity.
struct RelaxationSpec {
  double b = 0.0;
  double delta_csa = 0.0;
  double tau_c = 0.0;
  double omega0 = 0.0;
  bool beta_correction = true;
  double epsilon = 0.0;
  bool include_csa = false;
  bool include_cross_correlation = false;
};

// Spectral density K(x) = 12 b^2 tau_c / (5 (1 + x^2 tau_c^2)).
double spectral_density(const RelaxationSpec& spec, double x);

// Dissipative part of the dipolar master equation on a two-spin register:
// sum_m K(m omega0) e^{m epsilon} Gamma[T_2m, T_2m^dagger], plus optional CSA
// and cross-correlation terms. The coherent Hamiltonian is not included.
Liouvillian dipolar_liouvillian(const RelaxationSpec& spec);

// S(t_k) = tr[(sx + i sy)_detect e^{-iHt} rho0 e^{iHt}] e^{-lb t}.
std::vector<Complex> fid_signal(const DensityOperator& rho0, const Mat& h_eff,
                                int detect_spin, const std::vector<double>& t_grid,
                                double line_broadening = 0.0);
// Relaxed variant driven by a full Liouvillian instead of a Hamiltonian.
std::vector<Complex> fid_signal(const DensityOperator& rho0, const Liouvillian& l,
                                int detect_spin, const std::vector<double>& t_grid,
                                double line_broadening = 0.0);

}  // namespace dynamics
}  // namespace spinsim
