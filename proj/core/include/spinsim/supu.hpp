#pragma once

#include <vector>

#include "spinsim/dynamics.hpp"
#include "spinsim/qcore.hpp"

namespace spinsim {
namespace supu {

// A rigid rotation of the Bloch sphere: axis must be unit length.
struct RotationSpec {
  Eigen::Vector3d axis{1, 0, 0};
  double omega = 1.0;
};

Mat rotation_unitary(const RotationSpec& r, double delta);

// Normalized combination (cos(alpha) U0 + sin(alpha) U1) / N. Valid whenever
// the rotation axes are not antiparallel.
struct SuperposedUnitary {
  RotationSpec u0, u1;
  double alpha = 0.0;

  double phi() const;          // angle between the two rotation axes
  double axis_dot() const;     // n . m
  // u0 about x, u1 about the axis at angle phi from x in the xy plane
  static SuperposedUnitary planar(double alpha, double phi, double omega = 1.0);
};

void validate(const SuperposedUnitary& su);

// N^2(delta) = 1 + sin(2 alpha)(cos^2(w d/2) + n.m sin^2(w d/2)).
double normalization_sq(const SuperposedUnitary& su, double delta);

// The superposed unitary over [t0, tf]; unitary to 1e-10 by construction.
Mat evaluate(const SuperposedUnitary& su, double t0, double tf);

// Closed-form speed of evolution g(t) for the planar configuration with the
// Bloch vector starting at +z.
double speed_of_evolution(const SuperposedUnitary& su, double t);

// C_ij = tr[Q U Q U^dag]/2 with the maximally mixed state at t_i. Q must be
// dichotomous (Q^2 = 1).
double correlator(const SuperposedUnitary& su, const Mat& q, double ti, double tj);
double correlator_plain(const RotationSpec& r, const Mat& q, double ti, double tj);

struct LgiScan {
  int order = 3;
  std::vector<double> t;
  std::vector<double> k;
  double k_max = 0.0;
  double argmax_t = 0.0;
};

// K_n(t) = (n-1) C(t) - C((n-1) t) on a uniform grid over w t in (0, pi],
// with the arg max polished by golden-section search.
LgiScan k3_scan(const SuperposedUnitary& su, const Mat& q, int grid_n = 600);
LgiScan kn_scan(const SuperposedUnitary& su, const Mat& q, int n, int grid_n = 600);
LgiScan kn_scan_plain(const RotationSpec& r, const Mat& q, int n, int grid_n = 600);

struct DephasedScan {
  LgiScan scan;
  double lifetime = 0.0;  // last down-crossing of K3 through 1 on [0, 40/gamma]
};

// K3 under the phenomenological Bloch equation with transverse damping gamma;
// integrated by fixed-step RK4 with dt <= 1e-3 * 2 pi / omega.
DephasedScan dephased_k3_bloch(const SuperposedUnitary& su, double gamma,
                               int grid_n = 4000);

// K3 from the two-qubit ancilla realization with sigma_z dephasing of rate
// gamma/2 on both qubits and post-selection of the ancilla in |+>.
DephasedScan dephased_k3_ancilla(const SuperposedUnitary& su, double gamma,
                                 int grid_n = 4000);

// Ancilla realization of the superposed unitary itself: joint unitary
// |0><0| ox U0 + |1><1| ox U1 on (A, S), ancilla prepared in cos a |0> +
// sin a |1> and post-selected in |+>. Returns the renormalized output state.
Mat ancilla_realized_action(const SuperposedUnitary& su, const Mat& rho_s,
                            double t0, double tf);

// Pairwise-anticommuting Hermitian involutions with two unit coefficient
// vectors; the general route to a superposed unitary in any dimension.
struct GeneralSuperposition {
  std::vector<Mat> ops;   // the anticommuting set {V_k}
  Eigen::VectorXd r1, r2;
  double c1 = 1.0 / std::sqrt(2.0);
  double c2 = 1.0 / std::sqrt(2.0);
};

struct GeneralEvaluator {
  GeneralSuperposition spec;
  Mat h1, h2;              // the two involutory Hamiltonians
  Mat effective_hamiltonian;
  double normalization_sq(double theta) const;
  Mat evaluate(double theta) const;  // theta = t_j - t_i
};

GeneralEvaluator general_superposition_build(const GeneralSuperposition& gs);

}  // namespace supu
}  // namespace spinsim
