#pragma once

#include <map>
#include <string>
#include <vector>

#include "spinsim/qcore.hpp"

namespace spinsim {
namespace entloc {

using qcore::DensityOperator;

// Weyl-Heisenberg shift/clock pair: X|j> = |j+1 mod d>, Z|j> = w^j |j>.
struct WeylPair {
  int d = 2;
  Mat x, z;
};
WeylPair weyl_pair(int d);

// |phi_mn> = (Z^n X^m ox 1) |phi_00> with |phi_00> = sum_j |jj>/sqrt(d).
CVec bell_state(int d, int m, int n);

// sum_k p_k |k><k|_C ox |phi_mn><phi_mn| with k = m d + n; C has dimension d^2.
DensityOperator classical_tripartite(int d, const std::vector<double>& weights);

// U_CA = sum_k |k><k| ox (X^dag)^m (Z^dag)^n, acting on C ox A.
Mat localization_unitary(int d);

// Kraus set K_rs = |phi_00><phi_rs| on the A-B pair.
struct LocalizationChannel {
  int d = 2;
  std::vector<Mat> kraus;
  Mat apply(const Mat& rho_ab) const;
};
LocalizationChannel induced_channel(int d);

// Channel applied to half of the unnormalized maximally entangled state;
// positive semi-definite iff the channel is completely positive.
Mat choi_matrix(const LocalizationChannel& ch);

struct QdpiReport {
  double i_before = 0.0;
  double i_after = 0.0;
  double choi_min_eig = 0.0;
  bool cptp = false;
  std::string verdict;
};

// Mutual-information audit across the A:B cut under the localization channel.
QdpiReport qdpi_audit(const DensityOperator& before, const DensityOperator& after,
                      const LocalizationChannel& ch);

struct LocalizationTrace {
  std::vector<double> tau, entanglement, discord;
};

// Evolution of the experimental three-qubit state under the C-A zz coupling
// alone: entanglement localizes onto A-B while C stays discord-free.
LocalizationTrace zz_localization_trace(double j_hz, const std::vector<double>& tau_grid);

// (1/d) sum_{mn} |k>_C |phi_mn>, the purification where C is entangled with AB.
CVec quantum_tripartite(int d);

// Sum of branch entanglements of a C-flagged mixture (flags condition).
double flagged_entanglement(const DensityOperator& rho_cab);

// A register state labeled by its coherence orders (q_F, q_H) under collective
// z-rotations with gyromagnetic weights.
struct CoherenceOrderState {
  int q_f = 0, q_h = 0;
  DensityOperator state;
  int n_f = 0, n_h = 0;  // how many leading F / trailing H qubits
};

// The localized/delocalized register states used in the robustness study.
CoherenceOrderState coherence_state_01();   // (0,+1): |010> + |101>
CoherenceOrderState coherence_state_2m1();  // (2,-1): |001> + |110>
CoherenceOrderState coherence_state_21();   // (2,+1): |000> + |111>
CoherenceOrderState coherence_state_00();   // (0,0):  |0101> + |1010>

// Verify the eigen-coherence property under a collective weighted z rotation.
bool verify_coherence_order(const CoherenceOrderState& s, double phi = 0.7);

// Collective Gaussian z-noise with weights gamma_F : gamma_H plus a uniform
// intrinsic floor; rates are (q_F g_F + q_H g_H)^2 sigma^2 + 1/t2_floor.
struct RobustnessModel {
  double gamma_f = 40.078;
  double gamma_h = 42.577;
  double sigma_sq = 0.0;
  double t2_floor = 0.0;
  // calibrate sigma and the floor from the zero-order and single-quantum
  // lifetimes (seconds)
  static RobustnessModel fitted(double tau_zero_order, double tau_single_quantum);
};

struct DecayEntry {
  int q_f = 0, q_h = 0;
  double tau = 0.0;  // fitted decay constant (s)
};

struct DecayReport {
  std::vector<DecayEntry> entries;                      // input order
  std::vector<std::vector<double>> curves;              // per state, on t_grid
};

// Decay e^{-rate t} of each labeled coherence on the grid, with the constant
// recovered by a log-linear fit.
DecayReport dephasing_robustness(const std::vector<CoherenceOrderState>& states,
                                 const RobustnessModel& model,
                                 const std::vector<double>& t_grid);

}  // namespace entloc
}  // namespace spinsim
