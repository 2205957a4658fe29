#pragma once

#include <optional>
#include <vector>

#include "spinsim/qcore.hpp"

namespace spinsim {
namespace mpemba {

// Populations of the two-spin register in the |00>,|01>,|10>,|11> basis.
struct PopulationVector {
  double p00 = 0.25, p01 = 0.25, p10 = 0.25, p11 = 0.25;
  Eigen::Vector4d vec() const { return {p00, p01, p10, p11}; }
  static PopulationVector from(const Eigen::Vector4d& v) {
    return {v(0), v(1), v(2), v(3)};
  }
};

void validate(const PopulationVector& p);

struct MpembaParams {
  double k0 = 1.0;        // dipolar rate constant (1/s)
  double epsilon = 1e-5;  // purity factor
  double delta = 2.0 * M_PI * 89.0;  // resonance offset (rad/s)
  double theta = 0.0;     // preparation angle (rad)

  // extreme-narrowing rate from the dipolar constant b (rad/s) and tau_c (s)
  static double k0_from(double b, double tau_c) { return 12.0 * b * b * tau_c / 5.0; }
};

// Population-block generator with single-, double- and zero-quantum rates
// eta1 = K0 (1 -+ eps)/16, eta2 = K0 (1 -+ 2 eps)/4, eta0 = K0/24.
Eigen::Matrix4d build_lp(const MpembaParams& params);

// Zero-quantum-block generator on (p00, p01, p10, p11, c, c*), including the
// +-i Delta rotation of the coherence pair.
Eigen::MatrixXcd build_l0(const MpembaParams& params);

Eigen::Vector4d thermal_populations(double epsilon);

// near state: dephased rho(theta) = [1 + 2 eps (I1z + I2z cos 2theta)]/4;
// far state: inverted Zeeman order (1-2eps, 1, 1, 1+2eps)/4.
std::pair<PopulationVector, PopulationVector> prepare_states(double theta, double epsilon);

struct Overlaps {
  double a1 = 0.0, a2 = 0.0, a3 = 0.0;
};

// Left-eigenvector overlaps a_n = w_n . p(0), first order in epsilon.
Overlaps overlaps(const PopulationVector& p0, const MpembaParams& params);

enum class Metric { trace, relent };

struct MpembaOutcome {
  std::optional<double> crossing_time;
  std::vector<double> t, d_far, d_near;
};

// Evolve both states under the population generator, track the chosen
// distance to the thermal state, and bisect the first crossing of
// d_far - d_near. The window should cover several slow-mode lifetimes.
MpembaOutcome detect_crossing(const PopulationVector& near_state,
                              const PopulationVector& far_state,
                              const MpembaParams& params, Metric metric,
                              double t_window, int grid_n = 2000);

std::vector<Eigen::Vector4d> evolve_populations(const Eigen::Matrix4d& lp,
                                                const Eigen::Vector4d& p0,
                                                const std::vector<double>& t_grid);

// Closed-form populations of the dephased rho(theta) family: the (p00, p11)
// pair relaxes at 5K0/8, the (p01, p10) pair at 5K0/24 (first order in eps).
PopulationVector closed_form_populations(double theta, const MpembaParams& params,
                                         double t);

struct TwoQubitView {
  std::vector<double> sum_outer;   // p00 + p11 along the trajectory
  std::vector<double> sum_inner;   // p01 + p10
  std::vector<double> bias_outer;  // p00 - p11
  std::vector<double> bias_inner;  // p01 - p10
};

// Split the trajectory into the two effective two-level systems.
TwoQubitView effective_two_qubit_view(const std::vector<Eigen::Vector4d>& traj);

double trace_distance_pops(const Eigen::Vector4d& p, const Eigen::Vector4d& q);
double relative_entropy_pops(const Eigen::Vector4d& p, const Eigen::Vector4d& q);

}  // namespace mpemba
}  // namespace spinsim
