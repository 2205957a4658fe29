#pragma once

#include <cstdint>
#include <vector>

#include "spinsim/qcore.hpp"

namespace spinsim {
namespace leeyang {

// Dimensionless two-site Ising parameters (beta J, beta h_A, beta h_B).
struct IsingParams {
  double beta_j = 0.0;
  double beta_ha = 0.0;
  double beta_hb = 0.0;
};

// Scalar couplings of the probe to the two sites, in Hz. With hbar = 1 the
// probe-site interaction strengths are lambda = pi J / 2.
struct ProbeCouplings {
  double j_pa = 49.504;
  double j_pb = 224.664;
  double lambda_a() const { return M_PI * j_pa / 2.0; }
  double lambda_b() const { return M_PI * j_pb / 2.0; }
  double ratio() const { return j_pb / j_pa; }
};

void validate(const ProbeCouplings& cpl);

struct LYPolynomial {
  double gamma = 1.0;  // e^{-2 beta J}
};

// f(z1, z2) = 1 + Gamma z1 + Gamma z2 + z1 z2.
Complex ly_eval(const LYPolynomial& p, Complex z1, Complex z2);

// z1(t), z2(t) along the torus line fixed by the Ising parameters.
Complex torus_z1(const IsingParams& p, const ProbeCouplings& cpl, double t);
Complex torus_z2(const IsingParams& p, const ProbeCouplings& cpl, double t);

// Hyperbolic expansion coefficients of exp(-beta H_AB) over
// {1, sz_A, sz_B, sz_A sz_B}.
struct SeriesCoefficients {
  double ca, cb, cc, cd;
};
SeriesCoefficients series_coefficients(const IsingParams& p);

struct ProbeTrace {
  std::vector<double> t, sx, sy, coherence;
};

// Closed-form probe expectation values <sx>(t), <sy>(t) (normalized so that
// <sx>(0) = 1) and the coherence L = (sx^2 + sy^2)/4.
ProbeTrace probe_trajectory(const IsingParams& p, const ProbeCouplings& cpl,
                            const std::vector<double>& t_grid);
void probe_point(const IsingParams& p, const ProbeCouplings& cpl, double t,
                 double* sx, double* sy);

struct CoamoebaPoint {
  double theta1 = 0.0, theta2 = 0.0;  // stored in [0, 2 pi)
};

struct ZeroRecord {
  double t = 0.0;
  CoamoebaPoint angles;
};

// Times in [0, t_max] where both quadratures vanish simultaneously, located
// by bracketing of the coherence minima and polished to the tolerance. Only
// minima with both quadratures below `tol` survive. Empty result means the
// chosen field point is outside the amoeba (or the line missed the zeros).
std::vector<ZeroRecord> find_zeros(const IsingParams& p, const ProbeCouplings& cpl,
                                   double t_max, double tol = 1e-7);

// Distinct coamoeba points accumulated from find_zeros, deduplicated at
// 1e-6 rad within the fundamental period.
std::vector<CoamoebaPoint> sample_coamoeba(const IsingParams& p,
                                           const ProbeCouplings& cpl, double t_max,
                                           double tol = 1e-7);

// Exact intersection of the fixed-modulus torus with the zero set: the
// coamoeba slice at this amoeba point. Empty iff the point is outside the
// amoeba. At the amoeba origin the slice is a curve; it is returned sampled
// at `curve_samples` points.
std::vector<CoamoebaPoint> coamoeba_slice(const IsingParams& p, int curve_samples = 256);
bool amoeba_member(const IsingParams& p);

struct MiTrace {
  std::vector<double> t, sx, sy, coherence, mi;
};

// Full three-qubit evolution of probe + system; returns quadratures,
// coherence and the probe-system mutual information.
MiTrace mutual_information_trace(const IsingParams& p, const ProbeCouplings& cpl,
                                 const std::vector<double>& t_grid);

// Deviation part of the initial state: Ca Ix^P + Cb 2Ix^P Iz^A + Cc 2Ix^P Iz^B
// + Cd 4Ix^P Iz^A Iz^B on the (P, A, B) register.
Mat target_state(const IsingParams& p);

// Smallest positive root of cos(pi (Jpa+Jpb) tau) / cos(pi (Jpa-Jpb) tau)
// = e^{2 beta J}; throws when no root exists in (0, 1/(2 |Jpa-Jpb|)).
double solve_tau(double beta_j, const ProbeCouplings& cpl);

// Deviation state produced by the probe-only preparation sequence
// (theta1 pulse, theta2 pulse, tau delay, coherence filter).
Mat preparation_sequence_state(const ProbeCouplings& cpl, double theta1,
                               double theta2, double tau);

// Scale-free overlap between two traceless deviation operators.
double deviation_overlap(const Mat& a, const Mat& b);

enum class FitMode { full, xx_only, yy_only };

struct PreparationParams {
  double theta1 = 0.0, theta2 = 0.0, tau = 0.0;
};

struct PreparationFit {
  PreparationParams params;
  double residual = 0.0;  // l1 distance between unit-normalized fitted blocks
  bool flagged = false;   // residual above 1e-3
};

// Multi-start local search (64 seeded starts, coordinate refinement) for the
// pulse parameters reproducing the target coefficients in the given mode.
PreparationFit fit_preparation(const IsingParams& p, const ProbeCouplings& cpl,
                               FitMode mode, uint64_t seed = 0);

}  // namespace leeyang
}  // namespace spinsim
