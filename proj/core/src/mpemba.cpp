#include "spinsim/mpemba.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace spinsim {
namespace mpemba {

void validate(const PopulationVector& p) {
  Eigen::Vector4d v = p.vec();
  if (v.minCoeff() < -1e-9)
    throw std::invalid_argument("PopulationVector: negative population");
  if (std::abs(v.sum() - 1.0) > 1e-9)
    throw std::invalid_argument("PopulationVector: populations must sum to 1");
}

Eigen::Matrix4d build_lp(const MpembaParams& params) {
  const double k = params.k0, e = params.epsilon;
  const double sp = k * (1 - e) / 16.0, sm = k * (1 + e) / 16.0;  // single quantum
  const double dp = k * (1 - 2 * e) / 4.0, dm = k * (1 + 2 * e) / 4.0;  // double quantum
  const double zq = k / 24.0;
  Eigen::Matrix4d m;
  m << -sp - sp - dp, sm, sm, dm,
       sp, -zq - sm - sp, zq, sm,
       sp, zq, -zq - sm - sp, sm,
       dp, sp, sp, -dm - sm - sm;
  return m;
}

Eigen::MatrixXcd build_l0(const MpembaParams& params) {
  const double k = params.k0, e = params.epsilon;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(6, 6);
  Eigen::Matrix4d lp = build_lp(params);
  m.topLeftCorner<4, 4>() = lp.cast<Complex>();
  // population -> coherence drive and the damped, Delta-rotated coherences
  const double sp = k * (1 - e) / 16.0, sm = k * (1 + e) / 16.0;
  const double zq = k / 24.0;
  const double mix = -k * (1 + e) / 32.0 - k * (1 - e) / 32.0;
  // rows p00/p11 and columns c, c*
  m(0, 4) = m(0, 5) = sm;
  m(3, 4) = m(3, 5) = sp;
  m(1, 4) = m(1, 5) = mix;
  m(2, 4) = m(2, 5) = mix;
  // coherence rows driven by populations
  m(4, 0) = sp; m(4, 3) = sm; m(4, 1) = mix; m(4, 2) = mix;
  m(5, 0) = sp; m(5, 3) = sm; m(5, 1) = mix; m(5, 2) = mix;
  // coherence self-terms
  m(4, 4) = Complex(-zq - sm - sp, params.delta);
  m(4, 5) = zq;
  m(5, 4) = zq;
  m(5, 5) = Complex(-zq - sm - sp, -params.delta);
  return m;
}

Eigen::Vector4d thermal_populations(double epsilon) {
  return Eigen::Vector4d(1 + 2 * epsilon, 1, 1, 1 - 2 * epsilon) / 4.0;
}

std::pair<PopulationVector, PopulationVector> prepare_states(double theta, double epsilon) {
  if (!(theta > 0.0) || !(theta < M_PI / 2.0))
    throw std::invalid_argument("prepare_states: theta must lie in (0, pi/2)");
  const double c = std::cos(2.0 * theta), e = epsilon;
  PopulationVector near_state{(1 + e * (1 + c)) / 4.0, (1 + e * (1 - c)) / 4.0,
                              (1 - e * (1 - c)) / 4.0, (1 - e * (1 + c)) / 4.0};
  PopulationVector far_state{(1 - 2 * e) / 4.0, 0.25, 0.25, (1 + 2 * e) / 4.0};
  return {near_state, far_state};
}

Overlaps overlaps(const PopulationVector& p0, const MpembaParams& params) {
  const double e = params.epsilon;
  Eigen::Vector4d w1(0, -1, 1, 0);
  w1 /= std::sqrt(2.0);
  Eigen::Vector4d w2(1 + 4 * e / 3.0, -1 - 2 * e / 3.0, -1 - 2 * e / 3.0, 1);
  w2 /= std::sqrt(4.0 + 8.0 / 3.0 * e * (5.0 + 4.0 * e));
  Eigen::Vector4d w3(-1 + 14 * e / 3.0, -e / 3.0, -e / 3.0, 1);
  w3 /= std::sqrt(2.0 / 3.0 * (1 - e) * (3 - 5 * e));
  Eigen::Vector4d v = p0.vec();
  return {w1.dot(v), w2.dot(v), w3.dot(v)};
}

std::vector<Eigen::Vector4d> evolve_populations(const Eigen::Matrix4d& lp,
                                                const Eigen::Vector4d& p0,
                                                const std::vector<double>& t_grid) {
  std::vector<Eigen::Vector4d> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) {
    Eigen::Matrix4d e = (lp * t).exp();
    out.push_back(e * p0);
  }
  return out;
}

double trace_distance_pops(const Eigen::Vector4d& p, const Eigen::Vector4d& q) {
  return 0.5 * (p - q).cwiseAbs().sum();
}

double relative_entropy_pops(const Eigen::Vector4d& p, const Eigen::Vector4d& q) {
  double s = 0.0;
  for (int i = 0; i < 4; ++i) {
    if (p(i) <= 0.0) continue;
    // log1p keeps precision for populations within O(eps) of each other
    s += p(i) * std::log1p((p(i) - q(i)) / q(i));
  }
  return s;
}

MpembaOutcome detect_crossing(const PopulationVector& near_state,
                              const PopulationVector& far_state,
                              const MpembaParams& params, Metric metric,
                              double t_window, int grid_n) {
  validate(near_state);
  validate(far_state);
  Eigen::Matrix4d lp = build_lp(params);
  Eigen::Vector4d pth = thermal_populations(params.epsilon);
  auto dist = [&](const Eigen::Vector4d& p) {
    return metric == Metric::trace ? trace_distance_pops(p, pth)
                                   : relative_entropy_pops(p, pth);
  };
  const double dt = t_window / grid_n;
  Eigen::Matrix4d step = (lp * dt).exp();

  MpembaOutcome out;
  Eigen::Vector4d pn = near_state.vec(), pf = far_state.vec();
  double prev_gap = dist(pf) - dist(pn);
  // a genuine crossing must clear the residual offset between the first-order
  // thermal vector and the exact steady state
  const double significance = 1e-6 * std::max(dist(pf), dist(pn)) + 1e-300;
  double last_above = 0.0;
  out.t.push_back(0.0);
  out.d_far.push_back(dist(pf));
  out.d_near.push_back(dist(pn));
  for (int i = 1; i <= grid_n; ++i) {
    pn = step * pn;
    pf = step * pf;
    double t = i * dt;
    out.t.push_back(t);
    out.d_far.push_back(dist(pf));
    out.d_near.push_back(dist(pn));
    double gap = out.d_far.back() - out.d_near.back();
    if (!out.crossing_time && prev_gap > significance && gap < -significance) {
      double lo = last_above, hi = t;
      for (int it = 0; it < 80; ++it) {
        double mid = (lo + hi) / 2.0;
        Eigen::Matrix4d em = (lp * mid).exp();
        double g = dist(em * far_state.vec()) - dist(em * near_state.vec());
        (g > 0.0 ? lo : hi) = mid;
      }
      out.crossing_time = (lo + hi) / 2.0;
    }
    if (gap > significance) {
      prev_gap = gap;
      last_above = t;
    } else if (gap < -significance) {
      prev_gap = gap;
    }
  }
  return out;
}

PopulationVector closed_form_populations(double theta, const MpembaParams& params,
                                         double t) {
  const double e = params.epsilon, c = std::cos(2.0 * theta);
  const double fast = std::exp(-5.0 * params.k0 * t / 8.0);
  const double slow = std::exp(-5.0 * params.k0 * t / 24.0);
  PopulationVector p;
  p.p00 = 0.25 + e / 2.0 + (e / 4.0) * (c - 1.0) * fast;
  p.p01 = 0.25 - (e / 4.0) * (c - 1.0) * slow;
  p.p10 = 0.25 + (e / 4.0) * (c - 1.0) * slow;
  p.p11 = 0.25 - e / 2.0 - (e / 4.0) * (c - 1.0) * fast;
  return p;
}

TwoQubitView effective_two_qubit_view(const std::vector<Eigen::Vector4d>& traj) {
  TwoQubitView v;
  for (const auto& p : traj) {
    v.sum_outer.push_back(p(0) + p(3));
    v.sum_inner.push_back(p(1) + p(2));
    v.bias_outer.push_back(p(0) - p(3));
    v.bias_inner.push_back(p(1) - p(2));
  }
  return v;
}

}  // namespace mpemba
}  // namespace spinsim
