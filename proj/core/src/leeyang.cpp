#include "spinsim/leeyang.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

namespace spinsim {
namespace leeyang {

namespace {
constexpr double kTwoPi = 2.0 * M_PI;

double wrap_angle(double a) {
  double w = std::fmod(a, kTwoPi);
  if (w < 0) w += kTwoPi;
  return w;
}

double golden_min(const std::function<double(double)>& f, double a, double b) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > 1e-14 * std::max(1.0, std::abs(b))) {
    if (fc < fd) {
      b = d; d = c; fd = fc;
      c = b - gr * (b - a); fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + gr * (b - a); fd = f(d);
    }
  }
  return (a + b) / 2.0;
}
}  // namespace

void validate(const ProbeCouplings& cpl) {
  if (cpl.j_pa == 0.0 || cpl.j_pb == 0.0)
    throw std::invalid_argument("ProbeCouplings: couplings must be nonzero");
}

Complex ly_eval(const LYPolynomial& p, Complex z1, Complex z2) {
  if (z1 == Complex(0, 0) || z2 == Complex(0, 0))
    throw std::invalid_argument("ly_eval: arguments must be nonzero");
  return 1.0 + p.gamma * z1 + p.gamma * z2 + z1 * z2;
}

Complex torus_z1(const IsingParams& p, const ProbeCouplings& cpl, double t) {
  return std::exp(Complex(-2.0 * p.beta_ha, 4.0 * cpl.lambda_a() * t));
}

Complex torus_z2(const IsingParams& p, const ProbeCouplings& cpl, double t) {
  return std::exp(Complex(-2.0 * p.beta_hb, 4.0 * cpl.lambda_b() * t));
}

SeriesCoefficients series_coefficients(const IsingParams& p) {
  const double cj = std::cosh(p.beta_j), sj = std::sinh(p.beta_j);
  const double ca = std::cosh(p.beta_ha), sa = std::sinh(p.beta_ha);
  const double cb = std::cosh(p.beta_hb), sb = std::sinh(p.beta_hb);
  return {cj * ca * cb + sj * sa * sb, cj * sa * cb + sj * ca * sb,
          cj * ca * sb + sj * sa * cb, cj * sa * sb + sj * ca * cb};
}

void probe_point(const IsingParams& p, const ProbeCouplings& cpl, double t,
                 double* sx, double* sy) {
  SeriesCoefficients c = series_coefficients(p);
  const double a = M_PI * cpl.j_pa, b = M_PI * cpl.j_pb;
  const double ca = std::cos(a * t), sa = std::sin(a * t);
  const double cb = std::cos(b * t), sb = std::sin(b * t);
  *sx = (c.ca * ca * cb - c.cd * sa * sb) / c.ca;
  *sy = (c.cb * sa * cb + c.cc * ca * sb) / c.ca;
}

ProbeTrace probe_trajectory(const IsingParams& p, const ProbeCouplings& cpl,
                            const std::vector<double>& t_grid) {
  validate(cpl);
  ProbeTrace out;
  out.t = t_grid;
  for (double t : t_grid) {
    double sx, sy;
    probe_point(p, cpl, t, &sx, &sy);
    out.sx.push_back(sx);
    out.sy.push_back(sy);
    out.coherence.push_back(0.25 * (sx * sx + sy * sy));
  }
  return out;
}

std::vector<ZeroRecord> find_zeros(const IsingParams& p, const ProbeCouplings& cpl,
                                   double t_max, double tol) {
  validate(cpl);
  if (t_max <= 0) throw std::invalid_argument("find_zeros: t_max must be > 0");
  auto coh = [&](double t) {
    double sx, sy;
    probe_point(p, cpl, t, &sx, &sy);
    return sx * sx + sy * sy;
  };
  // grid fine enough to isolate every coherence minimum
  const double dt = 1.0 / (50.0 * (std::abs(cpl.j_pa) + std::abs(cpl.j_pb)));
  const int n = static_cast<int>(std::ceil(t_max / dt));

  double amp_x = 1e-300, amp_y = 1e-300;
  std::vector<ZeroRecord> out;
  double lm = coh(0.0), lc = coh(dt);
  {
    double sx, sy;
    probe_point(p, cpl, 0.0, &sx, &sy);
    amp_x = std::max(amp_x, std::abs(sx));
    amp_y = std::max(amp_y, std::abs(sy));
  }
  for (int i = 1; i < n; ++i) {
    double t_next = (i + 1) * dt;
    double ln = coh(t_next);
    double sx, sy;
    probe_point(p, cpl, i * dt, &sx, &sy);
    amp_x = std::max(amp_x, std::abs(sx));
    amp_y = std::max(amp_y, std::abs(sy));
    if (lc <= lm && lc <= ln) {
      double t_star = golden_min(coh, (i - 1) * dt, t_next);
      probe_point(p, cpl, t_star, &sx, &sy);
      bool candidate = std::abs(sx) < 1e-4 * amp_x &&
                       (amp_y < 1e-12 * amp_x || std::abs(sy) < 1e-4 * std::max(amp_y, 1e-12));
      if (candidate && std::abs(sx) < tol && std::abs(sy) < tol) {
        ZeroRecord z;
        z.t = t_star;
        z.angles.theta1 = wrap_angle(4.0 * cpl.lambda_a() * t_star);
        z.angles.theta2 = wrap_angle(4.0 * cpl.lambda_b() * t_star);
        out.push_back(z);
      }
    }
    lm = lc;
    lc = ln;
  }
  return out;
}

std::vector<CoamoebaPoint> sample_coamoeba(const IsingParams& p,
                                           const ProbeCouplings& cpl, double t_max,
                                           double tol) {
  std::vector<ZeroRecord> zeros = find_zeros(p, cpl, t_max, tol);
  std::vector<CoamoebaPoint> pts;
  const double res = 1e-6;
  for (const auto& z : zeros) {
    bool dup = false;
    for (const auto& q : pts) {
      double d1 = std::abs(q.theta1 - z.angles.theta1);
      double d2 = std::abs(q.theta2 - z.angles.theta2);
      d1 = std::min(d1, kTwoPi - d1);
      d2 = std::min(d2, kTwoPi - d2);
      if (d1 < res && d2 < res) {
        dup = true;
        break;
      }
    }
    if (!dup) pts.push_back(z.angles);
  }
  return pts;
}

std::vector<CoamoebaPoint> coamoeba_slice(const IsingParams& p, int curve_samples) {
  const double g = std::exp(-2.0 * p.beta_j);
  const double r1 = std::exp(-2.0 * p.beta_ha);
  const double r2 = std::exp(-2.0 * p.beta_hb);
  LYPolynomial poly{g};

  auto theta2_of = [&](double th1) {
    Complex z1 = std::polar(r1, th1);
    Complex z2 = -(1.0 + g * z1) / (g + z1);
    return wrap_angle(std::arg(z2));
  };

  std::vector<CoamoebaPoint> out;
  const double denom = 2.0 * g * r1 * (1.0 - r2 * r2);
  const double numer = g * g * (r2 * r2 - r1 * r1) + r1 * r1 * r2 * r2 - 1.0;
  if (std::abs(denom) < 1e-14) {
    if (std::abs(numer) < 1e-12) {
      // degenerate slice: a full curve (the amoeba-origin situation)
      for (int k = 0; k < curve_samples; ++k) {
        double th1 = kTwoPi * k / curve_samples;
        out.push_back({wrap_angle(th1), theta2_of(th1)});
      }
    }
    return out;
  }
  const double c = numer / denom;
  if (std::abs(c) > 1.0) return out;
  double th1 = std::acos(std::clamp(c, -1.0, 1.0));
  for (double candidate : {th1, kTwoPi - th1}) {
    double th2 = theta2_of(candidate);
    Complex z1 = std::polar(r1, candidate), z2 = std::polar(r2, th2);
    if (std::abs(ly_eval(poly, z1, z2)) < 1e-9)
      out.push_back({wrap_angle(candidate), th2});
  }
  // collapse the doubled root at theta1 in {0, pi}
  if (out.size() == 2 && std::abs(out[0].theta1 - out[1].theta1) < 1e-12) out.pop_back();
  return out;
}

bool amoeba_member(const IsingParams& p) { return !coamoeba_slice(p).empty(); }

namespace {

Mat ising_gibbs_diag(const IsingParams& p) {
  // exp(-beta H_AB) with H_AB = -J szsz - hA sz - hB sz, diagonal in z
  Mat m = Mat::Zero(4, 4);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      double za = a == 0 ? 1.0 : -1.0, zb = b == 0 ? 1.0 : -1.0;
      m(a * 2 + b, a * 2 + b) =
          std::exp(p.beta_j * za * zb + p.beta_ha * za + p.beta_hb * zb);
    }
  return m;
}

}  // namespace

MiTrace mutual_information_trace(const IsingParams& p, const ProbeCouplings& cpl,
                                 const std::vector<double>& t_grid) {
  validate(cpl);
  using qcore::SubsystemLayout;
  CVec plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  Mat gibbs = ising_gibbs_diag(p);
  gibbs /= gibbs.trace().real();
  Mat rho0 = qcore::tensor(Mat(plus * plus.adjoint()), gibbs);

  qcore::SpinOperatorSet ops = qcore::spin_operators(3);
  Mat h = 2.0 * M_PI *
          (cpl.j_pa * ops.z[0] * ops.z[1] + cpl.j_pb * ops.z[0] * ops.z[2]);
  Eigen::VectorXd e = h.diagonal().real();  // diagonal Hamiltonian

  SubsystemLayout layout = SubsystemLayout::qubits(3);
  Mat sxp = 2.0 * ops.x[0], syp = 2.0 * ops.y[0];

  MiTrace out;
  out.t = t_grid;
  for (double t : t_grid) {
    CVec ph(8);
    for (int k = 0; k < 8; ++k) ph(k) = std::exp(Complex(0, -e(k) * t));
    Mat rho = ph.asDiagonal() * rho0 * ph.asDiagonal().toDenseMatrix().adjoint();
    double sx = (sxp * rho).trace().real();
    double sy = (syp * rho).trace().real();
    out.sx.push_back(sx);
    out.sy.push_back(sy);
    out.coherence.push_back(0.25 * (sx * sx + sy * sy));
    double sp = qcore::entropy_of(qcore::partial_trace(rho, layout, {0}));
    double sab = qcore::entropy_of(qcore::partial_trace(rho, layout, {1, 2}));
    double stot = qcore::entropy_of(rho);
    out.mi.push_back(sp + sab - stot);
  }
  return out;
}

Mat target_state(const IsingParams& p) {
  SeriesCoefficients c = series_coefficients(p);
  qcore::SpinOperatorSet ops = qcore::spin_operators(3);
  return c.ca * ops.x[0] + c.cb * 2.0 * ops.x[0] * ops.z[1] +
         c.cc * 2.0 * ops.x[0] * ops.z[2] +
         c.cd * 4.0 * ops.x[0] * ops.z[1] * ops.z[2];
}

double solve_tau(double beta_j, const ProbeCouplings& cpl) {
  validate(cpl);
  const double s = std::abs(cpl.j_pa + cpl.j_pb), d = std::abs(cpl.j_pa - cpl.j_pb);
  if (d < 1e-12) throw std::invalid_argument("solve_tau: couplings must differ");
  const double target = std::exp(2.0 * beta_j);
  auto g = [&](double tau) {
    return std::cos(M_PI * s * tau) / std::cos(M_PI * d * tau) - target;
  };
  // the ratio has poles at odd multiples of 1/(2 d); scan across several
  // pole intervals and take the smallest genuine crossing
  const double tau_hi = 10.0 / d;
  const int n = 400000;
  double prev_t = 1e-12, prev_v = g(prev_t);
  for (int i = 1; i <= n; ++i) {
    double t = tau_hi * i / n;
    double v = g(t);
    bool bounded = std::isfinite(v) && std::isfinite(prev_v) &&
                   std::abs(v - prev_v) < 10.0 * (1.0 + std::abs(target));
    if (bounded && prev_v * v <= 0.0) {
      double lo = prev_t, hi = t;
      for (int it = 0; it < 200; ++it) {
        double mid = (lo + hi) / 2.0;
        (g(lo) * g(mid) <= 0.0 ? hi : lo) = mid;
      }
      double root = (lo + hi) / 2.0;
      // keep only roots preparing the target with positive amplitude
      if (std::abs(g(root)) < 1e-9 && std::cos(M_PI * d * root) > 0.0) return root;
    }
    prev_t = t;
    prev_v = v;
  }
  throw std::runtime_error(
      "solve_tau: no root found; widen the coupling asymmetry or reduce |beta J|");
}

Mat preparation_sequence_state(const ProbeCouplings& cpl, double theta1,
                               double theta2, double tau) {
  qcore::SpinOperatorSet ops = qcore::spin_operators(3);
  Mat rho = ops.z[0];  // probe deviation at thermal equilibrium

  auto rotate = [&](const Mat& gen, double angle, const Mat& m) {
    Mat u = (Complex(0, -1) * angle * gen).exp();
    return Mat(u * m * u.adjoint());
  };
  rho = rotate(ops.y[0], theta1, rho);
  rho = rotate(ops.x[0], -theta2, rho);
  Mat h = 2.0 * M_PI * (cpl.j_pa * ops.z[0] * ops.z[1] + cpl.j_pb * ops.z[0] * ops.z[2]);
  rho = rotate(h, tau, rho);
  rho = rotate(ops.y[0], M_PI / 2.0, rho);
  // heteronuclear z-gradient: only per-species zero-quantum (diagonal) survives
  Mat diag = Mat::Zero(8, 8);
  diag.diagonal() = rho.diagonal();
  rho = diag;
  rho = rotate(ops.y[0], -M_PI / 2.0, rho);
  return rho;
}

double deviation_overlap(const Mat& a, const Mat& b) {
  double na = std::sqrt(std::abs((a.adjoint() * a).trace().real()));
  double nb = std::sqrt(std::abs((b.adjoint() * b).trace().real()));
  if (na < 1e-300 || nb < 1e-300) return 0.0;
  return (a.adjoint() * b).trace().real() / (na * nb);
}

namespace {

struct ModeView {
  std::vector<double> target;
  std::function<std::vector<double>(double, double, double, const ProbeCouplings&)> prepared;
};

std::vector<double> prepared_coeffs(double th1, double th2, double tau,
                                    const ProbeCouplings& cpl) {
  const double ca = std::cos(M_PI * cpl.j_pa * tau), sa = std::sin(M_PI * cpl.j_pa * tau);
  const double cb = std::cos(M_PI * cpl.j_pb * tau), sb = std::sin(M_PI * cpl.j_pb * tau);
  return {std::sin(th1) * ca * cb, -std::cos(th1) * std::sin(th2) * sa * cb,
          -std::cos(th1) * std::sin(th2) * ca * sb, -std::sin(th1) * sa * sb};
}

}  // namespace

PreparationFit fit_preparation(const IsingParams& p, const ProbeCouplings& cpl,
                               FitMode mode, uint64_t seed) {
  validate(cpl);
  SeriesCoefficients c = series_coefficients(p);
  if (c.ca < 1.0 - 1e-12)
    throw std::invalid_argument("fit_preparation: invalid target coefficients");
  std::vector<int> sel;
  switch (mode) {
    case FitMode::full: sel = {0, 1, 2, 3}; break;
    case FitMode::xx_only: sel = {0, 3}; break;
    case FitMode::yy_only: sel = {1, 2}; break;
  }
  std::vector<double> tgt_all{c.ca, c.cb, c.cc, c.cd};
  std::vector<double> tgt;
  double tn = 0.0;
  for (int i : sel) tn += tgt_all[static_cast<size_t>(i)] * tgt_all[static_cast<size_t>(i)];
  tn = std::sqrt(tn);
  for (int i : sel) tgt.push_back(tgt_all[static_cast<size_t>(i)] / tn);

  const double tau_max = 10.0 / std::abs(cpl.j_pa - cpl.j_pb);
  // residual: l1 gap between the unit target and the least-squares-scaled
  // prepared coefficients; small penalties prefer short delays and strong
  // prepared amplitude among exact solutions
  auto split = [&](double th1, double th2, double tau, double* pure) {
    std::vector<double> all = prepared_coeffs(th1, th2, tau, cpl);
    std::vector<double> v;
    for (int i : sel) v.push_back(all[static_cast<size_t>(i)]);
    double vv = 0.0, vt = 0.0, nrm = 0.0;
    for (size_t i = 0; i < v.size(); ++i) {
      vv += v[i] * v[i];
      vt += v[i] * tgt[i];
      nrm += v[i] * v[i];
    }
    double s = vv > 1e-30 ? std::max(0.0, vt / vv) : 0.0;  // deviation scale is physical
    double res = 0.0;
    for (size_t i = 0; i < v.size(); ++i) res += std::abs(s * v[i] - tgt[i]);
    *pure = res;
    return res + 1.0 * tau - 1e-3 * std::sqrt(nrm);
  };
  auto objective = [&](double th1, double th2, double tau) {
    double pure;
    return split(th1, th2, tau, &pure);
  };

  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  double best_obj = 1e300;
  PreparationParams best;
  for (int start = 0; start < 64; ++start) {
    double th1 = u01(rng) * M_PI;
    double th2 = u01(rng) * M_PI;
    double tau = u01(rng) * tau_max;
    double step1 = 0.4, step2 = 0.4, step3 = tau_max / 8.0;
    double cur = objective(th1, th2, tau);
    for (int it = 0; it < 400; ++it) {
      bool improved = false;
      for (int dim = 0; dim < 3; ++dim) {
        double* x = dim == 0 ? &th1 : dim == 1 ? &th2 : &tau;
        double st = dim == 0 ? step1 : dim == 1 ? step2 : step3;
        for (double dir : {+1.0, -1.0}) {
          double trial = *x + dir * st;
          if (dim == 2 && (trial <= 0 || trial > tau_max)) continue;
          if (dim != 2 && (trial < 0 || trial > M_PI)) continue;  // flip angles
          double old = *x;
          *x = trial;
          double v = objective(th1, th2, tau);
          if (v < cur - 1e-15) {
            cur = v;
            improved = true;
            break;
          }
          *x = old;
        }
      }
      if (!improved) {
        step1 *= 0.6;
        step2 *= 0.6;
        step3 *= 0.6;
        if (step1 < 1e-9 && step3 < 1e-12) break;
      }
    }
    if (cur < best_obj) {
      best_obj = cur;
      best = {th1, th2, tau};
    }
  }

  PreparationFit fit;
  fit.params = best;
  split(best.theta1, best.theta2, best.tau, &fit.residual);
  fit.flagged = fit.residual > 1e-3;
  return fit;
}

}  // namespace leeyang
}  // namespace spinsim
