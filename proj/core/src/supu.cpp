#include "spinsim/supu.hpp"

#include <cmath>
#include <functional>

#include <Eigen/Eigenvalues>

namespace spinsim {
namespace supu {

namespace {

Mat axis_sigma(const Eigen::Vector3d& n) {
  return n(0) * qcore::pauli_x() + n(1) * qcore::pauli_y() + n(2) * qcore::pauli_z();
}

double golden_max(const std::function<double(double)>& f, double a, double b,
                  double tol) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d; d = c; fd = fc;
      c = b - gr * (b - a); fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + gr * (b - a); fd = f(d);
    }
  }
  return (a + b) / 2.0;
}

void check_dichotomous(const Mat& q) {
  if (!qcore::approx_equal(q * q, qcore::identity(static_cast<int>(q.rows())), 1e-10))
    throw std::invalid_argument("correlator: observable must square to the identity");
}

LgiScan scan_impl(const std::function<double(double)>& corr, int n, int grid_n,
                  double omega) {
  LgiScan out;
  out.order = n;
  auto kn = [&](double t) { return (n - 1) * corr(t) - corr((n - 1) * t); };
  const double t_hi = M_PI / omega;
  out.t.reserve(static_cast<size_t>(grid_n));
  out.k.reserve(static_cast<size_t>(grid_n));
  double best = -1e300, best_t = 0.0;
  for (int i = 1; i <= grid_n; ++i) {
    double t = t_hi * i / grid_n;
    double v = kn(t);
    out.t.push_back(t);
    out.k.push_back(v);
    if (v > best) { best = v; best_t = t; }
  }
  double span = t_hi / grid_n;
  double lo = std::max(1e-12, best_t - span), hi = std::min(t_hi, best_t + span);
  double t_star = golden_max(kn, lo, hi, 1e-6 / omega);
  out.argmax_t = t_star;
  out.k_max = std::max(best, kn(t_star));
  return out;
}

}  // namespace

Mat rotation_unitary(const RotationSpec& r, double delta) {
  double half = r.omega * delta / 2.0;
  return std::cos(half) * qcore::identity(2) -
         Complex(0, 1) * std::sin(half) * axis_sigma(r.axis);
}

double SuperposedUnitary::axis_dot() const { return u0.axis.dot(u1.axis); }

double SuperposedUnitary::phi() const {
  return std::acos(std::clamp(axis_dot(), -1.0, 1.0));
}

SuperposedUnitary SuperposedUnitary::planar(double alpha, double phi, double omega) {
  SuperposedUnitary su;
  su.alpha = alpha;
  su.u0 = {Eigen::Vector3d(1, 0, 0), omega};
  su.u1 = {Eigen::Vector3d(std::cos(phi), std::sin(phi), 0), omega};
  return su;
}

void validate(const SuperposedUnitary& su) {
  if (std::abs(su.u0.axis.norm() - 1.0) > 1e-12 || std::abs(su.u1.axis.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("SuperposedUnitary: axes must be unit vectors");
  if (su.u0.omega != su.u1.omega)
    throw std::invalid_argument("SuperposedUnitary: branch frequencies must match");
  if (!(su.axis_dot() > -1.0))
    throw std::invalid_argument("SuperposedUnitary: antiparallel axes invalidate the norm");
  if (su.alpha < 0.0 || su.alpha > M_PI / 2.0 + 1e-12)
    throw std::invalid_argument("SuperposedUnitary: alpha must lie in [0, pi/2]");
}

double normalization_sq(const SuperposedUnitary& su, double delta) {
  double half = su.u0.omega * delta / 2.0;
  double c2 = std::cos(half) * std::cos(half);
  double n2 = 1.0 + std::sin(2.0 * su.alpha) * (c2 + su.axis_dot() * (1.0 - c2));
  if (!(n2 > 0.0))
    throw std::runtime_error("normalization_sq: vanishing norm");
  return n2;
}

Mat evaluate(const SuperposedUnitary& su, double t0, double tf) {
  validate(su);
  double delta = tf - t0;
  Mat u = std::cos(su.alpha) * rotation_unitary(su.u0, delta) +
          std::sin(su.alpha) * rotation_unitary(su.u1, delta);
  return u / std::sqrt(normalization_sq(su, delta));
}

double speed_of_evolution(const SuperposedUnitary& su, double t) {
  validate(su);
  const double w = su.u0.omega, a = su.alpha, cp = su.axis_dot();
  double half = w * t / 2.0;
  double denom = 1.0 + std::sin(2 * a) * (std::cos(half) * std::cos(half) +
                                          cp * std::sin(half) * std::sin(half));
  return w * std::sqrt(1.0 + cp * std::sin(2 * a)) * (std::cos(a) + std::sin(a)) / denom;
}

double correlator(const SuperposedUnitary& su, const Mat& q, double ti, double tj) {
  check_dichotomous(q);
  Mat u = evaluate(su, ti, tj);
  return 0.5 * (q * u * q * u.adjoint()).trace().real();
}

double correlator_plain(const RotationSpec& r, const Mat& q, double ti, double tj) {
  check_dichotomous(q);
  Mat u = rotation_unitary(r, tj - ti);
  return 0.5 * (q * u * q * u.adjoint()).trace().real();
}

LgiScan k3_scan(const SuperposedUnitary& su, const Mat& q, int grid_n) {
  return kn_scan(su, q, 3, grid_n);
}

LgiScan kn_scan(const SuperposedUnitary& su, const Mat& q, int n, int grid_n) {
  if (n < 3) throw std::invalid_argument("kn_scan: order must be >= 3");
  validate(su);
  return scan_impl([&](double t) { return correlator(su, q, 0.0, t); }, n, grid_n,
                   su.u0.omega);
}

LgiScan kn_scan_plain(const RotationSpec& r, const Mat& q, int n, int grid_n) {
  if (n < 3) throw std::invalid_argument("kn_scan: order must be >= 3");
  return scan_impl([&](double t) { return correlator_plain(r, q, 0.0, t); }, n, grid_n,
                   r.omega);
}

namespace {

Eigen::Vector3d zeta_axis(const SuperposedUnitary& su) {
  // direction of the effective rotation axis of the normalized combination
  Eigen::Vector3d v = std::cos(su.alpha) * su.u0.axis + std::sin(su.alpha) * su.u1.axis;
  return v / v.norm();
}

double lifetime_from(const std::function<double(double)>& k3, double gamma) {
  const double window = 40.0 / gamma;
  const int n = 20000;
  double tau = 0.0;
  double prev_t = 0.0, prev_v = k3(1e-9);
  for (int i = 1; i <= n; ++i) {
    double t = window * i / n;
    double v = k3(t);
    if (prev_v > 1.0 && v <= 1.0) {
      double lo = prev_t, hi = t;
      for (int it = 0; it < 60; ++it) {
        double mid = (lo + hi) / 2.0;
        (k3(mid) > 1.0 ? lo : hi) = mid;
      }
      tau = (lo + hi) / 2.0;
    }
    prev_t = t;
    prev_v = v;
  }
  return tau;
}

LgiScan grid_from(const std::function<double(double)>& k3, double t_hi, int grid_n) {
  LgiScan s;
  s.order = 3;
  double best = -1e300, best_t = 0.0;
  for (int i = 1; i <= grid_n; ++i) {
    double t = t_hi * i / grid_n;
    double v = k3(t);
    s.t.push_back(t);
    s.k.push_back(v);
    if (v > best) { best = v; best_t = t; }
  }
  s.k_max = best;
  s.argmax_t = best_t;
  return s;
}

}  // namespace

DephasedScan dephased_k3_bloch(const SuperposedUnitary& su, double gamma, int grid_n) {
  validate(su);
  if (gamma < 0) throw std::invalid_argument("dephased_k3_bloch: gamma must be >= 0");
  const double w = su.u0.omega;
  const Eigen::Vector3d zh = zeta_axis(su);
  const double t_end = gamma > 0 ? 80.0 / gamma : 4.0 * M_PI / w;
  const double dt = 1e-3 * 2.0 * M_PI / w;
  const int steps = static_cast<int>(std::ceil(t_end / dt)) + 1;

  std::vector<double> sz(static_cast<size_t>(steps) + 1);
  std::vector<double> dsz(static_cast<size_t>(steps) + 1);
  Eigen::Vector3d s(0, 0, 1);
  auto rhs = [&](double t, const Eigen::Vector3d& v) -> Eigen::Vector3d {
    Eigen::Vector3d drive = speed_of_evolution(su, t) * zh.cross(v);
    return drive - gamma * Eigen::Vector3d(v(0), v(1), 0.0);
  };
  sz[0] = s(2);
  dsz[0] = rhs(0.0, s)(2);
  double t = 0.0;
  for (int i = 0; i < steps; ++i) {
    Eigen::Vector3d k1 = rhs(t, s);
    Eigen::Vector3d k2 = rhs(t + dt / 2, s + dt / 2 * k1);
    Eigen::Vector3d k3v = rhs(t + dt / 2, s + dt / 2 * k2);
    Eigen::Vector3d k4 = rhs(t + dt, s + dt * k3v);
    s += dt / 6.0 * (k1 + 2 * k2 + 2 * k3v + k4);
    t += dt;
    sz[static_cast<size_t>(i) + 1] = s(2);
    dsz[static_cast<size_t>(i) + 1] = rhs(t, s)(2);
  }
  auto sz_at = [&](double tt) {
    // cubic Hermite between stored samples
    double x = tt / dt;
    int i = std::min(static_cast<int>(x), steps - 1);
    double f = x - i;
    double y0 = sz[static_cast<size_t>(i)], y1 = sz[static_cast<size_t>(i) + 1];
    double m0 = dsz[static_cast<size_t>(i)] * dt, m1 = dsz[static_cast<size_t>(i) + 1] * dt;
    double f2 = f * f, f3 = f2 * f;
    return (2 * f3 - 3 * f2 + 1) * y0 + (f3 - 2 * f2 + f) * m0 +
           (-2 * f3 + 3 * f2) * y1 + (f3 - f2) * m1;
  };
  auto k3f = [&](double tt) { return 2.0 * sz_at(tt) - sz_at(2.0 * tt); };

  DephasedScan out;
  out.scan = grid_from(k3f, gamma > 0 ? 40.0 / gamma : 2.0 * M_PI / w, grid_n);
  out.lifetime = gamma > 0 ? lifetime_from(k3f, gamma) : 0.0;
  return out;
}

namespace {

// Diagonalized two-qubit Liouvillian for the ancilla treatment, exposing
// cheap evaluation of the post-selected correlator at any time.
struct AncillaEngine {
  Eigen::ComplexEigenSolver<Mat> es;
  Mat v, vinv;
  CVec eig;
  CVec vq, vid;   // vectorized initial operators, rotated to eigenbasis
  CVec oq, oid;   // observation covectors
  double p_floor = 1e-9;

  AncillaEngine(const SuperposedUnitary& su, double gamma) {
    const double w = su.u0.omega;
    Mat h = qcore::tensor((Mat(2, 2) << 1, 0, 0, 0).finished(),
                          w * axis_sigma(su.u0.axis) / 2.0) +
            qcore::tensor((Mat(2, 2) << 0, 0, 0, 1).finished(),
                          w * axis_sigma(su.u1.axis) / 2.0);
    Mat za = qcore::tensor(qcore::pauli_z(), qcore::identity(2));
    Mat zs = qcore::tensor(qcore::identity(2), qcore::pauli_z());
    dynamics::Liouvillian l = dynamics::build_liouvillian(
        h, {{za, za, gamma / 2.0}, {zs, zs, gamma / 2.0}});
    es.compute(l.op);
    v = es.eigenvectors();
    vinv = v.inverse();
    eig = es.eigenvalues();

    CVec aket(2);
    aket << std::cos(su.alpha), std::sin(su.alpha);
    Mat rho_a = aket * aket.adjoint();
    Mat q = qcore::pauli_z();
    vq = vinv * dynamics::vectorize(qcore::tensor(rho_a, q / 2.0));
    vid = vinv * dynamics::vectorize(qcore::tensor(rho_a, qcore::identity(2) / 2.0));
    CVec plus(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    Mat pp = plus * plus.adjoint();
    oq = dynamics::vectorize(qcore::tensor(pp, q));
    oid = dynamics::vectorize(qcore::tensor(pp, qcore::identity(2)));
  }

  double correlator(double t) const {
    CVec ph(eig.size());
    for (int i = 0; i < eig.size(); ++i) ph(i) = std::exp(eig(i) * t);
    CVec xq = v * ph.cwiseProduct(vq).matrix();
    CVec xid = v * ph.cwiseProduct(vid).matrix();
    double num = oq.dot(xq).real();
    double den = oid.dot(xid).real();
    if (std::abs(den) < p_floor)
      throw std::runtime_error("dephased_k3_ancilla: post-selection probability vanished");
    return num / den;
  }
};

}  // namespace

DephasedScan dephased_k3_ancilla(const SuperposedUnitary& su, double gamma, int grid_n) {
  validate(su);
  if (gamma < 0) throw std::invalid_argument("dephased_k3_ancilla: gamma must be >= 0");
  AncillaEngine engine(su, gamma);
  auto k3f = [&](double t) {
    return 2.0 * engine.correlator(t) - engine.correlator(2.0 * t);
  };
  DephasedScan out;
  const double w = su.u0.omega;
  out.scan = grid_from(k3f, gamma > 0 ? 40.0 / gamma : 2.0 * M_PI / w, grid_n);
  out.lifetime = gamma > 0 ? lifetime_from(k3f, gamma) : 0.0;
  return out;
}

Mat ancilla_realized_action(const SuperposedUnitary& su, const Mat& rho_s,
                            double t0, double tf) {
  validate(su);
  double delta = tf - t0;
  Mat u0 = rotation_unitary(su.u0, delta);
  Mat u1 = rotation_unitary(su.u1, delta);
  Mat p0 = (Mat(2, 2) << 1, 0, 0, 0).finished();
  Mat p1 = (Mat(2, 2) << 0, 0, 0, 1).finished();
  Mat v_as = qcore::tensor(p0, u0) + qcore::tensor(p1, u1);
  CVec aket(2);
  aket << std::cos(su.alpha), std::sin(su.alpha);
  Mat joint = v_as * qcore::tensor(Mat(aket * aket.adjoint()), rho_s) * v_as.adjoint();
  CVec plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  Mat proj = qcore::tensor(Mat(plus * plus.adjoint()), qcore::identity(2));
  Mat sel = proj * joint * proj;
  Mat reduced = qcore::partial_trace(sel, qcore::SubsystemLayout::qubits(2), {1});
  double p = reduced.trace().real();
  if (p < 1e-12)
    throw std::runtime_error("ancilla_realized_action: post-selection failed");
  return reduced / p;
}

double GeneralEvaluator::normalization_sq(double theta) const {
  double c2 = std::cos(theta) * std::cos(theta);
  double dot = spec.r1.dot(spec.r2);
  return 1.0 + 2.0 * spec.c1 * spec.c2 * (c2 + dot * (1.0 - c2));
}

Mat GeneralEvaluator::evaluate(double theta) const {
  int d = static_cast<int>(h1.rows());
  Mat u1 = std::cos(theta) * qcore::identity(d) - Complex(0, 1) * std::sin(theta) * h1;
  Mat u2 = std::cos(theta) * qcore::identity(d) - Complex(0, 1) * std::sin(theta) * h2;
  return (spec.c1 * u1 + spec.c2 * u2) / std::sqrt(normalization_sq(theta));
}

GeneralEvaluator general_superposition_build(const GeneralSuperposition& gs) {
  const size_t n = gs.ops.size();
  if (n == 0) throw std::invalid_argument("general_superposition_build: empty operator set");
  const int d = static_cast<int>(gs.ops[0].rows());
  for (size_t k = 0; k < n; ++k) {
    if (!qcore::is_hermitian(gs.ops[k], 1e-10))
      throw std::invalid_argument("general_superposition_build: V_" + std::to_string(k) +
                                  " is not Hermitian");
    for (size_t l = k; l < n; ++l) {
      Mat anti = gs.ops[k] * gs.ops[l] + gs.ops[l] * gs.ops[k];
      Mat target = (k == l) ? Mat(2.0 * qcore::identity(d)) : Mat(Mat::Zero(d, d));
      if (!qcore::approx_equal(anti, target, 1e-10))
        throw std::invalid_argument("general_superposition_build: anticommutation fails for pair (" +
                                    std::to_string(k) + "," + std::to_string(l) + ")");
    }
  }
  if (gs.r1.size() != static_cast<int>(n) || gs.r2.size() != static_cast<int>(n))
    throw std::invalid_argument("general_superposition_build: coefficient size mismatch");
  if (std::abs(gs.r1.norm() - 1.0) > 1e-10 || std::abs(gs.r2.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("general_superposition_build: coefficient vectors must be unit norm");
  if ((gs.r1 + gs.r2).norm() < 1e-10)
    throw std::invalid_argument("general_superposition_build: r1 = -r2 is rejected");
  if (!(gs.c1 > 0) || !(gs.c2 > 0) || std::abs(gs.c1 * gs.c1 + gs.c2 * gs.c2 - 1.0) > 1e-10)
    throw std::invalid_argument("general_superposition_build: weights must be positive with c1^2+c2^2=1");

  GeneralEvaluator ev;
  ev.spec = gs;
  ev.h1 = Mat::Zero(d, d);
  ev.h2 = Mat::Zero(d, d);
  for (size_t k = 0; k < n; ++k) {
    ev.h1 += gs.r1(static_cast<int>(k)) * gs.ops[k];
    ev.h2 += gs.r2(static_cast<int>(k)) * gs.ops[k];
  }
  Eigen::VectorXd rt = gs.c1 * gs.r1 + gs.c2 * gs.r2;
  Eigen::VectorXd r = rt / rt.norm();
  ev.effective_hamiltonian = Mat::Zero(d, d);
  for (size_t k = 0; k < n; ++k)
    ev.effective_hamiltonian += r(static_cast<int>(k)) * gs.ops[k];
  if (!qcore::approx_equal(ev.effective_hamiltonian * ev.effective_hamiltonian,
                           qcore::identity(d), 1e-10))
    throw std::runtime_error("general_superposition_build: effective Hamiltonian not involutory");
  return ev;
}

}  // namespace supu
}  // namespace spinsim
