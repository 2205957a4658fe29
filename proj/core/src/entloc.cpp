#include "spinsim/entloc.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

namespace spinsim {
namespace entloc {

using qcore::SubsystemLayout;

WeylPair weyl_pair(int d) {
  if (d < 2) throw std::invalid_argument("weyl_pair: d must be >= 2");
  WeylPair wp;
  wp.d = d;
  wp.x = Mat::Zero(d, d);
  wp.z = Mat::Zero(d, d);
  const Complex w = std::exp(Complex(0, 2.0 * M_PI / d));
  for (int j = 0; j < d; ++j) {
    wp.x((j + 1) % d, j) = 1.0;
    wp.z(j, j) = std::pow(w, j);
  }
  return wp;
}

CVec bell_state(int d, int m, int n) {
  if (m < 0 || m >= d || n < 0 || n >= d)
    throw std::invalid_argument("bell_state: indices out of range");
  WeylPair wp = weyl_pair(d);
  CVec seed = CVec::Zero(d * d);
  for (int j = 0; j < d; ++j) seed(j * d + j) = 1.0 / std::sqrt(static_cast<double>(d));
  Mat zn = Mat::Identity(d, d), xm = Mat::Identity(d, d);
  for (int k = 0; k < n; ++k) zn = zn * wp.z;
  for (int k = 0; k < m; ++k) xm = xm * wp.x;
  return qcore::tensor(Mat(zn * xm), qcore::identity(d)) * seed;
}

DensityOperator classical_tripartite(int d, const std::vector<double>& weights) {
  if (static_cast<int>(weights.size()) != d * d)
    throw std::invalid_argument("classical_tripartite: need d^2 weights");
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0) throw std::invalid_argument("classical_tripartite: negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("classical_tripartite: weights must sum to 1");
  const int dc = d * d;
  Mat rho = Mat::Zero(dc * d * d, dc * d * d);
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n) {
      int k = m * d + n;
      Mat flag = Mat::Zero(dc, dc);
      flag(k, k) = weights[static_cast<size_t>(k)];
      CVec phi = bell_state(d, m, n);
      rho += qcore::tensor(flag, Mat(phi * phi.adjoint()));
    }
  return DensityOperator(rho, SubsystemLayout({dc, d, d}));
}

Mat localization_unitary(int d) {
  WeylPair wp = weyl_pair(d);
  const int dc = d * d;
  Mat u = Mat::Zero(dc * d, dc * d);
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n) {
      int k = m * d + n;
      Mat flag = Mat::Zero(dc, dc);
      flag(k, k) = 1.0;
      Mat corr = Mat::Identity(d, d);
      for (int i = 0; i < m; ++i) corr = corr * wp.x.adjoint();
      for (int i = 0; i < n; ++i) corr = corr * wp.z.adjoint();
      u += qcore::tensor(flag, corr);
    }
  return u;
}

Mat LocalizationChannel::apply(const Mat& rho_ab) const {
  Mat out = Mat::Zero(rho_ab.rows(), rho_ab.cols());
  for (const Mat& k : kraus) out += k * rho_ab * k.adjoint();
  return out;
}

LocalizationChannel induced_channel(int d) {
  LocalizationChannel ch;
  ch.d = d;
  CVec phi00 = bell_state(d, 0, 0);
  for (int r = 0; r < d; ++r)
    for (int s = 0; s < d; ++s) {
      CVec phi = bell_state(d, r, s);
      ch.kraus.push_back(phi00 * phi.adjoint());
    }
  return ch;
}

Mat choi_matrix(const LocalizationChannel& ch) {
  const int dd = ch.d * ch.d;  // channel input dimension
  Mat choi = Mat::Zero(dd * dd, dd * dd);
  for (int i = 0; i < dd; ++i)
    for (int j = 0; j < dd; ++j) {
      Mat eij = Mat::Zero(dd, dd);
      eij(i, j) = 1.0;
      choi += qcore::tensor(eij, ch.apply(eij));
    }
  return choi;
}

QdpiReport qdpi_audit(const DensityOperator& before, const DensityOperator& after,
                      const LocalizationChannel& ch) {
  if (before.layout().size() != 2 || after.layout().size() != 2)
    throw std::invalid_argument("qdpi_audit: states must carry an explicit A:B layout");
  QdpiReport rep;
  rep.i_before = qcore::mutual_information(before, {0});
  rep.i_after = qcore::mutual_information(after, {0});
  Eigen::SelfAdjointEigenSolver<Mat> es(choi_matrix(ch));
  rep.choi_min_eig = es.eigenvalues().minCoeff();
  rep.cptp = rep.choi_min_eig > -1e-10;
  if (rep.i_after > rep.i_before + 1e-9)
    rep.verdict = rep.cptp ? "apparent violation explained: channel is global"
                           : "violation with non-positive Choi matrix";
  else
    rep.verdict = "no correlation increase";
  return rep;
}

LocalizationTrace zz_localization_trace(double j_hz, const std::vector<double>& tau_grid) {
  if (j_hz == 0.0) throw std::invalid_argument("zz_localization_trace: J must be nonzero");
  // C realized as one qubit carrying the two-outcome mixture; register (C,A,B)
  CVec eta_p(4), eta_m(4);
  eta_p << 0, 1.0 / std::sqrt(2.0), Complex(0, 1.0) / std::sqrt(2.0), 0;
  eta_m << 0, 1.0 / std::sqrt(2.0), Complex(0, -1.0) / std::sqrt(2.0), 0;
  Mat rho0 = Mat::Zero(8, 8);
  Mat p0 = Mat::Zero(2, 2), p1 = Mat::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  rho0 = 0.5 * qcore::tensor(p0, Mat(eta_p * eta_p.adjoint())) +
         0.5 * qcore::tensor(p1, Mat(eta_m * eta_m.adjoint()));

  qcore::SpinOperatorSet ops = qcore::spin_operators(3);
  Mat h = 2.0 * M_PI * j_hz * ops.z[0] * ops.z[1];  // C-A coupling only
  Eigen::VectorXd e = h.diagonal().real();
  SubsystemLayout layout = SubsystemLayout::qubits(3);

  LocalizationTrace out;
  for (double tau : tau_grid) {
    CVec ph(8);
    for (int k = 0; k < 8; ++k) ph(k) = std::exp(Complex(0, -e(k) * tau));
    Mat rho = ph.asDiagonal() * rho0 * ph.asDiagonal().toDenseMatrix().adjoint();
    DensityOperator full(rho, layout);
    DensityOperator ab = qcore::partial_trace(full, {1, 2});
    qcore::EntanglementReport er = qcore::entanglement_measure(ab, {0});
    qcore::DiscordResult dr = qcore::quantum_discord(full, 0);
    out.tau.push_back(tau);
    out.entanglement.push_back(er.normalized);
    out.discord.push_back(dr.value);
  }
  return out;
}

CVec quantum_tripartite(int d) {
  const int dc = d * d;
  CVec psi = CVec::Zero(dc * d * d);
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n) {
      int k = m * d + n;
      CVec phi = bell_state(d, m, n);
      CVec flag = CVec::Zero(dc);
      flag(k) = 1.0;
      CVec term = CVec::Zero(dc * d * d);
      for (int i = 0; i < dc; ++i)
        for (int j = 0; j < d * d; ++j) term(i * d * d + j) = flag(i) * phi(j);
      psi += term / static_cast<double>(d);
    }
  return psi;
}

double flagged_entanglement(const DensityOperator& rho_cab) {
  const auto& dims = rho_cab.layout().dims;
  if (dims.size() != 3)
    throw std::invalid_argument("flagged_entanglement: need a (C,A,B) layout");
  const int dc = dims[0], da = dims[1], db = dims[2];
  const Mat& rho = rho_cab.mat();
  double total = 0.0;
  for (int k = 0; k < dc; ++k) {
    Mat branch = rho.block(k * da * db, k * da * db, da * db, da * db);
    double p = branch.trace().real();
    if (p < 1e-12) continue;
    DensityOperator sigma(branch / p, SubsystemLayout({da, db}));
    total += p * qcore::entanglement_measure(sigma, {0}).normalized;
  }
  return total;
}

namespace {

CoherenceOrderState make_state(int q_f, int q_h, const CVec& a, const CVec& b,
                               int n_f, int n_h) {
  CVec psi = (a + b) / std::sqrt(2.0);
  CoherenceOrderState s{q_f, q_h,
                        DensityOperator::pure(psi, SubsystemLayout::qubits(n_f + n_h)),
                        n_f, n_h};
  return s;
}

CVec ket_bits(const std::string& bits) {
  int n = static_cast<int>(bits.size());
  int idx = 0;
  for (char c : bits) idx = idx * 2 + (c == '1' ? 1 : 0);
  return qcore::basis_ket(idx, 1 << n);
}

}  // namespace

CoherenceOrderState coherence_state_01() {
  return make_state(0, 1, ket_bits("010"), ket_bits("101"), 2, 1);
}
CoherenceOrderState coherence_state_2m1() {
  return make_state(2, -1, ket_bits("001"), ket_bits("110"), 2, 1);
}
CoherenceOrderState coherence_state_21() {
  return make_state(2, 1, ket_bits("000"), ket_bits("111"), 2, 1);
}
CoherenceOrderState coherence_state_00() {
  return make_state(0, 0, ket_bits("0101"), ket_bits("1010"), 2, 2);
}

bool verify_coherence_order(const CoherenceOrderState& s, double phi) {
  const int n = s.n_f + s.n_h;
  qcore::SpinOperatorSet ops = qcore::spin_operators(n);
  RobustnessModel weights;
  Mat g = Mat::Zero(1 << n, 1 << n);
  for (int i = 0; i < s.n_f; ++i) g += weights.gamma_f * ops.z[static_cast<size_t>(i)];
  for (int i = s.n_f; i < n; ++i) g += weights.gamma_h * ops.z[static_cast<size_t>(i)];
  Mat u = (Complex(0, -1) * phi * g).exp();
  Mat rotated = u * s.state.mat() * u.adjoint();

  // the off-diagonal (coherence) part must pick up exactly the labeled phase
  Mat diag = Mat::Zero(rotated.rows(), rotated.cols());
  diag.diagonal() = s.state.mat().diagonal();
  Mat coh = s.state.mat() - diag;
  double order = s.q_f * weights.gamma_f + s.q_h * weights.gamma_h;
  Complex phase = std::exp(Complex(0, -phi * order));
  Mat lower = coh.triangularView<Eigen::StrictlyLower>();
  Mat upper = coh.triangularView<Eigen::StrictlyUpper>();
  Mat expected = diag + phase * upper + std::conj(phase) * lower;
  return qcore::approx_equal(rotated, expected, 1e-10);
}

RobustnessModel RobustnessModel::fitted(double tau_zero_order, double tau_single_quantum) {
  RobustnessModel m;
  m.t2_floor = tau_zero_order;
  m.sigma_sq = (1.0 / tau_single_quantum - 1.0 / tau_zero_order) / (m.gamma_h * m.gamma_h);
  if (m.sigma_sq <= 0)
    throw std::invalid_argument("RobustnessModel: zero-order lifetime must exceed single-quantum");
  return m;
}

DecayReport dephasing_robustness(const std::vector<CoherenceOrderState>& states,
                                 const RobustnessModel& model,
                                 const std::vector<double>& t_grid) {
  if (t_grid.size() < 2)
    throw std::invalid_argument("dephasing_robustness: need at least two grid points");
  DecayReport rep;
  for (const auto& s : states) {
    if (!verify_coherence_order(s))
      throw std::invalid_argument("dephasing_robustness: state fails its coherence-order label");
    double wq = s.q_f * model.gamma_f + s.q_h * model.gamma_h;
    double rate = wq * wq * model.sigma_sq + 1.0 / model.t2_floor;
    std::vector<double> curve;
    curve.reserve(t_grid.size());
    for (double t : t_grid) curve.push_back(std::exp(-rate * t));
    // log-linear fit of the decay constant
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = static_cast<int>(t_grid.size());
    for (int i = 0; i < n; ++i) {
      sx += t_grid[static_cast<size_t>(i)];
      sy += std::log(curve[static_cast<size_t>(i)]);
      sxx += t_grid[static_cast<size_t>(i)] * t_grid[static_cast<size_t>(i)];
      sxy += t_grid[static_cast<size_t>(i)] * std::log(curve[static_cast<size_t>(i)]);
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    rep.entries.push_back({s.q_f, s.q_h, -1.0 / slope});
    rep.curves.push_back(std::move(curve));
  }
  return rep;
}

}  // namespace entloc
}  // namespace spinsim
