#include "spinsim/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

namespace spinsim {
namespace qcore {

namespace {

Eigen::VectorXd hermitian_eigenvalues(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double clamped_entropy(const Eigen::VectorXd& p) {
  double s = 0.0;
  for (int i = 0; i < p.size(); ++i) {
    if (p(i) > kEigClamp) s -= p(i) * std::log(p(i));
  }
  return s;
}

}  // namespace

bool all_finite(const Mat& m) {
  for (int j = 0; j < m.cols(); ++j)
    for (int i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag()))
        return false;
  return true;
}

bool approx_equal(const Mat& a, const Mat& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return (a - b).cwiseAbs().maxCoeff() <= tol;
}

bool is_hermitian(const Mat& m, double tol) {
  return m.rows() == m.cols() &&
         (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

Mat identity(int d) { return Mat::Identity(d, d); }

Mat pauli_x() {
  Mat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Mat pauli_y() {
  Mat m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

Mat pauli_z() {
  Mat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

CVec basis_ket(int k, int d) {
  if (k < 0 || k >= d) throw std::invalid_argument("basis_ket: index out of range");
  CVec v = CVec::Zero(d);
  v(k) = 1.0;
  return v;
}

SubsystemLayout::SubsystemLayout(std::vector<int> d) : dims(std::move(d)) {
  for (int x : dims)
    if (x <= 0) throw std::invalid_argument("SubsystemLayout: dims must be positive");
}

SubsystemLayout SubsystemLayout::qubits(int n) {
  return SubsystemLayout(std::vector<int>(static_cast<size_t>(n), 2));
}

SubsystemLayout SubsystemLayout::single(int d) { return SubsystemLayout({d}); }

int SubsystemLayout::total() const {
  int t = 1;
  for (int d : dims) t *= d;
  return t;
}

StateViolation state_violation(const Mat& rho) {
  StateViolation v{};
  v.hermiticity = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  v.trace = std::abs(rho.trace() - Complex(1.0, 0.0));
  Mat h = (rho + rho.adjoint()) / 2.0;
  double min_eig = hermitian_eigenvalues(h).minCoeff();
  v.negativity = min_eig < 0 ? -min_eig : 0.0;
  return v;
}

double StateViolation::max() const {
  return std::max({hermiticity, trace, negativity});
}

DensityOperator::DensityOperator(Mat rho, SubsystemLayout layout)
    : rho_(std::move(rho)), layout_(std::move(layout)) {
  if (rho_.rows() != rho_.cols())
    throw std::invalid_argument("DensityOperator: matrix must be square");
  if (layout_.total() != rho_.rows())
    throw std::invalid_argument("DensityOperator: layout does not match dimension");
  if (!all_finite(rho_))
    throw std::invalid_argument("DensityOperator: non-finite entries");
  StateViolation v = state_violation(rho_);
  if (v.hermiticity > 1e-8 || v.trace > 1e-9 || v.negativity > kPsdTol)
    throw std::invalid_argument(
        "DensityOperator: invariant violation (herm " + std::to_string(v.hermiticity) +
        ", trace " + std::to_string(v.trace) + ", neg " + std::to_string(v.negativity) + ")");
}

DensityOperator DensityOperator::pure(const CVec& psi, SubsystemLayout layout) {
  CVec n = psi / psi.norm();
  return DensityOperator(n * n.adjoint(), std::move(layout));
}

DensityOperator DensityOperator::maximally_mixed(SubsystemLayout layout) {
  int d = layout.total();
  return DensityOperator(Mat::Identity(d, d) / static_cast<double>(d), std::move(layout));
}

bool DensityOperator::is_pure(double tol) const {
  return std::abs((rho_ * rho_).trace().real() - 1.0) < tol;
}

Mat tensor(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Mat tensor(const std::vector<Mat>& factors) {
  if (factors.empty()) throw std::invalid_argument("tensor: empty factor list");
  Mat out = factors[0];
  for (size_t k = 1; k < factors.size(); ++k) out = tensor(out, factors[k]);
  return out;
}

Mat partial_trace(const Mat& rho, const SubsystemLayout& layout,
                  const std::vector<int>& keep) {
  const int n = layout.size();
  if (keep.empty()) throw std::invalid_argument("partial_trace: keep must be non-empty");
  std::vector<int> k = keep;
  std::sort(k.begin(), k.end());
  if (std::unique(k.begin(), k.end()) != k.end())
    throw std::invalid_argument("partial_trace: duplicate index");
  for (int idx : k)
    if (idx < 0 || idx >= n) throw std::invalid_argument("partial_trace: invalid index");
  if (layout.total() != rho.rows() || rho.rows() != rho.cols())
    throw std::invalid_argument("partial_trace: layout mismatch");

  int d_keep = 1;
  for (int idx : k) d_keep *= layout.dims[static_cast<size_t>(idx)];
  std::vector<int> traced;
  for (int i = 0; i < n; ++i)
    if (!std::binary_search(k.begin(), k.end(), i)) traced.push_back(i);
  int d_tr = 1;
  for (int idx : traced) d_tr *= layout.dims[static_cast<size_t>(idx)];

  // strides of each factor in the row-major composite index
  std::vector<int> stride(static_cast<size_t>(n), 1);
  for (int i = n - 2; i >= 0; --i)
    stride[static_cast<size_t>(i)] =
        stride[static_cast<size_t>(i + 1)] * layout.dims[static_cast<size_t>(i + 1)];

  auto expand = [&](const std::vector<int>& subs, int code) {
    int full = 0;
    for (size_t p = 0; p < subs.size(); ++p) {
      int dim = layout.dims[static_cast<size_t>(subs[p])];
      int rem = code;
      for (size_t q = subs.size() - 1; q > p; --q) rem /= layout.dims[static_cast<size_t>(subs[q])];
      full += (rem % dim) * stride[static_cast<size_t>(subs[p])];
    }
    return full;
  };

  Mat out = Mat::Zero(d_keep, d_keep);
  for (int i = 0; i < d_keep; ++i) {
    int bi = expand(k, i);
    for (int j = 0; j < d_keep; ++j) {
      int bj = expand(k, j);
      Complex acc = 0.0;
      for (int t = 0; t < d_tr; ++t) {
        int bt = expand(traced, t);
        acc += rho(bi + bt, bj + bt);
      }
      out(i, j) = acc;
    }
  }
  return out;
}

DensityOperator partial_trace(const DensityOperator& rho, const std::vector<int>& keep) {
  Mat m = partial_trace(rho.mat(), rho.layout(), keep);
  std::vector<int> k = keep;
  std::sort(k.begin(), k.end());
  std::vector<int> dims;
  for (int idx : k) dims.push_back(rho.layout().dims[static_cast<size_t>(idx)]);
  return DensityOperator(m, SubsystemLayout(dims));
}

SpinOperatorSet spin_operators(int n_spins) {
  SpinOperatorSet out;
  out.n_spins = n_spins;
  const Mat sx = pauli_x() / 2.0, sy = pauli_y() / 2.0, sz = pauli_z() / 2.0;
  for (int k = 0; k < n_spins; ++k) {
    std::vector<Mat> fx, fy, fz;
    for (int i = 0; i < n_spins; ++i) {
      fx.push_back(i == k ? sx : identity(2));
      fy.push_back(i == k ? sy : identity(2));
      fz.push_back(i == k ? sz : identity(2));
    }
    out.x.push_back(tensor(fx));
    out.y.push_back(tensor(fy));
    out.z.push_back(tensor(fz));
    out.plus.push_back(out.x.back() + Complex(0, 1) * out.y.back());
    out.minus.push_back(out.x.back() - Complex(0, 1) * out.y.back());
  }
  return out;
}

double entropy_of(const Mat& rho) {
  return clamped_entropy(hermitian_eigenvalues((rho + rho.adjoint()) / 2.0));
}

double von_neumann_entropy(const DensityOperator& rho) { return entropy_of(rho.mat()); }

double mutual_information(const DensityOperator& rho, const std::vector<int>& part_a) {
  std::vector<int> part_b;
  std::vector<int> a = part_a;
  std::sort(a.begin(), a.end());
  for (int i = 0; i < rho.layout().size(); ++i)
    if (!std::binary_search(a.begin(), a.end(), i)) part_b.push_back(i);
  if (part_b.empty() || a.empty())
    throw std::invalid_argument("mutual_information: cut must be a proper bipartition");
  double sa = entropy_of(partial_trace(rho.mat(), rho.layout(), a));
  double sb = entropy_of(partial_trace(rho.mat(), rho.layout(), part_b));
  return sa + sb - von_neumann_entropy(rho);
}

namespace {

// Post-measurement classical-quantum decomposition for projectors {P_i} on
// the measured party embedded in the full space. Returns S(B) - sum p S(B|i).
double holevo_j(const Mat& rho, const SubsystemLayout& layout, int measured,
                const std::vector<Mat>& projectors) {
  std::vector<int> rest;
  for (int i = 0; i < layout.size(); ++i)
    if (i != measured) rest.push_back(i);
  double j = entropy_of(partial_trace(rho, layout, rest));
  for (const Mat& p : projectors) {
    Mat pr = p * rho * p;
    double prob = pr.trace().real();
    if (prob < 1e-14) continue;
    j -= prob * entropy_of(partial_trace(pr / prob, layout, rest));
  }
  return j;
}

std::vector<Mat> qubit_axis_projectors(const SubsystemLayout& layout, int measured,
                                       const Eigen::Vector3d& n) {
  Mat plocal = 0.5 * (identity(2) + n(0) * pauli_x() + n(1) * pauli_y() + n(2) * pauli_z());
  std::vector<Mat> f0, f1;
  for (int i = 0; i < layout.size(); ++i) {
    int d = layout.dims[static_cast<size_t>(i)];
    f0.push_back(i == measured ? plocal : identity(d));
    f1.push_back(i == measured ? Mat(identity(2) - plocal) : identity(d));
  }
  return {tensor(f0), tensor(f1)};
}

}  // namespace

DiscordResult quantum_discord(const DensityOperator& rho, int measured,
                              const DiscordOptions& opts) {
  const SubsystemLayout& layout = rho.layout();
  if (measured < 0 || measured >= layout.size())
    throw std::invalid_argument("quantum_discord: invalid measured index");
  std::vector<int> ai{measured};
  double mi = mutual_information(rho, ai);

  DiscordResult res;
  const int d_meas = layout.dims[static_cast<size_t>(measured)];
  if (d_meas == 2) {
    double best_j = -1e300;
    Eigen::Vector3d best_axis(0, 0, 1);
    const int n = opts.grid;
    for (int it = 0; it <= n; ++it) {
      double th = M_PI * it / n;
      for (int ip = 0; ip < n; ++ip) {
        double ph = 2.0 * M_PI * ip / n;
        Eigen::Vector3d axis(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
                             std::cos(th));
        double j = holevo_j(rho.mat(), layout, measured,
                            qubit_axis_projectors(layout, measured, axis));
        if (j > best_j) {
          best_j = j;
          best_axis = axis;
        }
      }
    }
    if (opts.refine) {
      // Nelder-Mead on (theta, phi)
      double th0 = std::acos(std::clamp(best_axis(2), -1.0, 1.0));
      double ph0 = std::atan2(best_axis(1), best_axis(0));
      auto f = [&](double th, double ph) {
        Eigen::Vector3d axis(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
                             std::cos(th));
        return -holevo_j(rho.mat(), layout, measured,
                         qubit_axis_projectors(layout, measured, axis));
      };
      double step = M_PI / opts.grid;
      std::array<std::array<double, 2>, 3> simplex{{{th0, ph0}, {th0 + step, ph0}, {th0, ph0 + step}}};
      std::array<double, 3> fv{};
      for (int i = 0; i < 3; ++i) fv[static_cast<size_t>(i)] = f(simplex[static_cast<size_t>(i)][0], simplex[static_cast<size_t>(i)][1]);
      int iter = 0;
      for (; iter < opts.refine_iters; ++iter) {
        std::array<int, 3> idx{0, 1, 2};
        std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fv[static_cast<size_t>(a)] < fv[static_cast<size_t>(b)]; });
        auto &lo = simplex[static_cast<size_t>(idx[0])], &hi = simplex[static_cast<size_t>(idx[2])];
        if (std::abs(fv[static_cast<size_t>(idx[2])] - fv[static_cast<size_t>(idx[0])]) < 1e-13) break;
        std::array<double, 2> cen{(lo[0] + simplex[static_cast<size_t>(idx[1])][0]) / 2.0,
                                  (lo[1] + simplex[static_cast<size_t>(idx[1])][1]) / 2.0};
        std::array<double, 2> refl{2 * cen[0] - hi[0], 2 * cen[1] - hi[1]};
        double fr = f(refl[0], refl[1]);
        if (fr < fv[static_cast<size_t>(idx[0])]) {
          std::array<double, 2> exp2{3 * cen[0] - 2 * hi[0], 3 * cen[1] - 2 * hi[1]};
          double fe = f(exp2[0], exp2[1]);
          if (fe < fr) { hi = exp2; fv[static_cast<size_t>(idx[2])] = fe; }
          else { hi = refl; fv[static_cast<size_t>(idx[2])] = fr; }
        } else if (fr < fv[static_cast<size_t>(idx[1])]) {
          hi = refl; fv[static_cast<size_t>(idx[2])] = fr;
        } else {
          std::array<double, 2> con{(cen[0] + hi[0]) / 2.0, (cen[1] + hi[1]) / 2.0};
          double fc = f(con[0], con[1]);
          if (fc < fv[static_cast<size_t>(idx[2])]) { hi = con; fv[static_cast<size_t>(idx[2])] = fc; }
          else {
            for (int i : {idx[1], idx[2]}) {
              simplex[static_cast<size_t>(i)][0] = (simplex[static_cast<size_t>(i)][0] + lo[0]) / 2.0;
              simplex[static_cast<size_t>(i)][1] = (simplex[static_cast<size_t>(i)][1] + lo[1]) / 2.0;
              fv[static_cast<size_t>(i)] = f(simplex[static_cast<size_t>(i)][0], simplex[static_cast<size_t>(i)][1]);
            }
          }
        }
      }
      res.converged = iter < opts.refine_iters;
      int bi = static_cast<int>(std::min_element(fv.begin(), fv.end()) - fv.begin());
      double th = simplex[static_cast<size_t>(bi)][0], ph = simplex[static_cast<size_t>(bi)][1];
      double jr = -fv[static_cast<size_t>(bi)];
      if (jr > best_j) {
        best_j = jr;
        best_axis = Eigen::Vector3d(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
                                    std::cos(th));
      }
    }
    res.value = mi - best_j;
    res.axis = best_axis;
  } else {
    // computational-basis family with seeded local perturbations
    auto basis_projectors = [&](const Mat& u) {
      std::vector<Mat> out;
      for (int k = 0; k < d_meas; ++k) {
        Mat pl = u.col(k) * u.col(k).adjoint();
        std::vector<Mat> f;
        for (int i = 0; i < layout.size(); ++i)
          f.push_back(i == measured ? pl : identity(layout.dims[static_cast<size_t>(i)]));
        out.push_back(tensor(f));
      }
      return out;
    };
    double best_j = holevo_j(rho.mat(), layout, measured, basis_projectors(identity(d_meas)));
    if (opts.refine) {
      std::mt19937_64 rng(opts.seed);
      std::normal_distribution<double> g(0.0, 1.0);
      Mat u_best = identity(d_meas);
      double scale = 0.3;
      for (int it = 0; it < opts.refine_iters; ++it) {
        Mat h(d_meas, d_meas);
        for (int i = 0; i < d_meas; ++i)
          for (int j = 0; j < d_meas; ++j) h(i, j) = Complex(g(rng), g(rng));
        h = (h + h.adjoint()) / 2.0;
        Mat u_try = u_best * ((Complex(0, -1) * scale * h).exp());
        double j = holevo_j(rho.mat(), layout, measured, basis_projectors(u_try));
        if (j > best_j + 1e-15) {
          best_j = j;
          u_best = u_try;
        } else {
          scale *= 0.97;
        }
      }
    }
    res.value = mi - best_j;
  }

  if (res.value < -1e-6) res.converged = false;
  res.value = std::max(res.value, 0.0);
  return res;
}

double trace_distance(const Mat& a, const Mat& b) {
  Mat d = (a - b);
  d = (d + d.adjoint()) / 2.0;
  Eigen::VectorXd ev = hermitian_eigenvalues(d);
  return 0.5 * ev.cwiseAbs().sum();
}

double trace_distance(const DensityOperator& a, const DensityOperator& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("trace_distance: dimension mismatch");
  return trace_distance(a.mat(), b.mat());
}

double relative_entropy_mat(const Mat& a, const Mat& b) {
  Eigen::SelfAdjointEigenSolver<Mat> ea((a + a.adjoint()) / 2.0);
  Eigen::SelfAdjointEigenSolver<Mat> eb((b + b.adjoint()) / 2.0);
  // support check: weight of a outside supp(b)
  double outside = 0.0;
  for (int i = 0; i < eb.eigenvalues().size(); ++i) {
    if (eb.eigenvalues()(i) <= kEigClamp) {
      CVec v = eb.eigenvectors().col(i);
      outside += std::abs((v.adjoint() * a * v)(0, 0).real());
    }
  }
  if (outside > 1e-10) return std::numeric_limits<double>::infinity();

  double tr_a_ln_a = 0.0;
  for (int i = 0; i < ea.eigenvalues().size(); ++i) {
    double p = ea.eigenvalues()(i);
    if (p > kEigClamp) tr_a_ln_a += p * std::log(p);
  }
  double tr_a_ln_b = 0.0;
  for (int i = 0; i < eb.eigenvalues().size(); ++i) {
    double q = eb.eigenvalues()(i);
    if (q > kEigClamp) {
      CVec v = eb.eigenvectors().col(i);
      tr_a_ln_b += (v.adjoint() * a * v)(0, 0).real() * std::log(q);
    }
  }
  return tr_a_ln_a - tr_a_ln_b;
}

double relative_entropy(const DensityOperator& a, const DensityOperator& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("relative_entropy: dimension mismatch");
  return relative_entropy_mat(a.mat(), b.mat());
}

namespace {

// Bell basis for two qubits: phi+, phi-, psi+, psi-.
Mat bell_basis_2q() {
  Mat u(4, 4);
  const double s = 1.0 / std::sqrt(2.0);
  u.col(0) << s, 0, 0, s;
  u.col(1) << s, 0, 0, -s;
  u.col(2) << 0, s, s, 0;
  u.col(3) << 0, s, -s, 0;
  return u;
}

double binary_entropy_nats(double p) {
  double s = 0.0;
  if (p > kEigClamp) s -= p * std::log(p);
  if (1.0 - p > kEigClamp) s -= (1.0 - p) * std::log(1.0 - p);
  return s;
}

double concurrence_2q(const Mat& rho) {
  Mat yy = tensor(pauli_y(), pauli_y());
  Mat rt = rho * yy * rho.conjugate() * yy;
  Eigen::ComplexEigenSolver<Mat> es(rt);
  std::vector<double> lam;
  for (int i = 0; i < 4; ++i) lam.push_back(std::sqrt(std::max(0.0, es.eigenvalues()(i).real())));
  std::sort(lam.begin(), lam.end(), std::greater<double>());
  return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

}  // namespace

EntanglementReport entanglement_measure(const DensityOperator& rho,
                                        const std::vector<int>& part_a,
                                        double bell_tol) {
  EntanglementReport rep;
  std::vector<int> a = part_a;
  std::sort(a.begin(), a.end());
  int da = 1, db = 1;
  for (int i = 0; i < rho.layout().size(); ++i) {
    int d = rho.layout().dims[static_cast<size_t>(i)];
    if (std::binary_search(a.begin(), a.end(), i)) da *= d; else db *= d;
  }
  const double norm = std::log(static_cast<double>(std::min(da, db)));

  if (rho.is_pure()) {
    rep.pure = true;
    rep.nats = entropy_of(partial_trace(rho.mat(), rho.layout(), a));
    rep.normalized = norm > 0 ? rep.nats / norm : 0.0;
    return rep;
  }
  if (da != 2 || db != 2)
    throw std::invalid_argument("entanglement_measure: mixed states supported on 2x2 cuts only");

  // reorder so the cut is (A : B) with A first
  Mat m = rho.mat();
  if (rho.layout().size() == 2 && a == std::vector<int>{1}) {
    // swap the two qubits
    Mat swap(4, 4);
    swap.setZero();
    swap(0, 0) = swap(3, 3) = 1;
    swap(1, 2) = swap(2, 1) = 1;
    m = swap * m * swap;
  } else if (rho.layout().size() != 2) {
    throw std::invalid_argument("entanglement_measure: mixed multi-factor cuts unsupported");
  }

  Mat u = bell_basis_2q();
  Mat mb = u.adjoint() * m * u;
  Mat off = mb;
  off.diagonal().setZero();
  if (off.cwiseAbs().maxCoeff() <= bell_tol) {
    rep.bell_diagonal = true;
    double lmax = mb.diagonal().real().maxCoeff();
    rep.nats = lmax > 0.5 ? std::log(2.0) - binary_entropy_nats(lmax) : 0.0;
    rep.normalized = rep.nats / std::log(2.0);
    return rep;
  }
  rep.used_concurrence_fallback = true;
  rep.concurrence = concurrence_2q(m);
  double x = (1.0 + std::sqrt(std::max(0.0, 1.0 - rep.concurrence * rep.concurrence))) / 2.0;
  rep.nats = binary_entropy_nats(x);
  rep.normalized = rep.nats / std::log(2.0);
  return rep;
}

DensityOperator thermal_state(const Mat& hamiltonian, double beta,
                              const SubsystemLayout& layout) {
  if (beta < 0) throw std::invalid_argument("thermal_state: beta must be >= 0");
  Eigen::SelfAdjointEigenSolver<Mat> es((hamiltonian + hamiltonian.adjoint()) / 2.0);
  Eigen::VectorXd e = es.eigenvalues();
  double e0 = e.minCoeff();
  Eigen::VectorXd w = (-(e.array() - e0) * beta).exp();
  w /= w.sum();
  Mat rho = es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
  return DensityOperator(rho, layout);
}

DensityOperator thermal_state_linear(const Mat& hamiltonian, double beta,
                                     const SubsystemLayout& layout) {
  int d = static_cast<int>(hamiltonian.rows());
  Mat traceless = hamiltonian - (hamiltonian.trace() / static_cast<double>(d)) * identity(d);
  Mat rho = (identity(d) - beta * traceless) / static_cast<double>(d);
  return DensityOperator(rho, layout);
}

Mat spherical_tensor(const SpinOperatorSet& ops, int i, int j, int m) {
  if (m < -2 || m > 2) throw std::invalid_argument("spherical_tensor: m out of range");
  if (i < 0 || j < 0 || i >= ops.n_spins || j >= ops.n_spins || i == j)
    throw std::invalid_argument("spherical_tensor: invalid spin pair");
  const Mat &xi = ops.x[static_cast<size_t>(i)], &yi = ops.y[static_cast<size_t>(i)],
            &zi = ops.z[static_cast<size_t>(i)];
  const Mat &xj = ops.x[static_cast<size_t>(j)], &yj = ops.y[static_cast<size_t>(j)],
            &zj = ops.z[static_cast<size_t>(j)];
  const Mat pi = ops.plus[static_cast<size_t>(i)], mi = ops.minus[static_cast<size_t>(i)];
  const Mat pj = ops.plus[static_cast<size_t>(j)], mj = ops.minus[static_cast<size_t>(j)];
  switch (m) {
    case 0:
      return (3.0 * zi * zj - (xi * xj + yi * yj + zi * zj)) / std::sqrt(6.0);
    case 1:
      return -0.5 * (pi * zj + zi * pj);
    case -1:
      return 0.5 * (mi * zj + zi * mj);
    case 2:
      return 0.5 * pi * pj;
    default:
      return 0.5 * mi * mj;
  }
}

}  // namespace qcore
}  // namespace spinsim
