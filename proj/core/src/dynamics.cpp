#include "spinsim/dynamics.hpp"

#include <cmath>
#include <functional>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

namespace spinsim {
namespace dynamics {

CVec vectorize(const Mat& m) {
  CVec v(m.rows() * m.cols());
  for (int j = 0; j < m.cols(); ++j)
    for (int i = 0; i < m.rows(); ++i) v(j * m.rows() + i) = m(i, j);
  return v;
}

Mat unvectorize(const CVec& v, int d) {
  Mat m(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) m(i, j) = v(j * d + i);
  return m;
}

Mat left_mult(const Mat& a) {
  return qcore::tensor(qcore::identity(static_cast<int>(a.rows())), a);
}

Mat right_mult(const Mat& b) {
  return qcore::tensor(b.transpose(), qcore::identity(static_cast<int>(b.rows())));
}

Mat build_dissipator(const DissipatorTerm& term) {
  if (term.a.rows() != term.a.cols() || term.b.rows() != term.b.cols() ||
      term.a.rows() != term.b.rows())
    throw std::invalid_argument("build_dissipator: operator dimension mismatch");
  Mat ba = term.b * term.a;
  return term.rate * (qcore::tensor(term.b.transpose(), term.a) -
                      0.5 * left_mult(ba) - 0.5 * right_mult(ba));
}

Liouvillian build_liouvillian(const Mat& hamiltonian,
                              const std::vector<DissipatorTerm>& terms) {
  const int d = static_cast<int>(hamiltonian.rows());
  Liouvillian l;
  l.dim = d;
  l.hamiltonian_part = Complex(0, -1) * (left_mult(hamiltonian) - right_mult(hamiltonian));
  l.dissipative_part = Mat::Zero(d * d, d * d);
  for (const auto& t : terms) {
    if (t.a.rows() != d) throw std::invalid_argument("build_liouvillian: dimension mismatch");
    l.dissipative_part += build_dissipator(t);
  }
  l.op = l.hamiltonian_part + l.dissipative_part;
  return l;
}

Liouvillian dissipative_only(int dim, const std::vector<DissipatorTerm>& terms) {
  return build_liouvillian(Mat::Zero(dim, dim), terms);
}

Mat propagate_mat(const Liouvillian& l, const Mat& rho0, double t) {
  if (t < 0) throw std::invalid_argument("propagate: t must be >= 0");
  Mat e = (l.op * t).exp();
  return unvectorize(e * vectorize(rho0), l.dim);
}

DensityOperator propagate(const Liouvillian& l, const DensityOperator& rho0, double t) {
  Mat out = propagate_mat(l, rho0.mat(), t);
  qcore::StateViolation v = qcore::state_violation(out);
  if (v.hermiticity > 1e-8 || v.trace > 1e-8 || v.negativity > 1e-7)
    throw std::runtime_error("propagate: output state invalid, max violation " +
                             std::to_string(v.max()));
  // scrub round-off so downstream validation stays clean
  Mat h = (out + out.adjoint()) / 2.0;
  h /= h.trace().real();
  return DensityOperator(h, rho0.layout());
}

Mat propagate_rk4(const Liouvillian& l, const Mat& rho0, double t, double dt) {
  if (t < 0 || dt <= 0) throw std::invalid_argument("propagate_rk4: bad time arguments");
  CVec y = vectorize(rho0);
  const int steps = std::max(1, static_cast<int>(std::ceil(t / dt)));
  const double h = t / steps;
  for (int s = 0; s < steps; ++s) {
    CVec k1 = l.op * y;
    CVec k2 = l.op * (y + 0.5 * h * k1);
    CVec k3 = l.op * (y + 0.5 * h * k2);
    CVec k4 = l.op * (y + h * k3);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return unvectorize(y, l.dim);
}

std::vector<DecayMode> decay_modes(const Liouvillian& l) {
  Eigen::ComplexEigenSolver<Mat> es(l.op);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("decay_modes: eigendecomposition failed");
  Mat v = es.eigenvectors();
  Eigen::JacobiSVD<Mat> svd(v);
  double cond = svd.singularValues()(0) / svd.singularValues()(svd.singularValues().size() - 1);
  if (!(cond < 1e8))
    throw std::runtime_error(
        "decay_modes: eigenvector matrix ill-conditioned (defective Liouvillian); "
        "perturb the generator or use direct propagation");
  Mat w = v.inverse();  // rows are left eigenvectors with <w_i, v_j> = delta_ij

  std::vector<int> order(static_cast<size_t>(v.cols()));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(es.eigenvalues()(a).real()) < std::abs(es.eigenvalues()(b).real());
  });

  std::vector<DecayMode> modes;
  for (int idx : order) {
    DecayMode m;
    m.lambda = es.eigenvalues()(idx);
    m.right = unvectorize(v.col(idx), l.dim);
    // stored so that tr(left_i^dag right_j) = delta_ij
    m.left = unvectorize(CVec(w.row(idx).adjoint()), l.dim);
    modes.push_back(std::move(m));
  }
  return modes;
}

double spectral_density(const RelaxationSpec& spec, double x) {
  return 12.0 * spec.b * spec.b * spec.tau_c / (5.0 * (1.0 + x * x * spec.tau_c * spec.tau_c));
}

Liouvillian dipolar_liouvillian(const RelaxationSpec& spec) {
  if (spec.tau_c <= 0) throw std::invalid_argument("dipolar_liouvillian: tau_c must be > 0");
  qcore::SpinOperatorSet ops = qcore::spin_operators(2);
  std::vector<DissipatorTerm> terms;
  for (int m = -2; m <= 2; ++m) {
    Mat t2m = qcore::spherical_tensor(ops, 0, 1, m);
    double rate = spectral_density(spec, m * spec.omega0);
    if (spec.beta_correction) rate *= std::exp(m * spec.epsilon);
    terms.push_back({t2m, t2m.adjoint(), rate});
  }
  if (spec.include_csa || spec.include_cross_correlation) {
    // axially symmetric CSA along z: T_0 = sqrt(2/3) Iz, T_{+-1} = -+ I_{+-}/2,
    // T_{+-2} = 0 for the (field, spin) pair.
    const double d_csa = spec.delta_csa / 3.0;
    auto csa_tensor = [&](int j, int m) -> Mat {
      if (m == 0) return std::sqrt(2.0 / 3.0) * ops.z[static_cast<size_t>(j)];
      if (m == 1) return -0.5 * ops.plus[static_cast<size_t>(j)];
      if (m == -1) return 0.5 * ops.minus[static_cast<size_t>(j)];
      return Mat::Zero(4, 4);
    };
    for (int m = -1; m <= 1; ++m) {
      double k_val = 12.0 * d_csa * d_csa * spec.tau_c /
                     (5.0 * (1.0 + m * m * spec.omega0 * spec.omega0 * spec.tau_c * spec.tau_c));
      if (spec.beta_correction) k_val *= std::exp(m * spec.epsilon);
      if (spec.include_csa) {
        for (int j = 0; j < 2; ++j)
          for (int k = 0; k < 2; ++k)
            terms.push_back({csa_tensor(j, m), csa_tensor(k, m).adjoint(), k_val});
      }
      if (spec.include_cross_correlation) {
        double k_cc = -std::sqrt(k_val * spectral_density(spec, m * spec.omega0));
        Mat dd = qcore::spherical_tensor(ops, 0, 1, m);
        for (int j = 0; j < 2; ++j) {
          terms.push_back({dd, csa_tensor(j, m).adjoint(), k_cc});
          terms.push_back({csa_tensor(j, m), dd.adjoint(), k_cc});
        }
      }
    }
  }
  return dissipative_only(4, terms);
}

namespace {

std::vector<Complex> fid_common(const DensityOperator& rho0, const Mat& detect,
                                const std::vector<double>& t_grid, double lb,
                                const std::function<Mat(double)>& state_at) {
  std::vector<Complex> out;
  out.reserve(t_grid.size());
  for (double t : t_grid)
    out.push_back((detect * state_at(t)).trace() * std::exp(-lb * t));
  return out;
}

Mat detect_op(const DensityOperator& rho0, int detect_spin) {
  const auto& dims = rho0.layout().dims;
  std::vector<Mat> fx, fy;
  for (int i = 0; i < rho0.layout().size(); ++i) {
    if (dims[static_cast<size_t>(i)] != 2 && i == detect_spin)
      throw std::invalid_argument("fid_signal: detect spin must be a qubit");
    fx.push_back(i == detect_spin ? qcore::pauli_x() : qcore::identity(dims[static_cast<size_t>(i)]));
    fy.push_back(i == detect_spin ? qcore::pauli_y() : qcore::identity(dims[static_cast<size_t>(i)]));
  }
  return qcore::tensor(fx) + Complex(0, 1) * qcore::tensor(fy);
}

}  // namespace

std::vector<Complex> fid_signal(const DensityOperator& rho0, const Mat& h_eff,
                                int detect_spin, const std::vector<double>& t_grid,
                                double line_broadening) {
  for (size_t i = 1; i < t_grid.size(); ++i)
    if (t_grid[i] < t_grid[i - 1])
      throw std::invalid_argument("fid_signal: t_grid must be ascending");
  Eigen::SelfAdjointEigenSolver<Mat> es((h_eff + h_eff.adjoint()) / 2.0);
  Mat u = es.eigenvectors();
  Eigen::VectorXd e = es.eigenvalues();
  Mat rho_e = u.adjoint() * rho0.mat() * u;
  Mat det = detect_op(rho0, detect_spin);
  return fid_common(rho0, det, t_grid, line_broadening, [&](double t) {
    CVec ph(e.size());
    for (int k = 0; k < e.size(); ++k) ph(k) = std::exp(Complex(0, -e(k) * t));
    Mat rt = ph.asDiagonal() * rho_e * ph.asDiagonal().toDenseMatrix().adjoint();
    return Mat(u * rt * u.adjoint());
  });
}

std::vector<Complex> fid_signal(const DensityOperator& rho0, const Liouvillian& l,
                                int detect_spin, const std::vector<double>& t_grid,
                                double line_broadening) {
  Mat det = detect_op(rho0, detect_spin);
  return fid_common(rho0, det, t_grid, line_broadening,
                    [&](double t) { return propagate_mat(l, rho0.mat(), t); });
}

}  // namespace dynamics
}  // namespace spinsim
