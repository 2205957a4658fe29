#include <doctest.h>

#include <cmath>

#include "spinsim/qcore.hpp"
#include "test_helpers.hpp"

using namespace spinsim;
using namespace spinsim::qcore;

namespace {
const double ln2 = std::log(2.0);

DensityOperator bell_pair() {
  CVec v(4);
  v << 1, 0, 0, 1;
  return DensityOperator::pure(v, SubsystemLayout::qubits(2));
}
}  // namespace

TEST_CASE("tensor product basics") {
  CHECK(approx_equal(tensor(identity(2), identity(2)), identity(4)));
  Mat zz = tensor(pauli_z(), pauli_z());
  Mat diag = Mat::Zero(4, 4);
  diag.diagonal() << 1, -1, -1, 1;
  CHECK(approx_equal(zz, diag));

  // |0><0| ox sigma_x fills the upper-left block only
  Mat p0 = Mat::Zero(2, 2);
  p0(0, 0) = 1;
  Mat m = tensor(p0, pauli_x());
  Mat expect = Mat::Zero(4, 4);
  expect(0, 1) = 1;
  expect(1, 0) = 1;
  CHECK(approx_equal(m, expect));
}

TEST_CASE("partial trace") {
  std::mt19937_64 rng(7);
  Mat ra = testutil::random_density(2, rng);
  Mat rb = testutil::random_density(2, rng);
  SubsystemLayout two = SubsystemLayout::qubits(2);

  SUBCASE("product state reduces to its factor") {
    Mat rho = tensor(ra, rb);
    CHECK(approx_equal(partial_trace(rho, two, {0}), ra, 1e-12));
    CHECK(approx_equal(partial_trace(rho, two, {1}), rb, 1e-12));
  }
  SUBCASE("bell state reduces to the maximally mixed state") {
    CHECK(approx_equal(partial_trace(bell_pair().mat(), two, {1}), identity(2) / 2.0, 1e-12));
  }
  SUBCASE("flagged mixture over C traces to the separable pair") {
    CVec eta_p(4), eta_m(4);
    eta_p << 0, 1, Complex(0, 1), 0;
    eta_m << 0, 1, Complex(0, -1), 0;
    eta_p /= std::sqrt(2.0);
    eta_m /= std::sqrt(2.0);
    Mat p0 = Mat::Zero(2, 2), p1 = Mat::Zero(2, 2);
    p0(0, 0) = 1;
    p1(1, 1) = 1;
    Mat rho = 0.5 * tensor(p0, Mat(eta_p * eta_p.adjoint())) +
              0.5 * tensor(p1, Mat(eta_m * eta_m.adjoint()));
    Mat ab = partial_trace(rho, SubsystemLayout::qubits(3), {1, 2});
    Mat expect = Mat::Zero(4, 4);
    expect(1, 1) = 0.5;
    expect(2, 2) = 0.5;
    CHECK(approx_equal(ab, expect, 1e-12));
  }
  SUBCASE("trace preserved, linear, and composable") {
    std::mt19937_64 r2(11);
    Mat rho = testutil::random_density(8, r2);
    SubsystemLayout three = SubsystemLayout::qubits(3);
    Mat keep_a = partial_trace(rho, three, {0});
    CHECK(std::abs(keep_a.trace().real() - 1.0) < 1e-12);
    // tr_B then tr_C equals tr_{BC}
    Mat ab = partial_trace(rho, three, {0, 1});
    Mat a1 = partial_trace(ab, SubsystemLayout::qubits(2), {0});
    CHECK(approx_equal(a1, keep_a, 1e-12));
  }
  SUBCASE("invalid index rejected") {
    Mat rho = tensor(ra, rb);
    CHECK_THROWS(partial_trace(rho, two, {2}));
    CHECK_THROWS(partial_trace(rho, two, {}));
  }
}

TEST_CASE("von Neumann entropy") {
  std::mt19937_64 rng(3);
  SUBCASE("pure state has zero entropy") {
    DensityOperator rho = DensityOperator::pure(testutil::random_ket(4, rng),
                                                SubsystemLayout::qubits(2));
    CHECK(von_neumann_entropy(rho) == doctest::Approx(0.0).epsilon(1e-10));
  }
  SUBCASE("maximally mixed state has ln d") {
    for (int d : {2, 3, 4, 8}) {
      DensityOperator rho = DensityOperator::maximally_mixed(SubsystemLayout::single(d));
      CHECK(von_neumann_entropy(rho) == doctest::Approx(std::log(d)).epsilon(1e-12));
    }
  }
  SUBCASE("balanced classical mixture gives ln 2") {
    Mat rho = Mat::Zero(4, 4);
    rho(0, 0) = 0.5;
    rho(3, 3) = 0.5;
    DensityOperator s(rho, SubsystemLayout::qubits(2));
    CHECK(von_neumann_entropy(s) == doctest::Approx(ln2).epsilon(1e-12));
  }
  SUBCASE("unitary invariance") {
    for (int trial = 0; trial < 5; ++trial) {
      Mat rho = testutil::random_density(4, rng);
      Mat u = testutil::random_unitary(4, rng);
      CHECK(std::abs(entropy_of(u * rho * u.adjoint()) - entropy_of(rho)) < 1e-9);
    }
  }
}

TEST_CASE("mutual information") {
  std::mt19937_64 rng(5);
  SUBCASE("product state carries none") {
    Mat rho = tensor(testutil::random_density(2, rng), testutil::random_density(2, rng));
    DensityOperator s(rho, SubsystemLayout::qubits(2));
    CHECK(mutual_information(s, {0}) == doctest::Approx(0.0).epsilon(1e-10));
  }
  SUBCASE("balanced classical correlation peaks at ln 2") {
    Mat rho = Mat::Zero(4, 4);
    rho(0, 0) = 0.5;
    rho(3, 3) = 0.5;
    DensityOperator s(rho, SubsystemLayout::qubits(2));
    CHECK(mutual_information(s, {0}) == doctest::Approx(ln2).epsilon(1e-12));
    // p = 1/2 maximizes over the classical family
    for (double p : {0.1, 0.3, 0.7}) {
      Mat r2 = Mat::Zero(4, 4);
      r2(0, 0) = p;
      r2(3, 3) = 1 - p;
      CHECK(mutual_information(DensityOperator(r2, SubsystemLayout::qubits(2)), {0}) <
            ln2 + 1e-12);
    }
  }
  SUBCASE("bell state reaches 2 ln 2") {
    CHECK(mutual_information(bell_pair(), {0}) == doctest::Approx(2 * ln2).epsilon(1e-10));
  }
  SUBCASE("never negative on random states") {
    for (int t = 0; t < 10; ++t) {
      DensityOperator s(testutil::random_density(4, rng), SubsystemLayout::qubits(2));
      CHECK(mutual_information(s, {0}) > -1e-9);
    }
  }
}

namespace {

// independent fine-grid brute force over measurement angles (1 degree)
double discord_oracle_qubit(const DensityOperator& rho) {
  double mi = mutual_information(rho, {0});
  SubsystemLayout layout = rho.layout();
  double best_j = -1e300;
  for (int thd = 0; thd <= 90; ++thd) {
    for (int phd = 0; phd < 180; ++phd) {
      double th = thd * M_PI / 180.0, ph = phd * M_PI / 180.0;
      Eigen::Vector3d n(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
                        std::cos(th));
      Mat pl = 0.5 * (identity(2) + n(0) * pauli_x() + n(1) * pauli_y() + n(2) * pauli_z());
      Mat p0 = tensor(pl, identity(2));
      Mat p1 = tensor(Mat(identity(2) - pl), identity(2));
      double j = entropy_of(partial_trace(rho.mat(), layout, {1}));
      for (const Mat& p : {p0, p1}) {
        Mat pr = p * rho.mat() * p;
        double prob = pr.trace().real();
        if (prob < 1e-14) continue;
        j -= prob * entropy_of(partial_trace(pr / prob, layout, {1}));
      }
      best_j = std::max(best_j, j);
    }
  }
  return mi - best_j;
}

}  // namespace

TEST_CASE("quantum discord") {
  SUBCASE("classical-classical mixture has zero discord") {
    std::mt19937_64 rng(9);
    Mat rho = Mat::Zero(4, 4);
    Mat ra = testutil::random_density(2, rng);
    Mat rb = testutil::random_density(2, rng);
    Mat p0 = Mat::Zero(2, 2), p1 = Mat::Zero(2, 2);
    p0(0, 0) = 1;
    p1(1, 1) = 1;
    rho = 0.4 * tensor(p0, ra) + 0.6 * tensor(p1, rb);
    DensityOperator s(rho, SubsystemLayout::qubits(2));
    CHECK(quantum_discord(s, 0).value < 1e-7);
  }
  SUBCASE("flagged bell mixture is discord-free as seen from C") {
    CVec eta_p(4), eta_m(4);
    eta_p << 0, 1, Complex(0, 1), 0;
    eta_m << 0, 1, Complex(0, -1), 0;
    eta_p /= std::sqrt(2.0);
    eta_m /= std::sqrt(2.0);
    Mat p0 = Mat::Zero(2, 2), p1 = Mat::Zero(2, 2);
    p0(0, 0) = 1;
    p1(1, 1) = 1;
    Mat rho = 0.5 * tensor(p0, Mat(eta_p * eta_p.adjoint())) +
              0.5 * tensor(p1, Mat(eta_m * eta_m.adjoint()));
    DensityOperator s(rho, SubsystemLayout::qubits(3));
    CHECK(quantum_discord(s, 0).value < 1e-6);
  }
  SUBCASE("werner-like mixture matches the angle-grid oracle") {
    CVec v(4);
    v << 1, 0, 0, 1;
    v /= std::sqrt(2.0);
    Mat rho = 0.5 * Mat(v * v.adjoint()) + 0.5 * identity(4) / 4.0;
    DensityOperator s(rho, SubsystemLayout::qubits(2));
    double oracle = discord_oracle_qubit(s);
    CHECK(oracle == doctest::Approx(0.181939478770).epsilon(1e-6));
    CHECK(quantum_discord(s, 0).value == doctest::Approx(oracle).epsilon(1e-6));
  }
}

TEST_CASE("trace distance") {
  std::mt19937_64 rng(13);
  DensityOperator a(testutil::random_density(4, rng), SubsystemLayout::qubits(2));
  SUBCASE("identical states at zero") { CHECK(trace_distance(a, a) == doctest::Approx(0.0)); }
  SUBCASE("orthogonal pure states at one") {
    DensityOperator p0 = DensityOperator::pure(basis_ket(0, 2), SubsystemLayout::single(2));
    DensityOperator p1 = DensityOperator::pure(basis_ket(1, 2), SubsystemLayout::single(2));
    CHECK(trace_distance(p0, p1) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("metric on a random triple") {
    DensityOperator b(testutil::random_density(4, rng), SubsystemLayout::qubits(2));
    DensityOperator c(testutil::random_density(4, rng), SubsystemLayout::qubits(2));
    double ab = trace_distance(a, b), bc = trace_distance(b, c), ac = trace_distance(a, c);
    CHECK(ac <= ab + bc + 1e-9);
    CHECK(ab >= 0.0);
    CHECK(ab <= 1.0 + 1e-12);
  }
}

TEST_CASE("relative entropy") {
  std::mt19937_64 rng(17);
  DensityOperator a(testutil::random_density(4, rng), SubsystemLayout::qubits(2));
  SUBCASE("zero against itself") {
    CHECK(relative_entropy(a, a) == doctest::Approx(0.0).epsilon(1e-9));
  }
  SUBCASE("support violation returns the infinity sentinel") {
    DensityOperator mixed = DensityOperator::maximally_mixed(SubsystemLayout::single(2));
    DensityOperator pure = DensityOperator::pure(basis_ket(0, 2), SubsystemLayout::single(2));
    CHECK(std::isinf(relative_entropy(mixed, pure)));
  }
  SUBCASE("nonnegative on random pairs") {
    for (int t = 0; t < 8; ++t) {
      DensityOperator x(testutil::random_density(4, rng), SubsystemLayout::qubits(2));
      DensityOperator y(testutil::random_density(4, rng), SubsystemLayout::qubits(2));
      double d = relative_entropy(x, y);
      CHECK(d > -1e-9);
    }
  }
}

TEST_CASE("entanglement measure") {
  SUBCASE("bell pair is maximal") {
    EntanglementReport r = entanglement_measure(bell_pair(), {0});
    CHECK(r.pure);
    CHECK(r.nats == doctest::Approx(ln2).epsilon(1e-10));
    CHECK(r.normalized == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("separable mixture carries none") {
    Mat rho = Mat::Zero(4, 4);
    rho(1, 1) = 0.5;
    rho(2, 2) = 0.5;
    EntanglementReport r =
        entanglement_measure(DensityOperator(rho, SubsystemLayout::qubits(2)), {0});
    CHECK(r.bell_diagonal);
    CHECK(r.normalized == doctest::Approx(0.0));
  }
  SUBCASE("bell-diagonal closed form against the pure limit") {
    // p |psi-><psi-| + (1-p) |psi+><psi+| sweeps 0 -> 1
    CVec sm(4), sp(4);
    sm << 0, 1, -1, 0;
    sp << 0, 1, 1, 0;
    sm /= std::sqrt(2.0);
    sp /= std::sqrt(2.0);
    for (double p : {0.5, 0.75, 0.95, 1.0 - 1e-9}) {
      Mat rho = p * Mat(sm * sm.adjoint()) + (1 - p) * Mat(sp * sp.adjoint());
      EntanglementReport r =
          entanglement_measure(DensityOperator(rho, SubsystemLayout::qubits(2)), {0});
      CHECK(r.bell_diagonal);
      double expect = ln2 + p * std::log(p) + (1 - p) * std::log(1 - p);
      CHECK(r.nats == doctest::Approx(expect).epsilon(1e-7));
    }
  }
  SUBCASE("non-bell-diagonal input falls back to concurrence and is flagged") {
    std::mt19937_64 rng(23);
    Mat rho = 0.9 * Mat(bell_pair().mat()) + 0.1 * testutil::random_density(4, rng);
    rho = (rho + rho.adjoint()) / 2.0;
    rho /= rho.trace().real();
    EntanglementReport r =
        entanglement_measure(DensityOperator(rho, SubsystemLayout::qubits(2)), {0});
    CHECK(r.used_concurrence_fallback);
    CHECK(r.concurrence > 0.5);
  }
  SUBCASE("unsupported mixed dimensions rejected") {
    std::mt19937_64 rng(29);
    DensityOperator s(testutil::random_density(8, rng), SubsystemLayout::qubits(3));
    CHECK_THROWS(entanglement_measure(s, {0}));
  }
}

TEST_CASE("thermal state") {
  qcore::SpinOperatorSet ops = spin_operators(2);
  Mat h = 5.0 * (2.0 * ops.z[0]) + 2.0 * (2.0 * ops.z[1]);
  SUBCASE("beta zero is maximally mixed") {
    DensityOperator rho = thermal_state(h, 0.0, SubsystemLayout::qubits(2));
    CHECK(approx_equal(rho.mat(), identity(4) / 4.0, 1e-12));
  }
  SUBCASE("low temperature projects on the ground state") {
    Mat hz = pauli_z() / 2.0;
    DensityOperator rho = thermal_state(hz, 200.0, SubsystemLayout::single(2));
    Mat p1 = Mat::Zero(2, 2);
    p1(1, 1) = 1.0;
    CHECK(approx_equal(rho.mat(), p1, 1e-10));
  }
  SUBCASE("first-order expansion matches the exponential at high temperature") {
    const double eps = 1e-5;
    Mat hz = (2.0 * ops.z[0] + 2.0 * ops.z[1]);
    DensityOperator full = thermal_state(hz, eps, SubsystemLayout::qubits(2));
    DensityOperator lin = thermal_state_linear(hz, eps, SubsystemLayout::qubits(2));
    CHECK((full.mat() - lin.mat()).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("spherical tensors") {
  qcore::SpinOperatorSet ops = spin_operators(2);
  SUBCASE("t0 is the traceless secular combination and hermitian") {
    Mat t0 = spherical_tensor(ops, 0, 1, 0);
    Mat expect = (3.0 * ops.z[0] * ops.z[1] -
                  (ops.x[0] * ops.x[1] + ops.y[0] * ops.y[1] + ops.z[0] * ops.z[1])) /
                 std::sqrt(6.0);
    CHECK(approx_equal(t0, expect, 1e-12));
    CHECK(is_hermitian(t0));
  }
  SUBCASE("adjoint relations") {
    CHECK(approx_equal(spherical_tensor(ops, 0, 1, 0).adjoint(), spherical_tensor(ops, 0, 1, 0)));
    CHECK(approx_equal(spherical_tensor(ops, 0, 1, 1).adjoint(),
                       Mat(-spherical_tensor(ops, 0, 1, -1))));
    CHECK(approx_equal(spherical_tensor(ops, 0, 1, 2).adjoint(), spherical_tensor(ops, 0, 1, -2)));
  }
  SUBCASE("double raising is nilpotent") {
    Mat t2 = spherical_tensor(ops, 0, 1, 2);
    CHECK(approx_equal(t2 * t2, Mat(Mat::Zero(4, 4)), 1e-12));
    CHECK(approx_equal(t2, Mat(0.5 * ops.plus[0] * ops.plus[1]), 1e-12));
  }
  SUBCASE("z-rotation grading [Iz_tot, T_2m] = m T_2m") {
    Mat izt = ops.z[0] + ops.z[1];
    for (int m = -2; m <= 2; ++m) {
      Mat t = spherical_tensor(ops, 0, 1, m);
      CHECK(approx_equal(Mat(izt * t - t * izt), Mat(double(m) * t), 1e-12));
    }
  }
  SUBCASE("invalid order rejected") { CHECK_THROWS(spherical_tensor(ops, 0, 1, 3)); }
}

TEST_CASE("spin operator algebra") {
  qcore::SpinOperatorSet ops = spin_operators(2);
  // [I_kx, I_ky] = i I_kz on the full register, and cross-spin commutation
  for (int k = 0; k < 2; ++k) {
    Mat c = ops.x[static_cast<size_t>(k)] * ops.y[static_cast<size_t>(k)] -
            ops.y[static_cast<size_t>(k)] * ops.x[static_cast<size_t>(k)];
    CHECK(approx_equal(c, Mat(Complex(0, 1) * ops.z[static_cast<size_t>(k)]), 1e-12));
  }
  Mat cross = ops.x[0] * ops.y[1] - ops.y[1] * ops.x[0];
  CHECK(approx_equal(cross, Mat(Mat::Zero(4, 4)), 1e-14));
}

TEST_CASE("density operator validation") {
  SUBCASE("rejects non-hermitian") {
    Mat m = Mat::Zero(2, 2);
    m(0, 0) = 1.0;
    m(0, 1) = 0.1;
    CHECK_THROWS(DensityOperator(m, SubsystemLayout::single(2)));
  }
  SUBCASE("rejects wrong trace") {
    CHECK_THROWS(DensityOperator(identity(2), SubsystemLayout::single(2)));
  }
  SUBCASE("rejects negative eigenvalues") {
    Mat m = Mat::Zero(2, 2);
    m(0, 0) = 1.5;
    m(1, 1) = -0.5;
    CHECK_THROWS(DensityOperator(m, SubsystemLayout::single(2)));
  }
  SUBCASE("rejects layout mismatch") {
    CHECK_THROWS(DensityOperator(identity(4) / 4.0, SubsystemLayout::single(2)));
  }
}
