#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace spinsim {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

namespace qcore {

// Absolute tolerance for matrix comparisons.
inline constexpr double kMatTol = 1e-10;
// Eigenvalues below this are treated as zero inside logarithms.
inline constexpr double kEigClamp = 1e-12;
// Allowed negativity of density-operator eigenvalues.
inline constexpr double kPsdTol = 1e-9;

bool all_finite(const Mat& m);
bool approx_equal(const Mat& a, const Mat& b, double tol = kMatTol);
bool is_hermitian(const Mat& m, double tol = kMatTol);

Mat identity(int d);
Mat pauli_x();
Mat pauli_y();
Mat pauli_z();
CVec basis_ket(int k, int d);

// Ordered list of local Hilbert-space dimensions for a composite register.
struct SubsystemLayout {
  std::vector<int> dims;

  SubsystemLayout() = default;
  explicit SubsystemLayout(std::vector<int> d);
  static SubsystemLayout qubits(int n);
  static SubsystemLayout single(int d);

  int total() const;
  int size() const { return static_cast<int>(dims.size()); }
};

// Hermitian, unit-trace, positive semi-definite matrix over a declared
// tensor-factor layout. Construction validates all three invariants.
class DensityOperator {
 public:
  DensityOperator(Mat rho, SubsystemLayout layout);
  static DensityOperator pure(const CVec& psi, SubsystemLayout layout);
  static DensityOperator maximally_mixed(SubsystemLayout layout);

  const Mat& mat() const { return rho_; }
  const SubsystemLayout& layout() const { return layout_; }
  int dim() const { return static_cast<int>(rho_.rows()); }
  bool is_pure(double tol = 1e-10) const;

 private:
  Mat rho_;
  SubsystemLayout layout_;
};

// Largest violation of the density-operator invariants; used in error text.
struct StateViolation {
  double hermiticity;
  double trace;
  double negativity;
  double max() const;
};
StateViolation state_violation(const Mat& rho);

Mat tensor(const Mat& a, const Mat& b);
Mat tensor(const std::vector<Mat>& factors);

// Partial trace keeping the listed factors (in ascending layout order).
Mat partial_trace(const Mat& rho, const SubsystemLayout& layout,
                  const std::vector<int>& keep);
DensityOperator partial_trace(const DensityOperator& rho,
                              const std::vector<int>& keep);

// x/y/z/raising/lowering spin operators for each spin of a qubit register,
// embedded in the full register space. Entries are I = sigma/2.
struct SpinOperatorSet {
  int n_spins = 0;
  std::vector<Mat> x, y, z, plus, minus;
};
SpinOperatorSet spin_operators(int n_spins);

double von_neumann_entropy(const DensityOperator& rho);
double entropy_of(const Mat& rho);

// I(A:B) = S(A) + S(B) - S(AB) in nats. part_a lists layout indices of A.
double mutual_information(const DensityOperator& rho,
                          const std::vector<int>& part_a);

struct DiscordOptions {
  int grid = 32;         // per angle, coarse scan of measurement axes
  bool refine = true;    // Nelder-Mead polish of the best grid cell
  int refine_iters = 200;
  uint64_t seed = 0x5eed;  // basis perturbations for the d>2 path
};

struct DiscordResult {
  double value = 0.0;      // nats, clamped at -1e-6 -> 0
  bool converged = true;   // false when refinement did not settle
  Eigen::Vector3d axis{0, 0, 1};  // best measurement axis (qubit case)
};

// Discord with projective measurement on the party at layout index
// `measured`. Single-qubit parties scan the Bloch sphere; larger parties use
// the computational basis family plus seeded local perturbations.
DiscordResult quantum_discord(const DensityOperator& rho, int measured,
                              const DiscordOptions& opts = {});

double trace_distance(const DensityOperator& a, const DensityOperator& b);
double trace_distance(const Mat& a, const Mat& b);

// -tr[a (ln a - ln b)]; +infinity when supp(a) is not contained in supp(b).
double relative_entropy(const DensityOperator& a, const DensityOperator& b);
double relative_entropy_mat(const Mat& a, const Mat& b);

struct EntanglementReport {
  double nats = 0.0;        // relative entropy of entanglement (or EoF)
  double normalized = 0.0;  // nats / ln(min local dim)
  bool pure = false;
  bool bell_diagonal = false;
  bool used_concurrence_fallback = false;
  double concurrence = 0.0;  // only filled on the fallback path
};

// Entanglement across the cut (part_a : rest). Pure states on any cut use the
// reduced-state entropy; mixed two-qubit states use the Bell-diagonal closed
// form, falling back to entanglement of formation via concurrence when the
// state is not Bell-diagonal within `bell_tol`.
EntanglementReport entanglement_measure(const DensityOperator& rho,
                                        const std::vector<int>& part_a,
                                        double bell_tol = 1e-7);

DensityOperator thermal_state(const Mat& hamiltonian, double beta,
                              const SubsystemLayout& layout);
// First-order high-temperature expansion (1 - beta*(H - tr H/d))/d.
DensityOperator thermal_state_linear(const Mat& hamiltonian, double beta,
                                     const SubsystemLayout& layout);

// Rank-2 irreducible spherical tensor T_{2m} built from the spin operators of
// spins i and j of the register. m must lie in [-2, 2].
Mat spherical_tensor(const SpinOperatorSet& ops, int i, int j, int m);

}  // namespace qcore
}  // namespace spinsim
