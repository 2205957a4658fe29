#include <benchmark/benchmark.h>

#include <random>

#include "spinsim/dynamics.hpp"
#include "spinsim/entloc.hpp"
#include "spinsim/leeyang.hpp"
#include "spinsim/mpemba.hpp"
#include "spinsim/supu.hpp"

using namespace spinsim;

namespace {

Mat random_complex(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat m(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

dynamics::Liouvillian two_qubit_liouvillian() {
  std::mt19937_64 rng(5);
  Mat a = random_complex(4, rng);
  Mat h = random_complex(4, rng);
  h = (h + h.adjoint()) / 2.0;
  return dynamics::build_liouvillian(h, {{a, a.adjoint(), 0.2}});
}

}  // namespace

static void BM_Propagate16(benchmark::State& state) {
  dynamics::Liouvillian l = two_qubit_liouvillian();
  std::mt19937_64 rng(7);
  Mat m = random_complex(4, rng);
  Mat rho = m * m.adjoint();
  rho /= rho.trace().real();
  for (auto _ : state) benchmark::DoNotOptimize(dynamics::propagate_mat(l, rho, 0.7));
}
BENCHMARK(BM_Propagate16);

static void BM_DecayModes(benchmark::State& state) {
  dynamics::Liouvillian l = two_qubit_liouvillian();
  for (auto _ : state) benchmark::DoNotOptimize(dynamics::decay_modes(l));
}
BENCHMARK(BM_DecayModes);

static void BM_K3Scan(benchmark::State& state) {
  supu::SuperposedUnitary su = supu::SuperposedUnitary::planar(M_PI / 4, 2.356, 1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(supu::k3_scan(su, qcore::pauli_z(), 600));
}
BENCHMARK(BM_K3Scan);

static void BM_DiscordQubit(benchmark::State& state) {
  CVec v(4);
  v << 1, 0, 0, 1;
  v /= std::sqrt(2.0);
  Mat rho = 0.5 * Mat(v * v.adjoint()) + 0.5 * qcore::identity(4) / 4.0;
  qcore::DensityOperator s(rho, qcore::SubsystemLayout::qubits(2));
  for (auto _ : state) benchmark::DoNotOptimize(qcore::quantum_discord(s, 0));
}
BENCHMARK(BM_DiscordQubit);

static void BM_FindZerosPeriod(benchmark::State& state) {
  leeyang::IsingParams p{0.5, 0.1, -0.1};
  leeyang::ProbeCouplings cpl{50.0, 50.0};
  for (auto _ : state)
    benchmark::DoNotOptimize(leeyang::find_zeros(p, cpl, 1.0 / 50.0, 1e-7));
}
BENCHMARK(BM_FindZerosPeriod);

static void BM_MpembaCrossing(benchmark::State& state) {
  mpemba::MpembaParams p;
  p.k0 = 0.3;
  p.epsilon = 1e-5;
  p.delta = 559.0;
  auto [near_state, far_state] = mpemba::prepare_states(1.2, p.epsilon);
  for (auto _ : state)
    benchmark::DoNotOptimize(mpemba::detect_crossing(near_state, far_state, p,
                                                     mpemba::Metric::trace, 480.0, 500));
}
BENCHMARK(BM_MpembaCrossing);

static void BM_LocalizationTrace(benchmark::State& state) {
  std::vector<double> taus{0.0, 0.002, 0.004, 0.006, 0.008, 0.01};
  for (auto _ : state)
    benchmark::DoNotOptimize(entloc::zz_localization_trace(50.0, taus));
}
BENCHMARK(BM_LocalizationTrace);

BENCHMARK_MAIN();
