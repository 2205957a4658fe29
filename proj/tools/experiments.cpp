#include "experiments.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>

#include <json.hpp>

#include "spinsim/csv.hpp"
#include "spinsim/entloc.hpp"
#include "spinsim/leeyang.hpp"
#include "spinsim/mpemba.hpp"
#include "spinsim/supu.hpp"

namespace spinsim {
namespace cli {

namespace {

namespace fs = std::filesystem;

struct Emitter {
  const RunConfig& config;
  RunResult* result;

  void table(const std::string& name, const csv::Table& t) const {
    fs::path path = fs::path(config.out_dir) / name;
    std::string body = t.to_string();
    csv::write_file(path.string(), body);
    result->files.push_back(path.string());
    result->checksums.push_back(csv::checksum(body));
  }
};

void run_lgi(const RunConfig& c, const Emitter& emit) {
  const double alpha = c.number("alpha");
  const double phi = c.number("phi_deg") * M_PI / 180.0;
  const double omega = c.number_or("omega", 1.0);
  const int order = static_cast<int>(c.number_or("n", 3));
  const int grid = static_cast<int>(c.number_or("grid", 600));
  supu::SuperposedUnitary su = supu::SuperposedUnitary::planar(alpha, phi, omega);
  supu::LgiScan scan = supu::kn_scan(su, qcore::pauli_z(), order, grid);
  csv::Table t;
  t.header = "alpha,phi,t,K3";
  for (size_t i = 0; i < scan.t.size(); ++i)
    t.rows.push_back({alpha, c.number("phi_deg"), scan.t[i], scan.k[i]});
  emit.table("lgi.csv", t);
  emit.result->numbers.emplace_back("k_max", scan.k_max);
  emit.result->numbers.emplace_back("argmax_t", scan.argmax_t);
}

void run_lgi_dephasing(const RunConfig& c, const Emitter& emit) {
  const double phi_deg = c.number("phi_deg");
  const double phi = phi_deg * M_PI / 180.0;
  const double gamma = c.number("gamma");
  const int points = static_cast<int>(c.number_or("alpha_points", 5));
  const std::string method = c.text_or("method", "bloch");
  csv::Table t;
  t.header = "alpha,phi,tau_gain";
  double tau0 = 0.0;
  for (int i = 0; i < points; ++i) {
    double alpha = (M_PI / 4.0) * i / (points - 1);
    supu::SuperposedUnitary su = supu::SuperposedUnitary::planar(alpha, phi, 1.0);
    supu::DephasedScan scan = method == "bloch"
                                  ? supu::dephased_k3_bloch(su, gamma, 100)
                                  : supu::dephased_k3_ancilla(su, gamma, 100);
    if (i == 0) tau0 = scan.lifetime;
    if (tau0 <= 0.0) throw std::runtime_error("lgi-dephasing: no violation window at alpha = 0");
    t.rows.push_back({alpha, phi_deg, scan.lifetime / tau0});
  }
  emit.table("lifetime_gain.csv", t);
  emit.result->numbers.emplace_back("tau0", tau0);
}

leeyang::IsingParams ising_from(const RunConfig& c) {
  return {c.number("bJ"), c.number("bhA"), c.number("bhB")};
}

leeyang::ProbeCouplings couplings_from(const RunConfig& c) {
  return {c.number("jPA"), c.number("jPB")};
}

void run_leeyang_trace(const RunConfig& c, const Emitter& emit) {
  leeyang::IsingParams p = ising_from(c);
  leeyang::ProbeCouplings cpl = couplings_from(c);
  const double tmax = c.number_or("tmax", 0.3);
  const int points = static_cast<int>(c.number_or("points", 2000));
  std::vector<double> ts;
  for (int i = 0; i <= points; ++i) ts.push_back(tmax * i / points);
  leeyang::MiTrace tr = leeyang::mutual_information_trace(p, cpl, ts);
  csv::Table t;
  t.header = "t,sx,sy,L,I";
  for (size_t i = 0; i < ts.size(); ++i)
    t.rows.push_back({tr.t[i], tr.sx[i], tr.sy[i], tr.coherence[i], tr.mi[i]});
  emit.table("trace.csv", t);

  auto zeros = leeyang::find_zeros(p, cpl, tmax, c.number_or("tol", 1e-7));
  csv::Table z;
  z.header = "theta1,theta2";
  for (const auto& rec : zeros)
    z.rows.push_back({rec.angles.theta1, rec.angles.theta2});
  emit.table("zeros.csv", z);
  emit.result->numbers.emplace_back("zero_count", static_cast<double>(zeros.size()));
}

void run_leeyang_coamoeba(const RunConfig& c, const Emitter& emit) {
  leeyang::IsingParams p = ising_from(c);
  leeyang::ProbeCouplings cpl = couplings_from(c);
  const double tmax = c.number_or("tmax", 10.0 / std::abs(c.number("jPA")));
  auto pts = leeyang::sample_coamoeba(p, cpl, tmax, c.number_or("tol", 1e-7));
  csv::Table t;
  t.header = "theta1,theta2";
  for (const auto& q : pts) t.rows.push_back({q.theta1, q.theta2});
  emit.table("coamoeba.csv", t);
  emit.result->numbers.emplace_back("distinct_points", static_cast<double>(pts.size()));
}

void run_leeyang_amoeba_grid(const RunConfig& c, const Emitter& emit) {
  const double bj = c.number("bJ");
  const int grid = static_cast<int>(c.number_or("grid", 21));
  const double lo = c.number_or("bh_min", -0.5), hi = c.number_or("bh_max", 0.5);
  csv::Table t;
  t.header = "bhA,bhB,member";
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j) {
      double ha = lo + (hi - lo) * i / (grid - 1);
      double hb = lo + (hi - lo) * j / (grid - 1);
      bool member = leeyang::amoeba_member({bj, ha, hb});
      t.rows.push_back({ha, hb, member ? 1.0 : 0.0});
    }
  emit.table("amoeba_grid.csv", t);
}

mpemba::MpembaParams mpemba_params(const RunConfig& c) {
  mpemba::MpembaParams p;
  p.epsilon = c.number("epsilon");
  p.delta = c.number("delta");
  p.k0 = c.has("K0") ? c.number("K0")
                     : mpemba::MpembaParams::k0_from(c.number("b"), c.number("tauc"));
  return p;
}

void run_mpemba(const RunConfig& c, const Emitter& emit) {
  mpemba::MpembaParams p = mpemba_params(c);
  p.theta = c.number("theta_deg") * M_PI / 180.0;
  auto [near_state, far_state] = mpemba::prepare_states(p.theta, p.epsilon);
  const double window = c.number_or("window", 6.0 / (5.0 * p.k0 / 24.0));
  const int points = static_cast<int>(c.number_or("points", 2000));
  mpemba::MpembaOutcome out = mpemba::detect_crossing(near_state, far_state, p,
                                                      mpemba::Metric::trace, window, points);
  csv::Table t;
  t.header = "t,D_f,D_n";
  for (size_t i = 0; i < out.t.size(); ++i)
    t.rows.push_back({out.t[i], out.d_far[i], out.d_near[i]});
  emit.table("mpemba_trace_distance.csv", t);

  mpemba::Overlaps of = mpemba::overlaps(far_state, p);
  mpemba::Overlaps on = mpemba::overlaps(near_state, p);
  csv::Table o;
  o.header = "mode,a_n_f,a_n_n";
  o.rows.push_back({1.0, of.a1, on.a1});
  o.rows.push_back({2.0, of.a2, on.a2});
  o.rows.push_back({3.0, of.a3, on.a3});
  emit.table("mpemba_overlaps.csv", o);

  if (!out.crossing_time)
    throw std::runtime_error("mpemba: no crossing inside the window");
  emit.result->numbers.emplace_back("crossing_time", *out.crossing_time);
  emit.result->numbers.emplace_back("K0", p.k0);
}

void run_mpemba_genuine(const RunConfig& c, const Emitter& emit) {
  mpemba::MpembaParams p = mpemba_params(c);
  const double eps = p.epsilon;
  mpemba::PopulationVector near_state{0.25, 0.25 + eps / 2, 0.25 - eps / 2, 0.25};
  mpemba::PopulationVector far_state{0.25 - eps / 2, 0.25, 0.25, 0.25 + eps / 2};
  const double window = c.number_or("window", 6.0 / (5.0 * p.k0 / 24.0));
  const int points = static_cast<int>(c.number_or("points", 2000));
  mpemba::MpembaOutcome out = mpemba::detect_crossing(near_state, far_state, p,
                                                      mpemba::Metric::relent, window, points);
  csv::Table t;
  t.header = "t,d_f,d_n";
  for (size_t i = 0; i < out.t.size(); ++i)
    t.rows.push_back({out.t[i], out.d_far[i], out.d_near[i]});
  emit.table("mpemba_free_energy.csv", t);
  if (!out.crossing_time)
    throw std::runtime_error("mpemba-genuine: no crossing inside the window");
  emit.result->numbers.emplace_back("crossing_time", *out.crossing_time);
}

void run_entloc_localize(const RunConfig& c, const Emitter& emit) {
  const double j = c.number("J");
  const int points = static_cast<int>(c.number_or("points", 6));
  if (points < 2) throw ConfigError("key points must be >= 2");
  // uniform over [0, 1/(2J)]; the default reproduces the l/(10J), l = 0..5 grid
  std::vector<double> taus;
  for (int l = 0; l < points; ++l) taus.push_back(0.5 / j * l / (points - 1));
  entloc::LocalizationTrace tr = entloc::zz_localization_trace(j, taus);
  csv::Table t;
  t.header = "tau,E,D";
  for (size_t i = 0; i < tr.tau.size(); ++i)
    t.rows.push_back({tr.tau[i], tr.entanglement[i], tr.discord[i]});
  emit.table("localization.csv", t);
  emit.result->numbers.emplace_back("final_entanglement", tr.entanglement.back());
}

void run_entloc_robustness(const RunConfig& c, const Emitter& emit) {
  entloc::RobustnessModel model = entloc::RobustnessModel::fitted(
      c.number_or("tau_zero", 1.22), c.number_or("tau_single", 0.25));
  const double tmax = c.number_or("tmax", 0.6);
  const int points = static_cast<int>(c.number_or("points", 120));
  std::vector<double> ts;
  for (int i = 1; i <= points; ++i) ts.push_back(tmax * i / points);
  std::vector<entloc::CoherenceOrderState> states{
      entloc::coherence_state_00(), entloc::coherence_state_01(),
      entloc::coherence_state_2m1(), entloc::coherence_state_21()};
  entloc::DecayReport rep = entloc::dephasing_robustness(states, model, ts);
  csv::Table t;
  t.header = "t,coh(0,0),coh(0,1),coh(2,-1),coh(2,1)";
  for (size_t i = 0; i < ts.size(); ++i)
    t.rows.push_back({ts[i], rep.curves[0][i], rep.curves[1][i], rep.curves[2][i],
                      rep.curves[3][i]});
  emit.table("robustness.csv", t);
  for (const auto& e : rep.entries)
    emit.result->numbers.emplace_back(
        "tau(" + std::to_string(e.q_f) + "," + std::to_string(e.q_h) + ")", e.tau);
}

void run_channel_audit(const RunConfig& c, const Emitter& emit) {
  const int d = static_cast<int>(c.number_or("d", 2));
  entloc::LocalizationChannel ch = entloc::induced_channel(d);
  Mat before_m = Mat::Zero(d * d, d * d);
  // classical separable mixture with ln 2-scale starting correlation
  for (int i = 0; i < d; ++i) {
    int a = i, b = (i + 1) % d;
    before_m(a * d + b, a * d + b) = 1.0 / d;
  }
  qcore::DensityOperator before(before_m, qcore::SubsystemLayout({d, d}));
  qcore::DensityOperator after(ch.apply(before_m), qcore::SubsystemLayout({d, d}));
  entloc::QdpiReport rep = entloc::qdpi_audit(before, after, ch);
  csv::Table t;
  t.header = "d,choi_min,I_before,I_after";
  t.rows.push_back({static_cast<double>(d), rep.choi_min_eig, rep.i_before, rep.i_after});
  emit.table("channel_audit.csv", t);
  emit.result->numbers.emplace_back("choi_min", rep.choi_min_eig);
  emit.result->warnings.push_back(rep.verdict);
}

}  // namespace

RunResult run(const RunConfig& config) {
  auto t0 = std::chrono::steady_clock::now();
  Diagnostics diag = validate(config);
  RunResult result;
  result.warnings = diag.warnings;
  fs::create_directories(config.out_dir);
  Emitter emit{config, &result};

  if (config.experiment == "lgi") run_lgi(config, emit);
  else if (config.experiment == "lgi-dephasing") run_lgi_dephasing(config, emit);
  else if (config.experiment == "leeyang-trace") run_leeyang_trace(config, emit);
  else if (config.experiment == "leeyang-coamoeba") run_leeyang_coamoeba(config, emit);
  else if (config.experiment == "leeyang-amoeba-grid") run_leeyang_amoeba_grid(config, emit);
  else if (config.experiment == "mpemba") run_mpemba(config, emit);
  else if (config.experiment == "mpemba-genuine") run_mpemba_genuine(config, emit);
  else if (config.experiment == "entloc-localize") run_entloc_localize(config, emit);
  else if (config.experiment == "entloc-robustness") run_entloc_robustness(config, emit);
  else if (config.experiment == "channel-audit") run_channel_audit(config, emit);
  else throw ConfigError("unknown experiment: " + config.experiment);

  result.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  nlohmann::json manifest;
  manifest["experiment"] = config.experiment;
  manifest["version"] = SPINSIM_VERSION;
  manifest["seed"] = config.seed;
  nlohmann::json cfg = nlohmann::json::object();
  for (const auto& [k, v] : config.values) cfg[k] = v;
  manifest["config"] = cfg;
  manifest["wall_time_s"] = result.wall_time_s;
  nlohmann::json files = nlohmann::json::array();
  for (size_t i = 0; i < result.files.size(); ++i)
    files.push_back({{"file", fs::path(result.files[i]).filename().string()},
                     {"checksum", result.checksums[i]}});
  manifest["outputs"] = files;
  nlohmann::json numbers = nlohmann::json::object();
  for (const auto& [k, v] : result.numbers) numbers[k] = v;
  manifest["results"] = numbers;
  manifest["warnings"] = result.warnings;

  fs::path mpath = fs::path(config.out_dir) / "manifest.json";
  csv::write_file(mpath.string(), manifest.dump(2) + "\n");
  result.files.push_back(mpath.string());
  return result;
}

}  // namespace cli
}  // namespace spinsim
