// Batch front door for the pseudoentanglement lab: every subcommand is a
// seeded, reproducible experiment that writes its results plus a manifest
// under the output directory.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "pseudoent/distinguishers.hpp"
#include "pseudoent/entanglement.hpp"
#include "pseudoent/format.hpp"
#include "pseudoent/manifest.hpp"
#include "pseudoent/moments.hpp"
#include "pseudoent/parallel.hpp"
#include "pseudoent/prmatrix.hpp"
#include "pseudoent/statevector.hpp"

using namespace pseudoent;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitThreshold = 2;

struct OutputWriter {
  std::string dir;
  std::string stem;

  void manifest(const ExperimentManifest& m) const {
    atomic_write(dir + "/" + stem + ".manifest.json",
                 m.to_json().dump(2) + "\n");
  }
  void json(const nlohmann::json& j) const {
    atomic_write(dir + "/" + stem + ".json", j.dump(2) + "\n");
  }
  void csv(const std::string& text) const {
    atomic_write(dir + "/" + stem + ".csv", text);
  }
};

ExperimentManifest make_manifest(const std::string& experiment,
                                 nlohmann::json parameters,
                                 std::uint64_t seed) {
  ExperimentManifest m;
  m.experiment = experiment;
  m.parameters = std::move(parameters);
  m.master_seed = seed;
  m.timestamp = iso8601_now();
  return m;
}

Cut parse_cut(const std::string& text, int n) {
  if (text == "half") {
    return Cut::half(n);
  }
  if (text.rfind("prefix:", 0) == 0) {
    return Cut::prefix(n, std::stoi(text.substr(7)));
  }
  if (text.rfind("mask:", 0) == 0) {
    return Cut(static_cast<std::uint32_t>(std::stoul(text.substr(5))), n);
  }
  throw CLI::ValidationError("--cut must be half|prefix:L|mask:M");
}

EnsembleSpec parse_ensemble(const std::string& text, std::uint64_t seed) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    parts.push_back(item);
  }
  auto want = [&](std::size_t lo, std::size_t hi) {
    if (parts.size() < lo || parts.size() > hi) {
      throw CLI::ValidationError("bad ensemble spec '" + text + "'");
    }
  };
  if (parts.empty()) {
    throw CLI::ValidationError("empty ensemble spec");
  }
  if (parts[0] == "subset-phase") {
    want(3, 4);
    const PhaseMode mode =
        parts.size() == 4 ? phase_mode_from_name(parts[3]) : PhaseMode::Prf;
    return EnsembleSpec::subset_phase(std::stoi(parts[1]),
                                      std::stoi(parts[2]), seed, mode);
  }
  if (parts[0] == "random-phase") {
    want(2, 2);
    return EnsembleSpec::random_phase(std::stoi(parts[1]), seed);
  }
  if (parts[0] == "haar") {
    want(2, 2);
    return EnsembleSpec::haar(std::stoi(parts[1]), seed);
  }
  if (parts[0] == "matrix-state") {
    want(3, 4);
    const auto construction =
        parts[1] == "high-entropy" ? EnsembleSpec::Construction::HighEntropy
                                   : EnsembleSpec::Construction::Tunable;
    if (parts[1] != "high-entropy" && parts[1] != "tunable") {
      throw CLI::ValidationError("matrix-state construction must be "
                                 "high-entropy or tunable");
    }
    const int k = parts.size() == 4 ? std::stoi(parts[3]) : 0;
    return EnsembleSpec::matrix_state(std::stoi(parts[2]), construction, k,
                                      seed);
  }
  throw CLI::ValidationError(
      "ensemble kind must be subset-phase|random-phase|haar|matrix-state");
}

int run_prepare(int n, int k, std::uint64_t seed, const std::string& mode,
                const std::string& dump_path, const std::string& out_dir,
                bool via_circuit) {
  const auto spec =
      SubsetPhaseSpec::from_seed(n, k, seed, phase_mode_from_name(mode));
  const StateVector state = via_circuit
                                ? prepare_subset_phase_circuit(spec)
                                : build_subset_phase_direct(spec);
  OutputWriter out{out_dir, "prepare_n" + std::to_string(n) + "_k" +
                                std::to_string(k) + "_s" +
                                std::to_string(seed)};
  nlohmann::json params = {{"n", n},
                           {"k", k},
                           {"phase_mode", mode},
                           {"via_circuit", via_circuit},
                           {"dump_state", dump_path}};
  out.manifest(make_manifest("prepare", params, seed));
  if (!dump_path.empty()) {
    dump_state(state, dump_path);
  }
  nlohmann::json result = {{"n", n},
                           {"support_size", state.support().size()},
                           {"norm", state.norm()}};
  out.json(result);
  std::cout << "prepared subset phase state: n=" << n << " k=" << k
            << " support=" << result["support_size"] << "\n";
  return kExitOk;
}

int run_entropy_scan(int n, int k, std::uint64_t seed, const std::string& mode,
                     const std::string& cuts, std::optional<int> dist_rank,
                     const std::string& out_dir) {
  const auto spec =
      SubsetPhaseSpec::from_seed(n, k, seed, phase_mode_from_name(mode));
  const StateVector state = build_subset_phase_direct(spec);
  const CutFamily family = CutFamily::parse(cuts);
  const EntropyReport report = entropy_scan(state, family, dist_rank);

  OutputWriter out{out_dir, "entropy-scan_n" + std::to_string(n) + "_k" +
                                std::to_string(k) + "_s" +
                                std::to_string(seed)};
  nlohmann::json params = {{"n", n},
                           {"k", k},
                           {"phase_mode", mode},
                           {"cuts", cuts}};
  if (dist_rank) {
    params["dist_r"] = *dist_rank;
  }
  out.manifest(make_manifest("entropy-scan", params, seed));
  out.csv(report.to_csv());

  const double max_s = report.max_von_neumann();
  const bool capped = max_s <= static_cast<double>(k) + 1e-9;
  nlohmann::json result = nlohmann::json::parse(report.to_json());
  result["max_von_neumann_bits"] = max_s;
  result["max_schmidt_rank"] = report.max_rank();
  result["verdict"] = capped;
  out.json(result);
  std::cout << "entropy scan over " << report.records.size()
            << " cuts: max S = " << format_double(max_s) << " bits (cap " << k
            << ")\n";
  return capped ? kExitOk : kExitThreshold;
}

int run_moments(int single_dim, int subset_size, int t,
                const std::string& out_dir, std::uint64_t seed) {
  const auto result = verify_theorem31(single_dim, subset_size, t);
  OutputWriter out{out_dir, "moments_N" + std::to_string(single_dim) + "_K" +
                                std::to_string(subset_size) + "_t" +
                                std::to_string(t)};
  nlohmann::json params = {
      {"N", single_dim}, {"K", subset_size}, {"t", t}};
  out.manifest(make_manifest("moments", params, seed));
  out.csv(theorem31_csv_header() + theorem31_csv_row(result));
  const bool within = result.bound_ratio <= 2.0;
  out.json({{"N", single_dim},
            {"K", subset_size},
            {"t", t},
            {"td", result.td},
            {"bound_ratio", result.bound_ratio},
            {"verdict", within}});
  std::cout << "td(" << single_dim << "," << subset_size << "," << t
            << ") = " << format_double(result.td)
            << ", ratio = " << format_double(result.bound_ratio) << "\n";
  return within ? kExitOk : kExitThreshold;
}

int run_distinguish(const std::string& e1_text, const std::string& e2_text,
                    const std::string& cut_text, int copies, int trials,
                    std::uint64_t seed, const std::string& expect,
                    const std::string& out_dir) {
  const EnsembleSpec e1 = parse_ensemble(e1_text, prf_mix64(seed, 1));
  const EnsembleSpec e2 = parse_ensemble(e2_text, prf_mix64(seed, 2));
  if (e1.n != e2.n) {
    throw CLI::ValidationError("ensembles must share the qubit count");
  }
  const Cut cut = parse_cut(cut_text, e1.n);
  const auto result =
      distinguish_by_purity(e1, e2, cut, copies, trials, seed);
  OutputWriter out{out_dir, "distinguish_s" + std::to_string(seed)};
  out.manifest(make_manifest("distinguish", result.parameters, seed));
  out.json(result.to_json());
  std::cout << "advantage = " << format_double(result.mean)
            << (result.verdict ? " (significant at alpha=0.01)\n"
                               : " (not significant)\n");
  if (expect == "significant" && !result.verdict) {
    return kExitThreshold;
  }
  if (expect == "null" && result.verdict) {
    return kExitThreshold;
  }
  return kExitOk;
}

int run_mps_test(int n, int r, int seeds, std::uint64_t seed,
                 const std::string& out_dir) {
  const auto result = mps_test_experiment(n, r, seeds, seed);
  OutputWriter out{out_dir, "mps-test_n" + std::to_string(n) + "_r" +
                                std::to_string(r)};
  out.manifest(make_manifest("mps-test", result.parameters, seed));
  out.json(result.to_json());
  std::cout << "membership fraction = "
            << result.parameters["near_membership_fraction"]
            << ", far fraction = "
            << result.parameters["far_distance_fraction"] << "\n";
  return result.verdict ? kExitOk : kExitThreshold;
}

int run_matrix_lab(const std::string& construction, int n, int k, int seeds,
                   std::uint64_t seed, int m2, int iterations,
                   const std::string& dump_path, const std::string& out_dir) {
  OutputWriter out{out_dir, "matrix-lab_" + construction + "_n" +
                                std::to_string(n) + "_k" + std::to_string(k)};
  nlohmann::json params = {{"construction", construction},
                           {"n", n},
                           {"k", k},
                           {"seeds", seeds}};
  std::ostringstream csv;
  bool verdict = true;
  nlohmann::json result;

  if (construction == "high-entropy") {
    csv << "seed,frobenius\n";
    const double threshold = std::pow(2.0, -n / 8.0);
    int ok = 0;
    SignMatrix last;
    for (int s = 0; s < seeds; ++s) {
      const SignMatrix m = build_high_entropy(
          n / 2, n / 2, SeededKey(prf_mix64(seed, s), KeyRole::HashCoeffs));
      const double frob = frobenius_stat(m);
      ok += frob <= threshold ? 1 : 0;
      csv << s << ',' << format_double(frob) << '\n';
      last = m;
    }
    verdict = 20 * ok >= 19 * seeds;  // >= 95%
    result = {{"threshold", threshold},
              {"ok_fraction", static_cast<double>(ok) / seeds}};
    if (!dump_path.empty()) {
      dump_sign_matrix(last, dump_path);
    }
  } else if (construction == "tunable") {
    csv << "seed,frobenius,rank\n";
    const double threshold = std::pow(2.0, -k / 4.0);
    int ok = 0;
    bool ranks_ok = true;
    for (int s = 0; s < seeds; ++s) {
      const SignMatrix m =
          build_tunable(n, k, SeededKey(prf_mix64(seed, s), KeyRole::Phase));
      const double frob = frobenius_stat(m);
      const int rank = numeric_rank(m);
      ok += frob <= threshold ? 1 : 0;
      ranks_ok = ranks_ok && rank <= (1 << k);
      csv << s << ',' << format_double(frob) << ',' << rank << '\n';
    }
    verdict = (10 * ok >= 9 * seeds) && ranks_ok;  // >= 90%
    result = {{"threshold", threshold},
              {"ok_fraction", static_cast<double>(ok) / seeds},
              {"ranks_within_cap", ranks_ok}};
  } else if (construction == "subsampled") {
    csv << "seed,rank\n";
    bool ranks_ok = true;
    for (int s = 0; s < seeds; ++s) {
      const SeededKey key(prf_mix64(seed, s), KeyRole::Phase);
      const SignMatrix a =
          build_high_entropy(n / 2, n / 2, key.substream(KeyRole::HashCoeffs));
      const KToOneFunction g(n / 2, k, key.substream(KeyRole::InnerPerm));
      const SignMatrix b = subsample_rows(
          a, [&g](std::uint64_t i) { return g.eval(i); });
      const int rank = numeric_rank(b);
      ranks_ok = ranks_ok && rank <= (1 << k);
      csv << s << ',' << rank << '\n';
    }
    verdict = ranks_ok;
    result = {{"ranks_within_cap", ranks_ok}};
  } else if (construction == "area-law") {
    AreaLawPlan plan;
    plan.n = n;
    plan.m2 = m2;
    plan.k = k;
    plan.iterations = iterations < 0 ? n - 2 * m2 : iterations;
    params["m2"] = plan.m2;
    params["iterations"] = plan.iterations;
    csv << "seed,iteration,rank\n";
    bool monotone = true;
    for (int s = 0; s < seeds; ++s) {
      const auto trace = area_law_iterate(
          plan, SeededKey(prf_mix64(seed, s), KeyRole::Phase));
      for (std::size_t i = 0; i < trace.ranks.size(); ++i) {
        csv << s << ',' << i << ',' << trace.ranks[i] << '\n';
        if (i > 0 && trace.ranks[i] > trace.ranks[i - 1]) {
          monotone = false;
        }
      }
    }
    verdict = monotone;
    result = {{"ranks_nonincreasing", monotone}};
  } else {
    throw CLI::ValidationError(
        "--construction must be high-entropy|tunable|subsampled|area-law");
  }

  out.manifest(make_manifest("matrix-lab", params, seed));
  out.csv(csv.str());
  result["verdict"] = verdict;
  out.json(result);
  std::cout << "matrix-lab " << construction
            << (verdict ? ": thresholds met\n" : ": thresholds NOT met\n");
  return verdict ? kExitOk : kExitThreshold;
}

int run_tasks(const std::string& task, const std::string& ensemble_text,
              const std::string& cut_text, int top_t, int threshold_rank,
              int seeds, std::uint64_t seed, const std::string& out_dir) {
  const EnsembleSpec ensemble = parse_ensemble(ensemble_text, seed);
  const Cut cut = parse_cut(cut_text, ensemble.n);
  ExperimentResult result;
  if (task == "eigenvalues") {
    result = eigenvalue_estimation_task(ensemble, cut, top_t, seeds);
  } else if (task == "schmidt-rank") {
    result = schmidt_rank_task(ensemble, cut, threshold_rank, seeds);
  } else {
    throw CLI::ValidationError("--task must be eigenvalues|schmidt-rank");
  }
  OutputWriter out{out_dir, "tasks_" + task + "_s" + std::to_string(seed)};
  out.manifest(make_manifest("tasks-" + task, result.parameters, seed));
  out.json(result.to_json());
  std::cout << task << ": mean = " << format_double(result.mean)
            << ", success fraction = "
            << format_double(result.success_fraction) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pseudoentanglement simulation lab"};
  app.require_subcommand(1);
  std::string out_dir = "./results";
  app.add_option("--out", out_dir, "output directory for results/manifests");

  // prepare
  auto* prepare = app.add_subcommand("prepare", "build a subset phase state");
  int p_n = 12;
  int p_k = 4;
  std::uint64_t p_seed = 0;
  std::string p_mode = "prf";
  std::string p_dump;
  bool p_circuit = false;
  prepare->add_option("--n", p_n, "qubit count")->required();
  prepare->add_option("--k", p_k, "log2 subset size")->required();
  prepare->add_option("--seed", p_seed, "master seed");
  prepare->add_option("--phase-mode", p_mode,
                      "prf|four-wise-composed|truly-random");
  prepare->add_option("--dump-state", p_dump, "write the state to this file");
  prepare->add_flag("--via-circuit", p_circuit,
                    "prepare through the circuit simulation");

  // entropy-scan
  auto* scan = app.add_subcommand("entropy-scan",
                                  "Schmidt/entropy scan over a cut family");
  int s_n = 12;
  int s_k = 4;
  std::uint64_t s_seed = 0;
  std::string s_mode = "prf";
  std::string s_cuts = "contig";
  int s_dist = 0;
  scan->add_option("--n", s_n)->required();
  scan->add_option("--k", s_k)->required();
  scan->add_option("--seed", s_seed);
  scan->add_option("--phase-mode", s_mode);
  scan->add_option("--cuts", s_cuts, "all|contig|snake:W|random:N[:seed]");
  scan->add_option("--dist-r", s_dist, "also report distance to rank-r");

  // moments
  auto* moments = app.add_subcommand(
      "moments", "exact ensemble-average closeness to the Haar moment");
  int m_dim = 8;
  int m_subset = 4;
  int m_t = 2;
  moments->add_option("--N", m_dim, "single-copy dimension")->required();
  moments->add_option("--K", m_subset, "subset size")->required();
  moments->add_option("--t", m_t, "copy count")->required();

  // distinguish
  auto* dist = app.add_subcommand("distinguish",
                                  "purity-based two-ensemble experiment");
  std::string d_e1;
  std::string d_e2;
  std::string d_cut = "half";
  int d_copies = 2;
  int d_trials = 1000;
  std::uint64_t d_seed = 0;
  std::string d_expect;
  dist->add_option("--e1", d_e1, "first ensemble, e.g. subset-phase:16:4")
      ->required();
  dist->add_option("--e2", d_e2, "second ensemble, e.g. haar:16")->required();
  dist->add_option("--cut", d_cut, "half|prefix:L|mask:M");
  dist->add_option("--copies", d_copies, "copies per trial (even)");
  dist->add_option("--trials", d_trials);
  dist->add_option("--seed", d_seed);
  dist->add_option("--expect", d_expect,
                   "significant|null: exit 2 when the outcome disagrees");

  // mps-test
  auto* mps = app.add_subcommand("mps-test",
                                 "bond-dimension membership vs distance");
  int t_n = 16;
  int t_r = 4;
  int t_seeds = 100;
  std::uint64_t t_seed = 0;
  mps->add_option("--n", t_n)->required();
  mps->add_option("--r", t_r, "bond dimension (power of two)")->required();
  mps->add_option("--seeds", t_seeds);
  mps->add_option("--seed", t_seed);

  // matrix-lab
  auto* lab = app.add_subcommand("matrix-lab", "sign-matrix constructions");
  std::string l_construction = "high-entropy";
  int l_n = 16;
  int l_k = 4;
  int l_seeds = 100;
  std::uint64_t l_seed = 0;
  int l_m2 = 2;
  int l_iterations = -1;
  std::string l_dump;
  lab->add_option("--construction", l_construction,
                  "high-entropy|tunable|subsampled|area-law");
  lab->add_option("--n", l_n)->required();
  lab->add_option("--k", l_k);
  lab->add_option("--seeds", l_seeds);
  lab->add_option("--seed", l_seed);
  lab->add_option("--m2", l_m2, "area-law column budget (log2)");
  lab->add_option("--iterations", l_iterations,
                  "area-law iterations (default: full budget)");
  lab->add_option("--dump", l_dump, "write the last matrix (bit-packed)");

  // tasks
  auto* tasks = app.add_subcommand("tasks", "property-testing ground truth");
  std::string k_task = "eigenvalues";
  std::string k_ensemble;
  std::string k_cut = "half";
  int k_top = 16;
  int k_threshold = 16;
  int k_seeds = 20;
  std::uint64_t k_seed = 0;
  tasks->add_option("--task", k_task, "eigenvalues|schmidt-rank")->required();
  tasks->add_option("--ensemble", k_ensemble, "ensemble spec")->required();
  tasks->add_option("--cut", k_cut);
  tasks->add_option("--top-t", k_top, "eigenvalues to report");
  tasks->add_option("--threshold-rank", k_threshold);
  tasks->add_option("--seeds", k_seeds);
  tasks->add_option("--seed", k_seed);

  // report
  auto* report = app.add_subcommand("report", "summarize a run directory");
  std::string r_dir;
  report->add_option("dir", r_dir, "run directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*prepare) {
      return run_prepare(p_n, p_k, p_seed, p_mode, p_dump, out_dir,
                         p_circuit);
    }
    if (*scan) {
      return run_entropy_scan(
          s_n, s_k, s_seed, s_mode, s_cuts,
          s_dist > 0 ? std::optional<int>(s_dist) : std::nullopt, out_dir);
    }
    if (*moments) {
      return run_moments(m_dim, m_subset, m_t, out_dir, 0);
    }
    if (*dist) {
      return run_distinguish(d_e1, d_e2, d_cut, d_copies, d_trials, d_seed,
                             d_expect, out_dir);
    }
    if (*mps) {
      return run_mps_test(t_n, t_r, t_seeds, t_seed, out_dir);
    }
    if (*lab) {
      return run_matrix_lab(l_construction, l_n, l_k, l_seeds, l_seed, l_m2,
                            l_iterations, l_dump, out_dir);
    }
    if (*tasks) {
      return run_tasks(k_task, k_ensemble, k_cut, k_top, k_threshold, k_seeds,
                       k_seed, out_dir);
    }
    if (*report) {
      std::cout << summarize_run_directory(r_dir);
      return kExitOk;
    }
  } catch (const CLI::ValidationError& err) {
    std::cerr << "usage error: " << err.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& err) {
    std::cerr << "usage error: " << err.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
