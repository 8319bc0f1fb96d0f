// mmdflow: run MMD particle flows, property suites and timing presets.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "sndflow/datasets.hpp"
#include "sndflow/flow.hpp"
#include "sndflow/manifest.hpp"
#include "sndflow/verify.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fs = std::filesystem;
using namespace sndflow;

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

void apply_thread_cap() {
#ifdef _OPENMP
  if (const char* env = std::getenv("MMDFLOW_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) omp_set_num_threads(n);
  }
#endif
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// "name" or "name:path"
std::pair<std::string, std::string> split_kind(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) return {s, ""};
  return {s.substr(0, colon), s.substr(colon + 1)};
}

std::vector<long> parse_checkpoints(const std::string& s) {
  std::vector<long> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const long v = std::stol(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad checkpoint: " + item);
    out.push_back(v);
  }
  return out;
}

// Fails early, before any compute, if the directory cannot take files.
void prepare_output_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw std::runtime_error("cannot create output directory " + dir.string());
  const fs::path probe = dir / ".mmdflow_probe";
  {
    std::ofstream out(probe);
    if (!out) throw std::runtime_error("output directory is not writable: " + dir.string());
  }
  fs::remove(probe, ec);
}

void write_trace(const fs::path& path, const std::vector<FlowRecord>& rows) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << "iter,time,mmd2,w2,wall_ms\n" << std::setprecision(17);
    for (const FlowRecord& r : rows)
      out << r.iter << ',' << r.time << ',' << r.mmd2 << ',' << r.w2 << ',' << r.wall_ms << '\n';
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

struct FlowArgs {
  std::string manifest;
  std::string kernel, target, init, init_mean, precision, summation, checkpoints, out;
  double sigma = 0, eps = 0, tau = 0, init_std = 0;
  int m = 0, d_slice = 0, target_n = 0, dim = 0;
  long iters = 0;
  std::uint64_t seed = 0;
  bool no_w2 = false, write_manifest = false;
};

int cmd_flow(const FlowArgs& a, const CLI::App& sub) {
  RunManifest man;
  try {
    if (!a.manifest.empty()) man = manifest_from_json(read_file(a.manifest));
    const auto set = [&](const char* name) { return sub.count(name) > 0; };
    if (set("--kernel")) man.kernel.kind = a.kernel;
    if (set("--sigma")) man.kernel.sigma = a.sigma;
    if (set("--eps")) man.kernel.eps = a.eps;
    if (set("--m")) man.kernel.m = a.m;
    if (set("--d-slice")) man.kernel.d_slice = a.d_slice;
    if (set("--target")) {
      const auto [kind, path] = split_kind(a.target);
      man.target.kind = kind;
      man.target.path = path;
    }
    if (set("--target-n")) man.target.n = a.target_n;
    if (set("--dim")) man.target.d = a.dim;
    if (set("--init")) {
      const auto [kind, path] = split_kind(a.init);
      man.init.kind = kind;
      man.init.path = path;
    }
    if (set("--init-std")) man.init.std = a.init_std;
    if (set("--init-mean")) {
      man.init.mean.clear();
      std::stringstream ss(a.init_mean);
      std::string item;
      while (std::getline(ss, item, ',')) man.init.mean.push_back(std::stod(item));
    }
    if (set("--tau")) man.flow.tau = a.tau;
    if (set("--iters")) man.flow.iters = a.iters;
    if (set("--checkpoints")) man.flow.checkpoints = parse_checkpoints(a.checkpoints);
    if (set("--precision")) man.flow.precision = parse_precision(a.precision);
    if (set("--summation")) man.flow.summation = parse_summation(a.summation);
    if (set("--seed")) {
      man.flow.seed = a.seed;
      man.init.seed = a.seed + 1;
      man.target.seed = a.seed + 2;
    }
    if (a.no_w2) man.flow.compute_w2 = false;
    if (set("--out")) man.out = a.out;
    man.validate();
  } catch (const std::exception& e) {
    std::cerr << "mmdflow flow: " << e.what() << '\n';
    return kUsage;
  }

  const fs::path dir(man.out);
  ParticleCloud target, init;
  RadialProfile profile = man.kernel.build();
  try {
    target = man.target.build();
    init = man.init.build(target.size(), target.dim());
    if (init.dim() != target.dim()) throw std::invalid_argument("init and target dimensions differ");
    prepare_output_dir(dir);
    if (a.write_manifest) {
      std::ofstream(dir / "manifest.json") << to_json(man) << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "mmdflow flow: " << e.what() << '\n';
    return kFailure;
  }

  std::vector<FlowRecord> rows;
  const auto on_checkpoint = [&](const FlowRecord& r, const ParticleCloud& state) {
    rows.push_back(r);
    save_csv((dir / ("snapshot_" + std::to_string(r.iter) + ".csv")).string(), state);
    std::cerr << "iter " << r.iter << "  mmd2 " << r.mmd2 << "  w2 " << r.w2 << '\n';
  };
  int code = kOk;
  try {
    run_flow(profile, init, target, man.flow, on_checkpoint);
  } catch (const FlowAborted& e) {
    std::cerr << "mmdflow flow: aborted at iteration " << e.iteration() << ": " << e.what() << '\n';
    code = kFailure;
  } catch (const std::exception& e) {
    std::cerr << "mmdflow flow: " << e.what() << '\n';
    code = kFailure;
  }
  try {
    write_trace(dir / "trace.csv", rows);
  } catch (const std::exception& e) {
    std::cerr << "mmdflow flow: " << e.what() << '\n';
    return kFailure;
  }
  return code;
}

int cmd_verify(const std::string& suite, std::uint64_t seed) {
  std::vector<std::string> suites;
  if (suite == "all") {
    suites = suite_names();
  } else {
    suites.push_back(suite);
  }
  bool ok = true;
  for (const std::string& s : suites) {
    std::vector<CheckResult> results;
    try {
      results = run_suite(s, seed);
    } catch (const std::invalid_argument& e) {
      std::cerr << "mmdflow verify: " << e.what() << '\n';
      return kUsage;
    }
    for (const CheckResult& r : results) {
      std::cout << std::left << std::setw(10) << s << ' ' << std::setw(42) << r.name << ' '
                << (r.passed ? "PASS" : "FAIL") << "  " << r.detail << '\n';
      ok = ok && r.passed;
    }
  }
  return ok ? kOk : kFailure;
}

int cmd_bench(const std::string& preset, long iters, const std::string& kernels) {
  if (preset != "annulus" && preset != "three_rings") {
    std::cerr << "mmdflow bench: unknown preset " << preset << '\n';
    return kUsage;
  }
  const ParticleCloud target = preset == "annulus" ? gen_annulus(50) : gen_three_rings(40);
  const ParticleCloud init = gen_init_gaussian(static_cast<int>(target.size()), 2, 1e-4, 7);
  FlowConfig cfg;
  cfg.tau = preset == "annulus" ? 0.003 : 0.01;
  cfg.iters = iters;
  cfg.compute_w2 = false;
  std::cout << "preset,kernel,iters,seconds\n";
  std::stringstream ss(kernels);
  std::string name;
  while (std::getline(ss, name, ',')) {
    KernelSpec spec;
    spec.kind = name;
    spec.sigma = 0.3;
    spec.eps = 0.01;
    RadialProfile profile = RadialProfile::nd();
    try {
      profile = spec.build();
    } catch (const std::exception& e) {
      std::cerr << "mmdflow bench: " << e.what() << '\n';
      return kUsage;
    }
    double seconds = 0.0;
    try {
      const FlowTrace trace = run_flow(profile, init, target, cfg);
      seconds = trace.records.back().wall_ms / 1000.0;
    } catch (const FlowAborted& e) {
      std::cerr << "mmdflow bench: " << name << " aborted at iteration " << e.iteration() << '\n';
      seconds = std::numeric_limits<double>::quiet_NaN();
    }
    std::cout << preset << ',' << name << ',' << iters << ',' << seconds << '\n' << std::flush;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  apply_thread_cap();
  CLI::App app{"MMD particle flows with smoothed negative distance kernels"};
  app.require_subcommand(1);

  FlowArgs fa;
  CLI::App* flow = app.add_subcommand("flow", "run a particle flow and write trace.csv and snapshots");
  flow->add_option("--manifest", fa.manifest, "JSON run manifest; flags override its fields");
  flow->add_option("--kernel", fa.kernel, "gauss | snd | snd4 | nd")->check(CLI::IsMember({"gauss", "snd", "snd4", "nd"}));
  flow->add_option("--sigma", fa.sigma, "Gaussian width");
  flow->add_option("--eps", fa.eps, "spline scale");
  flow->add_option("--m", fa.m, "spline order (even)");
  flow->add_option("--d-slice", fa.d_slice, "dimension of the Riemann-Liouville integral");
  flow->add_option("--target", fa.target, "three_rings | bananas | annulus | gauss_mixture | csv:PATH");
  flow->add_option("--target-n", fa.target_n, "points per circle/cluster (total for gauss_mixture)");
  flow->add_option("--dim", fa.dim, "dimension of gauss_mixture");
  flow->add_option("--init", fa.init, "gaussian | uniform | csv:PATH");
  flow->add_option("--init-std", fa.init_std, "standard deviation of the Gaussian initialisation");
  flow->add_option("--init-mean", fa.init_mean, "comma-separated mean of the Gaussian initialisation");
  flow->add_option("--tau", fa.tau, "step size");
  flow->add_option("--iters", fa.iters, "iteration count");
  flow->add_option("--checkpoints", fa.checkpoints, "comma-separated iterations to record");
  flow->add_option("--precision", fa.precision, "f32 | f64");
  flow->add_option("--summation", fa.summation, "dense | sliced:P");
  flow->add_option("--seed", fa.seed, "seed for init, target and slicing");
  flow->add_option("--out", fa.out, "output directory");
  flow->add_flag("--no-w2", fa.no_w2, "skip the transport metric");
  flow->add_flag("--write-manifest", fa.write_manifest, "store the effective manifest next to the trace");

  std::string suite;
  std::uint64_t verify_seed = 20240501;
  CLI::App* verify = app.add_subcommand("verify", "run a property suite");
  verify->add_option("suite", suite, "splines | profiles | slicing | cpd | dirac | transport | all")->required();
  verify->add_option("--seed", verify_seed, "seed");

  std::string preset = "annulus";
  long bench_iters = 50000;
  std::string bench_kernels = "gauss,snd,snd4,nd";
  CLI::App* bench = app.add_subcommand("bench", "time flow presets per kernel");
  bench->add_option("--preset", preset, "annulus | three_rings");
  bench->add_option("--iters", bench_iters, "steps per kernel");
  bench->add_option("--kernels", bench_kernels, "comma-separated kernel list");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }
  if (*flow) return cmd_flow(fa, *flow);
  if (*verify) return cmd_verify(suite, verify_seed);
  if (*bench) return cmd_bench(preset, bench_iters, bench_kernels);
  return kUsage;
}
