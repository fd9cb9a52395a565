#include "adha/cli.hpp"

#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <sstream>

#include "adha/io.hpp"
#include "adha/models.hpp"
#include "adha/segmentation.hpp"
#include "adha/synthesis.hpp"

namespace adha::cli {
namespace {

namespace fs = std::filesystem;
using io::Json;

constexpr const char* kVersion = "0.1.0";

constexpr int kExitUsage = 64;
constexpr int kExitData = 65;
constexpr int kExitInternal = 70;

struct Common {
  int threads = 0;  // 0: take ADHA_SYNTH_THREADS, else 1
  std::string manifest;
  bool verbose = false;
};

int resolve_threads(int flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("ADHA_SYNTH_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
    spdlog::warn("ignoring ADHA_SYNTH_THREADS='{}'", env);
  }
  return 1;
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(s);
  while (std::getline(in, cell, sep)) {
    if (!cell.empty()) out.push_back(cell);
  }
  return out;
}

/// Reproduction record written next to every output.
class RunManifest {
 public:
  RunManifest(std::string command, int argc, char** argv)
      : start_(std::chrono::steady_clock::now()) {
    j_["command"] = std::move(command);
    j_["argv"] = std::vector<std::string>(argv, argv + argc);
    j_["tool_version"] = kVersion;
    j_["inputs"] = Json::array();
    j_["parameters"] = Json::object();
  }

  void input(const std::string& path) { j_["inputs"].push_back(path); }
  template <class T>
  void param(const std::string& key, const T& v) { j_["parameters"][key] = v; }
  Json& result() { return j_["result"]; }

  void write(const fs::path& path) {
    j_["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    io::write_json(path, j_);
  }

 private:
  Json j_;
  std::chrono::steady_clock::time_point start_;
};

fs::path manifest_path(const Common& c, const fs::path& main_output, const char* fallback) {
  if (!c.manifest.empty()) return c.manifest;
  if (main_output.empty()) return fallback;
  fs::path p = main_output;
  p += ".manifest.json";
  return p;
}

Adha builtin_model(const std::string& name) {
  if (name == "heater") return heater_model();
  if (name == "gearbox") return gearbox_model();
  throw DataError("unknown model '" + name + "' (expected heater or gearbox)");
}

SimConfig builtin_config(const std::string& name, std::uint64_t seed) {
  return name == "heater" ? heater_sim_config(seed) : gearbox_sim_config(seed);
}

Json membership_params(const MembershipOptions& m) {
  Json j;
  j["samples_per_unit"] = m.samples_per_unit;
  j["min_samples"] = m.min_samples;
  j["m"] = m.fixed_samples ? Json(*m.fixed_samples) : Json(nullptr);
  j["contraction_delta"] = m.contraction_delta ? Json(*m.contraction_delta) : Json(nullptr);
  return j;
}

struct SegmentArgs {
  std::string input, output;
  double delta = 0.05;
  std::uint64_t seed = 0;
  int restarts = 200;
};

int do_segment(const SegmentArgs& a, const Common& c, int argc, char** argv) {
  RunManifest man("segment", argc, argv);
  man.input(a.input);
  man.param("delta", a.delta);
  man.param("seed", a.seed);
  man.param("restarts", a.restarts);
  const TimeSeries s = io::read_series_csv(a.input);
  FitOptions fit;
  fit.seed = a.seed;
  fit.restarts = a.restarts;
  fit.threads = resolve_threads(c.threads);
  const PwaTrajectory f = segment(s, a.delta, fit);
  io::write_json(a.output, io::to_json(f));
  man.result()["pieces"] = f.num_pieces();
  man.result()["max_deviation"] = max_deviation(f, s);
  man.write(manifest_path(c, a.output, "segment.manifest.json"));
  spdlog::info("{} pieces written to {}", f.num_pieces(), a.output);
  return 0;
}

struct MemberArgs {
  std::string automaton, trajectory, path, emit_sets;
  double epsilon = 0.1;
  int m = 0;
  double contraction = 0.0;
};

int do_member(const MemberArgs& a, const Common& c, int argc, char** argv) {
  RunManifest man("member", argc, argv);
  man.input(a.automaton);
  man.input(a.trajectory);
  const Adha h = io::adha_from_json(io::read_json(a.automaton));
  const PwaTrajectory f = io::trajectory_from_json(io::read_json(a.trajectory));
  MembershipOptions opts;
  if (a.m > 0) opts.fixed_samples = a.m;
  if (a.contraction > 0.0) opts.contraction_delta = a.contraction;
  opts.threads = resolve_threads(c.threads);
  man.param("epsilon", a.epsilon);
  man.param("membership", membership_params(opts));
  man.param("path", a.path);

  MembershipVerdict verdict;
  std::vector<SReachApprox> sets;
  if (!a.path.empty()) {
    PathResult r = sreach_path(h, split(a.path, ','), f, a.epsilon, opts);
    verdict = std::move(r.verdict);
    sets = std::move(r.sets);
  } else {
    verdict = member(h, f, a.epsilon, opts);
    if (verdict.witness_path) {
      sets = sreach_path(h, *verdict.witness_path, f, a.epsilon, opts).sets;
    }
  }
  if (!a.emit_sets.empty()) io::write_text(a.emit_sets, io::sets_to_csv(sets, f.dimension()));

  man.result()["outcome"] = to_string(verdict.outcome);
  man.result()["witness_path"] = verdict.witness_path ? Json(*verdict.witness_path) : Json(nullptr);
  man.write(manifest_path(c, a.emit_sets, "member.manifest.json"));
  std::cout << to_string(verdict.outcome);
  if (verdict.witness_path) std::cout << " " << join(*verdict.witness_path, ",");
  std::cout << "\n";
  switch (verdict.outcome) {
    case Outcome::kCaptured: return 0;
    case Outcome::kNotCaptured: return 1;
    case Outcome::kUnknown: return 2;
  }
  return 2;
}

std::string stats_csv(const SynthesisResult& r) {
  std::ostringstream out;
  out << "trajectory,explored,seconds,locations,transitions\n";
  for (const auto& s : r.stats) {
    out << s.index << "," << s.explored << "," << s.seconds << "," << s.locations << ","
        << s.transitions << "\n";
  }
  return out.str();
}

struct SynthArgs {
  std::vector<std::string> inputs;
  std::string output, resume, stats;
  double epsilon = 0.1;
  int m = 0;
  double contraction = 0.0;
};

int do_synthesize(const SynthArgs& a, const Common& c, int argc, char** argv) {
  RunManifest man("synthesize", argc, argv);
  std::vector<PwaTrajectory> fs;
  for (const auto& in : a.inputs) {
    man.input(in);
    fs.push_back(io::trajectory_from_json(io::read_json(in)));
  }
  std::optional<Adha> start;
  if (!a.resume.empty()) {
    man.input(a.resume);
    start = io::adha_from_json(io::read_json(a.resume));
  }
  SynthesisOptions opts;
  if (a.m > 0) opts.membership.fixed_samples = a.m;
  if (a.contraction > 0.0) opts.membership.contraction_delta = a.contraction;
  opts.threads = resolve_threads(c.threads);
  opts.membership.threads = opts.threads;
  man.param("epsilon", a.epsilon);
  man.param("membership", membership_params(opts.membership));

  // The model is saved after every trajectory so an interrupted run leaves
  // a valid automaton behind.
  const SynthesisResult r = synthesize(fs, a.epsilon, opts, start, [&](const SynthesisResult& cur) {
    io::write_json(a.output, io::to_json(cur.automaton));
  });
  io::write_json(a.output, io::to_json(r.automaton));
  if (!a.stats.empty()) io::write_text(a.stats, stats_csv(r));

  man.result()["locations"] = r.automaton.locations().size();
  man.result()["transitions"] = r.automaton.transitions().size();
  man.result()["explored"] = r.total_explored();
  man.result()["witnesses"] = r.witnesses;
  man.write(manifest_path(c, a.output, "synthesize.manifest.json"));
  std::cout << "|Q|=" << r.automaton.locations().size()
            << " |E|=" << r.automaton.transitions().size() << " explored=" << r.total_explored()
            << "\n";
  return 0;
}

struct SimArgs {
  std::string automaton, model, out_dir = "corpus", initial_location;
  int count = 100;
  std::uint64_t seed = 0;
  int path_length = 0;
  double max_dwell = 0.0, time_step = 0.0, perturbation = -1.0, pitch = 0.0;
  bool perturb_first = false;
};

int do_simulate(const SimArgs& a, const Common& c, int argc, char** argv) {
  RunManifest man("simulate", argc, argv);
  Adha h;
  SimConfig cfg;
  if (!a.automaton.empty()) {
    man.input(a.automaton);
    h = io::adha_from_json(io::read_json(a.automaton));
    cfg.seed = a.seed;
  } else {
    h = builtin_model(a.model);
    cfg = builtin_config(a.model, a.seed);
  }
  if (a.path_length > 0) cfg.path_length = a.path_length;
  if (a.max_dwell > 0.0) cfg.max_dwell = a.max_dwell;
  if (a.time_step > 0.0) cfg.time_step = a.time_step;
  if (a.perturbation >= 0.0) cfg.max_perturbation = a.perturbation;
  if (!a.initial_location.empty()) cfg.initial_location = a.initial_location;
  man.param("seed", cfg.seed);
  man.param("model", a.model);
  man.param("count", a.count);
  man.param("path_length", cfg.path_length);
  man.param("max_dwell", cfg.max_dwell);
  man.param("time_step", cfg.time_step);
  man.param("max_perturbation", cfg.max_perturbation);

  const auto runs = sample_corpus(h, cfg, a.count, !a.perturb_first);
  const fs::path dir = a.out_dir;
  fs::create_directories(dir);
  std::ostringstream csv;
  csv << "index,file,seed,stream,path,switch_times\n";
  Json files = Json::array();
  for (std::size_t i = 0; i < runs.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "traj_%03zu", i);
    const PwaTrajectory f = to_pwa(runs[i]);
    io::write_json(dir / (std::string(name) + ".json"), io::to_json(f));
    if (a.pitch > 0.0) io::write_text(dir / (std::string(name) + ".csv"), io::trajectory_to_csv(f, a.pitch));
    std::vector<std::string> times;
    for (double t : f.switch_times()) times.push_back(Json(t).dump());
    csv << i << "," << name << ".json," << cfg.seed << "," << i << ","
        << join(runs[i].execution.path, ";") << "," << join(times, ";") << "\n";
    files.push_back(std::string(name) + ".json");
  }
  io::write_text(dir / "manifest.csv", csv.str());
  man.result()["files"] = std::move(files);
  man.write(c.manifest.empty() ? dir / "run.manifest.json" : fs::path(c.manifest));
  spdlog::info("{} executions written to {}", runs.size(), dir.string());
  return 0;
}

struct BenchArgs {
  std::string model = "heater", epsilons = "0.1,0.07,0.04,0.01", output;
  int count = 0;
  std::uint64_t seed = 0;
};

int do_bench(const BenchArgs& a, const Common& c, int argc, char** argv) {
  RunManifest man("bench", argc, argv);
  const Adha h = builtin_model(a.model);
  const int count = a.count > 0 ? a.count : (a.model == "heater" ? 100 : 10);
  const SimConfig cfg = builtin_config(a.model, a.seed);
  std::vector<PwaTrajectory> fs;
  for (const auto& run : sample_corpus(h, cfg, count)) fs.push_back(to_pwa(run));
  SynthesisOptions opts;
  opts.threads = resolve_threads(c.threads);
  opts.membership.threads = opts.threads;
  man.param("model", a.model);
  man.param("count", count);
  man.param("seed", a.seed);
  man.param("epsilons", a.epsilons);
  man.param("membership", membership_params(opts.membership));

  std::ostringstream csv;
  csv << "model,epsilon,runtime_s,locations,transitions,explored\n";
  Json rows = Json::array();
  for (const auto& e : split(a.epsilons, ',')) {
    const double eps = std::stod(e);
    const auto t0 = std::chrono::steady_clock::now();
    const SynthesisResult r = synthesize(fs, eps, opts);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    csv << a.model << "," << eps << "," << secs << "," << r.automaton.locations().size() << ","
        << r.automaton.transitions().size() << "," << r.total_explored() << "\n";
    rows.push_back({{"epsilon", eps},
                    {"locations", r.automaton.locations().size()},
                    {"transitions", r.automaton.transitions().size()},
                    {"explored", r.total_explored()}});
  }
  if (a.output.empty()) {
    std::cout << csv.str();
  } else {
    io::write_text(a.output, csv.str());
  }
  man.result()["rows"] = std::move(rows);
  man.write(manifest_path(c, a.output, "bench.manifest.json"));
  return 0;
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--threads", c.threads, "Worker threads (default: ADHA_SYNTH_THREADS or 1)")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--manifest", c.manifest, "Where to write the run manifest");
  sub->add_flag("-v,--verbose", c.verbose, "Debug logging");
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Synthesis of hybrid automata with affine dynamics from time series"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Common common;

  SegmentArgs seg;
  auto* s = app.add_subcommand("segment", "Split a time series into affine pieces");
  s->add_option("--input", seg.input, "Series CSV (t,x1,...,xn)")->required()->check(CLI::ExistingFile);
  s->add_option("--delta", seg.delta, "Maximum deviation from the samples")
      ->check(CLI::PositiveNumber);
  s->add_option("--output", seg.output, "Trajectory JSON")->required();
  s->add_option("--seed", seg.seed, "Seed of the restart perturbations");
  s->add_option("--restarts", seg.restarts, "Optimizer restarts per window")
      ->check(CLI::PositiveNumber);
  add_common(s, common);

  MemberArgs mem;
  auto* m = app.add_subcommand("member", "Decide whether an automaton captures a trajectory");
  m->add_option("--automaton", mem.automaton)->required()->check(CLI::ExistingFile);
  m->add_option("--trajectory", mem.trajectory)->required()->check(CLI::ExistingFile);
  m->add_option("--epsilon", mem.epsilon)->check(CLI::NonNegativeNumber);
  m->add_option("--path", mem.path, "Fixed location path, e.g. q2,q1");
  m->add_option("--m", mem.m, "Time samples per piece")->check(CLI::PositiveNumber);
  m->add_option("--contraction", mem.contraction, "Contraction step (default epsilon/10)")
      ->check(CLI::PositiveNumber);
  m->add_option("--emit-sets", mem.emit_sets, "CSV of per-piece over/under constraints");
  add_common(m, common);

  SynthArgs syn;
  auto* y = app.add_subcommand("synthesize", "Build or extend an automaton from trajectories");
  y->add_option("--input", syn.inputs, "Trajectory JSON files")
      ->required()
      ->expected(1, -1)
      ->check(CLI::ExistingFile);
  y->add_option("--epsilon", syn.epsilon)->check(CLI::NonNegativeNumber);
  y->add_option("--output", syn.output, "Automaton JSON")->required();
  y->add_option("--resume", syn.resume, "Continue from this automaton")->check(CLI::ExistingFile);
  y->add_option("--stats", syn.stats, "Per-trajectory statistics CSV");
  y->add_option("--m", syn.m, "Time samples per piece")->check(CLI::PositiveNumber);
  y->add_option("--contraction", syn.contraction)->check(CLI::PositiveNumber);
  add_common(y, common);

  SimArgs sim;
  auto* r = app.add_subcommand("simulate", "Sample random executions of an automaton");
  auto* src_a = r->add_option("--automaton", sim.automaton)->check(CLI::ExistingFile);
  auto* src_m = r->add_option("--model", sim.model, "Built-in model")
                    ->check(CLI::IsMember({"heater", "gearbox"}));
  src_a->excludes(src_m);
  r->add_option("--count", sim.count)->check(CLI::PositiveNumber);
  r->add_option("--seed", sim.seed);
  r->add_option("--out-dir", sim.out_dir);
  r->add_option("--path-length", sim.path_length)->check(CLI::PositiveNumber);
  r->add_option("--max-dwell", sim.max_dwell)->check(CLI::PositiveNumber);
  r->add_option("--time-step", sim.time_step)->check(CLI::PositiveNumber);
  r->add_option("--perturbation", sim.perturbation)->check(CLI::NonNegativeNumber);
  r->add_option("--initial-location", sim.initial_location);
  r->add_flag("--perturb-first", sim.perturb_first, "Also perturb the first execution");
  r->add_option("--csv-pitch", sim.pitch, "Also write sampled CSVs at this pitch")
      ->check(CLI::PositiveNumber);
  add_common(r, common);

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "Epsilon sweep on a built-in model");
  b->add_option("--model", bench.model)->check(CLI::IsMember({"heater", "gearbox"}));
  b->add_option("--epsilons", bench.epsilons, "Comma-separated list");
  b->add_option("--count", bench.count, "Executions (default 100 heater, 10 gearbox)");
  b->add_option("--seed", bench.seed);
  b->add_option("--output", bench.output, "CSV file (default stdout)");
  add_common(b, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  if (r->parsed() && sim.automaton.empty() && sim.model.empty()) {
    std::cerr << "simulate: one of --automaton or --model is required\n";
    return kExitUsage;
  }

  spdlog::set_level(common.verbose ? spdlog::level::debug : spdlog::level::warn);
  try {
    if (s->parsed()) return do_segment(seg, common, argc, argv);
    if (m->parsed()) return do_member(mem, common, argc, argv);
    if (y->parsed()) return do_synthesize(syn, common, argc, argv);
    if (r->parsed()) return do_simulate(sim, common, argc, argv);
    if (b->parsed()) return do_bench(bench, common, argc, argv);
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: bad number: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace adha::cli
