#include "p3dc/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <ostream>
#include <thread>

#include "CLI11.hpp"
#include "p3dc/episode.hpp"
#include "p3dc/error.hpp"
#include "p3dc/feature_store.hpp"
#include "p3dc/report.hpp"
#include "p3dc/sweep.hpp"
#include "p3dc/synthgen.hpp"

namespace p3dc::cli {

namespace fs = std::filesystem;

namespace {

struct ModeFlags {
  std::string mode = "p3dc";
  std::string proto = "attentive";
  double alpha = 0.0;
  double beta = 0.9;
  double lambda = 0.5;
  std::size_t m = 5;
  bool clamp_negative = false;
  bool normalized_query_attention = false;

  void attach(CLI::App& app, bool with_mode) {
    if (with_mode) {
      app.add_option("--mode", mode, "nn | l2n | cl2n | dc | p3dc")->capture_default_str();
      app.add_option("--alpha", alpha, "sample-level calibration weight")->capture_default_str();
      app.add_option("--beta", beta, "task-level calibration weight")->capture_default_str();
    }
    app.add_option("--proto", proto, "average | attentive")->capture_default_str();
    app.add_option("--lambda", lambda, "power transform exponent")->capture_default_str();
    app.add_option("--m", m, "base prototypes kept per support sample")->capture_default_str();
    app.add_flag("--clamp-negative", clamp_negative, "clamp negative entries to 0 before the power transform");
    app.add_flag("--normalized-query-attention", normalized_query_attention,
                 "use the normalized query for attentive prototype weights");
  }

  nn::PredictMode resolve() const {
    nn::PredictMode out;
    out.transform = nn::parse_transform(mode);
    out.prototype = nn::parse_prototype_mode(proto);
    out.calib.alpha = alpha;
    out.calib.beta = beta;
    out.calib.lambda = lambda;
    out.calib.m = m;
    out.calib.negative_policy = clamp_negative ? calib::NegativePolicy::ClampToZero : calib::NegativePolicy::Error;
    out.normalized_query_attention = normalized_query_attention;
    episode::validate_mode(out);
    return out;
  }
};

struct EpisodeFlags {
  std::size_t way = 5;
  std::size_t shot = 1;
  std::size_t queries = 15;
  std::size_t tasks = 2000;
  std::uint64_t seed = 0;
  std::size_t threads = 0;

  void attach(CLI::App& app) {
    app.add_option("--way", way, "classes per task")->capture_default_str();
    app.add_option("--shot", shot, "support samples per class")->capture_default_str();
    app.add_option("--queries", queries, "query samples per class")->capture_default_str();
    app.add_option("--tasks", tasks, "number of tasks")->capture_default_str();
    app.add_option("--seed", seed, "run seed")->capture_default_str();
    app.add_option("--threads", threads, "worker threads (0 = all cores)")->capture_default_str();
  }

  episode::EvalParams resolve() const {
    episode::EvalParams p{way, shot, queries, tasks, seed, threads};
    episode::validate_params(p);
    return p;
  }
};

fs::path resolve_store(const std::string& given) {
  if (!given.empty()) return given;
  if (const char* env = std::getenv("P3DC_STORE"); env != nullptr && *env != '\0') return env;
  throw Error(ErrorCode::Config, "no store given and P3DC_STORE is unset");
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Config:
    case ErrorCode::Format:
    case ErrorCode::Schema:
    case ErrorCode::Data:
      return kExitValidation;
    default:
      return kExitRuntime;
  }
}

void cmd_validate(const fs::path& store, std::ostream& out) {
  const store::Manifest manifest = store::read_manifest(store);
  out << "store    " << store.string() << "\n";
  out << "dataset  " << manifest.dataset << "  dim " << manifest.dim << "\n";
  for (const auto& [name, entry] : manifest.splits) {
    const store::FeatureDataset ds = store::load_dataset(store, name);
    out << std::left << std::setw(11) << name << ds.size() << " records, " << ds.num_classes() << " classes, "
        << (ds.nonneg() ? "nonneg" : "signed") << "\n";
  }
  out << "ok\n";
}

void cmd_prototypes(const fs::path& store, const fs::path& output, std::ostream& out) {
  const store::FeatureDataset base = store::load_dataset(store, "base");
  const store::BasePrototypeSet protos = store::compute_base_prototypes(base);
  store::write_split_binary(output, store::prototypes_as_dataset(protos));
  out << "wrote " << protos.size() << " prototypes (dim " << protos.dim() << ") to " << output.string() << "\n";
}

void print_report(const episode::EvalReport& r, std::ostream& out) {
  const nn::PredictMode& m = r.mode;
  out << "mode       " << nn::to_string(m.transform) << " (" << nn::to_string(m.prototype) << ")";
  if (m.transform == nn::Transform::P3DC) out << "  alpha=" << m.calib.alpha << " beta=" << m.calib.beta;
  if (m.transform == nn::Transform::P3DC || m.transform == nn::Transform::DCStyle) {
    out << " lambda=" << m.calib.lambda << " m=" << m.calib.m;
  }
  out << "\n";
  out << "tasks      " << r.params.tasks << " x " << r.params.way << "-way " << r.params.shot << "-shot, "
      << r.params.queries << " queries/class, seed " << r.params.seed << "\n";
  out << "accuracy   " << fixed(100.0 * r.mean, 2) << " +- " << fixed(100.0 * r.ci95_halfwidth, 2) << " %\n";
  out << "calibrate  " << fixed(r.calib_seconds_per_task, 6) << " s/task\n";
  out << "classify   " << fixed(r.classify_seconds_per_task, 6) << " s/task\n";
  if (r.clamped_entries > 0) out << "clamped    " << r.clamped_entries << " negative entries\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Prior-driven discrete calibration for few-shot classification", "p3dc"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(report::build_version()));

  std::string store_arg;
  std::string output;

  auto* validate = app.add_subcommand("validate", "check a feature store against its manifest");
  validate->add_option("store", store_arg, "store directory (default: $P3DC_STORE)");

  auto* prototypes = app.add_subcommand("prototypes", "write per-class base prototypes");
  prototypes->add_option("store", store_arg, "store directory (default: $P3DC_STORE)");
  prototypes->add_option("-o,--output", output, "output binary")->required();

  ModeFlags eval_mode;
  EpisodeFlags eval_episodes;
  std::string eval_split = "novel";
  std::string eval_json;
  bool no_timing = false;
  auto* eval = app.add_subcommand("eval", "episodic evaluation");
  eval->add_option("store", store_arg, "store directory (default: $P3DC_STORE)");
  eval->add_option("--split", eval_split, "split to draw episodes from")->capture_default_str();
  eval_mode.attach(*eval, true);
  eval_episodes.attach(*eval);
  eval->add_option("--json", eval_json, "write the report as JSON");
  eval->add_flag("--no-timing", no_timing, "leave wall-clock timings out of the JSON report");

  ModeFlags sweep_mode;
  EpisodeFlags sweep_episodes;
  sweep_episodes.tasks = 500;
  double step = 0.1;
  std::string sweep_split = "validation";
  std::string heatmap;
  std::string sweep_json;
  auto* sweep_cmd = app.add_subcommand("sweep", "alpha/beta grid sweep on the validation split");
  sweep_cmd->add_option("store", store_arg, "store directory (default: $P3DC_STORE)");
  sweep_cmd->add_option("--split", sweep_split, "split to draw episodes from")->capture_default_str();
  sweep_cmd->add_option("--step", step, "grid spacing")->capture_default_str();
  sweep_mode.attach(*sweep_cmd, false);
  sweep_episodes.attach(*sweep_cmd);
  sweep_cmd->add_option("--heatmap", heatmap, "write alpha,beta,accuracy,ci95 CSV");
  sweep_cmd->add_option("--json", sweep_json, "write the sweep summary as JSON");

  std::string preset = "boundary-bias";
  synth::SynthConfig synth_cfg;
  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic feature store");
  synth_cmd->add_option("--preset", preset, "default | boundary-bias | separable | nway")->capture_default_str();
  synth_cmd->add_option("-o,--output", output, "store directory to create")->required();
  auto* dim_opt = synth_cmd->add_option("--dim", synth_cfg.dim);
  auto* base_opt = synth_cmd->add_option("--base-classes", synth_cfg.num_base_classes);
  auto* val_opt = synth_cmd->add_option("--validation-classes", synth_cfg.num_validation_classes);
  auto* novel_opt = synth_cmd->add_option("--novel-classes", synth_cfg.num_novel_classes);
  auto* samples_opt = synth_cmd->add_option("--samples", synth_cfg.samples_per_class, "samples per class");
  auto* stddev_opt = synth_cmd->add_option("--stddev", synth_cfg.intra_class_stddev, "intra-class noise");
  auto* radius_opt = synth_cmd->add_option("--radius", synth_cfg.centroid_radius, "base centroid radius");
  auto* mix_opt = synth_cmd->add_option("--mix-k", synth_cfg.novel_mix_k, "base centroids per novel centroid");
  auto* bias_opt = synth_cmd->add_option("--boundary-bias", synth_cfg.boundary_bias, "outer-shell probability");
  auto* nonneg_opt = synth_cmd->add_option("--nonneg", synth_cfg.nonneg, "fold samples to absolute values");
  auto* seed_opt = synth_cmd->add_option("--seed", synth_cfg.seed);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error_code: " << to_string(ErrorCode::Config) << ": " << e.what() << "\n";
    err << app.help();
    return kExitValidation;
  }

  try {
    if (validate->parsed()) {
      cmd_validate(resolve_store(store_arg), out);
    } else if (prototypes->parsed()) {
      cmd_prototypes(resolve_store(store_arg), output, out);
    } else if (eval->parsed()) {
      const nn::PredictMode mode = eval_mode.resolve();
      const episode::EvalParams params = eval_episodes.resolve();
      const fs::path store = resolve_store(store_arg);
      const store::FeatureDataset base = store::load_dataset(store, "base");
      const store::FeatureDataset split = store::load_dataset(store, eval_split);
      const store::BasePrototypeSet protos = store::compute_base_prototypes(base);
      const episode::EvalReport report = episode::evaluate(split, protos, mode, params);
      print_report(report, out);
      if (!eval_json.empty()) write_text(eval_json, report::dump(report::to_json(report, !no_timing)));
    } else if (sweep_cmd->parsed()) {
      nn::PredictMode mode = sweep_mode.resolve();
      const episode::EvalParams params = sweep_episodes.resolve();
      const sweep::SweepGrid grid(step);
      const fs::path store = resolve_store(store_arg);
      const store::FeatureDataset base = store::load_dataset(store, "base");
      const store::FeatureDataset split = store::load_dataset(store, sweep_split);
      const store::BasePrototypeSet protos = store::compute_base_prototypes(base);
      const sweep::SweepResult result = sweep::grid_sweep(split, protos, grid, mode, params);
      out << "grid       " << grid.points().size() << " points, step " << step << "\n";
      out << "tasks      " << params.tasks << " x " << params.way << "-way " << params.shot << "-shot, seed "
          << params.seed << "\n";
      for (const sweep::SweepEntry& e : result.entries) {
        if (e.point.alpha == result.best.first && e.point.beta == result.best.second) {
          out << "best       alpha=" << e.point.alpha << " beta=" << e.point.beta << "  " << fixed(100.0 * e.mean, 2)
              << " +- " << fixed(100.0 * e.ci95, 2) << " %\n";
        }
      }
      if (!heatmap.empty()) sweep::emit_heatmap_csv(result, heatmap);
      if (!sweep_json.empty()) write_text(sweep_json, report::dump(report::to_json(result, mode, params, step)));
    } else if (synth_cmd->parsed()) {
      synth::SynthConfig cfg = synth::SynthConfig::preset(preset);
      // Explicit flags override the preset.
      if (dim_opt->count()) cfg.dim = synth_cfg.dim;
      if (base_opt->count()) cfg.num_base_classes = synth_cfg.num_base_classes;
      if (val_opt->count()) cfg.num_validation_classes = synth_cfg.num_validation_classes;
      if (novel_opt->count()) cfg.num_novel_classes = synth_cfg.num_novel_classes;
      if (samples_opt->count()) cfg.samples_per_class = synth_cfg.samples_per_class;
      if (stddev_opt->count()) cfg.intra_class_stddev = synth_cfg.intra_class_stddev;
      if (radius_opt->count()) cfg.centroid_radius = synth_cfg.centroid_radius;
      if (mix_opt->count()) cfg.novel_mix_k = synth_cfg.novel_mix_k;
      if (bias_opt->count()) cfg.boundary_bias = synth_cfg.boundary_bias;
      if (nonneg_opt->count()) cfg.nonneg = synth_cfg.nonneg;
      if (seed_opt->count()) cfg.seed = synth_cfg.seed;
      const synth::SynthData data = synth::generate(cfg);
      synth::write_store(data, output, "synthetic-" + preset);
      out << "wrote synthetic store " << output << " (" << data.base.size() << " base, " << data.validation.size()
          << " validation, " << data.novel.size() << " novel records, dim " << cfg.dim << ")\n";
    }
  } catch (const Error& e) {
    err << "error_code: " << to_string(e.code()) << ": " << e.what() << "\n";
    if (e.code() == ErrorCode::Config) err << app.help();
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error_code: runtime_error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace p3dc::cli
