#include "p3dc/report.hpp"

#ifndef P3DC_VERSION
#define P3DC_VERSION "unknown"
#endif

namespace p3dc::report {

using nlohmann::ordered_json;

namespace {

ordered_json mode_json(const nn::PredictMode& mode) {
  ordered_json j;
  j["transform"] = std::string(nn::to_string(mode.transform));
  j["prototype"] = std::string(nn::to_string(mode.prototype));
  j["lambda"] = mode.calib.lambda;
  j["m"] = mode.calib.m;
  j["alpha"] = mode.calib.alpha;
  j["beta"] = mode.calib.beta;
  j["clamp_negative"] = mode.calib.negative_policy == calib::NegativePolicy::ClampToZero;
  j["normalized_query_attention"] = mode.normalized_query_attention;
  return j;
}

ordered_json params_json(const episode::EvalParams& p) {
  ordered_json j;
  j["way"] = p.way;
  j["shot"] = p.shot;
  j["queries"] = p.queries;
  j["tasks"] = p.tasks;
  j["seed"] = p.seed;
  return j;
}

}  // namespace

std::string_view build_version() { return P3DC_VERSION; }

ordered_json to_json(const episode::EvalReport& report, bool include_timing) {
  ordered_json j;
  j["version"] = std::string(build_version());
  j["mode"] = mode_json(report.mode);
  j["params"] = params_json(report.params);
  j["mean"] = report.mean;
  j["ci95_halfwidth"] = report.ci95_halfwidth;
  if (include_timing) {
    j["calib_seconds_per_task"] = report.calib_seconds_per_task;
    j["classify_seconds_per_task"] = report.classify_seconds_per_task;
  }
  j["clamped_entries"] = report.clamped_entries;
  j["per_task_accuracy"] = report.per_task_accuracy;
  return j;
}

ordered_json to_json(const sweep::SweepResult& result, const nn::PredictMode& mode,
                     const episode::EvalParams& params, double step) {
  ordered_json j;
  j["version"] = std::string(build_version());
  j["mode"] = mode_json(mode);
  j["params"] = params_json(params);
  j["step"] = step;
  j["best"] = {{"alpha", result.best.first}, {"beta", result.best.second}};
  ordered_json entries = ordered_json::array();
  for (const sweep::SweepEntry& e : result.entries) {
    entries.push_back({{"alpha", e.point.alpha}, {"beta", e.point.beta}, {"mean", e.mean}, {"ci95", e.ci95}});
  }
  j["entries"] = std::move(entries);
  return j;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace p3dc::report
