#pragma once

#include <string>
#include <string_view>

#include "json.hpp"
#include "p3dc/episode.hpp"
#include "p3dc/sweep.hpp"

namespace p3dc::report {

/// `git describe`-style version captured at configure time.
std::string_view build_version();

/// Serializes a report. Timing fields are wall-clock and so differ between
/// runs; `include_timing = false` drops them for byte-stable output.
nlohmann::ordered_json to_json(const episode::EvalReport& report, bool include_timing = true);

nlohmann::ordered_json to_json(const sweep::SweepResult& result, const nn::PredictMode& mode,
                               const episode::EvalParams& params, double step);

/// Pretty-printed with a trailing newline.
std::string dump(const nlohmann::ordered_json& j);

}  // namespace p3dc::report
