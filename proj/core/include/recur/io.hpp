#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "recur/distribution.hpp"
#include "recur/divergence.hpp"
#include "recur/experiments.hpp"
#include "recur/measure.hpp"

namespace recur::io {

using nlohmann::json;

/// Strict measure spec parsing: unknown fields are rejected and errors name
/// the offending field path ("$.first.probs[1]").
Measure parse_measure(const json& spec, const std::string& path = "$");
/// Parses text; syntax errors carry line and column.
Measure parse_measure_text(std::string_view text, const std::string& source = "<text>");
Measure load_measure(const std::filesystem::path& file);

/// Reads and parses a JSON document; syntax errors carry file, line, column.
json load_json(const std::filesystem::path& file);
json parse_json_text(std::string_view text, const std::string& source);

json to_json(const Measure& m);

/// Number, or the string "inf" for the infinite sentinel.
json to_json(const Rate& r);
json to_json(const DivergenceSeq& seq);
json to_json(const RateEstimate& est);
json to_json(const DistributionTable& table);
json to_json(const LimitReport& report);
json to_json(const ConcentrationReport& report);
json to_json(const LdpCurve& curve);
json to_json(const NonconvergenceReport& report);
json to_json(const OscillationReport& report);
json to_json(const VwspProfile& profile);

/// Experiment config: {"mu": spec-or-path, "nu": ..., "schedule": [...],
/// "samples": N, "epsilons": [...], "threshold": t} plus experiment-specific
/// keys listed in `extra_keys`. Relative measure paths resolve against
/// `base_dir`.
ExperimentConfig parse_experiment_config(const json& cfg, const std::filesystem::path& base_dir,
                                         std::initializer_list<std::string_view> extra_keys = {});

/// Measure given inline or as a path to a spec file.
Measure measure_ref(const json& value, const std::filesystem::path& base_dir,
                    const std::string& path);

/// %.17g.
std::string format_double(double v);

}  // namespace recur::io
