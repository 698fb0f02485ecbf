#include "recur/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "recur/error.hpp"

namespace recur::io {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw Error(ErrorKind::parse, path + ": " + message);
}

void require_keys(const json& obj, const std::string& path,
                  std::initializer_list<std::string_view> allowed,
                  std::initializer_list<std::string_view> extra = {}) {
  if (!obj.is_object()) fail(path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    const bool known = std::find(allowed.begin(), allowed.end(), key) != allowed.end() ||
                       std::find(extra.begin(), extra.end(), key) != extra.end();
    if (!known) fail(path + "." + key, "unknown field");
  }
}

const json& field(const json& obj, const std::string& path, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail(path + "." + key, "missing required field");
  return *it;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

std::uint64_t count(const json& v, const std::string& path) {
  if (!v.is_number_unsigned()) fail(path, "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

std::string text(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

std::vector<double> number_array(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

Alphabet alphabet_field(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of symbol labels");
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < v.size(); ++i) labels.push_back(text(v[i], path + "[" + std::to_string(i) + "]"));
  try {
    return Alphabet(std::move(labels));
  } catch (const Error& e) {
    fail(path, e.what());
  }
}

/// Re-raises a construction failure with the field path of the spec object.
template <class Fn>
Measure build(const std::string& path, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::invariant || e.kind() == ErrorKind::parse) {
      throw Error(e.kind(), path + "." + e.what());
    }
    throw;
  }
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

std::string read_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorKind::usage, "cannot open '" + file.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json log_json(double log_value) {
  if (log_value == kNegInf) return "-inf";
  return log_value;
}

json prob_array(const std::vector<double>& values, std::size_t from) {
  json out = json::array();
  for (std::size_t i = from; i < values.size(); ++i) out.push_back(values[i]);
  return out;
}

json log_array(const std::vector<double>& values, std::size_t from) {
  json out = json::array();
  for (std::size_t i = from; i < values.size(); ++i) out.push_back(log_json(safe_log(values[i])));
  return out;
}

json opt_rate(const std::optional<Rate>& r) { return r ? to_json(*r) : json(nullptr); }

}  // namespace

Measure parse_measure(const json& spec, const std::string& path) {
  if (!spec.is_object()) fail(path, "expected a measure object");
  const std::string type = text(field(spec, path, "type"), path + ".type");

  if (type == "iid") {
    require_keys(spec, path, {"type", "alphabet", "probs"});
    auto probs = number_array(field(spec, path, "probs"), path + ".probs");
    Alphabet alphabet = spec.contains("alphabet") ? alphabet_field(spec["alphabet"], path + ".alphabet")
                                                  : Alphabet::numbered(std::max<std::size_t>(probs.size(), 1));
    return build(path, [&] { return Measure::iid(alphabet, probs); });
  }
  if (type == "markov") {
    require_keys(spec, path, {"type", "alphabet", "transition"});
    const json& t = field(spec, path, "transition");
    if (!t.is_array() || t.empty()) fail(path + ".transition", "expected a non-empty array of rows");
    std::vector<std::vector<double>> rows;
    for (std::size_t r = 0; r < t.size(); ++r) {
      rows.push_back(number_array(t[r], path + ".transition[" + std::to_string(r) + "]"));
      if (rows.back().size() != rows.front().size()) {
        fail(path + ".transition[" + std::to_string(r) + "]", "ragged row");
      }
    }
    Alphabet alphabet = spec.contains("alphabet") ? alphabet_field(spec["alphabet"], path + ".alphabet")
                                                  : Alphabet::numbered(rows.size());
    return build(path, [&] { return Measure::markov(alphabet, Matrix(rows)); });
  }
  if (type == "dirac") {
    require_keys(spec, path, {"type", "alphabet", "pattern"});
    const json& pattern = field(spec, path, "pattern");
    if (pattern.is_string()) {
      if (pattern.get<std::string>() != "blocks") {
        fail(path + ".pattern", "expected \"blocks\" or {\"periodic\": word}");
      }
      if (spec.contains("alphabet")) {
        const Alphabet given = alphabet_field(spec["alphabet"], path + ".alphabet");
        if (!(given == Alphabet::binary())) fail(path + ".alphabet", "blocks pattern is over [\"0\",\"1\"]");
      }
      return Measure::dirac_blocks();
    }
    require_keys(pattern, path + ".pattern", {"periodic"});
    const std::string word = text(field(pattern, path + ".pattern", "periodic"),
                                  path + ".pattern.periodic");
    Alphabet alphabet = [&] {
      if (spec.contains("alphabet")) return alphabet_field(spec["alphabet"], path + ".alphabet");
      const std::string_view w = word;
      return alphabet_of_texts(std::span<const std::string_view>(&w, 1));
    }();
    return build(path, [&] { return Measure::dirac_periodic(Word::parse(alphabet, word)); });
  }
  if (type == "mixture") {
    require_keys(spec, path, {"type", "lambda", "first", "second"});
    const double lambda = number(field(spec, path, "lambda"), path + ".lambda");
    Measure first = parse_measure(field(spec, path, "first"), path + ".first");
    Measure second = parse_measure(field(spec, path, "second"), path + ".second");
    return build(path, [&] { return Measure::mixture(lambda, first, second); });
  }
  if (type == "renewal_hoc") {
    require_keys(spec, path, {"type", "q", "y_max", "forced_squares"});
    const std::size_t y_max = spec.contains("y_max") ? count(spec["y_max"], path + ".y_max")
                                                     : Measure::kDefaultYMax;
    const bool has_q = spec.contains("q");
    const bool has_forced = spec.contains("forced_squares");
    if (has_q == has_forced) fail(path, "exactly one of \"q\" and \"forced_squares\" is required");
    if (has_forced) {
      const json& f = spec["forced_squares"];
      require_keys(f, path + ".forced_squares", {"q_free"});
      const double q_free = number(field(f, path + ".forced_squares", "q_free"),
                                   path + ".forced_squares.q_free");
      return build(path, [&] { return Measure::house_of_cards_forced_squares(q_free, y_max); });
    }
    auto q = number_array(spec["q"], path + ".q");
    return build(path, [&] { return Measure::house_of_cards(q, y_max); });
  }
  fail(path + ".type", "unknown measure type '" + type +
                           "' (iid|markov|dirac|mixture|renewal_hoc)");
}

json parse_json_text(std::string_view text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    std::string what = e.what();
    if (const auto pos = what.find("syntax error"); pos != std::string::npos) what = what.substr(pos);
    throw Error(ErrorKind::parse, source + ":" + std::to_string(line) + ":" + std::to_string(column) +
                                      ": " + what);
  }
}

json load_json(const std::filesystem::path& file) {
  return parse_json_text(read_file(file), file.string());
}

Measure parse_measure_text(std::string_view text, const std::string& source) {
  return parse_measure(parse_json_text(text, source));
}

Measure load_measure(const std::filesystem::path& file) {
  const json spec = load_json(file);
  try {
    return parse_measure(spec);
  } catch (const Error& e) {
    throw Error(e.kind(), file.string() + ": " + e.what());
  }
}

json to_json(const Measure& m) {
  json out;
  out["type"] = std::string(to_string(m.kind()));
  if (const auto* iid = m.iid_model()) {
    out["alphabet"] = m.alphabet().labels();
    out["probs"] = iid->probs;
  } else if (const auto* mk = m.markov_model()) {
    out["alphabet"] = m.alphabet().labels();
    out["transition"] = mk->transition.to_rows();
  } else if (const auto* d = m.dirac_model()) {
    if (d->pattern == DiracModel::Pattern::blocks) {
      out["pattern"] = "blocks";
    } else {
      out["alphabet"] = m.alphabet().labels();
      out["pattern"] = {{"periodic", Word(m.alphabet(), d->period).str()}};
    }
  } else if (const auto* mix = m.mixture_model()) {
    out["lambda"] = mix->lambda;
    out["first"] = to_json(mix->first);
    out["second"] = to_json(mix->second);
  } else if (const auto* r = m.renewal_model()) {
    std::vector<double> q(r->q.begin(), r->q.end() - 1);
    while (q.size() > 1 && q.back() == q[q.size() - 2]) q.pop_back();
    out["q"] = q;
    out["y_max"] = r->y_max();
  }
  return out;
}

json to_json(const Rate& r) {
  if (r.infinite) return "inf";
  return r.value;
}

json to_json(const DivergenceSeq& seq) {
  json rows = json::array();
  for (std::size_t k = 1; k <= seq.kmax; ++k) {
    rows.push_back({{"k", k},
                    {"E", seq.value(k)},
                    {"log_E", log_json(seq.log_value(k))},
                    {"rate", to_json(seq.rate(k))},
                    {"method", std::string(to_string(seq.methods[k - 1]))}});
  }
  return {{"kmax", seq.kmax}, {"values", rows}};
}

json to_json(const RateEstimate& est) {
  json out = {{"window", {est.window_lo, est.window_hi}},
              {"liminf_est", to_json(est.liminf_est)},
              {"limsup_est", to_json(est.limsup_est)},
              {"exact_rate", opt_rate(est.exact_rate)}};
  out["provenance"] = est.exact_rate ? json(est.provenance) : json(nullptr);
  return out;
}

json to_json(const DistributionTable& t) {
  json out = {{"n", t.n},
              {"tail", prob_array(t.tail, 0)},
              {"pmf", prob_array(t.pmf, 1)},
              {"log_pmf", log_array(t.pmf, 1)},
              {"avoiding_mass", t.avoiding_mass},
              {"log_avoiding_mass", log_json(safe_log(t.avoiding_mass))},
              {"warnings", t.warnings}};
  json comps = json::array();
  for (std::size_t k = 1; k < t.divergence.size(); ++k) {
    comps.push_back({{"k", k}, {"E", t.divergence[k]}, {"a", t.a_coeff[k]}});
  }
  out["components"] = comps;
  return out;
}

json to_json(const LimitReport& r) {
  return {{"k", r.k},
          {"m_max", r.m_max},
          {"E", r.divergence},
          {"partial_tail", r.partial_tail},
          {"truncation_bound", r.truncation_bound ? json(*r.truncation_bound) : json(nullptr)},
          {"defect_lower_bound", r.defect_lower_bound},
          {"certified", r.certified}};
}

json to_json(const ConcentrationReport& report) {
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"n", r.n},
                    {"samples", r.samples},
                    {"mean", r.mean},
                    {"std_error", r.std_error},
                    {"min", r.min},
                    {"q05", r.q05},
                    {"q25", r.q25},
                    {"median", r.median},
                    {"q75", r.q75},
                    {"q95", r.q95},
                    {"max", r.max},
                    {"frac_below", r.frac_below},
                    {"frac_below_se", r.frac_below_se},
                    {"exact_bound", r.exact_bound ? json(*r.exact_bound) : json(nullptr)}});
  }
  return {{"threshold", report.threshold}, {"rows", rows}, {"warnings", report.warnings}};
}

json to_json(const LdpCurve& curve) {
  json points = json::array();
  for (const auto& p : curve.points) {
    points.push_back({{"epsilon", p.epsilon},
                      {"k", p.k},
                      {"lower_rate", to_json(p.lower_rate)},
                      {"upper_rate", to_json(p.upper_rate)},
                      {"reference", opt_rate(p.reference)}});
  }
  return {{"n", curve.n}, {"rate", opt_rate(curve.rate)}, {"points", points}};
}

json to_json(const NonconvergenceReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"k", row.k},
                    {"hits", row.hits},
                    {"agree", row.agree},
                    {"frequency", row.frequency},
                    {"std_error", row.std_error}});
  }
  return {{"n", r.n},          {"samples", r.samples},     {"E1", r.e1},
          {"p_same", r.p_same}, {"p_same_se", r.p_same_se}, {"p_overlap", r.p_overlap},
          {"rows", rows}};
}

json to_json(const OscillationReport& r) {
  json ends = json::array();
  for (const auto& e : r.block_ends) {
    ends.push_back({{"k", e.k}, {"symbol", e.symbol}, {"rate", to_json(e.rate)}});
  }
  return {{"p", r.p},
          {"estimate", to_json(r.rates.estimate)},
          {"block_ends", ends},
          {"sequence", to_json(r.rates.sequence)}};
}

json to_json(const VwspProfile& p) {
  return {{"n", p.n},
          {"pairs", p.pairs},
          {"not_found", p.not_found},
          {"max_gap", p.max_gap},
          {"worst_omega", p.worst_omega},
          {"worst_xi", p.worst_xi}};
}

Measure measure_ref(const json& value, const std::filesystem::path& base_dir,
                    const std::string& path) {
  if (value.is_string()) {
    std::filesystem::path file = value.get<std::string>();
    if (file.is_relative()) file = base_dir / file;
    return load_measure(file);
  }
  return parse_measure(value, path);
}

ExperimentConfig parse_experiment_config(const json& cfg, const std::filesystem::path& base_dir,
                                         std::initializer_list<std::string_view> extra_keys) {
  require_keys(cfg, "$", {"mu", "nu", "schedule", "samples", "epsilons", "seed", "threshold"},
               extra_keys);
  ExperimentConfig out;
  if (cfg.contains("mu")) out.mu = measure_ref(cfg["mu"], base_dir, "$.mu");
  if (cfg.contains("nu")) out.nu = measure_ref(cfg["nu"], base_dir, "$.nu");
  if (cfg.contains("schedule")) {
    const json& s = cfg["schedule"];
    if (!s.is_array()) fail("$.schedule", "expected an array of lengths");
    for (std::size_t i = 0; i < s.size(); ++i) {
      out.schedule.push_back(count(s[i], "$.schedule[" + std::to_string(i) + "]"));
    }
  }
  if (cfg.contains("samples")) out.samples = count(cfg["samples"], "$.samples");
  if (cfg.contains("epsilons")) out.epsilons = number_array(cfg["epsilons"], "$.epsilons");
  if (cfg.contains("seed")) out.seed = count(cfg["seed"], "$.seed");
  if (cfg.contains("threshold")) out.threshold = number(cfg["threshold"], "$.threshold");
  return out;
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace recur::io
