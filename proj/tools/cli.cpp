#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "recur/distribution.hpp"
#include "recur/divergence.hpp"
#include "recur/error.hpp"
#include "recur/experiments.hpp"
#include "recur/io.hpp"
#include "recur/overlap.hpp"
#include "recur/version.hpp"

namespace recur::cli {

namespace {

using io::json;
namespace fs = std::filesystem;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::cap_exceeded: return kCapExceeded;
    case ErrorKind::invariant:
    case ErrorKind::degenerate: return kInvariant;
    default: return kUsage;
  }
}

struct Common {
  unsigned workers = 0;
  std::string log_base = "e";
};

struct Context {
  Common common;
  Limits limits;
  double log_scale = 1.0;  // divide natural logs by this for display
  std::ostream& out;
};

double parse_log_base(const std::string& base) {
  if (base == "e") return 1.0;
  if (base == "2") return std::log(2.0);
  if (base == "10") return std::log(10.0);
  throw Error(ErrorKind::usage, "--log-base must be e, 2 or 10");
}

/// Rescales natural-log fields of a report for display.
void rescale_logs(json& node, double scale) {
  static const std::set<std::string> kLogKeys = {
      "log_E",      "rate",       "liminf_est", "limsup_est", "exact_rate",       "lower_rate",
      "upper_rate", "reference",  "log_pmf",    "entropy",    "log_avoiding_mass"};
  if (node.is_object()) {
    for (auto& [key, value] : node.items()) {
      if (kLogKeys.count(key) != 0) {
        if (value.is_number()) {
          value = value.get<double>() / scale;
        } else if (value.is_array()) {
          for (auto& v : value) {
            if (v.is_number()) v = v.get<double>() / scale;
          }
        } else {
          rescale_logs(value, scale);
        }
      } else {
        rescale_logs(value, scale);
      }
    }
  } else if (node.is_array()) {
    for (auto& v : node) rescale_logs(v, scale);
  }
}

json envelope(const Context& ctx, const std::string& command, json config, json result) {
  config["log_base"] = ctx.common.log_base;
  if (ctx.log_scale != 1.0) rescale_logs(result, ctx.log_scale);
  return {{"tool", "recur"},
          {"version", kVersion},
          {"command", command},
          {"config", std::move(config)},
          {"result", std::move(result)}};
}

void emit_json(std::ostream& out, const json& doc) { out << doc.dump(2) << '\n'; }

Alphabet word_alphabet(const std::string& labels, std::initializer_list<std::string_view> texts) {
  if (!labels.empty()) return Alphabet(split_labels(labels));
  std::vector<std::string_view> all(texts);
  return alphabet_of_texts(all);
}

Word truncated(const Word& w, std::optional<std::size_t> n, const char* name) {
  if (!n) return w;
  if (*n == 0) throw Error(ErrorKind::usage, "--n must be at least 1");
  if (w.size() < *n) {
    throw Error(ErrorKind::length_mismatch, std::string(name) + " has " + std::to_string(w.size()) +
                                                " symbols, fewer than --n " + std::to_string(*n));
  }
  return w.prefix(*n);
}

std::string rate_text(const Rate& r, double scale) {
  return r.infinite ? "inf" : io::format_double(r.value / scale);
}

std::string log_text(double v, double scale) {
  return v == kNegInf ? "-inf" : io::format_double(v / scale);
}

void write_report(const json& doc, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    emit_json(out, doc);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorKind::usage, "cannot write '" + path + "'");
  emit_json(file, doc);
}

// ---- subcommands ------------------------------------------------------------

struct PathArgs {
  std::string x, y, alphabet, format = "text";
  std::optional<std::size_t> n;
};

int cmd_path(Context& ctx, const PathArgs& a) {
  const Alphabet alphabet = word_alphabet(a.alphabet, {a.x, a.y});
  const Word x = truncated(Word::parse(alphabet, a.x), a.n, "x");
  const Word y = truncated(Word::parse(alphabet, a.y), a.n, "y");
  const std::size_t t = shortest_path(x, y);
  if (a.format == "json") {
    const auto overlaps = cross_overlaps(x, y);
    emit_json(ctx.out, envelope(ctx, "path", {{"x", x.str()}, {"y", y.str()}, {"n", x.size()}},
                                {{"T", t}, {"overlaps", overlaps.overlaps}}));
  } else {
    ctx.out << t << '\n';
  }
  return kOk;
}

struct ReturnArgs {
  std::string w, alphabet, format = "text";
  std::optional<std::size_t> n;
};

int cmd_return(Context& ctx, const ReturnArgs& a) {
  const Alphabet alphabet = word_alphabet(a.alphabet, {a.w});
  const Word w = truncated(Word::parse(alphabet, a.w), a.n, "w");
  const std::size_t t = shortest_return(w);
  if (a.format == "json") {
    emit_json(ctx.out, envelope(ctx, "return", {{"w", w.str()}, {"n", w.size()}},
                                {{"T", t}, {"borders", border_profile(w).borders}}));
  } else {
    ctx.out << t << '\n';
  }
  return kOk;
}

struct WaitArgs {
  std::string x, stream, stream_file, alphabet, format = "text";
};

int cmd_wait(Context& ctx, WaitArgs a) {
  if (a.stream.empty() == a.stream_file.empty()) {
    throw Error(ErrorKind::usage, "wait: give exactly one of --stream and --stream-file");
  }
  if (!a.stream_file.empty()) {
    std::ifstream in(a.stream_file);
    if (!in) throw Error(ErrorKind::usage, "cannot open '" + a.stream_file + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    a.stream = buf.str();
    while (!a.stream.empty() && std::isspace(static_cast<unsigned char>(a.stream.back()))) a.stream.pop_back();
  }
  const Alphabet alphabet = word_alphabet(a.alphabet, {a.x, a.stream});
  const Word x = Word::parse(alphabet, a.x);
  const Word stream = Word::parse(alphabet, a.stream);
  const auto w = waiting_time(x, stream);
  if (a.format == "json") {
    emit_json(ctx.out, envelope(ctx, "wait", {{"x", x.str()}, {"stream_length", stream.size()}},
                                {{"W", w ? json(*w) : json(nullptr)}, {"found", w.has_value()}}));
  } else {
    ctx.out << (w ? std::to_string(*w) : std::string("not-found")) << '\n';
  }
  return kOk;
}

struct PairArgs {
  std::string mu, nu;
};

struct DivergenceArgs {
  PairArgs pair;
  std::size_t kmax = 10;
  std::string method = "auto";
  std::string format = "csv";
};

json pair_config(const Measure& mu, const Measure& nu) {
  return {{"mu", io::to_json(mu)}, {"nu", io::to_json(nu)}};
}

int cmd_divergence(Context& ctx, const DivergenceArgs& a) {
  const Measure mu = io::load_measure(a.pair.mu);
  const Measure nu = io::load_measure(a.pair.nu);
  const auto seq = divergence_sequence(mu, nu, a.kmax, parse_method(a.method), ctx.limits);
  if (a.format == "json") {
    json cfg = pair_config(mu, nu);
    cfg["kmax"] = a.kmax;
    cfg["method"] = a.method;
    emit_json(ctx.out, envelope(ctx, "divergence", cfg, io::to_json(seq)));
    return kOk;
  }
  ctx.out << "# recur " << kVersion << " divergence kmax=" << a.kmax << " method=" << a.method
          << " log_base=" << ctx.common.log_base << " mu=" << io::to_json(mu).dump()
          << " nu=" << io::to_json(nu).dump() << '\n';
  ctx.out << "k,E_k_log,E_k,rate_k,method\n";
  for (std::size_t k = 1; k <= seq.kmax; ++k) {
    ctx.out << k << ',' << log_text(seq.log_value(k), ctx.log_scale) << ','
            << io::format_double(seq.value(k)) << ',' << rate_text(seq.rate(k), ctx.log_scale) << ','
            << to_string(seq.methods[k - 1]) << '\n';
  }
  return kOk;
}

int cmd_rate(Context& ctx, const DivergenceArgs& a) {
  const Measure mu = io::load_measure(a.pair.mu);
  const Measure nu = io::load_measure(a.pair.nu);
  const auto report = divergence_rate(mu, nu, a.kmax, parse_method(a.method), ctx.limits);
  if (a.format == "text") {
    const auto& e = report.estimate;
    ctx.out << "window " << e.window_lo << ".." << e.window_hi << '\n'
            << "liminf_est " << rate_text(e.liminf_est, ctx.log_scale) << '\n'
            << "limsup_est " << rate_text(e.limsup_est, ctx.log_scale) << '\n'
            << "exact_rate "
            << (e.exact_rate ? rate_text(*e.exact_rate, ctx.log_scale) + " (" + e.provenance + ")"
                             : std::string("unavailable"))
            << '\n';
    return kOk;
  }
  json cfg = pair_config(mu, nu);
  cfg["kmax"] = a.kmax;
  cfg["method"] = a.method;
  emit_json(ctx.out, envelope(ctx, "rate", cfg,
                              {{"estimate", io::to_json(report.estimate)},
                               {"sequence", io::to_json(report.sequence)}}));
  return kOk;
}

struct LawArgs {
  PairArgs pair;
  std::size_t n = 0;
  bool limit = false;
  std::size_t k = 1;
  std::size_t mmax = 12;
  bool oracle = false;
};

int cmd_law(Context& ctx, const LawArgs& a) {
  const Measure mu = io::load_measure(a.pair.mu);
  const Measure nu = io::load_measure(a.pair.nu);
  json cfg = pair_config(mu, nu);
  cfg["n"] = a.n;
  cfg["oracle"] = a.oracle;
  json result;
  if (a.n > 0) {
    const auto table = law_exact(mu, nu, a.n, ctx.limits);
    result["law"] = io::to_json(table);
    if (a.oracle) {
      const auto brute = law_bruteforce(mu, nu, a.n, ctx.limits);
      result["oracle"] = {{"max_discrepancy", max_discrepancy(table, brute)},
                          {"pmf", io::to_json(brute)["pmf"]}};
    }
  } else if (!a.limit) {
    throw Error(ErrorKind::usage, "law: give --n, --limit, or both");
  }
  if (a.limit) {
    cfg["limit"] = {{"k", a.k}, {"mmax", a.mmax}};
    result["limit"] = io::to_json(law_limit(mu, nu, a.k, a.mmax, ctx.limits));
  }
  emit_json(ctx.out, envelope(ctx, "law", cfg, result));
  return kOk;
}

struct AvoidArgs {
  PairArgs pair;
  std::size_t n = 0;
  std::string format = "text";
};

int cmd_avoid(Context& ctx, const AvoidArgs& a) {
  const Measure mu = io::load_measure(a.pair.mu);
  const Measure nu = io::load_measure(a.pair.nu);
  const double p = avoiding_pairs_prob(mu, nu, a.n, ctx.limits);
  if (a.format == "json") {
    json cfg = pair_config(mu, nu);
    cfg["n"] = a.n;
    emit_json(ctx.out, envelope(ctx, "avoid", cfg, {{"avoiding_mass", p}}));
  } else {
    ctx.out << io::format_double(p) << '\n';
  }
  return kOk;
}

struct ExperimentArgs {
  std::string kind;
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
};

std::size_t required_count(const json& cfg, const char* key) {
  if (!cfg.contains(key) || !cfg[key].is_number_unsigned()) {
    throw Error(ErrorKind::parse, std::string("$.") + key + ": expected a non-negative integer");
  }
  return cfg[key].get<std::size_t>();
}

int cmd_experiment(Context& ctx, const ExperimentArgs& a) {
  const json raw = io::load_json(a.config);
  const fs::path base = fs::path(a.config).parent_path();
  json resolved = raw;
  json result;

  auto resolve_pair = [&](ExperimentConfig& cfg) {
    if (a.seed) cfg.seed = *a.seed;
    cfg.validate();
    resolved["mu"] = io::to_json(*cfg.mu);
    resolved["nu"] = io::to_json(*cfg.nu);
    resolved["seed"] = cfg.seed;
  };

  if (a.kind == "concentration") {
    ExperimentConfig cfg = io::parse_experiment_config(raw, base);
    resolve_pair(cfg);
    if (cfg.schedule.empty()) throw Error(ErrorKind::usage, "concentration: schedule is required");
    result = io::to_json(concentration_experiment(cfg, ctx.limits));
  } else if (a.kind == "ldp") {
    ExperimentConfig cfg = io::parse_experiment_config(raw, base, {"n"});
    resolve_pair(cfg);
    std::vector<std::size_t> ns = cfg.schedule;
    if (raw.contains("n")) ns.push_back(required_count(raw, "n"));
    if (ns.empty()) throw Error(ErrorKind::usage, "ldp: give n or schedule");
    json curves = json::array();
    for (std::size_t n : ns) curves.push_back(io::to_json(ldp_curve(*cfg.mu, *cfg.nu, cfg.epsilons, n)));
    result = {{"curves", curves}};
  } else if (a.kind == "nonconv") {
    ExperimentConfig cfg = io::parse_experiment_config(raw, base, {"n"});
    resolve_pair(cfg);
    result = io::to_json(nonconvergence_probe(*cfg.mu, *cfg.nu, required_count(raw, "n"),
                                              cfg.samples, cfg.seed, ctx.limits));
  } else if (a.kind == "oscillation") {
    const ExperimentConfig cfg = io::parse_experiment_config(raw, base, {"p", "kmax"});
    (void)cfg;
    if (!raw.contains("p") || !raw["p"].is_number()) throw Error(ErrorKind::parse, "$.p: expected a number");
    result = io::to_json(rate_oscillation_demo(raw["p"].get<double>(), required_count(raw, "kmax")));
  } else if (a.kind == "vwsp") {
    const ExperimentConfig cfg = io::parse_experiment_config(raw, base, {"measure", "pairs", "n", "g_max"});
    (void)cfg;
    if (!raw.contains("measure")) throw Error(ErrorKind::parse, "$.measure: missing required field");
    const Measure m = io::measure_ref(raw["measure"], base, "$.measure");
    resolved["measure"] = io::to_json(m);
    const std::size_t g_max = required_count(raw, "g_max");
    json pairs = json::array();
    if (raw.contains("pairs")) {
      const json& list = raw["pairs"];
      if (!list.is_array()) throw Error(ErrorKind::parse, "$.pairs: expected an array");
      for (const auto& p : list) {
        if (!p.is_object() || !p.contains("omega") || !p.contains("xi")) {
          throw Error(ErrorKind::parse, "$.pairs: entries need omega and xi");
        }
        const Word omega = Word::parse(m.alphabet(), p["omega"].get<std::string>());
        const Word xi = Word::parse(m.alphabet(), p["xi"].get<std::string>());
        const auto g = vwsp_gap(m, omega, xi, g_max, ctx.limits);
        pairs.push_back({{"omega", omega.str()}, {"xi", xi.str()}, {"gap", g ? json(*g) : json(nullptr)}});
      }
      result["pairs"] = pairs;
    }
    if (raw.contains("n")) {
      result["profile"] = io::to_json(vwsp_profile(m, required_count(raw, "n"), g_max, ctx.limits));
    }
  } else {
    throw Error(ErrorKind::usage, "unknown experiment '" + a.kind +
                                      "' (concentration|ldp|nonconv|oscillation|vwsp)");
  }
  resolved["experiment"] = a.kind;
  write_report(envelope(ctx, "experiment " + a.kind, resolved, result), a.out, ctx.out);
  return kOk;
}

int cmd_validate(Context& ctx, const std::string& file) {
  const Measure m = io::load_measure(file);
  std::ostringstream line;
  line << "ok";
  if (const auto* mk = m.markov_model()) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.0e", mk->stationary_residual);
    line << ", stationary residual " << (mk->stationary_residual == 0.0 ? "0" : buf);
  }
  if (m.kind() == MeasureKind::iid || m.kind() == MeasureKind::markov) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", shannon_entropy(m) / ctx.log_scale);
    line << ", entropy " << buf;
  }
  ctx.out << line.str() << '\n';
  ctx.out << "type " << to_string(m.kind()) << ", alphabet size " << m.alphabet().size() << '\n';
  ctx.out << "complete grammar:";
  for (std::size_t n = 1; n <= 3; ++n) {
    std::string status;
    try {
      status = is_complete_grammar(m, n, ctx.limits) ? "yes" : "no";
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::cap_exceeded) throw;
      status = "unknown";
    }
    ctx.out << " n=" << n << ' ' << status;
  }
  ctx.out << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Recurrence statistics between two stationary symbolic processes", "recur"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));
  Common common;
  app.add_option("--workers", common.workers, "Worker threads (default RECUR_WORKERS or 1)")
      ->check(CLI::PositiveNumber);
  app.add_option("--log-base", common.log_base, "Display base for logarithms: e, 2, 10");

  auto add_pair = [](CLI::App* sub, PairArgs& p) {
    sub->add_option("--mu", p.mu, "Measure spec file for x")->required();
    sub->add_option("--nu", p.nu, "Measure spec file for y")->required();
  };
  const std::vector<std::string> text_json = {"text", "json"};

  PathArgs path_args;
  auto* path = app.add_subcommand("path", "Shortest path T between two words");
  path->add_option("--x", path_args.x)->required();
  path->add_option("--y", path_args.y)->required();
  path->add_option("--n", path_args.n, "Truncate both words to n symbols");
  path->add_option("--alphabet", path_args.alphabet, "Comma-separated symbol labels");
  path->add_option("--format", path_args.format)->check(CLI::IsMember(text_json));

  ReturnArgs return_args;
  auto* ret = app.add_subcommand("return", "Shortest return time of a word");
  ret->add_option("--w", return_args.w)->required();
  ret->add_option("--n", return_args.n);
  ret->add_option("--alphabet", return_args.alphabet);
  ret->add_option("--format", return_args.format)->check(CLI::IsMember(text_json));

  WaitArgs wait_args;
  auto* wait = app.add_subcommand("wait", "Waiting time of x in a stream");
  wait->add_option("--x", wait_args.x)->required();
  wait->add_option("--stream", wait_args.stream);
  wait->add_option("--stream-file", wait_args.stream_file);
  wait->add_option("--alphabet", wait_args.alphabet);
  wait->add_option("--format", wait_args.format)->check(CLI::IsMember(text_json));

  DivergenceArgs div_args;
  auto* div = app.add_subcommand("divergence", "k-divergence E(1..kmax)");
  add_pair(div, div_args.pair);
  div->add_option("--kmax", div_args.kmax)->check(CLI::PositiveNumber);
  div->add_option("--method", div_args.method)->check(CLI::IsMember({"auto", "enum", "closed"}));
  div->add_option("--out", div_args.format)->check(CLI::IsMember({"csv", "json"}));

  DivergenceArgs rate_args;
  rate_args.kmax = 64;
  rate_args.format = "json";
  auto* rate = app.add_subcommand("rate", "Rate sequence and limiting rate");
  add_pair(rate, rate_args.pair);
  rate->add_option("--kmax", rate_args.kmax)->check(CLI::Range(2, 1 << 30));
  rate->add_option("--method", rate_args.method)->check(CLI::IsMember({"auto", "enum", "closed"}));
  rate->add_option("--out", rate_args.format)->check(CLI::IsMember({"json", "text"}));

  LawArgs law_args;
  auto* law = app.add_subcommand("law", "Exact law of n - T");
  add_pair(law, law_args.pair);
  law->add_option("--n", law_args.n);
  law->add_flag("--limit", law_args.limit, "Also report the n -> infinity tail at k");
  law->add_option("--k", law_args.k)->check(CLI::PositiveNumber);
  law->add_option("--mmax", law_args.mmax)->check(CLI::PositiveNumber);
  law->add_flag("--oracle", law_args.oracle, "Compare against brute-force enumeration");

  AvoidArgs avoid_args;
  auto* avoid = app.add_subcommand("avoid", "Avoiding-pairs probability P(T = n)");
  add_pair(avoid, avoid_args.pair);
  avoid->add_option("--n", avoid_args.n)->required()->check(CLI::PositiveNumber);
  avoid->add_option("--out", avoid_args.format)->check(CLI::IsMember(text_json));

  ExperimentArgs exp_args;
  auto* exp = app.add_subcommand("experiment", "Monte Carlo and bound drivers");
  exp->add_option("kind", exp_args.kind, "concentration|ldp|nonconv|oscillation|vwsp")->required();
  exp->add_option("--config", exp_args.config)->required();
  exp->add_option("--seed", exp_args.seed);
  exp->add_option("--out", exp_args.out, "Report path (default stdout)");

  std::string validate_file;
  auto* validate = app.add_subcommand("validate", "Check a measure spec file");
  validate->add_option("file", validate_file)->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error usage: " << e.what() << '\n';
    return kUsage;
  }

  try {
    Context ctx{common, Limits::from_environment(), parse_log_base(common.log_base), out};
    if (common.workers > 0) ctx.limits.workers = common.workers;
    if (path->parsed()) return cmd_path(ctx, path_args);
    if (ret->parsed()) return cmd_return(ctx, return_args);
    if (wait->parsed()) return cmd_wait(ctx, wait_args);
    if (div->parsed()) return cmd_divergence(ctx, div_args);
    if (rate->parsed()) return cmd_rate(ctx, rate_args);
    if (law->parsed()) return cmd_law(ctx, law_args);
    if (avoid->parsed()) return cmd_avoid(ctx, avoid_args);
    if (exp->parsed()) return cmd_experiment(ctx, exp_args);
    if (validate->parsed()) return cmd_validate(ctx, validate_file);
  } catch (const Error& e) {
    err << "error " << to_string(e.kind()) << ": " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error internal: " << e.what() << '\n';
    return kInvariant;
  }
  return kUsage;
}

}  // namespace recur::cli
