#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <unistd.h>

#include "cvdiscord/channels.hpp"
#include "cvdiscord/discord.hpp"
#include "cvdiscord/homodyne.hpp"
#include "cvdiscord/serialize.hpp"

namespace cvdiscord::cli {

namespace {

enum class Format { Csv, Json };

struct RunConfig {
  std::string command;
  std::string input_path;
  std::string output_path;
  std::string units_text = "snl";
  std::string format_text;
  std::uint64_t seed = 1;

  std::string state_text;
  std::string record_text;
  std::string eta_text;
  double overlap = 0.9;
  std::int64_t samples = 100000;
  int phases = 64;
  double rf = 0.0;
  std::string trace_prefix;
  int n_states = 100;
  bool vacuum = false;
  int grid = 64;

  UnitConvention units() const { return parse_units(units_text); }
  Format format(Format fallback) const {
    if (format_text.empty()) return fallback;
    if (format_text == "csv") return Format::Csv;
    if (format_text == "json") return Format::Json;
    throw Error(ErrorKind::ParseError, "format must be 'csv' or 'json', got '" + format_text + "'");
  }
};

std::vector<double> parse_list(const std::string& text, std::string_view field) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) values.push_back(parse_double(item, field));
  if (values.empty()) throw Error(ErrorKind::ParseError, "field '" + std::string(field) + "': empty list");
  return values;
}

// `--state n,m,c1,c2` in the configured units, returned in Half units.
StandardForm parse_state(const RunConfig& cfg) {
  if (cfg.state_text.empty()) throw Error(ErrorKind::ParseError, "missing --state n,m,c1,c2");
  std::vector<std::string> parts;
  std::stringstream ss(cfg.state_text);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(item);
  if (parts.size() != 4) {
    throw Error(ErrorKind::ParseError, "field 'state': expected 4 comma-separated values n,m,c1,c2");
  }
  static constexpr std::array<const char*, 4> names = {"n", "m", "c1", "c2"};
  std::array<double, 4> v{};
  for (std::size_t i = 0; i < 4; ++i) v[i] = parse_double(parts[i], names[i]);
  for (std::size_t i = 0; i < 4; ++i) {
    if (v[i] < 0.0 || (i < 2 && v[i] == 0.0)) {
      throw Error(ErrorKind::ParseError, std::string("field '") + names[i] + "': must be " +
                                             (i < 2 ? "positive" : "non-negative"));
    }
  }
  return convert_units(StandardForm{v[0], v[1], v[2], v[3]}, cfg.units(), UnitConvention::Half);
}

void write_output(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.output_path.empty()) {
    out << text;
    return;
  }
  const std::filesystem::path target(cfg.output_path);
  std::filesystem::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write " + tmp.string());
    f << text;
    if (!f.flush()) throw Error(ErrorKind::InvalidArgument, "cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

void write_file(const std::string& path, const std::string& text) {
  RunConfig cfg;
  cfg.output_path = path;
  std::ostringstream unused;
  write_output(cfg, text, unused);
}

std::string report_csv(double key, const CorrelationReport& r) {
  return std::string(kSweepCsvHeader) + "\n" + sweep_csv_row(key, r) + "\n";
}

int cmd_report(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.state_text.empty() == cfg.record_text.empty()) {
    throw Error(ErrorKind::ParseError, "report needs exactly one of --state or --record");
  }
  StandardForm sf;
  double key = 0.0;
  if (!cfg.state_text.empty()) {
    sf = parse_state(cfg);
  } else {
    const VarianceRecord record = parse_variance_row(cfg.record_text);
    key = record.rf_frequency;
    const Reconstruction rec = extract_standard_form(record);
    for (const auto& w : rec.warnings) err << "warning: " << w << '\n';
    sf = rec.state;
  }
  const CorrelationReport report = correlation_report(sf);
  const std::string text = cfg.format(Format::Json) == Format::Json
                               ? dump_json(report_to_json(report, cfg.units()))
                               : report_csv(key, report);
  write_output(cfg, text, out);
  return kOk;
}

int cmd_sweep_loss(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const StandardForm sf = parse_state(cfg);
  const std::vector<double> etas = cfg.eta_text.empty() ? transmission_grid(21) : parse_list(cfg.eta_text, "eta");
  const AttenuationSweep sweep = run_attenuation_sweep(sf, etas);
  std::ostringstream text;
  if (cfg.format(Format::Csv) == Format::Csv) {
    write_sweep_csv(text, sweep);
  } else {
    text << dump_json(sweep_to_json(sweep, cfg.units()));
  }
  write_output(cfg, text.str(), out);
  return kOk;
}

int cmd_sweep_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.input_path.empty()) throw Error(ErrorKind::ParseError, "missing --input");
  std::ifstream in(cfg.input_path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + cfg.input_path);
  const VarianceTable table = read_variance_csv(in);
  for (const auto& e : table.errors) err << "skipped " << e << '\n';
  const SpectrumSweep sweep = run_spectrum_sweep(table.records);
  for (const auto& s : sweep.skipped) err << "skipped " << s << '\n';
  for (const auto& row : sweep.rows) {
    for (const auto& w : row.warnings) err << "warning: rf " << format_number(row.rf_frequency) << " Hz: " << w << '\n';
  }
  if (sweep.rows.empty()) throw Error(ErrorKind::ParseError, "no usable records in " + cfg.input_path);

  std::ostringstream text;
  if (cfg.format(Format::Csv) == Format::Csv) {
    write_sweep_csv(text, sweep);
  } else {
    text << dump_json(sweep_to_json(sweep, cfg.units()));
  }
  write_output(cfg, text.str(), out);
  return kOk;
}

int cmd_subchannels(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const StandardForm sf = parse_state(cfg);
  const SubchannelSet set = build_subchannels(sf, cfg.overlap);
  const std::array<std::pair<const char*, std::pair<SubchannelPair, SubchannelPair>>, 2> pairings = {{
      {"matched", {{Region::II, Region::III}, {Region::I, Region::IV}}},
      {"mismatched", {{Region::II, Region::IV}, {Region::I, Region::III}}},
  }};

  std::ostringstream text;
  if (cfg.format(Format::Csv) == Format::Csv) {
    text << "pairing,pair_a,pair_b,discord_a,discord_b,sub_sum,total_discord,classification\n";
    for (const auto& [name, pp] : pairings) {
      const AdditivityVerdict v = classify_additivity(set, pp.first, pp.second);
      text << name << ',' << v.pair_a.label() << ',' << v.pair_b.label() << ',' << format_number(v.discord_a)
           << ',' << format_number(v.discord_b) << ',' << format_number(v.sub_sum) << ','
           << format_number(v.total_discord) << ',' << to_string(v.classification) << '\n';
    }
  } else {
    nlohmann::json j;
    j["overlap"] = round_significant(set.overlap);
    j["total"] = report_to_json(correlation_report(set.total_state), cfg.units());
    for (const auto& [pair, state] : set.states) {
      j["pairs"][pair.label()] = report_to_json(correlation_report(state), cfg.units());
    }
    for (const auto& [name, pp] : pairings) {
      j["verdicts"][name] = verdict_to_json(classify_additivity(set, pp.first, pp.second));
    }
    text << dump_json(j);
  }
  write_output(cfg, text.str(), out);
  return kOk;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const StandardForm sf = parse_state(cfg);
  const DualHomodyneRun run = simulate_dual_homodyne(sf, cfg.samples, uniform_phases(cfg.phases), cfg.seed, cfg.rf);
  if (!cfg.trace_prefix.empty()) {
    std::ostringstream sum, diff;
    write_trace_csv(sum, run.sum);
    write_trace_csv(diff, run.difference);
    write_file(cfg.trace_prefix + "_sum.csv", sum.str());
    write_file(cfg.trace_prefix + "_difference.csv", diff.str());
  }
  std::ostringstream text;
  if (cfg.format(Format::Csv) == Format::Csv) {
    write_variance_csv(text, {run.record});
  } else {
    const Reconstruction rec = extract_standard_form(run.record);
    for (const auto& w : rec.warnings) err << "warning: " << w << '\n';
    nlohmann::json j;
    j["seed"] = cfg.seed;
    j["record"] = record_to_json(run.record);
    j["reconstruction"] = state_to_json(rec.state, cfg.units());
    j["report"] = report_to_json(correlation_report(rec.state), cfg.units());
    text << dump_json(j);
  }
  write_output(cfg, text.str(), out);
  return kOk;
}

int cmd_oracle_check(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  if (cfg.n_states < 1) throw Error(ErrorKind::ParseError, "field 'n-states': must be >= 1");
  std::mt19937_64 rng(cfg.seed);
  const OracleGrid grid{8.0, cfg.grid, cfg.grid};
  double max_diff = 0.0;
  int first = 0, second = 0;
  for (int i = 0; i < cfg.n_states; ++i) {
    const StandardForm sf = cfg.vacuum ? StandardForm::vacuum() : random_physical_state(rng);
    const EminResult closed = e_min(symplectic_data(sf));
    const double oracle = brute_force_e_min(sf, grid);
    max_diff = std::max(max_diff, std::abs(closed.value - oracle));
    (closed.branch == EminBranch::First ? first : second) += 1;
  }
  const bool pass = max_diff <= 1e-4;

  std::ostringstream text;
  if (cfg.format(Format::Csv) == Format::Csv) {
    text << "metric,value\n"
         << "n_states," << cfg.n_states << '\n'
         << "seed," << cfg.seed << '\n'
         << "max_abs_diff," << format_number(max_diff) << '\n'
         << "first_branch," << first << '\n'
         << "second_branch," << second << '\n'
         << "tolerance,0.0001\n"
         << "pass," << (pass ? "true" : "false") << '\n';
  } else {
    text << dump_json({{"n_states", cfg.n_states},
                       {"seed", cfg.seed},
                       {"max_abs_diff", round_significant(max_diff)},
                       {"first_branch", first},
                       {"second_branch", second},
                       {"tolerance", 1e-4},
                       {"pass", pass}});
  }
  write_output(cfg, text.str(), out);
  return pass ? kOk : kCheckFailed;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnphysicalState:
    case ErrorKind::UnphysicalReconstruction:
    case ErrorKind::ComplexEigenvalue:
      return kUnphysical;
    default:
      return kInputError;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Gaussian quantum discord for two-mode states"};
  app.require_subcommand(1);

  const auto common = [&cfg](CLI::App* sub) {
    sub->add_option("--units", cfg.units_text, "snl (vacuum = 1, default) or half (vacuum = 1/2)");
    sub->add_option("-o,--output", cfg.output_path, "write result to this file (atomic)");
    sub->add_option("--format", cfg.format_text, "csv or json");
    sub->add_option("--seed", cfg.seed, "random seed (DISCORD_SEED overrides)");
  };

  auto* report = app.add_subcommand("report", "correlation report for one state");
  common(report);
  report->add_option("--state", cfg.state_text, "n,m,c1,c2");
  report->add_option("--record", cfg.record_text, "one variance CSV row");

  auto* loss = app.add_subcommand("sweep-loss", "symmetric attenuation sweep");
  common(loss);
  loss->add_option("--state", cfg.state_text, "n,m,c1,c2")->required();
  loss->add_option("--eta", cfg.eta_text, "increasing transmissions, comma separated (default 0,0.05,...,1)");

  auto* spectrum = app.add_subcommand("sweep-spectrum", "per-frequency correlations from variance records");
  common(spectrum);
  spectrum->add_option("-i,--input", cfg.input_path, "variance CSV")->required();

  auto* sub = app.add_subcommand("subchannels", "two-pair spatial subchannel additivity");
  common(sub);
  sub->add_option("--state", cfg.state_text, "n,m,c1,c2")->required();
  sub->add_option("--overlap", cfg.overlap, "mode overlap of matched halves in [0, 1]");

  auto* simulate = app.add_subcommand("simulate", "simulate phase-scanned dual homodyne detection");
  common(simulate);
  simulate->add_option("--state", cfg.state_text, "n,m,c1,c2")->required();
  simulate->add_option("--samples", cfg.samples, "samples per phase point");
  simulate->add_option("--phases", cfg.phases, "phase points over [0, 2 pi)");
  simulate->add_option("--rf", cfg.rf, "RF frequency label, Hz");
  simulate->add_option("--trace-prefix", cfg.trace_prefix, "also write PREFIX_sum.csv and PREFIX_difference.csv");

  auto* oracle = app.add_subcommand("oracle-check", "compare closed-form E_min with brute-force minimisation");
  common(oracle);
  oracle->add_option("--n-states", cfg.n_states, "number of random states");
  oracle->add_flag("--vacuum", cfg.vacuum, "use the vacuum for every sample");
  oracle->add_option("--grid", cfg.grid, "grid points per axis (>= 64)");

  std::vector<std::string> reversed(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
  std::reverse(reversed.begin(), reversed.end());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (const char* env = std::getenv("DISCORD_SEED"); env != nullptr && *env != '\0') {
      const std::string_view text(env);
      std::uint64_t v = 0;
      const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
      if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw Error(ErrorKind::ParseError, "DISCORD_SEED must be a non-negative integer");
      }
      cfg.seed = v;
    }
    cfg.units();
    if (report->parsed()) return cmd_report(cfg, out, err);
    if (loss->parsed()) return cmd_sweep_loss(cfg, out, err);
    if (spectrum->parsed()) return cmd_sweep_spectrum(cfg, out, err);
    if (sub->parsed()) return cmd_subchannels(cfg, out, err);
    if (simulate->parsed()) return cmd_simulate(cfg, out, err);
    if (oracle->parsed()) return cmd_oracle_check(cfg, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace cvdiscord::cli
