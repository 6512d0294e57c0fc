// SPDX-FileCopyrightText: © 2026 The GEM Activations Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gem/gem.hpp"

namespace gem::cli {

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kUsage = 2 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string full_precision(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline ActivationSpec spec_or_usage(const std::string& text) {
  try {
    return parse_spec(text);
  } catch (const SpecParseError& e) {
    throw UsageError(e.what());
  }
}

/// Splits "a;b;c" so that specs containing commas can share one flag value.
inline std::vector<std::string> split_specs(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  for (const auto& item : raw) {
    std::string_view rest = item;
    while (!rest.empty()) {
      const auto semi = rest.find(';');
      if (auto piece = rest.substr(0, semi); !piece.empty()) out.emplace_back(piece);
      rest = semi == std::string_view::npos ? std::string_view{} : rest.substr(semi + 1);
    }
  }
  return out;
}

/// Opens `path` for writing, or falls back to `fallback` when the path is empty.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : out_(&fallback) {
    if (path.empty()) return;
    file_.open(path, std::ios::binary);
    if (!file_) throw UsageError("cannot open '" + path + "' for writing");
    out_ = &file_;
  }
  std::ostream& stream() { return *out_; }
  void finish(const std::string& path) {
    out_->flush();
    if (!*out_) throw UsageError("failed writing '" + (path.empty() ? std::string("stdout") : path) + "'");
  }

 private:
  std::ofstream file_;
  std::ostream* out_;
};

struct EvalArgs {
  std::string act;
  std::vector<double> xs;
  bool grad = false;
  bool second = false;
};

inline int cmd_eval(const EvalArgs& a, std::ostream& out) {
  const ActivationSpec spec = spec_or_usage(a.act);
  out << "x,f" << (a.grad ? ",grad" : "") << (a.second ? ",second" : "") << '\n';
  for (double x : a.xs) {
    out << full_precision(x) << ',' << full_precision(activate(x, spec));
    if (a.grad) out << ',' << full_precision(activate_grad(x, spec));
    if (a.second) out << ',' << full_precision(activate_second(x, spec));
    out << '\n';
  }
  return kOk;
}

struct TableArgs {
  std::vector<std::string> acts;
  double xmin = -3;
  double xmax = 3;
  std::size_t steps = 601;
  std::string out;
};

inline int cmd_table(const TableArgs& a, std::ostream& stdout_stream) {
  if (!(a.xmin < a.xmax)) throw UsageError("--xmin must be smaller than --xmax");
  if (a.steps < 2) throw UsageError("--steps must be at least 2");
  std::vector<ActivationSpec> specs;
  for (const auto& s : split_specs(a.acts)) specs.push_back(spec_or_usage(s));
  if (specs.empty()) throw UsageError("--acts needs at least one activation");

  Sink sink(a.out, stdout_stream);
  auto& out = sink.stream();
  out << 'x';
  for (const auto& s : specs) {
    const std::string name = format_spec(s);
    out << ',' << csv::field(name) << ',' << csv::field(name + "_grad");
  }
  out << '\n';
  const double span = a.xmax - a.xmin;
  const auto last = static_cast<double>(a.steps - 1);
  for (std::size_t i = 0; i < a.steps; ++i) {
    const double x = i + 1 == a.steps ? a.xmax : a.xmin + span * (static_cast<double>(i) / last);
    out << csv::number(x);
    for (const auto& s : specs) out << ',' << csv::number(activate(x, s)) << ',' << csv::number(activate_grad(x, s));
    out << '\n';
  }
  sink.finish(a.out);
  return kOk;
}

struct VerifyArgs {
  std::string suite;
  std::string report;
};

inline int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  std::vector<verify::CheckRow> rows;
  try {
    rows = verify::run_suite(a.suite);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (!a.report.empty()) {
    Sink sink(a.report, out);
    verify::write_report(sink.stream(), rows);
    sink.finish(a.report);
  }
  std::size_t failed = 0;
  for (const auto& r : rows) failed += r.pass ? 0 : 1;
  if (failed > 0) {
    out << verify::report_header() << '\n';
    for (const auto& r : rows) {
      if (!r.pass) out << verify::to_csv_row(r) << '\n';
    }
  }
  out << "# suite " << a.suite << ": " << rows.size() - failed << '/' << rows.size() << " checks passed\n";
  return failed == 0 ? kOk : kVerificationFailed;
}

struct BenchArgs {
  std::vector<std::string> acts;
  std::uint64_t elements = std::uint64_t{1} << 24;
  std::uint64_t iters = 5;
  std::string precision = "double";
  unsigned threads = 1;
  std::uint64_t seed = BenchOptions{}.seed;
};

inline int cmd_bench(const BenchArgs& a, std::ostream& out) {
  std::vector<ActivationSpec> specs;
  for (const auto& s : split_specs(a.acts)) specs.push_back(spec_or_usage(s));
  const Precision precision = a.precision == "single" ? Precision::Single : Precision::Double;
  BenchOptions options;
  options.seed = a.seed;
  options.threads = a.threads;
  std::vector<BenchReport> reports;
  try {
    for (const auto& s : specs) reports.push_back(bench(s, a.elements, a.iters, precision, options));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  out << "# erf: " << kErfSource << '\n' << bench_csv_header() << '\n';
  for (const auto& r : reports) out << to_csv_row(r) << '\n';
  return kOk;
}

struct TrainArgs {
  std::string config;
  std::vector<std::string> sets;
  std::string out;
};

inline int cmd_train(const TrainArgs& a, std::ostream& stdout_stream, std::ostream& err) {
  nn::ExperimentConfig cfg;
  try {
    std::string text;
    if (!a.config.empty()) {
      std::ifstream in(a.config);
      if (!in) throw UsageError("cannot read config '" + a.config + "'");
      std::ostringstream buf;
      buf << in.rdbuf();
      text = buf.str();
    }
    for (const auto& s : a.sets) text += '\n' + s;
    cfg = nn::parse_experiment_config(text);
  } catch (const nn::ConfigError& e) {
    throw UsageError(e.what());
  }

  nn::TrainReport report;
  try {
    report = nn::run_experiment(cfg);
  } catch (const nn::IdxError& e) {
    throw UsageError(e.what());
  } catch (const nn::ConfigError& e) {
    throw UsageError(e.what());
  }
  Sink sink(a.out, stdout_stream);
  nn::write_train_csv(sink.stream(), report);
  sink.finish(a.out);
  const auto& last = report.final_row();
  if (report.diverged) {
    err << "diverged at epoch " << report.diverged_epoch << " (non-finite loss or parameters)\n";
  } else {
    err << "final epoch " << last.epoch << ": train_loss=" << csv::number(last.train_loss)
        << " train_acc=" << csv::number(last.train_acc) << " val_acc=" << csv::number(last.val_acc) << '\n';
  }
  return kOk;
}

struct ProbeArgs {
  std::vector<int> ns;
  std::vector<std::size_t> depths;
  std::size_t samples = 100000;
  std::uint64_t seed = 7;
};

inline int cmd_probe(const ProbeArgs& a, std::ostream& out) {
  if (a.samples < 1000) throw UsageError("--samples must be at least 1000");
  std::vector<nn::SuppressionProbeResult> rows;
  try {
    for (int n : a.ns) {
      for (std::size_t d : a.depths) rows.push_back(nn::suppression_probe(SmoothnessOrder(n), d, a.samples, a.seed));
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  out << nn::probe_csv_header() << '\n';
  for (const auto& r : rows) out << nn::to_csv_row(r) << '\n';
  return kOk;
}

/// Parses argv and dispatches to one subcommand. Returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"GEM activation toolkit: evaluation, curve tables, verification, benchmarks, training, probes",
               "gem"};
  app.require_subcommand(1, 1);

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate an activation at points");
  eval_cmd->add_option("--act", eval.act, "Activation spec, e.g. gem:n=1 or segem:n=1,eps=1")->required();
  eval_cmd->add_option("--x", eval.xs, "Points, comma separated")->required()->delimiter(',');
  eval_cmd->add_flag("--grad", eval.grad, "Also print f'(x)");
  eval_cmd->add_flag("--second", eval.second, "Also print f''(x)");

  TableArgs table;
  auto* table_cmd = app.add_subcommand("table", "Write a curve table (value and derivative) as CSV");
  table_cmd->add_option("--acts", table.acts, "Activation specs, space or ';' separated")->required();
  table_cmd->add_option("--xmin", table.xmin, "Left end of the grid");
  table_cmd->add_option("--xmax", table.xmax, "Right end of the grid");
  table_cmd->add_option("--steps", table.steps, "Grid points including both ends");
  table_cmd->add_option("--out", table.out, "Output file (default stdout)");

  VerifyArgs ver;
  auto* verify_cmd = app.add_subcommand("verify", "Run an oracle verification suite");
  verify_cmd->add_option("--suite", ver.suite, "core | distances | smoothness | all")->required();
  verify_cmd->add_option("--report", ver.report, "Write the full CSV report here");

  BenchArgs bch;
  auto* bench_cmd = app.add_subcommand("bench", "Time the forward kernel");
  bench_cmd->add_option("--act", bch.acts, "Activation specs, space or ';' separated")->required();
  bench_cmd->add_option("--elements", bch.elements, "Buffer length");
  bench_cmd->add_option("--iters", bch.iters, "Timed passes (at least 3)");
  bench_cmd->add_option("--precision", bch.precision, "single | double")
      ->check(CLI::IsMember({"single", "double"}));
  bench_cmd->add_option("--threads", bch.threads, "Worker threads")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seed", bch.seed, "Input buffer seed");

  TrainArgs trn;
  auto* train_cmd = app.add_subcommand("train", "Train an MLP and write the per-epoch CSV");
  train_cmd->add_option("--config", trn.config, "key=value config file");
  train_cmd->add_option("--set", trn.sets, "Extra key=value setting (repeatable, applied after --config)");
  train_cmd->add_option("--out", trn.out, "Output CSV (default stdout)");

  ProbeArgs prb;
  auto* probe_cmd = app.add_subcommand("probe", "Depth-compounded gradient-suppression probe");
  probe_cmd->add_option("--n", prb.ns, "Smoothness orders, comma separated")->required()->delimiter(',');
  probe_cmd->add_option("--depth", prb.depths, "Depths, comma separated")->required()->delimiter(',');
  probe_cmd->add_option("--samples", prb.samples, "Draws per layer (at least 1000)");
  probe_cmd->add_option("--seed", prb.seed, "Sampler seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run 'gem --help' for usage\n";
    return kUsage;
  }

  try {
    if (*eval_cmd) return cmd_eval(eval, out);
    if (*table_cmd) return cmd_table(table, out);
    if (*verify_cmd) return cmd_verify(ver, out);
    if (*bench_cmd) return cmd_bench(bch, out);
    if (*train_cmd) return cmd_train(trn, out, err);
    if (*probe_cmd) return cmd_probe(prb, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace gem::cli
