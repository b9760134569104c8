// logcov: log-coverage analysis for black-box API test suites.
//
//   logcov mine     --corpus <dir> --out <dir>   parse logs, mine templates
//   logcov coverage --runsets <file>             AvgLC/MinLC/MaxLC per strategy
//   logcov compare  --runsets <file> --a A --b B pairwise complementarity

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>

#include "logcov/logcov.hpp"

namespace fs = std::filesystem;
using namespace logcov;

namespace {

OutputFormat pick_format(const std::string& flag) {
  if (flag == "table") return OutputFormat::Table;
  if (flag == "json") return OutputFormat::Json;
  if (flag == "csv") return OutputFormat::Csv;
  if (!flag.empty()) throw UsageError("unknown format: " + flag);
  return isatty(fileno(stdout)) ? OutputFormat::Table : OutputFormat::Json;
}

bool use_color() {
  return isatty(fileno(stdout)) && std::getenv("LOGCOV_NO_COLOR") == nullptr;
}

void emit(const std::string& text, const std::string& output_path) {
  if (output_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(output_path, std::ios::binary);
  if (!out) throw CorpusError("cannot write output file: " + output_path);
  out << text;
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

struct MineArgs {
  std::string corpus;
  std::string out_dir;
  int depth = 4;
  double sim_threshold = 0.4;
  int max_children = 100;
  std::string masks;
  std::string line_format;
  std::vector<std::string> strategy_formats;  // STRATEGY=PATTERN
  bool per_run = false;
};

int run_mine(const MineArgs& args) {
  CorpusIndex index = discover_corpus(args.corpus);
  print_warnings(index.warnings);
  if (index.strategies.empty()) {
    std::cerr << "error: no strategies found in " << args.corpus << '\n';
    return 2;
  }

  MineOptions opts;
  opts.miner.depth = args.depth;
  opts.miner.sim_threshold = args.sim_threshold;
  opts.miner.max_children = args.max_children;
  opts.miner.validate();
  opts.per_run = args.per_run;
  if (!args.masks.empty()) opts.rules = load_mask_rules(args.masks);
  if (!args.line_format.empty()) {
    opts.line_format = LineFormat::from_pattern(args.line_format);
  }
  for (const auto& spec : args.strategy_formats) {
    auto eq = spec.find('=');
    if (eq == std::string::npos) {
      throw UsageError("--strategy-line-format expects STRATEGY=PATTERN, got: " + spec);
    }
    opts.per_strategy_format.emplace(spec.substr(0, eq),
                                     LineFormat::from_pattern(spec.substr(eq + 1)));
  }

  MineResult result = mine_corpus(std::move(index), opts);
  print_warnings(result.warnings);

  fs::create_directories(args.out_dir);
  const fs::path runsets_path = fs::path(args.out_dir) / "runsets.json";
  const fs::path dump_path = fs::path(args.out_dir) / "templates.jsonl";
  const fs::path runsets_tmp = runsets_path.string() + ".tmp";
  const fs::path dump_tmp = dump_path.string() + ".tmp";
  try {
    {
      std::ofstream out(runsets_tmp, std::ios::binary);
      if (!out) throw CorpusError("cannot write " + runsets_tmp.string());
      out << runsets_to_json(result, opts.miner, opts.per_run).dump(2) << '\n';
    }
    {
      std::ofstream out(dump_tmp, std::ios::binary);
      if (!out) throw CorpusError("cannot write " + dump_tmp.string());
      out << templates_to_jsonl(result.templates);
    }
    fs::rename(runsets_tmp, runsets_path);
    fs::rename(dump_tmp, dump_path);
  } catch (...) {
    std::error_code ec;
    fs::remove(runsets_tmp, ec);
    fs::remove(dump_tmp, ec);
    throw;
  }
  std::cerr << "wrote " << runsets_path.string() << " ("
            << result.catalog.size() << " templates, " << result.runsets.size()
            << " runs)\n";
  return 0;
}

struct CoverageArgs {
  std::string runsets;
  std::string strategy;
  bool per_service = false;
  std::string format;
  std::string output;
};

int run_coverage(const CoverageArgs& args) {
  RunsetsFile file = load_runsets(args.runsets);
  std::vector<std::string> strategies = file.strategy_names();
  if (!args.strategy.empty()) {
    if (std::find(strategies.begin(), strategies.end(), args.strategy) ==
        strategies.end()) {
      std::string known;
      for (const auto& s : strategies) known += (known.empty() ? "" : ", ") + s;
      std::cerr << "error: unknown strategy '" << args.strategy
                << "' (known: " << known << ")\n";
      return 1;
    }
    strategies = {args.strategy};
  }
  std::vector<StrategyCoverage> rows;
  for (const auto& s : strategies) rows.push_back(coverage_summary(file, s));

  const OutputFormat format = pick_format(args.format);
  std::string text;
  if (args.per_service) {
    text = render_per_service_csv(rows);
  } else if (format == OutputFormat::Table) {
    if (use_color()) {
      text = "\033[1mLog coverage: Avg (Min--Max)\033[0m\n";
    }
    text += render_coverage_table(rows);
  } else if (format == OutputFormat::Json) {
    text = coverage_to_json(rows, file).dump(2) + "\n";
  } else {
    text = render_coverage_csv(rows);
  }
  emit(text, args.output);
  return 0;
}

struct CompareArgs {
  std::string runsets;
  std::string a;
  std::string b;
  std::string level = "all";
  std::string format;
  std::string output;
};

int run_compare(const CompareArgs& args) {
  RunsetsFile file = load_runsets(args.runsets);
  if (args.a == args.b) {
    std::cerr << "warning: comparing strategy '" << args.a
              << "' with itself\n";
  }
  StrategyCorpus corpus_a = file.strategy_corpus(args.a);
  StrategyCorpus corpus_b = file.strategy_corpus(args.b);

  std::vector<Level> levels;
  if (args.level == "all") {
    levels = {Level::Avg, Level::Min, Level::Max};
  } else if (args.level == "avg") {
    levels = {Level::Avg};
  } else if (args.level == "min") {
    levels = {Level::Min};
  } else if (args.level == "max") {
    levels = {Level::Max};
  } else {
    throw UsageError("unknown level: " + args.level);
  }

  std::vector<ComparisonReport> reports;
  for (Level level : levels) {
    reports.push_back(compare(corpus_a, corpus_b, level, file.catalog));
  }

  const OutputFormat format = pick_format(args.format);
  std::string text;
  if (format == OutputFormat::Table && reports.size() == 3) {
    text = render_comparison_table({{reports[0], reports[1], reports[2]}});
  } else if (format == OutputFormat::Table) {
    text = render_comparison_csv(reports);
  } else if (format == OutputFormat::Json) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const auto& rep : reports) doc.push_back(comparison_to_json(rep));
    text = doc.dump(2) + "\n";
  } else {
    text = render_comparison_csv(reports);
  }
  emit(text, args.output);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"log-coverage metrics for black-box API test suites"};
  app.require_subcommand(1);

  MineArgs mine_args;
  CLI::App* mine = app.add_subcommand("mine", "mine templates from a log corpus");
  mine->add_option("--corpus", mine_args.corpus, "corpus root directory")->required();
  mine->add_option("--out", mine_args.out_dir, "output directory")->required();
  mine->add_option("--depth", mine_args.depth, "parse-tree depth (>= 3)");
  mine->add_option("--sim-threshold", mine_args.sim_threshold,
                   "merge similarity threshold in (0, 1]");
  mine->add_option("--max-children", mine_args.max_children,
                   "max named children per tree node");
  mine->add_option("--masks", mine_args.masks, "custom mask rules (JSON)");
  mine->add_option("--line-format", mine_args.line_format,
                   "line pattern with (?<level>...)/(?<message>...) groups");
  mine->add_option("--strategy-line-format", mine_args.strategy_formats,
                   "per-strategy override, STRATEGY=PATTERN");
  mine->add_flag("--per-run", mine_args.per_run,
                 "mine each run independently, unify templates by string equality");

  CoverageArgs cov_args;
  CLI::App* coverage = app.add_subcommand("coverage", "AvgLC/MinLC/MaxLC per strategy");
  coverage->add_option("--runsets", cov_args.runsets, "runsets.json from mine")->required();
  coverage->add_option("--strategy", cov_args.strategy, "restrict to one strategy");
  coverage->add_flag("--per-service", cov_args.per_service,
                     "per-service average table (CSV)");
  coverage->add_option("--format", cov_args.format, "table|json|csv");
  coverage->add_option("--out", cov_args.output, "write report to file");

  CompareArgs cmp_args;
  CLI::App* cmp = app.add_subcommand("compare", "pairwise strategy comparison");
  cmp->add_option("--runsets", cmp_args.runsets, "runsets.json from mine")->required();
  cmp->add_option("--a", cmp_args.a, "first strategy")->required();
  cmp->add_option("--b", cmp_args.b, "second strategy")->required();
  cmp->add_option("--level", cmp_args.level, "avg|min|max|all");
  cmp->add_option("--format", cmp_args.format, "table|json|csv");
  cmp->add_option("--out", cmp_args.output, "write report to file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (mine->parsed()) return run_mine(mine_args);
    if (coverage->parsed()) return run_coverage(cov_args);
    if (cmp->parsed()) return run_compare(cmp_args);
    return 1;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const CorpusError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
}
