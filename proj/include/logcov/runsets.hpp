#pragma once

#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "logcov/common.hpp"
#include "logcov/coverage.hpp"
#include "logcov/drain.hpp"
#include "logcov/pipeline.hpp"

namespace logcov {

using ordered_json = nlohmann::ordered_json;

// The mine -> analyze handoff artifact. Self-contained: carries the template
// catalog so coverage and comparison never re-read logs.
struct RunsetsFile {
  std::string space;
  MinerConfig miner;
  bool per_run = false;
  std::map<std::string, std::string> catalog;  // id -> canonical
  std::vector<RunTemplateSet> runs;
  std::map<std::string, std::map<std::string, int>> tests_per_run;

  StrategyCorpus strategy_corpus(const std::string& name) const {
    StrategyCorpus corpus;
    corpus.strategy = name;
    corpus.space = space;
    for (const auto& rs : runs) {
      if (rs.strategy == name) corpus.runs.push_back(rs);
    }
    if (corpus.runs.empty()) throw UsageError("unknown strategy: " + name);
    return corpus;
  }

  std::vector<std::string> strategy_names() const {
    std::vector<std::string> names;
    for (const auto& rs : runs) {
      if (names.empty() || names.back() != rs.strategy) {
        names.push_back(rs.strategy);
      }
    }
    return names;
  }
};

inline ordered_json runsets_to_json(const MineResult& result,
                                    const MinerConfig& miner, bool per_run) {
  ordered_json doc;
  doc["space"] = result.space;
  doc["miner"] = {{"depth", miner.depth},
                  {"sim_threshold", miner.sim_threshold},
                  {"max_children", miner.max_children},
                  {"per_run", per_run}};
  ordered_json catalog = ordered_json::object();
  for (const auto& [id, canon] : result.catalog) catalog[id] = canon;
  doc["templates"] = std::move(catalog);
  ordered_json runs = ordered_json::array();
  for (const auto& rs : result.runsets) {
    ordered_json run;
    run["strategy"] = rs.strategy;
    run["run_id"] = rs.run_id;
    ordered_json per_service = ordered_json::object();
    for (const auto& [service, counts] : rs.per_service) {
      ordered_json c = ordered_json::object();
      for (const auto& [id, n] : counts) c[id] = n;
      per_service[service] = std::move(c);
    }
    run["per_service"] = std::move(per_service);
    runs.push_back(std::move(run));
  }
  doc["runs"] = std::move(runs);
  ordered_json tpr = ordered_json::object();
  for (const auto& [strategy, by_run] : result.tests_per_run) {
    ordered_json m = ordered_json::object();
    for (const auto& [run_id, n] : by_run) m[run_id] = n;
    tpr[strategy] = std::move(m);
  }
  doc["tests_per_run"] = std::move(tpr);
  return doc;
}

inline RunsetsFile load_runsets(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot open runsets file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw CorpusError("runsets file " + path + ": " + e.what());
  }
  RunsetsFile out;
  try {
    out.space = doc.at("space").get<std::string>();
    const auto& miner = doc.at("miner");
    out.miner.depth = miner.at("depth").get<int>();
    out.miner.sim_threshold = miner.at("sim_threshold").get<double>();
    out.miner.max_children = miner.at("max_children").get<int>();
    out.per_run = miner.value("per_run", false);
    for (auto& [id, canon] : doc.at("templates").items()) {
      out.catalog[id] = canon.get<std::string>();
    }
    for (const auto& run : doc.at("runs")) {
      RunTemplateSet rs;
      rs.strategy = run.at("strategy").get<std::string>();
      rs.run_id = run.at("run_id").get<std::string>();
      for (auto& [service, counts] : run.at("per_service").items()) {
        for (auto& [id, n] : counts.items()) {
          rs.per_service[service][id] = n.get<std::uint64_t>();
        }
      }
      out.runs.push_back(std::move(rs));
    }
    if (doc.contains("tests_per_run")) {
      for (auto& [strategy, by_run] : doc.at("tests_per_run").items()) {
        for (auto& [run_id, n] : by_run.items()) {
          out.tests_per_run[strategy][run_id] = n.get<int>();
        }
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw CorpusError("runsets file " + path + ": " + e.what());
  }
  return out;
}

// Template dump: one JSON object per line, fixed key order.
inline std::string templates_to_jsonl(const std::vector<TemplateInfo>& templates) {
  std::string out;
  for (const auto& t : templates) {
    ordered_json line;
    line["id"] = t.id;
    line["service"] = t.service;
    line["template"] = t.canonical();
    line["occurrences"] = t.occurrences;
    ordered_json runs = ordered_json::array();
    for (const auto& [strategy, run_id] : t.runs_seen) {
      runs.push_back(strategy + "/" + run_id);
    }
    line["runs_seen"] = std::move(runs);
    line["services_seen"] = std::vector<std::string>(t.services_seen.begin(),
                                                    t.services_seen.end());
    out += line.dump();
    out += '\n';
  }
  return out;
}

}  // namespace logcov
