#pragma once

#include <algorithm>
#include <array>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "logcov/common.hpp"
#include "logcov/compare.hpp"
#include "logcov/coverage.hpp"
#include "logcov/runsets.hpp"

namespace logcov {

enum class OutputFormat { Table, Json, Csv };

inline std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", round2(v));
  return buf;
}

struct StrategyCoverage {
  std::string strategy;
  std::size_t avg = 0;
  std::size_t min = 0;
  std::size_t max = 0;
  std::map<std::string, double> per_service;
  double templates_per_test = -1.0;  // < 0 when metadata is absent
};

inline StrategyCoverage coverage_summary(const RunsetsFile& file,
                                         const std::string& strategy) {
  StrategyCorpus corpus = file.strategy_corpus(strategy);
  StrategyCoverage out;
  out.strategy = strategy;
  out.avg = avg_lc(corpus, file.catalog).cardinality();
  out.min = min_lc(corpus).cardinality();
  out.max = max_lc(corpus).cardinality();
  out.per_service = per_service_average(corpus);
  auto meta = file.tests_per_run.find(strategy);
  if (meta != file.tests_per_run.end()) {
    out.templates_per_test = templates_per_test(corpus, meta->second);
  }
  return out;
}

// `name: Avg (Min--Max)` lines, one per strategy.
inline std::string render_coverage_table(const std::vector<StrategyCoverage>& rows) {
  std::string out;
  for (const auto& row : rows) {
    out += row.strategy + ": " + std::to_string(row.avg) + " (" +
           std::to_string(row.min) + "--" + std::to_string(row.max) + ")";
    if (row.templates_per_test >= 0) {
      out += "  [templates/test: " + fmt2(row.templates_per_test) + "]";
    }
    out += '\n';
  }
  return out;
}

inline nlohmann::ordered_json coverage_to_json(
    const std::vector<StrategyCoverage>& rows, const RunsetsFile& file) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    StrategyCorpus corpus = file.strategy_corpus(row.strategy);
    for (Level level : {Level::Avg, Level::Min, Level::Max}) {
      CoverageSet set = coverage_at(corpus, level, file.catalog);
      nlohmann::ordered_json entry;
      entry["strategy"] = row.strategy;
      entry["level"] = level_name(level);
      entry["cardinality"] = set.cardinality();
      entry["template_ids"] = std::vector<std::string>(set.templates.begin(),
                                                       set.templates.end());
      if (level == Level::Avg && row.templates_per_test >= 0) {
        entry["templates_per_test"] = round2(row.templates_per_test);
      }
      doc.push_back(std::move(entry));
    }
  }
  return doc;
}

// One row per service, one column per strategy (Table-2 shape).
inline std::string render_per_service_csv(const std::vector<StrategyCoverage>& rows) {
  std::set<std::string> services;
  for (const auto& row : rows) {
    for (const auto& [service, avg] : row.per_service) services.insert(service);
  }
  std::string out = "service";
  for (const auto& row : rows) out += "," + row.strategy;
  out += '\n';
  for (const auto& service : services) {
    out += service;
    for (const auto& row : rows) {
      auto it = row.per_service.find(service);
      out += ",";
      out += fmt2(it == row.per_service.end() ? 0.0 : it->second);
    }
    out += '\n';
  }
  return out;
}

inline std::string render_coverage_csv(const std::vector<StrategyCoverage>& rows) {
  std::string out = "strategy,avg_lc,min_lc,max_lc,templates_per_test\n";
  for (const auto& row : rows) {
    out += row.strategy + "," + std::to_string(row.avg) + "," +
           std::to_string(row.min) + "," + std::to_string(row.max) + ",";
    if (row.templates_per_test >= 0) out += fmt2(row.templates_per_test);
    out += '\n';
  }
  return out;
}

inline nlohmann::ordered_json comparison_to_json(const ComparisonReport& rep) {
  nlohmann::ordered_json doc;
  doc["level"] = level_name(rep.level);
  doc["strategy_a"] = rep.strategy_a;
  doc["strategy_b"] = rep.strategy_b;
  doc["card_a"] = rep.card_a;
  doc["card_b"] = rep.card_b;
  doc["card_intersection"] = rep.card_intersection;
  doc["card_union"] = rep.card_union;
  doc["jaccard_pct"] = rep.jaccard_pct;
  doc["gain_over_a_pct"] = rep.gain_over_a_pct;
  doc["gain_over_b_pct"] = rep.gain_over_b_pct;
  return doc;
}

// Table-3-shaped matrix: metric rows, `Avg (Min--Max)` cells, one column per
// compared pair. Reports must arrive grouped avg/min/max per pair.
inline std::string render_comparison_table(
    const std::vector<std::array<ComparisonReport, 3>>& columns) {
  auto cell = [](const std::string& a, const std::string& mn,
                 const std::string& mx) {
    return a + " (" + mn + "--" + mx + ")";
  };
  std::vector<std::pair<std::string, std::vector<std::string>>> table;
  table.emplace_back("Metric", std::vector<std::string>{});
  std::vector<std::string> headers;
  std::vector<std::vector<std::string>> rows(7);
  const char* labels[7] = {
      "Unique Log Templates (A)", "Unique Log Templates (B)",
      "Intersection of Templates", "Union of Templates",
      "Jaccard Similarity (%)",   "Gain over A (%)",
      "Gain over B (%)"};
  for (const auto& col : columns) {
    const ComparisonReport& avg = col[0];
    const ComparisonReport& mn = col[1];
    const ComparisonReport& mx = col[2];
    headers.push_back(avg.strategy_a + " vs. " + avg.strategy_b);
    auto num = [](std::size_t n) { return std::to_string(n); };
    rows[0].push_back(cell(num(avg.card_a), num(mn.card_a), num(mx.card_a)));
    rows[1].push_back(cell(num(avg.card_b), num(mn.card_b), num(mx.card_b)));
    rows[2].push_back(cell(num(avg.card_intersection), num(mn.card_intersection),
                           num(mx.card_intersection)));
    rows[3].push_back(cell(num(avg.card_union), num(mn.card_union),
                           num(mx.card_union)));
    rows[4].push_back(cell(fmt2(avg.jaccard_pct), fmt2(mn.jaccard_pct),
                           fmt2(mx.jaccard_pct)));
    rows[5].push_back(cell(fmt2(avg.gain_over_a_pct), fmt2(mn.gain_over_a_pct),
                           fmt2(mx.gain_over_a_pct)));
    rows[6].push_back(cell(fmt2(avg.gain_over_b_pct), fmt2(mn.gain_over_b_pct),
                           fmt2(mx.gain_over_b_pct)));
  }

  std::vector<std::size_t> widths;
  widths.push_back(std::string("Intersection of Templates").size());
  for (std::size_t c = 0; c < headers.size(); ++c) {
    std::size_t w = headers[c].size();
    for (const auto& r : rows) w = std::max(w, r[c].size());
    widths.push_back(w);
  }
  auto pad = [](const std::string& s, std::size_t w) {
    return s + std::string(w > s.size() ? w - s.size() : 0, ' ');
  };
  std::string out = pad("Metric", widths[0]);
  for (std::size_t c = 0; c < headers.size(); ++c) {
    out += "  " + pad(headers[c], widths[c + 1]);
  }
  out += '\n';
  for (std::size_t r = 0; r < 7; ++r) {
    out += pad(labels[r], widths[0]);
    for (std::size_t c = 0; c < headers.size(); ++c) {
      out += "  " + pad(rows[r][c], widths[c + 1]);
    }
    out += '\n';
  }
  return out;
}

inline std::string render_comparison_csv(const std::vector<ComparisonReport>& reps) {
  std::string out =
      "level,strategy_a,strategy_b,card_a,card_b,card_intersection,card_union,"
      "jaccard_pct,gain_over_a_pct,gain_over_b_pct\n";
  for (const auto& rep : reps) {
    out += std::string(level_name(rep.level)) + "," + rep.strategy_a + "," +
           rep.strategy_b + "," + std::to_string(rep.card_a) + "," +
           std::to_string(rep.card_b) + "," +
           std::to_string(rep.card_intersection) + "," +
           std::to_string(rep.card_union) + "," + fmt2(rep.jaccard_pct) + "," +
           fmt2(rep.gain_over_a_pct) + "," + fmt2(rep.gain_over_b_pct) + '\n';
  }
  return out;
}

}  // namespace logcov
