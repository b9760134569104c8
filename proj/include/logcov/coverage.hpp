#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "logcov/common.hpp"

namespace logcov {

enum class Level { Avg, Min, Max };

inline const char* level_name(Level level) {
  switch (level) {
    case Level::Avg: return "avg";
    case Level::Min: return "min";
    case Level::Max: return "max";
  }
  return "?";
}

// Template identities observed in one test run, split per service.
struct RunTemplateSet {
  std::string strategy;
  std::string run_id;
  std::map<std::string, std::map<std::string, std::uint64_t>> per_service;

  std::set<std::string> templates() const {
    std::set<std::string> out;
    for (const auto& [service, counts] : per_service) {
      for (const auto& [id, n] : counts) out.insert(id);
    }
    return out;
  }

  std::map<std::string, std::uint64_t> counts() const {
    std::map<std::string, std::uint64_t> out;
    for (const auto& [service, counts] : per_service) {
      for (const auto& [id, n] : counts) out[id] += n;
    }
    return out;
  }
};

struct StrategyCorpus {
  std::string strategy;
  std::vector<RunTemplateSet> runs;
  std::string space;  // mining-space fingerprint; comparisons require equality
};

struct CoverageSet {
  Level level = Level::Avg;
  std::string strategy;
  std::set<std::string> templates;

  std::size_t cardinality() const { return templates.size(); }
};

namespace detail {
inline void require_runs(const StrategyCorpus& corpus) {
  if (corpus.runs.empty()) {
    throw UsageError("strategy '" + corpus.strategy + "' has no runs");
  }
}
}  // namespace detail

// Intersection across all runs: behavior the strategy exercises every time.
inline CoverageSet min_lc(const StrategyCorpus& corpus) {
  detail::require_runs(corpus);
  std::set<std::string> acc = corpus.runs.front().templates();
  for (std::size_t i = 1; i < corpus.runs.size(); ++i) {
    std::set<std::string> next = corpus.runs[i].templates();
    std::set<std::string> tmp;
    std::set_intersection(acc.begin(), acc.end(), next.begin(), next.end(),
                          std::inserter(tmp, tmp.begin()));
    acc = std::move(tmp);
  }
  return {Level::Min, corpus.strategy, std::move(acc)};
}

// Union across all runs: everything the strategy was ever seen to exercise.
inline CoverageSet max_lc(const StrategyCorpus& corpus) {
  detail::require_runs(corpus);
  std::set<std::string> acc;
  for (const auto& run : corpus.runs) {
    auto t = run.templates();
    acc.insert(t.begin(), t.end());
  }
  return {Level::Max, corpus.strategy, std::move(acc)};
}

// k = round-half-up mean of per-run unique-template counts.
inline std::size_t avg_k(const StrategyCorpus& corpus) {
  detail::require_runs(corpus);
  std::size_t sum = 0;
  for (const auto& run : corpus.runs) sum += run.templates().size();
  const std::size_t n = corpus.runs.size();
  return (2 * sum + n) / (2 * n);
}

// Top-k templates ranked by (runs containing it desc, total occurrences desc,
// canonical string asc). `canonical_of` maps template ids to canonical
// strings; ids without an entry fall back to the id itself.
inline CoverageSet avg_lc(const StrategyCorpus& corpus,
                          const std::map<std::string, std::string>& canonical_of) {
  detail::require_runs(corpus);
  struct Ranked {
    std::size_t run_count = 0;
    std::uint64_t occurrences = 0;
  };
  std::map<std::string, Ranked> stats;
  for (const auto& run : corpus.runs) {
    for (const auto& [id, n] : run.counts()) {
      Ranked& r = stats[id];
      ++r.run_count;
      r.occurrences += n;
    }
  }
  std::vector<std::pair<std::string, Ranked>> order(stats.begin(), stats.end());
  std::sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
    if (a.second.run_count != b.second.run_count) {
      return a.second.run_count > b.second.run_count;
    }
    if (a.second.occurrences != b.second.occurrences) {
      return a.second.occurrences > b.second.occurrences;
    }
    auto canon = [&](const std::string& id) -> const std::string& {
      auto it = canonical_of.find(id);
      return it == canonical_of.end() ? id : it->second;
    };
    return canon(a.first) < canon(b.first);
  });
  const std::size_t k = std::min(avg_k(corpus), order.size());
  CoverageSet out{Level::Avg, corpus.strategy, {}};
  for (std::size_t i = 0; i < k; ++i) out.templates.insert(order[i].first);
  return out;
}

inline CoverageSet coverage_at(const StrategyCorpus& corpus, Level level,
                               const std::map<std::string, std::string>& canonical_of) {
  switch (level) {
    case Level::Min: return min_lc(corpus);
    case Level::Max: return max_lc(corpus);
    case Level::Avg: return avg_lc(corpus, canonical_of);
  }
  throw InternalError("coverage_at: bad level");
}

// Mean per-run unique-template count per service. Runs where the service is
// absent contribute 0. `services` fixes the row set; defaults to the union of
// services observed in the corpus.
inline std::map<std::string, double> per_service_average(
    const StrategyCorpus& corpus, const std::set<std::string>& services = {}) {
  detail::require_runs(corpus);
  std::set<std::string> all = services;
  if (all.empty()) {
    for (const auto& run : corpus.runs) {
      for (const auto& [service, counts] : run.per_service) all.insert(service);
    }
  }
  std::map<std::string, double> out;
  for (const auto& service : all) {
    std::size_t sum = 0;
    for (const auto& run : corpus.runs) {
      auto it = run.per_service.find(service);
      if (it != run.per_service.end()) sum += it->second.size();
    }
    out[service] = static_cast<double>(sum) / static_cast<double>(corpus.runs.size());
  }
  return out;
}

inline double templates_per_test_from_means(double mean_templates,
                                            double mean_tests) {
  if (mean_tests <= 0) throw UsageError("templates_per_test: mean test count must be positive");
  return round2(mean_templates / mean_tests);
}

// (mean per-run unique template count) / (mean test count), two decimals.
inline double templates_per_test(const StrategyCorpus& corpus,
                                 const std::map<std::string, int>& tests_per_run) {
  detail::require_runs(corpus);
  std::size_t template_sum = 0;
  std::size_t test_sum = 0;
  std::vector<std::string> missing;
  for (const auto& run : corpus.runs) {
    template_sum += run.templates().size();
    auto it = tests_per_run.find(run.run_id);
    if (it == tests_per_run.end() || it->second < 1) {
      missing.push_back(run.run_id);
      continue;
    }
    test_sum += static_cast<std::size_t>(it->second);
  }
  if (!missing.empty()) {
    std::string names;
    for (const auto& r : missing) names += (names.empty() ? "" : ", ") + r;
    throw UsageError("templates_per_test: missing test counts for runs: " + names);
  }
  const double n = static_cast<double>(corpus.runs.size());
  return templates_per_test_from_means(template_sum / n, test_sum / n);
}

}  // namespace logcov
