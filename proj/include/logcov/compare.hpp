#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <utility>

#include "logcov/common.hpp"
#include "logcov/coverage.hpp"

namespace logcov {

struct ComparisonReport {
  Level level = Level::Avg;
  std::string strategy_a;
  std::string strategy_b;
  std::size_t card_a = 0;
  std::size_t card_b = 0;
  std::size_t card_intersection = 0;
  std::size_t card_union = 0;
  double jaccard_pct = 0.0;
  double gain_over_a_pct = 0.0;
  double gain_over_b_pct = 0.0;
};

// 100 · |a∩b| / |a∪b|, two decimals.
inline double jaccard(const std::set<std::string>& a,
                      const std::set<std::string>& b) {
  if (a.empty() && b.empty()) {
    throw UsageError("jaccard: undefined similarity of two empty sets");
  }
  std::set<std::string> inter;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::inserter(inter, inter.begin()));
  const std::size_t uni = a.size() + b.size() - inter.size();
  return round2(100.0 * static_cast<double>(inter.size()) /
                static_cast<double>(uni));
}

// Percentage increase of the union over each side alone.
inline std::pair<double, double> gain(const std::set<std::string>& a,
                                      const std::set<std::string>& b) {
  if (a.empty() || b.empty()) {
    throw UsageError("gain: both template sets must be non-empty");
  }
  std::set<std::string> inter;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::inserter(inter, inter.begin()));
  const double uni =
      static_cast<double>(a.size() + b.size() - inter.size());
  return {round2(100.0 * (uni / static_cast<double>(a.size()) - 1.0)),
          round2(100.0 * (uni / static_cast<double>(b.size()) - 1.0))};
}

inline ComparisonReport compare_sets(const std::set<std::string>& a,
                                     const std::set<std::string>& b,
                                     Level level, std::string name_a,
                                     std::string name_b) {
  ComparisonReport rep;
  rep.level = level;
  rep.strategy_a = std::move(name_a);
  rep.strategy_b = std::move(name_b);
  rep.card_a = a.size();
  rep.card_b = b.size();
  std::set<std::string> inter;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::inserter(inter, inter.begin()));
  rep.card_intersection = inter.size();
  rep.card_union = rep.card_a + rep.card_b - rep.card_intersection;
  rep.jaccard_pct = jaccard(a, b);
  std::tie(rep.gain_over_a_pct, rep.gain_over_b_pct) = gain(a, b);
  return rep;
}

// Comparing template ids is only meaningful within one pooled mining space;
// differing space fingerprints are refused outright.
inline ComparisonReport compare(const StrategyCorpus& corpus_a,
                                const StrategyCorpus& corpus_b, Level level,
                                const std::map<std::string, std::string>& canonical_of) {
  if (corpus_a.space != corpus_b.space) {
    throw UsageError("cannot compare strategies from different mining spaces ('" +
                     corpus_a.space + "' vs '" + corpus_b.space + "')");
  }
  CoverageSet a = coverage_at(corpus_a, level, canonical_of);
  CoverageSet b = coverage_at(corpus_b, level, canonical_of);
  return compare_sets(a.templates, b.templates, level, corpus_a.strategy,
                      corpus_b.strategy);
}

}  // namespace logcov
