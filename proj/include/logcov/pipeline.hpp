#pragma once

#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "logcov/common.hpp"
#include "logcov/corpus.hpp"
#include "logcov/coverage.hpp"
#include "logcov/drain.hpp"
#include "logcov/masking.hpp"

namespace logcov {

struct MineOptions {
  MinerConfig miner;
  std::vector<MaskRule> rules = default_mask_rules();
  LineFormat line_format = LineFormat::default_format();
  std::map<std::string, LineFormat> per_strategy_format;
  // Pooled mining (default) feeds one miner per service with every
  // strategy's records so template ids share one identity space. Per-run
  // mining parses each run independently and unifies identities by canonical
  // string equality.
  bool per_run = false;
};

struct MineResult {
  std::vector<TemplateInfo> templates;              // sorted by (service, canonical)
  std::map<std::string, std::string> catalog;       // id -> canonical
  std::vector<RunTemplateSet> runsets;              // sorted by (strategy, run)
  std::map<std::string, std::map<std::string, int>> tests_per_run;
  std::string space;
  std::vector<std::string> warnings;

  StrategyCorpus strategy_corpus(const std::string& name) const {
    StrategyCorpus corpus;
    corpus.strategy = name;
    corpus.space = space;
    for (const auto& rs : runsets) {
      if (rs.strategy == name) corpus.runs.push_back(rs);
    }
    if (corpus.runs.empty()) {
      throw UsageError("unknown strategy: " + name);
    }
    return corpus;
  }

  std::vector<std::string> strategy_names() const {
    std::set<std::string> names;
    for (const auto& rs : runsets) names.insert(rs.strategy);
    return {names.begin(), names.end()};
  }
};

namespace detail {

inline const LineFormat& format_for(const MineOptions& opts,
                                    const std::string& strategy) {
  auto it = opts.per_strategy_format.find(strategy);
  return it == opts.per_strategy_format.end() ? opts.line_format : it->second;
}

inline std::string space_fingerprint(const MineOptions& opts,
                                     const std::map<std::string, std::string>& catalog) {
  std::uint64_t h = fnv1a(kFnvOffset,
                          std::to_string(opts.miner.depth) + "/" +
                              std::to_string(opts.miner.sim_threshold) + "/" +
                              std::to_string(opts.miner.max_children) + "/" +
                              (opts.per_run ? "per-run" : "pooled"));
  for (const auto& [id, canon] : catalog) {
    h = fnv1a(h, id);
    h = fnv1a(h, canon);
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline void sort_index(CorpusIndex& index) {
  std::sort(index.strategies.begin(), index.strategies.end(),
            [](const StrategyEntry& a, const StrategyEntry& b) {
              return a.name < b.name;
            });
  for (auto& strategy : index.strategies) {
    std::sort(strategy.runs.begin(), strategy.runs.end(),
              [](const RunEntry& a, const RunEntry& b) {
                return a.run_id < b.run_id;
              });
  }
}

}  // namespace detail

// Full mining pass over a corpus: ingest, mask, mine, attribute. Record
// order is the deterministic (strategy, run, line) order within each
// service, so results do not depend on how the index was enumerated.
inline MineResult mine_corpus(CorpusIndex index, const MineOptions& opts) {
  opts.miner.validate();
  detail::sort_index(index);

  MineResult result;
  result.warnings = index.warnings;
  for (const auto& strategy : index.strategies) {
    if (!strategy.tests_per_run.empty()) {
      result.tests_per_run[strategy.name] = strategy.tests_per_run;
    }
  }

  std::set<std::string> services;
  for (const auto& strategy : index.strategies) {
    for (const auto& run : strategy.runs) {
      for (const auto& [service, path] : run.services) services.insert(service);
    }
  }

  // raw-id counts per (strategy, run, service), remapped to final ids below
  std::map<std::pair<std::string, std::string>,
           std::map<std::string, std::map<std::string, std::uint64_t>>>
      raw_counts;

  if (!opts.per_run) {
    for (const auto& service : services) {
      TemplateMiner miner(opts.miner, service);
      for (const auto& strategy : index.strategies) {
        const LineFormat& fmt = detail::format_for(opts, strategy.name);
        for (const auto& run : strategy.runs) {
          auto it = run.services.find(service);
          if (it == run.services.end()) continue;
          auto records = read_service_file(it->second, strategy.name, run.run_id,
                                           service, fmt, &result.warnings);
          auto& counts = raw_counts[{strategy.name, run.run_id}][service];
          for (const auto& rec : records) {
            auto masked = apply_masks(rec.raw_message, opts.rules);
            if (!masked) continue;
            const std::string& id = miner.insert(
                masked->tokens, {rec.strategy, rec.run_id, rec.service});
            ++counts[id];
          }
        }
      }
      auto resolve = miner.id_resolution();
      for (auto& [key, by_service] : raw_counts) {
        auto svc_it = by_service.find(service);
        if (svc_it == by_service.end()) continue;
        std::map<std::string, std::uint64_t> remapped;
        for (const auto& [raw_id, n] : svc_it->second) {
          remapped[resolve.at(raw_id)] += n;
        }
        svc_it->second = std::move(remapped);
      }
      for (auto& info : miner.templates()) {
        result.catalog[info.id] = info.canonical();
        result.templates.push_back(std::move(info));
      }
    }
  } else {
    // Independent miner per (strategy, run, service); identities unify by
    // canonical string afterwards.
    std::map<std::string, std::map<std::string, TemplateInfo>> merged;  // service -> canonical
    std::map<std::pair<std::string, std::string>,
             std::map<std::string, std::map<std::string, std::uint64_t>>>
        canonical_counts;
    for (const auto& service : services) {
      for (const auto& strategy : index.strategies) {
        const LineFormat& fmt = detail::format_for(opts, strategy.name);
        for (const auto& run : strategy.runs) {
          auto it = run.services.find(service);
          if (it == run.services.end()) continue;
          TemplateMiner miner(opts.miner, service);
          auto records = read_service_file(it->second, strategy.name, run.run_id,
                                           service, fmt, &result.warnings);
          std::map<std::string, std::uint64_t> raw;
          for (const auto& rec : records) {
            auto masked = apply_masks(rec.raw_message, opts.rules);
            if (!masked) continue;
            ++raw[miner.insert(masked->tokens,
                               {rec.strategy, rec.run_id, rec.service})];
          }
          auto resolve = miner.id_resolution();
          auto& dest = canonical_counts[{strategy.name, run.run_id}][service];
          std::map<std::string, std::string> canon_of;
          for (const auto& info : miner.templates()) canon_of[info.id] = info.canonical();
          for (const auto& [raw_id, n] : raw) {
            dest[canon_of.at(resolve.at(raw_id))] += n;
          }
          for (const auto& info : miner.templates()) {
            auto [mit, inserted] = merged[service].emplace(info.canonical(), info);
            if (!inserted) {
              mit->second.occurrences += info.occurrences;
              mit->second.runs_seen.insert(info.runs_seen.begin(), info.runs_seen.end());
              mit->second.services_seen.insert(info.services_seen.begin(),
                                               info.services_seen.end());
            }
          }
        }
      }
    }
    // Assign stable ids per service by sorted canonical.
    std::map<std::string, std::map<std::string, std::string>> id_of;  // service -> canonical -> id
    for (auto& [service, by_canonical] : merged) {
      std::size_t seq = 0;
      for (auto& [canon, info] : by_canonical) {
        char buf[8];
        std::snprintf(buf, sizeof(buf), "%06zu", ++seq);
        info.id = service + ":" + buf;
        id_of[service][canon] = info.id;
        result.catalog[info.id] = canon;
        result.templates.push_back(info);
      }
    }
    for (auto& [key, by_service] : canonical_counts) {
      auto& dest = raw_counts[key];
      for (auto& [service, counts] : by_service) {
        for (const auto& [canon, n] : counts) {
          dest[service][id_of.at(service).at(canon)] += n;
        }
      }
    }
  }

  std::sort(result.templates.begin(), result.templates.end(),
            [](const TemplateInfo& a, const TemplateInfo& b) {
              if (a.service != b.service) return a.service < b.service;
              return a.canonical() < b.canonical();
            });

  for (const auto& strategy : index.strategies) {
    for (const auto& run : strategy.runs) {
      RunTemplateSet rs;
      rs.strategy = strategy.name;
      rs.run_id = run.run_id;
      auto it = raw_counts.find({strategy.name, run.run_id});
      if (it != raw_counts.end()) {
        for (auto& [service, counts] : it->second) {
          if (!counts.empty()) rs.per_service[service] = counts;
        }
      }
      result.runsets.push_back(std::move(rs));
    }
  }

  result.space = detail::space_fingerprint(opts, result.catalog);
  return result;
}

}  // namespace logcov
