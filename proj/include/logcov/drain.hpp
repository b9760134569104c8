#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "logcov/common.hpp"

namespace logcov {

inline constexpr const char* kWildcard = "<*>";

struct MinerConfig {
  int depth = 4;           // tree depth including root and leaf
  double sim_threshold = 0.4;
  int max_children = 100;

  void validate() const {
    if (depth < 3) throw UsageError("depth must be ≥ 3");
    if (!(sim_threshold > 0.0) || sim_threshold > 1.0) {
      throw UsageError("sim_threshold must be in (0, 1]");
    }
    if (max_children < 1) throw UsageError("max_children must be ≥ 1");
  }
};

struct TemplateInfo {
  std::string id;
  std::string service;
  std::vector<std::string> tokens;
  std::uint64_t occurrences = 0;
  std::set<std::pair<std::string, std::string>> runs_seen;  // (strategy, run)
  std::set<std::string> services_seen;

  std::string canonical() const {
    std::string out;
    for (const auto& t : tokens) {
      if (!out.empty()) out += ' ';
      out += t;
    }
    return out;
  }
};

inline bool has_digit(const std::string& token) {
  return std::any_of(token.begin(), token.end(),
                     [](unsigned char c) { return c >= '0' && c <= '9'; });
}

// Position-wise similarity between a message and a stored template of equal
// length: exact matches over length. Wildcard positions in the template count
// as mismatches, so only literal agreement attracts a merge.
inline double seq_similarity(std::span<const std::string> candidate,
                             std::span<const std::string> templ) {
  if (candidate.size() != templ.size()) {
    throw InternalError("seq_similarity: unequal lengths");
  }
  std::size_t hits = 0;
  for (std::size_t i = 0; i < candidate.size(); ++i) {
    if (templ[i] != kWildcard && candidate[i] == templ[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(candidate.size());
}

// Fixed-depth parse tree: level 1 keys on token count, the next depth-2
// levels key on leading tokens, leaves hold template groups. Tokens carrying
// a digit route as <*>; so does overflow past max_children.
class TemplateMiner {
 public:
  TemplateMiner(MinerConfig config, std::string service)
      : config_(config), service_(std::move(service)) {
    config_.validate();
  }

  struct Provenance {
    std::string strategy;
    std::string run_id;
    std::string service;
  };

  // Returns the id of the group the message landed in. Merging turns
  // mismatched positions into <*>; template length never changes.
  const std::string& insert(const std::vector<std::string>& tokens,
                            const Provenance& prov) {
    if (tokens.empty()) throw InternalError("insert: empty token sequence");
    Node* node = descend(tokens);

    int best = -1;
    double best_sim = -1.0;
    for (int idx : node->groups) {
      double sim = seq_similarity(tokens, groups_[idx].tokens);
      if (sim > best_sim) {  // ties keep the earliest group
        best_sim = sim;
        best = idx;
      }
    }

    if (best >= 0 && best_sim >= config_.sim_threshold) {
      TemplateInfo& g = groups_[best];
      for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (g.tokens[i] != tokens[i]) g.tokens[i] = kWildcard;
      }
      record(g, prov);
      return g.id;
    }

    TemplateInfo fresh;
    fresh.id = service_ + ":" + pad(groups_.size() + 1);
    fresh.service = service_;
    fresh.tokens = tokens;
    record(fresh, prov);
    groups_.push_back(std::move(fresh));
    node->groups.push_back(static_cast<int>(groups_.size()) - 1);
    return groups_.back().id;
  }

  // All templates, coalesced by canonical string (separate groups can
  // generalize to the same skeleton) and sorted by it. The representative id
  // is the earliest-created group's.
  std::vector<TemplateInfo> templates() const {
    std::map<std::string, TemplateInfo> by_canonical;
    for (const auto& g : groups_) {
      auto [it, inserted] = by_canonical.emplace(g.canonical(), g);
      if (!inserted) {
        TemplateInfo& rep = it->second;
        rep.occurrences += g.occurrences;
        rep.runs_seen.insert(g.runs_seen.begin(), g.runs_seen.end());
        rep.services_seen.insert(g.services_seen.begin(), g.services_seen.end());
        if (g.id < rep.id) rep.id = g.id;
      }
    }
    std::vector<TemplateInfo> out;
    out.reserve(by_canonical.size());
    for (auto& [canon, info] : by_canonical) out.push_back(std::move(info));
    return out;
  }

  // Raw group id -> representative id after canonical coalescing.
  std::map<std::string, std::string> id_resolution() const {
    std::map<std::string, std::string> rep_of_canonical;
    for (const auto& t : templates()) rep_of_canonical[t.canonical()] = t.id;
    std::map<std::string, std::string> out;
    for (const auto& g : groups_) out[g.id] = rep_of_canonical.at(g.canonical());
    return out;
  }

  std::size_t group_count() const { return groups_.size(); }
  const MinerConfig& config() const { return config_; }
  const std::string& service() const { return service_; }

 private:
  struct Node {
    std::map<std::string, std::unique_ptr<Node>> children;
    std::vector<int> groups;
  };

  Node* descend(const std::vector<std::string>& tokens) {
    Node* node = &length_roots_[tokens.size()];
    const std::size_t routing_levels =
        std::min<std::size_t>(config_.depth - 2, tokens.size());
    for (std::size_t i = 0; i < routing_levels; ++i) {
      std::string key = has_digit(tokens[i]) ? kWildcard : tokens[i];
      auto it = node->children.find(key);
      if (it == node->children.end()) {
        if (key != kWildcard &&
            static_cast<int>(node->children.size()) -
                    (node->children.count(kWildcard) ? 1 : 0) >=
                config_.max_children) {
          key = kWildcard;
          it = node->children.find(key);
        }
        if (it == node->children.end()) {
          it = node->children.emplace(key, std::make_unique<Node>()).first;
        }
      }
      node = it->second.get();
    }
    return node;
  }

  void record(TemplateInfo& g, const Provenance& prov) {
    ++g.occurrences;
    g.runs_seen.emplace(prov.strategy, prov.run_id);
    g.services_seen.insert(prov.service);
  }

  static std::string pad(std::size_t n) {
    std::string s = std::to_string(n);
    return std::string(s.size() < 6 ? 6 - s.size() : 0, '0') + s;
  }

  MinerConfig config_;
  std::string service_;
  std::map<std::size_t, Node> length_roots_;
  std::vector<TemplateInfo> groups_;  // creation order
};

}  // namespace logcov
