#pragma once

#include <algorithm>
#include <fstream>
#include <optional>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "logcov/common.hpp"

namespace logcov {

// One masking rule: every match of `pattern` in a message is replaced by
// `placeholder`. Lower priority applies first.
struct MaskRule {
  std::string name;
  std::string pattern;
  std::string placeholder;
  int priority = 0;
  std::regex compiled;

  MaskRule() = default;
  MaskRule(std::string n, std::string pat, std::string ph, int prio)
      : name(std::move(n)),
        pattern(std::move(pat)),
        placeholder(std::move(ph)),
        priority(prio),
        compiled(pattern, std::regex::ECMAScript | std::regex::optimize) {}
};

struct MaskedMessage {
  std::vector<std::string> tokens;

  std::string render() const {
    std::string out;
    for (const auto& t : tokens) {
      if (!out.empty()) out += ' ';
      out += t;
    }
    return out;
  }
};

inline bool placeholder_shape_ok(const std::string& ph) {
  if (ph.size() < 3 || ph.front() != '<' || ph.back() != '>') return false;
  return std::all_of(ph.begin() + 1, ph.end() - 1, [](unsigned char c) {
    return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
  });
}

// Built-in rules in priority order. Placeholders contain no digits, no '@',
// no "://" and no 8-char base64 runs, so a second pass matches nothing:
// masking is idempotent.
inline std::vector<MaskRule> default_mask_rules() {
  std::vector<MaskRule> rules;
  rules.emplace_back(
      "timestamp",
      R"(\b\d{4}-\d{2}-\d{2}[T ]\d{2}:\d{2}:\d{2}(\.\d+)?(Z|[+-]\d{2}:?\d{2})?\b|\b\d{2}:\d{2}:\d{2}\.\d{3}\b)",
      "<TIME>", 10);
  rules.emplace_back(
      "uuid",
      R"(\b[0-9a-fA-F]{8}-[0-9a-fA-F]{4}-[0-9a-fA-F]{4}-[0-9a-fA-F]{4}-[0-9a-fA-F]{12}\b)",
      "<UUID>", 20);
  rules.emplace_back("ip", R"(\b(\d{1,3}\.){3}\d{1,3}(:\d+)?\b)", "<IP>", 30);
  rules.emplace_back("url", R"([A-Za-z][A-Za-z0-9+.-]*://[^\s"']+)", "<URL>",
                     40);
  rules.emplace_back(
      "jwt", R"(\b[A-Za-z0-9_-]{8,}\.[A-Za-z0-9_-]{8,}\.[A-Za-z0-9_-]{8,}\b)",
      "<JWT>", 50);
  rules.emplace_back("hex", R"(\b(0x)?(?=[0-9a-fA-F]*\d)[0-9a-fA-F]{8,}\b)",
                     "<HEX>", 60);
  rules.emplace_back(
      "email", R"(\b[A-Za-z0-9._%+-]+@[A-Za-z0-9.-]+\.[A-Za-z]{2,}\b)",
      "<EMAIL>", 70);
  rules.emplace_back("number", R"(\b\d+\.\d+\b|\b\d+\b)", "<NUM>", 80);
  return rules;
}

// Applies rules in priority order over the whole message, then splits on
// whitespace. Returns nullopt when nothing but whitespace remains (blank
// line; the caller skips the record).
inline std::optional<MaskedMessage> apply_masks(
    const std::string& message, const std::vector<MaskRule>& rules) {
  std::string text = message;
  for (const auto& rule : rules) {
    text = std::regex_replace(text, rule.compiled, rule.placeholder);
  }
  MaskedMessage out;
  std::istringstream split(text);
  std::string token;
  while (split >> token) out.tokens.push_back(std::move(token));
  if (out.tokens.empty()) return std::nullopt;
  return out;
}

// Custom rules interleave with the built-ins by priority. A custom rule
// sharing a built-in's name overrides it in place; built-ins cannot be
// removed.
inline std::vector<MaskRule> merge_mask_rules(std::vector<MaskRule> base,
                                              const std::vector<MaskRule>& custom) {
  for (const auto& rule : custom) {
    if (!placeholder_shape_ok(rule.placeholder)) {
      throw UsageError("mask rule '" + rule.name + "': placeholder '" +
                       rule.placeholder + "' must match <NAME> with NAME uppercase alphanumeric");
    }
    auto it = std::find_if(base.begin(), base.end(),
                           [&](const MaskRule& r) { return r.name == rule.name; });
    if (it != base.end()) {
      *it = rule;
    } else {
      base.push_back(rule);
    }
  }
  std::stable_sort(base.begin(), base.end(),
                   [](const MaskRule& a, const MaskRule& b) {
                     return a.priority < b.priority;
                   });
  std::set<int> prios;
  for (const auto& r : base) {
    if (!prios.insert(r.priority).second) {
      throw UsageError("mask rules: duplicate priority " +
                       std::to_string(r.priority));
    }
  }
  return base;
}

// Mask config file: JSON array of {name, pattern, placeholder, priority}.
// Patterns use ECMAScript regex syntax.
inline std::vector<MaskRule> load_mask_rules(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot open mask file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("mask file " + path + ": " + e.what());
  }
  if (!doc.is_array()) throw UsageError("mask file " + path + ": expected a JSON array");
  std::vector<MaskRule> custom;
  for (const auto& item : doc) {
    try {
      custom.emplace_back(item.at("name").get<std::string>(),
                          item.at("pattern").get<std::string>(),
                          item.at("placeholder").get<std::string>(),
                          item.at("priority").get<int>());
    } catch (const std::regex_error& e) {
      throw UsageError("mask file " + path + ": bad pattern in rule '" +
                       item.value("name", "?") + "': " + e.what());
    } catch (const nlohmann::json::exception& e) {
      throw UsageError("mask file " + path + ": " + e.what());
    }
  }
  return merge_mask_rules(default_mask_rules(), custom);
}

}  // namespace logcov
