#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "logcov/common.hpp"

namespace logcov {

namespace fs = std::filesystem;

struct RunEntry {
  std::string run_id;
  std::map<std::string, fs::path> services;  // service name -> log file
};

struct StrategyEntry {
  std::string name;
  std::vector<RunEntry> runs;
  std::map<std::string, int> tests_per_run;  // from meta.json; may be empty
};

struct CorpusIndex {
  fs::path root;
  std::vector<StrategyEntry> strategies;
  std::vector<std::string> warnings;
};

struct LogRecord {
  std::string strategy;
  std::string run_id;
  std::string service;
  std::optional<std::string> level;
  std::string raw_message;
  std::size_t line_no = 0;  // record ordinal within the file, 1-based
};

// Line pattern with named captures. Syntax is ECMAScript regex extended with
// (?<name>...) groups; recognized names are timestamp, thread, level, logger,
// message. Lines that do not match are continuation lines.
class LineFormat {
 public:
  static LineFormat from_pattern(const std::string& pattern) {
    LineFormat fmt;
    fmt.pattern_ = pattern;
    std::string plain;
    plain.reserve(pattern.size());
    int group = 0;
    for (std::size_t i = 0; i < pattern.size(); ++i) {
      if (pattern[i] == '\\' && i + 1 < pattern.size()) {
        plain += pattern[i];
        plain += pattern[i + 1];
        ++i;
        continue;
      }
      if (pattern[i] == '(') {
        if (pattern.compare(i, 3, "(?<") == 0) {
          auto end = pattern.find('>', i + 3);
          if (end == std::string::npos) {
            throw UsageError("line format: unterminated (?<name> group");
          }
          fmt.group_of_[pattern.substr(i + 3, end - i - 3)] = ++group;
          plain += '(';
          i = end;
          continue;
        }
        if (pattern.compare(i, 2, "(?") != 0) ++group;
      }
      plain += pattern[i];
    }
    try {
      fmt.re_ = std::regex(plain, std::regex::ECMAScript | std::regex::optimize);
    } catch (const std::regex_error& e) {
      throw UsageError(std::string("line format: ") + e.what());
    }
    if (!fmt.group_of_.count("message")) {
      throw UsageError("line format: missing (?<message>...) group");
    }
    return fmt;
  }

  // HH:mm:ss.SSS [thread] LEVEL logger - message
  static LineFormat default_format() {
    return from_pattern(
        R"(^(?<timestamp>\d{2}:\d{2}:\d{2}\.\d{3}) \[(?<thread>[^\]]*)\] (?<level>[A-Z]+)\s+(?<logger>\S+) - (?<message>[\s\S]*)$)");
  }

  struct Parsed {
    std::optional<std::string> level;
    std::string message;
  };

  std::optional<Parsed> match(const std::string& line) const {
    std::smatch m;
    if (!std::regex_match(line, m, re_)) return std::nullopt;
    Parsed out;
    auto lvl = group_of_.find("level");
    if (lvl != group_of_.end() && m[lvl->second].matched) {
      out.level = m[lvl->second].str();
    }
    out.message = m[group_of_.at("message")].str();
    return out;
  }

  const std::string& pattern() const { return pattern_; }

 private:
  std::string pattern_;
  std::regex re_;
  std::map<std::string, int> group_of_;
};

namespace detail {

inline std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Decode as UTF-8, replacing invalid sequences with U+FFFD.
inline std::string sanitize_utf8(const std::string& in) {
  static const std::string kReplacement = "\xEF\xBF\xBD";
  std::string out;
  out.reserve(in.size());
  std::size_t i = 0;
  while (i < in.size()) {
    unsigned char c = in[i];
    std::size_t len = 0;
    if (c < 0x80) {
      len = 1;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
    }
    bool ok = len > 0 && i + len <= in.size();
    for (std::size_t k = 1; ok && k < len; ++k) {
      ok = (static_cast<unsigned char>(in[i + k]) & 0xC0) == 0x80;
    }
    if (ok) {
      out.append(in, i, len);
      i += len;
    } else {
      out += kReplacement;
      ++i;
    }
  }
  return out;
}

inline std::vector<std::string> sorted_dirs(const fs::path& parent) {
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(parent)) {
    if (entry.is_directory()) names.push_back(entry.path().filename().string());
  }
  std::sort(names.begin(), names.end());
  return names;
}

}  // namespace detail

// Scans <root>/<strategy>/<run_id>/<service>.log. Strategies, runs and
// services come out sorted, so the index is independent of filesystem
// enumeration order. Empty directories are omitted; a strategy with zero
// runs is excluded with a warning.
inline CorpusIndex discover_corpus(const fs::path& root) {
  if (!fs::exists(root) || !fs::is_directory(root)) {
    throw CorpusError("corpus root does not exist: " + root.string());
  }
  CorpusIndex index;
  index.root = root;
  for (const auto& strategy_name : detail::sorted_dirs(root)) {
    StrategyEntry strategy;
    strategy.name = strategy_name;
    const fs::path strategy_dir = root / strategy_name;
    for (const auto& run_name : detail::sorted_dirs(strategy_dir)) {
      RunEntry run;
      run.run_id = run_name;
      for (const auto& entry : fs::directory_iterator(strategy_dir / run_name)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".log") continue;
        run.services[entry.path().stem().string()] = entry.path();
      }
      if (!run.services.empty()) strategy.runs.push_back(std::move(run));
    }
    const fs::path meta = strategy_dir / "meta.json";
    if (fs::exists(meta)) {
      std::ifstream in(meta);
      if (!in) throw CorpusError("cannot read " + meta.string());
      try {
        nlohmann::json doc;
        in >> doc;
        for (auto& [run_id, n] : doc.at("tests_per_run").items()) {
          strategy.tests_per_run[run_id] = n.get<int>();
        }
      } catch (const nlohmann::json::exception& e) {
        throw CorpusError(meta.string() + ": " + e.what());
      }
    }
    if (strategy.runs.empty()) {
      index.warnings.push_back("strategy '" + strategy_name +
                               "' has no runs, excluded");
      continue;
    }
    index.strategies.push_back(std::move(strategy));
  }
  return index;
}

// Reads one service log file. Lines matching the format start a record;
// non-matching lines (stack frames etc.) fold into the preceding record's
// raw_message, separated by a single space. Blank lines are dropped.
inline std::vector<LogRecord> read_service_file(
    const fs::path& path, const std::string& strategy, const std::string& run_id,
    const std::string& service, const LineFormat& format,
    std::vector<std::string>* warnings = nullptr) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorpusError("cannot read log file: " + path.string());
  std::vector<LogRecord> records;
  std::string line;
  bool any_line = false;
  bool any_match = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::trim(line).empty()) continue;
    any_line = true;
    line = detail::sanitize_utf8(line);
    if (auto parsed = format.match(line)) {
      any_match = true;
      std::string msg = detail::trim(parsed->message);
      if (msg.empty()) continue;
      LogRecord rec;
      rec.strategy = strategy;
      rec.run_id = run_id;
      rec.service = service;
      rec.level = parsed->level;
      rec.raw_message = std::move(msg);
      rec.line_no = records.size() + 1;
      records.push_back(std::move(rec));
    } else if (!records.empty()) {
      records.back().raw_message += ' ';
      records.back().raw_message += detail::trim(line);
    } else if (warnings) {
      warnings->push_back("orphan continuation line dropped in " + path.string());
    }
  }
  if (any_line && !any_match && warnings) {
    warnings->push_back("no lines matched the line format in " + path.string());
  }
  if (!any_line && warnings) {
    warnings->push_back("empty log file: " + path.string());
  }
  return records;
}

// Reads all of a run's service files, in sorted service order.
inline std::vector<LogRecord> read_run(const RunEntry& entry,
                                       const std::string& strategy,
                                       const LineFormat& format,
                                       std::vector<std::string>* warnings = nullptr) {
  std::vector<LogRecord> all;
  for (const auto& [service, path] : entry.services) {
    auto recs = read_service_file(path, strategy, entry.run_id, service, format,
                                  warnings);
    all.insert(all.end(), std::make_move_iterator(recs.begin()),
               std::make_move_iterator(recs.end()));
  }
  return all;
}

}  // namespace logcov
