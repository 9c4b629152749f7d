#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "subpair/data.hpp"
#include "subpair/train.hpp"

namespace subpair {

// Plain-text run settings: `key = value` lines under [section] headers,
// '#' comments. Unknown sections or keys are rejected so typos cannot
// silently fall back to defaults.
//
// Relative data paths resolve against the SUBPAIR_DATA_ROOT environment
// variable when it is set.
class RunConfig {
 public:
  static RunConfig defaults();
  // ConfigError when the file is missing or malformed.
  static RunConfig parse_file(const std::string& path);
  static RunConfig parse(std::istream& in, const std::string& name);

  const std::string& get(const std::string& section,
                         const std::string& key) const;
  void set(const std::string& section, const std::string& key,
           const std::string& value);
  bool is_default(const std::string& section, const std::string& key) const;

  // Every known key with its current value; defaults are marked.
  void explain(std::ostream& os) const;

  ModelConfig model_config() const;
  TrainConfig train_config() const;
  LoadOptions load_options() const;

  std::string train_path() const { return resolve_path(get("data", "train")); }
  std::string dev_path() const { return resolve_path(get("data", "dev")); }
  std::string test_path() const { return resolve_path(get("data", "test")); }
  std::string pretrained_path() const {
    return resolve_path(get("data", "pretrained"));
  }

  static std::string resolve_path(const std::string& path);

 private:
  // section -> key -> value; seeded with every default.
  std::map<std::string, std::map<std::string, std::string>> values_;
  std::map<std::string, std::map<std::string, bool>> overridden_;
};

}  // namespace subpair
