#include "subpair/runconfig.hpp"

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "subpair/errors.hpp"

namespace subpair {

namespace {

struct KeyDefault {
  const char* section;
  const char* key;
  const char* value;
};

// The full schema; parse rejects anything not listed here.
const KeyDefault kSchema[] = {
    {"data", "train", ""},
    {"data", "dev", ""},
    {"data", "test", ""},
    {"data", "pretrained", ""},
    {"data", "format", "canonical"},
    {"data", "strict_labels", "false"},
    {"data", "lowercase", "false"},
    {"model", "input", "subword-cnn"},
    {"model", "subword_n", "3"},
    {"model", "aggregation", "mlp"},
    {"model", "cnn_depth", "4"},
    {"model", "cnn_channels", "16"},
    {"model", "hidden", "32"},
    {"model", "word_dim", "32"},
    {"model", "subword_dim", "16"},
    {"model", "char_hidden", "32"},
    {"model", "combined_composition", "cnn"},
    {"model", "alpha", "0.75"},
    {"model", "gamma", "0"},
    {"model", "lm_hidden", "32"},
    {"model", "lm_proj", "32"},
    {"model", "lm_normalize", "true"},
    {"model", "lm_min_freq", "2"},
    {"model", "seed", "1"},
    {"train", "epochs", "20"},
    {"train", "optimizer", "adam"},
    {"train", "lr", "0.001"},
    {"train", "beta1", "0.9"},
    {"train", "beta2", "0.999"},
    {"train", "adam_eps", "1e-8"},
    {"train", "batch_size", "1"},
    {"train", "seed", "1"},
    {"train", "dev_fraction", "0.1"},
    {"analysis", "include_spaces", "true"},
};

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& value, const std::string& where) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError(where + ": expected a boolean, got '" + value + "'");
}

int parse_int(const std::string& value, const std::string& where) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ConfigError(where + ": expected an integer, got '" + value + "'");
  }
}

double parse_double(const std::string& value, const std::string& where) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ConfigError(where + ": expected a number, got '" + value + "'");
  }
}

std::uint64_t parse_u64(const std::string& value, const std::string& where) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ConfigError(where + ": expected a seed value, got '" + value + "'");
  }
}

}  // namespace

RunConfig RunConfig::defaults() {
  RunConfig config;
  for (const KeyDefault& kd : kSchema) {
    config.values_[kd.section][kd.key] = kd.value;
    config.overridden_[kd.section][kd.key] = false;
  }
  return config;
}

RunConfig RunConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file: " + path);
  }
  return parse(in, path);
}

RunConfig RunConfig::parse(std::istream& in, const std::string& name) {
  RunConfig config = defaults();
  std::string line;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = name + ":" + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError(where + ": malformed section header '" + line + "'");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (!config.values_.count(section)) {
        throw ConfigError(where + ": unknown section [" + section + "]");
      }
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(where + ": expected 'key = value', got '" + line + "'");
    }
    if (section.empty()) {
      throw ConfigError(where + ": key outside of any [section]");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    config.set(section, key, value);
  }
  return config;
}

const std::string& RunConfig::get(const std::string& section,
                                  const std::string& key) const {
  auto sit = values_.find(section);
  if (sit == values_.end()) {
    throw ConfigError("unknown config section [" + section + "]");
  }
  auto kit = sit->second.find(key);
  if (kit == sit->second.end()) {
    throw ConfigError("unknown config key [" + section + "] " + key);
  }
  return kit->second;
}

void RunConfig::set(const std::string& section, const std::string& key,
                    const std::string& value) {
  auto sit = values_.find(section);
  if (sit == values_.end()) {
    throw ConfigError("unknown config section [" + section + "]");
  }
  auto kit = sit->second.find(key);
  if (kit == sit->second.end()) {
    throw ConfigError("unknown config key '" + key + "' in section [" +
                      section + "]");
  }
  kit->second = value;
  overridden_[section][key] = true;
}

bool RunConfig::is_default(const std::string& section,
                           const std::string& key) const {
  return !overridden_.at(section).at(key);
}

void RunConfig::explain(std::ostream& os) const {
  for (const auto& [section, keys] : values_) {
    os << "[" << section << "]\n";
    for (const auto& [key, value] : keys) {
      os << "  " << key << " = " << (value.empty() ? "<unset>" : value);
      if (is_default(section, key)) os << "  (default)";
      os << "\n";
    }
  }
}

ModelConfig RunConfig::model_config() const {
  ModelConfig m;
  m.input = input_mode_from_string(get("model", "input"));
  m.subword_n = parse_int(get("model", "subword_n"), "[model] subword_n");
  m.aggregation = aggregation_from_string(get("model", "aggregation"));
  m.cnn_depth = parse_int(get("model", "cnn_depth"), "[model] cnn_depth");
  m.cnn_channels = parse_int(get("model", "cnn_channels"), "[model] cnn_channels");
  m.hidden = parse_int(get("model", "hidden"), "[model] hidden");
  m.word_dim = parse_int(get("model", "word_dim"), "[model] word_dim");
  m.subword_dim = parse_int(get("model", "subword_dim"), "[model] subword_dim");
  m.char_hidden = parse_int(get("model", "char_hidden"), "[model] char_hidden");
  const std::string comp = get("model", "combined_composition");
  if (comp == "c2w") m.combined_composition = Composition::kC2w;
  else if (comp == "cnn") m.combined_composition = Composition::kCnn;
  else throw ConfigError("[model] combined_composition must be c2w or cnn");
  m.alpha = parse_double(get("model", "alpha"), "[model] alpha");
  m.gamma = parse_double(get("model", "gamma"), "[model] gamma");
  m.lm_hidden = parse_int(get("model", "lm_hidden"), "[model] lm_hidden");
  m.lm_proj = parse_int(get("model", "lm_proj"), "[model] lm_proj");
  m.lm_normalize = parse_bool(get("model", "lm_normalize"), "[model] lm_normalize");
  m.lm_min_freq = parse_int(get("model", "lm_min_freq"), "[model] lm_min_freq");
  m.lowercase = parse_bool(get("data", "lowercase"), "[data] lowercase");
  m.seed = parse_u64(get("model", "seed"), "[model] seed");
  m.validate();
  return m;
}

TrainConfig RunConfig::train_config() const {
  TrainConfig t;
  t.epochs = parse_int(get("train", "epochs"), "[train] epochs");
  const std::string opt = get("train", "optimizer");
  if (opt == "adam") t.optimizer.kind = OptimizerConfig::Kind::kAdam;
  else if (opt == "sgd") t.optimizer.kind = OptimizerConfig::Kind::kSgd;
  else throw ConfigError("[train] optimizer must be adam or sgd");
  t.optimizer.lr = parse_double(get("train", "lr"), "[train] lr");
  t.optimizer.beta1 = parse_double(get("train", "beta1"), "[train] beta1");
  t.optimizer.beta2 = parse_double(get("train", "beta2"), "[train] beta2");
  t.optimizer.eps = parse_double(get("train", "adam_eps"), "[train] adam_eps");
  t.batch_size = parse_int(get("train", "batch_size"), "[train] batch_size");
  t.seed = parse_u64(get("train", "seed"), "[train] seed");
  t.dev_fraction =
      parse_double(get("train", "dev_fraction"), "[train] dev_fraction");
  t.model = model_config();
  return t;
}

LoadOptions RunConfig::load_options() const {
  LoadOptions o;
  o.format = pair_format_from_string(get("data", "format"));
  o.lowercase = parse_bool(get("data", "lowercase"), "[data] lowercase");
  o.strict_labels =
      parse_bool(get("data", "strict_labels"), "[data] strict_labels");
  return o;
}

std::string RunConfig::resolve_path(const std::string& path) {
  if (path.empty() || path.front() == '/') return path;
  const char* root = std::getenv("SUBPAIR_DATA_ROOT");
  if (!root || !*root) return path;
  return std::string(root) + "/" + path;
}

}  // namespace subpair
