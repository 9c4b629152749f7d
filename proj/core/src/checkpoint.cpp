#include "subpair/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "subpair/errors.hpp"

namespace subpair {

namespace {

constexpr char kMagic[4] = {'S', 'P', 'W', 'C'};
constexpr std::uint32_t kVersion = 1;

using nlohmann::json;

json config_to_json(const ModelConfig& c) {
  json j;
  j["input"] = to_string(c.input);
  j["subword_n"] = c.subword_n;
  j["aggregation"] = to_string(c.aggregation);
  j["cnn_depth"] = c.cnn_depth;
  j["cnn_channels"] = c.cnn_channels;
  j["hidden"] = c.hidden;
  j["word_dim"] = c.word_dim;
  j["subword_dim"] = c.subword_dim;
  j["char_hidden"] = c.char_hidden;
  j["combined_composition"] =
      c.combined_composition == Composition::kC2w ? "c2w" : "cnn";
  j["alpha"] = c.alpha;
  j["gamma"] = c.gamma;
  j["lm_hidden"] = c.lm_hidden;
  j["lm_proj"] = c.lm_proj;
  j["lm_normalize"] = c.lm_normalize;
  j["lm_min_freq"] = c.lm_min_freq;
  j["lowercase"] = c.lowercase;
  j["seed"] = c.seed;
  return j;
}

ModelConfig config_from_json(const json& j) {
  ModelConfig c;
  c.input = input_mode_from_string(j.at("input").get<std::string>());
  c.subword_n = j.at("subword_n").get<int>();
  c.aggregation = aggregation_from_string(j.at("aggregation").get<std::string>());
  c.cnn_depth = j.at("cnn_depth").get<int>();
  c.cnn_channels = j.at("cnn_channels").get<int>();
  c.hidden = j.at("hidden").get<int>();
  c.word_dim = j.at("word_dim").get<int>();
  c.subword_dim = j.at("subword_dim").get<int>();
  c.char_hidden = j.at("char_hidden").get<int>();
  c.combined_composition =
      j.at("combined_composition").get<std::string>() == "c2w"
          ? Composition::kC2w
          : Composition::kCnn;
  c.alpha = j.at("alpha").get<double>();
  c.gamma = j.at("gamma").get<double>();
  c.lm_hidden = j.at("lm_hidden").get<int>();
  c.lm_proj = j.at("lm_proj").get<int>();
  c.lm_normalize = j.at("lm_normalize").get<bool>();
  c.lm_min_freq = j.at("lm_min_freq").get<int>();
  c.lowercase = j.at("lowercase").get<bool>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

template <typename T>
void write_pod(std::ostream& os, const T& value) {
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::istream& is) {
  T value{};
  is.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!is) throw ConfigError("checkpoint: truncated file");
  return value;
}

}  // namespace

void save_checkpoint(const PwiModel& model, std::ostream& os) {
  json header;
  header["config"] = config_to_json(model.config());
  header["words"] = model.lexicon().words.tokens();
  header["subwords"] = model.lexicon().subwords.tokens();
  header["lm_words"] = model.lexicon().lm_words.tokens();
  const std::string header_str = header.dump();

  os.write(kMagic, sizeof(kMagic));
  write_pod(os, kVersion);
  write_pod(os, static_cast<std::uint64_t>(header_str.size()));
  os.write(header_str.data(), static_cast<std::streamsize>(header_str.size()));

  const auto& params = model.store().params();
  write_pod(os, static_cast<std::uint64_t>(params.size()));
  for (const Parameter& p : params) {
    write_pod(os, static_cast<std::uint32_t>(p.name.size()));
    os.write(p.name.data(), static_cast<std::streamsize>(p.name.size()));
    write_pod(os, static_cast<std::uint8_t>(p.frozen ? 1 : 0));
    write_pod(os, static_cast<std::uint32_t>(p.tensor.rank()));
    for (int d : p.tensor.shape()) write_pod(os, static_cast<std::int32_t>(d));
    const auto& values = p.tensor.values();
    os.write(reinterpret_cast<const char*>(values.data()),
             static_cast<std::streamsize>(values.size() * sizeof(double)));
  }
}

void save_checkpoint(const PwiModel& model, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot write checkpoint: " + path);
  save_checkpoint(model, os);
}

std::vector<std::uint8_t> checkpoint_bytes(const PwiModel& model) {
  std::ostringstream os(std::ios::binary);
  save_checkpoint(model, os);
  const std::string s = os.str();
  return std::vector<std::uint8_t>(s.begin(), s.end());
}

PwiModel load_checkpoint(std::istream& is) {
  char magic[4];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw ConfigError("checkpoint: bad magic (not a checkpoint file)");
  }
  const auto version = read_pod<std::uint32_t>(is);
  if (version != kVersion) {
    throw ConfigError("checkpoint: unsupported version " +
                      std::to_string(version));
  }
  const auto header_len = read_pod<std::uint64_t>(is);
  std::string header_str(header_len, '\0');
  is.read(header_str.data(), static_cast<std::streamsize>(header_len));
  if (!is) throw ConfigError("checkpoint: truncated header");

  json header = json::parse(header_str, nullptr, false);
  if (header.is_discarded()) throw ConfigError("checkpoint: corrupt header");
  const ModelConfig config = config_from_json(header.at("config"));
  Lexicon lexicon;
  lexicon.words = Vocab::from_tokens(header.at("words").get<std::vector<std::string>>());
  lexicon.subwords =
      Vocab::from_tokens(header.at("subwords").get<std::vector<std::string>>());
  lexicon.lm_words =
      Vocab::from_tokens(header.at("lm_words").get<std::vector<std::string>>());

  PwiModel model = PwiModel::build(config, std::move(lexicon),
                                   /*allow_missing_pretrained=*/true);

  const auto param_count = read_pod<std::uint64_t>(is);
  if (param_count != model.store().params().size()) {
    throw ConfigError("checkpoint: parameter count mismatch");
  }
  for (std::uint64_t i = 0; i < param_count; ++i) {
    const auto name_len = read_pod<std::uint32_t>(is);
    std::string name(name_len, '\0');
    is.read(name.data(), name_len);
    const auto frozen = read_pod<std::uint8_t>(is);
    const auto rank = read_pod<std::uint32_t>(is);
    Shape shape;
    for (std::uint32_t d = 0; d < rank; ++d)
      shape.push_back(read_pod<std::int32_t>(is));
    Parameter* p = model.store().find(name);
    if (!p) throw ConfigError("checkpoint: unknown parameter '" + name + "'");
    if (p->tensor.shape() != shape) {
      throw ConfigError("checkpoint: shape mismatch for '" + name + "': " +
                        shape_str(shape) + " vs " +
                        shape_str(p->tensor.shape()));
    }
    if ((frozen != 0) != p->frozen) {
      throw ConfigError("checkpoint: frozen flag mismatch for '" + name + "'");
    }
    std::vector<double>& values = p->tensor.mutable_values();
    is.read(reinterpret_cast<char*>(values.data()),
            static_cast<std::streamsize>(values.size() * sizeof(double)));
    if (!is) throw ConfigError("checkpoint: truncated tensor data");
  }
  return model;
}

PwiModel load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open checkpoint: " + path);
  return load_checkpoint(is);
}

PwiModel load_checkpoint_bytes(const std::vector<std::uint8_t>& bytes) {
  std::istringstream is(std::string(bytes.begin(), bytes.end()),
                        std::ios::binary);
  return load_checkpoint(is);
}

}  // namespace subpair
