#include "subpair/data.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "subpair/errors.hpp"

namespace subpair {

PairFormat pair_format_from_string(const std::string& name) {
  if (name == "canonical") return PairFormat::kCanonical;
  if (name == "pit") return PairFormat::kPit;
  if (name == "url") return PairFormat::kUrl;
  throw ConfigError("unknown data format '" + name +
                    "' (expected canonical, pit or url)");
}

std::string to_string(PairFormat format) {
  switch (format) {
    case PairFormat::kCanonical: return "canonical";
    case PairFormat::kPit: return "pit";
    case PairFormat::kUrl: return "url";
  }
  return "?";
}

namespace {

bool is_terminal_punct(char c) {
  switch (c) {
    case '.': case ',': case '!': case '?': case ';': case ':':
    case '"': case '\'': case ')':
      return true;
    default:
      return false;
  }
}

void ascii_lower(std::string& s) {
  for (char& c : s)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

}  // namespace

std::vector<std::string> tokenize(const std::string& text, bool lowercase) {
  std::vector<std::string> tokens;
  std::istringstream is(text);
  std::string raw;
  while (is >> raw) {
    std::vector<std::string> tail;
    while (raw.size() > 1 && is_terminal_punct(raw.back())) {
      tail.push_back(std::string(1, raw.back()));
      raw.pop_back();
    }
    if (lowercase) ascii_lower(raw);
    if (!raw.empty()) tokens.push_back(raw);
    for (auto it = tail.rbegin(); it != tail.rend(); ++it) tokens.push_back(*it);
  }
  return tokens;
}

namespace {

std::vector<std::string> split_tab(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find('\t', start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

// Parses an "(a, b)" judgement pair; returns false when it does not match.
bool parse_amt_label(const std::string& field, int* yes) {
  std::size_t i = 0;
  auto skip_ws = [&] { while (i < field.size() && std::isspace(static_cast<unsigned char>(field[i]))) ++i; };
  skip_ws();
  if (i >= field.size() || field[i] != '(') return false;
  ++i;
  skip_ws();
  std::size_t digits = 0;
  int value = 0;
  while (i < field.size() && std::isdigit(static_cast<unsigned char>(field[i]))) {
    value = value * 10 + (field[i] - '0');
    ++i;
    ++digits;
  }
  if (digits == 0) return false;
  skip_ws();
  if (i >= field.size() || field[i] != ',') return false;
  *yes = value;
  return true;
}

enum class LineOutcome { kLoaded, kMalformed, kFiltered };

LineOutcome parse_line(const std::string& line, const LoadOptions& options,
                       std::size_t line_no, SentencePairRecord* rec) {
  const std::vector<std::string> fields = split_tab(line);
  std::string s1, s2;
  int label = -1;
  switch (options.format) {
    case PairFormat::kCanonical: {
      if (fields.size() < 3) return LineOutcome::kMalformed;
      if (fields[0] != "0" && fields[0] != "1") return LineOutcome::kMalformed;
      label = fields[0] == "1" ? 1 : 0;
      s1 = fields[1];
      s2 = fields[2];
      break;
    }
    case PairFormat::kPit: {
      // Published five-column layout: topic_id, topic_name, sentence1,
      // sentence2, label; a four-column variant without the topic name is
      // accepted too. Labels are either an "(a, b)" judgement pair or a
      // bare digit (test split).
      auto looks_like_label = [](const std::string& f) {
        int ignored = 0;
        return parse_amt_label(f, &ignored) ||
               (f.size() == 1 && std::isdigit(static_cast<unsigned char>(f[0])));
      };
      std::string lf;
      if (fields.size() >= 5 && looks_like_label(fields[4])) {
        s1 = fields[2];
        s2 = fields[3];
        lf = fields[4];
      } else if (fields.size() >= 4 && looks_like_label(fields[3])) {
        s1 = fields[1];
        s2 = fields[2];
        lf = fields[3];
      } else {
        return LineOutcome::kMalformed;
      }
      int yes = 0;
      if (parse_amt_label(lf, &yes)) {
        if (options.strict_labels) {
          if (yes >= 4) label = 1;
          else if (yes <= 1) label = 0;
          else return LineOutcome::kFiltered;  // debatable
        } else {
          label = yes >= 3 ? 1 : 0;
        }
      } else if (lf.size() == 1 && std::isdigit(static_cast<unsigned char>(lf[0]))) {
        const int yes_count = lf[0] - '0';
        if (options.strict_labels) {
          if (yes_count >= 4) label = 1;
          else if (yes_count <= 1) label = 0;
          else return LineOutcome::kFiltered;
        } else {
          label = yes_count >= 3 ? 1 : 0;
        }
      } else {
        return LineOutcome::kMalformed;
      }
      break;
    }
    case PairFormat::kUrl: {
      if (fields.size() < 3) return LineOutcome::kMalformed;
      s1 = fields[0];
      s2 = fields[1];
      int yes = 0;
      if (!parse_amt_label(fields[2], &yes)) return LineOutcome::kMalformed;
      if (yes >= 4) label = 1;
      else if (yes <= 2) label = 0;
      else return LineOutcome::kFiltered;  // 3-of-6 is debatable
      break;
    }
  }
  rec->sentence1 = tokenize(s1, options.lowercase);
  rec->sentence2 = tokenize(s2, options.lowercase);
  rec->label = label;
  rec->source_id = "line" + std::to_string(line_no);
  if (rec->sentence1.empty() || rec->sentence2.empty()) {
    return LineOutcome::kFiltered;
  }
  return LineOutcome::kLoaded;
}

}  // namespace

std::vector<SentencePairRecord> parse_pairs(std::istream& in,
                                            const LoadOptions& options,
                                            const std::string& name,
                                            LoadReport* report) {
  std::vector<SentencePairRecord> records;
  LoadReport local;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    ++local.total_lines;
    SentencePairRecord rec;
    switch (parse_line(line, options, line_no, &rec)) {
      case LineOutcome::kLoaded:
        records.push_back(std::move(rec));
        ++local.loaded;
        break;
      case LineOutcome::kMalformed:
        ++local.malformed;
        break;
      case LineOutcome::kFiltered:
        ++local.filtered;
        break;
    }
  }
  if (local.total_lines > 0 &&
      10 * local.malformed > local.total_lines) {
    throw DataError(name + ": " + std::to_string(local.malformed) + " of " +
                    std::to_string(local.total_lines) +
                    " lines malformed (over 10%)");
  }
  if (report) *report = local;
  return records;
}

std::vector<SentencePairRecord> load_pairs(const std::string& path,
                                           const LoadOptions& options,
                                           LoadReport* report) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open dataset: " + path);
  }
  return parse_pairs(in, options, path, report);
}

std::vector<std::string> word_types(
    const std::vector<SentencePairRecord>& records) {
  std::vector<std::string> types;
  std::unordered_map<std::string, bool> seen;
  auto visit = [&](const std::vector<std::string>& sent) {
    for (const std::string& w : sent) {
      if (!seen.emplace(w, true).second) continue;
      types.push_back(w);
    }
  };
  for (const SentencePairRecord& r : records) {
    visit(r.sentence1);
    visit(r.sentence2);
  }
  return types;
}

Vocab build_word_vocab(const std::vector<SentencePairRecord>& records) {
  Vocab vocab;
  for (const std::string& w : word_types(records)) vocab.add(w);
  return vocab;
}

Vocab build_lm_vocab(const std::vector<SentencePairRecord>& records,
                     int min_freq) {
  std::unordered_map<std::string, int> freq;
  for (const SentencePairRecord& r : records) {
    for (const std::string& w : r.sentence1) ++freq[w];
    for (const std::string& w : r.sentence2) ++freq[w];
  }
  Vocab vocab;
  for (const std::string& w : word_types(records)) {
    if (freq[w] >= min_freq) vocab.add(w);
  }
  return vocab;
}

}  // namespace subpair
