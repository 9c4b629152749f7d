#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "subpair/vocab.hpp"

namespace subpair {

struct SentencePairRecord {
  std::vector<std::string> sentence1;
  std::vector<std::string> sentence2;
  int label = 0;  // 1 = paraphrase
  std::string source_id;
};

enum class PairFormat {
  kCanonical,  // label <TAB> sentence1 <TAB> sentence2
  kPit,        // topic <TAB> sentence1 <TAB> sentence2 <TAB> "(3, 2)" [...]
  kUrl,        // sentence1 <TAB> sentence2 <TAB> "(4, 6)" [...]
};

PairFormat pair_format_from_string(const std::string& name);
std::string to_string(PairFormat format);

struct LoadOptions {
  PairFormat format = PairFormat::kCanonical;
  bool lowercase = false;
  // Strict keeps only confident labels for the amt formats: >= 4 positive,
  // <= 1 negative for PIT (debatable 2-3 dropped); the URL corpus always
  // drops its 3-of-6 debatable pairs. Non-strict thresholds PIT at >= 3.
  bool strict_labels = false;
};

struct LoadReport {
  std::size_t total_lines = 0;
  std::size_t loaded = 0;
  std::size_t malformed = 0;
  std::size_t filtered = 0;  // well-formed but dropped (debatable label, empty)
};

// Whitespace split with terminal punctuation peeled into its own tokens;
// leading characters (hashtags, mentions) are kept attached.
std::vector<std::string> tokenize(const std::string& text,
                                  bool lowercase = false);

// Throws DataError when the file is unreadable or more than 10% of its
// lines are malformed.
std::vector<SentencePairRecord> load_pairs(const std::string& path,
                                           const LoadOptions& options,
                                           LoadReport* report = nullptr);
std::vector<SentencePairRecord> parse_pairs(std::istream& in,
                                            const LoadOptions& options,
                                            const std::string& name,
                                            LoadReport* report = nullptr);

// Word types in first-seen order over both sentences of every record.
std::vector<std::string> word_types(const std::vector<SentencePairRecord>& records);

Vocab build_word_vocab(const std::vector<SentencePairRecord>& records);
// Words with frequency >= min_freq; everything else maps to UNK.
Vocab build_lm_vocab(const std::vector<SentencePairRecord>& records,
                     int min_freq = 2);

}  // namespace subpair
