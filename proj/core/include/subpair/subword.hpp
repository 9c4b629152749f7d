#pragma once

#include <string>
#include <vector>

#include "subpair/vocab.hpp"

namespace subpair {

enum class SubwordUnit { kCharUnigram = 1, kCharBigram = 2, kCharTrigram = 3 };

// Unigrams are never boundary-marked; bigrams and trigrams always are,
// so prefix and suffix n-grams stay distinct from word-internal ones.
struct SubwordScheme {
  SubwordUnit unit = SubwordUnit::kCharTrigram;
  bool boundary_marking = true;

  static SubwordScheme for_ngram(int n);
  int ngram() const { return static_cast<int>(unit); }
};

// Splits a UTF-8 string into code-point strings. Invalid bytes are kept
// as single-byte units rather than rejected.
std::vector<std::string> utf8_chars(const std::string& text);

// Subword sequence of a word. Unigrams: the character sequence (length L).
// Bigrams/trigrams: the word is wrapped as ^word$ before the sliding
// window, giving L+1 bigrams and L trigrams.
std::vector<std::string> extract_subwords(const std::string& word,
                                          const SubwordScheme& scheme);

// Vocabulary over the subwords of a list of word types. Identical subword
// strings share one id regardless of which words they came from.
Vocab build_subword_vocab(const std::vector<std::string>& word_types,
                          const SubwordScheme& scheme);

// Ids of a word's subwords; unknown subwords map to UNK, never an error.
std::vector<int> subword_ids(const std::string& word,
                             const SubwordScheme& scheme, const Vocab& vocab);

}  // namespace subpair
