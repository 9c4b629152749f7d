#include "subpair/subword.hpp"

#include <stdexcept>

namespace subpair {

SubwordScheme SubwordScheme::for_ngram(int n) {
  switch (n) {
    case 1:
      return {SubwordUnit::kCharUnigram, false};
    case 2:
      return {SubwordUnit::kCharBigram, true};
    case 3:
      return {SubwordUnit::kCharTrigram, true};
    default:
      throw std::invalid_argument("subword n must be 1, 2 or 3, got " +
                                  std::to_string(n));
  }
}

std::vector<std::string> utf8_chars(const std::string& text) {
  std::vector<std::string> chars;
  std::size_t i = 0;
  while (i < text.size()) {
    const unsigned char b = static_cast<unsigned char>(text[i]);
    std::size_t len = 1;
    if ((b & 0x80u) == 0x00u) len = 1;
    else if ((b & 0xE0u) == 0xC0u) len = 2;
    else if ((b & 0xF0u) == 0xE0u) len = 3;
    else if ((b & 0xF8u) == 0xF0u) len = 4;
    if (i + len > text.size()) len = 1;
    chars.push_back(text.substr(i, len));
    i += len;
  }
  return chars;
}

std::vector<std::string> extract_subwords(const std::string& word,
                                          const SubwordScheme& scheme) {
  if (word.empty()) {
    throw std::invalid_argument("extract_subwords: empty word");
  }
  std::vector<std::string> chars = utf8_chars(word);
  if (scheme.unit == SubwordUnit::kCharUnigram) {
    return chars;
  }
  const int n = scheme.ngram();
  if (scheme.boundary_marking) {
    chars.insert(chars.begin(), "^");
    chars.push_back("$");
  }
  std::vector<std::string> grams;
  if (static_cast<int>(chars.size()) < n) {
    // Only possible without boundary marking; keep the whole word.
    std::string all;
    for (const auto& c : chars) all += c;
    grams.push_back(all);
    return grams;
  }
  for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= chars.size(); ++i) {
    std::string gram;
    for (int j = 0; j < n; ++j) gram += chars[i + static_cast<std::size_t>(j)];
    grams.push_back(std::move(gram));
  }
  return grams;
}

Vocab build_subword_vocab(const std::vector<std::string>& word_types,
                          const SubwordScheme& scheme) {
  Vocab vocab;
  for (const std::string& word : word_types) {
    if (word.empty()) continue;
    for (const std::string& sub : extract_subwords(word, scheme)) {
      vocab.add(sub);
    }
  }
  return vocab;
}

std::vector<int> subword_ids(const std::string& word,
                             const SubwordScheme& scheme, const Vocab& vocab) {
  std::vector<int> ids;
  for (const std::string& sub : extract_subwords(word, scheme)) {
    ids.push_back(vocab.id(sub));
  }
  return ids;
}

}  // namespace subpair
