#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace subpair {

// Dense string-to-id map with reserved UNK and PAD slots. Insertion order
// fixes the ids, so building from the same corpus is deterministic.
class Vocab {
 public:
  static constexpr int kUnkId = 0;
  static constexpr int kPadId = 1;
  static constexpr const char* kUnkToken = "<unk>";
  static constexpr const char* kPadToken = "<pad>";

  Vocab();

  // Inserts if absent; returns the id either way.
  int add(const std::string& token);
  // kUnkId for unknown tokens.
  int id(std::string_view token) const;
  bool contains(std::string_view token) const;
  const std::string& token(int id) const;
  int size() const { return static_cast<int>(tokens_.size()); }
  // All tokens in id order (including the specials at 0 and 1).
  const std::vector<std::string>& tokens() const { return tokens_; }

  void write_tsv(std::ostream& os) const;  // token \t id
  static Vocab from_tokens(const std::vector<std::string>& tokens_in_id_order);

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> ids_;
};

}  // namespace subpair
