#include "subpair/vocab.hpp"

#include <ostream>
#include <stdexcept>

namespace subpair {

Vocab::Vocab() {
  add(kUnkToken);
  add(kPadToken);
}

int Vocab::add(const std::string& token) {
  auto it = ids_.find(token);
  if (it != ids_.end()) return it->second;
  const int id = static_cast<int>(tokens_.size());
  tokens_.push_back(token);
  ids_.emplace(token, id);
  return id;
}

int Vocab::id(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  return it == ids_.end() ? kUnkId : it->second;
}

bool Vocab::contains(std::string_view token) const {
  return ids_.count(std::string(token)) > 0;
}

const std::string& Vocab::token(int id) const {
  if (id < 0 || id >= size()) {
    throw std::out_of_range("vocab id " + std::to_string(id) +
                            " out of range " + std::to_string(size()));
  }
  return tokens_[static_cast<std::size_t>(id)];
}

void Vocab::write_tsv(std::ostream& os) const {
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    os << tokens_[i] << '\t' << i << '\n';
  }
}

Vocab Vocab::from_tokens(const std::vector<std::string>& tokens_in_id_order) {
  if (tokens_in_id_order.size() < 2 || tokens_in_id_order[0] != kUnkToken ||
      tokens_in_id_order[1] != kPadToken) {
    throw std::invalid_argument("vocab token list must start with specials");
  }
  Vocab v;
  for (std::size_t i = 2; i < tokens_in_id_order.size(); ++i) {
    v.add(tokens_in_id_order[i]);
  }
  if (v.size() != static_cast<int>(tokens_in_id_order.size())) {
    throw std::invalid_argument("vocab token list contains duplicates");
  }
  return v;
}

}  // namespace subpair
