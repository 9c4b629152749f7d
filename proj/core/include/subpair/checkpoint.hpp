#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "subpair/model.hpp"

namespace subpair {

// Self-describing binary checkpoint: a JSON header carrying the model
// config and vocabularies, followed by the named parameter tensors as raw
// 64-bit floats. Save -> load -> save is byte-identical.
void save_checkpoint(const PwiModel& model, std::ostream& os);
void save_checkpoint(const PwiModel& model, const std::string& path);
std::vector<std::uint8_t> checkpoint_bytes(const PwiModel& model);

PwiModel load_checkpoint(std::istream& is);
// Throws ConfigError when the file is missing or not a checkpoint.
PwiModel load_checkpoint(const std::string& path);
PwiModel load_checkpoint_bytes(const std::vector<std::uint8_t>& bytes);

}  // namespace subpair
