#pragma once

#include <string>

#include <json.hpp>

#include "reconn/fields.hpp"

namespace reconn {

// Architecture descriptor: kind, network shapes, level-set kinds, cutoff
// radii and current exponent values.
nlohmann::json field_descriptor(const Field& field);

// <prefix>.json holds the descriptor, <prefix>.bin the parameters as raw
// little-endian 64-bit doubles.
void save_checkpoint(const Field& field, const std::string& prefix);

// Loads parameters into a compatibly-shaped field; throws on kind or size
// mismatch.
void load_checkpoint(Field& field, const std::string& prefix);

}  // namespace reconn
