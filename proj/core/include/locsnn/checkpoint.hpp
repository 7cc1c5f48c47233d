#pragma once

#include <filesystem>

#include "locsnn/model.hpp"

namespace locsnn {

/// Saves the model as versioned structured text: kind, shape counts, and per
/// branch the kernel config, location order, and weight matrices. Weights
/// are written as hex floats, so save/load round-trips are bit-exact and a
/// given model always serializes to identical bytes.
void save_model(const std::filesystem::path& path, const Model& model);

/// Loads a checkpoint written by save_model. Throws IoError on unreadable
/// files and ValidationError on malformed or version-mismatched content.
Model load_model(const std::filesystem::path& path);

}  // namespace locsnn
