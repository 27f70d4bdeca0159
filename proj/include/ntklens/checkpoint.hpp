#pragma once

#include "ntklens/model.hpp"

#include <string>

namespace ntklens {

// JSON checkpoints. Doubles survive the round trip bit-exactly. Loading a
// file with an unknown format version or inconsistent shapes throws
// UnsupportedError / ConfigError.
void save_model(const std::string &path, const Model &model);
Model load_model(const std::string &path);

} // namespace ntklens
