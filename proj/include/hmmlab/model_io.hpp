// Model configuration files (JSON).
//
//   {
//     "label": "M1",
//     "kernel": [[0.9, 0.1], [0.1, 0.9]],
//     "stationary": [0.5, 0.5],                      // optional, computed if absent
//     "channel": {"type": "finite", "m": 2,
//                 "g": [[0.8, 0.2], [0.2, 0.8]],
//                 "phi": [1.0, 1.0]}                  // phi optional, defaults to 1
//   }
//
// or "channel": {"type": "gaussian", "means": [-1.0, 1.0], "sigma": 0.5}.
// Finite-alphabet models round-trip bit-exactly through serialize/parse.
#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "hmmlab/model.hpp"

namespace hmmlab::io {

/// Throws ConfigError on malformed text and ModelError on invalid model data.
HmmModel parse_model(std::string_view text);
std::string serialize_model(const HmmModel &model);

/// ConfigError when the file is missing or unreadable.
HmmModel load_model(const std::filesystem::path &path);
void save_model(const std::filesystem::path &path, const HmmModel &model);

/// Whole file as a string; ConfigError when missing.
std::string read_file(const std::filesystem::path &path);

} // namespace hmmlab::io
