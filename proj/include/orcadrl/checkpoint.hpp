#pragma once

#include <string>

#include "orcadrl/trainer.hpp"

namespace orcadrl {

/// Versioned structured-text dump: header with dimensions and seeds, then
/// one flat parameter block per network. Round trips bit-exactly.
std::string checkpoint_to_text(const PolicyBundle& bundle);

/// Parses a checkpoint; throws std::runtime_error on any malformed content
/// (bad magic/version, dimension mismatch, wrong parameter counts).
PolicyBundle checkpoint_from_text(const std::string& text);

void save_checkpoint(const std::string& path, const PolicyBundle& bundle);
PolicyBundle load_checkpoint(const std::string& path);

}  // namespace orcadrl
