#pragma once

#include <filesystem>

#include "mchd/ingest.hpp"

namespace mchd {

// Reads the continuous 16-bit EDF subset (the variant the CHB-MIT corpus
// uses). Signals are converted to physical units with the per-channel
// digital/physical calibration from the header; annotation channels are
// dropped. Malformed or truncated files raise a DataError naming the byte
// offset.
Recording read_edf(const std::filesystem::path& path);

}  // namespace mchd
