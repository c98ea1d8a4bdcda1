#pragma once

#include <filesystem>

#include "mchd/ingest.hpp"

namespace mchd {

// A prepared dataset: per-seizure SubjectFiles grouped by subject, stored on
// disk as columnar signal files plus a JSON manifest carrying annotations,
// provenance and seeds.
struct Dataset {
    int factor = 1;
    std::uint64_t seed = 0;
    std::vector<SubjectFile> files;

    std::vector<std::string> subjects() const;
    std::vector<const SubjectFile*> files_of(const std::string& subject) const;
};

void save_dataset(const Dataset& ds, const std::filesystem::path& dir);
Dataset load_dataset(const std::filesystem::path& dir);

}  // namespace mchd
