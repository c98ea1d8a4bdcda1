#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "mchd/calibration.hpp"
#include "mchd/hypervector.hpp"
#include "mchd/labels.hpp"

namespace mchd {

// One prototype centroid: the integer accumulator is kept alongside the
// binarized prototype so re-binarization after every absorption is exact.
struct SubClass {
    std::uint32_t id = 0;
    GlobalLabel label = GlobalLabel::non_seizure;
    BitAccumulator acc;
    Hypervector prototype;

    std::uint64_t count() const { return acc.count(); }
};

// Multi-centroid model: sub-classes in creation order (ids ascending).
struct ModelMC {
    std::size_t dim = 0;
    TieBreaker tiebreak;
    std::vector<SubClass> subclasses;
    std::uint32_t next_id = 0;

    SubClass& add_subclass(GlobalLabel label, const Hypervector& founder);
    void absorb(std::size_t index, const Hypervector& hv);

    std::size_t count_for_label(GlobalLabel label) const;
    std::uint64_t total_absorbed() const;
    bool has_label(GlobalLabel label) const;
};

// A 2-class model is a multi-centroid model with exactly one sub-class per
// label; it flows through the same inference path.
using Model2C = ModelMC;

// Everything needed to reproduce the encoding side of a trained model.
struct PipelineParams {
    std::uint64_t dim = 10240;
    std::uint32_t num_levels = 20;
    std::uint32_t n_channels = 18;
    std::uint32_t n_features = 46;
    std::uint64_t seed = 0;  // encoder context + tie-breaker stream
    double fs = 256.0;
    double wlen_seconds = 8.0;
    double wstep_seconds = 1.0;
    std::uint32_t smooth_len = 5;
};

struct TrainedModel {
    PipelineParams params;
    Calibration calibration;
    ModelMC model;
};

// Binary model file (fixed little-endian layout, see README):
// header + calibration bounds + sub-class records.
void write_model(std::ostream& out, const TrainedModel& m);
TrainedModel read_model(std::istream& in);
void save_model(const TrainedModel& m, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace mchd
