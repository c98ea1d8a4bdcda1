#include "mchd/model.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace mchd {

SubClass& ModelMC::add_subclass(GlobalLabel label, const Hypervector& founder) {
    SubClass sc;
    sc.id = next_id++;
    sc.label = label;
    sc.acc = BitAccumulator(dim);
    sc.acc.add(founder);
    sc.prototype = founder;
    subclasses.push_back(std::move(sc));
    return subclasses.back();
}

void ModelMC::absorb(std::size_t index, const Hypervector& hv) {
    SubClass& sc = subclasses.at(index);
    sc.acc.add(hv);
    sc.prototype = sc.acc.binarize(tiebreak);
}

std::size_t ModelMC::count_for_label(GlobalLabel label) const {
    std::size_t n = 0;
    for (const auto& sc : subclasses) n += sc.label == label;
    return n;
}

std::uint64_t ModelMC::total_absorbed() const {
    std::uint64_t n = 0;
    for (const auto& sc : subclasses) n += sc.count();
    return n;
}

bool ModelMC::has_label(GlobalLabel label) const {
    for (const auto& sc : subclasses) {
        if (sc.label == label) return true;
    }
    return false;
}

namespace {

constexpr std::array<char, 4> kMagic{'M', 'C', 'H', 'D'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void write_raw(std::ostream& out, T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    char buf[sizeof(T)];
    std::memcpy(buf, &value, sizeof(T));
    out.write(buf, sizeof(T));
}

template <typename T>
T read_raw(std::istream& in) {
    static_assert(std::is_trivially_copyable_v<T>);
    char buf[sizeof(T)];
    in.read(buf, sizeof(T));
    if (!in) throw DataError("model file truncated");
    T value;
    std::memcpy(&value, buf, sizeof(T));
    return value;
}

void write_string(std::ostream& out, const std::string& s) {
    write_raw<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string read_string(std::istream& in) {
    const auto len = read_raw<std::uint32_t>(in);
    std::string s(len, '\0');
    in.read(s.data(), static_cast<std::streamsize>(len));
    if (!in) throw DataError("model file truncated");
    return s;
}

// Hypervector wire format: dim prefix, then little-endian 64-bit words.
void write_hypervector(std::ostream& out, const Hypervector& hv) {
    write_raw<std::uint64_t>(out, hv.dim());
    for (std::uint64_t w : hv.words()) write_raw<std::uint64_t>(out, w);
}

Hypervector read_hypervector(std::istream& in) {
    const auto dim = read_raw<std::uint64_t>(in);
    std::vector<std::uint64_t> words(words_for_dim(dim));
    for (auto& w : words) w = read_raw<std::uint64_t>(in);
    return Hypervector::from_words(dim, std::move(words));
}

}  // namespace

void write_model(std::ostream& out, const TrainedModel& m) {
    out.write(kMagic.data(), kMagic.size());
    write_raw<std::uint32_t>(out, kVersion);
    write_raw<std::uint64_t>(out, m.params.dim);
    write_raw<std::uint32_t>(out, m.params.num_levels);
    write_raw<std::uint32_t>(out, m.params.n_channels);
    write_raw<std::uint32_t>(out, m.params.n_features);
    write_raw<std::uint64_t>(out, m.params.seed);
    write_raw<double>(out, m.params.fs);
    write_raw<double>(out, m.params.wlen_seconds);
    write_raw<double>(out, m.params.wstep_seconds);
    write_raw<std::uint32_t>(out, m.params.smooth_len);

    write_raw<std::uint32_t>(out, 2);
    write_string(out, label_name(GlobalLabel::non_seizure));
    write_string(out, label_name(GlobalLabel::seizure));

    write_raw<std::uint32_t>(out, static_cast<std::uint32_t>(m.calibration.num_features()));
    for (Eigen::Index f = 0; f < m.calibration.num_features(); ++f) {
        write_raw<double>(out, m.calibration.lower()[f]);
    }
    for (Eigen::Index f = 0; f < m.calibration.num_features(); ++f) {
        write_raw<double>(out, m.calibration.upper()[f]);
    }

    write_hypervector(out, m.model.tiebreak.bits);
    write_raw<std::uint32_t>(out, m.model.next_id);
    write_raw<std::uint32_t>(out, static_cast<std::uint32_t>(m.model.subclasses.size()));
    for (const auto& sc : m.model.subclasses) {
        write_raw<std::uint32_t>(out, sc.id);
        write_raw<std::uint8_t>(out, static_cast<std::uint8_t>(sc.label));
        write_raw<std::uint64_t>(out, sc.count());
        for (std::uint32_t s : sc.acc.sums()) write_raw<std::uint32_t>(out, s);
        write_hypervector(out, sc.prototype);
    }
    if (!out) throw DataError("failed to write model stream");
}

TrainedModel read_model(std::istream& in) {
    std::array<char, 4> magic{};
    in.read(magic.data(), magic.size());
    if (!in || magic != kMagic) throw DataError("not a model file (bad magic)");
    const auto version = read_raw<std::uint32_t>(in);
    if (version != kVersion) {
        throw DataError("unsupported model version " + std::to_string(version));
    }

    TrainedModel m;
    m.params.dim = read_raw<std::uint64_t>(in);
    m.params.num_levels = read_raw<std::uint32_t>(in);
    m.params.n_channels = read_raw<std::uint32_t>(in);
    m.params.n_features = read_raw<std::uint32_t>(in);
    m.params.seed = read_raw<std::uint64_t>(in);
    m.params.fs = read_raw<double>(in);
    m.params.wlen_seconds = read_raw<double>(in);
    m.params.wstep_seconds = read_raw<double>(in);
    m.params.smooth_len = read_raw<std::uint32_t>(in);

    const auto n_labels = read_raw<std::uint32_t>(in);
    if (n_labels != 2) throw DataError("model must have exactly 2 global labels");
    read_string(in);
    read_string(in);

    const auto n_cal = read_raw<std::uint32_t>(in);
    Eigen::VectorXd lower(n_cal), upper(n_cal);
    for (std::uint32_t f = 0; f < n_cal; ++f) lower[f] = read_raw<double>(in);
    for (std::uint32_t f = 0; f < n_cal; ++f) upper[f] = read_raw<double>(in);
    m.calibration = Calibration(std::move(lower), std::move(upper));

    m.model.dim = m.params.dim;
    m.model.tiebreak.bits = read_hypervector(in);
    m.model.next_id = read_raw<std::uint32_t>(in);
    const auto n_sub = read_raw<std::uint32_t>(in);
    m.model.subclasses.reserve(n_sub);
    for (std::uint32_t s = 0; s < n_sub; ++s) {
        SubClass sc;
        sc.id = read_raw<std::uint32_t>(in);
        const auto raw_label = read_raw<std::uint8_t>(in);
        if (raw_label > 1) throw DataError("bad label in model file");
        sc.label = static_cast<GlobalLabel>(raw_label);
        const auto count = read_raw<std::uint64_t>(in);
        std::vector<std::uint32_t> sums(m.params.dim);
        for (auto& v : sums) v = read_raw<std::uint32_t>(in);
        sc.acc = BitAccumulator(m.params.dim, std::move(sums), count);
        sc.prototype = read_hypervector(in);
        if (sc.prototype.dim() != m.params.dim) throw DataError("prototype dimension mismatch");
        m.model.subclasses.push_back(std::move(sc));
    }
    return m;
}

void save_model(const TrainedModel& m, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open " + path.string() + " for writing");
    write_model(out, m);
}

TrainedModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    return read_model(in);
}

}  // namespace mchd
