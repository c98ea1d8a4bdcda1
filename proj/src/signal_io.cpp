#include "mchd/signal_io.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mchd/edf.hpp"

namespace mchd {

namespace {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

}  // namespace

Recording read_columnar(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());

    Recording rec;
    rec.id = path.stem().string();

    std::string key;
    if (!(in >> key) || key != "fs" || !(in >> rec.fs) || rec.fs <= 0.0) {
        throw DataError(path.string() + ": expected 'fs <hz>' header line");
    }
    std::string channels_line;
    if (!(in >> key) || key != "channels" || !(in >> channels_line)) {
        throw DataError(path.string() + ": expected 'channels <a,b,...>' header line");
    }
    std::stringstream split(channels_line);
    std::string name;
    while (std::getline(split, name, ',')) {
        if (!name.empty()) rec.channels.push_back(name);
    }
    if (rec.channels.empty()) throw DataError(path.string() + ": no channels listed");

    std::vector<double> values;
    double v;
    while (in >> v) values.push_back(v);
    const std::size_t nch = rec.channels.size();
    if (values.empty() || values.size() % nch != 0) {
        throw DataError(path.string() + ": sample count is not a multiple of the channel count");
    }
    const auto n = static_cast<Eigen::Index>(values.size() / nch);
    rec.samples.resize(static_cast<Eigen::Index>(nch), n);
    for (Eigen::Index t = 0; t < n; ++t) {
        for (std::size_t c = 0; c < nch; ++c) {
            rec.samples(static_cast<Eigen::Index>(c), t) = values[static_cast<std::size_t>(t) * nch + c];
        }
    }
    return rec;
}

void write_columnar(const std::filesystem::path& path, const Recording& rec) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open " + path.string() + " for writing");
    out << "fs " << format_double(rec.fs) << "\n";
    out << "channels ";
    for (std::size_t c = 0; c < rec.channels.size(); ++c) {
        if (c) out << ',';
        out << rec.channels[c];
    }
    out << "\n";
    for (Eigen::Index t = 0; t < rec.n_samples(); ++t) {
        for (Eigen::Index c = 0; c < rec.n_channels(); ++c) {
            if (c) out << ' ';
            out << format_double(rec.samples(c, t));
        }
        out << "\n";
    }
    if (!out) throw DataError("failed writing " + path.string());
}

Recording read_signal(const std::filesystem::path& path) {
    auto ext = path.extension().string();
    for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (ext == ".edf") return read_edf(path);
    return read_columnar(path);
}

std::vector<AnnotationLine> read_annotations(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    std::vector<AnnotationLine> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::stringstream ss(line);
        AnnotationLine a;
        if (!(ss >> a.subject)) continue;  // blank line
        if (!(ss >> a.annotation.recording_id >> a.annotation.onset_seconds >>
              a.annotation.offset_seconds) ||
            a.annotation.onset_seconds >= a.annotation.offset_seconds) {
            throw DataError(path.string() + ":" + std::to_string(lineno) +
                            ": expected 'subject recording onset offset'");
        }
        out.push_back(std::move(a));
    }
    return out;
}

void write_annotations(const std::filesystem::path& path, std::span<const AnnotationLine> lines) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open " + path.string() + " for writing");
    out << "# subject recording onset_seconds offset_seconds\n";
    for (const auto& a : lines) {
        out << a.subject << ' ' << a.annotation.recording_id << ' '
            << format_double(a.annotation.onset_seconds) << ' '
            << format_double(a.annotation.offset_seconds) << "\n";
    }
}

std::vector<std::string> read_channel_list(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::stringstream ss(line);
        std::string name;
        if (ss >> name) out.push_back(name);
    }
    if (out.empty()) throw DataError(path.string() + ": empty channel list");
    return out;
}

std::span<const std::string> default_montage18() {
    static const std::array<std::string, 18> channels{
        "FP1-F7", "F7-T7",  "T7-P7",  "P7-O1", "FP1-F3", "F3-C3",
        "C3-P3",  "P3-O1",  "FP2-F4", "F4-C4", "C4-P4",  "P4-O2",
        "FP2-F8", "F8-T8",  "T8-P8",  "P8-O2", "FZ-CZ",  "CZ-PZ"};
    return channels;
}

}  // namespace mchd
