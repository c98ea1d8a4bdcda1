#include "mchd/edf.hpp"

#include <charconv>
#include <cstring>
#include <fstream>
#include <vector>

namespace mchd {

namespace {

struct Reader {
    std::ifstream in;
    std::string path;
    std::size_t offset = 0;

    std::string field(std::size_t len) {
        std::string buf(len, '\0');
        in.read(buf.data(), static_cast<std::streamsize>(len));
        if (!in) {
            throw DataError(path + ": truncated EDF header at byte " + std::to_string(offset));
        }
        offset += len;
        // EDF header fields are space-padded ASCII.
        while (!buf.empty() && (buf.back() == ' ' || buf.back() == '\0')) buf.pop_back();
        std::size_t lead = 0;
        while (lead < buf.size() && buf[lead] == ' ') ++lead;
        return buf.substr(lead);
    }

    long integer(std::size_t len, const char* what) {
        const std::string s = field(len);
        long value = 0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
        if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
            throw DataError(path + ": bad " + std::string(what) + " field before byte " +
                            std::to_string(offset));
        }
        return value;
    }

    double real(std::size_t len, const char* what) {
        const std::string s = field(len);
        try {
            std::size_t used = 0;
            const double value = std::stod(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return value;
        } catch (const std::exception&) {
            throw DataError(path + ": bad " + std::string(what) + " field before byte " +
                            std::to_string(offset));
        }
    }
};

}  // namespace

Recording read_edf(const std::filesystem::path& path) {
    Reader r{std::ifstream(path, std::ios::binary), path.string()};
    if (!r.in) throw DataError("cannot open " + path.string());

    const std::string version = r.field(8);
    if (version != "0") {
        throw DataError(path.string() + ": unsupported EDF version '" + version + "' at byte 0");
    }
    r.field(80);  // patient
    r.field(80);  // recording
    r.field(8);   // start date
    r.field(8);   // start time
    const long header_bytes = r.integer(8, "header size");
    const std::string reserved = r.field(44);
    if (reserved.rfind("EDF+D", 0) == 0) {
        throw DataError(path.string() + ": discontinuous EDF+D files are not supported");
    }
    const long n_records = r.integer(8, "record count");
    const double record_seconds = r.real(8, "record duration");
    const long n_signals = r.integer(4, "signal count");
    if (n_signals <= 0 || n_records < 0 || record_seconds <= 0.0) {
        throw DataError(path.string() + ": inconsistent EDF header before byte " +
                        std::to_string(r.offset));
    }

    const auto ns = static_cast<std::size_t>(n_signals);
    std::vector<std::string> labels(ns);
    std::vector<double> phys_min(ns), phys_max(ns), dig_min(ns), dig_max(ns);
    std::vector<long> samples_per_record(ns);
    for (auto& l : labels) l = r.field(16);
    for (std::size_t s = 0; s < ns; ++s) r.field(80);  // transducer
    for (std::size_t s = 0; s < ns; ++s) r.field(8);   // physical dimension
    for (std::size_t s = 0; s < ns; ++s) phys_min[s] = r.real(8, "physical min");
    for (std::size_t s = 0; s < ns; ++s) phys_max[s] = r.real(8, "physical max");
    for (std::size_t s = 0; s < ns; ++s) dig_min[s] = static_cast<double>(r.integer(8, "digital min"));
    for (std::size_t s = 0; s < ns; ++s) dig_max[s] = static_cast<double>(r.integer(8, "digital max"));
    for (std::size_t s = 0; s < ns; ++s) r.field(80);  // prefiltering
    for (std::size_t s = 0; s < ns; ++s) samples_per_record[s] = r.integer(8, "samples per record");
    for (std::size_t s = 0; s < ns; ++s) r.field(32);  // reserved

    if (static_cast<long>(r.offset) != header_bytes) {
        throw DataError(path.string() + ": header size field says " + std::to_string(header_bytes) +
                        " but the header ends at byte " + std::to_string(r.offset));
    }

    // Keep data channels; annotation streams are not signal data.
    std::vector<std::size_t> keep;
    for (std::size_t s = 0; s < ns; ++s) {
        if (labels[s] != "EDF Annotations") keep.push_back(s);
    }
    if (keep.empty()) throw DataError(path.string() + ": no data signals");
    const long spr = samples_per_record[keep[0]];
    for (std::size_t s : keep) {
        if (samples_per_record[s] != spr) {
            throw DataError(path.string() + ": mixed per-signal sampling rates are not supported");
        }
        if (samples_per_record[s] <= 0 || dig_max[s] <= dig_min[s]) {
            throw DataError(path.string() + ": bad signal header for '" + labels[s] + "'");
        }
    }

    long record_words = 0;
    for (std::size_t s = 0; s < ns; ++s) record_words += samples_per_record[s];

    Recording rec;
    rec.id = path.stem().string();
    rec.fs = static_cast<double>(spr) / record_seconds;
    for (std::size_t s : keep) rec.channels.push_back(labels[s]);
    rec.samples.resize(static_cast<Eigen::Index>(keep.size()),
                       static_cast<Eigen::Index>(n_records * spr));

    std::vector<double> gain(ns), offset_phys(ns);
    for (std::size_t s = 0; s < ns; ++s) {
        if (dig_max[s] > dig_min[s]) {
            gain[s] = (phys_max[s] - phys_min[s]) / (dig_max[s] - dig_min[s]);
            offset_phys[s] = phys_min[s] - dig_min[s] * gain[s];
        }
    }

    std::vector<std::int16_t> record(static_cast<std::size_t>(record_words));
    for (long rec_idx = 0; rec_idx < n_records; ++rec_idx) {
        r.in.read(reinterpret_cast<char*>(record.data()),
                  static_cast<std::streamsize>(record.size() * sizeof(std::int16_t)));
        if (!r.in) {
            throw DataError(path.string() + ": truncated data record " + std::to_string(rec_idx) +
                            " at byte " + std::to_string(r.offset));
        }
        r.offset += record.size() * sizeof(std::int16_t);

        std::size_t word = 0;
        Eigen::Index out_row = 0;
        for (std::size_t s = 0; s < ns; ++s) {
            const bool kept = labels[s] != "EDF Annotations";
            for (long i = 0; i < samples_per_record[s]; ++i, ++word) {
                if (kept) {
                    rec.samples(out_row, rec_idx * spr + i) =
                        offset_phys[s] + gain[s] * static_cast<double>(record[word]);
                }
            }
            if (kept) ++out_row;
        }
    }
    return rec;
}

}  // namespace mchd
