#include "mchd/dataset.hpp"

#include <algorithm>
#include <fstream>

#include <nlohmann/json.hpp>

#include "mchd/signal_io.hpp"

namespace mchd {

std::vector<std::string> Dataset::subjects() const {
    std::vector<std::string> out;
    for (const auto& f : files) {
        if (std::find(out.begin(), out.end(), f.subject) == out.end()) out.push_back(f.subject);
    }
    return out;
}

std::vector<const SubjectFile*> Dataset::files_of(const std::string& subject) const {
    std::vector<const SubjectFile*> out;
    for (const auto& f : files) {
        if (f.subject == subject) out.push_back(&f);
    }
    std::sort(out.begin(), out.end(),
              [](const SubjectFile* a, const SubjectFile* b) { return a->index < b->index; });
    return out;
}

void save_dataset(const Dataset& ds, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    nlohmann::json manifest;
    manifest["factor"] = ds.factor;
    manifest["seed"] = ds.seed;
    manifest["files"] = nlohmann::json::array();
    for (const auto& f : ds.files) {
        std::filesystem::create_directories(dir / f.subject);
        const auto rel = std::filesystem::path(f.subject) / ("file_" + std::to_string(f.index) + ".csv");
        write_columnar(dir / rel, f.signal);

        nlohmann::json jf;
        jf["subject"] = f.subject;
        jf["index"] = f.index;
        jf["path"] = rel.generic_string();
        jf["seizure_onset"] = f.seizure_onset;
        jf["seizure_offset"] = f.seizure_offset;
        jf["seed"] = f.seed;
        jf["provenance"] = nlohmann::json::array();
        for (const auto& p : f.provenance) {
            jf["provenance"].push_back({{"source", p.source_recording},
                                        {"offset", p.source_offset_seconds},
                                        {"duration", p.duration_seconds},
                                        {"seizure", p.is_seizure}});
        }
        manifest["files"].push_back(std::move(jf));
    }
    std::ofstream out(dir / "manifest.json");
    if (!out) throw DataError("cannot write manifest in " + dir.string());
    out << manifest.dump(2) << "\n";
}

Dataset load_dataset(const std::filesystem::path& dir) {
    std::ifstream in(dir / "manifest.json");
    if (!in) throw DataError("no manifest.json in " + dir.string());
    nlohmann::json manifest;
    try {
        in >> manifest;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(dir.string() + "/manifest.json: " + e.what());
    }

    Dataset ds;
    try {
        ds.factor = manifest.at("factor").get<int>();
        ds.seed = manifest.at("seed").get<std::uint64_t>();
        for (const auto& jf : manifest.at("files")) {
            SubjectFile f;
            f.subject = jf.at("subject").get<std::string>();
            f.index = jf.at("index").get<int>();
            f.seizure_onset = jf.at("seizure_onset").get<double>();
            f.seizure_offset = jf.at("seizure_offset").get<double>();
            f.seed = jf.at("seed").get<std::uint64_t>();
            for (const auto& jp : jf.at("provenance")) {
                f.provenance.push_back({jp.at("source").get<std::string>(),
                                        jp.at("offset").get<double>(),
                                        jp.at("duration").get<double>(),
                                        jp.at("seizure").get<bool>()});
            }
            f.signal = read_columnar(dir / jf.at("path").get<std::string>());
            ds.files.push_back(std::move(f));
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError(dir.string() + "/manifest.json: " + e.what());
    }
    return ds;
}

}  // namespace mchd
