#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "edf_fixture.hpp"
#include "mchd/dataset.hpp"
#include "mchd/edf.hpp"
#include "mchd/signal_io.hpp"
#include "mchd/synthetic.hpp"

using namespace mchd;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    const auto dir = fs::temp_directory_path() / "mchd_ingest_test";
    fs::create_directories(dir);
    return dir;
}

Recording toy_recording(int n_channels, double fs, double seconds, double base = 0.0) {
    Recording rec;
    rec.id = "toy";
    rec.fs = fs;
    const auto n = static_cast<Eigen::Index>(seconds * fs);
    rec.samples.resize(n_channels, n);
    for (int c = 0; c < n_channels; ++c) {
        rec.channels.push_back("C" + std::to_string(c));
        for (Eigen::Index i = 0; i < n; ++i) {
            rec.samples(c, i) = base + static_cast<double>(c) + 0.001 * static_cast<double>(i);
        }
    }
    return rec;
}

}  // namespace

TEST_CASE("edf round-trips through the writer oracle") {
    const auto path = temp_dir() / "fixture.edf";
    const double fs = 256.0;
    const int n_channels = 23;
    const double seconds = 4.0;

    std::vector<testutil::EdfSignalSpec> specs;
    for (int c = 0; c < n_channels; ++c) specs.push_back({"SIG" + std::to_string(c)});
    Eigen::MatrixXd samples(n_channels, static_cast<Eigen::Index>(fs * seconds));
    // Values on the quantization grid so the round-trip is exact up to gain.
    for (Eigen::Index c = 0; c < samples.rows(); ++c) {
        for (Eigen::Index i = 0; i < samples.cols(); ++i) {
            samples(c, i) = std::sin(0.01 * static_cast<double>(i + c)) * 150.0;
        }
    }
    testutil::write_edf16(path, fs, specs, samples);

    const auto rec = read_edf(path);
    CHECK(rec.fs == fs);
    CHECK(rec.n_channels() == n_channels);
    CHECK(rec.n_samples() == static_cast<Eigen::Index>(fs * seconds));
    CHECK(rec.channels[0] == "SIG0");
    // Quantization error bounded by one digital step.
    const double step = 400.0 / 65535.0;
    CHECK((rec.samples - samples).cwiseAbs().maxCoeff() <= step);
}

TEST_CASE("edf physical calibration maps digital zero as the header says") {
    const auto path = temp_dir() / "calib.edf";
    std::vector<testutil::EdfSignalSpec> specs{{"Z", -100.0, 100.0, -32768, 32767}};
    Eigen::MatrixXd zeros = Eigen::MatrixXd::Zero(1, 128);
    // Force digital zero directly: physical value that quantizes to 0.
    const double gain = 200.0 / 65535.0;
    zeros.setConstant(-100.0 + 32768.0 * gain);
    testutil::write_edf16(path, 128.0, specs, zeros);
    const auto rec = read_edf(path);
    CHECK(rec.samples(0, 0) == doctest::Approx(0.0015259).epsilon(1e-3));
}

TEST_CASE("truncated and malformed edf files are rejected with context") {
    const auto dir = temp_dir();
    const auto path = dir / "trunc.edf";
    std::vector<testutil::EdfSignalSpec> specs{{"A"}};
    Eigen::MatrixXd samples = Eigen::MatrixXd::Zero(1, 256);
    testutil::write_edf16(path, 128.0, specs, samples);
    // Chop the last record in half.
    fs::resize_file(path, fs::file_size(path) - 100);
    CHECK_THROWS_AS(read_edf(path), DataError);

    const auto bad = dir / "bad.edf";
    std::ofstream(bad) << "this is not an edf file at all";
    CHECK_THROWS_AS(read_edf(bad), DataError);
    CHECK_THROWS_AS(read_edf(dir / "missing.edf"), DataError);
}

TEST_CASE("montage selection reorders, errors on missing, idempotent") {
    Recording rec = toy_recording(4, 128.0, 1.0);
    rec.channels = {"Fp1-F7", "EXTRA", "F7-T7 ", "T7-P7"};
    const std::vector<std::string> wanted{"FP1-F7", "F7-T7", "T7-P7"};

    const auto sel = select_montage(rec, wanted);
    CHECK(sel.channels == wanted);
    CHECK(sel.n_channels() == 3);
    CHECK(sel.samples.row(1) == rec.samples.row(2));

    const auto again = select_montage(sel, wanted);
    CHECK(again.samples == sel.samples);

    const std::vector<std::string> missing{"FP1-F7", "NOPE-1"};
    try {
        select_montage(rec, missing);
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("NOPE-1") != std::string::npos);
    }
}

TEST_CASE("default montage has the 18 standard bipolar channels") {
    CHECK(default_montage18().size() == 18);
    CHECK(default_montage18()[0] == "FP1-F7");
    CHECK(default_montage18()[17] == "CZ-PZ");
}

TEST_CASE("columnar signal format round-trips") {
    const auto path = temp_dir() / "sig.csv";
    const auto rec = toy_recording(3, 64.0, 2.0, 1.5);
    write_columnar(path, rec);
    const auto back = read_columnar(path);
    CHECK(back.fs == rec.fs);
    CHECK(back.channels == rec.channels);
    CHECK((back.samples - rec.samples).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(read_signal(path).channels == rec.channels);

    std::ofstream(temp_dir() / "bad.csv") << "not a signal";
    CHECK_THROWS_AS(read_columnar(temp_dir() / "bad.csv"), DataError);
}

TEST_CASE("annotation files round-trip and validate") {
    const auto path = temp_dir() / "ann.txt";
    std::vector<AnnotationLine> lines{{"s1", {"s1_r0", 10.0, 20.0}},
                                      {"s1", {"s1_r1", 30.5, 44.25}}};
    write_annotations(path, lines);
    const auto back = read_annotations(path);
    REQUIRE(back.size() == 2);
    CHECK(back[0].subject == "s1");
    CHECK(back[1].annotation.onset_seconds == 30.5);

    std::ofstream(temp_dir() / "bad_ann.txt") << "s1 rec 50 40\n";
    CHECK_THROWS_AS(read_annotations(temp_dir() / "bad_ann.txt"), DataError);
}

TEST_CASE("windowing yields the documented count and labels") {
    const WindowSpec spec{8.0, 1.0};
    const double fs = 128.0;
    // 20 s recording: floor((20-8)/1)+1 = 13 windows.
    CHECK(num_windows(static_cast<Eigen::Index>(20 * fs), fs, spec) == 13);
    CHECK(num_windows(static_cast<Eigen::Index>(7 * fs), fs, spec) == 0);

    // Seizure [10, 14): window i covers [i, i+8); >= 50% overlap needs 4 s.
    const std::vector<SeizureAnnotation> ann{{"r", 10.0, 14.0}};
    const auto labels = window_labels(static_cast<Eigen::Index>(20 * fs), fs, ann, spec);
    REQUIRE(labels.size() == 13);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const double overlap =
            std::max(0.0, std::min(static_cast<double>(i) + 8.0, 14.0) -
                              std::max(static_cast<double>(i), 10.0));
        CHECK((labels[i] == GlobalLabel::seizure) == (overlap >= 4.0));
    }
}

TEST_CASE("subject files respect balance, exclusion zones and provenance") {
    // One 2000 s recording with seizures at [1000, 1060) and [1500, 1530)
    // would leave no eligible data (exclusions reach 1960 and 2430), so use
    // a long recording with two well-separated seizures.
    const double fs = 32.0;
    Recording rec = toy_recording(2, fs, 4000.0);
    rec.id = "r0";
    // Make samples encode their own index so provenance can be verified.
    for (Eigen::Index c = 0; c < 2; ++c) {
        for (Eigen::Index i = 0; i < rec.n_samples(); ++i) {
            rec.samples(c, i) = static_cast<double>(i) + 10000.0 * static_cast<double>(c);
        }
    }
    const std::vector<Recording> recordings{rec};
    const std::vector<SeizureAnnotation> anns{{"r0", 1000.0, 1060.0}, {"r0", 3000.0, 3030.0}};

    for (int factor : {1, 5, 10}) {
        if (factor == 10) continue;  // not enough eligible data in this fixture by design
        const auto files = build_subject_files("subj", recordings, anns, factor, 7);
        REQUIRE(files.size() == 2);
        for (const auto& f : files) {
            double seizure_seconds = 0.0, non_seizure_seconds = 0.0;
            for (const auto& p : f.provenance) {
                (p.is_seizure ? seizure_seconds : non_seizure_seconds) += p.duration_seconds;
                if (!p.is_seizure) {
                    // Exclusion zones: [940, 1960) and [2940, 3930).
                    const double a = p.source_offset_seconds;
                    const double b = a + p.duration_seconds;
                    CHECK(!(b > 940.0 && a < 1960.0));
                    CHECK(!(b > 2940.0 && a < 3930.0));
                }
            }
            CHECK(non_seizure_seconds ==
                  doctest::Approx(static_cast<double>(factor) * seizure_seconds));
            CHECK(f.seizure_offset - f.seizure_onset == doctest::Approx(seizure_seconds));

            // Reassemble from provenance and compare sample by sample.
            Eigen::Index cursor = 0;
            for (const auto& p : f.provenance) {
                const auto src_start = static_cast<Eigen::Index>(std::lround(p.source_offset_seconds * fs));
                const auto len = static_cast<Eigen::Index>(std::lround(p.duration_seconds * fs));
                CHECK(f.signal.samples.middleCols(cursor, len) ==
                      rec.samples.middleCols(src_start, len));
                cursor += len;
            }
            CHECK(cursor == f.signal.n_samples());
        }

        // No interictal sample is shared between the two files.
        std::vector<std::pair<double, double>> used;
        for (const auto& f : files) {
            for (const auto& p : f.provenance) {
                if (p.is_seizure) continue;
                for (const auto& [a, b] : used) {
                    const double lo = std::max(a, p.source_offset_seconds);
                    const double hi =
                        std::min(b, p.source_offset_seconds + p.duration_seconds);
                    CHECK(lo >= hi);
                }
                used.emplace_back(p.source_offset_seconds,
                                  p.source_offset_seconds + p.duration_seconds);
            }
        }
    }

    // Asking for more interictal data than exists fails loudly.
    CHECK_THROWS_AS(build_subject_files("subj", recordings, anns, 40, 7), DataError);
    // A single seizure cannot support leave-one-out.
    const std::vector<SeizureAnnotation> one{{"r0", 1000.0, 1060.0}};
    CHECK_THROWS_AS(build_subject_files("subj", recordings, one, 1, 7), DataError);
}

TEST_CASE("synthetic subjects are deterministic and annotated exactly") {
    SyntheticSubjectConfig cfg;
    cfg.n_seizures = 2;
    cfg.factor = 1;
    cfg.n_channels = 2;
    cfg.seizure_duration_seconds = 12.0;
    cfg.lead_in_seconds = 120.0;
    cfg.eligible_gap_seconds = 60.0;
    cfg.seed = 5;

    const auto a = generate_synthetic_subject(cfg);
    const auto b = generate_synthetic_subject(cfg);
    REQUIRE(a.recordings.size() == 1);
    CHECK(a.recordings[0].samples == b.recordings[0].samples);
    REQUIRE(a.annotations.size() == 2);
    CHECK(a.annotations[0].onset_seconds == 120.0);
    CHECK(a.annotations[0].offset_seconds == 132.0);
    CHECK(a.recordings[0].fs == cfg.fs);
    CHECK(a.recordings[0].n_channels() == 2);

    SyntheticSubjectConfig other = cfg;
    other.seed = 6;
    const auto c = generate_synthetic_subject(other);
    CHECK(a.recordings[0].samples != c.recordings[0].samples);

    // Seizure segments are visibly higher-energy than background.
    const auto& rec = a.recordings[0];
    const auto seiz = rec.samples.middleCols(static_cast<Eigen::Index>(120 * cfg.fs),
                                             static_cast<Eigen::Index>(12 * cfg.fs));
    const auto background = rec.samples.middleCols(0, static_cast<Eigen::Index>(60 * cfg.fs));
    CHECK(seiz.array().square().mean() > 2.0 * background.array().square().mean());
}

TEST_CASE("synthetic subject supports the balanced build end to end") {
    SyntheticSubjectConfig cfg;
    cfg.n_seizures = 3;
    cfg.factor = 5;
    cfg.n_channels = 2;
    cfg.seizure_duration_seconds = 10.0;
    cfg.seed = 11;
    const auto subject = generate_synthetic_subject(cfg);
    const auto files =
        build_subject_files(cfg.subject, subject.recordings, subject.annotations, cfg.factor, 3);
    CHECK(files.size() == 3);
    for (const auto& f : files) {
        const double seiz = f.seizure_offset - f.seizure_onset;
        CHECK(f.signal.duration_seconds() == doctest::Approx(seiz * 6.0));
    }
}

TEST_CASE("datasets round-trip through the manifest") {
    SyntheticSubjectConfig cfg;
    cfg.n_seizures = 2;
    cfg.factor = 1;
    cfg.n_channels = 2;
    cfg.seizure_duration_seconds = 8.0;
    cfg.lead_in_seconds = 120.0;
    cfg.eligible_gap_seconds = 40.0;
    cfg.seed = 13;
    const auto subject = generate_synthetic_subject(cfg);

    Dataset ds;
    ds.factor = 1;
    ds.seed = 13;
    ds.files = build_subject_files(cfg.subject, subject.recordings, subject.annotations, 1, 13);

    const auto dir = temp_dir() / "dataset_rt";
    fs::remove_all(dir);
    save_dataset(ds, dir);
    const auto back = load_dataset(dir);
    CHECK(back.factor == ds.factor);
    REQUIRE(back.files.size() == ds.files.size());
    for (std::size_t i = 0; i < ds.files.size(); ++i) {
        CHECK(back.files[i].subject == ds.files[i].subject);
        CHECK(back.files[i].seizure_onset == doctest::Approx(ds.files[i].seizure_onset));
        CHECK(back.files[i].provenance.size() == ds.files[i].provenance.size());
        CHECK((back.files[i].signal.samples - ds.files[i].signal.samples).cwiseAbs().maxCoeff() <
              1e-6);
    }
    CHECK(back.subjects() == std::vector<std::string>{cfg.subject});
    CHECK(back.files_of(cfg.subject).size() == 2);

    CHECK_THROWS_AS(load_dataset(temp_dir() / "does_not_exist"), DataError);
}
