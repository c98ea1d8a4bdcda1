#pragma once

#include <filesystem>

#include "mchd/ingest.hpp"

namespace mchd {

// Columnar text signal format:
//   fs <hz>
//   channels <name>,<name>,...
//   one whitespace-separated row of samples per time instant
Recording read_columnar(const std::filesystem::path& path);
void write_columnar(const std::filesystem::path& path, const Recording& rec);

// Dispatch by extension: .edf goes through the EDF reader, everything else
// through the columnar reader.
Recording read_signal(const std::filesystem::path& path);

// Annotation file: one "subject recording onset_seconds offset_seconds" line
// per seizure; '#' starts a comment.
struct AnnotationLine {
    std::string subject;
    SeizureAnnotation annotation;
};
std::vector<AnnotationLine> read_annotations(const std::filesystem::path& path);
void write_annotations(const std::filesystem::path& path, std::span<const AnnotationLine> lines);

// Channel list: one channel name per line, '#' comments.
std::vector<std::string> read_channel_list(const std::filesystem::path& path);

// The standard longitudinal-bipolar 18-channel montage shipped as the
// default canonical list.
std::span<const std::string> default_montage18();

}  // namespace mchd
