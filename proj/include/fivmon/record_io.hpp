#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fivmon/lubrication.hpp"
#include "fivmon/signal_core.hpp"
#include "fivmon/wear_stage.hpp"

namespace fivmon::io {

// Record CSV layout:
//
//   # fs_hz=25641.03
//   # t_capture_s=6
//   # channel=x,y,z          (one label per column; optional)
//   0.0123,0.5,-0.2
//   ...
//
// Lines starting with '#' are metadata/comments; every other non-blank line
// holds one sample per column. fs_hz is required, t_capture_s optional.

// Empty selector picks the first column; otherwise a column label or a
// zero-based column index.
TimeSeriesRecord read_record_csv(const std::filesystem::path& path,
                                 const std::string& channel_selector = {});
TimeSeriesRecord parse_record_csv(const std::string& text, const std::string& channel_selector = {},
                                  const std::string& source_name = "<memory>");

std::string format_record_csv(const TimeSeriesRecord& record, int precision = 10);
void write_record_csv(const std::filesystem::path& path, const TimeSeriesRecord& record,
                      int precision = 10);

// Sorted list of *.csv files in a directory.
std::vector<std::filesystem::path> list_record_files(const std::filesystem::path& dir);

struct LoadResult {
  std::vector<TimeSeriesRecord> records;
  std::vector<std::filesystem::path> sources;  // parallel to records
  std::vector<std::string> errors;             // "<file>: <reason>"
};

// Reads every record in a directory, collecting per-file errors instead of
// stopping at the first.
LoadResult load_record_dir(const std::filesystem::path& dir, const std::string& channel_selector = {});

// Friction CSV: optional header row, then "time_min,mu" rows.
FrictionTrace read_friction_csv(const std::filesystem::path& path);
void write_friction_csv(const std::filesystem::path& path, const FrictionTrace& trace);

// Lubrication parameter file: "key = value" lines, '#' comments.
// Required keys: k eta mu P Ra Rb nu_a nu_b Ea Eb sigma1 sigma2 (SI units,
// roughness in micrometres, Rb may be "inf"). Optional: h_min (m), stroke (m),
// rpm.
struct LubricationParams {
  ContactSpec contact;
  SurfacePair roughness;
  std::optional<double> h_min_override_m;
  std::optional<double> stroke_m;
  std::optional<double> rpm;
};

LubricationParams parse_lubrication_params(const std::string& text);
LubricationParams read_lubrication_params(const std::filesystem::path& path);
std::string format_lubrication_params(const LubricationParams& params);

void write_spectrum_csv(const std::filesystem::path& path, const PowerSpectrum& spectrum);
void write_rms_series_csv(const std::filesystem::path& path, const RmsSeries& series);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace fivmon::io
