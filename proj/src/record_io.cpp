#include "fivmon/record_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "fivmon/error.hpp"

namespace fivmon::io {

namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    fn(text.substr(start, end - start), line_no);
    if (end == text.size()) break;
    start = end + 1;
  }
}

std::string fmt(double v, int precision) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
  return buf;
}

}  // namespace

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
  if (!out) throw InputError("write failed for " + path.string());
}

TimeSeriesRecord parse_record_csv(const std::string& text, const std::string& channel_selector,
                                  const std::string& source_name) {
  std::optional<double> fs_hz;
  std::optional<double> t_capture;
  std::vector<std::string> labels;
  std::string unit = "m/s^2";
  std::vector<std::vector<double>> columns;
  std::string error;

  for_each_line(text, [&](std::string_view raw, std::size_t line_no) {
    if (!error.empty()) return;
    const auto line = trim(raw);
    if (line.empty()) return;
    if (line.front() == '#') {
      const auto body = trim(line.substr(1));
      const auto eq = body.find('=');
      if (eq == std::string_view::npos) return;
      const auto key = trim(body.substr(0, eq));
      const auto value = trim(body.substr(eq + 1));
      if (key == "fs_hz") {
        fs_hz = parse_double(value);
        if (!fs_hz) error = "bad fs_hz value";
      } else if (key == "t_capture_s") {
        t_capture = parse_double(value);
        if (!t_capture) error = "bad t_capture_s value";
      } else if (key == "channel") {
        labels.clear();
        for (auto l : split(value, ',')) labels.emplace_back(l);
      } else if (key == "unit") {
        unit = std::string(value);
      }
      return;
    }
    const auto cells = split(line, ',');
    if (columns.empty()) columns.resize(cells.size());
    if (cells.size() != columns.size()) {
      error = "line " + std::to_string(line_no) + ": expected " + std::to_string(columns.size()) +
              " columns";
      return;
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto v = parse_double(cells[c]);
      if (!v) {
        error = "line " + std::to_string(line_no) + ": not a number '" + std::string(cells[c]) + "'";
        return;
      }
      columns[c].push_back(*v);
    }
  });

  if (!error.empty()) throw InputError(source_name + ": " + error);
  if (!fs_hz) throw InputError(source_name + ": missing '# fs_hz=' header");
  if (columns.empty()) throw InputError(source_name + ": no samples");

  std::size_t column = 0;
  if (!channel_selector.empty()) {
    const auto it = std::find(labels.begin(), labels.end(), channel_selector);
    if (it != labels.end()) {
      column = static_cast<std::size_t>(it - labels.begin());
    } else if (const auto idx = parse_double(channel_selector);
               idx && *idx >= 0 && std::floor(*idx) == *idx) {
      column = static_cast<std::size_t>(*idx);
    } else {
      throw InputError(source_name + ": unknown channel '" + channel_selector + "'");
    }
    if (column >= columns.size()) {
      throw InputError(source_name + ": channel index " + channel_selector + " out of range");
    }
  }
  const std::string label = column < labels.size() ? labels[column] : std::to_string(column);
  try {
    return TimeSeriesRecord(std::move(columns[column]), *fs_hz, t_capture, label, unit);
  } catch (const InputError& e) {
    throw InputError(source_name + ": " + e.what());
  }
}

TimeSeriesRecord read_record_csv(const fs::path& path, const std::string& channel_selector) {
  return parse_record_csv(read_text_file(path), channel_selector, path.filename().string());
}

std::string format_record_csv(const TimeSeriesRecord& record, int precision) {
  std::string out;
  out.reserve(record.size() * static_cast<std::size_t>(precision + 4) + 128);
  out += "# fs_hz=" + fmt(record.sample_rate(), 17) + "\n";
  if (record.t_capture()) out += "# t_capture_s=" + fmt(*record.t_capture(), 17) + "\n";
  if (!record.channel_label().empty()) out += "# channel=" + record.channel_label() + "\n";
  out += "# unit=" + record.unit() + "\n";
  for (double v : record.samples()) {
    out += fmt(v, precision);
    out += '\n';
  }
  return out;
}

void write_record_csv(const fs::path& path, const TimeSeriesRecord& record, int precision) {
  write_text_file(path, format_record_csv(record, precision));
}

std::vector<fs::path> list_record_files(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw InputError("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

LoadResult load_record_dir(const fs::path& dir, const std::string& channel_selector) {
  LoadResult out;
  for (const auto& file : list_record_files(dir)) {
    try {
      out.records.push_back(read_record_csv(file, channel_selector));
      out.sources.push_back(file);
    } catch (const InputError& e) {
      out.errors.push_back(e.what());
    }
  }
  return out;
}

FrictionTrace read_friction_csv(const fs::path& path) {
  const std::string text = read_text_file(path);
  std::vector<double> t;
  std::vector<double> mu;
  bool seen_data = false;
  std::string error;
  for_each_line(text, [&](std::string_view raw, std::size_t line_no) {
    if (!error.empty()) return;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') return;
    const auto cells = split(line, ',');
    const auto a = cells.size() >= 2 ? parse_double(cells[0]) : std::nullopt;
    const auto b = cells.size() >= 2 ? parse_double(cells[1]) : std::nullopt;
    if (!a || !b) {
      if (!seen_data) {
        seen_data = true;  // header row
        return;
      }
      error = "line " + std::to_string(line_no) + ": expected 'time_min,mu'";
      return;
    }
    seen_data = true;
    t.push_back(*a);
    mu.push_back(*b);
  });
  if (!error.empty()) throw InputError(path.filename().string() + ": " + error);
  try {
    return FrictionTrace(std::move(t), std::move(mu));
  } catch (const InputError& e) {
    throw InputError(path.filename().string() + ": " + e.what());
  }
}

void write_friction_csv(const fs::path& path, const FrictionTrace& trace) {
  std::string out = "time_min,mu\n";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    out += fmt(trace.times()[i], 12) + "," + fmt(trace.mu_values()[i], 12) + "\n";
  }
  write_text_file(path, out);
}

LubricationParams parse_lubrication_params(const std::string& text) {
  std::map<std::string, std::string, std::less<>> kv;
  std::string error;
  for_each_line(text, [&](std::string_view raw, std::size_t line_no) {
    auto line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty() || !error.empty()) return;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) eq = line.find(':');
    if (eq == std::string_view::npos) {
      error = "line " + std::to_string(line_no) + ": expected key = value";
      return;
    }
    kv[std::string(trim(line.substr(0, eq)))] = std::string(trim(line.substr(eq + 1)));
  });
  if (!error.empty()) throw InputError("lubrication params: " + error);

  static const std::vector<std::string> required{"k",    "eta",  "mu", "P",  "Ra",     "Rb",
                                                 "nu_a", "nu_b", "Ea", "Eb", "sigma1", "sigma2"};
  std::vector<std::string> missing;
  for (const auto& key : required) {
    if (!kv.contains(key)) missing.push_back(key);
  }
  if (!missing.empty()) {
    std::string msg = "lubrication params: missing keys:";
    for (const auto& m : missing) msg += " " + m;
    throw InputError(msg);
  }

  auto number = [&](const std::string& key) {
    std::string v = kv.at(key);
    std::string lower = v;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "inf" || lower == "infinite" || lower == "infinity") {
      return std::numeric_limits<double>::infinity();
    }
    const auto d = parse_double(v);
    if (!d) throw InputError("lubrication params: key '" + key + "' is not a number: " + v);
    return *d;
  };

  LubricationParams p;
  p.contact.k_ellipticity = number("k");
  p.contact.eta_pa_s = number("eta");
  p.contact.entrain_velocity_m_s = number("mu");
  p.contact.load_n = number("P");
  p.contact.ra_m = number("Ra");
  p.contact.rb_m = number("Rb");
  p.contact.nu_a = number("nu_a");
  p.contact.nu_b = number("nu_b");
  p.contact.ea_pa = number("Ea");
  p.contact.eb_pa = number("Eb");
  p.roughness.sigma1_um = number("sigma1");
  p.roughness.sigma2_um = number("sigma2");
  if (kv.contains("h_min")) p.h_min_override_m = number("h_min");
  if (kv.contains("stroke")) p.stroke_m = number("stroke");
  if (kv.contains("rpm")) p.rpm = number("rpm");
  p.contact.validate();
  return p;
}

LubricationParams read_lubrication_params(const fs::path& path) {
  return parse_lubrication_params(read_text_file(path));
}

std::string format_lubrication_params(const LubricationParams& p) {
  std::string out;
  auto put = [&](const char* key, double v) { out += std::string(key) + " = " + fmt(v, 17) + "\n"; };
  put("k", p.contact.k_ellipticity);
  put("eta", p.contact.eta_pa_s);
  put("mu", p.contact.entrain_velocity_m_s);
  put("P", p.contact.load_n);
  put("Ra", p.contact.ra_m);
  put("Rb", p.contact.rb_m);
  put("nu_a", p.contact.nu_a);
  put("nu_b", p.contact.nu_b);
  put("Ea", p.contact.ea_pa);
  put("Eb", p.contact.eb_pa);
  put("sigma1", p.roughness.sigma1_um);
  put("sigma2", p.roughness.sigma2_um);
  if (p.h_min_override_m) put("h_min", *p.h_min_override_m);
  if (p.stroke_m) put("stroke", *p.stroke_m);
  if (p.rpm) put("rpm", *p.rpm);
  return out;
}

void write_spectrum_csv(const fs::path& path, const PowerSpectrum& spectrum) {
  std::string out = "# estimator=" + spectrum.estimator_tag + "\nfrequency_hz,power\n";
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    out += fmt(spectrum.frequencies[i], 12) + "," + fmt(spectrum.power[i], 12) + "\n";
  }
  write_text_file(path, out);
}

void write_rms_series_csv(const fs::path& path, const RmsSeries& series) {
  std::string out = "window_center_s,rms,records\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    out += fmt(series.window_centers[i], 12) + "," + fmt(series.rms_values[i], 12) + "," +
           std::to_string(series.records_per_window[i]) + "\n";
  }
  write_text_file(path, out);
}

}  // namespace fivmon::io
