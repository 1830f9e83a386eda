#include "stet/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "stet/errors.hpp"

namespace stet {

namespace {

using nlohmann::json;

std::string fmt(double v, const char* spec = "%.17g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = {}) {
  std::ofstream out(path, mode | std::ios::trunc);
  if (!out) throw InputError("cannot open " + path.string() + " for writing");
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) {
    // trim surrounding whitespace
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    fields.push_back(b == std::string::npos ? std::string{} : field.substr(b, e - b + 1));
  }
  return fields;
}

double parse_double(const std::string& s, const std::filesystem::path& path, size_t row) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InputError("bad numeric value '" + s + "' at " + path.string() + " row " +
                     std::to_string(row));
  }
}

}  // namespace

Signal read_signal_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw InputError(path.string() + " is empty");
  const std::vector<std::string> header = split_csv_line(line);
  if (header.size() < 2 || header.size() > 3 || header[0] != "time_s" || header[1] != "real" ||
      (header.size() == 3 && header[2] != "imag"))
    throw InputError(path.string() + ": expected header 'time_s,real[,imag]'");
  const bool has_imag = header.size() == 3;

  std::vector<double> times;
  std::vector<std::complex<double>> values;
  size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() != header.size())
      throw InputError(path.string() + ": wrong column count at row " + std::to_string(row));
    const double t = parse_double(f[0], path, row);
    const double re = parse_double(f[1], path, row);
    const double im = has_imag ? parse_double(f[2], path, row) : 0.0;
    if (!std::isfinite(t) || !std::isfinite(re) || !std::isfinite(im))
      throw InputError(path.string() + ": non-finite value at row " + std::to_string(row));
    times.push_back(t);
    values.emplace_back(re, im);
  }
  if (times.size() < 2) throw InputError(path.string() + ": need at least two samples");

  const double dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
  if (!(dt > 0.0)) throw InputError(path.string() + ": time axis must be increasing");
  for (size_t i = 1; i < times.size(); ++i) {
    const double step = times[i] - times[i - 1];
    if (std::abs(step - dt) > 1e-6 * dt)
      throw InputError(path.string() + ": nonuniform sampling at row " + std::to_string(i + 1));
  }

  Signal s;
  s.sample_rate_hz = 1.0 / dt;
  s.start_time_s = times.front();
  s.samples.resize(static_cast<Eigen::Index>(values.size()));
  for (size_t i = 0; i < values.size(); ++i) s.samples[static_cast<Eigen::Index>(i)] = values[i];
  return s;
}

void write_signal_csv(const std::filesystem::path& path, const Signal& s, bool include_imag) {
  std::ofstream out = open_out(path);
  out << (include_imag ? "time_s,real,imag\n" : "time_s,real\n");
  for (Eigen::Index n = 0; n < s.samples.size(); ++n) {
    out << fmt(s.time_at(n)) << ',' << fmt(s.samples[n].real());
    if (include_imag) out << ',' << fmt(s.samples[n].imag());
    out << '\n';
  }
}

Signal read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());

  auto read_u32 = [&]() {
    std::array<unsigned char, 4> b{};
    in.read(reinterpret_cast<char*>(b.data()), 4);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
  };
  auto read_tag = [&]() {
    std::array<char, 4> t{};
    in.read(t.data(), 4);
    return std::string(t.data(), 4);
  };

  if (read_tag() != "RIFF") throw InputError(path.string() + ": not a RIFF file");
  read_u32();  // total size
  if (read_tag() != "WAVE") throw InputError(path.string() + ": not a WAV file");

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  std::vector<char> data;
  bool have_fmt = false, have_data = false;
  while (in && !(have_fmt && have_data)) {
    const std::string tag = read_tag();
    const std::uint32_t size = read_u32();
    if (!in) break;
    if (tag == "fmt ") {
      std::vector<char> chunk(size);
      in.read(chunk.data(), size);
      if (size < 16) throw InputError(path.string() + ": malformed fmt chunk");
      auto u16 = [&](size_t off) {
        return static_cast<std::uint16_t>(static_cast<unsigned char>(chunk[off]) |
                                          (static_cast<unsigned char>(chunk[off + 1]) << 8));
      };
      format = u16(0);
      channels = u16(2);
      rate = static_cast<std::uint32_t>(static_cast<unsigned char>(chunk[4])) |
             (static_cast<std::uint32_t>(static_cast<unsigned char>(chunk[5])) << 8) |
             (static_cast<std::uint32_t>(static_cast<unsigned char>(chunk[6])) << 16) |
             (static_cast<std::uint32_t>(static_cast<unsigned char>(chunk[7])) << 24);
      bits = u16(14);
      have_fmt = true;
    } else if (tag == "data") {
      data.resize(size);
      in.read(data.data(), size);
      have_data = true;
    } else {
      in.seekg(size + (size % 2), std::ios::cur);  // chunks are word-aligned
    }
  }
  if (!have_fmt || !have_data) throw InputError(path.string() + ": missing fmt or data chunk");
  if (channels < 1) throw InputError(path.string() + ": no channels");
  if (format != 1 && format != 3)
    throw InputError(path.string() + ": only PCM and float WAV are supported");
  if (format == 1 && bits != 16 && bits != 24 && bits != 32)
    throw InputError(path.string() + ": unsupported PCM depth " + std::to_string(bits));
  if (format == 3 && bits != 32) throw InputError(path.string() + ": only float32 is supported");

  const size_t bytes_per_sample = bits / 8;
  const size_t stride = bytes_per_sample * channels;
  const size_t n = data.size() / stride;
  if (n == 0) throw InputError(path.string() + ": empty data chunk");

  Signal s;
  s.sample_rate_hz = static_cast<double>(rate);
  s.samples.resize(static_cast<Eigen::Index>(n));
  for (size_t i = 0; i < n; ++i) {
    const unsigned char* p = reinterpret_cast<const unsigned char*>(data.data()) + i * stride;
    double v = 0.0;
    if (format == 3) {
      float fv;
      std::memcpy(&fv, p, 4);
      v = fv;
    } else if (bits == 16) {
      const auto raw = static_cast<std::int16_t>(p[0] | (p[1] << 8));
      v = raw / 32768.0;
    } else if (bits == 24) {
      std::int32_t raw = p[0] | (p[1] << 8) | (p[2] << 16);
      if (raw & 0x800000) raw |= ~0xFFFFFF;  // sign extend
      v = raw / 8388608.0;
    } else {
      std::int32_t raw;
      std::memcpy(&raw, p, 4);
      v = raw / 2147483648.0;
    }
    s.samples[static_cast<Eigen::Index>(i)] = std::complex<double>(v, 0.0);
  }
  return s;
}

Signal read_signal(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".wav" ? read_wav(path) : read_signal_csv(path);
}

void write_tfr_csv(const std::filesystem::path& path, const TFGrid& grid) {
  std::ofstream out = open_out(path);
  for (Eigen::Index k = grid.n_freq() - 1; k >= 0; --k) {
    for (Eigen::Index n = 0; n < grid.n_time(); ++n) {
      if (n > 0) out << ',';
      out << fmt(std::abs(grid.values(k, n)), "%.9e");
    }
    out << '\n';
  }
}

void write_tfr_bin(const std::filesystem::path& path, const TFGrid& grid) {
  std::ofstream out = open_out(path, std::ios::binary);
  for (Eigen::Index k = grid.n_freq() - 1; k >= 0; --k)
    for (Eigen::Index n = 0; n < grid.n_time(); ++n) {
      const double re = grid.values(k, n).real();
      const double im = grid.values(k, n).imag();
      out.write(reinterpret_cast<const char*>(&re), sizeof(double));
      out.write(reinterpret_cast<const char*>(&im), sizeof(double));
    }
}

std::string tfr_sidecar_json(const TFGrid& grid, const std::string& extra_json) {
  json j;
  j["kind"] = grid_kind_name(grid.kind);
  j["fs_hz"] = grid.fs_hz();
  j["n_fft"] = grid.n_fft;
  j["beta_s2"] = grid.window.beta_s2;
  j["window_half_len"] = grid.window.half_len;
  j["n_freq"] = grid.n_freq();
  j["n_time"] = grid.n_time();
  j["axes"] = {
      {"time_start_s", grid.time_axis_s.size() ? grid.time_axis_s[0] : 0.0},
      {"time_step_s", grid.time_step_s()},
      {"time_end_s", grid.time_axis_s.size() ? grid.time_axis_s[grid.time_axis_s.size() - 1] : 0.0},
      {"freq_start_rad_s", 0.0},
      {"freq_step_rad_s", grid.freq_step_rad_s()},
      {"freq_end_rad_s",
       grid.freq_axis_rad_s.size() ? grid.freq_axis_rad_s[grid.freq_axis_rad_s.size() - 1] : 0.0},
  };
  j["csv_layout"] = "rows descend in frequency, columns advance in time";
  if (!extra_json.empty()) {
    const json extra = json::parse(extra_json);
    for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
  }
  return j.dump(2) + "\n";
}

void write_branch_map_csv(const std::filesystem::path& path,
                          const Eigen::Array<signed char, Eigen::Dynamic, Eigen::Dynamic>& branch) {
  std::ofstream out = open_out(path);
  for (Eigen::Index k = branch.rows() - 1; k >= 0; --k) {
    for (Eigen::Index n = 0; n < branch.cols(); ++n) {
      if (n > 0) out << ',';
      out << static_cast<int>(branch(k, n));
    }
    out << '\n';
  }
}

void write_field_csv(const std::filesystem::path& path, const Eigen::MatrixXd& field) {
  std::ofstream out = open_out(path);
  for (Eigen::Index k = field.rows() - 1; k >= 0; --k) {
    for (Eigen::Index n = 0; n < field.cols(); ++n) {
      if (n > 0) out << ',';
      out << fmt(field(k, n), "%.9e");
    }
    out << '\n';
  }
}

void write_xy_csv(const std::filesystem::path& path, const std::string& x_name,
                  const std::string& y_name, const std::vector<std::pair<double, double>>& rows) {
  std::ofstream out = open_out(path);
  out << x_name << ',' << y_name << '\n';
  for (const auto& [x, y] : rows) out << fmt(x) << ',' << fmt(y) << '\n';
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx) throw NumericError("cannot allocate digest context");
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  std::array<char, 65536> buf{};
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    const std::streamsize got = in.gcount();
    if (got > 0) EVP_DigestUpdate(ctx, buf.data(), static_cast<size_t>(got));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest.data(), &len);
  EVP_MD_CTX_free(ctx);
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xF]);
  }
  return out;
}

void write_manifest(const std::filesystem::path& dir, const std::vector<std::string>& files,
                    const std::string& parameters_json) {
  json j;
  j["files"] = json::array();
  for (const std::string& name : files) {
    const std::filesystem::path p = dir / name;
    j["files"].push_back({{"name", name},
                          {"bytes", std::filesystem::file_size(p)},
                          {"sha256", sha256_file(p)}});
  }
  j["parameters"] = parameters_json.empty() ? json::object() : json::parse(parameters_json);
  std::ofstream out = open_out(dir / "manifest.json");
  out << j.dump(2) << "\n";
}

}  // namespace stet
