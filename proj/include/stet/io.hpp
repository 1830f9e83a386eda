#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "stet/stft.hpp"
#include "stet/transforms.hpp"

namespace stet {

// Signal CSV: header "time_s,real[,imag]", one row per sample. Spacing must
// be uniform to 1e-6 relative tolerance. Writing with include_imag=false
// drops the imaginary column (a real recording).
Signal read_signal_csv(const std::filesystem::path& path);
void write_signal_csv(const std::filesystem::path& path, const Signal& s,
                      bool include_imag = true);

// WAV ingestion: PCM 16/24/32-bit and float32, first channel only.
Signal read_wav(const std::filesystem::path& path);

// Reads either format by extension (.wav vs anything else as CSV).
Signal read_signal(const std::filesystem::path& path);

// TFR CSV: magnitude matrix, rows = frequency descending, columns = time.
void write_tfr_csv(const std::filesystem::path& path, const TFGrid& grid);

// Raw little-endian float64 interleaved (re,im), same row order as the CSV.
void write_tfr_bin(const std::filesystem::path& path, const TFGrid& grid);

// JSON sidecar text ({kind, fs, n_fft, beta, axis ranges} plus caller
// parameters) for a TFR export; `extra_json` must be a serialized JSON object
// or empty.
std::string tfr_sidecar_json(const TFGrid& grid, const std::string& extra_json = "");

// Branch map CSV: 0 = harmonic rule, 1 = transient rule, -1 = masked.
void write_branch_map_csv(const std::filesystem::path& path,
                          const Eigen::Array<signed char, Eigen::Dynamic, Eigen::Dynamic>& branch);

// Real-valued field CSV in the same orientation as the TFR export.
void write_field_csv(const std::filesystem::path& path, const Eigen::MatrixXd& field);

// Two-column CSV (x,y) with a header line.
void write_xy_csv(const std::filesystem::path& path, const std::string& x_name,
                  const std::string& y_name, const std::vector<std::pair<double, double>>& rows);

std::string sha256_file(const std::filesystem::path& path);

// manifest.json for an output directory: file names, sizes, SHA-256 hashes
// and the fully resolved run parameters.
void write_manifest(const std::filesystem::path& dir, const std::vector<std::string>& files,
                    const std::string& parameters_json);

}  // namespace stet
