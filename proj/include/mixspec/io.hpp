#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mixspec/lsd.hpp"
#include "mixspec/matrix_lab.hpp"
#include "mixspec/process.hpp"
#include "mixspec/spectral.hpp"

namespace mixspec::io {

/// Shortest round-trip decimal representation.
std::string format_double(double value);

/// Writes content to a sibling temp file and renames it into place, so a
/// failed run never leaves a partial artifact.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string trajectory_csv(const Trajectory& traj);                       // header "x"
std::string spectrum_csv(const GramSpectrum& spectrum);                   // header "lambda"
std::string matrix_csv(const DataMatrix& data);                           // "# N=..,n=..,kind=.." + rows
std::string stieltjes_csv(const StieltjesSolution& solution);
std::string density_csv(const std::vector<DensityPoint>& density);

/// Empirical transform on a z-grid: re_z, im_z, re_S, im_S.
std::string stieltjes_grid_csv(std::span<const std::complex<double>> zs,
                               std::span<const std::complex<double>> values);

/// Reads a single-column CSV with the given header.
std::vector<double> read_single_column_csv(const std::filesystem::path& path,
                                           std::string_view header);

}  // namespace mixspec::io
