#include "mixspec/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mixspec/errors.hpp"

namespace mixspec::io {

std::string format_double(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
      std::filesystem::remove(tmp);
      throw Error("write failed for " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

std::string trajectory_csv(const Trajectory& traj) {
  std::string out = "x\n";
  for (double v : traj.values) {
    out += format_double(v);
    out += '\n';
  }
  return out;
}

std::string spectrum_csv(const GramSpectrum& spectrum) {
  std::string out = "lambda\n";
  for (double v : spectrum.eigenvalues) {
    out += format_double(v);
    out += '\n';
  }
  return out;
}

std::string matrix_csv(const DataMatrix& data) {
  std::string out = "# N=" + std::to_string(data.entries.rows()) +
                    ",n=" + std::to_string(data.entries.cols()) +
                    ",kind=" + to_string(data.kind) + "\n";
  for (long i = 0; i < data.entries.rows(); ++i) {
    for (long j = 0; j < data.entries.cols(); ++j) {
      if (j) out += ',';
      out += format_double(data.entries(i, j));
    }
    out += '\n';
  }
  return out;
}

std::string stieltjes_csv(const StieltjesSolution& solution) {
  std::string out = "re_z,im_z,re_S,im_S,re_Su,im_Su,iters,residual\n";
  for (const auto& p : solution.points) {
    out += format_double(p.z.real()) + ',' + format_double(p.z.imag()) + ',' +
           format_double(p.S.real()) + ',' + format_double(p.S.imag()) + ',' +
           format_double(p.Su.real()) + ',' + format_double(p.Su.imag()) + ',' +
           std::to_string(p.iterations) + ',' + format_double(p.residual) + '\n';
  }
  return out;
}

std::string density_csv(const std::vector<DensityPoint>& density) {
  std::string out = "x,density\n";
  for (const auto& p : density)
    out += format_double(p.x) + ',' + format_double(p.density) + '\n';
  return out;
}

std::string stieltjes_grid_csv(std::span<const std::complex<double>> zs,
                               std::span<const std::complex<double>> values) {
  if (zs.size() != values.size()) throw Error("z grid and values differ in length");
  std::string out = "re_z,im_z,re_S,im_S\n";
  for (std::size_t i = 0; i < zs.size(); ++i)
    out += format_double(zs[i].real()) + ',' + format_double(zs[i].imag()) + ',' +
           format_double(values[i].real()) + ',' + format_double(values[i].imag()) + '\n';
  return out;
}

std::vector<double> read_single_column_csv(const std::filesystem::path& path,
                                           std::string_view header) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != header)
    throw Error(path.string() + ": expected header '" + std::string(header) + "'");
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
    if (ec != std::errc() || ptr != line.data() + line.size())
      throw Error(path.string() + ": malformed number '" + line + "'");
    values.push_back(v);
  }
  return values;
}

}  // namespace mixspec::io
