#include "stratmoi/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace stratmoi {

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string wave_csv_text(const WaveField& wave) {
  const Grid2D& grid = wave.grid;
  std::string out;
  out.reserve(static_cast<size_t>(grid.nx) * grid.ny * 120 + 64);
  out += "x,y,rho,psi,sigma\n";
  for (int i = 0; i < grid.nx; ++i) {
    for (int j = 0; j < grid.ny; ++j) {
      out += format_full(grid.x(i));
      out += ',';
      out += format_full(grid.y(j));
      out += ',';
      out += format_full(wave.rho(j, i));
      out += ',';
      out += format_full(wave.psi(j, i));
      out += ',';
      out += format_full(wave.sigma(j, i));
      out += '\n';
    }
  }
  return out;
}

WaveCsvData read_wave_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("x,y,", 0) != 0)
    throw std::runtime_error("wave CSV header missing in " + path.string());

  std::vector<double> xs, ys, rho, psi, sigma;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    double vals[5];
    for (int k = 0; k < 5; ++k) {
      if (!std::getline(ls, cell, ','))
        throw std::runtime_error("short row in " + path.string());
      vals[k] = std::stod(cell);
    }
    xs.push_back(vals[0]);
    ys.push_back(vals[1]);
    rho.push_back(vals[2]);
    psi.push_back(vals[3]);
    sigma.push_back(vals[4]);
  }
  // rows are x-major: y varies fastest within a block of constant x
  size_t ny = 1;
  while (ny < xs.size() && xs[ny] == xs[0]) ++ny;
  if (ny < 2 || ys.size() % ny != 0)
    throw std::runtime_error("inconsistent grid in " + path.string());
  const size_t nx = ys.size() / ny;

  WaveCsvData data;
  data.x.resize(nx);
  data.y.resize(ny);
  data.rho.resize(ny, nx);
  data.psi.resize(ny, nx);
  data.sigma.resize(ny, nx);
  for (size_t i = 0; i < nx; ++i) {
    data.x[i] = xs[i * ny];
    for (size_t j = 0; j < ny; ++j) {
      if (i == 0) data.y[j] = ys[j];
      data.rho(j, i) = rho[i * ny + j];
      data.psi(j, i) = psi[i * ny + j];
      data.sigma(j, i) = sigma[i * ny + j];
    }
  }
  return data;
}

}  // namespace stratmoi
