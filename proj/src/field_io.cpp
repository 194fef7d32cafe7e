#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "dispersolve/errors.hpp"
#include "dispersolve/spectral_grid.hpp"
#include "format.hpp"

namespace dispersolve {

namespace {

bool binary_path(const std::string& path) {
  return path.size() >= 4 && path.compare(path.size() - 4, 4, ".bin") == 0;
}

void put_f64(std::ostream& out, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  if constexpr (std::endian::native == std::endian::big) {
    bits = __builtin_bswap64(bits);
  }
  out.write(reinterpret_cast<const char*>(&bits), sizeof bits);
}

double get_f64(std::istream& in) {
  std::uint64_t bits = 0;
  in.read(reinterpret_cast<char*>(&bits), sizeof bits);
  if constexpr (std::endian::native == std::endian::big) {
    bits = __builtin_bswap64(bits);
  }
  return std::bit_cast<double>(bits);
}

}  // namespace

void write_field(const std::string& path, const Field& f, double time) {
  const Grid& g = f.grid();
  if (binary_path(path)) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    put_f64(out, g.n());
    put_f64(out, g.length());
    put_f64(out, time);
    for (double v : f.values()) put_f64(out, v);
    if (!out) throw IoError("write failed for '" + path + "'");
    return;
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << g.n() << ' ' << detail::format_double(g.length()) << ' '
      << detail::format_double(time) << '\n';
  for (double v : f.values()) out << detail::format_double(v) << '\n';
  if (!out) throw IoError("write failed for '" + path + "'");
}

Snapshot read_field(const std::string& path) {
  double n_real = 0.0, length = 0.0, time = 0.0;
  std::vector<double> values;
  if (binary_path(path)) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    n_real = get_f64(in);
    length = get_f64(in);
    time = get_f64(in);
    if (!in || n_real < 1 || n_real > 1 << 28) {
      throw IoError("'" + path + "': bad header");
    }
    values.resize(static_cast<std::size_t>(n_real));
    for (auto& v : values) v = get_f64(in);
    if (!in) throw IoError("'" + path + "': truncated sample block");
  } else {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::string header;
    std::getline(in, header);
    std::istringstream hs(header);
    if (!(hs >> n_real >> length >> time) || n_real < 1) {
      throw IoError("'" + path + "': header must be 'n length time'");
    }
    values.resize(static_cast<std::size_t>(n_real));
    for (auto& v : values) {
      if (!(in >> v)) throw IoError("'" + path + "': too few samples");
    }
  }
  Grid grid(length, static_cast<int>(n_real));
  return {Field::from_values(grid, std::move(values)), time};
}

}  // namespace dispersolve
