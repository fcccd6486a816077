#include "bep/field_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace bep {
namespace {

static_assert(std::endian::native == std::endian::little,
              "field dumps assume a little-endian host");

constexpr char kMagic[4] = {'B', 'E', 'P', 'F'};

template <class T>
void put(std::ofstream& os, T value) {
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T get(std::ifstream& is, const std::filesystem::path& path) {
  T value{};
  if (!is.read(reinterpret_cast<char*>(&value), sizeof(T))) {
    throw std::runtime_error("read_field: truncated header in " + path.string());
  }
  return value;
}

}  // namespace

void write_field(const std::filesystem::path& path, const SpectralField& u) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("write_field: cannot open " + path.string());
  const Grid& g = u.grid();
  os.write(kMagic, 4);
  put<std::uint64_t>(os, kFieldFormatVersion);
  put<std::uint64_t>(os, static_cast<std::uint64_t>(g.dim()));
  for (int a = 0; a < g.dim(); ++a) put<std::uint64_t>(os, g.size(a));
  for (int a = 0; a < g.dim(); ++a) put<double>(os, g.length(a));
  os.write(reinterpret_cast<const char*>(u.coeffs().data()),
           static_cast<std::streamsize>(u.size() * sizeof(cplx)));
  if (!os) throw std::runtime_error("write_field: write failed for " + path.string());
}

SpectralField read_field(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_field: cannot open " + path.string());
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
    throw std::runtime_error("read_field: bad magic in " + path.string());
  }
  const auto version = get<std::uint64_t>(is, path);
  if (version != kFieldFormatVersion) {
    throw std::runtime_error("read_field: unsupported version " + std::to_string(version));
  }
  const auto dim = get<std::uint64_t>(is, path);
  if (dim == 0 || dim > 8) throw std::runtime_error("read_field: implausible dim");
  std::vector<std::size_t> sizes(dim);
  std::vector<double> lengths(dim);
  for (auto& n : sizes) n = get<std::uint64_t>(is, path);
  for (auto& l : lengths) l = get<double>(is, path);
  auto grid = make_grid(static_cast<int>(dim), lengths, sizes);
  SpectralField u(grid);
  if (!is.read(reinterpret_cast<char*>(u.coeffs().data()),
               static_cast<std::streamsize>(u.size() * sizeof(cplx)))) {
    throw std::runtime_error("read_field: truncated payload in " + path.string());
  }
  return u;
}

void write_field(const std::filesystem::path& path, const VectorField& v) {
  for (int i = 0; i < v.components(); ++i) {
    auto p = path.parent_path() /
             (path.stem().string() + "_" + std::to_string(i) + path.extension().string());
    write_field(p, v[i]);
  }
}

}  // namespace bep
