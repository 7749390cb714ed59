#include <bit>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "roughpde/grid.hpp"

namespace roughpde {

namespace {

constexpr const char* kLayout = "rowmajor-float64-le";

void to_le(double v, char* out) {
  std::uint64_t u;
  std::memcpy(&u, &v, sizeof u);
  if constexpr (std::endian::native == std::endian::big) u = __builtin_bswap64(u);
  std::memcpy(out, &u, sizeof u);
}

double from_le(const char* in) {
  std::uint64_t u;
  std::memcpy(&u, in, sizeof u);
  if constexpr (std::endian::native == std::endian::big) u = __builtin_bswap64(u);
  double v;
  std::memcpy(&v, &u, sizeof v);
  return v;
}

}  // namespace

void write_field(const std::string& path, const SpectralField& f) {
  if (!f.is_real()) throw ValidationError("only real fields can be written");
  nlohmann::json h = {{"d", f.grid().d()},
                      {"n", f.grid().n()},
                      {"L", f.grid().L()},
                      {"components", f.ncomp()},
                      {"layout", kLayout}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << h.dump() << '\n';
  const auto& s = f.complex_samples();
  std::vector<char> buf(s.size() * 8);
  for (std::size_t i = 0; i < s.size(); ++i) to_le(s[i].real(), buf.data() + 8 * i);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw IoError("write failed for " + path);
}

SpectralField read_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("missing header in " + path);
  nlohmann::json h;
  try {
    h = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw IoError("bad header in " + path + ": " + e.what());
  }
  if (h.value("layout", std::string()) != kLayout) throw IoError("unsupported layout in " + path);
  TorusGrid g(h.at("d").get<int>(), h.at("n").get<int>(), h.at("L").get<double>());
  int nc = h.at("components").get<int>();
  std::vector<char> buf(g.size() * nc * 8);
  in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (in.gcount() != static_cast<std::streamsize>(buf.size())) throw IoError("truncated sample block in " + path);
  std::vector<double> s(g.size() * nc);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = from_le(buf.data() + 8 * i);
  return SpectralField::from_samples(g, nc, std::move(s));
}

}  // namespace roughpde
