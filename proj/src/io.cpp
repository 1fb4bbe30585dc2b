#include "mfnls/io.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "mfnls/errors.hpp"

namespace mfnls {

std::uint32_t ConventionFlags::pack() const {
  std::uint32_t b = 0;
  if (time_direction < 0) b |= 1u;
  if (b0_sign > 0) b |= 2u;
  if (!lens_half) b |= 4u;
  return b;
}

ConventionFlags ConventionFlags::unpack(std::uint32_t bits) {
  ConventionFlags f;
  f.time_direction = (bits & 1u) ? -1 : +1;
  f.b0_sign = (bits & 2u) ? +1 : -1;
  f.lens_half = !(bits & 4u);
  return f;
}

json ConventionFlags::to_json() const {
  return {{"time_direction", time_direction > 0 ? "i d_t psi = +H psi" : "i d_t psi = -H psi"},
          {"b0_sign", b0_sign < 0 ? "focusing (-b0 |phi|^2 phi)" : "defocusing (+b0 |phi|^2 phi)"},
          {"lens_kinetic", lens_half ? "-1/2 d^2" : "-d^2"}};
}

namespace {

constexpr char kMagic[8] = {'M', 'F', 'N', 'L', 'S', 'B', 'I', 'N'};

template <class T>
void put(std::ostream& os, T v) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  os.write(reinterpret_cast<const char*>(b), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  unsigned char b[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(b), sizeof(T))) throw ConfigError("truncated container");
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}

}  // namespace

void write_container(const std::filesystem::path& path, const Container& c) {
  if (c.times.size() != c.frames.size()) throw DomainError("container times and frames differ in count");
  const std::size_t len = c.frames.empty() ? 0 : c.frames.front().size();
  for (const auto& f : c.frames)
    if (f.size() != len) throw DomainError("container frames differ in length");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open " + path.string() + " for writing");
  os.write(kMagic, 8);
  const auto& h = c.header;
  put<std::uint32_t>(os, h.version);
  put<std::uint32_t>(os, std::uint32_t(h.shape));
  put<std::uint32_t>(os, h.particles);
  put<std::uint32_t>(os, h.flags.pack());
  put<std::uint64_t>(os, h.n);
  put<double>(os, h.L);
  put<double>(os, h.omega);
  put<double>(os, h.beta);
  put<std::uint32_t>(os, std::uint32_t(h.potential_id.size()));
  os.write(h.potential_id.data(), std::streamsize(h.potential_id.size()));
  put<std::uint64_t>(os, c.frames.size());
  put<std::uint64_t>(os, len);
  for (std::size_t f = 0; f < c.frames.size(); ++f) {
    put<double>(os, c.times[f]);
    for (const auto& v : c.frames[f]) {
      put<double>(os, v.real());
      put<double>(os, v.imag());
    }
  }
  if (!os) throw ConfigError("write failed for " + path.string());
}

Container read_container(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open " + path.string());
  char magic[8];
  if (!is.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0) throw ConfigError("not a container: " + path.string());
  Container c;
  auto& h = c.header;
  h.version = get<std::uint32_t>(is);
  if (h.version != 1) throw ConfigError("unsupported container version");
  h.shape = PayloadShape(get<std::uint32_t>(is));
  h.particles = get<std::uint32_t>(is);
  h.flags = ConventionFlags::unpack(get<std::uint32_t>(is));
  h.n = get<std::uint64_t>(is);
  h.L = get<double>(is);
  h.omega = get<double>(is);
  h.beta = get<double>(is);
  h.potential_id.resize(get<std::uint32_t>(is));
  if (!is.read(h.potential_id.data(), std::streamsize(h.potential_id.size()))) throw ConfigError("truncated container");
  const auto frames = get<std::uint64_t>(is);
  const auto len = get<std::uint64_t>(is);
  for (std::uint64_t f = 0; f < frames; ++f) {
    c.times.push_back(get<double>(is));
    CVec v(len);
    for (auto& x : v) {
      const double re = get<double>(is);
      x = cplx(re, get<double>(is));
    }
    c.frames.push_back(std::move(v));
  }
  return c;
}

Container states_container(const std::vector<TensorState>& states, const std::vector<double>& times, double beta,
                           const std::string& potential_id, ConventionFlags flags) {
  if (states.empty()) throw DomainError("no states to store");
  Container c;
  c.header.shape = PayloadShape::state;
  c.header.particles = std::uint32_t(states.front().N);
  c.header.flags = flags;
  c.header.n = states.front().grid.size();
  c.header.L = states.front().grid.half_length();
  c.header.omega = states.front().omega;
  c.header.beta = beta;
  c.header.potential_id = potential_id;
  c.times = times;
  for (const auto& s : states) c.frames.push_back(s.amp);
  return c;
}

Container kernel_container(const MarginalDensity& g, double time, double omega, double beta,
                           const std::string& potential_id, ConventionFlags flags) {
  Container c;
  c.header.shape = PayloadShape::kernel;
  c.header.particles = std::uint32_t(g.k);
  c.header.flags = flags;
  c.header.n = g.grid.size();
  c.header.L = g.grid.half_length();
  c.header.omega = omega;
  c.header.beta = beta;
  c.header.potential_id = potential_id;
  c.times = {time};
  c.frames.emplace_back(g.kernel.data(), g.kernel.data() + g.kernel.size());
  return c;
}

MarginalDensity kernel_from_container(const Container& c, std::size_t frame) {
  if (c.header.shape != PayloadShape::kernel) throw ConfigError("container does not hold a kernel");
  if (frame >= c.frames.size()) throw DomainError("frame out of range");
  MarginalDensity g;
  g.k = int(c.header.particles);
  g.grid = Grid1D(c.header.L, c.header.n);
  const auto rows = Eigen::Index(ipow(c.header.n, g.k));
  if (std::size_t(rows * rows) != c.frames[frame].size()) throw ConfigError("kernel payload has the wrong size");
  g.kernel = Eigen::Map<const CMat>(c.frames[frame].data(), rows, rows);
  return g;
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open " + path.string() + " for writing");
  os << j.dump(2) << '\n';
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows, const std::vector<std::string>& preamble) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open " + path.string() + " for writing");
  for (const auto& line : preamble) os << "# " << line << '\n';
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n' << std::setprecision(17);
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << '\n';
  }
}

void write_spectral_summary(const std::filesystem::path& path, const std::vector<std::string>& labels,
                            const std::vector<MarginalDensity>& densities) {
  if (labels.size() != densities.size()) throw DomainError("one label per density");
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open " + path.string() + " for writing");
  os << "label";
  for (int i = 0; i < 16; ++i) os << ",lambda" << i;
  os << '\n' << std::setprecision(17);
  for (std::size_t d = 0; d < densities.size(); ++d) {
    const auto ev = top_eigenvalues(densities[d], 16);
    os << labels[d];
    for (int i = 0; i < 16; ++i) os << ',' << (std::size_t(i) < ev.size() ? ev[std::size_t(i)] : 0.0);
    os << '\n';
  }
}

std::uint64_t config_hash(const json& j) {
  // nlohmann's object type is an ordered std::map, so dump() is canonical
  const std::string s = j.dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

}  // namespace mfnls
