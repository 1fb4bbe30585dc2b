#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "mfnls/grid.hpp"
#include "mfnls/marginals.hpp"

namespace mfnls {

using json = nlohmann::json;

// Conventions stamped into every output.
struct ConventionFlags {
  int time_direction = +1;  // i d_t psi = +H psi
  int b0_sign = -1;         // focusing: the cubic term enters as -b0 |phi|^2 phi
  bool lens_half = true;    // free side uses -1/2 d^2
  std::uint32_t pack() const;
  static ConventionFlags unpack(std::uint32_t bits);
  json to_json() const;
};

enum class PayloadShape : std::uint32_t { state = 0, kernel = 1 };

// Binary container layout (little endian):
//   "MFNLSBIN" | u32 version | u32 shape | u32 particles (N or k) | u32 flags
//   | u64 n | f64 L | f64 omega | f64 beta | u32 id length | id bytes
//   | u64 frames | u64 values per frame | frames of (f64 time, complex128 values)
struct ContainerHeader {
  std::uint32_t version = 1;
  PayloadShape shape = PayloadShape::state;
  std::uint32_t particles = 1;
  ConventionFlags flags;
  std::uint64_t n = 0;
  double L = 0.0, omega = 0.0, beta = 0.0;
  std::string potential_id;
};

struct Container {
  ContainerHeader header;
  std::vector<double> times;
  std::vector<CVec> frames;
};

void write_container(const std::filesystem::path& path, const Container& c);
Container read_container(const std::filesystem::path& path);

Container states_container(const std::vector<TensorState>& states, const std::vector<double>& times, double beta,
                           const std::string& potential_id, ConventionFlags flags = {});
// kernel stored column-major, n^k x n^k values per frame
Container kernel_container(const MarginalDensity& g, double time, double omega, double beta,
                           const std::string& potential_id, ConventionFlags flags = {});
MarginalDensity kernel_from_container(const Container& c, std::size_t frame = 0);

void write_json(const std::filesystem::path& path, const json& j);
// "# "-prefixed preamble lines, header row, then rows; doubles printed with 17 significant digits
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows, const std::vector<std::string>& preamble = {});
// one row per density: label index then the top 16 eigenvalues
void write_spectral_summary(const std::filesystem::path& path, const std::vector<std::string>& labels,
                            const std::vector<MarginalDensity>& densities);

// FNV-1a 64 over the canonical (sorted-key, compact) dump
std::uint64_t config_hash(const json& j);
std::string hex64(std::uint64_t v);

}  // namespace mfnls
