#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "hamosc/compare.hpp"
#include "hamosc/coeffs.hpp"

namespace hamosc {

/// Parsed configuration document.
///
///   n, t0, A, B, C (n x n arrays of {"re": expr, "im": expr}), mu, p,
///   phi0, psi0 (n x n numeric arrays; a complex entry is {"re": x, "im": y}),
///   integrator {rtol, atol, T}, criteria {T_max, checkpoints, threshold, K, g_weight}.
///
/// T and T_max are absolute end times (defaults t0 + 50 and t0 + 200).
struct Config {
  SystemSpec spec;
  CompareOpts compare;
  double T = 50.0;
  std::uint64_t hash = 0;  // FNV-1a of the raw document bytes
};

/// Throws ParseError (malformed JSON or expression; offsets are bytes) or ConfigError (schema).
Config parse_config(std::string_view text);

/// Reads and parses a file; throws std::runtime_error when it cannot be read.
Config load_config(const std::filesystem::path& path);

std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace hamosc
