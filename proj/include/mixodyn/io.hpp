#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mixodyn/model.hpp"

namespace mixodyn {

/// Exactly one of the two is set after load_params().
struct ParamSource {
  std::optional<ChemostatParams> chemostat;
  std::optional<ScaledParams> scaled;
};

/// Reads a JSON config holding either a "chemostat" object (C, D, A1..A4,
/// B1..B4) or a "scaled" object (c, k, x_star, a1, a2, b1, b2 and
/// optionally gamma1, kappa1, gamma2, kappa2), then applies `key=value`
/// overrides. Upper-case keys belong to the chemostat set, lower-case keys
/// to the scaled set. Throws Error(Usage) for malformed input and
/// Error(Io) when the file cannot be read.
ParamSource load_params(const std::optional<std::string>& config_path,
                        const std::vector<std::string>& overrides);

/// Parses a full double, rejecting trailing characters.
double parse_real(std::string_view text, std::string_view what);

/// Parses "a,b,c" into exactly n reals.
std::vector<double> parse_real_list(std::string_view text, std::size_t n, std::string_view what);

/// Throws Error(Io) naming the path on failure.
void write_text_file(const std::string& text, const std::string& path);

}  // namespace mixodyn
