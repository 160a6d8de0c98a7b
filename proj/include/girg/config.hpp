#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "girg/sampler.hpp"

namespace girg {

// One `key = value` line of a flat config file.
struct ConfigEntry {
    std::string key;
    std::string value;
    std::size_t line = 0;
};

// Blank lines and `#` comments are skipped. Throws ParseError on a line without
// `=`, an empty key, or a repeated key.
std::vector<ConfigEntry> read_entries(std::istream& in);

// Splits on commas that are not inside parentheses and trims each item.
std::vector<std::string> split_list(std::string_view value);

// Parses "chung_lu", "distance", "threshold" or the parameterised form produced
// by describe(), e.g. "distance(alpha=2,norm=min_component)". Missing parameters
// take the struct defaults.
KernelKind parse_kernel(std::string_view spec);

// Keys: n, beta, w_min, d, kernel, alpha, norm, c_low, c_high, seed, sampler, w_bar.
// alpha/norm/c_low/c_high override the parameters of `kernel`. Unknown keys and
// malformed values raise ParseError; the result is validated.
ModelConfig parse_config(std::istream& in);
ModelConfig read_config(const std::string& path);

std::string serialize_config(const ModelConfig& config);
void write_config(const std::string& path, const ModelConfig& config);

}  // namespace girg
