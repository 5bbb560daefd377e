#pragma once

#include <string>
#include <string_view>

namespace ttda {

/// Shortest round-trippable decimal, independent of the C locale; infinities
/// print as `inf` / `-inf`.
std::string format_double(double v);

/// Inverse of format_double (also accepts `inf`, `+inf`, `-inf`).
double parse_double(std::string_view text);

}  // namespace ttda
