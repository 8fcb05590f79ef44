#pragma once

#include <string>
#include <string_view>

namespace cvdiscord {

/// Nine significant digits, locale independent; negative zero prints as 0.
std::string format_number(double value);

/// Rounds to nine significant digits (what format_number would print).
double round_significant(double value);

/// Parses a full decimal field; ParseError names `field` on failure.
double parse_double(std::string_view text, std::string_view field);

}  // namespace cvdiscord
