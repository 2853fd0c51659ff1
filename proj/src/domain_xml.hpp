#pragma once

// Shared helpers for reading/writing variable domains in the XML dialects.
// Private to the library sources.

#include <string>

#include "stpatc/expr.hpp"
#include "stpatc/xml.hpp"

namespace stpatc::detail {

long long attr_ll(const xml::Node& n, std::string_view key, const std::string& path);
double attr_num(const xml::Node& n, std::string_view key, const std::string& path);

/// Shortest decimal form used for numeric attributes.
std::string shortest_decimal(double v);

/// Reads type/min/max/scale attributes and <value> children of a
/// variable-like element into a Domain.
Domain parse_domain(const xml::Node& v, const std::string& path);

/// Appends type/min/max/scale attributes and <value> children to `out`.
void write_domain(const Domain& d, xml::Node& out);

}  // namespace stpatc::detail
