#pragma once

#include <string>
#include <string_view>

#include "detsing/polynomial.hpp"

namespace detsing {

/// Parses the text grammar: terms joined by '+'/'-', each term an optional
/// integer or a/b coefficient and '*'-joined powers "name^k".
/// Throws SyntaxError or UnknownVariable.
Polynomial parse_polynomial(const RingPtr& ring, std::string_view text);

/// Canonical rendering; parse_polynomial(ring, format_polynomial(f)) == f.
std::string format_polynomial(const Polynomial& f);

}  // namespace detsing
