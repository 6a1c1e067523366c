#pragma once

#include "formality/algebra.hpp"

#include <string>

namespace formality {

/// Parses the line-oriented presentation format:
///
///   name cp1-model
///   kind free
///   truncation 4
///   generator x bidegree (1,1)
///   del r = rp
///   delbar rp = -1 * x*x
///   mul a b = 1/2*c + (1/2-i)*e        (finite kind)
///
/// '#' starts a comment. Errors carry "source:line:col".
Presentation parse_presentation(const std::string& text, const std::string& source = "<input>");
Presentation parse_presentation_file(const std::string& path);

std::string serialize(const Presentation& p);
std::string poly_to_string(const Presentation& p, const Poly& poly);

/// Element of a built algebra written as a polynomial in its generators or
/// basis symbols, as printed by to_string.
Element parse_element(const Bicomplex& a, const std::string& text);

/// Scalar literal as accepted in polynomials, e.g. "-1/2+1/3*i".
Scalar parse_scalar(const std::string& text);

}  // namespace formality
