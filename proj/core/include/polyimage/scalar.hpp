#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace polyimage {

// Exact rational; gmpxx keeps values canonical (reduced, positive denominator)
// after every arithmetic operation.
using Scalar = mpq_class;
using Vec = std::vector<Scalar>;

// Parses "p/q", "p", "-p/q" and plain decimal literals such as "0.25".
// Throws ValidationError on malformed input or a zero denominator.
Scalar parse_scalar(std::string_view text);

std::string format_scalar(const Scalar& q);

Vec parse_point(std::string_view csv);
std::string format_point(const Vec& v);

inline int sign(const Scalar& q) { return sgn(q); }

Scalar dot(const Vec& a, const Vec& b);
Scalar norm_sq(const Vec& a);
bool is_zero(const Vec& a);

std::vector<double> to_double(const Vec& v);

}  // namespace polyimage
