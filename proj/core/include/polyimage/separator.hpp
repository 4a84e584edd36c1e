#pragma once

#include "polyimage/poly.hpp"

#include <memory>
#include <optional>

namespace polyimage {

struct SeparatorPlan;

// A rational function num/den in the variables (y_1..y_r, z_1..z_s) that lies
// strictly between max{y} and min{z} whenever max{y} < min{z}. The roots
// satisfy num = num_root·den_root and den = den_root², so the denominator is
// a square and its zeros are zeros of the numerator.
//
// The value follows the construction (base, swap, embedding, substitution)
// and is computed exactly without expanding anything. The roots are expanded
// on first request only: from r, s >= 3 on they run to thousands of terms and
// (4,4) is out of reach.
class RationalSeparator {
public:
    RationalSeparator() = default;
    static RationalSeparator from_roots(int r, int s, Poly num_root, Poly den_root);

    int r() const;
    int s() const;
    std::size_t dim() const { return static_cast<std::size_t>(r() + s()); }

    const Poly& num_root() const;  // g2'
    const Poly& den_root() const;  // g1'
    Poly num() const { return num_root() * den_root(); }
    Poly den() const { return den_root() * den_root(); }

    // num/den through the construction; nullopt where a denominator met on
    // the way vanishes (den = 0 there).
    std::optional<Scalar> value(const Vec& x) const;
    // value(x), else the common value on the all-equal diagonal, else nullopt.
    std::optional<Scalar> eval(const Vec& x) const;

    nlohmann::json to_json() const;

private:
    explicit RationalSeparator(std::shared_ptr<const SeparatorPlan> plan) : plan_(std::move(plan)) {}
    std::shared_ptr<const SeparatorPlan> plan_;

    friend RationalSeparator swap(const RationalSeparator&);
    friend RationalSeparator embed(const RationalSeparator&, int, int);
    friend RationalSeparator compose_step(const RationalSeparator&, const RationalSeparator&);
};

RationalSeparator phi22();
// φ_{s,r}(u; w) = -φ_{r,s}(-w; -u)
RationalSeparator swap(const RationalSeparator& sep);
// Precomposition with the repetition embedding: the separator for (r-k, s-l)
// obtained by repeating the last y k times and the last z l times.
RationalSeparator embed(const RationalSeparator& sep, int k, int l);
// φ(y; z) = outer(y_1..y_{r-k}, inner(y_{r-k+1}..y_r; z); z)
RationalSeparator compose_step(const RationalSeparator& outer, const RationalSeparator& inner);
// Memoized; safe to call from several threads.
const RationalSeparator& build_separator(int r, int s);

}  // namespace polyimage
