#pragma once

#include "polyimage/chain.hpp"
#include "polyimage/geometry.hpp"
#include "polyimage/poly.hpp"
#include "polyimage/scalar.hpp"

#include <initializer_list>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace polyimage::test {

inline Scalar q(const char* text) { return parse_scalar(text); }
inline Scalar q(long v) { return Scalar(v); }

inline Vec vec(std::initializer_list<Scalar> xs) { return Vec(xs); }

// One constraint a·x + b >= 0 with integer data.
struct Row {
    std::vector<long> a;
    long b = 0;
};

inline Polyhedron polyhedron(std::size_t n, std::initializer_list<Row> rows) {
    Polyhedron p;
    p.dim = n;
    for (const auto& r : rows) {
        LinearForm f;
        for (long v : r.a) f.gradient.emplace_back(v);
        f.constant = Scalar(r.b);
        p.constraints.push_back(std::move(f));
    }
    return p;
}

// Monomial-by-monomial polynomial: {{exps}, coeff}.
inline Poly poly(std::size_t n, std::initializer_list<std::pair<Monomial, long>> terms) {
    Poly p(n);
    for (const auto& [m, c] : terms) p.add_term(m, Scalar(c));
    return p;
}

// Uniform dyadic rationals in [lo, hi] with 2^-bits resolution.
class DyadicSampler {
public:
    explicit DyadicSampler(std::uint64_t seed, int bits = 16) : g_(seed), bits_(bits) {}

    Scalar draw(const Scalar& lo, const Scalar& hi) {
        Scalar span = (hi - lo) * Scalar(mpz_class(1) << bits_);
        mpz_class steps = span.get_num() / span.get_den();
        std::uniform_int_distribution<unsigned long> d(0, steps.get_ui());
        Scalar step(mpz_class(d(g_)), mpz_class(1) << bits_);
        step.canonicalize();
        return lo + step;
    }
    Scalar draw(long lo, long hi) { return draw(Scalar(lo), Scalar(hi)); }
    Vec point(std::size_t n, long lo, long hi) {
        Vec x(n);
        for (auto& v : x) v = draw(lo, hi);
        return x;
    }
    // Strictly positive gap in (0, hi].
    Scalar gap(long hi) {
        Scalar g;
        do g = draw(0, hi);
        while (g == 0);
        return g;
    }
    std::mt19937_64& engine() { return g_; }

private:
    std::mt19937_64 g_;
    int bits_;
};

inline Scalar max_of(const Vec& v) {
    Scalar m = v.front();
    for (const auto& x : v) m = std::max<Scalar>(m, x);
    return m;
}

inline Scalar min_of(const Vec& v) {
    Scalar m = v.front();
    for (const auto& x : v) m = std::min<Scalar>(m, x);
    return m;
}

// A point on the hyperplane of constraint i, drawn by fixing all coordinates
// but one that carries a nonzero coefficient.
inline Vec point_on_hyperplane(const LinearForm& f, DyadicSampler& s, long half_width) {
    std::size_t n = f.dim();
    std::size_t pivot = 0;
    while (f.gradient[pivot] == 0) ++pivot;
    Vec x = s.point(n, -half_width, half_width);
    x[pivot] = 0;
    Scalar rest = f(x);
    x[pivot] = -rest / f.gradient[pivot];
    return x;
}

}  // namespace polyimage::test
