#pragma once

#include "polyimage/scalar.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <map>
#include <vector>

namespace polyimage {

using Monomial = std::vector<std::uint32_t>;

// Graded lexicographic order: total degree first, then lexicographic on the
// exponent vector.
struct GrlexLess {
    bool operator()(const Monomial& a, const Monomial& b) const;
};

template <class T>
T scalar_cast(const Scalar& q);
template <>
inline Scalar scalar_cast<Scalar>(const Scalar& q) { return q; }
template <>
inline double scalar_cast<double>(const Scalar& q) { return q.get_d(); }

// Sparse multivariate polynomial with exact rational coefficients. Variables
// are 0-based in the API; zero coefficients are never stored.
class Poly {
public:
    using Terms = std::map<Monomial, Scalar, GrlexLess>;

    Poly() = default;
    explicit Poly(std::size_t dim) : dim_(dim) {}

    static Poly constant(std::size_t dim, const Scalar& c);
    static Poly variable(std::size_t dim, std::size_t index);
    // a·x + b
    static Poly linear(const Vec& a, const Scalar& b);

    std::size_t dim() const { return dim_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Scalar constant_term() const;
    Scalar coeff(const Monomial& m) const;

    void add_term(const Monomial& m, const Scalar& c);

    // Total degree; -1 for the zero polynomial.
    int degree() const;
    int degree_in(std::size_t var) const;

    Poly operator-() const;
    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly& operator*=(const Scalar& c);
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);
    friend Poly operator*(Poly a, const Scalar& c) { return a *= c; }
    friend Poly operator*(const Scalar& c, Poly a) { return a *= c; }
    friend bool operator==(const Poly& a, const Poly& b) { return a.dim_ == b.dim_ && a.terms_ == b.terms_; }
    Poly pow(unsigned e) const;

    template <class T>
    T eval(const std::vector<T>& x) const;

    // Replace variable `slot` by q (q.dim() == dim()).
    Poly substitute(std::size_t slot, const Poly& q) const;
    // Replace every variable i by qs[i]; all qs share a dimension m, which
    // becomes the dimension of the result.
    Poly compose(const std::vector<Poly>& qs) const;
    // Renames variable i to var_map[i] inside a space of dimension new_dim.
    Poly remap(std::size_t new_dim, const std::vector<std::size_t>& var_map) const;
    // Coefficients c_k of p(base + t·dir) = Σ c_k t^k.
    Vec restrict_to_line(const Vec& base, const Vec& dir) const;

    nlohmann::json to_json() const;
    static Poly from_json(const nlohmann::json& j);

private:
    std::size_t dim_ = 0;
    Terms terms_;
};

struct RationalSubstitution {
    Poly num;
    Poly den;
};

// Returns (den^d · p[slot := num/den], den^d) where d = degree of p in slot.
RationalSubstitution rational_substitute(const Poly& p, std::size_t slot, const Poly& num, const Poly& den);

template <class T>
T Poly::eval(const std::vector<T>& x) const {
    // Power tables per variable keep the cost linear in the number of terms.
    std::vector<std::vector<T>> powers(dim_);
    for (std::size_t i = 0; i < dim_; ++i) powers[i].push_back(T(1));
    T sum(0);
    for (const auto& [m, c] : terms_) {
        T term = scalar_cast<T>(c);
        for (std::size_t i = 0; i < dim_; ++i) {
            if (m[i] == 0) continue;
            auto& pw = powers[i];
            while (pw.size() <= m[i]) pw.push_back(pw.back() * x[i]);
            term *= pw[m[i]];
        }
        sum += term;
    }
    return sum;
}

// Integer-coefficient form for fast exact evaluation at rational points: the
// point is brought to a common denominator so the inner loop is mpz-only.
class ExactPolyEvaluator {
public:
    ExactPolyEvaluator() = default;
    explicit ExactPolyEvaluator(const Poly& p);
    Scalar operator()(const Vec& x) const;

private:
    std::size_t dim_ = 0;
    int degree_ = -1;
    std::vector<Monomial> exps_;
    std::vector<mpz_class> coeffs_;  // coefficients times denom_
    std::vector<int> total_;         // total degree of each term
    mpz_class denom_;
};

// Double-precision evaluator with flattened storage.
class DoublePolyEvaluator {
public:
    DoublePolyEvaluator() = default;
    explicit DoublePolyEvaluator(const Poly& p);
    double operator()(const double* x) const;

private:
    std::size_t dim_ = 0;
    std::vector<std::uint32_t> max_exp_;
    std::vector<std::uint32_t> exps_;  // term-major, dim_ entries per term
    std::vector<double> coeffs_;
};

}  // namespace polyimage
