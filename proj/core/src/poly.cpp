#include "polyimage/poly.hpp"

#include "polyimage/errors.hpp"

#include <algorithm>
#include <numeric>

namespace polyimage {

namespace {

std::uint32_t total_degree(const Monomial& m) { return std::accumulate(m.begin(), m.end(), std::uint32_t{0}); }

}  // namespace

bool GrlexLess::operator()(const Monomial& a, const Monomial& b) const {
    auto da = total_degree(a), db = total_degree(b);
    if (da != db) return da < db;
    return a < b;
}

Poly Poly::constant(std::size_t dim, const Scalar& c) {
    Poly p(dim);
    p.add_term(Monomial(dim, 0), c);
    return p;
}

Poly Poly::variable(std::size_t dim, std::size_t index) {
    Poly p(dim);
    Monomial m(dim, 0);
    m[index] = 1;
    p.add_term(m, Scalar(1));
    return p;
}

Poly Poly::linear(const Vec& a, const Scalar& b) {
    Poly p(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        Monomial m(a.size(), 0);
        m[i] = 1;
        p.add_term(m, a[i]);
    }
    p.add_term(Monomial(a.size(), 0), b);
    return p;
}

bool Poly::is_constant() const { return terms_.empty() || (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0); }

Scalar Poly::constant_term() const { return coeff(Monomial(dim_, 0)); }

Scalar Poly::coeff(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Scalar(0) : it->second;
}

void Poly::add_term(const Monomial& m, const Scalar& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

int Poly::degree() const {
    if (terms_.empty()) return -1;
    return static_cast<int>(total_degree(terms_.rbegin()->first));
}

int Poly::degree_in(std::size_t var) const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, static_cast<int>(m[var]));
    return d;
}

Poly Poly::operator-() const {
    Poly r = *this;
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
}

Poly& Poly::operator+=(const Poly& o) {
    if (dim_ == 0 && terms_.empty()) dim_ = o.dim_;
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    if (dim_ == 0 && terms_.empty()) dim_ = o.dim_;
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

Poly& Poly::operator*=(const Scalar& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, v] : terms_) v *= c;
    return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
    Poly r(std::max(a.dim_, b.dim_));
    if (a.terms_.empty() || b.terms_.empty()) return r;
    Monomial m(r.dim_, 0);
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_) {
            for (std::size_t i = 0; i < r.dim_; ++i) m[i] = ma[i] + mb[i];
            r.add_term(m, ca * cb);
        }
    return r;
}

Poly Poly::pow(unsigned e) const {
    Poly result = Poly::constant(dim_, Scalar(1));
    Poly base = *this;
    while (e) {
        if (e & 1u) result = result * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return result;
}

Poly Poly::substitute(std::size_t slot, const Poly& q) const {
    std::vector<Poly> qs;
    for (std::size_t i = 0; i < dim_; ++i) qs.push_back(i == slot ? q : Poly::variable(dim_, i));
    return compose(qs);
}

Poly Poly::compose(const std::vector<Poly>& qs) const {
    std::size_t m = qs.empty() ? 0 : qs[0].dim();
    Poly result(m);
    // Cache powers of each substituted polynomial.
    std::vector<std::vector<Poly>> powers(dim_);
    for (std::size_t i = 0; i < dim_; ++i) powers[i].push_back(Poly::constant(m, Scalar(1)));
    for (const auto& [mono, c] : terms_) {
        Poly term = Poly::constant(m, c);
        for (std::size_t i = 0; i < dim_; ++i) {
            if (mono[i] == 0) continue;
            auto& pw = powers[i];
            while (pw.size() <= mono[i]) pw.push_back(pw.back() * qs[i]);
            term = term * pw[mono[i]];
        }
        result += term;
    }
    return result;
}

Poly Poly::remap(std::size_t new_dim, const std::vector<std::size_t>& var_map) const {
    Poly r(new_dim);
    for (const auto& [m, c] : terms_) {
        Monomial nm(new_dim, 0);
        for (std::size_t i = 0; i < dim_; ++i) nm[var_map[i]] += m[i];
        r.add_term(nm, c);
    }
    return r;
}

Vec Poly::restrict_to_line(const Vec& base, const Vec& dir) const {
    Poly t(1);
    std::vector<Poly> qs;
    for (std::size_t i = 0; i < dim_; ++i) {
        Poly q = Poly::constant(1, base[i]);
        q += Poly::variable(1, 0) * dir[i];
        qs.push_back(std::move(q));
    }
    Poly u = compose(qs);
    int d = std::max(u.degree(), 0);
    Vec out(static_cast<std::size_t>(d) + 1, Scalar(0));
    for (const auto& [m, c] : u.terms()) out[m[0]] = c;
    return out;
}

nlohmann::json Poly::to_json() const {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [m, c] : terms_) terms.push_back({{"exps", m}, {"coeff", format_scalar(c)}});
    return {{"dim", dim_}, {"terms", terms}};
}

Poly Poly::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("terms"))
        throw ValidationError("polynomial JSON needs 'dim' and 'terms'");
    if (!j["dim"].is_number_unsigned()) throw ValidationError("polynomial 'dim' must be a non-negative integer");
    Poly p(j["dim"].get<std::size_t>());
    for (const auto& t : j["terms"]) {
        if (!t.contains("exps") || !t.contains("coeff")) throw ValidationError("term needs 'exps' and 'coeff'");
        Monomial m = t["exps"].get<Monomial>();
        if (m.size() != p.dim_) throw ValidationError("exponent vector length does not match 'dim'");
        const auto& c = t["coeff"];
        p.add_term(m, c.is_string() ? parse_scalar(c.get<std::string>()) : parse_scalar(c.dump()));
    }
    return p;
}

RationalSubstitution rational_substitute(const Poly& p, std::size_t slot, const Poly& num, const Poly& den) {
    std::size_t n = p.dim();
    int d = std::max(p.degree_in(slot), 0);
    // Group p by powers of the slot variable: p = Σ_k c_k(x) x_slot^k.
    std::vector<Poly> by_power(static_cast<std::size_t>(d) + 1, Poly(n));
    for (const auto& [m, c] : p.terms()) {
        Monomial rest = m;
        rest[slot] = 0;
        by_power[m[slot]].add_term(rest, c);
    }
    std::vector<Poly> num_pow{Poly::constant(n, Scalar(1))}, den_pow{Poly::constant(n, Scalar(1))};
    for (int k = 1; k <= d; ++k) {
        num_pow.push_back(num_pow.back() * num);
        den_pow.push_back(den_pow.back() * den);
    }
    Poly out(n);
    for (int k = 0; k <= d; ++k) {
        if (by_power[k].is_zero()) continue;
        out += by_power[k] * num_pow[k] * den_pow[d - k];
    }
    return {out, den_pow[d]};
}

ExactPolyEvaluator::ExactPolyEvaluator(const Poly& p) : dim_(p.dim()), degree_(p.degree()) {
    denom_ = 1;
    for (const auto& [m, c] : p.terms()) mpz_lcm(denom_.get_mpz_t(), denom_.get_mpz_t(), c.get_den_mpz_t());
    for (const auto& [m, c] : p.terms()) {
        exps_.push_back(m);
        coeffs_.push_back(c.get_num() * (denom_ / c.get_den()));
        total_.push_back(static_cast<int>(total_degree(m)));
    }
}

Scalar ExactPolyEvaluator::operator()(const Vec& x) const {
    if (degree_ < 0) return Scalar(0);
    mpz_class D = 1;
    for (const auto& v : x) mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), v.get_den_mpz_t());
    std::vector<mpz_class> X(dim_);
    for (std::size_t i = 0; i < dim_; ++i) X[i] = x[i].get_num() * (D / x[i].get_den());
    std::vector<std::vector<mpz_class>> xp(dim_);
    for (std::size_t i = 0; i < dim_; ++i) xp[i].push_back(mpz_class(1));
    std::vector<mpz_class> dp{mpz_class(1)};
    // Σ c_m X^m D^{deg-|m|} / (D^deg · denom)
    mpz_class sum = 0, term;
    for (std::size_t t = 0; t < exps_.size(); ++t) {
        term = coeffs_[t];
        for (std::size_t i = 0; i < dim_; ++i) {
            auto e = exps_[t][i];
            if (e == 0) continue;
            auto& pw = xp[i];
            while (pw.size() <= e) pw.push_back(pw.back() * X[i]);
            term *= pw[e];
        }
        auto k = static_cast<std::size_t>(degree_ - total_[t]);
        if (k) {
            while (dp.size() <= k) dp.push_back(dp.back() * D);
            term *= dp[k];
        }
        sum += term;
    }
    mpz_class den;
    mpz_pow_ui(den.get_mpz_t(), D.get_mpz_t(), static_cast<unsigned long>(degree_));
    den *= denom_;
    Scalar r(sum, den);
    r.canonicalize();
    return r;
}

DoublePolyEvaluator::DoublePolyEvaluator(const Poly& p) : dim_(p.dim()), max_exp_(p.dim(), 0) {
    for (const auto& [m, c] : p.terms()) {
        for (std::size_t i = 0; i < dim_; ++i) {
            exps_.push_back(m[i]);
            max_exp_[i] = std::max(max_exp_[i], m[i]);
        }
        coeffs_.push_back(c.get_d());
    }
}

double DoublePolyEvaluator::operator()(const double* x) const {
    thread_local std::vector<double> table;
    std::size_t stride = 0;
    for (auto e : max_exp_) stride = std::max<std::size_t>(stride, e + 1);
    table.assign(dim_ * stride, 1.0);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::uint32_t k = 1; k <= max_exp_[i]; ++k) table[i * stride + k] = table[i * stride + k - 1] * x[i];
    double sum = 0;
    for (std::size_t t = 0; t < coeffs_.size(); ++t) {
        double term = coeffs_[t];
        const std::uint32_t* e = &exps_[t * dim_];
        for (std::size_t i = 0; i < dim_; ++i)
            if (e[i]) term *= table[i * stride + e[i]];
        sum += term;
    }
    return sum;
}

}  // namespace polyimage
