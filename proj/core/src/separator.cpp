#include "polyimage/separator.hpp"

#include "polyimage/errors.hpp"

#include <map>
#include <mutex>

namespace polyimage {

// One node of the construction. Expansion is memoized per node, so shared
// sub-separators are expanded once.
struct SeparatorPlan {
    enum class Kind { Leaf, Swap, Embed, Compose };

    Kind kind = Kind::Leaf;
    int r = 0;
    int s = 0;
    std::shared_ptr<const SeparatorPlan> first;   // child, or the outer separator
    std::shared_ptr<const SeparatorPlan> second;  // the inner separator
    int k = 0;
    int l = 0;

    mutable std::once_flag expanded;
    mutable Poly num_root;
    mutable Poly den_root;

    std::size_t dim() const { return static_cast<std::size_t>(r + s); }

    void expand() const;
    std::optional<Scalar> value(const Vec& x) const;
};

namespace {

using PlanPtr = std::shared_ptr<SeparatorPlan>;

// Variable i of the embedded child reads variable map[i] of the smaller space.
std::vector<std::size_t> embed_map(const SeparatorPlan& child, int r, int s) {
    std::vector<std::size_t> var_map;
    for (int i = 0; i < child.r; ++i) var_map.push_back(static_cast<std::size_t>(std::min(i, r - 1)));
    for (int j = 0; j < child.s; ++j) var_map.push_back(static_cast<std::size_t>(r + std::min(j, s - 1)));
    return var_map;
}

}  // namespace

void SeparatorPlan::expand() const {
    std::call_once(expanded, [this] {
        std::size_t n = dim();
        switch (kind) {
            case Kind::Leaf:
                break;
            case Kind::Swap: {
                first->expand();
                std::vector<Poly> qs;
                for (int i = 0; i < first->r; ++i) qs.push_back(-Poly::variable(n, static_cast<std::size_t>(r + i)));
                for (int j = 0; j < first->s; ++j) qs.push_back(-Poly::variable(n, static_cast<std::size_t>(j)));
                num_root = -first->num_root.compose(qs);
                den_root = first->den_root.compose(qs);
                break;
            }
            case Kind::Embed: {
                first->expand();
                auto var_map = embed_map(*first, r, s);
                num_root = first->num_root.remap(n, var_map);
                den_root = first->den_root.remap(n, var_map);
                break;
            }
            case Kind::Compose: {
                const SeparatorPlan& outer = *first;
                const SeparatorPlan& inner = *second;
                outer.expand();
                inner.expand();
                int kk = inner.r;
                std::size_t slot = n;  // an auxiliary variable standing for the inner value
                std::vector<std::size_t> outer_map;
                for (int i = 0; i < outer.r - 1; ++i) outer_map.push_back(static_cast<std::size_t>(i));
                outer_map.push_back(slot);
                for (int j = 0; j < s; ++j) outer_map.push_back(static_cast<std::size_t>(r + j));
                std::vector<std::size_t> inner_map;
                for (int i = 0; i < kk; ++i) inner_map.push_back(static_cast<std::size_t>(r - kk + i));
                for (int j = 0; j < s; ++j) inner_map.push_back(static_cast<std::size_t>(r + j));

                Poly a = inner.num_root.remap(n + 1, inner_map);
                Poly b = inner.den_root.remap(n + 1, inner_map);
                Poly g2 = outer.num_root.remap(n + 1, outer_map);
                Poly g1 = outer.den_root.remap(n + 1, outer_map);
                int d2 = std::max(g2.degree_in(slot), 0), d1 = std::max(g1.degree_in(slot), 0);
                int d = std::max(d1, d2);
                Poly n2 = rational_substitute(g2, slot, a, b).num * b.pow(static_cast<unsigned>(d - d2));
                Poly n1 = rational_substitute(g1, slot, a, b).num * b.pow(static_cast<unsigned>(d - d1));

                std::vector<std::size_t> drop(n + 1);
                for (std::size_t i = 0; i <= n; ++i) drop[i] = std::min(i, n - 1);  // slot no longer occurs
                num_root = n2.remap(n, drop);
                den_root = n1.remap(n, drop);
                break;
            }
        }
    });
}

std::optional<Scalar> SeparatorPlan::value(const Vec& x) const {
    switch (kind) {
        case Kind::Leaf: {
            Scalar d = den_root.eval(x);
            if (d == 0) return std::nullopt;
            return num_root.eval(x) / d;
        }
        case Kind::Swap: {
            Vec t;
            for (int j = 0; j < s; ++j) t.push_back(-x[static_cast<std::size_t>(r + j)]);
            for (int i = 0; i < r; ++i) t.push_back(-x[static_cast<std::size_t>(i)]);
            auto v = first->value(t);
            if (!v) return std::nullopt;
            return -*v;
        }
        case Kind::Embed: {
            Vec t;
            for (auto i : embed_map(*first, r, s)) t.push_back(x[i]);
            return first->value(t);
        }
        case Kind::Compose: {
            const SeparatorPlan& outer = *first;
            const SeparatorPlan& inner = *second;
            int kk = inner.r;
            Vec xi;
            for (int i = 0; i < kk; ++i) xi.push_back(x[static_cast<std::size_t>(r - kk + i)]);
            for (int j = 0; j < s; ++j) xi.push_back(x[static_cast<std::size_t>(r + j)]);
            auto v = inner.value(xi);
            if (!v) return std::nullopt;
            Vec xo;
            for (int i = 0; i < outer.r - 1; ++i) xo.push_back(x[static_cast<std::size_t>(i)]);
            xo.push_back(*v);
            for (int j = 0; j < s; ++j) xo.push_back(x[static_cast<std::size_t>(r + j)]);
            return outer.value(xo);
        }
    }
    return std::nullopt;
}

RationalSeparator RationalSeparator::from_roots(int r, int s, Poly num_root, Poly den_root) {
    auto p = std::make_shared<SeparatorPlan>();
    p->r = r;
    p->s = s;
    p->num_root = std::move(num_root);
    p->den_root = std::move(den_root);
    return RationalSeparator(std::move(p));
}

int RationalSeparator::r() const { return plan_ ? plan_->r : 0; }
int RationalSeparator::s() const { return plan_ ? plan_->s : 0; }

const Poly& RationalSeparator::num_root() const {
    plan_->expand();
    return plan_->num_root;
}

const Poly& RationalSeparator::den_root() const {
    plan_->expand();
    return plan_->den_root;
}

std::optional<Scalar> RationalSeparator::value(const Vec& x) const {
    if (x.size() != dim()) throw ValidationError("separator point has the wrong dimension");
    return plan_->value(x);
}

std::optional<Scalar> RationalSeparator::eval(const Vec& x) const {
    if (auto v = value(x)) return v;
    bool all_equal = true;
    for (const auto& v : x) all_equal &= v == x[0];
    if (all_equal) return x[0];
    return std::nullopt;
}

nlohmann::json RationalSeparator::to_json() const {
    return {{"r", r()}, {"s", s()}, {"num_root", num_root().to_json()}, {"den_root", den_root().to_json()}};
}

RationalSeparator phi22() {
    auto v = [](std::size_t i) { return Poly::variable(4, i); };
    Poly g1 = v(2) + v(3) - v(0) - v(1);
    Poly g2 = v(2) * v(3) - v(0) * v(1);
    return RationalSeparator::from_roots(2, 2, g2, g1);
}

RationalSeparator swap(const RationalSeparator& sep) {
    auto p = std::make_shared<SeparatorPlan>();
    p->kind = SeparatorPlan::Kind::Swap;
    p->r = sep.s();
    p->s = sep.r();
    p->first = sep.plan_;
    return RationalSeparator(std::move(p));
}

RationalSeparator embed(const RationalSeparator& sep, int k, int l) {
    int r = sep.r() - k, s = sep.s() - l;
    if (k < 0 || l < 0 || r < 1 || s < 1) throw ValidationError("embedding needs 0 <= k < r and 0 <= l < s");
    auto p = std::make_shared<SeparatorPlan>();
    p->kind = SeparatorPlan::Kind::Embed;
    p->r = r;
    p->s = s;
    p->k = k;
    p->l = l;
    p->first = sep.plan_;
    return RationalSeparator(std::move(p));
}

RationalSeparator compose_step(const RationalSeparator& outer, const RationalSeparator& inner) {
    if (outer.s() != inner.s()) throw ValidationError("compose_step needs matching z-tuple lengths");
    auto p = std::make_shared<SeparatorPlan>();
    p->kind = SeparatorPlan::Kind::Compose;
    p->r = outer.r() + inner.r() - 1;
    p->s = outer.s();
    p->first = outer.plan_;
    p->second = inner.plan_;
    return RationalSeparator(std::move(p));
}

namespace {

RationalSeparator build_uncached(int r, int s) {
    if (r == 2 && s == 2) return phi22();
    if (r == 1) return embed(build_separator(2, s), 1, 0);
    if (s == 1) return embed(build_separator(r, 2), 0, 1);
    if (std::min(r, s) == 2) {
        if (s == 2) return compose_step(build_separator(r - 1, 2), build_separator(2, 2));
        return swap(build_separator(s, r));
    }
    if (r <= s) return compose_step(build_separator(r - 1, s), build_separator(2, s));
    return swap(build_separator(s, r));
}

}  // namespace

const RationalSeparator& build_separator(int r, int s) {
    if (r < 1 || s < 1) throw ValidationError("separator sizes must be positive");
    static std::recursive_mutex mutex;
    static std::map<std::pair<int, int>, RationalSeparator> memo;
    std::lock_guard lock(mutex);
    auto it = memo.find({r, s});
    if (it != memo.end()) return it->second;
    RationalSeparator sep = build_uncached(r, s);
    return memo.emplace(std::make_pair(r, s), std::move(sep)).first->second;
}

}  // namespace polyimage
