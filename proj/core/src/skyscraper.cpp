#include "polyimage/skyscraper.hpp"

#include "polyimage/separator.hpp"

namespace polyimage {

namespace {

LinearForm head(const LinearForm& h, const Scalar& scale) {
    LinearForm f;
    for (std::size_t i = 0; i + 1 < h.dim(); ++i) f.gradient.push_back(h.gradient[i] * scale);
    f.constant = h.constant * scale;
    return f;
}

Poly lift(const Poly& p) {
    std::vector<std::size_t> ids(p.dim());
    for (std::size_t i = 0; i < p.dim(); ++i) ids[i] = i;
    return p.remap(p.dim() + 1, ids);
}

}  // namespace

std::vector<LinearForm> FacetSplit::reconstruct() const {
    std::vector<LinearForm> out;
    auto extend = [](const LinearForm& f, const Scalar& sign_n, const Scalar& sign_rest) {
        LinearForm h;
        for (const auto& g : f.gradient) h.gradient.push_back(g * sign_rest);
        h.gradient.push_back(sign_n);
        h.constant = f.constant * sign_rest;
        return h;
    };
    for (const auto& a : floor) out.push_back(extend(a, 1, -1));
    for (const auto& b : ceiling) out.push_back(extend(b, -1, 1));
    for (const auto& c : walls) out.push_back(extend(c, 0, 1));
    return out;
}

FacetSplit split_constraints(const Polyhedron& k) {
    std::size_t n = k.dim;
    FacetSplit s;
    for (std::size_t i = 0; i < k.constraints.size(); ++i) {
        const auto& h = k.constraints[i];
        const Scalar& an = h.gradient[n - 1];
        if (an > 0) {
            // h/an = x_n - a(x') with a = -(h' / an)
            s.floor.push_back(head(h, -1 / an));
            s.floor_index.push_back(i);
        } else if (an < 0) {
            s.ceiling.push_back(head(h, -1 / an));
            s.ceiling_index.push_back(i);
        } else {
            s.walls.push_back(head(h, Scalar(1)));
            s.wall_index.push_back(i);
        }
    }
    return s;
}

FacetSplit split_facets(const Polyhedron& k) {
    FacetSplit s = split_constraints(k);
    if (s.floor.empty() || s.ceiling.empty())
        throw SynthesisError("NotBoundedPosition", "the polyhedron needs both floor and ceiling facets", k.to_json());
    return s;
}

nlohmann::json SepPoly::to_json() const {
    return {{"f1", f1.to_json()},
            {"f2", f2.to_json()},
            {"P", P.to_json()},
            {"lemma", bounded ? "bounded-position separation" : "one-sided separation"},
            {"r", r},
            {"s", s},
            {"reflected", reflected}};
}

SepPoly build_sep_poly_bounded(const Polyhedron& k) {
    FacetSplit split = split_facets(k);
    std::size_t n = k.dim;
    int r = static_cast<int>(split.floor.size()), s = static_cast<int>(split.ceiling.size());
    const RationalSeparator& sep = build_separator(r, s);
    std::vector<Poly> args;
    for (const auto& a : split.floor) args.push_back(a.to_poly());
    for (const auto& b : split.ceiling) args.push_back(b.to_poly());
    if (n == 1) {
        // x' is empty: the forms are constants in zero variables.
        for (auto& p : args) p = Poly::constant(0, p.constant_term());
    }
    SepPoly out;
    out.r = r;
    out.s = s;
    out.f1_root = sep.den_root().compose(args);
    Poly g2 = sep.num_root().compose(args);
    out.f1 = out.f1_root * out.f1_root;
    out.f2 = g2 * out.f1_root;
    out.P = lift(out.f1) * Poly::variable(n, n - 1) - lift(out.f2);
    return out;
}

SepPoly build_sep_poly_unbounded(const Polyhedron& k) {
    FacetSplit split = split_constraints(k);
    std::size_t n = k.dim;
    if (!split.floor.empty() && !split.ceiling.empty())
        throw SynthesisError("MixedSides", "both floor and ceiling facets are present; use the bounded construction",
                             k.to_json());
    if (split.floor.empty() && split.ceiling.empty())
        throw SynthesisError("NotBoundedPosition", "no facet meets the vertical direction", k.to_json());
    SepPoly out;
    out.bounded = false;
    out.reflected = split.ceiling.empty();
    // After the optional reflection every non-vertical facet is a ceiling b(x') - x_n.
    std::vector<LinearForm> ceilings = split.ceiling;
    if (out.reflected)
        for (const auto& a : split.floor) {
            LinearForm b = a;
            for (auto& g : b.gradient) g = -g;
            b.constant = -b.constant;
            ceilings.push_back(std::move(b));
        }
    out.r = 0;
    out.s = static_cast<int>(ceilings.size());
    out.f1 = Poly::constant(n - 1, Scalar(1));
    out.f1_root = out.f1;
    out.f2 = Poly(n - 1);
    for (const auto& b : ceilings) {
        Poly bp = b.to_poly();
        out.f2 -= (bp * bp + Poly::constant(n - 1, Scalar(1))) * Scalar(1, 2);
    }
    Poly xn = Poly::variable(n, n - 1);
    out.P = (out.reflected ? -xn : xn) - lift(out.f2);
    return out;
}

SepPoly build_sep_poly(const Polyhedron& k) {
    FacetSplit split = split_constraints(k);
    if (!split.floor.empty() && !split.ceiling.empty()) return build_sep_poly_bounded(k);
    return build_sep_poly_unbounded(k);
}

std::string to_string(RegionTag t) {
    switch (t) {
        case RegionTag::Basement: return "basement";
        case RegionTag::Attic: return "attic";
        case RegionTag::Inside: return "inside";
        case RegionTag::Boundary: return "boundary";
        case RegionTag::OutsidePrism: return "outside-prism";
    }
    return "unknown";
}

RegionClassifier::RegionClassifier(const Polyhedron& k) : k_(k), proj_(project(k)), split_(split_constraints(k)) {}

RegionTag RegionClassifier::operator()(const Vec& x) const {
    if (k_.contains_interior(x)) return RegionTag::Inside;
    if (k_.contains(x)) return RegionTag::Boundary;
    Vec xp(x.begin(), x.end() - 1);
    if (!proj_.contains_interior(xp)) return RegionTag::OutsidePrism;
    const Scalar& xn = x.back();
    for (const auto& a : split_.floor)
        if (xn < a(xp)) return RegionTag::Basement;
    return RegionTag::Attic;
}

RegionTag classify_region(const Polyhedron& k, const Vec& x) { return RegionClassifier(k)(x); }

}  // namespace polyimage
