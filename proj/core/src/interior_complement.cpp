#include "polyimage/interior_complement.hpp"

#include "polyimage/errors.hpp"

#include <algorithm>

namespace polyimage {

namespace {

Poly lift(const Poly& p, std::size_t n) {
    std::vector<std::size_t> ids(p.dim());
    for (std::size_t i = 0; i < p.dim(); ++i) ids[i] = i;
    return p.remap(n, ids);
}

[[noreturn]] void bad_position(const Polyhedron& k, const std::string& why) {
    throw SynthesisError("BadPosition", "polyhedron is not positioned for the induction step: " + why, k.to_json());
}

nlohmann::json node(const char* kind, const Polyhedron& k) { return {{"kind", kind}, {"polyhedron", k.to_json()}}; }

struct Recursion {
    const CompactBaseProvider& provider;

    SynthesisResult run(const Polyhedron& input) {
        std::size_t n = input.dim;
        Polyhedron k = minimal_presentation(input);
        if (k.constraints.empty())
            throw SynthesisError("UniversePolyhedron", "the polyhedron is the whole space; its interior has empty complement",
                                 node("universe", k));
        if (is_layer(k)) throw SynthesisError("LayerEncountered", "a recursion node is a layer", node("layer", k));
        if (n == 1) return base_n1(k);
        if (is_degenerate(k)) return degenerate(k);
        if (is_bounded(k)) return compact(k);
        return step(k);
    }

    SynthesisResult base_n1(const Polyhedron& k) {
        // One constraint g·x + c >= 0; the closed complement of its interior is
        // {g·x + c <= 0} = {-(c + s)/g : s >= 0}.
        const LinearForm& h = k.constraints.front();
        const Scalar& g = h.gradient[0];
        MapChain chain(1);
        chain.append(PolyMap{{Poly::variable(1, 0) * Poly::variable(1, 0)}}, "square");
        AffineMap a{{{Scalar(-1) / g}}, {-h.constant / g}};
        chain.append(a, "half-line");
        auto trace = node("base-n1", k);
        trace["affine"] = a.to_json();
        return {chain, trace};
    }

    SynthesisResult degenerate(const Polyhedron& k) {
        std::size_t n = k.dim;
        LinealityDecomposition d = lineality_decomposition(k);
        SynthesisResult sub = run(d.factor);
        MapChain chain = sub.chain.embed(n, 0);
        chain.append(d.witness.inverse(), "lineality-inverse");
        auto trace = node("degenerate-product", k);
        trace["witness"] = d.witness.to_json();
        trace["factor_dim"] = d.k;
        trace["child"] = sub.trace;
        return {chain, trace};
    }

    SynthesisResult compact(const Polyhedron& k) {
        if (provider)
            if (auto supplied = provider(k)) {
                if (supplied->dim() != k.dim) throw ValidationError("supplied compact-base chain has the wrong dimension");
                return {*supplied, node("compact-provided", k)};
            }
        throw SynthesisError("CompactBaseRequired",
                             "a recursion node is a compact polytope; supply its interior-complement chain externally",
                             node("compact", k));
    }

    SynthesisResult step(const Polyhedron& k) {
        std::size_t n = k.dim;
        PositionedStep ps = position_step(k);
        const AffineMap& place = ps.placement;
        const Polyhedron& kp = ps.positioned;
        std::size_t m = ps.facet;
        InteriorStepPolys polys = build_QGP(kp);
        bool case2 = polys.r == polys.m - 1;

        Polyhedron rest{n, {}, true};
        for (std::size_t i = 0; i < k.constraints.size(); ++i)
            if (i != m) rest.constraints.push_back(k.constraints[i]);
        SynthesisResult sub = run(rest);

        MapChain chain = sub.chain;
        chain.append(place, "reposition");
        if (case2) {
            Polyhedron base{n - 1, {}, true};
            Poly h = Poly::constant(n - 1, Scalar(1));
            for (std::size_t i = 0; i < kp.constraints.size(); ++i) {
                if (i == m) continue;
                LinearForm f{Vec(kp.constraints[i].gradient.begin(), kp.constraints[i].gradient.end() - 1),
                             kp.constraints[i].constant};
                h = h * f.to_poly();
                base.constraints.push_back(std::move(f));
            }
            chain.append(build_F0(base, h), "F0");
        }
        chain.append(build_F(polys), "F");
        chain.append(place.inverse(), "reposition-inverse");

        auto trace = node(case2 ? "case2" : "case1", k);
        trace["placement"] = place.to_json();
        trace["relative_interior"] = ps.relative_interior;
        trace["facet"] = m;
        trace["r"] = polys.r;
        trace["m"] = polys.m;
        trace["child"] = sub.trace;
        return {chain, trace};
    }
};

}  // namespace

PositionedStep position_step(const Polyhedron& k) {
    std::size_t n = k.dim;
    Placement b = place_recession_relative_interior(k);
    Polyhedron kb = k.transformed(b.map);
    std::size_t m = kb.constraints.size();
    for (std::size_t i = 0; i < kb.constraints.size(); ++i)
        if (kb.constraints[i].gradient[n - 1] != 0) {
            m = i;
            break;
        }
    if (m == kb.constraints.size()) bad_position(kb, "no non-vertical facet");
    auto p = relative_interior_point(kb, {m});
    if (!p) bad_position(kb, "the distinguished facet has empty relative interior");
    // y' = x' - p', y_n = h_m(x) / a_{m,n}; K ⊂ {y_n <= 0} since a_{m,n} < 0.
    const LinearForm& hm = kb.constraints[m];
    AffineMap a = AffineMap::identity(n);
    for (std::size_t i = 0; i + 1 < n; ++i) a.translation[i] = -(*p)[i];
    for (std::size_t j = 0; j < n; ++j) a.matrix[n - 1][j] = hm.gradient[j] / hm.gradient[n - 1];
    a.translation[n - 1] = hm.constant / hm.gradient[n - 1];
    PositionedStep out;
    out.placement = a.after(b.map);
    out.positioned = k.transformed(out.placement);
    out.positioned.minimal = true;
    out.facet = m;
    out.relative_interior = b.relative_interior;
    return out;
}

nlohmann::json InteriorStepPolys::to_json() const {
    return {{"Q", Q.to_json()}, {"G", G.to_json()}, {"P", P.to_json()}, {"r", r}, {"m", m}, {"facet", distinguished}};
}

InteriorStepPolys build_QGP(const Polyhedron& k) {
    std::size_t n = k.dim;
    if (n < 2) bad_position(k, "dimension below 2");
    if (is_degenerate(k)) bad_position(k, "the polyhedron contains a line");

    std::optional<std::size_t> dist;
    for (std::size_t i = 0; i < k.constraints.size(); ++i) {
        const auto& h = k.constraints[i];
        bool flat = h.constant == 0 && h.gradient[n - 1] < 0;
        for (std::size_t j = 0; j + 1 < n; ++j)
            if (h.gradient[j] != 0) flat = false;
        if (flat) {
            dist = i;
            break;
        }
    }
    if (!dist) bad_position(k, "no facet on {x_n = 0} bounding from above");

    Polyhedron cone{n, {}, false};
    for (const auto& h : k.constraints) cone.constraints.push_back({h.gradient, Scalar(0)});
    auto cone_eq = implicit_equalities(cone);

    InteriorStepPolys out;
    out.distinguished = *dist;
    out.m = static_cast<int>(k.constraints.size());
    Poly xn = Poly::variable(n, n - 1);
    Poly vertical = Poly::constant(n, Scalar(1));
    Poly slanted = Poly::constant(n, Scalar(1));
    Poly q = xn - Poly::constant(n, Scalar(1));
    for (std::size_t j = 0; j + 1 < n; ++j) q -= Poly::variable(n, j) * Poly::variable(n, j);

    for (std::size_t i = 0; i < k.constraints.size(); ++i) {
        if (i == *dist) continue;
        const auto& h = k.constraints[i];
        const Scalar& an = h.gradient[n - 1];
        if (h.constant <= 0) bad_position(k, "the origin is not in the relative interior of the distinguished facet");
        if (an > 0) bad_position(k, "-e_n leaves the recession cone");
        if (an == 0) {
            if (std::find(cone_eq.begin(), cone_eq.end(), i) == cone_eq.end())
                bad_position(k, "-e_n is not in the relative interior of the recession cone");
            vertical = vertical * h.to_poly();
            ++out.r;
        } else {
            // h / |a_n| = h0(x') - x_n
            Scalar s = 1 / -an;
            Vec g0(h.gradient.begin(), h.gradient.end());
            for (auto& v : g0) v *= s;
            g0[n - 1] = 0;
            Poly h0 = Poly::linear(g0, h.constant * s);
            slanted = slanted * (h0 - xn);
            q -= (h0 * h0 + Poly::constant(n, Scalar(1))) * Scalar(1, 2);
        }
    }
    out.Q = q;
    out.G = vertical * vertical * slanted;
    out.P = Poly::constant(n, Scalar(1)) - out.Q * out.G * out.G;
    return out;
}

PolyMap build_F(const InteriorStepPolys& polys) {
    std::size_t n = polys.P.dim();
    Poly one = Poly::constant(n, Scalar(1));
    Poly p2 = polys.P * polys.P;
    Poly pm1 = polys.P - one;
    Poly stretch = pm1 * pm1 + p2;
    PolyMap f;
    for (std::size_t i = 0; i + 1 < n; ++i) f.components.push_back(Poly::variable(n, i) * stretch);
    f.components.push_back(Poly::variable(n, n - 1) * p2);
    return f;
}

PolyMap build_F0(const Polyhedron& p, const Poly& h) {
    std::size_t n = p.dim + 1;
    if (!p.contains_interior(Vec(p.dim, Scalar(0))))
        throw SynthesisError("OriginNotInterior", "the origin must lie in the interior of the base polytope", p.to_json());
    Poly hl = lift(h, n);
    Poly factor = Poly::constant(n, Scalar(1)) - Poly::variable(n, n - 1) * hl * hl;
    PolyMap f;
    for (std::size_t i = 0; i + 1 < n; ++i) f.components.push_back(Poly::variable(n, i) * factor);
    f.components.push_back(Poly::variable(n, n - 1));
    return f;
}

CompactBaseProvider provider_from_json(const nlohmann::json& entries) {
    if (!entries.is_array()) throw ValidationError("compact-base provider file must be a JSON array");
    std::vector<std::pair<Polyhedron, MapChain>> table;
    for (const auto& e : entries) {
        if (!e.contains("polyhedron") || !e.contains("chain"))
            throw ValidationError("provider entries need 'polyhedron' and 'chain'");
        table.emplace_back(minimal_presentation(Polyhedron::from_json(e["polyhedron"])), MapChain::from_json(e["chain"]));
    }
    return [table = std::move(table)](const Polyhedron& k) -> std::optional<MapChain> {
        Polyhedron km = minimal_presentation(k);
        for (const auto& [p, c] : table)
            if (p.dim == km.dim && p.constraints == km.constraints) return c;
        return std::nullopt;
    };
}

SynthesisResult synthesize_interior_complement(const Polyhedron& k, const CompactBaseProvider& provider) {
    Recursion rec{provider};
    SynthesisResult r = rec.run(k);
    r.chain.meta = {{"target", "interior-complement"}, {"polyhedron", k.to_json()}};
    return r;
}

}  // namespace polyimage
