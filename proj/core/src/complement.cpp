#include "polyimage/complement.hpp"

#include "polyimage/errors.hpp"
#include "polyimage/lp.hpp"

#include <algorithm>

namespace polyimage {

namespace {

// Calls fn on every k-subset of {0..m-1} in lexicographic order.
template <class Fn>
void for_each_subset(std::size_t m, std::size_t k, Fn&& fn) {
    if (k > m) return;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        fn(idx);
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == m - k + i - 1) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

std::size_t index_of(const Polyhedron& p, const LinearForm& h) {
    auto it = std::find(p.constraints.begin(), p.constraints.end(), h);
    return it == p.constraints.end() ? p.constraints.size() : static_cast<std::size_t>(it - p.constraints.begin());
}

std::vector<LpRow> rows_of(const Polyhedron& p, const std::vector<std::size_t>& equalities) {
    std::vector<LpRow> rows;
    for (std::size_t i = 0; i < p.constraints.size(); ++i) {
        bool eq = std::find(equalities.begin(), equalities.end(), i) != equalities.end();
        rows.push_back({p.constraints[i].gradient, eq ? Relation::Equal : Relation::GreaterEq, -p.constraints[i].constant});
    }
    return rows;
}

// The coordinate change of a residual face: keeps y_{n-1} and makes the
// segment from a relative-interior point of the face to an interior point on
// the same slice vertical, oriented so that e_n leaves the recession cone.
AffineMap face_frame(const Polyhedron& k, const FaceDescriptor& face, nlohmann::json& trace) {
    std::size_t n = k.dim;
    auto p = relative_interior_point(k, face.active);
    if (!p) throw SynthesisError("EmptyFace", "residual face has empty relative interior", k.to_json());
    Polyhedron slice = k;
    Vec e(n, Scalar(0));
    e[n - 2] = 1;
    slice.constraints.push_back({e, -(*p)[n - 2]});
    auto q = relative_interior_point(slice, {slice.constraints.size() - 1});
    if (!q) throw SynthesisError("EmptySlice", "no interior point on the slice through the face", k.to_json());
    Vec d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = (*q)[i] - (*p)[i];
    if (recession_cone(k).contains(d))
        for (auto& v : d) v = -v;
    Matrix cols;
    for (std::size_t j = 0; j < n && cols.size() + 2 < n; ++j) {
        if (j == n - 2) continue;
        Vec u(n, Scalar(0));
        u[j] = 1;
        auto trial = cols;
        trial.push_back(u);
        trial.push_back(d);
        if (rank(trial, n) == trial.size()) cols.push_back(std::move(u));
    }
    cols.push_back(e);
    cols.push_back(d);
    AffineMap inv{transpose(cols), Vec(n, Scalar(0))};
    trace["face_point"] = format_point(*p);
    trace["interior_point"] = format_point(*q);
    return inv.inverse();
}

}  // namespace

nlohmann::json DeltaCertificate::to_json() const {
    nlohmann::json fam = nlohmann::json::array();
    for (const auto& w : family) fam.push_back({{"flats", w.flats}, {"target", w.target}, {"dist_sq", format_scalar(w.dist_sq)}});
    return {{"family", fam}, {"delta_sq", infinite ? nlohmann::json("inf") : nlohmann::json(format_scalar(delta_sq))}};
}

DeltaCertificate compute_delta(const Polyhedron& k) {
    std::size_t n = k.dim, m = k.constraints.size();
    DeltaCertificate cert;
    for (std::size_t size = 1; size <= n; ++size)
        for_each_subset(m, size, [&](const std::vector<std::size_t>& flats) {
            Matrix a;
            Vec b;
            for (auto i : flats) {
                a.push_back(k.constraints[i].gradient);
                b.push_back(-k.constraints[i].constant);
            }
            if (rank(a, n) != size) return;
            auto w = solve(a, b, n);
            for (std::size_t t = 0; t < m; ++t) {
                if (std::find(flats.begin(), flats.end(), t) != flats.end()) continue;
                const LinearForm& h = k.constraints[t];
                Matrix ext = a;
                ext.push_back(h.gradient);
                if (rank(ext, n) != size) continue;  // W not parallel to H_t
                Scalar v = h(*w);
                if (v >= 0) continue;                 // W not strictly on the negative side
                DeltaWitness dw{flats, t, v * v / norm_sq(h.gradient)};
                if (cert.infinite || dw.dist_sq < cert.delta_sq) cert.delta_sq = dw.dist_sq;
                cert.infinite = false;
                cert.family.push_back(std::move(dw));
            }
        });
    return cert;
}

Polyhedron EnlargementLadder::stage(std::size_t i) const {
    Polyhedron p{k.dim, {}, false};
    for (std::size_t j = 0; j < k.constraints.size(); ++j) {
        LinearForm h = k.constraints[j];
        if (relaxed(i, j)) h.constant += epsilon;
        p.constraints.push_back(std::move(h));
    }
    return p;
}

nlohmann::json EnlargementLadder::to_json() const {
    nlohmann::json st = nlohmann::json::array();
    for (std::size_t i = 0; i <= stages(); ++i) st.push_back(stage(i).to_json());
    return {{"epsilon", format_scalar(epsilon)}, {"K0", k0.to_json()}, {"stages", st}};
}

EnlargementLadder choose_epsilon(const DeltaCertificate& cert, const Polyhedron& k) {
    EnlargementLadder l;
    l.k = k;
    l.epsilon = 1;
    if (!cert.infinite) {
        Scalar min_norm = -1;
        for (const auto& h : k.constraints) {
            Scalar a = norm_sq(h.gradient);
            if (min_norm < 0 || a < min_norm) min_norm = a;
        }
        Scalar bound = cert.delta_sq / 4 * min_norm;
        while (l.epsilon * l.epsilon >= bound) l.epsilon /= 2;
    }
    l.k0 = l.stage(0);
    return l;
}

PolyMap build_TK(const Polyhedron& k, const SepPoly& sep) {
    std::size_t n = k.dim;
    if (n < 2) throw ValidationError("T_K needs dimension at least 2");
    Poly h = Poly::constant(n, Scalar(1));
    for (const auto& c : k.constraints) h = h * c.to_poly();
    PolyMap t = PolyMap::identity(n);
    t.components[n - 1] -= Poly::variable(n, n - 2) * h * h * sep.P;
    return t;
}

StageResult step_maps(std::size_t i, const EnlargementLadder& ladder) {
    std::size_t n = ladder.k.dim;
    Polyhedron full = ladder.stage(i);
    Polyhedron ki = minimal_presentation(full);
    Polyhedron kn = minimal_presentation(ladder.stage(i + 1));
    std::size_t facet = index_of(kn, ladder.k.constraints[i]);
    if (facet == kn.constraints.size())
        throw SynthesisError("MissingFacet", "the stage facet is redundant in the next stage polyhedron", kn.to_json());

    nlohmann::json trace{{"stage", i}, {"polyhedron", ki.to_json()}};
    AffineMap place;
    try {
        place = place_bounded_position(kn, facet);
        trace["position"] = "bounded";
    } catch (const SynthesisError& e) {
        if (e.kind() != "FacetTooThin") throw;
        place = place_one_sided_position(kn, facet);
        trace["position"] = "one-sided";
    }
    trace["placement"] = place.to_json();

    Polyhedron kp = ki.transformed(place);
    SepPoly sep = build_sep_poly(kp);
    MapChain chain(n);
    chain.append(place, "stage-reposition");
    chain.append(build_TK(kp, sep), "T_K");

    // Residual faces: fibre faces over the boundary of the projection whose
    // relative interior lies in G_i (no relaxed constraint active) and which
    // reach into {x_{n-1} > 0}.
    std::vector<FaceDescriptor> residual;
    for (const auto& face : boundary_fiber_faces(kp)) {
        bool closed = std::all_of(face.active.begin(), face.active.end(), [&](std::size_t j) {
            return !ladder.relaxed(i, index_of(full, ki.constraints[j]));
        });
        if (!closed) continue;
        Vec c(n, Scalar(0));
        c[n - 2] = 1;
        LpResult r = lp_maximize(c, rows_of(kp, face.active), n);
        if (r.optimal() && r.value <= 0) continue;
        Matrix g;
        for (auto j : face.active) g.push_back(kp.constraints[j].gradient);
        Matrix ext = g;
        ext.push_back(c);
        if (rank(ext, n) == rank(g, n))
            throw SynthesisError("FaceParallelContradiction", "a residual face is parallel to the stage hyperplane",
                                 {{"polyhedron", kp.to_json()}, {"face", face.to_json()}});
        residual.push_back(face);
    }
    nlohmann::json faces = nlohmann::json::array();
    for (auto it = residual.rbegin(); it != residual.rend(); ++it) {
        nlohmann::json ft = it->to_json();
        AffineMap frame = face_frame(kp, *it, ft);
        Polyhedron kf = kp.transformed(frame);
        chain.append(frame, "face-reposition");
        chain.append(build_TK(kf, build_sep_poly(kf)), "T_K-face");
        chain.append(frame.inverse(), "face-reposition-inverse");
        ft["frame"] = frame.to_json();
        faces.push_back(std::move(ft));
    }
    chain.append(place.inverse(), "stage-reposition-inverse");
    trace["residual_faces"] = faces;
    trace["separator"] = {{"bounded", sep.bounded}, {"r", sep.r}, {"s", sep.s}, {"reflected", sep.reflected}};
    return {chain, trace};
}

PolyMap half_space_map(std::size_t n) {
    if (n < 2) throw ValidationError("the half-space map needs dimension at least 2");
    PolyMap t = PolyMap::identity(n);
    Poly x1 = Poly::variable(n, 0), x2 = Poly::variable(n, 1);
    Poly u = x1 * x2 - Poly::constant(n, Scalar(1));
    t.components[0] = u * u + x1 * x1;
    t.components[1] = x2 * u;
    return t;
}

namespace {

SynthesisResult complement_rec(const Polyhedron& input, const CompactBaseProvider& provider) {
    std::size_t n = input.dim;
    if (n < 2) throw ValidationError("complement synthesis needs dimension at least 2");
    Polyhedron k = minimal_presentation(input);
    nlohmann::json trace{{"polyhedron", k.to_json()}};
    if (k.constraints.empty())
        throw SynthesisError("UniversePolyhedron", "the polyhedron is the whole space; its complement is empty",
                             {{"kind", "universe"}, {"polyhedron", k.to_json()}});
    if (is_layer(k))
        throw SynthesisError("LayerEncountered", "the polyhedron is a layer", {{"kind", "layer"}, {"polyhedron", k.to_json()}});

    if (is_degenerate(k)) {
        LinealityDecomposition d = lineality_decomposition(k);
        MapChain chain(n);
        trace["witness"] = d.witness.to_json();
        trace["factor_dim"] = d.k;
        if (d.k == 1) {
            // Factor {g·y1 + c >= 0}; its complement is y1 = -(c + s)/g, s > 0.
            const LinearForm& h = d.factor.constraints.front();
            AffineMap a = AffineMap::identity(n);
            a.matrix[0][0] = Scalar(-1) / h.gradient[0];
            a.translation[0] = -h.constant / h.gradient[0];
            chain.append(half_space_map(n), "half-space");
            chain.append(a, "half-space-placement");
            trace["kind"] = "half-space";
        } else {
            SynthesisResult sub = complement_rec(d.factor, provider);
            chain = sub.chain.embed(n, 0);
            trace["kind"] = "degenerate-product";
            trace["child"] = sub.trace;
        }
        chain.append(d.witness.inverse(), "lineality-inverse");
        return {chain, trace};
    }

    DeltaCertificate cert = compute_delta(k);
    EnlargementLadder ladder = choose_epsilon(cert, k);
    SynthesisResult ic = synthesize_interior_complement(ladder.k0, provider);
    MapChain chain = ic.chain;
    nlohmann::json stages = nlohmann::json::array();
    for (std::size_t i = 0; i < ladder.stages(); ++i) {
        StageResult s = step_maps(i, ladder);
        chain.append(s.chain);
        stages.push_back(std::move(s.trace));
    }
    trace["kind"] = "enlargement";
    trace["delta"] = cert.to_json();
    trace["ladder"] = ladder.to_json();
    trace["interior_complement"] = ic.trace;
    trace["stages"] = stages;
    return {chain, trace};
}

}  // namespace

SynthesisResult synthesize_complement(const Polyhedron& k, const CompactBaseProvider& provider) {
    SynthesisResult r = complement_rec(k, provider);
    r.chain.meta = {{"target", "complement"}, {"polyhedron", k.to_json()}};
    return r;
}

}  // namespace polyimage
