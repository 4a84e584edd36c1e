#include "polyimage/geometry.hpp"

#include <algorithm>

namespace polyimage {

namespace {

LpRow ge_row(const LinearForm& h, std::size_t extra = 0) {
    // h(x) >= 0  <=>  a·x >= -b
    Vec a = h.gradient;
    a.resize(h.dim() + extra, Scalar(0));
    return {a, Relation::GreaterEq, -h.constant};
}

LpRow eq_row(const LinearForm& h, std::size_t extra = 0) {
    LpRow r = ge_row(h, extra);
    r.rel = Relation::Equal;
    return r;
}

Vec scaled(const Vec& v, const Scalar& c) {
    Vec out = v;
    for (auto& x : out) x *= c;
    return out;
}

// Positive rescaling that makes the first nonzero gradient entry ±1.
LinearForm normalized(const LinearForm& h) {
    for (const auto& g : h.gradient)
        if (g != 0) {
            Scalar s = 1 / abs(g);
            return {scaled(h.gradient, s), h.constant * s};
        }
    return h;
}

bool mixed_signs(const Polyhedron& p, const Vec& d) {
    bool pos = false, neg = false;
    for (const auto& h : p.constraints) {
        int s = sign(dot(h.gradient, d));
        pos |= s > 0;
        neg |= s < 0;
    }
    return pos && neg;
}

// Builds y = L(x) with x = L^{-1}(y) = [u_1..u_{n-2}, w, d] y + x0, where the
// u's and d span the facet's direction space and w crosses it, so that the
// facet form equals -y_{n-1} and e_n is sent to d.
AffineMap facet_frame(const Polyhedron& p, std::size_t facet, const Vec& d) {
    std::size_t n = p.dim;
    const LinearForm& h = p.constraints[facet];
    Scalar g2 = norm_sq(h.gradient);
    Matrix gm{h.gradient};
    std::vector<Vec> basis{d};
    for (const auto& b : nullspace(gm, n)) {
        if (basis.size() == n - 1) break;
        auto trial = basis;
        trial.push_back(b);
        if (rank(trial, n) == trial.size()) basis = std::move(trial);
    }
    Matrix inv_cols;
    for (std::size_t i = 1; i < basis.size(); ++i) inv_cols.push_back(basis[i]);
    inv_cols.push_back(scaled(h.gradient, Scalar(-1) / g2));
    inv_cols.push_back(d);
    Vec x0 = scaled(h.gradient, -h.constant / g2);
    AffineMap inv{transpose(inv_cols), x0};
    return inv.inverse();
}

}  // namespace

double LinearForm::operator()(const double* x) const {
    double s = constant.get_d();
    for (std::size_t i = 0; i < gradient.size(); ++i) s += gradient[i].get_d() * x[i];
    return s;
}

LinearForm LinearForm::pullback(const AffineMap& inv) const {
    Vec g(inv.dim(), Scalar(0));
    for (std::size_t j = 0; j < inv.dim(); ++j)
        for (std::size_t i = 0; i < gradient.size(); ++i) g[j] += gradient[i] * inv.matrix[i][j];
    return {g, dot(gradient, inv.translation) + constant};
}

bool Polyhedron::contains(const Vec& x) const {
    for (const auto& h : constraints)
        if (h(x) < 0) return false;
    return true;
}

bool Polyhedron::contains_interior(const Vec& x) const {
    for (const auto& h : constraints)
        if (h(x) <= 0) return false;
    return true;
}

Polyhedron Polyhedron::transformed(const AffineMap& map) const {
    AffineMap inv = map.inverse();
    Polyhedron out{dim, {}, minimal};
    for (const auto& h : constraints) out.constraints.push_back(h.pullback(inv));
    return out;
}

nlohmann::json Polyhedron::to_json() const {
    nlohmann::json cs = nlohmann::json::array();
    for (const auto& h : constraints) {
        nlohmann::json a = nlohmann::json::array();
        for (const auto& v : h.gradient) a.push_back(format_scalar(v));
        cs.push_back({{"a", a}, {"b", format_scalar(h.constant)}});
    }
    return {{"dim", dim}, {"constraints", cs}};
}

Polyhedron Polyhedron::from_json(const nlohmann::json& j) {
    auto scalar = [](const nlohmann::json& v) {
        if (v.is_string()) return parse_scalar(v.get<std::string>());
        if (v.is_number_integer()) return parse_scalar(v.dump());
        throw ValidationError("rational values must be strings \"p/q\" or integers");
    };
    if (!j.is_object() || !j.contains("dim") || !j.contains("constraints"))
        throw ValidationError("polyhedron JSON needs 'dim' and 'constraints'");
    if (!j["dim"].is_number_unsigned() || j["dim"].get<std::size_t>() == 0)
        throw ValidationError("polyhedron 'dim' must be a positive integer");
    Polyhedron p;
    p.dim = j["dim"].get<std::size_t>();
    for (const auto& c : j["constraints"]) {
        if (!c.contains("a") || !c.contains("b")) throw ValidationError("constraint needs 'a' and 'b'");
        LinearForm h;
        for (const auto& v : c["a"]) h.gradient.push_back(scalar(v));
        h.constant = scalar(c["b"]);
        if (h.gradient.size() != p.dim) throw ValidationError("constraint gradient length does not match 'dim'");
        if (is_zero(h.gradient)) throw ValidationError("constraint gradient must be nonzero");
        p.constraints.push_back(std::move(h));
    }
    return p;
}

bool RecessionCone::contains(const Vec& v) const {
    for (const auto& g : gradients)
        if (dot(g, v) < 0) return false;
    return true;
}

bool RecessionCone::is_trivial() const {
    std::vector<LpRow> rows;
    for (const auto& g : gradients) rows.push_back({g, Relation::GreaterEq, Scalar(0)});
    for (std::size_t i = 0; i < dim; ++i)
        for (int s : {1, -1}) {
            Vec c(dim, Scalar(0));
            c[i] = s;
            if (!lp_maximize(c, rows, dim).optimal()) return false;
        }
    return true;
}

nlohmann::json FaceDescriptor::to_json() const { return {{"active", active}, {"dim", dim}, {"vertical", vertical}}; }

std::optional<Vec> relative_interior_point(const Polyhedron& p, const std::vector<std::size_t>& equalities) {
    std::size_t n = p.dim;
    std::vector<LpRow> rows;
    bool any_strict = false;
    for (std::size_t i = 0; i < p.constraints.size(); ++i) {
        bool eq = std::find(equalities.begin(), equalities.end(), i) != equalities.end();
        if (eq) {
            rows.push_back(eq_row(p.constraints[i], 1));
        } else {
            LpRow r = ge_row(p.constraints[i], 1);
            r.a[n] = -1;  // h_i(x) - s >= 0
            rows.push_back(std::move(r));
            any_strict = true;
        }
    }
    Vec cap(n + 1, Scalar(0));
    cap[n] = 1;
    rows.push_back({cap, Relation::LessEq, Scalar(1)});
    Vec c(n + 1, Scalar(0));
    c[n] = 1;
    LpResult r = lp_maximize(c, rows, n + 1);
    if (!r.optimal()) return std::nullopt;
    if (any_strict && r.value <= 0) return std::nullopt;
    r.x.resize(n);
    return r.x;
}

std::vector<std::size_t> implicit_equalities(const Polyhedron& p) {
    std::vector<LpRow> rows;
    for (const auto& h : p.constraints) rows.push_back(ge_row(h));
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < p.constraints.size(); ++i) {
        LpResult r = lp_maximize(p.constraints[i].gradient, rows, p.dim);
        if (r.optimal() && r.value + p.constraints[i].constant == 0) out.push_back(i);
    }
    return out;
}

Polyhedron minimal_presentation(const Polyhedron& p) {
    if (p.minimal) return p;
    Polyhedron q{p.dim, {}, true};
    for (const auto& h : p.constraints) {
        if (is_zero(h.gradient)) {
            if (h.constant < 0) throw SynthesisError("EmptyInterior", "constant constraint is violated everywhere");
            continue;
        }
        q.constraints.push_back(h);
    }
    if (!relative_interior_point(q)) throw SynthesisError("EmptyInterior", "the strict system is infeasible", p.to_json());

    // Duplicate removal by normalized form, keeping first occurrences.
    std::vector<LinearForm> unique, seen;
    for (const auto& h : q.constraints) {
        LinearForm nh = normalized(h);
        if (std::find(seen.begin(), seen.end(), nh) != seen.end()) continue;
        seen.push_back(nh);
        unique.push_back(h);
    }
    // Sequential redundancy removal: h_j is redundant iff min h_j >= 0 over
    // the constraints kept so far plus the ones not yet examined.
    std::vector<bool> keep(unique.size(), true);
    for (std::size_t j = 0; j < unique.size(); ++j) {
        std::vector<LpRow> rows;
        for (std::size_t i = 0; i < unique.size(); ++i)
            if (i != j && keep[i]) rows.push_back(ge_row(unique[i]));
        LpResult r = lp_minimize(unique[j].gradient, rows, p.dim);
        if (r.optimal() && r.value + unique[j].constant >= 0) keep[j] = false;
    }
    q.constraints.clear();
    for (std::size_t j = 0; j < unique.size(); ++j)
        if (keep[j]) q.constraints.push_back(unique[j]);
    return q;
}

RecessionCone recession_cone(const Polyhedron& p) {
    RecessionCone c{p.dim, {}};
    for (const auto& h : p.constraints) c.gradients.push_back(h.gradient);
    return c;
}

bool is_bounded(const Polyhedron& p) { return recession_cone(p).is_trivial(); }

bool is_degenerate(const Polyhedron& p) {
    Matrix g;
    for (const auto& h : p.constraints) g.push_back(h.gradient);
    return rank(g, p.dim) < p.dim;
}

bool is_layer(const Polyhedron& p) {
    Matrix g;
    for (const auto& h : p.constraints) g.push_back(h.gradient);
    if (rank(g, p.dim) != 1) return false;
    if (!relative_interior_point(p)) return false;
    return is_bounded(lineality_decomposition(p).factor);
}

LinealityDecomposition lineality_decomposition(const Polyhedron& p) {
    std::size_t n = p.dim;
    Matrix g;
    for (const auto& h : p.constraints) g.push_back(h.gradient);
    RowEchelon e = rref(g, n);
    std::size_t k = e.pivots.size();
    LinealityDecomposition out;
    out.k = k;
    if (k == n) {
        out.factor = p;
        out.witness = AffineMap::identity(n);
        return out;
    }
    Matrix w = e.reduced;
    for (std::size_t c = 0; c < n; ++c)
        if (std::find(e.pivots.begin(), e.pivots.end(), c) == e.pivots.end()) {
            Vec row(n, Scalar(0));
            row[c] = 1;
            w.push_back(std::move(row));
        }
    out.witness = {w, Vec(n, Scalar(0))};
    out.factor = {k, {}, p.minimal};
    // Each gradient lies in the row space, so a = Σ_j a[p_j] · R_j.
    for (const auto& h : p.constraints) {
        LinearForm f;
        for (std::size_t j = 0; j < k; ++j) f.gradient.push_back(h.gradient[e.pivots[j]]);
        f.constant = h.constant;
        out.factor.constraints.push_back(std::move(f));
    }
    return out;
}

namespace {

AffineMap send_to_minus_en(const Vec& v) {
    std::size_t n = v.size();
    std::size_t j = n;
    for (std::size_t i = n; i-- > 0;)
        if (v[i] != 0) {
            j = i;
            break;
        }
    Matrix cols;
    for (std::size_t i = 0; i < n; ++i)
        if (i != j) {
            Vec e(n, Scalar(0));
            e[i] = 1;
            cols.push_back(std::move(e));
        }
    cols.push_back(scaled(v, Scalar(-1)));
    AffineMap inv{transpose(cols), Vec(n, Scalar(0))};
    return inv.inverse();
}

// max s subject to g_i·v >= s (i not in eq), g_i·v = 0 (i in eq), |v_j| <= 1, s <= 1.
std::optional<Vec> cone_direction(const Polyhedron& p, const std::vector<std::size_t>& eq) {
    std::size_t n = p.dim;
    std::vector<LpRow> rows;
    bool any = false;
    for (std::size_t i = 0; i < p.constraints.size(); ++i) {
        Vec a = p.constraints[i].gradient;
        a.push_back(0);
        if (std::find(eq.begin(), eq.end(), i) != eq.end()) {
            rows.push_back({a, Relation::Equal, Scalar(0)});
        } else {
            a[n] = -1;
            rows.push_back({a, Relation::GreaterEq, Scalar(0)});
            any = true;
        }
    }
    if (!any) return std::nullopt;
    for (std::size_t j = 0; j <= n; ++j) {
        Vec a(n + 1, Scalar(0));
        a[j] = 1;
        rows.push_back({a, Relation::LessEq, Scalar(1)});
        if (j < n) rows.push_back({a, Relation::GreaterEq, Scalar(-1)});
    }
    Vec c(n + 1, Scalar(0));
    c[n] = 1;
    LpResult r = lp_maximize(c, rows, n + 1);
    if (!r.optimal() || r.value <= 0) return std::nullopt;
    r.x.resize(n);
    return r.x;
}

}  // namespace

AffineMap place_recession_interior(const Polyhedron& p) {
    std::size_t n = p.dim;
    bool already = !p.constraints.empty();
    for (const auto& h : p.constraints)
        if (h.gradient[n - 1] >= 0) already = false;
    if (already) return AffineMap::identity(n);
    auto v = cone_direction(p, {});
    if (!v) throw SynthesisError("NoInteriorDirection", "the recession cone has empty interior", p.to_json());
    return send_to_minus_en(*v);
}

Placement place_recession_relative_interior(const Polyhedron& p) {
    try {
        return {place_recession_interior(p), false};
    } catch (const SynthesisError& e) {
        if (e.kind() != "NoInteriorDirection") throw;
    }
    Polyhedron cone{p.dim, {}, false};
    for (const auto& h : p.constraints) cone.constraints.push_back({h.gradient, Scalar(0)});
    auto eq = implicit_equalities(cone);
    std::size_t n = p.dim;
    // Keep the identity when -e_n already lies in the relative interior.
    bool already = true;
    for (std::size_t i = 0; i < p.constraints.size(); ++i) {
        bool is_eq = std::find(eq.begin(), eq.end(), i) != eq.end();
        if (!is_eq && p.constraints[i].gradient[n - 1] >= 0) already = false;
        if (is_eq && p.constraints[i].gradient[n - 1] != 0) already = false;
    }
    if (already) return {AffineMap::identity(n), true};
    auto v = cone_direction(p, eq);
    if (!v) throw SynthesisError("NoInteriorDirection", "the recession cone has no relative interior direction", p.to_json());
    return {send_to_minus_en(*v), true};
}

bool in_bounded_position(const Polyhedron& p) {
    std::size_t n = p.dim;
    bool up = false, down = false;
    for (const auto& h : p.constraints) {
        up |= h.gradient[n - 1] < 0;    // e_n leaves this half-space
        down |= h.gradient[n - 1] > 0;  // -e_n leaves it
    }
    return up && down;
}

int facet_count_of_facet(const Polyhedron& p, std::size_t facet) {
    std::size_t n = p.dim;
    const LinearForm& h = p.constraints[facet];
    Vec x0 = scaled(h.gradient, -h.constant / norm_sq(h.gradient));
    auto basis = nullspace(Matrix{h.gradient}, n);
    Polyhedron f{n - 1, {}, false};
    for (std::size_t i = 0; i < p.constraints.size(); ++i) {
        if (i == facet) continue;
        const LinearForm& g = p.constraints[i];
        LinearForm r;
        for (const auto& b : basis) r.gradient.push_back(dot(g.gradient, b));
        r.constant = g(x0);
        if (is_zero(r.gradient)) {
            if (r.constant < 0) return 0;
            continue;
        }
        f.constraints.push_back(std::move(r));
    }
    if (f.constraints.empty()) return 0;
    return static_cast<int>(minimal_presentation(f).constraints.size());
}

AffineMap place_bounded_position(const Polyhedron& p, std::size_t facet) {
    std::size_t n = p.dim;
    if (facet_count_of_facet(p, facet) < 2)
        throw SynthesisError("FacetTooThin", "the facet has fewer than two facets of its own",
                             {{"polyhedron", p.to_json()}, {"facet", facet}});
    const LinearForm& h = p.constraints[facet];
    bool on_plane = h.constant == 0 && h.gradient[n - 2] < 0;
    for (std::size_t i = 0; i < n; ++i)
        if (i != n - 2 && h.gradient[i] != 0) on_plane = false;
    if (on_plane && in_bounded_position(p)) return AffineMap::identity(n);

    // A direction orthogonal to both the facet normal and the sum of all
    // gradients has mixed signs against the constraints (p has no lines),
    // so neither it nor its opposite is a recession direction.
    Vec phi(n, Scalar(0));
    for (const auto& g : p.constraints)
        for (std::size_t i = 0; i < n; ++i) phi[i] += g.gradient[i];
    std::optional<Vec> d;
    for (const auto& v : nullspace(Matrix{h.gradient, phi}, n))
        if (mixed_signs(p, v)) {
            d = v;
            break;
        }
    if (!d)
        for (const auto& v : nullspace(Matrix{h.gradient}, n))
            if (mixed_signs(p, v)) {
                d = v;
                break;
            }
    if (!d)
        throw SynthesisError("FacetTooThin", "no bounded vertical direction along the facet",
                             {{"polyhedron", p.to_json()}, {"facet", facet}});
    return facet_frame(p, facet, *d);
}

AffineMap place_one_sided_position(const Polyhedron& p, std::size_t facet) {
    std::size_t n = p.dim;
    const LinearForm& h = p.constraints[facet];
    // d ⟂ facet normal, g_i·d <= 0 for all i, Σ g_i·d = -1.
    std::vector<LpRow> rows;
    rows.push_back({h.gradient, Relation::Equal, Scalar(0)});
    Vec sum(n, Scalar(0));
    for (const auto& g : p.constraints) {
        rows.push_back({g.gradient, Relation::LessEq, Scalar(0)});
        for (std::size_t i = 0; i < n; ++i) sum[i] += g.gradient[i];
    }
    rows.push_back({sum, Relation::Equal, Scalar(-1)});
    LpResult r = lp_maximize(Vec(n, Scalar(0)), rows, n);
    if (!r.optimal())
        throw SynthesisError("NoOneSidedDirection", "no recession direction along the facet",
                             {{"polyhedron", p.to_json()}, {"facet", facet}});
    return facet_frame(p, facet, r.x);
}

Polyhedron project(const Polyhedron& p) {
    std::size_t n = p.dim;
    if (n < 2) throw ValidationError("projection needs dimension at least 2");
    std::vector<LinearForm> pos, neg, out;
    auto drop_last = [&](const LinearForm& h, const Scalar& s) {
        LinearForm f;
        for (std::size_t i = 0; i + 1 < n; ++i) f.gradient.push_back(h.gradient[i] * s);
        f.constant = h.constant * s;
        return f;
    };
    for (const auto& h : p.constraints) {
        const Scalar& an = h.gradient[n - 1];
        if (an > 0)
            pos.push_back(drop_last(h, 1 / an));
        else if (an < 0)
            neg.push_back(drop_last(h, -1 / an));
        else
            out.push_back(drop_last(h, Scalar(1)));
    }
    for (const auto& a : pos)
        for (const auto& b : neg) {
            LinearForm f{a.gradient, a.constant + b.constant};
            for (std::size_t i = 0; i + 1 < n; ++i) f.gradient[i] += b.gradient[i];
            out.push_back(std::move(f));
        }
    Polyhedron q{n - 1, {}, false};
    std::vector<LinearForm> seen;
    for (const auto& f : out) {
        if (is_zero(f.gradient)) {
            if (f.constant < 0) throw ValidationError("projection of an empty polyhedron");
            continue;
        }
        LinearForm nf = normalized(f);
        if (std::find(seen.begin(), seen.end(), nf) != seen.end()) continue;
        seen.push_back(nf);
        q.constraints.push_back(f);
    }
    if (q.constraints.empty()) {
        q.minimal = true;
        return q;
    }
    return minimal_presentation(q);
}

FaceDescriptor describe_face(const Polyhedron& p, const std::vector<std::size_t>& active) {
    FaceDescriptor f;
    f.active = active;
    Matrix g;
    f.vertical = true;
    for (auto i : active) {
        g.push_back(p.constraints[i].gradient);
        if (p.constraints[i].gradient[p.dim - 1] != 0) f.vertical = false;
    }
    f.dim = static_cast<int>(p.dim - rank(g, p.dim));
    return f;
}

std::vector<FaceDescriptor> boundary_fiber_faces(const Polyhedron& p) {
    std::size_t n = p.dim;
    Polyhedron proj = project(p);
    std::vector<FaceDescriptor> faces;
    std::vector<LpRow> base;
    for (const auto& h : p.constraints) base.push_back(ge_row(h));
    for (const auto& c : proj.constraints) {
        LinearForm lifted{c.gradient, c.constant};
        lifted.gradient.push_back(0);
        auto rows = base;
        rows.push_back(eq_row(lifted));
        std::vector<std::size_t> active;
        for (std::size_t i = 0; i < p.constraints.size(); ++i) {
            LpResult r = lp_maximize(p.constraints[i].gradient, rows, n);
            if (r.optimal() && r.value + p.constraints[i].constant == 0) active.push_back(i);
        }
        faces.push_back(describe_face(p, active));
    }
    return faces;
}

}  // namespace polyimage
