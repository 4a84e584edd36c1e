#include "polyimage/chain.hpp"

#include "polyimage/errors.hpp"

#include <cmath>

namespace polyimage {

AffineMap AffineMap::identity(std::size_t n) { return {identity_matrix(n), Vec(n, Scalar(0))}; }

AffineMap AffineMap::translation_by(const Vec& t) { return {identity_matrix(t.size()), t}; }

bool AffineMap::is_identity() const { return matrix == identity_matrix(dim()) && is_zero(translation); }

Vec AffineMap::apply(const Vec& x) const {
    Vec y = polyimage::apply(matrix, x);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += translation[i];
    return y;
}

AffineMap AffineMap::inverse() const {
    auto inv = polyimage::inverse(matrix);
    if (!inv) throw ValidationError("affine map is not invertible");
    Vec t = polyimage::apply(*inv, translation);
    for (auto& v : t) v = -v;
    return {*inv, t};
}

AffineMap AffineMap::after(const AffineMap& inner) const {
    Vec t = polyimage::apply(matrix, inner.translation);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] += translation[i];
    return {multiply(matrix, inner.matrix), t};
}

AffineMap AffineMap::embed(std::size_t n, std::size_t offset) const {
    AffineMap a = identity(n);
    for (std::size_t i = 0; i < dim(); ++i) {
        for (std::size_t j = 0; j < dim(); ++j) a.matrix[offset + i][offset + j] = matrix[i][j];
        a.translation[offset + i] = translation[i];
    }
    return a;
}

std::vector<Poly> AffineMap::as_polys() const {
    std::vector<Poly> out;
    for (std::size_t i = 0; i < dim(); ++i) out.push_back(Poly::linear(matrix[i], translation[i]));
    return out;
}

nlohmann::json AffineMap::to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : matrix) {
        nlohmann::json row = nlohmann::json::array();
        for (const auto& v : r) row.push_back(format_scalar(v));
        rows.push_back(row);
    }
    nlohmann::json t = nlohmann::json::array();
    for (const auto& v : translation) t.push_back(format_scalar(v));
    return {{"kind", "affine"}, {"matrix", rows}, {"translation", t}};
}

namespace {

Scalar json_scalar(const nlohmann::json& v) {
    if (v.is_string()) return parse_scalar(v.get<std::string>());
    if (v.is_number_integer()) return parse_scalar(v.dump());
    throw ValidationError("rational values must be strings \"p/q\" or integers");
}

}  // namespace

AffineMap AffineMap::from_json(const nlohmann::json& j) {
    if (!j.contains("matrix") || !j.contains("translation")) throw ValidationError("affine step needs 'matrix' and 'translation'");
    AffineMap a;
    for (const auto& t : j["translation"]) a.translation.push_back(json_scalar(t));
    for (const auto& r : j["matrix"]) {
        Vec row;
        for (const auto& v : r) row.push_back(json_scalar(v));
        if (row.size() != a.translation.size()) throw ValidationError("affine matrix is not square");
        a.matrix.push_back(std::move(row));
    }
    if (a.matrix.size() != a.translation.size()) throw ValidationError("affine matrix is not square");
    if (determinant(a.matrix) == 0) throw ValidationError("affine matrix is singular");
    return a;
}

PolyMap PolyMap::identity(std::size_t n) {
    PolyMap m;
    for (std::size_t i = 0; i < n; ++i) m.components.push_back(Poly::variable(n, i));
    return m;
}

int PolyMap::degree() const {
    int d = -1;
    for (const auto& c : components) d = std::max(d, c.degree());
    return d;
}

PolyMap PolyMap::embed(std::size_t n, std::size_t offset) const {
    std::vector<std::size_t> var_map(dim());
    for (std::size_t i = 0; i < dim(); ++i) var_map[i] = offset + i;
    PolyMap out = identity(n);
    for (std::size_t i = 0; i < dim(); ++i) out.components[offset + i] = components[i].remap(n, var_map);
    return out;
}

nlohmann::json PolyMap::to_json() const {
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& c : components) comps.push_back(c.to_json());
    return {{"kind", "polymap"}, {"components", comps}};
}

PolyMap PolyMap::from_json(const nlohmann::json& j) {
    if (!j.contains("components")) throw ValidationError("polymap step needs 'components'");
    PolyMap m;
    for (const auto& c : j["components"]) m.components.push_back(Poly::from_json(c));
    for (const auto& c : m.components)
        if (c.dim() != m.components.size()) throw ValidationError("polymap component dimension mismatch");
    return m;
}

DegreeCapExceeded::DegreeCapExceeded(std::size_t step, int degree)
    : std::runtime_error("DegreeCapExceeded at step " + std::to_string(step) + " (degree " + std::to_string(degree) + ")"),
      step_(step),
      degree_(degree) {}

MapChain& MapChain::append(PolyMap m, std::string label) {
    if (m.dim() != dim_) throw ValidationError("chain step dimension mismatch");
    steps_.push_back({std::move(m), std::move(label)});
    return *this;
}

MapChain& MapChain::append(AffineMap a, std::string label) {
    if (a.dim() != dim_) throw ValidationError("chain step dimension mismatch");
    if (a.is_identity()) return *this;
    steps_.push_back({std::move(a), std::move(label)});
    return *this;
}

MapChain& MapChain::append(const MapChain& tail) {
    if (tail.dim_ != dim_) throw ValidationError("chain dimension mismatch");
    for (const auto& s : tail.steps_) steps_.push_back(s);
    return *this;
}

Vec MapChain::eval(const Vec& x) const {
    if (x.size() != dim_) throw ValidationError("point dimension does not match chain");
    Vec y = x;
    for (const auto& s : steps_) {
        if (const auto* p = std::get_if<PolyMap>(&s.map))
            y = p->apply(y);
        else
            y = std::get<AffineMap>(s.map).apply(y);
    }
    return y;
}

MapChain MapChain::embed(std::size_t n, std::size_t offset) const {
    MapChain out(n);
    for (const auto& s : steps_) {
        if (const auto* p = std::get_if<PolyMap>(&s.map))
            out.steps_.push_back({p->embed(n, offset), s.label});
        else
            out.steps_.push_back({std::get<AffineMap>(s.map).embed(n, offset), s.label});
    }
    return out;
}

PolyMap MapChain::expand(int degree_cap) const {
    PolyMap acc = PolyMap::identity(dim_);
    for (std::size_t i = 0; i < steps_.size(); ++i) {
        const auto& s = steps_[i];
        std::vector<Poly> outer;
        if (const auto* p = std::get_if<PolyMap>(&s.map))
            outer = p->components;
        else
            outer = std::get<AffineMap>(s.map).as_polys();
        PolyMap next;
        for (const auto& c : outer) next.components.push_back(c.compose(acc.components));
        acc = std::move(next);
        if (acc.degree() > degree_cap) throw DegreeCapExceeded(i, acc.degree());
    }
    return acc;
}

nlohmann::json MapChain::to_json() const {
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& s : steps_) {
        nlohmann::json j = std::visit([](const auto& m) { return m.to_json(); }, s.map);
        if (!s.label.empty()) j["label"] = s.label;
        steps.push_back(std::move(j));
    }
    nlohmann::json out{{"dim", dim_}, {"steps", steps}};
    if (!meta.is_null()) out["meta"] = meta;
    return out;
}

MapChain MapChain::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("steps")) throw ValidationError("chain JSON needs 'dim' and 'steps'");
    if (!j["dim"].is_number_unsigned() || j["dim"].get<std::size_t>() == 0) throw ValidationError("chain 'dim' must be positive");
    MapChain c(j["dim"].get<std::size_t>());
    for (const auto& s : j["steps"]) {
        std::string kind = s.value("kind", "");
        std::string label = s.value("label", "");
        if (kind == "polymap") {
            PolyMap m = PolyMap::from_json(s);
            if (m.dim() != c.dim_) throw ValidationError("chain step dimension mismatch");
            c.steps_.push_back({std::move(m), label});
        } else if (kind == "affine") {
            AffineMap a = AffineMap::from_json(s);
            if (a.dim() != c.dim_) throw ValidationError("chain step dimension mismatch");
            c.steps_.push_back({std::move(a), label});
        } else {
            throw ValidationError("unknown chain step kind '" + kind + "'");
        }
    }
    if (j.contains("meta")) c.meta = j["meta"];
    return c;
}

CompiledChain::CompiledChain(const MapChain& chain) : dim_(chain.dim()) {
    for (const auto& s : chain.steps()) {
        Step st;
        if (const auto* p = std::get_if<PolyMap>(&s.map)) {
            for (const auto& c : p->components) {
                st.exact.emplace_back(c);
                st.fast.emplace_back(c);
            }
        } else {
            st.affine = true;
            st.map = std::get<AffineMap>(s.map);
            for (const auto& r : st.map.matrix)
                for (const auto& v : r) st.m.push_back(v.get_d());
            for (const auto& v : st.map.translation) st.t.push_back(v.get_d());
        }
        steps_.push_back(std::move(st));
    }
}

Vec CompiledChain::eval(const Vec& x) const {
    Vec y = x;
    for (const auto& s : steps_) {
        if (s.affine) {
            y = s.map.apply(y);
        } else {
            Vec next;
            next.reserve(dim_);
            for (const auto& e : s.exact) next.push_back(e(y));
            y = std::move(next);
        }
    }
    return y;
}

bool CompiledChain::eval(const double* x, double* out) const {
    std::vector<double> y(x, x + dim_), next(dim_);
    for (const auto& s : steps_) {
        if (s.affine) {
            for (std::size_t i = 0; i < dim_; ++i) {
                double acc = s.t[i];
                for (std::size_t j = 0; j < dim_; ++j) acc += s.m[i * dim_ + j] * y[j];
                next[i] = acc;
            }
        } else {
            for (std::size_t i = 0; i < dim_; ++i) next[i] = s.fast[i](y.data());
        }
        y.swap(next);
        for (double v : y)
            if (!std::isfinite(v)) return false;
    }
    for (std::size_t i = 0; i < dim_; ++i) out[i] = y[i];
    return true;
}

}  // namespace polyimage
