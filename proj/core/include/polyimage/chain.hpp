#pragma once

#include "polyimage/linalg.hpp"
#include "polyimage/poly.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace polyimage {

// x ↦ M x + t with M invertible.
struct AffineMap {
    Matrix matrix;
    Vec translation;

    static AffineMap identity(std::size_t n);
    static AffineMap translation_by(const Vec& t);

    std::size_t dim() const { return translation.size(); }
    bool is_identity() const;
    Vec apply(const Vec& x) const;
    AffineMap inverse() const;
    // (this ∘ inner)(x) = this(inner(x))
    AffineMap after(const AffineMap& inner) const;
    // Acts on coordinates [offset, offset+dim) of an n-dimensional space,
    // identity elsewhere.
    AffineMap embed(std::size_t n, std::size_t offset = 0) const;
    std::vector<Poly> as_polys() const;

    nlohmann::json to_json() const;
    static AffineMap from_json(const nlohmann::json& j);
};

struct PolyMap {
    std::vector<Poly> components;

    static PolyMap identity(std::size_t n);

    std::size_t dim() const { return components.size(); }
    template <class T>
    std::vector<T> apply(const std::vector<T>& x) const {
        std::vector<T> y;
        y.reserve(components.size());
        for (const auto& c : components) y.push_back(c.eval(x));
        return y;
    }
    int degree() const;
    PolyMap embed(std::size_t n, std::size_t offset = 0) const;

    nlohmann::json to_json() const;
    static PolyMap from_json(const nlohmann::json& j);
};

struct ChainStep {
    std::variant<PolyMap, AffineMap> map;
    std::string label;
};

class DegreeCapExceeded : public std::runtime_error {
public:
    DegreeCapExceeded(std::size_t step, int degree);
    std::size_t step() const { return step_; }
    int degree() const { return degree_; }

private:
    std::size_t step_;
    int degree_;
};

// Ordered composition of maps Rⁿ → Rⁿ; the first step is applied first.
class MapChain {
public:
    MapChain() = default;
    explicit MapChain(std::size_t dim) : dim_(dim) {}

    std::size_t dim() const { return dim_; }
    const std::vector<ChainStep>& steps() const { return steps_; }
    std::size_t size() const { return steps_.size(); }

    MapChain& append(PolyMap m, std::string label = {});
    // Identity affine maps are skipped.
    MapChain& append(AffineMap a, std::string label = {});
    MapChain& append(const MapChain& tail);

    Vec eval(const Vec& x) const;
    // The chain acting on the leading coordinates of an n-dimensional space.
    MapChain embed(std::size_t n, std::size_t offset = 0) const;
    // Fully composed map; throws DegreeCapExceeded when an intermediate total
    // degree exceeds the cap.
    PolyMap expand(int degree_cap) const;

    nlohmann::json meta;  // free-form annotations carried through JSON

    nlohmann::json to_json() const;
    static MapChain from_json(const nlohmann::json& j);

private:
    std::size_t dim_ = 0;
    std::vector<ChainStep> steps_;
};

// Precompiled evaluators for repeated evaluation of one chain.
class CompiledChain {
public:
    explicit CompiledChain(const MapChain& chain);

    std::size_t dim() const { return dim_; }
    Vec eval(const Vec& x) const;
    // Returns false if a non-finite value appears.
    bool eval(const double* x, double* out) const;

private:
    struct Step {
        bool affine = false;
        std::vector<ExactPolyEvaluator> exact;
        std::vector<DoublePolyEvaluator> fast;
        AffineMap map;
        std::vector<double> m, t;
    };
    std::size_t dim_;
    std::vector<Step> steps_;
};

}  // namespace polyimage
