#pragma once

#include "polyimage/scalar.hpp"

#include <vector>

namespace polyimage {

enum class Relation { LessEq, Equal, GreaterEq };

struct LpRow {
    Vec a;
    Relation rel;
    Scalar b;
};

struct LpResult {
    enum class Status { Optimal, Unbounded, Infeasible };
    Status status = Status::Infeasible;
    Vec x;        // an optimal vertex when status == Optimal, else empty
    Scalar value; // c·x at that vertex

    bool optimal() const { return status == Status::Optimal; }
};

// Maximizes c·x over free variables x subject to the rows. Exact two-phase
// simplex with Bland's rule, so it terminates and the returned vertex is a
// deterministic function of the input.
LpResult lp_maximize(const Vec& c, const std::vector<LpRow>& rows, std::size_t nvars);

inline LpResult lp_minimize(const Vec& c, const std::vector<LpRow>& rows, std::size_t nvars) {
    Vec neg(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) neg[i] = -c[i];
    LpResult r = lp_maximize(neg, rows, nvars);
    if (r.optimal()) r.value = -r.value;
    return r;
}

}  // namespace polyimage
