#include "polyimage/lp.hpp"

#include <optional>

namespace polyimage {

namespace {

// Dense tableau. Column layout: [u (n) | v (n) | slacks | artificials | rhs],
// with x = u - v.
struct Tableau {
    std::vector<Vec> rows;
    Vec obj;  // reduced costs; obj.back() holds minus the current objective
    std::vector<std::size_t> basis;
    std::size_t cols = 0;  // excluding rhs

    void pivot(std::size_t r, std::size_t c) {
        Scalar p = rows[r][c];
        for (auto& v : rows[r]) v /= p;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || rows[i][c] == 0) continue;
            Scalar f = rows[i][c];
            for (std::size_t j = 0; j <= cols; ++j)
                if (rows[r][j] != 0) rows[i][j] -= f * rows[r][j];
        }
        if (obj[c] != 0) {
            Scalar f = obj[c];
            for (std::size_t j = 0; j <= cols; ++j)
                if (rows[r][j] != 0) obj[j] -= f * rows[r][j];
        }
        basis[r] = c;
    }

    // Returns false if unbounded. Only columns < active_cols may enter.
    bool run(std::size_t active_cols) {
        for (;;) {
            std::optional<std::size_t> enter;
            for (std::size_t j = 0; j < active_cols; ++j)
                if (obj[j] > 0) {
                    enter = j;
                    break;
                }
            if (!enter) return true;
            std::optional<std::size_t> leave;
            Scalar best;
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (rows[i][*enter] <= 0) continue;
                Scalar ratio = rows[i].back() / rows[i][*enter];
                if (!leave || ratio < best || (ratio == best && basis[i] < basis[*leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (!leave) return false;
            pivot(*leave, *enter);
        }
    }

    void price_out(const Vec& cost) {
        obj.assign(cols + 1, Scalar(0));
        for (std::size_t j = 0; j < cols; ++j) obj[j] = cost[j];
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const Scalar& cb = cost[basis[i]];
            if (cb == 0) continue;
            for (std::size_t j = 0; j <= cols; ++j)
                if (rows[i][j] != 0) obj[j] -= cb * rows[i][j];
        }
    }
};

}  // namespace

LpResult lp_maximize(const Vec& c, const std::vector<LpRow>& input, std::size_t nvars) {
    std::size_t m = input.size();
    std::size_t n_slack = 0;
    for (const auto& r : input)
        if (r.rel != Relation::Equal) ++n_slack;
    std::size_t art0 = 2 * nvars + n_slack;
    Tableau t;
    t.cols = art0 + m;
    t.rows.assign(m, Vec(t.cols + 1, Scalar(0)));
    t.basis.resize(m);

    std::size_t slack = 2 * nvars;
    for (std::size_t i = 0; i < m; ++i) {
        const auto& r = input[i];
        Vec& row = t.rows[i];
        for (std::size_t j = 0; j < nvars; ++j) {
            row[j] = r.a[j];
            row[nvars + j] = -r.a[j];
        }
        if (r.rel == Relation::LessEq) row[slack++] = 1;
        if (r.rel == Relation::GreaterEq) row[slack++] = -1;
        row.back() = r.b;
        if (row.back() < 0)
            for (auto& v : row) v = -v;
        row[art0 + i] = 1;
        t.basis[i] = art0 + i;
    }

    // Phase 1: maximize -(sum of artificials).
    Vec phase1(t.cols, Scalar(0));
    for (std::size_t i = 0; i < m; ++i) phase1[art0 + i] = -1;
    t.price_out(phase1);
    t.run(t.cols);
    if (-t.obj.back() < 0) return {LpResult::Status::Infeasible, {}, 0};

    // Drive zero-valued artificials out of the basis; drop redundant rows.
    for (std::size_t i = 0; i < t.rows.size();) {
        if (t.basis[i] < art0) {
            ++i;
            continue;
        }
        std::optional<std::size_t> col;
        for (std::size_t j = 0; j < art0; ++j)
            if (t.rows[i][j] != 0) {
                col = j;
                break;
            }
        if (col) {
            t.pivot(i, *col);
            ++i;
        } else {
            t.rows.erase(t.rows.begin() + static_cast<std::ptrdiff_t>(i));
            t.basis.erase(t.basis.begin() + static_cast<std::ptrdiff_t>(i));
        }
    }

    Vec cost(t.cols, Scalar(0));
    for (std::size_t j = 0; j < nvars; ++j) {
        cost[j] = c[j];
        cost[nvars + j] = -c[j];
    }
    t.price_out(cost);
    if (!t.run(art0)) return {LpResult::Status::Unbounded, {}, 0};

    Vec uv(2 * nvars, Scalar(0));
    for (std::size_t i = 0; i < t.rows.size(); ++i)
        if (t.basis[i] < 2 * nvars) uv[t.basis[i]] = t.rows[i].back();
    LpResult res;
    res.status = LpResult::Status::Optimal;
    res.x.resize(nvars);
    for (std::size_t j = 0; j < nvars; ++j) res.x[j] = uv[j] - uv[nvars + j];
    res.value = dot(c, res.x);
    return res;
}

}  // namespace polyimage
