#include "polyimage/verify.hpp"

#include "polyimage/complement.hpp"
#include "polyimage/errors.hpp"
#include "polyimage/interior_complement.hpp"
#include "polyimage/skyscraper.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <random>
#include <thread>

namespace polyimage {

std::string to_string(RegionMode m) {
    switch (m) {
        case RegionMode::Universe: return "universe";
        case RegionMode::Closed: return "closed";
        case RegionMode::Interior: return "interior";
        case RegionMode::Complement: return "complement";
        case RegionMode::InteriorComplement: return "interior-complement";
        case RegionMode::ComplementMinusFaces: return "complement-minus-faces";
    }
    return "unknown";
}

RegionMode region_mode_from_string(const std::string& s) {
    for (auto m : {RegionMode::Universe, RegionMode::Closed, RegionMode::Interior, RegionMode::Complement,
                   RegionMode::InteriorComplement, RegionMode::ComplementMinusFaces})
        if (to_string(m) == s) return m;
    throw ValidationError("unknown region mode '" + s + "'");
}

namespace {

template <class T, class Eval>
bool region_contains(const RegionSpec& r, Eval&& value) {
    const auto& cs = r.base.constraints;
    auto all = [&](auto pred) {
        for (std::size_t i = 0; i < cs.size(); ++i)
            if (!pred(value(i))) return false;
        return true;
    };
    switch (r.mode) {
        case RegionMode::Universe: return true;
        case RegionMode::Closed: return all([](const T& v) { return v >= 0; });
        case RegionMode::Interior: return all([](const T& v) { return v > 0; });
        case RegionMode::Complement: return !all([](const T& v) { return v >= 0; });
        case RegionMode::InteriorComplement: return !all([](const T& v) { return v > 0; });
        case RegionMode::ComplementMinusFaces: {
            if (all([](const T& v) { return v > 0; })) return false;
            for (const auto& f : r.faces) {
                bool in_face = true;
                for (std::size_t i = 0; i < cs.size() && in_face; ++i) {
                    bool active = std::find(f.active.begin(), f.active.end(), i) != f.active.end();
                    T v = value(i);
                    in_face = active ? v == 0 : v > 0;
                }
                if (in_face) return false;
            }
            return true;
        }
    }
    return false;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

std::mt19937_64 batch_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t batch) {
    return std::mt19937_64(splitmix64(seed ^ splitmix64(stream * 0x100000001b3ull + batch)));
}

unsigned worker_count(std::size_t count, unsigned threads) {
    return std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
}

// Runs fn(b, worker) for b in [0, count) on worker_count(count, threads)
// workers; rethrows the first exception after all workers stop.
template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
    threads = worker_count(count, threads);
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&](unsigned id) {
        while (true) {
            std::size_t b = next.fetch_add(1);
            if (b >= count) return;
            try {
                fn(b, id);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next = count;
                return;
            }
        }
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
        for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);
}

constexpr std::size_t kBatch = 2048;
constexpr std::size_t kPilot = 4096;

class ExactSampler {
public:
    ExactSampler(std::size_t n, double window, int bits) : n_(n), bits_(bits) {
        half_ = static_cast<std::int64_t>(std::floor(window * std::ldexp(1.0, bits)));
        denom_ = mpz_class(1) << bits;
    }
    Vec draw(std::mt19937_64& g) const {
        Vec x(n_);
        auto span = static_cast<std::uint64_t>(2 * half_ + 1);
        for (auto& v : x) {
            auto u = static_cast<std::int64_t>(g() % span) - half_;
            v = Scalar(mpz_class(static_cast<long>(u)), denom_);
            v.canonicalize();
        }
        return x;
    }

private:
    std::size_t n_;
    int bits_;
    std::int64_t half_;
    mpz_class denom_;
};

// Uniform draws rounded to multiples of 2^-bits, so that the exact value of
// each sample has a small denominator.
void fill_double(std::mt19937_64& g, double window, std::vector<double>& x, int bits = 20) {
    double scale = std::ldexp(1.0, bits);
    for (auto& v : x) {
        double u = (static_cast<double>(g() >> 11) * 0x1.0p-53) * 2 * window - window;
        v = std::round(u * scale) / scale;
    }
}

// Picks the domain window: the configured one, doubled while a pilot run
// accepts fewer than min_acceptance of its draws.
double choose_window(const RegionSpec& domain, std::uint64_t seed, const SamplingOptions& opts, nlohmann::json& diag) {
    if (domain.mode == RegionMode::Universe) return opts.window;
    std::size_t n = domain.dim();
    double w = opts.window;
    for (int s = 0; s <= opts.max_rescales; ++s, w *= 2) {
        auto g = batch_rng(seed, 0x5ee0 + static_cast<std::uint64_t>(s), 0);
        std::vector<double> x(n);
        std::size_t hit = 0;
        for (std::size_t i = 0; i < kPilot; ++i) {
            fill_double(g, w, x);
            hit += domain.contains(x.data());
        }
        double rate = static_cast<double>(hit) / kPilot;
        if (rate >= opts.min_acceptance) {
            diag["domain_window"] = w;
            diag["pilot_acceptance"] = rate;
            return w;
        }
    }
    throw VerificationError("SamplingStarved", "rejection sampling accepts too few points in every window",
                            {{"domain", domain.to_json()}, {"max_window", w / 2}});
}

[[noreturn]] void starved(const RegionSpec& domain, double w) {
    throw VerificationError("SamplingStarved", "rejection sampling fell below the acceptance floor",
                            {{"domain", domain.to_json()}, {"window", w}});
}

unsigned thread_count(const SamplingOptions& opts) { return opts.threads ? opts.threads : default_thread_count(); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

bool RegionSpec::contains(const Vec& x) const {
    if (x.size() != dim()) throw ValidationError("point dimension does not match region");
    return region_contains<Scalar>(*this, [&](std::size_t i) { return base.constraints[i](x); });
}

bool RegionSpec::contains(const double* x) const {
    return region_contains<double>(*this, [&](std::size_t i) { return base.constraints[i](x); });
}

nlohmann::json RegionSpec::to_json() const {
    nlohmann::json j{{"mode", to_string(mode)}, {"polyhedron", base.to_json()}};
    if (!faces.empty()) {
        j["faces"] = nlohmann::json::array();
        for (const auto& f : faces) j["faces"].push_back(f.to_json());
    }
    return j;
}

nlohmann::json VerificationReport::to_json(bool with_runtime) const {
    nlohmann::json v = nlohmann::json::array();
    for (const auto& w : violations)
        v.push_back({{"input", format_point(w.input)}, {"image", format_point(w.image)}, {"predicate", w.predicate}});
    nlohmann::json j{{"check", check},
                     {"samples_used", samples_used},
                     {"violation_count", violation_count},
                     {"violations", v},
                     {"diagnostics", diagnostics},
                     {"seed", seed},
                     {"passed", passed}};
    j["coverage_fraction"] = coverage_fraction ? nlohmann::json(*coverage_fraction) : nlohmann::json(nullptr);
    if (with_runtime) j["runtime_seconds"] = runtime_seconds;
    return j;
}

unsigned default_thread_count() {
    if (const char* env = std::getenv("POLYIMAGE_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

VerificationReport check_containment(const MapChain& chain, const RegionSpec& domain, const RegionSpec& forbidden,
                                     std::size_t n, std::uint64_t seed, const SamplingOptions& opts) {
    auto t0 = std::chrono::steady_clock::now();
    std::size_t dim = chain.dim();
    if (domain.dim() != dim || forbidden.dim() != dim) throw ValidationError("region dimension does not match chain");
    VerificationReport rep;
    rep.check = "containment";
    rep.seed = seed;
    double w = choose_window(domain, seed, opts, rep.diagnostics);
    CompiledChain compiled(chain);
    ExactSampler sampler(dim, w, opts.denominator_bits);
    std::string predicate = "image in " + to_string(forbidden.mode) + " region";

    struct Part {
        std::size_t count = 0, violations = 0, attempts = 0;
        std::vector<Violation> witnesses;
    };
    std::size_t batches = (n + kBatch - 1) / kBatch;
    std::vector<Part> parts(batches);
    auto max_attempts = static_cast<std::size_t>(static_cast<double>(kBatch) / opts.min_acceptance) * 2;
    parallel_for(batches, thread_count(opts), [&](std::size_t b, unsigned) {
        auto g = batch_rng(seed, 1, b);
        Part& part = parts[b];
        std::size_t want = std::min(kBatch, n - b * kBatch);
        while (part.count < want) {
            if (++part.attempts > max_attempts) starved(domain, w);
            Vec x = sampler.draw(g);
            if (!domain.contains(x)) continue;
            ++part.count;
            Vec y = compiled.eval(x);
            if (forbidden.contains(y)) {
                ++part.violations;
                if (part.witnesses.size() < opts.max_witnesses) part.witnesses.push_back({x, y, predicate});
            }
        }
    });
    std::size_t attempts = 0;
    for (auto& p : parts) {
        rep.samples_used += p.count;
        rep.violation_count += p.violations;
        attempts += p.attempts;
        for (auto& v : p.witnesses)
            if (rep.violations.size() < opts.max_witnesses) rep.violations.push_back(std::move(v));
    }
    rep.passed = rep.violation_count == 0;
    rep.diagnostics["domain"] = domain.to_json();
    rep.diagnostics["forbidden"] = forbidden.to_json();
    rep.diagnostics["domain_window"] = w;
    rep.diagnostics["acceptance"] = attempts ? static_cast<double>(rep.samples_used) / static_cast<double>(attempts) : 1.0;
    rep.diagnostics["exact"] = true;
    rep.runtime_seconds = seconds_since(t0);
    return rep;
}

VerificationReport check_coverage(const MapChain& chain, const RegionSpec& domain, const RegionSpec& target,
                                  const Box& window, double grid_step, std::size_t n, std::uint64_t seed,
                                  const SamplingOptions& opts) {
    auto t0 = std::chrono::steady_clock::now();
    std::size_t dim = chain.dim();
    if (domain.dim() != dim || target.dim() != dim || window.lo.size() != dim || window.hi.size() != dim)
        throw ValidationError("region or window dimension does not match chain");
    if (!(grid_step > 0)) throw ValidationError("grid step must be positive");
    VerificationReport rep;
    rep.check = "coverage";
    rep.seed = seed;

    // Grid of cell centres lo + (i + 1/2)·step.
    std::vector<std::size_t> cells(dim);
    std::size_t total = 1;
    for (std::size_t d = 0; d < dim; ++d) {
        double len = window.hi[d] - window.lo[d];
        if (!(len > 0)) throw ValidationError("coverage window must have positive extent");
        cells[d] = static_cast<std::size_t>(std::llround(std::ceil(len / grid_step - 1e-9)));
        total *= cells[d];
    }
    auto centre = [&](std::size_t flat, std::vector<double>& c) {
        for (std::size_t d = dim; d-- > 0;) {
            c[d] = window.lo[d] + (static_cast<double>(flat % cells[d]) + 0.5) * grid_step;
            flat /= cells[d];
        }
    };
    std::vector<std::uint8_t> in_target(total);
    {
        std::vector<double> c(dim);
        Vec cq(dim);
        for (std::size_t f = 0; f < total; ++f) {
            centre(f, c);
            for (std::size_t d = 0; d < dim; ++d) cq[d] = Scalar(c[d]);
            in_target[f] = target.contains(cq);
        }
    }

    double w = choose_window(domain, seed, opts, rep.diagnostics);
    CompiledChain compiled(chain);
    const double radius = grid_step + 0x1.0p-30;
    unsigned threads = thread_count(opts);
    std::size_t batches = (n + kBatch - 1) / kBatch;
    std::vector<std::vector<std::uint8_t>> hit(worker_count(batches, threads), std::vector<std::uint8_t>(total, 0));
    std::vector<std::size_t> finite(batches), attempts(batches), used(batches), confirmed(batches), rejected(batches);
    auto max_attempts = static_cast<std::size_t>(static_cast<double>(kBatch) / opts.min_acceptance) * 2;

    parallel_for(batches, threads, [&](std::size_t b, unsigned worker) {
        auto& mask = hit[worker];
        auto g = batch_rng(seed, 2, b);
        std::vector<double> x(dim), y(dim);
        std::vector<long> lo_i(dim), hi_i(dim), idx(dim);
        std::size_t want = std::min(kBatch, n - b * kBatch);
        while (used[b] < want) {
            if (++attempts[b] > max_attempts) starved(domain, w);
            fill_double(g, w, x, opts.denominator_bits);
            if (!domain.contains(x.data())) continue;
            ++used[b];
            if (!compiled.eval(x.data(), y.data())) continue;
            ++finite[b];
            auto cell_range = [&](double slack) {
                for (std::size_t d = 0; d < dim; ++d) {
                    double u = (y[d] - window.lo[d]) / grid_step - 0.5;
                    double r = radius / grid_step + slack;
                    lo_i[d] = std::max<long>(0, static_cast<long>(std::ceil(u - r)));
                    hi_i[d] = std::min<long>(static_cast<long>(cells[d]) - 1, static_cast<long>(std::floor(u + r)));
                    if (lo_i[d] > hi_i[d]) return false;
                }
                return true;
            };
            // The double image only nominates samples; cells are marked from the
            // exact image, since cancellation can make the double one arbitrary.
            if (!std::isfinite(y[0]) || !cell_range(1.0)) continue;
            Vec xq(dim);
            for (std::size_t d = 0; d < dim; ++d) xq[d] = Scalar(x[d]);
            Vec yq = compiled.eval(xq);
            for (std::size_t d = 0; d < dim; ++d) y[d] = yq[d].get_d();
            if (!cell_range(0.0)) {
                ++rejected[b];
                continue;
            }
            ++confirmed[b];
            idx = lo_i;
            while (true) {
                double dist2 = 0;
                std::size_t flat = 0;
                for (std::size_t d = 0; d < dim; ++d) {
                    double c = window.lo[d] + (static_cast<double>(idx[d]) + 0.5) * grid_step;
                    dist2 += (c - y[d]) * (c - y[d]);
                    flat = flat * cells[d] + static_cast<std::size_t>(idx[d]);
                }
                if (dist2 <= radius * radius) mask[flat] = 1;
                std::size_t d = dim;
                while (d > 0) {
                    --d;
                    if (idx[d] < hi_i[d]) {
                        ++idx[d];
                        break;
                    }
                    idx[d] = lo_i[d];
                    if (d == 0) goto done;
                }
            }
        done:;
        }
    });

    std::size_t target_cells = 0, covered = 0;
    nlohmann::json gaps = nlohmann::json::array();
    std::vector<double> gap_lo(dim, INFINITY), gap_hi(dim, -INFINITY), c(dim);
    for (std::size_t f = 0; f < total; ++f) {
        if (!in_target[f]) continue;
        ++target_cells;
        bool h = false;
        for (const auto& m : hit)
            if (!m.empty() && m[f]) h = true;
        if (h) {
            ++covered;
            continue;
        }
        centre(f, c);
        for (std::size_t d = 0; d < dim; ++d) {
            gap_lo[d] = std::min(gap_lo[d], c[d]);
            gap_hi[d] = std::max(gap_hi[d], c[d]);
        }
        if (gaps.size() < opts.max_witnesses) gaps.push_back(c);
    }
    std::size_t finite_total = 0, attempt_total = 0, confirmed_total = 0, rejected_total = 0;
    for (std::size_t b = 0; b < batches; ++b) {
        confirmed_total += confirmed[b];
        rejected_total += rejected[b];
        rep.samples_used += used[b];
        finite_total += finite[b];
        attempt_total += attempts[b];
    }
    rep.coverage_fraction = target_cells ? static_cast<double>(covered) / static_cast<double>(target_cells) : 1.0;
    rep.diagnostics["target"] = target.to_json();
    rep.diagnostics["window"] = {{"lo", window.lo}, {"hi", window.hi}};
    rep.diagnostics["grid_step"] = grid_step;
    rep.diagnostics["target_cells"] = target_cells;
    rep.diagnostics["covered_cells"] = covered;
    rep.diagnostics["finite_images"] = finite_total;
    rep.diagnostics["domain_window"] = w;
    rep.diagnostics["exact_confirmed"] = confirmed_total;
    rep.diagnostics["exact_rejected"] = rejected_total;
    rep.diagnostics["uncovered_examples"] = gaps;
    if (covered < target_cells) rep.diagnostics["uncovered_bounding_box"] = {{"lo", gap_lo}, {"hi", gap_hi}};
    rep.diagnostics["estimator"] = "statistical: nearest-centre grid marking of exactly evaluated sample images";
    rep.runtime_seconds = seconds_since(t0);
    return rep;
}

Scalar eval_univariate(const Vec& coeffs, const Scalar& t) {
    Scalar acc = 0;
    for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * t + coeffs[k];
    return acc;
}

namespace {

Vec trimmed(Vec c) {
    while (!c.empty() && c.back() == 0) c.pop_back();
    return c;
}

Vec derivative(const Vec& c) {
    Vec d;
    for (std::size_t k = 1; k < c.size(); ++k) d.push_back(c[k] * static_cast<unsigned long>(k));
    return d;
}

// Smallest power of two bounding every root (Cauchy).
Scalar root_bound(const Vec& c) {
    Scalar m = 0;
    for (std::size_t k = 0; k + 1 < c.size(); ++k) m = std::max(m, Scalar(abs(c[k] / c.back())));
    Scalar b = 1;
    while (b < m + 1) b *= 2;
    return b;
}

// Root of c in (a, b) given opposite signs at the ends.
Scalar bisect(const Vec& c, Scalar a, Scalar b, const Scalar& tol) {
    int sa = sign(eval_univariate(c, a));
    for (int it = 0; it < 400; ++it) {
        Scalar mid = (a + b) / 2;
        Scalar v = eval_univariate(c, mid);
        if (v == 0) return mid;
        if (b - a <= tol && abs(v) <= tol) return mid;
        if (sign(v) == sa)
            a = mid;
        else
            b = mid;
    }
    return (a + b) / 2;
}

std::vector<Scalar> roots_in(const Vec& c, const Scalar& lo, const Scalar& hi, const Scalar& tol) {
    std::vector<Scalar> out;
    if (c.size() <= 1) return out;
    if (c.size() == 2) {
        Scalar r = -c[0] / c[1];
        if (r >= lo && r <= hi) out.push_back(r);
        return out;
    }
    std::vector<Scalar> cuts{lo};
    for (auto& r : roots_in(trimmed(derivative(c)), lo, hi, tol))
        if (r > cuts.back() && r < hi) cuts.push_back(r);
    cuts.push_back(hi);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        Scalar va = eval_univariate(c, cuts[i]), vb = eval_univariate(c, cuts[i + 1]);
        if (va == 0) {
            if (out.empty() || out.back() != cuts[i]) out.push_back(cuts[i]);
            continue;
        }
        if (vb == 0) continue;  // picked up as the left end of the next piece
        if (sign(va) != sign(vb)) out.push_back(bisect(c, cuts[i], cuts[i + 1], tol));
    }
    if (eval_univariate(c, hi) == 0 && (out.empty() || out.back() != hi)) out.push_back(hi);
    return out;
}

Vec line_coeffs(const Poly& p, const Scalar& y) {
    // p(y, z) as a polynomial in z.
    return trimmed(p.restrict_to_line(Vec{y, Scalar(0)}, Vec{Scalar(0), Scalar(1)}));
}

}  // namespace

std::vector<Scalar> real_roots(const Vec& coeffs, const Scalar& tol) {
    Vec c = trimmed(coeffs);
    if (c.size() <= 1) return {};
    Scalar b = root_bound(c);
    return roots_in(c, -b, b, tol);
}

nlohmann::json LineProbe::to_json() const {
    return {{"case", lemma_case}, {"claim", claim},   {"passed", passed}, {"samples", samples},
            {"escapes", escapes}, {"coverage", coverage}, {"note", note}};
}

LineProbe line_behavior_probe(const PolyMap& t_k, const Polyhedron& k, const Vec& a_prime, const LineProbeOptions& opts) {
    std::size_t n = k.dim;
    if (a_prime.size() + 1 != n || t_k.dim() != n) throw ValidationError("probe dimension mismatch");
    LineProbe out;
    Vec base = a_prime;
    base.push_back(0);
    Vec dir(n, Scalar(0));
    dir[n - 1] = 1;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        Vec c = trimmed(t_k.components[i].restrict_to_line(base, dir));
        if (c.size() > 1 || (c.empty() ? Scalar(0) : c[0]) != a_prime[i]) {
            out.note = "the map does not preserve the vertical line";
            return out;
        }
    }
    Vec q = trimmed(t_k.components[n - 1].restrict_to_line(base, dir));

    // K ∩ ℓ = {t : α_i + β_i t >= 0 for all i}, an interval [lo, hi].
    std::optional<Scalar> lo, hi;
    bool empty = false;
    for (const auto& h : k.constraints) {
        Scalar alpha = h.constant, beta = h.gradient[n - 1];
        for (std::size_t i = 0; i + 1 < n; ++i) alpha += h.gradient[i] * a_prime[i];
        if (beta == 0) {
            if (alpha < 0) empty = true;
            continue;
        }
        Scalar t = -alpha / beta;
        if (beta > 0)
            lo = lo ? std::max(*lo, t) : t;
        else
            hi = hi ? std::min(*hi, t) : t;
    }
    if (lo && hi && *lo > *hi) empty = true;

    Polyhedron proj = project(k);
    bool in_p = !empty;
    bool in_int_p = in_p && proj.contains_interior(a_prime);
    const Scalar& a = a_prime[n - 2];
    if (!in_p)
        out.lemma_case = 1;
    else if (a <= 0)
        out.lemma_case = 2;
    else if (in_int_p)
        out.lemma_case = 3;
    else
        out.lemma_case = 4;

    // Domain pieces of the line, as open intervals with optional ends.
    struct Piece {
        std::optional<Scalar> lo, hi;
    };
    std::vector<Piece> pieces;
    auto minus_segment = [&] {
        pieces.push_back({std::nullopt, lo});
        if (hi) pieces.push_back({hi, std::nullopt});
    };
    bool identity = q.size() == 2 && q[0] == 0 && q[1] == 1;
    if (out.lemma_case == 1) {
        out.claim = "coverage";
        pieces.push_back({});
    } else if (out.lemma_case == 2) {
        out.claim = "invariance";
        minus_segment();
    } else {
        // Case (iii) with G = K when ℓ ∩ K is bounded, otherwise R = its end
        // points; case (iv) with R = ℓ ∩ K.
        out.claim = (out.lemma_case == 4 && identity) ? "invariance" : "coverage";
        if (out.lemma_case == 3 && !(lo && hi)) {
            pieces.push_back({std::nullopt, lo});
            pieces.push_back({lo, hi});
            pieces.push_back({hi, std::nullopt});
        } else {
            minus_segment();
        }
    }
    if (!lo && out.lemma_case != 1) {
        // ℓ ∩ K is a downward ray: the piece below it is empty.
        pieces.erase(std::remove_if(pieces.begin(), pieces.end(), [](const Piece& p) { return !p.lo && !p.hi; }),
                     pieces.end());
    }

    const Scalar window(opts.window), step(opts.grid_step);
    const Scalar fine = step / 4;
    auto samples_of = [&](const Piece& p) {
        // Grid points inside the piece plus a geometric approach to finite ends.
        std::vector<Scalar> ts;
        Scalar left = p.lo ? *p.lo : -window, right = p.hi ? *p.hi : window;
        if (p.lo && !p.hi) right = std::max<Scalar>(right, *p.lo + window);
        if (p.hi && !p.lo) left = std::min<Scalar>(left, *p.hi - window);
        if (!p.lo && !p.hi && lo && !hi) right = std::max<Scalar>(right, *lo + window);
        // Extend unbounded ends until the images leave the target window.
        auto escapes_window = [&](const Scalar& t) { return abs(eval_univariate(q, t)) > window; };
        if (!p.lo)
            for (int i = 0; i < 40 && !escapes_window(left); ++i) left = left * 2 - 1;
        if (!p.hi)
            for (int i = 0; i < 40 && !escapes_window(right); ++i) right = right * 2 + 1;
        if (p.lo) ts.push_back(*p.lo);  // end point, excluded below
        for (int j = 30; j >= 1; --j) {
            Scalar d(1, 1ul << j);
            if (p.lo) ts.push_back(*p.lo + d);
            if (p.hi) ts.push_back(*p.hi - d);
        }
        Scalar t = left;
        Scalar span = (right - left) / fine;
        mpz_class steps = span.get_num() / span.get_den();
        std::size_t count = std::min<std::size_t>(steps.get_ui() + 1, 400000);
        for (std::size_t i = 0; i <= count; ++i) ts.push_back(left + fine * static_cast<unsigned long>(i));
        ts.push_back(right);
        std::sort(ts.begin(), ts.end());
        ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
        std::vector<Scalar> keep;
        for (auto& v : ts)
            if ((!p.lo || v > *p.lo) && (!p.hi || v < *p.hi)) keep.push_back(v);
        return keep;
    };

    auto in_removed = [&](const Scalar& t) {
        // ℓ ∩ K for invariance against G = K.
        return !empty && (!lo || t >= *lo) && (!hi || t <= *hi);
    };

    if (out.claim == "invariance") {
        for (const auto& p : pieces)
            for (const auto& t : samples_of(p)) {
                ++out.samples;
                if (in_removed(eval_univariate(q, t))) ++out.escapes;
            }
        out.passed = out.escapes == 0;
        if (identity) out.note = "the map is the identity on this line";
        return out;
    }

    auto cells = static_cast<std::size_t>(std::llround(2 * opts.window / opts.grid_step));
    std::vector<std::uint8_t> covered(cells, 0);
    auto mark = [&](Scalar a0, Scalar b0) {
        if (a0 > b0) std::swap(a0, b0);
        // Cells [−W + i·step, −W + (i+1)·step] meeting [a0, b0].
        Scalar s = (a0 + window) / step, e = (b0 + window) / step;
        double sd = std::floor(s.get_d()), ed = std::floor(e.get_d());
        long i0 = std::max<long>(0, static_cast<long>(sd));
        long i1 = std::min<long>(static_cast<long>(cells) - 1, static_cast<long>(ed));
        for (long i = i0; i <= i1; ++i) covered[static_cast<std::size_t>(i)] = 1;
    };
    for (const auto& p : pieces) {
        auto ts = samples_of(p);
        std::optional<Scalar> prev;
        for (const auto& t : ts) {
            Scalar v = eval_univariate(q, t);
            ++out.samples;
            mark(v, prev ? *prev : v);
            prev = v;
        }
    }
    std::size_t hit = std::count(covered.begin(), covered.end(), 1);
    out.coverage = cells ? static_cast<double>(hit) / static_cast<double>(cells) : 1.0;
    out.passed = out.coverage >= opts.min_coverage;
    return out;
}

nlohmann::json LevelCurveProbe::to_json() const {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& [y, z] : points) pts.push_back({y.get_d(), z.get_d()});
    return {{"lambda", format_scalar(lambda)}, {"branch", branch},          {"checked", checked},
            {"failures", failures},            {"notes", failure_notes},    {"blowup", blowup},
            {"passed", passed},                {"points", pts}};
}

LevelCurveProbe level_curve_diagnostics(const Poly& f2, const Poly& q, const Scalar& lambda, const std::vector<Scalar>& ys,
                                        const std::vector<Scalar>& vertical_abscissae, const LevelCurveOptions& opts) {
    if (f2.dim() != 2 || q.dim() != 2) throw ValidationError("level-curve diagnostics need polynomials in two variables");
    if (lambda == 0) throw ValidationError("level-curve diagnostics need a nonzero level");
    LevelCurveProbe out;
    out.lambda = lambda;
    out.branch = lambda > 0 ? "graph" : "band";

    auto roots_at = [&](const Scalar& y) {
        Vec c = line_coeffs(f2, y);
        if (c.empty()) c.push_back(0);
        c[0] -= lambda;
        return real_roots(c, opts.tolerance);
    };
    auto fail = [&](const std::string& note) {
        ++out.failures;
        if (out.failure_notes.size() < 16) out.failure_notes.push_back(note);
    };

    for (const auto& y : ys) {
        if (std::find(vertical_abscissae.begin(), vertical_abscissae.end(), y) != vertical_abscissae.end()) continue;
        ++out.checked;
        auto roots = roots_at(y);
        if (roots.empty()) {
            fail("RootNotBracketed at y = " + format_scalar(y));
            continue;
        }
        if (lambda > 0) {
            const Scalar& z = roots.back();
            out.points.emplace_back(y, z);
            if (q.eval(Vec{y, z}) <= 0) fail("q <= 0 at the top root over y = " + format_scalar(y));
        } else {
            for (const auto& z : roots) {
                out.points.emplace_back(y, z);
                if (!(z > lambda - 1 && z < 0)) fail("root outside (lambda - 1, 0) over y = " + format_scalar(y));
            }
        }
    }

    if (lambda > 0)
        for (const auto& b : vertical_abscissae)
            for (int side : {-1, 1}) {
                nlohmann::json rec{{"abscissa", format_scalar(b)}, {"side", side}};
                bool reached = false;
                for (int k = 1; k <= opts.max_halvings && !reached; ++k) {
                    Scalar y = b + Scalar(side, 1) / Scalar(mpz_class(1) << k);
                    auto roots = roots_at(y);
                    if (!roots.empty() && roots.back().get_d() > opts.blowup_threshold) {
                        reached = true;
                        rec["halvings"] = k;
                        rec["value"] = roots.back().get_d();
                    }
                }
                rec["reached"] = reached;
                if (!reached) fail("no blow-up towards y = " + format_scalar(b));
                out.blowup.push_back(rec);
            }
    out.passed = out.failures == 0 && out.checked > 0;
    return out;
}

namespace {

Scalar dyadic_uniform(std::mt19937_64& g, double half_width, int bits = 20) {
    auto half = static_cast<std::int64_t>(std::floor(half_width * std::ldexp(1.0, bits)));
    auto u = static_cast<std::int64_t>(g() % static_cast<std::uint64_t>(2 * half + 1)) - half;
    Scalar v(mpz_class(static_cast<long>(u)), mpz_class(1) << bits);
    v.canonicalize();
    return v;
}

}  // namespace

VerificationReport check_line_behavior(const Polyhedron& k, std::size_t per_case, std::uint64_t seed,
                                       const LineProbeOptions& opts) {
    auto t0 = std::chrono::steady_clock::now();
    std::size_t n = k.dim;
    if (n < 2) throw ValidationError("line probes need dimension at least 2");
    VerificationReport rep;
    rep.check = "lemma52";
    rep.seed = seed;
    SepPoly sep = build_sep_poly(k);
    PolyMap t = build_TK(k, sep);
    Polyhedron proj = project(k);
    auto g = batch_rng(seed, 3, 0);
    double box = opts.window / 3;

    auto draw = [&] {
        Vec a(n - 1);
        for (auto& v : a) v = dyadic_uniform(g, box);
        return a;
    };
    auto case_of = [&](const Vec& a) {
        if (!proj.contains(a)) return 1;
        if (a.back() <= 0) return 2;
        return proj.contains_interior(a) ? 3 : 4;
    };
    std::vector<std::vector<Vec>> lines(5);
    for (int attempt = 0; attempt < 200000; ++attempt) {
        bool done = true;
        for (int c = 1; c <= 4; ++c) done &= lines[static_cast<std::size_t>(c)].size() >= per_case;
        if (done) break;
        Vec a = draw();
        if (lines[4].size() < per_case && !proj.constraints.empty()) {
            // Push the draw onto a facet of the projection.
            const LinearForm& f = proj.constraints[static_cast<std::size_t>(attempt) % proj.constraints.size()];
            Scalar s = f(a) / norm_sq(f.gradient);
            Vec b = a;
            for (std::size_t i = 0; i < b.size(); ++i) b[i] -= s * f.gradient[i];
            if (case_of(b) == 4) {
                lines[4].push_back(b);
                continue;
            }
        }
        int c = case_of(a);
        if (lines[static_cast<std::size_t>(c)].size() < per_case) lines[static_cast<std::size_t>(c)].push_back(a);
    }

    nlohmann::json probes = nlohmann::json::array();
    rep.passed = true;
    for (int c = 1; c <= 4; ++c) {
        const auto& ls = lines[static_cast<std::size_t>(c)];
        if (ls.size() < per_case) {
            rep.passed = false;
            rep.diagnostics["missing_case_" + std::to_string(c)] = per_case - ls.size();
        }
        for (const auto& a : ls) {
            LineProbe p = line_behavior_probe(t, k, a, opts);
            rep.samples_used += p.samples;
            nlohmann::json pj = p.to_json();
            pj["a_prime"] = format_point(a);
            probes.push_back(pj);
            if (!p.passed) {
                rep.passed = false;
                ++rep.violation_count;
            }
        }
    }
    rep.diagnostics["probes"] = probes;
    rep.diagnostics["separator"] = sep.to_json();
    rep.runtime_seconds = seconds_since(t0);
    return rep;
}

VerificationReport check_level_curves(const Polyhedron& k, const std::vector<Scalar>& lambdas, std::size_t count,
                                      double window, std::uint64_t seed, const LevelCurveOptions& opts) {
    auto t0 = std::chrono::steady_clock::now();
    if (k.dim != 2) throw ValidationError("level-curve diagnostics need a planar polyhedron");
    VerificationReport rep;
    rep.check = "levelcurve";
    rep.seed = seed;
    PositionedStep ps = position_step(minimal_presentation(k));
    InteriorStepPolys polys = build_QGP(ps.positioned);
    PolyMap f = build_F(polys);
    std::vector<Scalar> abscissae;
    for (const auto& h : ps.positioned.constraints)
        if (h.gradient[1] == 0) abscissae.push_back(-h.constant / h.gradient[0]);
    auto g = batch_rng(seed, 4, 0);
    std::vector<Scalar> ys;
    Scalar width = Scalar(2 * window) / static_cast<unsigned long>(std::max<std::size_t>(count, 1));
    for (std::size_t i = 0; i < count; ++i) {
        Scalar jitter = (dyadic_uniform(g, 0.5) + Scalar(1, 2)) * width;
        ys.push_back(Scalar(-window) + width * static_cast<unsigned long>(i) + jitter);
    }
    nlohmann::json probes = nlohmann::json::array();
    rep.passed = true;
    for (const auto& lambda : lambdas) {
        LevelCurveProbe p = level_curve_diagnostics(f.components[1], polys.Q, lambda, ys, abscissae, opts);
        rep.samples_used += p.checked;
        rep.violation_count += p.failures;
        rep.passed &= p.passed;
        auto pj = p.to_json();
        pj.erase("points");
        probes.push_back(pj);
    }
    rep.diagnostics["probes"] = probes;
    rep.diagnostics["placement"] = ps.placement.to_json();
    rep.diagnostics["vertical_abscissae"] = nlohmann::json::array();
    for (const auto& b : abscissae) rep.diagnostics["vertical_abscissae"].push_back(format_scalar(b));
    rep.runtime_seconds = seconds_since(t0);
    return rep;
}

}  // namespace polyimage
