#include "slm/mcsim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "slm/errors.hpp"

namespace slm::mcsim {

namespace {

// Philox4x32-10 (Salmon et al.): 128-bit counter, 64-bit key, ten rounds.
// A pure function of (key, counter), which is what makes batch-parallel
// simulation reproducible: draw j of path i never depends on scheduling.
struct PhiloxBlock {
    std::uint32_t v[4];
};

inline PhiloxBlock philox4x32(std::uint32_t c0, std::uint32_t c1, std::uint32_t c2,
                              std::uint32_t c3, std::uint32_t k0, std::uint32_t k1) {
    constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
    constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(M0) * c0;
        const std::uint64_t p1 = static_cast<std::uint64_t>(M1) * c2;
        const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
        const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
        const std::uint32_t n0 = hi1 ^ c1 ^ k0;
        const std::uint32_t n1 = lo1;
        const std::uint32_t n2 = hi0 ^ c3 ^ k1;
        const std::uint32_t n3 = lo0;
        c0 = n0;
        c1 = n1;
        c2 = n2;
        c3 = n3;
        k0 += W0;
        k1 += W1;
    }
    return {{c0, c1, c2, c3}};
}

inline double to_unit(std::uint32_t a, std::uint32_t b) {
    const std::uint64_t bits = (static_cast<std::uint64_t>(a) << 32) | b;
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1p-53;  // strictly in (0,1)
}

// Four normals from two Philox blocks at (path, step, block in {0,1}).
struct NormalQuad {
    double z[4];
};

inline NormalQuad normals_at(std::uint64_t seed, std::uint32_t stream,
                             std::int64_t path, std::uint32_t step) {
    NormalQuad out;
    for (std::uint32_t blk = 0; blk < 2; ++blk) {
        const PhiloxBlock r = philox4x32(
            static_cast<std::uint32_t>(path), static_cast<std::uint32_t>(path >> 32),
            step, (stream << 1) | blk, static_cast<std::uint32_t>(seed),
            static_cast<std::uint32_t>(seed >> 32));
        const double u1 = to_unit(r.v[0], r.v[1]);
        const double u2 = to_unit(r.v[2], r.v[3]);
        const double rad = std::sqrt(-2.0 * std::log(u1));
        const double ang = 2.0 * M_PI * u2;
        out.z[2 * blk] = rad * std::cos(ang);
        out.z[2 * blk + 1] = rad * std::sin(ang);
    }
    return out;
}

int thread_count() {
    if (const char* env = std::getenv("SLM_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

// Runs body(path_index) over all paths, split across threads by contiguous
// blocks. The body writes only to slots of its own path index.
template <class Body>
void for_each_path(std::int64_t n_paths, const Body& body) {
    const int n_threads = std::min<std::int64_t>(thread_count(), n_paths);
    if (n_threads <= 1) {
        for (std::int64_t i = 0; i < n_paths; ++i) body(i);
        return;
    }
    std::vector<std::thread> workers;
    workers.reserve(n_threads);
    const std::int64_t chunk = (n_paths + n_threads - 1) / n_threads;
    for (int t = 0; t < n_threads; ++t) {
        const std::int64_t lo = t * chunk;
        const std::int64_t hi = std::min(n_paths, lo + chunk);
        if (lo >= hi) break;
        workers.emplace_back([lo, hi, &body] {
            for (std::int64_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& w : workers) w.join();
}

void check_config(const McConfig& cfg) {
    if (cfg.n_paths <= 0 || cfg.n_steps <= 0)
        throw domain_error("mcsim: n_paths and n_steps must be positive");
}

}  // namespace

namespace {

// P(min of a BES(3) bridge from r0 to r1 over time h goes below a).
// A BES(3) bridge is a Brownian bridge conditioned to stay positive, so
// both pieces follow from the reflection formula for bridge minima.
inline double bes3_bridge_hit(double a, double r0, double r1, double h) {
    if (r0 <= a || r1 <= a) return 1.0;
    const double e_hit = 2.0 * (r0 - a) * (r1 - a) / h;
    if (e_hit > 40.0) return 0.0;
    const double e_zero = 2.0 * r0 * r1 / h;
    const double num = std::exp(-e_hit) - std::exp(-e_zero);
    const double den = -std::expm1(-e_zero);
    return (den > 0.0) ? num / den : 1.0;
}

}  // namespace

PathSample simulate_cev1_paths(double sigma, double T, const McConfig& cfg) {
    if (!(sigma > 0.0) || !(T > 0.0))
        throw domain_error("simulate_cev1_paths: need sigma, T > 0");
    check_config(cfg);

    PathSample out;
    out.maturity = T;
    out.terminal.resize(cfg.n_paths);
    out.supremum.resize(cfg.n_paths);
    out.mid.resize(cfg.n_paths);
    out.hit_levels = cfg.z_levels;
    out.hit_prob.assign(cfg.z_levels.size(), std::vector<double>(cfg.n_paths));

    const int n = cfg.n_steps;
    const int mid_idx = n / 2;
    const double du = sigma * sigma * T / n;
    const double sd = std::sqrt(du);
    const std::size_t n_levels = cfg.z_levels.size();
    std::vector<double> barrier(n_levels);
    for (std::size_t l = 0; l < n_levels; ++l) barrier[l] = 1.0 / cfg.z_levels[l];
    // Bridge-hitting odds are negligible unless the radius comes near the
    // largest barrier; skip the exp calls elsewhere.
    const double watch_r = (n_levels ? barrier[0] : 0.0) + std::sqrt(20.0 * du);

    for_each_path(cfg.n_paths, [&](std::int64_t p) {
        double w0 = 1.0, w1 = 0.0, w2 = 0.0;  // 3D BM started at the unit vector
        double min_r = 1.0;
        double mid_s = 1.0;
        double prev_r = 1.0;
        std::vector<double> survival(n_levels, 1.0);
        for (int k = 0; k < n; ++k) {
            const NormalQuad q = normals_at(cfg.seed, 1, p, static_cast<std::uint32_t>(k));
            w0 += sd * q.z[0];
            w1 += sd * q.z[1];
            w2 += sd * q.z[2];
            const double r = std::sqrt(w0 * w0 + w1 * w1 + w2 * w2);
            min_r = std::min(min_r, r);
            if (std::min(prev_r, r) < watch_r)
                for (std::size_t l = 0; l < n_levels; ++l)
                    survival[l] *= 1.0 - bes3_bridge_hit(barrier[l], prev_r, r, du);
            prev_r = r;
            if (k + 1 == mid_idx) mid_s = 1.0 / r;
        }
        out.terminal[p] = 1.0 / prev_r;
        out.supremum[p] = 1.0 / min_r;
        out.mid[p] = mid_s;
        for (std::size_t l = 0; l < n_levels; ++l)
            out.hit_prob[l][p] = 1.0 - survival[l];
    });
    return out;
}

PathSample simulate_bridge(double mu, double T, const McConfig& cfg) {
    if (!(mu >= 0.0) || mu >= 1.0)
        throw domain_error("simulate_bridge: need mu in [0,1)");
    if (!(T > 0.0)) throw domain_error("simulate_bridge: T must be positive");
    check_config(cfg);

    PathSample out;
    out.maturity = T;
    out.deterministic_terminal = true;
    out.terminal.resize(cfg.n_paths);
    out.supremum.resize(cfg.n_paths);
    out.mid.resize(cfg.n_paths);

    const int n = cfg.n_steps;
    const int mid_idx = n / 2;
    // Time-change grid excluding t = T, where phi blows up; the endpoint is
    // set to mu exactly.
    std::vector<double> dphi(n - 1);
    double prev = 0.0;
    for (int k = 1; k < n; ++k) {
        const double phi = -std::log1p(-static_cast<double>(k) / n);
        dphi[k - 1] = phi - prev;
        prev = phi;
    }

    for_each_path(cfg.n_paths, [&](std::int64_t p) {
        double w = 0.0, phi = 0.0;
        double sup = 1.0;
        double mid_m = 1.0;
        for (int k = 1; k < n; ++k) {
            const NormalQuad q =
                normals_at(cfg.seed, 2, p, static_cast<std::uint32_t>(k));
            w += std::sqrt(dphi[k - 1]) * q.z[0];
            phi += dphi[k - 1];
            const double m = (1.0 - mu) * std::exp(w - 0.5 * phi) + mu;
            sup = std::max(sup, m);
            if (k == mid_idx) mid_m = m;
        }
        out.terminal[p] = mu;
        out.supremum[p] = std::max(sup, mu);
        out.mid[p] = mid_m;
    });
    return out;
}

PathSample simulate_lognormal_paths(double sigma, double T, const McConfig& cfg) {
    if (!(sigma > 0.0) || !(T > 0.0))
        throw domain_error("simulate_lognormal_paths: need sigma, T > 0");
    check_config(cfg);

    PathSample out;
    out.maturity = T;
    out.terminal.resize(cfg.n_paths);
    out.supremum.resize(cfg.n_paths);
    out.mid.resize(cfg.n_paths);
    out.hit_levels = cfg.z_levels;
    out.hit_prob.assign(cfg.z_levels.size(), std::vector<double>(cfg.n_paths));

    const int n = cfg.n_steps;
    const int mid_idx = n / 2;
    const double dv = sigma * sigma * T / n;
    const double sd = std::sqrt(dv);
    const std::size_t n_levels = cfg.z_levels.size();
    std::vector<double> log_barrier(n_levels);
    for (std::size_t l = 0; l < n_levels; ++l) log_barrier[l] = std::log(cfg.z_levels[l]);

    for_each_path(cfg.n_paths, [&](std::int64_t p) {
        double w = 0.0;
        double y_prev = 0.0;  // log S on the grid
        double sup = 1.0;
        double mid_s = 1.0;
        std::vector<double> survival(n_levels, 1.0);
        for (int k = 0; k < n; ++k) {
            const NormalQuad q = normals_at(cfg.seed, 3, p, static_cast<std::uint32_t>(k));
            w += sd * q.z[0];
            const double y = w - 0.5 * dv * (k + 1);
            sup = std::max(sup, std::exp(y));
            // log S between grid points is a Brownian bridge of variance dv:
            // reflection gives the exact barrier-crossing odds per step.
            for (std::size_t l = 0; l < n_levels; ++l) {
                const double b = log_barrier[l];
                if (y >= b || y_prev >= b) {
                    survival[l] = 0.0;
                } else {
                    const double e = 2.0 * (b - y_prev) * (b - y) / dv;
                    if (e < 40.0) survival[l] *= -std::expm1(-e);
                }
            }
            y_prev = y;
            if (k + 1 == mid_idx) mid_s = std::exp(y);
        }
        out.terminal[p] = std::exp(y_prev);
        out.supremum[p] = sup;
        out.mid[p] = mid_s;
        for (std::size_t l = 0; l < n_levels; ++l)
            out.hit_prob[l][p] = 1.0 - survival[l];
    });
    return out;
}

McDefectEstimate estimate_pi(const PathSample& paths, const McConfig& cfg) {
    if (paths.deterministic_terminal)
        throw domain_error("estimate_pi: supremum estimator not applicable to "
                           "deterministic-endpoint laws");
    if (cfg.z_levels.size() < 2)
        throw domain_error("estimate_pi: need at least two z levels");
    for (std::size_t i = 0; i < cfg.z_levels.size(); ++i) {
        if (!(cfg.z_levels[i] > 1.0))
            throw domain_error("estimate_pi: z levels must exceed 1");
        if (i > 0 && !(cfg.z_levels[i] > cfg.z_levels[i - 1]))
            throw domain_error("estimate_pi: z levels must be strictly increasing");
    }

    const double n = static_cast<double>(paths.supremum.size());
    const bool exact_probs = paths.hit_levels == cfg.z_levels && !paths.hit_prob.empty();
    McDefectEstimate est;
    est.per_level.reserve(cfg.z_levels.size());
    for (std::size_t l = 0; l < cfg.z_levels.size(); ++l) {
        const double z = cfg.z_levels[l];
        double frac;
        double effective_count;
        if (exact_probs) {
            double sum = 0.0;
            for (double p : paths.hit_prob[l]) sum += p;
            frac = sum / n;
            effective_count = sum;
        } else {
            // Grid-maximum fallback: biased low when excursions above z are
            // shorter than the grid spacing.
            std::int64_t count = 0;
            for (double s : paths.supremum)
                if (s >= z) ++count;
            frac = count / n;
            effective_count = static_cast<double>(count);
        }
        McDefectEstimate::Level lvl;
        lvl.z = z;
        lvl.estimate = z * frac;
        lvl.std_err = z * std::sqrt(frac * (1.0 - frac) / n);
        lvl.exceedances = static_cast<std::int64_t>(std::llround(effective_count));
        est.per_level.push_back(lvl);
    }

    const auto& top = est.per_level.back();
    const auto& prev = est.per_level[est.per_level.size() - 2];
    if (top.exceedances < 50)
        throw levels_too_low_error("estimate_pi: fewer than 50 exceedances at the top level");

    // pi is the z -> inf limit; extrapolate the top two levels linearly in
    // w = 1/z to w = 0, since visible curvature remains at finite z.
    const double w1 = 1.0 / prev.z;
    const double w2 = 1.0 / top.z;
    const double c2 = w1 / (w1 - w2);
    const double c1 = -w2 / (w1 - w2);
    est.pi_hat = c1 * prev.estimate + c2 * top.estimate;
    est.std_err = std::sqrt(c1 * c1 * prev.std_err * prev.std_err +
                            c2 * c2 * top.std_err * top.std_err);
    return est;
}

}  // namespace slm::mcsim
