#pragma once
// Singularity-aware quadrature on the circle and Fourier coefficients of
// boundary weights.
//
// Mesh construction: the circle is split at every registered singular angle;
// intervals ending at a *graded* singularity receive geometrically graded
// panels (ratio 2) down to a terminal width of 1e-12. Graded panels live in
// offset coordinates relative to their singular angle and are evaluated
// through weight::eval_offset, which avoids the catastrophic cancellation of
// evaluating near-singular weights through the absolute angle. The remaining
// mass inside the terminal width is added analytically from the registry's
// tail closure. Panels are additionally split so that each one sees at most a
// bounded phase of the highest oscillation e^{-i K theta}.
//
// Coefficients are refined by doubling every panel until two successive
// meshes agree below tolerance; the observed difference is reported as the
// per-coefficient quadrature error bound.

#include <atomic>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <thread>
#include <utility>
#include <vector>

#include "steklov/errors.hpp"
#include "steklov/gauss.hpp"
#include "steklov/weights.hpp"

namespace steklov {

inline constexpr double grading_floor = 1e-12;  // terminal graded panel width
inline constexpr double osc_budget = 4.0;       // max panel width * k_max

// Parallelism width for coefficient evaluation; overridden by STEKLOV_THREADS.
// Results are bitwise independent of this value (fixed coefficient blocks,
// fixed reduction order within each block).
inline int thread_count() {
    static const int n = [] {
        if (const char* env = std::getenv("STEKLOV_THREADS")) {
            const int v = std::atoi(env);
            if (v >= 1) return std::min(v, 256);
        }
        return 1;
    }();
    return n;
}

struct quad_mesh {
    std::vector<double> nodes;    // absolute angles (may exceed 2*pi on the wrap interval)
    std::vector<double> weights;  // positive quadrature weights
    std::vector<double> values;   // weight values at the nodes
    std::vector<std::pair<double, double>> tails;  // (angle, analytic mass below the floor)
};

namespace detail {

struct panel {
    int j;        // registry index anchoring offset coordinates; -1 = absolute
    double tref;  // reference angle for offsets
    double lo, hi;
};

inline void check_integrable(const weight& w) {
    for (const auto& s : w.singularities()) {
        const bool integrable = s.p > -1.0 || (s.p == -1.0 && s.q < -1.0);
        if (!integrable)
            throw error(errc::divergent_weight,
                        "non-integrable weight singularity at angle " +
                            format_number(s.angle),
                        s.angle);
    }
}

}  // namespace detail

inline quad_mesh build_mesh(const weight& w, int k_max, int refine) {
    detail::check_integrable(w);
    const auto& sings = w.singularities();

    // Base intervals between consecutive singular angles, carrying the
    // registry indices of their endpoints (never re-key floating angles).
    struct base_iv {
        double a, b;
        int ja, jb;
    };
    std::vector<std::pair<double, int>> brk;
    for (int j = 0; j < int(sings.size()); ++j)
        brk.emplace_back(wrap_angle(sings[j].angle), j);
    std::sort(brk.begin(), brk.end());
    std::vector<base_iv> base;
    if (brk.empty()) {
        base.push_back({0.0, two_pi, -1, -1});
    } else {
        for (std::size_t i = 0; i < brk.size(); ++i) {
            const auto [a, ja] = brk[i];
            auto [b, jb] = brk[(i + 1) % brk.size()];
            if (i + 1 == brk.size()) b += two_pi;
            base.push_back({a, b, ja, jb});
        }
    }

    std::vector<detail::panel> panels;
    for (const auto& iv : base) {
        const double L = iv.b - iv.a;
        const bool la = iv.ja >= 0 && sings[iv.ja].grade;
        const bool lb = iv.jb >= 0 && sings[iv.jb].grade;
        double s_lo = 0.0, s_hi = 0.0;
        if (la) {
            const double lim = lb ? L / 2 : L;
            double s = grading_floor, h = grading_floor;
            while (s + h < lim) {
                panels.push_back({iv.ja, iv.a, s, s + h});
                s += h;
                h *= 2;
            }
            s_lo = s;
        }
        if (lb) {
            const double lim = la ? L / 2 : L - s_lo;
            double s = grading_floor, h = grading_floor;
            std::vector<detail::panel> segs;
            while (s + h < lim) {
                segs.push_back({iv.jb, iv.b, -(s + h), -s});
                s += h;
                h *= 2;
            }
            panels.insert(panels.end(), segs.rbegin(), segs.rend());
            s_hi = s;
        }
        if (iv.a + s_lo < iv.b - s_hi)
            panels.push_back({-1, 0.0, iv.a + s_lo, iv.b - s_hi});
    }

    const auto& gl = gl16();
    quad_mesh mesh;
    for (const auto& p : panels) {
        const double width = p.hi - p.lo;
        const double kk = std::max(k_max, 1);
        int m = std::max(1, int(std::ceil(width * kk / osc_budget)));
        m <<= refine;
        for (int i = 0; i < m; ++i) {
            const double c = p.lo + width * i / m;
            const double d = p.lo + width * (i + 1) / m;
            const double mid = (c + d) / 2, half = (d - c) / 2;
            for (std::size_t g = 0; g < gl.x.size(); ++g) {
                const double x = mid + half * gl.x[g];
                mesh.weights.push_back(half * gl.w[g]);
                if (p.j < 0) {
                    mesh.nodes.push_back(x);
                    mesh.values.push_back(w.eval(x));
                } else {
                    mesh.nodes.push_back(p.tref + x);
                    mesh.values.push_back(w.eval_offset(p.j, x));
                }
            }
        }
    }
    for (const auto& s : sings)
        if (s.grade && s.tail)
            mesh.tails.emplace_back(wrap_angle(s.angle), 2.0 * s.tail(grading_floor));
    return mesh;
}

struct fourier_coefficients {
    int K = 0;
    std::vector<std::complex<double>> coeffs;  // k = 0..K
    std::vector<double> quad_error;            // per-coefficient error bound
    double tol = 0;

    std::complex<double> at(int k) const {
        return k >= 0 ? coeffs[k] : std::conj(coeffs[-k]);
    }
    double perimeter() const { return coeffs[0].real() * two_pi; }
};

namespace detail {

// b_hat(k) = (1/2pi) sum_i w_i v_i e^{-i k theta_i} for k = 0..K, evaluated
// in fixed blocks of 64 coefficients. Each block restarts the complex
// rotation from an exactly-evaluated phase, and nodes are reduced in index
// order, so the result is bitwise independent of the thread count.
inline std::vector<std::complex<double>> coeffs_on_mesh(const quad_mesh& mesh, int K) {
    const int nb = K / 64 + 1;
    std::vector<std::complex<double>> bh(K + 1, {0.0, 0.0});
    const std::size_t M = mesh.nodes.size();

    const auto do_block = [&](int b) {
        const int k0 = b * 64;
        const int k1 = std::min(K + 1, k0 + 64);
        std::complex<double>* acc = bh.data() + k0;
        for (std::size_t i = 0; i < M; ++i) {
            const double th = mesh.nodes[i];
            const double wv = mesh.weights[i] * mesh.values[i];
            const double ph0 = -double(k0) * th;
            std::complex<double> cur(std::cos(ph0), std::sin(ph0));
            const std::complex<double> rot(std::cos(th), -std::sin(th));
            for (int k = k0; k < k1; ++k) {
                acc[k - k0] += wv * cur;
                cur *= rot;
            }
        }
    };

    const int T = std::min(thread_count(), nb);
    if (T <= 1) {
        for (int b = 0; b < nb; ++b) do_block(b);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(T);
        for (int t = 0; t < T; ++t)
            pool.emplace_back([&] {
                for (int b = next.fetch_add(1); b < nb; b = next.fetch_add(1)) do_block(b);
            });
        for (auto& th : pool) th.join();
    }

    for (auto& c : bh) c /= two_pi;
    for (const auto& [ang, mass] : mesh.tails) {
        for (int k = 0; k <= K; ++k) {
            const double ph = -double(k) * ang;
            bh[k] += mass * std::complex<double>(std::cos(ph), std::sin(ph)) / two_pi;
        }
    }
    return bh;
}

}  // namespace detail

inline fourier_coefficients fourier_coeffs(const weight& w, int K, double tol = 1e-10) {
    constexpr int max_refine = 6;
    auto prev = detail::coeffs_on_mesh(build_mesh(w, K, 0), K);
    std::vector<std::complex<double>> cur;
    std::vector<double> diff(K + 1, 0.0);
    for (int r = 1; r <= max_refine; ++r) {
        cur = detail::coeffs_on_mesh(build_mesh(w, K, r), K);
        double maxdiff = 0;
        for (int k = 0; k <= K; ++k) {
            diff[k] = std::abs(cur[k] - prev[k]);
            maxdiff = std::max(maxdiff, diff[k]);
        }
        prev = cur;
        if (maxdiff < tol / 2) break;
    }
    fourier_coefficients out;
    out.K = K;
    out.coeffs = std::move(prev);
    out.tol = tol;
    out.quad_error.resize(K + 1);
    for (int k = 0; k <= K; ++k) out.quad_error[k] = std::max(diff[k], tol);
    return out;
}

inline double perimeter(const weight& w, double tol = 1e-10) {
    return fourier_coeffs(w, 0, tol).perimeter();
}

// Integrals of the positive and negative parts (∫beta_+, ∫beta_-), refined to
// the requested tolerance. Sub-floor tail masses are nonnegative for every
// catalog weight and are assigned to the positive part.
inline std::pair<double, double> signed_mass(const weight& w, double tol = 1e-10) {
    constexpr int max_refine = 6;
    auto masses = [&](int r) {
        const quad_mesh mesh = build_mesh(w, 0, r);
        double pos = 0, neg = 0;
        for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
            const double m = mesh.weights[i] * mesh.values[i];
            (m >= 0 ? pos : neg) += m;
        }
        for (const auto& [ang, mass] : mesh.tails) {
            (void)ang;
            pos += mass;
        }
        return std::pair<double, double>(pos, -neg);
    };
    auto prev = masses(0);
    for (int r = 1; r <= max_refine; ++r) {
        const auto cur = masses(r);
        const double diff = std::abs(cur.first - prev.first) +
                            std::abs(cur.second - prev.second);
        prev = cur;
        if (diff < tol / 2) break;
    }
    return prev;
}

}  // namespace steklov
