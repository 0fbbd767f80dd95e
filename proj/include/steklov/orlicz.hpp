#pragma once
// Orlicz-space machinery on sampled functions: modulars and Luxemburg norms
// for L(log L)^a and exp L^{1/a}, the Holder-type pairing, and the
// L log L membership scan that gates rough weights.

#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "steklov/errors.hpp"
#include "steklov/quadrature.hpp"
#include "steklov/weights.hpp"

namespace steklov {

// A measurable function represented by quadrature nodes, values and measure
// weights (all the norms below are finite sums over this sample).
struct sampled_function {
    std::vector<double> nodes;
    std::vector<double> values;
    std::vector<double> measure_weights;
    double total_measure = 0;
};

inline sampled_function make_sampled(std::vector<double> nodes, std::vector<double> values,
                                     std::vector<double> measure_weights) {
    if (nodes.size() != values.size() || nodes.size() != measure_weights.size() ||
        nodes.empty())
        throw error(errc::invalid_parameter,
                    "sampled function needs matching nonempty node/value/weight lists");
    double total = 0;
    for (double w : measure_weights) {
        if (!(w > 0))
            throw error(errc::invalid_parameter, "measure weights must be positive");
        total += w;
    }
    return {std::move(nodes), std::move(values), std::move(measure_weights), total};
}

struct orlicz_norm {
    double value = 0;             // the Luxemburg norm
    double a = 0;                 // exponent
    double modular_at_value = 0;  // modular evaluated at t = value
    double bracket_lo = 0, bracket_hi = 0;
};

// sum_i w_i |f_i/t| (log(2 + |f_i/t|))^a
inline double llog_modular(const sampled_function& f, double a, double t) {
    if (!(t > 0)) throw error(errc::invalid_parameter, "modular requires t > 0");
    double s = 0;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        const double x = std::abs(f.values[i]) / t;
        s += f.measure_weights[i] * x * std::pow(std::log(2 + x), a);
    }
    return s;
}

// sum_i w_i exp(|u_i/t|^{1/a}); returns +infinity on overflow (the bisection
// only compares against its threshold, so the infinite value is usable).
inline double expl_modular(const sampled_function& u, double a, double t) {
    if (!(t > 0)) throw error(errc::invalid_parameter, "modular requires t > 0");
    if (!(a > 0)) throw error(errc::invalid_parameter, "exp class requires a > 0");
    double s = 0;
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        const double x = std::pow(std::abs(u.values[i]) / t, 1.0 / a);
        if (x > 700) return std::numeric_limits<double>::infinity();
        s += u.measure_weights[i] * std::exp(x);
    }
    return s;
}

namespace detail {

// Luxemburg bisection: the modular is strictly decreasing in t, so find the t
// with modular(t) = threshold by doubling/halving to a bracket and then
// geometric bisection to relative width 1e-12 (within the specified 1e-10).
template <class Modular>
inline orlicz_norm luxemburg(Modular&& modular, double threshold, double a) {
    orlicz_norm out;
    out.a = a;
    double hi = 1.0;
    int guard = 0;
    while (modular(hi) > threshold && guard++ < 4200) hi *= 2;
    double lo = hi / 2;
    guard = 0;
    while (modular(lo) < threshold && guard++ < 4200) lo /= 2;
    for (int it = 0; it < 200; ++it) {
        const double mid = std::sqrt(lo * hi);
        if (modular(mid) > threshold) lo = mid;
        else hi = mid;
        if (hi / lo < 1 + 1e-12) break;
    }
    out.value = std::sqrt(lo * hi);
    out.bracket_lo = lo;
    out.bracket_hi = hi;
    out.modular_at_value = modular(out.value);
    return out;
}

inline bool all_zero(const sampled_function& f) {
    for (double v : f.values)
        if (v != 0) return false;
    return true;
}

}  // namespace detail

// Luxemburg norm in L(log L)^a: inf { t > 0 : llog_modular(f, a, t) <= 1 }.
inline orlicz_norm llog_norm(const sampled_function& f, double a) {
    if (detail::all_zero(f)) return {0, a, 0, 0, 0};
    return detail::luxemburg([&](double t) { return llog_modular(f, a, t); }, 1.0, a);
}

// Luxemburg-type norm in exp L^{1/a}. The raw modular equals total_measure at
// u = 0, so it is compared against 1 + total_measure (equivalently, the Young
// function is exp(x) - 1); this vanishing-at-zero normalization gives an
// equivalent norm and norm 0 for the zero function.
inline orlicz_norm expl_norm(const sampled_function& u, double a) {
    if (detail::all_zero(u)) return {0, a, 0, 0, 0};
    return detail::luxemburg([&](double t) { return expl_modular(u, a, t); },
                             1.0 + u.total_measure, a);
}

// Returns (||f u||_{L^1}, ||f||_{L(log L)^a} * ||u||_{exp L^{1/a}}); the
// pairing inequality lhs <= C * rhs is calibrated empirically by the tests.
inline std::pair<double, double> holder_check(const sampled_function& f,
                                              const sampled_function& u, double a) {
    if (f.values.size() != u.values.size())
        throw error(errc::invalid_parameter, "holder_check requires a shared sample");
    double lhs = 0;
    for (std::size_t i = 0; i < f.values.size(); ++i)
        lhs += f.measure_weights[i] * std::abs(f.values[i] * u.values[i]);
    return {lhs, llog_norm(f, a).value * expl_norm(u, a).value};
}

// ------------------------- membership scan ---------------------------------

enum class scan_verdict { convergent, divergent, inconclusive };

inline const char* to_string(scan_verdict v) {
    switch (v) {
        case scan_verdict::convergent:   return "CONVERGENT";
        case scan_verdict::divergent:    return "DIVERGENT";
        case scan_verdict::inconclusive: return "INCONCLUSIVE";
    }
    return "INCONCLUSIVE";
}

// Samples min(beta, M) on a singularity-graded mesh; the mass inside the
// terminal graded width is represented by one lump node per side carrying the
// capped average value there.
inline sampled_function scan_sample(const weight_ptr& w, double cap) {
    const capped_weight capped(w, cap);
    quad_mesh mesh = build_mesh(capped, /*k_max=*/0, /*refine=*/2);
    for (const auto& s : capped.singularities()) {
        if (s.grade && s.tail) {
            const double v = s.tail(grading_floor) / grading_floor;
            for (int side = 0; side < 2; ++side) {
                mesh.nodes.push_back(s.angle);
                mesh.weights.push_back(grading_floor);
                mesh.values.push_back(v);
            }
        }
    }
    return make_sampled(std::move(mesh.nodes), std::move(mesh.values),
                        std::move(mesh.weights));
}

struct membership_scan_result {
    std::vector<double> caps;
    std::vector<double> norms;  // ||min(beta, M)||_{L(log L)^a} per cap
    scan_verdict verdict = scan_verdict::inconclusive;
};

// Boundedness verdict: CONVERGENT if the last two norms agree to 1% relative;
// otherwise DIVERGENT if any consecutive pair grows faster than 10% per
// decade of the cap; otherwise INCONCLUSIVE.
inline scan_verdict scan_verdict_from(const std::vector<double>& caps,
                                      const std::vector<double>& norms) {
    if (norms.size() < 2) return scan_verdict::inconclusive;
    const double last = norms.back(), prev = norms[norms.size() - 2];
    if (last == 0) return scan_verdict::convergent;
    if (std::abs(last - prev) / last < 0.01) return scan_verdict::convergent;
    double growth = 0;
    for (std::size_t i = 0; i + 1 < norms.size(); ++i) {
        const double decades = std::log10(caps[i + 1] / caps[i]);
        growth = std::max(growth,
                          std::pow(norms[i + 1] / norms[i], 1.0 / decades) - 1.0);
    }
    return growth > 0.10 ? scan_verdict::divergent : scan_verdict::inconclusive;
}

inline membership_scan_result llog_membership_scan(const weight_ptr& w, double a,
                                                   const std::vector<double>& caps) {
    if (caps.empty())
        throw error(errc::invalid_parameter, "membership scan needs at least one cap");
    for (std::size_t i = 0; i + 1 < caps.size(); ++i)
        if (!(caps[i] < caps[i + 1]))
            throw error(errc::invalid_parameter, "caps must be strictly increasing");
    membership_scan_result out;
    out.caps = caps;
    for (double M : caps) {
        if (!(M > 0)) throw error(errc::invalid_parameter, "caps must be positive");
        out.norms.push_back(llog_norm(scan_sample(w, M), a).value);
    }
    out.verdict = scan_verdict_from(out.caps, out.norms);
    return out;
}

inline std::vector<double> default_scan_caps() {
    return {1e2, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8};
}

}  // namespace steklov
