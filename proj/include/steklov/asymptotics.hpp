#pragma once
// Spectral counting and Weyl-slope estimation. The counting function
// N(sigma) = #{ j >= 0 : sigma_j < sigma } of the weighted problem grows like
// (∫ beta / pi) * sigma; the fitted slope over a certified window is compared
// against that target. Certification: eigenvalues are trusted up to the
// largest prefix on which truncations N and 2N agree to 1e-3 relative.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "steklov/errors.hpp"
#include "steklov/solver.hpp"

namespace steklov {

inline constexpr double trusted_rel_tol = 1e-3;

struct stability_report {
    int trusted_count = 0;           // largest prefix with rel diff <= 1e-3
    std::vector<double> rel_diffs;   // per-index relative differences
};

// Core rule on two ascending spectra from a coarse and a fine truncation:
// rd_k = |sigma_k(fine) - sigma_k(coarse)| / max(1, |sigma_k(fine)|).
inline stability_report stability(const std::vector<double>& coarse,
                                  const std::vector<double>& fine) {
    stability_report rep;
    const std::size_t shared = std::min(coarse.size(), fine.size());
    rep.rel_diffs.resize(shared);
    bool prefix = true;
    for (std::size_t k = 0; k < shared; ++k) {
        rep.rel_diffs[k] = std::abs(coarse[k] - fine[k]) /
                           std::max(1.0, std::abs(fine[k]));
        if (prefix && rep.rel_diffs[k] <= trusted_rel_tol)
            rep.trusted_count = int(k) + 1;
        else
            prefix = false;
    }
    return rep;
}

inline stability_report stability(const spectral_result& coarse,
                                  const spectral_result& fine) {
    if (coarse.weight_id != fine.weight_id)
        throw error(errc::invalid_parameter,
                    "stability: results come from different weights ('" +
                        coarse.weight_id + "' vs '" + fine.weight_id + "')");
    return stability(coarse.sigmas, fine.sigmas);
}

// Solve at truncation N and at the doubled truncation 2N; the leading
// eigenvalues of the N run that the 2N run confirms are marked trusted, so
// the entire returned spectrum is certifiable when converged.
inline spectral_result certified_solve(const weight& w, int N,
                                       double quad_tol = 1e-10) {
    if (N < 1) throw error(errc::invalid_parameter, "certified_solve requires N >= 1");
    auto base = solve(assemble(w, N, quad_tol));
    const auto fine = solve(assemble(w, 2 * N, quad_tol));
    base.trusted_count = stability(base, fine).trusted_count;
    return base;
}

// Strict-inequality count including the zero mode. Requires a certified
// result; the threshold may range up to the first untrusted eigenvalue
// (every eigenvalue below it is trusted, so the count there is reliable),
// and is unrestricted when the whole computed spectrum is trusted.
inline int counting(const spectral_result& sr, double sigma) {
    if (sr.trusted_count < 1)
        throw error(errc::untrusted_range,
                    "counting requires a certified spectrum (run the stability "
                    "diagnostic first)");
    if (sr.trusted_count < int(sr.sigmas.size()) &&
        !(sigma <= sr.sigmas[sr.trusted_count]))
        throw error(errc::untrusted_range,
                    "counting threshold " + format_number(sigma) +
                        " exceeds the trusted range (first untrusted eigenvalue " +
                        format_number(sr.sigmas[sr.trusted_count]) + ")");
    return int(std::lower_bound(sr.sigmas.begin(), sr.sigmas.end(), sigma) -
               sr.sigmas.begin());
}

struct weyl_fit {
    double slope = 0;
    double intercept = 0;
    double r2 = 0;
    double window_lo = 0, window_hi = 0;
    double target = 0;     // perimeter / pi
    double rel_error = 0;  // |slope - target| / target
};

// Ordinary least squares of N(sigma) against sigma on an even grid inside the
// window. Default window [5*sigma_1, sigma at 90% of the trusted prefix].
inline weyl_fit weyl_slope(const spectral_result& sr, double perim,
                           std::optional<std::pair<double, double>> window = {},
                           int grid_points = 200) {
    if (sr.trusted_count < 2)
        throw error(errc::untrusted_range,
                    "weyl_slope requires a certified spectrum with at least two "
                    "trusted eigenvalues");
    const double last_trusted = sr.sigmas[sr.trusted_count - 1];
    double lo, hi;
    if (window) {
        lo = window->first;
        hi = window->second;
        if (!(lo >= 0 && lo < hi))
            throw error(errc::invalid_parameter,
                        "weyl_slope: window must satisfy 0 <= lo < hi");
        if (hi > last_trusted)
            throw error(errc::untrusted_range,
                        "weyl_slope: window upper edge " + format_number(hi) +
                            " exceeds the trusted range (last trusted eigenvalue " +
                            format_number(last_trusted) + ")");
    } else {
        lo = 5.0 * sr.sigmas[1];
        const int idx = std::min(int(0.9 * sr.trusted_count),
                                 int(sr.sigmas.size()) - 1);
        hi = sr.sigmas[idx];
        if (!(lo < hi))
            throw error(errc::too_few_eigenvalues,
                        "weyl_slope: default window is empty; spectrum too short");
    }
    const long in_window =
        std::count_if(sr.sigmas.begin(), sr.sigmas.begin() + sr.trusted_count,
                      [&](double s) { return s >= lo && s <= hi; });
    if (in_window < 30)
        throw error(errc::too_few_eigenvalues,
                    "weyl_slope: window [" + format_number(lo) + ", " +
                        format_number(hi) + "] contains only " +
                        std::to_string(in_window) +
                        " trusted eigenvalues (need at least 30)");

    grid_points = std::max(grid_points, 100);
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (int i = 0; i < grid_points; ++i) {
        const double x = lo + (hi - lo) * i / (grid_points - 1);
        const double y = double(
            std::lower_bound(sr.sigmas.begin(), sr.sigmas.end(), x) -
            sr.sigmas.begin());
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    const double n = grid_points;
    const double vxx = sxx - sx * sx / n;
    const double vxy = sxy - sx * sy / n;
    const double vyy = syy - sy * sy / n;

    weyl_fit fit;
    fit.window_lo = lo;
    fit.window_hi = hi;
    fit.slope = vxy / vxx;
    fit.intercept = (sy - fit.slope * sx) / n;
    fit.r2 = (vyy > 0) ? (vxy * vxy) / (vxx * vyy) : 1.0;
    fit.target = perim / std::numbers::pi;
    fit.rel_error = std::abs(fit.slope - fit.target) / fit.target;
    return fit;
}

// Diagnostic for the reciprocal counting function n(lambda) = #{ j >= 1
// trusted : 1/sigma_j > lambda }: returns (lambda, lambda^alpha * n(lambda)).
// For alpha = 1 the values plateau near perimeter/pi. The grid should lie in
// (1/sigma_max_trusted, 1/sigma_1).
inline std::vector<std::pair<double, double>> n_alpha_estimate(
    const spectral_result& sr, double alpha,
    const std::vector<double>& lambda_grid) {
    if (!(alpha > 0))
        throw error(errc::invalid_parameter, "n_alpha_estimate requires alpha > 0");
    if (sr.trusted_count < 2)
        throw error(errc::untrusted_range,
                    "n_alpha_estimate requires a certified spectrum");
    std::vector<double> recip;  // descending in lambda? build ascending sigmas -> 1/sigma descending
    recip.reserve(sr.trusted_count - 1);
    for (int j = 1; j < sr.trusted_count; ++j) recip.push_back(1.0 / sr.sigmas[j]);
    std::sort(recip.begin(), recip.end());  // ascending
    std::vector<std::pair<double, double>> out;
    out.reserve(lambda_grid.size());
    for (double lam : lambda_grid) {
        const auto it = std::upper_bound(recip.begin(), recip.end(), lam);
        const double count = double(recip.end() - it);  // strictly greater
        out.emplace_back(lam, std::pow(lam, alpha) * count);
    }
    return out;
}

// Even-spaced lambda grid strictly inside the diagnostic's admissible range.
inline std::vector<double> default_lambda_grid(const spectral_result& sr,
                                               int points = 50) {
    if (sr.trusted_count < 2)
        throw error(errc::untrusted_range,
                    "default_lambda_grid requires a certified spectrum");
    const double lo = 1.0 / sr.sigmas[sr.trusted_count - 1];
    const double hi = 1.0 / sr.sigmas[1];
    std::vector<double> grid(points);
    for (int i = 0; i < points; ++i)
        grid[i] = lo + (hi - lo) * (i + 1) / (points + 1);
    return grid;
}

}  // namespace steklov
