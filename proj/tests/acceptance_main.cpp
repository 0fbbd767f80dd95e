// Acceptance harness: nine end-to-end checks of the library's documented
// guarantees, each printing exactly one line
//
//     ACCEPTANCE <n> <PASS|FAIL> (<elapsed>s): <detail>
//
// Usage: steklov_acceptance [n]   — n in 1..9; no argument runs all nine.
// Exit code 0 iff every executed check passes. Checks that a guarantee is
// currently out of reach must fail loudly here rather than be weakened.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "steklov/steklov.hpp"

#include "oracles.hpp"
#include "properties.hpp"

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

struct outcome {
    bool pass = false;
    std::string detail;
};

// Exact disk spectrum: 0, 1, 1, 2, 2, ...
double disk_exact(int k) { return double((k + 1) / 2); }

// --- 1: unit-weight disk reproduces the integer spectrum ---------------------
outcome criterion_1() {
    const auto t0 = clock_type::now();
    const auto sr = steklov::solve(steklov::assemble(steklov::constant_weight(1.0), 64, 1e-10));
    double worst = 0;
    for (std::size_t k = 0; k < sr.sigmas.size(); ++k)
        worst = std::max(worst, std::abs(sr.sigmas[k] - disk_exact(int(k))));
    const double el = seconds_since(t0);
    outcome o;
    o.pass = worst <= 1e-9 && el < 5.0;
    o.detail = fmt("max |sigma_k - round(k/2)| = %.2e over %zu eigenvalues "
                   "(bound 1e-9), solve time %.2fs (bound 5s)",
                   worst, sr.sigmas.size(), el);
    return o;
}

// --- 2: disk-automorphism pushforwards are isospectral to the disk -----------
outcome criterion_2() {
    const auto t0 = clock_type::now();
    const std::complex<double> as[] = {{0.3, 0.0}, {0.5, 0.2}, {0.7, 0.0}};
    outcome o;
    o.pass = true;
    for (const auto& a : as) {
        const auto w = steklov::mobius_pushforward(
            std::make_shared<steklov::constant_weight>(1.0), a);
        const auto sr = steklov::solve(steklov::assemble(*w, 128, 1e-10));
        double dev = 0;
        for (int k = 0; k < 60; ++k)
            dev = std::max(dev, std::abs(sr.sigmas[k] - disk_exact(k)));
        const bool leg = dev <= 1e-6;
        o.pass = o.pass && leg;
        o.detail += fmt("%sa=(%g,%g): max dev %.2e%s", o.detail.empty() ? "" : "; ",
                        a.real(), a.imag(), dev, leg ? "" : " EXCEEDS 1e-6");
    }
    const double el = seconds_since(t0);
    if (el >= 60.0) o.pass = false;
    o.detail += fmt("; total %.1fs (bound 60s)", el);
    return o;
}

// --- 3: counting slope for corner weights matches mass/pi within 5% ----------
outcome criterion_3() {
    outcome o;
    o.pass = true;
    for (int n : {3, 4, 6}) {
        const auto t0 = clock_type::now();
        std::string leg;
        bool leg_pass = false;
        try {
            const auto sr = steklov::certified_solve(steklov::ngon_weight(n), 512, 1e-10);
            const auto fit = steklov::weyl_slope(sr, oracle::ngon_perimeter(n));
            const double el = seconds_since(t0);
            leg_pass = fit.rel_error <= 0.05 && el < 600.0;
            leg = fmt("n=%d: slope %.6f vs target %.6f (rel %.2e, trusted %d, %.0fs)%s",
                      n, fit.slope, fit.target, fit.rel_error, sr.trusted_count, el,
                      leg_pass ? "" : " EXCEEDS BOUNDS");
        } catch (const steklov::error& e) {
            leg = fmt("n=%d: %s after %.0fs: %s", n, e.code_name(),
                      seconds_since(t0), e.what());
        }
        o.pass = o.pass && leg_pass;
        o.detail += (o.detail.empty() ? "" : " | ") + leg;
    }
    return o;
}

// --- 4: smooth-map example with slope error decreasing in N ------------------
outcome criterion_4() {
    const steklov::cardioid_weight w;
    const double p = steklov::perimeter(w);
    const bool perim_ok = std::abs(p - 16.0) <= 1e-8;

    const auto sr512 = steklov::certified_solve(w, 512, 1e-10);
    const auto fit512 = steklov::weyl_slope(sr512, 16.0);
    const auto sr128 = steklov::certified_solve(w, 128, 1e-10);
    const auto fit128 = steklov::weyl_slope(sr128, 16.0);

    outcome o;
    o.pass = perim_ok && fit512.rel_error <= 0.05 &&
             fit512.rel_error <= fit128.rel_error;
    o.detail = fmt("perimeter %.12f (target 16), slope rel error %.3e at N=512 "
                   "(bound 5%%) vs %.3e at N=128 (must not increase)",
                   p, fit512.rel_error, fit128.rel_error);
    return o;
}

// --- 5: slow-cusp weight keeps the law within 7% and passes the gate ---------
outcome criterion_5() {
    const auto w = steklov::cusp_weight::slow(0.5);
    // independently frozen adaptive-Simpson value of the total mass
    const double perim_oracle = 4.060719250146003;
    const double p = steklov::perimeter(*w);
    const bool perim_ok = std::abs(p - perim_oracle) <= 1e-9;

    const auto sr = steklov::certified_solve(*w, 512, 1e-10);
    const auto fit = steklov::weyl_slope(sr, perim_oracle);
    const auto scan =
        steklov::llog_membership_scan(w, 1.0, steklov::default_scan_caps());
    const bool scan_ok = scan.verdict == steklov::scan_verdict::convergent;

    outcome o;
    o.pass = perim_ok && fit.rel_error <= 0.07 && scan_ok;
    o.detail = fmt("slope rel error %.3e (bound 7%%), trusted %d, perimeter agrees "
                   "with frozen oracle to %.1e, membership scan %s",
                   fit.rel_error, sr.trusted_count, std::abs(p - perim_oracle),
                   steklov::to_string(scan.verdict));
    return o;
}

// --- 6: membership-scan dichotomy across cusp families -----------------------
outcome criterion_6() {
    const auto t0 = clock_type::now();
    outcome o;
    o.pass = true;
    const auto caps = steklov::default_scan_caps();
    for (double alpha : {0.25, 0.5, 0.75}) {
        const auto scan =
            steklov::llog_membership_scan(steklov::cusp_weight::slow(alpha), 1.0, caps);
        const bool ok = scan.verdict == steklov::scan_verdict::convergent;
        o.pass = o.pass && ok;
        o.detail += fmt("%sslow(%.2f)=%s", o.detail.empty() ? "" : ", ", alpha,
                        steklov::to_string(scan.verdict));
    }
    for (double alpha : {1.0, 2.0}) {
        const auto scan =
            steklov::llog_membership_scan(steklov::cusp_weight::fast(alpha), 1.0, caps);
        const bool ok = scan.verdict == steklov::scan_verdict::divergent;
        o.pass = o.pass && ok;
        o.detail += fmt(", fast(%.0f)=%s", alpha, steklov::to_string(scan.verdict));
    }
    const double el = seconds_since(t0);
    if (el >= 30.0) o.pass = false;
    o.detail += fmt("; %.1fs (bound 30s)", el);
    return o;
}

// --- 7: two-sided law for a sign-changing weight ------------------------------
outcome criterion_7() {
    // beta = 1 + 2 cos(theta): cosine integrals C_0 = C_1 = 2*pi, all else 0
    const auto make_sys = [](int N) {
        std::vector<double> C(2 * N + 1, 0.0), S(2 * N + 1, 0.0);
        C[0] = steklov::two_pi;
        C[1] = steklov::two_pi;
        return steklov::assemble_from_coeffs(C, S, N, "shifted-cosine", 1e-12);
    };
    auto fine = steklov::solve_indefinite(make_sys(512));
    const auto check = steklov::solve_indefinite(make_sys(1024));
    fine.trusted_pos =
        steklov::stability(fine.sigmas_pos, check.sigmas_pos).trusted_count;
    fine.trusted_neg =
        steklov::stability(fine.sigmas_neg, check.sigmas_neg).trusted_count;

    // branch masses of (1 + 2 cos)_± in closed form
    const double mass_pos = 4.0 * std::numbers::pi / 3.0 + 2.0 * std::sqrt(3.0);
    const double mass_neg = mass_pos - 2.0 * std::numbers::pi;

    steklov::spectral_result pos;
    pos.sigmas = fine.sigmas_pos;
    pos.trusted_count = fine.trusted_pos;
    steklov::spectral_result neg;
    for (double s : fine.sigmas_neg) neg.sigmas.push_back(-s);
    neg.trusted_count = fine.trusted_neg;

    const auto fit_pos = steklov::weyl_slope(pos, mass_pos);
    const auto fit_neg = steklov::weyl_slope(neg, mass_neg);

    outcome o;
    o.pass = fit_pos.rel_error <= 0.05 && fit_neg.rel_error <= 0.05;
    o.detail = fmt("positive branch slope %.5f vs %.5f (rel %.2e), negative "
                   "branch %.5f vs %.5f (rel %.2e), kernel modes %d",
                   fit_pos.slope, fit_pos.target, fit_pos.rel_error, fit_neg.slope,
                   fit_neg.target, fit_neg.rel_error, fine.kernel_modes);
    return o;
}

// --- 8: randomized property suites, zero tolerated failures ------------------
outcome criterion_8() {
    const std::uint64_t seed = 20260816ull;
    const int instances = 200;
    outcome o;
    o.pass = true;
    for (const auto& s : props::all_suites()) {
        const auto r = s.run(seed, instances);
        const bool ok = r.failures == 0 && r.instances >= instances;
        o.pass = o.pass && ok;
        o.detail += fmt("%s%s: %d/%d", o.detail.empty() ? "" : ", ", s.name,
                        r.instances - r.failures, r.instances);
        if (!ok && !r.first_failure.empty())
            o.detail += fmt(" (first: %s)", r.first_failure.c_str());
    }
    return o;
}

// --- 9: agreement with a methodologically independent dense solve ------------
outcome criterion_9() {
    oracle::rng64 rng(0x9c7e5ad1u);
    const int N = 8, dim = 2 * N + 1, segments = 64;

    std::vector<double> a_diag(dim, 0.0);
    for (int k = 1; k <= N; ++k)
        a_diag[2 * k - 1] = a_diag[2 * k] = std::numbers::pi * k;

    const auto basis = [](int i, double th) {
        if (i == 0) return 1.0;
        const int k = (i + 1) / 2;
        return (i % 2 == 1) ? std::cos(k * th) : std::sin(k * th);
    };

    double worst = 0;
    for (int inst = 0; inst < 25; ++inst) {
        std::vector<double> nodes(segments + 1), values(segments + 1);
        for (int j = 0; j <= segments; ++j)
            nodes[j] = steklov::two_pi * j / segments;
        for (int j = 0; j < segments; ++j) values[j] = rng.uniform(0.2, 3.0);
        values[segments] = values[0];
        const steklov::tabulated_weight w(nodes, values, false, "random-pl");

        // library route: graded Gauss panels, product-to-sum assembly,
        // Cholesky deflation, Householder + implicit QL
        const auto lib = steklov::solve(steklov::assemble(w, N, 1e-12)).sigmas;

        // oracle route: per-segment adaptive Simpson entries, cyclic-Jacobi
        // congruence pencil solve
        steklov::matrix<double> b(dim, dim, 0.0);
        for (int i = 0; i < dim; ++i)
            for (int j = i; j < dim; ++j) {
                double acc = 0;
                for (int s = 0; s < segments; ++s)
                    acc += oracle::adaptive_simpson(
                        [&](double th) {
                            return w.eval(th) * basis(i, th) * basis(j, th);
                        },
                        nodes[s], nodes[s + 1], 1e-12);
                b(i, j) = b(j, i) = acc;
            }
        const auto orc = oracle::jacobi_pencil(a_diag, b);

        for (int k = 0; k < dim; ++k)
            worst = std::max(worst, std::abs(lib[k] - orc[k]));
    }

    outcome o;
    o.pass = worst <= 1e-7;
    o.detail = fmt("25 random 64-node piecewise-linear weights at N=%d: max "
                   "eigenvalue deviation %.2e (bound 1e-7)",
                   N, worst);
    return o;
}

outcome run_criterion(int k) {
    switch (k) {
        case 1: return criterion_1();
        case 2: return criterion_2();
        case 3: return criterion_3();
        case 4: return criterion_4();
        case 5: return criterion_5();
        case 6: return criterion_6();
        case 7: return criterion_7();
        case 8: return criterion_8();
        case 9: return criterion_9();
    }
    return {false, "unknown criterion"};
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> which;
    if (argc > 1) {
        const int k = std::atoi(argv[1]);
        if (k < 1 || k > 9 || argc > 2) {
            std::fprintf(stderr, "usage: %s [criterion 1..9]\n", argv[0]);
            return 2;
        }
        which.push_back(k);
    } else {
        for (int k = 1; k <= 9; ++k) which.push_back(k);
    }

    bool all_pass = true;
    for (int k : which) {
        const auto t0 = clock_type::now();
        outcome o;
        try {
            o = run_criterion(k);
        } catch (const steklov::error& e) {
            o.pass = false;
            o.detail = fmt("%s: %s", e.code_name(), e.what());
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = fmt("unexpected exception: %s", e.what());
        }
        std::printf("ACCEPTANCE %d %s (%.1fs): %s\n", k, o.pass ? "PASS" : "FAIL",
                    seconds_since(t0), o.detail.c_str());
        std::fflush(stdout);
        all_pass = all_pass && o.pass;
    }
    return all_pass ? 0 : 1;
}
