#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "steklov/asymptotics.hpp"

using namespace steklov;
using Catch::Approx;

namespace {

spectral_result toy_result(std::vector<double> sigmas, int trusted) {
    spectral_result sr;
    sr.sigmas = std::move(sigmas);
    sr.trusted_count = trusted;
    sr.weight_id = "toy";
    sr.N = int(sr.sigmas.size() / 2);
    return sr;
}

}  // namespace

TEST_CASE("stability: trusted prefix of two spectra") {
    const auto rep = stability({0.0, 1.0, 1.0, 2.0}, {0.0, 1.0, 1.0, 2.0, 2.0});
    CHECK(rep.trusted_count == 4);
    REQUIRE(rep.rel_diffs.size() == 4);
    for (double d : rep.rel_diffs) CHECK(d == 0.0);

    // a break in the middle stops the prefix even if later entries agree
    const auto broken = stability({0.0, 1.0, 1.01, 2.0}, {0.0, 1.0, 1.0, 2.0});
    CHECK(broken.trusted_count == 2);
    CHECK(broken.rel_diffs[2] == Approx(0.01));

    // relative differences use max(1, |sigma_fine|)
    const auto small = stability({0.0, 2000.0}, {0.0, 2001.0});
    CHECK(small.trusted_count == 2);  // 1/2001 < 1e-3
    const auto big = stability({0.0, 2000.0}, {0.0, 2003.0});
    CHECK(big.trusted_count == 1);

    const auto disk8 = solve(assemble(constant_weight(1.0), 8, 1e-12));
    const auto disk16 = solve(assemble(constant_weight(1.0), 16, 1e-12));
    CHECK(stability(disk8, disk16).trusted_count == 17);

    auto other = disk16;
    other.weight_id = "something-else";
    CHECK_THROWS_AS(stability(disk8, other), error);
}

TEST_CASE("certified_solve marks the whole exact disk spectrum trusted") {
    const auto sr = certified_solve(constant_weight(1.0), 32, 1e-12);
    CHECK(sr.N == 32);
    REQUIRE(int(sr.sigmas.size()) == 65);
    CHECK(sr.trusted_count == 65);
    CHECK_THROWS_AS(certified_solve(constant_weight(1.0), 0), error);
}

TEST_CASE("counting: strict threshold count with the zero mode included") {
    const auto sr = toy_result({0.0, 1.0, 1.0, 2.0, 2.0}, 5);
    CHECK(counting(sr, 2.5) == 5);
    CHECK(counting(sr, 1.0) == 1);  // strict: the two eigenvalues at 1 excluded
    CHECK(counting(sr, 1.5) == 3);
    CHECK(counting(sr, 0.5) == 1);

    // partially trusted: thresholds up to the first untrusted eigenvalue
    const auto part = toy_result({0.0, 1.0, 1.0, 2.0, 2.0}, 3);
    CHECK(counting(part, 2.0) == 3);
    CHECK_THROWS_AS(counting(part, 2.1), error);
    try {
        counting(part, 2.1);
    } catch (const error& e) {
        CHECK(e.code() == errc::untrusted_range);
    }

    CHECK_THROWS_AS(counting(toy_result({0.0, 1.0}, -1), 0.5), error);
    CHECK_THROWS_AS(counting(toy_result({0.0, 1.0}, 0), 0.5), error);
}

TEST_CASE("counting increments match the jumps between two thresholds") {
    const auto sr = certified_solve(constant_weight(1.0), 12, 1e-12);
    int prev = counting(sr, 0.25);
    for (double s = 0.75; s <= 12.0; s += 0.5) {
        const int cur = counting(sr, s);
        int jumps = 0;
        for (double v : sr.sigmas)
            if (v >= s - 0.5 && v < s) ++jumps;
        CHECK(cur - prev == jumps);
        prev = cur;
    }
}

TEST_CASE("weyl slope of the disk over [5, 40] is 2 within 2 percent") {
    const auto sr = certified_solve(constant_weight(1.0), 64, 1e-10);
    const double perim = perimeter(constant_weight(1.0));
    const auto fit = weyl_slope(sr, perim, std::pair{5.0, 40.0});
    CHECK(fit.target == Approx(2.0).epsilon(1e-12));
    CHECK(fit.rel_error < 0.02);
    CHECK(fit.slope == Approx(2.0).epsilon(0.02));
    CHECK(fit.r2 > 0.999);
    CHECK(fit.window_lo == 5.0);
    CHECK(fit.window_hi == 40.0);

    // slope consistency on disjoint windows
    const auto lo = weyl_slope(sr, perim, std::pair{5.0, 25.0});
    const auto hi = weyl_slope(sr, perim, std::pair{30.0, 60.0});
    CHECK(std::abs(lo.slope - hi.slope) / hi.slope < 0.02);

    // default window also lands within 2%
    const auto dflt = weyl_slope(sr, perim);
    CHECK(dflt.rel_error < 0.02);
    CHECK(dflt.window_lo == Approx(5.0 * sr.sigmas[1]));
}

TEST_CASE("weyl slope error paths") {
    const auto sr = certified_solve(constant_weight(1.0), 16, 1e-10);
    const double perim = two_pi;
    CHECK_THROWS_AS(weyl_slope(sr, perim, std::pair{-1.0, 5.0}), error);
    CHECK_THROWS_AS(weyl_slope(sr, perim, std::pair{5.0, 5.0}), error);
    try {  // window reaching past the last trusted eigenvalue
        weyl_slope(sr, perim, std::pair{5.0, 20.0});
        FAIL("expected untrusted_range");
    } catch (const error& e) {
        CHECK(e.code() == errc::untrusted_range);
    }
    try {  // too few trusted eigenvalues inside a narrow window
        weyl_slope(sr, perim, std::pair{0.5, 1.5});
        FAIL("expected too_few_eigenvalues");
    } catch (const error& e) {
        CHECK(e.code() == errc::too_few_eigenvalues);
    }

    auto raw = solve(assemble(constant_weight(1.0), 16, 1e-10));
    CHECK(raw.trusted_count == -1);
    CHECK_THROWS_AS(weyl_slope(raw, perim, std::pair{1.0, 5.0}), error);

    // default window empty on a very short spectrum
    const auto tiny = certified_solve(constant_weight(1.0), 2, 1e-10);
    CHECK_THROWS_AS(weyl_slope(tiny, perim), error);
}

TEST_CASE("n_alpha diagnostic plateaus for alpha=1 and grows for alpha=2") {
    const auto sr = certified_solve(constant_weight(1.0), 64, 1e-10);
    std::vector<double> grid;
    for (int i = 0; i < 12; ++i) grid.push_back(0.017 + 0.002 * i);
    const auto vals = n_alpha_estimate(sr, 1.0, grid);
    REQUIRE(vals.size() == grid.size());
    for (const auto& [lam, v] : vals) {
        CHECK(lam > 0);
        CHECK(v == Approx(2.0).epsilon(0.05));
    }
    // alpha=2: lambda^2 n(lambda) ~ 2 lambda, doubling with lambda
    const auto g2 = n_alpha_estimate(sr, 2.0, {0.02, 0.04});
    CHECK(g2[1].second / g2[0].second == Approx(2.0).epsilon(0.15));

    CHECK_THROWS_AS(n_alpha_estimate(sr, 0.0, grid), error);
    auto raw = solve(assemble(constant_weight(1.0), 8, 1e-10));
    CHECK_THROWS_AS(n_alpha_estimate(raw, 1.0, grid), error);

    const auto dg = default_lambda_grid(sr, 40);
    REQUIRE(dg.size() == 40);
    for (double lam : dg) {
        CHECK(lam > 1.0 / sr.sigmas[sr.trusted_count - 1]);
        CHECK(lam < 1.0 / sr.sigmas[1]);
    }
    CHECK_THROWS_AS(default_lambda_grid(raw), error);
}

TEST_CASE("mobius pushforward leaves the fitted slope invariant") {
    const auto base = constant_weight(1.0);
    const auto moved = mobius_pushforward(std::make_shared<constant_weight>(1.0),
                                          {0.3, 0.0});
    const auto fit0 =
        weyl_slope(certified_solve(base, 64, 1e-10), perimeter(base));
    const auto fit1 =
        weyl_slope(certified_solve(*moved, 64, 1e-10), perimeter(*moved));
    CHECK(fit1.target == Approx(fit0.target).epsilon(1e-8));
    CHECK(std::abs(fit1.slope - fit0.slope) / fit0.target < 0.02);
}

TEST_CASE("cardioid spectrum: certification, fit, counting, and plateau") {
    const cardioid_weight w;
    const auto sr256 = solve(assemble(w, 256, 1e-10));
    auto sr512 = solve(assemble(w, 512, 1e-10));
    const auto sr1024 = solve(assemble(w, 1024, 1e-10));

    CHECK(stability(sr256, sr512).trusted_count >= 200);

    sr512.trusted_count = stability(sr512, sr1024).trusted_count;
    REQUIRE(sr512.trusted_count >= 400);

    const double perim = perimeter(w);
    CHECK(perim == Approx(16.0).epsilon(1e-12));

    const auto fit = weyl_slope(sr512, perim, std::pair{5.0, 100.0});
    CHECK(fit.target == Approx(16.0 / std::numbers::pi).epsilon(1e-12));
    CHECK(fit.rel_error < 0.05);

    const int n10 = counting(sr512, 10.0);
    CHECK(std::abs(double(n10) - 160.0 / std::numbers::pi) <= 3.0);

    std::vector<double> grid;
    for (int i = 0; i < 7; ++i) grid.push_back(0.02 + 0.005 * i);
    for (const auto& [lam, v] : n_alpha_estimate(sr512, 1.0, grid)) {
        (void)lam;
        CHECK(v == Approx(16.0 / std::numbers::pi).epsilon(0.05));
    }
}

TEST_CASE("capping a fast cusp harder pushes the first eigenvalue down") {
    const auto base = cusp_weight::fast(2.0);
    const auto lo = solve(assemble(capped_weight(base, 1e3), 32, 1e-10));
    const auto hi = solve(assemble(capped_weight(base, 1e6), 32, 1e-10));
    CHECK(hi.sigmas[1] < lo.sigmas[1]);
}
