#pragma once
// Gauss-Legendre rules on [-1, 1], computed once by Newton iteration on the
// Legendre polynomial (deterministic; accurate to ~1 ulp).

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

namespace steklov {

template <class T = double>
struct gl_rule {
    std::vector<T> x;  // nodes, ascending
    std::vector<T> w;  // weights, positive, summing to 2
};

// Legendre P_n(x) and P_n'(x) by the three-term recurrence.
template <class T>
inline std::pair<T, T> legendre_pd(int n, T x) {
    T p0 = 1, p1 = x;
    for (int k = 2; k <= n; ++k) {
        T p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    T d = n * (x * p1 - p0) / (x * x - 1);
    return {p1, d};
}

template <class T = double>
inline gl_rule<T> gauss_legendre(int n) {
    gl_rule<T> r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < n; ++i) {
        // Chebyshev-based initial guess for the i-th root (descending), then Newton.
        T x = std::cos(std::numbers::pi_v<T> * (i + T(0.75)) / (n + T(0.5)));
        for (int it = 0; it < 64; ++it) {
            auto [p, d] = legendre_pd(n, x);
            T dx = p / d;
            x -= dx;
            if (std::abs(dx) < 4 * std::numeric_limits<T>::epsilon()) break;
        }
        auto [p, d] = legendre_pd(n, x);
        (void)p;
        r.x[i] = x;
        r.w[i] = 2 / ((1 - x * x) * d * d);
    }
    return r;
}

// The fixed 16-point rule used by the panel quadrature.
inline const gl_rule<double>& gl16() {
    static const gl_rule<double> rule = gauss_legendre<double>(16);
    return rule;
}

}  // namespace steklov
