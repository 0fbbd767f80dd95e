#pragma once
// Dense symmetric linear algebra: Cholesky factorization, triangular solves,
// Householder tridiagonalization and implicit-shift QL with eigenvector
// accumulation. Deterministic sweep order throughout.

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "steklov/errors.hpp"

namespace steklov {

template <class T = double>
class matrix {
  public:
    matrix() : n_(0), m_(0) {}
    matrix(int n, int m, T v = T(0)) : n_(n), m_(m), a_(std::size_t(n) * m, v) {}

    T& operator()(int i, int j) { return a_[std::size_t(i) * m_ + j]; }
    const T& operator()(int i, int j) const { return a_[std::size_t(i) * m_ + j]; }

    int rows() const { return n_; }
    int cols() const { return m_; }

    std::vector<T>& data() { return a_; }
    const std::vector<T>& data() const { return a_; }

  private:
    int n_, m_;
    std::vector<T> a_;
};

template <class T>
inline std::vector<T> matvec(const matrix<T>& a, const std::vector<T>& x) {
    std::vector<T> y(a.rows(), T(0));
    for (int i = 0; i < a.rows(); ++i) {
        T s = 0;
        for (int j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

template <class T>
inline T frobenius_norm(const matrix<T>& a) {
    T s = 0;
    for (const T& v : a.data()) s += v * v;
    return std::sqrt(s);
}

// In-place lower Cholesky A = L L^T (upper triangle zeroed). Returns false on
// a nonpositive pivot, reporting it in `min_pivot`; on success `min_pivot` is
// the smallest squared diagonal entry of L encountered.
template <class T>
inline bool cholesky(matrix<T>& a, T& min_pivot) {
    const int n = a.rows();
    min_pivot = std::numeric_limits<T>::max();
    for (int j = 0; j < n; ++j) {
        T d = a(j, j);
        for (int k = 0; k < j; ++k) d -= a(j, k) * a(j, k);
        min_pivot = std::min(min_pivot, d);
        if (!(d > T(0))) return false;
        const T l = std::sqrt(d);
        a(j, j) = l;
        for (int i = j + 1; i < n; ++i) {
            T s = a(i, j);
            for (int k = 0; k < j; ++k) s -= a(i, k) * a(j, k);
            a(i, j) = s / l;
        }
        for (int i = 0; i < j; ++i) a(i, j) = T(0);
    }
    return true;
}

// Solve L x = b in place (L lower triangular).
template <class T>
inline void forward_solve(const matrix<T>& l, std::vector<T>& b) {
    const int n = l.rows();
    for (int i = 0; i < n; ++i) {
        T s = b[i];
        for (int k = 0; k < i; ++k) s -= l(i, k) * b[k];
        b[i] = s / l(i, i);
    }
}

// Solve L^T x = b in place (L lower triangular).
template <class T>
inline void backward_solve_t(const matrix<T>& l, std::vector<T>& b) {
    const int n = l.rows();
    for (int i = n - 1; i >= 0; --i) {
        T s = b[i];
        for (int k = i + 1; k < n; ++k) s -= l(k, i) * b[k];
        b[i] = s / l(i, i);
    }
}

namespace detail {

// Householder reduction of a real symmetric matrix to tridiagonal form.
// On exit `z` holds the accumulated orthogonal transformation, `d` the
// diagonal and `e` the subdiagonal (e[0] unused).
template <class T>
inline void tred2(matrix<T>& z, std::vector<T>& d, std::vector<T>& e) {
    const int n = z.rows();
    d.assign(n, T(0));
    e.assign(n, T(0));
    for (int i = n - 1; i > 0; --i) {
        const int l = i - 1;
        T h = 0, scale = 0;
        if (l > 0) {
            for (int k = 0; k <= l; ++k) scale += std::abs(z(i, k));
            if (scale == T(0)) {
                e[i] = z(i, l);
            } else {
                for (int k = 0; k <= l; ++k) {
                    z(i, k) /= scale;
                    h += z(i, k) * z(i, k);
                }
                T f = z(i, l);
                T g = (f >= T(0) ? -std::sqrt(h) : std::sqrt(h));
                e[i] = scale * g;
                h -= f * g;
                z(i, l) = f - g;
                f = 0;
                for (int j = 0; j <= l; ++j) {
                    z(j, i) = z(i, j) / h;
                    g = 0;
                    for (int k = 0; k <= j; ++k) g += z(j, k) * z(i, k);
                    for (int k = j + 1; k <= l; ++k) g += z(k, j) * z(i, k);
                    e[j] = g / h;
                    f += e[j] * z(i, j);
                }
                const T hh = f / (h + h);
                for (int j = 0; j <= l; ++j) {
                    f = z(i, j);
                    e[j] = g = e[j] - hh * f;
                    for (int k = 0; k <= j; ++k) z(j, k) -= f * e[k] + g * z(i, k);
                }
            }
        } else {
            e[i] = z(i, l);
        }
        d[i] = h;
    }
    d[0] = 0;
    e[0] = 0;
    for (int i = 0; i < n; ++i) {
        if (d[i] != T(0)) {
            for (int j = 0; j < i; ++j) {
                T g = 0;
                for (int k = 0; k < i; ++k) g += z(i, k) * z(k, j);
                for (int k = 0; k < i; ++k) z(k, j) -= g * z(k, i);
            }
        }
        d[i] = z(i, i);
        z(i, i) = T(1);
        for (int j = 0; j < i; ++j) z(j, i) = z(i, j) = T(0);
    }
}

// Implicit-shift QL on a symmetric tridiagonal matrix, rotations applied to
// the columns of `z`. Eigenvalues land in `d` (unsorted).
template <class T>
inline void tql2(std::vector<T>& d, std::vector<T>& e, matrix<T>& z) {
    const int n = int(d.size());
    const T eps = std::numeric_limits<T>::epsilon();
    for (int i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const T dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == 60)
                    throw error(errc::conditioning,
                                "symmetric QL iteration failed to converge");
                T g = (d[l + 1] - d[l]) / (2 * e[l]);
                T r = std::hypot(g, T(1));
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                T s = 1, c = 1, p = 0;
                int i = m - 1;
                for (; i >= l; --i) {
                    T f = s * e[i];
                    const T b = c * e[i];
                    e[i + 1] = r = std::hypot(f, g);
                    if (r == T(0)) {
                        d[i + 1] -= p;
                        e[m] = 0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    for (int k = 0; k < n; ++k) {
                        f = z(k, i + 1);
                        z(k, i + 1) = s * z(k, i) + c * f;
                        z(k, i) = c * z(k, i) - s * f;
                    }
                }
                if (r == T(0) && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0;
            }
        } while (m != l);
    }
}

}  // namespace detail

template <class T = double>
struct eig_result {
    std::vector<T> values;  // ascending
    matrix<T> vectors;      // column j pairs with values[j]
};

// Full eigendecomposition of a symmetric matrix (tridiagonalization followed
// by implicit-shift QL), eigenvalues ascending with matching eigenvectors.
template <class T>
inline eig_result<T> sym_eig(matrix<T> a) {
    const int n = a.rows();
    std::vector<T> d, e;
    detail::tred2(a, d, e);
    detail::tql2(d, e, a);
    // Stable selection sort, swapping eigenvector columns alongside.
    for (int i = 0; i < n - 1; ++i) {
        int k = i;
        for (int j = i + 1; j < n; ++j)
            if (d[j] < d[k]) k = j;
        if (k != i) {
            std::swap(d[i], d[k]);
            for (int r = 0; r < n; ++r) std::swap(a(r, i), a(r, k));
        }
    }
    return {std::move(d), std::move(a)};
}

}  // namespace steklov
