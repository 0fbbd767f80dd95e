#pragma once
// Fourier-Galerkin discretization of the weighted Steklov problem on the unit
// disk. Trial space: trigonometric polynomials {1, cos k th, sin k th}, k <= N.
// Stiffness A = Dirichlet energies of the harmonic extensions r^k cos/sin
// (exactly diag(0, pi, pi, 2pi, 2pi, ...)); mass B = boundary Gram matrix in
// the beta-weighted inner product, assembled from the Fourier coefficients of
// beta via product-to-sum identities.
//
// Solve routes (cross-checked by the test suite):
//  * solve            — constants deflated exactly (rank-1 B-Schur complement,
//                       which preserves the nonzero pencil spectrum), Cholesky
//                       of the reduced mass, dense symmetric eigensolve of
//                       L^-1 A~ L^-T, exact sigma_0 = 0 prepended;
//  * solve_qbeta      — reduction by the diagonal stiffness instead:
//                       M = A~^{-1/2} B~ A~^{-1/2}, sigma = 1/mu;
//  * solve_pencil_full— no deflation, Cholesky of the full mass matrix;
//  * solve_indefinite — reversed pencil B c = mu A c on the deflated subspace,
//                       sign-changing weights allowed; sigma^± = 1/mu^±.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "steklov/errors.hpp"
#include "steklov/linalg.hpp"
#include "steklov/quadrature.hpp"
#include "steklov/weights.hpp"

namespace steklov {

struct galerkin_system {
    int N = 0;
    std::vector<double> stiffness;  // diagonal entries, size 2N+1
    matrix<double> mass;            // symmetric, size (2N+1)^2
    std::string weight_id;
    double quad_tol = 0;
};

// Assemble from cosine/sine integrals C_m = ∫ beta cos(m th) dth and
// S_m = ∫ beta sin(m th) dth for m = 0..2N (exact product-to-sum identities).
inline galerkin_system assemble_from_coeffs(const std::vector<double>& C,
                                            const std::vector<double>& S, int N,
                                            std::string weight_id, double quad_tol) {
    if (N < 1) throw error(errc::invalid_parameter, "assemble requires N >= 1");
    if (int(C.size()) < 2 * N + 1 || int(S.size()) < 2 * N + 1)
        throw error(errc::invalid_parameter,
                    "assemble_from_coeffs needs C, S up to order 2N");
    const int dim = 2 * N + 1;
    galerkin_system sys;
    sys.N = N;
    sys.weight_id = std::move(weight_id);
    sys.quad_tol = quad_tol;
    sys.stiffness.assign(dim, 0.0);
    sys.mass = matrix<double>(dim, dim, 0.0);
    auto& B = sys.mass;
    B(0, 0) = C[0];
    for (int k = 1; k <= N; ++k) {
        sys.stiffness[2 * k - 1] = sys.stiffness[2 * k] = std::numbers::pi * k;
        B(0, 2 * k - 1) = B(2 * k - 1, 0) = C[k];
        B(0, 2 * k) = B(2 * k, 0) = S[k];
    }
    for (int k = 1; k <= N; ++k) {
        for (int l = 1; l <= N; ++l) {
            B(2 * k - 1, 2 * l - 1) = (C[std::abs(k - l)] + C[k + l]) / 2;
            B(2 * k, 2 * l) = (C[std::abs(k - l)] - C[k + l]) / 2;
            // signed S_{k-l}: integrals of cos*sin products
            const double sd = (k >= l) ? S[k - l] : -S[l - k];
            B(2 * k - 1, 2 * l) = (S[k + l] - sd) / 2;
            B(2 * k, 2 * l - 1) = (S[k + l] + sd) / 2;
        }
    }
    return sys;
}

inline galerkin_system assemble(const weight& w, int N, double quad_tol = 1e-10) {
    const auto fc = fourier_coeffs(w, 2 * N, quad_tol);
    std::vector<double> C(2 * N + 1), S(2 * N + 1);
    for (int m = 0; m <= 2 * N; ++m) {
        C[m] = two_pi * fc.coeffs[m].real();
        S[m] = -two_pi * fc.coeffs[m].imag();
    }
    return assemble_from_coeffs(C, S, N, w.descriptor(), quad_tol);
}

struct spectral_result {
    std::vector<double> sigmas;  // ascending
    int N = 0;
    std::string weight_id;
    std::vector<double> residuals;  // per-pair relative backward error
    int trusted_count = -1;         // set by the stability diagnostic; -1 = unset
};

struct signed_spectral_result {
    std::vector<double> sigmas_pos;  // positive, ascending
    std::vector<double> sigmas_neg;  // negative, sorted by |sigma| ascending
    int kernel_modes = 0;            // reversed-pencil modes with mu ~ 0
    int N = 0;
    std::string weight_id;
    std::vector<double> residuals_pos, residuals_neg;
    int trusted_pos = -1, trusted_neg = -1;
};

// Constant-deflated system. For |B00| above the degeneracy threshold this is
// the exact rank-1 Schur complement (projecting out the B-direction of the
// constant mode); the nonzero spectrum of the full pencil is preserved
// exactly. Otherwise (sign-changing weights with ∫beta ~ 0) the mass block is
// kept plain and the constraint B01 y = 0 is handled by the indefinite solve.
struct reduced_system {
    int N = 0;
    std::vector<double> stiffness;  // diagonal, size 2N, positive
    matrix<double> mass;
    double b00 = 0;
    std::vector<double> b0;  // coupling row B(0, 1..2N)
    bool schur = false;
    std::string weight_id;
};

inline reduced_system deflate_constants(const galerkin_system& sys) {
    const int n = 2 * sys.N;
    reduced_system red;
    red.N = sys.N;
    red.weight_id = sys.weight_id;
    red.b00 = sys.mass(0, 0);
    red.b0.resize(n);
    for (int i = 0; i < n; ++i) red.b0[i] = sys.mass(0, i + 1);
    red.stiffness.assign(sys.stiffness.begin() + 1, sys.stiffness.end());
    double diag_scale = 0;
    for (int i = 0; i <= n; ++i) diag_scale += std::abs(sys.mass(i, i));
    diag_scale /= (n + 1);
    red.schur = std::abs(red.b00) > 1e-10 * diag_scale;
    red.mass = matrix<double>(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            red.mass(i, j) = sys.mass(i + 1, j + 1) -
                             (red.schur ? red.b0[i] * red.b0[j] / red.b00 : 0.0);
    return red;
}

namespace detail {

// Relative backward errors ||A c - sigma B c|| / (||A||_2 + |sigma| ||B||_F)
// for eigenvectors given as full-dimension columns.
inline std::vector<double> pencil_residuals(const galerkin_system& sys,
                                            const std::vector<double>& sigmas,
                                            const matrix<double>& vecs) {
    const int dim = 2 * sys.N + 1;
    const double normA = std::numbers::pi * sys.N;
    const double normB = frobenius_norm(sys.mass);
    std::vector<double> res(sigmas.size(), 0.0);
    // R = B * vecs, one column per eigenpair
    matrix<double> R(dim, int(sigmas.size()), 0.0);
    for (int i = 0; i < dim; ++i)
        for (int k = 0; k < dim; ++k) {
            const double bik = sys.mass(i, k);
            if (bik == 0.0) continue;
            for (std::size_t j = 0; j < sigmas.size(); ++j)
                R(i, int(j)) += bik * vecs(k, int(j));
        }
    for (std::size_t j = 0; j < sigmas.size(); ++j) {
        double nrm2 = 0, rr = 0;
        for (int i = 0; i < dim; ++i) {
            const double ci = vecs(i, int(j));
            nrm2 += ci * ci;
            const double r = sys.stiffness[i] * ci - sigmas[j] * R(i, int(j));
            rr += r * r;
        }
        res[j] = std::sqrt(rr / std::max(nrm2, 1e-300)) /
                 (normA + std::abs(sigmas[j]) * normB);
    }
    return res;
}

// Degeneracy gate: factorization must succeed and the smallest Schur pivot
// must clear 1e-12 * trace / dim — weights vanishing on arcs drive both the
// smallest eigenvalue and the pivots of the mass matrix below that floor.
inline void require_posdef(bool ok, double min_pivot, double trace, int dim,
                           const char* what) {
    if (!ok || !(min_pivot > 1e-12 * trace / dim))
        throw error(errc::degenerate_weight,
                    std::string(what) + ": mass matrix is numerically singular "
                    "(pivot " + format_number(min_pivot) + ", floor " +
                    format_number(1e-12 * trace / dim) +
                    "); the weight is degenerate at this truncation");
}

inline double trace_of(const matrix<double>& m) {
    double t = 0;
    for (int i = 0; i < m.rows(); ++i) t += m(i, i);
    return t;
}

// Embed deflated eigenvectors (columns ys) into full coordinates, recovering
// the constant component from the deflation relation c0 = -(b0 . y)/b00.
inline matrix<double> embed_full(const reduced_system& red,
                                 const matrix<double>& ys) {
    const int n = red.mass.rows();
    matrix<double> full(n + 1, ys.cols() + 1, 0.0);
    full(0, 0) = 1.0;  // exact zero mode: the constant
    for (int j = 0; j < ys.cols(); ++j) {
        double dot = 0;
        for (int i = 0; i < n; ++i) dot += red.b0[i] * ys(i, j);
        full(0, j + 1) = -dot / red.b00;
        for (int i = 0; i < n; ++i) full(i + 1, j + 1) = ys(i, j);
    }
    return full;
}

}  // namespace detail

// Primary route: exact constant deflation, Cholesky factor of the reduced
// mass, dense symmetric eigensolve of W W^T with W = L^-1 diag(sqrt(A~)).
inline spectral_result solve(const galerkin_system& sys) {
    reduced_system red = deflate_constants(sys);
    if (!red.schur)
        throw error(errc::degenerate_weight,
                    "weight has vanishing total mass; use solve_indefinite");
    const int n = red.mass.rows();
    matrix<double> L = red.mass;
    const double tr = detail::trace_of(L);
    double min_pivot = 0;
    const bool posdef = cholesky(L, min_pivot);
    detail::require_posdef(posdef, min_pivot, tr, n, "solve");

    // W = L^-1 diag(sqrt(A~)), lower triangular, column by column.
    matrix<double> W(n, n, 0.0);
    std::vector<double> col(n);
    for (int j = 0; j < n; ++j) {
        std::fill(col.begin(), col.end(), 0.0);
        col[j] = std::sqrt(red.stiffness[j]);
        for (int i = j; i < n; ++i) {
            double s = col[i];
            for (int k = j; k < i; ++k) s -= L(i, k) * col[k];
            col[i] = s / L(i, i);
        }
        for (int i = j; i < n; ++i) W(i, j) = col[i];
    }
    matrix<double> Cm(n, n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) {
            double s = 0;
            for (int k = 0; k <= std::min(i, j); ++k) s += W(i, k) * W(j, k);
            Cm(i, j) = Cm(j, i) = s;
        }
    auto eig = sym_eig(std::move(Cm));

    // Back-transform eigenvectors: y = L^-T x.
    matrix<double> ys(n, n, 0.0);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) col[i] = eig.vectors(i, j);
        backward_solve_t(L, col);
        for (int i = 0; i < n; ++i) ys(i, j) = col[i];
    }

    spectral_result out;
    out.N = sys.N;
    out.weight_id = sys.weight_id;
    out.sigmas.reserve(n + 1);
    out.sigmas.push_back(0.0);
    for (double v : eig.values) out.sigmas.push_back(v);
    const auto full = detail::embed_full(red, ys);
    out.residuals = detail::pencil_residuals(sys, out.sigmas, full);
    return out;
}

// Stiffness-whitened cross-check route: M = A~^{-1/2} B~ A~^{-1/2}, whose
// eigenvalues are mu = 1/sigma; exact sigma_0 = 0 prepended.
inline spectral_result solve_qbeta(const galerkin_system& sys) {
    reduced_system red = deflate_constants(sys);
    if (!red.schur)
        throw error(errc::degenerate_weight,
                    "weight has vanishing total mass; use solve_indefinite");
    const int n = red.mass.rows();
    std::vector<double> dinv(n);
    for (int i = 0; i < n; ++i) dinv[i] = 1.0 / std::sqrt(red.stiffness[i]);
    matrix<double> M(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) M(i, j) = dinv[i] * red.mass(i, j) * dinv[j];
    const double tr = detail::trace_of(M);
    auto eig = sym_eig(std::move(M));
    if (!(eig.values.front() > 1e-12 * tr / n))
        throw error(errc::degenerate_weight,
                    "solve_qbeta: reduced mass operator is numerically singular "
                    "(min eigenvalue " + format_number(eig.values.front()) + ")");

    spectral_result out;
    out.N = sys.N;
    out.weight_id = sys.weight_id;
    out.sigmas.reserve(n + 1);
    out.sigmas.push_back(0.0);
    matrix<double> ys(n, n, 0.0);
    for (int j = n - 1; j >= 0; --j) {  // mu descending -> sigma ascending
        out.sigmas.push_back(1.0 / eig.values[j]);
        const int col = n - 1 - j;
        for (int i = 0; i < n; ++i) ys(i, col) = dinv[i] * eig.vectors(i, j);
    }
    const auto full = detail::embed_full(red, ys);
    out.residuals = detail::pencil_residuals(sys, out.sigmas, full);
    return out;
}

// Undeflated cross-check: Cholesky of the full mass matrix; the zero mode
// comes out as a numerically tiny eigenvalue rather than an exact zero.
inline spectral_result solve_pencil_full(const galerkin_system& sys) {
    const int dim = 2 * sys.N + 1;
    matrix<double> L = sys.mass;
    const double tr = detail::trace_of(L);
    double min_pivot = 0;
    const bool posdef = cholesky(L, min_pivot);
    detail::require_posdef(posdef, min_pivot, tr, dim, "solve_pencil_full");
    matrix<double> W(dim, dim, 0.0);
    std::vector<double> col(dim);
    for (int j = 0; j < dim; ++j) {
        std::fill(col.begin(), col.end(), 0.0);
        col[j] = std::sqrt(sys.stiffness[j]);
        for (int i = j; i < dim; ++i) {
            double s = col[i];
            for (int k = j; k < i; ++k) s -= L(i, k) * col[k];
            col[i] = s / L(i, i);
        }
        for (int i = j; i < dim; ++i) W(i, j) = col[i];
    }
    matrix<double> Cm(dim, dim, 0.0);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j <= i; ++j) {
            double s = 0;
            for (int k = 0; k <= std::min(i, j); ++k) s += W(i, k) * W(j, k);
            Cm(i, j) = Cm(j, i) = s;
        }
    auto eig = sym_eig(std::move(Cm));
    matrix<double> cs(dim, dim, 0.0);
    for (int j = 0; j < dim; ++j) {
        for (int i = 0; i < dim; ++i) col[i] = eig.vectors(i, j);
        backward_solve_t(L, col);
        for (int i = 0; i < dim; ++i) cs(i, j) = col[i];
    }
    spectral_result out;
    out.N = sys.N;
    out.weight_id = sys.weight_id;
    out.sigmas = std::move(eig.values);
    out.residuals = detail::pencil_residuals(sys, out.sigmas, cs);
    return out;
}

// Reversed pencil B c = mu A c on the constant-deflated subspace; works for
// sign-changing weights. sigma^± = 1/mu^±; |mu| below the kernel tolerance is
// reported as spectral-kernel modes, not eigenvalues.
inline signed_spectral_result solve_indefinite(const galerkin_system& sys) {
    reduced_system red = deflate_constants(sys);
    const int n = red.mass.rows();
    std::vector<double> dinv(n);
    for (int i = 0; i < n; ++i) dinv[i] = 1.0 / std::sqrt(red.stiffness[i]);

    matrix<double> M(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) M(i, j) = dinv[i] * red.mass(i, j) * dinv[j];

    std::vector<double> q(n, 0.0);
    double qq = 0;
    matrix<double> M1;  // pre-projection operator, needed to recover c0
    if (!red.schur) {
        // Constrained reduction for ∫beta ~ 0: restrict M1 to the complement
        // of q = A~^{-1/2} B10 (the multiplier c0 absorbs the q-component);
        // the artificial zero mode on span{q} joins the kernel count.
        for (int i = 0; i < n; ++i) {
            q[i] = dinv[i] * red.b0[i];
            qq += q[i] * q[i];
        }
        if (qq > 0) {
            M1 = M;
            matrix<double> P(n, n, 0.0);
            for (int i = 0; i < n; ++i) {
                P(i, i) = 1.0;
                for (int j = 0; j < n; ++j) P(i, j) -= q[i] * q[j] / qq;
            }
            // M <- P M P
            matrix<double> T(n, n, 0.0);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double s = 0;
                    for (int k = 0; k < n; ++k) s += P(i, k) * M(k, j);
                    T(i, j) = s;
                }
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double s = 0;
                    for (int k = 0; k < n; ++k) s += T(i, k) * P(k, j);
                    M(i, j) = s;
                }
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < i; ++j) {
                    const double sym = (M(i, j) + M(j, i)) / 2;
                    M(i, j) = M(j, i) = sym;
                }
        }
    }

    auto eig = sym_eig(std::move(M));
    double mu_max = 0;
    for (double m : eig.values) mu_max = std::max(mu_max, std::abs(m));
    const double ktol = 1e-12 * std::max(1.0, mu_max);

    signed_spectral_result out;
    out.N = sys.N;
    out.weight_id = sys.weight_id;

    const double normA = std::numbers::pi * sys.N;
    const double normB = frobenius_norm(sys.mass);
    const int dim = 2 * sys.N + 1;
    std::vector<double> c(dim), Bc(dim);

    struct entry {
        double sigma, res;
    };
    std::vector<entry> pos, neg;
    for (int j = 0; j < n; ++j) {
        const double mu = eig.values[j];
        if (std::abs(mu) <= ktol) {
            ++out.kernel_modes;
            continue;
        }
        // full eigenvector: y = A~^{-1/2} z; c0 from the deflation relation
        double c0;
        if (red.schur) {
            double dot = 0;
            for (int i = 0; i < n; ++i) dot += red.b0[i] * dinv[i] * eig.vectors(i, j);
            c0 = -dot / red.b00;
        } else if (qq > 0) {
            double dot = 0;
            for (int i = 0; i < n; ++i) {
                double mz = 0;
                for (int k = 0; k < n; ++k) mz += M1(i, k) * eig.vectors(k, j);
                dot += q[i] * mz;
            }
            c0 = -dot / qq;
        } else {
            c0 = 0;
        }
        c[0] = c0;
        for (int i = 0; i < n; ++i) c[i + 1] = dinv[i] * eig.vectors(i, j);
        // residual of the reversed pencil: ||B c - mu A c|| / (||B|| + |mu| ||A||)
        double nrm2 = 0, rr = 0;
        for (int i = 0; i < dim; ++i) {
            double s = 0;
            for (int k = 0; k < dim; ++k) s += sys.mass(i, k) * c[k];
            Bc[i] = s;
            nrm2 += c[i] * c[i];
        }
        for (int i = 0; i < dim; ++i) {
            const double r = Bc[i] - mu * sys.stiffness[i] * c[i];
            rr += r * r;
        }
        const double res =
            std::sqrt(rr / std::max(nrm2, 1e-300)) / (normB + std::abs(mu) * normA);
        if (mu > 0) pos.push_back({1.0 / mu, res});
        else neg.push_back({1.0 / mu, res});
    }
    std::sort(pos.begin(), pos.end(),
              [](const entry& a, const entry& b) { return a.sigma < b.sigma; });
    std::sort(neg.begin(), neg.end(),
              [](const entry& a, const entry& b) { return std::abs(a.sigma) < std::abs(b.sigma); });
    for (const auto& e : pos) {
        out.sigmas_pos.push_back(e.sigma);
        out.residuals_pos.push_back(e.res);
    }
    for (const auto& e : neg) {
        out.sigmas_neg.push_back(e.sigma);
        out.residuals_neg.push_back(e.res);
    }
    return out;
}

}  // namespace steklov
