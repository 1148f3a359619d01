#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace rdpg {

// Dense row-major matrix. Small systems only (dual bases, Gram matrices,
// element Schur complements); no BLAS behind it by design so that acceptance
// runs are bit-reproducible across machines.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

    static DenseMatrix identity(std::size_t n) {
        DenseMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    const std::vector<double>& data() const { return a_; }

    DenseMatrix transposed() const {
        DenseMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    std::vector<double> apply(const std::vector<double>& x) const {
        std::vector<double> y(rows_, 0.0);
        for (std::size_t i = 0; i < rows_; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
            y[i] = s;
        }
        return y;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (double v : a_) s += v * v;
        return std::sqrt(s);
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : a_) m = std::max(m, std::abs(v));
        return m;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> a_;
};

inline DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matmul: shape mismatch");
    DenseMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

// Lower-triangular Cholesky factor of an SPD matrix. Throws on a
// non-positive pivot.
class CholeskyFactor {
public:
    explicit CholeskyFactor(const DenseMatrix& a) : n_(a.rows()), l_(a) {
        if (a.rows() != a.cols()) throw std::invalid_argument("cholesky: not square");
        for (std::size_t j = 0; j < n_; ++j) {
            double d = l_(j, j);
            for (std::size_t k = 0; k < j; ++k) d -= l_(j, k) * l_(j, k);
            if (!(d > 0.0)) throw std::runtime_error("cholesky: non-SPD pivot at row " + std::to_string(j));
            const double ljj = std::sqrt(d);
            l_(j, j) = ljj;
            for (std::size_t i = j + 1; i < n_; ++i) {
                double s = l_(i, j);
                for (std::size_t k = 0; k < j; ++k) s -= l_(i, k) * l_(j, k);
                l_(i, j) = s / ljj;
            }
            for (std::size_t i = 0; i < j; ++i) l_(i, j) = 0.0;
        }
    }

    std::size_t size() const { return n_; }
    const DenseMatrix& lower() const { return l_; }

    // Solves L y = b.
    std::vector<double> solve_lower(std::vector<double> b) const {
        for (std::size_t i = 0; i < n_; ++i) {
            double s = b[i];
            for (std::size_t k = 0; k < i; ++k) s -= l_(i, k) * b[k];
            b[i] = s / l_(i, i);
        }
        return b;
    }

    // Solves L^T y = b.
    std::vector<double> solve_lower_transposed(std::vector<double> b) const {
        for (std::size_t ii = n_; ii-- > 0;) {
            double s = b[ii];
            for (std::size_t k = ii + 1; k < n_; ++k) s -= l_(k, ii) * b[k];
            b[ii] = s / l_(ii, ii);
        }
        return b;
    }

    std::vector<double> solve(const std::vector<double>& b) const {
        return solve_lower_transposed(solve_lower(b));
    }

    double quadratic_form_inverse(const std::vector<double>& r) const {
        // r^T A^{-1} r = |L^{-1} r|^2
        std::vector<double> y = solve_lower(r);
        double s = 0.0;
        for (double v : y) s += v * v;
        return s;
    }

private:
    std::size_t n_;
    DenseMatrix l_;
};

inline std::vector<double> cholesky_solve(const DenseMatrix& a, const std::vector<double>& b) {
    return CholeskyFactor(a).solve(b);
}

// LU with partial pivoting, for the small non-symmetric pairing systems.
class LuFactor {
public:
    explicit LuFactor(const DenseMatrix& a) : n_(a.rows()), lu_(a), piv_(a.rows()) {
        if (a.rows() != a.cols()) throw std::invalid_argument("lu: not square");
        for (std::size_t i = 0; i < n_; ++i) piv_[i] = i;
        for (std::size_t k = 0; k < n_; ++k) {
            std::size_t p = k;
            double best = std::abs(lu_(k, k));
            for (std::size_t i = k + 1; i < n_; ++i)
                if (std::abs(lu_(i, k)) > best) { best = std::abs(lu_(i, k)); p = i; }
            if (best == 0.0) throw std::runtime_error("lu: singular matrix");
            if (p != k) {
                for (std::size_t j = 0; j < n_; ++j) std::swap(lu_(k, j), lu_(p, j));
                std::swap(piv_[k], piv_[p]);
            }
            for (std::size_t i = k + 1; i < n_; ++i) {
                lu_(i, k) /= lu_(k, k);
                const double m = lu_(i, k);
                for (std::size_t j = k + 1; j < n_; ++j) lu_(i, j) -= m * lu_(k, j);
            }
        }
    }

    std::vector<double> solve(const std::vector<double>& b) const {
        std::vector<double> x(n_);
        for (std::size_t i = 0; i < n_; ++i) x[i] = b[piv_[i]];
        for (std::size_t i = 1; i < n_; ++i) {
            double s = x[i];
            for (std::size_t k = 0; k < i; ++k) s -= lu_(i, k) * x[k];
            x[i] = s;
        }
        for (std::size_t ii = n_; ii-- > 0;) {
            double s = x[ii];
            for (std::size_t k = ii + 1; k < n_; ++k) s -= lu_(ii, k) * x[k];
            x[ii] = s / lu_(ii, ii);
        }
        return x;
    }

private:
    std::size_t n_;
    DenseMatrix lu_;
    std::vector<std::size_t> piv_;
};

struct EigenDecomposition {
    std::vector<double> values;  // ascending
    DenseMatrix vectors;         // column k pairs with values[k]
};

// Cyclic Jacobi for dense symmetric matrices. Dimensions stay tiny
// (n <= a few hundred), so exactness beats speed here.
inline EigenDecomposition jacobi_eigensolver(DenseMatrix a, int max_sweeps = 100) {
    const std::size_t n = a.rows();
    if (a.rows() != a.cols()) throw std::invalid_argument("jacobi: not square");
    DenseMatrix v = DenseMatrix::identity(n);
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        if (std::sqrt(off) <= 1e-15 * (1.0 + a.frobenius_norm())) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double app = a(p, p), aqq = a(q, q);
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                              : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    EigenDecomposition e;
    e.values.resize(n);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
    e.vectors = DenseMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        e.values[j] = a(order[j], order[j]);
        for (std::size_t i = 0; i < n; ++i) e.vectors(i, j) = v(i, order[j]);
    }
    return e;
}

// Solves S phi = lambda M phi with S, M symmetric and M positive definite,
// via the Cholesky reduction M = L L^T and a Jacobi solve on L^{-1} S L^{-T}.
inline EigenDecomposition sym_gen_eig(const DenseMatrix& s, const DenseMatrix& m) {
    const std::size_t n = s.rows();
    if (s.cols() != n || m.rows() != n || m.cols() != n)
        throw std::invalid_argument("sym_gen_eig: shape mismatch");
    CholeskyFactor lm(m);
    // C = L^{-1} S L^{-T}, built column by column.
    DenseMatrix c(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = s(i, j);
        col = lm.solve_lower(col);
        for (std::size_t i = 0; i < n; ++i) c(i, j) = col[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> row(n);
        for (std::size_t j = 0; j < n; ++j) row[j] = c(i, j);
        row = lm.solve_lower(row);
        for (std::size_t j = 0; j < n; ++j) c(i, j) = row[j];
    }
    // Symmetrize away roundoff before Jacobi.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double avg = 0.5 * (c(i, j) + c(j, i));
            c(i, j) = c(j, i) = avg;
        }
    EigenDecomposition e = jacobi_eigensolver(c);
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) y[i] = e.vectors(i, j);
        y = lm.solve_lower_transposed(y);
        for (std::size_t i = 0; i < n; ++i) e.vectors(i, j) = y[i];
    }
    return e;
}

// Compressed sparse rows, assembled from (i, j, value) triplets with
// duplicate summation.
class SparseMatrix {
public:
    struct Triplet {
        std::size_t i, j;
        double v;
    };

    SparseMatrix(std::size_t n, std::vector<Triplet> triplets, bool symmetric_storage = false)
        : n_(n), symmetric_(symmetric_storage) {
        std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
            return a.i != b.i ? a.i < b.i : a.j < b.j;
        });
        row_ptr_.assign(n + 1, 0);
        for (std::size_t k = 0; k < triplets.size();) {
            std::size_t m = k + 1;
            double s = triplets[k].v;
            while (m < triplets.size() && triplets[m].i == triplets[k].i && triplets[m].j == triplets[k].j)
                s += triplets[m++].v;
            cols_.push_back(triplets[k].j);
            vals_.push_back(s);
            ++row_ptr_[triplets[k].i + 1];
            k = m;
        }
        for (std::size_t i = 0; i < n; ++i) row_ptr_[i + 1] += row_ptr_[i];
    }

    std::size_t size() const { return n_; }
    bool symmetric_storage() const { return symmetric_; }
    std::size_t nnz() const { return vals_.size(); }

    void apply(const std::vector<double>& x, std::vector<double>& y) const {
        for (std::size_t i = 0; i < n_; ++i) {
            double s = 0.0;
            for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += vals_[k] * x[cols_[k]];
            y[i] = s;
        }
    }

    std::vector<double> diagonal() const {
        std::vector<double> d(n_, 0.0);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
                if (cols_[k] == i) d[i] = vals_[k];
        return d;
    }

    bool is_structurally_symmetric() const {
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
                const std::size_t j = cols_[k];
                bool found = false;
                for (std::size_t m = row_ptr_[j]; m < row_ptr_[j + 1]; ++m)
                    if (cols_[m] == i) { found = true; break; }
                if (!found) return false;
            }
        return true;
    }

private:
    std::size_t n_;
    bool symmetric_;
    std::vector<std::size_t> row_ptr_, cols_;
    std::vector<double> vals_;
};

struct CgResult {
    std::vector<double> x;
    std::size_t iterations;
    double relative_residual;
};

// Jacobi-preconditioned conjugate gradients for SPD systems.
inline CgResult cg_solve(const SparseMatrix& a, const std::vector<double>& b, double tol,
                         std::size_t max_iter = 0, const std::vector<double>* x0 = nullptr) {
    const std::size_t n = a.size();
    if (max_iter == 0) max_iter = 20 * n + 200;
    std::vector<double> x = x0 ? *x0 : std::vector<double>(n, 0.0);
    std::vector<double> r(n), z(n), p(n), ap(n);
    a.apply(x, ap);
    double bnorm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        r[i] = b[i] - ap[i];
        bnorm += b[i] * b[i];
    }
    bnorm = std::sqrt(bnorm);
    if (bnorm == 0.0) return {std::vector<double>(n, 0.0), 0, 0.0};
    std::vector<double> dinv = a.diagonal();
    for (auto& d : dinv) d = (d != 0.0) ? 1.0 / d : 1.0;

    auto dot = [](const std::vector<double>& u, const std::vector<double>& v) {
        double s = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
        return s;
    };

    for (std::size_t i = 0; i < n; ++i) z[i] = dinv[i] * r[i];
    p = z;
    double rz = dot(r, z);
    double rnorm = std::sqrt(dot(r, r));
    std::size_t it = 0;
    while (rnorm > tol * bnorm && it < max_iter) {
        a.apply(p, ap);
        const double alpha = rz / dot(p, ap);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        for (std::size_t i = 0; i < n; ++i) z[i] = dinv[i] * r[i];
        const double rz_new = dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
        rnorm = std::sqrt(dot(r, r));
        ++it;
    }
    if (rnorm > tol * bnorm)
        throw std::runtime_error("cg_solve: max iterations reached, residual " + std::to_string(rnorm / bnorm));
    return {std::move(x), it, rnorm / bnorm};
}

}  // namespace rdpg
