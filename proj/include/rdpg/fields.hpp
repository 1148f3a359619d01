#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "rdpg/geometry.hpp"

namespace rdpg {

// Multi-index over the n+1 barycentric coordinates of a simplex.
struct Mono {
    std::array<std::uint8_t, 4> e{};

    std::uint32_t key() const {
        return std::uint32_t(e[0]) | (std::uint32_t(e[1]) << 8) | (std::uint32_t(e[2]) << 16) |
               (std::uint32_t(e[3]) << 24);
    }
    int degree() const { return int(e[0]) + int(e[1]) + int(e[2]) + int(e[3]); }
    bool operator<(const Mono& o) const { return key() < o.key(); }
    bool operator==(const Mono& o) const { return key() == o.key(); }
};

// Polynomial in barycentric coordinates: sum of coef * prod lambda_i^{e_i}.
// The representation is affine-invariant; geometry enters only through
// barycentric gradients and measures.
class Poly {
public:
    Poly() = default;
    explicit Poly(int nbary) : nbary_(nbary) {}

    static Poly constant(int nbary, double c) {
        Poly p(nbary);
        if (c != 0.0) p.terms_.push_back({Mono{}, c});
        return p;
    }

    static Poly bary(int nbary, int i, int power = 1) {
        Poly p(nbary);
        Mono m;
        m.e[std::size_t(i)] = std::uint8_t(power);
        p.terms_.push_back({m, 1.0});
        return p;
    }

    static Poly monomial(int nbary, const Mono& m, double c) {
        Poly p(nbary);
        if (c != 0.0) p.terms_.push_back({m, c});
        return p;
    }

    int nbary() const { return nbary_; }
    bool empty() const { return terms_.empty(); }
    const std::vector<std::pair<Mono, double>>& terms() const { return terms_; }

    int degree() const {
        int d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
        return d;
    }

    double eval(const std::array<double, 4>& lam) const {
        double s = 0.0;
        for (const auto& [m, c] : terms_) {
            double v = c;
            for (int i = 0; i < nbary_; ++i)
                for (int k = 0; k < m.e[std::size_t(i)]; ++k) v *= lam[std::size_t(i)];
            s += v;
        }
        return s;
    }

    // Gradient w.r.t. Cartesian coordinates, using the simplex's barycentric
    // gradients.
    Vec grad(const std::array<double, 4>& lam, const Simplex& t) const {
        Vec g{};
        for (const auto& [m, c] : terms_) {
            for (int i = 0; i < nbary_; ++i) {
                const int ei = m.e[std::size_t(i)];
                if (ei == 0) continue;
                double v = c * double(ei);
                for (int j = 0; j < nbary_; ++j) {
                    int p = m.e[std::size_t(j)] - (j == i ? 1 : 0);
                    for (int k = 0; k < p; ++k) v *= lam[std::size_t(j)];
                }
                g = g + v * t.barycentric_gradient(i);
            }
        }
        return g;
    }

    Poly operator+(const Poly& o) const {
        Poly r = *this;
        r += o;
        return r;
    }

    Poly& operator+=(const Poly& o) {
        std::map<Mono, double> acc;
        for (const auto& [m, c] : terms_) acc[m] += c;
        for (const auto& [m, c] : o.terms_) acc[m] += c;
        terms_.clear();
        for (const auto& [m, c] : acc)
            if (c != 0.0) terms_.push_back({m, c});
        return *this;
    }

    Poly operator-(const Poly& o) const { return *this + (-1.0) * o; }

    friend Poly operator*(double s, Poly p) {
        if (s == 0.0) {
            p.terms_.clear();
            return p;
        }
        for (auto& [m, c] : p.terms_) c *= s;
        return p;
    }

    Poly operator*(const Poly& o) const {
        Poly r(nbary_);
        std::map<Mono, double> acc;
        for (const auto& [ma, ca] : terms_)
            for (const auto& [mb, cb] : o.terms_) {
                Mono m;
                for (std::size_t i = 0; i < 4; ++i) m.e[i] = std::uint8_t(ma.e[i] + mb.e[i]);
                acc[m] += ca * cb;
            }
        for (const auto& [m, c] : acc)
            if (c != 0.0) r.terms_.push_back({m, c});
        return r;
    }

    // Restriction to face f: barycentric coordinate f frozen to zero. The
    // result still uses the full index set (terms in lambda_f removed).
    Poly restrict_to_face(int f) const {
        Poly r(nbary_);
        for (const auto& [m, c] : terms_)
            if (m.e[std::size_t(f)] == 0) r.terms_.push_back({m, c});
        return r;
    }

    // Exact integral over the simplex:
    // int_T prod lambda^beta = n! |T| prod(beta_i!) / (|beta| + n)!.
    double integral(const Simplex& t) const {
        const int n = t.dim();
        long double s = 0.0L;
        for (const auto& [m, c] : terms_) s += (long double)c * bary_moment(m, n);
        return double(s * (long double)t.volume());
    }

    // Exact integral over face f of the simplex (terms with lambda_f drop).
    double face_integral(const Simplex& t, int f) const {
        const int n = t.dim();
        long double s = 0.0L;
        for (const auto& [m, c] : terms_) {
            if (m.e[std::size_t(f)] != 0) continue;
            s += (long double)c * bary_moment(m, n - 1);
        }
        return double(s * (long double)t.face_measure(f));
    }

private:
    // d! * prod(beta_i!) / (|beta| + d)! with d the dimension of the
    // integration domain; the measure is applied by the caller. Written as
    // prod(beta_i!) / ((d+1)(d+2)...(d+q)) to stay in range.
    static long double bary_moment(const Mono& m, int d) {
        long double r = 1.0L;
        for (std::size_t i = 0; i < 4; ++i)
            for (int k = 2; k <= m.e[i]; ++k) r *= (long double)k;
        const int q = m.degree();
        for (int k = 1; k <= q; ++k) r /= (long double)(d + k);
        return r;
    }

    int nbary_ = 0;
    std::vector<std::pair<Mono, double>> terms_;
};

// Vector-valued polynomial; one scalar polynomial per Cartesian component.
class VPoly {
public:
    VPoly() = default;
    VPoly(int nbary, int dim) : dim_(dim) {
        for (int c = 0; c < dim; ++c) comp_[std::size_t(c)] = Poly(nbary);
    }

    static VPoly from_constant_vec(int nbary, int dim, const Vec& v) {
        VPoly p(nbary, dim);
        for (int c = 0; c < dim; ++c) p.comp_[std::size_t(c)] = Poly::constant(nbary, v[c]);
        return p;
    }

    static VPoly scalar_times_vec(const Poly& s, int dim, const Vec& v) {
        VPoly p(s.nbary(), dim);
        for (int c = 0; c < dim; ++c) p.comp_[std::size_t(c)] = v[c] * s;
        return p;
    }

    int dim() const { return dim_; }
    Poly& operator[](int c) { return comp_[std::size_t(c)]; }
    const Poly& operator[](int c) const { return comp_[std::size_t(c)]; }

    int degree() const {
        int d = 0;
        for (int c = 0; c < dim_; ++c) d = std::max(d, comp_[std::size_t(c)].degree());
        return d;
    }

    Vec eval(const std::array<double, 4>& lam) const {
        Vec v{};
        for (int c = 0; c < dim_; ++c) v[c] = comp_[std::size_t(c)].eval(lam);
        return v;
    }

    double divergence(const std::array<double, 4>& lam, const Simplex& t) const {
        double s = 0.0;
        for (int c = 0; c < dim_; ++c) s += comp_[std::size_t(c)].grad(lam, t)[c];
        return s;
    }

    VPoly operator+(const VPoly& o) const {
        VPoly r = *this;
        for (int c = 0; c < dim_; ++c) r.comp_[std::size_t(c)] += o.comp_[std::size_t(c)];
        return r;
    }

    friend VPoly operator*(double s, VPoly p) {
        for (int c = 0; c < p.dim_; ++c) p.comp_[std::size_t(c)] = s * p.comp_[std::size_t(c)];
        return p;
    }

    VPoly times(const Poly& s) const {
        VPoly r = *this;
        for (int c = 0; c < dim_; ++c) r.comp_[std::size_t(c)] = s * comp_[std::size_t(c)];
        return r;
    }

    Poly dot(const VPoly& o) const {
        Poly r(comp_[0].nbary());
        for (int c = 0; c < dim_; ++c) r += comp_[std::size_t(c)] * o.comp_[std::size_t(c)];
        return r;
    }

    Poly normal_trace(const Simplex& t, int f) const {
        Poly r(comp_[0].nbary());
        const Vec n = t.face_normal(f);
        for (int c = 0; c < dim_; ++c) r += n[c] * comp_[std::size_t(c)].restrict_to_face(f);
        return r;
    }

private:
    int dim_ = 0;
    std::array<Poly, 3> comp_{};
};

// Exponential weights: factor exp(-(w . lambda)), w_i >= 0.
struct ExpW {
    std::array<double, 4> w{};

    bool is_zero() const { return w[0] == 0.0 && w[1] == 0.0 && w[2] == 0.0 && w[3] == 0.0; }

    ExpW operator+(const ExpW& o) const {
        ExpW r;
        for (std::size_t i = 0; i < 4; ++i) r.w[i] = w[i] + o.w[i];
        return r;
    }

    double exponent(const std::array<double, 4>& lam) const {
        return w[0] * lam[0] + w[1] * lam[1] + w[2] * lam[2] + w[3] * lam[3];
    }

    double factor(const std::array<double, 4>& lam) const { return std::exp(-exponent(lam)); }
};

struct ScalarTerm {
    Poly p;
    ExpW w;
};

struct VectorTerm {
    VPoly p;
    ExpW w;
};

// Evaluable scalar function on one element: sum of poly * exp(-w.lambda)
// terms. This closure class is rich enough for every special function in the
// construction as well as for the manufactured solutions.
struct ScalarField {
    const Simplex* element = nullptr;
    std::vector<ScalarTerm> terms;

    ScalarField() = default;
    explicit ScalarField(const Simplex& t) : element(&t) {}

    static ScalarField from_poly(const Simplex& t, Poly p) {
        ScalarField f(t);
        f.terms.push_back({std::move(p), ExpW{}});
        return f;
    }

    double value(const std::array<double, 4>& lam) const {
        double s = 0.0;
        for (const auto& t : terms) s += t.p.eval(lam) * t.w.factor(lam);
        return s;
    }
    double value_at(const Vec& x) const { return value(element->barycentric(x)); }

    Vec gradient(const std::array<double, 4>& lam) const {
        Vec g{};
        for (const auto& t : terms) {
            Vec wvec{};
            for (int i = 0; i <= element->dim(); ++i) wvec = wvec + t.w.w[std::size_t(i)] * element->barycentric_gradient(i);
            const double f = t.w.factor(lam);
            g = g + f * (t.p.grad(lam, *element) - t.p.eval(lam) * wvec);
        }
        return g;
    }
    Vec gradient_at(const Vec& x) const { return gradient(element->barycentric(x)); }

    double laplacian(const std::array<double, 4>& lam) const {
        // Delta(p e^{-w.l}) = (Delta p - 2 grad p . W + p |W|^2) e^{-w.l},
        // W = sum_i w_i grad lambda_i. Delta p is evaluated by differencing
        // the gradient polynomials exactly through a second grad call on each
        // directional derivative; cheap at the sizes involved.
        double s = 0.0;
        for (const auto& t : terms) {
            Vec wvec{};
            for (int i = 0; i <= element->dim(); ++i) wvec = wvec + t.w.w[std::size_t(i)] * element->barycentric_gradient(i);
            // Laplacian of the polynomial part via its gradient components.
            double lap = 0.0;
            for (int c = 0; c < element->dim(); ++c) {
                // d/dx_c of (dp/dx_c): build the directional derivative poly.
                Poly dp = derivative(t.p, c);
                lap += dp.grad(lam, *element)[c];
            }
            const double f = t.w.factor(lam);
            s += f * (lap - 2.0 * dot(t.p.grad(lam, *element), wvec) + t.p.eval(lam) * dot(wvec, wvec));
        }
        return s;
    }

    // Cartesian directional derivative of a barycentric polynomial as a
    // polynomial (for the Laplacian path above).
    Poly derivative(const Poly& p, int c) const {
        Poly r(p.nbary());
        for (const auto& [m, coef] : p.terms()) {
            for (int i = 0; i < p.nbary(); ++i) {
                const int ei = m.e[std::size_t(i)];
                if (ei == 0) continue;
                Mono dm = m;
                dm.e[std::size_t(i)] = std::uint8_t(ei - 1);
                r += Poly::monomial(p.nbary(), dm, coef * double(ei) * element->barycentric_gradient(i)[c]);
            }
        }
        return r;
    }

    ScalarField operator+(const ScalarField& o) const {
        ScalarField r = *this;
        r.terms.insert(r.terms.end(), o.terms.begin(), o.terms.end());
        return r;
    }

    friend ScalarField operator*(double s, ScalarField f) {
        for (auto& t : f.terms) t.p = s * t.p;
        return f;
    }
};

struct VectorField {
    const Simplex* element = nullptr;
    std::vector<VectorTerm> terms;

    VectorField() = default;
    explicit VectorField(const Simplex& t) : element(&t) {}

    static VectorField from_poly(const Simplex& t, VPoly p) {
        VectorField f(t);
        f.terms.push_back({std::move(p), ExpW{}});
        return f;
    }

    Vec value(const std::array<double, 4>& lam) const {
        Vec v{};
        for (const auto& t : terms) v = v + t.w.factor(lam) * t.p.eval(lam);
        return v;
    }
    Vec value_at(const Vec& x) const { return value(element->barycentric(x)); }

    double divergence(const std::array<double, 4>& lam) const {
        double s = 0.0;
        for (const auto& t : terms) {
            Vec wvec{};
            for (int i = 0; i <= element->dim(); ++i) wvec = wvec + t.w.w[std::size_t(i)] * element->barycentric_gradient(i);
            s += t.w.factor(lam) * (t.p.divergence(lam, *element) - dot(t.p.eval(lam), wvec));
        }
        return s;
    }
    double divergence_at(const Vec& x) const { return divergence(element->barycentric(x)); }

    VectorField operator+(const VectorField& o) const {
        VectorField r = *this;
        r.terms.insert(r.terms.end(), o.terms.begin(), o.terms.end());
        return r;
    }

    friend VectorField operator*(double s, VectorField f) {
        for (auto& t : f.terms) t.p = s * t.p;
        return f;
    }
};

}  // namespace rdpg
