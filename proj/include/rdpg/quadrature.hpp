#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "rdpg/fields.hpp"
#include "rdpg/geometry.hpp"

namespace rdpg {

// ---------------------------------------------------------------------------
// 1D Gauss-Legendre on [0,1]
// ---------------------------------------------------------------------------

struct Gauss1D {
    std::vector<double> x, w;  // on [0,1]
};

inline const Gauss1D& gauss_legendre_01(int m) {
    static std::map<int, Gauss1D> cache;
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
    Gauss1D g;
    g.x.resize(std::size_t(m));
    g.w.resize(std::size_t(m));
    for (int i = 0; i < m; ++i) {
        // Newton on P_m over [-1,1], Chebyshev initial guess.
        double t = std::cos(M_PI * (double(i) + 0.75) / (double(m) + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < m; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * t * p1 - double(j) * p2) / double(j + 1);
            }
            pp = double(m) * (t * p0 - p1) / (t * t - 1.0);
            const double dt = p0 / pp;
            t -= dt;
            if (std::abs(dt) < 1e-16) break;
        }
        g.x[std::size_t(i)] = 0.5 * (1.0 - t);  // map to [0,1], ascending-ish
        g.w[std::size_t(i)] = 1.0 / ((1.0 - t * t) * pp * pp);
    }
    return cache.emplace(m, std::move(g)).first->second;
}

// ---------------------------------------------------------------------------
// Exponential moments M_k(kappa) = int_0^1 t^k exp(-t/kappa) dt
// ---------------------------------------------------------------------------

// Evaluated through the regularized incomplete gamma function with the usual
// series / continued-fraction split, which stays accurate from kappa = 1e-8
// up to the smooth regime. Satisfies M_k = kappa (k M_{k-1} - e^{-1/kappa}).
inline double exp_moment(int k, double kappa) {
    if (!(kappa > 0.0)) throw std::invalid_argument("exp_moment: kappa > 0 required");
    if (k < 0 || k > 60) throw std::invalid_argument("exp_moment: k out of range");
    const double z = 1.0 / kappa;
    const double a = double(k) + 1.0;
    if (z < a + 1.0) {
        // M = e^{-z} sum_{m>=0} z^m / (a (a+1) ... (a+m))
        double term = 1.0 / a;
        double sum = term;
        for (int m = 1; m < 500; ++m) {
            term *= z / (a + double(m));
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        }
        return std::exp(-z) * sum;
    }
    // Continued fraction for Q(a,z) = Gamma(a,z)/Gamma(a) (modified Lentz).
    const double fpmin = 1e-300;
    double b = z + 1.0 - a;
    double c = 1.0 / fpmin;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -double(i) * (double(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < fpmin) d = fpmin;
        c = b + an / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    const double q = std::exp(-z + a * std::log(z) - std::lgamma(a)) * h;
    // M = Gamma(a)/z^a (1 - Q) with Gamma(a)/z^a = k! kappa^{k+1}, computed
    // as a monotone product (j kappa < 1 throughout in this branch).
    double front = kappa;
    for (int j = 1; j <= k; ++j) front *= double(j) * kappa;
    return front * (1.0 - q);
}

// ---------------------------------------------------------------------------
// Composite graded 1D panels
// ---------------------------------------------------------------------------

struct Panel1D {
    std::vector<double> x, w;  // on [0,1]
};

// Points resolving q(t) e^{-R t} on [0,1]: geometric panels of width 1/R
// doubling away from the layer end. toward_one mirrors the grading.
inline Panel1D graded_points_01(double rate, int pts_per_panel, bool toward_one = false) {
    Panel1D out;
    const double R = std::max(rate, 0.0);
    const int g = pts_per_panel;
    const Gauss1D& gl = gauss_legendre_01(g);
    auto add_panel = [&](double a, double b) {
        for (int i = 0; i < g; ++i) {
            out.x.push_back(a + (b - a) * gl.x[std::size_t(i)]);
            out.w.push_back((b - a) * gl.w[std::size_t(i)]);
        }
    };
    if (R <= 4.0) {
        add_panel(0.0, 1.0);
    } else {
        double a = 0.0, width = 1.0 / R;
        while (a < 1.0) {
            const double b = std::min(1.0, a + width);
            add_panel(a, b);
            a = b;
            width *= 2.0;
        }
    }
    if (toward_one)
        for (auto& x : out.x) x = 1.0 - x;
    return out;
}

// ---------------------------------------------------------------------------
// Rules on simplices (barycentric points)
// ---------------------------------------------------------------------------

struct QP {
    std::array<double, 4> lam{};
    Vec x{};
    double weight = 0.0;
};

struct Rule {
    std::vector<QP> pts;

    template <typename F>
    double integrate(F&& f) const {
        double s = 0.0;
        for (const auto& q : pts) s += q.weight * f(q.lam, q.x);
        return s;
    }
};

namespace detail {

inline void finish_points(Rule& r, const Simplex& t) {
    for (auto& q : r.pts) q.x = t.point(q.lam);
}

// Plain tensor (Duffy) rule on a triangle given in barycentric coordinates of
// indices (i0, i1, i2); exact for polynomials of the requested degree.
inline Rule plain_triangle_rule(const Simplex& t, int deg, std::array<int, 3> idx = {0, 1, 2},
                                double measure = -1.0) {
    const int m = std::max(2, deg / 2 + 2);
    const Gauss1D& g = gauss_legendre_01(m);
    const double area = measure >= 0.0 ? measure : t.volume();
    Rule r;
    r.pts.reserve(std::size_t(m) * std::size_t(m));
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            const double u = g.x[std::size_t(a)], s = g.x[std::size_t(b)];
            QP q;
            q.lam[std::size_t(idx[0])] = u;
            q.lam[std::size_t(idx[1])] = (1.0 - u) * (1.0 - s);
            q.lam[std::size_t(idx[2])] = (1.0 - u) * s;
            q.weight = 2.0 * area * (1.0 - u) * g.w[std::size_t(a)] * g.w[std::size_t(b)];
            r.pts.push_back(q);
        }
    finish_points(r, t);
    return r;
}

inline Rule plain_tet_rule(const Simplex& t, int deg) {
    const int m = std::max(2, deg / 2 + 3);
    const Gauss1D& g = gauss_legendre_01(m);
    Rule r;
    r.pts.reserve(std::size_t(m) * std::size_t(m) * std::size_t(m));
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int c = 0; c < m; ++c) {
                const double t1 = g.x[std::size_t(a)], t2 = g.x[std::size_t(b)], t3 = g.x[std::size_t(c)];
                QP q;
                q.lam[0] = t1;
                q.lam[1] = (1.0 - t1) * t2;
                q.lam[2] = (1.0 - t1) * (1.0 - t2) * t3;
                q.lam[3] = (1.0 - t1) * (1.0 - t2) * (1.0 - t3);
                q.weight = 6.0 * t.volume() * (1.0 - t1) * (1.0 - t1) * (1.0 - t2) *
                           g.w[std::size_t(a)] * g.w[std::size_t(b)] * g.w[std::size_t(c)];
                r.pts.push_back(q);
            }
    finish_points(r, t);
    return r;
}

// Triangle rule graded towards face i (lambda_i -> 0) with decay rate R.
inline Rule face_layer_triangle_rule(const Simplex& t, int face, double rate, int deg,
                                     std::array<int, 3> idx_override = {-1, -1, -1}, double measure = -1.0) {
    std::array<int, 3> idx;
    if (idx_override[0] >= 0) {
        idx = idx_override;
    } else {
        auto fv = t.face_vertices(face);
        idx = {face, fv[0], fv[1]};
    }
    const int g = std::max(10, deg / 2 + 6);
    const Panel1D pt = graded_points_01(rate, g);
    const Gauss1D& gs = gauss_legendre_01(g);
    const double area = measure >= 0.0 ? measure : t.volume();
    Rule r;
    r.pts.reserve(pt.x.size() * std::size_t(g));
    for (std::size_t a = 0; a < pt.x.size(); ++a)
        for (int b = 0; b < g; ++b) {
            const double u = pt.x[a], s = gs.x[std::size_t(b)];
            QP q;
            q.lam[std::size_t(idx[0])] = u;
            q.lam[std::size_t(idx[1])] = (1.0 - u) * (1.0 - s);
            q.lam[std::size_t(idx[2])] = (1.0 - u) * s;
            q.weight = 2.0 * area * (1.0 - u) * pt.w[a] * gs.w[std::size_t(b)];
            r.pts.push_back(q);
        }
    finish_points(r, t);
    return r;
}

// Triangle rule graded towards the corner opposite faces i0, i1 (where both
// lambda_{i0} and lambda_{i1} vanish), with independent rates.
inline Rule corner_layer_triangle_rule(const Simplex& t, int i0, int i1, double r0, double r1, int deg,
                                       double measure = -1.0) {
    if (r1 > r0) {
        std::swap(i0, i1);
        std::swap(r0, r1);
    }
    int corner = 0;
    for (int i = 0; i < 3; ++i)
        if (i != i0 && i != i1) corner = i;
    const int g = std::max(10, deg / 2 + 6);
    const Panel1D pt = graded_points_01(r0, g);
    const double area = measure >= 0.0 ? measure : t.volume();
    Rule r;
    // Exponent is u*(r0 (1-s) + r1 s); within a u-panel the s-profile grows
    // towards s = 1 at rate u_max (r0 - r1), which sets the s-grading.
    std::size_t a = 0;
    while (a < pt.x.size()) {
        // one geometric panel = g consecutive points with shared bounds
        const std::size_t a_end = a + std::size_t(g);
        double u_max = 0.0;
        for (std::size_t k = a; k < a_end && k < pt.x.size(); ++k) u_max = std::max(u_max, pt.x[k]);
        const Panel1D ps = graded_points_01(u_max * (r0 - r1), g, /*toward_one=*/true);
        for (std::size_t k = a; k < a_end && k < pt.x.size(); ++k) {
            for (std::size_t b = 0; b < ps.x.size(); ++b) {
                const double u = pt.x[k], s = ps.x[b];
                QP q;
                q.lam[std::size_t(corner)] = 1.0 - u;
                q.lam[std::size_t(i0)] = u * (1.0 - s);
                q.lam[std::size_t(i1)] = u * s;
                q.weight = 2.0 * area * u * pt.w[k] * ps.w[b];
                r.pts.push_back(q);
            }
        }
        a = a_end;
    }
    finish_points(r, t);
    return r;
}

// Tetrahedron rule graded towards face i (lambda_i -> 0).
inline Rule face_layer_tet_rule(const Simplex& t, int face, double rate, int deg) {
    const int g = std::max(10, deg / 2 + 6);
    const Panel1D pt = graded_points_01(rate, g);
    const int mb = std::max(2, deg / 2 + 4);
    const Gauss1D& gb = gauss_legendre_01(mb);
    auto fv = t.face_vertices(face);
    Rule r;
    for (std::size_t a = 0; a < pt.x.size(); ++a)
        for (int b = 0; b < mb; ++b)
            for (int c = 0; c < mb; ++c) {
                const double u = pt.x[a], s = gb.x[std::size_t(b)], v = gb.x[std::size_t(c)];
                QP q;
                q.lam[std::size_t(face)] = u;
                q.lam[std::size_t(fv[0])] = (1.0 - u) * s;
                q.lam[std::size_t(fv[1])] = (1.0 - u) * (1.0 - s) * v;
                q.lam[std::size_t(fv[2])] = (1.0 - u) * (1.0 - s) * (1.0 - v);
                q.weight = 6.0 * t.volume() * (1.0 - u) * (1.0 - u) * (1.0 - s) * pt.w[a] *
                           gb.w[std::size_t(b)] * gb.w[std::size_t(c)];
                r.pts.push_back(q);
            }
    finish_points(r, t);
    return r;
}

}  // namespace detail

// Volume rule resolving smooth * exp(-(w . lambda)) integrands of the given
// smooth polynomial degree. The exponent vector only steers point placement;
// the caller's integrand evaluates the full factor.
inline Rule volume_rule_for(const Simplex& t, const ExpW& w, int deg) {
    const int n = t.dim();
    double wmin = w.w[0];
    for (int i = 1; i <= n; ++i) wmin = std::min(wmin, w.w[std::size_t(i)]);
    std::array<double, 4> wr{};
    std::vector<int> support;
    double residual_rate = 0.0;
    for (int i = 0; i <= n; ++i) {
        wr[std::size_t(i)] = w.w[std::size_t(i)] - wmin;
        if (wr[std::size_t(i)] > 4.0)
            support.push_back(i);
        else
            residual_rate = std::max(residual_rate, wr[std::size_t(i)]);
    }
    const int boosted = deg + (residual_rate > 0.0 ? 10 : 0);
    if (n == 2) {
        if (support.empty()) return detail::plain_triangle_rule(t, boosted);
        if (support.size() == 1)
            return detail::face_layer_triangle_rule(t, support[0], wr[std::size_t(support[0])], boosted);
        if (support.size() == 2)
            return detail::corner_layer_triangle_rule(t, support[0], support[1], wr[std::size_t(support[0])],
                                                      wr[std::size_t(support[1])], boosted);
        throw std::runtime_error("volume_rule_for: unreachable layered pattern");
    }
    if (support.empty()) return detail::plain_tet_rule(t, boosted);
    if (support.size() == 1) return detail::face_layer_tet_rule(t, support[0], wr[std::size_t(support[0])], boosted);
    throw std::runtime_error("volume_rule_for: layered 3D pattern not supported");
}

// Face rule for integrands on face f; lambda_f is frozen to 0 in the points.
inline Rule face_rule_for(const Simplex& t, int f, const ExpW& w, int deg) {
    const int n = t.dim();
    auto fv = t.face_vertices(f);
    Rule r;
    if (n == 2) {
        const int a = fv[0], b = fv[1];
        const double wa = w.w[std::size_t(a)], wb = w.w[std::size_t(b)];
        const double rate = std::abs(wa - wb);
        // Larger weight means faster decay, so the mass sits at the other end.
        const Panel1D p = graded_points_01(rate, std::max(10, deg / 2 + 6), /*toward_one=*/(wa > wb));
        for (std::size_t i = 0; i < p.x.size(); ++i) {
            QP q;
            q.lam[std::size_t(a)] = 1.0 - p.x[i];
            q.lam[std::size_t(b)] = p.x[i];
            q.weight = t.face_measure(f) * p.w[i];
            r.pts.push_back(q);
        }
        detail::finish_points(r, t);
        return r;
    }
    // Triangular face of a tetrahedron: reuse the 2D constructions on the
    // face's barycentric coordinates.
    const std::array<int, 3> idx = {fv[0], fv[1], fv[2]};
    double wmin = std::min({w.w[std::size_t(fv[0])], w.w[std::size_t(fv[1])], w.w[std::size_t(fv[2])]});
    std::vector<int> support;
    for (int k = 0; k < 3; ++k)
        if (w.w[std::size_t(fv[std::size_t(k)])] - wmin > 4.0) support.push_back(k);
    const double area = t.face_measure(f);
    if (support.empty()) {
        r = detail::plain_triangle_rule(t, deg + (wmin > 0.0 ? 10 : 0), idx, area);
    } else if (support.size() == 1) {
        // grade towards the face edge where the supported coordinate vanishes
        const int k = support[0];
        const std::array<int, 3> reord = {idx[std::size_t(k)], idx[std::size_t((k + 1) % 3)],
                                          idx[std::size_t((k + 2) % 3)]};
        r = detail::face_layer_triangle_rule(t, /*face=*/-1, w.w[std::size_t(idx[std::size_t(k)])] - wmin, deg + 10,
                                             reord, area);
    } else {
        throw std::runtime_error("face_rule_for: layered 3D face pattern not supported");
    }
    for (auto& q : r.pts) q.x = t.point(q.lam);
    return r;
}

// ---------------------------------------------------------------------------
// Public rule objects
// ---------------------------------------------------------------------------

struct QuadratureRule {
    std::vector<QP> points;
    int order = 0;

    double weight_sum() const {
        double s = 0.0;
        for (const auto& q : points) s += q.weight;
        return s;
    }
};

inline QuadratureRule simplex_rule(int n, int order) {
    if (order < 0 || order > 30) throw std::invalid_argument("simplex_rule: order out of range");
    const Simplex t = reference_simplex(n);
    Rule r = (n == 2) ? detail::plain_triangle_rule(t, order) : detail::plain_tet_rule(t, order);
    return QuadratureRule{std::move(r.pts), order};
}

// Composite rule on the reference triangle for integrands
// q(x) * exp(-d_F / kappa), with d_F the barycentric distance to 'face'.
struct LayerRule {
    int face = 0;
    double kappa = 1.0;
    Rule rule;

    template <typename F>
    double integrate(F&& smooth) const {
        double s = 0.0;
        for (const auto& q : rule.pts) s += q.weight * smooth(q.lam, q.x) * std::exp(-q.lam[std::size_t(face)] / kappa);
        return s;
    }
};

inline LayerRule layer_rule(int face, double kappa, int order, int extra_points = 0) {
    if (!(kappa > 0.0) || kappa > 10.0) throw std::invalid_argument("layer_rule: kappa out of range (0, 10]");
    const Simplex t = reference_simplex(2);
    LayerRule lr;
    lr.face = face;
    lr.kappa = kappa;
    ExpW w;
    w.w[std::size_t(face)] = 1.0 / kappa;
    lr.rule = volume_rule_for(t, w, order + 2 * extra_points);
    return lr;
}

// ---------------------------------------------------------------------------
// Element-bound integrator with rule caching and exact polynomial paths
// ---------------------------------------------------------------------------

inline VPoly grad_vpoly(const Poly& p, const Simplex& t) {
    VPoly g(p.nbary(), t.dim());
    for (const auto& [m, c] : p.terms()) {
        for (int i = 0; i < p.nbary(); ++i) {
            const int ei = m.e[std::size_t(i)];
            if (ei == 0) continue;
            Mono dm = m;
            dm.e[std::size_t(i)] = std::uint8_t(ei - 1);
            const Vec gl = t.barycentric_gradient(i);
            for (int comp = 0; comp < t.dim(); ++comp)
                g[comp] += Poly::monomial(p.nbary(), dm, c * double(ei) * gl[comp]);
        }
    }
    return g;
}

inline Poly div_poly(const VPoly& p, const Simplex& t) {
    Poly d(p[0].nbary());
    for (int comp = 0; comp < p.dim(); ++comp) {
        const Poly& pc = p[comp];
        for (const auto& [m, c] : pc.terms()) {
            for (int i = 0; i < pc.nbary(); ++i) {
                const int ei = m.e[std::size_t(i)];
                if (ei == 0) continue;
                Mono dm = m;
                dm.e[std::size_t(i)] = std::uint8_t(ei - 1);
                d += Poly::monomial(pc.nbary(), dm, c * double(ei) * t.barycentric_gradient(i)[comp]);
            }
        }
    }
    return d;
}

class ElementIntegrator {
public:
    explicit ElementIntegrator(const Simplex& t) : t_(&t) {}

    const Simplex& simplex() const { return *t_; }

    const Rule& volume_rule(const ExpW& w, int deg) {
        const Key k = make_key(0, -1, w, deg);
        auto it = cache_.find(k);
        if (it == cache_.end()) it = cache_.emplace(k, volume_rule_for(*t_, w, deg)).first;
        return it->second;
    }

    const Rule& face_rule(int f, const ExpW& w, int deg) {
        const Key k = make_key(1, f, w, deg);
        auto it = cache_.find(k);
        if (it == cache_.end()) it = cache_.emplace(k, face_rule_for(*t_, f, w, deg)).first;
        return it->second;
    }

    Vec exp_gradient_shift(const ExpW& w) const {
        Vec v{};
        for (int i = 0; i <= t_->dim(); ++i) v = v + w.w[std::size_t(i)] * t_->barycentric_gradient(i);
        return v;
    }

    // ---- scalar-scalar -----------------------------------------------------

    double inner_value(const ScalarField& a, const ScalarField& b) {
        double s = 0.0;
        for (const auto& ta : a.terms)
            for (const auto& tb : b.terms) {
                if (ta.w.is_zero() && tb.w.is_zero()) {
                    s += (ta.p * tb.p).integral(*t_);
                } else {
                    const ExpW w = ta.w + tb.w;
                    const Rule& r = volume_rule(w, ta.p.degree() + tb.p.degree());
                    s += r.integrate([&](const std::array<double, 4>& lam, const Vec&) {
                        return ta.p.eval(lam) * tb.p.eval(lam) * w.factor(lam);
                    });
                }
            }
        return s;
    }

    double inner_grad(const ScalarField& a, const ScalarField& b) {
        double s = 0.0;
        for (const auto& ta : a.terms)
            for (const auto& tb : b.terms) {
                if (ta.w.is_zero() && tb.w.is_zero()) {
                    s += grad_vpoly(ta.p, *t_).dot(grad_vpoly(tb.p, *t_)).integral(*t_);
                } else {
                    const ExpW w = ta.w + tb.w;
                    const Vec wa = exp_gradient_shift(ta.w), wb = exp_gradient_shift(tb.w);
                    const Rule& r = volume_rule(w, ta.p.degree() + tb.p.degree() + 2);
                    s += r.integrate([&](const std::array<double, 4>& lam, const Vec&) {
                        const Vec ga = ta.p.grad(lam, *t_) - ta.p.eval(lam) * wa;
                        const Vec gb = tb.p.grad(lam, *t_) - tb.p.eval(lam) * wb;
                        return dot(ga, gb) * w.factor(lam);
                    });
                }
            }
        return s;
    }

    // ---- vector-vector -----------------------------------------------------

    double inner_value(const VectorField& a, const VectorField& b) {
        double s = 0.0;
        for (const auto& ta : a.terms)
            for (const auto& tb : b.terms) {
                if (ta.w.is_zero() && tb.w.is_zero()) {
                    s += ta.p.dot(tb.p).integral(*t_);
                } else {
                    const ExpW w = ta.w + tb.w;
                    const Rule& r = volume_rule(w, ta.p.degree() + tb.p.degree());
                    s += r.integrate([&](const std::array<double, 4>& lam, const Vec&) {
                        return dot(ta.p.eval(lam), tb.p.eval(lam)) * w.factor(lam);
                    });
                }
            }
        return s;
    }

    double inner_div(const VectorField& a, const VectorField& b) {
        double s = 0.0;
        for (const auto& ta : a.terms)
            for (const auto& tb : b.terms) {
                if (ta.w.is_zero() && tb.w.is_zero()) {
                    s += (div_poly(ta.p, *t_) * div_poly(tb.p, *t_)).integral(*t_);
                } else {
                    const ExpW w = ta.w + tb.w;
                    const Vec wa = exp_gradient_shift(ta.w), wb = exp_gradient_shift(tb.w);
                    const Rule& r = volume_rule(w, ta.p.degree() + tb.p.degree() + 2);
                    s += r.integrate([&](const std::array<double, 4>& lam, const Vec&) {
                        const double da = ta.p.divergence(lam, *t_) - dot(ta.p.eval(lam), wa);
                        const double db = tb.p.divergence(lam, *t_) - dot(tb.p.eval(lam), wb);
                        return da * db * w.factor(lam);
                    });
                }
            }
        return s;
    }

    // ---- mixed -------------------------------------------------------------

    // int_T tau . grad v
    double inner_vec_grad(const VectorField& tau, const ScalarField& v) {
        double s = 0.0;
        for (const auto& ta : tau.terms)
            for (const auto& tb : v.terms) {
                if (ta.w.is_zero() && tb.w.is_zero()) {
                    s += ta.p.dot(grad_vpoly(tb.p, *t_)).integral(*t_);
                } else {
                    const ExpW w = ta.w + tb.w;
                    const Vec wb = exp_gradient_shift(tb.w);
                    const Rule& r = volume_rule(w, ta.p.degree() + tb.p.degree() + 1);
                    s += r.integrate([&](const std::array<double, 4>& lam, const Vec&) {
                        const Vec gb = tb.p.grad(lam, *t_) - tb.p.eval(lam) * wb;
                        return dot(ta.p.eval(lam), gb) * w.factor(lam);
                    });
                }
            }
        return s;
    }

    // int_T u . div tau
    double inner_scalar_div(const ScalarField& u, const VectorField& tau) {
        double s = 0.0;
        for (const auto& ta : u.terms)
            for (const auto& tb : tau.terms) {
                if (ta.w.is_zero() && tb.w.is_zero()) {
                    s += (ta.p * div_poly(tb.p, *t_)).integral(*t_);
                } else {
                    const ExpW w = ta.w + tb.w;
                    const Vec wb = exp_gradient_shift(tb.w);
                    const Rule& r = volume_rule(w, ta.p.degree() + tb.p.degree() + 1);
                    s += r.integrate([&](const std::array<double, 4>& lam, const Vec&) {
                        const double db = tb.p.divergence(lam, *t_) - dot(tb.p.eval(lam), wb);
                        return ta.p.eval(lam) * db * w.factor(lam);
                    });
                }
            }
        return s;
    }

    // ---- moments against polynomials ---------------------------------------

    double moment_volume(const ScalarField& a, const Poly& q) {
        ScalarField qa(*t_);
        qa.terms.push_back({q, ExpW{}});
        return inner_value(a, qa);
    }

    double moment_volume(const VectorField& a, const VPoly& q) {
        VectorField qa(*t_);
        qa.terms.push_back({q, ExpW{}});
        return inner_value(a, qa);
    }

    // int_F a q with q a polynomial given in full barycentric indices.
    double face_moment(const ScalarField& a, int f, const Poly& q) {
        double s = 0.0;
        const Poly qr = q.restrict_to_face(f);
        for (const auto& ta : a.terms) {
            const Poly pr = ta.p.restrict_to_face(f);
            if (face_weight_is_trivial(ta.w, f)) {
                // exp factor constant on the face
                const double c = face_constant_factor(ta.w, f);
                s += c * (pr * qr).face_integral(*t_, f);
            } else {
                const Rule& r = face_rule(f, ta.w, pr.degree() + qr.degree());
                s += r.integrate([&](const std::array<double, 4>& lam, const Vec&) {
                    return pr.eval(lam) * qr.eval(lam) * ta.w.factor(lam);
                });
            }
        }
        return s;
    }

    // int_F (tau . n_f) q
    double normal_moment(const VectorField& tau, int f, const Poly& q) {
        double s = 0.0;
        const Poly qr = q.restrict_to_face(f);
        const Vec n = t_->face_normal(f);
        for (const auto& ta : tau.terms) {
            Poly pr(ta.p[0].nbary());
            for (int c = 0; c < t_->dim(); ++c) pr += n[c] * ta.p[c].restrict_to_face(f);
            if (face_weight_is_trivial(ta.w, f)) {
                const double c = face_constant_factor(ta.w, f);
                s += c * (pr * qr).face_integral(*t_, f);
            } else {
                const Rule& r = face_rule(f, ta.w, pr.degree() + qr.degree());
                s += r.integrate([&](const std::array<double, 4>& lam, const Vec&) {
                    return pr.eval(lam) * qr.eval(lam) * ta.w.factor(lam);
                });
            }
        }
        return s;
    }

    // ---- norms ---------------------------------------------------------------

    double norm_l2(const ScalarField& a) { return std::sqrt(std::max(0.0, inner_value(a, a))); }
    double norm_grad(const ScalarField& a) { return std::sqrt(std::max(0.0, inner_grad(a, a))); }
    double norm_l2(const VectorField& a) { return std::sqrt(std::max(0.0, inner_value(a, a))); }
    double norm_div(const VectorField& a) { return std::sqrt(std::max(0.0, inner_div(a, a))); }

    double norm_alpha(const ScalarField& a, double alpha) {
        const double v = inner_value(a, a), g = inner_grad(a, a);
        return std::sqrt(std::max(0.0, v + alpha * alpha * g));
    }
    double norm_alpha(const VectorField& a, double alpha) {
        const double v = inner_value(a, a), d = inner_div(a, a);
        return std::sqrt(std::max(0.0, v + alpha * alpha * d));
    }

private:
    bool face_weight_is_trivial(const ExpW& w, int f) const {
        auto fv = t_->face_vertices(f);
        for (int k = 0; k < t_->dim(); ++k) {
            const double wi = w.w[std::size_t(fv[std::size_t(k)])];
            if (wi != w.w[std::size_t(fv[0])]) return false;
        }
        return true;  // constant exponent along the face
    }
    double face_constant_factor(const ExpW& w, int f) const {
        auto fv = t_->face_vertices(f);
        return std::exp(-w.w[std::size_t(fv[0])]);
    }

    struct Key {
        int kind, face, deg;
        std::array<std::uint64_t, 4> wbits;
        bool operator<(const Key& o) const {
            return std::tie(kind, face, deg, wbits) < std::tie(o.kind, o.face, o.deg, o.wbits);
        }
    };

    static Key make_key(int kind, int face, const ExpW& w, int deg) {
        Key k{kind, face, deg, {}};
        for (std::size_t i = 0; i < 4; ++i) {
            std::uint64_t b;
            static_assert(sizeof(double) == sizeof(std::uint64_t));
            __builtin_memcpy(&b, &w.w[i], sizeof(b));
            k.wbits[i] = b;
        }
        return k;
    }

    const Simplex* t_;
    std::map<Key, Rule> cache_;
};

}  // namespace rdpg
