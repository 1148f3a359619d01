#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <functional>
#include <random>

#include "rdpg/fields.hpp"
#include "rdpg/geometry.hpp"
#include "rdpg/quadrature.hpp"

using namespace rdpg;

namespace {

// Adaptive Simpson integration, test oracle only.
double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b, double fa, double fb,
                            double fm, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, fm, flm, left, tol / 2.0, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, fb, frm, right, tol / 2.0, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol = 1e-14,
                        int depth = 60) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson_rec(f, a, b, fa, fb, fm, whole, tol, depth);
}

double exact_monomial_integral(const Simplex& t, const Mono& m) {
    return Poly::monomial(t.dim() + 1, m, 1.0).integral(t);
}

}  // namespace

TEST_CASE("simplex_rule basics", "[quadrature]") {
    auto r1 = simplex_rule(2, 1);
    CHECK(r1.weight_sum() == Catch::Approx(0.5).epsilon(1e-14));
    auto r = simplex_rule(2, 4);
    CHECK(r.weight_sum() == Catch::Approx(0.5).epsilon(1e-14));
    auto r3 = simplex_rule(3, 4);
    CHECK(r3.weight_sum() == Catch::Approx(1.0 / 6.0).epsilon(1e-13));
    CHECK_THROWS(simplex_rule(2, 31));
}

TEST_CASE("simplex_rule integrates monomials exactly", "[quadrature]") {
    for (int n : {2, 3}) {
        const Simplex t = reference_simplex(n);
        for (int order : {2, 5, 8, 12, 20, 30}) {
            auto qr = simplex_rule(n, order);
            // test a subset of monomials of total degree <= order
            for (int a = 0; a <= order; a += std::max(1, order / 4)) {
                for (int b = 0; a + b <= order; b += std::max(1, order / 3)) {
                    Mono m;
                    m.e[1] = std::uint8_t(a);
                    m.e[2] = std::uint8_t(b);
                    const double exact = exact_monomial_integral(t, m);
                    double got = 0.0;
                    for (const auto& q : qr.points) {
                        double v = 1.0;
                        for (int k = 0; k < a; ++k) v *= q.lam[1];
                        for (int k = 0; k < b; ++k) v *= q.lam[2];
                        got += q.weight * v;
                    }
                    CHECK(std::abs(got - exact) <= 1e-13 * std::max(std::abs(exact), 1e-30) + 1e-18);
                }
            }
        }
    }
}

TEST_CASE("face bubble integral over the reference triangle", "[quadrature]") {
    // eta_F = x(1-x-y) for the face y=0 -> 1/24.
    const Simplex t = reference_simplex(2);
    Poly eta = Poly::bary(3, 1) * Poly::bary(3, 0);
    CHECK(eta.integral(t) == Catch::Approx(1.0 / 24.0).epsilon(1e-14));
    auto qr = simplex_rule(2, 3);
    double got = 0.0;
    for (const auto& q : qr.points) got += q.weight * eta.eval(q.lam);
    CHECK(got == Catch::Approx(1.0 / 24.0).epsilon(1e-13));
}

TEST_CASE("exp_moment closed forms", "[quadrature]") {
    CHECK(exp_moment(0, 1.0) == Catch::Approx(1.0 - std::exp(-1.0)).epsilon(1e-14));
    // ||phi_kappa||^2_{L2(0,1)} = M_0(kappa/2) = (kappa/2)(1 - e^{-2/kappa})
    CHECK(exp_moment(0, 0.5) == Catch::Approx(0.4323323583816936).epsilon(1e-13));
    for (double kappa : {1e-8, 1e-6, 1e-4, 1e-2, 0.1, 0.5, 1.0, 2.0, 10.0}) {
        const double closed = (kappa / 2.0) * (1.0 - std::exp(-2.0 / kappa));
        CHECK(exp_moment(0, kappa / 2.0) == Catch::Approx(closed).epsilon(1e-12));
    }
}

TEST_CASE("exp_moment satisfies the downward-stable recursion identity", "[quadrature]") {
    for (double kappa : {1e-8, 1e-6, 1e-4, 1e-2, 0.1, 1.0, 3.0, 10.0}) {
        double prev = exp_moment(0, kappa);
        CHECK(prev == Catch::Approx(kappa * (1.0 - std::exp(-1.0 / kappa))).epsilon(1e-13));
        for (int k = 1; k <= 40; ++k) {
            const double mk = exp_moment(k, kappa);
            const double rec = kappa * (double(k) * prev - std::exp(-1.0 / kappa));
            const double scale = std::max({mk, kappa * double(k) * prev, kappa * std::exp(-1.0 / kappa), 1e-300});
            CHECK(std::abs(mk - rec) <= 1e-13 * scale);
            prev = mk;
        }
    }
}

TEST_CASE("exp_moment scaling law of the layer derivative", "[quadrature]") {
    // ||phi_kappa'||^2 = kappa^{-2} M_0(kappa/2); fitted exponent of
    // ||phi'||_{L2} vs kappa should be -1/2 (squared norm: -1).
    std::vector<double> logk, lognorm;
    for (double kappa : {1.0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
        const double n2 = exp_moment(0, kappa / 2.0) / (kappa * kappa);
        logk.push_back(std::log10(kappa));
        lognorm.push_back(std::log10(std::sqrt(n2)));
    }
    // least squares slope
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = double(logk.size());
    for (std::size_t i = 0; i < logk.size(); ++i) {
        sx += logk[i];
        sy += lognorm[i];
        sxx += logk[i] * logk[i];
        sxy += logk[i] * lognorm[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(slope == Catch::Approx(-0.5).margin(0.01));
}

TEST_CASE("layer_rule validated against exponential-moment closed forms", "[quadrature]") {
    // integral over the reference triangle of e^{-y/kappa} (1-x-y) x
    // equals (1/6) int_0^1 e^{-y/kappa}(1-y)^3 dy.
    for (double kappa : {1.0, 1e-2, 1e-3, 1e-6}) {
        auto lr = layer_rule(/*face=*/2, std::min(kappa, 10.0), /*order=*/6);
        const double got = lr.integrate([](const std::array<double, 4>& lam, const Vec&) {
            return lam[0] * lam[1];  // (1-x-y)*x
        });
        const double closed =
            (exp_moment(0, kappa) - 3.0 * exp_moment(1, kappa) + 3.0 * exp_moment(2, kappa) - exp_moment(3, kappa)) /
            6.0;
        CHECK(std::abs(got - closed) <= 1e-11 * std::abs(closed));
    }
}

TEST_CASE("layer factor tends to the plain integral as kappa grows", "[quadrature]") {
    const Simplex t = reference_simplex(2);
    ExpW w;
    w.w[2] = 1e-9;  // essentially no layer
    auto rule = volume_rule_for(t, w, 4);
    Poly eta = Poly::bary(3, 1) * Poly::bary(3, 0);
    const double got = rule.integrate([&](const std::array<double, 4>& lam, const Vec&) {
        return eta.eval(lam) * w.factor(lam);
    });
    CHECK(got == Catch::Approx(1.0 / 24.0).epsilon(1e-9));
}

TEST_CASE("modified bubble norm against an adaptive 1D oracle", "[quadrature]") {
    // ||eta_{alpha,F}||^2 over the reference triangle, face y=0:
    // int x^2 (1-x-y)^2 e^{-2y/kappa} = int_0^1 e^{-2y/kappa} (1-y)^5 / 30 dy.
    const double kappa = 1e-3;
    auto lr = layer_rule(2, kappa / 2.0, 8);
    const double got = lr.integrate([](const std::array<double, 4>& lam, const Vec&) {
        const double v = lam[1] * lam[0];
        return v * v;
    });
    const double oracle =
        adaptive_simpson([&](double y) { return std::exp(-2.0 * y / kappa) * std::pow(1.0 - y, 5) / 30.0; }, 0.0, 1.0,
                         1e-16);
    CHECK(std::abs(got - oracle) <= 1e-10 * std::abs(oracle));
}

TEST_CASE("layer_rule self-convergence under point doubling", "[quadrature]") {
    for (double kappa : {1e-2, 1e-4, 1e-6}) {
        auto coarse = layer_rule(2, std::min(kappa, 10.0), 8);
        auto fine = layer_rule(2, std::min(kappa, 10.0), 8, /*extra_points=*/8);
        for (int a = 0; a <= 3; ++a) {
            for (int b = 0; b <= 3; b += 3) {
                auto f = [&](const std::array<double, 4>& lam, const Vec&) {
                    double v = 1.0;
                    for (int k = 0; k < a; ++k) v *= lam[1];
                    for (int k = 0; k < b; ++k) v *= lam[0];
                    return v;
                };
                const double c = coarse.integrate(f);
                const double fv = fine.integrate(f);
                CHECK(std::abs(c - fv) <= 1e-11 * std::max(std::abs(fv), 1e-30));
            }
        }
    }
}

TEST_CASE("corner-layer rule matches the Beta times moment closed form", "[quadrature]") {
    // int_T x^a y^b e^{-(x+y)/kappa} = B(a+1, b+1) M_{a+b+1}(kappa)
    const Simplex t = reference_simplex(2);
    for (double kappa : {1e-2, 1e-5}) {
        ExpW w;
        w.w[1] = 1.0 / kappa;
        w.w[2] = 1.0 / kappa;
        for (int a : {0, 1, 3}) {
            for (int b : {0, 2}) {
                auto rule = volume_rule_for(t, w, a + b);
                const double got = rule.integrate([&](const std::array<double, 4>& lam, const Vec&) {
                    double v = 1.0;
                    for (int k = 0; k < a; ++k) v *= lam[1];
                    for (int k = 0; k < b; ++k) v *= lam[2];
                    return v * w.factor(lam);
                });
                const double beta = std::exp(std::lgamma(a + 1.0) + std::lgamma(b + 1.0) - std::lgamma(a + b + 2.0));
                const double closed = beta * exp_moment(a + b + 1, kappa);
                CHECK(std::abs(got - closed) <= 1e-11 * std::abs(closed));
            }
        }
    }
}

TEST_CASE("corner-layer rule with distinct rates against a nested oracle", "[quadrature]") {
    const Simplex t = reference_simplex(2);
    const double k1 = 1e-3, k2 = 4e-3;
    ExpW w;
    w.w[1] = 1.0 / k1;
    w.w[2] = 1.0 / k2;
    auto rule = volume_rule_for(t, w, 3);
    const double got = rule.integrate([&](const std::array<double, 4>& lam, const Vec&) {
        return lam[1] * w.factor(lam);
    });
    const double oracle = adaptive_simpson(
        [&](double x) {
            return x * std::exp(-x / k1) *
                   adaptive_simpson([&](double y) { return std::exp(-y / k2); }, 0.0, 1.0 - x, 1e-17);
        },
        0.0, 1.0, 1e-16);
    CHECK(std::abs(got - oracle) <= 1e-10 * std::abs(oracle));
}

TEST_CASE("face rules integrate layered traces", "[quadrature]") {
    const Simplex t = reference_simplex(2);
    // On the hypotenuse (face 0), d_{F_2} = y varies linearly; integrate
    // e^{-y/kappa} * 1 over the hypotenuse: parametrize y in [0,1],
    // ds = sqrt(2) dy -> sqrt(2) * kappa (1 - e^{-1/kappa}).
    const double kappa = 1e-4;
    ExpW w;
    w.w[2] = 1.0 / kappa;
    ElementIntegrator ctx(t);
    ScalarField layer(t);
    layer.terms.push_back({Poly::constant(3, 1.0), w});
    const double got = ctx.face_moment(layer, 0, Poly::constant(3, 1.0));
    const double closed = std::sqrt(2.0) * kappa * (1.0 - std::exp(-1.0 / kappa));
    CHECK(got == Catch::Approx(closed).epsilon(1e-12));
}

TEST_CASE("element integrator norms of modified bubbles follow Beta closed forms", "[quadrature]") {
    const Simplex t = reference_simplex(2);
    ElementIntegrator ctx(t);
    const double kappa = 1e-4;
    // eta_{alpha,F} for face 2 (y=0): poly x(1-x-y), factor e^{-y/kappa}.
    ScalarField f(t);
    ExpW w;
    w.w[2] = 1.0 / kappa;
    f.terms.push_back({Poly::bary(3, 1) * Poly::bary(3, 0), w});
    const double n2 = ctx.inner_value(f, f);
    double closed = 0.0;
    // int x^2(1-x-y)^2 e^{-2y/kappa} = int_0^1 e^{-2y/k}(1-y)^5/30
    for (int j = 0; j <= 5; ++j) {
        const double binom = std::exp(std::lgamma(6.0) - std::lgamma(j + 1.0) - std::lgamma(6.0 - j));
        closed += ((j % 2 == 0) ? 1.0 : -1.0) * binom * exp_moment(j, kappa / 2.0) / 30.0;
    }
    CHECK(n2 == Catch::Approx(closed).epsilon(1e-11));
}
