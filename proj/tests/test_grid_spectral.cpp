#include <doctest.h>

#include "invevo/errors.hpp"
#include "invevo/grid.hpp"
#include "invevo/spectral.hpp"
#include "test_support.hpp"

#include <cmath>
#include <random>

using namespace invevo;
using namespace invevo::testing;

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(Grid(1, 7), ArgumentError);
    CHECK_THROWS_AS(Grid(1, 6), ArgumentError);
    CHECK_THROWS_AS(Grid(3, 16), ArgumentError);
    CHECK_THROWS_AS(Grid(0, 16), ArgumentError);
    const Grid g(2, 64);
    CHECK(g.size() == 64u * 64u);
    CHECK(g.h() * g.n() == 1.0);
    CHECK(Grid(1, 256).h() * 256 == 1.0);
}

TEST_CASE("field layout is (y, x) with x fastest") {
    const Grid g(2, 8);
    const Field f = Field::sample(g, [](double x, double y) { return x + 10.0 * y; });
    CHECK(f[1] == doctest::Approx(g.h()));
    CHECK(f[8] == doctest::Approx(10.0 * g.h()));
    CHECK_THROWS_AS(Field(g, std::vector<double>(10)), ArgumentError);
    CHECK_THROWS_AS(Field::sample(g, [](double x) { return x; }), ArgumentError);
}

TEST_CASE("discrete L2 norm uses h^dim quadrature") {
    const Grid g(1, 16);
    CHECK(norm_l2(Field::constant(g, 2.0)) == doctest::Approx(2.0));
    const Grid g2(2, 16);
    CHECK(norm_l2(Field::constant(g2, 3.0)) == doctest::Approx(3.0));
    const Field s = Field::sample(g, [](double x) { return std::sin(kTwoPi * x); });
    CHECK(norm_l2(s) == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("wavenumbers antisymmetric except zero and Nyquist") {
    for (int n : {8, 16, 64}) {
        auto& ws = workspace_for(Grid(1, n));
        const auto& k = ws.wavenumbers();
        REQUIRE(k.size() == static_cast<std::size_t>(n));
        CHECK(k[0] == 0.0);
        CHECK(ws.frequencies()[n / 2] == -n / 2);
        for (int i = 1; i < n / 2; ++i) CHECK(k[i] == -k[n - i]);
        CHECK(k[1] == doctest::Approx(kTwoPi));
    }
}

TEST_CASE("dealias mask keeps exactly |freq| <= n/3") {
    const Grid g(2, 24);
    auto& ws = workspace_for(g);
    for (std::size_t idx = 0; idx < ws.spectral_size(); ++idx) {
        const bool expect = std::abs(ws.freq_along(idx, 0)) * 3 <= 24 && std::abs(ws.freq_along(idx, 1)) * 3 <= 24;
        CHECK(ws.keep(idx) == expect);
    }
}

TEST_CASE("transform round trip") {
    const Grid g(2, 32);
    const Field f = band_limited(g, 5, 3);
    auto& ws = workspace_for(g);
    const Field back = ws.inverse(ws.forward(f));
    CHECK(relative_l2(back, f) < 1e-14);
}

TEST_CASE("fd_derivative") {
    SUBCASE("constant gives zero") {
        for (int dim : {1, 2}) {
            const Field c = Field::constant(Grid(dim, 16), 3.5);
            for (int axis = 0; axis < dim; ++axis) {
                for (int order : {1, 2}) CHECK(max_abs(fd_derivative(c, axis, order)) == 0.0);
            }
        }
    }
    SUBCASE("linear ramp wraps around") {
        const int n = 16;
        const Grid g(1, n);
        const Field f = Field::sample(g, [](double x) { return x; });
        const Field d = fd_derivative(f, 0, 1);
        for (int i = 1; i < n - 1; ++i) CHECK(d[i] == doctest::Approx(1.0));
        // (h − (n−1)h)/(2h) at both ends of the wrap.
        CHECK(d[0] == doctest::Approx((2.0 - n) / 2.0));
        CHECK(d[n - 1] == doctest::Approx((2.0 - n) / 2.0));
    }
    SUBCASE("second derivative of sine within Taylor bound") {
        const Grid g(1, 256);
        const Field s = Field::sample(g, [](double x) { return std::sin(kTwoPi * x); });
        const Field d2 = fd_derivative(s, 0, 2);
        const Field exact = -(kTwoPi * kTwoPi) * s;
        const double bound = std::pow(kTwoPi, 4) * g.h() * g.h() / 12.0;
        CHECK(max_abs(d2 - exact) <= bound);
        CHECK(bound == doctest::Approx(2.0e-3).epsilon(0.05));
    }
    SUBCASE("error quarters when n doubles") {
        for (int order : {1, 2}) {
            double prev = 0.0;
            for (int n : {32, 64, 128, 256}) {
                const Grid g(1, n);
                const Field s = Field::sample(g, [](double x) { return std::sin(kTwoPi * x); });
                const Field exact = order == 1 ? Field::sample(g, [](double x) { return kTwoPi * std::cos(kTwoPi * x); })
                                               : -(kTwoPi * kTwoPi) * s;
                const double err = max_abs(fd_derivative(s, 0, order) - exact);
                if (prev > 0.0) CHECK(prev / err == doctest::Approx(4.0).epsilon(0.1));
                prev = err;
            }
        }
    }
    SUBCASE("invalid axis or order") {
        const Field f(Grid(1, 16));
        CHECK_THROWS_AS(fd_derivative(f, 1, 1), ArgumentError);
        CHECK_THROWS_AS(fd_derivative(f, 0, 3), ArgumentError);
        CHECK_THROWS_AS(sp_derivative(f, 0, 0), ArgumentError);
    }
}

TEST_CASE("sp_derivative") {
    const Grid g(1, 64);
    const Field s = Field::sample(g, [](double x) { return std::sin(kTwoPi * x); });
    const Field c = Field::sample(g, [](double x) { return kTwoPi * std::cos(kTwoPi * x); });
    CHECK(max_abs(sp_derivative(s, 0, 1) - c) < 1e-12);
    CHECK(max_abs(sp_derivative(s, 0, 2) + (kTwoPi * kTwoPi) * s) < 1e-10);

    SUBCASE("pure Nyquist mode has zero first derivative") {
        const Field nyq = Field::sample(g, [&](double x) { return std::cos(kTwoPi * 32 * x); });
        CHECK(max_abs(sp_derivative(nyq, 0, 1)) < 1e-12);
    }
    SUBCASE("exact on band-limited data against analytic derivative") {
        const Grid g2(2, 48);
        std::mt19937_64 rng(5);
        std::normal_distribution<double> nd;
        const double a = nd(rng), b = nd(rng);
        const Field f = Field::sample(g2, [&](double x, double y) {
            return a * std::sin(kTwoPi * (3 * x + 7 * y)) + b * std::cos(kTwoPi * (16 * x - 2 * y));
        });
        const Field fx = Field::sample(g2, [&](double x, double y) {
            return kTwoPi * (3 * a * std::cos(kTwoPi * (3 * x + 7 * y)) - 16 * b * std::sin(kTwoPi * (16 * x - 2 * y)));
        });
        const Field fyy = Field::sample(g2, [&](double x, double y) {
            return -kTwoPi * kTwoPi * (49 * a * std::sin(kTwoPi * (3 * x + 7 * y)) + 4 * b * std::cos(kTwoPi * (16 * x - 2 * y)));
        });
        CHECK(relative_l2(sp_derivative(f, 0, 1), fx) < 1e-10);
        CHECK(relative_l2(sp_derivative(f, 1, 2), fyy) < 1e-10);
    }
}

TEST_CASE("shift commutes with differentiation") {
    for (int dim : {1, 2}) {
        const Grid g(dim, 32);
        const Field f = band_limited(g, 6, 11 + dim);
        for (Disc disc : {Disc::FiniteDifference, Disc::PseudoSpectral}) {
            for (int axis = 0; axis < dim; ++axis) {
                for (int order : {1, 2}) {
                    const Field a = derivative(cyclic_shift(f, 5, axis), axis, order, disc);
                    const Field b = cyclic_shift(derivative(f, axis, order, disc), 5, axis);
                    CHECK(max_abs(a - b) <= 1e-11 * (1.0 + max_abs(b)));
                }
            }
        }
    }
}

TEST_CASE("laplacian") {
    CHECK(max_abs(laplacian(Field::constant(Grid(2, 16), 2.0), Disc::FiniteDifference)) == 0.0);
    CHECK(max_abs(laplacian(Field::constant(Grid(2, 16), 2.0), Disc::PseudoSpectral)) < 1e-12);
    const Grid g(2, 32);
    const Field e = Field::sample(g, [](double x, double y) { return std::sin(kTwoPi * x) * std::sin(kTwoPi * y); });
    CHECK(max_abs(laplacian(e, Disc::PseudoSpectral) + 2.0 * kTwoPi * kTwoPi * e) < 1e-10);

    SUBCASE("FD and spectral agree to O(h^2)") {
        double prev = 0.0;
        for (int n : {32, 64, 128}) {
            const Grid gn(2, n);
            const Field f = band_limited(gn, 3, 17);
            const double diff = relative_l2(laplacian(f, Disc::FiniteDifference), laplacian(f, Disc::PseudoSpectral));
            // Leading FD error is k^4 h^2 / 12 relative to k^2, k <= 3·2π·sqrt(2).
            CHECK(diff <= std::pow(3.0 * kTwoPi * std::sqrt(2.0), 2) * gn.h() * gn.h() / 12.0);
            if (prev > 0.0) CHECK(prev / diff == doctest::Approx(4.0).epsilon(0.1));
            prev = diff;
        }
    }
}

TEST_CASE("poisson_inverse") {
    const Grid g(2, 32);
    const Field s = Field::sample(g, [](double x, double y) { return std::sin(kTwoPi * x) * std::sin(kTwoPi * y); });
    const Field psi = poisson_inverse(-1.0 * s);
    CHECK(max_abs(psi - (1.0 / (2.0 * kTwoPi * kTwoPi)) * s) < 1e-15);
    CHECK(max_abs(poisson_inverse(Field(g))) == 0.0);
    CHECK_THROWS_AS(poisson_inverse(Field::constant(g, 1e-6)), SolvabilityError);

    const Field r = zero_mean(band_limited(g, 10, 23));
    CHECK(relative_l2(laplacian(poisson_inverse(r), Disc::PseudoSpectral), r) <= 1e-12);
    const Field q = zero_mean(band_limited(g, 8, 29));
    CHECK(relative_l2(poisson_inverse(laplacian(q, Disc::PseudoSpectral)), q) <= 1e-12);
    CHECK(relative_l2(poisson_inverse(laplacian(zero_mean(band_limited(Grid(1, 64), 12, 31)), Disc::PseudoSpectral)),
                      zero_mean(band_limited(Grid(1, 64), 12, 31))) <= 1e-12);
}

TEST_CASE("dealias") {
    const Grid g(2, 32);
    const Field low = band_limited(g, 8, 41);
    CHECK(relative_l2(dealias(low), low) < 1e-14);
    const Field nyq = Field::sample(g, [](double x, double) { return std::cos(kTwoPi * 16 * x); });
    CHECK(max_abs(dealias(nyq)) < 1e-14);
    const Field mixed = band_limited(g, 15, 43);
    const Field once = dealias(mixed);
    CHECK(dealias(once) == once);
    CHECK(relative_l2(once, mixed) > 1e-3);
}
