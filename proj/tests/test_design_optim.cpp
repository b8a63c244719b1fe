#include <doctest.h>

#include <cmath>

#include "ckg/design_optim.hpp"

using namespace ckg;

TEST_CASE("lhs_sample stratification") {
    Vector lo(1), hi(1);
    lo << 0.0;
    hi << 4.0;
    BoxDomain dom(lo, hi);

    auto single = lhs_sample(dom, 1, 3);
    REQUIRE(single.size() == 1);
    CHECK(dom.contains(single[0]));

    auto pts = lhs_sample(dom, 4, 42);
    std::vector<int> counts(4, 0);
    for (const auto& p : pts) counts[std::min(3, static_cast<int>(p[0]))]++;
    for (int c : counts) CHECK(c == 1);
}

TEST_CASE("lhs_sample per-axis stratification in 2d") {
    BoxDomain dom = BoxDomain::unit_cube(2);
    const int n = 50;
    auto pts = lhs_sample(dom, n, 7);
    for (int axis = 0; axis < 2; ++axis) {
        std::vector<int> counts(n, 0);
        for (const auto& p : pts)
            counts[std::min(n - 1, static_cast<int>(p[axis] * n))]++;
        for (int c : counts) CHECK(c == 1);
    }
}

TEST_CASE("lhs_sample seed determinism") {
    BoxDomain dom = BoxDomain::unit_cube(3);
    auto a = lhs_sample(dom, 20, 99);
    auto b = lhs_sample(dom, 20, 99);
    for (int i = 0; i < 20; ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("maximize_bounded finds interior quadratic peak") {
    Vector lo(2), hi(2);
    lo << -1.0, -1.0;
    hi << 2.0, 2.0;
    BoxDomain dom(lo, hi);
    Vector centre(2);
    centre << 0.3, 0.7;
    auto fn = [&](const Vector& x) { return -(x - centre).squaredNorm(); };
    OptResult r = maximize_bounded(fn, dom, {}, 1);
    CHECK((r.argmax - centre).norm() <= 1e-4);
}

TEST_CASE("maximize_bounded clamps boundary maximum") {
    BoxDomain dom = BoxDomain::unit_cube(1);
    auto fn = [](const Vector& x) { return x[0]; };
    OptResult r = maximize_bounded(fn, dom, {}, 2);
    CHECK(r.argmax[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.argmax[0] <= 1.0);
}

TEST_CASE("maximize_bounded beats its screening set and a fine grid") {
    Vector lo(1), hi(1);
    lo << 0.0;
    hi << 5.0;
    BoxDomain dom(lo, hi);
    auto fn = [](const Vector& x) {
        return std::sin(3.0 * x[0]) + 0.5 * std::cos(7.0 * x[0]);
    };
    OptimizerConfig cfg{.starts = 5, .max_evals_per_start = 400, .tolerance = 1e-7,
                        .screening_grid_size = 100};
    OptResult r = maximize_bounded(fn, dom, cfg, 5);
    double grid_best = -1e300;
    for (int i = 0; i < 10000; ++i) {
        Vector x(1);
        x << 5.0 * i / 9999.0;
        grid_best = std::max(grid_best, fn(x));
    }
    CHECK(r.value >= grid_best - 1e-3);
    CHECK(dom.contains(r.argmax));
}

TEST_CASE("maximize_bounded abandons non-finite starts") {
    BoxDomain dom = BoxDomain::unit_cube(1);
    auto fn = [](const Vector& x) {
        return x[0] < 0.5 ? x[0] : std::numeric_limits<double>::quiet_NaN();
    };
    OptResult r = maximize_bounded(fn, dom, {}, 3);
    CHECK(std::isfinite(r.value));
    CHECK(r.argmax[0] < 0.5);
}

TEST_CASE("maximize_bounded seed determinism") {
    BoxDomain dom = BoxDomain::unit_cube(2);
    auto fn = [](const Vector& x) { return -x.squaredNorm() + std::sin(5 * x[0]); };
    OptResult a = maximize_bounded(fn, dom, {}, 77);
    OptResult b = maximize_bounded(fn, dom, {}, 77);
    CHECK(a.argmax == b.argmax);
    CHECK(a.value == b.value);
}
