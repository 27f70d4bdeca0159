#include "ntklens/activations.hpp"
#include "ntklens/matrix.hpp"
#include "ntklens/ode.hpp"
#include "ntklens/rng.hpp"

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

using namespace ntklens;

TEST_CASE("matrix basic ops") {
    Matrix m(2, 3, 1.0);
    m(0, 1) = 4.0;
    CHECK(m.rows() == 2);
    CHECK(m.cols() == 3);
    CHECK(m(0, 1) == 4.0);

    std::vector<double> x{1.0, 2.0, 3.0};
    const auto y = matvec(m, x);
    CHECK(y[0] == doctest::Approx(1 + 8 + 3));
    CHECK(y[1] == doctest::Approx(6.0));

    const auto yt = matvec_t(m, std::vector<double>{1.0, 1.0});
    CHECK(yt[0] == doctest::Approx(2.0));
    CHECK(yt[1] == doctest::Approx(5.0));

    Matrix o(2, 2);
    o.add_outer(std::vector<double>{1.0, 2.0}, std::vector<double>{3.0, 4.0}, 0.5);
    CHECK(o(1, 0) == doctest::Approx(3.0));
    CHECK(o.frobenius_norm() ==
          doctest::Approx(std::sqrt(1.5 * 1.5 + 2.0 * 2.0 + 3.0 * 3.0 + 4.0 * 4.0)));

    CHECK_THROWS_AS(matvec(m, std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("rng determinism and splitting") {
    RngStream a(7), b(7);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    // children are reproducible and do not collide with the parent sequence
    RngStream p(7);
    RngStream c1 = p.split(1), c1b = RngStream(7).split(1), c2 = p.split(2);
    CHECK(c1.next_u64() == c1b.next_u64());
    CHECK(c1.next_u64() != c2.next_u64());

    RngStream u(3);
    for (int i = 0; i < 1000; ++i) {
        const double v = u.next_unit();
        CHECK(v >= 0.0);
        CHECK(v < 1.0);
        const double w = u.next_unit_open();
        CHECK(w > 0.0);
        CHECK(w <= 1.0);
    }
    RngStream n(4);
    for (int i = 0; i < 1000; ++i) CHECK(n.next_below(7) < 7);
}

TEST_CASE("gaussian draws: moments and KS test") {
    RngStream rng(11);
    const std::size_t n = 100'000;
    std::vector<double> xs(n);
    double sum = 0.0, sumsq = 0.0;
    for (auto &x : xs) {
        x = rng.next_gaussian();
        sum += x;
        sumsq += x * x;
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    CHECK(std::abs(mean) < 1e-2);
    CHECK(var == doctest::Approx(1.0).epsilon(0.02));

    // Kolmogorov-Smirnov against the normal CDF, alpha = 0.001
    std::sort(xs.begin(), xs.end());
    double d_stat = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double cdf = 0.5 * std::erfc(-xs[i] / std::sqrt(2.0));
        d_stat = std::max(d_stat, std::abs(cdf - (i + 1.0) / n));
        d_stat = std::max(d_stat, std::abs(cdf - static_cast<double>(i) / n));
    }
    CHECK(d_stat < 1.949 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("scaled gaussian moments track the requested variance") {
    // mirrors how model blocks are filled: sigma * standard normal
    RngStream rng(5);
    const double sigma = std::sqrt(0.01);
    double sum = 0.0, sumsq = 0.0;
    const int n = 1'000'000;
    for (int i = 0; i < n; ++i) {
        const double v = sigma * rng.next_gaussian();
        sum += v;
        sumsq += v * v;
    }
    CHECK(std::abs(sum / n) < 1e-3);
    CHECK(sumsq / n == doctest::Approx(0.01).epsilon(0.1));
}

TEST_CASE("activation values") {
    CHECK(activate(Activation::Relu, -1.0) == 0.0);
    CHECK(activate(Activation::Relu, 0.0) == 0.0);
    CHECK(activate(Activation::Relu, 2.0) == 2.0);
    CHECK(activate(Activation::Step, -1.0) == 0.0);
    CHECK(activate(Activation::Step, 0.0) == 0.0);
    CHECK(activate(Activation::Step, 2.0) == 1.0);
    CHECK(activate(Activation::Identity, 3.5) == 3.5);
    CHECK(activate(Activation::Tanh, 0.7) == doctest::Approx(std::tanh(0.7)));
    // gelu/silu standard values
    CHECK(activate(Activation::Silu, 1.0) == doctest::Approx(1.0 / (1.0 + std::exp(-1.0))));
    CHECK(activate(Activation::Gelu, 0.0) == doctest::Approx(0.0));
    CHECK(activate(Activation::Gelu, 10.0) == doctest::Approx(10.0).epsilon(1e-6));

    CHECK(activation_from_name("relu") == Activation::Relu);
    CHECK_THROWS_AS(activation_from_name("swishish"), std::invalid_argument);
    CHECK_THROWS_AS(activate_deriv(Activation::Step, 1.0), std::invalid_argument);
}

TEST_CASE("activation derivatives match finite differences") {
    const double h = 1e-6;
    for (const Activation a :
         {Activation::Relu, Activation::Identity, Activation::Tanh, Activation::Gelu,
          Activation::Silu}) {
        for (const double x : {-1.7, -0.3, 0.4, 1.1, 2.9}) {
            const double fd = (activate(a, x + h) - activate(a, x - h)) / (2 * h);
            CHECK(activate_deriv(a, x) == doctest::Approx(fd).epsilon(1e-5));
        }
    }
}

TEST_CASE("sigmoid and softmax stability") {
    CHECK(sigmoid(0.0) == doctest::Approx(0.5));
    CHECK(sigmoid(800.0) == doctest::Approx(1.0));
    CHECK(sigmoid(-800.0) == doctest::Approx(0.0));
    CHECK(softplus(-800.0) == doctest::Approx(0.0));
    CHECK(softplus(800.0) == doctest::Approx(800.0));

    const auto p = softmax(std::vector<double>{1000.0, 1001.0, 999.0});
    double total = 0.0;
    for (const double v : p) {
        CHECK(std::isfinite(v));
        total += v;
    }
    CHECK(total == doctest::Approx(1.0));
    CHECK(p[1] > p[0]);
    CHECK(p[0] > p[2]);
}

TEST_CASE("ode_step pinned small cases") {
    const DriftFn decay = [](const std::vector<double> &s) {
        return std::vector<double>{-s[0]};
    };
    const DriftFn zero = [](const std::vector<double> &s) {
        return std::vector<double>(s.size(), 0.0);
    };

    std::vector<double> s{1.0};
    ode_step(zero, s, 0.1, OdeMethod::Euler);
    CHECK(s[0] == 1.0);

    s = {1.0};
    ode_step(decay, s, 0.1, OdeMethod::Euler);
    CHECK(s[0] == doctest::Approx(0.9));

    s = {1.0};
    ode_step(decay, s, 0.1, OdeMethod::Rk4);
    CHECK(s[0] == doctest::Approx(0.9048375).epsilon(1e-7));
}

TEST_CASE("rk4 is fourth order on exponential decay") {
    const DriftFn decay = [](const std::vector<double> &s) {
        return std::vector<double>{-s[0]};
    };
    const auto err_at = [&](double dt, int steps) {
        std::vector<double> s{1.0};
        for (int i = 0; i < steps; ++i) ode_step(decay, s, dt, OdeMethod::Rk4);
        return std::abs(s[0] - std::exp(-dt * steps));
    };
    const double coarse = err_at(0.2, 10);
    const double fine = err_at(0.1, 20);
    CHECK(coarse / fine >= 15.0); // halving dt cuts a 4th-order error ~16x
}

TEST_CASE("ode_step rejects non-finite drift") {
    const DriftFn bad = [](const std::vector<double> &s) {
        return std::vector<double>{s[0] * std::numeric_limits<double>::infinity()};
    };
    std::vector<double> s{1.0};
    CHECK_THROWS_AS(ode_step(bad, s, 0.1, OdeMethod::Rk4), NumericError);
}
