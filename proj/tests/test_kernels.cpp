#include "ntklens/kernels.hpp"

#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

using namespace ntklens;

namespace {

Instance inst(std::vector<int> tokens, int label = 1) {
    Instance x;
    x.tokens = std::move(tokens);
    x.label = label;
    return x;
}

VarianceProfile flat_vars() {
    return VarianceProfile{}; // every sigma^2 = 0.01
}

// Arc-cosine closed forms for the window-kernel pieces. u and u' are sums
// of `total` iid N(0, s2) terms sharing `shared` of them, so they are
// jointly gaussian with variance total*s2 and correlation shared/total.
double arccos_f(int shared, int total, double s2) {
    const double c = static_cast<double>(shared) / total;
    const double sig2 = total * s2;
    return sig2 / (2 * std::numbers::pi) *
           (std::sqrt(1.0 - c * c) + c * (std::numbers::pi - std::acos(c)));
}

double arccos_h(int shared, int total) {
    const double c = static_cast<double>(shared) / total;
    return (std::numbers::pi - std::acos(c)) / (2 * std::numbers::pi);
}

} // namespace

TEST_CASE("relu token-kernel coefficients at the default variances") {
    const MlpKernelCoeffs c = mlp_kernel_coeffs(flat_vars());
    CHECK(c.rho == doctest::Approx(1.34085e-4).epsilon(1e-4));
    CHECK(c.mu == doctest::Approx(1.59155e-5).epsilon(1e-4));
    CHECK(c.rho > 0.0);
    CHECK(c.mu > 0.0);
}

TEST_CASE("mlp token kernel counts matches and length") {
    const VarianceProfile vars = flat_vars();
    const MlpKernelCoeffs c = mlp_kernel_coeffs(vars);
    // token 5 absent from a length-5 instance: only the shared part remains
    CHECK(converged_mlp_token(5, inst({1, 2, 3, 4, 1}), vars) ==
          doctest::Approx(5 * c.mu).epsilon(1e-12));
    // token 1 appears twice in the same instance
    CHECK(converged_mlp_token(1, inst({1, 2, 3, 4, 1}), vars) ==
          doctest::Approx(2 * c.rho + 5 * c.mu).epsilon(1e-12));
    CHECK_THROWS_AS(converged_mlp_token(0, inst({1}), vars), std::invalid_argument);
    CHECK_THROWS_AS(converged_mlp_token(1, inst({}), vars), std::invalid_argument);
}

TEST_CASE("mlp instance kernel is the token-kernel sum and is symmetric") {
    const VarianceProfile vars = flat_vars();
    const MlpKernelCoeffs c = mlp_kernel_coeffs(vars);
    const Instance a = inst({1, 2});
    const Instance b = inst({1, 1, 3});
    // matching ordered pairs: token 1 of a hits twice, token 2 never
    CHECK(converged_mlp_instance(a, b, vars) ==
          doctest::Approx(2 * c.rho + 6 * c.mu).epsilon(1e-12));
    CHECK(converged_mlp_instance(a, b, vars) ==
          doctest::Approx(converged_mlp_instance(b, a, vars)).epsilon(1e-12));
    // and it decomposes over the tokens of a
    double sum = 0.0;
    for (const int t : a.tokens) sum += converged_mlp_token(t, b, vars);
    CHECK(converged_mlp_instance(a, b, vars) == doctest::Approx(sum).epsilon(1e-12));
}

TEST_CASE("activation variants of the token kernel") {
    const VarianceProfile vars = flat_vars();
    const Instance x = inst({1, 2, 3, 4, 1});

    // relu variant is the closed form above
    CHECK(converged_mlp_variant(Activation::Relu, 1, x, vars) ==
          doctest::Approx(converged_mlp_token(1, x, vars)).epsilon(1e-12));

    // identity: 3 sigma^4 per occurrence, nothing from other tokens
    CHECK(converged_mlp_variant(Activation::Identity, 1, x, vars) ==
          doctest::Approx(6e-4).epsilon(1e-10));
    CHECK(converged_mlp_variant(Activation::Identity, 5, x, vars) == 0.0);

    // tanh is odd, so absent tokens contribute exactly zero; at these small
    // variances tanh sits in its linear regime and lands on the identity
    // value up to MC noise
    CHECK(converged_mlp_variant(Activation::Tanh, 5, x, vars) == 0.0);
    const double tanh_val = converged_mlp_variant(Activation::Tanh, 1, x, vars, 400'000);
    CHECK(tanh_val == doctest::Approx(6e-4).epsilon(0.02));
}

TEST_CASE("mv bigram kernel is ordered and counts adjacent pairs") {
    const VarianceProfile vars = flat_vars();
    // coefficient at flat 0.01 variances
    const double coeff = 4e-6;
    CHECK(converged_mv_bigram(1, 2, inst({1, 2}), vars) ==
          doctest::Approx(coeff).epsilon(1e-10));
    CHECK(converged_mv_bigram(1, 2, inst({2, 1}), vars) == 0.0);
    CHECK(converged_mv_bigram(1, 2, inst({1, 2, 1, 2}), vars) ==
          doctest::Approx(2 * coeff).epsilon(1e-10));
    CHECK(converged_mv_bigram(3, 4, inst({1, 2, 1, 2}), vars) == 0.0);
}

TEST_CASE("lrnn token-position kernel decays with distance") {
    const VarianceProfile vars = flat_vars();
    CHECK(lrnn_position_coeff(0, vars) == doctest::Approx(3e-4).epsilon(1e-10));
    CHECK(lrnn_position_coeff(1, vars) == doctest::Approx(4e-6).epsilon(1e-10));
    CHECK(lrnn_position_coeff(2, vars) < lrnn_position_coeff(1, vars));

    const Instance x = inst({3, 1}); // token 1 last, token 3 at distance 1
    CHECK(converged_lrnn_token_pos(1, 0, x, vars) ==
          doctest::Approx(lrnn_position_coeff(0, vars)).epsilon(1e-12));
    CHECK(converged_lrnn_token_pos(3, 1, x, vars) ==
          doctest::Approx(lrnn_position_coeff(1, vars)).epsilon(1e-12));
    CHECK(converged_lrnn_token_pos(1, 1, x, vars) == 0.0);
    CHECK(converged_lrnn_token_pos(2, 0, x, vars) == 0.0);
}

TEST_CASE("sa token kernel under uniform attention") {
    const VarianceProfile vars = flat_vars();
    const Instance x = inst({1, 2, 1, 3});
    const Matrix alpha = uniform_alpha(x.tokens.size());
    // each occurrence carries full column mass 1 under uniform rows
    CHECK(converged_sa_token(1, x, vars, alpha) == doctest::Approx(0.04).epsilon(1e-10));
    CHECK(converged_sa_token(4, x, vars, alpha) == 0.0);
}

TEST_CASE("estimated attention is stochastic rows near uniform at large width") {
    const VarianceProfile vars = flat_vars();
    const Instance x = inst({1, 2, 3});
    const Matrix a = estimate_alpha(x, vars, 2048, 128, RngStream(4));
    REQUIRE(a.rows() == 3);
    REQUIRE(a.cols() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        double total = 0.0;
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(a(i, j) > 0.0);
            CHECK(a(i, j) == doctest::Approx(1.0 / 3.0).epsilon(0.05));
            total += a(i, j);
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
    const Matrix single = estimate_alpha(inst({2}), vars, 64, 8, RngStream(1));
    CHECK(single(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("window-kernel pieces match the arc-cosine closed forms") {
    for (const double s2 : {1e-4, 1.0}) {
        for (int total = 1; total <= 8; ++total) {
            double prev_f = -1.0, prev_h = -1.0;
            for (int shared = 0; shared <= total; ++shared) {
                const double f = f_kernel(shared, total, s2);
                const double h = h_kernel(shared, total, s2);
                CHECK(f == doctest::Approx(arccos_f(shared, total, s2)).epsilon(1e-10));
                CHECK(h == doctest::Approx(arccos_h(shared, total)).epsilon(1e-10));
                CHECK(f > prev_f); // strictly increasing in the overlap
                CHECK(h > prev_h);
                prev_f = f;
                prev_h = h;
            }
            // exact anchors at the ends
            CHECK(f_kernel(0, total, s2) ==
                  doctest::Approx(total * s2 / (2 * std::numbers::pi)).epsilon(1e-12));
            CHECK(f_kernel(total, total, s2) == doctest::Approx(total * s2 / 2).epsilon(1e-12));
            CHECK(h_kernel(0, total, s2) == doctest::Approx(0.25).epsilon(1e-12));
            CHECK(h_kernel(total, total, s2) == doctest::Approx(0.5).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(f_kernel(3, 2, 0.01), std::invalid_argument);
    CHECK_THROWS_AS(f_kernel(0, 2, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(h_kernel(-1, 2, 0.01), std::invalid_argument);
}

TEST_CASE("monte carlo expectations agree with their anchors") {
    const double s2 = 0.01;

    // shared == total makes the step pair a fair coin
    const McEstimate ss = mc_expectation(McKind::StepStep, 3, 3, s2, 200'000, RngStream(2));
    CHECK(ss.samples == 200'000);
    CHECK(ss.std_error > 0.0);
    CHECK(std::abs(ss.mean - 0.5) < 4 * ss.std_error);

    const McEstimate sq = mc_expectation(McKind::StepSq, 2, 2, s2, 100'000, RngStream(3));
    CHECK(std::abs(sq.mean - 0.5) < 4 * sq.std_error);
    CHECK_THROWS_AS(mc_expectation(McKind::StepSq, 1, 2, s2, 1000, RngStream(1)),
                    std::invalid_argument);

    // independent relu pair: product of the half-gaussian means
    const McEstimate rr = mc_expectation(McKind::ReluRelu, 0, 4, s2, 400'000, RngStream(5));
    CHECK(std::abs(rr.mean - 4 * s2 / (2 * std::numbers::pi)) < 4 * rr.std_error);

    // tanh is odd, so independent draws are uncorrelated
    const McEstimate tt = mc_expectation(McKind::TanhTanh, 0, 4, s2, 400'000, RngStream(6));
    CHECK(std::abs(tt.mean) < 4 * tt.std_error);

    // and a mid-overlap cross-check against the closed forms
    const McEstimate fm = mc_expectation(McKind::ReluRelu, 2, 5, s2, 600'000, RngStream(7));
    CHECK(std::abs(fm.mean - f_kernel(2, 5, s2)) < 4 * fm.std_error);
    const McEstimate hm = mc_expectation(McKind::StepStep, 2, 5, s2, 600'000, RngStream(8));
    CHECK(std::abs(hm.mean - h_kernel(2, 5, s2)) < 4 * hm.std_error);

    CHECK_THROWS_AS(mc_expectation(McKind::StepStep, 0, 0, s2, 1000, RngStream(1)),
                    std::invalid_argument);
    CHECK_THROWS_AS(mc_expectation(McKind::StepStep, 0, 2, s2, 1, RngStream(1)),
                    std::invalid_argument);
}

TEST_CASE("cnn window kernel matches a brute-force window walk") {
    const VarianceProfile vars = flat_vars();
    const double s2 = vars.emb * vars.hidden;
    const double rho_c = vars.head * (vars.emb + vars.hidden);

    // K = 2, window (1,2) against the instance "1 2": three padded windows
    // [pad 1], [1 2], [2 pad] with overlaps 1, 2, 1 and aligned counts
    // 0, 2, 0.
    const double want =
        2 * f_kernel(1, 2, s2) + f_kernel(2, 2, s2) + 2 * rho_c * h_kernel(2, 2, s2);
    CHECK(converged_cnn_window({1, 2}, inst({1, 2}), vars) ==
          doctest::Approx(want).epsilon(1e-12));

    // disjoint vocab: l + K - 1 windows of pure F(0)
    CHECK(converged_cnn_window({1, 2, 3}, inst({4, 5}), vars) ==
          doctest::Approx(4 * f_kernel(0, 3, s2)).epsilon(1e-12));

    // growing overlap grows the kernel
    const double none = converged_cnn_window({1, 2, 3}, inst({4, 5, 6}), vars);
    const double one = converged_cnn_window({1, 2, 3}, inst({1, 5, 6}), vars);
    const double all = converged_cnn_window({1, 2, 3}, inst({1, 2, 3}), vars);
    CHECK(none < one);
    CHECK(one < all);

    CHECK_THROWS_AS(converged_cnn_window({1, 1, 2}, inst({1, 2}), vars),
                    std::invalid_argument);
    CHECK_THROWS_AS(converged_cnn_window({0, 0, 0}, inst({1, 2}), vars),
                    std::invalid_argument);
}

TEST_CASE("empirical ntk is a symmetric positive-semidefinite pairing") {
    ModelConfig cfg;
    cfg.kind = ModelKind::Mlp;
    cfg.width = 16;
    cfg.vocab_size = 8;
    Model m(cfg, RngStream(11));
    const Instance a = inst({1, 2, 3});
    const Instance b = inst({2, 5});
    CHECK(empirical_ntk(m, a, b) == doctest::Approx(empirical_ntk(m, b, a)).epsilon(1e-12));
    CHECK(empirical_ntk(m, a, a) >= 0.0);
    CHECK(empirical_ntk(m, b, b) >= 0.0);

    // unit-vs-instance pairing is the gradient dot product
    const std::vector<double> w{1.0};
    const TrackedUnit unit = TrackedUnit::token(2);
    const double direct =
        m.unit_score_gradient(unit, w).dot(m.score_gradient(a, w));
    CHECK(empirical_ntk(m, unit, a) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("wide mlp empirical kernel approaches the converged value") {
    ModelConfig cfg;
    cfg.kind = ModelKind::Mlp;
    cfg.width = 4096;
    cfg.vocab_size = 8;
    const Instance x = inst({1, 2, 3});
    const TrackedUnit unit = TrackedUnit::token(1);
    double avg = 0.0;
    const int seeds = 10;
    for (int s = 0; s < seeds; ++s) {
        Model m(cfg, RngStream(static_cast<std::uint64_t>(s)));
        avg += empirical_ntk(m, unit, x);
    }
    avg /= seeds;
    const double want = converged_mlp_token(1, x, flat_vars());
    CHECK(avg == doctest::Approx(want).epsilon(0.10));
}

TEST_CASE("kernel matrices are assembled from the scalar kernels") {
    Vocab v;
    Corpus c;
    c.num_classes = 2;
    c.instances.push_back(make_instance(v, {"alpha", "beta"}, 1));
    c.instances.push_back(make_instance(v, {"beta", "beta", "gamma"}, 0));
    const std::vector<TrackedUnit> units{TrackedUnit::token(v.id("beta")),
                                         TrackedUnit::token(v.id("gamma"))};

    KernelSpec spec;
    spec.model = ModelKind::Mlp;
    const KernelMatrix km = build_kernel_matrix(units, c, v, spec);
    REQUIRE(km.values.rows() == 2);
    REQUIRE(km.values.cols() == 2);
    CHECK(km.provenance == "converged");
    for (std::size_t u = 0; u < 2; ++u)
        for (std::size_t i = 0; i < 2; ++i)
            CHECK(km.values(u, i) ==
                  doctest::Approx(converged_mlp_token(units[u].tokens[0], c.instances[i],
                                                      spec.vars))
                      .epsilon(1e-12));

    // empirical provenance averages single-model pairings over seeds
    KernelSpec emp = spec;
    emp.provenance = KernelProvenance::Empirical;
    emp.width = 64;
    emp.seeds = 3;
    emp.seed = 9;
    const KernelMatrix ke = build_kernel_matrix(units, c, v, emp);
    CHECK(ke.provenance == "empirical(d=64,seeds=3)");
    ModelConfig mc;
    mc.kind = ModelKind::Mlp;
    mc.width = 64;
    mc.vocab_size = v.size();
    double want = 0.0;
    for (int s = 0; s < 3; ++s) {
        Model m(mc, RngStream(9).split(static_cast<std::uint64_t>(s)));
        want += empirical_ntk(m, units[0], c.instances[1]);
    }
    CHECK(ke.values(0, 1) == doctest::Approx(want / 3).epsilon(1e-12));

    CHECK_THROWS_AS(build_kernel_matrix({}, c, v, spec), std::invalid_argument);
    CHECK_THROWS_AS(build_kernel_matrix(units, Corpus{}, v, spec), std::invalid_argument);
}

TEST_CASE("instance kernel matrix is symmetric with the pairwise values") {
    Vocab v;
    Corpus c;
    c.num_classes = 2;
    c.instances.push_back(make_instance(v, {"a", "b"}, 1));
    c.instances.push_back(make_instance(v, {"b", "c"}, 0));
    c.instances.push_back(make_instance(v, {"c", "c", "a"}, 1));
    KernelSpec spec;
    const Matrix k = build_instance_kernel(c, spec);
    REQUIRE(k.rows() == 3);
    REQUIRE(k.cols() == 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(k(i, j) == doctest::Approx(k(j, i)).epsilon(1e-12));
            CHECK(k(i, j) ==
                  doctest::Approx(converged_mlp_instance(c.instances[i], c.instances[j],
                                                         spec.vars))
                      .epsilon(1e-12));
        }
}

TEST_CASE("probe grids give five units against four instances per kind") {
    for (const ModelKind kind :
         {ModelKind::Mlp, ModelKind::Cnn, ModelKind::Sa, ModelKind::Mv, ModelKind::Lrnn}) {
        const ProbeGrid g = make_probe_grid(kind);
        CHECK(g.units.size() == 5);
        CHECK(g.instances.size() == 4);
        ModelConfig cfg;
        cfg.kind = kind;
        cfg.width = 8;
        cfg.vocab_size = g.vocab.size();
        Model m(cfg, RngStream(1));
        for (const TrackedUnit &u : g.units) CHECK(m.supports_unit(u));
        for (const Instance &x : g.instances) CHECK_NOTHROW((void)m.binary_score(x));
    }
}

TEST_CASE("relative l1 error aggregates cellwise differences") {
    Matrix got(2, 2);
    got(0, 0) = 1.0;
    got(0, 1) = 2.0;
    got(1, 0) = 3.0;
    got(1, 1) = 4.0;
    Matrix want(2, 2);
    want(0, 0) = 1.0;
    want(0, 1) = 1.0;
    want(1, 0) = 3.0;
    want(1, 1) = 5.0;
    CHECK(relative_l1_error(got, want) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(relative_l1_error(want, want) == 0.0);
    CHECK_THROWS_AS(relative_l1_error(got, Matrix(1, 2)), std::invalid_argument);
}
