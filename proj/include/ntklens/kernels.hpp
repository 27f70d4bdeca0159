#pragma once

#include "ntklens/corpus.hpp"
#include "ntklens/matrix.hpp"
#include "ntklens/model.hpp"
#include "ntklens/rng.hpp"
#include "ntklens/units.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ntklens {

// ---- finite width ----

// Inner product of score gradients over all trainable parameters.
// Single-head models only.
double empirical_ntk(const Model &model, const TrackedUnit &unit, const Instance &x);
double empirical_ntk(const Model &model, const Instance &a, const Instance &b);

// ---- infinite-width limits ----

// Per-token coefficients of the ReLU token kernel: value for an instance is
// rho * (occurrences of the token) + mu * (instance length).
struct MlpKernelCoeffs {
    double rho = 0.0; // class-signal part, multiplies matches
    double mu = 0.0;  // shared part, multiplies length
};
MlpKernelCoeffs mlp_kernel_coeffs(const VarianceProfile &vars);

double converged_mlp_token(int token, const Instance &x, const VarianceProfile &vars);
double converged_mlp_instance(const Instance &a, const Instance &b, const VarianceProfile &vars);

// Token kernel for other activations (relu, identity, tanh; tanh terms are
// Monte Carlo estimates cached per embedding-product variance).
double converged_mlp_variant(Activation act, int token, const Instance &x,
                             const VarianceProfile &vars, std::size_t mc_samples = 2'000'000);

// Window-kernel pieces. s2 is the per-token product variance; shared is the
// position-insensitive count of common tokens between two windows of
// `total` slots. Exact at shared == 0 and shared == total.
double f_kernel(int shared, int total, double s2);
double h_kernel(int shared, int total, double s2);

// Window kernel: sum over all padded instance windows of
// F(overlap) + rho_c * H(overlap) * (slot-aligned matches), with
// rho_c = head variance * (embedding variance + conv variance). Padding
// never matches and windows are treated as full-variance.
double converged_cnn_window(const std::vector<int> &window, const Instance &x,
                            const VarianceProfile &vars);

// Attention weights at initialization: uniform rows (the infinite-width
// limit of vanishing logits) or a Monte Carlo average over fresh draws at a
// probe width.
Matrix uniform_alpha(std::size_t length);
Matrix estimate_alpha(const Instance &x, const VarianceProfile &vars, int probe_width,
                      int samples, RngStream rng);

double converged_sa_token(int token, const Instance &x, const VarianceProfile &vars,
                          const Matrix &alpha);

// Ordered adjacent-pair kernel.
double converged_mv_bigram(int first, int second, const Instance &x,
                           const VarianceProfile &vars);

// Token-at-distance kernel; distance counts back from the last token.
double converged_lrnn_token_pos(int token, int distance, const Instance &x,
                                const VarianceProfile &vars);
double lrnn_position_coeff(int distance, const VarianceProfile &vars);

// ---- Monte Carlo expectations ----

// u is a sum of `total` iid N(0, s2) draws, u' shares the first `shared` of
// them and redraws the rest. Estimates E[g(u) h(u')] for the pairs below.
enum class McKind {
    ReluRelu, // g = h = max(0, .)
    StepStep, // g = h = 1[. > 0]
    TanhTanh, // g = h = tanh
    TanhSq,   // g = h = 1 - tanh^2  (tanh derivative)
    StepSq,   // g = h = 1[. > 0], shared must equal total (sanity anchor)
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
};

McEstimate mc_expectation(McKind kind, int shared, int total, double s2, std::size_t samples,
                          RngStream rng);

// ---- kernel matrices ----

enum class KernelProvenance { Converged, Empirical };

struct KernelSpec {
    ModelKind model = ModelKind::Mlp;
    VarianceProfile vars;
    Activation activation = Activation::Relu; // converged token-kernel variant
    KernelProvenance provenance = KernelProvenance::Converged;

    // empirical options
    int width = 1024;
    int seeds = 10;
    std::uint64_t seed = 0;

    // model shape options
    int kernel_size = 3;
    int cnn_token_slot = 0;
    int max_positions = 256;

    // sa attention estimate
    bool sa_uniform_alpha = true;
    int alpha_probe_width = 1024;
    int alpha_samples = 256;

    std::size_t mc_samples = 2'000'000;
};

struct KernelMatrix {
    std::vector<TrackedUnit> units;
    std::size_t num_instances = 0;
    Matrix values; // units x instances
    std::string provenance;
};

KernelMatrix build_kernel_matrix(const std::vector<TrackedUnit> &units, const Corpus &corpus,
                                 const Vocab &vocab, const KernelSpec &spec);

// Instance x instance kernel (converged provenance only).
Matrix build_instance_kernel(const Corpus &corpus, const KernelSpec &spec);

void write_kernel_csv(const std::string &path, const KernelMatrix &km, const Vocab &vocab);
std::string kernel_csv(const KernelMatrix &km, const Vocab &vocab);

// ---- convergence probes ----

// Fixed 5-unit x 4-instance grid per model kind for finite-vs-infinite
// width comparisons.
struct ProbeGrid {
    Vocab vocab;
    std::vector<Instance> instances;
    std::vector<TrackedUnit> units;
};

ProbeGrid make_probe_grid(ModelKind kind, int kernel_size = 3);

// Aggregate relative L1 error: sum |got - want| / sum |want|. Stays defined
// when individual reference cells are zero.
double relative_l1_error(const Matrix &got, const Matrix &want);

} // namespace ntklens
