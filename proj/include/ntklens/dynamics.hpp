#pragma once

#include "ntklens/matrix.hpp"
#include "ntklens/ode.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace ntklens {

struct DivergedError : std::runtime_error {
    DivergedError(int step_, double value_)
        : std::runtime_error("score dynamics diverged at step " + std::to_string(step_)),
          step(step_), value(value_) {}
    int step;
    double value;
};

// Kernel between two index sets where every pair carries an L x L matrix.
// The usual case is isotropic: scalar value times identity.
class MulticlassKernel {
public:
    static MulticlassKernel isotropic(Matrix values, int num_classes);
    // blocks in row-major pair order, each L x L
    static MulticlassKernel full(std::size_t rows, std::size_t cols, int num_classes,
                                 std::vector<Matrix> blocks);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    int classes() const { return classes_; }
    bool is_isotropic() const { return iso_; }
    const Matrix &values() const; // isotropic only

    // out[i*L + a] += sum_j sum_b block(i,j)[a,b] * w[j*L + b]
    void accumulate(std::vector<double> &out, const std::vector<double> &w) const;

private:
    bool iso_ = true;
    std::size_t rows_ = 0, cols_ = 0;
    int classes_ = 1;
    Matrix values_;
    std::vector<Matrix> blocks_;
};

struct DynamicsConfig {
    OdeMethod method = OdeMethod::Rk4;
    double dt = 0.1;
    int steps = 2000;        // dt * steps = simulated horizon
    int record_stride = 10;  // record every n-th step (plus step 0)
    double divergence_cap = 1e6;
};

struct SimSetup {
    MulticlassKernel train;   // m x m
    MulticlassKernel tracked; // u x m
    std::vector<int> labels;  // class ids, 0/1 for binary
    int heads = 1;            // 1 = binary sigmoid dynamics, L >= 2 = softmax
    std::vector<double> init_train;   // empty = zeros, else m * heads
    std::vector<double> init_tracked; // empty = zeros, else u * heads
};

struct SimTrace {
    int heads = 1;
    std::vector<double> times;
    Matrix train_scores;   // one row per record, m * heads columns
    Matrix tracked_scores; // one row per record, u * heads columns
};

// Drift of [train scores, tracked scores] under frozen kernels.
// Binary (heads == 1): ds_a/dt = (1/m) sum_x K(a,x) g(-y_x s_x) y_x.
// Softmax (heads == L): ds_a/dt = (1/m) sum_x K(a,x) (onehot(y_x) - p_x).
std::vector<double> score_drift(const std::vector<double> &state, const SimSetup &setup);

SimTrace simulate(const SimSetup &setup, const DynamicsConfig &config);

// Long CSV: t,series,name,class,score. Train rows are named by index.
std::string sim_trace_csv(const SimTrace &trace, const std::vector<std::string> &tracked_names);
void write_sim_trace_csv(const std::string &path, const SimTrace &trace,
                         const std::vector<std::string> &tracked_names);

} // namespace ntklens
