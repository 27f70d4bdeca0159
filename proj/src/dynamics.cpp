#include "ntklens/dynamics.hpp"

#include "ntklens/activations.hpp"
#include "ntklens/errors.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace ntklens {

MulticlassKernel MulticlassKernel::isotropic(Matrix values, int num_classes) {
    if (num_classes < 1) throw std::invalid_argument("num_classes must be >= 1");
    MulticlassKernel k;
    k.iso_ = true;
    k.rows_ = values.rows();
    k.cols_ = values.cols();
    k.classes_ = num_classes;
    k.values_ = std::move(values);
    return k;
}

MulticlassKernel MulticlassKernel::full(std::size_t rows, std::size_t cols, int num_classes,
                                        std::vector<Matrix> blocks) {
    if (num_classes < 1) throw std::invalid_argument("num_classes must be >= 1");
    if (blocks.size() != rows * cols) throw std::invalid_argument("block count mismatch");
    const auto L = static_cast<std::size_t>(num_classes);
    for (const Matrix &b : blocks)
        if (b.rows() != L || b.cols() != L) throw std::invalid_argument("block shape mismatch");
    MulticlassKernel k;
    k.iso_ = false;
    k.rows_ = rows;
    k.cols_ = cols;
    k.classes_ = num_classes;
    k.blocks_ = std::move(blocks);
    return k;
}

const Matrix &MulticlassKernel::values() const {
    if (!iso_) throw std::invalid_argument("full kernel has no scalar values");
    return values_;
}

void MulticlassKernel::accumulate(std::vector<double> &out, const std::vector<double> &w) const {
    const auto L = static_cast<std::size_t>(classes_);
    if (out.size() != rows_ * L || w.size() != cols_ * L)
        throw std::invalid_argument("kernel accumulate shape mismatch");
    if (iso_) {
        for (std::size_t i = 0; i < rows_; ++i) {
            const double *row = values_.row_ptr(i);
            for (std::size_t j = 0; j < cols_; ++j) {
                const double v = row[j];
                if (v == 0.0) continue;
                for (std::size_t a = 0; a < L; ++a) out[i * L + a] += v * w[j * L + a];
            }
        }
        return;
    }
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) {
            const Matrix &b = blocks_[i * cols_ + j];
            for (std::size_t a = 0; a < L; ++a)
                for (std::size_t c = 0; c < L; ++c)
                    out[i * L + a] += b(a, c) * w[j * L + c];
        }
}

namespace {

void validate_setup(const SimSetup &setup) {
    const std::size_t m = setup.train.cols();
    if (setup.train.rows() != m) throw std::invalid_argument("train kernel must be square");
    if (setup.tracked.cols() != m) throw std::invalid_argument("tracked kernel column mismatch");
    if (setup.labels.size() != m) throw std::invalid_argument("label count mismatch");
    if (setup.heads < 1) throw std::invalid_argument("heads must be >= 1");
    if (setup.train.classes() != setup.heads || setup.tracked.classes() != setup.heads)
        throw std::invalid_argument("kernel class count must match heads");
    for (int y : setup.labels)
        if (y < 0 || (setup.heads == 1 ? y > 1 : y >= setup.heads))
            throw std::invalid_argument("label out of range");
    const std::size_t L = setup.heads == 1 ? 1 : static_cast<std::size_t>(setup.heads);
    if (!setup.init_train.empty() && setup.init_train.size() != m * L)
        throw std::invalid_argument("init_train size mismatch");
    if (!setup.init_tracked.empty() && setup.init_tracked.size() != setup.tracked.rows() * L)
        throw std::invalid_argument("init_tracked size mismatch");
}

} // namespace

std::vector<double> score_drift(const std::vector<double> &state, const SimSetup &setup) {
    const std::size_t m = setup.train.cols();
    const std::size_t u = setup.tracked.rows();
    const auto L = static_cast<std::size_t>(setup.heads);
    if (state.size() != (m + u) * L) throw std::invalid_argument("state size mismatch");
    const double inv_m = 1.0 / static_cast<double>(m);

    // Per-instance loss weights.
    std::vector<double> w(m * L, 0.0);
    if (setup.heads == 1) {
        for (std::size_t x = 0; x < m; ++x) {
            const double y = setup.labels[x] == 1 ? 1.0 : -1.0;
            w[x] = inv_m * y * sigmoid(-y * state[x]);
        }
    } else {
        std::vector<double> s(L);
        for (std::size_t x = 0; x < m; ++x) {
            for (std::size_t a = 0; a < L; ++a) s[a] = state[x * L + a];
            const std::vector<double> p = softmax(s);
            for (std::size_t a = 0; a < L; ++a) {
                const double y = static_cast<std::size_t>(setup.labels[x]) == a ? 1.0 : 0.0;
                w[x * L + a] = inv_m * (y - p[a]);
            }
        }
    }

    std::vector<double> drift((m + u) * L, 0.0);
    std::vector<double> train_part(m * L, 0.0);
    std::vector<double> tracked_part(u * L, 0.0);
    setup.train.accumulate(train_part, w);
    setup.tracked.accumulate(tracked_part, w);
    std::copy(train_part.begin(), train_part.end(), drift.begin());
    std::copy(tracked_part.begin(), tracked_part.end(),
              drift.begin() + static_cast<std::ptrdiff_t>(m * L));
    return drift;
}

SimTrace simulate(const SimSetup &setup, const DynamicsConfig &config) {
    validate_setup(setup);
    if (config.dt <= 0.0 || config.steps < 1 || config.record_stride < 1)
        throw std::invalid_argument("bad dynamics config");

    const std::size_t m = setup.train.cols();
    const std::size_t u = setup.tracked.rows();
    const auto L = static_cast<std::size_t>(setup.heads);

    std::vector<double> state((m + u) * L, 0.0);
    if (!setup.init_train.empty())
        std::copy(setup.init_train.begin(), setup.init_train.end(), state.begin());
    if (!setup.init_tracked.empty())
        std::copy(setup.init_tracked.begin(), setup.init_tracked.end(),
                  state.begin() + static_cast<std::ptrdiff_t>(m * L));

    const DriftFn drift = [&](const std::vector<double> &y) { return score_drift(y, setup); };

    const std::size_t records =
        2 + static_cast<std::size_t>((config.steps - 1) / config.record_stride);
    SimTrace trace;
    trace.heads = setup.heads;
    trace.times.reserve(records);
    trace.train_scores = Matrix(records, m * L);
    trace.tracked_scores = Matrix(records, u * L);

    std::size_t rec = 0;
    const auto record = [&](double t) {
        trace.times.push_back(t);
        for (std::size_t i = 0; i < m * L; ++i) trace.train_scores(rec, i) = state[i];
        for (std::size_t i = 0; i < u * L; ++i) trace.tracked_scores(rec, i) = state[m * L + i];
        ++rec;
    };

    record(0.0);
    for (int step = 1; step <= config.steps; ++step) {
        ode_step(drift, state, config.dt, config.method);
        double worst = 0.0;
        for (double v : state) worst = std::max(worst, std::fabs(v));
        if (!(worst <= config.divergence_cap)) throw DivergedError(step, worst);
        if (step % config.record_stride == 0 || step == config.steps)
            record(config.dt * step);
    }
    trace.times.shrink_to_fit();
    // Trim unused rows if the last step coincided with the stride.
    if (rec < trace.train_scores.rows()) {
        Matrix train(rec, m * L), tracked(rec, u * L);
        for (std::size_t r = 0; r < rec; ++r) {
            for (std::size_t i = 0; i < m * L; ++i) train(r, i) = trace.train_scores(r, i);
            for (std::size_t i = 0; i < u * L; ++i) tracked(r, i) = trace.tracked_scores(r, i);
        }
        trace.train_scores = std::move(train);
        trace.tracked_scores = std::move(tracked);
    }
    return trace;
}

std::string sim_trace_csv(const SimTrace &trace, const std::vector<std::string> &tracked_names) {
    const auto L = static_cast<std::size_t>(trace.heads);
    const std::size_t m = trace.train_scores.cols() / L;
    const std::size_t u = trace.tracked_scores.cols() / L;
    if (tracked_names.size() != u) throw std::invalid_argument("tracked name count mismatch");
    std::ostringstream out;
    out.precision(12);
    out << "t,series,name,class,score\n";
    for (std::size_t r = 0; r < trace.times.size(); ++r) {
        for (std::size_t x = 0; x < m; ++x)
            for (std::size_t a = 0; a < L; ++a)
                out << trace.times[r] << ",train," << x << ',' << a << ','
                    << trace.train_scores(r, x * L + a) << '\n';
        for (std::size_t i = 0; i < u; ++i)
            for (std::size_t a = 0; a < L; ++a)
                out << trace.times[r] << ",tracked," << tracked_names[i] << ',' << a << ','
                    << trace.tracked_scores(r, i * L + a) << '\n';
    }
    return out.str();
}

void write_sim_trace_csv(const std::string &path, const SimTrace &trace,
                         const std::vector<std::string> &tracked_names) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write trace csv: " + path);
    out << sim_trace_csv(trace, tracked_names);
    if (!out) throw ConfigError("trace csv write failed: " + path);
}

} // namespace ntklens
