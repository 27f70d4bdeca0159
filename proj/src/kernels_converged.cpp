#include "ntklens/kernels.hpp"

#include "kernels_detail.hpp"
#include "ntklens/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace ntklens {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_token(int token) {
    if (token < 1) throw std::invalid_argument("token id must be a real token (>= 1)");
}

void check_instance(const Instance &x) {
    if (x.tokens.empty()) throw std::invalid_argument("empty instance");
    for (int t : x.tokens)
        if (t < 1) throw std::invalid_argument("instance contains non-token ids");
}

// E[tanh^2(u)] and E[(1 - tanh^2(u))^2] for u ~ N(0, s2), cached per
// (s2, samples); both are instance-independent scalars.
std::pair<double, double> tanh_moments(double s2, std::size_t samples) {
    static std::mutex mutex;
    static std::map<std::pair<double, std::size_t>, std::pair<double, double>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    const auto key = std::make_pair(s2, samples);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    const double sq =
        mc_expectation(McKind::TanhTanh, 1, 1, s2, samples, RngStream(0x5eed1)).mean;
    const double dsq =
        mc_expectation(McKind::TanhSq, 1, 1, s2, samples, RngStream(0x5eed2)).mean;
    const auto val = std::make_pair(sq, dsq);
    cache.emplace(key, val);
    return val;
}

} // namespace

MlpKernelCoeffs mlp_kernel_coeffs(const VarianceProfile &vars) {
    const double s2 = vars.emb * vars.hidden;
    MlpKernelCoeffs c;
    c.mu = s2 / kTwoPi;
    c.rho = (std::numbers::pi - 1.0) * s2 / kTwoPi +
            (vars.emb * vars.head + vars.hidden * vars.head) / 2.0;
    return c;
}

double converged_mlp_token(int token, const Instance &x, const VarianceProfile &vars) {
    check_token(token);
    check_instance(x);
    const MlpKernelCoeffs c = mlp_kernel_coeffs(vars);
    const auto matches =
        static_cast<double>(std::count(x.tokens.begin(), x.tokens.end(), token));
    return c.rho * matches + c.mu * static_cast<double>(x.tokens.size());
}

double converged_mlp_instance(const Instance &a, const Instance &b, const VarianceProfile &vars) {
    check_instance(a);
    check_instance(b);
    const MlpKernelCoeffs c = mlp_kernel_coeffs(vars);
    double matches = 0.0;
    for (int ta : a.tokens)
        matches += static_cast<double>(std::count(b.tokens.begin(), b.tokens.end(), ta));
    return c.rho * matches +
           c.mu * static_cast<double>(a.tokens.size()) * static_cast<double>(b.tokens.size());
}

double converged_mlp_variant(Activation act, int token, const Instance &x,
                             const VarianceProfile &vars, std::size_t mc_samples) {
    check_token(token);
    check_instance(x);
    const double s2 = vars.emb * vars.hidden;
    const double sv2 = (vars.emb + vars.hidden) * vars.head;
    double match_term = 0.0;
    double other_term = 0.0;
    switch (act) {
    case Activation::Relu:
        match_term = s2 / 2.0 + sv2 / 2.0;
        other_term = s2 / kTwoPi;
        break;
    case Activation::Identity:
        match_term = s2 + sv2;
        other_term = 0.0;
        break;
    case Activation::Tanh: {
        const auto [sq, dsq] = tanh_moments(s2, mc_samples);
        match_term = sq + sv2 * dsq;
        other_term = 0.0; // E[tanh(u) tanh(u')] vanishes for independent u, u'
        break;
    }
    default:
        throw UnsupportedError("no converged token kernel for activation " +
                               activation_name(act));
    }
    const auto l = static_cast<double>(x.tokens.size());
    const auto matches =
        static_cast<double>(std::count(x.tokens.begin(), x.tokens.end(), token));
    return matches * match_term + (l - matches) * other_term;
}

double f_kernel(int shared, int total, double s2) {
    if (total < 1 || shared < 0 || shared > total)
        throw std::invalid_argument("f_kernel: need 0 <= shared <= total");
    if (s2 <= 0.0) throw std::invalid_argument("f_kernel: s2 must be positive");
    const double scale = static_cast<double>(total) * s2;
    if (shared == 0) return scale / kTwoPi;
    if (shared == total) return scale / 2.0;
    const double c = static_cast<double>(shared) / static_cast<double>(total);
    const double theta = std::acos(c);
    return scale / kTwoPi * (std::sin(theta) + (std::numbers::pi - theta) * c);
}

double h_kernel(int shared, int total, double s2) {
    if (total < 1 || shared < 0 || shared > total)
        throw std::invalid_argument("h_kernel: need 0 <= shared <= total");
    (void)s2;
    if (shared == 0) return 0.25;
    if (shared == total) return 0.5;
    const double c = static_cast<double>(shared) / static_cast<double>(total);
    const double theta = std::acos(c);
    return (std::numbers::pi - theta) / kTwoPi;
}

namespace detail {

double cnn_window_value(const std::vector<int> &window, const Instance &x,
                        const VarianceProfile &vars, bool check_distinct) {
    check_instance(x);
    if (window.empty()) throw std::invalid_argument("empty window");
    for (int t : window)
        if (t < 0) throw std::invalid_argument("bad window token id");
    {
        std::vector<int> real;
        for (int t : window)
            if (t != Vocab::kPadId) real.push_back(t);
        if (real.empty()) throw std::invalid_argument("window of padding only");
        std::sort(real.begin(), real.end());
        if (check_distinct && std::adjacent_find(real.begin(), real.end()) != real.end())
            throw std::invalid_argument("window tokens must be distinct");
    }

    const int K = static_cast<int>(window.size());
    const double s2 = vars.emb * vars.hidden;
    const double rho_c = vars.head * (vars.emb + vars.hidden);
    const auto l = static_cast<int>(x.tokens.size());

    // Padded instance windows: slot k of window j holds token x[j + k - (K-1)].
    const auto token_at = [&](int j, int k) {
        const int idx = j + k - (K - 1);
        return (idx < 0 || idx >= l) ? Vocab::kPadId : x.tokens[static_cast<std::size_t>(idx)];
    };

    double total = 0.0;
    for (int j = 0; j < l + K - 1; ++j) {
        // Position-insensitive shared-token count (padding never matches).
        std::vector<int> other;
        for (int k = 0; k < K; ++k) {
            const int t = token_at(j, k);
            if (t != Vocab::kPadId) other.push_back(t);
        }
        int overlap = 0;
        int aligned = 0;
        for (int k = 0; k < K; ++k) {
            const int t = window[static_cast<std::size_t>(k)];
            if (t == Vocab::kPadId) continue;
            const auto it = std::find(other.begin(), other.end(), t);
            if (it != other.end()) {
                ++overlap;
                other.erase(it);
            }
            if (token_at(j, k) == t) ++aligned;
        }
        total += f_kernel(overlap, K, s2) + rho_c * h_kernel(overlap, K, s2) * aligned;
    }
    return total;
}

} // namespace detail

double converged_cnn_window(const std::vector<int> &window, const Instance &x,
                            const VarianceProfile &vars) {
    return detail::cnn_window_value(window, x, vars, true);
}

Matrix uniform_alpha(std::size_t length) {
    if (length == 0) throw std::invalid_argument("empty instance");
    Matrix alpha(length, length, 1.0 / static_cast<double>(length));
    return alpha;
}

Matrix estimate_alpha(const Instance &x, const VarianceProfile &vars, int probe_width,
                      int samples, RngStream rng) {
    check_instance(x);
    if (probe_width < 1 || samples < 1)
        throw std::invalid_argument("estimate_alpha: bad probe settings");
    const std::size_t l = x.tokens.size();
    const auto d = static_cast<std::size_t>(probe_width);
    const double sigma = std::sqrt(vars.emb);

    // Distinct tokens share one embedding draw per sample.
    std::vector<int> distinct(x.tokens.begin(), x.tokens.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

    Matrix acc(l, l, 0.0);
    std::vector<double> logits(l);
    for (int s = 0; s < samples; ++s) {
        RngStream draw = rng.split(static_cast<std::uint64_t>(s));
        std::map<int, std::vector<double>> embed;
        for (int t : distinct) {
            auto &e = embed[t];
            e.resize(d);
            for (auto &v : e) v = sigma * draw.next_gaussian();
        }
        std::vector<std::vector<double>> q(l);
        for (std::size_t i = 0; i < l; ++i) {
            q[i] = embed[x.tokens[i]];
            for (auto &v : q[i]) v += sigma * draw.next_gaussian();
        }
        for (std::size_t i = 0; i < l; ++i) {
            for (std::size_t j = 0; j < l; ++j)
                logits[j] = dot(q[i], q[j]) / static_cast<double>(d);
            const std::vector<double> row = softmax(logits);
            for (std::size_t j = 0; j < l; ++j) acc(i, j) += row[j];
        }
    }
    scale_inplace(acc.flat(), 1.0 / static_cast<double>(samples));
    return acc;
}

double converged_sa_token(int token, const Instance &x, const VarianceProfile &vars,
                          const Matrix &alpha) {
    check_token(token);
    check_instance(x);
    const std::size_t l = x.tokens.size();
    if (alpha.rows() != l || alpha.cols() != l)
        throw std::invalid_argument("alpha shape does not match instance length");
    double weight = 0.0;
    for (std::size_t i = 0; i < l; ++i)
        for (std::size_t j = 0; j < l; ++j)
            if (x.tokens[j] == token) weight += alpha(i, j);
    return (vars.emb + vars.head) * weight;
}

double converged_mv_bigram(int first, int second, const Instance &x,
                           const VarianceProfile &vars) {
    check_token(first);
    check_token(second);
    check_instance(x);
    if (x.tokens.size() < 2)
        throw std::invalid_argument("mv model needs at least two tokens");
    double count = 0.0;
    for (std::size_t j = 0; j + 1 < x.tokens.size(); ++j)
        if (x.tokens[j] == first && x.tokens[j + 1] == second) count += 1.0;
    return (vars.emb + 3.0 * vars.head) * vars.emb * vars.hidden * count;
}

double lrnn_position_coeff(int distance, const VarianceProfile &vars) {
    if (distance < 0) throw std::invalid_argument("distance must be >= 0");
    const double decay = std::pow(vars.recur, distance);
    double coeff = decay * (vars.emb * vars.hidden + vars.head * vars.hidden +
                            vars.head * vars.emb);
    if (distance > 0)
        coeff += static_cast<double>(distance) * std::pow(vars.recur, distance - 1) *
                 vars.head * vars.hidden * vars.emb;
    return coeff;
}

double converged_lrnn_token_pos(int token, int distance, const Instance &x,
                                const VarianceProfile &vars) {
    check_token(token);
    check_instance(x);
    const auto l = static_cast<int>(x.tokens.size());
    if (distance >= l) return 0.0;
    const int idx = l - 1 - distance;
    if (x.tokens[static_cast<std::size_t>(idx)] != token) return 0.0;
    return lrnn_position_coeff(distance, vars);
}

} // namespace ntklens
