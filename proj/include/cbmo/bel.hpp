#ifndef CBMO_BEL_HPP
#define CBMO_BEL_HPP

// Brain emotional learning regressor.
//
//   thalamus       th  = max_i s_i
//   amygdala       A_i = s_i * v_i (i < n),  A_n = th * v_th
//   orbitofrontal  O_i = s_i * w_i
//   output         E   = sum(A) - sum(O)
//
// Learning, from the pre-update trace and reward r:
//   dv_i  = alpha * s_i * max(0, r - sum(A)),  dv_th = alpha * th * max(0, r - sum(A))
//   dw_i  = beta  * s_i * (E - r)
//
// The amygdala only ever strengthens (for non-negative stimuli); the
// orbitofrontal weights are unconstrained and cancel over-prediction.

#include <cbmo/error.hpp>
#include <cbmo/text.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cbmo::bel {

struct BelConfig {
    double alpha = 0.2;        ///< amygdala learning rate, (0, 1]
    double beta = 0.2;         ///< orbitofrontal learning rate, (0, 1]
    std::size_t epochs = 500;
    std::uint64_t seed = 0;    ///< drives the per-epoch shuffle when enabled
    bool shuffle = false;      ///< present samples in file order unless set

    void validate() const
    {
        auto in_range = [](double r) { return r > 0.0 && r <= 1.0; };
        if (!in_range(alpha) || !in_range(beta)) {
            throw Error(ErrorCode::InvalidConfig, "learning rates must lie in (0, 1]");
        }
    }

    friend bool operator==(const BelConfig&, const BelConfig&) = default;
};

class BelNetwork {
public:
    /// Zero-initialised network over n stimulus components.
    explicit BelNetwork(std::size_t n, BelConfig config = {})
        : BelNetwork(std::vector<double>(n, 0.0), 0.0, std::vector<double>(n, 0.0), config)
    {
    }

    BelNetwork(std::vector<double> v, double v_th, std::vector<double> w, BelConfig config = {})
        : v_(std::move(v))
        , v_th_(v_th)
        , w_(std::move(w))
        , config_(config)
    {
        if (v_.empty()) {
            throw Error(ErrorCode::EmptyStimulus, "network needs at least one stimulus component");
        }
        if (v_.size() != w_.size()) {
            throw Error(ErrorCode::DimensionMismatch, "amygdala and orbitofrontal weight counts differ");
        }
        auto finite = [](double x) { return std::isfinite(x); };
        if (!std::all_of(v_.begin(), v_.end(), finite) || !std::all_of(w_.begin(), w_.end(), finite)
            || !std::isfinite(v_th_)) {
            throw Error(ErrorCode::InvalidConfig, "weights must be finite");
        }
        config_.validate();
    }

    std::size_t size() const noexcept { return v_.size(); }
    std::span<const double> amygdala_weights() const noexcept { return v_; }
    double thalamic_weight() const noexcept { return v_th_; }
    std::span<const double> orbitofrontal_weights() const noexcept { return w_; }
    const BelConfig& config() const noexcept { return config_; }

    friend bool operator==(const BelNetwork&, const BelNetwork&) = default;

private:
    friend struct NetworkUpdater;

    std::vector<double> v_;
    double v_th_ = 0.0;
    std::vector<double> w_;
    BelConfig config_;
};

struct ForwardTrace {
    double th = 0.0;
    std::vector<double> a; ///< n sensory nodes then the thalamic node
    std::vector<double> o;
    double e = 0.0;
    std::optional<double> rew;
};

struct TrainingHistory {
    std::vector<double> epoch_mse; ///< mean squared (E - rew) over each epoch, pre-update
};

struct Sample {
    std::vector<double> stimulus;
    double reward = 0.0;
};

inline double thalamus_signal(std::span<const double> s)
{
    if (s.empty()) {
        throw Error(ErrorCode::EmptyStimulus, "stimulus has no components");
    }
    return *std::max_element(s.begin(), s.end());
}

inline ForwardTrace forward(const BelNetwork& net, std::span<const double> s)
{
    if (s.size() != net.size()) {
        throw Error(ErrorCode::DimensionMismatch, "stimulus has " + std::to_string(s.size())
                                                      + " components, network expects "
                                                      + std::to_string(net.size()));
    }
    ForwardTrace trace;
    trace.th = thalamus_signal(s);
    const auto v = net.amygdala_weights();
    const auto w = net.orbitofrontal_weights();
    trace.a.resize(s.size() + 1);
    trace.o.resize(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        trace.a[i] = s[i] * v[i];
        trace.o[i] = s[i] * w[i];
    }
    trace.a.back() = trace.th * net.thalamic_weight();
    trace.e = std::accumulate(trace.a.begin(), trace.a.end(), 0.0)
              - std::accumulate(trace.o.begin(), trace.o.end(), 0.0);
    return trace;
}

inline double predict(const BelNetwork& net, std::span<const double> s)
{
    return forward(net, s).e;
}

struct NetworkUpdater {
    /// In-place learning step; returns the pre-update trace.
    static ForwardTrace step(BelNetwork& net, std::span<const double> s, double rew)
    {
        if (!std::isfinite(rew)) {
            throw Error(ErrorCode::NonFiniteReward, "reward must be finite");
        }
        if (!std::all_of(s.begin(), s.end(), [](double x) { return std::isfinite(x); })) {
            throw Error(ErrorCode::NonFiniteStimulus, "stimulus components must be finite");
        }
        ForwardTrace trace = forward(net, s);
        trace.rew = rew;

        const double amygdala_sum = std::accumulate(trace.a.begin(), trace.a.end(), 0.0);
        const double shortfall = std::max(0.0, rew - amygdala_sum);
        const double mismatch = trace.e - rew;
        const double alpha = net.config_.alpha;
        const double beta = net.config_.beta;
        for (std::size_t i = 0; i < s.size(); ++i) {
            net.v_[i] += alpha * s[i] * shortfall;
            net.w_[i] += beta * s[i] * mismatch;
        }
        net.v_th_ += alpha * trace.th * shortfall;
        return trace;
    }
};

inline std::pair<BelNetwork, ForwardTrace> train_step(const BelNetwork& net, std::span<const double> s, double rew)
{
    BelNetwork next = net;
    ForwardTrace trace = NetworkUpdater::step(next, s, rew);
    return {std::move(next), std::move(trace)};
}

/// Trains for config.epochs passes over samples. The network adopts
/// config. Bit-for-bit deterministic for identical inputs.
inline std::pair<BelNetwork, TrainingHistory> fit(const BelNetwork& net, std::span<const Sample> samples,
                                                  const BelConfig& config)
{
    config.validate();
    if (samples.empty()) {
        throw Error(ErrorCode::EmptyDataset, "no training samples");
    }
    for (const auto& sample : samples) {
        if (sample.stimulus.size() != net.size()) {
            throw Error(ErrorCode::DimensionMismatch, "training sample dimension differs from network");
        }
    }

    BelNetwork trained(std::vector<double>(net.amygdala_weights().begin(), net.amygdala_weights().end()),
                       net.thalamic_weight(),
                       std::vector<double>(net.orbitofrontal_weights().begin(), net.orbitofrontal_weights().end()),
                       config);
    TrainingHistory history;
    history.epoch_mse.reserve(config.epochs);

    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(config.seed);

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        if (config.shuffle) {
            // Fisher-Yates with explicit index draws; std::shuffle's draw
            // pattern is library specific.
            for (std::size_t i = order.size(); i > 1; --i) {
                std::size_t j = static_cast<std::size_t>(rng() % i);
                std::swap(order[i - 1], order[j]);
            }
        }
        double squared = 0.0;
        for (std::size_t idx : order) {
            const auto& sample = samples[idx];
            auto trace = NetworkUpdater::step(trained, sample.stimulus, sample.reward);
            squared += (trace.e - sample.reward) * (trace.e - sample.reward);
        }
        history.epoch_mse.push_back(squared / static_cast<double>(samples.size()));
    }
    return {std::move(trained), std::move(history)};
}

// ---------------------------------------------------------------------------
// Snapshot: flat key=value text, shortest round-trip decimals.
// ---------------------------------------------------------------------------

inline std::string to_snapshot(const BelNetwork& net)
{
    using text::format_double;
    const auto& cfg = net.config();
    std::string out;
    auto put = [&](const std::string& key, const std::string& value) { out.append(key).append("=").append(value).append("\n"); };
    put("alpha", format_double(cfg.alpha));
    put("beta", format_double(cfg.beta));
    put("epochs", std::to_string(cfg.epochs));
    put("seed", std::to_string(cfg.seed));
    put("shuffle", cfg.shuffle ? "1" : "0");
    put("n", std::to_string(net.size()));
    for (std::size_t i = 0; i < net.size(); ++i) {
        put("v[" + std::to_string(i) + "]", format_double(net.amygdala_weights()[i]));
    }
    put("v_th", format_double(net.thalamic_weight()));
    for (std::size_t i = 0; i < net.size(); ++i) {
        put("w[" + std::to_string(i) + "]", format_double(net.orbitofrontal_weights()[i]));
    }
    return out;
}

struct SnapshotEntry {
    std::string value;
    std::size_t line = 0;
};

/// Parses `key=value` lines; '#' lines and blanks are ignored.
inline std::map<std::string, SnapshotEntry> parse_key_values(std::string_view source)
{
    std::map<std::string, SnapshotEntry> entries;
    auto lines = text::split_lines(source);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        auto content = text::trim(lines[i]);
        if (content.empty() || content.front() == '#') {
            continue;
        }
        auto eq = content.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError(i + 1, ParseErrorKind::Syntax, "expected key=value");
        }
        std::string key(text::trim(content.substr(0, eq)));
        if (!entries.emplace(key, SnapshotEntry{std::string(text::trim(content.substr(eq + 1))), i + 1}).second) {
            throw ParseError(i + 1, ParseErrorKind::Syntax, "duplicate key '" + key + "'");
        }
    }
    return entries;
}

/// Rebuilds a network from snapshot text. Keys the network does not own
/// are left for the caller in `extra` when provided.
inline BelNetwork from_snapshot(std::string_view source, std::map<std::string, SnapshotEntry>* extra = nullptr)
{
    auto entries = parse_key_values(source);
    std::size_t last_line = text::split_lines(source).size();
    auto take = [&](const std::string& key) -> SnapshotEntry {
        auto it = entries.find(key);
        if (it == entries.end()) {
            throw ParseError(last_line == 0 ? 1 : last_line, ParseErrorKind::BadArity, "missing key '" + key + "'");
        }
        SnapshotEntry entry = it->second;
        entries.erase(it);
        return entry;
    };
    auto number = [&](const std::string& key) {
        auto entry = take(key);
        auto value = text::parse_double(entry.value);
        if (!value) {
            throw ParseError(entry.line, ParseErrorKind::Syntax, key + ": '" + entry.value + "' is not a finite number");
        }
        return *value;
    };
    auto count = [&](const std::string& key) {
        auto entry = take(key);
        std::uint64_t value = 0;
        auto t = text::trim(entry.value);
        auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
        if (ec != std::errc{} || ptr != t.data() + t.size()) {
            throw ParseError(entry.line, ParseErrorKind::Syntax, key + ": '" + entry.value + "' is not an unsigned integer");
        }
        return value;
    };

    BelConfig cfg;
    cfg.alpha = number("alpha");
    cfg.beta = number("beta");
    cfg.epochs = static_cast<std::size_t>(count("epochs"));
    cfg.seed = count("seed");
    cfg.shuffle = count("shuffle") != 0;
    auto n = static_cast<std::size_t>(count("n"));
    std::vector<double> v(n);
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = number("v[" + std::to_string(i) + "]");
        w[i] = number("w[" + std::to_string(i) + "]");
    }
    double v_th = number("v_th");
    if (extra) {
        *extra = std::move(entries);
    }
    return BelNetwork(std::move(v), v_th, std::move(w), cfg);
}

} // namespace cbmo::bel

#endif // CBMO_BEL_HPP
