#ifndef CBMO_SYNTHETIC_HPP
#define CBMO_SYNTHETIC_HPP

// Seeded synthetic observation tables for ablation experiments and tests.
//
// Each input column is an affine image (own offset and span, so columns
// live on very different scales) of a latent uniform z_j in [0, 1]. Profit
// is 200 + 10 * (sum_j c_j z_j + noise). Weight signs alternate so that
// half the indicators raise profit and half depress it, the way revenue
// drivers and cost indicators pull in opposite directions.

#include <cbmo/observations.hpp>
#include <cbmo/ontology.hpp>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace cbmo::synthetic {

enum class Dependence {
    AllInputs,    ///< all 14 indicators carry signal
    BaselineOnly, ///< only the first 9 (original ontology) carry signal
};

struct TableSpec {
    std::size_t periods = 40;
    std::uint64_t seed = 1;
    double noise = 0.01; ///< noise sd as a fraction of the clean signal's sd
    Dependence dependence = Dependence::AllInputs;
    int last_year = 2024;
};

/// Portable draws from mt19937_64: the standard fixes the engine but not
/// the distribution algorithms.
class Rng {
public:
    explicit Rng(std::uint64_t seed)
        : engine_(seed)
    {
    }

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double normal()
    {
        const double u1 = 1.0 - uniform(); // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

struct SyntheticTable {
    ObservationTable table;
    std::vector<double> weights; ///< latent weights c_j in input order
};

inline SyntheticTable make_table(const TableSpec& spec, const ConceptSchema& schema = canonical_schema())
{
    Rng rng(spec.seed);
    const auto& inputs = schema.input_elements;
    const std::size_t k = inputs.size();

    std::vector<double> offsets(k);
    std::vector<double> spans(k);
    std::vector<double> weights(k);
    for (std::size_t j = 0; j < k; ++j) {
        offsets[j] = rng.uniform(10.0, 1000.0);
        spans[j] = rng.uniform(5.0, 500.0);
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        weights[j] = sign * rng.uniform(0.5, 1.5);
        if (spec.dependence == Dependence::BaselineOnly && j >= ConceptSchema::baseline_input_count) {
            weights[j] = 0.0;
        }
    }

    SyntheticTable out;
    out.weights = weights;
    auto& table = out.table;
    for (std::size_t j = 0; j < k; ++j) {
        table.columns.push_back({inputs[j], {}});
    }
    std::vector<double> signal(spec.periods, 0.0);
    for (std::size_t t = 0; t < spec.periods; ++t) {
        table.periods.push_back(std::to_string(spec.last_year - static_cast<int>(spec.periods - 1 - t)));
        for (std::size_t j = 0; j < k; ++j) {
            const double z = rng.uniform();
            table.columns[j].values.push_back(offsets[j] + spans[j] * z);
            signal[t] += weights[j] * z;
        }
    }

    double mean = 0.0;
    for (double s : signal) {
        mean += s;
    }
    mean /= static_cast<double>(spec.periods);
    double var = 0.0;
    for (double s : signal) {
        var += (s - mean) * (s - mean);
    }
    const double sd = spec.periods > 1 ? std::sqrt(var / static_cast<double>(spec.periods - 1)) : 0.0;

    for (std::size_t t = 0; t < spec.periods; ++t) {
        const double noisy = signal[t] + spec.noise * sd * rng.normal();
        table.profit.push_back(200.0 + 10.0 * noisy);
    }
    return out;
}

} // namespace cbmo::synthetic

#endif // CBMO_SYNTHETIC_HPP
