#ifndef CBMO_ANALYTICS_HPP
#define CBMO_ANALYTICS_HPP

#include <cbmo/error.hpp>
#include <cbmo/observations.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace cbmo::analytics {

// ---------------------------------------------------------------------------
// Min-max scaling
// ---------------------------------------------------------------------------

struct Range {
    double min = 0.0;
    double max = 0.0;

    /// Constant ranges map everything to 0.
    double scale(double x) const noexcept { return max > min ? (x - min) / (max - min) : 0.0; }
    double unscale(double t) const noexcept { return max > min ? min + t * (max - min) : min; }

    friend bool operator==(const Range&, const Range&) = default;
};

struct ScalerParams {
    std::vector<std::pair<ConceptId, Range>> columns;
    Range profit;

    const Range* find(ConceptId id) const
    {
        for (const auto& [c, r] : columns) {
            if (c == id) {
                return &r;
            }
        }
        return nullptr;
    }

    friend bool operator==(const ScalerParams&, const ScalerParams&) = default;
};

inline Range range_of(std::span<const double> values)
{
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return {*lo, *hi};
}

/// Rescales a table with existing parameters. Values outside the fitted
/// range map outside [0, 1]. Columns without parameters are an error.
inline ObservationTable apply_scaler(const ObservationTable& table, const ScalerParams& params)
{
    ObservationTable out = table;
    for (auto& column : out.columns) {
        const Range* r = params.find(column.id);
        if (!r) {
            throw Error(ErrorCode::MissingColumn,
                        "no scaling parameters for column " + std::string(symbol(column.id)));
        }
        for (auto& x : column.values) {
            x = r->scale(x);
        }
    }
    for (auto& y : out.profit) {
        y = params.profit.scale(y);
    }
    return out;
}

/// Min-max normalisation of every input column and the profit series.
inline std::pair<ObservationTable, ScalerParams> normalize(const ObservationTable& table)
{
    if (table.rows() == 0) {
        throw Error(ErrorCode::EmptyDataset, "cannot normalise an empty table");
    }
    ScalerParams params;
    for (const auto& column : table.columns) {
        params.columns.emplace_back(column.id, range_of(column.values));
    }
    if (!table.profit.empty()) {
        params.profit = range_of(table.profit);
    }
    return {apply_scaler(table, params), std::move(params)};
}

inline std::vector<double> inverse_profit(std::span<const double> normalized, const ScalerParams& params)
{
    std::vector<double> out;
    out.reserve(normalized.size());
    for (double t : normalized) {
        out.push_back(params.profit.unscale(t));
    }
    return out;
}

inline ObservationTable inverse_transform(const ObservationTable& normalized, const ScalerParams& params)
{
    ObservationTable out = normalized;
    for (auto& column : out.columns) {
        const Range* r = params.find(column.id);
        if (!r) {
            throw Error(ErrorCode::MissingColumn, "no scaling parameters for column "
                                                      + std::string(symbol(column.id)));
        }
        for (auto& x : column.values) {
            x = r->unscale(x);
        }
    }
    for (auto& y : out.profit) {
        y = params.profit.unscale(y);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Chronological split
// ---------------------------------------------------------------------------

/// First ceil(fraction * n) periods train, the rest test.
inline std::pair<ObservationTable, ObservationTable> split(const ObservationTable& table, double train_fraction)
{
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw Error(ErrorCode::InvalidConfig, "train fraction must lie in (0, 1)");
    }
    const std::size_t n = table.rows();
    // The epsilon keeps products like 0.7 * 10 = 7.000000000000001 at 7.
    const auto train = static_cast<std::size_t>(std::ceil(train_fraction * static_cast<double>(n) - 1e-9));
    if (n < 2 || train == 0 || train >= n) {
        throw Error(ErrorCode::TooFewRows, std::to_string(n) + " periods cannot be split at fraction "
                                               + std::to_string(train_fraction));
    }
    return {table.slice(0, train), table.slice(train, n - train)};
}

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

struct EvaluationMetrics {
    double mse = 0.0;
    double r2 = 0.0;

    friend bool operator==(const EvaluationMetrics&, const EvaluationMetrics&) = default;
};

namespace detail {

inline void check_lengths(std::span<const double> predicted, std::span<const double> actual)
{
    if (predicted.size() != actual.size()) {
        throw Error(ErrorCode::LengthMismatch, std::to_string(predicted.size()) + " predictions for "
                                                   + std::to_string(actual.size()) + " actuals");
    }
    if (actual.empty()) {
        throw Error(ErrorCode::EmptySeries, "no values to compare");
    }
}

} // namespace detail

inline double mse(std::span<const double> predicted, std::span<const double> actual)
{
    detail::check_lengths(predicted, actual);
    double total = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        const double d = predicted[i] - actual[i];
        total += d * d;
    }
    return total / static_cast<double>(actual.size());
}

/// 1 - SSres / SStot, SStot taken about the mean of `actual`.
inline double r_squared(std::span<const double> predicted, std::span<const double> actual)
{
    detail::check_lengths(predicted, actual);
    if (actual.size() < 2) {
        throw Error(ErrorCode::TooFewRows, "r_squared needs at least two values");
    }
    double mean = 0.0;
    for (double y : actual) {
        mean += y;
    }
    mean /= static_cast<double>(actual.size());
    double ss_res = 0.0;
    double ss_tot = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        ss_res += (actual[i] - predicted[i]) * (actual[i] - predicted[i]);
        ss_tot += (actual[i] - mean) * (actual[i] - mean);
    }
    if (ss_tot == 0.0) {
        throw Error(ErrorCode::ConstantActual, "actual values are constant");
    }
    return 1.0 - ss_res / ss_tot;
}

inline EvaluationMetrics evaluate(std::span<const double> predicted, std::span<const double> actual)
{
    return {mse(predicted, actual), r_squared(predicted, actual)};
}

/// Period-over-period relative change: (x[k+1] - x[k]) / x[k].
inline std::vector<double> rate_of_change(std::span<const double> series)
{
    if (series.size() < 2) {
        throw Error(ErrorCode::TooFewRows, "rate of change needs at least two values");
    }
    std::vector<double> out;
    out.reserve(series.size() - 1);
    for (std::size_t k = 0; k + 1 < series.size(); ++k) {
        if (series[k] == 0.0) {
            throw Error(ErrorCode::ZeroBase, "value at position " + std::to_string(k) + " is zero");
        }
        out.push_back((series[k + 1] - series[k]) / series[k]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Feature selection
// ---------------------------------------------------------------------------

/// Keeps the requested concepts, in the requested order, that are present
/// in the table and not constant over it.
inline std::vector<ConceptId> select_features(const ObservationTable& table, std::span<const ConceptId> wanted)
{
    std::vector<ConceptId> kept;
    for (auto id : wanted) {
        const auto* column = table.find(id);
        if (!column) {
            throw Error(ErrorCode::MissingColumn, "table has no column for " + std::string(symbol(id)));
        }
        auto r = range_of(column->values);
        if (r.max > r.min) {
            kept.push_back(id);
        }
    }
    return kept;
}

/// Row-major stimulus rows for the given concepts.
inline std::vector<std::vector<double>> feature_rows(const ObservationTable& table, std::span<const ConceptId> features)
{
    std::vector<const ObservationColumn*> cols;
    for (auto id : features) {
        const auto* column = table.find(id);
        if (!column) {
            throw Error(ErrorCode::MissingColumn, "table has no column for " + std::string(symbol(id)));
        }
        cols.push_back(column);
    }
    std::vector<std::vector<double>> rows(table.rows(), std::vector<double>(features.size()));
    for (std::size_t r = 0; r < table.rows(); ++r) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
            rows[r][c] = cols[c]->values[r];
        }
    }
    return rows;
}

} // namespace cbmo::analytics

#endif // CBMO_ANALYTICS_HPP
