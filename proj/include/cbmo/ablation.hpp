#ifndef CBMO_ABLATION_HPP
#define CBMO_ABLATION_HPP

// 9-input vs 14-input comparison. The table is min-max normalised, split
// chronologically, and for each input set both the BEL regressor and the
// additive polynomial baseline are trained on the train rows and scored on
// the test rows. Metrics are on the normalised profit scale; the reported
// series are in original profit units.

#include <cbmo/analytics.hpp>
#include <cbmo/bel.hpp>
#include <cbmo/ontology.hpp>
#include <cbmo/polynomial.hpp>
#include <cbmo/text.hpp>

#include <json.hpp>

#include <future>
#include <optional>
#include <string>
#include <vector>

namespace cbmo::analytics {

struct AblationConfig {
    double train_fraction = 0.8;
    bel::BelConfig bel;
    std::size_t poly_degree = 2;
    /// Run the four fits on separate threads. The report does not depend on it.
    bool parallel = true;
};

struct ConfigurationResult {
    std::vector<ConceptId> features; ///< inputs surviving feature selection
    EvaluationMetrics metrics;
    std::vector<double> predicted;      ///< test periods, original units
    std::vector<double> predicted_rate; ///< rate_of_change(predicted)

    friend bool operator==(const ConfigurationResult&, const ConfigurationResult&) = default;
};

struct ModelComparison {
    ConfigurationResult baseline9;
    ConfigurationResult cognitive14;

    friend bool operator==(const ModelComparison&, const ModelComparison&) = default;
};

struct AblationReport {
    AblationConfig config;
    std::size_t train_rows = 0;
    std::vector<std::string> test_periods;
    std::vector<double> actual;      ///< test profit, original units
    std::vector<double> actual_rate; ///< rate_of_change(actual)
    ModelComparison bel;
    ModelComparison polynomial;

    friend bool operator==(const AblationReport& a, const AblationReport& b)
    {
        return a.config.train_fraction == b.config.train_fraction && a.config.bel == b.config.bel
               && a.config.poly_degree == b.config.poly_degree && a.train_rows == b.train_rows
               && a.test_periods == b.test_periods && a.actual == b.actual && a.actual_rate == b.actual_rate
               && a.bel == b.bel && a.polynomial == b.polynomial;
    }
};

namespace detail {

struct FitOutcome {
    EvaluationMetrics metrics;
    std::vector<double> predicted_normalized;
};

inline FitOutcome run_bel(const ObservationTable& train, const ObservationTable& test,
                          const std::vector<ConceptId>& features, const bel::BelConfig& config)
{
    if (features.empty()) {
        throw Error(ErrorCode::EmptyDataset, "no informative input columns for the BEL regressor");
    }
    std::vector<bel::Sample> samples;
    auto rows = feature_rows(train, features);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        samples.push_back({std::move(rows[r]), train.profit[r]});
    }
    auto [net, history] = bel::fit(bel::BelNetwork(features.size(), config), samples, config);
    FitOutcome out;
    for (const auto& s : feature_rows(test, features)) {
        out.predicted_normalized.push_back(bel::predict(net, s));
    }
    out.metrics = evaluate(out.predicted_normalized, test.profit);
    return out;
}

inline FitOutcome run_polynomial(const ObservationTable& train, const ObservationTable& test,
                                 const std::vector<ConceptId>& features, std::size_t degree)
{
    auto model = fit_polynomial(to_matrix(feature_rows(train, features), features.size()), train.profit, degree);
    FitOutcome out;
    out.predicted_normalized = predict_polynomial(model, to_matrix(feature_rows(test, features), features.size()));
    out.metrics = evaluate(out.predicted_normalized, test.profit);
    return out;
}

inline ConfigurationResult finish(const FitOutcome& fit, const std::vector<ConceptId>& features,
                                  const ScalerParams& params)
{
    ConfigurationResult result;
    result.features = features;
    result.metrics = fit.metrics;
    result.predicted = inverse_profit(fit.predicted_normalized, params);
    result.predicted_rate = rate_of_change(result.predicted);
    return result;
}

} // namespace detail

inline AblationReport run_ablation(const ObservationTable& table, const AblationConfig& config,
                                   const ConceptSchema& schema = canonical_schema())
{
    config.bel.validate();
    if (table.profit.size() != table.rows()) {
        throw Error(ErrorCode::MissingColumn, "table has no profit series");
    }
    for (auto id : schema.input_elements) {
        if (!table.find(id)) {
            throw Error(ErrorCode::MissingColumn, "ablation needs column " + std::string(symbol(id)));
        }
    }
    if (table.rows() < 2) {
        throw Error(ErrorCode::TooFewRows, "ablation needs at least two periods");
    }

    auto [normalized, params] = normalize(table);
    auto [train, test] = split(normalized, config.train_fraction);
    if (test.rows() < 2) {
        throw Error(ErrorCode::TooFewRows, "test split has " + std::to_string(test.rows())
                                               + " period(s); metrics need at least two");
    }

    const auto baseline_inputs = schema.baseline_inputs();
    const auto features9 = select_features(train, baseline_inputs);
    const auto features14 = select_features(train, schema.input_elements);

    auto launch = [&](auto&& fn) {
        return std::async(config.parallel ? std::launch::async : std::launch::deferred, fn);
    };
    auto bel9 = launch([&] { return detail::run_bel(train, test, features9, config.bel); });
    auto bel14 = launch([&] { return detail::run_bel(train, test, features14, config.bel); });
    auto poly9 = launch([&] { return detail::run_polynomial(train, test, features9, config.poly_degree); });
    auto poly14 = launch([&] { return detail::run_polynomial(train, test, features14, config.poly_degree); });

    AblationReport report;
    report.config = config;
    report.train_rows = train.rows();
    report.test_periods = test.periods;
    report.actual = inverse_profit(test.profit, params);
    report.actual_rate = rate_of_change(report.actual);
    report.bel.baseline9 = detail::finish(bel9.get(), features9, params);
    report.bel.cognitive14 = detail::finish(bel14.get(), features14, params);
    report.polynomial.baseline9 = detail::finish(poly9.get(), features9, params);
    report.polynomial.cognitive14 = detail::finish(poly14.get(), features14, params);
    return report;
}

// ---------------------------------------------------------------------------
// Serialisation
// ---------------------------------------------------------------------------

using Json = nlohmann::ordered_json;

inline Json to_json(const bel::BelConfig& c)
{
    return Json{{"alpha", c.alpha}, {"beta", c.beta}, {"epochs", c.epochs}, {"seed", c.seed}, {"shuffle", c.shuffle}};
}

inline bel::BelConfig bel_config_from_json(const Json& j)
{
    bel::BelConfig c;
    c.alpha = j.at("alpha").get<double>();
    c.beta = j.at("beta").get<double>();
    c.epochs = j.at("epochs").get<std::size_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.shuffle = j.at("shuffle").get<bool>();
    return c;
}

inline Json to_json(const AblationConfig& c)
{
    return Json{{"train_fraction", c.train_fraction}, {"poly_degree", c.poly_degree}, {"bel", to_json(c.bel)}};
}

inline Json to_json(const ConfigurationResult& r)
{
    Json features = Json::array();
    for (auto id : r.features) {
        features.push_back(std::string(symbol(id)));
    }
    return Json{{"features", features},
                {"mse", r.metrics.mse},
                {"r2", r.metrics.r2},
                {"predicted_profit", r.predicted},
                {"predicted_rate_of_change", r.predicted_rate}};
}

inline Json to_json(const ModelComparison& m)
{
    return Json{{"baseline9", to_json(m.baseline9)}, {"cognitive14", to_json(m.cognitive14)}};
}

inline Json to_json(const AblationReport& r)
{
    return Json{{"config", to_json(r.config)},
                {"train_rows", r.train_rows},
                {"test_periods", r.test_periods},
                {"actual_profit", r.actual},
                {"actual_rate_of_change", r.actual_rate},
                {"models", Json{{"bel", to_json(r.bel)}, {"polynomial", to_json(r.polynomial)}}}};
}

namespace detail {

inline ConfigurationResult configuration_from_json(const Json& j)
{
    ConfigurationResult r;
    for (const auto& s : j.at("features")) {
        auto id = concept_from_symbol(s.get<std::string>());
        if (!id) {
            throw Error(ErrorCode::InvalidConfig, "unknown feature '" + s.get<std::string>() + "'");
        }
        r.features.push_back(*id);
    }
    r.metrics = {j.at("mse").get<double>(), j.at("r2").get<double>()};
    r.predicted = j.at("predicted_profit").get<std::vector<double>>();
    r.predicted_rate = j.at("predicted_rate_of_change").get<std::vector<double>>();
    return r;
}

inline ModelComparison comparison_from_json(const Json& j)
{
    return {configuration_from_json(j.at("baseline9")), configuration_from_json(j.at("cognitive14"))};
}

} // namespace detail

inline AblationReport ablation_from_json(const Json& j)
{
    AblationReport r;
    const auto& cfg = j.at("config");
    r.config.train_fraction = cfg.at("train_fraction").get<double>();
    r.config.poly_degree = cfg.at("poly_degree").get<std::size_t>();
    r.config.bel = bel_config_from_json(cfg.at("bel"));
    r.train_rows = j.at("train_rows").get<std::size_t>();
    r.test_periods = j.at("test_periods").get<std::vector<std::string>>();
    r.actual = j.at("actual_profit").get<std::vector<double>>();
    r.actual_rate = j.at("actual_rate_of_change").get<std::vector<double>>();
    r.bel = detail::comparison_from_json(j.at("models").at("bel"));
    r.polynomial = detail::comparison_from_json(j.at("models").at("polynomial"));
    return r;
}

/// Per-period plot data. Rate-of-change columns are aligned with the later
/// period of each pair, so the first row leaves them empty.
inline std::string to_tsv(const AblationReport& r, const std::string& preamble = {})
{
    std::string out = preamble;
    out += "period\tactual_profit\tbel9_profit\tbel14_profit\tpoly9_profit\tpoly14_profit"
           "\tactual_roc\tbel9_roc\tbel14_roc\tpoly9_roc\tpoly14_roc\n";
    const std::vector<const std::vector<double>*> levels = {
        &r.actual, &r.bel.baseline9.predicted, &r.bel.cognitive14.predicted,
        &r.polynomial.baseline9.predicted, &r.polynomial.cognitive14.predicted};
    const std::vector<const std::vector<double>*> rates = {
        &r.actual_rate, &r.bel.baseline9.predicted_rate, &r.bel.cognitive14.predicted_rate,
        &r.polynomial.baseline9.predicted_rate, &r.polynomial.cognitive14.predicted_rate};
    for (std::size_t k = 0; k < r.test_periods.size(); ++k) {
        out += r.test_periods[k];
        for (const auto* series : levels) {
            out += "\t" + text::format_double(series->at(k));
        }
        for (const auto* series : rates) {
            out += "\t";
            if (k > 0) {
                out += text::format_double(series->at(k - 1));
            }
        }
        out += "\n";
    }
    return out;
}

} // namespace cbmo::analytics

#endif // CBMO_ABLATION_HPP
