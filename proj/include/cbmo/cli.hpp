#ifndef CBMO_CLI_HPP
#define CBMO_CLI_HPP

// Command-line driver. Exit codes: 0 success, 1 model failed validation,
// 2 usage, I/O or parse error (parse errors carry their line number).

#include <cbmo/ablation.hpp>
#include <cbmo/analytics.hpp>
#include <cbmo/bel.hpp>
#include <cbmo/model_dsl.hpp>
#include <cbmo/observations.hpp>
#include <cbmo/ontology.hpp>
#include <cbmo/polynomial.hpp>
#include <cbmo/synthetic.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace cbmo::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_invalid = 1;
inline constexpr int exit_error = 2;

/// Environment variable overriding the default output directory (".").
inline constexpr const char* out_dir_env = "CBMO_OUT_DIR";

using Json = nlohmann::ordered_json;

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A ParseError tagged with the file it came from.
class FileParseError : public ParseError {
public:
    FileParseError(std::string path, const ParseError& cause)
        : ParseError(cause)
        , path_(std::move(path))
    {
    }

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/// Everything that determines a run's outputs. Echoed into every artifact.
struct RunConfig {
    std::string command;
    std::string input;
    std::string binding;
    std::string network;
    std::string out_dir;
    double alpha = bel::BelConfig{}.alpha;
    double beta = bel::BelConfig{}.beta;
    std::size_t epochs = bel::BelConfig{}.epochs;
    bool shuffle = false;
    std::size_t poly_degree = analytics::AblationConfig{}.poly_degree;
    double train_fraction = analytics::AblationConfig{}.train_fraction;
    std::uint64_t seed = 0;
    // synth only
    std::size_t periods = synthetic::TableSpec{}.periods;
    double noise = synthetic::TableSpec{}.noise;
    bool baseline_only = false;

    bel::BelConfig bel_config() const { return {alpha, beta, epochs, seed, shuffle}; }

    analytics::AblationConfig ablation_config() const
    {
        analytics::AblationConfig c;
        c.train_fraction = train_fraction;
        c.bel = bel_config();
        c.poly_degree = poly_degree;
        return c;
    }

    /// The output directory is left out: it names where artifacts go, not
    /// what they contain.
    Json to_json() const
    {
        Json j{{"command", command}, {"input", input}};
        if (!binding.empty()) {
            j["binding"] = binding;
        }
        if (!network.empty()) {
            j["network"] = network;
        }
        if (command == "synth") {
            j["periods"] = periods;
            j["noise"] = noise;
            j["baseline_only"] = baseline_only;
            j["seed"] = seed;
            return j;
        }
        j["alpha"] = alpha;
        j["beta"] = beta;
        j["epochs"] = epochs;
        j["shuffle"] = shuffle;
        j["poly_degree"] = poly_degree;
        j["train_fraction"] = train_fraction;
        j["seed"] = seed;
        return j;
    }

    std::string comment_line() const { return "# run: " + to_json().dump() + "\n"; }
};

namespace detail {

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

/// Runs parse(contents of path), attributing any ParseError to path.
template <typename Parse>
auto parse_file(const std::string& path, Parse&& parse)
{
    const std::string contents = read_file(path);
    try {
        return parse(contents);
    } catch (const ParseError& e) {
        throw FileParseError(path, e);
    }
}

inline void write_file(const std::filesystem::path& path, const std::string& content)
{
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << content) || !out.flush()) {
        throw IoError("cannot write '" + path.string() + "'");
    }
}

inline std::string default_out_dir()
{
    if (const char* env = std::getenv(out_dir_env); env && *env) {
        return env;
    }
    return ".";
}

inline ColumnBinding binding_for(const RunConfig& cfg)
{
    if (cfg.binding.empty()) {
        return identity_binding();
    }
    return parse_file(cfg.binding, [](const std::string& text) { return load_binding(text); });
}

/// Bound input concepts in schema input order.
inline std::vector<ConceptId> ordered_inputs(const ObservationTable& table)
{
    std::vector<ConceptId> out;
    for (auto id : canonical_schema().input_elements) {
        if (table.find(id)) {
            out.push_back(id);
        }
    }
    return out;
}

inline std::string fixed(double x, int precision = 6)
{
    std::ostringstream s;
    s << std::fixed << std::setprecision(precision) << x;
    return s.str();
}

inline Json metrics_json(const analytics::EvaluationMetrics& m)
{
    return Json{{"mse", m.mse}, {"r2", m.r2}};
}

// --- commands --------------------------------------------------------------

inline int cmd_validate(const RunConfig& cfg, std::ostream& out)
{
    auto instance = parse_file(cfg.input, [](const std::string& text) { return parse_model(text); });
    auto report = validate_instance(instance, canonical_schema());
    out << "valid: " << (report.valid ? "true" : "false") << "\n";
    out << "violations: " << report.violations.size() << "\n";
    for (const auto& v : report.violations) {
        out << to_string(v.code) << " " << symbol(v.subject) << ": " << v.detail << "\n";
    }
    return report.valid ? exit_ok : exit_invalid;
}

inline int cmd_train(const RunConfig& cfg, std::ostream& out)
{
    const auto binding = binding_for(cfg);
    auto table = parse_file(cfg.input, [&](const std::string& text) { return load_observations(text, binding); });
    auto [normalized, params] = analytics::normalize(table);
    auto [train, test] = analytics::split(normalized, cfg.train_fraction);
    const auto inputs = ordered_inputs(table);
    const auto features = analytics::select_features(train, inputs);
    if (features.empty()) {
        throw Error(ErrorCode::EmptyDataset, "no informative input columns");
    }

    std::vector<bel::Sample> samples;
    auto rows = analytics::feature_rows(train, features);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        samples.push_back({std::move(rows[r]), train.profit[r]});
    }
    const auto bel_cfg = cfg.bel_config();
    auto [net, history] = bel::fit(bel::BelNetwork(features.size(), bel_cfg), samples, bel_cfg);

    auto bel_predict = [&](const ObservationTable& t) {
        std::vector<double> p;
        for (const auto& s : analytics::feature_rows(t, features)) {
            p.push_back(bel::predict(net, s));
        }
        return p;
    };
    auto matrix = [&](const ObservationTable& t) {
        return analytics::to_matrix(analytics::feature_rows(t, features), features.size());
    };
    auto poly = analytics::fit_polynomial(matrix(train), train.profit, cfg.poly_degree);

    Json feature_list = Json::array();
    for (auto id : features) {
        feature_list.push_back(std::string(symbol(id)));
    }
    Json metrics{
        {"run", cfg.to_json()},
        {"train_rows", train.rows()},
        {"test_rows", test.rows()},
        {"features", feature_list},
        {"bel",
         Json{{"train", metrics_json(analytics::evaluate(bel_predict(train), train.profit))},
              {"test", metrics_json(analytics::evaluate(bel_predict(test), test.profit))},
              {"final_epoch_mse", history.epoch_mse.empty() ? 0.0 : history.epoch_mse.back()}}},
        {"polynomial",
         Json{{"degree", poly.degree},
              {"coefficients", poly.coefficients},
              {"train", metrics_json(analytics::evaluate(analytics::predict_polynomial(poly, matrix(train)), train.profit))},
              {"test", metrics_json(analytics::evaluate(analytics::predict_polynomial(poly, matrix(test)), test.profit))}}},
    };

    std::string snapshot = cfg.comment_line() + bel::to_snapshot(net);
    for (std::size_t i = 0; i < features.size(); ++i) {
        const auto* range = params.find(features[i]);
        const auto idx = "[" + std::to_string(i) + "]";
        snapshot += "input" + idx + "=" + std::string(symbol(features[i])) + "\n";
        snapshot += "input_min" + idx + "=" + text::format_double(range->min) + "\n";
        snapshot += "input_max" + idx + "=" + text::format_double(range->max) + "\n";
    }
    snapshot += "profit_min=" + text::format_double(params.profit.min) + "\n";
    snapshot += "profit_max=" + text::format_double(params.profit.max) + "\n";

    const std::filesystem::path dir = cfg.out_dir;
    write_file(dir / "network.txt", snapshot);
    write_file(dir / "train_metrics.json", metrics.dump(2) + "\n");
    out << "wrote " << (dir / "network.txt").string() << " and " << (dir / "train_metrics.json").string() << "\n";
    out << "bel test mse=" << metrics["bel"]["test"]["mse"].get<double>()
        << " r2=" << metrics["bel"]["test"]["r2"].get<double>() << "\n";
    out << "polynomial test mse=" << metrics["polynomial"]["test"]["mse"].get<double>()
        << " r2=" << metrics["polynomial"]["test"]["r2"].get<double>() << "\n";
    return exit_ok;
}

struct NetworkBundle {
    bel::BelNetwork net;
    std::vector<ConceptId> features;
    analytics::ScalerParams params;
};

/// Snapshot written by `train`: network keys plus the input binding and
/// scaling ranges (input[i], input_min[i], input_max[i], profit_min/max).
inline NetworkBundle read_bundle(const std::string& snapshot)
{
    std::map<std::string, bel::SnapshotEntry> extra;
    auto net = bel::from_snapshot(snapshot, &extra);
    auto take = [&](const std::string& key) {
        auto it = extra.find(key);
        if (it == extra.end()) {
            throw ParseError(1, ParseErrorKind::BadArity, "snapshot lacks '" + key + "'");
        }
        return it->second;
    };
    auto number = [&](const std::string& key) {
        auto entry = take(key);
        auto value = text::parse_double(entry.value);
        if (!value) {
            throw ParseError(entry.line, ParseErrorKind::Syntax, key + " is not a finite number");
        }
        return *value;
    };

    std::vector<ConceptId> features;
    analytics::ScalerParams params;
    for (std::size_t i = 0; i < net.size(); ++i) {
        const auto idx = "[" + std::to_string(i) + "]";
        auto entry = take("input" + idx);
        auto id = concept_from_symbol(entry.value);
        if (!id) {
            throw ParseError(entry.line, ParseErrorKind::UnknownConcept, "unknown concept '" + entry.value + "'");
        }
        features.push_back(*id);
        params.columns.emplace_back(*id, analytics::Range{number("input_min" + idx), number("input_max" + idx)});
    }
    params.profit = {number("profit_min"), number("profit_max")};
    return {std::move(net), std::move(features), std::move(params)};
}

inline int cmd_predict(const RunConfig& cfg, std::ostream& out)
{
    auto [net, features, params] = parse_file(cfg.network, [](const std::string& text) { return read_bundle(text); });

    LoadOptions options;
    options.require_profit = false;
    const auto binding = binding_for(cfg);
    auto table = parse_file(cfg.input, [&](const std::string& text) { return load_observations(text, binding, options); });
    ObservationTable inputs;
    inputs.periods = table.periods;
    for (auto id : features) {
        const auto* column = table.find(id);
        if (!column) {
            throw Error(ErrorCode::MissingColumn, "data has no column for " + std::string(symbol(id)));
        }
        inputs.columns.push_back(*column);
    }
    auto scaled = analytics::apply_scaler(inputs, params);

    std::vector<double> normalized;
    for (const auto& s : analytics::feature_rows(scaled, features)) {
        normalized.push_back(bel::predict(net, s));
    }
    auto predicted = analytics::inverse_profit(normalized, params);

    std::string tsv = cfg.comment_line();
    tsv += table.profit.empty() ? "period\tpredicted_profit\n" : "period\tpredicted_profit\tactual_profit\n";
    for (std::size_t r = 0; r < table.rows(); ++r) {
        tsv += table.periods[r] + "\t" + text::format_double(predicted[r]);
        if (!table.profit.empty()) {
            tsv += "\t" + text::format_double(table.profit[r]);
        }
        tsv += "\n";
    }
    const auto path = std::filesystem::path(cfg.out_dir) / "predictions.tsv";
    write_file(path, tsv);
    out << "wrote " << path.string() << " (" << table.rows() << " periods)\n";
    return exit_ok;
}

inline int cmd_ablate(const RunConfig& cfg, std::ostream& out)
{
    const auto binding = binding_for(cfg);
    auto table = parse_file(cfg.input, [&](const std::string& text) { return load_observations(text, binding); });
    auto report = analytics::run_ablation(table, cfg.ablation_config());

    Json doc{{"run", cfg.to_json()}};
    const Json body = analytics::to_json(report);
    for (const auto& [key, value] : body.items()) {
        doc[key] = value;
    }
    const std::filesystem::path dir = cfg.out_dir;
    write_file(dir / "ablation.json", doc.dump(2) + "\n");
    write_file(dir / "ablation.tsv", analytics::to_tsv(report, cfg.comment_line()));
    out << "wrote " << (dir / "ablation.json").string() << " and " << (dir / "ablation.tsv").string() << "\n";
    return exit_ok;
}

inline int cmd_report(const RunConfig& cfg, std::ostream& out)
{
    Json doc;
    try {
        doc = Json::parse(read_file(cfg.input));
    } catch (const nlohmann::json::parse_error& e) {
        throw FileParseError(cfg.input, ParseError(1, ParseErrorKind::Syntax, e.what()));
    }
    analytics::AblationReport report;
    try {
        report = analytics::ablation_from_json(doc);
    } catch (const nlohmann::json::exception& e) {
        throw FileParseError(cfg.input, ParseError(1, ParseErrorKind::BadArity,
                                                   std::string("not an ablation report: ") + e.what()));
    }

    out << "Ablation report: " << report.train_rows << " training periods, " << report.test_periods.size()
        << " test periods";
    if (!report.test_periods.empty()) {
        out << " (" << report.test_periods.front() << ".." << report.test_periods.back() << ")";
    }
    out << "\n";
    if (doc.contains("run")) {
        out << "run: " << doc["run"].dump() << "\n";
    }
    out << "\nmodel       inputs  mse            r2\n";
    auto row = [&](const char* model, const analytics::ConfigurationResult& r) {
        out << std::left << std::setw(12) << model << std::setw(8) << r.features.size() << std::setw(15)
            << std::scientific << std::setprecision(6) << r.metrics.mse << std::fixed << std::setprecision(6)
            << r.metrics.r2 << "\n";
    };
    row("bel", report.bel.baseline9);
    row("bel", report.bel.cognitive14);
    row("polynomial", report.polynomial.baseline9);
    row("polynomial", report.polynomial.cognitive14);

    auto table = [&](const char* title, bool rates) {
        const auto& b = report.bel;
        const auto& p = report.polynomial;
        const std::vector<const std::vector<double>*> series =
            rates ? std::vector<const std::vector<double>*>{&report.actual_rate, &b.baseline9.predicted_rate, &b.cognitive14.predicted_rate,
                                &p.baseline9.predicted_rate, &p.cognitive14.predicted_rate}
                  : std::vector<const std::vector<double>*>{&report.actual, &b.baseline9.predicted, &b.cognitive14.predicted,
                                &p.baseline9.predicted, &p.cognitive14.predicted};
        out << "\n" << title << "\nperiod      actual        bel9          bel14         poly9         poly14\n";
        for (std::size_t k = 0; k < series.front()->size(); ++k) {
            // a rate belongs to the later period of its pair
            out << std::left << std::setw(12) << report.test_periods.at(rates ? k + 1 : k);
            for (const auto* s : series) {
                out << std::setw(14) << fixed(s->at(k), rates ? 4 : 2);
            }
            out << "\n";
        }
    };
    table("Profit (actual vs predicted)", false);
    table("Rate of change of profit", true);
    return exit_ok;
}

inline int cmd_synth(const RunConfig& cfg, std::ostream& out)
{
    synthetic::TableSpec spec;
    spec.periods = cfg.periods;
    spec.seed = cfg.seed;
    spec.noise = cfg.noise;
    spec.dependence = cfg.baseline_only ? synthetic::Dependence::BaselineOnly : synthetic::Dependence::AllInputs;
    auto generated = synthetic::make_table(spec);
    write_file(cfg.input, write_observations(generated.table, "year"));
    out << "wrote " << cfg.input << " (" << spec.periods << " periods)\n";
    return exit_ok;
}

} // namespace detail

/// Runs one command. args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    RunConfig cfg;
    cfg.out_dir = detail::default_out_dir();

    CLI::App app{"Cognitive business-model ontology: validation, BEL training and 9-vs-14 ablation"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Expand all help");

    auto add_out = [&](CLI::App* sub) {
        sub->add_option("--out-dir", cfg.out_dir, "Output directory (default $" + std::string(out_dir_env) + " or .)");
    };
    auto add_learning = [&](CLI::App* sub) {
        sub->add_option("--alpha", cfg.alpha, "Amygdala learning rate")->check(CLI::Range(0.0, 1.0));
        sub->add_option("--beta", cfg.beta, "Orbitofrontal learning rate")->check(CLI::Range(0.0, 1.0));
        sub->add_option("--epochs", cfg.epochs, "Training epochs");
        sub->add_flag("--shuffle", cfg.shuffle, "Shuffle samples each epoch (seeded)");
        sub->add_option("--degree", cfg.poly_degree, "Polynomial baseline degree")->check(CLI::PositiveNumber);
        sub->add_option("--train-fraction", cfg.train_fraction, "Chronological train fraction");
        sub->add_option("--seed", cfg.seed, "Seed for shuffling");
    };

    auto* validate = app.add_subcommand("validate", "Validate a .cbm business model against the ontology");
    validate->add_option("model", cfg.input, "Model file")->required();

    auto* train = app.add_subcommand("train", "Train BEL and polynomial baseline; write snapshot and metrics");
    train->add_option("data", cfg.input, "Observation CSV")->required();
    train->add_option("--binding", cfg.binding, "Header-to-concept binding CSV")->required();
    add_learning(train);
    add_out(train);

    auto* predict = app.add_subcommand("predict", "Predict profit with a trained network snapshot");
    predict->add_option("data", cfg.input, "Observation CSV")->required();
    predict->add_option("--net", cfg.network, "Network snapshot from train")->required();
    predict->add_option("--binding", cfg.binding, "Header-to-concept binding CSV (default: concept symbols)");
    add_out(predict);

    auto* ablate = app.add_subcommand("ablate", "Compare 9-input and 14-input ontologies");
    ablate->add_option("data", cfg.input, "Observation CSV")->required();
    ablate->add_option("--binding", cfg.binding, "Header-to-concept binding CSV (default: concept symbols)");
    add_learning(ablate);
    add_out(ablate);

    auto* report = app.add_subcommand("report", "Summarise an ablation JSON report");
    report->add_option("report", cfg.input, "ablation.json")->required();

    auto* synth = app.add_subcommand("synth", "Write a seeded synthetic observation CSV");
    synth->add_option("output", cfg.input, "Output CSV path")->required();
    synth->add_option("--periods", cfg.periods, "Number of periods")->check(CLI::PositiveNumber);
    synth->add_option("--seed", cfg.seed, "Generator seed");
    synth->add_option("--noise", cfg.noise, "Noise sd relative to signal sd")->check(CLI::NonNegativeNumber);
    synth->add_flag("--baseline-only", cfg.baseline_only, "Only the first nine inputs carry signal");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return exit_error;
    }

    try {
        for (auto* sub : app.get_subcommands()) {
            cfg.command = sub->get_name();
        }
        if (cfg.command == "validate") {
            return detail::cmd_validate(cfg, out);
        }
        if (cfg.command == "train") {
            return detail::cmd_train(cfg, out);
        }
        if (cfg.command == "predict") {
            return detail::cmd_predict(cfg, out);
        }
        if (cfg.command == "ablate") {
            return detail::cmd_ablate(cfg, out);
        }
        if (cfg.command == "report") {
            return detail::cmd_report(cfg, out);
        }
        if (cfg.command == "synth") {
            return detail::cmd_synth(cfg, out);
        }
    } catch (const FileParseError& e) {
        err << "error: " << e.path() << ":" << e.line() << ": " << to_string(e.kind()) << ": " << e.detail() << "\n";
        return exit_error;
    } catch (const ParseError& e) {
        err << "error: " << cfg.input << ":" << e.line() << ": " << to_string(e.kind()) << ": " << e.detail() << "\n";
        return exit_error;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return exit_error;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_error;
    }
    err << "error: unknown command\n";
    return exit_error;
}

} // namespace cbmo::cli

#endif // CBMO_CLI_HPP
