#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include "uckd/baselines.hpp"
#include "uckd/dataset.hpp"
#include "uckd/error.hpp"
#include "uckd/patterns.hpp"
#include "uckd/pipeline.hpp"
#include "uckd/selection.hpp"
#include "uckd/serialize.hpp"
#include "uckd/stats.hpp"
#include "uckd/uc_model.hpp"

namespace uckd::cli {

namespace {

struct Options {
    std::string input;
    std::string test;
    std::string target = "class";
    std::string target_kind = "categorical";
    std::uint64_t seed = 0;
    bool seed_given = false;
    double theta0 = 0.9;
    double gamma = 0.5;
    std::string metric = "cosine";
    double epsilon = 1e-9;
    std::optional<std::size_t> max_depth;
    double r_min = 0.6;
    double p_max = 0.01;
    double confidence_min = 1.0;
    std::size_t models = 100;
    std::size_t repeats = 100;
    double fraction = 0.8;
    std::string out;
    std::string format = "json";

    // subcommand-specific
    std::string model;
    std::string features;
    bool class_constrained = false;
    std::size_t ensemble = 1;
    std::string experiment;
    std::vector<std::string> baselines{"proposal", "pca:2", "pca:10", "som:2", "som:9"};
    std::size_t som_epochs = 50;
    std::size_t som_grid = 10;
    std::size_t samples = 200;
    std::size_t informative = 5;
    std::size_t noise = 95;
    std::size_t classes = 2;
    double separation = 4.0;
    std::string truth;
};

UCConfig uc_config(const Options& o) {
    UCConfig c;
    c.metric = parse_metric(o.metric);
    c.theta0 = o.theta0;
    c.gamma = o.gamma;
    c.epsilon_identity = o.epsilon;
    c.max_depth = o.max_depth;
    c.validate();
    return c;
}

SelectionThresholds thresholds(const Options& o) {
    SelectionThresholds t{o.r_min, o.p_max};
    t.validate();
    return t;
}

PipelineConfig pipeline_config(const Options& o) {
    PipelineConfig c;
    c.uc = uc_config(o);
    c.thresholds = thresholds(o);
    c.ensemble_size = o.models;
    c.confidence_min = o.confidence_min;
    c.base_seed = o.seed;
    c.eval_repeats = o.repeats;
    c.split_fraction = o.fraction;
    c.validate();
    return c;
}

Dataset load_input(const Options& o, const std::string& path) {
    if (path.empty()) throw Error(Errc::invalid_config, "an input CSV is required");
    return load_csv(path, o.target, parse_target_kind(o.target_kind));
}

/// Train/test from --input/--test, or a stratified split of --input.
std::pair<Dataset, Dataset> load_train_test(const Options& o) {
    Dataset train = load_input(o, o.input);
    if (!o.test.empty()) return {std::move(train), load_input(o, o.test)};
    return split(train, o.fraction, o.seed);
}

void emit(const Options& o, std::ostream& out, const std::string& text) {
    if (o.out.empty()) {
        out << text;
    } else {
        write_text_file(o.out, text);
    }
}

void emit_json(const Options& o, std::ostream& out, const Json& j) { emit(o, out, j.dump(2) + "\n"); }

void warn_confidence(const Options& o, std::ostream& err) {
    if (o.confidence_min < 1.0) {
        err << "warning: confidence threshold " << o.confidence_min
            << " is below 1.0; features not selected by every model may pass\n";
    }
}

// Subcommands --------------------------------------------------------------

void cmd_synth(const Options& o, std::ostream& out) {
    SynthConfig cfg{o.samples, o.informative, o.noise, o.classes, o.separation, o.seed};
    const auto synth = synth_generate(cfg);
    std::ostringstream csv;
    write_csv(csv, synth.data);
    emit(o, out, csv.str());
    if (!o.truth.empty()) write_text_file(o.truth, to_json(synth.informative, synth.data.feature_names()).dump(2) + "\n");
}

void cmd_split(const Options& o, std::ostream& out) {
    if (o.out.empty() || o.test.empty()) {
        throw Error(Errc::invalid_config, "split writes to --out (train) and --test (test)");
    }
    const auto [train, test] = split(load_input(o, o.input), o.fraction, o.seed);
    save_csv(o.out, train);
    save_csv(o.test, test);
    out << "train rows: " << train.rows() << ", test rows: " << test.rows() << "\n";
}

void cmd_train(const Options& o, std::ostream& out) {
    Dataset d = load_input(o, o.input);
    if (o.seed_given) d = shuffle(d, o.seed);
    emit_json(o, out, to_json(train(d, uc_config(o))));
}

UCModel load_model(const Options& o) {
    if (o.model.empty()) throw Error(Errc::invalid_config, "--model is required");
    return model_from_json(read_json_file(o.model));
}

void cmd_eval(const Options& o, std::ostream& out) {
    const UCModel m = load_model(o);
    if (o.test.empty()) throw Error(Errc::invalid_config, "--test is required");
    const Dataset test = load_csv(o.test, m.target_name(), m.target_kind());
    Json j = Json::object();
    j["rows"] = test.rows();
    j["accuracy"] = accuracy(m, test);
    emit_json(o, out, j);
}

void cmd_mine(const Options& o, std::ostream& out) {
    const UCModel m = load_model(o);
    const auto patterns = o.class_constrained ? mine_class_constrained(m) : mine_unconstrained(m);
    if (o.format == "csv") {
        std::ostringstream csv;
        write_patterns_csv(csv, m, patterns);
        emit(o, out, csv.str());
    } else {
        emit_json(o, out, patterns_to_json(m, patterns));
    }
}

void cmd_correlate(const Options& o, std::ostream& out) {
    const UCModel m = load_model(o);
    const auto report = correlate_patterns(mine_for_target(m), m.target_kind(), m.class_labels().size());
    if (o.format == "csv") {
        std::ostringstream csv;
        write_correlation_csv(csv, report, m.feature_names(), m.class_labels());
        emit(o, out, csv.str());
    } else {
        emit_json(o, out, to_json(report, m.feature_names(), m.class_labels()));
    }
}

void cmd_select(const Options& o, std::ostream& out, std::ostream& err) {
    const Dataset d = load_input(o, o.input);
    warn_confidence(o, err);
    const auto result =
        select_features_ensemble(d, uc_config(o), thresholds(o), o.ensemble, o.confidence_min, o.seed);
    if (o.format == "csv") {
        std::ostringstream csv;
        write_confidence_csv(csv, result.confidence, result.selected, d.feature_names());
        emit(o, out, csv.str());
    } else {
        Json j = to_json(result.confidence, result.selected, d.feature_names());
        Json seeds = Json::array();
        for (const auto& m : result.members) seeds.push_back(m.seed);
        j["member_seeds"] = std::move(seeds);
        emit_json(o, out, j);
    }
}

void cmd_reduce(const Options& o, std::ostream& out) {
    const Dataset d = load_input(o, o.input);
    if (o.features.empty()) throw Error(Errc::invalid_config, "--features is required");
    const FeatureSet keep = feature_set_from_json(read_json_file(o.features), d.feature_count());
    std::ostringstream csv;
    write_csv(csv, reduce_features(d, keep));
    emit(o, out, csv.str());
}

void cmd_pipeline(const Options& o, std::ostream& out, std::ostream& err) {
    const PipelineConfig cfg = pipeline_config(o);
    warn_confidence(o, err);
    const auto [train, test] = load_train_test(o);
    try {
        emit_json(o, out, to_json(run_pipeline(train, test, cfg)));
    } catch (const PipelineAborted& aborted) {
        emit_json(o, out, to_json(aborted.partial()));
        throw;
    }
}

void cmd_experiment(const Options& o, std::ostream& out, std::ostream& err) {
    if (o.experiment == "selection") {
        cmd_pipeline(o, out, err);
        return;
    }
    const PipelineConfig cfg = pipeline_config(o);
    const auto [train, test] = load_train_test(o);
    if (o.experiment == "patterns") {
        emit_json(o, out, to_json(experiment_pattern_validity(train, test, cfg)));
        return;
    }
    std::vector<BaselineSpec> specs;
    for (const auto& s : o.baselines) specs.push_back(BaselineSpec::parse(s));
    BaselineOptions options;
    options.som_epochs = o.som_epochs;
    options.som_coords_grid_side = o.som_grid;
    const auto table = experiment_baseline_comparison(train, test, cfg, specs, options);
    if (o.format == "csv") {
        std::ostringstream csv;
        write_comparison_csv(csv, table);
        emit(o, out, csv.str());
    } else {
        emit_json(o, out, to_json(table));
    }
}

// Flag wiring --------------------------------------------------------------

void add_data_flags(CLI::App* app, Options& o) {
    app->add_option("--input", o.input, "Input CSV");
    app->add_option("--target", o.target, "Target column name")->capture_default_str();
    app->add_option("--target-kind", o.target_kind, "Target kind")
        ->check(CLI::IsMember({"numeric", "categorical"}))
        ->capture_default_str();
}

void add_seed_flag(CLI::App* app, Options& o) {
    app->add_option_function<std::uint64_t>(
        "--seed",
        [&o](const std::uint64_t& s) {
            o.seed = s;
            o.seed_given = true;
        },
        "Seed (u64)");
}

void add_model_flags(CLI::App* app, Options& o) {
    app->add_option("--theta0", o.theta0, "Depth-0 merge threshold")->capture_default_str();
    app->add_option("--gamma", o.gamma, "Per-depth threshold tightening")->capture_default_str();
    app->add_option("--metric", o.metric, "Similarity metric")
        ->check(CLI::IsMember({"cosine", "euclidean"}))
        ->capture_default_str();
    app->add_option("--epsilon", o.epsilon, "Duplicate tolerance")->capture_default_str();
    app->add_option_function<std::size_t>("--max-depth", [&o](const std::size_t& d) { o.max_depth = d; },
                                          "Depth cap (default unlimited)");
}

void add_threshold_flags(CLI::App* app, Options& o) {
    app->add_option("--r-min", o.r_min, "Minimum |r| (must exceed 0.5)")->capture_default_str();
    app->add_option("--p-max", o.p_max, "Maximum p-value")->capture_default_str();
    app->add_option("--confidence-min", o.confidence_min, "Minimum ensemble confidence (>= 0.5)")
        ->capture_default_str();
}

void add_output_flags(CLI::App* app, Options& o) {
    app->add_option("--out", o.out, "Output path (default stdout)");
    app->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
}

void add_run_flags(CLI::App* app, Options& o) {
    add_data_flags(app, o);
    add_seed_flag(app, o);
    add_model_flags(app, o);
    add_threshold_flags(app, o);
    add_output_flags(app, o);
    app->add_option("--test", o.test, "Test CSV (default: split --input)");
    app->add_option("--models", o.models, "Ensemble size")->capture_default_str();
    app->add_option("--repeats", o.repeats, "Evaluation repeats")->capture_default_str();
    app->add_option("--split-fraction", o.fraction, "Train fraction when splitting --input")->capture_default_str();
}

int exit_code_for(Errc code) {
    switch (category(code)) {
        case ErrorCategory::io: return kIoError;
        case ErrorCategory::no_relevant_features: return kNoRelevantFeatures;
        case ErrorCategory::validation: return kValidationError;
    }
    return kValidationError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Knowledge discovery with Unsupervised Cognition representation trees"};
    app.require_subcommand(1);

    std::function<void()> action;

    auto* synth = app.add_subcommand("synth", "Generate a planted-signal classification dataset");
    synth->add_option("--samples", o.samples)->capture_default_str();
    synth->add_option("--informative", o.informative)->capture_default_str();
    synth->add_option("--noise", o.noise)->capture_default_str();
    synth->add_option("--classes", o.classes)->capture_default_str();
    synth->add_option("--separation", o.separation)->capture_default_str();
    synth->add_option("--truth", o.truth, "Write the planted feature set here (JSON)");
    add_seed_flag(synth, o);
    synth->add_option("--out", o.out, "Output CSV (default stdout)");
    synth->callback([&] { action = [&] { cmd_synth(o, out); }; });

    auto* split_cmd = app.add_subcommand("split", "Stratified train/test split");
    add_data_flags(split_cmd, o);
    add_seed_flag(split_cmd, o);
    split_cmd->add_option("--fraction", o.fraction, "Train fraction")->capture_default_str();
    split_cmd->add_option("--out", o.out, "Train CSV output")->required();
    split_cmd->add_option("--test", o.test, "Test CSV output")->required();
    split_cmd->callback([&] { action = [&] { cmd_split(o, out); }; });

    auto* train_cmd = app.add_subcommand("train", "Train a model and write it as JSON");
    add_data_flags(train_cmd, o);
    add_seed_flag(train_cmd, o);
    add_model_flags(train_cmd, o);
    train_cmd->add_option("--out", o.out, "Model JSON output (default stdout)");
    train_cmd->callback([&] { action = [&] { cmd_train(o, out); }; });

    auto* eval_cmd = app.add_subcommand("eval", "Accuracy of a stored model on a test CSV");
    eval_cmd->add_option("--model", o.model, "Model JSON")->required();
    eval_cmd->add_option("--test", o.test, "Test CSV")->required();
    eval_cmd->add_option("--out", o.out, "Output path (default stdout)");
    eval_cmd->callback([&] { action = [&] { cmd_eval(o, out); }; });

    auto* mine_cmd = app.add_subcommand("mine", "Extract patterns from a stored model");
    mine_cmd->add_option("--model", o.model, "Model JSON")->required();
    mine_cmd->add_flag("--class-constrained", o.class_constrained, "Most generic single-class patterns");
    add_output_flags(mine_cmd, o);
    mine_cmd->callback([&] { action = [&] { cmd_mine(o, out); }; });

    auto* corr_cmd = app.add_subcommand("correlate", "Feature/target correlations over a model's patterns");
    corr_cmd->add_option("--model", o.model, "Model JSON")->required();
    add_output_flags(corr_cmd, o);
    corr_cmd->callback([&] { action = [&] { cmd_correlate(o, out); }; });

    auto* select_cmd = app.add_subcommand("select", "Select relevant features (single model or ensemble)");
    add_data_flags(select_cmd, o);
    add_seed_flag(select_cmd, o);
    add_model_flags(select_cmd, o);
    add_threshold_flags(select_cmd, o);
    add_output_flags(select_cmd, o);
    select_cmd->add_option("--ensemble,--models", o.ensemble, "Number of shuffled models")->capture_default_str();
    select_cmd->add_option("--confidence", o.confidence_min, "Alias of --confidence-min");
    select_cmd->callback([&] { action = [&] { cmd_select(o, out, err); }; });

    auto* reduce_cmd = app.add_subcommand("reduce", "Keep only the listed feature columns");
    add_data_flags(reduce_cmd, o);
    reduce_cmd->add_option("--features", o.features, "FeatureSet or selection JSON")->required();
    reduce_cmd->add_option("--out", o.out, "Output CSV (default stdout)");
    reduce_cmd->callback([&] { action = [&] { cmd_reduce(o, out); }; });

    auto* pipeline_cmd = app.add_subcommand("pipeline", "Full knowledge-discovery pipeline");
    add_run_flags(pipeline_cmd, o);
    pipeline_cmd->callback([&] { action = [&] { cmd_pipeline(o, out, err); }; });

    auto* exp_cmd = app.add_subcommand("experiment", "Run one of the evaluation experiments");
    exp_cmd->add_option("name", o.experiment, "Experiment")
        ->required()
        ->check(CLI::IsMember({"patterns", "baselines", "selection"}));
    add_run_flags(exp_cmd, o);
    exp_cmd->add_option("--baselines", o.baselines, "Methods, e.g. proposal pca:2 som:9")->delimiter(',');
    exp_cmd->add_option("--som-epochs", o.som_epochs)->capture_default_str();
    exp_cmd->add_option("--som-grid", o.som_grid, "Grid side for 2-dim SOM")->capture_default_str();
    exp_cmd->callback([&] { action = [&] { cmd_experiment(o, out, err); }; });

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e, out, err);
        err << "error: " << e.what() << "\n";
        return kValidationError;
    }

    try {
        action();
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kIoError;
    }
    return kSuccess;
}

}  // namespace uckd::cli
