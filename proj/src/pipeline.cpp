#include "uckd/pipeline.hpp"

#include <charconv>
#include <cmath>
#include <numeric>

#include "uckd/baselines.hpp"

namespace uckd {

void PipelineConfig::validate() const {
    uc.validate();
    thresholds.validate();
    validate_confidence_min(confidence_min);
    if (ensemble_size == 0) throw Error(Errc::empty_ensemble, "ensemble size must be positive");
    if (eval_repeats == 0) throw Error(Errc::invalid_config, "eval repeats must be positive");
    if (!(split_fraction > 0.0 && split_fraction < 1.0)) {
        throw Error(Errc::invalid_config, "split fraction must lie in (0, 1)");
    }
}

AccuracySummary AccuracySummary::of(std::vector<double> values) {
    AccuracySummary s;
    s.values = std::move(values);
    if (s.values.empty()) return s;
    const double n = static_cast<double>(s.values.size());
    s.mean = std::accumulate(s.values.begin(), s.values.end(), 0.0) / n;
    if (s.values.size() > 1) {
        double ss = 0.0;
        for (double v : s.values) ss += (v - s.mean) * (v - s.mean);
        s.stddev = std::sqrt(ss / (n - 1.0));
    }
    return s;
}

namespace {

void check_compatible(const Dataset& train, const Dataset& test) {
    if (train.feature_names() != test.feature_names()) {
        throw Error(Errc::dataset_mismatch, "train and test feature names differ");
    }
    if (train.target_kind() != test.target_kind()) {
        throw Error(Errc::dataset_mismatch, "train and test target kinds differ");
    }
    if (train.empty() || test.empty()) throw Error(Errc::empty_dataset, "train and test sets must be non-empty");
}

AccuracySummary summarize_train(const std::vector<ModelScore>& scores) {
    std::vector<double> v;
    for (const auto& s : scores) v.push_back(s.train_accuracy);
    return AccuracySummary::of(std::move(v));
}

AccuracySummary summarize_test(const std::vector<ModelScore>& scores) {
    std::vector<double> v;
    for (const auto& s : scores) v.push_back(s.test_accuracy);
    return AccuracySummary::of(std::move(v));
}

}  // namespace

std::vector<ModelScore> evaluate_repeats(const Dataset& train, const Dataset& test, const UCConfig& config,
                                         std::size_t repeats, std::uint64_t first_seed) {
    std::vector<ModelScore> scores;
    scores.reserve(repeats);
    for (std::size_t j = 0; j < repeats; ++j) {
        const std::uint64_t seed = first_seed + j;
        const UCModel model = uckd::train(shuffle(train, seed), config);
        scores.push_back({seed, accuracy(model, train), accuracy(model, test)});
    }
    return scores;
}

PipelineReport run_pipeline(const Dataset& train, const Dataset& test, const PipelineConfig& cfg) {
    cfg.validate();
    check_compatible(train, test);
    const bool categorical = train.target_kind() == TargetKind::categorical;

    PipelineReport report;
    report.config = cfg;
    report.feature_names = train.feature_names();
    report.target_kind = train.target_kind();
    report.class_labels = train.class_labels();
    report.initial_dims = train.feature_count();

    // Steps 1-3: ensemble over shuffled orders, one feature list per model.
    std::vector<FeatureSet> sets;
    for (std::size_t i = 0; i < cfg.ensemble_size; ++i) {
        const std::uint64_t seed = cfg.base_seed + i;
        const UCModel model = uckd::train(shuffle(train, seed), cfg.uc);
        if (categorical) report.ensemble_scores.push_back({seed, accuracy(model, train), accuracy(model, test)});
        auto member = select_from_model(model, cfg.thresholds);
        member.seed = seed;
        sets.push_back(member.selected);
        report.members.push_back(std::move(member));
    }
    if (categorical) {
        report.initial_train = summarize_train(report.ensemble_scores);
        report.initial_test = summarize_test(report.ensemble_scores);
    }

    // Step 4.
    report.confidence = ensemble_confidence(sets, train.feature_count());
    report.selected = select_by_confidence(report.confidence, cfg.confidence_min);
    if (report.selected.empty()) {
        report.status = "aborted_no_relevant_features";
        report.final_dims = report.initial_dims;
        report.reduction_fraction = 0.0;
        throw PipelineAborted(std::move(report));
    }
    report.final_dims = report.selected.size();
    report.reduction_fraction =
        1.0 - static_cast<double>(report.final_dims) / static_cast<double>(report.initial_dims);

    // Step 5.
    const Dataset reduced_train = reduce_features(train, report.selected);
    const Dataset reduced_test = reduce_features(test, report.selected);

    // Step 6.
    if (categorical) {
        report.eval_scores =
            evaluate_repeats(reduced_train, reduced_test, cfg.uc, cfg.eval_repeats, cfg.base_seed + cfg.ensemble_size);
        report.final_train = summarize_train(report.eval_scores);
        report.final_test = summarize_test(report.eval_scores);
        report.train_gain = report.final_train->mean - report.initial_train->mean;
        report.test_gain = report.final_test->mean - report.initial_test->mean;
    }

    // Step 7.
    const UCModel final_model = uckd::train(reduced_train, cfg.uc);
    report.final_patterns = mine_for_target(final_model);
    report.final_feature_names = reduced_train.feature_names();
    report.status = "complete";
    return report;
}

PatternValidityReport experiment_pattern_validity(const Dataset& train, const Dataset& test,
                                                  const PipelineConfig& cfg) {
    cfg.validate();
    check_compatible(train, test);
    if (train.target_kind() != TargetKind::categorical) {
        throw Error(Errc::kind_mismatch, "accuracy experiments need a categorical target");
    }

    PatternValidityReport report;
    report.config = cfg;
    report.initial_dims = train.feature_count();
    std::vector<double> it_train, it_test, fin_train, fin_test;
    double dims_sum = 0.0;
    for (std::size_t i = 0; i < cfg.eval_repeats; ++i) {
        PatternValidityIteration it;
        it.seed = cfg.base_seed + i;
        const Dataset ordered = shuffle(train, it.seed);
        const UCModel model = uckd::train(ordered, cfg.uc);
        it.initial_train = accuracy(model, train);
        it.initial_test = accuracy(model, test);

        const auto member = select_from_model(model, cfg.thresholds);
        it.status = member.status;
        if (member.selected.empty()) {
            it.selected_dims = train.feature_count();
            it.final_train = it.initial_train;
            it.final_test = it.initial_test;
        } else {
            it.selected_dims = member.selected.size();
            const UCModel reduced = uckd::train(reduce_features(ordered, member.selected), cfg.uc);
            it.final_train = accuracy(reduced, reduce_features(train, member.selected));
            it.final_test = accuracy(reduced, reduce_features(test, member.selected));
        }
        it_train.push_back(it.initial_train);
        it_test.push_back(it.initial_test);
        fin_train.push_back(it.final_train);
        fin_test.push_back(it.final_test);
        dims_sum += static_cast<double>(it.selected_dims);
        report.iterations.push_back(std::move(it));
    }
    report.initial_train = AccuracySummary::of(std::move(it_train));
    report.initial_test = AccuracySummary::of(std::move(it_test));
    report.final_train = AccuracySummary::of(std::move(fin_train));
    report.final_test = AccuracySummary::of(std::move(fin_test));
    report.mean_final_dims = dims_sum / static_cast<double>(cfg.eval_repeats);
    report.mean_reduction_fraction = 1.0 - report.mean_final_dims / static_cast<double>(report.initial_dims);
    report.train_gain = report.final_train.mean - report.initial_train.mean;
    report.test_gain = report.final_test.mean - report.initial_test.mean;
    return report;
}

BaselineSpec BaselineSpec::parse(std::string_view text) {
    if (text == "proposal") return {BaselineMethod::proposal, 0};
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) {
        throw Error(Errc::invalid_config, "baseline spec must be 'proposal', 'pca:<k>' or 'som:<dims>'");
    }
    const auto method = text.substr(0, colon);
    const auto dims_text = text.substr(colon + 1);
    std::size_t dims = 0;
    const auto res = std::from_chars(dims_text.data(), dims_text.data() + dims_text.size(), dims);
    if (res.ec != std::errc{} || res.ptr != dims_text.data() + dims_text.size() || dims == 0) {
        throw Error(Errc::invalid_config, "bad dimension in baseline spec '" + std::string(text) + "'");
    }
    if (method == "pca") return {BaselineMethod::pca, dims};
    if (method == "som") {
        const auto side = static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(dims))));
        if (dims != 2 && side * side != dims) {
            throw Error(Errc::invalid_config, "SOM dims must be 2 (BMU coordinates) or a square grid size");
        }
        return {BaselineMethod::som, dims};
    }
    throw Error(Errc::invalid_config, "unknown baseline method '" + std::string(method) + "'");
}

std::string BaselineSpec::label() const {
    switch (method) {
        case BaselineMethod::proposal: return "Proposal";
        case BaselineMethod::pca: return "PCA " + std::to_string(dims) + "dim";
        case BaselineMethod::som: return "SOM " + std::to_string(dims) + "dim";
    }
    return "unknown";
}

ComparisonTable experiment_baseline_comparison(const Dataset& train, const Dataset& test, const PipelineConfig& cfg,
                                               const std::vector<BaselineSpec>& specs,
                                               const BaselineOptions& options) {
    cfg.validate();
    check_compatible(train, test);
    if (train.target_kind() != TargetKind::categorical) {
        throw Error(Errc::kind_mismatch, "accuracy experiments need a categorical target");
    }

    ComparisonTable table;
    table.config = cfg;
    table.options = options;
    table.initial_dims = train.feature_count();

    const auto initial = evaluate_repeats(train, test, cfg.uc, cfg.eval_repeats, cfg.base_seed);
    const double initial_train = summarize_train(initial).mean;
    const double initial_test = summarize_test(initial).mean;

    const NormParams norm = fit_norm(train);
    const Dataset scaled_train = apply_norm(norm, train);
    const Dataset scaled_test = apply_norm(norm, test);

    std::optional<PatternValidityReport> proposal;
    for (const auto& spec : specs) {
        ComparisonRow row;
        row.method = spec.label();
        row.initial_train = initial_train;
        row.initial_test = initial_test;

        if (spec.method == BaselineMethod::proposal) {
            if (!proposal) proposal = experiment_pattern_validity(train, test, cfg);
            row.final_train = proposal->final_train.mean;
            row.final_test = proposal->final_test.mean;
            row.final_train_stddev = proposal->final_train.stddev;
            row.final_test_stddev = proposal->final_test.stddev;
            row.final_dims = proposal->mean_final_dims;
        } else {
            Dataset reduced_train;
            Dataset reduced_test;
            if (spec.method == BaselineMethod::pca) {
                const PCAModel pca = pca_fit(scaled_train, spec.dims);
                row.rank_deficient = pca.rank_deficient;
                reduced_train = pca_transform(pca, scaled_train);
                reduced_test = pca_transform(pca, scaled_test);
            } else {
                const bool coords = spec.dims == 2;
                const std::size_t side =
                    coords ? options.som_coords_grid_side
                           : static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(spec.dims))));
                const SOMModel som = som_fit(scaled_train, side, options.som_epochs, cfg.base_seed,
                                             coords ? SOMEncoding::bmu_coords : SOMEncoding::unit_distances);
                reduced_train = som_transform(som, scaled_train);
                reduced_test = som_transform(som, scaled_test);
            }
            const auto scores = evaluate_repeats(reduced_train, reduced_test, cfg.uc, cfg.eval_repeats, cfg.base_seed);
            const auto ft = summarize_train(scores);
            const auto fs = summarize_test(scores);
            row.final_train = ft.mean;
            row.final_test = fs.mean;
            row.final_train_stddev = ft.stddev;
            row.final_test_stddev = fs.stddev;
            row.final_dims = static_cast<double>(reduced_train.feature_count());
        }
        row.train_gain = row.final_train - row.initial_train;
        row.test_gain = row.final_test - row.initial_test;
        row.reduction_fraction = 1.0 - row.final_dims / static_cast<double>(table.initial_dims);
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace uckd
