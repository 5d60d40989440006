// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "support/helpers.hpp"
#include "support/oracles.hpp"
#include "uckd/baselines.hpp"
#include "uckd/pipeline.hpp"
#include "uckd/selection.hpp"
#include "uckd/stats.hpp"

using namespace uckd;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

/// Collects the first few failure messages of a criterion.
class Failures {
public:
    void add(const std::string& message) {
        ++count_;
        if (count_ <= 3) {
            if (!text_.empty()) text_ += "; ";
            text_ += message;
        }
    }
    bool any() const { return count_ > 0; }
    Outcome outcome(std::string summary) const {
        if (count_ == 0) return {true, std::move(summary)};
        return {false, std::to_string(count_) + " failure(s): " + text_ + " | " + summary};
    }

private:
    std::size_t count_ = 0;
    std::string text_;
};

std::string fmt(double v, int digits = 4) {
    std::ostringstream os;
    os.precision(digits);
    os << v;
    return os.str();
}

// 200 random datasets shared by the first two criteria.
struct CorpusCase {
    Dataset data;
    UCConfig config;
};

std::vector<CorpusCase> tree_corpus() {
    std::mt19937_64 gen(20240601);
    std::vector<CorpusCase> corpus;
    for (int i = 0; i < 200; ++i) {
        const std::size_t rows = 1 + gen() % 100;
        const std::size_t features = 1 + gen() % 20;
        const std::size_t classes = 1 + gen() % 4;
        auto d = testing::random_dataset(gen, rows, features, classes);
        corpus.push_back({std::move(d), testing::random_config(gen)});
    }
    return corpus;
}

Outcome tree_invariants(const std::vector<CorpusCase>& corpus) {
    Failures f;
    double worst_mean = 0.0;
    std::size_t duplicate_checks = 0;
    std::mt19937_64 gen(99);
    for (std::size_t c = 0; c < corpus.size(); ++c) {
        const auto& [d, cfg] = corpus[c];
        const auto tag = "case " + std::to_string(c);
        for (std::size_t depth = 0; depth < 8; ++depth) {
            if (!(cfg.threshold(depth + 1) > cfg.threshold(depth))) f.add(tag + ": thresholds not increasing");
        }
        const auto m = train(d, cfg);
        if (!testing::partition_holds(m)) f.add(tag + ": partition");
        const auto scaled = normalize(d).first;
        const double err = testing::running_mean_error(m, scaled);
        worst_mean = std::max(worst_mean, err);
        if (err > 1e-9) f.add(tag + ": running mean error " + fmt(err));
        if (testing::fingerprint(train(d, cfg)) != testing::fingerprint(m)) f.add(tag + ": not deterministic");

        const auto before = testing::representation_count(m);
        for (int k = 0; k < 5; ++k) {
            const auto row = gen() % d.rows();
            auto copy = m;
            copy.insert(scaled.row(row), Target::category(d.class_index(row)));
            ++duplicate_checks;
            if (testing::representation_count(copy) > before) {
                f.add(tag + ": duplicate of row " + std::to_string(row) + " grew the tree");
            }
        }
    }
    return f.outcome("200 datasets, worst running-mean error " + fmt(worst_mean) + ", " +
                     std::to_string(duplicate_checks) + " duplicate inserts");
}

Outcome pattern_cover(const std::vector<CorpusCase>& corpus) {
    Failures f;
    std::size_t patterns_seen = 0;
    for (std::size_t c = 0; c < corpus.size(); ++c) {
        const auto& [d, cfg] = corpus[c];
        const auto tag = "case " + std::to_string(c);
        const auto m = train(d, cfg);
        const auto patterns = mine_class_constrained(m);
        patterns_seen += patterns.size();
        std::vector<std::size_t> hits(d.rows(), 0);
        std::vector<bool> class_seen(d.class_labels().size(), false);
        std::size_t total = 0;
        for (const auto& p : patterns) {
            if (!p.pure_class || std::count_if(p.label_hist.begin(), p.label_hist.end(), [](std::size_t h) { return h > 0; }) != 1) {
                f.add(tag + ": impure pattern");
                continue;
            }
            class_seen[*p.pure_class] = true;
            total += p.count;
            for (auto id : p.members) ++hits[id];
        }
        if (total != d.rows()) f.add(tag + ": counts sum to " + std::to_string(total));
        if (!std::all_of(hits.begin(), hits.end(), [](std::size_t h) { return h == 1; })) {
            f.add(tag + ": inputs not covered exactly once");
        }
        if (!std::all_of(class_seen.begin(), class_seen.end(), [](bool b) { return b; })) {
            f.add(tag + ": a class has no pattern");
        }
    }
    return f.outcome(std::to_string(patterns_seen) + " patterns over 200 datasets");
}

Outcome statistics_oracle() {
    Failures f;
    std::mt19937_64 gen(1234);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    double worst_r = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 3 + gen() % 98;
        std::vector<double> x(n), y(n), ind(n);
        const double rho = 2.0 * unit(gen) - 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = normal(gen);
            y[i] = rho * x[i] + std::sqrt(1.0 - rho * rho) * normal(gen);
            ind[i] = static_cast<double>(gen() % 2);
        }
        ind[0] = 0.0;
        ind[1] = 1.0;
        const double e1 = std::fabs(pearson(x, y).r - oracle::pearson_sums(x, y));
        const double e2 = std::fabs(point_biserial(x, ind).r - oracle::pearson_sums(x, ind));
        worst_r = std::max({worst_r, e1, e2});
        if (e1 > 1e-12 || e2 > 1e-12) f.add("trial " + std::to_string(trial) + ": r error " + fmt(std::max(e1, e2)));
    }

    double worst_closed = 0.0;
    for (int i = 0; i < 2000; ++i) {
        const double r = -0.9995 + 1.999 * unit(gen);
        const double e1 = std::fabs(p_value(r, 3) - oracle::p_df1(r));
        const double e2 = std::fabs(p_value(r, 4) - oracle::p_df2(r));
        worst_closed = std::max({worst_closed, e1, e2});
        if (e1 > 1e-10 || e2 > 1e-10) f.add("r=" + fmt(r, 17) + ": closed-form error " + fmt(std::max(e1, e2)));
    }

    double worst_perm = 0.0;
    std::size_t perm_within = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 5 + gen() % 26;
        std::vector<double> x(n), y(n);
        const double rho = 1.6 * unit(gen) - 0.8;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = normal(gen);
            y[i] = rho * x[i] + std::sqrt(1.0 - rho * rho) * normal(gen);
        }
        const double p = pearson(x, y).p;
        const double ref = oracle::permutation_p(x, y, 10000, 500 + trial);
        const double err = std::fabs(p - ref);
        worst_perm = std::max(worst_perm, err);
        if (err <= 0.02) {
            ++perm_within;
        } else {
            f.add("permutation n=" + std::to_string(n) + ": p=" + fmt(p) + " vs " + fmt(ref));
        }
    }
    return f.outcome("worst r error " + fmt(worst_r) + ", closed-form error " + fmt(worst_closed) +
                     ", permutation " + std::to_string(perm_within) + "/50 within 0.02 (worst " + fmt(worst_perm) +
                     ")");
}

FeatureSet select_or_empty(const FeatureCorrelationReport& report, const SelectionThresholds& t) {
    try {
        return select_features_single(report, t);
    } catch (const Error& e) {
        if (e.code() != Errc::no_relevant_features) throw;
        return FeatureSet({}, report.feature_count());
    }
}

FeatureSet confident_or_empty(const ConfidenceMap& c, double cmin) {
    try {
        return select_by_confidence(c, cmin);
    } catch (const Error& e) {
        if (e.code() != Errc::no_relevant_features) throw;
        return FeatureSet({}, c.feature_count());
    }
}

Outcome selection_properties() {
    Failures f;
    std::mt19937_64 gen(777);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const auto tag = "report " + std::to_string(trial);
        FeatureCorrelationReport report;
        report.kind = TargetKind::categorical;
        report.pattern_count = 10;
        const std::size_t features = 1 + gen() % 40;
        const std::size_t classes = 2 + gen() % 3;
        report.entries.assign(features, std::vector<CorrelationResult>(classes));
        for (auto& row : report.entries) {
            for (auto& e : row) {
                e.r = 2.0 * unit(gen) - 1.0;
                e.p = std::pow(unit(gen), 3.0);
                e.n = 10;
            }
        }

        SelectionThresholds lo;
        lo.r_min = 0.5001 + 0.4 * unit(gen);
        lo.p_max = 0.001 + 0.5 * unit(gen);
        SelectionThresholds hi = lo;
        hi.r_min = lo.r_min + (1.0 - lo.r_min) * unit(gen);
        SelectionThresholds tight = lo;
        tight.p_max = lo.p_max * unit(gen) + 1e-6;

        const auto base = select_or_empty(report, lo);
        if (!select_or_empty(report, hi).is_subset_of(base)) f.add(tag + ": raising r_min grew the set");
        if (!select_or_empty(report, tight).is_subset_of(base)) f.add(tag + ": lowering p_max grew the set");
        if (!(select_or_empty(report, lo) == base)) f.add(tag + ": single selection not deterministic");

        // Ensembles of random member sets.
        const std::size_t members = 1 + gen() % 20;
        std::vector<FeatureSet> sets;
        for (std::size_t i = 0; i < members; ++i) {
            std::vector<std::size_t> keep;
            for (std::size_t j = 0; j < features; ++j) {
                if (unit(gen) < 0.5) keep.push_back(j);
            }
            sets.emplace_back(std::move(keep), features);
        }
        const auto conf = ensemble_confidence(sets, features);
        if (!(conf == ensemble_confidence(sets, features))) f.add(tag + ": confidence not deterministic");
        const double c1 = 0.5 + 0.5 * unit(gen);
        const double c2 = c1 + (1.0 - c1) * unit(gen);
        if (!confident_or_empty(conf, c2).is_subset_of(confident_or_empty(conf, c1))) {
            f.add(tag + ": raising confidence_min grew the set");
        }

        const std::vector<FeatureSet> copies(members, sets.front());
        const auto same = ensemble_confidence(copies, features);
        for (std::size_t j = 0; j < features; ++j) {
            const double expected = sets.front().contains(j) ? 1.0 : 0.0;
            if (same.confidence(j) != expected) f.add(tag + ": copies give confidence " + fmt(same.confidence(j)));
        }
    }

    // Full ensemble determinism on small trained models.
    for (int trial = 0; trial < 3; ++trial) {
        const auto synth = synth_generate({60, 3, 7, 2, 4.0, static_cast<std::uint64_t>(40 + trial)});
        SelectionThresholds t;
        t.p_max = 0.05;
        const auto a = select_features_ensemble(synth.data, UCConfig{}, t, 4, 0.5, 10);
        const auto b = select_features_ensemble(synth.data, UCConfig{}, t, 4, 0.5, 10);
        if (!(a.selected == b.selected) || !(a.confidence == b.confidence) || !(a.members == b.members)) {
            f.add("ensemble run " + std::to_string(trial) + " not deterministic");
        }
    }
    return f.outcome("100 random reports, 3 ensemble reruns");
}

PipelineConfig synthetic_config() {
    PipelineConfig cfg;
    cfg.ensemble_size = 10;
    cfg.eval_repeats = 10;
    cfg.thresholds.r_min = 0.6;
    cfg.thresholds.p_max = 0.05;
    cfg.confidence_min = 1.0;
    return cfg;
}

Outcome synthetic_recovery() {
    Failures f;
    const auto synth = synth_generate({200, 5, 95, 2, 4.0, 7});
    const auto cfg = synthetic_config();
    const auto [tr, te] = split(synth.data, cfg.split_fraction, cfg.base_seed);
    PipelineReport report;
    try {
        report = run_pipeline(tr, te, cfg);
    } catch (const PipelineAborted&) {
        f.add("pipeline found no relevant features");
        return f.outcome("");
    }
    std::size_t informative = 0, noise = 0;
    for (auto j : report.selected.indices()) {
        if (synth.informative.contains(j)) {
            ++informative;
        } else {
            ++noise;
        }
    }
    if (informative < 4) f.add("only " + std::to_string(informative) + "/5 informative features");
    if (noise > 1) f.add(std::to_string(noise) + " noise features");
    const double initial = report.initial_test->mean;
    const double final_acc = report.final_test->mean;
    if (final_acc < initial) f.add("test accuracy fell from " + fmt(initial) + " to " + fmt(final_acc));
    return f.outcome(std::to_string(informative) + "/5 informative, " + std::to_string(noise) +
                     " noise, test accuracy " + fmt(initial) + " -> " + fmt(final_acc));
}

Outcome baseline_ordering() {
    Failures f;
    const auto synth = synth_generate({200, 5, 95, 2, 4.0, 7});
    const auto cfg = synthetic_config();
    const auto [tr, te] = split(synth.data, cfg.split_fraction, cfg.base_seed);
    const std::vector<BaselineSpec> specs{BaselineSpec::parse("proposal"), BaselineSpec::parse("pca:2"),
                                          BaselineSpec::parse("som:2")};
    const auto table = experiment_baseline_comparison(tr, te, cfg, specs);
    const double proposal = table.rows.at(0).test_gain;
    std::string summary;
    for (const auto& row : table.rows) {
        if (!summary.empty()) summary += ", ";
        summary += row.method + " " + fmt(row.test_gain);
    }
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
        if (!(proposal > table.rows[i].test_gain)) f.add("proposal does not beat " + table.rows[i].method);
    }
    return f.outcome("test gains: " + summary);
}

Outcome pca_oracle() {
    Failures f;
    std::mt19937_64 gen(31337);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t rows = 5 + gen() % 20;
        std::vector<double> values(rows * 3);
        for (double& v : values) v = unit(gen);
        const auto d = Dataset::numeric(values, {"a", "b", "c"}, "t", std::vector<double>(rows, 0.0));
        std::vector<double> mean;
        const auto cov = sample_covariance(d, mean);
        std::array<double, 9> a{};
        std::copy(cov.begin(), cov.end(), a.begin());
        const auto ref = oracle::char_poly_eigen3(a);
        const auto fit = pca_fit(d, 3);
        for (std::size_t k = 0; k < fit.k(); ++k) {
            double err = std::fabs(fit.eigenvalues[k] - ref.values[k]);
            for (std::size_t c = 0; c < 3; ++c) err = std::max(err, std::fabs(fit.components[k][c] - ref.vectors[k][c]));
            // Residual |Cv - lambda v|.
            for (std::size_t r = 0; r < 3; ++r) {
                double cv = 0.0;
                for (std::size_t c = 0; c < 3; ++c) cv += a[r * 3 + c] * fit.components[k][c];
                err = std::max(err, std::fabs(cv - fit.eigenvalues[k] * fit.components[k][r]));
            }
            worst = std::max(worst, err);
            if (err > 1e-8) f.add("3x3 case " + std::to_string(trial) + " pair " + std::to_string(k) + ": " + fmt(err));
        }
    }

    for (int trial = 0; trial < 50; ++trial) {
        const auto tag = "dataset " + std::to_string(trial);
        // Every tenth case is wide enough to take the power-iteration path.
        const std::size_t features = trial % 10 == 9 ? kJacobiMaxFeatures + 6 : 2 + gen() % 12;
        const std::size_t rows = features + 5 + gen() % 30;
        std::vector<double> values(rows * features);
        for (double& v : values) v = normal(gen);
        for (std::size_t i = 0; i < rows; ++i) values[i * features] += 3.0 * values[i * features + 1];
        std::vector<std::string> names(features);
        for (std::size_t j = 0; j < features; ++j) names[j] = "f" + std::to_string(j);
        const auto d = Dataset::numeric(values, names, "t", std::vector<double>(rows, 0.0));

        std::vector<double> mean;
        const auto cov = sample_covariance(d, mean);
        double total = 0.0;
        for (std::size_t j = 0; j < features; ++j) total += cov[j * features + j];

        const std::size_t full = std::min(features, rows - 1);
        const std::size_t k = 1 + gen() % full;
        for (const std::size_t kk : {k, full}) {
            const auto m = pca_fit(d, kk);
            for (std::size_t a = 0; a < m.k(); ++a) {
                for (std::size_t b = a; b < m.k(); ++b) {
                    const double dot = std::inner_product(m.components[a].begin(), m.components[a].end(),
                                                          m.components[b].begin(), 0.0);
                    if (a == b && std::fabs(dot - 1.0) > 1e-10) f.add(tag + ": norm " + fmt(dot, 17));
                    if (a != b && std::fabs(dot) > 1e-8) f.add(tag + ": dot " + fmt(dot));
                }
                if (a > 0 && m.eigenvalues[a] > m.eigenvalues[a - 1]) f.add(tag + ": eigenvalues increase");
            }
            const auto projected = pca_transform(m, d);
            std::vector<double> pmean;
            const auto pcov = sample_covariance(projected, pmean);
            double captured = 0.0;
            for (std::size_t j = 0; j < m.k(); ++j) captured += pcov[j * m.k() + j];
            if (captured > total * (1.0 + 1e-12)) f.add(tag + ": projected variance exceeds total");
            if (kk == full && std::fabs(captured - total) > 1e-8 * std::max(1.0, total)) {
                f.add(tag + ": full projection variance " + fmt(captured, 17) + " vs " + fmt(total, 17));
            }
        }
    }
    return f.outcome("worst 3x3 deviation " + fmt(worst) + ", 50 datasets checked");
}

Outcome cli_determinism() {
    Failures f;
    const auto dir = std::filesystem::temp_directory_path() / "uckd_acceptance";
    std::filesystem::create_directories(dir);
    const auto data = (dir / "synth.csv").string();
    std::ostringstream out, err;
    auto run = [&](std::vector<std::string> args) {
        out.str("");
        err.str("");
        args.insert(args.begin(), "uckd");
        return cli::run(args, out, err);
    };
    if (run({"synth", "--samples", "120", "--informative", "4", "--noise", "26", "--seed", "5", "--out", data}) != 0) {
        f.add("synth failed: " + err.str());
        return f.outcome("");
    }
    std::vector<std::string> reports;
    for (int i = 0; i < 2; ++i) {
        const auto path = (dir / ("report" + std::to_string(i) + ".json")).string();
        const int code = run({"pipeline", "--input", data, "--models", "5", "--repeats", "5", "--p-max", "0.05",
                              "--seed", "3", "--out", path});
        if (code != 0) f.add("pipeline exit code " + std::to_string(code) + ": " + err.str());
        std::ifstream in(path, std::ios::binary);
        reports.emplace_back(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }
    if (reports[0].empty()) f.add("empty report");
    if (reports[0] != reports[1]) f.add("reports differ");
    std::filesystem::remove_all(dir);
    return f.outcome(std::to_string(reports[0].size()) + " byte report, two runs identical");
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
    };
    const auto corpus = tree_corpus();
    const std::vector<Criterion> criteria{
        {"1 tree invariants", [&] { return tree_invariants(corpus); }},
        {"2 pattern cover", [&] { return pattern_cover(corpus); }},
        {"3 statistics oracle", statistics_oracle},
        {"4 selection monotonicity and determinism", selection_properties},
        {"5 synthetic recovery", synthetic_recovery},
        {"6 baseline ordering", baseline_ordering},
        {"7 PCA oracle", pca_oracle},
        {"8 pipeline determinism", cli_determinism},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!o.pass) ++failed;
        std::printf("%s  %-42s %6.2fs  %s\n", o.pass ? "PASS" : "FAIL", c.name, secs, o.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
