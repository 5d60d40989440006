#include "uckd/serialize.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include "uckd/error.hpp"

namespace uckd {

namespace {

std::string format_real(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

template <typename T>
T field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) {
        throw Error(Errc::bad_document, std::string("missing field '") + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::bad_document, std::string("field '") + key + "': " + e.what());
    }
}

void check_schema(const Json& j, const char* type) {
    if (field<int>(j, "schema_version") != kSchemaVersion) {
        throw Error(Errc::bad_document, "unsupported schema_version");
    }
    if (field<std::string>(j, "type") != type) {
        throw Error(Errc::bad_document, std::string("expected a '") + type + "' document");
    }
}

Json header(const char* type) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["type"] = type;
    return j;
}

Json label_hist_json(const std::vector<std::size_t>& hist, const std::vector<std::string>& labels, TargetKind kind) {
    Json out = Json::object();
    if (kind == TargetKind::numeric) return out;
    for (std::size_t c = 0; c < hist.size(); ++c) {
        if (hist[c] > 0) out[labels[c]] = hist[c];
    }
    return out;
}

Json summary_json(const AccuracySummary& s) {
    return Json{{"mean", s.mean}, {"stddev", s.stddev}, {"values", s.values}};
}

Json optional_summary(const std::optional<AccuracySummary>& s) {
    return s ? summary_json(*s) : Json(nullptr);
}

Json scores_json(const std::vector<ModelScore>& scores) {
    Json out = Json::array();
    for (const auto& s : scores) {
        out.push_back({{"seed", s.seed}, {"train_accuracy", s.train_accuracy}, {"test_accuracy", s.test_accuracy}});
    }
    return out;
}

// Model tree ---------------------------------------------------------------

Json cell_json(const Cell& cell, bool audit) {
    Json reps = Json::array();
    for (const auto& rep : cell.reps) {
        Json r;
        r["mean"] = rep.mean;
        r["count"] = rep.count;
        r["label_hist"] = rep.label_hist;
        r["target_mean"] = rep.target_mean;
        r["depth"] = rep.depth;
        if (audit) r["members"] = rep.members;
        r["child"] = rep.child ? cell_json(*rep.child, audit) : Json(nullptr);
        reps.push_back(std::move(r));
    }
    return Json{{"depth", cell.depth}, {"reps", std::move(reps)}};
}

Cell cell_from_json(const Json& j) {
    Cell cell;
    cell.depth = field<std::size_t>(j, "depth");
    for (const auto& r : field<Json>(j, "reps")) {
        Representation rep;
        rep.mean = field<std::vector<double>>(r, "mean");
        rep.count = field<std::size_t>(r, "count");
        rep.label_hist = field<std::vector<std::size_t>>(r, "label_hist");
        rep.target_mean = field<double>(r, "target_mean");
        rep.depth = field<std::size_t>(r, "depth");
        if (r.contains("members")) rep.members = field<std::vector<std::size_t>>(r, "members");
        if (r.contains("child") && !r.at("child").is_null()) {
            rep.child = std::make_unique<Cell>(cell_from_json(r.at("child")));
        }
        cell.reps.push_back(std::move(rep));
    }
    return cell;
}

}  // namespace

// Dataset-level ------------------------------------------------------------

Json to_json(const NormParams& p) {
    Json j = header("norm_params");
    j["min"] = p.min;
    j["max"] = p.max;
    return j;
}

NormParams norm_params_from_json(const Json& j) {
    NormParams p{field<std::vector<double>>(j, "min"), field<std::vector<double>>(j, "max")};
    if (p.min.size() != p.max.size()) throw Error(Errc::bad_document, "min/max length mismatch");
    for (std::size_t i = 0; i < p.min.size(); ++i) {
        if (p.min[i] > p.max[i]) throw Error(Errc::bad_document, "min exceeds max");
    }
    return p;
}

Json to_json(const FeatureSet& s, const std::vector<std::string>& names) {
    Json j = header("feature_set");
    j["origin_feature_count"] = s.origin_feature_count();
    j["indices"] = s.indices();
    if (!names.empty()) {
        Json n = Json::array();
        for (auto i : s.indices()) n.push_back(names.at(i));
        j["names"] = std::move(n);
    }
    return j;
}

FeatureSet feature_set_from_json(const Json& j, std::size_t feature_count) {
    if (j.is_array()) {
        try {
            return FeatureSet(j.get<std::vector<std::size_t>>(), feature_count);
        } catch (const nlohmann::json::exception& e) {
            throw Error(Errc::bad_document, e.what());
        }
    }
    if (j.is_object() && j.contains("selected")) return feature_set_from_json(j.at("selected"), feature_count);
    const auto origin = j.contains("origin_feature_count") ? field<std::size_t>(j, "origin_feature_count")
                                                           : feature_count;
    if (origin != feature_count) {
        throw Error(Errc::dataset_mismatch, "feature set was built for " + std::to_string(origin) + " features");
    }
    return FeatureSet(field<std::vector<std::size_t>>(j, "indices"), feature_count);
}

// Configuration ------------------------------------------------------------

Json to_json(const UCConfig& c) {
    Json j;
    j["metric"] = to_string(c.metric);
    j["theta0"] = c.theta0;
    j["gamma"] = c.gamma;
    j["epsilon_identity"] = c.epsilon_identity;
    j["max_depth"] = c.max_depth ? Json(*c.max_depth) : Json(nullptr);
    j["audit"] = c.audit;
    return j;
}

UCConfig uc_config_from_json(const Json& j) {
    UCConfig c;
    c.metric = parse_metric(field<std::string>(j, "metric"));
    c.theta0 = field<double>(j, "theta0");
    c.gamma = field<double>(j, "gamma");
    c.epsilon_identity = field<double>(j, "epsilon_identity");
    if (j.contains("max_depth") && !j.at("max_depth").is_null()) c.max_depth = field<std::size_t>(j, "max_depth");
    if (j.contains("audit")) c.audit = field<bool>(j, "audit");
    c.validate();
    return c;
}

Json to_json(const SelectionThresholds& t) {
    return Json{{"r_min", t.r_min}, {"p_max", t.p_max}, {"r_floor", SelectionThresholds::floor}};
}

Json to_json(const PipelineConfig& c) {
    Json j;
    j["uc"] = to_json(c.uc);
    j["thresholds"] = to_json(c.thresholds);
    j["ensemble_size"] = c.ensemble_size;
    j["confidence_min"] = c.confidence_min;
    j["base_seed"] = c.base_seed;
    j["eval_repeats"] = c.eval_repeats;
    j["split_fraction"] = c.split_fraction;
    return j;
}

// Model --------------------------------------------------------------------

Json to_json(const UCModel& m) {
    Json j = header("uc_model");
    j["config"] = to_json(m.config());
    j["feature_names"] = m.feature_names();
    j["target_name"] = m.target_name();
    j["target_kind"] = to_string(m.target_kind());
    j["class_labels"] = m.class_labels();
    j["norm"] = Json{{"min", m.norm().min}, {"max", m.norm().max}};
    j["total_inputs"] = m.total_inputs();
    j["seed_cell"] = cell_json(m.seed_cell(), m.config().audit);
    return j;
}

UCModel model_from_json(const Json& j) {
    check_schema(j, "uc_model");
    return UCModel::restore(uc_config_from_json(field<Json>(j, "config")),
                            norm_params_from_json(field<Json>(j, "norm")),
                            field<std::vector<std::string>>(j, "feature_names"), field<std::string>(j, "target_name"),
                            parse_target_kind(field<std::string>(j, "target_kind")),
                            field<std::vector<std::string>>(j, "class_labels"), cell_from_json(field<Json>(j, "seed_cell")),
                            field<std::size_t>(j, "total_inputs"));
}

// Patterns -----------------------------------------------------------------

Json patterns_to_json(const std::vector<Pattern>& patterns, const std::vector<std::string>& feature_names,
                      const std::vector<std::string>& class_labels, TargetKind kind) {
    Json j = header("patterns");
    j["feature_names"] = feature_names;
    Json list = Json::array();
    for (const auto& p : patterns) {
        Json e;
        e["values"] = p.values;
        e["denormalized"] = p.denormalized;
        e["count"] = p.count;
        e["depth"] = p.depth;
        e["label_hist"] = label_hist_json(p.label_hist, class_labels, kind);
        e["pure_class"] = p.pure_class ? Json(class_labels[*p.pure_class]) : Json(nullptr);
        if (kind == TargetKind::numeric) e["target_mean"] = p.target_mean;
        list.push_back(std::move(e));
    }
    j["patterns"] = std::move(list);
    return j;
}

Json patterns_to_json(const UCModel& m, const std::vector<Pattern>& patterns) {
    return patterns_to_json(patterns, m.feature_names(), m.class_labels(), m.target_kind());
}

// Correlations and confidence ---------------------------------------------

Json to_json(const FeatureCorrelationReport& r, const std::vector<std::string>& feature_names,
             const std::vector<std::string>& class_labels) {
    Json j = header("correlation_report");
    j["target_kind"] = to_string(r.kind);
    j["pattern_count"] = r.pattern_count;
    Json features = Json::array();
    for (std::size_t f = 0; f < r.entries.size(); ++f) {
        Json entries = Json::array();
        for (std::size_t c = 0; c < r.entries[f].size(); ++c) {
            const auto& e = r.entries[f][c];
            Json item;
            if (r.kind == TargetKind::categorical) item["class"] = class_labels.at(c);
            item["r"] = e.r;
            item["p"] = e.p;
            item["n"] = e.n;
            item["degenerate"] = e.degenerate;
            entries.push_back(std::move(item));
        }
        features.push_back({{"feature", feature_names.at(f)}, {"entries", std::move(entries)}});
    }
    j["features"] = std::move(features);
    return j;
}

void write_correlation_csv(std::ostream& out, const FeatureCorrelationReport& r,
                           const std::vector<std::string>& feature_names,
                           const std::vector<std::string>& class_labels) {
    out << "feature,class,r,p,degenerate\n";
    for (std::size_t f = 0; f < r.entries.size(); ++f) {
        for (std::size_t c = 0; c < r.entries[f].size(); ++c) {
            const auto& e = r.entries[f][c];
            out << feature_names.at(f) << ',' << (r.kind == TargetKind::categorical ? class_labels.at(c) : "")
                << ',' << format_real(e.r) << ',' << format_real(e.p) << ',' << (e.degenerate ? "true" : "false")
                << '\n';
        }
    }
}

Json to_json(const ConfidenceMap& c, const FeatureSet& selected, const std::vector<std::string>& feature_names) {
    Json j = header("confidence_map");
    j["ensemble_size"] = c.ensemble_size;
    Json features = Json::array();
    for (std::size_t f = 0; f < c.feature_count(); ++f) {
        features.push_back({{"feature", feature_names.at(f)},
                            {"hits", c.hits[f]},
                            {"confidence", c.confidence(f)},
                            {"selected", selected.contains(f)}});
    }
    j["features"] = std::move(features);
    j["selected"] = to_json(selected, feature_names);
    return j;
}

void write_confidence_csv(std::ostream& out, const ConfidenceMap& c, const FeatureSet& selected,
                          const std::vector<std::string>& feature_names) {
    out << "feature,confidence,selected\n";
    for (std::size_t f = 0; f < c.feature_count(); ++f) {
        out << feature_names.at(f) << ',' << format_real(c.confidence(f)) << ','
            << (selected.contains(f) ? "true" : "false") << '\n';
    }
}

// Reports ------------------------------------------------------------------

Json to_json(const PipelineReport& r) {
    Json j = header("pipeline_report");
    j["status"] = r.status;
    j["target_kind"] = to_string(r.target_kind);
    j["class_labels"] = r.class_labels;
    j["config"] = to_json(r.config);
    j["final_model_order"] = "reduced train set, original (unshuffled) order";
    j["initial_dims"] = r.initial_dims;
    j["final_dims"] = r.final_dims;
    j["reduction_fraction"] = r.reduction_fraction;

    Json members = Json::array();
    for (std::size_t i = 0; i < r.members.size(); ++i) {
        const auto& m = r.members[i];
        Json e;
        e["seed"] = m.seed;
        e["status"] = m.status;
        e["pattern_count"] = m.pattern_count;
        e["selected"] = m.selected.indices();
        if (i < r.ensemble_scores.size()) {
            e["train_accuracy"] = r.ensemble_scores[i].train_accuracy;
            e["test_accuracy"] = r.ensemble_scores[i].test_accuracy;
        }
        members.push_back(std::move(e));
    }
    j["ensemble"] = std::move(members);
    j["confidence"] = r.confidence.ensemble_size > 0 ? to_json(r.confidence, r.selected, r.feature_names)
                                                     : Json(nullptr);
    j["selected"] = to_json(r.selected, r.feature_names);
    j["initial_train_accuracy"] = optional_summary(r.initial_train);
    j["initial_test_accuracy"] = optional_summary(r.initial_test);
    j["final_train_accuracy"] = optional_summary(r.final_train);
    j["final_test_accuracy"] = optional_summary(r.final_test);
    j["train_accuracy_gain"] = r.train_gain;
    j["test_accuracy_gain"] = r.test_gain;
    j["eval_runs"] = scores_json(r.eval_scores);

    j["final_feature_names"] = r.final_feature_names;
    j["final_patterns"] =
        patterns_to_json(r.final_patterns, r.final_feature_names, r.class_labels, r.target_kind)["patterns"];
    return j;
}

Json to_json(const PatternValidityReport& r) {
    Json j = header("pattern_validity_report");
    j["config"] = to_json(r.config);
    j["initial_dims"] = r.initial_dims;
    j["mean_final_dims"] = r.mean_final_dims;
    j["mean_reduction_fraction"] = r.mean_reduction_fraction;
    j["initial_train_accuracy"] = summary_json(r.initial_train);
    j["initial_test_accuracy"] = summary_json(r.initial_test);
    j["final_train_accuracy"] = summary_json(r.final_train);
    j["final_test_accuracy"] = summary_json(r.final_test);
    j["train_accuracy_gain"] = r.train_gain;
    j["test_accuracy_gain"] = r.test_gain;
    Json its = Json::array();
    for (const auto& it : r.iterations) {
        its.push_back({{"seed", it.seed},
                       {"status", it.status},
                       {"selected_dims", it.selected_dims},
                       {"initial_train", it.initial_train},
                       {"initial_test", it.initial_test},
                       {"final_train", it.final_train},
                       {"final_test", it.final_test}});
    }
    j["iterations"] = std::move(its);
    return j;
}

Json to_json(const ComparisonTable& t) {
    Json j = header("baseline_comparison");
    j["config"] = to_json(t.config);
    j["som_epochs"] = t.options.som_epochs;
    j["som_coords_grid_side"] = t.options.som_coords_grid_side;
    j["initial_dims"] = t.initial_dims;
    Json rows = Json::array();
    for (const auto& r : t.rows) {
        rows.push_back({{"method", r.method},
                        {"initial_train_accuracy", r.initial_train},
                        {"initial_test_accuracy", r.initial_test},
                        {"final_train_accuracy", r.final_train},
                        {"final_test_accuracy", r.final_test},
                        {"train_accuracy_gain", r.train_gain},
                        {"test_accuracy_gain", r.test_gain},
                        {"dimensionality_reduction", r.reduction_fraction},
                        {"final_dims", r.final_dims},
                        {"final_train_stddev", r.final_train_stddev},
                        {"final_test_stddev", r.final_test_stddev},
                        {"rank_deficient", r.rank_deficient}});
    }
    j["rows"] = std::move(rows);
    return j;
}

void write_comparison_csv(std::ostream& out, const ComparisonTable& t) {
    out << "method,initial_train_accuracy,initial_test_accuracy,final_train_accuracy,final_test_accuracy,"
           "train_accuracy_gain,test_accuracy_gain,dimensionality_reduction\n";
    for (const auto& r : t.rows) {
        out << r.method << ',' << format_real(r.initial_train) << ',' << format_real(r.initial_test) << ','
            << format_real(r.final_train) << ',' << format_real(r.final_test) << ',' << format_real(r.train_gain)
            << ',' << format_real(r.test_gain) << ',' << format_real(r.reduction_fraction) << '\n';
    }
}

// Files --------------------------------------------------------------------

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::missing_file, path.string());
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::bad_document, path.string() + ": " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::io_failure, "cannot write " + path.string());
    out << text;
    if (!out) throw Error(Errc::io_failure, "write failed for " + path.string());
}

}  // namespace uckd
