#include "uckd/patterns.hpp"

#include <charconv>
#include <ostream>
#include <string>

#include "uckd/error.hpp"

namespace uckd {

namespace {

Pattern snapshot(const UCModel& m, const Representation& rep) {
    Pattern p;
    p.values = rep.mean;
    p.denormalized.resize(rep.mean.size());
    for (std::size_t j = 0; j < rep.mean.size(); ++j) p.denormalized[j] = denormalize_value(m.norm(), j, rep.mean[j]);
    p.count = rep.count;
    p.depth = rep.depth;
    p.label_hist = rep.label_hist;
    if (m.target_kind() == TargetKind::categorical) p.pure_class = rep.pure_class();
    p.target_mean = rep.target_mean;
    p.members = rep.members;
    return p;
}

void collect_pure(const UCModel& m, const Cell& cell, std::vector<Pattern>& out) {
    for (const auto& rep : cell.reps) {
        if (rep.pure_class()) {
            out.push_back(snapshot(m, rep));
        } else if (rep.child) {
            collect_pure(m, *rep.child, out);
        }
        // A mixed leaf (duplicates of different classes, or a depth cap)
        // cannot be split further and yields no pattern.
    }
}

void require_trained(const UCModel& m) {
    if (!m.trained()) throw Error(Errc::model_untrained, "cannot mine an untrained model");
}

std::string format_real(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

std::vector<Pattern> mine_unconstrained(const UCModel& m) {
    require_trained(m);
    std::vector<Pattern> out;
    out.reserve(m.seed_cell().reps.size());
    for (const auto& rep : m.seed_cell().reps) out.push_back(snapshot(m, rep));
    return out;
}

std::vector<Pattern> mine_class_constrained(const UCModel& m) {
    require_trained(m);
    if (m.target_kind() != TargetKind::categorical) {
        throw Error(Errc::kind_mismatch, "class-constrained mining needs a categorical target");
    }
    std::vector<Pattern> out;
    collect_pure(m, m.seed_cell(), out);
    return out;
}

std::vector<Pattern> mine_for_target(const UCModel& m) {
    return m.target_kind() == TargetKind::categorical ? mine_class_constrained(m) : mine_unconstrained(m);
}

void write_patterns_csv(std::ostream& out, const UCModel& m, const std::vector<Pattern>& patterns) {
    for (const auto& name : m.feature_names()) out << name << ',';
    out << "count,depth," << m.target_name() << '\n';
    for (const auto& p : patterns) {
        for (double v : p.denormalized) out << format_real(v) << ',';
        out << p.count << ',' << p.depth << ',';
        if (m.target_kind() == TargetKind::numeric) {
            out << format_real(p.target_mean);
        } else if (p.pure_class) {
            out << m.class_labels()[*p.pure_class];
        } else {
            bool first = true;
            for (std::size_t c = 0; c < p.label_hist.size(); ++c) {
                if (p.label_hist[c] == 0) continue;
                out << (first ? "" : "|") << m.class_labels()[c];
                first = false;
            }
        }
        out << '\n';
    }
}

}  // namespace uckd
