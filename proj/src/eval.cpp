#include "offd/eval.hpp"

#include "offd/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <ostream>

namespace offd {

std::uint64_t ConfusionMatrix::total() const
{
    return counts[0][0] + counts[0][1] + counts[1][0] + counts[1][1];
}

ClassMetrics class_metrics(const ConfusionMatrix& cm, Label cls)
{
    const auto c = ConfusionMatrix::index(cls);
    const auto o = 1 - c;
    const double tp = static_cast<double>(cm.counts[c][c]);
    const double fp = static_cast<double>(cm.counts[o][c]);
    const double fn = static_cast<double>(cm.counts[c][o]);
    ClassMetrics m;
    m.precision = tp + fp > 0.0 ? tp / (tp + fp) : 0.0;
    m.recall = tp + fn > 0.0 ? tp / (tp + fn) : 0.0;
    m.f1 = m.precision + m.recall > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
    return m;
}

MetricsReport macro_metrics(const ConfusionMatrix& cm)
{
    const auto total = cm.total();
    if (total == 0) {
        throw DataError("cannot compute metrics of an empty confusion matrix");
    }
    const auto off = class_metrics(cm, Label::offensive);
    const auto nope = class_metrics(cm, Label::not_offensive);
    MetricsReport r;
    r.accuracy = 100.0 * static_cast<double>(cm.counts[0][0] + cm.counts[1][1]) / static_cast<double>(total);
    r.macro_precision = 50.0 * (off.precision + nope.precision);
    r.macro_recall = 50.0 * (off.recall + nope.recall);
    r.macro_f1 = 50.0 * (off.f1 + nope.f1);
    return r;
}

ConfusionMatrix confusion(const std::vector<Label>& gold, const std::vector<Prediction>& predicted)
{
    if (gold.size() != predicted.size()) {
        throw DataError("gold and predicted label counts differ");
    }
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < gold.size(); ++i) {
        cm.add(gold[i], predicted[i].label);
    }
    return cm;
}

MetricsReport evaluate(const Model& model, const LabeledCorpus& corpus, const Featurizer& featurize)
{
    std::vector<Label> gold;
    gold.reserve(corpus.size());
    for (const auto& rec : corpus.records) {
        if (!rec.label) {
            throw DataError("cannot evaluate on unlabeled record '" + rec.id + "'");
        }
        gold.push_back(*rec.label);
    }
    const auto features = featurize(corpus);
    return macro_metrics(confusion(gold, predict(model, features)));
}

std::vector<SweepRow> sweep_control_parameter(const LabeledCorpus& train, const LabeledCorpus& test,
                                              const Featurizer& featurize,
                                              const std::vector<double>& C_values,
                                              std::uint32_t epochs, std::uint64_t seed)
{
    if (C_values.empty()) {
        throw UsageError("control-parameter sweep needs at least one C value");
    }
    const auto train_features = featurize(train);
    const auto y = signs_of(train);
    std::vector<SweepRow> rows;
    rows.reserve(C_values.size());
    for (const double C : C_values) {
        try {
            const Model model = train_linear_svm(train_features, y, C, epochs, seed);
            rows.push_back({C, evaluate(model, test, featurize).accuracy});
        } catch (const Error& e) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%g", C);
            throw Error(e.kind(), std::string("sweep at C=") + buf + ": " + e.what());
        }
    }
    return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out)
{
    out << "C,accuracy\n";
    for (const auto& row : rows) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", row.C);
        out << buf << ',' << format_percent(row.accuracy) << '\n';
    }
}

std::string format_percent(double value)
{
    // Print with spare digits first so that values like 99.995, stored as
    // 99.99499999..., round the way they read.
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9f", std::abs(value));
    const std::string text(buf);
    const auto dot = text.find('.');
    long long hundredths = std::stoll(text.substr(0, dot)) * 100 + (text[dot + 1] - '0') * 10 +
                           (text[dot + 2] - '0');
    if (text[dot + 3] >= '5') {
        ++hundredths;
    }
    std::snprintf(buf, sizeof buf, "%s%lld.%02lld", value < 0 && hundredths > 0 ? "-" : "",
                  hundredths / 100, hundredths % 100);
    return buf;
}

void render_report_tsv(const std::vector<NamedReport>& reports, std::ostream& out)
{
    out << "name\tacc\tprec\trecall\tf1\n";
    for (const auto& [name, r] : reports) {
        out << name << '\t' << format_percent(r.accuracy) << '\t' << format_percent(r.macro_precision)
            << '\t' << format_percent(r.macro_recall) << '\t' << format_percent(r.macro_f1) << '\n';
    }
}

void render_report_text(const std::vector<NamedReport>& reports, std::ostream& out)
{
    std::size_t name_width = 4;
    for (const auto& entry : reports) {
        name_width = std::max(name_width, entry.first.size());
    }
    const auto row = [&](const std::string& name, const std::array<std::string, 4>& cells) {
        out << std::left << std::setw(static_cast<int>(name_width)) << name;
        for (const auto& cell : cells) {
            out << "  " << std::right << std::setw(8) << cell;
        }
        out << '\n';
    };
    row("name", {"Acc(%)", "Prec(%)", "Rec(%)", "F1(%)"});
    for (const auto& [name, r] : reports) {
        row(name, {format_percent(r.accuracy), format_percent(r.macro_precision),
                   format_percent(r.macro_recall), format_percent(r.macro_f1)});
    }
}

}  // namespace offd
