#pragma once

#include "offd/corpus.hpp"
#include "offd/learn.hpp"

#include <array>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace offd {

/// counts[gold][predicted], index 0 = OFF, 1 = NOT.
struct ConfusionMatrix {
    std::array<std::array<std::uint64_t, 2>, 2> counts{};

    static constexpr std::size_t index(Label label) { return label == Label::offensive ? 0 : 1; }

    void add(Label gold, Label predicted) { ++counts[index(gold)][index(predicted)]; }
    std::uint64_t at(Label gold, Label predicted) const { return counts[index(gold)][index(predicted)]; }
    std::uint64_t total() const;
};

/// Percentages in [0, 100], kept at full precision. Rounding happens only
/// when rendering.
struct MetricsReport {
    double accuracy = 0.0;
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;
};

struct ClassMetrics {
    double precision = 0.0;  // fractions in [0, 1]
    double recall = 0.0;
    double f1 = 0.0;
};

/// Precision/recall/F1 of one class; a zero denominator gives 0.
ClassMetrics class_metrics(const ConfusionMatrix& cm, Label cls);

/// Accuracy plus unweighted means of the per-class metrics over OFF and NOT.
/// Throws DataError on an empty matrix.
MetricsReport macro_metrics(const ConfusionMatrix& cm);

ConfusionMatrix confusion(const std::vector<Label>& gold, const std::vector<Prediction>& predicted);

/// Turns a corpus into the feature rows a model consumes.
using Featurizer = std::function<FeatureMatrix(const LabeledCorpus&)>;

/// Featurize, predict, tabulate. The corpus must be fully labeled.
MetricsReport evaluate(const Model& model, const LabeledCorpus& corpus, const Featurizer& featurize);

struct SweepRow {
    double C;
    double accuracy;  // percent
};

/// One linear SVM per control value, each trained on `train` and evaluated on
/// `test`, in the order given.
std::vector<SweepRow> sweep_control_parameter(const LabeledCorpus& train, const LabeledCorpus& test,
                                              const Featurizer& featurize,
                                              const std::vector<double>& C_values,
                                              std::uint32_t epochs, std::uint64_t seed);

/// `C,accuracy` header then one row per entry.
void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);

/// Half-up rounding to two decimals of a percentage, e.g. 99.995 -> "100.00".
std::string format_percent(double value);

using NamedReport = std::pair<std::string, MetricsReport>;

/// `name\tacc\tprec\trecall\tf1` header plus one row per report.
void render_report_tsv(const std::vector<NamedReport>& reports, std::ostream& out);
/// Column-aligned text table with the same content.
void render_report_text(const std::vector<NamedReport>& reports, std::ostream& out);

}  // namespace offd
