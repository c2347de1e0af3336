#pragma once

#include "offd/corpus.hpp"
#include "offd/dmd.hpp"
#include "offd/embed.hpp"
#include "offd/eval.hpp"
#include "offd/learn.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace offd {

enum class FeatureKind { avg, dmd, hodmd, precomputed };

std::string_view feature_kind_name(FeatureKind kind);

/// One experiment, read from a flat `key = value` file. Relative paths are
/// resolved against the config file's directory.
struct ExperimentConfig {
    std::filesystem::path train_tsv;
    std::filesystem::path train_labels;
    std::filesystem::path test_tsv;
    std::filesystem::path test_labels;
    std::filesystem::path vec_file;
    std::filesystem::path precomputed_file;
    std::filesystem::path stopwords;
    std::filesystem::path out_dir;
    bool vec_vocab_filter = true;

    FeatureKind feature = FeatureKind::avg;
    HodmdConfig dmd;  // delay is forced to 1 for FeatureKind::dmd
    Eigen::Index rks_dim = 0;            ///< 0: no RKS map; otherwise even, >= 2
    std::optional<double> rks_sigma;     ///< unset: median heuristic on training features
    std::optional<std::uint64_t> rks_seed_value;  ///< unset: the experiment seed

    ModelKind classifier = ModelKind::svm_linear;
    Hyperparams hyper;  // epochs is taken from svm_epochs / logreg_epochs
    std::uint32_t svm_epochs = 20;
    std::uint32_t logreg_epochs = 500;

    /// Expected SHA-256 per input key (from a manifest); verified at run start.
    std::map<std::string, std::string> expected_sha256;

    bool uses_rks() const { return rks_dim != 0; }
    std::uint64_t rks_seed() const { return rks_seed_value.value_or(hyper.seed); }
    HodmdConfig dmd_config() const;
    /// Throws UsageError for inconsistent settings or missing required paths.
    void validate(bool need_test) const;
};

ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Loaded lookup tables shared by every featurization of one experiment.
struct FeatureResources {
    std::shared_ptr<const StopwordSet> stopwords;
    std::shared_ptr<const WordVectorTable> vectors;
    std::shared_ptr<const PrecomputedTable> precomputed;
};

/// Builds the Featurizer for `kind`. Per-tweet work is spread over
/// `threads` workers (0 = OFFD_THREADS or hardware concurrency).
Featurizer make_featurizer(FeatureKind kind, const HodmdConfig& dmd, FeatureResources resources,
                           unsigned threads = 0);

/// Worker count from OFFD_THREADS, else hardware concurrency (at least 1).
unsigned default_threads();

struct RunOptions {
    std::vector<double> sweep_C;
    std::vector<Eigen::Index> sweep_dim;
    bool write_model_and_report = true;  // false for the `sweep` subcommand
};

/// Files produced by a run, relative to the output directory, with their
/// contents. run_experiment writes them only after every stage succeeded.
struct RunArtifacts {
    std::map<std::string, std::string> files;
    MetricsReport report;
    std::string name;
};

/// Loads corpora, featurizes, optionally lifts through RKS (sigma fitted on
/// training features only), trains, evaluates on the test corpus, and
/// writes report.tsv, report.txt, model.offd and manifest.txt (plus
/// sweep_C.csv / sweep_dim.tsv when requested) to cfg.out_dir.
RunArtifacts run_experiment(const ExperimentConfig& cfg, const RunOptions& options = {});

/// Same as run_experiment without touching the filesystem for outputs.
RunArtifacts compute_experiment(const ExperimentConfig& cfg, const RunOptions& options = {});

/// Writes `id v1 ... v_dim` lines (train records, then test records when a
/// test file is configured) in the precomputed-vector format.
void export_features(const ExperimentConfig& cfg, std::ostream& out);

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

/// Human-readable summary of a saved model.
void describe_model(const Model& model, std::ostream& out);

}  // namespace offd
