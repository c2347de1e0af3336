#include "offd/pipeline.hpp"

#include "offd/error.hpp"
#include "offd/rks.hpp"
#include "offd/rng.hpp"
#include "text_fields.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace offd {

namespace fs = std::filesystem;

std::string_view feature_kind_name(FeatureKind kind)
{
    switch (kind) {
    case FeatureKind::avg: return "avg";
    case FeatureKind::dmd: return "dmd";
    case FeatureKind::hodmd: return "hodmd";
    case FeatureKind::precomputed: return "precomputed";
    }
    return "unknown";
}

HodmdConfig ExperimentConfig::dmd_config() const
{
    HodmdConfig c = dmd;
    if (feature == FeatureKind::dmd) {
        c.delay = 1;
    }
    return c;
}

void ExperimentConfig::validate(bool need_test) const
{
    if (train_tsv.empty()) {
        throw UsageError("config: train_tsv is required");
    }
    if (need_test && test_tsv.empty()) {
        throw UsageError("config: test_tsv is required");
    }
    if (feature == FeatureKind::precomputed) {
        if (precomputed_file.empty()) {
            throw UsageError("config: feature = precomputed needs precomputed_file");
        }
    } else {
        if (vec_file.empty()) {
            throw UsageError("config: feature = " + std::string(feature_kind_name(feature)) +
                             " needs vec_file");
        }
        if (stopwords.empty()) {
            throw UsageError("config: feature = " + std::string(feature_kind_name(feature)) +
                             " needs stopwords");
        }
    }
    if (feature == FeatureKind::hodmd || feature == FeatureKind::dmd) {
        dmd_config().validate();
    }
    if (uses_rks() && (rks_dim < 2 || rks_dim % 2 != 0)) {
        throw UsageError("output dimension must be even (cos/sin pairs), got rks_dim = " +
                         std::to_string(rks_dim));
    }
    if (rks_sigma && !(*rks_sigma > 0.0)) {
        throw UsageError("config: rks_sigma must be > 0 or 'median'");
    }
}

namespace {

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

double to_double(const std::string& key, const std::string& value)
{
    try {
        return detail::parse_double(value, 0);
    } catch (const DataError&) {
        throw UsageError("config: " + key + " expects a number, got '" + value + "'");
    }
}

long long to_int(const std::string& key, const std::string& value)
{
    try {
        return detail::parse_int(value, 0);
    } catch (const DataError&) {
        throw UsageError("config: " + key + " expects an integer, got '" + value + "'");
    }
}

std::uint32_t to_u32(const std::string& key, const std::string& value)
{
    const auto v = to_int(key, value);
    if (v < 0 || v > 0xFFFFFFFFLL) {
        throw UsageError("config: " + key + " out of range");
    }
    return static_cast<std::uint32_t>(v);
}

std::uint64_t to_u64(const std::string& key, const std::string& value)
{
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw UsageError("config: " + key + " expects a non-negative integer, got '" + value + "'");
    }
    return v;
}

bool to_bool(const std::string& key, const std::string& value)
{
    if (value == "true" || value == "1" || value == "yes") {
        return true;
    }
    if (value == "false" || value == "0" || value == "no") {
        return false;
    }
    throw UsageError("config: " + key + " expects true/false, got '" + value + "'");
}

const std::vector<std::string>& path_keys()
{
    static const std::vector<std::string> keys{"train_tsv",        "train_labels", "test_tsv",
                                               "test_labels",      "vec_file",     "precomputed_file",
                                               "stopwords"};
    return keys;
}

fs::path* path_field(ExperimentConfig& cfg, const std::string& key)
{
    if (key == "train_tsv") return &cfg.train_tsv;
    if (key == "train_labels") return &cfg.train_labels;
    if (key == "test_tsv") return &cfg.test_tsv;
    if (key == "test_labels") return &cfg.test_labels;
    if (key == "vec_file") return &cfg.vec_file;
    if (key == "precomputed_file") return &cfg.precomputed_file;
    if (key == "stopwords") return &cfg.stopwords;
    if (key == "out_dir") return &cfg.out_dir;
    return nullptr;
}

const fs::path& path_field(const ExperimentConfig& cfg, const std::string& key)
{
    return *path_field(const_cast<ExperimentConfig&>(cfg), key);
}

}  // namespace

ExperimentConfig parse_config(std::istream& in, const fs::path& base_dir)
{
    ExperimentConfig cfg;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        const auto body = trim(std::string_view(line).substr(0, hash));
        if (body.empty()) {
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw UsageError("config line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const auto key = trim(std::string_view(body).substr(0, eq));
        const auto value = trim(std::string_view(body).substr(eq + 1));

        if (auto* p = path_field(cfg, key)) {
            *p = value.empty() ? fs::path{} : (base_dir / value).lexically_normal();
        } else if (key == "vec_vocab_filter") {
            cfg.vec_vocab_filter = to_bool(key, value);
        } else if (key == "feature") {
            if (value == "avg") cfg.feature = FeatureKind::avg;
            else if (value == "dmd") cfg.feature = FeatureKind::dmd;
            else if (value == "hodmd") cfg.feature = FeatureKind::hodmd;
            else if (value == "precomputed") cfg.feature = FeatureKind::precomputed;
            else throw UsageError("config: unknown feature '" + value + "'");
        } else if (key == "hodmd_order") {
            cfg.dmd.delay = static_cast<int>(to_int(key, value));
        } else if (key == "dmd_max_rank") {
            cfg.dmd.max_rank = static_cast<int>(to_int(key, value));
        } else if (key == "dmd_sv_tol") {
            cfg.dmd.sv_rel_tol = to_double(key, value);
        } else if (key == "rks_dim") {
            cfg.rks_dim = static_cast<Eigen::Index>(to_int(key, value));
        } else if (key == "rks_sigma") {
            if (value == "median") {
                cfg.rks_sigma.reset();
            } else {
                cfg.rks_sigma = to_double(key, value);
            }
        } else if (key == "rks_seed") {
            cfg.rks_seed_value = to_u64(key, value);
        } else if (key == "classifier") {
            if (value == "rlsc") cfg.classifier = ModelKind::rlsc;
            else if (value == "svm") cfg.classifier = ModelKind::svm_linear;
            else if (value == "logreg") cfg.classifier = ModelKind::logreg;
            else if (value == "gnb") cfg.classifier = ModelKind::gnb;
            else throw UsageError("config: unknown classifier '" + value + "'");
        } else if (key == "rlsc_lambda") {
            cfg.hyper.lambda = to_double(key, value);
        } else if (key == "svm_C") {
            cfg.hyper.C = to_double(key, value);
        } else if (key == "svm_epochs") {
            cfg.svm_epochs = to_u32(key, value);
        } else if (key == "logreg_lr") {
            cfg.hyper.lr = to_double(key, value);
        } else if (key == "logreg_epochs") {
            cfg.logreg_epochs = to_u32(key, value);
        } else if (key == "logreg_l2") {
            cfg.hyper.l2 = to_double(key, value);
        } else if (key == "gnb_var_floor") {
            cfg.hyper.var_floor = to_double(key, value);
        } else if (key == "seed") {
            cfg.hyper.seed = to_u64(key, value);
        } else if (key.starts_with("sha256.")) {
            const auto target = key.substr(7);
            if (std::find(path_keys().begin(), path_keys().end(), target) == path_keys().end()) {
                throw UsageError("config: checksum for unknown input '" + target + "'");
            }
            cfg.expected_sha256[target] = value;
        } else if (key.starts_with("resolved.")) {
            // informational manifest entries
        } else {
            throw UsageError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
    }

    if (cfg.feature == FeatureKind::hodmd && cfg.dmd.delay == 1) {
        cfg.feature = FeatureKind::dmd;  // order 1 is plain DMD
    }
    return cfg;
}

ExperimentConfig load_config(const fs::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open config file " + path.string());
    }
    return parse_config(in, path.parent_path());
}

unsigned default_threads()
{
    if (const char* env = std::getenv("OFFD_THREADS")) {
        const auto v = std::strtol(env, nullptr, 10);
        if (v > 0) {
            return static_cast<unsigned>(v);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

// Runs body(i) for i in [0, n) on up to `threads` workers. Each index is
// handled by exactly one worker, so results written per index are
// independent of the thread count.
template <typename Body>
void parallel_for(std::size_t n, unsigned threads, Body&& body)
{
    const std::size_t workers = std::min<std::size_t>(threads, std::max<std::size_t>(1, n / 32));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            body(i);
        }
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += workers) {
                    body(i);
                }
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

}  // namespace

Featurizer make_featurizer(FeatureKind kind, const HodmdConfig& dmd, FeatureResources resources,
                           unsigned threads)
{
    if (threads == 0) {
        threads = default_threads();
    }
    if (kind == FeatureKind::precomputed) {
        if (!resources.precomputed) {
            throw UsageError("precomputed features need a precomputed vector table");
        }
    } else if (!resources.vectors || !resources.stopwords) {
        throw UsageError("token features need a word-vector table and a stopword list");
    }
    HodmdConfig dmd_cfg = dmd;
    if (kind == FeatureKind::dmd) {
        dmd_cfg.delay = 1;
    }
    return [kind, dmd_cfg, resources, threads](const LabeledCorpus& corpus) {
        FeatureMatrix out;
        const auto n = corpus.size();
        out.ids.reserve(n);
        for (const auto& rec : corpus.records) {
            out.ids.push_back(rec.id);
        }
        if (kind == FeatureKind::precomputed) {
            const auto& table = *resources.precomputed;
            out.values.resize(static_cast<Eigen::Index>(n), table.dim().value_or(0));
            for (std::size_t i = 0; i < n; ++i) {
                out.values.row(static_cast<Eigen::Index>(i)) = table.at(corpus.records[i].id).transpose();
            }
            return out;
        }
        const auto& table = *resources.vectors;
        const auto& stop = *resources.stopwords;
        out.values.resize(static_cast<Eigen::Index>(n), table.dim());
        parallel_for(n, threads, [&](std::size_t i) {
            const auto tokens = tokenize_clean(corpus.records[i].text, stop);
            const auto row = static_cast<Eigen::Index>(i);
            if (kind == FeatureKind::avg) {
                out.values.row(row) = average_embedding(tokens, table).transpose();
            } else {
                out.values.row(row) = sentence_feature(token_matrix(tokens, table), dmd_cfg).transpose();
            }
        });
        return out;
    };
}

std::string sha256_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open " + path.string());
    }
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
        throw DataError("SHA-256 initialisation failed");
    }
    std::vector<char> buf(1 << 16);
    while (in) {
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        if (in.gcount() > 0) {
            EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
        }
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), digest, &len);
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) {
        char b[3];
        std::snprintf(b, sizeof b, "%02x", digest[i]);
        hex += b;
    }
    return hex;
}

namespace {

std::string sha256_bytes(const std::string& data)
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) {
        char b[3];
        std::snprintf(b, sizeof b, "%02x", digest[i]);
        hex += b;
    }
    return hex;
}

std::string num(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ifstream open_input(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open " + path.string());
    }
    return in;
}

LabeledCorpus load_corpus(const fs::path& tsv, const fs::path& labels, Split split)
{
    auto in = open_input(tsv);
    if (labels.empty()) {
        return load_olid_tsv(in, nullptr, split);
    }
    auto label_in = open_input(labels);
    return load_olid_tsv(in, &label_in, split);
}

std::vector<std::string> used_input_keys(const ExperimentConfig& cfg, bool need_test)
{
    std::vector<std::string> keys{"train_tsv"};
    if (!cfg.train_labels.empty()) keys.push_back("train_labels");
    if (need_test || !cfg.test_tsv.empty()) {
        if (!cfg.test_tsv.empty()) keys.push_back("test_tsv");
        if (!cfg.test_labels.empty()) keys.push_back("test_labels");
    }
    if (cfg.feature == FeatureKind::precomputed) {
        keys.push_back("precomputed_file");
    } else {
        keys.push_back("vec_file");
        keys.push_back("stopwords");
    }
    return keys;
}

/// Checks existence and any expected checksums; returns key -> sha256.
std::map<std::string, std::string> check_inputs(const ExperimentConfig& cfg, bool need_test)
{
    std::map<std::string, std::string> sums;
    for (const auto& key : used_input_keys(cfg, need_test)) {
        const auto& path = path_field(cfg, key);
        if (!fs::is_regular_file(path)) {
            throw DataError("input file for " + key + " does not exist: " + path.string());
        }
        sums[key] = sha256_file(path);
        if (const auto it = cfg.expected_sha256.find(key);
            it != cfg.expected_sha256.end() && it->second != sums[key]) {
            throw DataError("checksum mismatch for " + key + " (" + path.string() + ")");
        }
    }
    return sums;
}

FeatureResources load_resources(const ExperimentConfig& cfg)
{
    FeatureResources res;
    if (cfg.feature == FeatureKind::precomputed) {
        auto in = open_input(cfg.precomputed_file);
        res.precomputed = std::make_shared<const PrecomputedTable>(load_precomputed(in));
        return res;
    }
    {
        auto in = open_input(cfg.stopwords);
        res.stopwords = std::make_shared<const StopwordSet>(load_stopwords(in));
    }
    std::unordered_set<std::string> vocab;
    if (cfg.vec_vocab_filter) {
        // Only tweet text is read here; labels stay untouched.
        for (const auto* path : {&cfg.train_tsv, &cfg.test_tsv}) {
            if (path->empty()) {
                continue;
            }
            auto in = open_input(*path);
            for (const auto& rec : load_olid_tsv(in).records) {
                for (auto& tok : tokenize_clean(rec.text, *res.stopwords)) {
                    vocab.insert(std::move(tok));
                }
            }
        }
    }
    auto in = open_input(cfg.vec_file);
    res.vectors = std::make_shared<const WordVectorTable>(
        load_vec_table(in, cfg.vec_vocab_filter ? &vocab : nullptr));
    return res;
}

Model train_classifier(const ExperimentConfig& cfg, const FeatureMatrix& features, const SignVector& y)
{
    switch (cfg.classifier) {
    case ModelKind::rlsc:
        return train_rlsc(features, y, cfg.hyper.lambda);
    case ModelKind::svm_linear:
        return train_linear_svm(features, y, cfg.hyper.C, cfg.svm_epochs, cfg.hyper.seed);
    case ModelKind::logreg:
        return train_logreg(features, y, cfg.hyper.lr, cfg.logreg_epochs, cfg.hyper.l2, cfg.hyper.seed);
    case ModelKind::gnb:
        return train_gnb(features, y, cfg.hyper.var_floor);
    }
    throw UsageError("unknown classifier");
}

void attach_rks(Model& model, std::optional<RksMap> rks)
{
    std::visit([&](auto& m) { m.rks = std::move(rks); }, model);
}

std::string feature_label(const ExperimentConfig& cfg)
{
    if (cfg.feature == FeatureKind::hodmd) {
        return "hodmd(d=" + std::to_string(cfg.dmd.delay) + ")";
    }
    return std::string(feature_kind_name(cfg.feature));
}

std::string run_name(const ExperimentConfig& cfg, std::optional<Eigen::Index> dim)
{
    std::string name = feature_label(cfg);
    if (dim) {
        name += "+rks(D=" + std::to_string(*dim) + ")";
    }
    return name + "+" + std::string(model_kind_name(cfg.classifier));
}

Featurizer lifted(Featurizer base, std::shared_ptr<const RksMap> map)
{
    return [base = std::move(base), map = std::move(map)](const LabeledCorpus& corpus) {
        FeatureMatrix f = base(corpus);
        f.values = map->transform_rows(f.values);
        return f;
    };
}

std::string render_manifest(const ExperimentConfig& cfg, const std::map<std::string, std::string>& sums,
                            std::optional<double> sigma, const std::map<std::string, std::string>& resolved)
{
    std::ostringstream m;
    m << "# offd experiment manifest; usable as a config file\n";
    for (const auto& key : path_keys()) {
        const auto& p = path_field(cfg, key);
        if (!p.empty()) {
            m << key << " = " << fs::absolute(p).lexically_normal().string() << '\n';
        }
    }
    m << "vec_vocab_filter = " << (cfg.vec_vocab_filter ? "true" : "false") << '\n';
    m << "feature = " << feature_kind_name(cfg.feature) << '\n';
    if (cfg.feature == FeatureKind::dmd || cfg.feature == FeatureKind::hodmd) {
        const auto d = cfg.dmd_config();
        m << "hodmd_order = " << d.delay << '\n';
        m << "dmd_max_rank = " << d.max_rank << '\n';
        m << "dmd_sv_tol = " << num(d.sv_rel_tol) << '\n';
    }
    m << "rks_dim = " << cfg.rks_dim << '\n';
    m << "rks_sigma = " << (cfg.rks_sigma ? num(*cfg.rks_sigma) : std::string("median")) << '\n';
    m << "rks_seed = " << cfg.rks_seed() << '\n';
    m << "classifier = " << model_kind_name(cfg.classifier) << '\n';
    m << "rlsc_lambda = " << num(cfg.hyper.lambda) << '\n';
    m << "svm_C = " << num(cfg.hyper.C) << '\n';
    m << "svm_epochs = " << cfg.svm_epochs << '\n';
    m << "logreg_lr = " << num(cfg.hyper.lr) << '\n';
    m << "logreg_epochs = " << cfg.logreg_epochs << '\n';
    m << "logreg_l2 = " << num(cfg.hyper.l2) << '\n';
    m << "gnb_var_floor = " << num(cfg.hyper.var_floor) << '\n';
    m << "seed = " << cfg.hyper.seed << '\n';
    for (const auto& [key, sum] : sums) {
        m << "sha256." << key << " = " << sum << '\n';
    }
    if (sigma) {
        m << "resolved.rks_sigma = " << num(*sigma) << '\n';
        m << "resolved.rks_algorithm = " << Rng::algorithm << '\n';
    }
    for (const auto& [key, value] : resolved) {
        m << "resolved." << key << " = " << value << '\n';
    }
    return m.str();
}

}  // namespace

RunArtifacts compute_experiment(const ExperimentConfig& cfg, const RunOptions& options)
{
    const bool need_test = true;
    cfg.validate(need_test);
    for (const auto d : options.sweep_dim) {
        if (d < 2 || d % 2 != 0) {
            throw UsageError("output dimension must be even (cos/sin pairs), got " + std::to_string(d));
        }
    }
    const auto sums = check_inputs(cfg, need_test);
    const auto resources = load_resources(cfg);
    const auto featurize = make_featurizer(cfg.feature, cfg.dmd_config(), resources);

    const auto train = load_corpus(cfg.train_tsv, cfg.train_labels, Split::train);
    if (train.size() == 0) {
        throw DataError("training corpus is empty");
    }
    if (!train.fully_labeled()) {
        throw DataError("training corpus has unlabeled records");
    }
    const auto y = signs_of(train);
    const FeatureMatrix train_features = featurize(train);

    // Bandwidth comes from training features only.
    std::optional<double> sigma;
    if (cfg.uses_rks() || !options.sweep_dim.empty()) {
        sigma = cfg.rks_sigma ? *cfg.rks_sigma : median_heuristic_sigma(train_features.values, cfg.rks_seed());
    }

    std::optional<RksMap> map;
    Model model;
    if (options.write_model_and_report || !options.sweep_C.empty()) {
        if (cfg.uses_rks()) {
            map = RksMap::sample(train_features.cols(), cfg.rks_dim, *sigma, cfg.rks_seed());
            FeatureMatrix lifted_train{map->transform_rows(train_features.values), train_features.ids};
            model = train_classifier(cfg, lifted_train, y);
            attach_rks(model, map);
        } else {
            model = train_classifier(cfg, train_features, y);
        }
    }

    // The test corpus is read only from here on.
    const auto test = load_corpus(cfg.test_tsv, cfg.test_labels, Split::test);
    if (!test.fully_labeled()) {
        for (const auto& rec : test.records) {
            if (!rec.label) {
                throw DataError("test record '" + rec.id + "' has no label");
            }
        }
    }

    RunArtifacts out;
    std::map<std::string, std::string> resolved;
    resolved["train_rows"] = std::to_string(train.size());
    resolved["test_rows"] = std::to_string(test.size());
    resolved["feature_dim"] = std::to_string(train_features.cols());

    if (options.write_model_and_report) {
        out.name = run_name(cfg, cfg.uses_rks() ? std::optional(cfg.rks_dim) : std::nullopt);
        out.report = evaluate(model, test, featurize);
        std::ostringstream tsv;
        std::ostringstream txt;
        render_report_tsv({{out.name, out.report}}, tsv);
        render_report_text({{out.name, out.report}}, txt);
        std::ostringstream bin;
        save_model(model, bin);
        out.files["report.tsv"] = tsv.str();
        out.files["report.txt"] = txt.str();
        out.files["model.offd"] = bin.str();
        resolved["output_sha256.model"] = sha256_bytes(out.files["model.offd"]);
        resolved["output_sha256.report"] = sha256_bytes(out.files["report.tsv"]);
    }

    if (!options.sweep_C.empty()) {
        Featurizer sweep_features = featurize;
        if (map) {
            sweep_features = lifted(featurize, std::make_shared<const RksMap>(*map));
        }
        std::ostringstream csv;
        write_sweep_csv(sweep_control_parameter(train, test, sweep_features, options.sweep_C,
                                                cfg.svm_epochs, cfg.hyper.seed),
                        csv);
        out.files["sweep_C.csv"] = csv.str();
    }

    if (!options.sweep_dim.empty()) {
        std::vector<NamedReport> rows;
        for (const auto dim : options.sweep_dim) {
            const auto dim_map = RksMap::sample(train_features.cols(), dim, *sigma, cfg.rks_seed());
            FeatureMatrix lifted_train{dim_map.transform_rows(train_features.values), train_features.ids};
            Model dim_model = train_classifier(cfg, lifted_train, y);
            attach_rks(dim_model, dim_map);
            rows.emplace_back("Dim=" + std::to_string(dim), evaluate(dim_model, test, featurize));
        }
        std::ostringstream tsv;
        render_report_tsv(rows, tsv);
        out.files["sweep_dim.tsv"] = tsv.str();
    }

    out.files["manifest.txt"] = render_manifest(cfg, sums, sigma, resolved);
    return out;
}

RunArtifacts run_experiment(const ExperimentConfig& cfg, const RunOptions& options)
{
    if (cfg.out_dir.empty()) {
        throw UsageError("config: out_dir is required (or pass --out)");
    }
    auto artifacts = compute_experiment(cfg, options);
    fs::create_directories(cfg.out_dir);
    // Stage every file first, then rename, so a failure leaves no partial report.
    std::vector<std::pair<fs::path, fs::path>> staged;
    try {
        for (const auto& [name, bytes] : artifacts.files) {
            const auto final_path = cfg.out_dir / name;
            auto tmp = final_path;
            tmp += ".tmp";
            std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
            f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
            f.close();
            staged.emplace_back(tmp, final_path);
            if (!f) {
                throw DataError("failed to write " + tmp.string());
            }
        }
        for (const auto& [tmp, final_path] : staged) {
            fs::rename(tmp, final_path);
        }
    } catch (...) {
        std::error_code ec;
        for (const auto& [tmp, final_path] : staged) {
            fs::remove(tmp, ec);
        }
        throw;
    }
    return artifacts;
}

void export_features(const ExperimentConfig& cfg, std::ostream& out)
{
    cfg.validate(false);
    check_inputs(cfg, false);
    const auto featurize = make_featurizer(cfg.feature, cfg.dmd_config(), load_resources(cfg));
    std::vector<LabeledCorpus> corpora;
    {
        auto in = open_input(cfg.train_tsv);
        corpora.push_back(load_olid_tsv(in, nullptr, Split::train));
    }
    if (!cfg.test_tsv.empty()) {
        auto in = open_input(cfg.test_tsv);
        corpora.push_back(load_olid_tsv(in, nullptr, Split::test));
    }
    for (const auto& corpus : corpora) {
        const auto f = featurize(corpus);
        for (Eigen::Index i = 0; i < f.rows(); ++i) {
            out << f.ids[static_cast<std::size_t>(i)];
            for (Eigen::Index j = 0; j < f.cols(); ++j) {
                out << ' ' << num(f.values(i, j));
            }
            out << '\n';
        }
    }
    if (!out) {
        throw DataError("failed to write feature dump");
    }
}

void describe_model(const Model& model, std::ostream& out)
{
    std::visit(
        [&out](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, LinearModel>) {
                out << "classifier: " << model_kind_name(m.kind) << '\n';
                out << "weights: " << m.weights.size() << '\n';
                out << "bias: " << num(m.bias) << '\n';
                out << "weight_norm: " << num(m.weights.norm()) << '\n';
            } else {
                out << "classifier: gnb\n";
                out << "features: " << m.mean.cols() << '\n';
                out << "prior_off: " << num(m.prior[0]) << '\n';
                out << "prior_not: " << num(m.prior[1]) << '\n';
            }
            const auto& h = m.hyper;
            out << "hyper: lambda=" << num(h.lambda) << " C=" << num(h.C) << " lr=" << num(h.lr)
                << " l2=" << num(h.l2) << " var_floor=" << num(h.var_floor) << " epochs=" << h.epochs
                << " seed=" << h.seed << '\n';
            if (m.rks) {
                out << "rks: in_dim=" << m.rks->in_dim() << " out_dim=" << m.rks->out_dim()
                    << " sigma=" << num(m.rks->sigma()) << " seed=" << m.rks->seed()
                    << " algorithm=" << m.rks->algorithm() << '\n';
            } else {
                out << "rks: none\n";
            }
        },
        model);
}

}  // namespace offd
