// offd: offensive-tweet classification experiments.
//
//   offd run --config exp.cfg [--out DIR] [--seed N] [--sweep-C 0.1,1,100] [--sweep-dim 100,1000]
//   offd sweep --config exp.cfg (--sweep-C LIST | --sweep-dim LIST) [--out DIR] [--seed N]
//   offd export-features --config exp.cfg [--out FILE]
//   offd inspect-model MODEL
//
// Exit codes: 0 success, 1 usage, 2 data error, 3 numeric failure.

#include "offd/error.hpp"
#include "offd/pipeline.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

template <typename T>
std::vector<T> parse_list(const std::string& text, const char* flag)
{
    std::vector<T> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) {
            continue;
        }
        try {
            std::size_t used = 0;
            if constexpr (std::is_integral_v<T>) {
                out.push_back(static_cast<T>(std::stoll(item, &used)));
            } else {
                out.push_back(static_cast<T>(std::stod(item, &used)));
            }
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::exception&) {
            throw offd::UsageError(std::string(flag) + ": invalid value '" + item + "'");
        }
    }
    if (out.empty()) {
        throw offd::UsageError(std::string(flag) + ": empty list");
    }
    return out;
}

struct CommonArgs {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::string sweep_c;
    std::string sweep_dim;
};

offd::ExperimentConfig load(const CommonArgs& args)
{
    auto cfg = offd::load_config(args.config);
    if (!args.out.empty()) {
        cfg.out_dir = args.out;
    }
    if (args.seed) {
        cfg.hyper.seed = *args.seed;
    }
    return cfg;
}

offd::RunOptions sweep_options(const CommonArgs& args)
{
    offd::RunOptions opts;
    if (!args.sweep_c.empty()) {
        opts.sweep_C = parse_list<double>(args.sweep_c, "--sweep-C");
    }
    if (!args.sweep_dim.empty()) {
        opts.sweep_dim = parse_list<Eigen::Index>(args.sweep_dim, "--sweep-dim");
    }
    return opts;
}

void add_common(CLI::App* cmd, CommonArgs& args, bool sweeps)
{
    cmd->add_option("--config", args.config, "experiment config (key = value)")->required();
    cmd->add_option("--seed", args.seed, "override the config seed");
    cmd->add_option("--out", args.out, "output directory");
    if (sweeps) {
        cmd->add_option("--sweep-C", args.sweep_c, "comma list of SVM control parameters");
        cmd->add_option("--sweep-dim", args.sweep_dim, "comma list of RKS output dimensions");
    }
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"offensive-tweet classification experiments"};
    app.require_subcommand(1);

    CommonArgs run_args;
    auto* run = app.add_subcommand("run", "train, evaluate and write report/model/manifest");
    add_common(run, run_args, true);

    CommonArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep", "run --sweep-C / --sweep-dim only");
    add_common(sweep, sweep_args, true);

    CommonArgs export_args;
    auto* export_cmd = app.add_subcommand("export-features", "dump per-tweet features");
    export_cmd->add_option("--config", export_args.config, "experiment config")->required();
    export_cmd->add_option("--out", export_args.out, "output file (default stdout)");

    std::string model_path;
    auto* inspect = app.add_subcommand("inspect-model", "print a saved model's header");
    inspect->add_option("model", model_path, "model file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(offd::ErrorKind::usage);
    }

    try {
        if (run->parsed()) {
            const auto cfg = load(run_args);
            const auto artifacts = offd::run_experiment(cfg, sweep_options(run_args));
            std::cout << artifacts.files.at("report.txt");
        } else if (sweep->parsed()) {
            const auto cfg = load(sweep_args);
            auto opts = sweep_options(sweep_args);
            if (opts.sweep_C.empty() && opts.sweep_dim.empty()) {
                throw offd::UsageError("sweep needs --sweep-C and/or --sweep-dim");
            }
            opts.write_model_and_report = false;
            const auto artifacts = offd::run_experiment(cfg, opts);
            for (const auto& name : {"sweep_C.csv", "sweep_dim.tsv"}) {
                if (const auto it = artifacts.files.find(name); it != artifacts.files.end()) {
                    std::cout << it->second;
                }
            }
        } else if (export_cmd->parsed()) {
            const auto cfg = load(export_args);
            if (export_args.out.empty()) {
                offd::export_features(cfg, std::cout);
            } else {
                std::ostringstream buffer;
                offd::export_features(cfg, buffer);
                std::ofstream f(export_args.out, std::ios::binary | std::ios::trunc);
                f << buffer.str();
                if (!f) {
                    throw offd::DataError("failed to write " + export_args.out);
                }
            }
        } else if (inspect->parsed()) {
            std::ifstream in(model_path, std::ios::binary);
            if (!in) {
                throw offd::DataError("cannot open " + model_path);
            }
            offd::describe_model(offd::load_model(in), std::cout);
        }
    } catch (const offd::Error& e) {
        std::cerr << "offd: " << e.what() << '\n';
        return static_cast<int>(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "offd: " << e.what() << '\n';
        return static_cast<int>(offd::ErrorKind::data);
    }
    return 0;
}
