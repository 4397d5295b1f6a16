#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "linkmirage/commands.hpp"

using namespace linkmirage;

namespace {

struct OptionSet {
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;
    std::string config;

    void add(CLI::App* app, const std::string& key, const std::string& help) {
        options[key] = app->add_option("--" + key, values[key], help);
    }

    /// Config file first, then every flag actually given on the command line.
    Settings merged() const {
        Settings s;
        if (!config.empty()) {
            s = read_settings_file(config);
        }
        for (const auto& [key, opt] : options) {
            if (opt->count() > 0) {
                s[key] = values.at(key);
            }
        }
        return s;
    }
};

void add_run_options(CLI::App* app, OptionSet& set) {
    app->add_option("--config", set.config, "key = value file; flags override it");
    set.add(app, "manifest", "file listing snapshot edge lists in time order");
    set.add(app, "out", "output directory");
    set.add(app, "k", "random-walk perturbation length (default 2)");
    set.add(app, "m", "freeing radius for re-clustering (default 2)");
    set.add(app, "theta", "overlap threshold for unchanged communities (default 0.8)");
    set.add(app, "seed", "64-bit seed (default 0)");
    set.add(app, "mechanism", "linkmirage | static-baseline | hay-baseline");
    set.add(app, "metric", "comma list: anti-inference, indistinguishability, anti-aggregation, "
                           "anti-aggregation-aggregated, ud, modularity, structural, spectral, pagerank");
    set.add(app, "samples", "Monte Carlo samples per hypothesis (default 200)");
    set.add(app, "l", "comma list of walk lengths for utility distance (default 1)");
    set.add(app, "threads", "worker threads (default 1); outputs do not depend on it");
    set.add(app, "inter-cluster-form", "appendixC (default) | algorithm1");
    set.add(app, "k-override", "per-community k as community:k pairs");
    set.add(app, "query", "u,v,t link query in raw vertex ids");
    set.add(app, "prior", "worst-case (default) | link-prediction");
    set.add(app, "f", "probability that a node is malicious (default 0.1)");
    set.add(app, "epsilon", "mixing-time threshold (default 0.05)");
    set.add(app, "damping", "pagerank damping (default 0.85)");
    set.add(app, "lazy", "use the lazy walk (P + I) / 2 for spectral metrics");
    set.add(app, "eval", "comma list: attack, sampling, sybil (default attack,sampling)");
    set.add(app, "sybil-config", "sybil scenario file");
    set.add(app, "targets", "comma list of raw vertex ids for the attack evaluator");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Temporal link obfuscation and privacy/utility measurement"};
    app.require_subcommand(1);

    OptionSet perturb_set, metrics_set, eval_set, report_set, generate_set;
    auto* perturb = app.add_subcommand("perturb", "perturb every snapshot of a sequence");
    auto* metrics = app.add_subcommand("metrics", "privacy and utility metrics of a perturb run");
    auto* eval = app.add_subcommand("eval", "application-level evaluators of a perturb run");
    auto* report = app.add_subcommand("report", "merge metrics.csv and eval.csv into report.csv");
    auto* generate = app.add_subcommand("generate", "write a synthetic planted-partition sequence");
    add_run_options(perturb, perturb_set);
    add_run_options(metrics, metrics_set);
    add_run_options(eval, eval_set);
    add_run_options(report, report_set);
    generate->add_option("--config", generate_set.config, "key = value file; flags override it");
    for (const auto& [key, help] : std::map<std::string, std::string>{
             {"out", "output directory"},
             {"seed", "seed"},
             {"vertices", "vertex count (default 300)"},
             {"groups", "planted groups (default 6)"},
             {"p-in", "edge probability inside a group (default 0.1)"},
             {"p-out", "edge probability across groups (default 0.004)"},
             {"snapshots", "number of snapshots (default 5)"},
             {"overlap", "fraction of edges kept between snapshots (default 0.8)"}}) {
        generate_set.add(generate, key, help);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (perturb->parsed()) {
            cmd_perturb(make_run_config(perturb_set.merged()));
        } else if (metrics->parsed()) {
            cmd_metrics(make_run_config(metrics_set.merged()));
        } else if (eval->parsed()) {
            cmd_eval(make_run_config(eval_set.merged()));
        } else if (report->parsed()) {
            cmd_report(make_run_config(report_set.merged()));
        } else if (generate->parsed()) {
            cmd_generate(make_generate_config(generate_set.merged()));
        }
    } catch (...) {
        std::string message;
        const int code = exit_code_for_current_exception(message);
        std::cerr << "error: " << message << '\n';
        return code;
    }
    return kExitOk;
}
