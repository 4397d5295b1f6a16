#include "linkmirage/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "linkmirage/apps.hpp"
#include "linkmirage/generators.hpp"
#include "linkmirage/mechanism.hpp"
#include "linkmirage/report.hpp"
#include "linkmirage/utility.hpp"

namespace fs = std::filesystem;

namespace linkmirage {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return "";
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& text) {
    std::uint64_t x = 0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
    if (ec != std::errc() || end != text.data() + text.size()) {
        throw ConfigError("setting '" + key + "' expects a nonnegative integer, got '" + text + "'");
    }
    return x;
}

double parse_double(const std::string& key, const std::string& text) {
    try {
        std::size_t used = 0;
        const double x = std::stod(text, &used);
        if (used != text.size()) {
            throw std::invalid_argument(text);
        }
        return x;
    } catch (const std::exception&) {
        throw ConfigError("setting '" + key + "' expects a number, got '" + text + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& text) {
    if (text == "true" || text == "1" || text == "yes" || text == "on") {
        return true;
    }
    if (text == "false" || text == "0" || text == "no" || text == "off") {
        return false;
    }
    throw ConfigError("setting '" + key + "' expects true or false, got '" + text + "'");
}

const std::set<std::string> kMetricNames = {"anti-inference", "indistinguishability", "anti-aggregation",
                                            "anti-aggregation-aggregated", "ud", "modularity",
                                            "structural", "spectral", "pagerank"};
const std::set<std::string> kEvalNames = {"attack", "sampling", "sybil"};

std::string provenance_path_note(const std::string& hash, const RunConfig& c) {
    return hash + " seed " + std::to_string(c.params.seed) + " mechanism " + c.mechanism + " version " +
           kLibraryVersion;
}

fs::path prime_path(const fs::path& out, std::size_t t) {
    return out / ("g_prime_" + std::to_string(t) + ".txt");
}

TemporalGraphSequence load_input(const RunConfig& c) {
    if (c.manifest.empty()) {
        throw ConfigError("no manifest given (--manifest)");
    }
    if (!fs::exists(c.manifest)) {
        throw ConfigError("manifest " + c.manifest.string() + " does not exist");
    }
    return load_sequence(c.manifest);
}

void require_out(const RunConfig& c) {
    if (c.out.empty()) {
        throw ConfigError("no output directory given (--out)");
    }
}

/// Checks provenance.json against the config and loads the perturbed snapshots.
std::vector<Graph> load_perturbed(const RunConfig& c, const TemporalGraphSequence& seq, std::string& hash) {
    const fs::path prov = c.out / "provenance.json";
    if (!fs::exists(prov)) {
        throw MissingArtifactError("no perturbation outputs in " + c.out.string() + " (run perturb first)");
    }
    hash = config_hash(c);
    Json j;
    try {
        j = Json::parse(read_text(prov));
    } catch (const Json::exception& e) {
        throw MissingArtifactError("unreadable provenance.json: " + std::string(e.what()));
    }
    if (j.value("config_hash", std::string{}) != hash) {
        throw MissingArtifactError("perturbation outputs in " + c.out.string() +
                                   " were produced by a different configuration (stale artifacts)");
    }
    std::vector<Graph> out;
    for (std::size_t t = 0; t < seq.size(); ++t) {
        const fs::path p = prime_path(c.out, t);
        if (!fs::exists(p)) {
            throw MissingArtifactError("missing perturbed snapshot " + p.string());
        }
        Graph g = load_edge_list_mapped(p, seq.raw_ids);
        // Vertices never mentioned in the file are isolated in the output.
        auto vs = seq[t].vertices();
        std::vector<VertexId> all(vs.begin(), vs.end());
        out.push_back(Graph::from_edges(std::move(all), g.edges()));
    }
    return out;
}

VertexId internal_id(const TemporalGraphSequence& seq, std::uint64_t raw) {
    auto it = std::lower_bound(seq.raw_ids.begin(), seq.raw_ids.end(), raw);
    if (it == seq.raw_ids.end() || *it != raw) {
        throw ConfigError("vertex " + std::to_string(raw) + " does not occur in the input");
    }
    return static_cast<VertexId>(it - seq.raw_ids.begin());
}

LinkQuery resolve_query(const RunConfig& c, const TemporalGraphSequence& seq) {
    if (!c.query) {
        throw ConfigError("this metric needs --query u,v,t");
    }
    LinkQuery q;
    q.u = internal_id(seq, c.query->u);
    q.v = internal_id(seq, c.query->v);
    q.t = c.query->t;
    if (q.t >= seq.size()) {
        throw ConfigError("query time " + std::to_string(q.t) + " beyond the last snapshot");
    }
    if (!seq[q.t].contains(q.u) || !seq[q.t].contains(q.v)) {
        throw ConfigError("query vertices are not both present at t = " + std::to_string(q.t));
    }
    return q;
}

std::vector<Graph> run_mechanism(const RunConfig& c, const TemporalGraphSequence& seq, SequenceRun* lm_run) {
    if (c.mechanism == "linkmirage") {
        SequenceRun run = linkmirage_run(seq, c.params);
        auto out = run.perturbed;
        if (lm_run) {
            *lm_run = std::move(run);
        }
        return out;
    }
    if (c.mechanism == "static-baseline") {
        return perturb_static_baseline_sequence(seq, c.params.k, c.params.seed);
    }
    return hay_baseline_sequence(seq, 0.5, c.params.seed);
}

}  // namespace

Settings read_settings_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config file " + path.string());
    }
    Settings s;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.resize(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
        }
        std::string key = trim(line.substr(0, eq));
        if (key.rfind("--", 0) == 0) {
            key = key.substr(2);
        }
        std::replace(key.begin(), key.end(), '_', '-');
        s[key] = trim(line.substr(eq + 1));
    }
    return s;
}

const std::vector<std::string>& run_setting_keys() {
    static const std::vector<std::string> keys = {
        "manifest", "out",     "k",       "m",      "theta",       "seed",         "mechanism", "metric",
        "samples",  "l",       "threads", "inter-cluster-form", "query", "f", "epsilon", "damping",
        "lazy",     "eval",    "sybil-config", "prior", "targets", "k-override"};
    return keys;
}

RunConfig make_run_config(const Settings& settings) {
    const auto& known = run_setting_keys();
    for (const auto& [key, value] : settings) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw ConfigError("unknown setting '" + key + "'");
        }
    }
    auto get = [&](const std::string& key) -> const std::string* {
        auto it = settings.find(key);
        return it == settings.end() ? nullptr : &it->second;
    };
    RunConfig c;
    if (auto s = get("manifest")) c.manifest = *s;
    if (auto s = get("out")) c.out = *s;
    if (auto s = get("k")) c.params.k = static_cast<unsigned>(parse_u64("k", *s));
    if (auto s = get("m")) c.params.m = static_cast<unsigned>(parse_u64("m", *s));
    if (auto s = get("theta")) c.params.theta = parse_double("theta", *s);
    if (auto s = get("seed")) c.params.seed = parse_u64("seed", *s);
    if (auto s = get("threads")) c.params.threads = static_cast<unsigned>(std::max<std::uint64_t>(1, parse_u64("threads", *s)));
    if (auto s = get("inter-cluster-form")) {
        try {
            c.params.form = parse_inter_cluster_form(*s);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    if (auto s = get("k-override")) {
        for (const auto& item : split(*s, ',')) {
            const auto colon = item.find(':');
            if (colon == std::string::npos) {
                throw ConfigError("k-override expects community:k pairs, got '" + item + "'");
            }
            c.params.k_override[static_cast<CommunityId>(parse_u64("k-override", trim(item.substr(0, colon))))] =
                static_cast<unsigned>(parse_u64("k-override", trim(item.substr(colon + 1))));
        }
    }
    if (auto s = get("mechanism")) c.mechanism = *s;
    if (c.mechanism != "linkmirage" && c.mechanism != "static-baseline" && c.mechanism != "hay-baseline") {
        throw ConfigError("unknown mechanism '" + c.mechanism +
                          "' (expected linkmirage, static-baseline or hay-baseline)");
    }
    if (auto s = get("metric")) {
        c.metrics = split(*s, ',');
        for (const auto& m : c.metrics) {
            if (!kMetricNames.contains(m)) {
                throw ConfigError("unknown metric '" + m + "'");
            }
        }
    }
    if (auto s = get("eval")) {
        c.evals = split(*s, ',');
        for (const auto& e : c.evals) {
            if (!kEvalNames.contains(e)) {
                throw ConfigError("unknown evaluator '" + e + "'");
            }
        }
    }
    if (auto s = get("samples")) c.samples = parse_u64("samples", *s);
    if (auto s = get("l")) {
        c.ls.clear();
        for (const auto& item : split(*s, ',')) {
            const auto l = parse_u64("l", item);
            if (l == 0) {
                throw ConfigError("l must be >= 1");
            }
            c.ls.push_back(static_cast<unsigned>(l));
        }
        if (c.ls.empty()) {
            throw ConfigError("l needs at least one value");
        }
    }
    if (auto s = get("query")) {
        const auto parts = split(*s, ',');
        if (parts.size() != 3) {
            throw ConfigError("query expects u,v,t");
        }
        c.query = RawQuery{parse_u64("query", parts[0]), parse_u64("query", parts[1]),
                           static_cast<std::size_t>(parse_u64("query", parts[2]))};
        if (c.query->u == c.query->v) {
            throw ConfigError("query endpoints must differ");
        }
    }
    if (auto s = get("f")) c.f = parse_double("f", *s);
    if (!(c.f >= 0.0 && c.f <= 1.0)) {
        throw ConfigError("f must lie in [0, 1]");
    }
    if (auto s = get("epsilon")) c.epsilon = parse_double("epsilon", *s);
    if (!(c.epsilon > 0.0 && c.epsilon < 0.5)) {
        throw ConfigError("epsilon must lie in (0, 0.5)");
    }
    if (auto s = get("damping")) c.damping = parse_double("damping", *s);
    if (!(c.damping > 0.0 && c.damping < 1.0)) {
        throw ConfigError("damping must lie in (0, 1)");
    }
    if (auto s = get("lazy")) c.lazy = parse_bool("lazy", *s);
    if (auto s = get("sybil-config")) c.sybil_config = *s;
    if (auto s = get("prior")) {
        if (*s == "worst-case") {
            c.prior = PriorKind::kWorstCase;
        } else if (*s == "link-prediction") {
            c.prior = PriorKind::kLinkPrediction;
        } else {
            throw ConfigError("prior expects worst-case or link-prediction");
        }
    }
    if (auto s = get("targets")) {
        for (const auto& item : split(*s, ',')) {
            c.targets.push_back(parse_u64("targets", item));
        }
    }
    try {
        c.params.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return c;
}

std::string config_hash(const RunConfig& c) {
    std::ostringstream canon;
    canon << "version=" << kLibraryVersion << ";mechanism=" << c.mechanism << ";k=" << c.params.k
          << ";m=" << c.params.m << ";theta=" << format_double(c.params.theta) << ";seed=" << c.params.seed
          << ";form=" << to_string(c.params.form) << ";k-override=";
    for (auto [comm, k] : c.params.k_override) {
        canon << comm << ':' << k << ',';
    }
    canon << ";inputs=";
    for (const auto& p : read_manifest(c.manifest)) {
        canon << hex64(fnv1a(read_text(p))) << ',';
    }
    return hex64(fnv1a(canon.str()));
}

void cmd_perturb(const RunConfig& c) {
    require_out(c);
    const TemporalGraphSequence seq = load_input(c);
    const std::string hash = config_hash(c);
    fs::create_directories(c.out);

    SequenceRun run;
    const auto perturbed = run_mechanism(c, seq, &run);
    const std::string note = provenance_path_note(hash, c);
    for (std::size_t t = 0; t < perturbed.size(); ++t) {
        write_edge_list(prime_path(c.out, t), perturbed[t], seq.raw_ids,
                        "provenance " + note + "\nt " + std::to_string(t) + " source " + seq.labels[t]);
    }

    std::string map = "# provenance " + hash + "\ninternal,raw\n";
    for (std::size_t i = 0; i < seq.raw_ids.size(); ++i) {
        map += std::to_string(i) + ',' + std::to_string(seq.raw_ids[i]) + '\n';
    }
    write_text(c.out / "vertex_map.csv", map);

    Json record;
    record["provenance"] = hash;
    record["mechanism"] = c.mechanism;
    record["vertex_ids"] = "internal (see vertex_map.csv)";
    Json steps = Json::array();
    for (std::size_t t = 0; t < run.records.size(); ++t) {
        steps.push_back(record_to_json(run.records[t]));
        write_clustering_csv(c.out / ("clustering_" + std::to_string(t) + ".csv"), run.records[t].clustering,
                             seq.raw_ids, hash);
        Json hist;
        hist["provenance"] = hash;
        hist["events"] = history_to_json(run.plans[t].cluster.history);
        write_text(c.out / ("merge_history_" + std::to_string(t) + ".json"), dump_json(hist));
    }
    record["records"] = std::move(steps);
    write_text(c.out / "record.json", dump_json(record));

    Json prov;
    prov["config_hash"] = hash;
    prov["seed"] = c.params.seed;
    prov["library_version"] = kLibraryVersion;
    prov["mechanism"] = c.mechanism;
    prov["k"] = c.params.k;
    prov["m"] = c.params.m;
    prov["theta"] = c.params.theta;
    prov["inter_cluster_form"] = to_string(c.params.form);
    prov["snapshots"] = seq.size();
    prov["labels"] = seq.labels;
    write_text(c.out / "provenance.json", dump_json(prov));
}

void cmd_metrics(const RunConfig& c) {
    require_out(c);
    if (c.metrics.empty()) {
        throw ConfigError("no metric selected (--metric)");
    }
    const TemporalGraphSequence seq = load_input(c);
    std::string hash;
    const auto pert = load_perturbed(c, seq, hash);
    const auto mech = make_mechanism(c.mechanism, c.params);
    const unsigned k = c.params.k;
    std::vector<MetricRow> rows;
    auto add = [&](std::size_t t, const std::string& metric, double value, double se = 0.0, std::size_t n = 0) {
        rows.push_back({t, c.mechanism, metric, value, se, n});
    };

    for (const auto& metric : c.metrics) {
        if (metric == "anti-aggregation") {
            for (std::size_t t = 0; t < seq.size(); ++t) {
                add(t, metric, anti_aggregation(seq[t], pert[t], k));
            }
        } else if (metric == "anti-aggregation-aggregated") {
            for (std::size_t t = 0; t < seq.size(); ++t) {
                add(t, metric, anti_aggregation_aggregated(std::span(pert).first(t + 1), seq[t], k).distance);
            }
        } else if (metric == "ud") {
            for (unsigned l : c.ls) {
                const auto report = utility_distance(seq, pert, l, c.params.threads);
                for (std::size_t t = 0; t < seq.size(); ++t) {
                    add(t, "ud_l" + std::to_string(l), report.per_t[t]);
                }
            }
        } else if (metric == "anti-inference") {
            const LinkQuery last = resolve_query(c, seq);
            for (std::size_t t = 0; t <= last.t; ++t) {
                LinkQuery q = last;
                q.t = t;
                if (!seq[t].contains(q.u) || !seq[t].contains(q.v)) {
                    continue;
                }
                const double prior = prior_probability(q, fit_prior(q, c.prior, seq), seq);
                PosteriorOptions opt;
                opt.samples = c.samples;
                opt.seed = derive_seed(c.params.seed, {0xa17, t});
                opt.threads = c.params.threads;
                const auto est = posterior_probability(q, pert, seq, prior, *mech, opt);
                add(t, "prior", prior);
                add(t, "posterior", est.probability, est.standard_error, est.samples);
                add(t, "posterior_gap", std::fabs(est.probability - prior), est.standard_error, est.samples);
                add(t, "posterior_degenerate", est.degenerate ? 1.0 : 0.0);
            }
        } else if (metric == "indistinguishability") {
            const LinkQuery q = resolve_query(c, seq);
            const double prior = prior_probability(q, fit_prior(q, c.prior, seq), seq);
            EntropyOptions opt;
            opt.samples = c.samples;
            opt.seed = derive_seed(c.params.seed, {0x1d5});
            opt.threads = c.params.threads;
            for (const auto& point : indistinguishability_series(seq, q, prior, *mech, opt)) {
                add(point.t, metric, point.entropy, point.standard_error, c.samples);
            }
        } else if (metric == "modularity") {
            for (std::size_t t = 0; t < seq.size(); ++t) {
                add(t, "modularity_original", best_modularity(seq[t]));
                add(t, "modularity", best_modularity(pert[t]));
            }
        } else if (metric == "structural") {
            for (std::size_t t = 0; t < seq.size(); ++t) {
                const auto s = structural_metrics(pert[t]);
                add(t, "clustering_coefficient", s.clustering_coefficient);
                add(t, "assortativity", s.assortativity);
                add(t, "assortativity_degenerate", s.assortativity_degenerate ? 1.0 : 0.0);
            }
        } else if (metric == "spectral") {
            SpectralOptions opt;
            opt.lazy = c.lazy;
            for (std::size_t t = 0; t < seq.size(); ++t) {
                if (pert[t].num_edges() == 0) {
                    continue;
                }
                const auto s = spectral_metrics(pert[t], c.epsilon, opt);
                add(t, "slem", s.slem);
                add(t, "mixing_time", s.mixing_time ? static_cast<double>(*s.mixing_time) : NAN);
            }
        } else if (metric == "pagerank") {
            for (std::size_t t = 0; t < seq.size(); ++t) {
                const auto a = pagerank(seq[t], c.damping);
                const auto b = pagerank(pert[t], c.damping);
                double diff = 0.0;
                for (std::size_t i = 0; i < a.size(); ++i) {
                    diff += std::fabs(a[i] - b[i]);
                }
                add(t, "pagerank_mean_abs_diff", a.empty() ? 0.0 : diff / static_cast<double>(a.size()));
            }
        }
    }
    write_metrics_csv(c.out / "metrics.csv", rows, hash);
    write_metrics_json(c.out / "metrics.json", rows, hash);
}

void cmd_eval(const RunConfig& c) {
    require_out(c);
    const std::vector<std::string> evals = c.evals.empty() ? std::vector<std::string>{"attack", "sampling"} : c.evals;
    const bool wants_sybil = std::find(evals.begin(), evals.end(), "sybil") != evals.end();
    Settings scenario_settings;
    if (wants_sybil) {
        if (c.sybil_config.empty()) {
            throw ConfigError("sybil evaluation needs --sybil-config");
        }
        if (!fs::exists(c.sybil_config)) {
            throw ConfigError("sybil scenario file " + c.sybil_config.string() + " does not exist");
        }
        scenario_settings = read_settings_file(c.sybil_config);
    }
    const TemporalGraphSequence seq = load_input(c);
    std::string hash;
    const auto pert = load_perturbed(c, seq, hash);

    std::string text = "# provenance " + hash + "\nt,mechanism,metric,value\n";
    auto add = [&](std::size_t t, const std::string& mech, const std::string& metric, double value) {
        text += std::to_string(t) + ',' + mech + ',' + metric + ',' + format_double(value) + '\n';
    };

    for (const auto& e : evals) {
        if (e == "attack") {
            std::vector<VertexId> targets;
            if (!c.targets.empty()) {
                for (auto raw : c.targets) {
                    targets.push_back(internal_id(seq, raw));
                }
            } else {
                for (VertexId v : seq[0].vertices()) {
                    bool everywhere = true;
                    for (const Graph& g : pert) {
                        everywhere = everywhere && g.contains(v);
                    }
                    if (everywhere) {
                        targets.push_back(v);
                    }
                }
            }
            if (targets.empty()) {
                throw ConfigError("no target vertex is present in every snapshot");
            }
            std::vector<double> mean(seq.size(), 0.0);
            for (VertexId v : targets) {
                const auto series = attack_probability(pert, v, c.f);
                for (std::size_t t = 0; t < series.size(); ++t) {
                    mean[t] += series[t];
                }
            }
            for (std::size_t t = 0; t < seq.size(); ++t) {
                add(t, c.mechanism, "attack_probability", mean[t] / static_cast<double>(targets.size()));
            }
        } else if (e == "sampling") {
            const std::size_t last = seq.size() - 1;
            const auto mine = sampling_probability(pert, seq.snapshots, c.params.k);
            add(last, c.mechanism, "sampling_probability", mine.probability);
            add(last, c.mechanism, "out_of_envelope", static_cast<double>(mine.out_of_envelope));
            if (c.mechanism != "static-baseline") {
                const auto base = perturb_static_baseline_sequence(seq, c.params.k, c.params.seed);
                const auto other = sampling_probability(base, seq.snapshots, c.params.k);
                add(last, "static-baseline", "sampling_probability", other.probability);
                add(last, "static-baseline", "out_of_envelope", static_cast<double>(other.out_of_envelope));
            }
        } else if (e == "sybil") {
            SybilScenario sc;
            sc.honest = seq[seq.size() - 1];
            std::uint64_t seed = c.params.seed;
            for (const auto& [key, value] : scenario_settings) {
                if (key == "sybil-vertices") sc.sybil_vertices = parse_u64(key, value);
                else if (key == "attack-edges") sc.attack_edges = parse_u64(key, value);
                else if (key == "walk-length") sc.walk_length = parse_u64(key, value);
                else if (key == "routes") sc.routes = parse_u64(key, value);
                else if (key == "verifiers") sc.verifiers = parse_u64(key, value);
                else if (key == "seed") seed = parse_u64(key, value);
                else throw ConfigError("unknown sybil scenario setting '" + key + "'");
            }
            if (sc.attack_edges < 1 || sc.walk_length < 1) {
                throw ConfigError("sybil scenario needs attack-edges >= 1 and walk-length >= 1");
            }
            const SybilWorld world = build_sybil_world(sc, seed);
            const auto mech = make_mechanism(c.mechanism, c.params);
            const auto world_seq = TemporalGraphSequence::from_graphs({world.graph});
            const Graph perturbed_world = mech->bind(world_seq)(derive_seed(seed, {0x5b2}))[0];
            const std::size_t t = seq.size() - 1;
            const auto before = sybil_eval(sc, world, world.graph, seed, c.params.threads);
            const auto after = sybil_eval(sc, world, perturbed_world, seed, c.params.threads);
            add(t, "original", "false_positive_rate", before.false_positive_rate);
            add(t, "original", "attack_edges", static_cast<double>(before.attack_edges_after));
            add(t, c.mechanism, "false_positive_rate", after.false_positive_rate);
            add(t, c.mechanism, "attack_edges", static_cast<double>(after.attack_edges_after));
            add(t, c.mechanism, "honest_disconnected", after.honest_disconnected ? 1.0 : 0.0);
        }
    }
    write_text(c.out / "eval.csv", text);
}

void cmd_report(const RunConfig& c) {
    require_out(c);
    std::string text = "source,t,mechanism,metric,value,stderr,n_samples\n";
    std::string provenance;
    bool any = false;
    for (const std::string name : {"metrics.csv", "eval.csv"}) {
        const fs::path p = c.out / name;
        if (!fs::exists(p)) {
            continue;
        }
        any = true;
        std::istringstream in(read_text(p));
        std::string line;
        bool header = true;
        while (std::getline(in, line)) {
            if (line.rfind("# provenance ", 0) == 0) {
                provenance = line.substr(13);
                continue;
            }
            if (line.empty() || line[0] == '#') {
                continue;
            }
            if (header) {
                header = false;
                continue;
            }
            const std::string source = name.substr(0, name.find('.'));
            text += source + ',' + line + (source == "eval" ? ",," : "") + '\n';
        }
    }
    if (!any) {
        throw MissingArtifactError("no metrics.csv or eval.csv in " + c.out.string());
    }
    write_text(c.out / "report.csv", "# provenance " + provenance + "\n" + text);
}

GenerateConfig make_generate_config(const Settings& settings) {
    GenerateConfig g;
    for (const auto& [key, value] : settings) {
        if (key == "out") g.out = value;
        else if (key == "seed") g.seed = parse_u64(key, value);
        else if (key == "vertices") g.vertices = parse_u64(key, value);
        else if (key == "groups") g.groups = parse_u64(key, value);
        else if (key == "p-in") g.p_in = parse_double(key, value);
        else if (key == "p-out") g.p_out = parse_double(key, value);
        else if (key == "snapshots") g.snapshots = parse_u64(key, value);
        else if (key == "overlap") g.overlap = parse_double(key, value);
        else throw ConfigError("unknown setting '" + key + "' for generate");
    }
    if (g.out.empty()) {
        throw ConfigError("no output directory given (--out)");
    }
    if (g.vertices == 0 || g.groups == 0 || g.groups > g.vertices || g.snapshots == 0) {
        throw ConfigError("generate needs vertices >= groups >= 1 and snapshots >= 1");
    }
    for (double p : {g.p_in, g.p_out, g.overlap}) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw ConfigError("probabilities and overlap must lie in [0, 1]");
        }
    }
    return g;
}

void cmd_generate(const GenerateConfig& g) {
    fs::create_directories(g.out);
    Rng rng = make_stream(g.seed, {0x9e7});
    const auto seq =
        overlapping_sequence({g.vertices, g.groups, g.p_in, g.p_out}, g.snapshots, g.overlap, rng);
    std::string manifest;
    for (std::size_t t = 0; t < seq.size(); ++t) {
        const std::string name = "snapshot_" + std::to_string(t) + ".txt";
        write_edge_list(g.out / name, seq[t], seq.raw_ids,
                        "planted partition " + std::to_string(g.vertices) + " vertices, seed " +
                            std::to_string(g.seed));
        manifest += name + '\n';
    }
    write_text(g.out / "manifest.txt", manifest);
}

int exit_code_for_current_exception(std::string& message) {
    try {
        throw;
    } catch (const ConfigError& e) {
        message = e.what();
        return kExitConfig;
    } catch (const MissingArtifactError& e) {
        message = e.what();
        return kExitMissing;
    } catch (const GraphError& e) {
        message = e.what();
        return kExitIo;
    } catch (const fs::filesystem_error& e) {
        message = e.what();
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        message = e.what();
        return kExitConfig;
    } catch (const std::exception& e) {
        message = e.what();
        return 1;
    }
}

}  // namespace linkmirage
