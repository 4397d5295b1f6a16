#include "linkmirage/report.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "linkmirage/graph.hpp"

namespace linkmirage {

std::uint64_t fnv1a(std::string_view data, std::uint64_t basis) {
    std::uint64_t h = basis;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t x) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, x);
    return buf;
}

std::string format_double(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

void dump(const Json& j, int indent, int depth, std::string& out) {
    auto newline = [&](int d) {
        if (indent > 0) {
            out += '\n';
            out.append(static_cast<std::size_t>(indent * d), ' ');
        }
    };
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += '{';
            bool first = true;
            for (const auto& [key, value] : j.items()) {
                if (!first) {
                    out += ',';
                }
                first = false;
                newline(depth + 1);
                out += Json(key).dump();
                out += indent > 0 ? ": " : ":";
                dump(value, indent, depth + 1, out);
            }
            newline(depth);
            out += '}';
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            // Arrays of scalars stay on one line; they are mostly id lists.
            bool flat = true;
            for (const auto& v : j) {
                flat = flat && !v.is_structured();
            }
            out += '[';
            bool first = true;
            for (const auto& v : j) {
                if (!first) {
                    out += flat && indent > 0 ? ", " : ",";
                }
                first = false;
                if (!flat) {
                    newline(depth + 1);
                }
                dump(v, indent, depth + 1, out);
            }
            if (!flat) {
                newline(depth);
            }
            out += ']';
            return;
        }
        case Json::value_t::number_float: {
            const double x = j.get<double>();
            out += std::isfinite(x) ? format_double(x) : "null";
            return;
        }
        default:
            out += j.dump();
    }
}

}  // namespace

std::string dump_json(const Json& j, int indent) {
    std::string out;
    dump(j, indent, 0, out);
    out += '\n';
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw GraphError("cannot write " + path.string());
    }
    out << text;
    if (!out) {
        throw GraphError("write failed for " + path.string());
    }
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw GraphError("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_metrics_csv(const std::filesystem::path& path, const std::vector<MetricRow>& rows,
                       const std::string& provenance) {
    std::string text = "# provenance " + provenance + "\n";
    text += "t,mechanism,metric,value,stderr,n_samples\n";
    for (const MetricRow& r : rows) {
        text += std::to_string(r.t) + ',' + r.mechanism + ',' + r.metric + ',' + format_double(r.value) + ',' +
                format_double(r.stderr_) + ',' + std::to_string(r.n_samples) + '\n';
    }
    write_text(path, text);
}

void write_metrics_json(const std::filesystem::path& path, const std::vector<MetricRow>& rows,
                        const std::string& provenance) {
    Json j;
    j["provenance"] = provenance;
    Json arr = Json::array();
    for (const MetricRow& r : rows) {
        arr.push_back({{"t", r.t},
                       {"mechanism", r.mechanism},
                       {"metric", r.metric},
                       {"value", r.value},
                       {"stderr", r.stderr_},
                       {"n_samples", r.n_samples}});
    }
    j["rows"] = std::move(arr);
    write_text(path, dump_json(j));
}

void write_clustering_csv(const std::filesystem::path& path, const Clustering& c,
                          const std::vector<std::uint64_t>& raw_ids, const std::string& provenance) {
    std::string text = "# provenance " + provenance + "\nvertex,community\n";
    for (VertexId v : c.vertices()) {
        const std::uint64_t raw = raw_ids.empty() ? v : raw_ids[v];
        text += std::to_string(raw) + ',' + std::to_string(c.community_of(v)) + '\n';
    }
    write_text(path, text);
}

Json history_to_json(const MergeHistory& h) {
    Json arr = Json::array();
    for (const MergeEvent& e : h.events) {
        arr.push_back({{"a", e.a}, {"b", e.b}, {"parent", e.parent}, {"delta", e.delta}, {"frozen", e.frozen}});
    }
    return arr;
}

MergeHistory history_from_json(const Json& j) {
    MergeHistory h;
    for (const auto& e : j) {
        h.events.push_back({e.at("a").get<VertexId>(), e.at("b").get<VertexId>(), e.at("parent").get<VertexId>(),
                            e.at("delta").is_null() ? NAN : e.at("delta").get<double>(), e.at("frozen").get<bool>()});
    }
    return h;
}

namespace {

Json edges_to_json(const std::vector<Edge>& es) {
    Json arr = Json::array();
    for (const Edge& e : es) {
        arr.push_back(Json::array({e.u, e.v}));
    }
    return arr;
}

std::vector<Edge> edges_from_json(const Json& j) {
    std::vector<Edge> out;
    for (const auto& e : j) {
        out.emplace_back(e.at(0).get<VertexId>(), e.at(1).get<VertexId>());
    }
    return out;
}

}  // namespace

Json record_to_json(const PerturbationRecord& r) {
    Json j;
    j["t"] = r.t;
    Json comms = Json::array();
    for (const auto& members : r.clustering.communities()) {
        comms.push_back(members);
    }
    j["communities"] = std::move(comms);
    Json intra = Json::array();
    for (const auto& [c, es] : r.intra) {
        intra.push_back({{"community", c}, {"edges", edges_to_json(es)}});
    }
    j["intra"] = std::move(intra);
    Json inter = Json::array();
    for (const auto& [key, es] : r.inter) {
        inter.push_back({{"a", key.first}, {"b", key.second}, {"edges", edges_to_json(es)}});
    }
    j["inter"] = std::move(inter);
    return j;
}

PerturbationRecord record_from_json(const Json& j) {
    PerturbationRecord r;
    r.t = j.at("t").get<std::size_t>();
    r.clustering = Clustering::from_groups(j.at("communities").get<std::vector<std::vector<VertexId>>>());
    for (const auto& e : j.at("intra")) {
        r.intra[e.at("community").get<CommunityId>()] = edges_from_json(e.at("edges"));
    }
    for (const auto& e : j.at("inter")) {
        r.inter[{e.at("a").get<CommunityId>(), e.at("b").get<CommunityId>()}] = edges_from_json(e.at("edges"));
    }
    return r;
}

}  // namespace linkmirage
