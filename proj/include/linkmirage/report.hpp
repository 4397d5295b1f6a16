#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "linkmirage/cluster.hpp"
#include "linkmirage/perturb.hpp"

namespace linkmirage {

using Json = nlohmann::ordered_json;

inline constexpr const char* kLibraryVersion = "0.1.0";

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view data, std::uint64_t basis = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t x);

/// %.17g, with "nan", "inf" and "-inf" spelled out.
std::string format_double(double x);

/// Serializes with every float at 17 significant digits; non-finite floats
/// become null. Keys keep insertion order.
std::string dump_json(const Json& j, int indent = 2);

/// One row of a metric table.
struct MetricRow {
    std::size_t t = 0;
    std::string mechanism;
    std::string metric;
    double value = 0.0;
    double stderr_ = 0.0;
    std::size_t n_samples = 0;
};

/// CSV with header t,mechanism,metric,value,stderr,n_samples, preceded by a
/// "# provenance <hash>" comment line.
void write_metrics_csv(const std::filesystem::path& path, const std::vector<MetricRow>& rows,
                       const std::string& provenance);
void write_metrics_json(const std::filesystem::path& path, const std::vector<MetricRow>& rows,
                        const std::string& provenance);

/// "vertex,community" rows, in raw ids when raw_ids is non-empty.
void write_clustering_csv(const std::filesystem::path& path, const Clustering& c,
                          const std::vector<std::uint64_t>& raw_ids, const std::string& provenance);

Json history_to_json(const MergeHistory& h);
MergeHistory history_from_json(const Json& j);

/// Records use internal vertex ids; the raw mapping is stored alongside.
Json record_to_json(const PerturbationRecord& r);
PerturbationRecord record_from_json(const Json& j);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace linkmirage
