#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"

#include "coreset_lab/core.hpp"
#include "coreset_lab/diagnostics.hpp"
#include "coreset_lab/evaluation.hpp"
#include "coreset_lab/instances.hpp"
#include "coreset_lab/sampler.hpp"

namespace coreset_lab {

using json = nlohmann::json;

/// data.csv -> data.meta.json
std::filesystem::path sidecar_path(const std::filesystem::path& path);

struct DatasetFile {
    Dataset data;
    std::optional<InstanceTag> tag;
};

/// Headerless CSV of coordinates, or a distance matrix after a first line
/// "finite_matrix". Coordinate data is read as squared-Euclidean; the
/// optional sidecar carries the instance tag.
DatasetFile read_dataset(const std::filesystem::path& path);
void write_dataset(const std::filesystem::path& path, const Dataset& P,
                   const InstanceTag* tag = nullptr);

/// Parses CSV text; `what` names the source in error messages.
Dataset parse_dataset(const std::string& text, const std::string& what = "<string>");
std::string format_dataset(const Dataset& P);

json to_json(const InstanceTag& tag);
InstanceTag instance_tag_from_json(const json& j);

/// Extra provenance stored next to a coreset.
struct CoresetMeta {
    Objective objective = Objective::kmeans;
    std::size_t k = 0;
    int restarts = 0;
};

/// Rows are coordinates plus a final weight column ("index,weight" for
/// finite metrics). The sidecar is mandatory.
void write_coreset(const std::filesystem::path& path, const Coreset& omega,
                   const CoresetMeta& meta = {});
Coreset read_coreset(const std::filesystem::path& path, CoresetMeta* meta = nullptr);

json coreset_meta_json(const Coreset& omega, const CoresetMeta& meta);

json to_json(const EventEReport& r);
json to_json(const StructureReport& r);
json to_json(const InteractionReport& r);
json to_json(const SupError& e);
json to_json(const BetaEstimate& b);
json weight_bounds_json(const std::vector<WeightBoundViolation>& v, std::size_t checked);

inline constexpr int kReportVersion = 1;

/// Report skeleton with version and dataset digest.
json make_report(const Dataset& P);
/// Throws ValidationError on unknown or malformed fields.
void validate_report(const json& report);
void write_report(const std::filesystem::path& path, const json& report);

std::string format_error_table(const ErrorTable& table);
void write_error_table(const std::filesystem::path& path, const ErrorTable& table);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

/// %.17g
std::string format_double(double v);

}  // namespace coreset_lab
