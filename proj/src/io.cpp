#include "coreset_lab/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace coreset_lab {

namespace fs = std::filesystem;

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("cannot read " + path.string());
    return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("cannot write " + path.string());
}

fs::path sidecar_path(const fs::path& path) {
    fs::path p = path;
    p.replace_extension(".meta.json");
    return p;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

double parse_cell(std::string_view cell, const std::string& what, std::size_t line) {
    cell = trim(cell);
    double v = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    if (!cell.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (cell.empty() || ec != std::errc{} || ptr != last || !std::isfinite(v))
        throw ValidationError(what + ":" + std::to_string(line) + ": cannot parse '" +
                              std::string(cell) + "' as a number");
    return v;
}

struct Table {
    std::vector<std::vector<double>> rows;
    std::vector<std::size_t> lines;
    bool finite = false;
};

Table parse_table(const std::string& text, const std::string& what) {
    Table t;
    std::size_t line_no = 0;
    std::size_t width = 0;
    std::string_view rest(text);
    bool first = true;
    while (!rest.empty()) {
        const auto nl = rest.find('\n');
        std::string_view line = rest.substr(0, nl);
        rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
        ++line_no;
        line = trim(line);
        if (line.empty()) continue;
        if (first && line == "finite_matrix") {
            t.finite = true;
            first = false;
            continue;
        }
        first = false;
        std::vector<double> row;
        while (true) {
            const auto comma = line.find(',');
            row.push_back(parse_cell(line.substr(0, comma), what, line_no));
            if (comma == std::string_view::npos) break;
            line.remove_prefix(comma + 1);
        }
        if (t.rows.empty()) {
            width = row.size();
        } else if (row.size() != width) {
            throw ValidationError(what + ":" + std::to_string(line_no) + ": ragged row with " +
                                  std::to_string(row.size()) + " columns, expected " +
                                  std::to_string(width));
        }
        t.rows.push_back(std::move(row));
        t.lines.push_back(line_no);
    }
    return t;
}

json number(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

double number_from(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    throw ValidationError("expected a number, got " + j.dump());
}

template <class T>
T field(const json& j, const char* key) {
    if (!j.contains(key)) throw ValidationError(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ValidationError(std::string("field '") + key + "' has the wrong type");
    }
}

}  // namespace

Dataset parse_dataset(const std::string& text, const std::string& what) {
    Table t = parse_table(text, what);
    if (t.rows.empty()) throw ValidationError(what + ": no data rows");
    if (t.finite) {
        if (t.rows.size() != t.rows.front().size())
            throw ValidationError(what + ": distance matrix is not square");
        std::vector<double> flat;
        for (const auto& r : t.rows) flat.insert(flat.end(), r.begin(), r.end());
        try {
            return Dataset::from_matrix(std::move(flat), t.rows.size());
        } catch (const ValidationError& e) {
            throw ValidationError(what + ": " + e.what());
        }
    }
    return Dataset::from_rows(t.rows);
}

std::string format_dataset(const Dataset& P) {
    std::string out;
    if (P.is_finite()) {
        out += "finite_matrix\n";
        for (std::size_t i = 0; i < P.size(); ++i) {
            for (std::size_t j = 0; j < P.size(); ++j) {
                if (j) out += ',';
                out += format_double(P.entry(i, j));
            }
            out += '\n';
        }
        return out;
    }
    for (std::size_t i = 0; i < P.size(); ++i) {
        auto p = P.point(i);
        for (std::size_t d = 0; d < p.size(); ++d) {
            if (d) out += ',';
            out += format_double(p[d]);
        }
        out += '\n';
    }
    return out;
}

json to_json(const InstanceTag& tag) {
    json j;
    j["kind"] = std::string(to_string(tag.kind));
    j["k"] = tag.k;
    j["dim"] = tag.dim;
    j["seed"] = tag.seed;
    j["cluster_sizes"] = tag.cluster_sizes;
    j["target_beta"] = tag.target_beta;
    j["noise_radius"] = tag.noise_radius;
    j["center_sq_distance"] = tag.center_sq_distance;
    j["certified_beta"] = tag.certified_beta ? number(*tag.certified_beta) : json(nullptr);
    j["beta_certificate"] = tag.beta_certificate;
    j["eps"] = tag.eps;
    j["separation"] = tag.separation;
    j["block_size"] = tag.block_size;
    j["sigma"] = tag.sigma;
    j["spread"] = tag.spread;
    return j;
}

InstanceTag instance_tag_from_json(const json& j) {
    if (!j.is_object()) throw ValidationError("instance tag must be a JSON object");
    InstanceTag t;
    t.kind = instance_kind_from_string(field<std::string>(j, "kind"));
    t.k = field<std::size_t>(j, "k");
    t.dim = field<std::size_t>(j, "dim");
    t.seed = field<std::uint64_t>(j, "seed");
    t.cluster_sizes = field<std::vector<std::size_t>>(j, "cluster_sizes");
    t.target_beta = j.value("target_beta", 0.0);
    t.noise_radius = j.value("noise_radius", 0.0);
    t.center_sq_distance = j.value("center_sq_distance", 0.0);
    if (j.contains("certified_beta") && !j["certified_beta"].is_null())
        t.certified_beta = number_from(j["certified_beta"]);
    t.beta_certificate = j.value("beta_certificate", std::string{});
    t.eps = j.value("eps", 0.0);
    t.separation = j.value("separation", 0.0);
    t.block_size = j.value("block_size", std::size_t{0});
    t.sigma = j.value("sigma", 0.0);
    t.spread = j.value("spread", 0.0);
    return t;
}

DatasetFile read_dataset(const fs::path& path) {
    DatasetFile f{parse_dataset(read_text(path), path.string()), std::nullopt};
    const fs::path side = sidecar_path(path);
    if (fs::exists(side)) {
        json j;
        try {
            j = json::parse(read_text(side));
        } catch (const json::parse_error& e) {
            throw ValidationError(side.string() + ": " + e.what());
        }
        f.tag = instance_tag_from_json(j);
    }
    return f;
}

void write_dataset(const fs::path& path, const Dataset& P, const InstanceTag* tag) {
    write_text(path, format_dataset(P));
    if (tag) write_text(sidecar_path(path), to_json(*tag).dump(2) + "\n");
}

json coreset_meta_json(const Coreset& omega, const CoresetMeta& meta) {
    json j;
    j["m"] = omega.m;
    j["algorithm"] = omega.algorithm;
    j["seed"] = omega.seed;
    j["offset"] = omega.offset;
    j["objective_mode"] = std::string(to_string(meta.objective));
    j["metric"] = std::string(to_string(omega.metric));
    j["dim"] = omega.entries.dim;
    j["approx_digest"] = digest_hex(omega.approx_digest);
    j["dataset_digest"] = digest_hex(omega.dataset_digest);
    j["k"] = meta.k;
    j["restarts"] = meta.restarts;
    return j;
}

void write_coreset(const fs::path& path, const Coreset& omega, const CoresetMeta& meta) {
    if (omega.m != omega.size())
        throw ValidationError("coreset m (" + std::to_string(omega.m) + ") differs from its " +
                              std::to_string(omega.size()) + " entries");
    std::string out;
    const bool finite = omega.metric == MetricKind::finite_matrix;
    for (std::size_t e = 0; e < omega.size(); ++e) {
        if (!(omega.entries.weights[e] > 0.0))
            throw ValidationError("coreset weight must be positive");
        if (finite) {
            out += std::to_string(omega.entries.sources[e]);
        } else {
            auto p = omega.entries.point(e);
            for (std::size_t d = 0; d < p.size(); ++d) {
                if (d) out += ',';
                out += format_double(p[d]);
            }
        }
        out += ',';
        out += format_double(omega.entries.weights[e]);
        out += '\n';
    }
    json side = coreset_meta_json(omega, meta);
    json sources = json::array();
    for (std::size_t s : omega.entries.sources)
        sources.push_back(s == npos ? json(-1) : json(s));
    side["sources"] = std::move(sources);
    write_text(path, out);
    write_text(sidecar_path(path), side.dump(2) + "\n");
}

Coreset read_coreset(const fs::path& path, CoresetMeta* meta) {
    const std::string text = read_text(path);
    const fs::path side_path = sidecar_path(path);
    if (!fs::exists(side_path)) throw IoError("coreset sidecar missing: " + side_path.string());
    json side;
    try {
        side = json::parse(read_text(side_path));
    } catch (const json::parse_error& e) {
        throw ValidationError(side_path.string() + ": " + e.what());
    }
    if (!side.is_object()) throw ValidationError(side_path.string() + ": not a JSON object");

    Coreset c;
    c.metric = metric_from_string(field<std::string>(side, "metric"));
    c.m = field<std::size_t>(side, "m");
    c.algorithm = field<std::string>(side, "algorithm");
    c.seed = field<std::uint64_t>(side, "seed");
    c.offset = field<double>(side, "offset");
    c.approx_digest = digest_from_hex(field<std::string>(side, "approx_digest"));
    c.dataset_digest = digest_from_hex(field<std::string>(side, "dataset_digest"));
    const std::size_t dim = field<std::size_t>(side, "dim");
    const Objective objective = objective_from_string(field<std::string>(side, "objective_mode"));
    if (c.metric != MetricKind::finite_matrix && objective_for(c.metric) != objective)
        throw ValidationError("sidecar objective_mode contradicts its metric");
    if (meta) {
        meta->objective = objective;
        meta->k = side.value("k", std::size_t{0});
        meta->restarts = side.value("restarts", 0);
    }

    const bool finite = c.metric == MetricKind::finite_matrix;
    const Table t = parse_table(text, path.string());
    if (t.finite) throw ValidationError(path.string() + ": unexpected finite_matrix header");
    const std::size_t width = finite ? 2 : dim + 1;
    if (!t.rows.empty() && t.rows.front().size() != width)
        throw ValidationError(path.string() + ": rows have " +
                              std::to_string(t.rows.front().size()) + " columns, expected " +
                              std::to_string(width));
    if (t.rows.size() != c.m)
        throw ValidationError(path.string() + ": sidecar m = " + std::to_string(c.m) +
                              " but the file has " + std::to_string(t.rows.size()) + " rows");

    std::vector<std::size_t> sources(t.rows.size(), npos);
    if (side.contains("sources")) {
        const auto& js = side["sources"];
        if (!js.is_array() || js.size() != t.rows.size())
            throw ValidationError("sidecar sources do not match the coreset rows");
        for (std::size_t e = 0; e < js.size(); ++e) {
            const auto v = js[e].get<long long>();
            sources[e] = v < 0 ? npos : static_cast<std::size_t>(v);
        }
    }

    c.entries.dim = finite ? 0 : dim;
    for (std::size_t e = 0; e < t.rows.size(); ++e) {
        const auto& row = t.rows[e];
        const double w = row.back();
        if (!(w > 0.0))
            throw ValidationError(path.string() + ":" + std::to_string(t.lines[e]) +
                                  ": weight must be positive");
        if (finite) {
            const double id = row[0];
            if (id < 0.0 || id != std::floor(id))
                throw ValidationError(path.string() + ":" + std::to_string(t.lines[e]) +
                                      ": point index must be a nonnegative integer");
            c.entries.push_back({}, static_cast<std::size_t>(id), w);
        } else {
            c.entries.push_back(std::span<const double>(row.data(), dim), sources[e], w);
        }
    }
    return c;
}

json to_json(const EventEReport& r) {
    json j;
    j["eps"] = r.eps;
    j["p1"] = json::array();
    for (const auto& s : r.p1)
        j["p1"].push_back({{"cluster", s.cluster},
                           {"weighted", s.weighted},
                           {"size", s.size},
                           {"rel_dev", s.rel_dev},
                           {"margin", s.margin},
                           {"pass", s.pass}});
    j["p2"] = json::array();
    for (const auto& s : r.p2)
        j["p2"].push_back({{"cluster", s.cluster},
                           {"ring", s.ring},
                           {"weighted", s.weighted},
                           {"bound", s.bound},
                           {"margin", s.margin},
                           {"checked", s.checked},
                           {"pass", s.pass}});
    j["p3"] = json::array();
    for (const auto& s : r.p3)
        j["p3"].push_back({{"cluster", s.cluster},
                           {"weighted_cost", s.weighted_cost},
                           {"cost", s.cost},
                           {"rel_dev", s.rel_dev},
                           {"margin", s.margin},
                           {"pass", s.pass}});
    j["p1_pass"] = r.p1_pass;
    j["p2_pass"] = r.p2_pass;
    j["p3_pass"] = r.p3_pass;
    j["pass"] = r.pass;
    return j;
}

json to_json(const StructureReport& r) {
    const auto& p = r.params;
    json j;
    j["params"] = {{"eps", p.eps},
                   {"objective", std::string(to_string(p.objective))},
                   {"far_factor", p.far_factor},
                   {"T", p.T},
                   {"b_max", p.b_max},
                   {"t_max", p.t_max},
                   {"l_max", p.l_max}};
    j["clusters"] = json::array();
    for (const auto& c : r.clusters)
        j["clusters"].push_back({{"center_cost", number(c.center_cost)},
                                 {"far", c.far},
                                 {"low_cost", c.low_cost},
                                 {"band", c.band},
                                 {"type", c.type}});
    const auto [b, t] = r.largest_group();
    j["largest_group"] = {{"band", b}, {"type", t}};
    std::vector<std::size_t> ring_counts(static_cast<std::size_t>(p.l_max) + 2, 0);
    for (int ring : r.ring) ring_counts[static_cast<std::size_t>(ring)] += 1;
    j["ring_counts"] = ring_counts;
    return j;
}

json to_json(const InteractionReport& r) {
    return {{"band", r.band},         {"type", r.type}, {"group_size", r.group_size},
            {"signature", r.signature}, {"N", r.N},     {"r", r.class_r}};
}

json to_json(const SupError& e) {
    return {{"sup", e.max},
            {"mean", e.mean},
            {"argmax", e.argmax == npos ? json(nullptr) : json(e.argmax)},
            {"argmax_family", e.argmax == npos ? json(nullptr)
                                               : json(std::string(to_string(e.family)))},
            {"evaluated", e.evaluated},
            {"skipped", e.skipped}};
}

json to_json(const BetaEstimate& b) {
    return {{"value", number(b.beta)},
            {"mode", std::string(to_string(b.mode))},
            {"opt_k", b.opt_k},
            {"opt_k_minus_1", b.opt_k_minus_1},
            {"note", b.note}};
}

json weight_bounds_json(const std::vector<WeightBoundViolation>& v, std::size_t checked) {
    json j;
    j["checked"] = checked;
    j["violations"] = json::array();
    for (const auto& x : v)
        j["violations"].push_back({{"entry", x.entry},
                                   {"weight", x.weight},
                                   {"bound", x.bound},
                                   {"binding_term", x.binding_term}});
    return j;
}

json make_report(const Dataset& P) {
    return {{"version", kReportVersion}, {"dataset_digest", digest_hex(P.digest())}};
}

namespace {

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed,
                std::initializer_list<const char*> required) {
    if (!j.is_object()) throw ValidationError("report: " + where + " must be an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, _] : j.items())
        if (!ok.count(key)) throw ValidationError("report: unknown field '" + where + key + "'");
    for (const char* key : required)
        if (!j.contains(key))
            throw ValidationError("report: missing field '" + where + key + "'");
}

void require(bool ok, const std::string& msg) {
    if (!ok) throw ValidationError("report: " + msg);
}

bool is_number_or_sentinel(const json& j) {
    if (j.is_number()) return true;
    if (!j.is_string()) return false;
    const auto s = j.get<std::string>();
    return s == "inf" || s == "-inf" || s == "nan";
}

}  // namespace

void validate_report(const json& r) {
    check_keys(r, "",
               {"version", "dataset_digest", "coreset_meta", "evente", "structure", "interaction",
                "errors", "beta", "weight_bounds"},
               {"version", "dataset_digest"});
    require(r["version"].is_number_integer() && r["version"].get<int>() == kReportVersion,
            "unsupported version");
    require(r["dataset_digest"].is_string() && r["dataset_digest"].get<std::string>().size() == 16,
            "dataset_digest must be 16 hex digits");
    if (r.contains("coreset_meta")) {
        check_keys(r["coreset_meta"], "coreset_meta.",
                   {"m", "algorithm", "seed", "offset", "objective_mode", "metric", "dim",
                    "approx_digest", "dataset_digest", "k", "restarts"},
                   {"m", "algorithm", "seed", "offset", "objective_mode", "approx_digest"});
    }
    if (r.contains("evente")) {
        const auto& e = r["evente"];
        check_keys(e, "evente.", {"eps", "p1", "p2", "p3", "p1_pass", "p2_pass", "p3_pass", "pass"},
                   {"p1", "p2", "p3", "pass"});
        require(e["p1"].is_array() && e["p2"].is_array() && e["p3"].is_array(),
                "evente.p1/p2/p3 must be arrays");
        require(e["pass"].is_boolean(), "evente.pass must be a boolean");
    }
    if (r.contains("structure")) {
        const auto& s = r["structure"];
        check_keys(s, "structure.", {"params", "clusters", "largest_group", "ring_counts"},
                   {"params", "clusters"});
        require(s["clusters"].is_array(), "structure.clusters must be an array");
    }
    if (r.contains("interaction")) {
        const auto& i = r["interaction"];
        check_keys(i, "interaction.", {"band", "type", "group_size", "signature", "N", "r"},
                   {"signature", "N", "r"});
        require(i["signature"].is_array(), "interaction.signature must be an array");
        require(i["N"].is_number_integer() && i["r"].is_number_integer(),
                "interaction.N and interaction.r must be integers");
    }
    if (r.contains("errors")) {
        const auto& e = r["errors"];
        check_keys(e, "errors.", {"sup", "mean", "argmax", "argmax_family", "evaluated", "skipped"},
                   {"sup", "mean", "argmax_family"});
        require(e["sup"].is_number() && e["mean"].is_number(), "errors.sup/mean must be numbers");
        require(e["sup"].get<double>() >= 0.0 && e["mean"].get<double>() >= 0.0,
                "relative errors must be nonnegative");
    }
    if (r.contains("beta")) {
        const auto& b = r["beta"];
        check_keys(b, "beta.", {"value", "mode", "opt_k", "opt_k_minus_1", "note"},
                   {"value", "mode"});
        require(is_number_or_sentinel(b["value"]), "beta.value must be a number or \"inf\"");
        require(b["mode"] == "exact" || b["mode"] == "heuristic", "beta.mode must be exact|heuristic");
    }
    if (r.contains("weight_bounds")) {
        const auto& w = r["weight_bounds"];
        check_keys(w, "weight_bounds.", {"checked", "violations"}, {"checked", "violations"});
        require(w["violations"].is_array(), "weight_bounds.violations must be an array");
    }
}

void write_report(const fs::path& path, const json& report) {
    validate_report(report);
    write_text(path, report.dump(2) + "\n");
}

std::string format_error_table(const ErrorTable& table) {
    std::string out = "m,trial,algorithm,family,sup_rel_error,mean_rel_error,evente_pass,wall_time_s\n";
    for (const auto& r : table) {
        out += std::to_string(r.m) + ',' + std::to_string(r.trial) + ',' +
               std::string(to_string(r.algorithm)) + ',' + std::string(to_string(r.family)) + ',' +
               format_double(r.sup_rel_error) + ',' + format_double(r.mean_rel_error) + ',' +
               (r.evente_pass ? "1" : "0") + ',' + format_double(r.wall_time_s) + '\n';
    }
    return out;
}

void write_error_table(const fs::path& path, const ErrorTable& table) {
    write_text(path, format_error_table(table));
}

}  // namespace coreset_lab
