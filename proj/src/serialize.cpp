#include "webclust/serialize.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>

#include "webclust/errors.hpp"

namespace webclust {

namespace {

std::string join_space(const std::vector<std::uint32_t>& ids) {
    std::string out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(ids[i]);
    }
    return out;
}

// item id -> 1-based ordinal of its cluster in canonical order.
std::map<std::uint32_t, std::size_t> cluster_ordinals(const ClusterSet& cs) {
    std::map<std::uint32_t, std::size_t> ord;
    for (std::size_t c = 0; c < cs.clusters.size(); ++c)
        for (std::uint32_t id : cs.clusters[c]) ord[id] = c + 1;
    return ord;
}

std::uint32_t parse_uint_field(std::string_view field, std::size_t line_no,
                               const char* what) {
    std::uint32_t value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size() || value == 0)
        throw ParseError(std::string(what) + " must be a positive integer, got '" +
                             std::string(field) + "'",
                         line_no);
    return value;
}

std::uint32_t json_positive_int(const ordered_json& v, const char* what) {
    if (!v.is_number_integer() && !v.is_number_unsigned())
        throw ParseError(std::string(what) + " must be a positive integer");
    auto n = v.get<std::int64_t>();
    if (n < 1 || n > std::int64_t{0xffffffff})
        throw ParseError(std::string(what) + " out of range: " + std::to_string(n));
    return static_cast<std::uint32_t>(n);
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t hash = 14695981039346656037ull;
    for (unsigned char b : bytes) {
        hash ^= b;
        hash *= 1099511628211ull;
    }
    return hash;
}

std::string fnv1a64_hex(std::string_view bytes) {
    std::uint64_t h = fnv1a64(bytes);
    char buf[17];
    for (int i = 15; i >= 0; --i) {
        buf[i] = "0123456789abcdef"[h & 0xf];
        h >>= 4;
    }
    buf[16] = '\0';
    return std::string("fnv1a64:") + buf;
}

std::string digest_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return fnv1a64_hex(buffer.str());
}

ordered_json to_json(const DatasetStats& stats) {
    return ordered_json{{"num_sessions", stats.num_sessions},
                        {"avg_visits", stats.avg_visits},
                        {"num_categories", stats.num_categories},
                        {"length_min", stats.length_min},
                        {"length_max", stats.length_max}};
}

ordered_json to_json(const ClusterSet& cs) {
    ordered_json j = ordered_json::object();
    if (cs.threshold) j["threshold"] = *cs.threshold;
    j["clusters"] = cs.clusters;
    return j;
}

ordered_json to_json(const ToleranceRelation& rel) {
    return ordered_json{{"threshold", rel.threshold}, {"classes", rel.classes}};
}

ordered_json to_json(const FeatureWeights& w) {
    return ordered_json{{"method", to_string(w.method)}, {"weights", w.values}};
}

ordered_json to_json(const EvalReport& report) {
    ordered_json j{{"purity", report.purity},
                   {"inverse_purity", report.inverse_purity},
                   {"purity_f", report.purity_f},
                   {"n", report.n}};
    if (!report.per_pair.empty()) {
        ordered_json pairs = ordered_json::array();
        for (const auto& p : report.per_pair)
            pairs.push_back(ordered_json{{"cluster", p.cluster + 1},
                                         {"label", p.label + 1},
                                         {"precision", p.precision},
                                         {"recall", p.recall},
                                         {"f", p.f}});
        j["pairs"] = std::move(pairs);
    }
    return j;
}

ordered_json to_json(const FcmResult& result, bool with_memberships) {
    ordered_json j = ordered_json::object();
    j["centers"] = result.centers;
    if (with_memberships) {
        ordered_json rows = ordered_json::array();
        for (std::size_t i = 0; i < result.memberships.rows; ++i) {
            ordered_json row = ordered_json::array();
            for (std::size_t k = 0; k < result.memberships.cols; ++k)
                row.push_back(result.memberships.at(i, k));
            rows.push_back(std::move(row));
        }
        j["memberships"] = std::move(rows);
    }
    j["iterations"] = result.iterations;
    j["converged"] = result.converged;
    j["objective_trace"] = result.objective_trace;
    return j;
}

ClusterSet cluster_set_from_json(const ordered_json& j) {
    ClusterSet cs;
    const ordered_json* clusters = nullptr;
    if (j.is_array()) {
        clusters = &j;
    } else if (j.is_object()) {
        if (!j.contains("clusters"))
            throw ParseError("cluster JSON object lacks a \"clusters\" key");
        clusters = &j.at("clusters");
        if (j.contains("threshold") && j.at("threshold").is_number())
            cs.threshold = j.at("threshold").get<double>();
    } else {
        throw ParseError("cluster JSON must be an object or an array of arrays");
    }
    if (!clusters->is_array())
        throw ParseError("\"clusters\" must be an array of arrays");
    for (const auto& group : *clusters) {
        if (!group.is_array())
            throw ParseError("each cluster must be an array of item ids");
        std::vector<std::uint32_t> members;
        for (const auto& id : group) members.push_back(json_positive_int(id, "item id"));
        cs.clusters.push_back(std::move(members));
    }
    canonicalize(cs);
    return cs;
}

ClusterSet cluster_set_from_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw ParseError("empty cluster CSV");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    // The bare assignment table and the tolerance report both carry an
    // (item, cluster) pair: in the latter it sits in columns 1 and 3.
    std::size_t columns = 0;
    if (line == "item_id,cluster_id") columns = 2;
    else if (line == "item_id,tolerance_class,cluster_id") columns = 3;
    else
        throw ParseError("expected header 'item_id,cluster_id' or "
                         "'item_id,tolerance_class,cluster_id', got '" + line + "'",
                         line_no);

    std::map<std::uint32_t, std::vector<std::uint32_t>> by_cluster;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string_view> fields;
        std::string_view rest = line;
        while (true) {
            auto comma = rest.find(',');
            if (comma == std::string_view::npos) {
                fields.push_back(rest);
                break;
            }
            fields.push_back(rest.substr(0, comma));
            rest.remove_prefix(comma + 1);
        }
        if (fields.size() != columns)
            throw ParseError("expected " + std::to_string(columns) + " fields, got " +
                                 std::to_string(fields.size()),
                             line_no);
        std::uint32_t item = parse_uint_field(fields.front(), line_no, "item id");
        std::uint32_t cluster = parse_uint_field(fields.back(), line_no, "cluster id");
        by_cluster[cluster].push_back(item);
    }

    ClusterSet cs;
    for (auto& [id, members] : by_cluster) cs.clusters.push_back(std::move(members));
    canonicalize(cs);
    return cs;
}

ClusterSet load_cluster_set(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    std::string text = buffer.str();

    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && (text[first] == '{' || text[first] == '[')) {
        ordered_json j;
        try {
            j = ordered_json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(std::string("bad cluster JSON: ") + e.what());
        }
        return cluster_set_from_json(j);
    }
    std::istringstream csv(text);
    return cluster_set_from_csv(csv);
}

std::string stats_csv(const DatasetStats& stats) {
    std::string out = "num_sessions,avg_visits,num_categories,length_min,length_max\n";
    out += std::to_string(stats.num_sessions) + ',' + format_double(stats.avg_visits) + ',' +
           std::to_string(stats.num_categories) + ',' + std::to_string(stats.length_min) +
           ',' + std::to_string(stats.length_max) + '\n';
    return out;
}

std::string cluster_set_csv(const ClusterSet& cs) {
    std::string out = "item_id,cluster_id\n";
    for (const auto& [item, ordinal] : cluster_ordinals(cs))
        out += std::to_string(item) + ',' + std::to_string(ordinal) + '\n';
    return out;
}

std::string tolerance_csv(const ToleranceRelation& rel, const ClusterSet& merged) {
    auto ordinals = cluster_ordinals(merged);
    std::string out = "item_id,tolerance_class,cluster_id\n";
    for (std::size_t i = 0; i < rel.classes.size(); ++i) {
        std::uint32_t item = static_cast<std::uint32_t>(i + 1);
        out += std::to_string(item) + ',' + join_space(rel.classes[i]) + ',' +
               std::to_string(ordinals.at(item)) + '\n';
    }
    return out;
}

std::string eval_csv(const EvalReport& report) {
    std::string out = "purity,inverse_purity,purity_f,n\n";
    out += format_double(report.purity) + ',' + format_double(report.inverse_purity) + ',' +
           format_double(report.purity_f) + ',' + std::to_string(report.n) + '\n';
    return out;
}

std::string similarity_matrix_csv(const SimilarityMatrix& sim) {
    std::string out = "i,j,similarity\n";
    for (std::size_t i = 0; i < sim.size(); ++i)
        for (std::size_t j = i + 1; j < sim.size(); ++j)
            out += std::to_string(i + 1) + ',' + std::to_string(j + 1) + ',' +
                   format_double(sim.at(i, j)) + '\n';
    return out;
}

}  // namespace webclust
