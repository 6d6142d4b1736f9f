#pragma once

// JSON and CSV interchange for datasets, cluster sets, weights, FCM results
// and evaluation reports.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <json.hpp>

#include "webclust/eval.hpp"
#include "webclust/fcm.hpp"
#include "webclust/session.hpp"
#include "webclust/tolerance.hpp"

namespace webclust {

using ordered_json = nlohmann::ordered_json;

// Shortest round-trip decimal form.
std::string format_double(double v);

std::uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);  // "fnv1a64:<16 hex digits>"
std::string digest_file(const std::string& path);

ordered_json to_json(const DatasetStats& stats);
ordered_json to_json(const ClusterSet& cs);
ordered_json to_json(const ToleranceRelation& rel);
ordered_json to_json(const FeatureWeights& w);
ordered_json to_json(const EvalReport& report);
ordered_json to_json(const FcmResult& result, bool with_memberships);

ClusterSet cluster_set_from_json(const ordered_json& j);
ClusterSet cluster_set_from_csv(std::istream& in);

// Sniffs the format: a leading '{' means JSON, anything else CSV.
ClusterSet load_cluster_set(const std::string& path);

std::string stats_csv(const DatasetStats& stats);
std::string cluster_set_csv(const ClusterSet& cs);
std::string tolerance_csv(const ToleranceRelation& rel, const ClusterSet& merged);
std::string eval_csv(const EvalReport& report);
std::string similarity_matrix_csv(const SimilarityMatrix& sim);

}  // namespace webclust
