#include "webclust/eval.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "webclust/errors.hpp"

namespace webclust {

namespace {

ItemSet sorted_unique(ItemSet s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

std::size_t intersection_size(const ItemSet& a, const ItemSet& b) {
    std::size_t count = 0, ia = 0, ib = 0;
    while (ia < a.size() && ib < b.size()) {
        if (a[ia] < b[ib]) ++ia;
        else if (b[ib] < a[ia]) ++ib;
        else { ++count; ++ia; ++ib; }
    }
    return count;
}

std::string join_ids(const std::vector<std::uint32_t>& ids) {
    std::string out;
    std::size_t shown = std::min<std::size_t>(ids.size(), 10);
    for (std::size_t i = 0; i < shown; ++i) {
        if (i) out += ' ';
        out += std::to_string(ids[i]);
    }
    if (ids.size() > shown)
        out += " and " + std::to_string(ids.size() - shown) + " more";
    return out;
}

// Sorted universe of a cluster set; rejects empty clusters and repeated ids.
std::vector<std::uint32_t> universe_of(const ClusterSet& cs, const char* side) {
    std::vector<std::uint32_t> ids;
    for (std::size_t c = 0; c < cs.clusters.size(); ++c) {
        if (cs.clusters[c].empty())
            throw ValidationError(std::string(side) + ": cluster " + std::to_string(c + 1) +
                                  " is empty");
        ids.insert(ids.end(), cs.clusters[c].begin(), cs.clusters[c].end());
    }
    std::sort(ids.begin(), ids.end());
    std::vector<std::uint32_t> dups;
    for (std::size_t i = 1; i < ids.size(); ++i)
        if (ids[i] == ids[i - 1] && (dups.empty() || dups.back() != ids[i]))
            dups.push_back(ids[i]);
    if (!dups.empty())
        throw ValidationError(std::string(side) + ": item ids assigned more than once: " +
                              join_ids(dups));
    return ids;
}

double f_of(double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }

}  // namespace

double precision(const ItemSet& c, const ItemSet& l) {
    ItemSet cs = sorted_unique(c), ls = sorted_unique(l);
    if (cs.empty()) throw std::invalid_argument("precision: empty cluster");
    return static_cast<double>(intersection_size(cs, ls)) / static_cast<double>(cs.size());
}

double recall(const ItemSet& c, const ItemSet& l) { return precision(l, c); }

double f_pair(const ItemSet& c, const ItemSet& l) {
    return f_of(precision(c, l), recall(c, l));
}

EvalReport evaluate(const ClusterSet& clusters, const ClusterSet& labels, bool with_pairs) {
    // Validate the inputs as given: canonicalize() drops empty clusters, and
    // an empty cluster in a partition file is malformed, not something to
    // repair silently. Raw positions make the error point at the user's file.
    auto cluster_ids = universe_of(clusters, "clusters");
    auto label_ids = universe_of(labels, "labels");

    ClusterSet cs = clusters, ls = labels;
    canonicalize(cs);
    canonicalize(ls);
    if (cluster_ids != label_ids) {
        std::vector<std::uint32_t> only_c, only_l;
        std::set_difference(cluster_ids.begin(), cluster_ids.end(), label_ids.begin(),
                            label_ids.end(), std::back_inserter(only_c));
        std::set_difference(label_ids.begin(), label_ids.end(), cluster_ids.begin(),
                            cluster_ids.end(), std::back_inserter(only_l));
        std::string msg = "cluster and label files cover different items:";
        if (!only_c.empty()) msg += " only in clusters: " + join_ids(only_c) + ";";
        if (!only_l.empty()) msg += " only in labels: " + join_ids(only_l) + ";";
        msg.pop_back();
        throw ValidationError(msg);
    }

    std::size_t n = cluster_ids.size();
    if (n == 0) throw ValidationError("evaluate: no items");

    std::unordered_map<std::uint32_t, std::size_t> label_of;
    label_of.reserve(n);
    for (std::size_t b = 0; b < ls.clusters.size(); ++b)
        for (std::uint32_t id : ls.clusters[b]) label_of[id] = b;

    // Sparse contingency counts keyed (cluster, label), in deterministic order.
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> overlap;
    for (std::size_t a = 0; a < cs.clusters.size(); ++a)
        for (std::uint32_t id : cs.clusters[a]) ++overlap[{a, label_of[id]}];

    std::vector<std::size_t> cluster_max(cs.clusters.size(), 0);
    std::vector<std::size_t> label_max(ls.clusters.size(), 0);
    std::vector<double> label_best_f(ls.clusters.size(), 0.0);

    EvalReport report;
    report.n = n;
    for (const auto& [key, count] : overlap) {
        auto [a, b] = key;
        cluster_max[a] = std::max(cluster_max[a], count);
        label_max[b] = std::max(label_max[b], count);
        double p = static_cast<double>(count) / static_cast<double>(cs.clusters[a].size());
        double r = static_cast<double>(count) / static_cast<double>(ls.clusters[b].size());
        double f = f_of(p, r);
        label_best_f[b] = std::max(label_best_f[b], f);
        if (with_pairs) report.per_pair.push_back({a, b, p, r, f});
    }

    double nd = static_cast<double>(n);
    for (std::size_t a = 0; a < cs.clusters.size(); ++a)
        report.purity += static_cast<double>(cluster_max[a]) / nd;
    for (std::size_t b = 0; b < ls.clusters.size(); ++b) {
        report.inverse_purity += static_cast<double>(label_max[b]) / nd;
        report.purity_f +=
            static_cast<double>(ls.clusters[b].size()) / nd * label_best_f[b];
    }
    return report;
}

double purity(const ClusterSet& clusters, const ClusterSet& labels) {
    return evaluate(clusters, labels).purity;
}

double inverse_purity(const ClusterSet& clusters, const ClusterSet& labels) {
    return evaluate(clusters, labels).inverse_purity;
}

double purity_f(const ClusterSet& clusters, const ClusterSet& labels) {
    return evaluate(clusters, labels).purity_f;
}

}  // namespace webclust
