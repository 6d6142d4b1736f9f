#pragma once

// External cluster-validity metrics comparing a clustering against
// reference label classes: precision, recall, purity, inverse purity,
// pairwise F and the label-weighted max-F score.

#include <cstdint>
#include <vector>

#include "webclust/tolerance.hpp"

namespace webclust {

using ItemSet = std::vector<std::uint32_t>;

struct PairScore {
    std::size_t cluster = 0;  // index into the canonical cluster order
    std::size_t label = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f = 0.0;
};

struct EvalReport {
    double purity = 0.0;
    double inverse_purity = 0.0;
    double purity_f = 0.0;
    std::size_t n = 0;
    std::vector<PairScore> per_pair;  // filled only on request
};

double precision(const ItemSet& c, const ItemSet& l);
double recall(const ItemSet& c, const ItemSet& l);

// Harmonic mean of precision and recall; 0 when both are 0.
double f_pair(const ItemSet& c, const ItemSet& l);

// Both arguments must partition the same item universe; a mismatch raises
// ValidationError naming the offending ids.
double purity(const ClusterSet& clusters, const ClusterSet& labels);
double inverse_purity(const ClusterSet& clusters, const ClusterSet& labels);
double purity_f(const ClusterSet& clusters, const ClusterSet& labels);

EvalReport evaluate(const ClusterSet& clusters, const ClusterSet& labels,
                    bool with_pairs = false);

}  // namespace webclust
