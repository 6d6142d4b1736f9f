#pragma once

// Threshold-based similarity clustering: pairwise Jaccard similarity on
// distinct-page sets, per-item tolerance classes R(i) at threshold p, and
// merging of overlapping classes into a stable partition (the connected
// components of the threshold graph).

#include <cstdint>
#include <optional>
#include <vector>

#include "webclust/features.hpp"

namespace webclust {

// Symmetric n x n similarity with unit diagonal; the strict upper triangle
// is stored row-major.
class SimilarityMatrix {
public:
    explicit SimilarityMatrix(std::size_t n);

    std::size_t size() const noexcept { return n_; }
    double at(std::size_t i, std::size_t j) const;
    void set(std::size_t i, std::size_t j, double value);  // i != j

private:
    std::size_t index(std::size_t i, std::size_t j) const;  // requires i < j

    std::size_t n_;
    std::vector<double> upper_;
};

struct ToleranceRelation {
    double threshold = 0.5;
    // classes[i] holds the 1-based ids j with sim(i+1, j) >= threshold,
    // ascending; always contains i+1 itself.
    std::vector<std::vector<std::uint32_t>> classes;
};

// Disjoint non-empty clusters of 1-based item ids covering all items.
// Canonical order: members ascending, clusters by smallest member.
struct ClusterSet {
    std::vector<std::vector<std::uint32_t>> clusters;
    std::optional<double> threshold;
};

void canonicalize(ClusterSet& cs);

// |a & b| / |a | b| on sorted duplicate-free sets; both must be non-empty.
double jaccard_similarity(const PageSet& a, const PageSet& b);

std::vector<PageSet> page_sets(const SessionDataset& data);

SimilarityMatrix similarity_matrix(const std::vector<PageSet>& sets, unsigned threads = 1);
SimilarityMatrix similarity_matrix(const SessionDataset& data, unsigned threads = 1);

ToleranceRelation upper_approximation(const SimilarityMatrix& sim, double p);

// Streaming variant; similarities are computed on the fly and the matrix
// is never materialized.
ToleranceRelation upper_approximation(const std::vector<PageSet>& sets, double p,
                                      unsigned threads = 1);

// Finest partition in which items with overlapping tolerance classes share
// a cluster; idempotent.
ClusterSet merge_tolerance_classes(const ToleranceRelation& rel);

// Streaming merge over threshold edges, O(n) memory beyond the page sets.
ClusterSet tolerance_components(const std::vector<PageSet>& sets, double p,
                                unsigned threads = 1);

}  // namespace webclust
