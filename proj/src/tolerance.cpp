#include "webclust/tolerance.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "webclust/parallel.hpp"

namespace webclust {

namespace {

void check_threshold(double p) {
    if (!(p > 0.0 && p <= 1.0))
        throw std::invalid_argument("threshold p must lie in (0,1], got " + std::to_string(p));
}

// Disjoint-set forest with path halving and union by size.
class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> size_;
};

// Components of a union-find over items 0..n-1, as a canonical ClusterSet.
ClusterSet components(UnionFind& uf, std::size_t n, double threshold) {
    ClusterSet cs;
    cs.threshold = threshold;
    std::vector<std::size_t> cluster_of(n, static_cast<std::size_t>(-1));
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t root = uf.find(i);
        if (cluster_of[root] == static_cast<std::size_t>(-1)) {
            cluster_of[root] = cs.clusters.size();
            cs.clusters.emplace_back();
        }
        cs.clusters[cluster_of[root]].push_back(static_cast<std::uint32_t>(i + 1));
    }
    // Items were visited in ascending order, so members are sorted and the
    // clusters already run by smallest member.
    return cs;
}

}  // namespace

SimilarityMatrix::SimilarityMatrix(std::size_t n)
    : n_(n), upper_(n < 2 ? 0 : n * (n - 1) / 2, 0.0) {}

std::size_t SimilarityMatrix::index(std::size_t i, std::size_t j) const {
    return i * (n_ - 1) - i * (i - 1) / 2 + (j - i - 1);
}

double SimilarityMatrix::at(std::size_t i, std::size_t j) const {
    if (i >= n_ || j >= n_) throw std::out_of_range("SimilarityMatrix::at");
    if (i == j) return 1.0;
    if (i > j) std::swap(i, j);
    return upper_[index(i, j)];
}

void SimilarityMatrix::set(std::size_t i, std::size_t j, double value) {
    if (i >= n_ || j >= n_) throw std::out_of_range("SimilarityMatrix::set");
    if (i == j) throw std::invalid_argument("SimilarityMatrix::set: diagonal is fixed at 1");
    if (i > j) std::swap(i, j);
    upper_[index(i, j)] = value;
}

void canonicalize(ClusterSet& cs) {
    for (auto& c : cs.clusters) std::sort(c.begin(), c.end());
    std::erase_if(cs.clusters, [](const auto& c) { return c.empty(); });
    std::sort(cs.clusters.begin(), cs.clusters.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
}

double jaccard_similarity(const PageSet& a, const PageSet& b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("jaccard_similarity: empty page set");
    std::size_t inter = 0, ia = 0, ib = 0;
    while (ia < a.size() && ib < b.size()) {
        if (a[ia] < b[ib]) ++ia;
        else if (b[ib] < a[ia]) ++ib;
        else { ++inter; ++ia; ++ib; }
    }
    return static_cast<double>(inter) /
           static_cast<double>(a.size() + b.size() - inter);
}

std::vector<PageSet> page_sets(const SessionDataset& data) {
    std::vector<PageSet> sets;
    sets.reserve(data.sessions.size());
    for (const auto& s : data.sessions) sets.push_back(distinct_pages(s));
    return sets;
}

SimilarityMatrix similarity_matrix(const std::vector<PageSet>& sets, unsigned threads) {
    std::size_t n = sets.size();
    SimilarityMatrix sim(n);
    if (n < 2) return sim;
    // Each row's slots are written by exactly one thread.
    parallel_chunks(n - 1, resolve_threads(threads),
                    [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                sim.set(i, j, jaccard_similarity(sets[i], sets[j]));
    });
    return sim;
}

SimilarityMatrix similarity_matrix(const SessionDataset& data, unsigned threads) {
    return similarity_matrix(page_sets(data), threads);
}

ToleranceRelation upper_approximation(const SimilarityMatrix& sim, double p) {
    check_threshold(p);
    std::size_t n = sim.size();
    ToleranceRelation rel;
    rel.threshold = p;
    rel.classes.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            if (i == j || sim.at(i, j) >= p)
                rel.classes[i].push_back(static_cast<std::uint32_t>(j + 1));
    }
    return rel;
}

ToleranceRelation upper_approximation(const std::vector<PageSet>& sets, double p,
                                      unsigned threads) {
    check_threshold(p);
    std::size_t n = sets.size();
    ToleranceRelation rel;
    rel.threshold = p;
    rel.classes.resize(n);
    parallel_chunks(n, resolve_threads(threads),
                    [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i == j || jaccard_similarity(sets[i], sets[j]) >= p)
                    rel.classes[i].push_back(static_cast<std::uint32_t>(j + 1));
    });
    return rel;
}

ClusterSet merge_tolerance_classes(const ToleranceRelation& rel) {
    std::size_t n = rel.classes.size();
    UnionFind uf(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::uint32_t id : rel.classes[i]) {
            if (id < 1 || id > n)
                throw std::invalid_argument("merge_tolerance_classes: id " +
                                            std::to_string(id) + " outside 1.." +
                                            std::to_string(n));
            uf.unite(i, id - 1);
        }
    }
    return components(uf, n, rel.threshold);
}

ClusterSet tolerance_components(const std::vector<PageSet>& sets, double p,
                                unsigned threads) {
    check_threshold(p);
    std::size_t n = sets.size();
    UnionFind uf(n);
    if (n < 2) return components(uf, n, p);

    // Rows are processed in fixed-size blocks: neighbor lists for a block are
    // filled in parallel (disjoint slots), then folded into the union-find
    // sequentially, keeping memory at O(block) rows instead of O(n^2) edges.
    constexpr std::size_t kBlock = 256;
    std::vector<std::vector<std::uint32_t>> neighbors(kBlock);
    for (std::size_t base = 0; base + 1 < n; base += kBlock) {
        std::size_t rows = std::min(kBlock, n - 1 - base);
        parallel_chunks(rows, resolve_threads(threads),
                        [&](std::size_t, std::size_t begin, std::size_t end) {
            for (std::size_t r = begin; r < end; ++r) {
                std::size_t i = base + r;
                neighbors[r].clear();
                for (std::size_t j = i + 1; j < n; ++j)
                    if (jaccard_similarity(sets[i], sets[j]) >= p)
                        neighbors[r].push_back(static_cast<std::uint32_t>(j));
            }
        });
        for (std::size_t r = 0; r < rows; ++r)
            for (std::uint32_t j : neighbors[r]) uf.unite(base + r, j);
    }
    return components(uf, n, p);
}

}  // namespace webclust
