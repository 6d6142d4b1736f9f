#pragma once

// Fuzzy c-means with entropy-driven center initialization (which also fixes
// the number of centers), feature-weighted distances, and alpha-thresholded
// center recomputation.

#include <cstdint>
#include <vector>

#include "webclust/features.hpp"
#include "webclust/tolerance.hpp"

namespace webclust {

struct FcmConfig {
    double alpha = 0.5;        // membership threshold for center updates, [0,1]
    double fuzzifier = 2.0;    // m > 1
    std::size_t max_iter = 300;
    double epsilon = 1e-6;     // convergence bound on max center displacement
    std::uint64_t seed = 42;   // echoed in reports; all tie-breaks are index-based
    double init_beta = 0.5;    // entropy-init removal threshold, (0,1)
    FeatureWeights weights;    // empty means uniform

    void validate(std::size_t dim) const;
};

using Centers = FeatureMatrix;

struct MembershipMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;  // row-major; every row sums to 1

    double at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
    double& at(std::size_t i, std::size_t j) { return values[i * cols + j]; }
};

struct FcmResult {
    Centers centers;
    MembershipMatrix memberships;
    std::size_t iterations = 0;
    bool converged = false;
    std::vector<double> objective_trace;  // one entry per iteration
};

// Repeatedly pick the point with the lowest total similarity entropy as a
// center and drop everything with similarity >= beta to it. Similarity is
// 1 - d/d_max with d_max fixed over the whole input, so "beta-similar"
// always means the same thing no matter which points remain. Every returned
// center is an input point; the center count is a result, not a parameter.
Centers entropy_init(const FeatureMatrix& points, double beta,
                     const FeatureWeights& weights = {}, unsigned threads = 1);

// sqrt(sum_i w_i * (x_i - c_i)^2); empty weights mean all ones.
double weighted_distance(const FeatureVector& x, const FeatureVector& c,
                         const FeatureWeights& w);

// Standard fuzzy membership update. A point at distance zero from one or
// more centers splits its mass uniformly over those centers.
MembershipMatrix update_memberships(const FeatureMatrix& points, const Centers& centers,
                                    double fuzzifier, const FeatureWeights& w,
                                    unsigned threads = 1);

// New center k is the plain mean of the points whose maximal membership is
// attained at k with value >= alpha; clusters that attract no such point
// keep their previous center.
Centers update_centers_thresholded(const FeatureMatrix& points, const MembershipMatrix& u,
                                   const Centers& previous, double alpha);

double fcm_objective(const FeatureMatrix& points, const Centers& centers,
                     const MembershipMatrix& u, double fuzzifier, const FeatureWeights& w);

FcmResult run_fcm(const FeatureMatrix& points, const FcmConfig& config, unsigned threads = 1);

// Argmax assignment, ties toward the lowest cluster index; empty clusters
// are dropped. Items are keyed 1..n in row order.
ClusterSet harden(const MembershipMatrix& u);

}  // namespace webclust
