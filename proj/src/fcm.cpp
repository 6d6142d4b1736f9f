#include "webclust/fcm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "webclust/parallel.hpp"

namespace webclust {

namespace {

void check_points(const FeatureMatrix& points, const char* where) {
    if (points.empty()) throw std::invalid_argument(std::string(where) + ": no points");
    std::size_t dim = points.front().size();
    if (dim == 0) throw std::invalid_argument(std::string(where) + ": zero-dimensional points");
    for (const auto& row : points)
        if (row.size() != dim)
            throw std::invalid_argument(std::string(where) + ": ragged point matrix");
}

void check_weights(const FeatureWeights& w, std::size_t dim, const char* where) {
    if (w.values.empty()) return;
    if (w.values.size() != dim)
        throw std::invalid_argument(std::string(where) + ": " + std::to_string(w.values.size()) +
                                    " weights for " + std::to_string(dim) + " features");
    for (double v : w.values)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument(std::string(where) + ": weights must be finite and >= 0");
}

double weighted_sq_distance(const FeatureVector& x, const FeatureVector& c,
                            const std::vector<double>& w) {
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double d = x[i] - c[i];
        sum += (w.empty() ? 1.0 : w[i]) * d * d;
    }
    return sum;
}

double binary_entropy(double s) {
    double h = 0.0;
    if (s > 0.0) h -= s * std::log2(s);
    if (s < 1.0) h -= (1.0 - s) * std::log2(1.0 - s);
    return h;
}

}  // namespace

void FcmConfig::validate(std::size_t dim) const {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("alpha must lie in [0,1], got " + std::to_string(alpha));
    if (!(fuzzifier > 1.0))
        throw std::invalid_argument("fuzzifier m must exceed 1, got " + std::to_string(fuzzifier));
    if (max_iter == 0) throw std::invalid_argument("max_iter must be positive");
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw std::invalid_argument("epsilon must be positive and finite");
    if (!(init_beta > 0.0 && init_beta < 1.0))
        throw std::invalid_argument("init beta must lie in (0,1), got " + std::to_string(init_beta));
    check_weights(weights, dim, "FcmConfig");
}

Centers entropy_init(const FeatureMatrix& points, double beta,
                     const FeatureWeights& weights, unsigned threads) {
    check_points(points, "entropy_init");
    check_weights(weights, points.front().size(), "entropy_init");
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("entropy_init: beta must lie in (0,1)");

    unsigned nthreads = resolve_threads(threads);
    std::size_t n = points.size();

    // The distance scale is fixed once over the whole input. Later rounds
    // restrict the entropy sums and the removals to the remaining points but
    // keep judging similarity against this global scale; rescaling to each
    // round's survivors would zoom into whatever group is left and carve it
    // up indefinitely, one center per round.
    std::vector<double> chunk_max(nthreads, 0.0);
    parallel_chunks(n, nthreads, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        double local = 0.0;
        for (std::size_t a = begin; a < end; ++a)
            for (std::size_t b = a + 1; b < n; ++b)
                local = std::max(local,
                                 weighted_sq_distance(points[a], points[b], weights.values));
        chunk_max[chunk] = local;
    });
    double d_max = std::sqrt(*std::max_element(chunk_max.begin(), chunk_max.end()));

    if (d_max == 0.0) {
        // Every point coincides (or there is only one): a single center
        // covers the whole input.
        return {points[0]};
    }

    std::vector<std::size_t> remaining(n);
    std::iota(remaining.begin(), remaining.end(), std::size_t{0});
    Centers centers;

    while (!remaining.empty()) {
        std::size_t r = remaining.size();
        if (r == 1) {
            centers.push_back(points[remaining[0]]);
            break;
        }

        // Total similarity entropy of each remaining point.
        std::vector<double> total_entropy(r, 0.0);
        parallel_chunks(r, nthreads, [&](std::size_t, std::size_t begin, std::size_t end) {
            for (std::size_t a = begin; a < end; ++a) {
                double e = 0.0;
                for (std::size_t b = 0; b < r; ++b) {
                    if (b == a) continue;
                    double d = std::sqrt(weighted_sq_distance(points[remaining[a]],
                                                              points[remaining[b]],
                                                              weights.values));
                    e += binary_entropy(1.0 - d / d_max);
                }
                total_entropy[a] = e;
            }
        });
        std::size_t best = 0;
        for (std::size_t a = 1; a < r; ++a)
            if (total_entropy[a] < total_entropy[best]) best = a;
        centers.push_back(points[remaining[best]]);

        // Drop everything at least beta-similar to the new center (the
        // center itself has similarity 1).
        std::vector<std::size_t> kept;
        for (std::size_t b = 0; b < r; ++b) {
            double d = std::sqrt(weighted_sq_distance(points[remaining[best]],
                                                      points[remaining[b]],
                                                      weights.values));
            if (1.0 - d / d_max < beta) kept.push_back(remaining[b]);
        }
        remaining = std::move(kept);
    }
    return centers;
}

double weighted_distance(const FeatureVector& x, const FeatureVector& c,
                         const FeatureWeights& w) {
    if (x.size() != c.size())
        throw std::invalid_argument("weighted_distance: dimension mismatch");
    if (!w.values.empty() && w.values.size() != x.size())
        throw std::invalid_argument("weighted_distance: weight dimension mismatch");
    return std::sqrt(weighted_sq_distance(x, c, w.values));
}

MembershipMatrix update_memberships(const FeatureMatrix& points, const Centers& centers,
                                    double fuzzifier, const FeatureWeights& w,
                                    unsigned threads) {
    check_points(points, "update_memberships");
    if (centers.empty()) throw std::invalid_argument("update_memberships: no centers");
    check_weights(w, points.front().size(), "update_memberships");
    if (!(fuzzifier > 1.0))
        throw std::invalid_argument("update_memberships: fuzzifier must exceed 1");

    std::size_t n = points.size(), k = centers.size();
    double exponent = 2.0 / (fuzzifier - 1.0);
    MembershipMatrix u;
    u.rows = n;
    u.cols = k;
    u.values.assign(n * k, 0.0);

    parallel_chunks(n, resolve_threads(threads),
                    [&](std::size_t, std::size_t begin, std::size_t end) {
        std::vector<double> dist(k);
        for (std::size_t i = begin; i < end; ++i) {
            std::size_t zeros = 0;
            for (std::size_t j = 0; j < k; ++j) {
                dist[j] = weighted_distance(points[i], centers[j], w);
                if (dist[j] == 0.0) ++zeros;
            }
            if (zeros > 0) {
                // Coincides with one or more centers: split evenly among them.
                double share = 1.0 / static_cast<double>(zeros);
                for (std::size_t j = 0; j < k; ++j)
                    u.at(i, j) = dist[j] == 0.0 ? share : 0.0;
                continue;
            }
            for (std::size_t j = 0; j < k; ++j) {
                double denom = 0.0;
                for (std::size_t l = 0; l < k; ++l)
                    denom += std::pow(dist[j] / dist[l], exponent);
                u.at(i, j) = 1.0 / denom;
            }
        }
    });
    return u;
}

Centers update_centers_thresholded(const FeatureMatrix& points, const MembershipMatrix& u,
                                   const Centers& previous, double alpha) {
    check_points(points, "update_centers_thresholded");
    std::size_t n = points.size(), k = previous.size(), dim = points.front().size();
    if (u.rows != n || u.cols != k)
        throw std::invalid_argument("update_centers_thresholded: membership shape mismatch");
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("update_centers_thresholded: alpha must lie in [0,1]");

    FeatureMatrix sums(k, FeatureVector(dim, 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t jmax = 0;
        for (std::size_t j = 1; j < k; ++j)
            if (u.at(i, j) > u.at(i, jmax)) jmax = j;
        if (u.at(i, jmax) >= alpha) {
            for (std::size_t d = 0; d < dim; ++d) sums[jmax][d] += points[i][d];
            ++counts[jmax];
        }
    }

    Centers next(k);
    for (std::size_t j = 0; j < k; ++j) {
        if (counts[j] == 0) {
            next[j] = previous[j];  // nothing crossed the threshold; keep the old center
            continue;
        }
        next[j].resize(dim);
        for (std::size_t d = 0; d < dim; ++d)
            next[j][d] = sums[j][d] / static_cast<double>(counts[j]);
    }
    return next;
}

double fcm_objective(const FeatureMatrix& points, const Centers& centers,
                     const MembershipMatrix& u, double fuzzifier, const FeatureWeights& w) {
    double j_total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = 0; j < centers.size(); ++j)
            j_total += std::pow(u.at(i, j), fuzzifier) *
                       weighted_sq_distance(points[i], centers[j], w.values);
    return j_total;
}

FcmResult run_fcm(const FeatureMatrix& points, const FcmConfig& config, unsigned threads) {
    check_points(points, "run_fcm");
    config.validate(points.front().size());

    FcmResult result;
    result.centers = entropy_init(points, config.init_beta, config.weights, threads);

    for (std::size_t iter = 1; iter <= config.max_iter; ++iter) {
        MembershipMatrix u =
            update_memberships(points, result.centers, config.fuzzifier, config.weights, threads);
        Centers next =
            update_centers_thresholded(points, u, result.centers, config.alpha);
        result.objective_trace.push_back(
            fcm_objective(points, next, u, config.fuzzifier, config.weights));

        double displacement = 0.0;
        for (std::size_t j = 0; j < next.size(); ++j)
            displacement = std::max(displacement,
                                    weighted_distance(result.centers[j], next[j], config.weights));
        result.centers = std::move(next);
        result.iterations = iter;
        if (displacement < config.epsilon) {
            result.converged = true;
            break;
        }
    }

    // Final memberships are always consistent with the returned centers.
    result.memberships =
        update_memberships(points, result.centers, config.fuzzifier, config.weights, threads);
    return result;
}

ClusterSet harden(const MembershipMatrix& u) {
    ClusterSet cs;
    cs.clusters.resize(u.cols);
    for (std::size_t i = 0; i < u.rows; ++i) {
        std::size_t jmax = 0;
        for (std::size_t j = 1; j < u.cols; ++j)
            if (u.at(i, j) > u.at(i, jmax)) jmax = j;
        cs.clusters[jmax].push_back(static_cast<std::uint32_t>(i + 1));
    }
    canonicalize(cs);
    return cs;
}

}  // namespace webclust
