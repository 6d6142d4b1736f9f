#include "webclust/features.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "webclust/parallel.hpp"

namespace webclust {

namespace {

double log2_safe(double p) { return p > 0.0 ? std::log2(p) : 0.0; }

// Entropy of a label sample given as id -> count.
double entropy_of_counts(const std::map<int, std::size_t>& counts, std::size_t total) {
    if (total == 0) return 0.0;
    double h = 0.0;
    for (const auto& [id, c] : counts) {
        double p = static_cast<double>(c) / static_cast<double>(total);
        h -= p * log2_safe(p);
    }
    return h;
}

}  // namespace

const char* to_string(WeightMethod method) {
    switch (method) {
        case WeightMethod::Uniform: return "uniform";
        case WeightMethod::InfoGain: return "info_gain";
        case WeightMethod::GainRatio: return "gain_ratio";
    }
    throw std::invalid_argument("to_string: bad WeightMethod");
}

WeightMethod weight_method_from_string(const std::string& name) {
    if (name == "uniform") return WeightMethod::Uniform;
    if (name == "info_gain") return WeightMethod::InfoGain;
    if (name == "gain_ratio") return WeightMethod::GainRatio;
    throw std::invalid_argument("unknown weight method '" + name + "'");
}

FeatureWeights FeatureWeights::uniform(std::size_t dim) {
    FeatureWeights w;
    w.values.assign(dim, 1.0);
    return w;
}

LabelAssignment LabelAssignment::from_labels(std::vector<int> labels) {
    LabelAssignment a;
    a.classes = labels;
    std::sort(a.classes.begin(), a.classes.end());
    a.classes.erase(std::unique(a.classes.begin(), a.classes.end()), a.classes.end());
    a.labels = std::move(labels);
    return a;
}

PageSet distinct_pages(const Session& s) {
    PageSet pages = s.visits;
    std::sort(pages.begin(), pages.end());
    pages.erase(std::unique(pages.begin(), pages.end()), pages.end());
    return pages;
}

FeatureVector frequency_vector(const Session& s, std::size_t num_categories, bool normalized) {
    FeatureVector v(num_categories, 0.0);
    for (CategoryCode code : s.visits) {
        if (code < 1 || code > num_categories)
            throw std::invalid_argument("frequency_vector: code " + std::to_string(code) +
                                        " outside 1.." + std::to_string(num_categories));
        v[code - 1] += 1.0;
    }
    if (normalized && !s.visits.empty()) {
        double len = static_cast<double>(s.visits.size());
        for (double& x : v) x /= len;
    }
    return v;
}

FeatureMatrix frequency_matrix(const SessionDataset& data, bool normalized) {
    FeatureMatrix m;
    m.reserve(data.sessions.size());
    for (const auto& s : data.sessions)
        m.push_back(frequency_vector(s, data.dictionary.size(), normalized));
    return m;
}

double entropy(std::span<const double> dist) {
    double sum = 0.0;
    for (double p : dist) {
        if (p < 0.0) throw std::invalid_argument("entropy: negative probability");
        sum += p;
    }
    if (!dist.empty() && std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("entropy: distribution sums to " + std::to_string(sum));
    double h = 0.0;
    for (double p : dist) h -= p * log2_safe(p);
    return h < 0.0 ? 0.0 : h;  // -0.0 from rounding
}

double information_gain(std::span<const int> feature_values, std::span<const int> labels) {
    if (feature_values.size() != labels.size())
        throw std::invalid_argument("information_gain: size mismatch");
    if (feature_values.empty())
        throw std::invalid_argument("information_gain: empty sample");

    std::size_t n = labels.size();
    std::map<int, std::size_t> label_counts;
    for (int l : labels) ++label_counts[l];
    double h_labels = entropy_of_counts(label_counts, n);

    // Per feature value: subsample size and its label distribution.
    std::map<int, std::map<int, std::size_t>> by_value;
    for (std::size_t i = 0; i < n; ++i) ++by_value[feature_values[i]][labels[i]];

    double conditional = 0.0;
    for (const auto& [value, counts] : by_value) {
        std::size_t subtotal = 0;
        for (const auto& [id, c] : counts) subtotal += c;
        double weight = static_cast<double>(subtotal) / static_cast<double>(n);
        conditional += weight * entropy_of_counts(counts, subtotal);
    }
    return std::clamp(h_labels - conditional, 0.0, h_labels);
}

double split_info(std::span<const int> feature_values) {
    if (feature_values.empty()) throw std::invalid_argument("split_info: empty sample");
    std::map<int, std::size_t> counts;
    for (int v : feature_values) ++counts[v];
    return entropy_of_counts(counts, feature_values.size());
}

double gain_ratio(std::span<const int> feature_values, std::span<const int> labels) {
    double si = split_info(feature_values);
    if (si == 0.0) return 0.0;
    return std::clamp(information_gain(feature_values, labels) / si, 0.0, 1.0);
}

std::size_t default_bin_count(std::size_t n) {
    if (n == 0) throw std::invalid_argument("default_bin_count: n must be positive");
    // ceil(log2 n) + 1 == bit_width(n - 1) + 1, with the n == 1 case landing on 1.
    return static_cast<std::size_t>(std::bit_width(n - 1)) + 1;
}

std::vector<int> discretize_column(std::span<const double> column, std::size_t num_bins) {
    if (num_bins == 0) throw std::invalid_argument("discretize_column: need at least one bin");
    std::vector<int> bins(column.size(), 0);
    if (column.empty()) return bins;
    auto [lo_it, hi_it] = std::minmax_element(column.begin(), column.end());
    double lo = *lo_it, hi = *hi_it;
    if (lo == hi) return bins;  // constant column
    double width = (hi - lo) / static_cast<double>(num_bins);
    for (std::size_t i = 0; i < column.size(); ++i) {
        auto b = static_cast<std::size_t>((column[i] - lo) / width);
        bins[i] = static_cast<int>(std::min(b, num_bins - 1));  // max lands in the top bin
    }
    return bins;
}

FeatureWeights compute_feature_weights(const FeatureMatrix& features,
                                       const LabelAssignment& labels,
                                       WeightMethod method,
                                       unsigned threads) {
    if (features.empty())
        throw std::invalid_argument("compute_feature_weights: empty feature matrix");
    std::size_t n = features.size();
    std::size_t dim = features.front().size();
    for (const auto& row : features)
        if (row.size() != dim)
            throw std::invalid_argument("compute_feature_weights: ragged feature matrix");
    if (method == WeightMethod::Uniform) return FeatureWeights::uniform(dim);
    if (labels.labels.size() != n)
        throw std::invalid_argument("compute_feature_weights: label count mismatch");

    FeatureWeights w;
    w.method = method;
    w.values.assign(dim, 0.0);
    std::size_t num_bins = default_bin_count(n);
    std::span<const int> label_span(labels.labels);

    parallel_chunks(dim, resolve_threads(threads),
                    [&](std::size_t, std::size_t begin, std::size_t end) {
        std::vector<double> column(n);
        for (std::size_t col = begin; col < end; ++col) {
            for (std::size_t i = 0; i < n; ++i) column[i] = features[i][col];
            auto bins = discretize_column(column, num_bins);
            w.values[col] = method == WeightMethod::InfoGain
                                ? information_gain(bins, label_span)
                                : gain_ratio(bins, label_span);
        }
    });
    return w;
}

}  // namespace webclust
