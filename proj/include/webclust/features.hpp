#pragma once

// Feature representations of sessions plus entropy, information-gain,
// split-info and gain-ratio feature weighting. All logarithms are base 2.

#include <span>
#include <string>
#include <vector>

#include "webclust/session.hpp"

namespace webclust {

using PageSet = std::vector<CategoryCode>;  // sorted, duplicate-free
using FeatureVector = std::vector<double>;
using FeatureMatrix = std::vector<FeatureVector>;  // one row per item

enum class WeightMethod { Uniform, InfoGain, GainRatio };

const char* to_string(WeightMethod method);
WeightMethod weight_method_from_string(const std::string& name);

struct FeatureWeights {
    WeightMethod method = WeightMethod::Uniform;
    std::vector<double> values;  // empty means uniform

    static FeatureWeights uniform(std::size_t dim);
};

struct LabelAssignment {
    std::vector<int> labels;   // one class id per item
    std::vector<int> classes;  // distinct class ids, ascending

    static LabelAssignment from_labels(std::vector<int> labels);
};

PageSet distinct_pages(const Session& s);

// Component c-1 counts occurrences of code c; normalized divides by length.
FeatureVector frequency_vector(const Session& s, std::size_t num_categories, bool normalized);
FeatureMatrix frequency_matrix(const SessionDataset& data, bool normalized);

// H = -sum p*log2(p), with 0*log2(0) = 0. dist must be non-negative and
// sum to 1 within 1e-9.
double entropy(std::span<const double> dist);

// H(labels) minus the expected conditional entropy given the feature value.
// Clamped to [0, H(labels)].
double information_gain(std::span<const int> feature_values, std::span<const int> labels);

// Entropy of the feature-value distribution itself.
double split_info(std::span<const int> feature_values);

// information_gain / split_info, 0 when split_info is 0. Clamped to [0,1].
double gain_ratio(std::span<const int> feature_values, std::span<const int> labels);

// ceil(log2 n) + 1, the bin count used when discretizing a real column.
std::size_t default_bin_count(std::size_t n);

// Equal-width binning over [min, max]; constant columns map to bin 0.
std::vector<int> discretize_column(std::span<const double> column, std::size_t num_bins);

// One weight per column. Columns are discretized with default_bin_count
// bins first; the uniform method ignores labels.
FeatureWeights compute_feature_weights(const FeatureMatrix& features,
                                       const LabelAssignment& labels,
                                       WeightMethod method,
                                       unsigned threads = 1);

}  // namespace webclust
