#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "handdigit/features.hpp"

namespace handdigit {

constexpr int kNumClasses = 9;   // digits 1..9
constexpr int kNumFeatures = 17;

struct Sample {
    std::array<double, kNumFeatures> v{};
    int label = 1;  // 1..9
};

struct Dataset {
    std::vector<Sample> samples;

    std::string to_csv() const;                    // label + 17 columns per row
    static Dataset from_csv(const std::string&);   // accepts 17 or 18 columns
};

/// Seeded stratified split: per digit, a deterministic Fisher-Yates
/// shuffle followed by a prefix split so each class's train share is
/// within one sample of train_fraction. Classes with fewer than two
/// samples cannot be stratified.
std::pair<Dataset, Dataset> split_dataset(const Dataset& d, double train_fraction,
                                          std::uint64_t seed);

enum class LearnerKind { ID3, C45, C45Beta };

struct TreeNode {
    enum class Kind { Leaf, Categorical, Threshold };
    Kind kind = Kind::Leaf;

    // Leaf
    int digit = 1;
    std::array<int, kNumClasses> counts{};

    // Categorical (ID3): one child per bin of `feature`
    int feature = -1;
    std::vector<std::unique_ptr<TreeNode>> children;

    // Threshold (C4.5): v[feature] <= threshold ? left : right
    double threshold = 0;
    std::unique_ptr<TreeNode> left;
    std::unique_ptr<TreeNode> right;
};

/// Equal-width per-feature binning fixed on the training range; values
/// outside the range clamp to the extreme bins. Slot 0 (the peak count)
/// is used raw as a categorical 0..5.
struct Discretizer {
    int bins = 8;
    std::array<double, kNumFeatures> min{};
    std::array<double, kNumFeatures> width{};
    int bin_of(int feature, double value) const;
    int bin_count(int feature) const;
};

struct DecisionTree {
    LearnerKind learner = LearnerKind::ID3;
    double beta = 2.0;            // C45Beta only
    Discretizer discretizer;      // ID3 only
    std::unique_ptr<TreeNode> root;

    std::string to_json() const;
    static DecisionTree from_json(const std::string& text);
};

/// ID3: recursive categorical splits maximizing Shannon information
/// gain over the discretized features; stops on pure nodes, exhausted
/// attributes, or empty partitions (leaf = majority, ties toward the
/// smaller digit).
DecisionTree train_id3(const Dataset& train, int bins_per_feature = 8);

/// C4.5: binary threshold splits (candidate thresholds are midpoints
/// between consecutive distinct values), chosen by gain ratio among
/// candidates with at-least-average gain. No pruning.
DecisionTree train_c45(const Dataset& train);

/// C4.5 with Shannon entropy replaced by Daroczy entropy of degree
/// beta: H_b(p) = (sum p_i^b - 1) / (2^(1-b) - 1). beta > 0, beta != 1.
DecisionTree train_c45_beta(const Dataset& train, double beta = 2.0);

int classify(const DecisionTree& tree, const std::array<double, kNumFeatures>& v);
inline int classify(const DecisionTree& tree, const FeatureVector& v) {
    return classify(tree, v.to_array());
}

struct ConfusionMatrix {
    std::array<std::array<std::int64_t, kNumClasses>, kNumClasses> n{};  // [true][assigned]
    std::int64_t card() const;
};

ConfusionMatrix evaluate(const DecisionTree& tree, const Dataset& test);

/// Per-class rates; a class with an empty row (or column) reports
/// recall (or precision) as undefined rather than zero.
struct MetricsReport {
    double epsilon_global = 0;
    std::array<std::optional<double>, kNumClasses> recall;
    std::array<std::optional<double>, kNumClasses> precision;
    std::array<std::optional<double>, kNumClasses> epsilon_apriori;
    std::array<std::optional<double>, kNumClasses> epsilon_aposteriori;
    std::int64_t card = 0;

    std::string to_json(const ConfusionMatrix* m = nullptr) const;
};

MetricsReport metrics(const ConfusionMatrix& m);

/// Human-readable 9x9 confusion table.
std::string format_confusion(const ConfusionMatrix& m);

/// Daroczy entropy of a count distribution (exposed for tests).
double daroczy_entropy(const std::array<int, kNumClasses>& counts, double beta);
double shannon_entropy(const std::array<int, kNumClasses>& counts);

}  // namespace handdigit
