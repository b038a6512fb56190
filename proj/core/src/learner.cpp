#include "handdigit/learner.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <nlohmann/json.hpp>
#include <numeric>
#include <sstream>

#include "handdigit/error.hpp"
#include "handdigit/rng.hpp"

namespace handdigit {

using json = nlohmann::json;

namespace {

void append_double(std::string& out, double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, res.ptr);
}

}  // namespace

std::string Dataset::to_csv() const {
    std::string out;
    for (const auto& s : samples) {
        out += std::to_string(s.label);
        for (double v : s.v) {
            out += ',';
            append_double(out, v);
        }
        out += '\n';
    }
    return out;
}

Dataset Dataset::from_csv(const std::string& text) {
    Dataset d;
    std::size_t pos = 0, line_no = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        ++line_no;
        std::string_view line(text.data() + pos, eol - pos);
        pos = eol + 1;
        if (line.empty() || line.back() == '\r') {
            while (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            if (line.empty()) continue;
        }
        std::vector<double> fields;
        std::size_t fpos = 0;
        while (fpos <= line.size()) {
            std::size_t comma = line.find(',', fpos);
            if (comma == std::string_view::npos) comma = line.size();
            std::string_view tok = line.substr(fpos, comma - fpos);
            double v = 0;
            auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
                throw DecodeError("features csv: bad number on line " + std::to_string(line_no));
            fields.push_back(v);
            fpos = comma + 1;
            if (comma == line.size()) break;
        }
        Sample s;
        std::size_t off = 0;
        if (fields.size() == kNumFeatures + 1) {
            s.label = static_cast<int>(fields[0]);
            off = 1;
        } else if (fields.size() == kNumFeatures) {
            s.label = 0;  // unlabeled row
        } else {
            throw DecodeError("features csv: line " + std::to_string(line_no) + " has " +
                              std::to_string(fields.size()) + " columns, expected 17 or 18");
        }
        if (off == 1 && (s.label < 1 || s.label > 9))
            throw DecodeError("features csv: label out of 1..9 on line " + std::to_string(line_no));
        for (int i = 0; i < kNumFeatures; ++i) s.v[i] = fields[off + i];
        d.samples.push_back(s);
    }
    return d;
}

std::pair<Dataset, Dataset> split_dataset(const Dataset& d, double train_fraction,
                                          std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw ParamError("split_dataset: train_fraction must be in (0,1)");
    std::array<std::vector<std::size_t>, kNumClasses> per_class;
    for (std::size_t i = 0; i < d.samples.size(); ++i) {
        int label = d.samples[i].label;
        if (label < 1 || label > 9) throw ParamError("split_dataset: label out of 1..9");
        per_class[label - 1].push_back(i);
    }
    Dataset train, test;
    SplitMix64 rng(seed);
    for (int c = 0; c < kNumClasses; ++c) {
        auto& idx = per_class[c];
        if (idx.empty()) continue;
        if (idx.size() < 2)
            throw ParamError("split_dataset: class " + std::to_string(c + 1) +
                             " has fewer than 2 samples, cannot stratify");
        deterministic_shuffle(idx, rng);
        auto k = static_cast<std::size_t>(std::llround(train_fraction * idx.size()));
        k = std::clamp<std::size_t>(k, 1, idx.size() - 1);
        for (std::size_t i = 0; i < idx.size(); ++i)
            (i < k ? train : test).samples.push_back(d.samples[idx[i]]);
    }
    return {std::move(train), std::move(test)};
}

// ---------------------------------------------------------------------------
// Entropy and split scores

double shannon_entropy(const std::array<int, kNumClasses>& counts) {
    int total = std::accumulate(counts.begin(), counts.end(), 0);
    if (total == 0) return 0.0;
    double h = 0.0;
    for (int c : counts) {
        if (c == 0) continue;
        double p = static_cast<double>(c) / total;
        h -= p * std::log2(p);
    }
    return h;
}

double daroczy_entropy(const std::array<int, kNumClasses>& counts, double beta) {
    int total = std::accumulate(counts.begin(), counts.end(), 0);
    if (total == 0) return 0.0;
    double s = 0.0;
    for (int c : counts) {
        if (c == 0) continue;
        s += std::pow(static_cast<double>(c) / total, beta);
    }
    return (s - 1.0) / (std::exp2(1.0 - beta) - 1.0);
}

namespace {

struct EntropyFn {
    bool use_beta = false;
    double beta = 2.0;
    double operator()(const std::array<int, kNumClasses>& counts) const {
        return use_beta ? daroczy_entropy(counts, beta) : shannon_entropy(counts);
    }
};

std::array<int, kNumClasses> count_labels(const Dataset& d, const std::vector<std::size_t>& idx) {
    std::array<int, kNumClasses> counts{};
    for (auto i : idx) ++counts[d.samples[i].label - 1];
    return counts;
}

int majority_digit(const std::array<int, kNumClasses>& counts) {
    int best = 0;
    for (int c = 1; c < kNumClasses; ++c)
        if (counts[c] > counts[best]) best = c;  // ties keep the smaller digit
    return best + 1;
}

bool is_pure(const std::array<int, kNumClasses>& counts) {
    int nonzero = 0;
    for (int c : counts) nonzero += c > 0;
    return nonzero <= 1;
}

std::unique_ptr<TreeNode> make_leaf(const std::array<int, kNumClasses>& counts) {
    auto node = std::make_unique<TreeNode>();
    node->kind = TreeNode::Kind::Leaf;
    node->counts = counts;
    node->digit = majority_digit(counts);
    return node;
}

// ---------------------------------------------------------------------------
// ID3

std::unique_ptr<TreeNode> id3_node(const Dataset& d, const Discretizer& disc,
                                   const std::vector<std::size_t>& idx,
                                   std::vector<std::uint8_t> available) {
    auto counts = count_labels(d, idx);
    if (is_pure(counts)) return make_leaf(counts);
    bool any_available = std::any_of(available.begin(), available.end(),
                                     [](std::uint8_t a) { return a != 0; });
    if (!any_available) return make_leaf(counts);

    const double parent_h = shannon_entropy(counts);
    const double n = static_cast<double>(idx.size());

    int best_feature = -1;
    double best_gain = 1e-12;  // a split must strictly reduce entropy
    for (int f = 0; f < kNumFeatures; ++f) {
        if (!available[f]) continue;
        int nbins = disc.bin_count(f);
        std::vector<std::array<int, kNumClasses>> parts(nbins);
        std::vector<int> part_sizes(nbins, 0);
        for (auto i : idx) {
            int b = disc.bin_of(f, d.samples[i].v[f]);
            ++parts[b][d.samples[i].label - 1];
            ++part_sizes[b];
        }
        double child_h = 0.0;
        for (int b = 0; b < nbins; ++b) {
            if (part_sizes[b] == 0) continue;
            child_h += (part_sizes[b] / n) * shannon_entropy(parts[b]);
        }
        double gain = parent_h - child_h;
        if (gain > best_gain) {  // strict: ties keep the smaller index
            best_gain = gain;
            best_feature = f;
        }
    }
    if (best_feature < 0) return make_leaf(counts);

    auto node = std::make_unique<TreeNode>();
    node->kind = TreeNode::Kind::Categorical;
    node->feature = best_feature;
    node->counts = counts;
    node->digit = majority_digit(counts);

    int nbins = disc.bin_count(best_feature);
    std::vector<std::vector<std::size_t>> parts(nbins);
    for (auto i : idx) parts[disc.bin_of(best_feature, d.samples[i].v[best_feature])].push_back(i);
    available[best_feature] = 0;
    for (int b = 0; b < nbins; ++b) {
        if (parts[b].empty()) {
            node->children.push_back(make_leaf(counts));  // inherit parent majority
        } else {
            node->children.push_back(id3_node(d, disc, parts[b], available));
        }
    }
    return node;
}

// ---------------------------------------------------------------------------
// C4.5 (Shannon or Daroczy entropy)

struct SplitChoice {
    int feature = -1;
    double threshold = 0;
    double gain = 0;
    double gain_ratio = 0;
};

std::unique_ptr<TreeNode> c45_node(const Dataset& d, const std::vector<std::size_t>& idx,
                                   const EntropyFn& entropy) {
    auto counts = count_labels(d, idx);
    if (is_pure(counts)) return make_leaf(counts);

    const double parent_h = entropy(counts);
    const double n = static_cast<double>(idx.size());

    // All candidate (feature, midpoint) splits with their gain and
    // gain ratio.
    std::vector<SplitChoice> candidates;
    std::vector<std::pair<double, int>> vals;  // (value, label-1)
    for (int f = 0; f < kNumFeatures; ++f) {
        vals.clear();
        for (auto i : idx) vals.emplace_back(d.samples[i].v[f], d.samples[i].label - 1);
        std::sort(vals.begin(), vals.end());
        std::array<int, kNumClasses> left{};
        int left_n = 0;
        for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
            ++left[vals[i].second];
            ++left_n;
            if (vals[i].first == vals[i + 1].first) continue;
            double thr = (vals[i].first + vals[i + 1].first) / 2.0;
            std::array<int, kNumClasses> right = counts;
            for (int c = 0; c < kNumClasses; ++c) right[c] -= left[c];
            int right_n = static_cast<int>(idx.size()) - left_n;
            double child_h =
                (left_n / n) * entropy(left) + (right_n / n) * entropy(right);
            double gain = parent_h - child_h;
            double pl = left_n / n, pr = right_n / n;
            double split_info = -(pl * std::log2(pl) + pr * std::log2(pr));
            if (split_info <= 0) continue;
            candidates.push_back({f, thr, gain, gain / split_info});
        }
    }
    if (candidates.empty()) return make_leaf(counts);

    double avg_gain = 0;
    for (const auto& c : candidates) avg_gain += c.gain;
    avg_gain /= static_cast<double>(candidates.size());

    const SplitChoice* best = nullptr;
    for (const auto& c : candidates) {
        if (c.gain + 1e-12 < avg_gain) continue;  // below-average gain
        if (!best || c.gain_ratio > best->gain_ratio + 1e-12) best = &c;
        // ties keep the earlier candidate: smaller feature index, then
        // smaller threshold (candidate order guarantees this)
    }
    if (!best || best->gain <= 1e-12) return make_leaf(counts);

    std::vector<std::size_t> left_idx, right_idx;
    for (auto i : idx)
        (d.samples[i].v[best->feature] <= best->threshold ? left_idx : right_idx).push_back(i);
    if (left_idx.empty() || right_idx.empty()) return make_leaf(counts);

    auto node = std::make_unique<TreeNode>();
    node->kind = TreeNode::Kind::Threshold;
    node->feature = best->feature;
    node->threshold = best->threshold;
    node->counts = counts;
    node->digit = majority_digit(counts);
    node->left = c45_node(d, left_idx, entropy);
    node->right = c45_node(d, right_idx, entropy);
    return node;
}

std::vector<std::size_t> all_indices(const Dataset& d) {
    std::vector<std::size_t> idx(d.samples.size());
    std::iota(idx.begin(), idx.end(), 0);
    return idx;
}

}  // namespace

int Discretizer::bin_count(int feature) const { return feature == 0 ? 6 : bins; }

int Discretizer::bin_of(int feature, double value) const {
    if (feature == 0) {
        int v = static_cast<int>(std::lround(value));
        return std::clamp(v, 0, 5);  // raw categorical peak count
    }
    if (width[feature] <= 0) return 0;
    int b = static_cast<int>(std::floor((value - min[feature]) / width[feature]));
    return std::clamp(b, 0, bins - 1);
}

DecisionTree train_id3(const Dataset& train, int bins_per_feature) {
    if (train.samples.empty()) throw ParamError("train_id3: empty training set");
    if (bins_per_feature < 2) throw ParamError("train_id3: bins_per_feature must be >= 2");

    DecisionTree tree;
    tree.learner = LearnerKind::ID3;
    tree.discretizer.bins = bins_per_feature;
    for (int f = 1; f < kNumFeatures; ++f) {
        double lo = train.samples[0].v[f], hi = lo;
        for (const auto& s : train.samples) {
            lo = std::min(lo, s.v[f]);
            hi = std::max(hi, s.v[f]);
        }
        tree.discretizer.min[f] = lo;
        tree.discretizer.width[f] = hi > lo ? (hi - lo) / bins_per_feature : 0.0;
    }
    std::vector<std::uint8_t> available(kNumFeatures, 1);
    tree.root = id3_node(train, tree.discretizer, all_indices(train), std::move(available));
    return tree;
}

DecisionTree train_c45(const Dataset& train) {
    if (train.samples.empty()) throw ParamError("train_c45: empty training set");
    DecisionTree tree;
    tree.learner = LearnerKind::C45;
    tree.root = c45_node(train, all_indices(train), EntropyFn{false, 0});
    return tree;
}

DecisionTree train_c45_beta(const Dataset& train, double beta) {
    if (train.samples.empty()) throw ParamError("train_c45_beta: empty training set");
    if (!(beta > 0.0)) throw ParamError("train_c45_beta: beta must be > 0");
    if (beta == 1.0) throw ParamError("train_c45_beta: beta = 1 is Shannon entropy; use train_c45");
    DecisionTree tree;
    tree.learner = LearnerKind::C45Beta;
    tree.beta = beta;
    tree.root = c45_node(train, all_indices(train), EntropyFn{true, beta});
    return tree;
}

int classify(const DecisionTree& tree, const std::array<double, kNumFeatures>& v) {
    const TreeNode* node = tree.root.get();
    while (node && node->kind != TreeNode::Kind::Leaf) {
        if (node->kind == TreeNode::Kind::Categorical) {
            int b = tree.discretizer.bin_of(node->feature, v[node->feature]);
            node = node->children[static_cast<std::size_t>(b)].get();
        } else {
            node = v[node->feature] <= node->threshold ? node->left.get() : node->right.get();
        }
    }
    return node ? node->digit : 1;
}

std::int64_t ConfusionMatrix::card() const {
    std::int64_t total = 0;
    for (const auto& row : n)
        for (auto v : row) total += v;
    return total;
}

ConfusionMatrix evaluate(const DecisionTree& tree, const Dataset& test) {
    if (test.samples.empty()) throw ParamError("evaluate: empty test set");
    ConfusionMatrix m;
    for (const auto& s : test.samples) {
        if (s.label < 1 || s.label > 9) throw ParamError("evaluate: label out of 1..9");
        int assigned = classify(tree, s.v);
        ++m.n[s.label - 1][assigned - 1];
    }
    return m;
}

MetricsReport metrics(const ConfusionMatrix& m) {
    MetricsReport r;
    r.card = m.card();
    if (r.card == 0) throw ParamError("metrics: empty confusion matrix");
    std::int64_t off_diag = 0;
    for (int i = 0; i < kNumClasses; ++i) {
        std::int64_t row = 0, col = 0;
        for (int j = 0; j < kNumClasses; ++j) {
            row += m.n[i][j];
            col += m.n[j][i];
            if (i != j) off_diag += m.n[i][j];
        }
        if (row > 0) {
            double recall = static_cast<double>(m.n[i][i]) / static_cast<double>(row);
            r.recall[i] = recall;
            r.epsilon_apriori[i] = 1.0 - recall;
        }
        if (col > 0) {
            double precision = static_cast<double>(m.n[i][i]) / static_cast<double>(col);
            r.precision[i] = precision;
            r.epsilon_aposteriori[i] = 1.0 - precision;
        }
    }
    r.epsilon_global = static_cast<double>(off_diag) / static_cast<double>(r.card);
    return r;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

json node_to_json(const TreeNode& node) {
    json j;
    j["counts"] = node.counts;
    switch (node.kind) {
        case TreeNode::Kind::Leaf:
            j["kind"] = "leaf";
            j["digit"] = node.digit;
            break;
        case TreeNode::Kind::Categorical: {
            j["kind"] = "categorical";
            j["feature"] = node.feature;
            json children = json::array();
            for (const auto& c : node.children) children.push_back(node_to_json(*c));
            j["children"] = std::move(children);
            break;
        }
        case TreeNode::Kind::Threshold:
            j["kind"] = "threshold";
            j["feature"] = node.feature;
            j["threshold"] = node.threshold;
            j["left"] = node_to_json(*node.left);
            j["right"] = node_to_json(*node.right);
            break;
    }
    return j;
}

std::unique_ptr<TreeNode> node_from_json(const json& j) {
    auto node = std::make_unique<TreeNode>();
    std::string kind = j.at("kind").get<std::string>();
    if (j.contains("counts")) {
        auto c = j["counts"].get<std::vector<int>>();
        if (c.size() != kNumClasses) throw DecodeError("tree json: counts must have 9 entries");
        std::copy(c.begin(), c.end(), node->counts.begin());
    }
    if (kind == "leaf") {
        node->kind = TreeNode::Kind::Leaf;
        node->digit = j.at("digit").get<int>();
        if (node->digit < 1 || node->digit > 9) throw DecodeError("tree json: digit out of 1..9");
    } else if (kind == "categorical") {
        node->kind = TreeNode::Kind::Categorical;
        node->feature = j.at("feature").get<int>();
        for (const auto& c : j.at("children")) node->children.push_back(node_from_json(c));
        node->digit = majority_digit(node->counts);
    } else if (kind == "threshold") {
        node->kind = TreeNode::Kind::Threshold;
        node->feature = j.at("feature").get<int>();
        node->threshold = j.at("threshold").get<double>();
        node->left = node_from_json(j.at("left"));
        node->right = node_from_json(j.at("right"));
        node->digit = majority_digit(node->counts);
    } else {
        throw DecodeError("tree json: unknown node kind '" + kind + "'");
    }
    if (node->kind != TreeNode::Kind::Leaf &&
        (node->feature < 0 || node->feature >= kNumFeatures))
        throw DecodeError("tree json: feature index out of range");
    return node;
}

}  // namespace

std::string DecisionTree::to_json() const {
    json j;
    switch (learner) {
        case LearnerKind::ID3: j["learner"] = "id3"; break;
        case LearnerKind::C45: j["learner"] = "c45"; break;
        case LearnerKind::C45Beta: j["learner"] = "c45beta"; break;
    }
    if (learner == LearnerKind::C45Beta) j["beta"] = beta;
    if (learner == LearnerKind::ID3) {
        j["discretizer"]["bins"] = discretizer.bins;
        j["discretizer"]["min"] = discretizer.min;
        j["discretizer"]["width"] = discretizer.width;
    }
    j["root"] = node_to_json(*root);
    return j.dump(2);
}

DecisionTree DecisionTree::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw DecodeError(std::string("tree json: ") + e.what());
    }
    DecisionTree tree;
    std::string kind = j.at("learner").get<std::string>();
    if (kind == "id3") tree.learner = LearnerKind::ID3;
    else if (kind == "c45") tree.learner = LearnerKind::C45;
    else if (kind == "c45beta") tree.learner = LearnerKind::C45Beta;
    else throw DecodeError("tree json: unknown learner '" + kind + "'");
    if (j.contains("beta")) tree.beta = j["beta"].get<double>();
    if (j.contains("discretizer")) {
        tree.discretizer.bins = j["discretizer"].at("bins").get<int>();
        auto mins = j["discretizer"].at("min").get<std::vector<double>>();
        auto widths = j["discretizer"].at("width").get<std::vector<double>>();
        if (mins.size() != kNumFeatures || widths.size() != kNumFeatures)
            throw DecodeError("tree json: discretizer arrays must have 17 entries");
        std::copy(mins.begin(), mins.end(), tree.discretizer.min.begin());
        std::copy(widths.begin(), widths.end(), tree.discretizer.width.begin());
    }
    tree.root = node_from_json(j.at("root"));
    return tree;
}

std::string MetricsReport::to_json(const ConfusionMatrix* m) const {
    json j;
    j["card"] = card;
    j["epsilon_global"] = epsilon_global;
    auto opt_array = [](const std::array<std::optional<double>, kNumClasses>& a) {
        json arr = json::array();
        for (const auto& v : a) {
            if (v) arr.push_back(*v);
            else arr.push_back(nullptr);
        }
        return arr;
    };
    j["recall"] = opt_array(recall);
    j["precision"] = opt_array(precision);
    j["epsilon_apriori"] = opt_array(epsilon_apriori);
    j["epsilon_aposteriori"] = opt_array(epsilon_aposteriori);
    if (m) {
        json rows = json::array();
        for (const auto& row : m->n) rows.push_back(row);
        j["confusion"] = std::move(rows);
    }
    return j.dump(2);
}

std::string format_confusion(const ConfusionMatrix& m) {
    std::ostringstream os;
    os << "true\\assigned";
    for (int j = 0; j < kNumClasses; ++j) os << '\t' << (j + 1);
    os << '\n';
    for (int i = 0; i < kNumClasses; ++i) {
        os << (i + 1);
        for (int j = 0; j < kNumClasses; ++j) os << '\t' << m.n[i][j];
        os << '\n';
    }
    return os.str();
}

}  // namespace handdigit
