// SPDX-License-Identifier: Apache-2.0
//
// prachlab: collision detection for the cellular-IoT random access channel
// Copyright (C) 2026 prachlab contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------

#include "prach/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "prach/parallel.hpp"
#include "prach/rng.hpp"

namespace prach {

namespace {

using json = nlohmann::ordered_json;

double sigmoid(double z) {
    if (z >= 0.0) {
        const double e = std::exp(-z);
        return 1.0 / (1.0 + e);
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// ---------------------------------------------------------------- logistic

LogRegParams fit_logreg(const Eigen::MatrixXd& X, const Eigen::VectorXi& y, const BaselineHyper& hp) {
    const Eigen::Index n = X.rows();
    LogRegParams p;
    p.weights = Eigen::VectorXd::Zero(X.cols());
    p.bias = 0.0;
    const Eigen::VectorXd target = y.cast<double>();
    for (int epoch = 0; epoch < hp.logreg_epochs; ++epoch) {
        Eigen::VectorXd z = X * p.weights;
        z.array() += p.bias;
        Eigen::VectorXd prob(n);
        for (Eigen::Index i = 0; i < n; ++i) prob(i) = sigmoid(z(i));
        const Eigen::VectorXd err = prob - target;
        const Eigen::VectorXd grad_w = X.transpose() * err / static_cast<double>(n) + hp.logreg_l2 * p.weights;
        const double grad_b = err.mean();
        p.weights -= hp.logreg_lr * grad_w;
        p.bias -= hp.logreg_lr * grad_b;
    }
    return p;
}

// ------------------------------------------------------------- naive bayes

GnbParams fit_gnb(const Eigen::MatrixXd& X, const Eigen::VectorXi& y) {
    const Eigen::Index n = X.rows();
    GnbParams p;
    p.mean = Eigen::MatrixXd::Zero(2, X.cols());
    p.var = Eigen::MatrixXd::Zero(2, X.cols());

    Eigen::Vector2d count = Eigen::Vector2d::Zero();
    for (Eigen::Index i = 0; i < n; ++i) {
        count(y(i)) += 1.0;
        p.mean.row(y(i)) += X.row(i);
    }
    for (int c = 0; c < 2; ++c) p.mean.row(c) /= count(c);
    for (Eigen::Index i = 0; i < n; ++i)
        p.var.row(y(i)) += (X.row(i) - p.mean.row(y(i))).array().square().matrix();
    for (int c = 0; c < 2; ++c) p.var.row(c) /= count(c);

    // variance floor keeps constant features from collapsing the likelihood
    const double floor = 1e-9 * std::max(p.var.maxCoeff(), 1e-12);
    p.var = p.var.cwiseMax(floor);
    p.log_prior = (count / static_cast<double>(n)).array().log();
    return p;
}

double gnb_score(const GnbParams& p, const Eigen::VectorXd& x) {
    Eigen::Vector2d ll = p.log_prior;
    for (int c = 0; c < 2; ++c) {
        for (Eigen::Index j = 0; j < x.size(); ++j) {
            const double v = p.var(c, j);
            const double d = x(j) - p.mean(c, j);
            ll(c) += -0.5 * std::log(2.0 * M_PI * v) - d * d / (2.0 * v);
        }
    }
    return sigmoid(ll(1) - ll(0));
}

// --------------------------------------------------------------------- knn

double knn_score(const KnnParams& p, const Eigen::VectorXd& x) {
    const Eigen::Index n = p.train_X.rows();
    const int k = std::min<Eigen::Index>(p.k, n);
    // (distance, index) with ties toward the lower training index
    std::vector<std::pair<double, int>> dist(n);
    for (Eigen::Index i = 0; i < n; ++i)
        dist[i] = {(p.train_X.row(i).transpose() - x).squaredNorm(), static_cast<int>(i)};
    std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
    int votes = 0;
    for (int q = 0; q < k; ++q) votes += p.train_y(dist[q].second);
    return static_cast<double>(votes) / static_cast<double>(k);
}

// -------------------------------------------------------------------- cart

struct SplitChoice {
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
};

double gini(double pos, double total) {
    if (total <= 0.0) return 0.0;
    const double p = pos / total;
    return 2.0 * p * (1.0 - p);
}

/// Best Gini split for the rows in `idx` over `features`; thresholds sit at
/// midpoints of adjacent distinct sorted values, children must keep at least
/// min_leaf rows. Ties break toward the lower feature then lower threshold.
SplitChoice best_split(const Eigen::MatrixXd& X, const Eigen::VectorXi& y, const std::vector<int>& idx,
                       const std::vector<int>& features, int min_leaf) {
    SplitChoice best;
    const double total = static_cast<double>(idx.size());
    double pos_total = 0.0;
    for (int i : idx) pos_total += y(i);
    const double parent = gini(pos_total, total);

    std::vector<std::pair<double, int>> vals(idx.size());
    for (int f : features) {
        for (std::size_t i = 0; i < idx.size(); ++i) vals[i] = {X(idx[i], f), y(idx[i])};
        std::sort(vals.begin(), vals.end());
        double left_n = 0.0, left_pos = 0.0;
        for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
            left_n += 1.0;
            left_pos += vals[i].second;
            if (vals[i].first == vals[i + 1].first) continue;
            const double right_n = total - left_n;
            if (left_n < min_leaf || right_n < min_leaf) continue;
            const double impurity =
                (left_n * gini(left_pos, left_n) + right_n * gini(pos_total - left_pos, right_n)) / total;
            const double gain = parent - impurity;
            const double threshold = 0.5 * (vals[i].first + vals[i + 1].first);
            // strict > keeps the first candidate on ties; features and
            // thresholds are scanned ascending, so lower wins
            if (gain > best.gain) best = {f, threshold, gain};
        }
    }
    return best;
}

int grow_tree(std::vector<TreeNode>& nodes, const Eigen::MatrixXd& X, const Eigen::VectorXi& y,
              std::vector<int>& idx, int depth, int max_depth, int min_leaf,
              int features_per_split, Rng* feature_rng) {
    TreeNode node;
    double pos = 0.0;
    for (int i : idx) pos += y(i);
    node.p1 = idx.empty() ? 0.0 : pos / static_cast<double>(idx.size());

    const bool pure = pos == 0.0 || pos == static_cast<double>(idx.size());
    const int self = static_cast<int>(nodes.size());
    nodes.push_back(node);
    if (pure || depth >= max_depth || static_cast<int>(idx.size()) < 2 * min_leaf) return self;

    std::vector<int> features(X.cols());
    std::iota(features.begin(), features.end(), 0);
    if (feature_rng != nullptr && features_per_split < static_cast<int>(features.size())) {
        // partial Fisher-Yates draw without replacement, then sorted for a
        // deterministic scan order
        for (int i = 0; i < features_per_split; ++i)
            std::swap(features[i], features[i + feature_rng->uniform_int(static_cast<int>(features.size()) - i)]);
        features.resize(features_per_split);
        std::sort(features.begin(), features.end());
    }

    const SplitChoice split = best_split(X, y, idx, features, min_leaf);
    if (split.feature < 0 || split.gain <= 0.0) return self;

    std::vector<int> left, right;
    for (int i : idx)
        (X(i, split.feature) <= split.threshold ? left : right).push_back(i);
    if (left.empty() || right.empty()) return self;

    idx.clear();
    idx.shrink_to_fit();
    const int l = grow_tree(nodes, X, y, left, depth + 1, max_depth, min_leaf, features_per_split, feature_rng);
    const int r = grow_tree(nodes, X, y, right, depth + 1, max_depth, min_leaf, features_per_split, feature_rng);
    nodes[self].feature = split.feature;
    nodes[self].threshold = split.threshold;
    nodes[self].left = l;
    nodes[self].right = r;
    return self;
}

double tree_score(const std::vector<TreeNode>& nodes, const Eigen::VectorXd& x) {
    int cur = 0;
    while (nodes[cur].feature >= 0)
        cur = x(nodes[cur].feature) <= nodes[cur].threshold ? nodes[cur].left : nodes[cur].right;
    return nodes[cur].p1;
}

DTreeParams fit_dtree(const Eigen::MatrixXd& X, const Eigen::VectorXi& y, const BaselineHyper& hp) {
    DTreeParams p;
    std::vector<int> idx(X.rows());
    std::iota(idx.begin(), idx.end(), 0);
    grow_tree(p.nodes, X, y, idx, 0, hp.tree_max_depth, hp.tree_min_leaf, 0, nullptr);
    return p;
}

RForestParams fit_rforest(const Eigen::MatrixXd& X, const Eigen::VectorXi& y, const BaselineHyper& hp,
                          std::uint64_t seed, int jobs) {
    RForestParams p;
    p.features_per_split = hp.forest_features_per_split;
    p.trees.resize(hp.forest_trees);
    const int n = static_cast<int>(X.rows());
    parallel_for(hp.forest_trees, jobs, [&](int t) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
        std::vector<int> idx(n);
        for (int i = 0; i < n; ++i) idx[i] = rng.uniform_int(n);  // bootstrap, size n
        std::vector<TreeNode> nodes;
        grow_tree(nodes, X, y, idx, 0, hp.tree_max_depth, hp.tree_min_leaf, hp.forest_features_per_split,
                  &rng);
        p.trees[t] = std::move(nodes);
    });
    return p;
}

double forest_score(const RForestParams& p, const Eigen::VectorXd& x) {
    int votes = 0;
    for (const auto& tree : p.trees) votes += tree_score(tree, x) >= 0.5 ? 1 : 0;
    return static_cast<double>(votes) / static_cast<double>(p.trees.size());
}

double model_score(const BaselineModel& model, const Eigen::VectorXd& scaled) {
    switch (model.kind) {
        case ModelKind::logreg: {
            const auto& p = std::get<LogRegParams>(model.params);
            return sigmoid(p.weights.dot(scaled) + p.bias);
        }
        case ModelKind::gnb:
            return gnb_score(std::get<GnbParams>(model.params), scaled);
        case ModelKind::knn:
            return knn_score(std::get<KnnParams>(model.params), scaled);
        case ModelKind::dtree:
            return tree_score(std::get<DTreeParams>(model.params).nodes, scaled);
        case ModelKind::rforest:
            return forest_score(std::get<RForestParams>(model.params), scaled);
    }
    throw std::logic_error("model_score: unknown kind");
}

// ------------------------------------------------------------- persistence

json vector_to_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

Eigen::VectorXd vector_from_json(const json& a) {
    Eigen::VectorXd v(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) v(static_cast<Eigen::Index>(i)) = a[i].get<double>();
    return v;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vector_to_json(m.row(i).transpose()));
    return rows;
}

Eigen::MatrixXd matrix_from_json(const json& rows) {
    if (rows.empty()) return Eigen::MatrixXd(0, 0);
    Eigen::MatrixXd m(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        m.row(static_cast<Eigen::Index>(i)) = vector_from_json(rows[i]).transpose();
    return m;
}

json trees_to_json(const std::vector<std::vector<TreeNode>>& trees) {
    json out = json::array();
    for (const auto& tree : trees) {
        json nodes = json::array();
        for (const auto& n : tree)
            nodes.push_back(json::array({n.feature, n.threshold, n.left, n.right, n.p1}));
        out.push_back(std::move(nodes));
    }
    return out;
}

std::vector<std::vector<TreeNode>> trees_from_json(const json& in) {
    std::vector<std::vector<TreeNode>> trees;
    trees.reserve(in.size());
    for (const auto& tj : in) {
        std::vector<TreeNode> nodes;
        nodes.reserve(tj.size());
        for (const auto& nj : tj) {
            TreeNode n;
            n.feature = nj[0].get<int>();
            n.threshold = nj[1].get<double>();
            n.left = nj[2].get<int>();
            n.right = nj[3].get<int>();
            n.p1 = nj[4].get<double>();
            nodes.push_back(n);
        }
        trees.push_back(std::move(nodes));
    }
    return trees;
}

}  // namespace

ModelKind model_kind_from_string(const std::string& name) {
    if (name == "logreg") return ModelKind::logreg;
    if (name == "gnb") return ModelKind::gnb;
    if (name == "knn") return ModelKind::knn;
    if (name == "dtree") return ModelKind::dtree;
    if (name == "rforest") return ModelKind::rforest;
    throw std::invalid_argument("unknown model kind: " + name);
}

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::logreg: return "logreg";
        case ModelKind::gnb: return "gnb";
        case ModelKind::knn: return "knn";
        case ModelKind::dtree: return "dtree";
        case ModelKind::rforest: return "rforest";
    }
    return "?";
}

BaselineModel train_baseline(ModelKind kind, const FeatureMatrix& train, const BaselineHyper& hyper,
                             std::uint64_t seed, int jobs) {
    train.validate();
    if (train.rows() == 0) throw std::invalid_argument("train_baseline: empty training set");

    BaselineModel model;
    model.kind = kind;
    model.scaler = FeatureScaler::fit(train.X);

    const int positives = train.y.sum();
    if (positives == 0 || positives == train.rows()) {
        model.constant_label = positives == 0 ? 0 : 1;
        model.params = LogRegParams{Eigen::VectorXd::Zero(train.X.cols()), 0.0};
        return model;
    }

    const Eigen::MatrixXd X = model.scaler.apply(train.X);
    switch (kind) {
        case ModelKind::logreg: model.params = fit_logreg(X, train.y, hyper); break;
        case ModelKind::gnb: model.params = fit_gnb(X, train.y); break;
        case ModelKind::knn: model.params = KnnParams{hyper.knn_k, X, train.y}; break;
        case ModelKind::dtree: model.params = fit_dtree(X, train.y, hyper); break;
        case ModelKind::rforest: model.params = fit_rforest(X, train.y, hyper, seed, jobs); break;
    }
    return model;
}

Prediction predict(const BaselineModel& model, const Eigen::VectorXd& features) {
    if (features.size() != kNumFeatures)
        throw std::invalid_argument("predict: expected 24 features");
    if (model.constant_label) {
        const int c = *model.constant_label;
        return {c, static_cast<double>(c)};
    }
    const double score = model_score(model, model.scaler.apply_row(features));
    return {score >= 0.5 ? 1 : 0, score};
}

Eigen::VectorXi predict_labels(const BaselineModel& model, const Eigen::MatrixXd& features) {
    Eigen::VectorXi out(features.rows());
    for (Eigen::Index i = 0; i < features.rows(); ++i)
        out(i) = predict(model, features.row(i).transpose()).label;
    return out;
}

void save_baseline(const BaselineModel& model, const std::string& path) {
    json j;
    j["format"] = "prachlab-baseline";
    j["version"] = 1;
    j["kind"] = to_string(model.kind);
    j["scaler"] = {{"mean", vector_to_json(model.scaler.mean)}, {"scale", vector_to_json(model.scaler.scale)}};
    if (model.constant_label) j["constant_label"] = *model.constant_label;

    switch (model.kind) {
        case ModelKind::logreg: {
            if (!model.constant_label) {
                const auto& p = std::get<LogRegParams>(model.params);
                j["weights"] = vector_to_json(p.weights);
                j["bias"] = p.bias;
            }
            break;
        }
        case ModelKind::gnb: {
            const auto& p = std::get<GnbParams>(model.params);
            j["log_prior"] = {p.log_prior(0), p.log_prior(1)};
            j["mean"] = matrix_to_json(p.mean);
            j["var"] = matrix_to_json(p.var);
            break;
        }
        case ModelKind::knn: {
            const auto& p = std::get<KnnParams>(model.params);
            j["k"] = p.k;
            j["train_X"] = matrix_to_json(p.train_X);
            json y = json::array();
            for (Eigen::Index i = 0; i < p.train_y.size(); ++i) y.push_back(p.train_y(i));
            j["train_y"] = std::move(y);
            break;
        }
        case ModelKind::dtree:
            j["nodes"] = trees_to_json({std::get<DTreeParams>(model.params).nodes})[0];
            break;
        case ModelKind::rforest: {
            const auto& p = std::get<RForestParams>(model.params);
            j["features_per_split"] = p.features_per_split;
            j["trees"] = trees_to_json(p.trees);
            break;
        }
    }

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << j.dump(1) << "\n";
    if (!out) throw IoError("write failed: " + path);
}

BaselineModel load_baseline(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open model file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    if (j.value("format", "") != "prachlab-baseline")
        throw SchemaError(path + ": not a baseline model file");

    BaselineModel model;
    model.kind = model_kind_from_string(j.at("kind").get<std::string>());
    model.scaler.mean = vector_from_json(j.at("scaler").at("mean"));
    model.scaler.scale = vector_from_json(j.at("scaler").at("scale"));
    if (j.contains("constant_label")) {
        model.constant_label = j["constant_label"].get<int>();
        model.params = LogRegParams{Eigen::VectorXd::Zero(kNumFeatures), 0.0};
        return model;
    }

    switch (model.kind) {
        case ModelKind::logreg: {
            LogRegParams p;
            p.weights = vector_from_json(j.at("weights"));
            p.bias = j.at("bias").get<double>();
            model.params = std::move(p);
            break;
        }
        case ModelKind::gnb: {
            GnbParams p;
            p.log_prior << j.at("log_prior")[0].get<double>(), j.at("log_prior")[1].get<double>();
            p.mean = matrix_from_json(j.at("mean"));
            p.var = matrix_from_json(j.at("var"));
            model.params = std::move(p);
            break;
        }
        case ModelKind::knn: {
            KnnParams p;
            p.k = j.at("k").get<int>();
            p.train_X = matrix_from_json(j.at("train_X"));
            const auto& y = j.at("train_y");
            p.train_y.resize(static_cast<Eigen::Index>(y.size()));
            for (std::size_t i = 0; i < y.size(); ++i)
                p.train_y(static_cast<Eigen::Index>(i)) = y[i].get<int>();
            model.params = std::move(p);
            break;
        }
        case ModelKind::dtree: {
            DTreeParams p;
            p.nodes = trees_from_json(json::array({j.at("nodes")}))[0];
            model.params = std::move(p);
            break;
        }
        case ModelKind::rforest: {
            RForestParams p;
            p.features_per_split = j.at("features_per_split").get<int>();
            p.trees = trees_from_json(j.at("trees"));
            model.params = std::move(p);
            break;
        }
    }
    return model;
}

}  // namespace prach
