// SPDX-License-Identifier: Apache-2.0
//
// otadsgd: analog over-the-air distributed SGD simulator
// Copyright (C) 2026 The otadsgd authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "otadsgd/learner.hpp"

#include <cmath>

namespace otadsgd {

namespace {

// Rows selected by `batch`, or the whole set.
struct BatchView {
    Eigen::MatrixXd features;
    Eigen::VectorXi labels;
};

BatchView gather(const LocalDataset& data, std::span<const Index> batch) {
    if (batch.empty()) return {data.features, data.labels};
    BatchView view{Eigen::MatrixXd(static_cast<Index>(batch.size()), data.feature_dim()),
                   Eigen::VectorXi(static_cast<Index>(batch.size()))};
    for (Index r = 0; r < static_cast<Index>(batch.size()); ++r) {
        const Index row = batch[static_cast<std::size_t>(r)];
        if (row < 0 || row >= data.size()) throw std::out_of_range("batch index outside dataset");
        view.features.row(r) = data.features.row(row);
        view.labels(r) = data.labels(row);
    }
    return view;
}

void check_theta(const Eigen::VectorXd& theta, Index features, int classes) {
    if (theta.size() != parameter_count(features, classes))
        throw DimensionError("theta has length " + std::to_string(theta.size()) + ", model needs " +
                             std::to_string(parameter_count(features, classes)));
}

// Row-wise softmax probabilities, shifted by the row max for stability.
Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& scores) {
    Eigen::MatrixXd p = scores.colwise() - scores.rowwise().maxCoeff();
    p = p.array().exp();
    p.array().colwise() /= p.rowwise().sum().array();
    return p;
}

}  // namespace

void LocalDataset::validate() const {
    if (size() < 1) throw std::invalid_argument("dataset is empty");
    if (labels.size() != size()) throw DimensionError("dataset labels and features disagree in length");
    if (classes < 2) throw std::invalid_argument("dataset needs at least two classes");
    if (labels.minCoeff() < 0 || labels.maxCoeff() >= classes)
        throw std::invalid_argument("dataset label outside [0, classes)");
}

Eigen::MatrixXd logits(const Eigen::VectorXd& theta, const Eigen::MatrixXd& features, int classes) {
    const Index f = features.cols();
    check_theta(theta, f, classes);
    const Eigen::Map<const Eigen::MatrixXd> w(theta.data(), f + 1, classes);
    Eigen::MatrixXd scores = features * w.topRows(f);
    scores.rowwise() += w.row(f);
    return scores;
}

double cross_entropy_loss(const Eigen::VectorXd& theta, const LocalDataset& data, std::span<const Index> batch) {
    data.validate();
    const BatchView view = gather(data, batch);
    const Eigen::MatrixXd scores = logits(theta, view.features, data.classes);
    const Eigen::VectorXd row_max = scores.rowwise().maxCoeff();
    const Eigen::VectorXd log_norm =
        row_max.array() + (scores.colwise() - row_max).array().exp().rowwise().sum().log();
    double total = 0.0;
    for (Index r = 0; r < scores.rows(); ++r) total += log_norm(r) - scores(r, view.labels(r));
    return total / static_cast<double>(scores.rows());
}

Eigen::VectorXd local_gradient(const Eigen::VectorXd& theta, const LocalDataset& data,
                               std::span<const Index> batch) {
    data.validate();
    const BatchView view = gather(data, batch);
    const Index f = data.feature_dim();
    const Index rows = view.features.rows();

    Eigen::MatrixXd residual = softmax_rows(logits(theta, view.features, data.classes));
    for (Index r = 0; r < rows; ++r) residual(r, view.labels(r)) -= 1.0;

    Eigen::VectorXd gradient(parameter_count(f, data.classes));
    Eigen::Map<Eigen::MatrixXd> g(gradient.data(), f + 1, data.classes);
    g.topRows(f).noalias() = view.features.transpose() * residual;
    g.row(f) = residual.colwise().sum();
    gradient /= static_cast<double>(rows);
    return gradient;
}

double evaluate_accuracy(const Eigen::VectorXd& theta, const LocalDataset& test) {
    test.validate();
    const Eigen::MatrixXd scores = logits(theta, test.features, test.classes);
    Index correct = 0;
    for (Index r = 0; r < scores.rows(); ++r) {
        Index best = 0;
        // maxCoeff keeps the first maximum, giving the lowest-index tie-break.
        scores.row(r).maxCoeff(&best);
        if (best == test.labels(r)) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(scores.rows());
}

OptimizerState OptimizerState::sgd(double learning_rate) {
    if (!(learning_rate > 0.0)) throw std::invalid_argument("learning rate must be positive");
    OptimizerState opt;
    opt.kind = Kind::sgd;
    opt.learning_rate = learning_rate;
    return opt;
}

OptimizerState OptimizerState::adam(Index d, double learning_rate, double beta1, double beta2, double epsilon) {
    if (!(learning_rate > 0.0)) throw std::invalid_argument("learning rate must be positive");
    if (!(beta1 > 0.0 && beta1 < 1.0) || !(beta2 > 0.0 && beta2 < 1.0))
        throw std::invalid_argument("adam betas must lie in (0, 1)");
    if (!(epsilon > 0.0)) throw std::invalid_argument("adam epsilon must be positive");
    OptimizerState opt;
    opt.kind = Kind::adam;
    opt.learning_rate = learning_rate;
    opt.beta1 = beta1;
    opt.beta2 = beta2;
    opt.epsilon = epsilon;
    opt.first_moment = Eigen::VectorXd::Zero(d);
    opt.second_moment = Eigen::VectorXd::Zero(d);
    return opt;
}

void apply_update(Eigen::VectorXd& theta, const Eigen::VectorXd& gradient, OptimizerState& opt) {
    if (gradient.size() != theta.size()) throw DimensionError("gradient and theta differ in length");
    if (!gradient.allFinite()) throw std::invalid_argument("apply_update: non-finite gradient");

    if (opt.kind == OptimizerState::Kind::sgd) {
        theta -= opt.learning_rate * gradient;
        ++opt.step;
        return;
    }

    if (opt.first_moment.size() != theta.size() || opt.second_moment.size() != theta.size())
        throw DimensionError("adam moments do not match theta");
    ++opt.step;
    opt.first_moment = opt.beta1 * opt.first_moment + (1.0 - opt.beta1) * gradient;
    opt.second_moment = opt.beta2 * opt.second_moment + (1.0 - opt.beta2) * gradient.cwiseAbs2();
    const double t = static_cast<double>(opt.step);
    const double first_correction = 1.0 - std::pow(opt.beta1, t);
    const double second_correction = 1.0 - std::pow(opt.beta2, t);
    theta.array() -= opt.learning_rate * (opt.first_moment.array() / first_correction) /
                     ((opt.second_moment.array() / second_correction).sqrt() + opt.epsilon);
}

}  // namespace otadsgd
