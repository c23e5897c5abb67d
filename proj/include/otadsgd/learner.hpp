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

// Single-layer softmax classifier trained with cross-entropy.
//
// Parameter layout: theta is the column-major flattening of an (F+1) x C
// matrix, i.e. class-major with the F weights of class c followed by its
// bias at offset c * (F + 1) + F.

#ifndef OTADSGD_LEARNER_HPP
#define OTADSGD_LEARNER_HPP

#include "otadsgd/common.hpp"

#include <span>
#include <vector>

namespace otadsgd {

/// Labelled samples held by one device (or a train/test set).
struct LocalDataset {
    Eigen::MatrixXd features;  // one sample per row
    Eigen::VectorXi labels;
    int classes = 0;
    int device_id = -1;
    std::vector<Index> source_indices;  // rows of the parent set, when partitioned

    Index size() const { return features.rows(); }
    Index feature_dim() const { return features.cols(); }

    /// Throws on empty sets, shape disagreement or labels outside [0, classes).
    void validate() const;
};

inline Index parameter_count(Index features, Index classes) { return (features + 1) * classes; }

/// Mean cross-entropy of the softmax model over the selected rows (all rows when empty).
double cross_entropy_loss(const Eigen::VectorXd& theta, const LocalDataset& data,
                          std::span<const Index> batch = {});

/// Mean cross-entropy gradient over the selected rows (all rows when empty).
Eigen::VectorXd local_gradient(const Eigen::VectorXd& theta, const LocalDataset& data,
                               std::span<const Index> batch = {});

/// Class scores for every row of `features`, rows x C.
Eigen::MatrixXd logits(const Eigen::VectorXd& theta, const Eigen::MatrixXd& features, int classes);

/// Fraction of argmax-correct predictions; ties go to the lowest class index.
double evaluate_accuracy(const Eigen::VectorXd& theta, const LocalDataset& test);

struct OptimizerState {
    enum class Kind { sgd, adam };

    Kind kind = Kind::adam;
    double learning_rate = 1.0e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1.0e-8;
    Eigen::VectorXd first_moment;
    Eigen::VectorXd second_moment;
    std::int64_t step = 0;

    static OptimizerState sgd(double learning_rate);
    static OptimizerState adam(Index d, double learning_rate = 1.0e-3, double beta1 = 0.9, double beta2 = 0.999,
                               double epsilon = 1.0e-8);
};

/// One optimizer step with the (estimated) average gradient, in place.
/// A non-finite gradient throws std::invalid_argument and leaves theta and opt untouched.
void apply_update(Eigen::VectorXd& theta, const Eigen::VectorXd& gradient, OptimizerState& opt);

}  // namespace otadsgd

#endif  // OTADSGD_LEARNER_HPP
