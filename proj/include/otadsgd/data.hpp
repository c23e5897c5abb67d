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

#ifndef OTADSGD_DATA_HPP
#define OTADSGD_DATA_HPP

#include "otadsgd/learner.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace otadsgd {

enum class Normalization { none, scale_to_unit };

/// MNIST-style IDX files for the training and test splits.
struct IdxSource {
    std::filesystem::path train_images;
    std::filesystem::path train_labels;
    std::filesystem::path test_images;
    std::filesystem::path test_labels;
};

/// Gaussian class clusters: class c has mean `separation * u_c` with u_c a
/// random unit vector, and every sample adds standard normal noise.
struct SyntheticSource {
    int classes = 10;
    Index features = 32;
    Index train_per_class = 600;
    Index test_per_class = 200;
    double separation = 4.0;
    std::uint64_t seed = 1;
};

struct DatasetSpec {
    std::variant<IdxSource, SyntheticSource> source = SyntheticSource{};
    Normalization normalization = Normalization::scale_to_unit;
};

class IdxError : public std::runtime_error {
public:
    enum class Kind { io, bad_magic, truncated, count_mismatch, bad_label };

    IdxError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

/// Reads an image file (magic 0x00000803) and a label file (magic 0x00000801).
/// Labels must lie in [0, 10). Pixels are row-major per image.
LocalDataset load_idx(const std::filesystem::path& images, const std::filesystem::path& labels,
                      Normalization normalization = Normalization::scale_to_unit);

/// Writes unsigned-byte IDX data: `dims` are the big-endian dimension sizes.
void write_idx(const std::filesystem::path& path, std::span<const std::uint8_t> data,
               std::span<const std::uint32_t> dims);

/// Train and test sets drawn from the same cluster means, deterministic in the seed field.
std::pair<LocalDataset, LocalDataset> make_synthetic(const SyntheticSource& spec);

/// Loads or generates the (train, test) pair it describes. For synthetic
/// data, scale_to_unit maps each feature affinely onto [0, 1] over both splits.
std::pair<LocalDataset, LocalDataset> load_dataset(const DatasetSpec& spec);

/// Gives each of `devices` devices `per_device` distinct rows of `train`,
/// drawn independently per device: devices may share rows and some rows may
/// stay unassigned.
std::vector<LocalDataset> partition(const LocalDataset& train, Index devices, Index per_device,
                                    std::uint64_t seed);

}  // namespace otadsgd

#endif  // OTADSGD_DATA_HPP
