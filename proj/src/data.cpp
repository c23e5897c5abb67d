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

#include "otadsgd/data.hpp"

#include "otadsgd/philox.hpp"

#include <fstream>
#include <iterator>
#include <numeric>

namespace otadsgd {

namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;
constexpr int kIdxClasses = 10;

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IdxError(IdxError::Kind::io, "cannot open IDX file " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t read_be32(const std::vector<std::uint8_t>& bytes, std::size_t offset,
                        const std::filesystem::path& path) {
    if (offset + 4 > bytes.size())
        throw IdxError(IdxError::Kind::truncated, "IDX header truncated in " + path.string());
    return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
           (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

struct IdxBlob {
    std::vector<std::uint32_t> dims;
    std::vector<std::uint8_t> bytes;
    std::size_t payload_offset = 0;
};

IdxBlob read_idx(const std::filesystem::path& path, std::uint32_t expected_magic) {
    IdxBlob blob;
    blob.bytes = read_file(path);
    const std::uint32_t magic = read_be32(blob.bytes, 0, path);
    if (magic != expected_magic)
        throw IdxError(IdxError::Kind::bad_magic, "unexpected IDX magic in " + path.string());
    const std::size_t rank = magic & 0xFF;
    std::size_t payload = 1;
    for (std::size_t r = 0; r < rank; ++r) {
        blob.dims.push_back(read_be32(blob.bytes, 4 + 4 * r, path));
        payload *= blob.dims.back();
    }
    blob.payload_offset = 4 + 4 * rank;
    if (blob.bytes.size() < blob.payload_offset + payload)
        throw IdxError(IdxError::Kind::truncated, "IDX payload truncated in " + path.string());
    return blob;
}

void write_be32(std::ofstream& out, std::uint32_t v) {
    const char b[4] = {static_cast<char>(v >> 24), static_cast<char>(v >> 16), static_cast<char>(v >> 8),
                       static_cast<char>(v)};
    out.write(b, 4);
}

}  // namespace

LocalDataset load_idx(const std::filesystem::path& images, const std::filesystem::path& labels,
                      Normalization normalization) {
    const IdxBlob img = read_idx(images, kImageMagic);
    const IdxBlob lab = read_idx(labels, kLabelMagic);
    if (img.dims[0] != lab.dims[0])
        throw IdxError(IdxError::Kind::count_mismatch, "IDX image count " + std::to_string(img.dims[0]) +
                                                           " differs from label count " +
                                                           std::to_string(lab.dims[0]));

    const Index count = img.dims[0];
    const Index pixels = Index{img.dims[1]} * Index{img.dims[2]};
    const double scale = normalization == Normalization::scale_to_unit ? 1.0 / 255.0 : 1.0;

    LocalDataset data;
    data.classes = kIdxClasses;
    data.features.resize(count, pixels);
    data.labels.resize(count);
    const std::uint8_t* px = img.bytes.data() + img.payload_offset;
    for (Index r = 0; r < count; ++r)
        for (Index c = 0; c < pixels; ++c) data.features(r, c) = scale * px[r * pixels + c];
    for (Index r = 0; r < count; ++r) {
        const int label = lab.bytes[lab.payload_offset + static_cast<std::size_t>(r)];
        if (label >= kIdxClasses)
            throw IdxError(IdxError::Kind::bad_label, "IDX label " + std::to_string(label) + " outside [0, 10)");
        data.labels(r) = label;
    }
    return data;
}

void write_idx(const std::filesystem::path& path, std::span<const std::uint8_t> data,
               std::span<const std::uint32_t> dims) {
    if (dims.empty() || dims.size() > 255) throw std::invalid_argument("write_idx: bad rank");
    const std::size_t payload =
        std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<std::size_t>());
    if (payload != data.size()) throw DimensionError("write_idx: data size does not match dims");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IdxError(IdxError::Kind::io, "cannot write IDX file " + path.string());
    write_be32(out, 0x00000800u | static_cast<std::uint32_t>(dims.size()));
    for (std::uint32_t d : dims) write_be32(out, d);
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
}

std::pair<LocalDataset, LocalDataset> make_synthetic(const SyntheticSource& spec) {
    if (spec.classes < 2) throw std::invalid_argument("synthetic: need at least two classes");
    if (spec.features < 1) throw std::invalid_argument("synthetic: need at least one feature");
    if (spec.train_per_class < 1 || spec.test_per_class < 1)
        throw std::invalid_argument("synthetic: per-class sample counts must be positive");
    if (!(spec.separation >= 0.0)) throw std::invalid_argument("synthetic: separation must be nonnegative");

    Eigen::MatrixXd means(spec.classes, spec.features);
    PhiloxStream mean_stream(spec.seed, StreamTag::synthetic_means, 0);
    for (int c = 0; c < spec.classes; ++c) {
        for (Index f = 0; f < spec.features; ++f) means(c, f) = mean_stream.next_normal();
        means.row(c) *= spec.separation / means.row(c).norm();
    }

    auto draw = [&](Index per_class, StreamTag tag) {
        LocalDataset set;
        set.classes = spec.classes;
        const Index rows = per_class * spec.classes;
        set.features.resize(rows, spec.features);
        set.labels.resize(rows);
        PhiloxStream stream(spec.seed, tag, 0);
        for (Index r = 0; r < rows; ++r) {
            const int label = static_cast<int>(r % spec.classes);
            set.labels(r) = label;
            for (Index f = 0; f < spec.features; ++f) set.features(r, f) = means(label, f) + stream.next_normal();
        }
        return set;
    };
    return {draw(spec.train_per_class, StreamTag::synthetic_train), draw(spec.test_per_class, StreamTag::synthetic_test)};
}

std::pair<LocalDataset, LocalDataset> load_dataset(const DatasetSpec& spec) {
    if (const auto* idx = std::get_if<IdxSource>(&spec.source)) {
        return {load_idx(idx->train_images, idx->train_labels, spec.normalization),
                load_idx(idx->test_images, idx->test_labels, spec.normalization)};
    }
    auto sets = make_synthetic(std::get<SyntheticSource>(spec.source));
    if (spec.normalization == Normalization::scale_to_unit) {
        // One affine map per feature, shared by both splits, onto [0, 1].
        auto& [train, test] = sets;
        const Eigen::RowVectorXd lo = train.features.colwise().minCoeff().cwiseMin(test.features.colwise().minCoeff());
        const Eigen::RowVectorXd hi = train.features.colwise().maxCoeff().cwiseMax(test.features.colwise().maxCoeff());
        const Eigen::RowVectorXd width = (hi - lo).unaryExpr([](double w) { return w > 0.0 ? w : 1.0; });
        for (LocalDataset* set : {&train, &test})
            set->features = (set->features.rowwise() - lo).array().rowwise() / width.array();
    }
    return sets;
}

std::vector<LocalDataset> partition(const LocalDataset& train, Index devices, Index per_device,
                                    std::uint64_t seed) {
    if (devices < 1) throw std::invalid_argument("partition: need at least one device");
    if (per_device < 1) throw std::invalid_argument("partition: per-device sample count must be positive");
    if (per_device > train.size())
        throw std::invalid_argument("partition: per-device count " + std::to_string(per_device) +
                                    " exceeds dataset size " + std::to_string(train.size()));

    std::vector<LocalDataset> shards;
    shards.reserve(static_cast<std::size_t>(devices));
    std::vector<Index> order(static_cast<std::size_t>(train.size()));
    for (Index m = 0; m < devices; ++m) {
        std::iota(order.begin(), order.end(), Index{0});
        PhiloxStream stream(seed, StreamTag::partition, static_cast<std::uint32_t>(m));
        // Partial Fisher-Yates: the first per_device slots become a uniform sample without replacement.
        for (Index j = 0; j < per_device; ++j) {
            const auto pick = j + static_cast<Index>(stream.next_below(static_cast<std::uint64_t>(train.size() - j)));
            std::swap(order[static_cast<std::size_t>(j)], order[static_cast<std::size_t>(pick)]);
        }

        LocalDataset shard;
        shard.classes = train.classes;
        shard.device_id = static_cast<int>(m);
        shard.features.resize(per_device, train.feature_dim());
        shard.labels.resize(per_device);
        shard.source_indices.assign(order.begin(), order.begin() + per_device);
        for (Index j = 0; j < per_device; ++j) {
            shard.features.row(j) = train.features.row(shard.source_indices[static_cast<std::size_t>(j)]);
            shard.labels(j) = train.labels(shard.source_indices[static_cast<std::size_t>(j)]);
        }
        shards.push_back(std::move(shard));
    }
    return shards;
}

}  // namespace otadsgd
