// scamdetect: static detection of malicious smart contracts
// Copyright 2026 The scamdetect Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "scamdetect/cfg.hpp"

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace scamdetect
{
/// Node feature layout: kNumCategories category frequencies followed by these
/// four scalar slots.
inline constexpr std::size_t kFeatLogSize = kNumCategories;
inline constexpr std::size_t kFeatIsEntry = kNumCategories + 1;
inline constexpr std::size_t kFeatEndsUnresolved = kNumCategories + 2;
inline constexpr std::size_t kFeatExternalCall = kNumCategories + 3;
inline constexpr std::size_t kNodeFeatureDim = kNumCategories + 4;
inline constexpr std::size_t kHistogramDim = 256;

using FeatureRow = std::array<double, kNodeFeatureDim>;
using OpcodeHistogram = std::array<double, kHistogramDim>;

enum class Label : int
{
    Benign = 0,
    Phishing = 1,
};

struct GraphSample
{
    std::string id;
    Label label = Label::Benign;
    std::size_t num_nodes = 0;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    /// num_nodes rows.
    std::vector<FeatureRow> features;
    /// Whole-contract opcode histogram consumed by the baseline model.
    OpcodeHistogram histogram{};
    /// Carried through from the corpus record when assigned.
    std::optional<std::string> split;
};

FeatureRow block_features(const BasicBlock& block, const Cfg& cfg);

OpcodeHistogram opcode_histogram(const InstructionStream& stream);

/// Histogram over every instruction of every block (equal to the stream
/// histogram, since the partition is exact).
OpcodeHistogram opcode_histogram(const Cfg& cfg);

GraphSample graph_sample(const Cfg& cfg, Label label, std::string id);

}  // namespace scamdetect
