// scamdetect: static detection of malicious smart contracts
// Copyright 2026 The scamdetect Authors.
// SPDX-License-Identifier: Apache-2.0

#include "scamdetect/features.hpp"

#include <algorithm>
#include <cmath>

namespace scamdetect
{
namespace
{
bool is_external_call(std::uint8_t opcode) noexcept
{
    return opcode == op::CALL || opcode == op::CALLCODE || opcode == op::DELEGATECALL ||
           opcode == op::STATICCALL;
}
}  // namespace

FeatureRow block_features(const BasicBlock& block, const Cfg& cfg)
{
    FeatureRow row{};
    const auto len = static_cast<double>(block.instructions.size());
    for (const auto& ins : block.instructions)
    {
        row[static_cast<std::size_t>(ins.spec().category)] += 1.0;
        if (is_external_call(ins.opcode))
            row[kFeatExternalCall] = 1.0;
    }
    if (len > 0)
        for (std::size_t c = 0; c < kNumCategories; ++c)
            row[c] /= len;
    row[kFeatLogSize] = std::log1p(len);
    row[kFeatIsEntry] = block.id == 0 ? 1.0 : 0.0;
    for (const auto& e : cfg.edges)
        if (e.from == block.id && e.kind == EdgeKind::Unresolved)
            row[kFeatEndsUnresolved] = 1.0;
    return row;
}

OpcodeHistogram opcode_histogram(const InstructionStream& stream)
{
    OpcodeHistogram h{};
    for (const auto& ins : stream.instructions)
        h[ins.opcode] += 1.0;
    if (!stream.instructions.empty())
    {
        const auto n = static_cast<double>(stream.instructions.size());
        for (auto& v : h)
            v /= n;
    }
    return h;
}

OpcodeHistogram opcode_histogram(const Cfg& cfg)
{
    OpcodeHistogram h{};
    std::size_t n = 0;
    for (const auto& b : cfg.blocks)
        for (const auto& ins : b.instructions)
        {
            h[ins.opcode] += 1.0;
            ++n;
        }
    if (n > 0)
        for (auto& v : h)
            v /= static_cast<double>(n);
    return h;
}

GraphSample graph_sample(const Cfg& cfg, Label label, std::string id)
{
    GraphSample s;
    s.id = std::move(id);
    s.label = label;
    s.num_nodes = cfg.blocks.size() + (cfg.has_unknown_node ? 1 : 0);
    s.features.reserve(s.num_nodes);
    for (const auto& b : cfg.blocks)
        s.features.push_back(block_features(b, cfg));
    if (cfg.has_unknown_node)
        s.features.push_back(FeatureRow{});

    for (const auto& e : cfg.edges)
    {
        const std::size_t to = e.to == kUnknownBlock ? cfg.blocks.size() : e.to;
        const std::pair<std::size_t, std::size_t> p{e.from, to};
        if (std::find(s.edges.begin(), s.edges.end(), p) == s.edges.end())
            s.edges.push_back(p);
    }
    s.histogram = opcode_histogram(cfg);
    return s;
}

}  // namespace scamdetect
