// scamdetect: static detection of malicious smart contracts
// Copyright 2026 The scamdetect Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "oracles/dense_oracle.hpp"

#include "scamdetect/disasm.hpp"
#include "scamdetect/features.hpp"
#include "scamdetect/matrix.hpp"
#include "scamdetect/model.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

namespace testgen
{
using scamdetect::bytes;
using scamdetect::DenseMatrix;
using scamdetect::GraphSample;

using Engine = std::mt19937_64;

inline std::size_t pick(Engine& e, std::size_t lo, std::size_t hi)
{
    return std::uniform_int_distribution<std::size_t>{lo, hi}(e);
}

inline double real(Engine& e, double lo, double hi)
{
    return std::uniform_real_distribution<double>{lo, hi}(e);
}

inline bytes random_bytes(Engine& e, std::size_t max_len)
{
    bytes out(pick(e, 0, max_len));
    for (auto& b : out)
        b = static_cast<std::uint8_t>(pick(e, 0, 255));
    return out;
}

/// Random graph with N in [1, max_nodes], feature rows in [0, 1] and an
/// occasional self-loop or repeated edge in the raw edge list.
inline GraphSample random_sample(Engine& e, std::size_t max_nodes)
{
    GraphSample s;
    s.id = "g";
    s.num_nodes = pick(e, 1, max_nodes);
    s.label = pick(e, 0, 1) ? scamdetect::Label::Phishing : scamdetect::Label::Benign;
    const std::size_t m = pick(e, 0, 2 * s.num_nodes);
    for (std::size_t k = 0; k < m; ++k)
    {
        std::pair<std::size_t, std::size_t> p{pick(e, 0, s.num_nodes - 1), pick(e, 0, s.num_nodes - 1)};
        if (std::find(s.edges.begin(), s.edges.end(), p) == s.edges.end())
            s.edges.push_back(p);
    }
    s.features.resize(s.num_nodes);
    for (auto& row : s.features)
        for (auto& v : row)
            v = real(e, 0.0, 1.0);
    double total = 0.0;
    for (auto& v : s.histogram)
    {
        v = pick(e, 0, 3) == 0 ? real(e, 0.0, 1.0) : 0.0;
        total += v;
    }
    if (total > 0.0)
        for (auto& v : s.histogram)
            v /= total;
    return s;
}

/// Relabel node i as perm[i].
inline GraphSample permute(const GraphSample& s, const std::vector<std::size_t>& perm)
{
    GraphSample out = s;
    for (std::size_t i = 0; i < s.num_nodes; ++i)
        out.features[perm[i]] = s.features[i];
    out.edges.clear();
    for (const auto& [u, v] : s.edges)
        out.edges.emplace_back(perm[u], perm[v]);
    // Edge order should not matter either.
    std::reverse(out.edges.begin(), out.edges.end());
    return out;
}

inline std::vector<std::size_t> random_permutation(Engine& e, std::size_t n)
{
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), e);
    return p;
}

inline DenseMatrix random_matrix(Engine& e, std::size_t r, std::size_t c, double scale = 1.0)
{
    DenseMatrix m{r, c};
    for (auto& v : m.data())
        v = real(e, -scale, scale);
    return m;
}

inline oracle::Mat to_oracle(const DenseMatrix& m)
{
    oracle::Mat out(m.rows(), std::vector<double>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            out[i][j] = m(i, j);
    return out;
}

inline oracle::Mat features_of(const GraphSample& s)
{
    oracle::Mat out;
    for (const auto& row : s.features)
        out.emplace_back(row.begin(), row.end());
    return out;
}

inline double max_diff(const DenseMatrix& a, const oracle::Mat& b)
{
    if (a.rows() != b.size())
        return 1e300;
    double d = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
    {
        if (b[i].size() != a.cols())
            return 1e300;
        for (std::size_t j = 0; j < a.cols(); ++j)
            d = std::max(d, std::abs(a(i, j) - b[i][j]));
    }
    return d;
}

inline std::map<std::string, oracle::Mat> named(const scamdetect::ModelParams& p)
{
    std::map<std::string, oracle::Mat> out;
    for (const auto& l : p.layers)
        out[l.name] = to_oracle(l.value);
    return out;
}

/// A contract of `blocks` blocks, each ending `PUSHn <JUMPDEST>; JUMP` (the
/// last one STOPs). Filler is straight-line code with random PUSH data.
struct IdiomContract
{
    bytes code;
    /// Offsets of the JUMP instructions and the JUMPDEST each one targets.
    std::vector<std::pair<std::size_t, std::size_t>> sites;
};

inline IdiomContract idiom_contract(Engine& e, std::size_t blocks)
{
    static constexpr std::uint8_t kFiller[] = {0x01, 0x02, 0x03, 0x10, 0x16, 0x19, 0x35, 0x36,
        0x50, 0x51, 0x52, 0x54, 0x55, 0x80, 0x81, 0x90, 0x91, 0x30, 0x33, 0x42};
    struct Plan
    {
        bytes body;
        std::size_t width = 0;
        std::size_t target = 0;
    };
    std::vector<Plan> plan(blocks);
    for (auto& p : plan)
    {
        const std::size_t n = pick(e, 0, 6);
        for (std::size_t k = 0; k < n; ++k)
        {
            if (pick(e, 0, 3) == 0)
            {
                const std::size_t w = pick(e, 1, 4);
                p.body.push_back(static_cast<std::uint8_t>(0x5f + w));
                for (std::size_t i = 0; i < w; ++i)
                    p.body.push_back(static_cast<std::uint8_t>(pick(e, 0, 255)));
            }
            else
                p.body.push_back(kFiller[pick(e, 0, std::size(kFiller) - 1)]);
        }
        p.width = pick(e, 2, 4);
        p.target = pick(e, 0, blocks - 1);
    }
    std::vector<std::size_t> start(blocks);
    std::size_t off = 0;
    for (std::size_t b = 0; b < blocks; ++b)
    {
        start[b] = off;
        off += 1 + plan[b].body.size() + (b + 1 < blocks ? 1 + plan[b].width + 1 : 1);
    }
    IdiomContract out;
    for (std::size_t b = 0; b < blocks; ++b)
    {
        out.code.push_back(0x5b);
        out.code.insert(out.code.end(), plan[b].body.begin(), plan[b].body.end());
        if (b + 1 == blocks)
        {
            out.code.push_back(0x00);
            break;
        }
        const std::size_t dest = start[plan[b].target];
        out.code.push_back(static_cast<std::uint8_t>(0x5f + plan[b].width));
        for (std::size_t i = plan[b].width; i-- > 0;)
            out.code.push_back(static_cast<std::uint8_t>((dest >> (8 * i)) & 0xff));
        out.sites.emplace_back(out.code.size(), dest);
        out.code.push_back(0x56);
    }
    return out;
}

}  // namespace testgen
