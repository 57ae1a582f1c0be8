// scamdetect: static detection of malicious smart contracts
// Copyright 2026 The scamdetect Authors.
// SPDX-License-Identifier: Apache-2.0

#include "scamdetect/obfuscate.hpp"
#include "scamdetect/assembler.hpp"
#include "scamdetect/cfg.hpp"
#include "scamdetect/error.hpp"
#include "scamdetect/rng.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

namespace scamdetect
{
namespace
{
using assembler::Block;
using assembler::Item;
using assembler::make_label_push;
using assembler::make_op;
using assembler::make_push;

bool ends_unconditionally(const Block& b)
{
    if (b.items.empty())
        return false;
    const auto opc = b.items.back().opcode;
    return opc != op::JUMPI && opcode_info(opc).is_terminator;
}

bool ends_truncated(const Block& b)
{
    if (b.items.empty())
        return false;
    const auto& last = b.items.back();
    return !last.is_label_push() &&
           last.immediate.size() < opcode_info(last.opcode).immediate_len;
}

std::vector<Block> lift(const Cfg& cfg)
{
    std::vector<Block> blocks;
    blocks.reserve(cfg.blocks.size());
    for (const auto& bb : cfg.blocks)
    {
        Block b;
        b.label = static_cast<int>(bb.id);
        for (const auto& ins : bb.instructions)
        {
            Item it = make_op(ins.opcode);
            it.immediate.assign(ins.immediate.begin(), ins.immediate.begin() + ins.raw_immediate_len);
            b.items.push_back(std::move(it));
        }
        blocks.push_back(std::move(b));
    }
    for (const auto& e : cfg.edges)
    {
        if ((e.kind != EdgeKind::Jump && e.kind != EdgeKind::BranchTaken) || e.target_push < 0)
            continue;
        auto& it = blocks[e.from].items[static_cast<std::size_t>(e.target_push)];
        const auto width = static_cast<std::uint8_t>(it.immediate.size());
        it = make_label_push(static_cast<int>(e.to), width);
    }
    return blocks;
}

std::vector<std::size_t> pick_blocks(std::size_t n, double intensity, Rng& rng)
{
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    rng.shuffle(idx);
    const auto k = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::ceil(intensity * static_cast<double>(n))), 1, n);
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    return idx;
}

/// Positions in [lo, hi] where junk may be inserted without separating a
/// leading JUMPDEST from its block or a jump-target PUSH from its jump.
std::pair<std::size_t, std::size_t> junk_window(const Block& b)
{
    const auto& items = b.items;
    const std::size_t lo = !items.empty() && items.front().opcode == op::JUMPDEST ? 1 : 0;
    std::size_t hi = items.size();
    for (std::size_t i = 0; i < items.size(); ++i)
        if (items[i].is_label_push())
        {
            hi = i;
            break;
        }
    if (hi == items.size() && !items.empty())
    {
        const auto& last = items.back();
        if (opcode_info(last.opcode).is_terminator || ends_truncated(b))
            hi = items.size() - 1;
    }
    return {lo, std::max(lo, hi)};
}

void junk_pass(std::vector<Block>& blocks, double intensity, Rng& rng)
{
    for (auto bi : pick_blocks(blocks.size(), intensity, rng))
    {
        auto& b = blocks[bi];
        const auto count = 1 + rng.below(3);
        for (std::uint64_t n = 0; n < count; ++n)
        {
            const auto [lo, hi] = junk_window(b);
            const auto pos = static_cast<std::ptrdiff_t>(lo + rng.below(hi - lo + 1));
            if (rng.chance(0.7))
            {
                const Item pair[] = {make_push(rng.byte(), 1), make_op(op::POP)};
                b.items.insert(b.items.begin() + pos, std::begin(pair), std::end(pair));
            }
            else
                b.items.insert(b.items.begin() + pos, make_op(op::JUMPDEST));
        }
    }
}

bool is_commutative(std::uint8_t opc)
{
    return opc == op::ADD || opc == op::MUL || opc == op::AND || opc == op::OR ||
           opc == op::XOR || opc == op::EQ;
}

bool is_zero_push(const Item& it)
{
    if (!it.is_raw_push())
        return false;
    if (it.opcode == op::PUSH0)
        return true;
    return it.opcode == op::PUSH1 && it.immediate.size() == 1 && it.immediate[0] == 0;
}

/// Rewrite one site at items[i]; returns the number of items now occupying
/// the site, or 0 if the item is not a catalog site.
std::size_t substitute_at(std::vector<Item>& items, std::size_t i)
{
    const auto at = items.begin() + static_cast<std::ptrdiff_t>(i);
    if (is_zero_push(items[i]))
    {
        const Item rewrite[] = {make_push(1, 1), make_push(1, 1), make_op(op::SUB)};
        items.erase(at);
        items.insert(items.begin() + static_cast<std::ptrdiff_t>(i), std::begin(rewrite),
            std::end(rewrite));
        return 3;
    }
    if (items[i].is_raw_push() &&
        items[i].immediate.size() == opcode_info(items[i].opcode).immediate_len)
    {
        const Item noop[] = {make_op(op::DUP1), make_op(op::POP)};
        items.insert(at + 1, std::begin(noop), std::end(noop));
        return 3;
    }
    if (is_commutative(items[i].opcode))
    {
        items.insert(at, make_op(op::SWAP1));
        return 2;
    }
    return 0;
}

void substitute_pass(std::vector<Block>& blocks, double intensity, Rng& rng)
{
    bool any = false;
    std::size_t first_block = blocks.size(), first_item = 0;
    for (auto bi : pick_blocks(blocks.size(), intensity, rng))
    {
        auto& items = blocks[bi].items;
        for (std::size_t i = 0; i < items.size();)
        {
            std::vector<Item> probe{items[i]};
            const bool site = substitute_at(probe, 0) > 0;
            if (!site)
            {
                ++i;
                continue;
            }
            if (first_block == blocks.size())
            {
                first_block = bi;
                first_item = i;
            }
            if (rng.chance(0.5))
            {
                i += substitute_at(items, i);
                any = true;
            }
            else
                ++i;
        }
    }
    if (!any && first_block < blocks.size())
        substitute_at(blocks[first_block].items, first_item);
}

void ensure_jumpdest(Block& b)
{
    if (b.items.empty() || b.items.front().opcode != op::JUMPDEST)
        b.items.insert(b.items.begin(), make_op(op::JUMPDEST));
}

void reorder_pass(std::vector<Block>& blocks, Rng& rng)
{
    const std::size_t n = blocks.size();
    if (n < 3)
        return;
    const bool pin_last = ends_truncated(blocks.back());
    const std::size_t movable_end = pin_last ? n - 1 : n;
    // Entry plus at most one movable block: nothing to permute.
    if (movable_end < 3)
        return;

    std::vector<std::size_t> order(movable_end - 1);
    std::iota(order.begin(), order.end(), 1);
    rng.shuffle(order);
    if (std::is_sorted(order.begin(), order.end()))
        std::rotate(order.begin(), order.begin() + 1, order.end());
    order.insert(order.begin(), 0);
    if (pin_last)
        order.push_back(n - 1);

    // Successor each block reaches by falling through in the current layout.
    std::vector<std::ptrdiff_t> next(n, -1);
    for (std::size_t i = 0; i < n; ++i)
        if (!ends_unconditionally(blocks[i]))
            next[i] = i + 1 < n ? static_cast<std::ptrdiff_t>(i + 1) : -1;

    std::vector<bool> needs_dest(n, false);
    for (std::size_t pos = 0; pos < n; ++pos)
    {
        const std::size_t bi = order[pos];
        if (ends_unconditionally(blocks[bi]) || ends_truncated(blocks[bi]))
            continue;
        const std::ptrdiff_t physical_next =
            pos + 1 < n ? static_cast<std::ptrdiff_t>(order[pos + 1]) : -1;
        if (next[bi] == physical_next)
            continue;
        if (next[bi] < 0)
        {
            // Fell off the end of code: an explicit STOP is equivalent.
            blocks[bi].items.push_back(make_op(op::STOP));
            continue;
        }
        const auto target = static_cast<std::size_t>(next[bi]);
        needs_dest[target] = true;
        blocks[bi].items.push_back(make_label_push(blocks[target].label, 2));
        blocks[bi].items.push_back(make_op(op::JUMP));
    }
    for (std::size_t i = 0; i < n; ++i)
        if (needs_dest[i])
            ensure_jumpdest(blocks[i]);

    std::vector<Block> reordered;
    reordered.reserve(n);
    for (auto bi : order)
        reordered.push_back(std::move(blocks[bi]));
    blocks = std::move(reordered);
}
}  // namespace

std::string_view obf_pass_name(ObfPass p) noexcept
{
    switch (p)
    {
    case ObfPass::Junk:
        return "junk";
    case ObfPass::Reorder:
        return "reorder";
    case ObfPass::Substitute:
        return "substitute";
    }
    return "junk";
}

std::vector<ObfPass> parse_passes(std::string_view csv)
{
    std::vector<ObfPass> out;
    while (!csv.empty())
    {
        const auto comma = csv.find(',');
        auto tok = csv.substr(0, comma);
        csv = comma == std::string_view::npos ? std::string_view{} : csv.substr(comma + 1);
        while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.front())))
            tok.remove_prefix(1);
        while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.back())))
            tok.remove_suffix(1);
        if (tok.empty())
            continue;
        std::string name{tok};
        for (auto& c : name)
            c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        bool found = false;
        for (auto p : {ObfPass::Junk, ObfPass::Reorder, ObfPass::Substitute})
            if (obf_pass_name(p) == name)
            {
                out.push_back(p);
                found = true;
            }
        if (!found)
            throw Error{ErrorCode::InvalidArgument, "unknown pass '" + std::string{tok} + "'"};
    }
    return out;
}

bytes obfuscate(bytes_view code, const ObfConfig& config)
{
    if (config.passes.empty() || code.empty())
        return {code.begin(), code.end()};
    if (!(config.intensity > 0.0 && config.intensity <= 1.0))
        throw Error{ErrorCode::InvalidArgument, "intensity must be in (0, 1]"};

    const Cfg cfg = build_cfg(code);
    if (const auto unresolved = cfg.num_unresolved(); unresolved > 0)
        throw Error{ErrorCode::UnresolvableJumps,
            std::to_string(unresolved) + " unresolved jump(s); refusing to rewrite"};

    auto blocks = lift(cfg);
    for (std::size_t i = 0; i < config.passes.size(); ++i)
    {
        Rng rng = Rng::derive(config.seed, i);
        switch (config.passes[i])
        {
        case ObfPass::Junk:
            junk_pass(blocks, config.intensity, rng);
            break;
        case ObfPass::Reorder:
            reorder_pass(blocks, rng);
            break;
        case ObfPass::Substitute:
            substitute_pass(blocks, config.intensity, rng);
            break;
        }
    }
    return assembler::assemble(blocks);
}

}  // namespace scamdetect
