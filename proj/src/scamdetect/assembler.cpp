// scamdetect: static detection of malicious smart contracts
// Copyright 2026 The scamdetect Authors.
// SPDX-License-Identifier: Apache-2.0

#include "scamdetect/assembler.hpp"
#include "scamdetect/error.hpp"

#include <map>
#include <string>

namespace scamdetect::assembler
{
namespace
{
std::uint8_t width_for(std::uint64_t value) noexcept
{
    std::uint8_t w = 1;
    while (w < 8 && (value >> (8 * w)) != 0)
        ++w;
    return w;
}

std::size_t item_size(const Item& it) noexcept
{
    if (it.is_label_push())
        return 1u + it.width;
    return 1u + it.immediate.size();
}
}  // namespace

Item make_op(std::uint8_t opcode)
{
    return Item{opcode, {}, -1, 0};
}

Item make_push(std::uint64_t value, std::uint8_t width)
{
    if (width == 0)
        width = width_for(value);
    Item it;
    it.opcode = static_cast<std::uint8_t>(op::PUSH0 + width);
    it.immediate.resize(width);
    for (std::size_t i = width; i-- > 0;)
    {
        it.immediate[i] = static_cast<std::uint8_t>(value & 0xff);
        value >>= 8;
    }
    return it;
}

Item make_label_push(int label, std::uint8_t width)
{
    Item it;
    it.label = label;
    it.width = width;
    it.opcode = static_cast<std::uint8_t>(op::PUSH0 + width);
    return it;
}

bytes assemble(std::vector<Block>& blocks)
{
    std::map<int, std::size_t> label_block;
    for (std::size_t i = 0; i < blocks.size(); ++i)
        if (blocks[i].label >= 0)
            label_block[blocks[i].label] = i;
    for (const auto& b : blocks)
        for (const auto& it : b.items)
            if (it.is_label_push() && !label_block.contains(it.label))
                throw Error{ErrorCode::InvalidArgument,
                    "push of undefined label " + std::to_string(it.label)};

    std::vector<std::size_t> starts(blocks.size());
    for (int round = 0;; ++round)
    {
        if (round == kMaxFixpointRounds)
            throw Error{ErrorCode::FixpointDivergence,
                "jump-target widths did not converge in " + std::to_string(kMaxFixpointRounds) +
                    " rounds"};
        std::size_t pc = 0;
        for (std::size_t i = 0; i < blocks.size(); ++i)
        {
            starts[i] = pc;
            for (const auto& it : blocks[i].items)
                pc += item_size(it);
        }
        bool changed = false;
        for (auto& b : blocks)
            for (auto& it : b.items)
            {
                if (!it.is_label_push())
                    continue;
                const auto need = width_for(starts[label_block[it.label]]);
                if (need > it.width)
                {
                    it.width = need;
                    it.opcode = static_cast<std::uint8_t>(op::PUSH0 + need);
                    changed = true;
                }
            }
        if (!changed)
            break;
    }

    bytes out;
    for (const auto& b : blocks)
        for (const auto& it : b.items)
        {
            out.push_back(it.opcode);
            if (it.is_label_push())
            {
                std::uint64_t target = starts[label_block[it.label]];
                bytes imm(it.width);
                for (std::size_t i = it.width; i-- > 0;)
                {
                    imm[i] = static_cast<std::uint8_t>(target & 0xff);
                    target >>= 8;
                }
                out.insert(out.end(), imm.begin(), imm.end());
            }
            else
                out.insert(out.end(), it.immediate.begin(), it.immediate.end());
        }
    return out;
}

}  // namespace scamdetect::assembler
