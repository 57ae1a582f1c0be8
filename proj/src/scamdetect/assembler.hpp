// scamdetect: static detection of malicious smart contracts
// Copyright 2026 The scamdetect Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "scamdetect/disasm.hpp"

#include <cstdint>
#include <vector>

namespace scamdetect::assembler
{
/// One instruction, or a PUSH whose immediate is the start offset of the
/// block carrying `label`.
struct Item
{
    std::uint8_t opcode = 0;
    /// Raw immediate bytes (may be shorter than the opcode's width for a
    /// truncated trailing PUSH). Unused for label pushes.
    bytes immediate;
    int label = -1;
    /// Label pushes: current immediate width in bytes (only ever grows).
    std::uint8_t width = 0;

    [[nodiscard]] bool is_label_push() const noexcept { return label >= 0; }
    [[nodiscard]] bool is_raw_push() const noexcept { return label < 0 && is_push(opcode); }
};

Item make_op(std::uint8_t opcode);
Item make_push(std::uint64_t value, std::uint8_t width = 0);
Item make_label_push(int label, std::uint8_t width = 2);

struct Block
{
    int label = -1;
    std::vector<Item> items;
};

inline constexpr int kMaxFixpointRounds = 16;

/// Lay out blocks in order and patch label pushes, widening any PUSH whose
/// target no longer fits until offsets are stable. Throws
/// Error{FixpointDivergence} after kMaxFixpointRounds, Error{InvalidArgument}
/// for a dangling label.
bytes assemble(std::vector<Block>& blocks);

}  // namespace scamdetect::assembler
