// scamdetect: static detection of malicious smart contracts
// Copyright 2026 The scamdetect Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "scamdetect/disasm.hpp"

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace scamdetect
{
enum class Terminator : std::uint8_t
{
    Jump,
    Branch,
    Stop,
    Return,
    Revert,
    SelfDestruct,
    Invalid,
    /// Last block of the code without a terminating opcode.
    FallOff,
    /// Block cut short by a following JUMPDEST; control continues into it.
    Fallthrough,
};

enum class EdgeKind : std::uint8_t
{
    Fallthrough,
    Jump,
    BranchTaken,
    BranchNotTaken,
    Unresolved,
};

std::string_view terminator_name(Terminator t) noexcept;
std::string_view edge_kind_name(EdgeKind k) noexcept;

using BlockId = std::uint32_t;
inline constexpr BlockId kUnknownBlock = std::numeric_limits<BlockId>::max();

struct BasicBlock
{
    BlockId id = 0;
    std::size_t start_offset = 0;
    std::vector<Instruction> instructions;
    Terminator terminator = Terminator::FallOff;

    /// Byte offset one past the last instruction.
    [[nodiscard]] std::size_t end_offset() const noexcept
    {
        const auto& last = instructions.back();
        return last.offset + 1 + last.spec().immediate_len;
    }
};

struct CfgEdge
{
    BlockId from = 0;
    BlockId to = 0;
    EdgeKind kind = EdgeKind::Fallthrough;
    /// For Jump/BranchTaken edges: index (within the source block) of the
    /// PUSH instruction whose immediate supplied the target; -1 otherwise.
    int target_push = -1;

    friend bool operator==(const CfgEdge& a, const CfgEdge& b)
    {
        return a.from == b.from && a.to == b.to && a.kind == b.kind;
    }
};

struct Cfg
{
    std::vector<BasicBlock> blocks;
    std::vector<CfgEdge> edges;
    bool has_unknown_node = false;

    /// Id used for the UNKNOWN sink when the graph is materialized as nodes.
    [[nodiscard]] BlockId unknown_id() const noexcept { return static_cast<BlockId>(blocks.size()); }
    [[nodiscard]] std::size_t num_unresolved() const noexcept;
};

/// Split the stream at offset 0, at every JUMPDEST and after every terminator.
/// Throws Error{EmptyStream} for an empty stream.
std::vector<BasicBlock> partition_blocks(const InstructionStream& stream);

/// Intra-block constant tracking of jump targets.
Cfg resolve_jumps(std::vector<BasicBlock> blocks);

/// disassemble + partition + resolve.
Cfg build_cfg(bytes_view code);

enum class CfgFormat
{
    Dot,
    Json,
};

std::string export_cfg(const Cfg& cfg, CfgFormat format);

}  // namespace scamdetect
