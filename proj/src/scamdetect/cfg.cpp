// scamdetect: static detection of malicious smart contracts
// Copyright 2026 The scamdetect Authors.
// SPDX-License-Identifier: Apache-2.0

#include "scamdetect/cfg.hpp"
#include "scamdetect/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <optional>
#include <sstream>

namespace scamdetect
{
namespace
{
Terminator terminator_for(const Instruction& last, bool is_final_block)
{
    switch (last.opcode)
    {
    case op::JUMP:
        return Terminator::Jump;
    case op::JUMPI:
        return Terminator::Branch;
    case op::STOP:
        return Terminator::Stop;
    case op::RETURN:
        return Terminator::Return;
    case op::REVERT:
        return Terminator::Revert;
    case op::SELFDESTRUCT:
        return Terminator::SelfDestruct;
    default:
        break;
    }
    if (last.spec().is_terminator)
        return Terminator::Invalid;
    return is_final_block ? Terminator::FallOff : Terminator::Fallthrough;
}

/// Abstract stack slot: a known constant (with the PUSH that produced it) or
/// an unknown value.
struct Slot
{
    // Constants that cannot be a code offset saturate to this value.
    static constexpr std::uint64_t kHuge = std::numeric_limits<std::uint64_t>::max();

    std::optional<std::uint64_t> value;
    int origin = -1;
};

Slot push_value(const Instruction& ins, int index)
{
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < ins.immediate.size(); ++i)
    {
        if (v > (Slot::kHuge >> 8))
            return {Slot::kHuge, index};
        v = (v << 8) | ins.immediate[i];
    }
    return {v, index};
}

class AbstractStack
{
public:
    Slot pop()
    {
        if (slots_.empty())
            return {};
        Slot s = slots_.back();
        slots_.pop_back();
        return s;
    }

    void push(Slot s) { slots_.push_back(s); }

    // Values below the block entry are unknown; materialize them on demand.
    void ensure_depth(std::size_t depth)
    {
        if (slots_.size() < depth)
            slots_.insert(slots_.begin(), depth - slots_.size(), Slot{});
    }

    void dup(std::size_t n)
    {
        ensure_depth(n);
        slots_.push_back(slots_[slots_.size() - n]);
    }

    void swap(std::size_t n)
    {
        ensure_depth(n + 1);
        std::swap(slots_.back(), slots_[slots_.size() - 1 - n]);
    }

private:
    std::vector<Slot> slots_;
};
}  // namespace

std::string_view terminator_name(Terminator t) noexcept
{
    switch (t)
    {
    case Terminator::Jump:
        return "jump";
    case Terminator::Branch:
        return "branch";
    case Terminator::Stop:
        return "stop";
    case Terminator::Return:
        return "return";
    case Terminator::Revert:
        return "revert";
    case Terminator::SelfDestruct:
        return "selfdestruct";
    case Terminator::Invalid:
        return "invalid";
    case Terminator::FallOff:
        return "falloff";
    case Terminator::Fallthrough:
        return "fallthrough";
    }
    return "invalid";
}

std::string_view edge_kind_name(EdgeKind k) noexcept
{
    switch (k)
    {
    case EdgeKind::Fallthrough:
        return "fallthrough";
    case EdgeKind::Jump:
        return "jump";
    case EdgeKind::BranchTaken:
        return "branch_taken";
    case EdgeKind::BranchNotTaken:
        return "branch_not_taken";
    case EdgeKind::Unresolved:
        return "unresolved";
    }
    return "unresolved";
}

std::size_t Cfg::num_unresolved() const noexcept
{
    return static_cast<std::size_t>(std::count_if(edges.begin(), edges.end(),
        [](const CfgEdge& e) { return e.kind == EdgeKind::Unresolved; }));
}

std::vector<BasicBlock> partition_blocks(const InstructionStream& stream)
{
    if (stream.instructions.empty())
        throw Error{ErrorCode::EmptyStream, "cannot partition an empty instruction stream"};

    std::vector<BasicBlock> blocks;
    bool start_new = true;
    for (const auto& ins : stream.instructions)
    {
        if (ins.opcode == op::JUMPDEST)
            start_new = true;
        if (start_new)
        {
            BasicBlock b;
            b.id = static_cast<BlockId>(blocks.size());
            b.start_offset = ins.offset;
            blocks.push_back(std::move(b));
            start_new = false;
        }
        blocks.back().instructions.push_back(ins);
        if (ins.spec().is_terminator)
            start_new = true;
    }
    for (std::size_t i = 0; i < blocks.size(); ++i)
        blocks[i].terminator =
            terminator_for(blocks[i].instructions.back(), i + 1 == blocks.size());
    return blocks;
}

Cfg resolve_jumps(std::vector<BasicBlock> blocks)
{
    Cfg cfg;
    cfg.blocks = std::move(blocks);
    const auto& bl = cfg.blocks;

    auto block_at = [&](std::uint64_t offset) -> BlockId {
        auto it = std::lower_bound(bl.begin(), bl.end(), offset,
            [](const BasicBlock& b, std::uint64_t off) { return b.start_offset < off; });
        if (it == bl.end() || it->start_offset != offset ||
            it->instructions.front().opcode != op::JUMPDEST)
            return kUnknownBlock;
        return it->id;
    };

    auto add_edge = [&](BlockId from, BlockId to, EdgeKind kind, int push) {
        CfgEdge e{from, to, kind, push};
        if (std::find(cfg.edges.begin(), cfg.edges.end(), e) == cfg.edges.end())
            cfg.edges.push_back(e);
    };

    for (const auto& block : bl)
    {
        AbstractStack stack;
        Slot target;
        const int n = static_cast<int>(block.instructions.size());
        for (int i = 0; i < n; ++i)
        {
            const auto& ins = block.instructions[static_cast<std::size_t>(i)];
            const auto& spec = ins.spec();
            if (is_push(ins.opcode))
                stack.push(push_value(ins, i));
            else if (ins.opcode >= op::DUP1 && ins.opcode <= op::DUP16)
                stack.dup(ins.opcode - op::DUP1 + 1u);
            else if (ins.opcode >= op::SWAP1 && ins.opcode <= op::SWAP16)
                stack.swap(ins.opcode - op::SWAP1 + 1u);
            else if (i + 1 == n && (ins.opcode == op::JUMP || ins.opcode == op::JUMPI))
                target = stack.pop();
            else
            {
                for (unsigned k = 0; k < spec.stack_pops; ++k)
                    stack.pop();
                for (unsigned k = 0; k < spec.stack_pushes; ++k)
                    stack.push(Slot{});
            }
        }

        const bool has_next = block.id + 1 < bl.size();
        const BlockId next = block.id + 1;
        switch (block.terminator)
        {
        case Terminator::Jump:
        case Terminator::Branch: {
            const EdgeKind kind =
                block.terminator == Terminator::Jump ? EdgeKind::Jump : EdgeKind::BranchTaken;
            const BlockId to = target.value ? block_at(*target.value) : kUnknownBlock;
            if (to == kUnknownBlock)
                add_edge(block.id, kUnknownBlock, EdgeKind::Unresolved, -1);
            else
                add_edge(block.id, to, kind, target.origin);
            if (block.terminator == Terminator::Branch && has_next)
                add_edge(block.id, next, EdgeKind::BranchNotTaken, -1);
            break;
        }
        case Terminator::Fallthrough:
            if (has_next)
                add_edge(block.id, next, EdgeKind::Fallthrough, -1);
            break;
        default:
            break;
        }
    }
    cfg.has_unknown_node = cfg.num_unresolved() > 0;
    return cfg;
}

Cfg build_cfg(bytes_view code)
{
    return resolve_jumps(partition_blocks(disassemble(code)));
}

std::string export_cfg(const Cfg& cfg, CfgFormat format)
{
    if (format == CfgFormat::Json)
    {
        nlohmann::json blocks = nlohmann::json::array();
        for (const auto& b : cfg.blocks)
        {
            nlohmann::json mnemonics = nlohmann::json::array();
            for (const auto& ins : b.instructions)
                mnemonics.push_back(std::string{ins.spec().mnemonic});
            blocks.push_back({{"id", b.id}, {"start", b.start_offset}, {"mnemonics", mnemonics}});
        }
        nlohmann::json edges = nlohmann::json::array();
        for (const auto& e : cfg.edges)
        {
            nlohmann::json to =
                e.to == kUnknownBlock ? nlohmann::json("unknown") : nlohmann::json(e.to);
            edges.push_back(
                {{"from", e.from}, {"to", to}, {"kind", std::string{edge_kind_name(e.kind)}}});
        }
        return nlohmann::json{{"blocks", blocks}, {"edges", edges}}.dump();
    }

    std::ostringstream out;
    out << "digraph cfg {\n";
    for (const auto& b : cfg.blocks)
        out << "  B" << b.id << " [label=\"B" << b.id << "@" << b.start_offset << "\"];\n";
    if (cfg.has_unknown_node)
        out << "  UNKNOWN [label=\"UNKNOWN\", style=dashed];\n";
    for (const auto& e : cfg.edges)
    {
        out << "  B" << e.from << " -> ";
        if (e.to == kUnknownBlock)
            out << "UNKNOWN";
        else
            out << "B" << e.to;
        out << " [label=\"" << edge_kind_name(e.kind) << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace scamdetect
