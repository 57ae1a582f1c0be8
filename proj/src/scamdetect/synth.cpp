// scamdetect: static detection of malicious smart contracts
// Copyright 2026 The scamdetect Authors.
// SPDX-License-Identifier: Apache-2.0

// Synthetic corpus: small contracts built from stack-neutral statements over
// memory and calldata, chained by resolved jumps with one JUMPI fork. The
// phishing variant routes the fork into an owner-capture block
// (CALLER; PUSH20; AND; SSTORE) followed by a block dominated by external
// calls and SELFDESTRUCT.

#include "scamdetect/assembler.hpp"
#include "scamdetect/data.hpp"
#include "scamdetect/error.hpp"
#include "scamdetect/rng.hpp"

#include <cstdio>

namespace scamdetect
{
namespace
{
using assembler::Block;
using assembler::Item;
using assembler::make_label_push;
using assembler::make_op;
using assembler::make_push;

constexpr std::uint8_t kBinaryOps[] = {op::ADD, op::MUL, op::SUB, op::DIV, op::MOD, op::AND,
    op::OR, op::XOR};

std::uint8_t mem_slot(Rng& rng)
{
    return static_cast<std::uint8_t>(32 * rng.below(8));
}

void emit_statement(std::vector<Item>& out, Rng& rng)
{
    const auto binop = [&] { return kBinaryOps[rng.below(std::size(kBinaryOps))]; };
    switch (rng.below(7))
    {
    case 0:
        out.push_back(make_push(rng.byte(), 1));
        out.push_back(make_push(rng.byte(), 1));
        out.push_back(make_op(binop()));
        out.push_back(make_push(mem_slot(rng), 1));
        out.push_back(make_op(op::MSTORE));
        break;
    case 1:
        out.push_back(make_push(mem_slot(rng), 1));
        out.push_back(make_op(op::MLOAD));
        out.push_back(make_push(rng.byte(), 1));
        out.push_back(make_op(op::ADD));
        out.push_back(make_push(mem_slot(rng), 1));
        out.push_back(make_op(op::MSTORE));
        break;
    case 2:
        out.push_back(make_push(4 * rng.below(8), 1));
        out.push_back(make_op(op::CALLDATALOAD));
        out.push_back(make_push(rng.byte(), 1));
        out.push_back(make_op(binop()));
        out.push_back(make_push(mem_slot(rng), 1));
        out.push_back(make_op(op::MSTORE));
        break;
    case 3:
        out.push_back(make_push(mem_slot(rng), 1));
        out.push_back(make_op(op::MLOAD));
        out.push_back(make_op(op::ISZERO));
        out.push_back(make_op(op::POP));
        break;
    case 4:
        out.push_back(make_push(rng.byte(), 1));
        out.push_back(make_push(rng.byte(), 1));
        out.push_back(make_op(op::LT));
        out.push_back(make_push(mem_slot(rng) + rng.below(32), 1));
        out.push_back(make_op(op::MSTORE8));
        break;
    case 5:
        out.push_back(make_push(0, 1));
        out.push_back(make_push(mem_slot(rng), 1));
        out.push_back(make_op(op::MSTORE));
        break;
    default:
        out.push_back(make_push(rng.byte(), 1));
        out.push_back(make_op(op::DUP1));
        out.push_back(make_op(op::MUL));
        out.push_back(make_push(rng.byte(), 1));
        out.push_back(make_op(op::SWAP1));
        out.push_back(make_op(op::SUB));
        out.push_back(make_push(mem_slot(rng), 1));
        out.push_back(make_op(op::MSTORE));
        break;
    }
}

Block owner_capture_block(int label, Rng& rng)
{
    Block b{label, {make_op(op::JUMPDEST), make_op(op::CALLER)}};
    Item owner = make_push(0, 20);
    for (auto& x : owner.immediate)
        x = rng.byte();
    b.items.push_back(std::move(owner));
    b.items.push_back(make_op(op::AND));
    b.items.push_back(make_push(rng.below(4), 1));
    b.items.push_back(make_op(op::SSTORE));
    return b;
}

Block drain_block(int label, Rng& rng)
{
    Block b{label, {make_op(op::JUMPDEST)}};
    const auto call_args = [&](std::size_t zeros) {
        b.items.push_back(make_push(0, 1));
        for (std::size_t i = 1; i < zeros; ++i)
            b.items.push_back(make_op(op::DUP1));
        b.items.push_back(make_op(op::CALLER));
        b.items.push_back(make_op(op::GAS));
    };
    call_args(5);
    b.items.push_back(make_op(rng.chance(0.5) ? op::CALL : op::CALLCODE));
    b.items.push_back(make_op(op::POP));
    call_args(4);
    b.items.push_back(make_op(rng.chance(0.5) ? op::DELEGATECALL : op::STATICCALL));
    b.items.push_back(make_op(op::POP));
    b.items.push_back(make_op(op::CALLER));
    b.items.push_back(make_op(op::SELFDESTRUCT));
    return b;
}

bytes generate_contract(bool phishing, Rng& rng)
{
    const auto n = static_cast<std::size_t>(rng.between(4, 10));
    const auto fork = static_cast<std::size_t>(rng.below(n - 2));
    const auto taken = static_cast<std::size_t>(rng.between(
        static_cast<std::int64_t>(fork + 2), static_cast<std::int64_t>(n - 1)));
    const int motif = static_cast<int>(n);

    std::vector<Block> blocks;
    for (std::size_t i = 0; i < n; ++i)
    {
        Block b{static_cast<int>(i), {}};
        if (i > 0)
            b.items.push_back(make_op(op::JUMPDEST));
        const auto stmts = 1 + rng.below(4);
        for (std::uint64_t s = 0; s < stmts; ++s)
            emit_statement(b.items, rng);

        if (i == fork)
        {
            b.items.push_back(make_push(4 * rng.below(8), 1));
            b.items.push_back(make_op(op::CALLDATALOAD));
            b.items.push_back(make_push(1u << rng.below(8), 1));
            b.items.push_back(make_op(op::AND));
            b.items.push_back(make_label_push(phishing ? motif : static_cast<int>(taken)));
            b.items.push_back(make_op(op::JUMPI));
        }
        else if (i + 1 == n)
        {
            if (rng.chance(0.5))
                b.items.push_back(make_op(op::STOP));
            else
            {
                b.items.push_back(make_push(32, 1));
                b.items.push_back(make_push(mem_slot(rng), 1));
                b.items.push_back(make_op(op::RETURN));
            }
        }
        else if (rng.chance(0.5))
        {
            b.items.push_back(make_label_push(static_cast<int>(i + 1)));
            b.items.push_back(make_op(op::JUMP));
        }
        blocks.push_back(std::move(b));
    }

    if (phishing)
    {
        blocks.push_back(owner_capture_block(motif, rng));
        if (rng.chance(0.5))
        {
            blocks.back().items.push_back(make_label_push(motif + 1));
            blocks.back().items.push_back(make_op(op::JUMP));
        }
        blocks.push_back(drain_block(motif + 1, rng));
    }
    return assembler::assemble(blocks);
}
}  // namespace

std::vector<DatasetRecord> synth_generate(
    std::size_t n_benign, std::size_t n_phishing, std::uint64_t seed)
{
    if (n_benign == 0 || n_phishing == 0)
        throw Error{ErrorCode::InvalidArgument, "synthetic corpus needs both classes"};
    std::vector<DatasetRecord> out;
    out.reserve(n_benign + n_phishing);
    for (std::size_t i = 0; i < n_benign + n_phishing; ++i)
    {
        const bool phishing = i >= n_benign;
        Rng rng = Rng::derive(seed, i);
        char id[32];
        std::snprintf(id, sizeof id, "synth-%06zu", i);
        DatasetRecord r;
        r.address = id;
        r.bytecode = to_hex(generate_contract(phishing, rng), true);
        r.label = phishing ? Label::Phishing : Label::Benign;
        r.source = RecordSource::Synthetic;
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace scamdetect
