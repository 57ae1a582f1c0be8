// scamdetect: static detection of malicious smart contracts
// Copyright 2026 The scamdetect Authors.
// SPDX-License-Identifier: Apache-2.0

#include "scamdetect/disasm.hpp"
#include "scamdetect/error.hpp"

#include <cctype>

namespace scamdetect
{
namespace
{
constexpr std::array<std::string_view, 32> kPushNames = {"PUSH1", "PUSH2", "PUSH3", "PUSH4",
    "PUSH5", "PUSH6", "PUSH7", "PUSH8", "PUSH9", "PUSH10", "PUSH11", "PUSH12", "PUSH13", "PUSH14",
    "PUSH15", "PUSH16", "PUSH17", "PUSH18", "PUSH19", "PUSH20", "PUSH21", "PUSH22", "PUSH23",
    "PUSH24", "PUSH25", "PUSH26", "PUSH27", "PUSH28", "PUSH29", "PUSH30", "PUSH31", "PUSH32"};
constexpr std::array<std::string_view, 16> kDupNames = {"DUP1", "DUP2", "DUP3", "DUP4", "DUP5",
    "DUP6", "DUP7", "DUP8", "DUP9", "DUP10", "DUP11", "DUP12", "DUP13", "DUP14", "DUP15", "DUP16"};
constexpr std::array<std::string_view, 16> kSwapNames = {"SWAP1", "SWAP2", "SWAP3", "SWAP4",
    "SWAP5", "SWAP6", "SWAP7", "SWAP8", "SWAP9", "SWAP10", "SWAP11", "SWAP12", "SWAP13", "SWAP14",
    "SWAP15", "SWAP16"};
constexpr std::array<std::string_view, 5> kLogNames = {"LOG0", "LOG1", "LOG2", "LOG3", "LOG4"};

struct Row
{
    std::uint8_t byte;
    std::string_view name;
    std::uint8_t pops;
    std::uint8_t pushes;
    bool terminator = false;
};

// Shanghai instruction set, excluding the PUSH/DUP/SWAP/LOG families which are
// generated below.
constexpr Row kRows[] = {
    {0x00, "STOP", 0, 0, true},
    {0x01, "ADD", 2, 1},
    {0x02, "MUL", 2, 1},
    {0x03, "SUB", 2, 1},
    {0x04, "DIV", 2, 1},
    {0x05, "SDIV", 2, 1},
    {0x06, "MOD", 2, 1},
    {0x07, "SMOD", 2, 1},
    {0x08, "ADDMOD", 3, 1},
    {0x09, "MULMOD", 3, 1},
    {0x0a, "EXP", 2, 1},
    {0x0b, "SIGNEXTEND", 2, 1},
    {0x10, "LT", 2, 1},
    {0x11, "GT", 2, 1},
    {0x12, "SLT", 2, 1},
    {0x13, "SGT", 2, 1},
    {0x14, "EQ", 2, 1},
    {0x15, "ISZERO", 1, 1},
    {0x16, "AND", 2, 1},
    {0x17, "OR", 2, 1},
    {0x18, "XOR", 2, 1},
    {0x19, "NOT", 1, 1},
    {0x1a, "BYTE", 2, 1},
    {0x1b, "SHL", 2, 1},
    {0x1c, "SHR", 2, 1},
    {0x1d, "SAR", 2, 1},
    {0x20, "KECCAK256", 2, 1},
    {0x30, "ADDRESS", 0, 1},
    {0x31, "BALANCE", 1, 1},
    {0x32, "ORIGIN", 0, 1},
    {0x33, "CALLER", 0, 1},
    {0x34, "CALLVALUE", 0, 1},
    {0x35, "CALLDATALOAD", 1, 1},
    {0x36, "CALLDATASIZE", 0, 1},
    {0x37, "CALLDATACOPY", 3, 0},
    {0x38, "CODESIZE", 0, 1},
    {0x39, "CODECOPY", 3, 0},
    {0x3a, "GASPRICE", 0, 1},
    {0x3b, "EXTCODESIZE", 1, 1},
    {0x3c, "EXTCODECOPY", 4, 0},
    {0x3d, "RETURNDATASIZE", 0, 1},
    {0x3e, "RETURNDATACOPY", 3, 0},
    {0x3f, "EXTCODEHASH", 1, 1},
    {0x40, "BLOCKHASH", 1, 1},
    {0x41, "COINBASE", 0, 1},
    {0x42, "TIMESTAMP", 0, 1},
    {0x43, "NUMBER", 0, 1},
    {0x44, "PREVRANDAO", 0, 1},
    {0x45, "GASLIMIT", 0, 1},
    {0x46, "CHAINID", 0, 1},
    {0x47, "SELFBALANCE", 0, 1},
    {0x48, "BASEFEE", 0, 1},
    {0x50, "POP", 1, 0},
    {0x51, "MLOAD", 1, 1},
    {0x52, "MSTORE", 2, 0},
    {0x53, "MSTORE8", 2, 0},
    {0x54, "SLOAD", 1, 1},
    {0x55, "SSTORE", 2, 0},
    {0x56, "JUMP", 1, 0, true},
    {0x57, "JUMPI", 2, 0, true},
    {0x58, "PC", 0, 1},
    {0x59, "MSIZE", 0, 1},
    {0x5a, "GAS", 0, 1},
    {0x5b, "JUMPDEST", 0, 0},
    {0x5f, "PUSH0", 0, 1},
    {0xf0, "CREATE", 3, 1},
    {0xf1, "CALL", 7, 1},
    {0xf2, "CALLCODE", 7, 1},
    {0xf3, "RETURN", 2, 0, true},
    {0xf4, "DELEGATECALL", 6, 1},
    {0xf5, "CREATE2", 4, 1},
    {0xfa, "STATICCALL", 6, 1},
    {0xfd, "REVERT", 2, 0, true},
    {0xff, "SELFDESTRUCT", 1, 0, true},
};

std::array<OpcodeSpec, 256> build_table() noexcept
{
    std::array<OpcodeSpec, 256> table{};
    for (unsigned b = 0; b < 256; ++b)
    {
        auto& s = table[b];
        s.byte_value = static_cast<std::uint8_t>(b);
        s.mnemonic = "INVALID";
        s.category = category_of(s.byte_value);
        s.is_terminator = true;
    }
    auto set = [&](std::uint8_t b, std::string_view name, std::uint8_t pops, std::uint8_t pushes,
                   bool term) {
        auto& s = table[b];
        s.mnemonic = name;
        s.stack_pops = pops;
        s.stack_pushes = pushes;
        s.is_terminator = term;
        s.defined = true;
    };
    for (const auto& r : kRows)
        set(r.byte, r.name, r.pops, r.pushes, r.terminator);
    for (unsigned n = 1; n <= 32; ++n)
    {
        const auto b = static_cast<std::uint8_t>(0x5f + n);
        set(b, kPushNames[n - 1], 0, 1, false);
        table[b].immediate_len = static_cast<std::uint8_t>(n);
    }
    for (unsigned n = 1; n <= 16; ++n)
    {
        set(static_cast<std::uint8_t>(0x7f + n), kDupNames[n - 1], static_cast<std::uint8_t>(n),
            static_cast<std::uint8_t>(n + 1), false);
        set(static_cast<std::uint8_t>(0x8f + n), kSwapNames[n - 1],
            static_cast<std::uint8_t>(n + 1), static_cast<std::uint8_t>(n + 1), false);
    }
    for (unsigned n = 0; n <= 4; ++n)
        set(static_cast<std::uint8_t>(0xa0 + n), kLogNames[n], static_cast<std::uint8_t>(2 + n), 0,
            false);
    // The designated INVALID opcode keeps the unassigned shape but is defined.
    table[op::INVALID].defined = true;
    return table;
}

const std::array<OpcodeSpec, 256> kTable = build_table();

int hex_value(char c) noexcept
{
    if (c >= '0' && c <= '9')
        return c - '0';
    if (c >= 'a' && c <= 'f')
        return c - 'a' + 10;
    if (c >= 'A' && c <= 'F')
        return c - 'A' + 10;
    return -1;
}
}  // namespace

std::string_view category_name(OpCategory c) noexcept
{
    switch (c)
    {
    case OpCategory::Arithmetic:
        return "arithmetic";
    case OpCategory::ComparisonBitwise:
        return "comparison_bitwise";
    case OpCategory::Keccak:
        return "keccak";
    case OpCategory::Environment:
        return "environment";
    case OpCategory::BlockInfo:
        return "blockinfo";
    case OpCategory::Pop:
        return "pop";
    case OpCategory::Memory:
        return "memory";
    case OpCategory::Storage:
        return "storage";
    case OpCategory::Flow:
        return "flow";
    case OpCategory::Push:
        return "push";
    case OpCategory::Dup:
        return "dup";
    case OpCategory::Swap:
        return "swap";
    case OpCategory::Log:
        return "log";
    case OpCategory::System:
        return "system";
    }
    return "system";
}

OpCategory category_of(std::uint8_t b) noexcept
{
    if (b >= 0x01 && b <= 0x0b)
        return OpCategory::Arithmetic;
    if (b >= 0x10 && b <= 0x1d)
        return OpCategory::ComparisonBitwise;
    if (b == 0x20)
        return OpCategory::Keccak;
    if (b >= 0x30 && b <= 0x3f)
        return OpCategory::Environment;
    if (b >= 0x40 && b <= 0x4a)
        return OpCategory::BlockInfo;
    if (b == 0x50)
        return OpCategory::Pop;
    if ((b >= 0x51 && b <= 0x53) || b == 0x59)
        return OpCategory::Memory;
    if (b == 0x54 || b == 0x55)
        return OpCategory::Storage;
    if ((b >= 0x56 && b <= 0x58) || b == 0x5a || b == 0x5b)
        return OpCategory::Flow;
    if (b >= 0x5f && b <= 0x7f)
        return OpCategory::Push;
    if (b >= 0x80 && b <= 0x8f)
        return OpCategory::Dup;
    if (b >= 0x90 && b <= 0x9f)
        return OpCategory::Swap;
    if (b >= 0xa0 && b <= 0xa4)
        return OpCategory::Log;
    return OpCategory::System;
}

const OpcodeSpec& opcode_info(std::uint8_t byte_value) noexcept
{
    return kTable[byte_value];
}

Bytecode parse_hex(std::string_view text)
{
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(text[begin])))
        ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1])))
        --end;
    if (end - begin >= 2 && text[begin] == '0' && (text[begin + 1] == 'x' || text[begin + 1] == 'X'))
        begin += 2;

    for (std::size_t i = begin; i < end; ++i)
    {
        if (hex_value(text[i]) < 0)
            throw Error{ErrorCode::NonHexCharacter,
                "non-hex character at index " + std::to_string(i)};
    }
    if ((end - begin) % 2 != 0)
        throw Error{ErrorCode::OddLength,
            "odd number of hex digits (" + std::to_string(end - begin) + ")"};

    Bytecode out;
    out.code.reserve((end - begin) / 2);
    for (std::size_t i = begin; i < end; i += 2)
        out.code.push_back(static_cast<std::uint8_t>(hex_value(text[i]) * 16 + hex_value(text[i + 1])));
    return out;
}

std::string to_hex(bytes_view data, bool prefix)
{
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2 + 2);
    if (prefix)
        out += "0x";
    for (auto b : data)
    {
        out += kDigits[b >> 4];
        out += kDigits[b & 0xf];
    }
    return out;
}

InstructionStream disassemble(bytes_view code)
{
    InstructionStream stream;
    stream.code_len = code.size();
    stream.instructions.reserve(code.size());

    std::size_t pc = 0;
    while (pc < code.size())
    {
        Instruction ins;
        ins.offset = pc;
        ins.opcode = code[pc];
        const std::size_t want = kTable[ins.opcode].immediate_len;
        const std::size_t have = std::min(want, code.size() - pc - 1);
        ins.immediate.assign(want, 0);
        std::copy_n(code.begin() + static_cast<std::ptrdiff_t>(pc + 1), have, ins.immediate.begin());
        ins.raw_immediate_len = static_cast<std::uint8_t>(have);
        ins.truncated = have < want;
        stream.instructions.push_back(std::move(ins));
        pc += 1 + want;
    }
    return stream;
}

bytes reencode(const InstructionStream& stream)
{
    bytes out;
    out.reserve(stream.code_len);
    for (const auto& ins : stream.instructions)
    {
        out.push_back(ins.opcode);
        out.insert(out.end(), ins.immediate.begin(), ins.immediate.begin() + ins.raw_immediate_len);
    }
    return out;
}

bytes strip_metadata(bytes_view code)
{
    const std::size_t n = code.size();
    if (n < 2)
        return {code.begin(), code.end()};
    const std::size_t len = (std::size_t{code[n - 2]} << 8) | code[n - 1];
    if (len == 0 || len + 2 > n)
        return {code.begin(), code.end()};
    const std::uint8_t header = code[n - 2 - len];
    if (header != 0xa1 && header != 0xa2)
        return {code.begin(), code.end()};
    return {code.begin(), code.begin() + static_cast<std::ptrdiff_t>(n - 2 - len)};
}

std::string format_listing(const InstructionStream& stream)
{
    std::string out;
    for (const auto& ins : stream.instructions)
    {
        out += std::to_string(ins.offset);
        out += '\t';
        out += ins.spec().mnemonic;
        out += '\t';
        out += to_hex(ins.immediate);
        out += '\n';
    }
    return out;
}

}  // namespace scamdetect
