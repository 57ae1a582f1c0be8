// scamdetect: static detection of malicious smart contracts
// Copyright 2026 The scamdetect Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace scamdetect
{
using bytes = std::vector<std::uint8_t>;
using bytes_view = std::span<const std::uint8_t>;

/// Coarse opcode classes used for node features. The enumerator order is the
/// column order of the feature matrix.
enum class OpCategory : std::uint8_t
{
    Arithmetic,
    ComparisonBitwise,
    Keccak,
    Environment,
    BlockInfo,
    Pop,
    Memory,
    Storage,
    Flow,
    Push,
    Dup,
    Swap,
    Log,
    System,
};

inline constexpr std::size_t kNumCategories = 14;

std::string_view category_name(OpCategory c) noexcept;

/// Category of a raw byte value by range; bytes outside every named range
/// (including STOP) fall into System.
OpCategory category_of(std::uint8_t byte_value) noexcept;

struct OpcodeSpec
{
    std::uint8_t byte_value = 0;
    std::string_view mnemonic;
    std::uint8_t immediate_len = 0;
    std::uint8_t stack_pops = 0;
    std::uint8_t stack_pushes = 0;
    OpCategory category = OpCategory::System;
    bool is_terminator = false;
    /// False for byte values that are not assigned in the pinned instruction
    /// set; such entries carry the mnemonic INVALID.
    bool defined = false;
};

/// Total lookup into the Shanghai opcode table.
const OpcodeSpec& opcode_info(std::uint8_t byte_value) noexcept;

namespace op
{
inline constexpr std::uint8_t STOP = 0x00;
inline constexpr std::uint8_t ADD = 0x01;
inline constexpr std::uint8_t MUL = 0x02;
inline constexpr std::uint8_t SUB = 0x03;
inline constexpr std::uint8_t DIV = 0x04;
inline constexpr std::uint8_t MOD = 0x06;
inline constexpr std::uint8_t LT = 0x10;
inline constexpr std::uint8_t GT = 0x11;
inline constexpr std::uint8_t EQ = 0x14;
inline constexpr std::uint8_t ISZERO = 0x15;
inline constexpr std::uint8_t AND = 0x16;
inline constexpr std::uint8_t OR = 0x17;
inline constexpr std::uint8_t XOR = 0x18;
inline constexpr std::uint8_t NOT = 0x19;
inline constexpr std::uint8_t SHL = 0x1b;
inline constexpr std::uint8_t SHR = 0x1c;
inline constexpr std::uint8_t CALLER = 0x33;
inline constexpr std::uint8_t CALLDATALOAD = 0x35;
inline constexpr std::uint8_t CALLDATASIZE = 0x36;
inline constexpr std::uint8_t POP = 0x50;
inline constexpr std::uint8_t MLOAD = 0x51;
inline constexpr std::uint8_t MSTORE = 0x52;
inline constexpr std::uint8_t MSTORE8 = 0x53;
inline constexpr std::uint8_t SLOAD = 0x54;
inline constexpr std::uint8_t SSTORE = 0x55;
inline constexpr std::uint8_t JUMP = 0x56;
inline constexpr std::uint8_t JUMPI = 0x57;
inline constexpr std::uint8_t PC = 0x58;
inline constexpr std::uint8_t GAS = 0x5a;
inline constexpr std::uint8_t JUMPDEST = 0x5b;
inline constexpr std::uint8_t PUSH0 = 0x5f;
inline constexpr std::uint8_t PUSH1 = 0x60;
inline constexpr std::uint8_t PUSH2 = 0x61;
inline constexpr std::uint8_t PUSH20 = 0x73;
inline constexpr std::uint8_t PUSH32 = 0x7f;
inline constexpr std::uint8_t DUP1 = 0x80;
inline constexpr std::uint8_t DUP16 = 0x8f;
inline constexpr std::uint8_t SWAP1 = 0x90;
inline constexpr std::uint8_t SWAP16 = 0x9f;
inline constexpr std::uint8_t CALL = 0xf1;
inline constexpr std::uint8_t CALLCODE = 0xf2;
inline constexpr std::uint8_t RETURN = 0xf3;
inline constexpr std::uint8_t DELEGATECALL = 0xf4;
inline constexpr std::uint8_t STATICCALL = 0xfa;
inline constexpr std::uint8_t REVERT = 0xfd;
inline constexpr std::uint8_t INVALID = 0xfe;
inline constexpr std::uint8_t SELFDESTRUCT = 0xff;
}  // namespace op

constexpr bool is_push(std::uint8_t b) noexcept
{
    return b >= op::PUSH0 && b <= op::PUSH32;
}

struct Bytecode
{
    bytes code;
    std::optional<std::string> origin;

    friend bool operator==(const Bytecode& a, const Bytecode& b) { return a.code == b.code; }
};

/// Decode hex text ("0x" prefix optional, surrounding whitespace ignored).
/// Throws Error{OddLength} or Error{NonHexCharacter}; the reported index is a
/// position in the original text.
Bytecode parse_hex(std::string_view text);

std::string to_hex(bytes_view data, bool prefix = false);

struct Instruction
{
    std::size_t offset = 0;
    std::uint8_t opcode = 0;
    /// Always spec().immediate_len bytes; zero-padded on the right if truncated.
    bytes immediate;
    bool truncated = false;
    /// Immediate bytes actually present in the code.
    std::uint8_t raw_immediate_len = 0;

    [[nodiscard]] const OpcodeSpec& spec() const noexcept { return opcode_info(opcode); }
    [[nodiscard]] std::size_t encoded_size() const noexcept { return 1u + raw_immediate_len; }

    friend bool operator==(const Instruction&, const Instruction&) = default;
};

struct InstructionStream
{
    std::vector<Instruction> instructions;
    std::size_t code_len = 0;
};

/// Linear sweep decode. Total: unknown bytes become INVALID instructions and a
/// PUSH running past the end yields a single truncated last instruction.
InstructionStream disassemble(bytes_view code);

/// Inverse of disassemble; emits only the immediate bytes that were present.
bytes reencode(const InstructionStream& stream);

/// Remove a trailing CBOR metadata blob (length-suffixed in the final two
/// bytes) if one is plausibly present.
bytes strip_metadata(bytes_view code);

/// `<offset>\t<mnemonic>\t<immediate-hex>` per instruction, newline-terminated.
std::string format_listing(const InstructionStream& stream);

}  // namespace scamdetect
