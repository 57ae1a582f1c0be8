// scamdetect: static detection of malicious smart contracts
// Copyright 2026 The scamdetect Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "scamdetect/disasm.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace scamdetect
{
enum class ObfPass
{
    Junk,
    Reorder,
    Substitute,
};

std::string_view obf_pass_name(ObfPass p) noexcept;
/// Comma-separated list such as "junk,reorder". Throws Error{InvalidArgument}.
std::vector<ObfPass> parse_passes(std::string_view csv);

struct ObfConfig
{
    std::vector<ObfPass> passes;
    std::uint64_t seed = 0;
    /// Fraction of blocks touched by Junk and Substitute, in (0, 1].
    double intensity = 0.5;
};

/// Semantics-preserving rewrite of `code`.
///
/// Junk inserts `PUSH1 r; POP` pairs and lone JUMPDESTs inside blocks, never
/// between a jump-target PUSH and its JUMP/JUMPI. Reorder permutes the block
/// layout (entry first), making broken fallthroughs explicit with
/// `PUSHn <target>; JUMP`. Substitute applies this fixed catalog:
///   PUSH1 0x00 / PUSH0   ->  PUSH1 0x01; PUSH1 0x01; SUB
///   PUSHn x              ->  PUSHn x; DUP1; POP
///   ADD|MUL|AND|OR|XOR|EQ -> SWAP1; <same op>
/// Jump-target immediates are re-patched to the new layout after the passes,
/// widening PUSH width where needed.
///
/// Throws Error{UnresolvableJumps} if the input has any unresolved jump, and
/// Error{FixpointDivergence} if re-patching does not converge.
bytes obfuscate(bytes_view code, const ObfConfig& config);

}  // namespace scamdetect
