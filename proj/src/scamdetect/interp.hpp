// scamdetect: static detection of malicious smart contracts
// Copyright 2026 The scamdetect Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "scamdetect/disasm.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace scamdetect
{
using word = boost::multiprecision::uint256_t;

enum class ExecStatus
{
    Stopped,
    Returned,
    Reverted,
    OutOfSteps,
};

std::string_view exec_status_name(ExecStatus s) noexcept;

struct ExecutionResult
{
    ExecStatus status = ExecStatus::Stopped;
    bytes return_data;
    std::vector<word> final_stack;

    friend bool operator==(const ExecutionResult&, const ExecutionResult&) = default;
};

inline constexpr std::size_t kDefaultStepLimit = 100'000;
/// Memory accesses beyond this many bytes halt the run as Reverted.
inline constexpr std::size_t kMemoryLimit = 1u << 20;

/// Execute the deterministic EVM subset (arithmetic, comparison/bitwise,
/// stack, jumps, memory, transient storage, calldata, halting opcodes).
/// Throws Error{UnsupportedOp} for anything else and Error{StackUnderflow}.
ExecutionResult interp_execute(
    bytes_view code, bytes_view calldata, std::size_t step_limit = kDefaultStepLimit);

enum class Verdict
{
    Equivalent,
    NotEquivalent,
    Unsupported,
};

std::string_view verdict_name(Verdict v) noexcept;

struct EquivalenceReport
{
    Verdict verdict = Verdict::Equivalent;
    std::size_t vectors = 0;
    /// Set when verdict is Unsupported: the first unsupported-op message.
    std::optional<std::string> unsupported_op;
};

/// Run both codes on seeded random calldata (0..64 bytes) and compare results.
EquivalenceReport check_equivalence(
    bytes_view a, bytes_view b, std::size_t num_vectors, std::uint64_t seed);

}  // namespace scamdetect
