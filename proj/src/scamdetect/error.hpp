// scamdetect: static detection of malicious smart contracts
// Copyright 2026 The scamdetect Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace scamdetect
{
/// Error categories raised by the library. The numeric values are mirrored by
/// the sd_status codes of the C API and must stay in sync with it.
enum class ErrorCode : int
{
    InvalidArgument = 1,
    OddLength,
    NonHexCharacter,
    EmptyStream,
    DimensionMismatch,
    EmptyDataset,
    SingleClassDataset,
    UnresolvableJumps,
    FixpointDivergence,
    UnsupportedOp,
    StackUnderflow,
    MalformedLine,
    DuplicateAddress,
    IoFailure,
    AuthError,
    EmptyCode,
    NetworkError,
    MalformedResponse,
    EmptyCorpus,
    EmptySet,
    PreconditionViolated,
    EquivalenceFailure,
};

std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error
{
public:
    Error(ErrorCode code, const std::string& message)
      : std::runtime_error{message}, code_{code}
    {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace scamdetect
