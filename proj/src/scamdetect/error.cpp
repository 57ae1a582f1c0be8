// scamdetect: static detection of malicious smart contracts
// Copyright 2026 The scamdetect Authors.
// SPDX-License-Identifier: Apache-2.0

#include "scamdetect/error.hpp"

namespace scamdetect
{
std::string_view error_code_name(ErrorCode code) noexcept
{
    switch (code)
    {
    case ErrorCode::InvalidArgument:
        return "InvalidArgument";
    case ErrorCode::OddLength:
        return "OddLength";
    case ErrorCode::NonHexCharacter:
        return "NonHexCharacter";
    case ErrorCode::EmptyStream:
        return "EmptyStream";
    case ErrorCode::DimensionMismatch:
        return "DimensionMismatch";
    case ErrorCode::EmptyDataset:
        return "EmptyDataset";
    case ErrorCode::SingleClassDataset:
        return "SingleClassDataset";
    case ErrorCode::UnresolvableJumps:
        return "UnresolvableJumps";
    case ErrorCode::FixpointDivergence:
        return "FixpointDivergence";
    case ErrorCode::UnsupportedOp:
        return "UnsupportedOp";
    case ErrorCode::StackUnderflow:
        return "StackUnderflow";
    case ErrorCode::MalformedLine:
        return "MalformedLine";
    case ErrorCode::DuplicateAddress:
        return "DuplicateAddress";
    case ErrorCode::IoFailure:
        return "IoFailure";
    case ErrorCode::AuthError:
        return "AuthError";
    case ErrorCode::EmptyCode:
        return "EmptyCode";
    case ErrorCode::NetworkError:
        return "NetworkError";
    case ErrorCode::MalformedResponse:
        return "MalformedResponse";
    case ErrorCode::EmptyCorpus:
        return "EmptyCorpus";
    case ErrorCode::EmptySet:
        return "EmptySet";
    case ErrorCode::PreconditionViolated:
        return "PreconditionViolated";
    case ErrorCode::EquivalenceFailure:
        return "EquivalenceFailure";
    }
    return "Unknown";
}
}  // namespace scamdetect
