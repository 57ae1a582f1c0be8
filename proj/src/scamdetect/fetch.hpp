// scamdetect: static detection of malicious smart contracts
// Copyright 2026 The scamdetect Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "scamdetect/disasm.hpp"

#include <chrono>
#include <mutex>
#include <string>
#include <string_view>

namespace scamdetect
{
struct FetchConfig
{
    /// Base URL, e.g. "https://api.etherscan.io/api".
    std::string endpoint;
    std::string api_key;
    /// Requests per second.
    double rate_limit = 5.0;
    unsigned max_retries = 3;
    /// First retry delay; doubles on every further retry.
    std::chrono::milliseconds backoff_initial{1000};
    std::chrono::milliseconds timeout{10000};
};

/// Admits callers no faster than `rate` per second, across threads.
class RateLimiter
{
public:
    /// Blocks until the next slot for `rate` requests/second is available.
    void acquire(double rate);

private:
    std::mutex mutex_;
    std::chrono::steady_clock::time_point next_{};
};

/// True for "0x" followed by exactly 40 hex digits.
bool is_valid_address(std::string_view address) noexcept;

/// eth_getCode through an Etherscan-compatible proxy endpoint. Retries 5xx and
/// transport failures with exponential backoff. Throws Error{AuthError,
/// EmptyCode, NetworkError, MalformedResponse, InvalidArgument}.
Bytecode fetch_code(std::string_view address, const FetchConfig& config, RateLimiter& limiter);

/// As above with the process-wide limiter.
Bytecode fetch_code(std::string_view address, const FetchConfig& config);

}  // namespace scamdetect
