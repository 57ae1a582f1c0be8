// scamdetect: static detection of malicious smart contracts
// Copyright 2026 The scamdetect Authors.
// SPDX-License-Identifier: Apache-2.0

#include "scamdetect/fetch.hpp"

#include "scamdetect/error.hpp"

#include <httplib.h>

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <thread>

namespace scamdetect
{
namespace
{
struct Endpoint
{
    std::string origin;  // scheme://host[:port]
    std::string path;
};

Endpoint split_endpoint(const std::string& url)
{
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
        throw Error{ErrorCode::InvalidArgument, "endpoint must be an absolute URL: " + url};
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos)
        return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

bool mentions_key(std::string text)
{
    std::transform(text.begin(), text.end(), text.begin(),
        [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return text.find("key") != std::string::npos;
}

Bytecode parse_body(const std::string& body)
{
    nlohmann::json j;
    try
    {
        j = nlohmann::json::parse(body);
    }
    catch (const nlohmann::json::exception& e)
    {
        throw Error{ErrorCode::MalformedResponse, std::string{"response is not JSON: "} + e.what()};
    }
    if (!j.is_object())
        throw Error{ErrorCode::MalformedResponse, "response is not a JSON object"};

    if (const auto err = j.find("error"); err != j.end())
    {
        const std::string msg = err->dump();
        throw Error{mentions_key(msg) ? ErrorCode::AuthError : ErrorCode::MalformedResponse,
            "endpoint reported an error: " + msg};
    }
    const auto res = j.find("result");
    if (res == j.end() || !res->is_string())
        throw Error{ErrorCode::MalformedResponse, "response has no string 'result'"};
    const auto& result = res->get_ref<const std::string&>();
    if (j.value("status", std::string{}) == "0" || j.value("message", std::string{}) == "NOTOK")
    {
        throw Error{mentions_key(result) ? ErrorCode::AuthError : ErrorCode::MalformedResponse,
            "endpoint reported an error: " + result};
    }
    if (result == "0x" || result == "0X")
        throw Error{ErrorCode::EmptyCode, "no code at address"};
    try
    {
        return parse_hex(result);
    }
    catch (const Error& e)
    {
        throw Error{ErrorCode::MalformedResponse, std::string{"result is not hex: "} + e.what()};
    }
}
}  // namespace

void RateLimiter::acquire(double rate)
{
    if (!(rate > 0.0))
        throw Error{ErrorCode::InvalidArgument, "rate limit must be > 0"};
    const auto interval = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
        std::chrono::duration<double>{1.0 / rate});
    std::unique_lock lock{mutex_};
    const auto now = std::chrono::steady_clock::now();
    const auto slot = std::max(now, next_);
    next_ = slot + interval;
    lock.unlock();
    std::this_thread::sleep_until(slot);
}

bool is_valid_address(std::string_view address) noexcept
{
    if (address.size() != 42 || address[0] != '0' || (address[1] != 'x' && address[1] != 'X'))
        return false;
    return std::all_of(address.begin() + 2, address.end(),
        [](char c) { return std::isxdigit(static_cast<unsigned char>(c)) != 0; });
}

Bytecode fetch_code(std::string_view address, const FetchConfig& config, RateLimiter& limiter)
{
    if (!is_valid_address(address))
        throw Error{ErrorCode::InvalidArgument,
            "address must be 0x followed by 40 hex digits: '" + std::string{address} + "'"};

    const auto ep = split_endpoint(config.endpoint);
    const char sep = ep.path.find('?') == std::string::npos ? '?' : '&';
    const std::string target = ep.path + sep + "module=proxy&action=eth_getCode&address=" +
                               std::string{address} + "&tag=latest&apikey=" +
                               httplib::detail::encode_query_param(config.api_key);

    httplib::Client client{ep.origin};
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config.timeout);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(config.timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());

    auto delay = config.backoff_initial;
    std::string last_failure;
    for (unsigned attempt = 0; attempt <= config.max_retries; ++attempt)
    {
        if (attempt > 0)
        {
            std::this_thread::sleep_for(delay);
            delay *= 2;
        }
        limiter.acquire(config.rate_limit);
        const auto res = client.Get(target);
        if (!res)
        {
            last_failure = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status >= 500)
        {
            last_failure = "HTTP " + std::to_string(res->status);
            continue;
        }
        if (res->status == 401 || res->status == 403)
            throw Error{ErrorCode::AuthError, "HTTP " + std::to_string(res->status)};
        if (res->status == 404)
            throw Error{ErrorCode::EmptyCode, "HTTP 404"};
        if (res->status != 200)
            throw Error{ErrorCode::NetworkError, "HTTP " + std::to_string(res->status)};
        Bytecode code = parse_body(res->body);
        code.origin = std::string{address};
        return code;
    }
    throw Error{ErrorCode::NetworkError,
        "giving up after " + std::to_string(config.max_retries + 1) + " attempts (" +
            last_failure + ")"};
}

Bytecode fetch_code(std::string_view address, const FetchConfig& config)
{
    static RateLimiter limiter;
    return fetch_code(address, config, limiter);
}

}  // namespace scamdetect
