// scamdetect: static detection of malicious smart contracts
// Copyright 2026 The scamdetect Authors.
// SPDX-License-Identifier: Apache-2.0

#include "scamdetect/error.hpp"
#include "scamdetect/fetch.hpp"

#include <gtest/gtest.h>
#include <httplib.h>

#include <atomic>
#include <chrono>
#include <functional>
#include <thread>

using namespace scamdetect;
using namespace std::chrono_literals;

namespace
{
const std::string kAddr = "0x" + std::string(40, 'a');

/// Local Etherscan stand-in. `respond` gets the 1-based request number.
class MockEndpoint
{
public:
    explicit MockEndpoint(std::function<void(int, const httplib::Request&, httplib::Response&)> respond)
      : respond_{std::move(respond)}
    {
        server_.Get("/api", [this](const httplib::Request& req, httplib::Response& res) {
            respond_(++requests_, req, res);
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread{[this] { server_.listen_after_bind(); }};
        server_.wait_until_ready();
    }

    ~MockEndpoint()
    {
        server_.stop();
        thread_.join();
    }

    FetchConfig config() const
    {
        FetchConfig c;
        c.endpoint = "http://127.0.0.1:" + std::to_string(port_) + "/api";
        c.api_key = "KEY";
        c.rate_limit = 1000.0;
        c.backoff_initial = 1ms;
        c.timeout = 2000ms;
        return c;
    }

    int requests() const { return requests_; }

private:
    httplib::Server server_;
    std::function<void(int, const httplib::Request&, httplib::Response&)> respond_;
    std::atomic<int> requests_{0};
    int port_ = 0;
    std::thread thread_;
};

void json_body(httplib::Response& res, const std::string& body, int status = 200)
{
    res.status = status;
    res.set_content(body, "application/json");
}

ErrorCode fetch_error(const FetchConfig& cfg, const std::string& addr = kAddr)
{
    try
    {
        RateLimiter limiter;
        fetch_code(addr, cfg, limiter);
    }
    catch (const Error& e)
    {
        return e.code();
    }
    return ErrorCode{};
}
}  // namespace

TEST(fetch_code, success_and_query)
{
    std::string query;
    MockEndpoint m{[&](int, const httplib::Request& req, httplib::Response& res) {
        query = req.get_param_value("module") + "|" + req.get_param_value("action") + "|" +
                req.get_param_value("address") + "|" + req.get_param_value("tag") + "|" +
                req.get_param_value("apikey");
        json_body(res, R"({"jsonrpc":"2.0","id":1,"result":"0x6001"})");
    }};
    RateLimiter limiter;
    const auto code = fetch_code(kAddr, m.config(), limiter);
    EXPECT_EQ(code.code, (bytes{0x60, 0x01}));
    EXPECT_EQ(code.origin, kAddr);
    EXPECT_EQ(query, "proxy|eth_getCode|" + kAddr + "|latest|KEY");
    EXPECT_EQ(m.requests(), 1);
}

TEST(fetch_code, empty_code)
{
    MockEndpoint m{[](int, const httplib::Request&, httplib::Response& res) {
        json_body(res, R"({"result":"0x"})");
    }};
    EXPECT_EQ(fetch_error(m.config()), ErrorCode::EmptyCode);
    MockEndpoint nf{[](int, const httplib::Request&, httplib::Response& res) { res.status = 404; }};
    EXPECT_EQ(fetch_error(nf.config()), ErrorCode::EmptyCode);
}

TEST(fetch_code, retries_server_errors)
{
    MockEndpoint m{[](int n, const httplib::Request&, httplib::Response& res) {
        if (n <= 3)
            res.status = 500;
        else
            json_body(res, R"({"result":"0x00"})");
    }};
    RateLimiter limiter;
    EXPECT_EQ(fetch_code(kAddr, m.config(), limiter).code, bytes{0x00});
    EXPECT_EQ(m.requests(), 4);
}

TEST(fetch_code, gives_up_after_retries_with_backoff)
{
    MockEndpoint m{[](int, const httplib::Request&, httplib::Response& res) { res.status = 503; }};
    auto cfg = m.config();
    cfg.backoff_initial = 20ms;
    const auto t0 = std::chrono::steady_clock::now();
    EXPECT_EQ(fetch_error(cfg), ErrorCode::NetworkError);
    const auto elapsed = std::chrono::steady_clock::now() - t0;
    EXPECT_EQ(m.requests(), 4);
    EXPECT_GE(elapsed, 20ms + 40ms + 80ms);
}

TEST(fetch_code, auth_errors)
{
    for (const int status : {401, 403})
    {
        MockEndpoint m{[status](int, const httplib::Request&, httplib::Response& res) { res.status = status; }};
        EXPECT_EQ(fetch_error(m.config()), ErrorCode::AuthError) << status;
        EXPECT_EQ(m.requests(), 1);
    }
    MockEndpoint k{[](int, const httplib::Request&, httplib::Response& res) {
        json_body(res, R"({"status":"0","message":"NOTOK","result":"Invalid API Key"})");
    }};
    EXPECT_EQ(fetch_error(k.config()), ErrorCode::AuthError);
    MockEndpoint rpc{[](int, const httplib::Request&, httplib::Response& res) {
        json_body(res, R"({"jsonrpc":"2.0","id":1,"error":{"code":-32000,"message":"missing api key"}})");
    }};
    EXPECT_EQ(fetch_error(rpc.config()), ErrorCode::AuthError);
}

TEST(fetch_code, malformed_responses)
{
    for (const char* body : {"not json", "[]", R"({"status":"1"})", R"({"result":"0xzz"})",
             R"({"result":7})", R"({"status":"0","message":"NOTOK","result":"Max rate limit reached"})"})
    {
        MockEndpoint m{[body](int, const httplib::Request&, httplib::Response& res) { json_body(res, body); }};
        EXPECT_EQ(fetch_error(m.config()), ErrorCode::MalformedResponse) << body;
    }
}

TEST(fetch_code, invalid_address_is_rejected_before_any_request)
{
    MockEndpoint m{[](int, const httplib::Request&, httplib::Response& res) {
        json_body(res, R"({"result":"0x00"})");
    }};
    for (const auto& bad : std::vector<std::string>{"", "0x1234", "aa" + std::string(40, 'a'), "0x" + std::string(40, 'g'),
             "0x" + std::string(41, 'a')})
        EXPECT_EQ(fetch_error(m.config(), bad), ErrorCode::InvalidArgument) << bad;
    EXPECT_EQ(m.requests(), 0);
    EXPECT_TRUE(is_valid_address("0x" + std::string(40, 'F')));
}

TEST(fetch_code, unreachable_endpoint)
{
    int port = 0;
    {
        httplib::Server probe;
        port = probe.bind_to_any_port("127.0.0.1");
    }
    FetchConfig cfg;
    cfg.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/api";
    cfg.backoff_initial = 1ms;
    cfg.timeout = 200ms;
    EXPECT_EQ(fetch_error(cfg), ErrorCode::NetworkError);
    cfg.endpoint = "no-scheme";
    EXPECT_EQ(fetch_error(cfg), ErrorCode::InvalidArgument);
}

TEST(rate_limiter, shared_across_threads)
{
    MockEndpoint m{[](int, const httplib::Request&, httplib::Response& res) {
        json_body(res, R"({"result":"0x00"})");
    }};
    auto cfg = m.config();
    cfg.rate_limit = 20.0;
    RateLimiter limiter;
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::thread> threads;
    for (int t = 0; t < 3; ++t)
        threads.emplace_back([&] {
            for (int i = 0; i < 2; ++i)
                fetch_code(kAddr, cfg, limiter);
        });
    for (auto& t : threads)
        t.join();
    const auto elapsed = std::chrono::steady_clock::now() - t0;
    EXPECT_EQ(m.requests(), 6);
    // Six admissions at 20/s need at least five 50 ms gaps.
    EXPECT_GE(elapsed, 245ms);
    EXPECT_THROW(limiter.acquire(0.0), Error);
}
