// scamdetect: static detection of malicious smart contracts
// Copyright 2026 The scamdetect Authors.
// SPDX-License-Identifier: Apache-2.0

#include "scamdetect/data.hpp"
#include "scamdetect/error.hpp"
#include "scamdetect/rng.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace scamdetect
{
namespace
{
constexpr std::uint8_t kProxyPrefix[] = {0x36, 0x3d, 0x3d, 0x37, 0x3d, 0x3d, 0x3d, 0x36, 0x3d, 0x73};
constexpr std::uint8_t kProxySuffix[] = {
    0x5a, 0xf4, 0x3d, 0x82, 0x80, 0x3e, 0x90, 0x3d, 0x91, 0x60, 0x2b, 0x57, 0xfd, 0x5b, 0xf3};
constexpr std::size_t kProxyLen = sizeof(kProxyPrefix) + 20 + sizeof(kProxySuffix);

[[noreturn]] void malformed(const std::string& what)
{
    throw Error{ErrorCode::MalformedLine, what};
}

const std::string& string_field(const nlohmann::json& j, const char* key)
{
    const auto it = j.find(key);
    if (it == j.end())
        malformed(std::string{"missing field '"} + key + "'");
    if (!it->is_string())
        malformed(std::string{"field '"} + key + "' must be a string");
    return it->get_ref<const std::string&>();
}

Label parse_label(const std::string& s)
{
    if (s == "benign")
        return Label::Benign;
    if (s == "phishing")
        return Label::Phishing;
    malformed("unknown label '" + s + "'");
}

RecordSource parse_source(const std::string& s)
{
    if (s == "etherscan")
        return RecordSource::Etherscan;
    if (s == "file")
        return RecordSource::File;
    if (s == "synthetic")
        return RecordSource::Synthetic;
    malformed("unknown source '" + s + "'");
}

Split parse_split(const std::string& s)
{
    if (s == "train")
        return Split::Train;
    if (s == "val")
        return Split::Val;
    if (s == "test")
        return Split::Test;
    malformed("unknown split '" + s + "'");
}
}  // namespace

std::string_view label_name(Label l) noexcept
{
    return l == Label::Phishing ? "phishing" : "benign";
}

std::string_view source_name(RecordSource s) noexcept
{
    switch (s)
    {
    case RecordSource::Etherscan:
        return "etherscan";
    case RecordSource::File:
        return "file";
    case RecordSource::Synthetic:
        return "synthetic";
    }
    return "file";
}

std::string_view split_name(Split s) noexcept
{
    switch (s)
    {
    case Split::Train:
        return "train";
    case Split::Val:
        return "val";
    case Split::Test:
        return "test";
    }
    return "train";
}

bytes DatasetRecord::code() const
{
    return parse_hex(bytecode).code;
}

nlohmann::json to_json(const DatasetRecord& r)
{
    nlohmann::json j = {
        {"address", r.address},
        {"bytecode", r.bytecode},
        {"label", std::string{label_name(r.label)}},
        {"source", std::string{source_name(r.source)}},
    };
    if (r.split)
        j["split"] = std::string{split_name(*r.split)};
    return j;
}

DatasetRecord record_from_json(const nlohmann::json& j)
{
    if (!j.is_object())
        malformed("record must be a JSON object");
    static const std::set<std::string> kFields = {"address", "bytecode", "label", "source", "split"};
    for (const auto& [key, _] : j.items())
        if (!kFields.contains(key))
            malformed("unknown field '" + key + "'");

    DatasetRecord r;
    r.address = string_field(j, "address");
    if (r.address.empty())
        malformed("address must be non-empty");
    r.bytecode = string_field(j, "bytecode");
    try
    {
        parse_hex(r.bytecode);
    }
    catch (const Error& e)
    {
        malformed(std::string{"bytecode: "} + e.what());
    }
    r.label = parse_label(string_field(j, "label"));
    r.source = parse_source(string_field(j, "source"));
    if (j.contains("split"))
        r.split = parse_split(string_field(j, "split"));
    return r;
}

std::vector<DatasetRecord> parse_jsonl(std::string_view text)
{
    std::vector<DatasetRecord> out;
    std::set<std::string> seen;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size())
    {
        const auto nl = text.find('\n', pos);
        const auto line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() : nl + 1;
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos)
            continue;
        try
        {
            auto rec = record_from_json(nlohmann::json::parse(line));
            if (!seen.insert(rec.address).second)
                throw Error{ErrorCode::DuplicateAddress,
                    "line " + std::to_string(line_no) + ": duplicate address '" + rec.address + "'"};
            out.push_back(std::move(rec));
        }
        catch (const nlohmann::json::exception& e)
        {
            throw Error{ErrorCode::MalformedLine,
                "line " + std::to_string(line_no) + ": " + e.what()};
        }
        catch (const Error& e)
        {
            if (e.code() != ErrorCode::MalformedLine)
                throw;
            throw Error{ErrorCode::MalformedLine,
                "line " + std::to_string(line_no) + ": " + e.what()};
        }
    }
    return out;
}

std::string dump_jsonl(const std::vector<DatasetRecord>& records)
{
    std::string out;
    for (const auto& r : records)
    {
        out += to_json(r).dump();
        out += '\n';
    }
    return out;
}

std::vector<DatasetRecord> load_jsonl(const std::filesystem::path& path)
{
    std::ifstream in{path, std::ios::binary};
    if (!in)
        throw Error{ErrorCode::IoFailure, "cannot open '" + path.string() + "'"};
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_jsonl(buf.str());
}

void save_jsonl(const std::vector<DatasetRecord>& records, const std::filesystem::path& path)
{
    std::ofstream out{path, std::ios::binary | std::ios::trunc};
    if (!out)
        throw Error{ErrorCode::IoFailure, "cannot write '" + path.string() + "'"};
    out << dump_jsonl(records);
    if (!out)
        throw Error{ErrorCode::IoFailure, "write to '" + path.string() + "' failed"};
}

std::optional<Address> is_minimal_proxy(bytes_view code)
{
    if (code.size() != kProxyLen)
        return std::nullopt;
    if (!std::equal(std::begin(kProxyPrefix), std::end(kProxyPrefix), code.begin()))
        return std::nullopt;
    if (!std::equal(std::begin(kProxySuffix), std::end(kProxySuffix),
            code.begin() + sizeof(kProxyPrefix) + 20))
        return std::nullopt;
    Address a{};
    std::copy_n(code.begin() + sizeof(kProxyPrefix), 20, a.begin());
    return a;
}

bytes minimal_proxy_code(const Address& implementation)
{
    bytes out(kProxyLen);
    auto it = std::copy(std::begin(kProxyPrefix), std::end(kProxyPrefix), out.begin());
    it = std::copy(implementation.begin(), implementation.end(), it);
    std::copy(std::begin(kProxySuffix), std::end(kProxySuffix), it);
    return out;
}

std::array<std::uint8_t, 32> sha256(bytes_view data)
{
    std::array<std::uint8_t, 32> digest{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1)
        throw Error{ErrorCode::InvalidArgument, "SHA-256 computation failed"};
    return digest;
}

DedupResult dedup(const std::vector<DatasetRecord>& records)
{
    DedupResult result;
    std::vector<bool> keep(records.size(), true);

    std::map<Address, std::size_t> first_proxy;
    std::vector<bytes> codes(records.size());
    for (std::size_t i = 0; i < records.size(); ++i)
    {
        codes[i] = records[i].code();
        const auto impl = is_minimal_proxy(codes[i]);
        if (!impl)
            continue;
        const auto [it, inserted] = first_proxy.emplace(*impl, i);
        if (!inserted)
        {
            keep[i] = false;
            result.dropped.push_back(
                {records[i].address, "minimal_proxy", records[it->second].address});
        }
    }

    std::map<std::array<std::uint8_t, 32>, std::size_t> winner;
    std::vector<std::array<std::uint8_t, 32>> keys(records.size());
    for (std::size_t i = 0; i < records.size(); ++i)
    {
        if (!keep[i])
            continue;
        keys[i] = sha256(strip_metadata(codes[i]));
        const auto [it, inserted] = winner.emplace(keys[i], i);
        if (!inserted && records[i].address < records[it->second].address)
            it->second = i;
    }
    for (std::size_t i = 0; i < records.size(); ++i)
    {
        if (!keep[i])
            continue;
        const std::size_t w = winner[keys[i]];
        if (w != i)
        {
            keep[i] = false;
            result.dropped.push_back({records[i].address, "duplicate_code", records[w].address});
        }
    }
    for (std::size_t i = 0; i < records.size(); ++i)
        if (keep[i])
            result.kept.push_back(records[i]);
    return result;
}

nlohmann::json to_json(const DedupResult& r)
{
    nlohmann::json dropped = nlohmann::json::array();
    for (const auto& d : r.dropped)
        dropped.push_back({{"address", d.address}, {"reason", d.reason}, {"kept", d.kept}});
    return {{"kept", r.kept.size()}, {"dropped", dropped}};
}

std::vector<DatasetRecord> split(
    std::vector<DatasetRecord> records, const SplitRatios& ratios, std::uint64_t seed)
{
    if (records.empty())
        throw Error{ErrorCode::EmptyCorpus, "cannot split an empty corpus"};
    if (ratios.train < 0 || ratios.val < 0 || ratios.test < 0 ||
        std::abs(ratios.train + ratios.val + ratios.test - 1.0) > 1e-9)
        throw Error{ErrorCode::InvalidArgument, "split ratios must be non-negative and sum to 1"};

    // Global held-out sizes use floor rounding; per-class quotas are floored
    // and the leftover goes to the class with the largest fractional share
    // (ties: the class with more records still in train, then benign).
    const auto floor_of = [](double x) { return static_cast<std::size_t>(std::floor(x + 1e-9)); };
    std::array<std::vector<std::size_t>, 2> members;
    for (std::size_t i = 0; i < records.size(); ++i)
        members[static_cast<std::size_t>(records[i].label)].push_back(i);

    std::array<std::size_t, 2> val_q{}, test_q{};
    auto allocate = [&](double ratio, std::array<std::size_t, 2>& quota) {
        const std::size_t global = floor_of(static_cast<double>(records.size()) * ratio);
        std::array<double, 2> frac{};
        std::size_t assigned = 0;
        for (std::size_t c = 0; c < 2; ++c)
        {
            const double exact = static_cast<double>(members[c].size()) * ratio;
            quota[c] = floor_of(exact);
            frac[c] = exact - static_cast<double>(quota[c]);
            assigned += quota[c];
        }
        for (; assigned < global; ++assigned)
        {
            std::size_t best = 2;
            for (std::size_t c = 0; c < 2; ++c)
            {
                const std::size_t left = members[c].size() - val_q[c] - test_q[c];
                if (left == 0)
                    continue;
                if (best == 2)
                {
                    best = c;
                    continue;
                }
                const std::size_t best_left = members[best].size() - val_q[best] - test_q[best];
                if (frac[c] > frac[best] + 1e-12 ||
                    (std::abs(frac[c] - frac[best]) <= 1e-12 && left > best_left))
                    best = c;
            }
            if (best == 2)
                break;
            ++quota[best];
            frac[best] -= 1.0;
        }
    };
    allocate(ratios.val, val_q);
    allocate(ratios.test, test_q);

    for (std::size_t c = 0; c < 2; ++c)
    {
        auto order = members[c];
        Rng rng = Rng::derive(seed, c);
        rng.shuffle(order);
        for (std::size_t k = 0; k < order.size(); ++k)
        {
            Split s = Split::Train;
            if (k < val_q[c])
                s = Split::Val;
            else if (k < val_q[c] + test_q[c])
                s = Split::Test;
            records[order[k]].split = s;
        }
    }
    return records;
}

}  // namespace scamdetect
