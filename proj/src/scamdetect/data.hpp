// scamdetect: static detection of malicious smart contracts
// Copyright 2026 The scamdetect Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "scamdetect/disasm.hpp"
#include "scamdetect/features.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace scamdetect
{
enum class RecordSource
{
    Etherscan,
    File,
    Synthetic,
};

enum class Split
{
    Train,
    Val,
    Test,
};

std::string_view label_name(Label l) noexcept;
std::string_view source_name(RecordSource s) noexcept;
std::string_view split_name(Split s) noexcept;

struct DatasetRecord
{
    std::string address;
    /// Hex text, as stored in the corpus.
    std::string bytecode;
    Label label = Label::Benign;
    RecordSource source = RecordSource::File;
    std::optional<Split> split;

    [[nodiscard]] bytes code() const;

    friend bool operator==(const DatasetRecord&, const DatasetRecord&) = default;
};

nlohmann::json to_json(const DatasetRecord& r);
/// Throws Error{MalformedLine} on schema violations (message without line
/// number; load_jsonl adds it).
DatasetRecord record_from_json(const nlohmann::json& j);

std::vector<DatasetRecord> load_jsonl(const std::filesystem::path& path);
void save_jsonl(const std::vector<DatasetRecord>& records, const std::filesystem::path& path);
std::vector<DatasetRecord> parse_jsonl(std::string_view text);
std::string dump_jsonl(const std::vector<DatasetRecord>& records);

using Address = std::array<std::uint8_t, 20>;

/// Embedded implementation address if `code` is exactly the ERC-1167 runtime.
std::optional<Address> is_minimal_proxy(bytes_view code);

bytes minimal_proxy_code(const Address& implementation);

std::array<std::uint8_t, 32> sha256(bytes_view data);

struct DedupDrop
{
    std::string address;
    /// "minimal_proxy" or "duplicate_code".
    std::string reason;
    /// Address of the record that was kept in its place.
    std::string kept;
};

struct DedupResult
{
    std::vector<DatasetRecord> kept;
    std::vector<DedupDrop> dropped;
};

/// Drop repeated minimal proxies per implementation, then keep the
/// lexicographically smallest address per SHA-256 of metadata-stripped code.
/// Kept records retain input order.
DedupResult dedup(const std::vector<DatasetRecord>& records);

nlohmann::json to_json(const DedupResult& r);

struct SplitRatios
{
    double train = 0.8;
    double val = 0.1;
    double test = 0.1;
};

/// Stratified seeded split; see README for the rounding rule.
std::vector<DatasetRecord> split(
    std::vector<DatasetRecord> records, const SplitRatios& ratios, std::uint64_t seed);

/// Synthetic corpus of analyzable contracts with a planted phishing motif.
std::vector<DatasetRecord> synth_generate(
    std::size_t n_benign, std::size_t n_phishing, std::uint64_t seed);

}  // namespace scamdetect
