// scamdetect: static detection of malicious smart contracts
// Copyright 2026 The scamdetect Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "scamdetect/data.hpp"
#include "scamdetect/error.hpp"
#include "scamdetect/features.hpp"
#include "scamdetect/model.hpp"
#include "scamdetect/obfuscate.hpp"

#include <json.hpp>

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace scamdetect
{
struct Confusion
{
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;

    friend bool operator==(const Confusion&, const Confusion&) = default;
};

struct Metrics
{
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    Confusion confusion;
    std::size_t n = 0;

    friend bool operator==(const Metrics&, const Metrics&) = default;
};

/// 0/0 ratios are reported as 0. Throws EmptySet when the counts sum to 0.
Metrics metrics_from_confusion(const Confusion& c);

/// Threshold 0.5 on forward(); phishing is the positive class.
Metrics evaluate(const ModelParams& params, std::span<const GraphSample> samples);

nlohmann::json to_json(const Metrics& m);

/// disassemble, build the CFG and extract features for one record.
GraphSample featurize_record(const DatasetRecord& record);

struct RecordError
{
    std::size_t index = 0;
    std::string id;
    ErrorCode code = ErrorCode::InvalidArgument;
    std::string message;
};

struct FeaturizeResult
{
    /// In input order, skipping failed records.
    std::vector<GraphSample> samples;
    std::vector<RecordError> errors;
};

/// Featurize every record on up to `threads` workers (0 = hardware
/// concurrency). A failing record yields a RecordError instead of aborting.
FeaturizeResult featurize(const std::vector<DatasetRecord>& records, unsigned threads = 0);

nlohmann::json to_json(const GraphSample& s);
GraphSample graph_from_json(const nlohmann::json& j);
std::vector<GraphSample> parse_graphs(std::string_view text);
std::string dump_graphs(std::span<const GraphSample> samples);
std::vector<GraphSample> load_graphs(const std::filesystem::path& path);
void save_graphs(std::span<const GraphSample> samples, const std::filesystem::path& path);

struct NamedObfConfig
{
    std::string name;
    ObfConfig config;
};

/// [{name, passes:[...] | "a,b", seed, intensity}]
std::vector<NamedObfConfig> obf_configs_from_json(const nlohmann::json& j);
nlohmann::json to_json(const NamedObfConfig& c);

struct SpotCheck
{
    std::size_t checked = 0;
    std::size_t equivalent = 0;
    /// Samples the interpreter could not execute (e.g. CALLER); not failures.
    std::size_t unsupported = 0;
};

inline constexpr std::size_t kSpotCheckVectors = 32;
inline constexpr double kSpotCheckFraction = 0.1;

struct ObfuscatedMetrics
{
    NamedObfConfig config;
    Metrics gnn;
    Metrics baseline;
    /// clean accuracy minus obfuscated accuracy.
    double gnn_accuracy_drop = 0.0;
    double baseline_accuracy_drop = 0.0;
    SpotCheck spot_check;
};

struct RobustnessReport
{
    std::string model_kind;
    std::string baseline_kind;
    Metrics clean;
    Metrics baseline_clean;
    std::vector<ObfuscatedMetrics> obfuscated;
};

/// Throws PreconditionViolated (listing offending addresses) when a test
/// record has unresolved jumps, and EquivalenceFailure when the spot-check
/// finds an obfuscated variant that behaves differently.
RobustnessReport robustness_report(const ModelParams& params, const ModelParams& baseline,
    const std::vector<DatasetRecord>& test_records, const std::vector<NamedObfConfig>& configs,
    unsigned threads = 0);

nlohmann::json to_json(const RobustnessReport& r);

/// Sorted keys, two-space indent, trailing newline.
std::string dump_stable(const nlohmann::json& j);

}  // namespace scamdetect
