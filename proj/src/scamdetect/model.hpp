// scamdetect: static detection of malicious smart contracts
// Copyright 2026 The scamdetect Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "scamdetect/features.hpp"
#include "scamdetect/matrix.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace scamdetect
{
enum class ModelKind
{
    Histogram,
    Gcn,
    Sage,
    Gin,
    Gat,
    Tag,
};

inline constexpr ModelKind kGnnKinds[] = {
    ModelKind::Gcn, ModelKind::Sage, ModelKind::Gin, ModelKind::Gat, ModelKind::Tag};

std::string_view model_kind_name(ModelKind k) noexcept;
/// Throws Error{InvalidArgument} on an unknown name.
ModelKind parse_model_kind(std::string_view name);

struct Hyper
{
    std::size_t hidden_dim = 32;
    std::size_t num_layers = 2;
    double gat_leaky_slope = 0.2;
    std::size_t tag_hops = 3;
    double gin_eps = 0.0;

    friend bool operator==(const Hyper&, const Hyper&) = default;
};

struct NamedMatrix
{
    std::string name;
    DenseMatrix value;

    friend bool operator==(const NamedMatrix&, const NamedMatrix&) = default;
};

/// Weights of one model. GNN kinds hold num_layers propagation layers (no
/// bias terms) followed by a linear head; the histogram kind is logistic
/// regression and holds only the head. The head is always the last two
/// entries: "head.w" (F x 1) and "head.b" (1 x 1).
struct ModelParams
{
    ModelKind kind = ModelKind::Gcn;
    Hyper hyper;
    std::uint64_t seed = 0;
    std::vector<NamedMatrix> layers;

    [[nodiscard]] std::size_t num_parameters() const noexcept;

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Shapes and names of every weight matrix for a kind, in storage order.
std::vector<NamedMatrix> parameter_layout(ModelKind kind, const Hyper& hyper);

/// Glorot-uniform weights, zero head bias.
ModelParams init_params(ModelKind kind, std::uint64_t seed, const Hyper& hyper = {});

/// Pre-sigmoid score.
double forward_logit(const ModelParams& params, const GraphSample& sample);
/// Phishing probability in (0, 1).
double forward(const ModelParams& params, const GraphSample& sample);

/// Binary cross-entropy of a probability.
double loss(double p, int y);
/// Binary cross-entropy evaluated from the logit (numerically stable).
double loss_from_logit(double logit, int y);

/// Loss of one sample plus its gradient, accumulated into `grads` (same
/// layout as params.layers). Optionally records the rectifier sign pattern.
double loss_and_gradient(const ModelParams& params, const GraphSample& sample,
    std::vector<DenseMatrix>& grads, std::vector<bool>* pattern = nullptr);

std::vector<DenseMatrix> zero_gradients(const ModelParams& params);

struct TrainConfig
{
    std::size_t epochs = 200;
    double learning_rate = 1e-2;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_eps = 1e-8;
    std::uint64_t seed = 0;
    Hyper hyper;
};

struct TrainReport
{
    std::vector<double> loss;
    ModelParams model;
};

/// Full-batch Adam on the mean loss. Throws EmptyDataset / SingleClassDataset.
TrainReport train(ModelKind kind, std::span<const GraphSample> dataset, const TrainConfig& config);

struct GradCheckResult
{
    double max_rel_error = 0.0;
    std::size_t checked = 0;
    /// Coordinates whose finite-difference probe crossed a rectifier kink.
    std::size_t skipped_kinks = 0;
};

inline constexpr double kGradCheckStep = 1e-5;
inline constexpr double kGradCheckJitter = 1e-3;

/// Compare analytic and central-difference gradients for every parameter.
/// Parameters are first jittered by U(-1e-3, 1e-3) so that all-zero inputs do
/// not sit on a rectifier kink.
GradCheckResult grad_check(ModelParams params, const GraphSample& sample, std::uint64_t seed);
GradCheckResult grad_check(ModelKind kind, const GraphSample& sample, std::uint64_t seed);

nlohmann::json to_json(const ModelParams& params);
ModelParams model_from_json(const nlohmann::json& j);
nlohmann::json to_json(const TrainReport& report);

}  // namespace scamdetect
