// scamdetect: static detection of malicious smart contracts
// Copyright 2026 The scamdetect Authors.
// SPDX-License-Identifier: Apache-2.0

#include "scamdetect/model.hpp"
#include "scamdetect/error.hpp"
#include "scamdetect/gnn_tape.hpp"
#include "scamdetect/rng.hpp"

#include <algorithm>
#include <cmath>

namespace scamdetect
{
namespace
{
std::size_t params_per_layer(ModelKind kind, const Hyper& hyper)
{
    switch (kind)
    {
    case ModelKind::Gcn:
        return 1;
    case ModelKind::Sage:
    case ModelKind::Gin:
    case ModelKind::Gat:
        return 2;
    case ModelKind::Tag:
        return hyper.tag_hops + 1;
    case ModelKind::Histogram:
        return 0;
    }
    return 0;
}

double sigmoid(double z) noexcept
{
    if (z >= 0)
        return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

struct ForwardPass
{
    std::vector<gnn::Tape> tapes;
    DenseMatrix last;
    std::vector<double> pooled;
    double logit = 0.0;
};

void check_sample(const ModelParams& params, const GraphSample& sample)
{
    if (params.kind == ModelKind::Histogram)
        return;
    if (sample.num_nodes == 0)
        throw Error{ErrorCode::DimensionMismatch, "graph sample has no nodes"};
    if (sample.features.size() != sample.num_nodes)
        throw Error{ErrorCode::DimensionMismatch,
            "graph sample '" + sample.id + "' has " + std::to_string(sample.features.size()) +
                " feature rows for " + std::to_string(sample.num_nodes) + " nodes"};
}

/// Runs the kind-specific propagation layers, pooling and head. Records tapes
/// when `record` is set.
double run_forward(const ModelParams& params, const GraphSample& sample, const gnn::Graph& g,
    ForwardPass* pass)
{
    const auto& L = params.layers;
    const auto& head_w = L[L.size() - 2].value;
    const double head_b = L.back().value(0, 0);

    if (params.kind == ModelKind::Histogram)
    {
        if (head_w.rows() != kHistogramDim)
            throw Error{ErrorCode::DimensionMismatch, "histogram head must be 256 x 1"};
        double z = head_b;
        for (std::size_t i = 0; i < kHistogramDim; ++i)
            z += sample.histogram[i] * head_w(i, 0);
        if (pass)
            pass->logit = z;
        return z;
    }

    const std::size_t per = params_per_layer(params.kind, params.hyper);
    DenseMatrix h = gnn::feature_matrix(sample);
    if (pass)
        pass->tapes.resize(params.hyper.num_layers);
    for (std::size_t l = 0; l < params.hyper.num_layers; ++l)
    {
        gnn::Tape* tape = pass ? &pass->tapes[l] : nullptr;
        const auto* p = &L[l * per];
        switch (params.kind)
        {
        case ModelKind::Gcn:
            h = gnn::gcn_forward(g, h, p[0].value, tape);
            break;
        case ModelKind::Sage:
            h = gnn::sage_forward(g, h, p[0].value, p[1].value, tape);
            break;
        case ModelKind::Gin:
            h = gnn::gin_forward(g, h, p[0].value, p[1].value, params.hyper.gin_eps, tape);
            break;
        case ModelKind::Gat:
            h = gnn::gat_forward(g, h, p[0].value, p[1].value, params.hyper.gat_leaky_slope, tape);
            break;
        case ModelKind::Tag: {
            std::vector<DenseMatrix> ws;
            for (std::size_t k = 0; k < per; ++k)
                ws.push_back(p[k].value);
            h = gnn::tag_forward(g, h, ws, tape);
            break;
        }
        case ModelKind::Histogram:
            break;
        }
    }

    const auto pooled = gnn::mean_pool(h);
    if (pooled.size() != head_w.rows())
        throw Error{ErrorCode::DimensionMismatch, "head input does not match hidden width"};
    double z = head_b;
    for (std::size_t f = 0; f < pooled.size(); ++f)
        z += pooled[f] * head_w(f, 0);
    if (pass)
    {
        pass->last = std::move(h);
        pass->pooled = pooled;
        pass->logit = z;
    }
    return z;
}

void backward(const ModelParams& params, const GraphSample& sample, const gnn::Graph& g,
    const ForwardPass& pass, double d_logit, std::vector<DenseMatrix>& grads)
{
    const auto& L = params.layers;
    const std::size_t head = L.size() - 2;
    const auto& head_w = L[head].value;
    grads[head + 1](0, 0) += d_logit;

    if (params.kind == ModelKind::Histogram)
    {
        for (std::size_t i = 0; i < kHistogramDim; ++i)
            grads[head](i, 0) += d_logit * sample.histogram[i];
        return;
    }

    for (std::size_t f = 0; f < pass.pooled.size(); ++f)
        grads[head](f, 0) += d_logit * pass.pooled[f];

    const std::size_t n = pass.last.rows();
    DenseMatrix dh{n, pass.last.cols()};
    for (std::size_t v = 0; v < n; ++v)
        for (std::size_t f = 0; f < dh.cols(); ++f)
            dh(v, f) = d_logit * head_w(f, 0) / static_cast<double>(n);

    const std::size_t per = params_per_layer(params.kind, params.hyper);
    for (std::size_t l = params.hyper.num_layers; l-- > 0;)
    {
        const auto& tape = pass.tapes[l];
        const auto* p = &L[l * per];
        auto* gp = &grads[l * per];
        switch (params.kind)
        {
        case ModelKind::Gcn:
            dh = gnn::gcn_backward(g, tape, p[0].value, std::move(dh), gp[0]);
            break;
        case ModelKind::Sage:
            dh = gnn::sage_backward(g, tape, p[0].value, p[1].value, std::move(dh), gp[0], gp[1]);
            break;
        case ModelKind::Gin:
            dh = gnn::gin_backward(
                g, tape, p[0].value, p[1].value, params.hyper.gin_eps, std::move(dh), gp[0], gp[1]);
            break;
        case ModelKind::Gat:
            dh = gnn::gat_backward(g, tape, p[0].value, p[1].value, params.hyper.gat_leaky_slope,
                std::move(dh), gp[0], gp[1]);
            break;
        case ModelKind::Tag: {
            std::vector<DenseMatrix> ws;
            for (std::size_t k = 0; k < per; ++k)
                ws.push_back(p[k].value);
            dh = gnn::tag_backward(g, tape, ws, std::move(dh), std::span<DenseMatrix>{gp, per});
            break;
        }
        case ModelKind::Histogram:
            break;
        }
    }
}

gnn::Graph graph_for(const ModelParams& params, const GraphSample& sample)
{
    check_sample(params, sample);
    if (params.kind == ModelKind::Histogram)
        return {};
    return gnn::make_graph(sample);
}

double loss_with_pattern(const ModelParams& params, const GraphSample& sample,
    const gnn::Graph& g, std::vector<bool>& pattern)
{
    ForwardPass pass;
    const double z = run_forward(params, sample, g, &pass);
    pattern.clear();
    for (const auto& t : pass.tapes)
        t.activation_pattern(pattern);
    return loss_from_logit(z, static_cast<int>(sample.label));
}
}  // namespace

std::string_view model_kind_name(ModelKind k) noexcept
{
    switch (k)
    {
    case ModelKind::Histogram:
        return "histogram";
    case ModelKind::Gcn:
        return "gcn";
    case ModelKind::Sage:
        return "sage";
    case ModelKind::Gin:
        return "gin";
    case ModelKind::Gat:
        return "gat";
    case ModelKind::Tag:
        return "tag";
    }
    return "gcn";
}

ModelKind parse_model_kind(std::string_view name)
{
    for (auto k : {ModelKind::Histogram, ModelKind::Gcn, ModelKind::Sage, ModelKind::Gin,
             ModelKind::Gat, ModelKind::Tag})
        if (model_kind_name(k) == name)
            return k;
    throw Error{ErrorCode::InvalidArgument, "unknown model kind '" + std::string{name} + "'"};
}

std::size_t ModelParams::num_parameters() const noexcept
{
    std::size_t n = 0;
    for (const auto& l : layers)
        n += l.value.size();
    return n;
}

std::vector<NamedMatrix> parameter_layout(ModelKind kind, const Hyper& hyper)
{
    std::vector<NamedMatrix> out;
    auto add = [&](std::string name, std::size_t r, std::size_t c) {
        out.push_back({std::move(name), DenseMatrix{r, c}});
    };
    if (kind == ModelKind::Histogram)
    {
        add("head.w", kHistogramDim, 1);
        add("head.b", 1, 1);
        return out;
    }
    if (hyper.num_layers == 0 || hyper.hidden_dim == 0)
        throw Error{ErrorCode::InvalidArgument, "num_layers and hidden_dim must be positive"};

    const std::size_t hid = hyper.hidden_dim;
    for (std::size_t l = 0; l < hyper.num_layers; ++l)
    {
        const std::size_t in = l == 0 ? kNodeFeatureDim : hid;
        const std::string p = "l" + std::to_string(l) + ".";
        switch (kind)
        {
        case ModelKind::Gcn:
            add(p + "w", in, hid);
            break;
        case ModelKind::Sage:
            add(p + "w_self", in, hid);
            add(p + "w_neigh", in, hid);
            break;
        case ModelKind::Gin:
            add(p + "mlp_a", in, hid);
            add(p + "mlp_b", hid, hid);
            break;
        case ModelKind::Gat:
            add(p + "w", in, hid);
            add(p + "att", 2 * hid, 1);
            break;
        case ModelKind::Tag:
            for (std::size_t k = 0; k <= hyper.tag_hops; ++k)
                add(p + "w" + std::to_string(k), in, hid);
            break;
        case ModelKind::Histogram:
            break;
        }
    }
    add("head.w", hid, 1);
    add("head.b", 1, 1);
    return out;
}

ModelParams init_params(ModelKind kind, std::uint64_t seed, const Hyper& hyper)
{
    ModelParams params;
    params.kind = kind;
    params.hyper = hyper;
    params.seed = seed;
    params.layers = parameter_layout(kind, hyper);
    Rng rng{seed};
    for (auto& l : params.layers)
    {
        if (l.name == "head.b")
            continue;
        const double limit =
            std::sqrt(6.0 / static_cast<double>(l.value.rows() + l.value.cols()));
        for (auto& v : l.value.data())
            v = rng.uniform(-limit, limit);
    }
    return params;
}

double forward_logit(const ModelParams& params, const GraphSample& sample)
{
    return run_forward(params, sample, graph_for(params, sample), nullptr);
}

double forward(const ModelParams& params, const GraphSample& sample)
{
    return sigmoid(forward_logit(params, sample));
}

double loss(double p, int y)
{
    return -(y * std::log(p) + (1 - y) * std::log(1.0 - p));
}

double loss_from_logit(double logit, int y)
{
    return std::max(logit, 0.0) - logit * y + std::log1p(std::exp(-std::abs(logit)));
}

std::vector<DenseMatrix> zero_gradients(const ModelParams& params)
{
    std::vector<DenseMatrix> grads;
    grads.reserve(params.layers.size());
    for (const auto& l : params.layers)
        grads.emplace_back(l.value.rows(), l.value.cols());
    return grads;
}

double loss_and_gradient(const ModelParams& params, const GraphSample& sample,
    std::vector<DenseMatrix>& grads, std::vector<bool>* pattern)
{
    const auto g = graph_for(params, sample);
    ForwardPass pass;
    const double z = run_forward(params, sample, g, &pass);
    const int y = static_cast<int>(sample.label);
    backward(params, sample, g, pass, sigmoid(z) - y, grads);
    if (pattern)
    {
        pattern->clear();
        for (const auto& t : pass.tapes)
            t.activation_pattern(*pattern);
    }
    return loss_from_logit(z, y);
}

TrainReport train(ModelKind kind, std::span<const GraphSample> dataset, const TrainConfig& config)
{
    if (dataset.empty())
        throw Error{ErrorCode::EmptyDataset, "training set is empty"};
    const bool has_benign = std::any_of(dataset.begin(), dataset.end(),
        [](const GraphSample& s) { return s.label == Label::Benign; });
    const bool has_phish = std::any_of(dataset.begin(), dataset.end(),
        [](const GraphSample& s) { return s.label == Label::Phishing; });
    if (!has_benign || !has_phish)
        throw Error{ErrorCode::SingleClassDataset, "training set needs both labels"};
    if (!(config.learning_rate > 0.0) || config.epochs == 0)
        throw Error{ErrorCode::InvalidArgument, "learning_rate must be > 0 and epochs >= 1"};

    TrainReport report;
    report.model = init_params(kind, config.seed, config.hyper);
    auto& params = report.model;

    std::vector<gnn::Graph> graphs;
    graphs.reserve(dataset.size());
    for (const auto& s : dataset)
        graphs.push_back(graph_for(params, s));

    auto m = zero_gradients(params);
    auto v = zero_gradients(params);
    const double inv_n = 1.0 / static_cast<double>(dataset.size());
    double b1t = 1.0, b2t = 1.0;
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch)
    {
        auto grads = zero_gradients(params);
        double total = 0.0;
        for (std::size_t i = 0; i < dataset.size(); ++i)
        {
            ForwardPass pass;
            const double z = run_forward(params, dataset[i], graphs[i], &pass);
            const int y = static_cast<int>(dataset[i].label);
            total += loss_from_logit(z, y);
            backward(params, dataset[i], graphs[i], pass, sigmoid(z) - y, grads);
        }
        report.loss.push_back(total * inv_n);

        b1t *= config.beta1;
        b2t *= config.beta2;
        for (std::size_t p = 0; p < params.layers.size(); ++p)
        {
            auto& w = params.layers[p].value.data();
            auto& gm = m[p].data();
            auto& gv = v[p].data();
            const auto& g = grads[p].data();
            for (std::size_t k = 0; k < w.size(); ++k)
            {
                const double gk = g[k] * inv_n;
                gm[k] = config.beta1 * gm[k] + (1.0 - config.beta1) * gk;
                gv[k] = config.beta2 * gv[k] + (1.0 - config.beta2) * gk * gk;
                const double mhat = gm[k] / (1.0 - b1t);
                const double vhat = gv[k] / (1.0 - b2t);
                w[k] -= config.learning_rate * mhat / (std::sqrt(vhat) + config.adam_eps);
            }
        }
    }
    return report;
}

GradCheckResult grad_check(ModelParams params, const GraphSample& sample, std::uint64_t seed)
{
    Rng rng = Rng::derive(seed, 0x6a177e5);
    for (auto& l : params.layers)
        for (auto& v : l.value.data())
            v += rng.uniform(-kGradCheckJitter, kGradCheckJitter);

    const auto g = graph_for(params, sample);
    auto grads = zero_gradients(params);
    std::vector<bool> base_pattern;
    loss_and_gradient(params, sample, grads, &base_pattern);

    GradCheckResult result;
    std::vector<bool> plus_pattern, minus_pattern;
    for (std::size_t p = 0; p < params.layers.size(); ++p)
    {
        auto& w = params.layers[p].value.data();
        for (std::size_t k = 0; k < w.size(); ++k)
        {
            const double saved = w[k];
            w[k] = saved + kGradCheckStep;
            const double lp = loss_with_pattern(params, sample, g, plus_pattern);
            w[k] = saved - kGradCheckStep;
            const double lm = loss_with_pattern(params, sample, g, minus_pattern);
            w[k] = saved;
            if (plus_pattern != base_pattern || minus_pattern != base_pattern)
            {
                ++result.skipped_kinks;
                continue;
            }
            const double numeric = (lp - lm) / (2.0 * kGradCheckStep);
            const double analytic = grads[p].data()[k];
            const double rel =
                std::abs(analytic - numeric) / std::max(1e-8, std::abs(analytic) + std::abs(numeric));
            result.max_rel_error = std::max(result.max_rel_error, rel);
            ++result.checked;
        }
    }
    return result;
}

GradCheckResult grad_check(ModelKind kind, const GraphSample& sample, std::uint64_t seed)
{
    return grad_check(init_params(kind, seed), sample, seed);
}

nlohmann::json to_json(const ModelParams& params)
{
    nlohmann::json layers = nlohmann::json::array();
    for (const auto& l : params.layers)
        layers.push_back({{"name", l.name}, {"rows", l.value.rows()}, {"cols", l.value.cols()},
            {"data", l.value.data()}});
    return {
        {"kind", std::string{model_kind_name(params.kind)}},
        {"seed", params.seed},
        {"hyper",
            {{"hidden_dim", params.hyper.hidden_dim}, {"num_layers", params.hyper.num_layers},
                {"gat_leaky_slope", params.hyper.gat_leaky_slope},
                {"tag_hops", params.hyper.tag_hops}, {"gin_eps", params.hyper.gin_eps}}},
        {"layers", layers},
    };
}

ModelParams model_from_json(const nlohmann::json& j)
{
    try
    {
        ModelParams params;
        params.kind = parse_model_kind(j.at("kind").get<std::string>());
        params.seed = j.at("seed").get<std::uint64_t>();
        const auto& h = j.at("hyper");
        params.hyper.hidden_dim = h.at("hidden_dim").get<std::size_t>();
        params.hyper.num_layers = h.at("num_layers").get<std::size_t>();
        params.hyper.gat_leaky_slope = h.at("gat_leaky_slope").get<double>();
        params.hyper.tag_hops = h.at("tag_hops").get<std::size_t>();
        params.hyper.gin_eps = h.at("gin_eps").get<double>();

        const auto layout = parameter_layout(params.kind, params.hyper);
        const auto& layers = j.at("layers");
        if (layers.size() != layout.size())
            throw Error{ErrorCode::DimensionMismatch, "model has wrong number of layers"};
        for (std::size_t i = 0; i < layout.size(); ++i)
        {
            const auto& l = layers[i];
            NamedMatrix nm{l.at("name").get<std::string>(),
                DenseMatrix{l.at("rows").get<std::size_t>(), l.at("cols").get<std::size_t>(),
                    l.at("data").get<std::vector<double>>()}};
            if (nm.name != layout[i].name || nm.value.rows() != layout[i].value.rows() ||
                nm.value.cols() != layout[i].value.cols())
                throw Error{ErrorCode::DimensionMismatch, "unexpected layer '" + nm.name + "'"};
            params.layers.push_back(std::move(nm));
        }
        return params;
    }
    catch (const nlohmann::json::exception& e)
    {
        throw Error{ErrorCode::MalformedLine, std::string{"malformed model document: "} + e.what()};
    }
}

nlohmann::json to_json(const TrainReport& report)
{
    return {{"loss", report.loss}, {"model", to_json(report.model)}};
}

}  // namespace scamdetect
