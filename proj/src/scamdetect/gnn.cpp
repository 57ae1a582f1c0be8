// scamdetect: static detection of malicious smart contracts
// Copyright 2026 The scamdetect Authors.
// SPDX-License-Identifier: Apache-2.0

#include "scamdetect/gnn.hpp"
#include "scamdetect/error.hpp"
#include "scamdetect/gnn_tape.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace scamdetect::gnn
{
namespace
{
void require_rows(const DenseMatrix& h, const Graph& g)
{
    if (h.rows() != g.num_nodes)
        throw Error{ErrorCode::DimensionMismatch,
            "feature rows " + std::to_string(h.rows()) + " != nodes " + std::to_string(g.num_nodes)};
}

void require_square(const DenseMatrix& a, const DenseMatrix& h)
{
    if (a.rows() != a.cols() || a.cols() != h.rows())
        throw Error{ErrorCode::DimensionMismatch, "adjacency does not match feature rows"};
}

double leaky(double x, double slope) noexcept
{
    return x > 0.0 ? x : slope * x;
}
}  // namespace

Graph make_graph(std::size_t num_nodes, std::span<const std::pair<std::size_t, std::size_t>> edges)
{
    Graph g;
    g.num_nodes = num_nodes;
    g.neighbors.resize(num_nodes);
    for (auto [u, v] : edges)
    {
        if (u >= num_nodes || v >= num_nodes)
            throw Error{ErrorCode::DimensionMismatch, "edge endpoint out of range"};
        if (u == v)
            continue;
        g.neighbors[u].push_back(v);
        g.neighbors[v].push_back(u);
    }
    for (auto& nb : g.neighbors)
    {
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }

    std::vector<double> inv_sqrt_deg(num_nodes);
    for (std::size_t v = 0; v < num_nodes; ++v)
        inv_sqrt_deg[v] = 1.0 / std::sqrt(static_cast<double>(g.neighbors[v].size() + 1));
    g.norm_adj.resize(num_nodes);
    for (std::size_t v = 0; v < num_nodes; ++v)
    {
        auto& row = g.norm_adj[v];
        for (auto u : attention_neighbors(g, v))
            row.emplace_back(u, inv_sqrt_deg[v] * inv_sqrt_deg[u]);
    }
    return g;
}

Graph make_graph(const GraphSample& sample)
{
    return make_graph(sample.num_nodes, sample.edges);
}

DenseMatrix normalize_adjacency(const Graph& g)
{
    DenseMatrix a{g.num_nodes, g.num_nodes};
    for (std::size_t v = 0; v < g.num_nodes; ++v)
        for (auto [u, w] : g.norm_adj[v])
            a(v, u) = w;
    return a;
}

DenseMatrix normalize_adjacency(const GraphSample& sample)
{
    return normalize_adjacency(make_graph(sample));
}

DenseMatrix feature_matrix(const GraphSample& sample)
{
    DenseMatrix x{sample.num_nodes, kNodeFeatureDim};
    for (std::size_t v = 0; v < sample.features.size() && v < sample.num_nodes; ++v)
        std::copy(sample.features[v].begin(), sample.features[v].end(), x.row(v).begin());
    return x;
}

std::vector<std::size_t> attention_neighbors(const Graph& g, std::size_t v)
{
    std::vector<std::size_t> out;
    out.reserve(g.neighbors[v].size() + 1);
    bool self_done = false;
    for (auto u : g.neighbors[v])
    {
        if (!self_done && u > v)
        {
            out.push_back(v);
            self_done = true;
        }
        out.push_back(u);
    }
    if (!self_done)
        out.push_back(v);
    return out;
}

DenseMatrix propagate(const Graph& g, const DenseMatrix& h)
{
    require_rows(h, g);
    DenseMatrix out{h.rows(), h.cols()};
    for (std::size_t v = 0; v < g.num_nodes; ++v)
    {
        auto orow = out.row(v);
        for (auto [u, w] : g.norm_adj[v])
        {
            const auto hrow = h.row(u);
            for (std::size_t f = 0; f < h.cols(); ++f)
                orow[f] += w * hrow[f];
        }
    }
    return out;
}

DenseMatrix mean_aggregate(const Graph& g, const DenseMatrix& h)
{
    require_rows(h, g);
    DenseMatrix out{h.rows(), h.cols()};
    for (std::size_t v = 0; v < g.num_nodes; ++v)
    {
        const auto& nb = g.neighbors[v];
        if (nb.empty())
            continue;
        const double scale = 1.0 / static_cast<double>(nb.size());
        auto orow = out.row(v);
        for (auto u : nb)
        {
            const auto hrow = h.row(u);
            for (std::size_t f = 0; f < h.cols(); ++f)
                orow[f] += scale * hrow[f];
        }
    }
    return out;
}

DenseMatrix mean_aggregate_transpose(const Graph& g, const DenseMatrix& grad)
{
    require_rows(grad, g);
    DenseMatrix out{grad.rows(), grad.cols()};
    for (std::size_t v = 0; v < g.num_nodes; ++v)
    {
        const auto& nb = g.neighbors[v];
        if (nb.empty())
            continue;
        const double scale = 1.0 / static_cast<double>(nb.size());
        const auto grow = grad.row(v);
        for (auto u : nb)
        {
            auto orow = out.row(u);
            for (std::size_t f = 0; f < grad.cols(); ++f)
                orow[f] += scale * grow[f];
        }
    }
    return out;
}

DenseMatrix sum_aggregate(const Graph& g, const DenseMatrix& h)
{
    require_rows(h, g);
    DenseMatrix out{h.rows(), h.cols()};
    for (std::size_t v = 0; v < g.num_nodes; ++v)
    {
        auto orow = out.row(v);
        for (auto u : g.neighbors[v])
        {
            const auto hrow = h.row(u);
            for (std::size_t f = 0; f < h.cols(); ++f)
                orow[f] += hrow[f];
        }
    }
    return out;
}

void Tape::activation_pattern(std::vector<bool>& out) const
{
    for (auto idx : gated)
        for (double v : mats[idx].data())
            out.push_back(v > 0.0);
    for (double v : gat_pre)
        out.push_back(v > 0.0);
}

// --- GCN: mats = {ÂH, Z}

DenseMatrix gcn_forward(const Graph& g, const DenseMatrix& h, const DenseMatrix& w, Tape* tape)
{
    DenseMatrix ah = propagate(g, h);
    DenseMatrix z = matmul(ah, w);
    DenseMatrix y = relu(z);
    if (tape)
    {
        tape->input = h;
        tape->mats = {std::move(ah), std::move(z)};
        tape->gated = {1};
    }
    return y;
}

DenseMatrix gcn_backward(
    const Graph& g, const Tape& tape, const DenseMatrix& w, DenseMatrix d_out, DenseMatrix& d_w)
{
    relu_backward_inplace(d_out, tape.mats[1]);
    d_w += matmul_tn(tape.mats[0], d_out);
    return propagate(g, matmul_nt(d_out, w));
}

// --- GraphSAGE (mean): mats = {M, Z}

DenseMatrix sage_forward(const Graph& g, const DenseMatrix& h, const DenseMatrix& w_self,
    const DenseMatrix& w_neigh, Tape* tape)
{
    DenseMatrix m = mean_aggregate(g, h);
    DenseMatrix z = matmul(h, w_self);
    z += matmul(m, w_neigh);
    DenseMatrix y = relu(z);
    if (tape)
    {
        tape->input = h;
        tape->mats = {std::move(m), std::move(z)};
        tape->gated = {1};
    }
    return y;
}

DenseMatrix sage_backward(const Graph& g, const Tape& tape, const DenseMatrix& w_self,
    const DenseMatrix& w_neigh, DenseMatrix d_out, DenseMatrix& d_self, DenseMatrix& d_neigh)
{
    relu_backward_inplace(d_out, tape.mats[1]);
    d_self += matmul_tn(tape.input, d_out);
    d_neigh += matmul_tn(tape.mats[0], d_out);
    DenseMatrix dh = matmul_nt(d_out, w_self);
    dh += mean_aggregate_transpose(g, matmul_nt(d_out, w_neigh));
    return dh;
}

// --- GIN: mats = {S, A1, R1, A2}

DenseMatrix gin_forward(const Graph& g, const DenseMatrix& h, const DenseMatrix& mlp_a,
    const DenseMatrix& mlp_b, double eps, Tape* tape)
{
    DenseMatrix s = sum_aggregate(g, h);
    for (std::size_t i = 0; i < s.size(); ++i)
        s.data()[i] += (1.0 + eps) * h.data()[i];
    DenseMatrix a1 = matmul(s, mlp_a);
    DenseMatrix r1 = relu(a1);
    DenseMatrix a2 = matmul(r1, mlp_b);
    DenseMatrix y = relu(a2);
    if (tape)
    {
        tape->input = h;
        tape->mats = {std::move(s), std::move(a1), std::move(r1), std::move(a2)};
        tape->gated = {1, 3};
    }
    return y;
}

DenseMatrix gin_backward(const Graph& g, const Tape& tape, const DenseMatrix& mlp_a,
    const DenseMatrix& mlp_b, double eps, DenseMatrix d_out, DenseMatrix& d_a, DenseMatrix& d_b)
{
    relu_backward_inplace(d_out, tape.mats[3]);
    d_b += matmul_tn(tape.mats[2], d_out);
    DenseMatrix d_r1 = matmul_nt(d_out, mlp_b);
    relu_backward_inplace(d_r1, tape.mats[1]);
    d_a += matmul_tn(tape.mats[0], d_r1);
    DenseMatrix d_s = matmul_nt(d_r1, mlp_a);
    DenseMatrix dh = sum_aggregate(g, d_s);
    for (std::size_t i = 0; i < dh.size(); ++i)
        dh.data()[i] += (1.0 + eps) * d_s.data()[i];
    return dh;
}

// --- GAT (single head): mats = {HW, O}

DenseMatrix gat_forward(const Graph& g, const DenseMatrix& h, const DenseMatrix& w,
    const DenseMatrix& att, double slope, Tape* tape)
{
    require_rows(h, g);
    DenseMatrix z = matmul(h, w);
    const std::size_t f = z.cols();
    if (att.rows() != 2 * f || att.cols() != 1)
        throw Error{ErrorCode::DimensionMismatch, "attention vector must be 2F x 1"};

    std::vector<double> dst(g.num_nodes), src(g.num_nodes);
    for (std::size_t v = 0; v < g.num_nodes; ++v)
    {
        const auto zr = z.row(v);
        for (std::size_t k = 0; k < f; ++k)
        {
            dst[v] += att(k, 0) * zr[k];
            src[v] += att(f + k, 0) * zr[k];
        }
    }

    DenseMatrix o{g.num_nodes, f};
    std::vector<double> pre_all, alpha_all;
    for (std::size_t v = 0; v < g.num_nodes; ++v)
    {
        const auto nb = attention_neighbors(g, v);
        std::vector<double> e(nb.size());
        double mx = -INFINITY;
        for (std::size_t i = 0; i < nb.size(); ++i)
        {
            const double pre = dst[v] + src[nb[i]];
            pre_all.push_back(pre);
            e[i] = leaky(pre, slope);
            mx = std::max(mx, e[i]);
        }
        double sum = 0.0;
        for (auto& x : e)
        {
            x = std::exp(x - mx);
            sum += x;
        }
        auto orow = o.row(v);
        for (std::size_t i = 0; i < nb.size(); ++i)
        {
            const double alpha = e[i] / sum;
            alpha_all.push_back(alpha);
            const auto zr = z.row(nb[i]);
            for (std::size_t k = 0; k < f; ++k)
                orow[k] += alpha * zr[k];
        }
    }
    DenseMatrix y = relu(o);
    if (tape)
    {
        tape->input = h;
        tape->mats = {std::move(z), std::move(o)};
        tape->gated = {1};
        tape->gat_pre = std::move(pre_all);
        tape->gat_alpha = std::move(alpha_all);
    }
    return y;
}

DenseMatrix gat_backward(const Graph& g, const Tape& tape, const DenseMatrix& w,
    const DenseMatrix& att, double slope, DenseMatrix d_out, DenseMatrix& d_w, DenseMatrix& d_att)
{
    const DenseMatrix& z = tape.mats[0];
    const std::size_t f = z.cols();
    relu_backward_inplace(d_out, tape.mats[1]);

    DenseMatrix dz{z.rows(), f};
    std::vector<double> d_dst(g.num_nodes, 0.0), d_src(g.num_nodes, 0.0);
    std::size_t pair = 0;
    for (std::size_t v = 0; v < g.num_nodes; ++v)
    {
        const auto nb = attention_neighbors(g, v);
        const auto dov = d_out.row(v);
        std::vector<double> d_alpha(nb.size());
        double weighted = 0.0;
        for (std::size_t i = 0; i < nb.size(); ++i)
        {
            const double alpha = tape.gat_alpha[pair + i];
            const auto zr = z.row(nb[i]);
            auto dzr = dz.row(nb[i]);
            double da = 0.0;
            for (std::size_t k = 0; k < f; ++k)
            {
                da += dov[k] * zr[k];
                dzr[k] += alpha * dov[k];
            }
            d_alpha[i] = da;
            weighted += alpha * da;
        }
        for (std::size_t i = 0; i < nb.size(); ++i)
        {
            const double alpha = tape.gat_alpha[pair + i];
            const double de = alpha * (d_alpha[i] - weighted);
            const double dpre = tape.gat_pre[pair + i] > 0.0 ? de : slope * de;
            d_dst[v] += dpre;
            d_src[nb[i]] += dpre;
        }
        pair += nb.size();
    }

    for (std::size_t v = 0; v < g.num_nodes; ++v)
    {
        const auto zr = z.row(v);
        auto dzr = dz.row(v);
        for (std::size_t k = 0; k < f; ++k)
        {
            d_att(k, 0) += d_dst[v] * zr[k];
            d_att(f + k, 0) += d_src[v] * zr[k];
            dzr[k] += d_dst[v] * att(k, 0) + d_src[v] * att(f + k, 0);
        }
    }
    d_w += matmul_tn(tape.input, dz);
    return matmul_nt(dz, w);
}

// --- TAG: mats = {P_0 .. P_K, Z} with P_k = Â^k H

DenseMatrix tag_forward(
    const Graph& g, const DenseMatrix& h, std::span<const DenseMatrix> weights, Tape* tape)
{
    require_rows(h, g);
    if (weights.empty())
        throw Error{ErrorCode::DimensionMismatch, "TAG layer needs at least W_0"};
    std::vector<DenseMatrix> powers;
    powers.reserve(weights.size() + 1);
    powers.push_back(h);
    for (std::size_t k = 1; k < weights.size(); ++k)
        powers.push_back(propagate(g, powers.back()));
    DenseMatrix z = matmul(powers[0], weights[0]);
    for (std::size_t k = 1; k < weights.size(); ++k)
        z += matmul(powers[k], weights[k]);
    DenseMatrix y = relu(z);
    if (tape)
    {
        tape->input = h;
        powers.push_back(std::move(z));
        tape->mats = std::move(powers);
        tape->gated = {weights.size()};
    }
    return y;
}

DenseMatrix tag_backward(const Graph& g, const Tape& tape, std::span<const DenseMatrix> weights,
    DenseMatrix d_out, std::span<DenseMatrix> d_weights)
{
    const std::size_t hops = weights.size() - 1;
    relu_backward_inplace(d_out, tape.mats[hops + 1]);
    for (std::size_t k = 0; k <= hops; ++k)
        d_weights[k] += matmul_tn(tape.mats[k], d_out);
    // Horner: dH = sum_k Â^k (dZ W_k^T), Â symmetric.
    DenseMatrix acc = matmul_nt(d_out, weights[hops]);
    for (std::size_t k = hops; k-- > 0;)
    {
        acc = propagate(g, acc);
        acc += matmul_nt(d_out, weights[k]);
    }
    return acc;
}

// --- Public forward-only entry points

DenseMatrix gcn_layer(const DenseMatrix& h, const DenseMatrix& a_norm, const DenseMatrix& w)
{
    require_square(a_norm, h);
    return relu(matmul(matmul(a_norm, h), w));
}

DenseMatrix gcn_layer(const DenseMatrix& h, const Graph& g, const DenseMatrix& w)
{
    return gcn_forward(g, h, w, nullptr);
}

DenseMatrix sage_layer(const DenseMatrix& h, const Graph& g, const DenseMatrix& w_self,
    const DenseMatrix& w_neigh)
{
    return sage_forward(g, h, w_self, w_neigh, nullptr);
}

DenseMatrix gin_layer(const DenseMatrix& h, const Graph& g, const DenseMatrix& mlp_a,
    const DenseMatrix& mlp_b, double eps)
{
    return gin_forward(g, h, mlp_a, mlp_b, eps, nullptr);
}

DenseMatrix gat_layer(const DenseMatrix& h, const Graph& g, const DenseMatrix& w,
    const DenseMatrix& att, double leaky_slope)
{
    return gat_forward(g, h, w, att, leaky_slope, nullptr);
}

DenseMatrix tag_layer(
    const DenseMatrix& h, const DenseMatrix& a_norm, std::span<const DenseMatrix> weights)
{
    require_square(a_norm, h);
    if (weights.empty())
        throw Error{ErrorCode::DimensionMismatch, "TAG layer needs at least W_0"};
    DenseMatrix power = h;
    DenseMatrix z = matmul(power, weights[0]);
    for (std::size_t k = 1; k < weights.size(); ++k)
    {
        power = matmul(a_norm, power);
        z += matmul(power, weights[k]);
    }
    return relu(z);
}

DenseMatrix tag_layer(const DenseMatrix& h, const Graph& g, std::span<const DenseMatrix> weights)
{
    return tag_forward(g, h, weights, nullptr);
}

std::vector<double> mean_pool(const DenseMatrix& h)
{
    if (h.rows() == 0)
        throw Error{ErrorCode::DimensionMismatch, "mean_pool of an empty matrix"};
    std::vector<double> out(h.cols(), 0.0);
    for (std::size_t v = 0; v < h.rows(); ++v)
    {
        const auto r = h.row(v);
        for (std::size_t f = 0; f < h.cols(); ++f)
            out[f] += r[f];
    }
    for (auto& x : out)
        x /= static_cast<double>(h.rows());
    return out;
}

}  // namespace scamdetect::gnn
