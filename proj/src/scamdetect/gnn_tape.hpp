// scamdetect: static detection of malicious smart contracts
// Copyright 2026 The scamdetect Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Forward passes that record intermediates, and the matching reverse-mode
// passes. Used by training and by the gradient checker.

#include "scamdetect/gnn.hpp"

#include <span>
#include <vector>

namespace scamdetect::gnn
{
struct Tape
{
    DenseMatrix input;
    /// Family-specific intermediates; see the forward functions.
    std::vector<DenseMatrix> mats;
    /// GAT only: logits before LeakyReLU and softmax weights, one per
    /// (node, attended neighbor) pair in attention_neighbors order.
    std::vector<double> gat_pre;
    std::vector<double> gat_alpha;

    /// Append the sign of every rectifier pre-activation recorded on the tape.
    void activation_pattern(std::vector<bool>& out) const;
    /// Indices into `mats` whose signs gate a rectifier.
    std::vector<std::size_t> gated;
};

/// neighbors(v) ∪ {v}, sorted.
std::vector<std::size_t> attention_neighbors(const Graph& g, std::size_t v);

DenseMatrix gcn_forward(const Graph& g, const DenseMatrix& h, const DenseMatrix& w, Tape* tape);
DenseMatrix gcn_backward(const Graph& g, const Tape& tape, const DenseMatrix& w, DenseMatrix d_out,
    DenseMatrix& d_w);

DenseMatrix sage_forward(const Graph& g, const DenseMatrix& h, const DenseMatrix& w_self,
    const DenseMatrix& w_neigh, Tape* tape);
DenseMatrix sage_backward(const Graph& g, const Tape& tape, const DenseMatrix& w_self,
    const DenseMatrix& w_neigh, DenseMatrix d_out, DenseMatrix& d_self, DenseMatrix& d_neigh);

DenseMatrix gin_forward(const Graph& g, const DenseMatrix& h, const DenseMatrix& mlp_a,
    const DenseMatrix& mlp_b, double eps, Tape* tape);
DenseMatrix gin_backward(const Graph& g, const Tape& tape, const DenseMatrix& mlp_a,
    const DenseMatrix& mlp_b, double eps, DenseMatrix d_out, DenseMatrix& d_a, DenseMatrix& d_b);

DenseMatrix gat_forward(const Graph& g, const DenseMatrix& h, const DenseMatrix& w,
    const DenseMatrix& att, double slope, Tape* tape);
DenseMatrix gat_backward(const Graph& g, const Tape& tape, const DenseMatrix& w,
    const DenseMatrix& att, double slope, DenseMatrix d_out, DenseMatrix& d_w, DenseMatrix& d_att);

DenseMatrix tag_forward(
    const Graph& g, const DenseMatrix& h, std::span<const DenseMatrix> weights, Tape* tape);
DenseMatrix tag_backward(const Graph& g, const Tape& tape, std::span<const DenseMatrix> weights,
    DenseMatrix d_out, std::span<DenseMatrix> d_weights);

}  // namespace scamdetect::gnn
