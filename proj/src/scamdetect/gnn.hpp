// scamdetect: static detection of malicious smart contracts
// Copyright 2026 The scamdetect Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "scamdetect/features.hpp"
#include "scamdetect/matrix.hpp"

#include <span>
#include <utility>
#include <vector>

namespace scamdetect::gnn
{
/// Sparse view of a graph as the layers consume it. Edges are symmetrized and
/// self-loops from the input are dropped; each layer family adds its own
/// self-loop convention.
struct Graph
{
    std::size_t num_nodes = 0;
    /// Sorted, unique neighbors of each node (no self).
    std::vector<std::vector<std::size_t>> neighbors;
    /// Rows of D^-1/2 (A + I) D^-1/2 as (column, weight) pairs.
    std::vector<std::vector<std::pair<std::size_t, double>>> norm_adj;
};

Graph make_graph(std::size_t num_nodes, std::span<const std::pair<std::size_t, std::size_t>> edges);
Graph make_graph(const GraphSample& sample);

/// Dense symmetric-normalized adjacency with self-loops.
DenseMatrix normalize_adjacency(const GraphSample& sample);
DenseMatrix normalize_adjacency(const Graph& g);

/// Node features of a sample as an N x D matrix.
DenseMatrix feature_matrix(const GraphSample& sample);

/// Â·H using the sparse normalized adjacency.
DenseMatrix propagate(const Graph& g, const DenseMatrix& h);
/// Row v = mean of H over v's neighbors (zero row if none).
DenseMatrix mean_aggregate(const Graph& g, const DenseMatrix& h);
/// Transpose of mean_aggregate applied to G.
DenseMatrix mean_aggregate_transpose(const Graph& g, const DenseMatrix& grad);
/// Row v = sum of H over v's neighbors.
DenseMatrix sum_aggregate(const Graph& g, const DenseMatrix& h);

// Layer forward passes: H' = ReLU(...), see each family's formula.

DenseMatrix gcn_layer(const DenseMatrix& h, const DenseMatrix& a_norm, const DenseMatrix& w);
DenseMatrix gcn_layer(const DenseMatrix& h, const Graph& g, const DenseMatrix& w);

DenseMatrix sage_layer(const DenseMatrix& h, const Graph& g, const DenseMatrix& w_self,
    const DenseMatrix& w_neigh);

DenseMatrix gin_layer(const DenseMatrix& h, const Graph& g, const DenseMatrix& mlp_a,
    const DenseMatrix& mlp_b, double eps = 0.0);

/// Single-head attention; `att` is a (2F x 1) vector, the first F entries
/// scoring the receiving node and the last F the sending node.
DenseMatrix gat_layer(const DenseMatrix& h, const Graph& g, const DenseMatrix& w,
    const DenseMatrix& att, double leaky_slope = 0.2);

/// weights[k] multiplies Â^k H.
DenseMatrix tag_layer(const DenseMatrix& h, const DenseMatrix& a_norm,
    std::span<const DenseMatrix> weights);
DenseMatrix tag_layer(const DenseMatrix& h, const Graph& g, std::span<const DenseMatrix> weights);

/// Column-wise mean; N must be >= 1.
std::vector<double> mean_pool(const DenseMatrix& h);

}  // namespace scamdetect::gnn
