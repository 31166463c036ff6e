// Copyright 2026 The hisal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <vector>

#include "hisal/cues.hpp"
#include "hisal/image.hpp"
#include "hisal/scale_merge.hpp"

namespace hisal {

struct InferenceParams {
    // Data-term weights, one per layer, bottom first.
    std::vector<double> beta{0.5, 4.0, 2.0};
    // Cross-layer coupling weights, one per adjacent layer pair.
    std::vector<double> lambdaH{4.0, 4.0};
    // Same-layer consistency weights, one per layer.
    std::vector<double> gamma{1.0, 1.0, 1.0};
    // Color-similarity bandwidth for the consistency weights. Values <= 0
    // select per-image tuning: twice the mean squared CIELUV distance over
    // adjacent bottom-layer region pairs.
    double sigmaC = 0.0;
    // Quantization levels for belief propagation.
    int labels = 64;
    int maxIters = 100;
    // Fraction of the previous message kept at each synchronous update.
    double damping = 0.5;
    // Convergence threshold on the max absolute message change.
    double tol = 1e-4;
};

struct GraphNode {
    double sBar = 0.0;
    double beta = 0.0;
};

// Undirected quadratic coupling w * (s_a - s_b)^2, counted once in the
// energy. Hierarchy edges store a = child, b = parent.
struct GraphEdge {
    int a = 0;
    int b = 0;
    double w = 0.0;
};

struct SaliencyGraph {
    std::vector<GraphNode> nodes;
    std::vector<GraphEdge> hierarchyEdges;
    std::vector<GraphEdge> consistencyEdges;
    // Nodes of layer k occupy ids [layerOffset[k], layerOffset[k+1]);
    // layer 0 is the bottom.
    std::vector<int> layerOffset;
    // Bandwidth actually used for the consistency weights (after tuning).
    double sigmaC = 1.0;
};

struct Assignment {
    // Per-node saliency in [0, 1], indexed like SaliencyGraph::nodes.
    std::vector<double> values;
};

struct BpReport {
    int iterations = 0;
    double finalDelta = 0.0;
    bool converged = false;
    double energy = 0.0;
};

// Assembles one node per region per layer (bottom layer first), a hierarchy
// edge per parent link weighted by lambdaH, and a consistency edge per
// same-layer adjacency weighted by gamma * exp(-squared color distance /
// sigmaC).
SaliencyGraph build_graph(const LayerHierarchy& hierarchy,
                          const std::vector<LayerCues>& cues,
                          const InferenceParams& params);

// Total quadratic energy of an assignment: data terms plus both edge sets.
double energy(const SaliencyGraph& g, const Assignment& a);

// Global minimizer of the energy via a sparse SPD solve. Each connected
// component must carry at least one positive beta. Returned values are
// clamped to [0, 1]; pass rawOut to also receive the unclamped solution.
Assignment solve_exact(const SaliencyGraph& g, std::vector<double>* rawOut = nullptr);

// Min-sum belief propagation over `labels` uniform levels in [0, 1] with
// damped synchronous updates. Stops at convergence or the iteration cap and
// reports which happened.
Assignment loopy_bp(const SaliencyGraph& g, const InferenceParams& params,
                    BpReport* report = nullptr);

// Exact continuous minimizer when the consistency edges are dropped: the
// hierarchy edges form a forest, solved by leaf-to-root elimination and
// root-to-leaf back-substitution.
Assignment hs_inference(const SaliencyGraph& g);

// Paints each pixel with its bottom-layer region's value, then min-max
// rescales to [0, 1]. A constant map rescales to all 0.5.
SaliencyMap render_saliency(const Assignment& a, const LabelMap& bottomLayer);

}  // namespace hisal
