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

#include "hisal/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "hisal/color.hpp"
#include "hisal/error.hpp"

namespace hisal {

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

// Mean squared CIELUV distance over adjacent region pairs of one layer,
// doubled. Falls back to 1 when the layer has no adjacency.
double tuned_sigma_c(const Layer& bottom) {
    double sum = 0.0;
    long long pairs = 0;
    for (const Region& r : bottom.regions) {
        for (int j : r.neighbors) {
            if (j <= r.id) continue;
            sum += color_dist_sq(r.meanColor, bottom.regions[j].meanColor);
            ++pairs;
        }
    }
    if (pairs == 0) return 1.0;
    return std::max(2.0 * sum / pairs, 1e-12);
}

// Lower envelope of the parabolas h(p) + c * (q - p)^2 sampled at integer q.
// c = 0 degenerates to a constant at min(h).
void quadratic_envelope(const std::vector<double>& h, double c, std::vector<double>& out,
                        std::vector<int>& v, std::vector<double>& z) {
    const int L = static_cast<int>(h.size());
    if (c <= 0.0) {
        const double m = *std::min_element(h.begin(), h.end());
        std::fill(out.begin(), out.end(), m);
        return;
    }
    const double inf = std::numeric_limits<double>::infinity();
    int k = 0;
    v[0] = 0;
    z[0] = -inf;
    z[1] = inf;
    for (int q = 1; q < L; ++q) {
        while (true) {
            const int p = v[k];
            const double s = ((h[q] + c * q * q) - (h[p] + c * p * p)) / (2.0 * c * (q - p));
            if (k > 0 && s <= z[k]) {
                --k;
            } else {
                ++k;
                v[k] = q;
                z[k] = s;
                z[k + 1] = inf;
                break;
            }
        }
    }
    k = 0;
    for (int q = 0; q < L; ++q) {
        while (z[k + 1] < q) ++k;
        const double d = q - v[k];
        out[q] = c * d * d + h[v[k]];
    }
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

SaliencyGraph build_graph(const LayerHierarchy& hierarchy,
                          const std::vector<LayerCues>& cues,
                          const InferenceParams& params) {
    const std::size_t nLayers = hierarchy.layers.size();
    if (nLayers == 0) throw std::invalid_argument("build_graph: empty hierarchy");
    if (cues.size() != nLayers) throw std::invalid_argument("build_graph: cue layer mismatch");
    if (params.beta.size() != nLayers) throw std::invalid_argument("build_graph: beta length");
    if (params.lambdaH.size() + 1 != nLayers) {
        throw std::invalid_argument("build_graph: lambdaH length");
    }
    if (params.gamma.size() != nLayers) throw std::invalid_argument("build_graph: gamma length");
    for (double b : params.beta) {
        if (b < 0) throw std::invalid_argument("build_graph: negative beta");
    }
    for (double l : params.lambdaH) {
        if (l < 0) throw std::invalid_argument("build_graph: negative lambdaH");
    }
    for (double gWeight : params.gamma) {
        if (gWeight < 0) throw std::invalid_argument("build_graph: negative gamma");
    }

    SaliencyGraph g;
    g.layerOffset.assign(nLayers + 1, 0);
    for (std::size_t k = 0; k < nLayers; ++k) {
        const Layer& layer = hierarchy.layers[k];
        if (cues[k].combined.size() != static_cast<std::size_t>(layer.labels.regionCount)) {
            throw std::invalid_argument("build_graph: cue count mismatch");
        }
        g.layerOffset[k + 1] = g.layerOffset[k] + layer.labels.regionCount;
        for (int i = 0; i < layer.labels.regionCount; ++i) {
            g.nodes.push_back({cues[k].combined[i], params.beta[k]});
        }
    }

    g.sigmaC = params.sigmaC > 0.0 ? params.sigmaC : tuned_sigma_c(hierarchy.layers.front());

    for (std::size_t k = 0; k + 1 < nLayers; ++k) {
        const Layer& layer = hierarchy.layers[k];
        if (layer.parent.size() != static_cast<std::size_t>(layer.labels.regionCount)) {
            throw std::invalid_argument("build_graph: missing parent links");
        }
        for (int i = 0; i < layer.labels.regionCount; ++i) {
            g.hierarchyEdges.push_back({g.layerOffset[k] + i,
                                        g.layerOffset[k + 1] + layer.parent[i],
                                        params.lambdaH[k]});
        }
    }
    for (std::size_t k = 0; k < nLayers; ++k) {
        const Layer& layer = hierarchy.layers[k];
        for (const Region& r : layer.regions) {
            for (int j : r.neighbors) {
                if (j <= r.id) continue;
                const double w =
                    params.gamma[k] *
                    std::exp(-color_dist_sq(r.meanColor,
                                            layer.regions[j].meanColor) /
                             g.sigmaC);
                g.consistencyEdges.push_back({g.layerOffset[k] + r.id, g.layerOffset[k] + j, w});
            }
        }
    }
    return g;
}

double energy(const SaliencyGraph& g, const Assignment& a) {
    if (a.values.size() != g.nodes.size()) throw std::invalid_argument("energy: size mismatch");
    double e = 0.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        const double d = a.values[i] - g.nodes[i].sBar;
        e += g.nodes[i].beta * d * d;
    }
    for (const GraphEdge& edge : g.hierarchyEdges) {
        const double d = a.values[edge.a] - a.values[edge.b];
        e += edge.w * d * d;
    }
    for (const GraphEdge& edge : g.consistencyEdges) {
        const double d = a.values[edge.a] - a.values[edge.b];
        e += edge.w * d * d;
    }
    return e;
}

Assignment solve_exact(const SaliencyGraph& g, std::vector<double>* rawOut) {
    const int n = static_cast<int>(g.nodes.size());
    if (n == 0) throw std::invalid_argument("solve_exact: empty graph");

    UnionFind uf(n);
    for (const GraphEdge& e : g.hierarchyEdges) {
        if (e.w > 0) uf.unite(e.a, e.b);
    }
    for (const GraphEdge& e : g.consistencyEdges) {
        if (e.w > 0) uf.unite(e.a, e.b);
    }
    std::vector<double> betaSum(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) betaSum[uf.find(i)] += g.nodes[i].beta;
    for (int i = 0; i < n; ++i) {
        if (betaSum[uf.find(i)] <= 0.0) {
            throw DegenerateInputError("solve_exact: component without data term");
        }
    }

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(g.nodes.size() + 4 * (g.hierarchyEdges.size() + g.consistencyEdges.size()));
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) {
        triplets.emplace_back(i, i, g.nodes[i].beta);
        b[i] = g.nodes[i].beta * g.nodes[i].sBar;
    }
    auto addEdge = [&triplets](const GraphEdge& e) {
        triplets.emplace_back(e.a, e.a, e.w);
        triplets.emplace_back(e.b, e.b, e.w);
        triplets.emplace_back(e.a, e.b, -e.w);
        triplets.emplace_back(e.b, e.a, -e.w);
    };
    for (const GraphEdge& e : g.hierarchyEdges) addEdge(e);
    for (const GraphEdge& e : g.consistencyEdges) addEdge(e);

    Eigen::SparseMatrix<double> A(n, n);
    A.setFromTriplets(triplets.begin(), triplets.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
    solver.compute(A);
    if (solver.info() != Eigen::Success) {
        throw DegenerateInputError("solve_exact: factorization failed");
    }
    const Eigen::VectorXd s = solver.solve(b);
    if (solver.info() != Eigen::Success) {
        throw DegenerateInputError("solve_exact: solve failed");
    }

    Assignment out;
    out.values.resize(static_cast<std::size_t>(n));
    if (rawOut) rawOut->resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        if (rawOut) (*rawOut)[i] = s[i];
        out.values[i] = clamp01(s[i]);
    }
    return out;
}

Assignment loopy_bp(const SaliencyGraph& g, const InferenceParams& params, BpReport* report) {
    const int n = static_cast<int>(g.nodes.size());
    const int L = params.labels;
    if (n == 0) throw std::invalid_argument("loopy_bp: empty graph");
    if (L < 2) throw std::invalid_argument("loopy_bp: labels < 2");
    if (params.damping < 0.0 || params.damping >= 1.0) {
        throw std::invalid_argument("loopy_bp: damping outside [0,1)");
    }

    std::vector<GraphEdge> edges;
    edges.reserve(g.hierarchyEdges.size() + g.consistencyEdges.size());
    edges.insert(edges.end(), g.hierarchyEdges.begin(), g.hierarchyEdges.end());
    edges.insert(edges.end(), g.consistencyEdges.begin(), g.consistencyEdges.end());
    const int m = static_cast<int>(edges.size());

    const double step = 1.0 / (L - 1);
    std::vector<double> theta(static_cast<std::size_t>(n) * L);
    for (int i = 0; i < n; ++i) {
        for (int l = 0; l < L; ++l) {
            const double d = l * step - g.nodes[i].sBar;
            theta[static_cast<std::size_t>(i) * L + l] = g.nodes[i].beta * d * d;
        }
    }

    // msg[2e] carries a->b for edge e, msg[2e+1] carries b->a.
    std::vector<double> msg(static_cast<std::size_t>(2 * m) * L, 0.0);
    std::vector<double> next(msg.size(), 0.0);
    std::vector<double> tot(static_cast<std::size_t>(n) * L);
    std::vector<double> h(static_cast<std::size_t>(L));
    std::vector<double> env(static_cast<std::size_t>(L));
    std::vector<int> envV(static_cast<std::size_t>(L));
    std::vector<double> envZ(static_cast<std::size_t>(L) + 1);

    int iter = 0;
    double delta = 0.0;
    bool converged = false;
    for (iter = 1; iter <= params.maxIters; ++iter) {
        std::copy(theta.begin(), theta.end(), tot.begin());
        for (int e = 0; e < m; ++e) {
            const int a = edges[e].a, bNode = edges[e].b;
            for (int l = 0; l < L; ++l) {
                tot[static_cast<std::size_t>(bNode) * L + l] +=
                    msg[(static_cast<std::size_t>(2 * e)) * L + l];
                tot[static_cast<std::size_t>(a) * L + l] +=
                    msg[(static_cast<std::size_t>(2 * e) + 1) * L + l];
            }
        }
        delta = 0.0;
        for (int e = 0; e < m; ++e) {
            const double c = edges[e].w * step * step;
            for (int dir = 0; dir < 2; ++dir) {
                const int from = dir == 0 ? edges[e].a : edges[e].b;
                const std::size_t fwd = (static_cast<std::size_t>(2 * e) + dir) * L;
                const std::size_t rev = (static_cast<std::size_t>(2 * e) + (1 - dir)) * L;
                for (int l = 0; l < L; ++l) {
                    h[l] = tot[static_cast<std::size_t>(from) * L + l] - msg[rev + l];
                }
                quadratic_envelope(h, c, env, envV, envZ);
                const double lo = *std::min_element(env.begin(), env.end());
                for (int l = 0; l < L; ++l) {
                    const double updated =
                        params.damping * msg[fwd + l] + (1.0 - params.damping) * (env[l] - lo);
                    delta = std::max(delta, std::abs(updated - msg[fwd + l]));
                    next[fwd + l] = updated;
                }
            }
        }
        msg.swap(next);
        if (delta < params.tol) {
            converged = true;
            break;
        }
    }
    if (!converged) iter = params.maxIters;

    std::copy(theta.begin(), theta.end(), tot.begin());
    for (int e = 0; e < m; ++e) {
        const int a = edges[e].a, bNode = edges[e].b;
        for (int l = 0; l < L; ++l) {
            tot[static_cast<std::size_t>(bNode) * L + l] +=
                msg[(static_cast<std::size_t>(2 * e)) * L + l];
            tot[static_cast<std::size_t>(a) * L + l] +=
                msg[(static_cast<std::size_t>(2 * e) + 1) * L + l];
        }
    }
    Assignment out;
    out.values.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        int best = 0;
        for (int l = 1; l < L; ++l) {
            if (tot[static_cast<std::size_t>(i) * L + l] <
                tot[static_cast<std::size_t>(i) * L + best]) {
                best = l;
            }
        }
        out.values[i] = best * step;
    }
    if (report) {
        report->iterations = iter;
        report->finalDelta = delta;
        report->converged = converged;
        report->energy = energy(g, out);
    }
    return out;
}

Assignment hs_inference(const SaliencyGraph& g) {
    const int n = static_cast<int>(g.nodes.size());
    if (n == 0) throw std::invalid_argument("hs_inference: empty graph");

    // Quadratic accumulators: eliminating the subtree below node i leaves
    // A_i * s^2 - 2 B_i * s (+ const) as its contribution.
    std::vector<double> A(static_cast<std::size_t>(n));
    std::vector<double> B(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        A[i] = g.nodes[i].beta;
        B[i] = g.nodes[i].beta * g.nodes[i].sBar;
    }

    std::vector<GraphEdge> edges = g.hierarchyEdges;
    std::sort(edges.begin(), edges.end(),
              [](const GraphEdge& x, const GraphEdge& y) { return x.a < y.a; });
    std::vector<char> isChild(static_cast<std::size_t>(n), 0);
    for (const GraphEdge& e : edges) {
        if (e.a >= e.b) throw std::invalid_argument("hs_inference: child id not below parent");
        isChild[e.a] = 1;
    }
    // Children always precede parents in id order, so one ascending sweep
    // finishes every subtree before its root is touched.
    for (const GraphEdge& e : edges) {
        const double denom = A[e.a] + e.w;
        if (denom > 0.0) {
            A[e.b] += e.w * A[e.a] / denom;
            B[e.b] += e.w * B[e.a] / denom;
        }
    }

    Assignment out;
    out.values.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        if (!isChild[i]) {
            out.values[i] = A[i] > 0.0 ? B[i] / A[i] : g.nodes[i].sBar;
        }
    }
    for (auto it = edges.rbegin(); it != edges.rend(); ++it) {
        const double denom = A[it->a] + it->w;
        out.values[it->a] =
            denom > 0.0 ? (B[it->a] + it->w * out.values[it->b]) / denom : g.nodes[it->a].sBar;
    }
    for (double& v : out.values) v = clamp01(v);
    return out;
}

SaliencyMap render_saliency(const Assignment& a, const LabelMap& bottomLayer) {
    if (a.values.size() < static_cast<std::size_t>(bottomLayer.regionCount)) {
        throw std::invalid_argument("render_saliency: assignment does not cover bottom layer");
    }
    SaliencyMap map(bottomLayer.width, bottomLayer.height);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < map.values.size(); ++p) {
        const double v = a.values[bottomLayer.labels[p]];
        map.values[p] = v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double range = hi - lo;
    if (range <= 0.0) {
        std::fill(map.values.begin(), map.values.end(), 0.5);
    } else {
        for (double& v : map.values) v = (v - lo) / range;
    }
    return map;
}

}  // namespace hisal
