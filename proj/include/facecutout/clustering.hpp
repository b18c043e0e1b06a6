#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "facecutout/dataset.hpp"
#include "facecutout/error.hpp"

namespace facecutout {

inline constexpr std::size_t kEmbeddingDim = 128;

struct FaceEmbedding {
    std::string video_id;
    long frame_id = 0;
    std::vector<double> vector;

    void validate() const {
        if (vector.size() != kEmbeddingDim) {
            throw Error(Errc::InvalidArgument, "embedding for '" + video_id + "' has " +
                                                   std::to_string(vector.size()) + " values, expected 128");
        }
        for (double v : vector) {
            if (!std::isfinite(v)) throw Error(Errc::InvalidArgument, "non-finite embedding value");
        }
    }
};

struct DbscanParams {
    double eps = 0.5;
    int min_pts = 5;

    void validate() const {
        if (!(eps > 0.0)) throw Error(Errc::InvalidArgument, "eps must be > 0");
        if (min_pts < 1) throw Error(Errc::InvalidArgument, "min_pts must be >= 1");
    }
};

using PointSet = std::vector<std::vector<double>>;

namespace detail {

inline double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        s += d * d;
    }
    return s;
}

} // namespace detail

/// DBSCAN with exact O(n^2) neighbor search.
///
/// A point is core when at least `min_pts` points (itself included) lie within
/// `eps`. Clusters are the eps-connected components of core points. A border
/// point joins the cluster of its lowest-index core neighbor. Cluster ids are
/// renumbered 0.. in order of each cluster's smallest member index; noise is
/// kNoiseCluster.
inline std::vector<int> dbscan(const PointSet& points, const DbscanParams& params) {
    params.validate();
    if (points.empty()) throw Error(Errc::EmptyInput, "dbscan needs at least one point");
    const std::size_t n = points.size();
    const std::size_t dim = points.front().size();
    for (const auto& p : points) {
        if (p.size() != dim) throw Error(Errc::InvalidArgument, "points differ in dimension");
    }

    const double eps2 = params.eps * params.eps;
    std::vector<std::vector<std::size_t>> neighbors(n);
    for (std::size_t i = 0; i < n; ++i) {
        neighbors[i].push_back(i);
        for (std::size_t j = i + 1; j < n; ++j) {
            if (detail::squared_distance(points[i], points[j]) <= eps2) {
                neighbors[i].push_back(j);
                neighbors[j].push_back(i);
            }
        }
    }
    for (auto& nb : neighbors) std::sort(nb.begin(), nb.end());

    std::vector<char> core(n);
    for (std::size_t i = 0; i < n; ++i) core[i] = neighbors[i].size() >= static_cast<std::size_t>(params.min_pts);

    constexpr long kUnset = -1;
    std::vector<long> component(n, kUnset);
    std::vector<std::size_t> stack;
    for (std::size_t seed = 0; seed < n; ++seed) {
        if (!core[seed] || component[seed] != kUnset) continue;
        component[seed] = static_cast<long>(seed);
        stack.assign(1, seed);
        while (!stack.empty()) {
            const std::size_t cur = stack.back();
            stack.pop_back();
            for (std::size_t nb : neighbors[cur]) {
                if (core[nb] && component[nb] == kUnset) {
                    component[nb] = static_cast<long>(seed);
                    stack.push_back(nb);
                }
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (core[i]) continue;
        for (std::size_t nb : neighbors[i]) {
            if (core[nb]) {
                component[i] = component[nb];
                break;
            }
        }
    }

    std::map<long, int> renumber;
    std::vector<int> labels(n, kNoiseCluster);
    for (std::size_t i = 0; i < n; ++i) {
        if (component[i] == kUnset) continue;
        const auto [it, inserted] = renumber.emplace(component[i], static_cast<int>(renumber.size()));
        labels[i] = it->second;
    }
    return labels;
}

/// Clusters every frame embedding, then gives each video the majority
/// cluster over its non-noise frames (smallest id on ties, noise if none).
inline ClusterAssignment video_clusters(const std::vector<FaceEmbedding>& embeddings, const DbscanParams& params) {
    if (embeddings.empty()) throw Error(Errc::EmptyInput, "no embeddings");
    PointSet points;
    points.reserve(embeddings.size());
    for (const auto& e : embeddings) {
        e.validate();
        points.push_back(e.vector);
    }
    const auto labels = dbscan(points, params);

    std::map<std::string, std::map<int, std::size_t>> votes;
    for (std::size_t i = 0; i < embeddings.size(); ++i) {
        auto& v = votes[embeddings[i].video_id];
        if (labels[i] != kNoiseCluster) ++v[labels[i]];
    }
    ClusterAssignment out;
    for (const auto& [video, counts] : votes) {
        int best = kNoiseCluster;
        std::size_t best_count = 0;
        for (const auto& [cluster, count] : counts) {
            if (count > best_count) {
                best = cluster;
                best_count = count;
            }
        }
        out[video] = best;
    }
    return out;
}

/// Cluster ids for every manifest video: reals keep their own (noise when
/// absent from `assign`), fakes inherit their source video's.
inline ClusterAssignment propagate_to_fakes(const ClusterAssignment& assign, const DatasetManifest& manifest) {
    ClusterAssignment out;
    for (const auto& r : manifest.records()) {
        if (r.label != Label::Real) continue;
        const auto it = assign.find(r.video_id);
        out[r.video_id] = it == assign.end() ? kNoiseCluster : it->second;
    }
    for (const auto& r : manifest.records()) {
        if (r.label != Label::Fake) continue;
        const auto* src = r.source_video_id ? manifest.find(*r.source_video_id) : nullptr;
        if (!src || src->label != Label::Real) {
            throw Error(Errc::DanglingSource, "fake '" + r.video_id + "' references unknown real '" +
                                                  r.source_video_id.value_or("") + "'");
        }
        out[r.video_id] = out.at(src->video_id);
    }
    return out;
}

struct PcaResult {
    Eigen::VectorXd mean;
    Eigen::Matrix<double, 2, Eigen::Dynamic> components; // rows are unit principal axes
    std::array<double, 2> explained_variance_ratio{};
    std::vector<std::array<double, 2>> projections;
};

/// Projects centered data onto the top two covariance eigenvectors.
///
/// Each axis is signed so its largest-magnitude coordinate is positive.
inline PcaResult pca_fit(const PointSet& points) {
    if (points.size() < 3) throw Error(Errc::EmptyInput, "PCA needs at least 3 points");
    const auto n = static_cast<Eigen::Index>(points.size());
    const auto dim = static_cast<Eigen::Index>(points.front().size());
    if (dim < 2) throw Error(Errc::InvalidArgument, "PCA needs at least 2 dimensions");
    Eigen::MatrixXd data(n, dim);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& p = points[static_cast<std::size_t>(i)];
        if (static_cast<Eigen::Index>(p.size()) != dim) throw Error(Errc::InvalidArgument, "points differ in dimension");
        for (Eigen::Index k = 0; k < dim; ++k) data(i, k) = p[static_cast<std::size_t>(k)];
    }
    PcaResult out;
    out.mean = data.colwise().mean().transpose();
    data.rowwise() -= out.mean.transpose();
    const Eigen::MatrixXd cov = (data.transpose() * data) / static_cast<double>(n - 1);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success) throw Error(Errc::RankDeficient, "eigendecomposition failed");
    const auto& values = solver.eigenvalues(); // ascending
    const double total = values.cwiseMax(0.0).sum();
    if (values(dim - 1) < 1e-12) throw Error(Errc::RankDeficient, "data has no variance");

    out.components.resize(2, dim);
    for (int c = 0; c < 2; ++c) {
        Eigen::VectorXd axis = solver.eigenvectors().col(dim - 1 - c);
        Eigen::Index arg = 0;
        axis.cwiseAbs().maxCoeff(&arg);
        if (axis(arg) < 0) axis = -axis;
        out.components.row(c) = axis.transpose();
        out.explained_variance_ratio[static_cast<std::size_t>(c)] = std::max(values(dim - 1 - c), 0.0) / total;
    }
    const Eigen::MatrixXd proj = data * out.components.transpose();
    out.projections.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) out.projections[static_cast<std::size_t>(i)] = {proj(i, 0), proj(i, 1)};
    return out;
}

inline std::vector<std::array<double, 2>> pca_2d(const PointSet& points) { return pca_fit(points).projections; }

} // namespace facecutout
