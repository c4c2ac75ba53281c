#ifndef ICDKM_SYNTH_HPP
#define ICDKM_SYNTH_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "icdkm/dataset.hpp"
#include "icdkm/matrix.hpp"
#include "icdkm/random.hpp"

namespace icdkm {

/// Kronecker product: the (i, j) block of the result is a(i, j) * b.
inline Matrix kronecker(const Matrix& a, const Matrix& b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("kronecker: empty operand");
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const double scale = a(i, j);
            for (std::size_t r = 0; r < b.rows(); ++r) {
                for (std::size_t c = 0; c < b.cols(); ++c) {
                    out(i * b.rows() + r, j * b.cols() + c) = scale * b(r, c);
                }
            }
        }
    }
    return out;
}

/// Cluster centers used when none are given: (0,0), (4,4), (8,0) in 2D and
/// (0,0,0), (4,4,4), (8,0,4) in 3D. Higher dimensions pad the 3D rows with 4.
inline Matrix default_offsets(std::size_t dims) {
    if (dims == 0) throw std::invalid_argument("dims must be >= 1");
    if (dims == 1) return Matrix{{0.0}, {4.0}, {8.0}};
    if (dims == 2) return Matrix{{0.0, 0.0}, {4.0, 4.0}, {8.0, 0.0}};
    Matrix offsets(3, dims, 4.0);
    for (std::size_t c = 0; c < dims; ++c) offsets(0, c) = 0.0;
    offsets(2, 0) = 8.0;
    offsets(2, 1) = 0.0;
    return offsets;
}

struct SynthSpec {
    std::size_t dims = 2;
    /// Per-coordinate variance of the isotropic Gaussian noise.
    double variance = 0.5;
    std::size_t clusters = 3;
    std::size_t points_per_cluster = 100;
    Matrix offsets = default_offsets(2);
    std::uint64_t seed = 7;

    static SynthSpec with_defaults(std::size_t dims, double variance, std::uint64_t seed = 7) {
        SynthSpec spec;
        spec.dims = dims;
        spec.variance = variance;
        spec.offsets = default_offsets(dims);
        spec.seed = seed;
        return spec;
    }

    void validate() const {
        if (dims < 1) throw std::invalid_argument("dims must be >= 1");
        if (!(variance > 0.0) || !std::isfinite(variance)) {
            throw std::invalid_argument("variance must be positive and finite");
        }
        if (clusters < 1) throw std::invalid_argument("clusters must be >= 1");
        if (points_per_cluster < 1) throw std::invalid_argument("points_per_cluster must be >= 1");
        if (offsets.rows() != clusters || offsets.cols() != dims) {
            throw std::invalid_argument("offsets must be " + std::to_string(clusters) + "x" +
                                        std::to_string(dims) + ", got " +
                                        std::to_string(offsets.rows()) + "x" +
                                        std::to_string(offsets.cols()));
        }
        if (!offsets.all_finite()) throw std::invalid_argument("offsets must be finite");
    }
};

/// Gaussian blobs: noise ~ N(0, variance) per coordinate plus
/// kron(offsets, ones(points_per_cluster x 1)), so block g is centered on
/// offsets row g and labelled g.
inline Dataset generate(const SynthSpec& spec) {
    spec.validate();
    const std::size_t n = spec.clusters * spec.points_per_cluster;
    Rng rng(spec.seed);
    NormalSampler normal;
    const double sd = std::sqrt(spec.variance);

    Matrix noise(n, spec.dims);
    for (auto& v : noise.values()) v = sd * normal(rng);

    const Matrix shift = kronecker(spec.offsets, Matrix(spec.points_per_cluster, 1, 1.0));

    Dataset data;
    data.features = Matrix(n, spec.dims);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < spec.dims; ++c) data.features(i, c) = noise(i, c) + shift(i, c);
    }
    std::vector<std::size_t> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = i / spec.points_per_cluster;
    data.labels = std::move(labels);
    for (std::size_t g = 0; g < spec.clusters; ++g) data.class_names.push_back(std::to_string(g));
    for (std::size_t c = 0; c < spec.dims; ++c) data.feature_names.push_back("x" + std::to_string(c));
    data.provenance = "synthetic(dims=" + std::to_string(spec.dims) +
                      ",variance=" + std::to_string(spec.variance) +
                      ",clusters=" + std::to_string(spec.clusters) +
                      ",points_per_cluster=" + std::to_string(spec.points_per_cluster) +
                      ",seed=" + std::to_string(spec.seed) + ")";
    return data;
}

}  // namespace icdkm

#endif  // ICDKM_SYNTH_HPP
