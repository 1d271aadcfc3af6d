#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace flexhome::ml {

// Dense row-major tensor of doubles. Just enough structure for feature
// matrices, window batches and model parameters; heavy math happens through
// Eigen maps over `data`.
struct Tensor {
    std::vector<std::size_t> shape;
    std::vector<double> data;

    Tensor() = default;
    explicit Tensor(std::vector<std::size_t> s);

    std::size_t size() const { return data.size(); }
    std::size_t dim(std::size_t i) const { return shape.at(i); }

    double& at2(std::size_t r, std::size_t c) { return data[r * shape[1] + c]; }
    double at2(std::size_t r, std::size_t c) const { return data[r * shape[1] + c]; }

    bool all_finite() const;
};

std::size_t shape_size(const std::vector<std::size_t>& shape);

// Flat binary tensor file: magic "FHT1", u32 version, u32 ndim, u64 dims,
// then little-endian f64 payload.
void write_tensor(const std::string& path, const Tensor& t);
Tensor read_tensor(const std::string& path);

}  // namespace flexhome::ml
