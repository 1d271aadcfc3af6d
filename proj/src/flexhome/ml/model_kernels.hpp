#pragma once

// Scalar-templated compute kernels shared by the public forward/backward
// wrappers and the training loop. The float instantiation is the opt-in
// speed mode; double is the reference used by every gradient check.

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "flexhome/ml/model.hpp"

namespace flexhome::ml::detail {

template <typename S>
using MatR = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Model parameters as Eigen matrices (biases as 1 x n), in param_layout order.
template <typename S>
struct Pack {
    std::vector<MatR<S>> p;
};

template <typename S>
Pack<S> to_pack(const Weights& w);

template <typename S>
void from_pack(const Pack<S>& pk, Weights& w);

template <typename S>
Pack<S> zero_like(const Pack<S>& pk);

// batch points at [B, input_steps, input_features] row-major data.
template <typename S>
MatR<S> forward_impl(const ModelSpec& spec, const Pack<S>& pk, const S* batch, std::size_t B);

// Fills `grads` (pre-sized via zero_like) and returns the MSE loss.
template <typename S>
S backward_impl(const ModelSpec& spec, const Pack<S>& pk, const S* batch, std::size_t B,
                const MatR<S>& targets, Pack<S>& grads, MatR<S>* preds_out);

}  // namespace flexhome::ml::detail
