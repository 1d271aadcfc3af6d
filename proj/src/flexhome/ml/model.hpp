#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flexhome/ml/tensor.hpp"

namespace flexhome::ml {

enum class ModelKind : int { Linear = 0, Ann = 1, Cnn = 2, Lstm = 3 };

const char* model_kind_name(ModelKind k);
ModelKind model_kind_from_name(const std::string& s);

// Architecture descriptor. `hidden` is the ANN layer width, the CNN filter
// count or the LSTM cell count; `kernel` only applies to the CNN. The four
// shipped configurations: linear (single affine map, no activation), ann
// (2 x 512 relu), cnn (512 filters, kernel 3, relu, affine head), lstm
// (1 layer, 32 cells, affine head on the last hidden state).
struct ModelSpec {
    ModelKind kind = ModelKind::Linear;
    std::size_t input_steps = 1;     // lookback window length
    std::size_t input_features = 1;  // features per step
    std::size_t output_dim = 1;
    std::size_t hidden = 0;          // ignored for Linear
    std::size_t kernel = 3;          // Cnn only

    void validate() const;
    bool operator==(const ModelSpec&) const = default;
};

ModelSpec default_spec(ModelKind kind, std::size_t input_steps, std::size_t input_features,
                       std::size_t output_dim);

struct ParamShape {
    std::string name;
    std::vector<std::size_t> shape;
};

// Fixed parameter ordering per architecture; gradients mirror it.
std::vector<ParamShape> param_layout(const ModelSpec& spec);

struct Weights {
    ModelSpec spec;
    std::vector<Tensor> params;  // one per param_layout entry, same order

    std::size_t param_count() const;
};

// Seeded uniform(-sqrt(1/fan_in), +sqrt(1/fan_in)) weights, zero biases; the
// LSTM forget-gate bias starts at 1.
Weights init_weights(const ModelSpec& spec, std::uint64_t seed);

// batch has shape [B, input_steps, input_features]; returns [B, output_dim].
Tensor forward(const Weights& w, const Tensor& batch);

struct BackwardOut {
    Weights grads;   // same layout as the weights
    double loss = 0; // mean squared error over batch * output_dim
    Tensor preds;
};

// Reverse-mode gradient of the MSE loss wrt every parameter (full
// backpropagation through time for the LSTM). Non-finite gradients raise a
// training fault naming the parameter.
BackwardOut backward(const Weights& w, const Tensor& batch, const Tensor& targets);

// Versioned flat binary weight file (magic FHW1, spec descriptor, named
// little-endian f64 tensors). load(save(w)) is bit-identical.
void save_weights(const std::string& path, const Weights& w);
Weights load_weights(const std::string& path);

// Kind/shape compatibility gate for artifacts produced elsewhere.
void require_spec_match(const ModelSpec& loaded, const ModelSpec& expected);

}  // namespace flexhome::ml
