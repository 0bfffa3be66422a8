#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dwcl/matrix.hpp"
#include "dwcl/rng.hpp"

namespace dwcl {

enum class Activation { ReLU, Identity };

struct LayerSpec {
    std::size_t in_dim = 0;
    std::size_t out_dim = 0;
    Activation activation = Activation::Identity;

    friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

/// One affine layer. w is in_dim x out_dim, b is 1 x out_dim.
struct DenseLayer {
    LayerSpec spec;
    Matrix w;
    Matrix b;

    friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

struct Mlp {
    std::vector<DenseLayer> layers;

    std::size_t in_dim() const { return layers.empty() ? 0 : layers.front().spec.in_dim; }
    std::size_t out_dim() const { return layers.empty() ? 0 : layers.back().spec.out_dim; }

    friend bool operator==(const Mlp&, const Mlp&) = default;
};

/// Activation record of one Mlp forward pass. post[k] is the output of
/// layer k; layer k's input is post[k-1] (or input for k = 0).
struct MlpTape {
    Matrix input;
    std::vector<Matrix> post;
};

struct MlpGrads {
    std::vector<Matrix> w;
    std::vector<Matrix> b;
};

Matrix mlp_forward(const Mlp& mlp, const Matrix& x, MlpTape* tape = nullptr);

/// Computes parameter gradients and returns the gradient wrt the input.
Matrix mlp_backward(const Mlp& mlp, const MlpTape& tape, const Matrix& grad_out,
                    MlpGrads& grads);

struct AdamConfig {
    double learning_rate = 3e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// First/second moment accumulators aligned with one Mlp's parameters.
struct AdamMoments {
    std::vector<Matrix> m_w, v_w;
    std::vector<Matrix> m_b, v_b;

    friend bool operator==(const AdamMoments&, const AdamMoments&) = default;
};

struct AdamState {
    AdamMoments encoder, projection, decoder;
    std::uint64_t step = 0;

    friend bool operator==(const AdamState&, const AdamState&) = default;
};

/// One view's encoder / projection / decoder stack plus optimizer state.
struct ViewModel {
    Mlp encoder;
    Mlp projection;
    Mlp decoder;
    AdamState adam;

    std::size_t input_dim() const { return encoder.in_dim(); }
    std::size_t h_dim() const { return encoder.out_dim(); }
    std::size_t hhat_dim() const { return projection.out_dim(); }

    friend bool operator==(const ViewModel&, const ViewModel&) = default;
};

struct ViewTape {
    MlpTape encoder, projection, decoder;
};

struct ViewForward {
    Matrix h;     // encoder output
    Matrix hhat;  // projection output (empty when skipped)
    Matrix xrec;  // decoder output (empty when skipped)
};

struct ViewGrads {
    MlpGrads encoder, projection, decoder;
};

/// Standard stack: encoder input -> 500 -> 500 -> 2000 -> h_dim (ReLU between,
/// identity into H), a single affine projection h_dim -> hhat_dim, and a
/// decoder mirroring the encoder back to input_dim. He fan-in init, zero bias.
ViewModel init_view_model(std::size_t input_dim, std::size_t h_dim,
                          std::size_t hhat_dim, RandomSource& rng);

/// Same wiring with caller-chosen encoder widths; encoder_dims runs from the
/// input dim to h_dim inclusive and the decoder mirrors it.
ViewModel make_view_model(const std::vector<std::size_t>& encoder_dims,
                          std::size_t hhat_dim, RandomSource& rng);

/// Forward through encoder and optionally projection / decoder. Aborts with
/// a diagnostic if any output is non-finite.
ViewForward view_forward(const ViewModel& model, const Matrix& x_batch,
                         ViewTape* tape = nullptr, bool with_projection = true,
                         bool with_decoder = true);

/// Reverse-mode gradients for the composite loss whose output-side gradients
/// are supplied. Null gradient pointers mean identically zero; the matching
/// branch is skipped and its parameter gradients are returned as zeros.
ViewGrads view_backward(const ViewModel& model, const ViewTape& tape,
                        const Matrix* grad_hhat, const Matrix* grad_xrec);

/// Bias-corrected Adam update over every parameter; increments the step
/// counter. Rejects non-finite gradients.
void adam_step(ViewModel& model, const ViewGrads& grads, const AdamConfig& cfg);

/// Checkpoint container: layer specs, parameter tensors, Adam state, and an
/// opaque config string. Round-trips losslessly.
void save_view_models(const std::string& path, const std::vector<ViewModel>& models,
                      const std::string& config_json);
std::vector<ViewModel> load_view_models(const std::string& path,
                                        std::string* config_json = nullptr);

}  // namespace dwcl
