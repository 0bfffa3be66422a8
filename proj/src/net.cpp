#include "dwcl/net.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

#include "dwcl/kernels.hpp"

namespace dwcl {

namespace {

Matrix layer_forward(const DenseLayer& layer, const Matrix& x) {
    Matrix y = matmul_nn(x, layer.w);
    const double* b = layer.b.row(0);
    for (std::size_t i = 0; i < y.rows(); ++i) {
        double* yi = y.row(i);
        for (std::size_t j = 0; j < y.cols(); ++j) yi[j] += b[j];
    }
    if (layer.spec.activation == Activation::ReLU) {
        for (std::size_t i = 0; i < y.size(); ++i) {
            if (y.data()[i] < 0.0) y.data()[i] = 0.0;
        }
    }
    return y;
}

Matrix column_sums(const Matrix& m) {
    Matrix out(1, m.cols(), 0.0);
    double* o = out.row(0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const double* mi = m.row(i);
        for (std::size_t j = 0; j < m.cols(); ++j) o[j] += mi[j];
    }
    return out;
}

MlpGrads zero_grads(const Mlp& mlp) {
    MlpGrads g;
    for (const auto& layer : mlp.layers) {
        g.w.emplace_back(layer.spec.in_dim, layer.spec.out_dim, 0.0);
        g.b.emplace_back(1, layer.spec.out_dim, 0.0);
    }
    return g;
}

AdamMoments zero_moments(const Mlp& mlp) {
    AdamMoments m;
    for (const auto& layer : mlp.layers) {
        m.m_w.emplace_back(layer.spec.in_dim, layer.spec.out_dim, 0.0);
        m.v_w.emplace_back(layer.spec.in_dim, layer.spec.out_dim, 0.0);
        m.m_b.emplace_back(1, layer.spec.out_dim, 0.0);
        m.v_b.emplace_back(1, layer.spec.out_dim, 0.0);
    }
    return m;
}

Mlp make_mlp(const std::vector<std::size_t>& dims, RandomSource& rng) {
    Mlp mlp;
    for (std::size_t k = 0; k + 1 < dims.size(); ++k) {
        DenseLayer layer;
        layer.spec.in_dim = dims[k];
        layer.spec.out_dim = dims[k + 1];
        layer.spec.activation =
            (k + 2 < dims.size()) ? Activation::ReLU : Activation::Identity;
        layer.w = Matrix(dims[k], dims[k + 1]);
        const double scale = std::sqrt(2.0 / static_cast<double>(dims[k]));
        for (std::size_t i = 0; i < layer.w.size(); ++i) {
            layer.w.data()[i] = rng.normal() * scale;
        }
        layer.b = Matrix(1, dims[k + 1], 0.0);
        mlp.layers.push_back(std::move(layer));
    }
    return mlp;
}

void check_finite_or_throw(const Matrix& m, const char* where) {
    if (!is_finite(m)) {
        throw std::runtime_error(std::string("view_forward: non-finite activations in ") +
                                 where);
    }
}

}  // namespace

Matrix mlp_forward(const Mlp& mlp, const Matrix& x, MlpTape* tape) {
    if (x.cols() != mlp.in_dim()) {
        throw std::invalid_argument("mlp_forward: input width mismatch");
    }
    if (tape) {
        tape->input = x;
        tape->post.clear();
    }
    Matrix cur = x;
    for (const auto& layer : mlp.layers) {
        cur = layer_forward(layer, cur);
        if (tape) tape->post.push_back(cur);
    }
    return cur;
}

Matrix mlp_backward(const Mlp& mlp, const MlpTape& tape, const Matrix& grad_out,
                    MlpGrads& grads) {
    if (tape.post.size() != mlp.layers.size()) {
        throw std::invalid_argument("mlp_backward: tape does not match network");
    }
    if (grad_out.rows() != tape.input.rows() || grad_out.cols() != mlp.out_dim()) {
        throw std::invalid_argument("mlp_backward: gradient shape mismatch");
    }
    grads = zero_grads(mlp);
    Matrix grad = grad_out;
    for (std::size_t k = mlp.layers.size(); k-- > 0;) {
        const DenseLayer& layer = mlp.layers[k];
        const Matrix& post = tape.post[k];
        if (layer.spec.activation == Activation::ReLU) {
            // post > 0 iff the pre-activation was positive
            for (std::size_t i = 0; i < grad.size(); ++i) {
                if (post.data()[i] <= 0.0) grad.data()[i] = 0.0;
            }
        }
        const Matrix& input = (k == 0) ? tape.input : tape.post[k - 1];
        grads.w[k] = matmul_tn(input, grad);
        grads.b[k] = column_sums(grad);
        if (k > 0) grad = matmul_nt(grad, layer.w);
    }
    return matmul_nt(grad, mlp.layers.front().w);
}

ViewModel make_view_model(const std::vector<std::size_t>& encoder_dims,
                          std::size_t hhat_dim, RandomSource& rng) {
    if (encoder_dims.size() < 2 || hhat_dim < 1) {
        throw std::invalid_argument("make_view_model: bad dimensions");
    }
    for (std::size_t d : encoder_dims) {
        if (d < 1) throw std::invalid_argument("make_view_model: bad dimensions");
    }
    ViewModel model;
    model.encoder = make_mlp(encoder_dims, rng);
    model.projection = make_mlp({encoder_dims.back(), hhat_dim}, rng);
    std::vector<std::size_t> decoder_dims(encoder_dims.rbegin(), encoder_dims.rend());
    model.decoder = make_mlp(decoder_dims, rng);
    model.adam.encoder = zero_moments(model.encoder);
    model.adam.projection = zero_moments(model.projection);
    model.adam.decoder = zero_moments(model.decoder);
    return model;
}

ViewModel init_view_model(std::size_t input_dim, std::size_t h_dim,
                          std::size_t hhat_dim, RandomSource& rng) {
    return make_view_model({input_dim, 500, 500, 2000, h_dim}, hhat_dim, rng);
}

ViewForward view_forward(const ViewModel& model, const Matrix& x_batch, ViewTape* tape,
                         bool with_projection, bool with_decoder) {
    if (x_batch.cols() != model.input_dim()) {
        throw std::invalid_argument("view_forward: batch width mismatch");
    }
    ViewForward out;
    out.h = mlp_forward(model.encoder, x_batch, tape ? &tape->encoder : nullptr);
    check_finite_or_throw(out.h, "encoder");
    if (with_projection) {
        out.hhat = mlp_forward(model.projection, out.h, tape ? &tape->projection : nullptr);
        check_finite_or_throw(out.hhat, "projection");
    }
    if (with_decoder) {
        out.xrec = mlp_forward(model.decoder, out.h, tape ? &tape->decoder : nullptr);
        check_finite_or_throw(out.xrec, "decoder");
    }
    return out;
}

ViewGrads view_backward(const ViewModel& model, const ViewTape& tape,
                        const Matrix* grad_hhat, const Matrix* grad_xrec) {
    ViewGrads grads;
    Matrix grad_h(tape.encoder.input.rows(), model.h_dim(), 0.0);
    if (grad_hhat) {
        Matrix dh = mlp_backward(model.projection, tape.projection, *grad_hhat,
                                 grads.projection);
        for (std::size_t i = 0; i < grad_h.size(); ++i) grad_h.data()[i] += dh.data()[i];
    } else {
        grads.projection = zero_grads(model.projection);
    }
    if (grad_xrec) {
        Matrix dh = mlp_backward(model.decoder, tape.decoder, *grad_xrec, grads.decoder);
        for (std::size_t i = 0; i < grad_h.size(); ++i) grad_h.data()[i] += dh.data()[i];
    } else {
        grads.decoder = zero_grads(model.decoder);
    }
    mlp_backward(model.encoder, tape.encoder, grad_h, grads.encoder);
    return grads;
}

namespace {

void adam_update(Matrix& param, Matrix& m, Matrix& v, const Matrix& grad,
                 const AdamConfig& cfg, double bc1, double bc2) {
    if (!is_finite(grad)) {
        throw std::runtime_error("adam_step: non-finite gradient");
    }
    for (std::size_t i = 0; i < param.size(); ++i) {
        const double g = grad.data()[i];
        const double mi = cfg.beta1 * m.data()[i] + (1.0 - cfg.beta1) * g;
        const double vi = cfg.beta2 * v.data()[i] + (1.0 - cfg.beta2) * g * g;
        m.data()[i] = mi;
        v.data()[i] = vi;
        const double mhat = mi / bc1;
        const double vhat = vi / bc2;
        param.data()[i] -= cfg.learning_rate * mhat / (std::sqrt(vhat) + cfg.epsilon);
    }
}

void adam_mlp(Mlp& mlp, AdamMoments& mom, const MlpGrads& grads, const AdamConfig& cfg,
              double bc1, double bc2) {
    if (grads.w.size() != mlp.layers.size()) {
        throw std::invalid_argument("adam_step: gradients not aligned with parameters");
    }
    for (std::size_t k = 0; k < mlp.layers.size(); ++k) {
        adam_update(mlp.layers[k].w, mom.m_w[k], mom.v_w[k], grads.w[k], cfg, bc1, bc2);
        adam_update(mlp.layers[k].b, mom.m_b[k], mom.v_b[k], grads.b[k], cfg, bc1, bc2);
    }
}

}  // namespace

void adam_step(ViewModel& model, const ViewGrads& grads, const AdamConfig& cfg) {
    const std::uint64_t t = model.adam.step + 1;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t));
    adam_mlp(model.encoder, model.adam.encoder, grads.encoder, cfg, bc1, bc2);
    adam_mlp(model.projection, model.adam.projection, grads.projection, cfg, bc1, bc2);
    adam_mlp(model.decoder, model.adam.decoder, grads.decoder, cfg, bc1, bc2);
    model.adam.step = t;
}

// ---------------------------------------------------------------------------
// Checkpoint container
// ---------------------------------------------------------------------------

namespace {

constexpr char kMagic[8] = {'D', 'W', 'C', 'L', 'C', 'K', 'P', '1'};

void write_u64(std::ostream& os, std::uint64_t v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

std::uint64_t read_u64(std::istream& is) {
    std::uint64_t v = 0;
    is.read(reinterpret_cast<char*>(&v), sizeof(v));
    return v;
}

void write_matrix(std::ostream& os, const Matrix& m) {
    write_u64(os, m.rows());
    write_u64(os, m.cols());
    os.write(reinterpret_cast<const char*>(m.data()),
             static_cast<std::streamsize>(m.size() * sizeof(double)));
}

Matrix read_matrix(std::istream& is) {
    const std::uint64_t rows = read_u64(is);
    const std::uint64_t cols = read_u64(is);
    Matrix m(rows, cols);
    is.read(reinterpret_cast<char*>(m.data()),
            static_cast<std::streamsize>(m.size() * sizeof(double)));
    return m;
}

void write_mlp(std::ostream& os, const Mlp& mlp) {
    write_u64(os, mlp.layers.size());
    for (const auto& layer : mlp.layers) {
        write_u64(os, layer.spec.in_dim);
        write_u64(os, layer.spec.out_dim);
        write_u64(os, layer.spec.activation == Activation::ReLU ? 1 : 0);
        write_matrix(os, layer.w);
        write_matrix(os, layer.b);
    }
}

Mlp read_mlp(std::istream& is) {
    Mlp mlp;
    const std::uint64_t n = read_u64(is);
    for (std::uint64_t k = 0; k < n; ++k) {
        DenseLayer layer;
        layer.spec.in_dim = read_u64(is);
        layer.spec.out_dim = read_u64(is);
        layer.spec.activation = read_u64(is) == 1 ? Activation::ReLU : Activation::Identity;
        layer.w = read_matrix(is);
        layer.b = read_matrix(is);
        mlp.layers.push_back(std::move(layer));
    }
    return mlp;
}

void write_moments(std::ostream& os, const AdamMoments& m) {
    write_u64(os, m.m_w.size());
    for (std::size_t k = 0; k < m.m_w.size(); ++k) {
        write_matrix(os, m.m_w[k]);
        write_matrix(os, m.v_w[k]);
        write_matrix(os, m.m_b[k]);
        write_matrix(os, m.v_b[k]);
    }
}

AdamMoments read_moments(std::istream& is) {
    AdamMoments m;
    const std::uint64_t n = read_u64(is);
    for (std::uint64_t k = 0; k < n; ++k) {
        m.m_w.push_back(read_matrix(is));
        m.v_w.push_back(read_matrix(is));
        m.m_b.push_back(read_matrix(is));
        m.v_b.push_back(read_matrix(is));
    }
    return m;
}

}  // namespace

void save_view_models(const std::string& path, const std::vector<ViewModel>& models,
                      const std::string& config_json) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("save_view_models: cannot open " + path);
    os.write(kMagic, sizeof(kMagic));
    write_u64(os, models.size());
    for (const auto& model : models) {
        write_mlp(os, model.encoder);
        write_mlp(os, model.projection);
        write_mlp(os, model.decoder);
        write_moments(os, model.adam.encoder);
        write_moments(os, model.adam.projection);
        write_moments(os, model.adam.decoder);
        write_u64(os, model.adam.step);
    }
    write_u64(os, config_json.size());
    os.write(config_json.data(), static_cast<std::streamsize>(config_json.size()));
    if (!os) throw std::runtime_error("save_view_models: write failed for " + path);
}

std::vector<ViewModel> load_view_models(const std::string& path, std::string* config_json) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("load_view_models: cannot open " + path);
    char magic[8];
    is.read(magic, sizeof(magic));
    if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw std::runtime_error("load_view_models: not a checkpoint file: " + path);
    }
    std::vector<ViewModel> models(read_u64(is));
    for (auto& model : models) {
        model.encoder = read_mlp(is);
        model.projection = read_mlp(is);
        model.decoder = read_mlp(is);
        model.adam.encoder = read_moments(is);
        model.adam.projection = read_moments(is);
        model.adam.decoder = read_moments(is);
        model.adam.step = read_u64(is);
    }
    const std::uint64_t len = read_u64(is);
    std::string cfg(len, '\0');
    is.read(cfg.data(), static_cast<std::streamsize>(len));
    if (!is) throw std::runtime_error("load_view_models: truncated checkpoint: " + path);
    if (config_json) *config_json = std::move(cfg);
    return models;
}

}  // namespace dwcl
