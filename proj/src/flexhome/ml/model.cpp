#include "flexhome/ml/model.hpp"

#include <Eigen/Dense>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "flexhome/common/errors.hpp"
#include "flexhome/common/rng.hpp"
#include "flexhome/common/strconv.hpp"
#include "flexhome/ml/model_kernels.hpp"

namespace flexhome::ml {

const char* model_kind_name(ModelKind k) {
    switch (k) {
        case ModelKind::Linear: return "linear";
        case ModelKind::Ann: return "ann";
        case ModelKind::Cnn: return "cnn";
        case ModelKind::Lstm: return "lstm";
    }
    return "linear";
}

ModelKind model_kind_from_name(const std::string& s) {
    if (s == "linear") return ModelKind::Linear;
    if (s == "ann") return ModelKind::Ann;
    if (s == "cnn") return ModelKind::Cnn;
    if (s == "lstm") return ModelKind::Lstm;
    throw_invalid("unknown model kind `" + s + "`");
}

void ModelSpec::validate() const {
    if (input_steps < 1 || input_features < 1 || output_dim < 1)
        throw_invalid("model spec: input_steps, input_features and output_dim must be >= 1");
    if (kind != ModelKind::Linear && hidden < 1)
        throw_invalid("model spec: hidden size must be >= 1 for this kind");
    if (kind == ModelKind::Cnn) {
        if (kernel < 1) throw_invalid("model spec: kernel must be >= 1");
        if (input_steps < kernel)
            throw_invalid("model spec: cnn needs input_steps >= kernel (" + format_u64(input_steps) +
                          " < " + format_u64(kernel) + ")");
    }
}

ModelSpec default_spec(ModelKind kind, std::size_t input_steps, std::size_t input_features,
                       std::size_t output_dim) {
    ModelSpec s;
    s.kind = kind;
    s.input_steps = input_steps;
    s.input_features = input_features;
    s.output_dim = output_dim;
    switch (kind) {
        case ModelKind::Linear: s.hidden = 0; break;
        case ModelKind::Ann: s.hidden = 512; break;
        case ModelKind::Cnn: s.hidden = 512; s.kernel = 3; break;
        case ModelKind::Lstm: s.hidden = 32; break;
    }
    s.validate();
    return s;
}

std::vector<ParamShape> param_layout(const ModelSpec& s) {
    s.validate();
    const std::size_t in = s.input_steps * s.input_features;
    switch (s.kind) {
        case ModelKind::Linear:
            return {{"w", {in, s.output_dim}}, {"b", {s.output_dim}}};
        case ModelKind::Ann:
            return {{"w1", {in, s.hidden}},       {"b1", {s.hidden}}, {"w2", {s.hidden, s.hidden}},
                    {"b2", {s.hidden}},           {"w3", {s.hidden, s.output_dim}},
                    {"b3", {s.output_dim}}};
        case ModelKind::Cnn: {
            const std::size_t positions = s.input_steps - s.kernel + 1;
            return {{"conv_w", {s.kernel * s.input_features, s.hidden}},
                    {"conv_b", {s.hidden}},
                    {"head_w", {positions * s.hidden, s.output_dim}},
                    {"head_b", {s.output_dim}}};
        }
        case ModelKind::Lstm:
            return {{"wx", {s.input_features, 4 * s.hidden}},
                    {"wh", {s.hidden, 4 * s.hidden}},
                    {"b", {4 * s.hidden}},
                    {"head_w", {s.hidden, s.output_dim}},
                    {"head_b", {s.output_dim}}};
    }
    throw_invalid("unreachable model kind");
}

std::size_t Weights::param_count() const {
    std::size_t n = 0;
    for (const auto& p : params) n += p.size();
    return n;
}

Weights init_weights(const ModelSpec& spec, std::uint64_t seed) {
    const auto layout = param_layout(spec);
    Weights w;
    w.spec = spec;
    w.params.reserve(layout.size());
    for (std::size_t i = 0; i < layout.size(); ++i) {
        const auto& ps = layout[i];
        Tensor t(ps.shape);
        const bool is_bias = ps.shape.size() == 1;
        if (!is_bias) {
            Rng rng(mix_seed(seed, "init/" + ps.name, i));
            const double scale = std::sqrt(1.0 / static_cast<double>(ps.shape[0]));
            for (auto& v : t.data) v = rng.uniform(-scale, scale);
        } else if (spec.kind == ModelKind::Lstm && ps.name == "b") {
            // forget-gate block starts open
            for (std::size_t j = spec.hidden; j < 2 * spec.hidden; ++j) t.data[j] = 1.0;
        }
        w.params.push_back(std::move(t));
    }
    return w;
}

namespace detail {

template <typename S>
Pack<S> to_pack(const Weights& w) {
    Pack<S> pk;
    pk.p.reserve(w.params.size());
    for (const auto& t : w.params) {
        const std::size_t rows = t.shape.size() == 2 ? t.shape[0] : 1;
        const std::size_t cols = t.shape.size() == 2 ? t.shape[1] : t.shape[0];
        MatR<S> m(rows, cols);
        for (std::size_t i = 0; i < t.data.size(); ++i) m.data()[i] = static_cast<S>(t.data[i]);
        pk.p.push_back(std::move(m));
    }
    return pk;
}

template <typename S>
void from_pack(const Pack<S>& pk, Weights& w) {
    for (std::size_t i = 0; i < pk.p.size(); ++i) {
        const auto& m = pk.p[i];
        auto& t = w.params[i];
        for (std::size_t j = 0; j < t.data.size(); ++j) t.data[j] = static_cast<double>(m.data()[j]);
    }
}

template <typename S>
Pack<S> zero_like(const Pack<S>& pk) {
    Pack<S> out;
    out.p.reserve(pk.p.size());
    for (const auto& m : pk.p) out.p.push_back(MatR<S>::Zero(m.rows(), m.cols()));
    return out;
}

namespace {

template <typename S>
MatR<S> sigmoid(const MatR<S>& x) {
    return ((-x.array()).exp() + S(1)).inverse().matrix();
}

// Copies timestep t of a [B, L, d] batch into a B x d matrix.
template <typename S>
void slice_step(const S* batch, std::size_t B, std::size_t L, std::size_t d, std::size_t t, MatR<S>& out) {
    out.resize(static_cast<Eigen::Index>(B), static_cast<Eigen::Index>(d));
    for (std::size_t b = 0; b < B; ++b)
        std::memcpy(out.data() + b * d, batch + (b * L + t) * d, d * sizeof(S));
}

// CNN im2col: row (b * positions + p) = flattened input steps [p, p+kernel).
template <typename S>
MatR<S> im2col(const S* batch, std::size_t B, std::size_t L, std::size_t d, std::size_t kernel) {
    const std::size_t positions = L - kernel + 1;
    MatR<S> xc(static_cast<Eigen::Index>(B * positions), static_cast<Eigen::Index>(kernel * d));
    for (std::size_t b = 0; b < B; ++b)
        for (std::size_t p = 0; p < positions; ++p)
            std::memcpy(xc.data() + (b * positions + p) * kernel * d, batch + (b * L + p) * d,
                        kernel * d * sizeof(S));
    return xc;
}

}  // namespace

template <typename S>
MatR<S> forward_impl(const ModelSpec& spec, const Pack<S>& pk, const S* batch, std::size_t B) {
    const std::size_t L = spec.input_steps;
    const std::size_t d = spec.input_features;
    const auto rows = static_cast<Eigen::Index>(B);

    switch (spec.kind) {
        case ModelKind::Linear: {
            Eigen::Map<const MatR<S>> x(batch, rows, static_cast<Eigen::Index>(L * d));
            return (x * pk.p[0]).rowwise() + pk.p[1].row(0);
        }
        case ModelKind::Ann: {
            Eigen::Map<const MatR<S>> x(batch, rows, static_cast<Eigen::Index>(L * d));
            MatR<S> h1 = ((x * pk.p[0]).rowwise() + pk.p[1].row(0)).cwiseMax(S(0));
            MatR<S> h2 = ((h1 * pk.p[2]).rowwise() + pk.p[3].row(0)).cwiseMax(S(0));
            return (h2 * pk.p[4]).rowwise() + pk.p[5].row(0);
        }
        case ModelKind::Cnn: {
            const std::size_t positions = L - spec.kernel + 1;
            MatR<S> xc = im2col(batch, B, L, d, spec.kernel);
            MatR<S> c = ((xc * pk.p[0]).rowwise() + pk.p[1].row(0)).cwiseMax(S(0));
            Eigen::Map<const MatR<S>> flat(c.data(), rows, static_cast<Eigen::Index>(positions * spec.hidden));
            return (flat * pk.p[2]).rowwise() + pk.p[3].row(0);
        }
        case ModelKind::Lstm: {
            const std::size_t H = spec.hidden;
            const auto h_cols = static_cast<Eigen::Index>(H);
            MatR<S> h = MatR<S>::Zero(rows, h_cols);
            MatR<S> c = MatR<S>::Zero(rows, h_cols);
            MatR<S> xt, gates;
            for (std::size_t t = 0; t < L; ++t) {
                slice_step(batch, B, L, d, t, xt);
                gates = ((xt * pk.p[0] + h * pk.p[1]).rowwise() + pk.p[2].row(0)).eval();
                MatR<S> gi = sigmoid<S>(gates.leftCols(h_cols));
                MatR<S> gf = sigmoid<S>(gates.middleCols(h_cols, h_cols));
                MatR<S> gg = gates.middleCols(2 * h_cols, h_cols).array().tanh().matrix();
                MatR<S> go = sigmoid<S>(gates.rightCols(h_cols));
                c = gf.cwiseProduct(c) + gi.cwiseProduct(gg);
                h = go.cwiseProduct(c.array().tanh().matrix());
            }
            return (h * pk.p[3]).rowwise() + pk.p[4].row(0);
        }
    }
    throw_invalid("unreachable model kind");
}

template <typename S>
S backward_impl(const ModelSpec& spec, const Pack<S>& pk, const S* batch, std::size_t B,
                const MatR<S>& targets, Pack<S>& grads, MatR<S>* preds_out) {
    const std::size_t L = spec.input_steps;
    const std::size_t d = spec.input_features;
    const auto rows = static_cast<Eigen::Index>(B);
    const S denom = static_cast<S>(B * spec.output_dim);

    MatR<S> preds;
    switch (spec.kind) {
        case ModelKind::Linear: {
            Eigen::Map<const MatR<S>> x(batch, rows, static_cast<Eigen::Index>(L * d));
            preds = (x * pk.p[0]).rowwise() + pk.p[1].row(0);
            MatR<S> dy = S(2) / denom * (preds - targets);
            grads.p[0] = x.transpose() * dy;
            grads.p[1] = dy.colwise().sum();
            break;
        }
        case ModelKind::Ann: {
            Eigen::Map<const MatR<S>> x(batch, rows, static_cast<Eigen::Index>(L * d));
            MatR<S> h1 = ((x * pk.p[0]).rowwise() + pk.p[1].row(0)).cwiseMax(S(0));
            MatR<S> h2 = ((h1 * pk.p[2]).rowwise() + pk.p[3].row(0)).cwiseMax(S(0));
            preds = (h2 * pk.p[4]).rowwise() + pk.p[5].row(0);

            MatR<S> dy = S(2) / denom * (preds - targets);
            grads.p[4] = h2.transpose() * dy;
            grads.p[5] = dy.colwise().sum();
            MatR<S> dh2 = (dy * pk.p[4].transpose()).cwiseProduct(
                (h2.array() > S(0)).template cast<S>().matrix());
            grads.p[2] = h1.transpose() * dh2;
            grads.p[3] = dh2.colwise().sum();
            MatR<S> dh1 = (dh2 * pk.p[2].transpose()).cwiseProduct(
                (h1.array() > S(0)).template cast<S>().matrix());
            grads.p[0] = x.transpose() * dh1;
            grads.p[1] = dh1.colwise().sum();
            break;
        }
        case ModelKind::Cnn: {
            const std::size_t positions = L - spec.kernel + 1;
            MatR<S> xc = im2col(batch, B, L, d, spec.kernel);
            MatR<S> c = ((xc * pk.p[0]).rowwise() + pk.p[1].row(0)).cwiseMax(S(0));
            Eigen::Map<const MatR<S>> flat(c.data(), rows, static_cast<Eigen::Index>(positions * spec.hidden));
            preds = (flat * pk.p[2]).rowwise() + pk.p[3].row(0);

            MatR<S> dy = S(2) / denom * (preds - targets);
            grads.p[2] = flat.transpose() * dy;
            grads.p[3] = dy.colwise().sum();
            MatR<S> dflat = dy * pk.p[2].transpose();  // [B, positions * F]
            Eigen::Map<MatR<S>> dc(dflat.data(), static_cast<Eigen::Index>(B * positions),
                                   static_cast<Eigen::Index>(spec.hidden));
            MatR<S> dc_pre = dc.cwiseProduct((c.array() > S(0)).template cast<S>().matrix());
            grads.p[0] = xc.transpose() * dc_pre;
            grads.p[1] = dc_pre.colwise().sum();
            break;
        }
        case ModelKind::Lstm: {
            const std::size_t H = spec.hidden;
            const auto h_cols = static_cast<Eigen::Index>(H);

            std::vector<MatR<S>> xs(L), gi(L), gf(L), gg(L), go(L), cs(L), tanh_c(L), hs(L);
            MatR<S> h = MatR<S>::Zero(rows, h_cols);
            MatR<S> c = MatR<S>::Zero(rows, h_cols);
            for (std::size_t t = 0; t < L; ++t) {
                slice_step(batch, B, L, d, t, xs[t]);
                MatR<S> gates = ((xs[t] * pk.p[0] + h * pk.p[1]).rowwise() + pk.p[2].row(0)).eval();
                gi[t] = sigmoid<S>(gates.leftCols(h_cols));
                gf[t] = sigmoid<S>(gates.middleCols(h_cols, h_cols));
                gg[t] = gates.middleCols(2 * h_cols, h_cols).array().tanh().matrix();
                go[t] = sigmoid<S>(gates.rightCols(h_cols));
                c = gf[t].cwiseProduct(c) + gi[t].cwiseProduct(gg[t]);
                cs[t] = c;
                tanh_c[t] = c.array().tanh().matrix();
                h = go[t].cwiseProduct(tanh_c[t]);
                hs[t] = h;
            }
            preds = (h * pk.p[3]).rowwise() + pk.p[4].row(0);

            MatR<S> dy = S(2) / denom * (preds - targets);
            grads.p[3] = h.transpose() * dy;
            grads.p[4] = dy.colwise().sum();

            grads.p[0] = MatR<S>::Zero(pk.p[0].rows(), pk.p[0].cols());
            grads.p[1] = MatR<S>::Zero(pk.p[1].rows(), pk.p[1].cols());
            grads.p[2] = MatR<S>::Zero(1, pk.p[2].cols());

            MatR<S> dh = dy * pk.p[3].transpose();
            MatR<S> dc = MatR<S>::Zero(rows, h_cols);
            MatR<S> dgates(rows, 4 * h_cols);
            for (std::size_t ti = L; ti-- > 0;) {
                dc += dh.cwiseProduct(go[ti])
                          .cwiseProduct((S(1) - tanh_c[ti].array().square()).matrix());
                // gate pre-activation gradients
                dgates.leftCols(h_cols) =
                    dc.cwiseProduct(gg[ti]).cwiseProduct(gi[ti]).cwiseProduct(
                        (S(1) - gi[ti].array()).matrix());
                if (ti > 0) {
                    dgates.middleCols(h_cols, h_cols) =
                        dc.cwiseProduct(cs[ti - 1]).cwiseProduct(gf[ti]).cwiseProduct(
                            (S(1) - gf[ti].array()).matrix());
                } else {
                    dgates.middleCols(h_cols, h_cols).setZero();  // c_{-1} = 0
                }
                dgates.middleCols(2 * h_cols, h_cols) =
                    dc.cwiseProduct(gi[ti]).cwiseProduct((S(1) - gg[ti].array().square()).matrix());
                dgates.rightCols(h_cols) =
                    dh.cwiseProduct(tanh_c[ti]).cwiseProduct(go[ti]).cwiseProduct(
                        (S(1) - go[ti].array()).matrix());

                grads.p[0] += xs[ti].transpose() * dgates;
                if (ti > 0) grads.p[1] += hs[ti - 1].transpose() * dgates;
                grads.p[2] += dgates.colwise().sum();

                dh = dgates * pk.p[1].transpose();
                dc = dc.cwiseProduct(gf[ti]);
            }
            break;
        }
    }

    if (preds_out) *preds_out = preds;
    return (preds - targets).squaredNorm() / denom;
}

// explicit instantiations
template Pack<double> to_pack<double>(const Weights&);
template Pack<float> to_pack<float>(const Weights&);
template void from_pack<double>(const Pack<double>&, Weights&);
template void from_pack<float>(const Pack<float>&, Weights&);
template Pack<double> zero_like<double>(const Pack<double>&);
template Pack<float> zero_like<float>(const Pack<float>&);
template MatR<double> forward_impl<double>(const ModelSpec&, const Pack<double>&, const double*, std::size_t);
template MatR<float> forward_impl<float>(const ModelSpec&, const Pack<float>&, const float*, std::size_t);
template double backward_impl<double>(const ModelSpec&, const Pack<double>&, const double*, std::size_t,
                                      const MatR<double>&, Pack<double>&, MatR<double>*);
template float backward_impl<float>(const ModelSpec&, const Pack<float>&, const float*, std::size_t,
                                    const MatR<float>&, Pack<float>&, MatR<float>*);

}  // namespace detail

namespace {

void check_batch_shape(const ModelSpec& spec, const Tensor& batch) {
    if (batch.shape.size() != 3 || batch.dim(1) != spec.input_steps || batch.dim(2) != spec.input_features)
        throw_invalid("batch shape mismatch: expected [B, " + format_u64(spec.input_steps) + ", " +
                      format_u64(spec.input_features) + "]");
    if (batch.dim(0) == 0) throw_invalid("empty batch");
}

}  // namespace

Tensor forward(const Weights& w, const Tensor& batch) {
    check_batch_shape(w.spec, batch);
    const std::size_t B = batch.dim(0);
    auto pk = detail::to_pack<double>(w);
    detail::MatR<double> y = detail::forward_impl<double>(w.spec, pk, batch.data.data(), B);
    Tensor out({B, w.spec.output_dim});
    std::memcpy(out.data.data(), y.data(), out.data.size() * sizeof(double));
    return out;
}

BackwardOut backward(const Weights& w, const Tensor& batch, const Tensor& targets) {
    check_batch_shape(w.spec, batch);
    const std::size_t B = batch.dim(0);
    if (targets.shape.size() != 2 || targets.dim(0) != B || targets.dim(1) != w.spec.output_dim)
        throw_invalid("targets shape mismatch: expected [B, " + format_u64(w.spec.output_dim) + "]");

    auto pk = detail::to_pack<double>(w);
    auto gpk = detail::zero_like(pk);
    detail::MatR<double> t(static_cast<Eigen::Index>(B), static_cast<Eigen::Index>(w.spec.output_dim));
    std::memcpy(t.data(), targets.data.data(), targets.data.size() * sizeof(double));
    detail::MatR<double> preds;
    const double loss = detail::backward_impl<double>(w.spec, pk, batch.data.data(), B, t, gpk, &preds);

    BackwardOut out;
    out.loss = loss;
    out.grads.spec = w.spec;
    const auto layout = param_layout(w.spec);
    for (std::size_t i = 0; i < layout.size(); ++i) {
        Tensor g(layout[i].shape);
        std::memcpy(g.data.data(), gpk.p[i].data(), g.data.size() * sizeof(double));
        if (!g.all_finite())
            throw_train_fault("non-finite gradient in parameter `" + layout[i].name + "`");
        out.grads.params.push_back(std::move(g));
    }
    out.preds = Tensor({B, w.spec.output_dim});
    std::memcpy(out.preds.data.data(), preds.data(), out.preds.data.size() * sizeof(double));
    return out;
}

// ---- weight file io ----

static_assert(std::endian::native == std::endian::little,
              "weight files are little-endian; big-endian hosts are unsupported");

namespace {

constexpr char kWeightsMagic[4] = {'F', 'H', 'W', '1'};
constexpr std::uint32_t kWeightsVersion = 1;

template <typename T>
void wpod(std::ofstream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
void rpod(std::ifstream& in, T& v, const std::string& path) {
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (in.gcount() != sizeof(T)) throw_io(path + ": truncated weight file");
}

}  // namespace

void save_weights(const std::string& path, const Weights& w) {
    const auto layout = param_layout(w.spec);
    if (layout.size() != w.params.size()) throw_invalid("save_weights: weights do not match their spec");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw_io("cannot write weight file: " + path);
    out.write(kWeightsMagic, 4);
    wpod(out, kWeightsVersion);
    wpod(out, static_cast<std::uint32_t>(w.spec.kind));
    wpod(out, static_cast<std::uint64_t>(w.spec.input_steps));
    wpod(out, static_cast<std::uint64_t>(w.spec.input_features));
    wpod(out, static_cast<std::uint64_t>(w.spec.output_dim));
    wpod(out, static_cast<std::uint64_t>(w.spec.hidden));
    wpod(out, static_cast<std::uint64_t>(w.spec.kernel));
    wpod(out, static_cast<std::uint32_t>(w.params.size()));
    for (std::size_t i = 0; i < w.params.size(); ++i) {
        const auto& name = layout[i].name;
        const auto& t = w.params[i];
        wpod(out, static_cast<std::uint32_t>(name.size()));
        out.write(name.data(), static_cast<std::streamsize>(name.size()));
        wpod(out, static_cast<std::uint32_t>(t.shape.size()));
        for (std::size_t d2 : t.shape) wpod(out, static_cast<std::uint64_t>(d2));
        out.write(reinterpret_cast<const char*>(t.data.data()),
                  static_cast<std::streamsize>(t.data.size() * sizeof(double)));
    }
    if (!out) throw_io("failed writing weight file: " + path);
}

Weights load_weights(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_io("cannot open weight file: " + path);
    char magic[4];
    in.read(magic, 4);
    if (in.gcount() != 4 || std::memcmp(magic, kWeightsMagic, 4) != 0)
        throw_io(path + ": not a weight file (bad magic)");
    std::uint32_t version = 0;
    rpod(in, version, path);
    if (version != kWeightsVersion)
        throw_io(path + ": unsupported weight format version " + format_u64(version));

    Weights w;
    std::uint32_t kind = 0;
    std::uint64_t steps = 0, feats = 0, outd = 0, hidden = 0, kernel = 0;
    rpod(in, kind, path);
    rpod(in, steps, path);
    rpod(in, feats, path);
    rpod(in, outd, path);
    rpod(in, hidden, path);
    rpod(in, kernel, path);
    if (kind > 3) throw_io(path + ": bad model kind in header");
    w.spec.kind = static_cast<ModelKind>(kind);
    w.spec.input_steps = static_cast<std::size_t>(steps);
    w.spec.input_features = static_cast<std::size_t>(feats);
    w.spec.output_dim = static_cast<std::size_t>(outd);
    w.spec.hidden = static_cast<std::size_t>(hidden);
    w.spec.kernel = static_cast<std::size_t>(kernel);
    const auto layout = param_layout(w.spec);

    std::uint32_t n_tensors = 0;
    rpod(in, n_tensors, path);
    if (n_tensors != layout.size()) throw_io(path + ": tensor count disagrees with model spec");
    for (std::size_t i = 0; i < layout.size(); ++i) {
        std::uint32_t name_len = 0;
        rpod(in, name_len, path);
        if (name_len > 256) throw_io(path + ": implausible tensor name length");
        std::string name(name_len, '\0');
        in.read(name.data(), name_len);
        if (in.gcount() != static_cast<std::streamsize>(name_len)) throw_io(path + ": truncated weight file");
        if (name != layout[i].name)
            throw_io(path + ": tensor `" + name + "` does not match expected `" + layout[i].name + "`");
        std::uint32_t ndim = 0;
        rpod(in, ndim, path);
        if (ndim != layout[i].shape.size()) throw_io(path + ": tensor `" + name + "` has wrong rank");
        std::vector<std::size_t> shape(ndim);
        for (auto& d2 : shape) {
            std::uint64_t v = 0;
            rpod(in, v, path);
            d2 = static_cast<std::size_t>(v);
        }
        if (shape != layout[i].shape) throw_io(path + ": tensor `" + name + "` has wrong shape");
        Tensor t(shape);
        in.read(reinterpret_cast<char*>(t.data.data()),
                static_cast<std::streamsize>(t.data.size() * sizeof(double)));
        if (static_cast<std::size_t>(in.gcount()) != t.data.size() * sizeof(double))
            throw_io(path + ": truncated weight file");
        w.params.push_back(std::move(t));
    }
    return w;
}

void require_spec_match(const ModelSpec& loaded, const ModelSpec& expected) {
    if (loaded.kind != expected.kind)
        throw_invalid(std::string("model kind mismatch: file contains `") + model_kind_name(loaded.kind) +
                      "`, expected `" + model_kind_name(expected.kind) + "`");
    if (!(loaded == expected))
        throw_invalid("model spec mismatch: file was trained with a different architecture shape");
}

}  // namespace flexhome::ml
