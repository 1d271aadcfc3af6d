#include "flexhome/ml/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "flexhome/common/csv.hpp"
#include "flexhome/common/errors.hpp"
#include "flexhome/common/rng.hpp"
#include "flexhome/common/strconv.hpp"
#include "flexhome/ml/model_kernels.hpp"

namespace flexhome::ml {

const char* precision_name(Precision p) { return p == Precision::F32 ? "f32" : "f64"; }

Precision precision_from_name(const std::string& s) {
    if (s == "f64") return Precision::F64;
    if (s == "f32") return Precision::F32;
    throw_invalid("unknown precision `" + s + "` (use f64 or f32)");
}

void TrainConfig::validate() const {
    if (!(learning_rate > 0) || !(beta1 > 0 && beta1 < 1) || !(beta2 > 0 && beta2 < 1) || !(adam_eps > 0))
        throw_config("train config: optimizer hyperparameters out of range");
    if (batch_size < 1 || max_epochs < 1 || patience < 1)
        throw_config("train config: batch_size, max_epochs and patience must be >= 1");
}

namespace {

using detail::MatR;
using detail::Pack;

template <typename S>
struct Adam {
    Pack<S> m, v;
    std::size_t step = 0;

    explicit Adam(const Pack<S>& like) : m(detail::zero_like(like)), v(detail::zero_like(like)) {}

    void update(Pack<S>& w, const Pack<S>& g, const TrainConfig& cfg) {
        ++step;
        const S b1 = static_cast<S>(cfg.beta1);
        const S b2 = static_cast<S>(cfg.beta2);
        const S lr = static_cast<S>(cfg.learning_rate);
        const S eps = static_cast<S>(cfg.adam_eps);
        const S bc1 = S(1) - static_cast<S>(std::pow(cfg.beta1, static_cast<double>(step)));
        const S bc2 = S(1) - static_cast<S>(std::pow(cfg.beta2, static_cast<double>(step)));
        for (std::size_t i = 0; i < w.p.size(); ++i) {
            m.p[i] = b1 * m.p[i] + (S(1) - b1) * g.p[i];
            v.p[i] = (b2 * v.p[i].array() + (S(1) - b2) * g.p[i].array().square()).matrix();
            w.p[i].array() -=
                lr * (m.p[i].array() / bc1) / ((v.p[i].array() / bc2).sqrt() + eps);
        }
    }
};

// Gathers windows `anchors[i0..i0+count)` directly into scalar-S buffers.
template <typename S>
void gather_batch(const data::Dataset& ds, const std::vector<std::size_t>& anchors, std::size_t i0,
                  std::size_t count, std::vector<S>& batch, MatR<S>& targets) {
    const std::size_t L = ds.window.lookback_steps;
    const std::size_t H = ds.window.horizon_steps;
    const std::size_t d = ds.features.dim(1);
    const std::size_t out_dim = ds.labels.dim(1);
    batch.resize(count * L * d);
    targets.resize(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(out_dim));
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t t = anchors[i0 + i];
        const std::size_t in_begin = t + 1 - L;
        const double* src = &ds.features.data[in_begin * d];
        S* dst = &batch[i * L * d];
        for (std::size_t j = 0; j < L * d; ++j) dst[j] = static_cast<S>(src[j]);
        for (std::size_t c = 0; c < out_dim; ++c)
            targets(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
                static_cast<S>(ds.labels.at2(t + H, c));
    }
}

template <typename S>
double eval_mse(const ModelSpec& spec, const Pack<S>& pk, const data::Dataset& ds,
                const std::vector<std::size_t>& anchors, std::size_t batch_size) {
    if (anchors.empty()) throw_invalid("evaluation split has no windows");
    double sq_sum = 0;
    std::size_t n_vals = 0;
    std::vector<S> batch;
    MatR<S> targets;
    for (std::size_t i0 = 0; i0 < anchors.size(); i0 += batch_size) {
        const std::size_t count = std::min(batch_size, anchors.size() - i0);
        gather_batch<S>(ds, anchors, i0, count, batch, targets);
        MatR<S> preds = detail::forward_impl<S>(spec, pk, batch.data(), count);
        sq_sum += static_cast<double>((preds - targets).squaredNorm());
        n_vals += count * static_cast<std::size_t>(targets.cols());
    }
    return sq_sum / static_cast<double>(n_vals);
}

void shuffle_anchors(std::vector<std::size_t>& a, Rng& rng) {
    for (std::size_t i = a.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.bounded(i));
        std::swap(a[i - 1], a[j]);
    }
}

template <typename S>
TrainResult train_impl(const ModelSpec& spec, const data::Dataset& ds, const data::WindowSet& windows,
                       const TrainConfig& cfg) {
    if (windows.train.empty()) throw_invalid("train: no training windows");
    if (windows.val.empty()) throw_invalid("train: no validation windows");

    Weights master = init_weights(spec, cfg.seed);
    Pack<S> pk = detail::to_pack<S>(master);
    Pack<S> grads = detail::zero_like(pk);
    Adam<S> adam(pk);
    const auto layout = param_layout(spec);

    const std::uint64_t shuffle_seed =
        cfg.shuffle_seed != 0 ? cfg.shuffle_seed : mix_seed(cfg.seed, "train/shuffle");

    TrainResult res;
    res.weights = master;
    res.best_val_mse = std::numeric_limits<double>::infinity();
    std::size_t since_best = 0;

    std::vector<std::size_t> order = windows.train;
    std::vector<S> batch;
    MatR<S> targets;

    for (std::size_t epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        Rng shuffle_rng(mix_seed(shuffle_seed, "epoch", epoch));
        shuffle_anchors(order, shuffle_rng);

        double train_sq = 0;
        std::size_t train_vals = 0;
        for (std::size_t i0 = 0; i0 < order.size(); i0 += cfg.batch_size) {
            const std::size_t count = std::min(cfg.batch_size, order.size() - i0);
            gather_batch<S>(ds, order, i0, count, batch, targets);
            const S loss = detail::backward_impl<S>(spec, pk, batch.data(), count, targets, grads, nullptr);
            if (!std::isfinite(static_cast<double>(loss)))
                throw_train_fault("training diverged (non-finite loss) at epoch " + format_u64(epoch));
            for (std::size_t i = 0; i < grads.p.size(); ++i) {
                if (!grads.p[i].allFinite())
                    throw_train_fault("non-finite gradient in parameter `" + layout[i].name +
                                      "` at epoch " + format_u64(epoch));
            }
            adam.update(pk, grads, cfg);
            train_sq += static_cast<double>(loss) * static_cast<double>(count * spec.output_dim);
            train_vals += count * spec.output_dim;
        }

        const double train_mse = train_sq / static_cast<double>(train_vals);
        const double val_mse = eval_mse<S>(spec, pk, ds, windows.val, cfg.batch_size);
        if (!std::isfinite(val_mse))
            throw_train_fault("training diverged (non-finite validation loss) at epoch " +
                              format_u64(epoch));
        res.history.push_back({epoch, train_mse, val_mse});

        if (val_mse < res.best_val_mse) {
            res.best_val_mse = val_mse;
            res.best_epoch = epoch;
            detail::from_pack<S>(pk, res.weights);
            since_best = 0;
        } else if (++since_best >= cfg.patience) {
            break;
        }
    }
    return res;
}

}  // namespace

TrainResult train(const ModelSpec& spec, const data::Dataset& ds, const data::WindowSet& windows,
                  const TrainConfig& cfg) {
    spec.validate();
    cfg.validate();
    if (ds.features.dim(1) != spec.input_features || ds.window.lookback_steps != spec.input_steps ||
        ds.labels.dim(1) != spec.output_dim)
        throw_invalid("train: model spec does not match the dataset shape");
    if (cfg.precision == Precision::F32) return train_impl<float>(spec, ds, windows, cfg);
    return train_impl<double>(spec, ds, windows, cfg);
}

void write_history_csv(const std::string& path, const std::vector<EpochStats>& history) {
    CsvWriter w(path);
    w.header({"epoch", "train_mse", "val_mse"});
    for (const auto& h : history) {
        w.field(static_cast<std::int64_t>(h.epoch));
        w.field(h.train_mse);
        w.field(h.val_mse);
        w.end_row();
    }
    w.close();
}

}  // namespace flexhome::ml
