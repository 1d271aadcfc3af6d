#include "flexhome/eval/evaluate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "flexhome/common/csv.hpp"
#include "flexhome/common/errors.hpp"
#include "flexhome/common/rng.hpp"
#include "flexhome/common/strconv.hpp"

namespace flexhome::eval {

EvalReport evaluate(const ml::Weights& w, const data::Dataset& ds,
                    const std::vector<std::size_t>& test_anchors, std::int64_t horizon_min) {
    if (test_anchors.empty()) throw_invalid("evaluate: empty test set");
    const std::size_t out_dim = ds.labels.dim(1);
    if (w.spec.output_dim != out_dim) throw_invalid("evaluate: model/label output dim mismatch");

    EvalReport r;
    r.task = data::task_name(ds.task);
    r.model = ml::model_kind_name(w.spec.kind);
    r.horizon_min = horizon_min;
    r.output_names = ds.label_cols;
    r.per_output_mse.assign(out_dim, 0.0);
    r.n = test_anchors.size();

    const std::size_t batch_size = 512;
    double sq_sum = 0;
    ml::Tensor batch, targets;
    for (std::size_t i0 = 0; i0 < test_anchors.size(); i0 += batch_size) {
        const std::size_t count = std::min(batch_size, test_anchors.size() - i0);
        data::gather_windows(ds.features, ds.labels, test_anchors, i0, count, ds.window, batch, targets);
        ml::Tensor preds = ml::forward(w, batch);
        for (std::size_t i = 0; i < count; ++i) {
            for (std::size_t c = 0; c < out_dim; ++c) {
                const double p = ds.label_norm.invert_value(c, preds.at2(i, c));
                const double y = ds.label_norm.invert_value(c, targets.at2(i, c));
                const double e = p - y;
                sq_sum += e * e;
                r.per_output_mse[c] += e * e;
                const double a = std::fabs(e);
                if (a > r.max_abs_err) r.max_abs_err = a;
            }
        }
    }
    const double n_vals = static_cast<double>(r.n * out_dim);
    r.mse = sq_sum / n_vals;
    r.rmse = std::sqrt(r.mse);
    for (auto& v : r.per_output_mse) v /= static_cast<double>(r.n);
    return r;
}

std::uint64_t sweep_cell_seed(std::uint64_t base_seed, ml::ModelKind kind, std::int64_t horizon_min) {
    return mix_seed(base_seed, std::string("sweep/") + ml::model_kind_name(kind),
                    static_cast<std::uint64_t>(horizon_min));
}

std::vector<SweepCell> horizon_sweep(const data::Dataset& ds, const SweepOptions& opts) {
    if (opts.kinds.empty() || opts.horizons_min.empty())
        throw_invalid("horizon_sweep: need at least one model kind and one horizon");
    if (ds.step_minutes <= 0) throw_invalid("horizon_sweep: dataset step_minutes must be > 0");

    std::vector<SweepCell> cells;
    for (auto kind : opts.kinds)
        for (auto h : opts.horizons_min) {
            SweepCell c;
            c.kind = kind;
            c.horizon_min = h;
            cells.push_back(c);
        }

    auto run_cell = [&](SweepCell& cell) {
        try {
            if (cell.horizon_min <= 0 || cell.horizon_min % ds.step_minutes != 0)
                throw_invalid("horizon " + format_i64(cell.horizon_min) +
                              " min is not a multiple of the dataset step (" +
                              format_i64(ds.step_minutes) + " min)");
            data::WindowSpec wspec = ds.window;
            wspec.horizon_steps = static_cast<std::size_t>(cell.horizon_min / ds.step_minutes);
            data::WindowSet windows = data::make_windows(ds.features.dim(0), wspec, ds.split);

            ml::ModelSpec spec = ml::default_spec(cell.kind, wspec.lookback_steps, ds.features.dim(1),
                                                  ds.labels.dim(1));
            if (opts.hidden_override > 0 && cell.kind != ml::ModelKind::Linear)
                spec.hidden = opts.hidden_override;

            ml::TrainConfig tc = opts.train;
            tc.seed = sweep_cell_seed(opts.train.seed, cell.kind, cell.horizon_min);

            data::Dataset cell_ds = ds;  // shallow-ish copy: tensors shared by value
            cell_ds.window = wspec;
            ml::TrainResult tr = ml::train(spec, cell_ds, windows, tc);
            cell.report = evaluate(tr.weights, cell_ds, windows.test, cell.horizon_min);
            cell.ok = true;
        } catch (const Error& e) {
            cell.error = std::string(error_category_name(e.category())) + ": " + e.what();
        } catch (const std::exception& e) {
            cell.error = std::string("internal: ") + e.what();
        }
    };

    const int threads = std::max(1, opts.threads);
    if (threads == 1 || cells.size() == 1) {
        for (auto& c : cells) run_cell(c);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        const std::size_t n_workers = std::min(static_cast<std::size_t>(threads), cells.size());
        pool.reserve(n_workers);
        for (std::size_t ti = 0; ti < n_workers; ++ti) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= cells.size()) return;
                    run_cell(cells[i]);
                }
            });
        }
        for (auto& th : pool) th.join();
    }
    return cells;
}

void write_report_csv(const std::string& path, const std::vector<EvalReport>& reports) {
    CsvWriter w(path);
    w.header({"task", "model", "horizon_min", "mse", "rmse", "max_abs_err", "n"});
    for (const auto& r : reports) {
        w.field(r.task);
        w.field(r.model);
        w.field(r.horizon_min);
        w.field(r.mse);
        w.field(r.rmse);
        w.field(r.max_abs_err);
        w.field(static_cast<std::int64_t>(r.n));
        w.end_row();
    }
    w.close();
}

void write_report_long_csv(const std::string& path, const std::vector<EvalReport>& reports) {
    CsvWriter w(path);
    w.header({"task", "model", "horizon_min", "output", "metric", "value"});
    auto row = [&](const EvalReport& r, const std::string& output, const std::string& metric, double v) {
        w.field(r.task);
        w.field(r.model);
        w.field(r.horizon_min);
        w.field(output);
        w.field(metric);
        w.field(v);
        w.end_row();
    };
    for (const auto& r : reports) {
        row(r, "all", "mse", r.mse);
        row(r, "all", "rmse", r.rmse);
        row(r, "all", "max_abs_err", r.max_abs_err);
        for (std::size_t c = 0; c < r.per_output_mse.size(); ++c) {
            row(r, r.output_names[c], "mse", r.per_output_mse[c]);
            row(r, r.output_names[c], "rmse", std::sqrt(r.per_output_mse[c]));
        }
    }
    w.close();
}

}  // namespace flexhome::eval
