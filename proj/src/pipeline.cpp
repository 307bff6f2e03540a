#include "coldplate/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <optional>
#include <random>
#include <sstream>

#include "coldplate/errors.hpp"
#include "coldplate/io.hpp"

namespace coldplate {

void Dataset::validate() const {
    for (std::size_t s = 0; s < samples.size(); ++s) {
        if (!(samples[s].mask.spec() == spec) || !(samples[s].temperature.spec() == spec))
            throw ShapeError("sample " + std::to_string(s) + " is not on the dataset grid");
    }
}

}  // namespace coldplate

namespace coldplate::pipeline {

namespace {

constexpr double kEnergyBalanceLimit = 1e-6;

std::string config_label(std::size_t k, const geometry::ChannelParams& p) {
    return "config #" + std::to_string(k) + " (" + geometry::describe(p) + "): ";
}

std::vector<double> normalized_values(const ScalarField& T, const loss::NormStats& stats) {
    std::vector<double> out(T.size());
    for (std::size_t i = 0; i < T.size(); ++i) out[i] = loss::normalize(T[i], stats);
    return out;
}

nn::Tensor mask_batch(const Dataset& ds, std::span<const std::size_t> indices) {
    const std::size_t cells = ds.spec.size();
    nn::Tensor input({indices.size(), 1, ds.spec.ny, ds.spec.nx});
    auto v = input.values();
    for (std::size_t b = 0; b < indices.size(); ++b) {
        const auto m = ds.samples[indices[b]].mask.values();
        for (std::size_t c = 0; c < cells; ++c) v[b * cells + c] = m[c];
    }
    return input;
}

// Normalised FCN predictions for `indices`, evaluated `batch` samples at a time.
std::vector<std::vector<double>> predict_fcn_norm(const nn::Network& net, const Dataset& ds,
                                                  std::span<const std::size_t> indices, std::size_t batch) {
    const std::size_t cells = ds.spec.size();
    std::vector<std::vector<double>> out;
    out.reserve(indices.size());
    for (std::size_t start = 0; start < indices.size(); start += batch) {
        const auto chunk = indices.subspan(start, std::min(batch, indices.size() - start));
        const nn::Tensor pred = net.predict(mask_batch(ds, chunk));
        for (std::size_t b = 0; b < chunk.size(); ++b) {
            const auto v = pred.values().subspan(b * cells, cells);
            out.emplace_back(v.begin(), v.end());
        }
    }
    return out;
}

struct PhysicsMetrics {
    double l_pde = 0.0;
    double l_bc = 0.0;
};

PhysicsMetrics physics_metrics(const Dataset& ds, std::span<const std::size_t> indices,
                               const std::vector<std::vector<double>>& preds, const loss::NormStats& stats) {
    PhysicsMetrics m;
    for (std::size_t k = 0; k < indices.size(); ++k) {
        const Sample& s = ds.samples[indices[k]];
        m.l_pde += loss::pde_loss(preds[k], stats, s.mask, ds.config).value;
        m.l_bc += loss::bc_loss(preds[k], stats, ds.spec).value;
    }
    m.l_pde /= static_cast<double>(indices.size());
    m.l_bc /= static_cast<double>(indices.size());
    return m;
}

double weighted_total(const loss::LossWeights& w, double mse, double pde, double bc) {
    double total = 0.0;
    if (w.w1 != 0.0) total += w.w1 * mse;
    if (w.w2 != 0.0) total += w.w2 * pde;
    if (w.w3 != 0.0) total += w.w3 * bc;
    return total;
}

bool record_finite(const EpochRecord& r) {
    for (double v : {r.train_mse, r.val_mse, r.l_pde, r.l_bc, r.l_total, r.val_rmse_celsius})
        if (!std::isfinite(v)) return false;
    return true;
}

[[noreturn]] void diverged(int epoch, const std::string& detail) {
    throw DivergenceError(epoch - 1, "training diverged in epoch " + std::to_string(epoch) + ": " + detail +
                                         " (last finite epoch " + std::to_string(epoch - 1) + ")");
}

TrainResult train_pinn_single(const Dataset& ds, const TrainConfig& cfg, const nn::Network* initial,
                              const EpochCallback& on_epoch) {
    if (cfg.pinn_sample >= ds.size()) {
        throw ConfigError("pinn_sample " + std::to_string(cfg.pinn_sample) + " out of range for " +
                          std::to_string(ds.size()) + " samples");
    }
    const Sample& sample = ds.samples[cfg.pinn_sample];
    TrainResult result;
    result.split.train = {cfg.pinn_sample};
    result.split.test = {cfg.pinn_sample};
    const loss::NormStats stats = loss::fit_norm(std::vector<const ScalarField*>{&sample.temperature});
    const auto target = normalized_values(sample.temperature, stats);
    const nn::Tensor coords = model_input(ModelKind::Coordinate, sample.mask);

    nn::Network net = initial ? *initial : nn::make_coordinate_net(cfg.coord, cfg.init_seed());
    if (net.input_features() != 2 || net.output_features() != 1 || net.layers().front().is_conv())
        throw ShapeError("coordinate mode needs a dense network mapping 2 inputs to 1 output");

    nn::AdamState adam;
    adam.lr = cfg.lr;
    const loss::LossWeights weights = cfg.effective_weights();
    const std::vector<std::size_t> only{cfg.pinn_sample};

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        const nn::Tensor out = net.forward(coords);
        const auto tl = loss::total_loss(out.values(), target, stats, sample.mask, ds.config, weights);
        if (!std::isfinite(tl.breakdown.l_total)) diverged(epoch, "non-finite total loss");
        nn::adam_step(adam, net.parameters(), net.backward(nn::Tensor(out.shape(), tl.grad)));

        const nn::Tensor pred = net.predict(coords);
        const std::vector<std::vector<double>> preds{{pred.values().begin(), pred.values().end()}};
        const EvalReport ev = evaluate_normalized(stats, ds, only, preds);
        const PhysicsMetrics pm = physics_metrics(ds, only, preds, stats);
        EpochRecord rec{epoch,     ev.mse_norm, ev.mse_norm, pm.l_pde,
                        pm.l_bc,   weighted_total(weights, ev.mse_norm, pm.l_pde, pm.l_bc),
                        ev.rmse_celsius};
        if (!record_finite(rec)) diverged(epoch, "non-finite metrics");
        result.history.push_back(rec);
        if (on_epoch) on_epoch(rec);
    }
    result.model = Surrogate{std::move(net), ModelKind::Coordinate, stats};
    return result;
}

}  // namespace

// ------------------------------------------------------------- generation

GeneratedDataset generate_dataset(int n, geometry::GeometrySeed seed, const GridSpec& spec,
                                  const PhysicalConfig& config, const GenerateOptions& opts) {
    spec.validate();
    config.validate();
    opts.solver.validate();
    GeneratedDataset out;
    out.params = geometry::sample_configs(n, seed, spec);
    const std::size_t count = out.params.size();

    std::vector<std::optional<Sample>> samples(count);
    out.reports.resize(count);
    std::vector<std::exception_ptr> errors(count);

    auto solve_one = [&](std::size_t k) {
        try {
            ChannelMask mask = geometry::gen_mask(spec, out.params[k]);
            auto [T, report] = thermal::solve_steady_state(mask, config, opts.solver);
            if (config.Q_batt > 0.0 && !(report.energy_balance_error <= kEnergyBalanceLimit)) {
                throw SolverError(SolverError::Kind::NonConvergence,
                                  "energy balance error " + std::to_string(report.energy_balance_error) +
                                      " exceeds 1e-6",
                                  report.final_rel_residual);
            }
            out.reports[k] = report;
            samples[k] = Sample{std::move(mask), std::move(T)};
        } catch (...) {
            errors[k] = std::current_exception();
        }
    };

    if (opts.parallel) {
        const std::int64_t jobs = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic, 1)
        for (std::int64_t k = 0; k < jobs; ++k) solve_one(static_cast<std::size_t>(k));
    } else {
        for (std::size_t k = 0; k < count; ++k) solve_one(k);
    }

    for (std::size_t k = 0; k < count; ++k) {
        if (!errors[k]) continue;
        const std::string label = config_label(k, out.params[k]);
        try {
            std::rethrow_exception(errors[k]);
        } catch (const SolverError& e) {
            throw SolverError(e.kind(), label + e.what(), e.last_residual());
        } catch (const GeometryError& e) {
            throw GeometryError(label + e.what());
        }
    }

    out.dataset.spec = spec;
    out.dataset.config = config;
    out.dataset.samples.reserve(count);
    for (auto& s : samples) out.dataset.samples.push_back(std::move(*s));
    return out;
}

Split split_dataset(std::size_t n, double fraction, std::uint64_t seed) {
    if (n == 0) throw SplitError("cannot split an empty dataset");
    if (!(fraction > 0.0 && fraction < 1.0)) throw SplitError("split fraction must lie in (0, 1)");
    const auto n_train = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
    if (n_train == 0 || n_train >= n) {
        throw SplitError("split of " + std::to_string(n) + " samples at fraction " + std::to_string(fraction) +
                         " leaves one side empty");
    }
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    Split s;
    s.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    s.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
    std::sort(s.train.begin(), s.train.end());
    std::sort(s.test.begin(), s.test.end());
    return s;
}

// ---------------------------------------------------------------- training

std::string to_string(Mode mode) {
    switch (mode) {
        case Mode::DataDriven: return "data";
        case Mode::PIML: return "piml";
        case Mode::PinnSingle: return "pinn-single";
    }
    return "unknown";
}

Mode parse_mode(const std::string& text) {
    if (text == "data") return Mode::DataDriven;
    if (text == "piml") return Mode::PIML;
    if (text == "pinn-single") return Mode::PinnSingle;
    throw ConfigError("unknown training mode '" + text + "' (expected data, piml or pinn-single)");
}

void TrainConfig::validate() const {
    if (epochs < 1) throw ConfigError("epochs must be >= 1");
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (!(split_fraction > 0.0 && split_fraction < 1.0)) throw ConfigError("split_fraction must lie in (0, 1)");
    if (!(lr > 0.0) || !std::isfinite(lr)) throw ConfigError("lr must be > 0");
    weights.validate();
    if (fcn.depth < 1 || fcn.channels < 1 || fcn.kernel % 2 == 0)
        throw ConfigError("FCN architecture needs depth >= 1, channels >= 1 and an odd kernel");
    if (coord.hidden < 1) throw ConfigError("coordinate network needs hidden width >= 1");
}

loss::LossWeights TrainConfig::effective_weights() const {
    return mode == Mode::DataDriven ? loss::LossWeights{1.0, 0.0, 0.0} : weights;
}

TrainResult train(const Dataset& ds, const TrainConfig& cfg, const nn::Network* initial,
                  const EpochCallback& on_epoch) {
    cfg.validate();
    ds.validate();
    if (ds.size() == 0) throw SplitError("cannot train on an empty dataset");
    if (cfg.mode == Mode::PinnSingle) return train_pinn_single(ds, cfg, initial, on_epoch);

    TrainResult result;
    result.split = split_dataset(ds.size(), cfg.split_fraction, cfg.split_seed());
    const Split& split = result.split;

    std::vector<const ScalarField*> train_fields;
    for (std::size_t i : split.train) train_fields.push_back(&ds.samples[i].temperature);
    const loss::NormStats stats = loss::fit_norm(train_fields);

    std::vector<std::vector<double>> targets(ds.size());
    for (std::size_t i : split.train) targets[i] = normalized_values(ds.samples[i].temperature, stats);

    nn::Network net = initial ? *initial : nn::make_fcn(cfg.fcn, cfg.init_seed());
    if (net.input_features() != 1 || net.output_features() != 1 || !net.layers().front().is_conv())
        throw ShapeError("mask mode needs a convolutional network with 1 input and 1 output channel");

    nn::AdamState adam;
    adam.lr = cfg.lr;
    const loss::LossWeights weights = cfg.effective_weights();
    std::mt19937_64 shuffle_rng(cfg.shuffle_seed());
    const std::size_t cells = ds.spec.size();

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        std::vector<std::size_t> order = split.train;
        std::shuffle(order.begin(), order.end(), shuffle_rng);

        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::span<const std::size_t> batch(order.data() + start,
                                                     std::min(cfg.batch_size, order.size() - start));
            const nn::Tensor out = net.forward(mask_batch(ds, batch));
            nn::Tensor grad(out.shape());
            const double inv_b = 1.0 / static_cast<double>(batch.size());
            for (std::size_t b = 0; b < batch.size(); ++b) {
                const std::size_t idx = batch[b];
                const auto tl = loss::total_loss(out.values().subspan(b * cells, cells), targets[idx], stats,
                                                 ds.samples[idx].mask, ds.config, weights);
                if (!std::isfinite(tl.breakdown.l_total))
                    diverged(epoch, "non-finite loss on sample " + std::to_string(idx));
                for (std::size_t c = 0; c < cells; ++c) grad[b * cells + c] = tl.grad[c] * inv_b;
            }
            nn::adam_step(adam, net.parameters(), net.backward(grad));
        }

        const auto train_preds = predict_fcn_norm(net, ds, split.train, cfg.batch_size);
        const auto test_preds = predict_fcn_norm(net, ds, split.test, cfg.batch_size);
        const EvalReport train_eval = evaluate_normalized(stats, ds, split.train, train_preds);
        const EvalReport test_eval = evaluate_normalized(stats, ds, split.test, test_preds);
        const PhysicsMetrics pm = physics_metrics(ds, split.train, train_preds, stats);
        EpochRecord rec{epoch,
                        train_eval.mse_norm,
                        test_eval.mse_norm,
                        pm.l_pde,
                        pm.l_bc,
                        weighted_total(weights, train_eval.mse_norm, pm.l_pde, pm.l_bc),
                        test_eval.rmse_celsius};
        if (!record_finite(rec)) diverged(epoch, "non-finite epoch metrics");
        result.history.push_back(rec);
        if (on_epoch) on_epoch(rec);
    }

    result.model = Surrogate{std::move(net), ModelKind::Fcn, stats};
    return result;
}

// -------------------------------------------------------------- prediction

nn::Tensor model_input(ModelKind kind, const ChannelMask& mask) {
    const GridSpec& spec = mask.spec();
    if (kind == ModelKind::Fcn) {
        nn::Tensor t({1, 1, spec.ny, spec.nx});
        for (std::size_t c = 0; c < spec.size(); ++c) t[c] = mask[c];
        return t;
    }
    nn::Tensor t({spec.size(), 2});
    for (std::size_t j = 0; j < spec.ny; ++j)
        for (std::size_t i = 0; i < spec.nx; ++i) {
            const std::size_t c = spec.index(i, j);
            t[2 * c] = (static_cast<double>(i) + 0.5) / static_cast<double>(spec.nx);
            t[2 * c + 1] = (static_cast<double>(j) + 0.5) / static_cast<double>(spec.ny);
        }
    return t;
}

namespace {

std::vector<double> predict_norm(const Surrogate& model, const ChannelMask& mask) {
    const nn::Tensor out = model.network.predict(model_input(model.kind, mask));
    if (out.size() != mask.size())
        throw ShapeError("model output has " + std::to_string(out.size()) + " values for " +
                         std::to_string(mask.size()) + " cells");
    return {out.values().begin(), out.values().end()};
}

}  // namespace

ScalarField predict(const Surrogate& model, const ChannelMask& mask) {
    const auto norm = predict_norm(model, mask);
    ScalarField T(mask.spec());
    for (std::size_t c = 0; c < norm.size(); ++c) T[c] = loss::denormalize(norm[c], model.stats);
    return T;
}

// -------------------------------------------------------------- evaluation

EvalReport evaluate_normalized(const loss::NormStats& stats, const Dataset& ds,
                               std::span<const std::size_t> indices,
                               const std::vector<std::vector<double>>& preds) {
    if (preds.size() != indices.size())
        throw ShapeError("evaluation got " + std::to_string(preds.size()) + " predictions for " +
                         std::to_string(indices.size()) + " samples");
    if (indices.empty()) throw SplitError("nothing to evaluate");
    EvalReport rep;
    double total_sq = 0.0;
    std::size_t total_cells = 0;
    for (std::size_t k = 0; k < indices.size(); ++k) {
        if (indices[k] >= ds.size()) throw std::out_of_range("sample index out of range");
        const ScalarField& T = ds.samples[indices[k]].temperature;
        if (preds[k].size() != T.size()) throw ShapeError("prediction does not match the dataset grid");
        double sq = 0.0, worst = 0.0;
        for (std::size_t c = 0; c < T.size(); ++c) {
            const double d = preds[k][c] - loss::normalize(T[c], stats);
            sq += d * d;
            worst = std::max(worst, std::abs(d));
        }
        SampleMetrics m;
        m.index = indices[k];
        m.mse_norm = sq / static_cast<double>(T.size());
        m.rmse_celsius = stats.sigma * std::sqrt(m.mse_norm);
        m.max_abs_err_celsius = stats.sigma * worst;
        rep.samples.push_back(m);
        total_sq += sq;
        total_cells += T.size();
        rep.max_abs_err_celsius = std::max(rep.max_abs_err_celsius, m.max_abs_err_celsius);
    }
    rep.mse_norm = total_sq / static_cast<double>(total_cells);
    rep.mse_celsius2 = stats.sigma * stats.sigma * rep.mse_norm;
    rep.rmse_celsius = stats.sigma * std::sqrt(rep.mse_norm);
    return rep;
}

EvalReport evaluate_predictions(const loss::NormStats& stats, const Dataset& ds,
                                std::span<const std::size_t> indices, const std::vector<ScalarField>& predictions) {
    std::vector<std::vector<double>> norm;
    norm.reserve(predictions.size());
    for (const auto& p : predictions) norm.push_back(normalized_values(p, stats));
    return evaluate_normalized(stats, ds, indices, norm);
}

EvalReport evaluate(const Surrogate& model, const Dataset& ds, std::span<const std::size_t> indices) {
    ds.validate();
    std::vector<std::vector<double>> preds;
    preds.reserve(indices.size());
    for (std::size_t idx : indices) {
        if (idx >= ds.size()) throw std::out_of_range("sample index out of range");
        preds.push_back(predict_norm(model, ds.samples[idx].mask));
    }
    return evaluate_normalized(model.stats, ds, indices, preds);
}

// -------------------------------------------------------------- comparison

ComparisonReport compare_experiment(const Dataset& ds, const TrainConfig& base, const EpochCallback& on_epoch) {
    if (ds.size() < 10) throw ConfigError("comparison needs at least 10 samples, dataset has " +
                                          std::to_string(ds.size()));
    base.validate();
    ComparisonReport rep;
    rep.config = base;

    TrainConfig dd_cfg = base;
    dd_cfg.mode = Mode::DataDriven;
    TrainConfig piml_cfg = base;
    piml_cfg.mode = Mode::PIML;

    const nn::Network initial = nn::make_fcn(base.fcn, base.init_seed());
    const TrainResult dd = train(ds, dd_cfg, &initial, on_epoch);
    const TrainResult piml = train(ds, piml_cfg, &initial, on_epoch);

    rep.split = dd.split;
    rep.data_curve = dd.history;
    rep.piml_curve = piml.history;
    rep.compare_epoch = std::min(10, base.epochs);
    const EpochRecord& d = dd.history[static_cast<std::size_t>(rep.compare_epoch - 1)];
    const EpochRecord& p = piml.history[static_cast<std::size_t>(rep.compare_epoch - 1)];
    rep.data_val_mse = d.val_mse;
    rep.piml_val_mse = p.val_mse;
    rep.data_train_mse = d.train_mse;
    rep.piml_train_mse = p.train_mse;
    rep.improvement_pct = 100.0 * (d.val_mse - p.val_mse) / d.val_mse;
    rep.train_improvement_pct = 100.0 * (d.train_mse - p.train_mse) / d.train_mse;
    rep.piml_epoch1_val_mse = piml.history.front().val_mse;

    rep.data_eval = evaluate(dd.model, ds, rep.split.test);
    rep.piml_eval = evaluate(piml.model, ds, rep.split.test);
    for (std::size_t idx : rep.split.test) {
        const Sample& s = ds.samples[idx];
        auto error_map = [&](const Surrogate& m) {
            ScalarField err = predict(m, s.mask);
            for (std::size_t c = 0; c < err.size(); ++c) err[c] -= s.temperature[c];
            return err;
        };
        rep.data_error_maps.push_back(error_map(dd.model));
        rep.piml_error_maps.push_back(error_map(piml.model));
    }
    return rep;
}

std::string comparison_summary(const ComparisonReport& r) {
    std::ostringstream os;
    os.precision(17);
    os << "compare_epoch=" << r.compare_epoch << '\n'
       << "epochs=" << r.config.epochs << '\n'
       << "train_samples=" << r.split.train.size() << '\n'
       << "test_samples=" << r.split.test.size() << '\n'
       << "data_val_mse=" << r.data_val_mse << '\n'
       << "piml_val_mse=" << r.piml_val_mse << '\n'
       << "epoch10_improvement_pct=" << r.improvement_pct << '\n'
       << "data_train_mse=" << r.data_train_mse << '\n'
       << "piml_train_mse=" << r.piml_train_mse << '\n'
       << "train_improvement_pct=" << r.train_improvement_pct << '\n'
       << "piml_epoch1_val_mse=" << r.piml_epoch1_val_mse << '\n'
       << "data_final_val_mse_celsius2=" << r.data_eval.mse_celsius2 << '\n'
       << "piml_final_val_mse_celsius2=" << r.piml_eval.mse_celsius2 << '\n'
       << "data_final_val_rmse_celsius=" << r.data_eval.rmse_celsius << '\n'
       << "piml_final_val_rmse_celsius=" << r.piml_eval.rmse_celsius << '\n'
       << "reference_piml_mse_epoch10=5.66\n"
       << "reference_data_mse_epoch10=11.12\n"
       << "reference_improvement_pct=49.1\n";
    return os.str();
}

void write_comparison_artifacts(const ComparisonReport& r, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir / "error_maps", ec);
    if (ec) throw IoError("cannot create " + (dir / "error_maps").string() + ": " + ec.message());
    io::write_curves_csv(dir / "data_curves.csv", r.data_curve);
    io::write_curves_csv(dir / "piml_curves.csv", r.piml_curve);

    const std::string summary = comparison_summary(r);
    io::write_file(dir / "summary.txt",
                   std::span(reinterpret_cast<const std::uint8_t*>(summary.data()), summary.size()));

    std::ostringstream table;
    table.precision(17);
    table << "index,data_mse_norm,data_rmse_celsius,data_max_abs_err_celsius,"
             "piml_mse_norm,piml_rmse_celsius,piml_max_abs_err_celsius\n";
    for (std::size_t k = 0; k < r.split.test.size(); ++k) {
        const auto& d = r.data_eval.samples[k];
        const auto& p = r.piml_eval.samples[k];
        table << d.index << ',' << d.mse_norm << ',' << d.rmse_celsius << ',' << d.max_abs_err_celsius << ','
              << p.mse_norm << ',' << p.rmse_celsius << ',' << p.max_abs_err_celsius << '\n';
    }
    const std::string t = table.str();
    io::write_file(dir / "test_metrics.csv", std::span(reinterpret_cast<const std::uint8_t*>(t.data()), t.size()));

    // both models share one symmetric colour range so maps are comparable
    double worst = 0.0;
    for (const auto* maps : {&r.data_error_maps, &r.piml_error_maps})
        for (const auto& m : *maps) worst = std::max({worst, std::abs(m.min()), std::abs(m.max())});
    const io::ColorRange range = worst > 0.0 ? io::ColorRange{io::RangeMode::Fixed, -worst, worst} : io::ColorRange{};
    for (std::size_t k = 0; k < r.split.test.size(); ++k) {
        const std::string idx = std::to_string(r.split.test[k]);
        io::export_heatmap_ppm(dir / "error_maps" / ("data_" + idx + ".ppm"), r.data_error_maps[k], range);
        io::export_heatmap_ppm(dir / "error_maps" / ("piml_" + idx + ".ppm"), r.piml_error_maps[k], range);
    }
}

}  // namespace coldplate::pipeline
