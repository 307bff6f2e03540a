#include "coldplate/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <sstream>
#include <vector>

#include "coldplate/errors.hpp"
#include "coldplate/geometry.hpp"
#include "coldplate/io.hpp"
#include "coldplate/pipeline.hpp"
#include "coldplate/run_config.hpp"
#include "coldplate/thermal.hpp"

namespace coldplate::cli {

namespace {

namespace fs = std::filesystem;

struct CommonOptions {
    std::string config_path;
    std::vector<std::string> overrides;

    void attach(CLI::App* app) {
        app->add_option("--config", config_path, "flat key=value settings file");
        app->add_option("--set", overrides, "override a config key (key=value), repeatable");
    }

    RunConfig load() const {
        RunConfig rc;
        if (!config_path.empty()) rc.load_file(config_path);
        for (const auto& o : overrides) rc.set_assignment(o);
        return rc;
    }
};

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

int parse_int_field(const std::string& key, const std::string& value) {
    int out = 0;
    auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || p != value.data() + value.size())
        throw ConfigError("mask parameter '" + key + "': '" + value + "' is not an integer");
    return out;
}

void write_text(const fs::path& path, const std::string& text) {
    io::write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::vector<std::size_t> all_indices(std::size_t n) {
    std::vector<std::size_t> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = i;
    return v;
}

// ------------------------------------------------------------- subcommands

struct GenerateCmd {
    CommonOptions common;
    int n = 0;
    std::uint64_t seed = 0;
    std::string out_path;
    bool serial = false;

    int run(std::ostream& out, std::ostream& err) const {
        if (n < 1) throw ConfigError("--n must be >= 1");
        const RunConfig rc = common.load();
        const GridSpec spec = rc.grid();
        pipeline::GenerateOptions opts;
        opts.solver = rc.solver;
        opts.parallel = !serial;
        err << "generating " << n << " samples on a " << spec.nx << "x" << spec.ny << " grid\n";
        const auto gen = pipeline::generate_dataset(n, geometry::GeometrySeed{seed}, spec, rc.physical, opts);
        out << "sample,layout,coverage,iterations,rel_residual,energy_balance_error\n";
        for (std::size_t k = 0; k < gen.reports.size(); ++k) {
            const auto& r = gen.reports[k];
            out << k << ',' << geometry::describe(gen.params[k]) << ','
                << fmt(geometry::mask_coverage(gen.dataset.samples[k].mask)) << ',' << r.iterations << ','
                << fmt(r.final_rel_residual) << ',' << fmt(r.energy_balance_error) << '\n';
        }
        io::write_dataset(out_path, gen.dataset);
        err << "wrote " << out_path << '\n';
        return kOk;
    }
};

struct SolveCmd {
    CommonOptions common;
    std::string mask;
    std::string out_field;
    std::string out_image;

    int run(std::ostream& out, std::ostream& err) const {
        const RunConfig rc = common.load();
        const GridSpec spec = rc.grid();
        const ChannelMask m = parse_mask_argument(mask, spec);
        const auto [T, report] = thermal::solve_steady_state(m, rc.physical, rc.solver);
        out << "min_celsius=" << fmt(T.min()) << '\n'
            << "max_celsius=" << fmt(T.max()) << '\n'
            << "mean_celsius=" << fmt(T.mean()) << '\n'
            << "spread_celsius=" << fmt(T.max() - T.min()) << '\n'
            << "iterations=" << report.iterations << '\n'
            << "rel_residual=" << fmt(report.final_rel_residual) << '\n'
            << "energy_balance_error=" << fmt(report.energy_balance_error) << '\n'
            << "coverage=" << fmt(geometry::mask_coverage(m)) << '\n';
        if (!out_field.empty()) {
            io::export_field_csv(out_field, T);
            err << "wrote " << out_field << '\n';
        }
        if (!out_image.empty()) {
            io::export_heatmap_ppm(out_image, T);
            err << "wrote " << out_image << '\n';
        }
        return kOk;
    }
};

struct TrainOverrides {
    std::optional<int> epochs;
    std::optional<double> lr;
    std::optional<std::size_t> batch;
    std::optional<double> w1, w2, w3;
    std::optional<std::uint64_t> seed;

    void attach(CLI::App* app) {
        app->add_option("--epochs", epochs, "training epochs");
        app->add_option("--lr", lr, "Adam learning rate");
        app->add_option("--batch", batch, "mini-batch size");
        app->add_option("--w1", w1, "data loss weight");
        app->add_option("--w2", w2, "PDE residual loss weight");
        app->add_option("--w3", w3, "boundary loss weight");
        app->add_option("--seed", seed, "split / init / shuffle seed");
    }

    void apply(pipeline::TrainConfig& t) const {
        if (epochs) t.epochs = *epochs;
        if (lr) t.lr = *lr;
        if (batch) t.batch_size = *batch;
        if (w1) t.weights.w1 = *w1;
        if (w2) t.weights.w2 = *w2;
        if (w3) t.weights.w3 = *w3;
        if (seed) t.seed = *seed;
    }
};

void check_dataset_grid(const RunConfig& rc, const Dataset& ds) {
    if ((rc.explicitly_set("nx") && rc.grid().nx != ds.spec.nx) ||
        (rc.explicitly_set("ny") && rc.grid().ny != ds.spec.ny)) {
        const GridSpec g = rc.grid();
        throw ConfigError("grid mismatch: configuration says " + std::to_string(g.nx) + "x" + std::to_string(g.ny) +
                          ", data is " + std::to_string(ds.spec.nx) + "x" + std::to_string(ds.spec.ny));
    }
}

std::string progress_line(const EpochRecord& r) {
    std::ostringstream os;
    os << "epoch " << r.epoch << " train_mse " << r.train_mse << " val_mse " << r.val_mse << " l_pde " << r.l_pde
       << " l_bc " << r.l_bc << " l_total " << r.l_total;
    return os.str();
}

struct TrainCmd {
    CommonOptions common;
    TrainOverrides overrides;
    std::string data;
    std::string mode;
    std::string out_model;
    std::string curves;

    int run(std::ostream& out, std::ostream& err) const {
        RunConfig rc = common.load();
        if (!mode.empty()) rc.train.mode = pipeline::parse_mode(mode);
        overrides.apply(rc.train);
        rc.train.validate();
        const Dataset ds = io::read_dataset(data);
        check_dataset_grid(rc, ds);

        std::vector<EpochRecord> seen;
        pipeline::TrainResult result;
        try {
            result = pipeline::train(ds, rc.train, nullptr, [&](const EpochRecord& r) {
                seen.push_back(r);
                err << progress_line(r) << '\n';
            });
        } catch (const DivergenceError&) {
            if (!seen.empty() && !curves.empty()) io::write_curves_csv(curves, seen);
            throw;
        }
        io::write_model(out_model, result.model);
        if (!curves.empty()) io::write_curves_csv(curves, result.history);
        const EpochRecord& last = result.history.back();
        out << "mode=" << pipeline::to_string(rc.train.mode) << '\n'
            << "epochs=" << last.epoch << '\n'
            << "mu=" << fmt(result.model.stats.mu) << '\n'
            << "sigma=" << fmt(result.model.stats.sigma) << '\n'
            << "final_train_mse=" << fmt(last.train_mse) << '\n'
            << "final_val_mse=" << fmt(last.val_mse) << '\n'
            << "final_val_rmse_celsius=" << fmt(last.val_rmse_celsius) << '\n';
        return kOk;
    }
};

struct EvalCmd {
    CommonOptions common;
    std::string model_path;
    std::string data;
    std::string split = "test";
    std::string report;
    std::string error_maps;
    std::optional<std::uint64_t> seed;

    int run(std::ostream& out, std::ostream& err) const {
        RunConfig rc = common.load();
        if (seed) rc.train.seed = *seed;
        const Surrogate model = io::read_model(model_path);
        const Dataset ds = io::read_dataset(data);
        check_dataset_grid(rc, ds);
        const std::size_t want_inputs = model.kind == ModelKind::Fcn ? 1 : 2;
        if (model.network.input_features() != want_inputs)
            throw ConfigError("model input width does not match its mode");

        std::vector<std::size_t> indices;
        if (split == "all") {
            indices = all_indices(ds.size());
        } else {
            const auto s = pipeline::split_dataset(ds.size(), rc.train.split_fraction, rc.train.split_seed());
            if (split == "train") indices = s.train;
            else if (split == "test") indices = s.test;
            else throw ConfigError("--split must be train, test or all");
        }

        const auto ev = pipeline::evaluate(model, ds, indices);
        if (!report.empty()) {
            std::ostringstream os;
            os << std::setprecision(17) << "index,mse_norm,rmse_celsius,max_abs_err_celsius\n";
            for (const auto& m : ev.samples)
                os << m.index << ',' << m.mse_norm << ',' << m.rmse_celsius << ',' << m.max_abs_err_celsius << '\n';
            write_text(report, os.str());
            err << "wrote " << report << '\n';
        }
        if (!error_maps.empty()) {
            std::error_code ec;
            fs::create_directories(error_maps, ec);
            if (ec) throw IoError("cannot create " + error_maps + ": " + ec.message());
            for (std::size_t idx : indices) {
                ScalarField e = pipeline::predict(model, ds.samples[idx].mask);
                for (std::size_t c = 0; c < e.size(); ++c) e[c] -= ds.samples[idx].temperature[c];
                const double worst = std::max(std::abs(e.min()), std::abs(e.max()));
                const io::ColorRange range =
                    worst > 0.0 ? io::ColorRange{io::RangeMode::Fixed, -worst, worst} : io::ColorRange{};
                io::export_heatmap_ppm(fs::path(error_maps) / ("error_" + std::to_string(idx) + ".ppm"), e, range);
            }
        }
        out << "samples=" << indices.size() << '\n'
            << "mse_norm=" << fmt(ev.mse_norm) << '\n'
            << "mse_celsius2=" << fmt(ev.mse_celsius2) << '\n'
            << "rmse_celsius=" << fmt(ev.rmse_celsius) << '\n'
            << "max_abs_err_celsius=" << fmt(ev.max_abs_err_celsius) << '\n';
        return kOk;
    }
};

struct CompareCmd {
    CommonOptions common;
    TrainOverrides overrides;
    std::string data;
    std::string out_dir;

    int run(std::ostream& out, std::ostream& err) const {
        RunConfig rc = common.load();
        overrides.apply(rc.train);
        rc.train.validate();
        const Dataset ds = io::read_dataset(data);
        check_dataset_grid(rc, ds);
        int run_index = 0;
        const auto rep = pipeline::compare_experiment(ds, rc.train, [&](const EpochRecord& r) {
            if (r.epoch == 1) ++run_index;
            err << (run_index == 1 ? "[data] " : "[piml] ") << progress_line(r) << '\n';
        });
        pipeline::write_comparison_artifacts(rep, out_dir);
        out << pipeline::comparison_summary(rep);
        return kOk;
    }
};

int exit_code_for_current_exception(std::ostream& err) {
    try {
        throw;
    } catch (const DivergenceError& e) {
        err << "error: " << e.what() << '\n';
        return kDivergence;
    } catch (const SolverError& e) {
        err << "error: " << e.what() << '\n';
        return kSolver;
    } catch (const FormatError& e) {
        err << "error: " << e.what() << '\n';
        return kIo;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIo;
    } catch (const Error& e) {
        // configuration, geometry, grid, shape, split and stats problems
        err << "error: " << e.what() << '\n';
        return kConfig;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kInternal;
    }
}

}  // namespace

ChannelMask parse_mask_argument(const std::string& text, const GridSpec& spec) {
    if (text == "ones") return ChannelMask(spec, 1);
    if (text == "zeros") return ChannelMask(spec, 0);

    const auto colon = text.find(':');
    if (colon != std::string::npos) {
        const std::string family = text.substr(0, colon);
        geometry::ChannelParams p;
        if (family == "straight") p.family = geometry::Family::StraightParallel;
        else if (family == "serpentine") p.family = geometry::Family::Serpentine;
        else if (family == "border") p.family = geometry::Family::BorderLoop;
        if (family == "straight" || family == "serpentine" || family == "border") {
            std::istringstream fields(text.substr(colon + 1));
            std::string item;
            while (std::getline(fields, item, ',')) {
                const auto eq = item.find('=');
                if (eq == std::string::npos) throw ConfigError("mask parameter '" + item + "' is not key=value");
                const std::string key = item.substr(0, eq), value = item.substr(eq + 1);
                if (key == "count") p.channel_count = parse_int_field(key, value);
                else if (key == "width") p.width_cells = parse_int_field(key, value);
                else if (key == "margin") p.margin_cells = parse_int_field(key, value);
                else throw ConfigError("unknown mask parameter '" + key + "'");
            }
            return geometry::gen_mask(spec, p);
        }
    }

    const io::CsvGrid grid = io::read_grid_csv(text);
    if (grid.nx != spec.nx || grid.ny != spec.ny) {
        throw ConfigError("mask CSV is " + std::to_string(grid.nx) + "x" + std::to_string(grid.ny) +
                          ", configured grid is " + std::to_string(spec.nx) + "x" + std::to_string(spec.ny));
    }
    std::vector<std::uint8_t> bits(grid.values.size());
    for (std::size_t c = 0; c < bits.size(); ++c) {
        const double v = grid.values[c];
        if (v != 0.0 && v != 1.0) throw GeometryError("mask CSV entries must be 0 or 1");
        bits[c] = v == 1.0 ? 1 : 0;
    }
    return ChannelMask(spec, std::move(bits));
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Cold-plate thermal surrogate workbench"};
    app.require_subcommand(1);

    GenerateCmd gen;
    auto* g = app.add_subcommand("generate", "generate a dataset of channel layouts and solved fields");
    g->add_option("--n", gen.n, "number of samples")->required();
    g->add_option("--seed", gen.seed, "geometry sampling seed")->required();
    g->add_option("--out", gen.out_path, "output dataset file (.pctd)")->required();
    g->add_flag("--serial", gen.serial, "solve samples one at a time");
    gen.common.attach(g);

    SolveCmd solve;
    auto* s = app.add_subcommand("solve", "solve one channel layout");
    s->add_option("--mask", solve.mask, "ones | zeros | <family>:count=..,width=..,margin=.. | mask CSV")->required();
    s->add_option("--out-field", solve.out_field, "temperature CSV");
    s->add_option("--out-image", solve.out_image, "temperature heatmap (PPM)");
    solve.common.attach(s);

    TrainCmd tr;
    auto* t = app.add_subcommand("train", "train a surrogate");
    t->add_option("--data", tr.data, "dataset file")->required();
    t->add_option("--mode", tr.mode, "data | piml | pinn-single");
    t->add_option("--out-model", tr.out_model, "output model file (.pctm)")->required();
    t->add_option("--curves", tr.curves, "per-epoch curves CSV");
    tr.overrides.attach(t);
    tr.common.attach(t);

    EvalCmd ev;
    auto* e = app.add_subcommand("eval", "evaluate a trained surrogate");
    e->add_option("--model", ev.model_path, "model file")->required();
    e->add_option("--data", ev.data, "dataset file")->required();
    e->add_option("--split", ev.split, "train | test | all");
    e->add_option("--report", ev.report, "per-sample metrics CSV");
    e->add_option("--error-maps", ev.error_maps, "directory for per-sample error heatmaps");
    e->add_option("--seed", ev.seed, "seed used to reproduce the training split");
    ev.common.attach(e);

    CompareCmd cmp;
    auto* c = app.add_subcommand("compare", "train data-driven and physics-informed models and compare them");
    c->add_option("--data", cmp.data, "dataset file")->required();
    c->add_option("--out-dir", cmp.out_dir, "output directory")->required();
    cmp.overrides.attach(c);
    cmp.common.attach(c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& pe) {
        err << "usage error: " << pe.what() << '\n';
        return kConfig;
    }

    try {
        if (*g) return gen.run(out, err);
        if (*s) return solve.run(out, err);
        if (*t) return tr.run(out, err);
        if (*e) return ev.run(out, err);
        if (*c) return cmp.run(out, err);
    } catch (...) {
        return exit_code_for_current_exception(err);
    }
    return kInternal;
}

}  // namespace coldplate::cli
