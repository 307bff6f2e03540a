#include "coldplate/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include "coldplate/errors.hpp"

namespace coldplate {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out))
        throw ConfigError("key '" + key + "': '" + v + "' is not a number");
    return out;
}

template <typename Int>
Int parse_int(const std::string& key, const std::string& v) {
    Int out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size())
        throw ConfigError("key '" + key + "': '" + v + "' is not a valid non-negative integer");
    return out;
}

}  // namespace

const std::vector<std::string>& RunConfig::known_keys() {
    static const std::vector<std::string> keys{
        "nx",      "ny",         "dx",          "dy",      "k",           "thickness",   "h_coeff",
        "h_bg",    "t_coolant",  "q_batt",      "lx",      "ly",          "rel_tol",     "max_iter",
        "preconditioner",        "mode",        "epochs",  "lr",          "batch_size",  "split_fraction",
        "w1",      "w2",         "w3",          "seed",    "channels",    "kernel",      "depth",
        "pinn_hidden",           "pinn_layers", "pinn_sample"};
    return keys;
}

void RunConfig::set(const std::string& raw_key, const std::string& raw_value) {
    const std::string key = trim(raw_key);
    const std::string v = trim(raw_value);
    auto d = [&] { return parse_double(key, v); };
    auto u = [&] { return parse_int<std::size_t>(key, v); };

    if (key == "nx") nx_ = u();
    else if (key == "ny") ny_ = u();
    else if (key == "dx") dx_ = d();
    else if (key == "dy") dy_ = d();
    else if (key == "k") physical.k = d();
    else if (key == "thickness") physical.t = d();
    else if (key == "h_coeff") physical.h_coeff = d();
    else if (key == "h_bg") physical.h_bg = d();
    else if (key == "t_coolant") physical.T_coolant = d();
    else if (key == "q_batt") physical.Q_batt = d();
    else if (key == "lx") physical.Lx = d();
    else if (key == "ly") physical.Ly = d();
    else if (key == "rel_tol") solver.rel_tol = d();
    else if (key == "max_iter") solver.max_iter = u();
    else if (key == "preconditioner") {
        if (v == "none") solver.preconditioner = thermal::Preconditioner::None;
        else if (v == "jacobi") solver.preconditioner = thermal::Preconditioner::Jacobi;
        else throw ConfigError("key 'preconditioner': expected none or jacobi, got '" + v + "'");
    } else if (key == "mode") train.mode = pipeline::parse_mode(v);
    else if (key == "epochs") train.epochs = parse_int<int>(key, v);
    else if (key == "lr") train.lr = d();
    else if (key == "batch_size") train.batch_size = u();
    else if (key == "split_fraction") train.split_fraction = d();
    else if (key == "w1") train.weights.w1 = d();
    else if (key == "w2") train.weights.w2 = d();
    else if (key == "w3") train.weights.w3 = d();
    else if (key == "seed") train.seed = parse_int<std::uint64_t>(key, v);
    else if (key == "channels") train.fcn.channels = u();
    else if (key == "kernel") train.fcn.kernel = u();
    else if (key == "depth") train.fcn.depth = u();
    else if (key == "pinn_hidden") train.coord.hidden = u();
    else if (key == "pinn_layers") train.coord.hidden_layers = u();
    else if (key == "pinn_sample") train.pinn_sample = u();
    else throw ConfigError("unknown config key '" + key + "'");
    set_keys_.insert(key);
}

void RunConfig::set_assignment(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key=value, got '" + assignment + "'");
    set(assignment.substr(0, eq), assignment.substr(eq + 1));
}

void RunConfig::load_file(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open config file " + path.string());
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        try {
            set_assignment(t);
        } catch (const ConfigError& e) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
}

GridSpec RunConfig::grid() const {
    physical.validate();
    GridSpec spec = grid_for_plate(physical, nx_, ny_);
    if (dx_) spec.dx = *dx_;
    if (dy_) spec.dy = *dy_;
    spec.validate();
    check_tiles_plate(spec, physical);
    return spec;
}

}  // namespace coldplate
