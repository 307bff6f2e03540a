#include "coldplate/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <stdexcept>
#include <string>

#include "coldplate/errors.hpp"

namespace coldplate::io {

namespace {

constexpr std::array<char, 4> kDatasetMagic{'P', 'C', 'T', 'D'};
constexpr std::array<char, 4> kModelMagic{'P', 'C', 'T', 'M'};

class ByteWriter {
public:
    void put_u8(std::uint8_t v) { bytes_.push_back(v); }
    void put_u32(std::uint32_t v) {
        for (int s = 0; s < 32; s += 8) bytes_.push_back(static_cast<std::uint8_t>(v >> s));
    }
    void put_u64(std::uint64_t v) {
        for (int s = 0; s < 64; s += 8) bytes_.push_back(static_cast<std::uint8_t>(v >> s));
    }
    void put_f64(double v) { put_u64(std::bit_cast<std::uint64_t>(v)); }
    void put_magic(const std::array<char, 4>& m) {
        for (char c : m) bytes_.push_back(static_cast<std::uint8_t>(c));
    }
    void put_f64s(std::span<const double> vs) {
        for (double v : vs) put_f64(v);
    }
    std::vector<std::uint8_t> take() { return std::move(bytes_); }

private:
    std::vector<std::uint8_t> bytes_;
};

class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::size_t offset() const noexcept { return pos_; }
    std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

    void need(std::size_t n, const char* what) const {
        if (remaining() < n) {
            throw FormatError(pos_, std::string("truncated ") + what + ": expected " + std::to_string(n) +
                                        " more bytes, file has " + std::to_string(remaining()));
        }
    }
    std::uint8_t u8(const char* what) {
        need(1, what);
        return bytes_[pos_++];
    }
    std::uint32_t u32(const char* what) {
        need(4, what);
        std::uint32_t v = 0;
        for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(bytes_[pos_ + k]) << (8 * k);
        pos_ += 4;
        return v;
    }
    double f64(const char* what) {
        need(8, what);
        std::uint64_t v = 0;
        for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(bytes_[pos_ + k]) << (8 * k);
        pos_ += 8;
        return std::bit_cast<double>(v);
    }
    void magic(const std::array<char, 4>& expected) {
        need(4, "magic");
        if (!std::equal(expected.begin(), expected.end(), bytes_.begin() + static_cast<std::ptrdiff_t>(pos_),
                        [](char c, std::uint8_t b) { return static_cast<std::uint8_t>(c) == b; })) {
            throw FormatError(pos_, "bad magic, expected \"" + std::string(expected.data(), 4) + "\"");
        }
        pos_ += 4;
    }
    void version() {
        const std::size_t at = pos_;
        const std::uint32_t v = u32("version");
        if (v != kFormatVersion) {
            throw FormatError(at, "unsupported version " + std::to_string(v) + " (supported: " +
                                      std::to_string(kFormatVersion) + ")");
        }
    }
    std::vector<double> f64s(std::size_t n, const char* what) {
        need(8 * n, what);
        std::vector<double> out(n);
        for (double& v : out) v = f64(what);
        return out;
    }
    void expect_end() const {
        if (remaining() != 0) throw FormatError(pos_, std::to_string(remaining()) + " trailing bytes after payload");
    }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

std::uint32_t checked_u32(std::size_t v, const char* what) {
    if (v > 0xFFFFFFFFull) throw IoError(std::string(what) + " does not fit in 32 bits");
    return static_cast<std::uint32_t>(v);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open " + path.string() + " for writing");
    os.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!os) throw IoError("failed writing " + path.string());
}

}  // namespace

// ------------------------------------------------------------------ dataset

std::vector<std::uint8_t> encode_dataset(const Dataset& ds) {
    ds.validate();
    check_tiles_plate(ds.spec, ds.config);
    ByteWriter w;
    w.put_magic(kDatasetMagic);
    w.put_u32(kFormatVersion);
    w.put_u32(checked_u32(ds.spec.nx, "nx"));
    w.put_u32(checked_u32(ds.spec.ny, "ny"));
    w.put_u32(checked_u32(ds.samples.size(), "sample count"));
    const PhysicalConfig& c = ds.config;
    for (double v : {c.Lx, c.Ly, c.k, c.t, c.h_coeff, c.h_bg, c.T_coolant, c.Q_batt}) w.put_f64(v);
    for (const Sample& s : ds.samples) {
        for (std::uint8_t m : s.mask.values()) w.put_u8(m);
        w.put_f64s(s.temperature.values());
    }
    return w.take();
}

Dataset decode_dataset(std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    r.magic(kDatasetMagic);
    r.version();
    const std::size_t dims_at = r.offset();
    const std::size_t nx = r.u32("header");
    const std::size_t ny = r.u32("header");
    const std::size_t n = r.u32("header");
    if (nx == 0 || ny == 0) throw FormatError(dims_at, "grid extents must be nonzero");

    PhysicalConfig c;
    const std::size_t phys_at = r.offset();
    c.Lx = r.f64("physical block");
    c.Ly = r.f64("physical block");
    c.k = r.f64("physical block");
    c.t = r.f64("physical block");
    c.h_coeff = r.f64("physical block");
    c.h_bg = r.f64("physical block");
    c.T_coolant = r.f64("physical block");
    c.Q_batt = r.f64("physical block");
    try {
        c.validate();
    } catch (const ConfigError& e) {
        throw FormatError(phys_at, std::string("invalid physical block: ") + e.what());
    }

    const std::size_t cells = nx * ny;
    const std::size_t payload = n * cells * 9;
    if (r.remaining() != payload) {
        throw FormatError(r.offset(), "payload length mismatch: expected " + std::to_string(payload) +
                                          " bytes for " + std::to_string(n) + " samples of " + std::to_string(nx) +
                                          "x" + std::to_string(ny) + ", got " + std::to_string(r.remaining()));
    }

    Dataset ds;
    ds.spec = grid_for_plate(c, nx, ny);
    ds.config = c;
    ds.samples.reserve(n);
    for (std::size_t s = 0; s < n; ++s) {
        std::vector<std::uint8_t> mask(cells);
        for (auto& m : mask) {
            const std::size_t at = r.offset();
            m = r.u8("mask");
            if (m > 1) throw FormatError(at, "mask byte " + std::to_string(m) + " is not 0 or 1");
        }
        const std::size_t field_at = r.offset();
        auto values = r.f64s(cells, "temperature field");
        if (!std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); }))
            throw FormatError(field_at, "temperature field contains non-finite values");
        ds.samples.push_back({ChannelMask(ds.spec, std::move(mask)), ScalarField(ds.spec, std::move(values))});
    }
    r.expect_end();
    return ds;
}

void write_dataset(const std::filesystem::path& path, const Dataset& dataset) {
    write_file(path, encode_dataset(dataset));
}

Dataset read_dataset(const std::filesystem::path& path) { return decode_dataset(read_file(path)); }

// -------------------------------------------------------------------- model

std::vector<std::uint8_t> encode_model(const Surrogate& model) {
    const auto& layers = model.network.layers();
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const bool last = i + 1 == layers.size();
        const auto expected = last ? nn::Activation::Linear : nn::Activation::ReLU;
        if (layers[i].activation != expected) {
            throw IoError("model format stores ReLU hidden layers and a Linear head only; layer " +
                          std::to_string(i) + " differs");
        }
    }
    ByteWriter w;
    w.put_magic(kModelMagic);
    w.put_u32(kFormatVersion);
    w.put_u8(static_cast<std::uint8_t>(model.kind));
    w.put_f64(model.stats.mu);
    w.put_f64(model.stats.sigma);
    w.put_u32(checked_u32(layers.size(), "layer count"));
    for (const nn::Layer& layer : layers) {
        if (const auto* conv = std::get_if<nn::ConvLayer>(&layer.op)) {
            w.put_u8(0);
            w.put_u32(checked_u32(conv->in_channels, "in_channels"));
            w.put_u32(checked_u32(conv->out_channels, "out_channels"));
            w.put_u32(checked_u32(conv->kernel_h, "kernel_h"));
            w.put_u32(checked_u32(conv->kernel_w, "kernel_w"));
            w.put_f64s(conv->weights);
            w.put_f64s(conv->bias);
        } else {
            const auto& dense = std::get<nn::DenseLayer>(layer.op);
            w.put_u8(1);
            w.put_u32(checked_u32(dense.in_dim, "in_dim"));
            w.put_u32(checked_u32(dense.out_dim, "out_dim"));
            w.put_f64s(dense.weights);
            w.put_f64s(dense.bias);
        }
    }
    return w.take();
}

Surrogate decode_model(std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    r.magic(kModelMagic);
    r.version();
    const std::size_t mode_at = r.offset();
    const std::uint8_t mode = r.u8("mode");
    if (mode > 1) throw FormatError(mode_at, "unknown model mode " + std::to_string(mode));
    Surrogate model;
    model.kind = static_cast<ModelKind>(mode);
    model.stats.mu = r.f64("normalisation stats");
    const std::size_t sigma_at = r.offset();
    model.stats.sigma = r.f64("normalisation stats");
    if (!std::isfinite(model.stats.mu) || !(model.stats.sigma > 0.0) || !std::isfinite(model.stats.sigma))
        throw FormatError(sigma_at, "invalid normalisation stats");
    const std::size_t count_at = r.offset();
    const std::uint32_t count = r.u32("layer count");
    if (count == 0) throw FormatError(count_at, "model has no layers");

    std::vector<nn::Layer> layers;
    for (std::uint32_t li = 0; li < count; ++li) {
        const std::size_t at = r.offset();
        const std::uint8_t type = r.u8("layer type");
        const auto act = li + 1 == count ? nn::Activation::Linear : nn::Activation::ReLU;
        if (type == 0) {
            const std::size_t in = r.u32("conv dims"), out = r.u32("conv dims");
            const std::size_t kh = r.u32("conv dims"), kw = r.u32("conv dims");
            if (in == 0 || out == 0 || kh % 2 == 0 || kw % 2 == 0)
                throw FormatError(at, "invalid conv layer dimensions");
            nn::ConvLayer conv(in, out, kh, kw);
            conv.weights = r.f64s(out * in * kh * kw, "conv weights");
            conv.bias = r.f64s(out, "conv bias");
            layers.push_back({std::move(conv), act});
        } else if (type == 1) {
            const std::size_t in = r.u32("dense dims"), out = r.u32("dense dims");
            if (in == 0 || out == 0) throw FormatError(at, "invalid dense layer dimensions");
            nn::DenseLayer dense(in, out);
            dense.weights = r.f64s(out * in, "dense weights");
            dense.bias = r.f64s(out, "dense bias");
            layers.push_back({std::move(dense), act});
        } else {
            throw FormatError(at, "unknown layer type " + std::to_string(type));
        }
    }
    r.expect_end();
    try {
        model.network = nn::Network(std::move(layers));
    } catch (const ShapeError& e) {
        throw FormatError(count_at, std::string("inconsistent layer stack: ") + e.what());
    }
    return model;
}

void write_model(const std::filesystem::path& path, const Surrogate& model) { write_file(path, encode_model(model)); }

Surrogate read_model(const std::filesystem::path& path) { return decode_model(read_file(path)); }

// -------------------------------------------------------------------- files

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open " + path.string() + " for reading");
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    if (is.bad()) throw IoError("failed reading " + path.string());
    return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open " + path.string() + " for writing");
    os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!os) throw IoError("failed writing " + path.string());
}

// ---------------------------------------------------------------------- csv

void export_field_csv(const std::filesystem::path& path, const ScalarField& field) {
    const GridSpec& spec = field.spec();
    std::string out;
    out.reserve(field.size() * 24);
    for (std::size_t jj = 0; jj < spec.ny; ++jj) {
        const std::size_t j = spec.ny - 1 - jj;
        for (std::size_t i = 0; i < spec.nx; ++i) {
            if (i) out += ',';
            out += format_double(field(i, j));
        }
        out += '\n';
    }
    write_text(path, out);
}

CsvGrid read_grid_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open " + path.string() + " for reading");
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        const char* p = line.data();
        const char* end = p + line.size();
        while (p <= end) {
            const char* comma = std::find(p, end, ',');
            while (p < comma && *p == ' ') ++p;
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(p, comma, v);
            if (ec != std::errc() || ptr != comma) {
                throw IoError(path.string() + ":" + std::to_string(line_no) + ": cannot parse number '" +
                              std::string(p, comma) + "'");
            }
            row.push_back(v);
            p = comma + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw IoError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                          std::to_string(rows.front().size()) + " columns, got " + std::to_string(row.size()));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw IoError(path.string() + " contains no rows");

    CsvGrid grid;
    grid.nx = rows.front().size();
    grid.ny = rows.size();
    grid.values.resize(grid.nx * grid.ny);
    for (std::size_t r = 0; r < grid.ny; ++r) {
        const std::size_t j = grid.ny - 1 - r;
        std::copy(rows[r].begin(), rows[r].end(), grid.values.begin() + static_cast<std::ptrdiff_t>(j * grid.nx));
    }
    return grid;
}

// ---------------------------------------------------------------------- ppm

Rgb color_map(double value, double lo, double hi) {
    double s = (value - lo) / (hi - lo);
    s = std::clamp(s, 0.0, 1.0);
    auto channel = [](double v) { return static_cast<std::uint8_t>(std::floor(v + 0.5)); };
    if (s <= 0.5) {
        const double t = s / 0.5;
        return {channel(255.0 * t), channel(255.0 * t), 255};
    }
    const double t = (s - 0.5) / 0.5;
    return {255, channel(255.0 * (1.0 - t)), channel(255.0 * (1.0 - t))};
}

std::vector<std::uint8_t> encode_heatmap_ppm(const ScalarField& field, const ColorRange& range) {
    double lo = range.lo, hi = range.hi;
    bool constant = false;
    if (range.mode == RangeMode::Fixed) {
        if (!(hi > lo)) throw RangeError("fixed colour range needs max > min");
    } else {
        lo = field.min();
        hi = field.max();
        constant = !(hi > lo);
    }
    const GridSpec& spec = field.spec();
    const std::string header = "P6\n" + std::to_string(spec.nx) + " " + std::to_string(spec.ny) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.reserve(header.size() + 3 * field.size());
    for (std::size_t jj = 0; jj < spec.ny; ++jj) {
        const std::size_t j = spec.ny - 1 - jj;
        for (std::size_t i = 0; i < spec.nx; ++i) {
            const Rgb px = constant ? Rgb{255, 255, 255} : color_map(field(i, j), lo, hi);
            out.insert(out.end(), px.begin(), px.end());
        }
    }
    return out;
}

void export_heatmap_ppm(const std::filesystem::path& path, const ScalarField& field, const ColorRange& range) {
    write_file(path, encode_heatmap_ppm(field, range));
}

void write_curves_csv(const std::filesystem::path& path, const std::vector<EpochRecord>& records) {
    if (records.empty()) throw std::invalid_argument("write_curves_csv: no epoch records to write");
    std::string out = "epoch,train_mse,val_mse,l_pde,l_bc,l_total,val_rmse_celsius\n";
    for (const EpochRecord& r : records) {
        out += std::to_string(r.epoch);
        for (double v : {r.train_mse, r.val_mse, r.l_pde, r.l_bc, r.l_total, r.val_rmse_celsius}) {
            out += ',';
            out += format_double(v);
        }
        out += '\n';
    }
    write_text(path, out);
}

}  // namespace coldplate::io
