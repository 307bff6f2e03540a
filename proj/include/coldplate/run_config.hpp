#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "coldplate/grid.hpp"
#include "coldplate/pipeline.hpp"
#include "coldplate/thermal.hpp"

namespace coldplate {

/// Flat `key = value` settings. Lines starting with '#' and blank lines are
/// ignored. Unknown keys and unparsable values throw ConfigError.
///
/// Keys:
///   grid      nx ny dx dy                 (dx, dy default to lx/nx, ly/ny)
///   physics   k thickness h_coeff h_bg t_coolant q_batt lx ly
///   solver    rel_tol max_iter preconditioner (none|jacobi)
///   training  mode (data|piml|pinn-single) epochs lr batch_size split_fraction
///             w1 w2 w3 seed channels kernel depth pinn_hidden pinn_layers pinn_sample
class RunConfig {
public:
    PhysicalConfig physical;
    thermal::SolverOptions solver;
    pipeline::TrainConfig train;

    static const std::vector<std::string>& known_keys();

    void set(const std::string& key, const std::string& value);
    /// Applies "key=value".
    void set_assignment(const std::string& assignment);
    void load_file(const std::filesystem::path& path);

    /// True once the key was set from a file or the command line.
    bool explicitly_set(const std::string& key) const { return set_keys_.count(key) > 0; }

    /// Grid tiling the configured plate; throws GridError if explicit dx/dy
    /// disagree with lx/nx, ly/ny.
    GridSpec grid() const;

private:
    std::size_t nx_ = 154;
    std::size_t ny_ = 203;
    std::optional<double> dx_;
    std::optional<double> dy_;
    std::set<std::string> set_keys_;
};

}  // namespace coldplate
