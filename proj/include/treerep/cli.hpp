#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace treerep {

/// Effective settings of one CLI run. Built from defaults, then a config
/// file, then command-line flags.
struct RunConfig {
    // [chain]
    std::optional<std::string> tree;
    double distance_km = 1000.0;
    std::optional<double> spacing_km;
    std::optional<long long> stations;
    double eta_d = 0.95;
    double eps_r = 3e-4;
    double attenuation_length_km = 20.0;
    double min_spacing_km = 1.0;
    std::uint64_t max_photons = 300;
    int max_depth = 4;
    double error_cap = 0.1;
    // [timing]
    double tau_ph_ns = 1.0;
    double tau_cz_ns = 10.0;
    double first_level_factor = 100.0;
    double light_speed_m_per_s = 2e8;
    // [montecarlo]
    std::uint64_t trials = 100000;
    std::uint64_t seed = 0x5eed;
    std::optional<double> mu;
    double eps = 1e-4;
    std::optional<double> target_eps_r;
    // [sweep]
    std::vector<double> distances_km{200, 400, 600, 800, 1000};
    // [cavity]
    double cooperativity = 100.0;
    double kappa_loss_over_kappa_in = 0.01;
    double mode_matching = 1.0;
    // [run]; jobs is not echoed since output never depends on it
    unsigned jobs = 1;
    std::string format = "table";
};

/// Applies `key = value` lines grouped under `[section]` headers. Lines
/// starting with '#' are comments, except that when any line starts with
/// "#!" only those lines are read (with the prefix removed), so a previous
/// table or CSV output can be fed back as a config. Throws
/// std::invalid_argument on unknown sections or keys and on bad values.
void apply_config_text(RunConfig& cfg, std::string_view text);

/// The config in the same syntax, every line prefixed with "#! ".
std::string echo_config(const RunConfig& cfg);

/// Entry point used by the executable. Returns the process exit status:
/// 0 on success, 1 on a failed oracle check or runtime error, 2 on invalid
/// input.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace treerep
