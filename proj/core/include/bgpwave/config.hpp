#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace bgpwave {

/// Flat key = value experiment manifest. Unset fields keep their defaults;
/// CLI flags override file values.
///
/// Recognized keys: kappa, alpha, rho, a, h, tol_profile, tol_speed,
/// max_inner, max_speed_iters, max_outer, relaxation, workers, axis, values,
/// warm_start. Lines starting with # are comments.
struct FileConfig {
    std::optional<double> kappa, alpha, rho, a, h;
    std::optional<double> tol_profile, tol_speed, relaxation;
    std::optional<int> max_inner, max_speed_iters, max_outer, workers;
    std::optional<std::string> axis;
    std::optional<std::vector<double>> values;
    std::optional<bool> warm_start;
};

FileConfig load_config(const std::filesystem::path& path);

/// Parses "v1,v2,..." into doubles; throws IoError on junk.
std::vector<double> parse_value_list(const std::string& text);

}  // namespace bgpwave
