#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "twist/group.hpp"
#include "twist/twords.hpp"

namespace twist {

enum class GensetKind { Unbound, Bound, Standard, Explicit };

/// Parsed and validated experiment configuration. Parsing rejects unknown
/// sections and keys outright; every field below has its default recorded so
/// the full resolved configuration can be embedded into outputs.
struct ExperimentConfig {
    GroupSpec group;

    std::string alphabet_mode = "auto"; // auto | auto-strongly-tlog | explicit
    std::vector<std::string> alphabet_letters; // explicit items

    GensetKind genset = GensetKind::Unbound;
    std::string genset_file;

    std::int64_t ball_radius = 6;

    std::int64_t deadends_radius = 8;
    std::int64_t deadends_scan_margin = 2;
    std::int64_t deadends_depth_cap = 32;

    std::int64_t acx_radius = 7;
    std::vector<std::int64_t> acx_levels = {4, 6};
    std::int64_t acx_pair_cap = 2;

    std::string witness_family = "deep"; // deep | acx
    std::int64_t witness_letter = -1;    // -1 = first nonzero letter
    std::vector<std::int64_t> witness_n = {1, 2, 3};
    std::int64_t witness_j = 1;
    std::int64_t witness_radius = 0; // 0 = derived from max n
    std::int64_t witness_depth_cap = 32;

    Window constants_window{-5, 5};
    std::int64_t constants_cap = 8;
    std::int64_t constants_rep_cap = 0;
    std::int64_t constants_pairs_budget = 200000;

    std::int64_t digits_max_bound = 6;
    std::int64_t digits_budget = 256;

    std::int64_t workers = 1;
    std::uint64_t max_elements = 50000000;
    std::string out_dir = "out";
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

/// Flat "section.key" = value view of the fully resolved configuration,
/// defaults included, in a fixed order.
std::vector<std::pair<std::string, std::string>> resolved_entries(const ExperimentConfig& config);

} // namespace twist
