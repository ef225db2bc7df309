#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cmbp/planner.hpp"

/// Generators for the benchmark families, a registry of expected results,
/// and a batch runner comparing the planner against the registry.
namespace cmbp::bench {

enum class family { bt, btc, btuc, bmtc, ring, uring, ndring, square, cube, omelette };

/// Goal placement for square/cube, initial uncertainty for bmtc.
enum class variant { none, corner, face, center, low, mid, high };

struct instance_spec {
    family fam;
    /// Main size parameter: packages, ring size, side length, target eggs.
    int a = 0;
    /// Second parameter: toilets (bmtc), noise fluents (ndring).
    int b = 0;
    variant var = variant::none;

    bool operator==(const instance_spec&) const = default;
};

std::string family_name(family f);
std::optional<family> family_from_name(const std::string& name);
std::string variant_name(variant v);
std::optional<variant> variant_from_name(const std::string& name);

/// Canonical instance identifier, also the generated DOMAIN name, e.g.
/// bt_4, bmtc_4_2_low, square_8_corner.
std::string instance_name(const instance_spec& spec);

/// The ground domain text for an instance. Parameters are checked
/// (usage_error); variants default to corner resp. low when unset.
std::string generate(const instance_spec& spec);

// --- expected results --------------------------------------------------------

enum class expectation { plan, fail };

struct registry_row {
    instance_spec spec;
    expectation expected;
    std::size_t length;  // meaningful for expectation::plan
    const char* source;  // which reference series the row comes from
};

/// Every expected result shipped with the generators.
std::span<const registry_row> registry();

/// The row for an instance, or null when the registry does not pin one
/// (face/center goals are validated against the oracle instead).
const registry_row* find_registry(const instance_spec& spec);

/// Registry rows of one family with a in [min_a, max_a], optionally limited
/// to one variant.
std::vector<registry_row> select(family f, int min_a, int max_a,
                                 std::optional<variant> var = std::nullopt);

// --- suite runner -------------------------------------------------------------

struct suite_options {
    std::size_t max_depth = 64;
    bool prune = true;
    /// Total wall-clock budget for the whole run; remaining rows are marked
    /// skipped once it is spent.
    std::chrono::milliseconds budget{60000};
    dd::store_options store;
};

struct suite_row {
    instance_spec spec;
    bool skipped = false;
    bool pass = false;  // outcome and length match the registry row
    planner::outcome got = planner::outcome::unknown;
    std::size_t length = 0;
    std::size_t beliefs_inserted = 0;
    std::size_t belief_hits = 0;
    double elapsed_ms = 0.0;
};

/// Generates, compiles and plans every row on a fresh store, comparing
/// against the registry expectations.
std::vector<suite_row> run_suite(std::span<const registry_row> rows,
                                 const suite_options& opts = {});

} // namespace cmbp::bench
