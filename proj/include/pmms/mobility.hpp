#ifndef PMMS_MOBILITY_HPP
#define PMMS_MOBILITY_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "pmms/rng.hpp"
#include "pmms/topology.hpp"

namespace pmms {

struct path_step {
    ap_id ap = 0;
    region_id region = 0;
    int dwell = 1; // ticks paused before the next move
};

struct mobile_path {
    int id = 0;
    std::vector<path_step> steps;

    std::vector<ap_id> ap_sequence() const;
};

struct path_history {
    std::vector<mobile_path> paths;
    std::uint64_t seed = 0;
};

struct mobility_config {
    int min_aps = 2;
    int max_aps = 6;
    double center_bias = 0.3; // weight pulling the region walk toward the grid center
    int dwell_min = 1;
    int dwell_max = 5;
};

class parse_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class validation_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// next-region draw of the modified random waypoint walk:
// P(r) ∝ (1-beta)*uniform + beta*closeness-to-grid-center
region_id pick_next_region(const grid_topology& topo, region_id current, double beta, rng& rand);

// uniform point inside the region square
point sample_point_in_region(const grid_topology& topo, region_id r, rng& rand);

// uniform point inside the part of the region square nearest to the given
// AP among the region's APs (the attachment cell of that AP)
point sample_point_near_ap(const grid_topology& topo, region_id r, ap_id a, rng& rand);

// region-level walk; per-step attachment is the rssi-argmax AP of the region
// as seen from a waypoint drawn inside it (argmax rssi = nearest under the
// free-space model). Consecutive steps always change AP.
mobile_path generate_path(const grid_topology& topo, const mobility_config& cfg, rng& rand,
                          int id = 0);

path_history generate_history(int n, const grid_topology& topo, const mobility_config& cfg,
                              std::uint64_t seed);

bool path_valid(const mobile_path& p, const grid_topology& topo);

// one path per line: `id;ap(region)->ap(region)->...`
// dwell is motion state, not part of the wire format; load_history restores
// dwell = 1.
void save_history(const path_history& h, std::ostream& out);
void save_history(const path_history& h, const std::filesystem::path& file);
path_history load_history(std::istream& in, const grid_topology& topo);
path_history load_history(const std::filesystem::path& file, const grid_topology& topo);

bool same_route(const path_history& a, const path_history& b);

} // namespace pmms

#endif
