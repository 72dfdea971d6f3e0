#ifndef PMMS_TOPOLOGY_HPP
#define PMMS_TOPOLOGY_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace pmms {

using ap_id = int;
using region_id = int;

struct point {
    double x = 0.0;
    double y = 0.0;
};

class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// AP grid embedded in a region grid one row/column larger on each side.
// AP (r,c) sits at the shared corner of regions (r,c), (r,c+1), (r+1,c),
// (r+1,c+1); region (i,j) holds the APs at (i-1,j-1), (i-1,j), (i,j-1),
// (i,j) clipped to the AP grid. Immutable after construction.
class grid_topology {
public:
    grid_topology() = default; // empty; build_grid makes the real thing

    int ap_rows() const { return ap_rows_; }
    int ap_cols() const { return ap_cols_; }
    int ap_count() const { return ap_rows_ * ap_cols_; }
    int region_rows() const { return ap_rows_ + 1; }
    int region_cols() const { return ap_cols_ + 1; }
    int region_count() const { return region_rows() * region_cols(); }
    double ap_spacing() const { return ap_spacing_; }

    bool valid_ap(ap_id a) const { return a >= 0 && a < ap_count(); }
    bool valid_region(region_id r) const { return r >= 0 && r < region_count(); }

    point ap_position(ap_id a) const;
    region_id home_region(ap_id a) const;
    point region_center(region_id r) const;

    // all lists are sorted ascending
    const std::vector<ap_id>& region_aps(region_id r) const;
    const std::vector<region_id>& ap_regions(ap_id a) const;
    const std::vector<ap_id>& ap_neighbors(ap_id a) const;
    const std::vector<region_id>& region_neighbors(region_id r) const;

    bool region_contains_ap(region_id r, ap_id a) const;
    bool aps_adjacent(ap_id a, ap_id b) const;

    // fixed 1/6/11 channel plan over the grid
    int ap_channel(ap_id a) const;

    friend grid_topology build_grid(int ap_rows, int ap_cols, double ap_spacing);

private:
    int ap_rows_ = 0;
    int ap_cols_ = 0;
    double ap_spacing_ = 0.0;
    std::vector<point> ap_positions_;
    std::vector<std::vector<ap_id>> region_aps_;
    std::vector<std::vector<region_id>> ap_regions_;
    std::vector<std::vector<ap_id>> ap_neighbors_;
    std::vector<std::vector<region_id>> region_neighbors_;
};

grid_topology build_grid(int ap_rows, int ap_cols, double ap_spacing);

// S = ({current} U neighbors(current)) ∩ region_aps(next_region).
// S == {current} means the move needs no handoff.
std::vector<ap_id> candidate_next_aps(ap_id current, region_id next_region,
                                      const grid_topology& topo);

double distance(point mn_pos, ap_id ap, const grid_topology& topo);

} // namespace pmms

#endif
