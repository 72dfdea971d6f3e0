#include "pmms/topology.hpp"

#include <algorithm>
#include <cmath>

namespace pmms {

namespace {

int row_of(int index, int cols) { return index / cols; }
int col_of(int index, int cols) { return index % cols; }

} // namespace

point grid_topology::ap_position(ap_id a) const { return ap_positions_.at(static_cast<std::size_t>(a)); }

region_id grid_topology::home_region(ap_id a) const {
    const int r = row_of(a, ap_cols_);
    const int c = col_of(a, ap_cols_);
    return r * region_cols() + c;
}

point grid_topology::region_center(region_id r) const {
    const int i = row_of(r, region_cols());
    const int j = col_of(r, region_cols());
    return {(static_cast<double>(j) - 0.5) * ap_spacing_, (static_cast<double>(i) - 0.5) * ap_spacing_};
}

const std::vector<ap_id>& grid_topology::region_aps(region_id r) const {
    return region_aps_.at(static_cast<std::size_t>(r));
}

const std::vector<region_id>& grid_topology::ap_regions(ap_id a) const {
    return ap_regions_.at(static_cast<std::size_t>(a));
}

const std::vector<ap_id>& grid_topology::ap_neighbors(ap_id a) const {
    return ap_neighbors_.at(static_cast<std::size_t>(a));
}

const std::vector<region_id>& grid_topology::region_neighbors(region_id r) const {
    return region_neighbors_.at(static_cast<std::size_t>(r));
}

bool grid_topology::region_contains_ap(region_id r, ap_id a) const {
    const auto& aps = region_aps(r);
    return std::binary_search(aps.begin(), aps.end(), a);
}

bool grid_topology::aps_adjacent(ap_id a, ap_id b) const {
    if (a == b) return false;
    const int dr = std::abs(row_of(a, ap_cols_) - row_of(b, ap_cols_));
    const int dc = std::abs(col_of(a, ap_cols_) - col_of(b, ap_cols_));
    return dr <= 1 && dc <= 1;
}

int grid_topology::ap_channel(ap_id a) const {
    const int r = row_of(a, ap_cols_);
    const int c = col_of(a, ap_cols_);
    return 1 + ((r + 2 * c) % 3) * 5; // 1, 6, 11
}

grid_topology build_grid(int ap_rows, int ap_cols, double ap_spacing) {
    if (ap_rows < 2 || ap_cols < 2)
        throw config_error("build_grid: AP grid must be at least 2x2");
    if (ap_spacing <= 0.0)
        throw config_error("build_grid: AP spacing must be positive");

    grid_topology t;
    t.ap_rows_ = ap_rows;
    t.ap_cols_ = ap_cols;
    t.ap_spacing_ = ap_spacing;

    const int n_aps = ap_rows * ap_cols;
    const int reg_rows = ap_rows + 1;
    const int reg_cols = ap_cols + 1;
    const int n_regions = reg_rows * reg_cols;

    t.ap_positions_.resize(static_cast<std::size_t>(n_aps));
    t.ap_regions_.resize(static_cast<std::size_t>(n_aps));
    t.ap_neighbors_.resize(static_cast<std::size_t>(n_aps));
    t.region_aps_.resize(static_cast<std::size_t>(n_regions));
    t.region_neighbors_.resize(static_cast<std::size_t>(n_regions));

    for (int r = 0; r < ap_rows; ++r) {
        for (int c = 0; c < ap_cols; ++c) {
            const ap_id a = r * ap_cols + c;
            t.ap_positions_[static_cast<std::size_t>(a)] = {c * ap_spacing, r * ap_spacing};
            for (int dr = -1; dr <= 1; ++dr) {
                for (int dc = -1; dc <= 1; ++dc) {
                    if (dr == 0 && dc == 0) continue;
                    const int nr = r + dr;
                    const int nc = c + dc;
                    if (nr < 0 || nr >= ap_rows || nc < 0 || nc >= ap_cols) continue;
                    t.ap_neighbors_[static_cast<std::size_t>(a)].push_back(nr * ap_cols + nc);
                }
            }
            std::sort(t.ap_neighbors_[static_cast<std::size_t>(a)].begin(),
                      t.ap_neighbors_[static_cast<std::size_t>(a)].end());
        }
    }

    for (int i = 0; i < reg_rows; ++i) {
        for (int j = 0; j < reg_cols; ++j) {
            const region_id reg = i * reg_cols + j;
            for (int dr = -1; dr <= 0; ++dr) {
                for (int dc = -1; dc <= 0; ++dc) {
                    const int ar = i + dr;
                    const int ac = j + dc;
                    if (ar < 0 || ar >= ap_rows || ac < 0 || ac >= ap_cols) continue;
                    const ap_id a = ar * ap_cols + ac;
                    t.region_aps_[static_cast<std::size_t>(reg)].push_back(a);
                    t.ap_regions_[static_cast<std::size_t>(a)].push_back(reg);
                }
            }
            std::sort(t.region_aps_[static_cast<std::size_t>(reg)].begin(),
                      t.region_aps_[static_cast<std::size_t>(reg)].end());
            for (int dr = -1; dr <= 1; ++dr) {
                for (int dc = -1; dc <= 1; ++dc) {
                    if (dr == 0 && dc == 0) continue;
                    const int ni = i + dr;
                    const int nj = j + dc;
                    if (ni < 0 || ni >= reg_rows || nj < 0 || nj >= reg_cols) continue;
                    t.region_neighbors_[static_cast<std::size_t>(reg)].push_back(ni * reg_cols + nj);
                }
            }
        }
    }
    for (auto& regs : t.ap_regions_) std::sort(regs.begin(), regs.end());

    return t;
}

std::vector<ap_id> candidate_next_aps(ap_id current, region_id next_region,
                                      const grid_topology& topo) {
    std::vector<ap_id> out;
    if (!topo.valid_ap(current) || !topo.valid_region(next_region)) return out;
    for (ap_id a : topo.region_aps(next_region)) {
        if (a == current || topo.aps_adjacent(current, a)) out.push_back(a);
    }
    return out; // sorted since region_aps is sorted
}

double distance(point mn_pos, ap_id ap, const grid_topology& topo) {
    const point p = topo.ap_position(ap);
    return std::hypot(mn_pos.x - p.x, mn_pos.y - p.y);
}

} // namespace pmms
