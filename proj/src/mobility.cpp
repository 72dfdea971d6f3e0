#include "pmms/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace pmms {

namespace {

// nearest AP of the region as seen from pos; under the free-space model the
// rssi-argmax is the distance-argmin, ties broken by ascending id
ap_id attachment_for(const grid_topology& topo, region_id r, point pos) {
    ap_id best = -1;
    double best_d = 0.0;
    for (ap_id a : topo.region_aps(r)) {
        const double d = distance(pos, a, topo);
        if (best < 0 || d < best_d) {
            best = a;
            best_d = d;
        }
    }
    return best;
}

point grid_mid(const grid_topology& topo) {
    return {(topo.region_cols() / 2.0 - 1.0) * topo.ap_spacing(),
            (topo.region_rows() / 2.0 - 1.0) * topo.ap_spacing()};
}

// sharp enough that the walk genuinely drifts inward instead of diffusing
double closeness(const grid_topology& topo, point p) {
    const point mid = grid_mid(topo);
    const double d = std::hypot(p.x - mid.x, p.y - mid.y) / topo.ap_spacing();
    const double w = 1.0 / (1.0 + d);
    return w * w * w * w;
}

double center_weight(const grid_topology& topo, region_id r) {
    return closeness(topo, topo.region_center(r));
}

} // namespace

std::vector<ap_id> mobile_path::ap_sequence() const {
    std::vector<ap_id> out;
    out.reserve(steps.size());
    for (const auto& s : steps) out.push_back(s.ap);
    return out;
}

region_id pick_next_region(const grid_topology& topo, region_id current, double beta, rng& rand) {
    const auto& nbrs = topo.region_neighbors(current);
    if (beta <= 0.0) return nbrs[static_cast<std::size_t>(rand.uniform_int(0, static_cast<int>(nbrs.size()) - 1))];

    double total_w = 0.0;
    for (region_id r : nbrs) total_w += center_weight(topo, r);

    const double k = static_cast<double>(nbrs.size());
    double u = rand.next_double();
    for (region_id r : nbrs) {
        const double p = (1.0 - beta) / k + beta * center_weight(topo, r) / total_w;
        if (u < p) return r;
        u -= p;
    }
    return nbrs.back();
}

point sample_point_in_region(const grid_topology& topo, region_id r, rng& rand) {
    const point c = topo.region_center(r);
    const double h = topo.ap_spacing() / 2.0;
    return {c.x + rand.uniform(-h, h), c.y + rand.uniform(-h, h)};
}

point sample_point_near_ap(const grid_topology& topo, region_id r, ap_id a, rng& rand) {
    const point c = topo.region_center(r);
    const double h = topo.ap_spacing() / 2.0;
    const point ap = topo.ap_position(a);

    // the attachment cell of an AP inside the region square is an axis-aligned
    // rectangle: each axis halves toward the AP if some other region AP sits
    // on the opposite side
    double lo_x = c.x - h, hi_x = c.x + h;
    double lo_y = c.y - h, hi_y = c.y + h;
    for (ap_id other : topo.region_aps(r)) {
        if (other == a) continue;
        const point op = topo.ap_position(other);
        if (op.x < ap.x) lo_x = c.x;
        if (op.x > ap.x) hi_x = c.x;
        if (op.y < ap.y) lo_y = c.y;
        if (op.y > ap.y) hi_y = c.y;
    }
    return {rand.uniform(lo_x, hi_x), rand.uniform(lo_y, hi_y)};
}

mobile_path generate_path(const grid_topology& topo, const mobility_config& cfg, rng& rand,
                          int id) {
    if (cfg.min_aps < 2 || cfg.max_aps < cfg.min_aps)
        throw config_error("generate_path: AP count range must satisfy 2 <= min <= max");
    if (cfg.dwell_min < 1 || cfg.dwell_max < cfg.dwell_min)
        throw config_error("generate_path: dwell range must satisfy 1 <= min <= max");

    // toward-the-center moves settle in the cell of the region's most central
    // AP; otherwise the waypoint lands anywhere in the region square
    const auto draw_waypoint = [&](region_id r) {
        if (rand.next_double() < cfg.center_bias) {
            ap_id central = -1;
            double best = 0.0;
            for (ap_id a : topo.region_aps(r)) {
                const double w = closeness(topo, topo.ap_position(a));
                if (central < 0 || w > best) {
                    central = a;
                    best = w;
                }
            }
            return sample_point_near_ap(topo, r, central, rand);
        }
        return sample_point_in_region(topo, r, rand);
    };

    const int target_len = static_cast<int>(rand.uniform_int(cfg.min_aps, cfg.max_aps));

    mobile_path path;
    path.id = id;

    region_id region = static_cast<region_id>(rand.uniform_int(0, topo.region_count() - 1));
    point waypoint = draw_waypoint(region);
    ap_id ap = attachment_for(topo, region, waypoint);
    path.steps.push_back({ap, region, static_cast<int>(rand.uniform_int(cfg.dwell_min, cfg.dwell_max))});

    while (static_cast<int>(path.steps.size()) < target_len) {
        bool moved = false;
        for (int attempt = 0; attempt < 64 && !moved; ++attempt) {
            const region_id next_region = pick_next_region(topo, region, cfg.center_bias, rand);
            const ap_id next_ap = attachment_for(topo, next_region, draw_waypoint(next_region));
            if (next_ap == ap || !topo.aps_adjacent(ap, next_ap)) continue;
            region = next_region;
            ap = next_ap;
            moved = true;
        }
        if (!moved) {
            // deterministic fallback: first adjacent region holding a legal
            // next AP, nearest corner of it as attachment
            for (region_id next_region : topo.region_neighbors(region)) {
                for (ap_id cand : candidate_next_aps(ap, next_region, topo)) {
                    if (cand == ap) continue;
                    region = next_region;
                    ap = cand;
                    moved = true;
                    break;
                }
                if (moved) break;
            }
            if (!moved) throw config_error("generate_path: walk is stuck"); // unreachable on valid grids
        }
        path.steps.push_back({ap, region, static_cast<int>(rand.uniform_int(cfg.dwell_min, cfg.dwell_max))});
    }
    return path;
}

path_history generate_history(int n, const grid_topology& topo, const mobility_config& cfg,
                              std::uint64_t seed) {
    if (n < 1) throw config_error("generate_history: n must be >= 1");
    path_history h;
    h.seed = seed;
    h.paths.reserve(static_cast<std::size_t>(n));
    rng rand(seed);
    for (int i = 0; i < n; ++i) h.paths.push_back(generate_path(topo, cfg, rand, i + 1));
    return h;
}

bool path_valid(const mobile_path& p, const grid_topology& topo) {
    if (p.steps.size() < 2) return false;
    for (std::size_t i = 0; i < p.steps.size(); ++i) {
        const auto& s = p.steps[i];
        if (!topo.valid_ap(s.ap) || !topo.valid_region(s.region)) return false;
        if (s.dwell < 1) return false;
        if (!topo.region_contains_ap(s.region, s.ap)) return false;
        if (i > 0) {
            const auto& prev = p.steps[i - 1];
            if (prev.ap == s.ap || !topo.aps_adjacent(prev.ap, s.ap)) return false;
            const auto& adj = topo.region_neighbors(prev.region);
            if (std::find(adj.begin(), adj.end(), s.region) == adj.end()) return false;
        }
    }
    return true;
}

void save_history(const path_history& h, std::ostream& out) {
    for (const auto& p : h.paths) {
        out << p.id << ';';
        for (std::size_t i = 0; i < p.steps.size(); ++i) {
            if (i > 0) out << "->";
            out << p.steps[i].ap << '(' << p.steps[i].region << ')';
        }
        out << '\n';
    }
}

void save_history(const path_history& h, const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("save_history: cannot open " + file.string());
    save_history(h, out);
}

namespace {

mobile_path parse_path_line(const std::string& line, int line_no, const grid_topology& topo) {
    const auto fail = [line_no](const std::string& what) {
        throw parse_error("line " + std::to_string(line_no) + ": " + what);
    };

    const std::size_t semi = line.find(';');
    if (semi == std::string::npos) fail("missing ';' after path id");

    mobile_path p;
    try {
        std::size_t used = 0;
        p.id = std::stoi(line.substr(0, semi), &used);
        if (used != semi) fail("bad path id");
    } catch (const std::logic_error&) {
        fail("bad path id");
    }

    std::size_t pos = semi + 1;
    while (pos < line.size()) {
        std::size_t open = line.find('(', pos);
        std::size_t close = line.find(')', pos);
        if (open == std::string::npos || close == std::string::npos || close < open)
            fail("malformed step token");
        int ap = 0, region = 0;
        try {
            ap = std::stoi(line.substr(pos, open - pos));
            region = std::stoi(line.substr(open + 1, close - open - 1));
        } catch (const std::logic_error&) {
            fail("malformed step token");
        }
        if (!topo.valid_ap(ap) || !topo.valid_region(region))
            fail("AP or region id out of range");
        if (!topo.region_contains_ap(region, ap))
            throw validation_error("line " + std::to_string(line_no) + ": AP " +
                                   std::to_string(ap) + " does not cover region " +
                                   std::to_string(region));
        p.steps.push_back({ap, region, 1});
        pos = close + 1;
        if (pos < line.size()) {
            if (line.compare(pos, 2, "->") != 0) fail("expected '->' between steps");
            pos += 2;
        }
    }
    if (p.steps.empty()) fail("path has no steps");
    return p;
}

} // namespace

path_history load_history(std::istream& in, const grid_topology& topo) {
    path_history h;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        h.paths.push_back(parse_path_line(line, line_no, topo));
    }
    return h;
}

path_history load_history(const std::filesystem::path& file, const grid_topology& topo) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("load_history: cannot open " + file.string());
    return load_history(in, topo);
}

bool same_route(const path_history& a, const path_history& b) {
    if (a.paths.size() != b.paths.size()) return false;
    for (std::size_t i = 0; i < a.paths.size(); ++i) {
        const auto& pa = a.paths[i];
        const auto& pb = b.paths[i];
        if (pa.id != pb.id || pa.steps.size() != pb.steps.size()) return false;
        for (std::size_t j = 0; j < pa.steps.size(); ++j) {
            if (pa.steps[j].ap != pb.steps[j].ap || pa.steps[j].region != pb.steps[j].region)
                return false;
        }
    }
    return true;
}

} // namespace pmms
