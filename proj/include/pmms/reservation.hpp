#ifndef PMMS_RESERVATION_HPP
#define PMMS_RESERVATION_HPP

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "pmms/topology.hpp"

namespace pmms {

using mn_id = int;
using byte_count = std::int64_t;

enum class traffic_type { audio, text };
enum class reservation_stage { one, two };
enum class reservation_state { passive, active };

struct reservation {
    ap_id ap = 0;
    mn_id mn = 0;
    reservation_stage stage = reservation_stage::one;
    byte_count bytes = 0;
    reservation_state state = reservation_state::passive;
    std::int64_t expires_at = 0; // tick; cleared (no expiry) once active
    mn_id borrower = -1;         // passive bytes currently lent out, -1 = none
};

class reservation_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct reservation_config {
    byte_count total_buffer = 100'000'000; // per AP
    double stage1_fraction = 0.05;         // of current free bytes
    double stage2_audio_fraction = 0.05;
    double stage2_text_fraction = 0.02;
    std::int64_t timeout_ticks = 2;
    double emergency_reserve_fraction = 0.0; // withheld until explicitly released
};

struct ledger_row {
    ap_id ap = 0;
    byte_count free = 0;
    byte_count active = 0;
    byte_count passive = 0;
};

// Per-AP buffer accounting. Single writer; every mutation preserves
// free + active + passive + emergency = total on each AP.
class reservation_ledger {
public:
    reservation_ledger(int ap_count, const reservation_config& cfg);

    // passive stage-1 block on a predicted AP; nullopt when denied (no free
    // bytes, zero-sized grant or a live duplicate for the same mn/ap pair)
    std::optional<reservation> first_stage_reserve(ap_id ap, mn_id mn, std::int64_t now);

    // additional passive block sized by traffic type; requires a live stage-1
    std::optional<reservation> second_stage_reserve(ap_id ap, mn_id mn, traffic_type traffic,
                                                    std::int64_t now);

    // true: all stages for (mn, ap) become active, timers cleared, borrowers
    // preempted; false: everything returns to free
    void confirm(mn_id mn, ap_id ap, bool flag, std::int64_t now);

    // releases passive reservations whose timer ran out; returns how many
    int expire_and_preempt(std::int64_t now);

    // lend passive bytes belonging to other MNs; returns bytes granted
    byte_count borrow(ap_id ap, mn_id borrower, byte_count want, std::int64_t now);

    // post-handoff cleanup: all bytes for (mn, ap) go back to free
    void release(mn_id mn, ap_id ap);

    void release_emergency_store(ap_id ap);

    byte_count total_buffer(ap_id ap) const;
    byte_count free_bytes(ap_id ap) const;
    byte_count active_bytes(ap_id ap) const;
    byte_count active_bytes(mn_id mn, ap_id ap) const;
    byte_count passive_bytes(ap_id ap) const;
    byte_count emergency_bytes(ap_id ap) const;
    bool has_live_reservation(mn_id mn, ap_id ap, std::int64_t now) const;

    bool conservation_holds() const;
    std::vector<ledger_row> snapshot() const;

private:
    struct ap_state {
        byte_count free = 0;
        byte_count emergency = 0;
        std::vector<reservation> reservations;
    };

    byte_count grant(ap_state& st, double fraction) const;

    reservation_config cfg_;
    std::vector<ap_state> aps_;
};

// configured tag -> type mapping; unknown tags are text
traffic_type classify_traffic(int tos_tag, const std::set<int>& audio_tags);

} // namespace pmms

#endif
