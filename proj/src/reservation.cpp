#include "pmms/reservation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pmms {

namespace {

constexpr std::int64_t k_never = std::numeric_limits<std::int64_t>::max();

} // namespace

reservation_ledger::reservation_ledger(int ap_count, const reservation_config& cfg) : cfg_(cfg) {
    aps_.resize(static_cast<std::size_t>(ap_count));
    for (auto& st : aps_) {
        st.emergency = static_cast<byte_count>(
            std::floor(cfg.emergency_reserve_fraction * static_cast<double>(cfg.total_buffer)));
        st.free = cfg.total_buffer - st.emergency;
    }
}

byte_count reservation_ledger::grant(ap_state& st, double fraction) const {
    return static_cast<byte_count>(std::floor(fraction * static_cast<double>(st.free)));
}

std::optional<reservation> reservation_ledger::first_stage_reserve(ap_id ap, mn_id mn,
                                                                   std::int64_t now) {
    auto& st = aps_.at(static_cast<std::size_t>(ap));
    if (st.free <= 0) return std::nullopt;
    for (const auto& r : st.reservations) {
        if (r.mn == mn && r.stage == reservation_stage::one &&
            (r.state == reservation_state::active || r.expires_at > now))
            return std::nullopt; // live duplicate
    }
    const byte_count bytes = grant(st, cfg_.stage1_fraction);
    if (bytes <= 0) return std::nullopt;
    reservation r{ap, mn, reservation_stage::one, bytes, reservation_state::passive,
                  now + cfg_.timeout_ticks, -1};
    st.free -= bytes;
    st.reservations.push_back(r);
    return r;
}

std::optional<reservation> reservation_ledger::second_stage_reserve(ap_id ap, mn_id mn,
                                                                    traffic_type traffic,
                                                                    std::int64_t now) {
    auto& st = aps_.at(static_cast<std::size_t>(ap));
    bool stage1_live = false;
    for (const auto& r : st.reservations) {
        if (r.mn == mn && r.stage == reservation_stage::one &&
            (r.state == reservation_state::active || r.expires_at > now)) {
            stage1_live = true;
            break;
        }
    }
    if (!stage1_live)
        throw reservation_error("second_stage_reserve: no live first-stage reservation");

    const double fraction = traffic == traffic_type::audio ? cfg_.stage2_audio_fraction
                                                           : cfg_.stage2_text_fraction;
    const byte_count bytes = grant(st, fraction);
    if (bytes <= 0) return std::nullopt;
    reservation r{ap, mn, reservation_stage::two, bytes, reservation_state::passive,
                  now + cfg_.timeout_ticks, -1};
    st.free -= bytes;
    st.reservations.push_back(r);
    return r;
}

void reservation_ledger::confirm(mn_id mn, ap_id ap, bool flag, std::int64_t now) {
    auto& st = aps_.at(static_cast<std::size_t>(ap));
    for (auto it = st.reservations.begin(); it != st.reservations.end();) {
        if (it->mn != mn) {
            ++it;
            continue;
        }
        const bool expired = it->state == reservation_state::passive && it->expires_at <= now;
        if (flag && !expired) {
            it->state = reservation_state::active;
            it->expires_at = k_never;
            it->borrower = -1; // owner takes the bytes back from any borrower
            ++it;
        } else {
            st.free += it->bytes;
            it = st.reservations.erase(it);
        }
    }
}

int reservation_ledger::expire_and_preempt(std::int64_t now) {
    int reclaimed = 0;
    for (auto& st : aps_) {
        for (auto it = st.reservations.begin(); it != st.reservations.end();) {
            if (it->state == reservation_state::passive && it->expires_at <= now) {
                st.free += it->bytes;
                it = st.reservations.erase(it);
                ++reclaimed;
            } else {
                ++it;
            }
        }
    }
    return reclaimed;
}

byte_count reservation_ledger::borrow(ap_id ap, mn_id borrower, byte_count want,
                                      std::int64_t now) {
    auto& st = aps_.at(static_cast<std::size_t>(ap));
    byte_count granted = 0;
    for (auto& r : st.reservations) {
        if (granted >= want) break;
        if (r.state != reservation_state::passive || r.mn == borrower) continue;
        if (r.expires_at <= now || r.borrower != -1) continue;
        r.borrower = borrower;
        granted += r.bytes;
    }
    return granted;
}

void reservation_ledger::release(mn_id mn, ap_id ap) {
    auto& st = aps_.at(static_cast<std::size_t>(ap));
    for (auto it = st.reservations.begin(); it != st.reservations.end();) {
        if (it->mn == mn) {
            st.free += it->bytes;
            it = st.reservations.erase(it);
        } else {
            ++it;
        }
    }
}

void reservation_ledger::release_emergency_store(ap_id ap) {
    auto& st = aps_.at(static_cast<std::size_t>(ap));
    st.free += st.emergency;
    st.emergency = 0;
}

byte_count reservation_ledger::total_buffer(ap_id) const { return cfg_.total_buffer; }

byte_count reservation_ledger::free_bytes(ap_id ap) const {
    return aps_.at(static_cast<std::size_t>(ap)).free;
}

byte_count reservation_ledger::active_bytes(ap_id ap) const {
    byte_count total = 0;
    for (const auto& r : aps_.at(static_cast<std::size_t>(ap)).reservations)
        if (r.state == reservation_state::active) total += r.bytes;
    return total;
}

byte_count reservation_ledger::active_bytes(mn_id mn, ap_id ap) const {
    byte_count total = 0;
    for (const auto& r : aps_.at(static_cast<std::size_t>(ap)).reservations)
        if (r.state == reservation_state::active && r.mn == mn) total += r.bytes;
    return total;
}

byte_count reservation_ledger::passive_bytes(ap_id ap) const {
    byte_count total = 0;
    for (const auto& r : aps_.at(static_cast<std::size_t>(ap)).reservations)
        if (r.state == reservation_state::passive) total += r.bytes;
    return total;
}

byte_count reservation_ledger::emergency_bytes(ap_id ap) const {
    return aps_.at(static_cast<std::size_t>(ap)).emergency;
}

bool reservation_ledger::has_live_reservation(mn_id mn, ap_id ap, std::int64_t now) const {
    for (const auto& r : aps_.at(static_cast<std::size_t>(ap)).reservations) {
        if (r.mn == mn && (r.state == reservation_state::active || r.expires_at > now))
            return true;
    }
    return false;
}

bool reservation_ledger::conservation_holds() const {
    for (std::size_t a = 0; a < aps_.size(); ++a) {
        const auto ap = static_cast<ap_id>(a);
        const byte_count sum =
            free_bytes(ap) + active_bytes(ap) + passive_bytes(ap) + emergency_bytes(ap);
        if (sum != cfg_.total_buffer) return false;
        if (free_bytes(ap) < 0) return false;
    }
    return true;
}

std::vector<ledger_row> reservation_ledger::snapshot() const {
    std::vector<ledger_row> rows;
    rows.reserve(aps_.size());
    for (std::size_t a = 0; a < aps_.size(); ++a) {
        const auto ap = static_cast<ap_id>(a);
        rows.push_back({ap, free_bytes(ap), active_bytes(ap), passive_bytes(ap)});
    }
    return rows;
}

traffic_type classify_traffic(int tos_tag, const std::set<int>& audio_tags) {
    return audio_tags.count(tos_tag) ? traffic_type::audio : traffic_type::text;
}

} // namespace pmms
