#include <doctest.h>

#include "pmms/reservation.hpp"
#include "pmms/rng.hpp"

using namespace pmms;

namespace {

reservation_ledger fresh_ledger(int aps = 25) { return reservation_ledger(aps, reservation_config{}); }

} // namespace

TEST_CASE("first stage takes five percent of free") {
    auto ledger = fresh_ledger();
    const auto r = ledger.first_stage_reserve(3, 1, 0);
    REQUIRE(r.has_value());
    CHECK(r->bytes == 5'000'000);
    CHECK(r->state == reservation_state::passive);
    CHECK(ledger.free_bytes(3) == 95'000'000);
    CHECK(ledger.passive_bytes(3) == 5'000'000);
    CHECK(ledger.conservation_holds());
}

TEST_CASE("first stage denials") {
    reservation_config cfg;
    cfg.stage1_fraction = 0.0; // zero-sized grant
    reservation_ledger zero(4, cfg);
    CHECK_FALSE(zero.first_stage_reserve(0, 1, 0).has_value());

    auto ledger = fresh_ledger();
    REQUIRE(ledger.first_stage_reserve(0, 1, 0).has_value());
    CHECK_FALSE(ledger.first_stage_reserve(0, 1, 1).has_value()); // live duplicate
    CHECK(ledger.first_stage_reserve(0, 2, 1).has_value());       // other MN is fine
}

TEST_CASE("second stage sizes by traffic type") {
    auto ledger = fresh_ledger();
    REQUIRE(ledger.first_stage_reserve(0, 1, 0).has_value());

    const auto audio = ledger.second_stage_reserve(0, 1, traffic_type::audio, 0);
    REQUIRE(audio.has_value());
    CHECK(audio->bytes == 4'750'000); // 5% of the remaining 95 MB

    auto other = fresh_ledger();
    REQUIRE(other.first_stage_reserve(0, 1, 0).has_value());
    const auto text = other.second_stage_reserve(0, 1, traffic_type::text, 0);
    REQUIRE(text.has_value());
    CHECK(text->bytes == 1'900'000); // 2% of 95 MB

    CHECK(ledger.conservation_holds());
    CHECK(other.conservation_holds());
}

TEST_CASE("second stage without first is a protocol-order error") {
    auto ledger = fresh_ledger();
    CHECK_THROWS_AS(ledger.second_stage_reserve(0, 1, traffic_type::audio, 0), reservation_error);
    // an expired first stage does not count either
    REQUIRE(ledger.first_stage_reserve(1, 1, 0).has_value());
    CHECK_THROWS_AS(ledger.second_stage_reserve(1, 1, traffic_type::audio, 10), reservation_error);
}

TEST_CASE("confirm flag drives the lifecycle") {
    auto ledger = fresh_ledger();
    REQUIRE(ledger.first_stage_reserve(0, 1, 0).has_value());
    REQUIRE(ledger.second_stage_reserve(0, 1, traffic_type::audio, 0).has_value());

    SUBCASE("true activates both stages with bytes unchanged") {
        const auto passive_before = ledger.passive_bytes(0);
        ledger.confirm(1, 0, true, 1);
        CHECK(ledger.active_bytes(0) == passive_before);
        CHECK(ledger.passive_bytes(0) == 0);
        CHECK(ledger.active_bytes(1, 0) == passive_before);
        // an activated reservation no longer expires
        ledger.expire_and_preempt(1000);
        CHECK(ledger.active_bytes(0) == passive_before);
    }
    SUBCASE("false returns everything to free") {
        ledger.confirm(1, 0, false, 1);
        CHECK(ledger.free_bytes(0) == 100'000'000);
        CHECK(ledger.passive_bytes(0) == 0);
    }
    SUBCASE("confirm after expiry cannot activate") {
        ledger.confirm(1, 0, true, 100);
        CHECK(ledger.active_bytes(0) == 0);
        CHECK(ledger.free_bytes(0) == 100'000'000);
    }
    CHECK(ledger.conservation_holds());
}

TEST_CASE("expiry sweep") {
    auto ledger = fresh_ledger();
    REQUIRE(ledger.first_stage_reserve(0, 1, 0).has_value()); // expires at 2
    REQUIRE(ledger.first_stage_reserve(5, 2, 1).has_value()); // expires at 3

    CHECK(ledger.expire_and_preempt(1) == 0); // neither due yet
    CHECK(ledger.passive_bytes(0) == 5'000'000);

    CHECK(ledger.expire_and_preempt(2) == 1);
    CHECK(ledger.free_bytes(0) == 100'000'000);
    CHECK(ledger.passive_bytes(5) == 5'000'000);

    CHECK(ledger.expire_and_preempt(3) == 1);
    CHECK(ledger.free_bytes(5) == 100'000'000);
    CHECK(ledger.conservation_holds());
}

TEST_CASE("borrow then preempt leaves no trace") {
    auto ledger = fresh_ledger();
    REQUIRE(ledger.first_stage_reserve(0, 1, 0).has_value());
    const auto before_free = ledger.free_bytes(0);
    const auto before_passive = ledger.passive_bytes(0);

    const auto granted = ledger.borrow(0, 2, 4'000'000, 0);
    CHECK(granted == 5'000'000); // whole passive block lent out
    CHECK(ledger.free_bytes(0) == before_free);
    CHECK(ledger.passive_bytes(0) == before_passive);
    CHECK(ledger.conservation_holds());

    ledger.confirm(1, 0, true, 1); // owner arrives, borrower preempted
    CHECK(ledger.active_bytes(1, 0) == 5'000'000);
    CHECK(ledger.borrow(0, 3, 1, 1) == 0); // nothing passive left to lend
    CHECK(ledger.conservation_holds());
}

TEST_CASE("borrowing ignores own and active reservations") {
    auto ledger = fresh_ledger();
    REQUIRE(ledger.first_stage_reserve(0, 1, 0).has_value());
    CHECK(ledger.borrow(0, 1, 1'000'000, 0) == 0); // own bytes
    ledger.confirm(1, 0, true, 0);
    CHECK(ledger.borrow(0, 2, 1'000'000, 0) == 0); // active bytes
}

TEST_CASE("release returns all bytes for the pair") {
    auto ledger = fresh_ledger();
    REQUIRE(ledger.first_stage_reserve(0, 1, 0).has_value());
    REQUIRE(ledger.second_stage_reserve(0, 1, traffic_type::text, 0).has_value());
    ledger.confirm(1, 0, true, 0);
    CHECK(ledger.active_bytes(0) > 0);
    ledger.release(1, 0);
    CHECK(ledger.active_bytes(0) == 0);
    CHECK(ledger.free_bytes(0) == 100'000'000);
    CHECK(ledger.conservation_holds());
}

TEST_CASE("emergency store is withheld until released") {
    reservation_config cfg;
    cfg.emergency_reserve_fraction = 0.10;
    reservation_ledger ledger(2, cfg);
    CHECK(ledger.free_bytes(0) == 90'000'000);
    CHECK(ledger.emergency_bytes(0) == 10'000'000);
    CHECK(ledger.conservation_holds());
    ledger.release_emergency_store(0);
    CHECK(ledger.free_bytes(0) == 100'000'000);
    CHECK(ledger.emergency_bytes(0) == 0);
    CHECK(ledger.conservation_holds());
}

TEST_CASE("correct predictions never shrink the buffered capacity") {
    // wrong prediction: reservation lands on AP 2, handoff goes to AP 3
    auto wrong = fresh_ledger();
    REQUIRE(wrong.first_stage_reserve(2, 1, 0).has_value());
    wrong.confirm(1, 2, false, 1);
    const auto buffered_wrong = wrong.active_bytes(1, 3);

    // the same flow predicted correctly
    auto right = fresh_ledger();
    REQUIRE(right.first_stage_reserve(3, 1, 0).has_value());
    right.confirm(1, 3, true, 1);
    const auto buffered_right = right.active_bytes(1, 3);

    CHECK(buffered_right >= buffered_wrong);
    CHECK(buffered_wrong == 0);
    CHECK(buffered_right == 5'000'000);
}

TEST_CASE("idle AP reserves the same bytes for every correct audio handoff") {
    auto ledger = fresh_ledger();
    byte_count expected = -1;
    for (int round = 0; round < 20; ++round) {
        const std::int64_t t = round * 10;
        REQUIRE(ledger.first_stage_reserve(4, 1, t).has_value());
        REQUIRE(ledger.second_stage_reserve(4, 1, traffic_type::audio, t).has_value());
        ledger.confirm(1, 4, true, t + 1);
        const auto used = ledger.active_bytes(1, 4);
        if (expected < 0) expected = used;
        CHECK(used == expected);
        ledger.release(1, 4);
        CHECK(ledger.free_bytes(4) == 100'000'000);
    }
    CHECK(expected == 9'750'000);
}

TEST_CASE("traffic classification") {
    const std::set<int> audio_tags{46};
    CHECK(classify_traffic(46, audio_tags) == traffic_type::audio);
    CHECK(classify_traffic(0, audio_tags) == traffic_type::text);
    CHECK(classify_traffic(999, audio_tags) == traffic_type::text);
}

TEST_CASE("conservation holds under a randomized op storm") {
    auto ledger = fresh_ledger(5);
    rng rand(2024);
    for (int i = 0; i < 20000; ++i) {
        const auto ap = static_cast<ap_id>(rand.uniform_int(0, 4));
        const auto mn = static_cast<mn_id>(rand.uniform_int(1, 6));
        const auto now = i / 10;
        switch (rand.uniform_int(0, 5)) {
        case 0: ledger.first_stage_reserve(ap, mn, now); break;
        case 1:
            try {
                ledger.second_stage_reserve(ap, mn,
                                            rand.next_double() < 0.5 ? traffic_type::audio
                                                                     : traffic_type::text,
                                            now);
            } catch (const reservation_error&) {
            }
            break;
        case 2: ledger.confirm(mn, ap, rand.next_double() < 0.5, now); break;
        case 3: ledger.expire_and_preempt(now); break;
        case 4: ledger.borrow(ap, mn, rand.uniform_int(1, 1'000'000), now); break;
        case 5: ledger.release(mn, ap); break;
        }
        REQUIRE(ledger.conservation_holds());
    }
}
