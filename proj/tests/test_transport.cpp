#include <catch2/catch_amalgamated.hpp>

#include "pca/transport.hpp"

using namespace pca;

TEST_CASE("window source fills its window") {
    WindowSource src(0);
    CHECK(src.emissions() == std::vector<Count>{0});  // initial window of 1
    src.on_ack(0);
    CHECK(src.window() == 2.0);
    CHECK(src.emissions() == std::vector<Count>{1, 2});
    CHECK(src.emissions().empty());  // window already full
}

TEST_CASE("slow start and congestion avoidance growth") {
    WindowSource src(0);
    src.emissions();
    Count acked = -1;
    src.on_ack(++acked);
    CHECK(src.window() == 2.0);  // +1 per ack in slow start
    CHECK(src.in_slow_start());

    // force the threshold down to 4 via a loss at window 8
    while (src.window() < 8.0) {
        src.emissions();
        src.on_ack(++acked);
    }
    src.emissions();
    src.on_loss(src.next_seq() - 1);
    CHECK(src.threshold() == 4.0);
    CHECK(src.window() == 4.0);
    CHECK_FALSE(src.in_slow_start());

    // congestion avoidance: four acks advance the window by one packet
    for (Count i = 0; i < 4; ++i) src.on_ack(++acked);
    CHECK(src.window() == 5.0);
}

TEST_CASE("loss halves the window and floors at one") {
    WindowSource src(0);
    src.emissions();
    src.on_loss(0);
    CHECK(src.threshold() == 1.0);
    CHECK(src.window() == 1.0);
    // the lost datagram is re-emitted ahead of new data
    CHECK(src.emissions().front() == 0);
}

TEST_CASE("retransmissions go out before new data") {
    WindowSource src(0);
    // grow until a dozen datagrams are out
    src.emissions();
    for (Count seq = 0; src.next_seq() < 12; ++seq) {
        src.on_ack(seq);
        src.emissions();
    }
    REQUIRE(src.next_seq() >= 12);
    src.on_loss(7);
    const auto out = src.emissions();
    REQUIRE_FALSE(out.empty());
    CHECK(out.front() == 7);
}

TEST_CASE("duplicate and stale acks are ignored") {
    WindowSource src(0);
    src.emissions();
    src.on_ack(0);
    const double w = src.window();
    src.on_ack(0);   // duplicate
    src.on_ack(-1);  // stale
    CHECK(src.window() == w);
}

TEST_CASE("window grows monotonically without losses") {
    WindowSource src(0);
    double prev = src.window();
    for (Count seq = 0; seq < 500; ++seq) {
        src.emissions();
        src.on_ack(seq);
        CHECK(src.window() >= prev);
        prev = src.window();
    }
}

TEST_CASE("cbr source emission spacing") {
    CbrSource silent(0, 0.0);
    CHECK(silent.interval_ticks() == 0);

    CbrSource cbr(0, 1e6, 12000);  // 1 Mbps, 12000-bit datagrams
    CHECK(cbr.interval_ticks() == 12000);  // one every 12 ms
    CHECK(cbr.take_seq() == 0);
    CHECK(cbr.take_seq() == 1);
}

TEST_CASE("sink tracks in-order delivery") {
    SinkState sink;
    CHECK(sink.on_delivery(0, 0, 0, 12000) == 0);
    CHECK(sink.on_delivery(1, 0, 2, 12000) == 0);  // gap at 1
    CHECK(sink.on_delivery(2, 0, 1, 12000) == 2);  // gap filled, jumps to 2
    CHECK(sink.highest_in_order(0) == 2);
    CHECK(sink.highest_in_order(9) == -1);

    Count prev = -1;
    SinkState ordered;
    for (Count seq : {0, 1, 3, 2, 4, 6, 5}) {
        const Count cum = ordered.on_delivery(seq, 1, seq, 8);
        CHECK(cum >= prev);  // cumulative counter never goes back
        prev = cum;
    }
}

TEST_CASE("measure_throughput") {
    CHECK(measure_throughput({}, 1.0, 10.0).empty());

    // 45000 bits every 45 ms for two seconds -> 1 Mbps per one-second window
    std::vector<Delivery> log;
    for (Ticks t = 45000; t <= 2'000'000; t += 45000)
        log.push_back({t, 0, 0, 45000});
    const auto series = measure_throughput(log, 1.0, 2.0);
    REQUIRE(series.size() == 2);
    CHECK(series[0].mbps == Catch::Approx(1.0).margin(0.05));
    CHECK(series[1].mbps == Catch::Approx(1.0).margin(0.05));

    // two flows at 0.5 Mbps each sum to 1 Mbps link-wide
    std::vector<Delivery> two;
    for (Ticks t = 12000; t <= 2'000'000; t += 12000) {
        two.push_back({t, 0, 0, 6000});
        two.push_back({t, 1, 0, 6000});
    }
    const auto link = measure_throughput(two, 1.0, 2.0);
    REQUIRE(link.size() == 2);
    CHECK(link[1].mbps == Catch::Approx(1.0).margin(0.05));
    const auto flow0 = measure_throughput(two, 1.0, 2.0, 0);
    CHECK(flow0[1].mbps == Catch::Approx(0.5).margin(0.05));
}
