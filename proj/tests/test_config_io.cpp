#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

#include "pca/config_io.hpp"

using namespace pca;

namespace {

const char* kDedicated =
    "cutConnect_ 3\n"
    "esN0_ 5\n"
    "switchAleaDet_ 0\n"
    "frameDuration_ 0.045\n"
    "nbSlotPerFreq_ 40\n"
    "sizeSlotDeter_ 920\n"
    "rtt_ 0.5\n"
    "freqRandom_ 0\n"
    "nbFreqPerRand_ 2.5\n"
    "freqDeter_ 100\n"
    "maxThroughtput_ 1\n"
    "boolAntennaLimit_ 1\n";

const char* kMusca =
    "cutConnect_ 3\n"
    "esN0_ 5\n"
    "switchAleaDet_ inf\n"
    "frameDuration_ 0.045\n"
    "nbSlotPerFreq_ 40\n"
    "sizeSlotRandom_ 680\n"
    "rtt_ 0.5\n"
    "freqRandom_ 100\n"
    "nbFreqPerRand_ 2.5\n"
    "freqDeter_ 0\n"
    "maxThroughtput_ 1\n"
    "nbSlotRndFreqGroup_ 3\n"
    "boolAntennaLimit_ 1\n";

}  // namespace

TEST_CASE("parse_config dedicated column") {
    const ParsedConfig cfg = parse_config(kDedicated);
    CHECK(cfg.frame.frame_duration == 0.045);
    CHECK(cfg.frame.slots_per_freq == 40);
    CHECK(cfg.frame.freq_dedicated == 100);
    CHECK(cfg.frame.freq_random == 0);
    CHECK(cfg.frame.bits_per_slot_dedicated == 920);
    CHECK(cfg.frame.antenna_limited);
    CHECK(cfg.frame.max_throughput_bps == 1e6);
    CHECK(cfg.queue.switch_threshold == 0.0);
    CHECK(cfg.queue.cut_connect_s == 3.0);
    CHECK(cfg.queue.rtt_s == 0.5);
    CHECK(cfg.queue.esn0_db == 5.0);
}

TEST_CASE("parse_config random column") {
    const ParsedConfig cfg = parse_config(kMusca);
    CHECK(cfg.frame.freq_random == 100);
    CHECK(cfg.frame.bits_per_ra_allocation == 680);
    CHECK(cfg.frame.blocks_per_pldu == 3);
    CHECK(std::isinf(cfg.queue.switch_threshold));
    CHECK(cfg.frame.ra_block_slots() == 100);
    CHECK(cfg.frame.ra_block_count() == 40);
}

TEST_CASE("unused parameters may be omitted, used ones may not") {
    // the dedicated column carries no sizeSlotRandom_/nbSlotRndFreqGroup_
    CHECK_NOTHROW(parse_config(kDedicated));
    // the random column carries no sizeSlotDeter_
    CHECK_NOTHROW(parse_config(kMusca));

    std::string broken(kDedicated);
    broken.erase(broken.find("frameDuration_ 0.045\n"), 21);
    try {
        parse_config(broken);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("frameDuration_") != std::string::npos);
    }

    std::string no_deter(kDedicated);
    no_deter.erase(no_deter.find("sizeSlotDeter_ 920\n"), 19);
    CHECK_THROWS_AS(parse_config(no_deter), ConfigError);
}

TEST_CASE("parse_config rejects malformed input") {
    CHECK_THROWS_AS(parse_config(std::string(kDedicated) + "bogusKey_ 1\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(std::string(kDedicated) + "esN0_ 5\n"),
                    ConfigError);  // duplicate

    std::string bad(kDedicated);
    bad.replace(bad.find("frameDuration_ 0.045"), 20, "frameDuration_ -1.0 ");
    CHECK_THROWS_AS(parse_config(bad), ConfigError);

    std::string text(kDedicated);
    text.replace(text.find("nbSlotPerFreq_ 40"), 17, "nbSlotPerFreq_ ab");
    CHECK_THROWS_AS(parse_config(text), ConfigError);
}

TEST_CASE("comments and blank lines are accepted") {
    std::string text = "# DVB-RCS2 use case\n\n";
    text += kDedicated;
    text += "   # trailing comment line\n";
    CHECK_NOTHROW(parse_config(text));
}

TEST_CASE("config round-trips through serialization") {
    for (const char* text : {kDedicated, kMusca}) {
        const ParsedConfig cfg = parse_config(text);
        const ParsedConfig again = parse_config(serialize_config(cfg));
        CHECK(again == cfg);
    }
}

TEST_CASE("shipped use case configs parse") {
    for (const char* name : {"dedicated.conf", "crdsa.conf", "musca.conf"}) {
        std::ifstream in(std::string(PCA_CONFIG_DIR) + "/" + name);
        REQUIRE(in.good());
        std::ostringstream text;
        text << in.rdbuf();
        CHECK_NOTHROW(parse_config(text.str()));
    }
    const ParsedConfig crdsa =
        parse_config([] {
            std::ifstream in(std::string(PCA_CONFIG_DIR) + "/crdsa.conf");
            std::ostringstream text;
            text << in.rdbuf();
            return text.str();
        }());
    CHECK(crdsa.frame.bits_per_ra_allocation == 613);
}
