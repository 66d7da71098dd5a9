#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "doctest.h"
#include "ldpclab/channel.hpp"

using namespace ldpclab;

TEST_SUITE("channel") {

TEST_CASE("noise scale from Eb/N0") {
    CHECK(ebno_to_sigma(0.0, 0.5) == doctest::Approx(1.0).epsilon(1e-12));
    // sqrt(1 / (2 * 0.5 * 10^0.2)) = 10^-0.1
    CHECK(ebno_to_sigma(2.0, 0.5) == doctest::Approx(0.7943282347242815).epsilon(1e-12));
    CHECK(ebno_to_sigma(1.0, 0.75) ==
          doctest::Approx(std::sqrt(1.0 / (1.5 * std::pow(10.0, 0.1)))).epsilon(1e-12));
    CHECK_THROWS_AS(ebno_to_sigma(0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ebno_to_sigma(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ebno_to_sigma(0.0, -0.5), std::invalid_argument);
}

TEST_CASE("llr quantizer rounds half away from zero and saturates") {
    CHECK(quantize_llr(0.6, 0.5, 8) == 1);
    CHECK(quantize_llr(1.25, 0.5, 8) == 3);   // 2.5 steps
    CHECK(quantize_llr(-1.25, 0.5, 8) == -3);
    CHECK(quantize_llr(0.2, 0.5, 8) == 0);
    CHECK(quantize_llr(-0.2, 0.5, 8) == 0);
    CHECK(quantize_llr(1000.0, 0.5, 8) == 127);
    CHECK(quantize_llr(-1000.0, 0.5, 8) == -127);
    CHECK(quantize_llr(100.0, 0.5, 4) == 7);
    CHECK(quantize_llr(-100.0, 0.5, 4) == -7);
    CHECK(quantize_llr(0.3, 0.25, 8) == 1);
    CHECK_THROWS_AS(quantize_llr(1.0, 0.0, 8), std::invalid_argument);
}

TEST_CASE("noiseless frames saturate with the codeword's signs") {
    ChannelConfig cfg;
    cfg.noiseless = true;
    const auto zero = simulate_frame(6, cfg, 0);
    REQUIRE(zero.size() == 6);
    for (double l : zero) CHECK(l > 1e8);

    const std::vector<std::uint8_t> word{0, 1, 1, 0, 1, 0};
    const auto mod = simulate_frame(6, cfg, 0, word);
    for (int i = 0; i < 6; ++i) {
        CHECK(std::abs(mod[i]) > 1e8);
        CHECK((mod[i] < 0) == (word[i] == 1));
    }
}

TEST_CASE("noisy frames are keyed by seed, stream, and frame") {
    ChannelConfig cfg;
    cfg.ebno_db = 2.0;
    cfg.seed = 7;
    cfg.stream_id = 3;
    const auto a = simulate_frame(32, cfg, 5);
    const auto b = simulate_frame(32, cfg, 5);
    CHECK(a == b);

    const auto other_frame = simulate_frame(32, cfg, 6);
    CHECK(a != other_frame);
    ChannelConfig cfg2 = cfg;
    cfg2.seed = 8;
    CHECK(a != simulate_frame(32, cfg2, 5));
    ChannelConfig cfg3 = cfg;
    cfg3.stream_id = 4;
    CHECK(a != simulate_frame(32, cfg3, 5));
}

TEST_CASE("llr sign tracks the transmitted bit at high snr") {
    ChannelConfig cfg;
    cfg.ebno_db = 12.0;
    std::vector<std::uint8_t> word(64);
    for (int i = 0; i < 64; ++i) word[i] = static_cast<std::uint8_t>(i % 2);
    int agree = 0;
    for (std::uint64_t f = 0; f < 16; ++f) {
        const auto llrs = simulate_frame(64, cfg, f, word);
        for (int i = 0; i < 64; ++i) agree += (llrs[i] < 0) == (word[i] == 1);
    }
    CHECK(agree == 16 * 64);  // sigma ~ 0.25, a flip would be a >4-sigma event
}

TEST_CASE("frame errors are reported") {
    ChannelConfig cfg;
    CHECK_THROWS_AS(simulate_frame(0, cfg, 0), std::invalid_argument);
    const std::vector<std::uint8_t> word{0, 1};
    CHECK_THROWS_AS(simulate_frame(6, cfg, 0, word), std::invalid_argument);
}

TEST_CASE("codeword files hold one frame per line") {
    const std::string path = "/tmp/ldpclab_test_words.txt";
    {
        std::ofstream out(path);
        out << "0101\n1100\n";
    }
    const auto words = parse_codeword_file(path);
    REQUIRE(words.size() == 2);
    CHECK(words[0] == std::vector<std::uint8_t>{0, 1, 0, 1});
    CHECK(words[1] == std::vector<std::uint8_t>{1, 1, 0, 0});
    {
        std::ofstream out(path);
        out << "01x1\n";
    }
    CHECK_THROWS_AS(parse_codeword_file(path), std::invalid_argument);
    CHECK_THROWS_AS(parse_codeword_file("/nonexistent/words.txt"), std::runtime_error);
    std::remove(path.c_str());
}

}  // TEST_SUITE channel
