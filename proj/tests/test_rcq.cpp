#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "ldpclab/channel.hpp"
#include "ldpclab/decoder.hpp"
#include "ldpclab/qc_code.hpp"
#include "ldpclab/rcq.hpp"
#include "ldpclab/rng.hpp"

using namespace ldpclab;

namespace {

QcCode fixture() {
    std::istringstream in("2 4 4\n0 1 -1 2\n2 -1 0 1\n");
    return parse_qc_base_matrix(in);
}

RcqTables small_tables() {
    RcqTables t;
    t.bc = 3;
    t.bv = 6;
    t.imax = 2;
    t.num_layers = 2;
    RcqTableEntry e;
    e.thresholds = {2, 5, 9};
    e.recons = {0, 3, 7, 12};
    t.entries.assign(4, e);
    return t;
}

}  // namespace

TEST_SUITE("rcq") {

TEST_CASE("magnitude quantizer counts thresholds at or below") {
    const std::vector<std::int32_t> th{4, 9, 17};
    CHECK(quantize_msg(0, th) == 0);
    CHECK(quantize_msg(3, th) == 0);
    CHECK(quantize_msg(4, th) == 1);
    CHECK(quantize_msg(10, th) == 2);
    CHECK(quantize_msg(16, th) == 2);
    CHECK(quantize_msg(17, th) == 3);
    CHECK(quantize_msg(127, th) == 3);
}

TEST_CASE("reconstruction looks up the cluster value") {
    const std::vector<std::int32_t> re{2, 6, 12, 24};
    CHECK(reconstruct_msg(0, re) == 2);
    CHECK(reconstruct_msg(2, re) == 12);
    CHECK(reconstruct_msg(3, re) == 24);
}

TEST_CASE("identity tables compose to a symmetric clip") {
    const RcqTables t = identity_tables(3, 8, 4, 2);
    CHECK(t.entries.size() == 8);
    const RcqTableEntry& e = t.at(1, 0);
    CHECK(e.thresholds == std::vector<std::int32_t>{1, 2, 3});
    CHECK(e.recons == std::vector<std::int32_t>{0, 1, 2, 3});
    for (std::int32_t mag = 0; mag <= 127; ++mag)
        CHECK(reconstruct_msg(quantize_msg(mag, e.thresholds), e.recons) ==
              std::min<std::int32_t>(mag, 3));
    const RcqTables t4 = identity_tables(4, 8, 1, 1);
    for (std::int32_t mag = 0; mag <= 127; ++mag)
        CHECK(reconstruct_msg(quantize_msg(mag, t4.at(1, 0).thresholds),
                              t4.at(1, 0).recons) == std::min<std::int32_t>(mag, 7));
}

TEST_CASE("validation pins down the offending entry") {
    CHECK_NOTHROW(validate_tables(small_tables()));

    RcqTables t = small_tables();
    t.entries[1].thresholds = {2, 5, 5};  // not strictly increasing
    CHECK_THROWS_AS(validate_tables(t), std::invalid_argument);

    t = small_tables();
    t.entries[0].thresholds = {0, 5, 9};  // below the valid range
    CHECK_THROWS_AS(validate_tables(t), std::invalid_argument);

    t = small_tables();
    t.entries[0].thresholds = {2, 5, 32};  // beyond the bv=6 magnitude grid
    CHECK_THROWS_AS(validate_tables(t), std::invalid_argument);

    t = small_tables();
    t.entries[2].recons = {0, 3, 2, 12};  // decreasing
    CHECK_THROWS_AS(validate_tables(t), std::invalid_argument);

    t = small_tables();
    t.entries[3].recons = {0, 3, 7, 32};  // out of range
    CHECK_THROWS_AS(validate_tables(t), std::invalid_argument);

    t = small_tables();
    t.entries[0].thresholds = {2, 5};  // wrong count
    CHECK_THROWS_AS(validate_tables(t), std::invalid_argument);

    t = small_tables();
    t.entries.pop_back();  // dimension mismatch
    CHECK_THROWS_AS(validate_tables(t), std::invalid_argument);

    t = small_tables();
    t.bc = 1;
    CHECK_THROWS_AS(validate_tables(t), std::invalid_argument);
}

TEST_CASE("tables survive a save and load round trip") {
    const RcqTables t = small_tables();
    std::ostringstream out;
    save_tables(t, out);
    std::istringstream in(out.str());
    const RcqTables back = load_tables(in);
    CHECK(back.bc == t.bc);
    CHECK(back.bv == t.bv);
    CHECK(back.imax == t.imax);
    CHECK(back.num_layers == t.num_layers);
    REQUIRE(back.entries.size() == t.entries.size());
    for (std::size_t i = 0; i < t.entries.size(); ++i) {
        CHECK(back.entries[i].thresholds == t.entries[i].thresholds);
        CHECK(back.entries[i].recons == t.entries[i].recons);
    }
}

TEST_CASE("loader rejects malformed input") {
    auto load = [](const std::string& text) {
        std::istringstream in(text);
        return load_tables(in);
    };
    CHECK_THROWS_AS(load("not json"), std::invalid_argument);
    CHECK_THROWS_AS(load("{\"bc\": 3}"), std::invalid_argument);
    CHECK_THROWS_AS(load("{\"bc\": 3, \"bv\": 6, \"imax\": 1, \"num_layers\": 1, "
                         "\"tables\": [[{\"thresholds\": [1, \"x\", 3], "
                         "\"recons\": [0, 1, 2, 3]}]]}"),
                    std::invalid_argument);
    CHECK_THROWS_AS(load_tables_file("/nonexistent/t.json"), std::runtime_error);
}

TEST_CASE("mutual information is zero for symmetric and one for separated data") {
    std::vector<std::int64_t> pos(8, 0), neg(8, 0);
    pos[0] = 10;  // unsigned bin counts for both signs
    for (int m = 1; m < 8; ++m) pos[m] = neg[m] = 3 * m;
    for (std::vector<std::int32_t> th :
         {std::vector<std::int32_t>{3}, std::vector<std::int32_t>{1, 4, 6}}) {
        CHECK(quantizer_mutual_information(pos, neg, th) ==
              doctest::Approx(0.0).epsilon(1e-12));
    }

    std::vector<std::int64_t> clean_pos{0, 10, 0, 30}, clean_neg{0, 0, 0, 0};
    const std::vector<std::int32_t> th{2};
    CHECK(quantizer_mutual_information(clean_pos, clean_neg, th) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("threshold search matches exhaustive enumeration") {
    // bv = 4 grid (magnitudes 0..7), 4 clusters -> 3 thresholds from 1..7
    NoiseStream rng(11, 0, 0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::int64_t> pos(8), neg(8);
        for (int m = 0; m < 8; ++m) {
            pos[m] = static_cast<std::int64_t>(rng.uniform() * 1000) + (m == 0 ? 1 : 0);
            neg[m] = m == 0 ? 0 : static_cast<std::int64_t>(rng.uniform() * 1000 / (m + 1));
        }
        const QuantizerDesign got = design_quantizer(pos, neg, 4);

        double best = -1.0;
        for (std::int32_t a = 1; a <= 5; ++a)
            for (std::int32_t b = a + 1; b <= 6; ++b)
                for (std::int32_t c = b + 1; c <= 7; ++c) {
                    const std::vector<std::int32_t> th{a, b, c};
                    best = std::max(best, quantizer_mutual_information(pos, neg, th));
                }
        CHECK(got.mutual_information == doctest::Approx(best).epsilon(1e-12));
        CHECK(quantizer_mutual_information(pos, neg, got.thresholds) ==
              doctest::Approx(got.mutual_information).epsilon(1e-12));
        CHECK(got.thresholds.size() == 3);
        CHECK(std::is_sorted(got.thresholds.begin(), got.thresholds.end()));
    }
}

TEST_CASE("design rejects bad shapes") {
    std::vector<std::int64_t> pos(8, 1), neg(8, 1);
    CHECK_THROWS_AS(design_quantizer(pos, neg, 9), std::invalid_argument);
    CHECK_THROWS_AS(design_quantizer(pos, neg, 0), std::invalid_argument);
    std::vector<std::int64_t> short_neg(7, 1);
    CHECK_THROWS_AS(design_quantizer(pos, short_neg, 4), std::invalid_argument);
    std::vector<std::int64_t> zero(8, 0);
    CHECK_THROWS_AS(design_quantizer(zero, zero, 4), std::invalid_argument);
}

TEST_CASE("histogram collection sees every message of a noiseless pilot") {
    const QcCode code = fixture();
    ChannelConfig chan;
    chan.noiseless = true;
    DecoderConfig pilot;
    pilot.algorithm = Algorithm::kFloatMinSum;
    pilot.imax = 1;
    pilot.early_stop = false;
    const MessageHistogram h = collect_histograms(code, pilot, chan, 3);
    CHECK(h.imax == 1);
    CHECK(h.num_layers == 2);
    std::int64_t total = 0, saturated = 0;
    for (const auto& cell : h.pos)
        for (std::size_t m = 0; m < cell.size(); ++m) {
            total += cell[m];
            if (m == 127) saturated += cell[m];
        }
    for (const auto& cell : h.neg) {
        CHECK(cell[0] == 0);
        for (std::int64_t c : cell) total += c;
    }
    CHECK(total == 3 * code.num_edges());
    CHECK(saturated == 3 * code.num_edges());

    DecoderConfig wrong = pilot;
    wrong.algorithm = Algorithm::kOms;
    CHECK_THROWS_AS(collect_histograms(code, wrong, chan, 3), std::invalid_argument);
    CHECK_THROWS_AS(collect_histograms(code, pilot, chan, 0), std::invalid_argument);
}

TEST_CASE("designed tables are well formed and symmetric data reconstructs to zero") {
    MessageHistogram h;
    h.bv = 6;
    h.imax = 2;
    h.num_layers = 2;
    const int nmag = 32;
    h.pos.assign(4, std::vector<std::int64_t>(nmag, 0));
    h.neg = h.pos;
    for (std::size_t cell = 0; cell < 4; ++cell)
        for (int m = 1; m < nmag; ++m) {
            h.pos[cell][m] = 40 + 3 * m + static_cast<int>(cell);
            h.neg[cell][m] = h.pos[cell][m];
        }
    const RcqTables t = design_tables(h, 3, 6, 0.5);
    CHECK_NOTHROW(validate_tables(t));
    CHECK(t.imax == 2);
    CHECK(t.num_layers == 2);
    for (const RcqTableEntry& e : t.entries)
        for (std::int32_t r : e.recons) CHECK(r == 0);

    // skewing one sign upward makes confidence, and so the recons, grow
    for (std::size_t cell = 0; cell < 4; ++cell)
        for (int m = 1; m < nmag; ++m) h.neg[cell][m] = h.pos[cell][m] / (1 + m);
    const RcqTables skew = design_tables(h, 3, 6, 0.5);
    CHECK_NOTHROW(validate_tables(skew));
    CHECK(skew.at(1, 0).recons.back() > 0);

    MessageHistogram bad = h;
    bad.pos[1].assign(nmag, 0);
    bad.neg[1].assign(nmag, 0);
    CHECK_THROWS_AS(design_tables(bad, 3, 6, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(design_tables(h, 3, 6, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(design_tables(h, 1, 6, 0.5), std::invalid_argument);
}

TEST_CASE("extending tables repeats the last designed iteration") {
    const RcqTables t = small_tables();
    const RcqTables full = extend_tables(t, 5);
    CHECK(full.imax == 5);
    CHECK(full.entries.size() == 10);
    for (int iter = 3; iter <= 5; ++iter)
        for (int layer = 0; layer < 2; ++layer) {
            CHECK(full.at(iter, layer).thresholds == t.at(2, layer).thresholds);
            CHECK(full.at(iter, layer).recons == t.at(2, layer).recons);
        }
    CHECK_NOTHROW(validate_tables(full));

    const RcqTables same = extend_tables(t, 2);
    CHECK(same.entries.size() == t.entries.size());
    CHECK_THROWS_AS(extend_tables(t, 1), std::invalid_argument);
}

TEST_CASE("quantized decoding with designed tables still corrects a clean frame") {
    const QcCode code = fixture();
    ChannelConfig chan;
    chan.noiseless = true;
    DecoderConfig pilot;
    pilot.algorithm = Algorithm::kFloatMinSum;
    pilot.imax = 2;
    pilot.early_stop = false;
    ChannelConfig noisy = chan;
    noisy.noiseless = false;
    noisy.ebno_db = 3.0;
    noisy.code_rate = code.code_rate();
    const RcqTables t =
        extend_tables(design_tables(collect_histograms(code, pilot, noisy, 200), 4, 8, 0.5), 16);
    CHECK_NOTHROW(validate_tables(t));

    DecoderConfig cfg;
    cfg.algorithm = Algorithm::kMsRcq;
    cfg.bc = 4;
    const auto llrs = simulate_frame(code.n(), chan, 0);
    std::vector<std::int32_t> q(llrs.size());
    for (std::size_t i = 0; i < llrs.size(); ++i) q[i] = quantize_llr(llrs[i], 0.5, 8);
    const DecodeResult res = decode(code, cfg, q, &t);
    CHECK(res.converged);
    for (std::uint8_t b : res.hard_bits) CHECK(b == 0);
}

}  // TEST_SUITE rcq
