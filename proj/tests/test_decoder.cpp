#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "ldpclab/channel.hpp"
#include "ldpclab/decoder.hpp"
#include "ldpclab/qc_code.hpp"
#include "ldpclab/rcq.hpp"

using namespace ldpclab;

namespace {

QcCode fixture() {
    std::istringstream in("2 4 4\n0 1 -1 2\n2 -1 0 1\n");
    return parse_qc_base_matrix(in);
}

// shifts (row * col) mod L give every check degree 6
QcCode array_code() {
    std::vector<std::vector<int>> base(3, std::vector<int>(6));
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 6; ++c) base[r][c] = (r * c) % 97;
    return QcCode(97, std::move(base));
}

int variable_of_edge(const QcCode& code, int edge) {
    const EdgeIndex e = code.edge_of(edge);
    const int shift = code.base_matrix()[e.block_row][e.block_col];
    return e.block_col * code.lifting_size() +
           circulant_column(e.offset, shift, code.lifting_size());
}

std::vector<std::int32_t> quantized_frame(const QcCode& code, const ChannelConfig& chan,
                                          std::uint64_t frame) {
    const auto llrs = simulate_frame(code.n(), chan, frame);
    std::vector<std::int32_t> q(llrs.size());
    for (std::size_t i = 0; i < llrs.size(); ++i)
        q[i] = quantize_llr(llrs[i], chan.llr_step, chan.bv);
    return q;
}

}  // namespace

TEST_SUITE("decoder") {

TEST_CASE("symmetric clipping") {
    CHECK(clip_symmetric(12, 4) == 7);
    CHECK(clip_symmetric(-9, 4) == -7);
    CHECK(clip_symmetric(3, 4) == 3);
    CHECK(clip_symmetric(-7, 4) == -7);
    CHECK(clip_symmetric(1LL << 40, 8) == 127);
    CHECK(clip_symmetric(-(1LL << 40), 8) == -127);
    CHECK(clip_symmetric(0, 2) == 0);
    CHECK_THROWS_AS(clip_symmetric(0, 1), std::invalid_argument);
}

TEST_CASE("check accumulator keeps the two smallest magnitudes") {
    CnAccumulator acc;
    cn_accumulate(acc, 10, false, 5);
    cn_accumulate(acc, 11, true, 2);
    cn_accumulate(acc, 12, true, 7);
    CHECK(acc.min1 == 2);
    CHECK(acc.min1_edge == 11);
    CHECK(acc.min2 == 5);
    CHECK(acc.sign == 0);  // two negatives cancel
    CHECK(cn_select(acc, 11) == 5);  // excluded edge holds min1
    CHECK(cn_select(acc, 10) == 2);
    CHECK(cn_select(acc, 12) == 2);
}

TEST_CASE("accumulator ties keep the first edge") {
    CnAccumulator acc;
    cn_accumulate(acc, 0, false, 5);
    cn_accumulate(acc, 1, true, 2);
    cn_accumulate(acc, 2, false, 7);
    cn_accumulate(acc, 3, false, 2);
    CHECK(acc.min1 == 2);
    CHECK(acc.min1_edge == 1);  // first of the tied pair
    CHECK(acc.min2 == 2);
    CHECK(acc.sign == 1);
    CHECK(cn_select(acc, 1) == 2);
    CHECK(cn_select(acc, 3) == 2);

    CnAccumulator two;
    cn_accumulate(two, 4, false, 3);
    cn_accumulate(two, 5, false, 3);
    CHECK(cn_select(two, 4) == 3);
    CHECK(cn_select(two, 5) == 3);
}

TEST_CASE("syndrome counts unsatisfied checks") {
    const QcCode code = fixture();
    std::vector<std::uint8_t> bits(code.n(), 0);
    auto [ok, weight] = syndrome_check(code, bits);
    CHECK(ok);
    CHECK(weight == 0);

    bits[0] = 1;  // variable 0 sits in one circulant per layer
    auto [ok1, w1] = syndrome_check(code, bits);
    CHECK_FALSE(ok1);
    CHECK(w1 == 2);

    bits.assign(code.n(), 0);
    bits[5] = 1;  // block-column 1 only appears in layer 0
    auto [ok2, w2] = syndrome_check(code, bits);
    CHECK_FALSE(ok2);
    CHECK(w2 == 1);

    std::vector<std::uint8_t> wrong(code.n() - 1, 0);
    CHECK_THROWS_AS(syndrome_check(code, wrong), std::invalid_argument);
}

TEST_CASE("noiseless decode converges immediately") {
    const QcCode code = fixture();
    ChannelConfig chan;
    chan.noiseless = true;
    DecoderConfig cfg;
    const DecodeResult res = decode(code, cfg, quantized_frame(code, chan, 0));
    CHECK(res.converged);
    CHECK(res.iterations_used == 1);
    REQUIRE(res.syndrome_weight_trace.size() == 1);
    CHECK(res.syndrome_weight_trace[0] == 0);
    for (std::uint8_t b : res.hard_bits) CHECK(b == 0);
}

TEST_CASE("disabling early stop runs every iteration") {
    const QcCode code = array_code();
    ChannelConfig chan;
    chan.ebno_db = 3.0;
    chan.code_rate = code.code_rate();
    DecoderConfig cfg;
    cfg.imax = 5;
    cfg.early_stop = false;
    const DecodeResult res = decode(code, cfg, quantized_frame(code, chan, 0));
    CHECK(res.iterations_used == 5);
    CHECK(res.syndrome_weight_trace.size() == 5);
}

TEST_CASE("hooks fire once per edge per phase and state is consistent") {
    const QcCode code = fixture();
    ChannelConfig chan;
    chan.ebno_db = 0.0;
    chan.code_rate = code.code_rate();
    DecoderConfig cfg;
    cfg.imax = 2;
    cfg.early_stop = false;

    int vn_calls = 0, cn_calls = 0;
    DecodeHooks hooks;
    hooks.on_vn_message = [&](int iter, int layer, int edge, std::int32_t) {
        CHECK(iter >= 1);
        CHECK(iter <= 2);
        CHECK(layer >= 0);
        CHECK(layer < 2);
        CHECK(edge >= 0);
        CHECK(edge < code.num_edges());
        ++vn_calls;
    };
    hooks.on_cn_writeback = [&](int, int, int, std::int32_t) { ++cn_calls; };

    DecodeState state;
    decode(code, cfg, quantized_frame(code, chan, 3), nullptr, &hooks, &state);
    CHECK(vn_calls == 2 * code.num_edges());
    CHECK(cn_calls == 2 * code.num_edges());

    REQUIRE(state.v.size() == static_cast<std::size_t>(code.n()));
    REQUIRE(state.u.size() == static_cast<std::size_t>(code.num_edges()));
    // after the last layer touching a variable, v = clip(vmn + u) must hold
    std::vector<int> last_layer(code.n(), -1), last_edge(code.n(), -1);
    for (int e = 0; e < code.num_edges(); ++e) {
        const int var = variable_of_edge(code, e);
        const int layer = code.edge_of(e).block_row;
        if (layer >= last_layer[var]) {
            last_layer[var] = layer;
            last_edge[var] = e;
        }
    }
    for (int var = 0; var < code.n(); ++var) {
        const int e = last_edge[var];
        REQUIRE(e >= 0);
        CHECK(state.v[var] ==
              clip_symmetric(static_cast<std::int64_t>(state.vmn[e]) + state.u[e], cfg.bv));
    }
}

TEST_CASE("identity tables reproduce clipped min-sum") {
    const QcCode code = array_code();
    ChannelConfig chan;
    chan.ebno_db = 2.0;
    chan.code_rate = code.code_rate();

    for (int bc : {3, 4}) {
        const RcqTables tables = identity_tables(bc, 8, 16, code.block_rows());
        DecoderConfig oms;
        oms.algorithm = Algorithm::kOms;
        oms.bc = bc;
        oms.offset_int = 0;
        DecoderConfig rcq;
        rcq.algorithm = Algorithm::kMsRcq;
        rcq.bc = bc;
        for (std::uint64_t f = 0; f < 25; ++f) {
            const auto q = quantized_frame(code, chan, f);
            DecodeState sa, sb;
            const DecodeResult a = decode(code, oms, q, nullptr, nullptr, &sa);
            const DecodeResult b = decode(code, rcq, q, &tables, nullptr, &sb);
            CHECK(a.hard_bits == b.hard_bits);
            CHECK(a.iterations_used == b.iterations_used);
            CHECK(a.converged == b.converged);
            CHECK(sa.v == sb.v);
        }
    }
}

TEST_CASE("negating every llr complements the decode on even-degree checks") {
    const QcCode code = array_code();
    ChannelConfig chan;
    chan.noiseless = true;
    DecoderConfig cfg;
    const auto q = quantized_frame(code, chan, 0);
    std::vector<std::int32_t> neg(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) neg[i] = -q[i];
    const DecodeResult pos_res = decode(code, cfg, q);
    const DecodeResult neg_res = decode(code, cfg, neg);
    CHECK(pos_res.converged);
    CHECK(neg_res.converged);
    CHECK(pos_res.iterations_used == neg_res.iterations_used);
    for (std::size_t i = 0; i < pos_res.hard_bits.size(); ++i) {
        CHECK(pos_res.hard_bits[i] == 0);
        CHECK(neg_res.hard_bits[i] == 1);
    }
}

TEST_CASE("float engines agree when the offset vanishes") {
    const QcCode code = array_code();
    ChannelConfig chan;
    chan.ebno_db = 2.0;
    chan.code_rate = code.code_rate();
    DecoderConfig oms;
    oms.algorithm = Algorithm::kFloatOms;
    oms.offset_llr = 0.0;
    DecoderConfig ms;
    ms.algorithm = Algorithm::kFloatMinSum;
    for (std::uint64_t f = 0; f < 10; ++f) {
        const auto llrs = simulate_frame(code.n(), chan, f);
        std::vector<double> va, vb;
        const DecodeResult a = reference_decode(code, oms, llrs, nullptr, &va);
        const DecodeResult b = reference_decode(code, ms, llrs, nullptr, &vb);
        CHECK(a.hard_bits == b.hard_bits);
        CHECK(a.iterations_used == b.iterations_used);
        CHECK(va == vb);
    }
}

TEST_CASE("configuration errors are rejected") {
    const QcCode code = fixture();
    std::vector<std::int32_t> q(code.n(), 0);
    DecoderConfig cfg;

    DecoderConfig bad = cfg;
    bad.imax = 0;
    CHECK_THROWS_AS(decode(code, bad, q), std::invalid_argument);

    bad = cfg;
    bad.algorithm = Algorithm::kFloatOms;
    CHECK_THROWS_AS(decode(code, bad, q), std::invalid_argument);
    CHECK_THROWS_AS(reference_decode(code, cfg, std::vector<double>(code.n(), 0.0)),
                    std::invalid_argument);

    bad = cfg;
    bad.algorithm = Algorithm::kMsRcq;
    CHECK_THROWS_AS(decode(code, bad, q), std::invalid_argument);  // tables missing

    const RcqTables tables = identity_tables(4, 8, 16, code.block_rows());
    CHECK_THROWS_AS(decode(code, cfg, q, &tables), std::invalid_argument);  // unused tables

    bad = cfg;
    bad.algorithm = Algorithm::kMsRcq;
    bad.bc = 4;
    bad.imax = 32;  // tables stop at 16
    CHECK_THROWS_AS(decode(code, bad, q, &tables), std::invalid_argument);

    std::vector<std::int32_t> loud(code.n(), 300);  // outside the bv=8 grid
    CHECK_THROWS_AS(decode(code, cfg, loud), std::invalid_argument);

    bad = cfg;
    bad.layer_order = std::vector<std::vector<int>>{{0, 1, 3}};  // one layer short
    CHECK_THROWS_AS(decode(code, bad, q), std::invalid_argument);
    bad.layer_order = std::vector<std::vector<int>>{{0, 1, 3}, {0, 2, 2}};
    CHECK_THROWS_AS(decode(code, bad, q), std::invalid_argument);
}

TEST_CASE("custom layer order must keep results identical") {
    const QcCode code = fixture();
    ChannelConfig chan;
    chan.ebno_db = 0.0;
    chan.code_rate = code.code_rate();
    DecoderConfig plain;
    DecoderConfig shuffled;
    shuffled.layer_order = std::vector<std::vector<int>>{{3, 0, 1}, {2, 3, 0}};
    for (std::uint64_t f = 0; f < 50; ++f) {
        const auto q = quantized_frame(code, chan, f);
        const DecodeResult a = decode(code, plain, q);
        const DecodeResult b = decode(code, shuffled, q);
        CHECK(a.hard_bits == b.hard_bits);
        CHECK(a.iterations_used == b.iterations_used);
        CHECK(a.syndrome_weight_trace == b.syndrome_weight_trace);
    }
}

}  // TEST_SUITE decoder
