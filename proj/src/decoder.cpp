#include "ldpclab/decoder.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ldpclab/qc_code.hpp"
#include "ldpclab/rcq.hpp"

namespace ldpclab {

void cn_accumulate(CnAccumulator& acc, int edge, bool sign, std::int32_t magnitude) {
    acc.sign ^= static_cast<std::uint8_t>(sign);
    if (magnitude < acc.min1) {
        acc.min2 = acc.min1;
        acc.min1 = magnitude;
        acc.min1_edge = edge;
    } else if (magnitude < acc.min2) {
        acc.min2 = magnitude;
    }
}

std::int32_t cn_select(const CnAccumulator& acc, int edge) {
    return edge == acc.min1_edge ? acc.min2 : acc.min1;
}

std::int32_t clip_symmetric(std::int64_t value, int bits) {
    if (bits < 2 || bits > 30)
        throw std::invalid_argument("clip: width out of range");
    const std::int64_t lim = (1LL << (bits - 1)) - 1;
    return static_cast<std::int32_t>(std::clamp(value, -lim, lim));
}

std::pair<bool, int> syndrome_check(const QcCode& code,
                                    std::span<const std::uint8_t> bits) {
    if (static_cast<int>(bits.size()) != code.n())
        throw std::invalid_argument("syndrome: bit vector length mismatch");
    const int L = code.lifting_size();
    std::vector<std::uint8_t> parity(code.m(), 0);
    for (const auto& layer : code.layers()) {
        for (const Circulant& c : layer) {
            const int chk0 = c.layer * L;
            const int var0 = c.col * L;
            for (int r = 0; r < L; ++r) {
                int off = r + c.shift;
                if (off >= L) off -= L;
                parity[chk0 + r] ^= bits[var0 + off];
            }
        }
    }
    int weight = 0;
    for (std::uint8_t p : parity) weight += p;
    return {weight == 0, weight};
}

namespace {

// processing order per layer, defaulting to ascending block-column
std::vector<std::vector<const Circulant*>> resolve_plan(const QcCode& code,
                                                        const DecoderConfig& cfg) {
    const int rows = code.block_rows();
    std::vector<std::vector<const Circulant*>> plan(rows);
    if (cfg.layer_order && static_cast<int>(cfg.layer_order->size()) != rows)
        throw std::invalid_argument("decode: layer order has wrong layer count");
    for (int l = 0; l < rows; ++l) {
        const auto& circs = code.layer_circulants(l);
        if (!cfg.layer_order) {
            for (const auto& c : circs) plan[l].push_back(&c);
            continue;
        }
        const auto& order = (*cfg.layer_order)[l];
        if (order.size() != circs.size())
            throw std::invalid_argument("decode: layer order size mismatch at layer " +
                                        std::to_string(l));
        std::vector<char> used(circs.size(), 0);
        for (int col : order) {
            size_t idx = 0;
            while (idx < circs.size() && circs[idx].col != col) ++idx;
            if (idx == circs.size() || used[idx])
                throw std::invalid_argument(
                    "decode: layer order is not a permutation of layer " +
                    std::to_string(l));
            used[idx] = 1;
            plan[l].push_back(&circs[idx]);
        }
    }
    return plan;
}

void check_common(const QcCode& code, const DecoderConfig& cfg, size_t llr_count) {
    if (cfg.imax < 1) throw std::invalid_argument("decode: imax must be at least 1");
    if (static_cast<int>(llr_count) != code.n())
        throw std::invalid_argument("decode: LLR vector length mismatch");
}

}  // namespace

DecodeResult decode(const QcCode& code, const DecoderConfig& cfg,
                    std::span<const std::int32_t> channel_llrs,
                    const RcqTables* tables, const DecodeHooks* hooks,
                    DecodeState* final_state) {
    if (cfg.algorithm != Algorithm::kOms && cfg.algorithm != Algorithm::kMsRcq)
        throw std::invalid_argument("decode: integer engine needs an integer algorithm");
    check_common(code, cfg, channel_llrs.size());
    if (cfg.bc < 2 || cfg.bv < cfg.bc || cfg.bv > 15)
        throw std::invalid_argument("decode: invalid bit widths");
    if (cfg.offset_int < 0) throw std::invalid_argument("decode: negative offset");
    const bool rcq = cfg.algorithm == Algorithm::kMsRcq;
    if (rcq) {
        if (!tables) throw std::invalid_argument("decode: msRCQ needs quantizer tables");
        validate_tables(*tables);
        if (tables->bc != cfg.bc || tables->bv != cfg.bv)
            throw std::invalid_argument("decode: table bit widths disagree with config");
        if (tables->imax < cfg.imax)
            throw std::invalid_argument("decode: tables cover fewer iterations than imax");
        if (tables->num_layers != code.block_rows())
            throw std::invalid_argument("decode: table layer count disagrees with code");
    } else if (tables) {
        throw std::invalid_argument("decode: tables supplied but algorithm is not msRCQ");
    }

    const std::int32_t vmax = (1 << (cfg.bv - 1)) - 1;
    const std::int32_t cmax = (1 << (cfg.bc - 1)) - 1;
    for (std::int32_t llr : channel_llrs)
        if (llr > vmax || llr < -vmax)
            throw std::invalid_argument("decode: channel LLR outside bv range");

    const auto plan = resolve_plan(code, cfg);
    const int L = code.lifting_size();

    DecodeState st;
    st.v.assign(channel_llrs.begin(), channel_llrs.end());
    st.u.assign(code.num_edges(), 0);
    st.vmn.assign(code.num_edges(), 0);

    DecodeResult res;
    res.hard_bits.assign(code.n(), 0);
    std::vector<CnAccumulator> accs(L);

    for (int iter = 1; iter <= cfg.imax; ++iter) {
        for (int l = 0; l < code.block_rows(); ++l) {
            std::fill(accs.begin(), accs.end(), CnAccumulator{});
            for (const Circulant* c : plan[l]) {
                const int e0 = c->id * L;
                const int var0 = c->col * L;
                for (int r = 0; r < L; ++r) {
                    int off = r + c->shift;
                    if (off >= L) off -= L;
                    const int e = e0 + r;
                    const std::int32_t t = clip_symmetric(
                        static_cast<std::int64_t>(st.v[var0 + off]) - st.u[e], cfg.bv);
                    st.vmn[e] = t;
                    if (hooks && hooks->on_vn_message) hooks->on_vn_message(iter, l, e, t);
                    const std::int32_t mag = t < 0 ? -t : t;
                    const std::int32_t qmag =
                        rcq ? quantize_msg(mag, tables->at(iter, l).thresholds)
                            : std::min(mag, cmax);
                    cn_accumulate(accs[r], e, t < 0, qmag);
                }
            }
            for (const Circulant* c : plan[l]) {
                const int e0 = c->id * L;
                const int var0 = c->col * L;
                for (int r = 0; r < L; ++r) {
                    int off = r + c->shift;
                    if (off >= L) off -= L;
                    const int e = e0 + r;
                    std::int32_t mag = cn_select(accs[r], e);
                    if (rcq)
                        mag = reconstruct_msg(mag, tables->at(iter, l).recons);
                    else
                        mag = std::max(mag - cfg.offset_int, 0);
                    const bool neg = (accs[r].sign ^ (st.vmn[e] < 0)) != 0;
                    const std::int32_t unew = neg ? -mag : mag;
                    st.u[e] = unew;
                    st.v[var0 + off] =
                        clip_symmetric(static_cast<std::int64_t>(st.vmn[e]) + unew,
                                       cfg.bv);
                    if (hooks && hooks->on_cn_writeback)
                        hooks->on_cn_writeback(iter, l, e, unew);
                    assert(unew >= -vmax && unew <= vmax);
                    assert(st.v[var0 + off] >= -vmax && st.v[var0 + off] <= vmax);
                }
            }
        }
        for (int k = 0; k < code.n(); ++k) res.hard_bits[k] = st.v[k] < 0;
        const auto [ok, weight] = syndrome_check(code, res.hard_bits);
        res.syndrome_weight_trace.push_back(weight);
        res.iterations_used = iter;
        if (ok && cfg.early_stop) break;
    }
    res.converged = res.syndrome_weight_trace.back() == 0;
    if (final_state) *final_state = st;
    return res;
}

DecodeResult reference_decode(const QcCode& code, const DecoderConfig& cfg,
                              std::span<const double> channel_llrs,
                              const RefDecodeHooks* hooks, std::vector<double>* final_v) {
    if (cfg.algorithm != Algorithm::kFloatOms && cfg.algorithm != Algorithm::kFloatMinSum)
        throw std::invalid_argument("decode: float engine needs a float algorithm");
    check_common(code, cfg, channel_llrs.size());
    const double offset = cfg.algorithm == Algorithm::kFloatOms ? cfg.offset_llr : 0.0;
    if (offset < 0.0) throw std::invalid_argument("decode: negative offset");

    const auto plan = resolve_plan(code, cfg);
    const int L = code.lifting_size();

    std::vector<double> v(channel_llrs.begin(), channel_llrs.end());
    std::vector<double> u(code.num_edges(), 0.0);
    std::vector<double> vmn(code.num_edges(), 0.0);

    struct FAcc {
        double min1 = std::numeric_limits<double>::infinity();
        double min2 = std::numeric_limits<double>::infinity();
        int min1_edge = -1;
        std::uint8_t sign = 0;
    };
    std::vector<FAcc> accs(L);

    DecodeResult res;
    res.hard_bits.assign(code.n(), 0);

    for (int iter = 1; iter <= cfg.imax; ++iter) {
        for (int l = 0; l < code.block_rows(); ++l) {
            std::fill(accs.begin(), accs.end(), FAcc{});
            for (const Circulant* c : plan[l]) {
                const int e0 = c->id * L;
                const int var0 = c->col * L;
                for (int r = 0; r < L; ++r) {
                    int off = r + c->shift;
                    if (off >= L) off -= L;
                    const int e = e0 + r;
                    const double t = v[var0 + off] - u[e];
                    vmn[e] = t;
                    if (hooks && hooks->on_vn_message) hooks->on_vn_message(iter, l, e, t);
                    const double mag = std::abs(t);
                    FAcc& acc = accs[r];
                    acc.sign ^= static_cast<std::uint8_t>(t < 0.0);
                    if (mag < acc.min1) {
                        acc.min2 = acc.min1;
                        acc.min1 = mag;
                        acc.min1_edge = e;
                    } else if (mag < acc.min2) {
                        acc.min2 = mag;
                    }
                }
            }
            for (const Circulant* c : plan[l]) {
                const int e0 = c->id * L;
                const int var0 = c->col * L;
                for (int r = 0; r < L; ++r) {
                    int off = r + c->shift;
                    if (off >= L) off -= L;
                    const int e = e0 + r;
                    const FAcc& acc = accs[r];
                    double mag = e == acc.min1_edge ? acc.min2 : acc.min1;
                    mag = std::max(mag - offset, 0.0);
                    const bool neg = (acc.sign ^ static_cast<std::uint8_t>(vmn[e] < 0.0)) != 0;
                    const double unew = neg ? -mag : mag;
                    u[e] = unew;
                    v[var0 + off] = vmn[e] + unew;
                }
            }
        }
        for (int k = 0; k < code.n(); ++k) res.hard_bits[k] = v[k] < 0.0;
        const auto [ok, weight] = syndrome_check(code, res.hard_bits);
        res.syndrome_weight_trace.push_back(weight);
        res.iterations_used = iter;
        if (ok && cfg.early_stop) break;
    }
    res.converged = res.syndrome_weight_trace.back() == 0;
    if (final_v) *final_v = std::move(v);
    return res;
}

}  // namespace ldpclab
