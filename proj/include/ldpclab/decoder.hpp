#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace ldpclab {

class QcCode;
struct RcqTables;

enum class Algorithm { kOms, kMsRcq, kFloatOms, kFloatMinSum };

struct DecoderConfig {
    Algorithm algorithm = Algorithm::kOms;
    int bc = 6;              // check message width, sign included
    int bv = 8;              // AP-LLR width, sign included
    int offset_int = 1;      // OMS offset in integer steps
    double offset_llr = 0.5; // offset for the floating-point engines
    int imax = 16;
    bool early_stop = true;  // stop at the first zero-weight syndrome
    // per-layer block-column processing order; empty optional = ascending
    std::optional<std::vector<std::vector<int>>> layer_order;
};

struct DecodeResult {
    std::vector<std::uint8_t> hard_bits;
    bool converged = false;
    int iterations_used = 0;
    std::vector<int> syndrome_weight_trace;  // one entry per finished iteration
};

// Mirrors the three decoder memories: AP-LLRs, per-edge check messages, and
// the per-edge variable-to-check scratch values.
struct DecodeState {
    std::vector<std::int32_t> v;
    std::vector<std::int32_t> u;
    std::vector<std::int32_t> vmn;
};

// Running min1/min2/sign for one check inside a layer.
struct CnAccumulator {
    static constexpr std::int32_t kUnset = std::numeric_limits<std::int32_t>::max();
    std::int32_t min1 = kUnset;
    std::int32_t min2 = kUnset;
    int min1_edge = -1;
    std::uint8_t sign = 0;  // running parity, 1 = negative
};

void cn_accumulate(CnAccumulator& acc, int edge, bool sign, std::int32_t magnitude);
// magnitude of the message excluding the named edge; ties keep the first edge
std::int32_t cn_select(const CnAccumulator& acc, int edge);

// saturate to the symmetric bits-wide range +-(2^(bits-1) - 1)
std::int32_t clip_symmetric(std::int64_t value, int bits);

// (all checks satisfied, number of unsatisfied checks)
std::pair<bool, int> syndrome_check(const QcCode& code,
                                    std::span<const std::uint8_t> bits);

struct DecodeHooks {
    std::function<void(int iter, int layer, int edge, std::int32_t vmn)> on_vn_message;
    std::function<void(int iter, int layer, int edge, std::int32_t u)> on_cn_writeback;
};

struct RefDecodeHooks {
    std::function<void(int iter, int layer, int edge, double vmn)> on_vn_message;
};

// Layered integer decoder, algorithms kOms and kMsRcq. Check messages are
// clipped to bc bits (OMS) or quantized per (iteration, layer) table (RCQ);
// AP-LLRs saturate to bv bits. Hard decision: v >= 0 decodes to bit 0.
DecodeResult decode(const QcCode& code, const DecoderConfig& cfg,
                    std::span<const std::int32_t> channel_llrs,
                    const RcqTables* tables = nullptr,
                    const DecodeHooks* hooks = nullptr,
                    DecodeState* final_state = nullptr);

// Same schedule in double precision without clipping, algorithms kFloatOms
// and kFloatMinSum.
DecodeResult reference_decode(const QcCode& code, const DecoderConfig& cfg,
                              std::span<const double> channel_llrs,
                              const RefDecodeHooks* hooks = nullptr,
                              std::vector<double>* final_v = nullptr);

}  // namespace ldpclab
