#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ldpclab {

struct ChannelConfig {
    double ebno_db = 0.0;
    double code_rate = 0.5;
    double llr_step = 0.5;  // LLR units per integer step
    int bv = 8;             // quantizer output width, sign included
    std::uint64_t seed = 1;
    std::uint64_t stream_id = 0;
    bool noiseless = false;  // bypass noise, emit saturating LLRs
};

// sigma = sqrt(1 / (2 * rate * 10^(ebno/10))); rate must lie in (0, 1)
double ebno_to_sigma(double ebno_db, double code_rate);

// BPSK over AWGN, bit 0 -> +1. Returns channel LLRs 2*y/sigma^2 for one
// frame; an empty codeword span means the all-zero word.
std::vector<double> simulate_frame(int n, const ChannelConfig& cfg,
                                   std::uint64_t frame_index,
                                   std::span<const std::uint8_t> codeword = {});

// round half away from zero, saturate to +-(2^(bv-1) - 1)
std::int32_t quantize_llr(double llr, double llr_step, int bv);

// Codeword files: one ASCII bit per character, one frame per line.
std::vector<std::vector<std::uint8_t>> parse_codeword_file(const std::string& path);

}  // namespace ldpclab
