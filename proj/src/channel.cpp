#include "ldpclab/channel.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

#include "ldpclab/rng.hpp"

namespace ldpclab {

double ebno_to_sigma(double ebno_db, double code_rate) {
    if (!(code_rate > 0.0) || !(code_rate < 1.0))
        throw std::invalid_argument("channel: code rate must lie in (0, 1)");
    return std::sqrt(1.0 / (2.0 * code_rate * std::pow(10.0, ebno_db / 10.0)));
}

std::vector<double> simulate_frame(int n, const ChannelConfig& cfg,
                                   std::uint64_t frame_index,
                                   std::span<const std::uint8_t> codeword) {
    if (n <= 0) throw std::invalid_argument("channel: frame length must be positive");
    if (!codeword.empty() && static_cast<int>(codeword.size()) != n)
        throw std::invalid_argument("channel: codeword length mismatch");
    std::vector<double> llrs(n);
    if (cfg.noiseless) {
        // large enough to saturate any sane quantizer grid
        for (int k = 0; k < n; ++k)
            llrs[k] = (codeword.empty() || codeword[k] == 0) ? 1e9 : -1e9;
        return llrs;
    }
    const double sigma = ebno_to_sigma(cfg.ebno_db, cfg.code_rate);
    const double scale = 2.0 / (sigma * sigma);
    NoiseStream rng(cfg.seed, cfg.stream_id, frame_index);
    for (int k = 0; k < n; ++k) {
        const double x = (codeword.empty() || codeword[k] == 0) ? 1.0 : -1.0;
        llrs[k] = scale * (x + sigma * rng.gaussian());
    }
    return llrs;
}

std::int32_t quantize_llr(double llr, double llr_step, int bv) {
    if (!(llr_step > 0.0)) throw std::invalid_argument("channel: llr step must be positive");
    if (bv < 2 || bv > 15) throw std::invalid_argument("channel: bv out of range");
    const std::int32_t vmax = (1 << (bv - 1)) - 1;
    const double scaled = llr / llr_step;
    if (scaled >= vmax) return vmax;
    if (scaled <= -vmax) return -vmax;
    return static_cast<std::int32_t>(std::lround(scaled));
}

std::vector<std::vector<std::uint8_t>> parse_codeword_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open codeword file: " + path);
    std::vector<std::vector<std::uint8_t>> frames;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::uint8_t> bits;
        bits.reserve(line.size());
        for (char ch : line) {
            if (ch == '0')
                bits.push_back(0);
            else if (ch == '1')
                bits.push_back(1);
            else if (ch == '\r')
                continue;
            else
                throw std::invalid_argument("codeword file: unexpected character '" +
                                            std::string(1, ch) + "'");
        }
        frames.push_back(std::move(bits));
    }
    if (frames.empty()) throw std::invalid_argument("codeword file: no frames");
    return frames;
}

}  // namespace ldpclab
