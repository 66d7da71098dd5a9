#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace ldpclab {

class QcCode;
struct DecoderConfig;
struct ChannelConfig;

// Per-(iteration, layer) quantizer: thresholds map a bv-bit magnitude to a
// (bc-1)-bit cluster index, recons map the index back to a bv-bit magnitude.
struct RcqTableEntry {
    std::vector<std::int32_t> thresholds;  // strictly increasing, 2^(bc-1)-1 entries
    std::vector<std::int32_t> recons;      // nondecreasing, 2^(bc-1) entries
};

struct RcqTables {
    int bc = 3;
    int bv = 8;
    int imax = 16;
    int num_layers = 1;
    std::vector<RcqTableEntry> entries;  // [(iter-1)*num_layers + layer]

    const RcqTableEntry& at(int iter, int layer) const {
        return entries[static_cast<size_t>(iter - 1) * num_layers + layer];
    }
};

// throws with the offending (iteration, layer, position) spelled out
void validate_tables(const RcqTables& tables);

// cluster index = number of thresholds <= magnitude
int quantize_msg(std::int32_t magnitude, std::span<const std::int32_t> thresholds);
std::int32_t reconstruct_msg(int index, std::span<const std::int32_t> recons);

// thresholds 1..2^(bc-1)-1 and recons 0..2^(bc-1)-1; composing quantize with
// reconstruct then clips magnitudes at 2^(bc-1)-1
RcqTables identity_tables(int bc, int bv, int imax, int num_layers);

RcqTables load_tables(std::istream& in);
RcqTables load_tables_file(const std::string& path);
void save_tables(const RcqTables& tables, std::ostream& out);
void save_tables_file(const RcqTables& tables, const std::string& path);

// Counts of variable-to-check values on the bv-bit grid, split by sign,
// conditioned on an all-zero transmitted frame. neg[0] stays zero.
struct MessageHistogram {
    int bv = 8;
    int imax = 16;
    int num_layers = 1;
    std::vector<std::vector<std::int64_t>> pos;  // [(iter-1)*layers + layer][mag]
    std::vector<std::vector<std::int64_t>> neg;

    std::size_t cell(int iter, int layer) const {
        return static_cast<std::size_t>(iter - 1) * num_layers + layer;
    }
};

// Runs the floating-point min-sum pilot at the design SNR and bins every
// variable-to-check value before quantization. The pilot config must use
// the FLOAT_MINSUM algorithm.
MessageHistogram collect_histograms(const QcCode& code, const DecoderConfig& pilot,
                                    const ChannelConfig& chan, long long frames);

// Maximum mutual information between the transmitted bit and the quantizer
// output (sign, cluster) over contiguous magnitude partitions, found by
// dynamic programming. Returns the thresholds and the achieved value in bits.
struct QuantizerDesign {
    std::vector<std::int32_t> thresholds;
    double mutual_information = 0.0;
};
QuantizerDesign design_quantizer(std::span<const std::int64_t> pos,
                                 std::span<const std::int64_t> neg, int clusters);

// Mutual information in bits achieved by a given threshold vector; shared by
// the designer and its exhaustive-search oracle.
double quantizer_mutual_information(std::span<const std::int64_t> pos,
                                    std::span<const std::int64_t> neg,
                                    std::span<const std::int32_t> thresholds);

// One quantizer per histogram cell; recons are the cluster LLR magnitudes on
// the llr_step grid, repaired to be nondecreasing.
RcqTables design_tables(const MessageHistogram& hist, int bc, int bv, double llr_step);

// Stretches a short table set to a longer iteration count by repeating the
// last designed iteration. Histograms collected past the first couple of
// iterations mix converged and stuck frames, which skews the cluster LLR
// estimates, so designs are run over a short pilot horizon and held constant
// from there on.
RcqTables extend_tables(const RcqTables& tables, int imax);

}  // namespace ldpclab
