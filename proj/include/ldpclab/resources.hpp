#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ldpclab {

class QcCode;
struct DecoderConfig;

enum class DeliveryMethod { kOmsBaseline, kLookup, kBroadcast, kDribble };

const char* method_name(DeliveryMethod m);

// Dimensions of the per-(iteration, layer) parameter set.
struct TablesShape {
    int bc = 4;
    int imax = 16;
    int num_layers = 1;
};

// Closed-form cost model for getting quantizer parameters to L parallel
// check-node units, plus the message memories every variant carries.
struct ResourceEstimate {
    DeliveryMethod method = DeliveryMethod::kOmsBaseline;
    long long extra_param_roms = 0;
    long long rom_bits_q = 0;
    long long rom_bits_r = 0;
    long long broadcast_wires = 0;
    long long dribble_register_bits = 0;
    long long dribble_transfer_wires = 0;
    long long edge_memory_bits = 0;
    long long apllr_memory_bits = 0;
};

// w = routed width per parameter wire bundle (a sane default is bv - 1),
// batch = parameters moved per transfer beat for the staged method,
// rom_share = ports sharing one physical ROM (1 = no sharing).
ResourceEstimate estimate(const QcCode& code, const DecoderConfig& cfg,
                          const TablesShape& shape, DeliveryMethod method, int w,
                          int batch, int rom_share = 1);

// Baseline offset-min-sum row (bc = bv - 2 convention) followed by the three
// parameter delivery variants at the config's widths.
std::vector<ResourceEstimate> compare_methods(const QcCode& code,
                                              const DecoderConfig& cfg, int w,
                                              int batch);

// columns: every estimate field, then the same fields as deltas against the
// first (baseline) row
std::string render_comparison_csv(const std::vector<ResourceEstimate>& rows);
std::string render_comparison_text(const std::vector<ResourceEstimate>& rows);

}  // namespace ldpclab
