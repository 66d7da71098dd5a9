#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ldpclab {

class QcCode;

struct PipelineParams {
    // extra cycles from a circulant's read to its writeback completion,
    // beyond the layer's own read span
    int depth_d = 0;
    // idle cycles inserted between consecutive layers
    int inter_layer_gap = 0;
};

// Per-layer read order (block-column indices) plus stall cycles inserted
// before the layer's reads.
struct Schedule {
    std::vector<std::vector<int>> layer_order;
    std::vector<int> stalls;
};

struct HazardViolation {
    int layer = 0;      // reading layer
    int block_col = 0;  // column read before its writeback completed
    int slack = 0;      // negative when violating
};

Schedule default_schedule(const QcCode& code);

// Read-after-write check across consecutive layers, the iteration wrap
// included. A shared column with read position j_r and earlier writeback
// position j_w violates when j_r + gap + stalls <= j_w + depth;
// slack = j_r + gap + stalls - j_w - depth - 1.
std::vector<HazardViolation> verify_schedule(const QcCode& code, const Schedule& s,
                                             const PipelineParams& p);

// Greedy ordering: columns shared with the previous layer go late (ascending
// previous writeback position), columns shared with the next layer go early,
// the rest fill the middle; then the smallest per-layer stall counts that
// clear every violation. The result always verifies clean.
Schedule find_hazard_free_schedule(const QcCode& code, const PipelineParams& p);

// reads of every layer plus stalls and gaps, plus the final layer's drain
long long cycles_per_iteration(const QcCode& code, const Schedule& s,
                               const PipelineParams& p);

Schedule parse_schedule(std::istream& in);
Schedule parse_schedule_file(const std::string& path);
std::string serialize_schedule(const Schedule& s);

}  // namespace ldpclab
