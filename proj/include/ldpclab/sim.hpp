#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ldpclab/decoder.hpp"
#include "ldpclab/rcq.hpp"

namespace ldpclab {

class QcCode;

// One decoder to run in a sweep. `tables` must be present exactly when the
// algorithm needs them; `name` labels the output rows.
struct DecoderSpec {
    std::string name;
    DecoderConfig config;
    std::optional<RcqTables> tables;
};

std::string default_decoder_name(const DecoderConfig& cfg);

struct SweepConfig {
    std::string code_file;
    std::vector<DecoderSpec> decoders;
    std::vector<double> ebno_points_db;
    double llr_step = 0.5;
    std::uint64_t seed = 1;
    bool noiseless = false;
    long long min_frame_errors = 100;
    long long max_frames = 1000000;
    int workers = 1;
};

struct FerPoint {
    std::string decoder;
    double ebno_db = 0.0;
    long long frames = 0;
    long long frame_errors = 0;
    long long undetected_errors = 0;
    long long bit_errors = 0;
    double fer = 0.0;
    double ber = 0.0;
    double avg_iterations = 0.0;
    double fer_lo = 0.0;
    double fer_hi = 0.0;
};

// 95% score interval for x successes in n trials; robust at x = 0 and x = n.
std::pair<double, double> wilson_interval(long long x, long long n);

// Runs every decoder over every Eb/N0 point until min_frame_errors errors are
// seen or max_frames frames are decoded. Frames are processed in fixed-size
// batches with per-frame keyed noise streams, so results do not depend on the
// worker count. LDPCLAB_WORKERS overrides config.workers when set.
std::vector<FerPoint> run_fer_sweep(const QcCode& code, const SweepConfig& cfg);

// Convenience wrapper that loads cfg.code_file first.
std::vector<FerPoint> run_fer_sweep(const SweepConfig& cfg);

enum class ResultFormat { kCsv, kJson };

std::string emit_results(const std::vector<FerPoint>& points, ResultFormat format);

// key = value text; '#' starts a comment. Keys: code, ebno (list of dB
// values), llr_step, seed, noiseless, min_frame_errors, max_frames, workers,
// and one `decoder = <algorithm> [key=value ...]` line per decoder
// (algorithms: oms, ms-rcq, float-oms, float-minsum; keys: bc, bv, imax,
// offset_int, offset_llr, tables, name).
SweepConfig parse_sweep_config(std::istream& in);
SweepConfig parse_sweep_config_file(const std::string& path);

}  // namespace ldpclab
