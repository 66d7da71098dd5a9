#include "ldpclab/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "ldpclab/channel.hpp"
#include "ldpclab/qc_code.hpp"

namespace ldpclab {
namespace {

// frames decoded between stopping checks; constant so that results cannot
// depend on how many workers share a batch
constexpr long long kFrameBatch = 256;

constexpr double kZ95 = 1.959963984540054;

struct Tally {
    long long frames = 0;
    long long frame_errors = 0;
    long long undetected_errors = 0;
    long long bit_errors = 0;
    long long iterations = 0;

    void merge(const Tally& o) {
        frames += o.frames;
        frame_errors += o.frame_errors;
        undetected_errors += o.undetected_errors;
        bit_errors += o.bit_errors;
        iterations += o.iterations;
    }
};

bool is_float_algorithm(Algorithm a) {
    return a == Algorithm::kFloatOms || a == Algorithm::kFloatMinSum;
}

// decode one all-zero frame and fold the outcome into the tally
void run_frame(const QcCode& code, const DecoderSpec& spec,
               const ChannelConfig& chan, long long frame, Tally& t) {
    const std::vector<double> llrs =
        simulate_frame(code.n(), chan, static_cast<std::uint64_t>(frame));
    DecodeResult res;
    if (is_float_algorithm(spec.config.algorithm)) {
        res = reference_decode(code, spec.config, llrs);
    } else {
        std::vector<std::int32_t> q(llrs.size());
        for (std::size_t i = 0; i < llrs.size(); ++i)
            q[i] = quantize_llr(llrs[i], chan.llr_step, spec.config.bv);
        res = decode(code, spec.config, q,
                     spec.tables ? &*spec.tables : nullptr);
    }
    long long wrong = 0;
    for (std::uint8_t b : res.hard_bits) wrong += b;  // transmitted all-zero
    t.frames += 1;
    t.bit_errors += wrong;
    t.iterations += res.iterations_used;
    if (!res.converged || wrong != 0) {
        t.frame_errors += 1;
        if (res.converged) t.undetected_errors += 1;
    }
}

Tally run_batch(const QcCode& code, const DecoderSpec& spec,
                const ChannelConfig& chan, long long first, long long count,
                int workers) {
    std::vector<Tally> parts(static_cast<std::size_t>(workers));
    auto work = [&](int tid) {
        for (long long f = first + tid; f < first + count; f += workers)
            run_frame(code, spec, chan, f, parts[static_cast<std::size_t>(tid)]);
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int tid = 0; tid < workers; ++tid) pool.emplace_back(work, tid);
        for (std::thread& th : pool) th.join();
    }
    Tally total;
    for (const Tally& p : parts) total.merge(p);
    return total;
}

int effective_workers(const SweepConfig& cfg) {
    int workers = cfg.workers;
    if (const char* env = std::getenv("LDPCLAB_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v >= 1 && v <= 1024)
            workers = static_cast<int>(v);
    }
    return std::max(1, workers);
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.5e", v);
    return buf;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

long long parse_ll(const std::string& key, const std::string& text) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(text, &pos);
        if (pos != text.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("sweep config: bad integer for '" + key +
                                    "': " + text);
    }
}

double parse_dbl(const std::string& key, const std::string& text) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(text, &pos);
        if (pos != text.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("sweep config: bad number for '" + key +
                                    "': " + text);
    }
}

DecoderSpec parse_decoder_line(const std::string& value, double llr_step) {
    std::istringstream in(value);
    std::string algo;
    if (!(in >> algo))
        throw std::invalid_argument("sweep config: empty decoder line");

    DecoderSpec spec;
    if (algo == "oms") spec.config.algorithm = Algorithm::kOms;
    else if (algo == "ms-rcq") spec.config.algorithm = Algorithm::kMsRcq;
    else if (algo == "float-oms") spec.config.algorithm = Algorithm::kFloatOms;
    else if (algo == "float-minsum")
        spec.config.algorithm = Algorithm::kFloatMinSum;
    else
        throw std::invalid_argument("sweep config: unknown decoder algorithm '" +
                                    algo + "'");

    spec.config.offset_llr = llr_step;  // one integer offset step by default
    std::string tok;
    std::string tables_file;
    while (in >> tok) {
        const std::size_t eq = tok.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(
                "sweep config: decoder option must be key=value, got '" + tok +
                "'");
        const std::string key = tok.substr(0, eq);
        const std::string val = tok.substr(eq + 1);
        if (key == "bc") spec.config.bc = static_cast<int>(parse_ll(key, val));
        else if (key == "bv") spec.config.bv = static_cast<int>(parse_ll(key, val));
        else if (key == "imax")
            spec.config.imax = static_cast<int>(parse_ll(key, val));
        else if (key == "offset_int")
            spec.config.offset_int = static_cast<int>(parse_ll(key, val));
        else if (key == "offset_llr") spec.config.offset_llr = parse_dbl(key, val);
        else if (key == "tables") tables_file = val;
        else if (key == "name") spec.name = val;
        else
            throw std::invalid_argument("sweep config: unknown decoder option '" +
                                        key + "'");
    }
    if (!tables_file.empty()) {
        if (spec.config.algorithm != Algorithm::kMsRcq)
            throw std::invalid_argument(
                "sweep config: tables given for a non-RCQ decoder");
        spec.tables = load_tables_file(tables_file);
    }
    if (spec.config.algorithm == Algorithm::kMsRcq && !spec.tables)
        throw std::invalid_argument(
            "sweep config: ms-rcq decoder needs tables=<file>");
    if (spec.name.empty()) spec.name = default_decoder_name(spec.config);
    return spec;
}

}  // namespace

std::string default_decoder_name(const DecoderConfig& cfg) {
    std::ostringstream out;
    switch (cfg.algorithm) {
        case Algorithm::kOms:
            out << "oms(" << cfg.bc << ',' << cfg.bv << ')';
            break;
        case Algorithm::kMsRcq:
            out << "ms-rcq(" << cfg.bc << ',' << cfg.bv << ')';
            break;
        case Algorithm::kFloatOms:
            out << "float-oms";
            break;
        case Algorithm::kFloatMinSum:
            out << "float-minsum";
            break;
    }
    return out.str();
}

std::pair<double, double> wilson_interval(long long x, long long n) {
    if (n <= 0) throw std::invalid_argument("wilson_interval: no trials");
    if (x < 0 || x > n)
        throw std::invalid_argument("wilson_interval: successes out of range");
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(x) / nn;
    const double z2 = kZ95 * kZ95;
    const double denom = 1.0 + z2 / nn;
    const double center = (p + z2 / (2.0 * nn)) / denom;
    const double half =
        kZ95 * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

std::vector<FerPoint> run_fer_sweep(const QcCode& code, const SweepConfig& cfg) {
    if (cfg.ebno_points_db.empty())
        throw std::invalid_argument("sweep has no Eb/N0 points");
    if (cfg.decoders.empty()) throw std::invalid_argument("sweep has no decoders");
    if (cfg.min_frame_errors < 1)
        throw std::invalid_argument("min_frame_errors must be >= 1");
    if (cfg.max_frames < cfg.min_frame_errors)
        throw std::invalid_argument("max_frames must be >= min_frame_errors");

    const int workers = effective_workers(cfg);
    std::vector<FerPoint> points;
    for (const DecoderSpec& spec : cfg.decoders) {
        for (std::size_t pi = 0; pi < cfg.ebno_points_db.size(); ++pi) {
            ChannelConfig chan;
            chan.ebno_db = cfg.ebno_points_db[pi];
            chan.code_rate = code.code_rate();
            chan.llr_step = cfg.llr_step;
            chan.bv = spec.config.bv;
            chan.seed = cfg.seed;
            chan.stream_id = static_cast<std::uint64_t>(pi);
            chan.noiseless = cfg.noiseless;

            Tally t;
            while (t.frames < cfg.max_frames &&
                   t.frame_errors < cfg.min_frame_errors) {
                const long long count =
                    std::min(kFrameBatch, cfg.max_frames - t.frames);
                t.merge(run_batch(code, spec, chan, t.frames, count, workers));
            }

            FerPoint p;
            p.decoder = spec.name;
            p.ebno_db = chan.ebno_db;
            p.frames = t.frames;
            p.frame_errors = t.frame_errors;
            p.undetected_errors = t.undetected_errors;
            p.bit_errors = t.bit_errors;
            p.fer = static_cast<double>(t.frame_errors) /
                    static_cast<double>(t.frames);
            p.ber = static_cast<double>(t.bit_errors) /
                    (static_cast<double>(t.frames) * code.n());
            p.avg_iterations = static_cast<double>(t.iterations) /
                               static_cast<double>(t.frames);
            std::tie(p.fer_lo, p.fer_hi) =
                wilson_interval(t.frame_errors, t.frames);
            points.push_back(std::move(p));
        }
    }
    return points;
}

std::vector<FerPoint> run_fer_sweep(const SweepConfig& cfg) {
    if (cfg.code_file.empty())
        throw std::invalid_argument("sweep config names no code file");
    return run_fer_sweep(parse_qc_file(cfg.code_file), cfg);
}

std::string emit_results(const std::vector<FerPoint>& points,
                         ResultFormat format) {
    if (points.empty()) throw std::invalid_argument("no sweep points to emit");
    if (format == ResultFormat::kCsv) {
        std::ostringstream out;
        out << "decoder,ebno_db,frames,frame_errors,fer,fer_lo,fer_hi,ber,"
               "avg_iters,undetected_errors\n";
        for (const FerPoint& p : points) {
            out << p.decoder << ',' << sci(p.ebno_db) << ',' << p.frames << ','
                << p.frame_errors << ',' << sci(p.fer) << ',' << sci(p.fer_lo)
                << ',' << sci(p.fer_hi) << ',' << sci(p.ber) << ','
                << sci(p.avg_iterations) << ',' << p.undetected_errors << '\n';
        }
        return out.str();
    }
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const FerPoint& p : points) {
        nlohmann::ordered_json row;
        row["decoder"] = p.decoder;
        row["ebno_db"] = sci(p.ebno_db);
        row["frames"] = p.frames;
        row["frame_errors"] = p.frame_errors;
        row["fer"] = sci(p.fer);
        row["fer_lo"] = sci(p.fer_lo);
        row["fer_hi"] = sci(p.fer_hi);
        row["ber"] = sci(p.ber);
        row["avg_iters"] = sci(p.avg_iterations);
        row["undetected_errors"] = p.undetected_errors;
        arr.push_back(std::move(row));
    }
    return arr.dump(1) + "\n";
}

SweepConfig parse_sweep_config(std::istream& in) {
    SweepConfig cfg;
    std::vector<std::string> decoder_lines;
    std::string line;
    int lineno = 0;
    bool saw_ebno = false;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("sweep config line " +
                                        std::to_string(lineno) +
                                        ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (value.empty())
            throw std::invalid_argument("sweep config: empty value for '" + key +
                                        "'");
        if (key == "code") cfg.code_file = value;
        else if (key == "ebno") {
            std::istringstream vs(value);
            std::string tok;
            cfg.ebno_points_db.clear();
            while (vs >> tok) cfg.ebno_points_db.push_back(parse_dbl(key, tok));
            saw_ebno = true;
        } else if (key == "llr_step") cfg.llr_step = parse_dbl(key, value);
        else if (key == "seed")
            cfg.seed = static_cast<std::uint64_t>(parse_ll(key, value));
        else if (key == "noiseless") cfg.noiseless = parse_ll(key, value) != 0;
        else if (key == "min_frame_errors")
            cfg.min_frame_errors = parse_ll(key, value);
        else if (key == "max_frames") cfg.max_frames = parse_ll(key, value);
        else if (key == "workers")
            cfg.workers = static_cast<int>(parse_ll(key, value));
        else if (key == "decoder") decoder_lines.push_back(value);
        else
            throw std::invalid_argument("sweep config: unknown key '" + key +
                                        "'");
    }
    if (cfg.llr_step <= 0.0)
        throw std::invalid_argument("sweep config: llr_step must be positive");
    for (const std::string& d : decoder_lines)
        cfg.decoders.push_back(parse_decoder_line(d, cfg.llr_step));
    if (cfg.decoders.empty())
        throw std::invalid_argument("sweep config declares no decoders");
    if (!saw_ebno || cfg.ebno_points_db.empty())
        throw std::invalid_argument("sweep config declares no ebno points");
    return cfg;
}

SweepConfig parse_sweep_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open sweep config: " + path);
    return parse_sweep_config(in);
}

}  // namespace ldpclab
