#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ldpclab/alist.hpp"
#include "ldpclab/channel.hpp"
#include "ldpclab/decoder.hpp"
#include "ldpclab/qc_code.hpp"
#include "ldpclab/rcq.hpp"
#include "ldpclab/resources.hpp"
#include "ldpclab/schedule.hpp"
#include "ldpclab/sim.hpp"

namespace {

using namespace ldpclab;

QcCode load_code(const std::string& path) {
    if (path.size() > 6 && path.substr(path.size() - 6) == ".alist")
        return parse_alist_file(path);
    return parse_qc_file(path);
}

void write_or_print(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << text;
}

Algorithm algorithm_from_name(const std::string& name) {
    if (name == "oms") return Algorithm::kOms;
    if (name == "ms-rcq") return Algorithm::kMsRcq;
    if (name == "float-oms") return Algorithm::kFloatOms;
    if (name == "float-minsum") return Algorithm::kFloatMinSum;
    throw CLI::ValidationError("--algorithm",
                               "must be one of oms, ms-rcq, float-oms, "
                               "float-minsum");
}

int cmd_simulate(const std::string& config_path, const std::string& out_path,
                 const std::string& format) {
    const SweepConfig cfg = parse_sweep_config_file(config_path);
    const std::vector<FerPoint> points = run_fer_sweep(cfg);
    const ResultFormat fmt =
        format == "json" ? ResultFormat::kJson : ResultFormat::kCsv;
    write_or_print(out_path, emit_results(points, fmt));
    return 0;
}

struct DecodeArgs {
    std::string code_path;
    std::string algorithm = "oms";
    int bc = 6;
    int bv = 8;
    int imax = 16;
    int offset_int = 1;
    double offset_llr = 0.5;
    std::string tables_path;
    double ebno_db = 2.0;
    double llr_step = 0.5;
    std::uint64_t seed = 1;
    std::uint64_t frame = 0;
    bool noiseless = false;
    std::string codeword_path;
    bool print_bits = false;
};

int cmd_decode(const DecodeArgs& a) {
    const QcCode code = load_code(a.code_path);

    DecoderConfig cfg;
    cfg.algorithm = algorithm_from_name(a.algorithm);
    cfg.bc = a.bc;
    cfg.bv = a.bv;
    cfg.imax = a.imax;
    cfg.offset_int = a.offset_int;
    cfg.offset_llr = a.offset_llr;

    std::optional<RcqTables> tables;
    if (!a.tables_path.empty()) tables = load_tables_file(a.tables_path);
    if (cfg.algorithm == Algorithm::kMsRcq && !tables)
        throw std::runtime_error("ms-rcq decoding needs --tables");

    std::vector<std::uint8_t> word;
    if (!a.codeword_path.empty()) {
        const auto words = parse_codeword_file(a.codeword_path);
        if (words.empty())
            throw std::runtime_error("no codewords in " + a.codeword_path);
        word = words[a.frame < words.size() ? a.frame : 0];
        if (static_cast<int>(word.size()) != code.n())
            throw std::runtime_error("codeword length does not match the code");
    }

    ChannelConfig chan;
    chan.ebno_db = a.ebno_db;
    chan.code_rate = code.code_rate();
    chan.llr_step = a.llr_step;
    chan.bv = a.bv;
    chan.seed = a.seed;
    chan.noiseless = a.noiseless;
    const std::vector<double> llrs =
        simulate_frame(code.n(), chan, a.frame, word);

    DecodeResult res;
    if (cfg.algorithm == Algorithm::kFloatOms ||
        cfg.algorithm == Algorithm::kFloatMinSum) {
        res = reference_decode(code, cfg, llrs);
    } else {
        std::vector<std::int32_t> q(llrs.size());
        for (std::size_t i = 0; i < llrs.size(); ++i)
            q[i] = quantize_llr(llrs[i], a.llr_step, a.bv);
        res = decode(code, cfg, q, tables ? &*tables : nullptr);
    }

    long long wrong = 0;
    for (std::size_t i = 0; i < res.hard_bits.size(); ++i)
        wrong += res.hard_bits[i] != (word.empty() ? 0 : word[i]);

    std::cout << "converged = " << (res.converged ? "true" : "false") << '\n'
              << "iterations = " << res.iterations_used << '\n'
              << "bit_errors = " << wrong << '\n'
              << "syndrome_trace =";
    for (int w : res.syndrome_weight_trace) std::cout << ' ' << w;
    std::cout << '\n';
    if (a.print_bits) {
        std::cout << "bits = ";
        for (std::uint8_t b : res.hard_bits) std::cout << int(b);
        std::cout << '\n';
    }
    return res.converged && wrong == 0 ? 0 : 1;
}

struct DesignArgs {
    std::string code_path;
    std::string out_path;
    double ebno_db = 2.5;
    long long frames = 10000;
    int bc = 4;
    int bv = 8;
    int imax = 16;
    int horizon = 2;
    double llr_step = 0.5;
    double offset_llr = 0.0;
    std::uint64_t seed = 1;
};

int cmd_design_rcq(const DesignArgs& a) {
    const QcCode code = load_code(a.code_path);

    // Histogram only the first few iterations, where every frame is still
    // running and the message ensemble is homogeneous; extend_tables holds
    // the last designed iteration for the rest of the decode.
    DecoderConfig pilot;
    pilot.algorithm = Algorithm::kFloatMinSum;
    pilot.bc = a.bc;
    pilot.bv = a.bv;
    pilot.imax = std::min(a.horizon, a.imax);
    pilot.early_stop = false;
    pilot.offset_llr = a.offset_llr;

    ChannelConfig chan;
    chan.ebno_db = a.ebno_db;
    chan.code_rate = code.code_rate();
    chan.llr_step = a.llr_step;
    chan.bv = a.bv;
    chan.seed = a.seed;

    const MessageHistogram hist = collect_histograms(code, pilot, chan, a.frames);
    const RcqTables tables =
        extend_tables(design_tables(hist, a.bc, a.bv, a.llr_step), a.imax);
    std::ostringstream buf;
    save_tables(tables, buf);
    write_or_print(a.out_path, buf.str());
    return 0;
}

struct ScheduleArgs {
    std::string code_path;
    std::string schedule_path;
    std::string out_path;
    int depth = 0;
    int gap = 0;
    bool verify = false;
};

int cmd_schedule(const ScheduleArgs& a) {
    const QcCode code = load_code(a.code_path);
    const PipelineParams params{a.depth, a.gap};

    if (a.verify) {
        const Schedule sched = a.schedule_path.empty()
                                   ? default_schedule(code)
                                   : parse_schedule_file(a.schedule_path);
        const std::vector<HazardViolation> bad =
            verify_schedule(code, sched, params);
        if (bad.empty()) {
            std::cout << "clean: " << cycles_per_iteration(code, sched, params)
                      << " cycles per iteration\n";
            return 0;
        }
        for (const HazardViolation& v : bad)
            std::cout << "violation: layer " << v.layer << " block column "
                      << v.block_col << " slack " << v.slack << '\n';
        return 1;
    }

    const Schedule sched = find_hazard_free_schedule(code, params);
    std::string text = serialize_schedule(sched);
    text += "# " + std::to_string(cycles_per_iteration(code, sched, params)) +
            " cycles per iteration\n";
    write_or_print(a.out_path, text);
    return 0;
}

struct ResourceArgs {
    std::string code_path;
    int bc = 4;
    int bv = 8;
    int imax = 16;
    int w = 8;
    int batch = 8;
    std::string format = "text";
};

int cmd_resources(const ResourceArgs& a) {
    const QcCode code = load_code(a.code_path);
    DecoderConfig cfg;
    cfg.algorithm = Algorithm::kMsRcq;
    cfg.bc = a.bc;
    cfg.bv = a.bv;
    cfg.imax = a.imax;
    const std::vector<ResourceEstimate> rows =
        compare_methods(code, cfg, a.w, a.batch);
    std::cout << (a.format == "csv" ? render_comparison_csv(rows)
                                    : render_comparison_text(rows));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantized layered LDPC decoding laboratory"};
    app.require_subcommand(1);

    std::string sim_config, sim_out, sim_format = "csv";
    CLI::App* sim = app.add_subcommand("simulate", "run an FER/BER sweep");
    sim->add_option("--config", sim_config, "sweep config file")->required();
    sim->add_option("--out", sim_out, "output file (default stdout)");
    sim->add_option("--format", sim_format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    DecodeArgs dec;
    CLI::App* decode_cmd = app.add_subcommand("decode", "decode one frame");
    decode_cmd->add_option("--code", dec.code_path, "code file")->required();
    decode_cmd->add_option("--algorithm", dec.algorithm,
                           "oms, ms-rcq, float-oms or float-minsum");
    decode_cmd->add_option("--bc", dec.bc, "check message bits");
    decode_cmd->add_option("--bv", dec.bv, "variable message bits");
    decode_cmd->add_option("--imax", dec.imax, "max iterations");
    decode_cmd->add_option("--offset-int", dec.offset_int, "integer offset");
    decode_cmd->add_option("--offset-llr", dec.offset_llr,
                           "float reference offset");
    decode_cmd->add_option("--tables", dec.tables_path, "quantizer table file");
    decode_cmd->add_option("--ebno", dec.ebno_db, "Eb/N0 in dB");
    decode_cmd->add_option("--llr-step", dec.llr_step, "LLR quantizer step");
    decode_cmd->add_option("--seed", dec.seed, "noise seed");
    decode_cmd->add_option("--frame", dec.frame, "frame index within the seed");
    decode_cmd->add_flag("--noiseless", dec.noiseless, "skip the noise");
    decode_cmd->add_option("--codeword", dec.codeword_path,
                           "transmitted bits, one per line (default all-zero)");
    decode_cmd->add_flag("--print-bits", dec.print_bits, "print decoded bits");

    DesignArgs des;
    CLI::App* design =
        app.add_subcommand("design-rcq", "design quantizer tables");
    design->add_option("--code", des.code_path, "code file")->required();
    design->add_option("--out", des.out_path, "table file (default stdout)");
    design->add_option("--ebno", des.ebno_db, "design Eb/N0 in dB");
    design->add_option("--frames", des.frames, "pilot frames to histogram");
    design->add_option("--bc", des.bc, "check message bits");
    design->add_option("--bv", des.bv, "variable message bits");
    design->add_option("--imax", des.imax, "max iterations the tables cover");
    design->add_option("--horizon", des.horizon,
                       "pilot iterations to histogram before holding tables");
    design->add_option("--llr-step", des.llr_step, "LLR quantizer step");
    design->add_option("--offset-llr", des.offset_llr, "pilot decoder offset");
    design->add_option("--seed", des.seed, "noise seed");

    ScheduleArgs sch;
    CLI::App* schedule_cmd =
        app.add_subcommand("schedule", "find or verify a pipeline schedule");
    schedule_cmd->add_option("--code", sch.code_path, "code file")->required();
    schedule_cmd->add_option("--schedule", sch.schedule_path,
                             "schedule file to verify (default layer order)");
    schedule_cmd->add_option("--out", sch.out_path, "output file");
    schedule_cmd->add_option("--depth", sch.depth, "pipeline depth D");
    schedule_cmd->add_option("--gap", sch.gap, "inter-layer gap G");
    schedule_cmd->add_flag("--verify", sch.verify,
                           "verify instead of searching");

    ResourceArgs res;
    CLI::App* resources_cmd =
        app.add_subcommand("resources", "compare parameter delivery costs");
    resources_cmd->add_option("--code", res.code_path, "code file")->required();
    resources_cmd->add_option("--bc", res.bc, "check message bits");
    resources_cmd->add_option("--bv", res.bv, "variable message bits");
    resources_cmd->add_option("--imax", res.imax, "max iterations");
    resources_cmd->add_option("-w,--width", res.w, "bits per routed parameter");
    resources_cmd->add_option("--batch", res.batch, "staged transfer batch");
    resources_cmd->add_option("--format", res.format, "text or csv")
        ->check(CLI::IsMember({"text", "csv"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sim) return cmd_simulate(sim_config, sim_out, sim_format);
        if (*decode_cmd) return cmd_decode(dec);
        if (*design) return cmd_design_rcq(des);
        if (*schedule_cmd) return cmd_schedule(sch);
        if (*resources_cmd) return cmd_resources(res);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
