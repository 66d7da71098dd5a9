#include "ldpclab/resources.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "ldpclab/decoder.hpp"
#include "ldpclab/qc_code.hpp"

namespace ldpclab {
namespace {

constexpr const char* kFieldNames[] = {
    "extra_param_roms",      "rom_bits_q",           "rom_bits_r",
    "broadcast_wires",       "dribble_register_bits", "dribble_transfer_wires",
    "edge_memory_bits",      "apllr_memory_bits",
};

std::vector<long long> field_values(const ResourceEstimate& e) {
    return {e.extra_param_roms,      e.rom_bits_q,           e.rom_bits_r,
            e.broadcast_wires,       e.dribble_register_bits, e.dribble_transfer_wires,
            e.edge_memory_bits,      e.apllr_memory_bits};
}

void check_widths(const TablesShape& shape, int bv) {
    if (shape.bc < 2 || shape.bc > 15)
        throw std::invalid_argument("check message width out of range");
    if (bv < shape.bc || bv > 15)
        throw std::invalid_argument("variable message width out of range");
    if (shape.imax < 1) throw std::invalid_argument("imax must be positive");
    if (shape.num_layers < 1)
        throw std::invalid_argument("num_layers must be positive");
}

}  // namespace

const char* method_name(DeliveryMethod m) {
    switch (m) {
        case DeliveryMethod::kOmsBaseline: return "OMS_BASELINE";
        case DeliveryMethod::kLookup: return "LOOKUP";
        case DeliveryMethod::kBroadcast: return "BROADCAST";
        case DeliveryMethod::kDribble: return "DRIBBLE";
    }
    throw std::invalid_argument("unknown delivery method");
}

ResourceEstimate estimate(const QcCode& code, const DecoderConfig& cfg,
                          const TablesShape& shape, DeliveryMethod method, int w,
                          int batch, int rom_share) {
    check_widths(shape, cfg.bv);
    if (rom_share < 1) throw std::invalid_argument("rom_share must be >= 1");

    const long long L = code.lifting_size();
    const long long edges = code.num_edges();
    const long long mag_q = 1LL << (cfg.bv - 1);   // addressable |vmn| values
    const long long idx_r = 1LL << (shape.bc - 1); // addressable message indices
    const long long params = (1LL << shape.bc) - 1; // thresholds + recons

    ResourceEstimate e;
    e.method = method;
    e.apllr_memory_bits = static_cast<long long>(code.n()) * cfg.bv;
    // per edge: one check-to-variable message plus one stored variable message
    const int cn_width =
        method == DeliveryMethod::kOmsBaseline ? cfg.bv - 2 : shape.bc;
    e.edge_memory_bits = edges * (cn_width + cfg.bv);

    switch (method) {
        case DeliveryMethod::kOmsBaseline:
            break;
        case DeliveryMethod::kLookup:
            e.extra_param_roms = 2 * L / rom_share;
            e.rom_bits_q = L * mag_q * shape.imax * shape.num_layers *
                           (shape.bc - 1) / rom_share;
            e.rom_bits_r = L * idx_r * shape.imax * shape.num_layers *
                           (cfg.bv - 1) / rom_share;
            break;
        case DeliveryMethod::kBroadcast:
            if (w < 1)
                throw std::invalid_argument(
                    "broadcast estimate needs a positive parameter width w");
            e.extra_param_roms = 2;
            e.broadcast_wires = params * w * L;
            break;
        case DeliveryMethod::kDribble:
            if (w < 1)
                throw std::invalid_argument(
                    "dribble estimate needs a positive parameter width w");
            if (batch < 1)
                throw std::invalid_argument(
                    "dribble estimate needs a positive transfer batch");
            e.extra_param_roms = 2;
            e.dribble_register_bits = params * w * L;
            e.dribble_transfer_wires = static_cast<long long>(batch) * L;
            break;
    }
    return e;
}

std::vector<ResourceEstimate> compare_methods(const QcCode& code,
                                              const DecoderConfig& cfg, int w,
                                              int batch) {
    const TablesShape shape{cfg.bc, cfg.imax, code.block_rows()};
    std::vector<ResourceEstimate> rows;
    rows.push_back(
        estimate(code, cfg, shape, DeliveryMethod::kOmsBaseline, w, batch));
    rows.push_back(estimate(code, cfg, shape, DeliveryMethod::kLookup, w, batch));
    rows.push_back(
        estimate(code, cfg, shape, DeliveryMethod::kBroadcast, w, batch));
    rows.push_back(estimate(code, cfg, shape, DeliveryMethod::kDribble, w, batch));
    return rows;
}

std::string render_comparison_csv(const std::vector<ResourceEstimate>& rows) {
    if (rows.empty()) throw std::invalid_argument("no rows to render");
    std::ostringstream out;
    out << "method";
    for (const char* f : kFieldNames) out << ',' << f;
    for (const char* f : kFieldNames) out << ",delta_" << f;
    out << '\n';
    const std::vector<long long> base = field_values(rows.front());
    for (const ResourceEstimate& row : rows) {
        out << method_name(row.method);
        const std::vector<long long> vals = field_values(row);
        for (long long v : vals) out << ',' << v;
        for (std::size_t i = 0; i < vals.size(); ++i)
            out << ',' << vals[i] - base[i];
        out << '\n';
    }
    return out.str();
}

std::string render_comparison_text(const std::vector<ResourceEstimate>& rows) {
    if (rows.empty()) throw std::invalid_argument("no rows to render");
    const std::vector<long long> base = field_values(rows.front());
    const std::size_t nfields = base.size();

    std::vector<std::vector<std::string>> table;
    std::vector<std::string> header{"method"};
    for (const char* f : kFieldNames) header.emplace_back(f);
    table.push_back(std::move(header));

    for (const ResourceEstimate& row : rows) {
        std::vector<std::string> cells{method_name(row.method)};
        const std::vector<long long> vals = field_values(row);
        const bool is_base = &row == &rows.front();
        for (std::size_t i = 0; i < nfields; ++i) {
            std::ostringstream cell;
            cell << vals[i];
            if (!is_base && vals[i] != base[i])
                cell << " (" << std::showpos << vals[i] - base[i] << ")";
            cells.push_back(cell.str());
        }
        table.push_back(std::move(cells));
    }

    std::vector<std::size_t> width(table.front().size(), 0);
    for (const auto& cells : table)
        for (std::size_t i = 0; i < cells.size(); ++i)
            width[i] = std::max(width[i], cells[i].size());

    std::ostringstream out;
    for (const auto& cells : table) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out << "  ";
            out << (i ? std::right : std::left)
                << std::setw(static_cast<int>(width[i])) << cells[i];
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace ldpclab
