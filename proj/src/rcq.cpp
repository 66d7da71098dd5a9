#include "ldpclab/rcq.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "ldpclab/channel.hpp"
#include "ldpclab/decoder.hpp"
#include "ldpclab/qc_code.hpp"

namespace ldpclab {

namespace {

std::string cell_name(const RcqTables& t, size_t idx) {
    return "iteration " + std::to_string(idx / t.num_layers + 1) + ", layer " +
           std::to_string(idx % t.num_layers);
}

}  // namespace

void validate_tables(const RcqTables& t) {
    if (t.bc < 2 || t.bc > 15 || t.bv < t.bc || t.bv > 15)
        throw std::invalid_argument("rcq tables: invalid bit widths");
    if (t.imax < 1 || t.num_layers < 1)
        throw std::invalid_argument("rcq tables: invalid table dimensions");
    const size_t want = static_cast<size_t>(t.imax) * t.num_layers;
    if (t.entries.size() != want)
        throw std::invalid_argument("rcq tables: expected " + std::to_string(want) +
                                    " entries, got " + std::to_string(t.entries.size()));
    const int nth = (1 << (t.bc - 1)) - 1;
    const std::int32_t mmax = (1 << (t.bv - 1)) - 1;
    for (size_t i = 0; i < t.entries.size(); ++i) {
        const auto& e = t.entries[i];
        if (static_cast<int>(e.thresholds.size()) != nth)
            throw std::invalid_argument("rcq tables: wrong threshold count at " +
                                        cell_name(t, i));
        if (static_cast<int>(e.recons.size()) != nth + 1)
            throw std::invalid_argument("rcq tables: wrong reconstruction count at " +
                                        cell_name(t, i));
        for (int k = 0; k < nth; ++k) {
            if (e.thresholds[k] < 1 || e.thresholds[k] > mmax)
                throw std::invalid_argument("rcq tables: threshold out of range at " +
                                            cell_name(t, i) + ", position " +
                                            std::to_string(k));
            if (k > 0 && e.thresholds[k] <= e.thresholds[k - 1])
                throw std::invalid_argument(
                    "rcq tables: thresholds not strictly increasing at " +
                    cell_name(t, i) + ", position " + std::to_string(k));
        }
        for (int k = 0; k <= nth; ++k) {
            if (e.recons[k] < 0 || e.recons[k] > mmax)
                throw std::invalid_argument("rcq tables: reconstruction out of range at " +
                                            cell_name(t, i) + ", position " +
                                            std::to_string(k));
            if (k > 0 && e.recons[k] < e.recons[k - 1])
                throw std::invalid_argument(
                    "rcq tables: reconstructions decrease at " + cell_name(t, i) +
                    ", position " + std::to_string(k));
        }
    }
}

int quantize_msg(std::int32_t magnitude, std::span<const std::int32_t> thresholds) {
    assert(magnitude >= 0);
    return static_cast<int>(std::upper_bound(thresholds.begin(), thresholds.end(),
                                             magnitude) -
                            thresholds.begin());
}

std::int32_t reconstruct_msg(int index, std::span<const std::int32_t> recons) {
    assert(index >= 0 && index < static_cast<int>(recons.size()));
    return recons[index];
}

RcqTables identity_tables(int bc, int bv, int imax, int num_layers) {
    RcqTables t;
    t.bc = bc;
    t.bv = bv;
    t.imax = imax;
    t.num_layers = num_layers;
    RcqTableEntry e;
    for (int k = 1; k < (1 << (bc - 1)); ++k) e.thresholds.push_back(k);
    for (int k = 0; k < (1 << (bc - 1)); ++k) e.recons.push_back(k);
    t.entries.assign(static_cast<size_t>(imax) * num_layers, e);
    validate_tables(t);
    return t;
}

RcqTables load_tables(std::istream& in) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("rcq tables: bad json: ") + e.what());
    }
    RcqTables t;
    try {
        t.bc = j.at("bc").get<int>();
        t.bv = j.at("bv").get<int>();
        t.imax = j.at("imax").get<int>();
        t.num_layers = j.at("num_layers").get<int>();
        const auto& tables = j.at("tables");
        for (const auto& per_layer : tables) {
            for (const auto& cell : per_layer) {
                RcqTableEntry e;
                for (const auto& x : cell.at("th")) {
                    if (!x.is_number_integer())
                        throw std::invalid_argument("rcq tables: non-integer threshold");
                    e.thresholds.push_back(x.get<std::int32_t>());
                }
                for (const auto& x : cell.at("re")) {
                    if (!x.is_number_integer())
                        throw std::invalid_argument("rcq tables: non-integer reconstruction");
                    e.recons.push_back(x.get<std::int32_t>());
                }
                t.entries.push_back(std::move(e));
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("rcq tables: missing or mistyped field: ") +
                                    e.what());
    }
    validate_tables(t);
    return t;
}

RcqTables load_tables_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open rcq table file: " + path);
    return load_tables(in);
}

void save_tables(const RcqTables& t, std::ostream& out) {
    validate_tables(t);
    nlohmann::ordered_json j;
    j["bc"] = t.bc;
    j["bv"] = t.bv;
    j["imax"] = t.imax;
    j["num_layers"] = t.num_layers;
    auto tables = nlohmann::ordered_json::array();
    for (int i = 1; i <= t.imax; ++i) {
        auto per_layer = nlohmann::ordered_json::array();
        for (int l = 0; l < t.num_layers; ++l) {
            const auto& e = t.at(i, l);
            per_layer.push_back({{"th", e.thresholds}, {"re", e.recons}});
        }
        tables.push_back(std::move(per_layer));
    }
    j["tables"] = std::move(tables);
    out << j.dump(1) << '\n';
}

void save_tables_file(const RcqTables& t, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write rcq table file: " + path);
    save_tables(t, out);
}

MessageHistogram collect_histograms(const QcCode& code, const DecoderConfig& pilot,
                                    const ChannelConfig& chan, long long frames) {
    if (pilot.algorithm != Algorithm::kFloatMinSum)
        throw std::invalid_argument("rcq design: pilot must run the float min-sum engine");
    if (frames < 1)
        throw std::invalid_argument("rcq design: need at least one pilot frame");
    MessageHistogram h;
    h.bv = chan.bv;
    h.imax = pilot.imax;
    h.num_layers = code.block_rows();
    const int nmag = 1 << (h.bv - 1);
    h.pos.assign(static_cast<size_t>(h.imax) * h.num_layers,
                 std::vector<std::int64_t>(nmag, 0));
    h.neg = h.pos;

    RefDecodeHooks hooks;
    hooks.on_vn_message = [&](int iter, int layer, int, double vmn) {
        const std::int32_t q = quantize_llr(vmn, chan.llr_step, h.bv);
        if (q < 0)
            ++h.neg[h.cell(iter, layer)][-q];
        else
            ++h.pos[h.cell(iter, layer)][q];
    };
    for (long long f = 0; f < frames; ++f) {
        const auto llrs = simulate_frame(code.n(), chan, static_cast<std::uint64_t>(f));
        reference_decode(code, pilot, llrs, &hooks);
    }
    return h;
}

namespace {

// summed contribution of the mirrored symbol pair (+,c)/(-,c) for a cluster
// holding probability a with positive sign and b with negative sign given
// bit 0; the bit-1 masses are (b, a) by sign symmetry
double cluster_term(double a, double b) {
    double s = 0.0;
    if (a > 0.0) s += a * std::log2(2.0 * a / (a + b));
    if (b > 0.0) s += b * std::log2(2.0 * b / (a + b));
    return s;
}

// The magnitude-0 bin is its own mirror image: its mass z shows up in the
// positive symbol of the first cluster under both bit values, so that symbol
// pair is asymmetric and needs the exact two-symbol sum.
double first_cluster_term(double z, double p, double n) {
    return 0.5 * (cluster_term(z + p, z + n) + cluster_term(n, p));
}

}  // namespace

double quantizer_mutual_information(std::span<const std::int64_t> pos,
                                    std::span<const std::int64_t> neg,
                                    std::span<const std::int32_t> thresholds) {
    if (pos.size() != neg.size() || pos.empty())
        throw std::invalid_argument("rcq design: histogram shape mismatch");
    double total = 0.0;
    for (size_t m = 0; m < pos.size(); ++m) total += pos[m] + neg[m];
    if (total <= 0.0) throw std::invalid_argument("rcq design: empty histogram");
    const double z = (pos[0] + neg[0]) / total;
    double mi = 0.0, a = 0.0, b = 0.0;
    size_t k = 0;
    for (size_t m = 1; m < pos.size(); ++m) {
        if (k < thresholds.size() && static_cast<std::int32_t>(m) == thresholds[k]) {
            mi += k == 0 ? first_cluster_term(z, a / total, b / total)
                         : cluster_term(a / total, b / total);
            a = b = 0.0;
            ++k;
        }
        a += pos[m];
        b += neg[m];
    }
    mi += k == 0 ? first_cluster_term(z, a / total, b / total)
                 : cluster_term(a / total, b / total);
    return mi;
}

QuantizerDesign design_quantizer(std::span<const std::int64_t> pos,
                                 std::span<const std::int64_t> neg, int clusters) {
    const int bins = static_cast<int>(pos.size());
    if (bins == 0 || neg.size() != pos.size())
        throw std::invalid_argument("rcq design: histogram shape mismatch");
    if (clusters < 1 || clusters > bins)
        throw std::invalid_argument("rcq design: cluster count out of range");
    std::vector<double> pa(bins + 1, 0.0), pb(bins + 1, 0.0);
    for (int m = 0; m < bins; ++m) {
        pa[m + 1] = pa[m] + pos[m];
        pb[m + 1] = pb[m] + neg[m];
    }
    const double total = pa[bins] + pb[bins];
    if (total <= 0.0) throw std::invalid_argument("rcq design: empty histogram");
    const double z = (pa[1] + pb[1]) / total;  // self-mirrored magnitude-0 mass
    auto merit = [&](int lo, int hi) {  // cluster spans magnitudes [lo, hi]
        return cluster_term((pa[hi + 1] - pa[lo]) / total, (pb[hi + 1] - pb[lo]) / total);
    };
    auto merit_first = [&](int hi) {  // leading cluster always owns magnitude 0
        return first_cluster_term(z, (pa[hi + 1] - pa[1]) / total,
                                  (pb[hi + 1] - pb[1]) / total);
    };

    constexpr double kNone = -1.0;
    // dp[k][e]: best value with k clusters covering bins 0..e
    std::vector<std::vector<double>> dp(clusters + 1,
                                        std::vector<double>(bins, kNone));
    std::vector<std::vector<int>> from(clusters + 1, std::vector<int>(bins, -1));
    for (int e = 0; e < bins; ++e) dp[1][e] = merit_first(e);
    for (int k = 2; k <= clusters; ++k) {
        for (int e = k - 1; e < bins; ++e) {
            for (int s = k - 1; s <= e; ++s) {
                const double cand = dp[k - 1][s - 1] + merit(s, e);
                if (cand > dp[k][e]) {
                    dp[k][e] = cand;
                    from[k][e] = s;
                }
            }
        }
    }

    QuantizerDesign out;
    out.mutual_information = dp[clusters][bins - 1];
    int e = bins - 1;
    for (int k = clusters; k >= 2; --k) {
        const int s = from[k][e];
        out.thresholds.push_back(s);
        e = s - 1;
    }
    std::reverse(out.thresholds.begin(), out.thresholds.end());
    return out;
}

RcqTables design_tables(const MessageHistogram& hist, int bc, int bv, double llr_step) {
    if (hist.bv != bv)
        throw std::invalid_argument("rcq design: histogram grid width disagrees with bv");
    if (bc < 2 || bv < bc)
        throw std::invalid_argument("rcq design: invalid bit widths");
    if (!(llr_step > 0.0))
        throw std::invalid_argument("rcq design: llr step must be positive");
    RcqTables t;
    t.bc = bc;
    t.bv = bv;
    t.imax = hist.imax;
    t.num_layers = hist.num_layers;
    const int clusters = 1 << (bc - 1);
    const std::int32_t mmax = (1 << (bv - 1)) - 1;

    for (size_t cell = 0; cell < hist.pos.size(); ++cell) {
        const auto& pos = hist.pos[cell];
        const auto& neg = hist.neg[cell];
        std::int64_t total = 0, above_zero = 0;
        for (size_t m = 0; m < pos.size(); ++m) {
            total += pos[m] + neg[m];
            if (m > 0) above_zero += pos[m] + neg[m];
        }
        const std::string where = " at iteration " +
                                  std::to_string(cell / hist.num_layers + 1) + ", layer " +
                                  std::to_string(cell % hist.num_layers);
        if (total == 0)
            throw std::invalid_argument("rcq design: empty histogram cell" + where);
        if (above_zero == 0)
            throw std::invalid_argument(
                "rcq design: histogram has all mass at magnitude zero" + where);

        const auto q = design_quantizer(pos, neg, clusters);
        RcqTableEntry e;
        e.thresholds = q.thresholds;

        // reconstruction = cluster LLR magnitude on the step grid
        std::vector<int> bounds{0};
        for (auto th : q.thresholds) bounds.push_back(th);
        bounds.push_back(static_cast<int>(pos.size()));
        std::int32_t floor_val = 0;
        for (int k = 0; k < clusters; ++k) {
            std::int64_t a = 0, b = 0;
            for (int m = std::max(bounds[k], 1); m < bounds[k + 1]; ++m) {
                a += pos[m];
                b += neg[m];
            }
            if (k == 0) {  // magnitude 0 mirrors onto itself
                a += pos[0] + neg[0];
                b += pos[0] + neg[0];
            }
            std::int32_t val;
            if (a > 0 || b > 0) {
                // add-half smoothing keeps finite-sample zero counts from
                // reconstructing to infinite confidence
                const double lam =
                    std::abs(std::log((a + 0.5) / (b + 0.5)));
                const long steps = std::lround(lam / llr_step);
                val = steps >= mmax ? mmax : static_cast<std::int32_t>(steps);
            } else {
                val = 0;
            }
            floor_val = std::max(floor_val, val);  // nondecreasing repair
            e.recons.push_back(floor_val);
        }
        t.entries.push_back(std::move(e));
    }
    validate_tables(t);
    return t;
}

RcqTables extend_tables(const RcqTables& tables, int imax) {
    if (imax < tables.imax) {
        throw std::invalid_argument("extend_tables: target iteration count " +
                                    std::to_string(imax) + " is below the designed " +
                                    std::to_string(tables.imax));
    }
    RcqTables full = tables;
    full.imax = imax;
    full.entries.resize(static_cast<std::size_t>(imax) * tables.num_layers);
    for (int iter = tables.imax + 1; iter <= imax; ++iter) {
        for (int layer = 0; layer < tables.num_layers; ++layer) {
            full.entries[static_cast<std::size_t>(iter - 1) * tables.num_layers + layer] =
                tables.at(tables.imax, layer);
        }
    }
    return full;
}

}  // namespace ldpclab
