#include "ldpclab/schedule.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ldpclab/qc_code.hpp"

namespace ldpclab {

namespace {

void check_shape(const QcCode& code, const Schedule& s) {
    const int rows = code.block_rows();
    if (static_cast<int>(s.layer_order.size()) != rows ||
        static_cast<int>(s.stalls.size()) != rows)
        throw std::invalid_argument("schedule: layer count disagrees with code");
    for (int l = 0; l < rows; ++l) {
        if (s.stalls[l] < 0)
            throw std::invalid_argument("schedule: negative stall count at layer " +
                                        std::to_string(l));
        std::set<int> want;
        for (const Circulant& c : code.layer_circulants(l)) want.insert(c.col);
        std::set<int> got(s.layer_order[l].begin(), s.layer_order[l].end());
        if (got != want || s.layer_order[l].size() != want.size())
            throw std::invalid_argument(
                "schedule: layer " + std::to_string(l) +
                " order is not a permutation of that layer's block-columns");
    }
}

std::map<int, int> positions(const std::vector<int>& order) {
    std::map<int, int> pos;
    for (size_t j = 0; j < order.size(); ++j) pos[order[j]] = static_cast<int>(j);
    return pos;
}

}  // namespace

Schedule default_schedule(const QcCode& code) {
    Schedule s;
    s.layer_order.resize(code.block_rows());
    s.stalls.assign(code.block_rows(), 0);
    for (int l = 0; l < code.block_rows(); ++l)
        for (const Circulant& c : code.layer_circulants(l))
            s.layer_order[l].push_back(c.col);
    return s;
}

std::vector<HazardViolation> verify_schedule(const QcCode& code, const Schedule& s,
                                             const PipelineParams& p) {
    if (p.depth_d < 0 || p.inter_layer_gap < 0)
        throw std::invalid_argument("schedule: negative pipeline parameter");
    check_shape(code, s);
    const int rows = code.block_rows();
    std::vector<HazardViolation> out;
    for (int l = 0; l < rows; ++l) {
        const int prev = (l + rows - 1) % rows;
        const auto wpos = positions(s.layer_order[prev]);
        const auto& order = s.layer_order[l];
        for (size_t jr = 0; jr < order.size(); ++jr) {
            const auto it = wpos.find(order[jr]);
            if (it == wpos.end()) continue;
            const int slack = static_cast<int>(jr) + p.inter_layer_gap + s.stalls[l] -
                              it->second - p.depth_d - 1;
            if (slack < 0) out.push_back({l, order[jr], slack});
        }
    }
    return out;
}

Schedule find_hazard_free_schedule(const QcCode& code, const PipelineParams& p) {
    if (p.depth_d < 0 || p.inter_layer_gap < 0)
        throw std::invalid_argument("schedule: negative pipeline parameter");
    const int rows = code.block_rows();
    Schedule s = default_schedule(code);

    // order layers one at a time; the wrap predecessor of layer 0 still has
    // its default order at that point, good enough for a heuristic
    for (int l = 0; l < rows; ++l) {
        const int prev = (l + rows - 1) % rows;
        const int next = (l + 1) % rows;
        const auto wpos = positions(s.layer_order[prev]);
        std::set<int> next_cols;
        for (const Circulant& c : code.layer_circulants(next)) next_cols.insert(c.col);

        std::vector<int> head, middle, tail;
        for (const Circulant& c : code.layer_circulants(l)) {
            if (wpos.count(c.col))
                tail.push_back(c.col);
            else if (next_cols.count(c.col))
                head.push_back(c.col);
            else
                middle.push_back(c.col);
        }
        // tail keyed by previous writeback position so the earliest written
        // columns are read first; head and middle keep column order
        std::stable_sort(tail.begin(), tail.end(), [&](int a, int b) {
            return wpos.at(a) < wpos.at(b);
        });
        std::vector<int> order;
        order.insert(order.end(), head.begin(), head.end());
        order.insert(order.end(), middle.begin(), middle.end());
        order.insert(order.end(), tail.begin(), tail.end());
        s.layer_order[l] = std::move(order);
    }

    // smallest per-layer stalls that clear the remaining violations
    s.stalls.assign(rows, 0);
    for (const HazardViolation& v : verify_schedule(code, s, p))
        s.stalls[v.layer] = std::max(s.stalls[v.layer], -v.slack);
    return s;
}

long long cycles_per_iteration(const QcCode& code, const Schedule& s,
                               const PipelineParams& p) {
    check_shape(code, s);
    long long cycles = 0;
    for (int l = 0; l < code.block_rows(); ++l)
        cycles += static_cast<long long>(s.layer_order[l].size()) + s.stalls[l] +
                  p.inter_layer_gap;
    return cycles + p.depth_d +
           static_cast<long long>(s.layer_order.back().size());
}

Schedule parse_schedule(std::istream& in) {
    Schedule s;
    std::string line;
    int expected = -1;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        if (key == "layers") {
            if (!(ls >> expected) || expected <= 0)
                throw std::invalid_argument("schedule parse: bad layer count");
        } else if (key == "layer") {
            int idx;
            std::string tok;
            if (!(ls >> idx) || idx != static_cast<int>(s.layer_order.size()))
                throw std::invalid_argument("schedule parse: layers out of order");
            if (!(ls >> tok) || tok != "order")
                throw std::invalid_argument("schedule parse: expected 'order'");
            std::vector<int> order;
            int v;
            while (ls >> v) order.push_back(v);
            ls.clear();
            if (!(ls >> tok) || tok != "stalls")
                throw std::invalid_argument("schedule parse: expected 'stalls'");
            int stalls;
            if (!(ls >> stalls) || stalls < 0)
                throw std::invalid_argument("schedule parse: bad stall count");
            if (order.empty())
                throw std::invalid_argument("schedule parse: empty layer order");
            s.layer_order.push_back(std::move(order));
            s.stalls.push_back(stalls);
        } else {
            throw std::invalid_argument("schedule parse: unexpected token '" + key + "'");
        }
    }
    if (expected < 0) throw std::invalid_argument("schedule parse: missing header");
    if (static_cast<int>(s.layer_order.size()) != expected)
        throw std::invalid_argument("schedule parse: layer count mismatch");
    return s;
}

Schedule parse_schedule_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open schedule file: " + path);
    return parse_schedule(in);
}

std::string serialize_schedule(const Schedule& s) {
    std::ostringstream out;
    out << "layers " << s.layer_order.size() << '\n';
    for (size_t l = 0; l < s.layer_order.size(); ++l) {
        out << "layer " << l << " order";
        for (int col : s.layer_order[l]) out << ' ' << col;
        out << " stalls " << s.stalls[l] << '\n';
    }
    return out.str();
}

}  // namespace ldpclab
