#include "ldpclab/alist.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ldpclab {

QcCode parse_alist(std::istream& in) {
    std::vector<long long> tok;
    long long v;
    while (in >> v) tok.push_back(v);
    size_t pos = 0;
    auto next = [&]() {
        if (pos >= tok.size()) throw std::invalid_argument("alist parse: truncated file");
        return tok[pos++];
    };

    const int n = static_cast<int>(next());
    const int m = static_cast<int>(next());
    if (n <= 0 || m <= 0) throw std::invalid_argument("alist parse: bad dimensions");
    const int maxc = static_cast<int>(next());
    const int maxr = static_cast<int>(next());
    std::vector<int> cw(n), rw(m);
    for (int c = 0; c < n; ++c) cw[c] = static_cast<int>(next());
    for (int r = 0; r < m; ++r) rw[r] = static_cast<int>(next());
    const long long cw_sum = std::accumulate(cw.begin(), cw.end(), 0LL);
    const long long rw_sum = std::accumulate(rw.begin(), rw.end(), 0LL);
    if (cw_sum != rw_sum)
        throw std::invalid_argument("alist parse: column and row weights disagree");

    // index lists may be padded with zeros to the max weight or written bare
    const long long remaining = static_cast<long long>(tok.size()) - pos;
    bool padded;
    if (remaining == static_cast<long long>(n) * maxc + static_cast<long long>(m) * maxr)
        padded = true;
    else if (remaining == cw_sum + rw_sum)
        padded = false;
    else
        throw std::invalid_argument("alist parse: index list length matches neither "
                                    "padded nor bare layout");

    auto read_list = [&](const std::vector<int>& weights, int width, int limit) {
        std::vector<std::vector<int>> lists(weights.size());
        for (size_t i = 0; i < weights.size(); ++i) {
            const int take = padded ? width : weights[i];
            for (int k = 0; k < take; ++k) {
                const long long idx = next();
                if (idx == 0 && padded) continue;
                if (idx < 1 || idx > limit)
                    throw std::invalid_argument("alist parse: index out of range");
                lists[i].push_back(static_cast<int>(idx) - 1);
            }
        }
        return lists;
    };
    auto cols = read_list(cw, maxc, m);
    auto rows = read_list(rw, maxr, n);

    for (int c = 0; c < n; ++c)
        if (static_cast<int>(cols[c].size()) != cw[c])
            throw std::invalid_argument("alist parse: column " + std::to_string(c) +
                                        " weight mismatch");
    std::vector<std::vector<int>> base(m, std::vector<int>(n, kZeroCirculant));
    for (int r = 0; r < m; ++r) {
        if (static_cast<int>(rows[r].size()) != rw[r])
            throw std::invalid_argument("alist parse: row " + std::to_string(r) +
                                        " weight mismatch");
        for (int c : rows[r]) {
            if (base[r][c] != kZeroCirculant)
                throw std::invalid_argument("alist parse: duplicate entry at (" +
                                            std::to_string(r) + ", " + std::to_string(c) +
                                            ")");
            base[r][c] = 0;
        }
    }
    for (int r = 0; r < m; ++r)
        for (int c : rows[r])
            if (std::find(cols[c].begin(), cols[c].end(), r) == cols[c].end())
                throw std::invalid_argument("alist parse: row and column lists disagree");
    return QcCode(1, std::move(base));
}

QcCode parse_alist_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open alist file: " + path);
    return parse_alist(in);
}

std::string serialize_alist(const QcCode& code) {
    const int n = code.n();
    const int m = code.m();
    std::vector<std::vector<int>> cols(n), rows(m);
    for (const auto& [chk, var] : expand_parity_check(code)) {
        rows[chk].push_back(var);
        cols[var].push_back(chk);
    }
    for (auto& l : rows) std::sort(l.begin(), l.end());
    for (auto& l : cols) std::sort(l.begin(), l.end());
    size_t maxc = 0, maxr = 0;
    for (const auto& l : cols) maxc = std::max(maxc, l.size());
    for (const auto& l : rows) maxr = std::max(maxr, l.size());

    std::ostringstream out;
    out << n << ' ' << m << '\n' << maxc << ' ' << maxr << '\n';
    for (int c = 0; c < n; ++c) out << (c ? " " : "") << cols[c].size();
    out << '\n';
    for (int r = 0; r < m; ++r) out << (r ? " " : "") << rows[r].size();
    out << '\n';
    auto emit = [&](const std::vector<std::vector<int>>& lists, size_t width) {
        for (const auto& l : lists) {
            for (size_t k = 0; k < width; ++k)
                out << (k ? " " : "") << (k < l.size() ? l[k] + 1 : 0);
            out << '\n';
        }
    };
    emit(cols, maxc);
    emit(rows, maxr);
    return out.str();
}

}  // namespace ldpclab
