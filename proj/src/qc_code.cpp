#include "ldpclab/qc_code.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ldpclab {

int circulant_column(int row_offset, int shift, int lifting) {
    return (row_offset + shift) % lifting;
}

QcCode::QcCode(int lifting, std::vector<std::vector<int>> base)
    : lifting_(lifting), base_(std::move(base)) {
    if (lifting_ <= 0)
        throw std::invalid_argument("qc code: lifting size must be positive");
    if (base_.empty() || base_[0].empty())
        throw std::invalid_argument("qc code: empty base matrix");
    const size_t cols = base_[0].size();
    layers_.resize(base_.size());
    for (size_t r = 0; r < base_.size(); ++r) {
        if (base_[r].size() != cols)
            throw std::invalid_argument("qc code: ragged base matrix at block-row " +
                                        std::to_string(r));
        for (size_t c = 0; c < cols; ++c) {
            const int p = base_[r][c];
            if (p == kZeroCirculant) continue;
            if (p < 0 || p >= lifting_)
                throw std::invalid_argument("qc code: shift " + std::to_string(p) +
                                            " out of range at block (" + std::to_string(r) +
                                            ", " + std::to_string(c) + ")");
            layers_[r].push_back(Circulant{static_cast<int>(r), static_cast<int>(c), p,
                                           num_circulants_++});
        }
        if (layers_[r].size() < 2)
            throw std::invalid_argument("qc code: block-row " + std::to_string(r) +
                                        " has fewer than two nonzero circulants");
    }
    by_id_.resize(num_circulants_);
    for (const auto& layer : layers_)
        for (const auto& c : layer) by_id_[c.id] = &c;
}

const std::vector<Circulant>& QcCode::layer_circulants(int layer) const {
    if (layer < 0 || layer >= block_rows())
        throw std::out_of_range("qc code: layer " + std::to_string(layer) +
                                " out of range");
    return layers_[layer];
}

EdgeIndex QcCode::edge_of(int edge_id) const {
    if (edge_id < 0 || edge_id >= num_edges())
        throw std::out_of_range("qc code: edge id out of range");
    const Circulant& c = *by_id_[edge_id / lifting_];
    return EdgeIndex{c.layer, c.col, edge_id % lifting_};
}

int QcCode::edge_id(const EdgeIndex& e) const {
    for (const Circulant& c : layer_circulants(e.block_row))
        if (c.col == e.block_col) return c.id * lifting_ + e.offset;
    throw std::out_of_range("qc code: no circulant at requested block");
}

namespace {

// strips comments, returns false on blank lines
bool content_line(std::istream& in, std::string& line) {
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream probe(line);
        std::string tok;
        if (probe >> tok) return true;
    }
    return false;
}

}  // namespace

QcCode parse_qc_base_matrix(std::istream& in) {
    std::string line;
    if (!content_line(in, line))
        throw std::invalid_argument("qc parse: missing header line");
    std::istringstream header(line);
    int rows = 0, cols = 0, lifting = 0;
    if (!(header >> rows >> cols >> lifting))
        throw std::invalid_argument("qc parse: malformed header '" + line + "'");
    std::string extra;
    if (header >> extra)
        throw std::invalid_argument("qc parse: trailing tokens in header '" + line + "'");
    if (rows <= 0 || cols <= 0 || lifting <= 0)
        throw std::invalid_argument("qc parse: non-positive dimension in header");

    std::vector<std::vector<int>> base;
    base.reserve(rows);
    for (int r = 0; r < rows; ++r) {
        if (!content_line(in, line))
            throw std::invalid_argument("qc parse: expected " + std::to_string(rows) +
                                        " block-rows, got " + std::to_string(r));
        std::istringstream row(line);
        std::vector<int> shifts;
        int p;
        while (row >> p) shifts.push_back(p);
        if (!row.eof())
            throw std::invalid_argument("qc parse: non-integer token in block-row " +
                                        std::to_string(r));
        if (static_cast<int>(shifts.size()) != cols)
            throw std::invalid_argument("qc parse: block-row " + std::to_string(r) +
                                        " has " + std::to_string(shifts.size()) +
                                        " entries, expected " + std::to_string(cols));
        base.push_back(std::move(shifts));
    }
    return QcCode(lifting, std::move(base));
}

QcCode parse_qc_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open qc code file: " + path);
    return parse_qc_base_matrix(in);
}

std::string serialize_qc(const QcCode& code) {
    std::ostringstream out;
    out << code.block_rows() << ' ' << code.block_cols() << ' ' << code.lifting_size()
        << '\n';
    for (const auto& row : code.base_matrix()) {
        for (size_t c = 0; c < row.size(); ++c) out << (c ? " " : "") << row[c];
        out << '\n';
    }
    return out.str();
}

std::vector<std::pair<int, int>> expand_parity_check(const QcCode& code) {
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(code.num_edges());
    const int L = code.lifting_size();
    for (const auto& layer : code.layers())
        for (const Circulant& c : layer)
            for (int r = 0; r < L; ++r)
                pairs.emplace_back(c.layer * L + r,
                                   c.col * L + circulant_column(r, c.shift, L));
    return pairs;
}

}  // namespace ldpclab
