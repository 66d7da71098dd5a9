#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace ldpclab {

inline constexpr int kZeroCirculant = -1;

// One nonzero LxL circulant block of the base matrix.
struct Circulant {
    int layer = 0;  // block-row
    int col = 0;    // block-column
    int shift = 0;  // cyclic shift p, 0 <= p < L
    int id = 0;     // flat index, row-major over nonzero entries
};

// Addresses one edge of the expanded Tanner graph. offset is the check's row
// offset inside the circulant, so the variable offset is (offset + shift) % L.
struct EdgeIndex {
    int block_row = 0;
    int block_col = 0;
    int offset = 0;
};

// Column hit by row r of a circulant with shift p: (r + p) mod L.
int circulant_column(int row_offset, int shift, int lifting);

// Quasi-cyclic parity-check matrix given as a grid of circulant shifts.
// Each block-row is one decoding layer; a variable touches a layer at most
// once. Immutable after construction.
class QcCode {
public:
    QcCode(int lifting, std::vector<std::vector<int>> base);

    int lifting_size() const { return lifting_; }
    int block_rows() const { return static_cast<int>(base_.size()); }
    int block_cols() const { return static_cast<int>(base_[0].size()); }
    int n() const { return block_cols() * lifting_; }
    int m() const { return block_rows() * lifting_; }
    int num_circulants() const { return num_circulants_; }
    int num_edges() const { return num_circulants_ * lifting_; }
    // design rate; rank deficiencies are ignored
    double code_rate() const {
        return static_cast<double>(block_cols() - block_rows()) / block_cols();
    }

    const std::vector<std::vector<int>>& base_matrix() const { return base_; }
    const std::vector<std::vector<Circulant>>& layers() const { return layers_; }
    // circulants of one layer in ascending block-column order
    const std::vector<Circulant>& layer_circulants(int layer) const;

    EdgeIndex edge_of(int edge_id) const;
    int edge_id(const EdgeIndex& e) const;

private:
    int lifting_;
    std::vector<std::vector<int>> base_;
    std::vector<std::vector<Circulant>> layers_;
    std::vector<const Circulant*> by_id_;
    int num_circulants_ = 0;
};

// Text format: first line "block_rows block_cols lifting", then one line per
// block-row with -1 marking an all-zero block. '#' starts a comment.
QcCode parse_qc_base_matrix(std::istream& in);
QcCode parse_qc_file(const std::string& path);
std::string serialize_qc(const QcCode& code);

// All (check, variable) pairs of the expanded matrix, circulants in row-major
// order, row offsets ascending within each circulant.
std::vector<std::pair<int, int>> expand_parity_check(const QcCode& code);

}  // namespace ldpclab
