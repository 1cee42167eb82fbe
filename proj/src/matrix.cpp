#include "opforge/matrix.hpp"

#include <sstream>

namespace opforge {

RationalMatrix::RationalMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0) throw ShapeMismatch("negative matrix dimension");
}

void RationalMatrix::check_index(int r, int c) const {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_) {
        std::ostringstream os;
        os << "index (" << r << "," << c << ") outside " << rows_ << "x" << cols_;
        throw ShapeMismatch(os.str());
    }
}

RationalMatrix RationalMatrix::from_triplets(int rows, int cols, const std::vector<Triplet>& ts) {
    RationalMatrix m(rows, cols);
    for (const auto& t : ts) {
        m.check_index(t.row, t.col);
        if (t.val == 0) continue;
        auto [it, fresh] = m.ent_.try_emplace({t.row, t.col}, t.val);
        if (!fresh) {
            std::ostringstream os;
            os << "duplicate triplet key (" << t.row << "," << t.col << ")";
            throw ShapeMismatch(os.str());
        }
    }
    return m;
}

RationalMatrix RationalMatrix::identity(int n) {
    RationalMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.ent_[{i, i}] = 1;
    return m;
}

Rat RationalMatrix::get(int r, int c) const {
    check_index(r, c);
    auto it = ent_.find({r, c});
    return it == ent_.end() ? Rat(0) : it->second;
}

void RationalMatrix::set(int r, int c, const Rat& v) {
    check_index(r, c);
    if (v == 0)
        ent_.erase({r, c});
    else
        ent_[{r, c}] = v;
}

void RationalMatrix::add_at(int r, int c, const Rat& v) {
    check_index(r, c);
    if (v == 0) return;
    auto it = ent_.find({r, c});
    if (it == ent_.end()) {
        ent_.emplace(std::make_pair(r, c), v);
    } else {
        it->second += v;
        if (it->second == 0) ent_.erase(it);
    }
}

std::vector<Triplet> RationalMatrix::triplets() const {
    std::vector<Triplet> out;
    out.reserve(ent_.size());
    for (const auto& [rc, v] : ent_) out.push_back({rc.first, rc.second, v});
    return out;
}

RationalMatrix RationalMatrix::transpose() const {
    RationalMatrix m(cols_, rows_);
    for (const auto& [rc, v] : ent_) m.ent_[{rc.second, rc.first}] = v;
    return m;
}

RationalMatrix RationalMatrix::operator+(const RationalMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw ShapeMismatch("matrix sum shape");
    RationalMatrix m = *this;
    for (const auto& [rc, v] : o.ent_) m.add_at(rc.first, rc.second, v);
    return m;
}

RationalMatrix RationalMatrix::operator-(const RationalMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw ShapeMismatch("matrix difference shape");
    RationalMatrix m = *this;
    for (const auto& [rc, v] : o.ent_) m.add_at(rc.first, rc.second, -v);
    return m;
}

RationalMatrix RationalMatrix::operator-() const {
    RationalMatrix m = *this;
    for (auto& [rc, v] : m.ent_) v = -v;
    return m;
}

RationalMatrix RationalMatrix::scaled(const Rat& c) const {
    if (c == 0) return RationalMatrix(rows_, cols_);
    RationalMatrix m = *this;
    for (auto& [rc, v] : m.ent_) v *= c;
    return m;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& o) const {
    if (cols_ != o.rows_) throw ShapeMismatch("matrix product shape");
    RationalMatrix m(rows_, o.cols_);
    // row-major walk of the left factor against the right factor's rows
    for (const auto& [rc, v] : ent_) {
        auto lo = o.ent_.lower_bound({rc.second, 0});
        auto hi = o.ent_.upper_bound({rc.second, o.cols_});
        for (auto it = lo; it != hi; ++it) m.add_at(rc.first, it->first.second, v * it->second);
    }
    return m;
}

bool RationalMatrix::operator==(const RationalMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && ent_ == o.ent_;
}

std::vector<Rat> RationalMatrix::apply(const std::vector<Rat>& v) const {
    if ((int)v.size() != cols_) throw ShapeMismatch("matrix-vector shape");
    std::vector<Rat> out(rows_, Rat(0));
    for (const auto& [rc, val] : ent_) out[rc.first] += val * v[rc.second];
    return out;
}

RationalMatrix RationalMatrix::hstack(const RationalMatrix& a, const RationalMatrix& b) {
    if (a.rows_ != b.rows_) throw ShapeMismatch("hstack row count");
    RationalMatrix m(a.rows_, a.cols_ + b.cols_);
    m.ent_ = a.ent_;
    for (const auto& [rc, v] : b.ent_) m.ent_[{rc.first, rc.second + a.cols_}] = v;
    return m;
}

RationalMatrix RationalMatrix::vstack(const RationalMatrix& a, const RationalMatrix& b) {
    if (a.cols_ != b.cols_) throw ShapeMismatch("vstack column count");
    RationalMatrix m(a.rows_ + b.rows_, a.cols_);
    m.ent_ = a.ent_;
    for (const auto& [rc, v] : b.ent_) m.ent_[{rc.first + a.rows_, rc.second}] = v;
    return m;
}

RationalMatrix RationalMatrix::direct_sum(const RationalMatrix& a, const RationalMatrix& b) {
    RationalMatrix m(a.rows_ + b.rows_, a.cols_ + b.cols_);
    m.ent_ = a.ent_;
    for (const auto& [rc, v] : b.ent_) m.ent_[{rc.first + a.rows_, rc.second + a.cols_}] = v;
    return m;
}

RationalMatrix RationalMatrix::kron(const RationalMatrix& a, const RationalMatrix& b) {
    RationalMatrix m(a.rows_ * b.rows_, a.cols_ * b.cols_);
    for (const auto& [rc1, v1] : a.ent_)
        for (const auto& [rc2, v2] : b.ent_)
            m.ent_[{rc1.first * b.rows_ + rc2.first, rc1.second * b.cols_ + rc2.second}] = v1 * v2;
    return m;
}

RationalMatrix RationalMatrix::select_cols(const std::vector<int>& idx) const {
    std::map<int, std::vector<int>> pos;   // a column may be selected repeatedly
    for (int j = 0; j < (int)idx.size(); ++j) {
        if (idx[j] < 0 || idx[j] >= cols_) throw ShapeMismatch("select_cols index");
        pos[idx[j]].push_back(j);
    }
    RationalMatrix m(rows_, (int)idx.size());
    for (const auto& [rc, v] : ent_) {
        auto it = pos.find(rc.second);
        if (it == pos.end()) continue;
        for (int j : it->second) m.ent_[{rc.first, j}] = v;
    }
    return m;
}

RationalMatrix RationalMatrix::select_rows(const std::vector<int>& idx) const {
    std::map<int, int> pos;
    for (int i = 0; i < (int)idx.size(); ++i) {
        if (idx[i] < 0 || idx[i] >= rows_) throw ShapeMismatch("select_rows index");
        pos[idx[i]] = i;
    }
    RationalMatrix m((int)idx.size(), cols_);
    for (const auto& [rc, v] : ent_) {
        auto it = pos.find(rc.first);
        if (it != pos.end()) m.ent_[{it->second, rc.second}] = v;
    }
    return m;
}

std::vector<Rat> RationalMatrix::col_dense(int c) const {
    if (c < 0 || c >= cols_) throw ShapeMismatch("col_dense index");
    std::vector<Rat> out(rows_, Rat(0));
    for (const auto& [rc, v] : ent_)
        if (rc.second == c) out[rc.first] = v;
    return out;
}

} // namespace opforge
