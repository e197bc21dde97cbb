#include "nexact/linalg.hpp"

#include <algorithm>

#include "nexact/errors.hpp"

namespace nexact {

bool is_prime(uint32_t p) {
    if (p < 2) return false;
    for (uint64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

uint32_t fp_add(uint32_t p, uint32_t a, uint32_t b) {
    uint64_t s = static_cast<uint64_t>(a) + b;
    return static_cast<uint32_t>(s >= p ? s - p : s);
}

uint32_t fp_sub(uint32_t p, uint32_t a, uint32_t b) { return fp_add(p, a, b == 0 ? 0 : p - b); }

uint32_t fp_mul(uint32_t p, uint32_t a, uint32_t b) {
    return static_cast<uint32_t>(static_cast<uint64_t>(a) * b % p);
}

uint32_t fp_neg(uint32_t p, uint32_t a) { return a == 0 ? 0 : p - a; }

uint32_t fp_inv(uint32_t p, uint32_t a) {
    internal_check(a != 0, "inverse of zero residue");
    // extended euclid on (a, p)
    int64_t t = 0, newt = 1, r = p, newr = a % p;
    while (newr != 0) {
        int64_t q = r / newr;
        int64_t tmp = t - q * newt;
        t = newt;
        newt = tmp;
        tmp = r - q * newr;
        r = newr;
        newr = tmp;
    }
    internal_check(r == 1, "modulus not prime in fp_inv");
    if (t < 0) t += p;
    return static_cast<uint32_t>(t);
}

Mat::Mat(int r, int c, uint32_t mod) : rows(r), cols(c), p(mod) {
    internal_check(r >= 0 && c >= 0, "negative matrix shape");
    a.assign(static_cast<size_t>(r) * c, 0);
}

Mat Mat::identity(int n, uint32_t mod) {
    Mat m(n, n, mod);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

bool Mat::is_zero() const {
    return std::all_of(a.begin(), a.end(), [](uint32_t x) { return x == 0; });
}

bool Mat::operator==(const Mat& o) const {
    return rows == o.rows && cols == o.cols && p == o.p && a == o.a;
}

static void check_same_shape(const Mat& x, const Mat& y) {
    internal_check(x.p == y.p, "modulus mismatch");
    internal_check(x.rows == y.rows && x.cols == y.cols, "shape mismatch");
}

Mat mat_add(const Mat& x, const Mat& y) {
    check_same_shape(x, y);
    Mat r = x;
    for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = fp_add(x.p, x.a[i], y.a[i]);
    return r;
}

Mat mat_sub(const Mat& x, const Mat& y) {
    check_same_shape(x, y);
    Mat r = x;
    for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = fp_sub(x.p, x.a[i], y.a[i]);
    return r;
}

Mat mat_neg(const Mat& x) {
    Mat r = x;
    for (auto& v : r.a) v = fp_neg(x.p, v);
    return r;
}

Mat mat_mul(const Mat& x, const Mat& y) {
    internal_check(x.p == y.p, "modulus mismatch");
    internal_check(x.cols == y.rows, "composed dimensions disagree");
    Mat r(x.rows, y.cols, x.p);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            uint32_t v = x.at(i, k);
            if (v == 0) continue;
            for (int j = 0; j < y.cols; ++j)
                r.at(i, j) = fp_add(x.p, r.at(i, j), fp_mul(x.p, v, y.at(k, j)));
        }
    return r;
}

Mat mat_scale(uint32_t c, const Mat& x) {
    Mat r = x;
    for (auto& v : r.a) v = fp_mul(x.p, c % x.p, v);
    return r;
}

Mat mat_transpose(const Mat& x) {
    Mat r(x.cols, x.rows, x.p);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) r.at(j, i) = x.at(i, j);
    return r;
}

Mat hstack(const Mat& x, const Mat& y) {
    internal_check(x.p == y.p && x.rows == y.rows, "hstack mismatch");
    Mat r(x.rows, x.cols + y.cols, x.p);
    for (int i = 0; i < x.rows; ++i) {
        for (int j = 0; j < x.cols; ++j) r.at(i, j) = x.at(i, j);
        for (int j = 0; j < y.cols; ++j) r.at(i, x.cols + j) = y.at(i, j);
    }
    return r;
}

Mat vstack(const Mat& x, const Mat& y) {
    internal_check(x.p == y.p && x.cols == y.cols, "vstack mismatch");
    Mat r(x.rows + y.rows, x.cols, x.p);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) r.at(i, j) = x.at(i, j);
    for (int i = 0; i < y.rows; ++i)
        for (int j = 0; j < x.cols; ++j) r.at(x.rows + i, j) = y.at(i, j);
    return r;
}

Mat take_columns(const Mat& x, const std::vector<int>& idx) {
    Mat r(x.rows, static_cast<int>(idx.size()), x.p);
    for (int i = 0; i < x.rows; ++i)
        for (size_t j = 0; j < idx.size(); ++j) r.at(i, static_cast<int>(j)) = x.at(i, idx[j]);
    return r;
}

Rref rref(const Mat& m) {
    Rref out;
    out.reduced = m;
    Mat& r = out.reduced;
    int row = 0;
    for (int col = 0; col < r.cols && row < r.rows; ++col) {
        int piv = -1;
        for (int i = row; i < r.rows; ++i)
            if (r.at(i, col) != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        if (piv != row)
            for (int j = 0; j < r.cols; ++j) std::swap(r.at(piv, j), r.at(row, j));
        uint32_t inv = fp_inv(r.p, r.at(row, col));
        for (int j = 0; j < r.cols; ++j) r.at(row, j) = fp_mul(r.p, inv, r.at(row, j));
        for (int i = 0; i < r.rows; ++i) {
            if (i == row) continue;
            uint32_t f = r.at(i, col);
            if (f == 0) continue;
            for (int j = 0; j < r.cols; ++j)
                r.at(i, j) = fp_sub(r.p, r.at(i, j), fp_mul(r.p, f, r.at(row, j)));
        }
        out.pivots.push_back(col);
        ++row;
    }
    out.rank = row;
    return out;
}

int mat_rank(const Mat& m) { return rref(m).rank; }

Mat kernel_basis(const Mat& m) {
    Rref rr = rref(m);
    std::vector<bool> is_pivot(m.cols, false);
    for (int c : rr.pivots) is_pivot[c] = true;
    std::vector<int> free_cols;
    for (int c = 0; c < m.cols; ++c)
        if (!is_pivot[c]) free_cols.push_back(c);
    Mat k(m.cols, static_cast<int>(free_cols.size()), m.p);
    for (size_t j = 0; j < free_cols.size(); ++j) {
        int fc = free_cols[j];
        k.at(fc, static_cast<int>(j)) = 1;
        for (size_t i = 0; i < rr.pivots.size(); ++i)
            k.at(rr.pivots[i], static_cast<int>(j)) = fp_neg(m.p, rr.reduced.at(static_cast<int>(i), fc));
    }
    return k;
}

std::optional<Mat> solve_linear(const Mat& m, const Mat& target) {
    internal_check(m.p == target.p, "modulus mismatch");
    internal_check(m.rows == target.rows, "solve shape mismatch");
    Rref rr = rref(hstack(m, target));
    for (int c : rr.pivots)
        if (c >= m.cols) return std::nullopt;
    Mat x(m.cols, target.cols, m.p);
    for (size_t i = 0; i < rr.pivots.size(); ++i)
        for (int j = 0; j < target.cols; ++j)
            x.at(rr.pivots[i], j) = rr.reduced.at(static_cast<int>(i), m.cols + j);
    return x;
}

Mat column_space_basis(const Mat& m) { return take_columns(m, rref(m).pivots); }

Mat column_echelon(const Mat& m) {
    Rref rr = rref(mat_transpose(m));
    Mat rows_kept(rr.rank, m.rows, m.p);
    for (int i = 0; i < rr.rank; ++i)
        for (int j = 0; j < m.rows; ++j) rows_kept.at(i, j) = rr.reduced.at(i, j);
    return mat_transpose(rows_kept);
}

bool is_invertible(const Mat& m) { return m.rows == m.cols && mat_rank(m) == m.rows; }

Mat mat_inverse(const Mat& m) {
    internal_check(m.rows == m.cols, "inverse of non-square matrix");
    auto x = solve_linear(m, Mat::identity(m.rows, m.p));
    internal_check(x.has_value(), "inverse of singular matrix");
    return *x;
}

}  // namespace nexact
