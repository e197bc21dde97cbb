#pragma once
#include <cstdint>
#include <optional>
#include <vector>

namespace nexact {

/* Exact dense linear algebra over a prime field F_p.  Entries are residues in
 * [0, p) and the modulus travels with each matrix; every binary operation
 * checks that shapes and moduli agree.  Row reduction always picks the
 * leftmost nonzero pivot, so echelon forms, kernels and solutions are
 * deterministic functions of the input. */

bool is_prime(uint32_t p);

uint32_t fp_add(uint32_t p, uint32_t a, uint32_t b);
uint32_t fp_sub(uint32_t p, uint32_t a, uint32_t b);
uint32_t fp_mul(uint32_t p, uint32_t a, uint32_t b);
uint32_t fp_neg(uint32_t p, uint32_t a);
uint32_t fp_inv(uint32_t p, uint32_t a);  // a != 0, p prime

struct Mat {
    int rows = 0;
    int cols = 0;
    uint32_t p = 2;
    std::vector<uint32_t> a;  // row-major

    Mat() = default;
    Mat(int r, int c, uint32_t mod);

    static Mat zero(int r, int c, uint32_t mod) { return Mat(r, c, mod); }
    static Mat identity(int n, uint32_t mod);

    uint32_t& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    uint32_t at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    bool is_zero() const;
    bool operator==(const Mat& o) const;
};

Mat mat_add(const Mat& x, const Mat& y);
Mat mat_sub(const Mat& x, const Mat& y);
Mat mat_neg(const Mat& x);
Mat mat_mul(const Mat& x, const Mat& y);
Mat mat_scale(uint32_t c, const Mat& x);
Mat mat_transpose(const Mat& x);
Mat hstack(const Mat& x, const Mat& y);
Mat vstack(const Mat& x, const Mat& y);
Mat take_columns(const Mat& x, const std::vector<int>& idx);

struct Rref {
    Mat reduced;
    std::vector<int> pivots;  // pivot column per pivot row, ascending
    int rank = 0;
};

Rref rref(const Mat& m);
int mat_rank(const Mat& m);

// Columns span the right null space: m * k == 0, one column per free column.
Mat kernel_basis(const Mat& m);

// Least solution with free variables zeroed, or nullopt when inconsistent.
// Solves m * x = target column-wise; target may have several columns.
std::optional<Mat> solve_linear(const Mat& m, const Mat& target);

// Columns of m at its pivot positions: a deterministic column-space basis.
Mat column_space_basis(const Mat& m);

// Unique reduced column echelon basis of the column space (for dedup keys).
Mat column_echelon(const Mat& m);

bool is_invertible(const Mat& m);
Mat mat_inverse(const Mat& m);  // throws InternalError when singular

}  // namespace nexact
