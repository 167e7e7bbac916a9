#include "bdiv/linalg.hpp"

#include "bdiv/errors.hpp"

namespace bdiv {

namespace {

int find_pivot(const RatMatrix& a, size_t col, size_t from) {
    for (size_t r = from; r < a.size(); ++r)
        if (!a[r][col].is_zero()) return static_cast<int>(r);
    return -1;
}

}  // namespace

std::vector<Rat> solve_linear(RatMatrix a, std::vector<Rat> b) {
    const size_t n = a.size();
    if (b.size() != n) throw ConsistencyError("solve_linear: dimension mismatch");
    for (size_t col = 0; col < n; ++col) {
        int p = find_pivot(a, col, col);
        if (p < 0) throw ConsistencyError("solve_linear: singular matrix");
        std::swap(a[col], a[static_cast<size_t>(p)]);
        std::swap(b[col], b[static_cast<size_t>(p)]);
        const Rat inv_piv = Rat(1) / a[col][col];
        for (size_t r = col + 1; r < n; ++r) {
            if (a[r][col].is_zero()) continue;
            const Rat f = a[r][col] * inv_piv;
            for (size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<Rat> x(n);
    for (size_t i = n; i-- > 0;) {
        Rat acc = b[i];
        for (size_t c = i + 1; c < n; ++c) acc -= a[i][c] * x[c];
        x[i] = acc / a[i][i];
    }
    return x;
}

RatMatrix invert(RatMatrix a) {
    const size_t n = a.size();
    RatMatrix inv(n, std::vector<Rat>(n, Rat(0)));
    for (size_t i = 0; i < n; ++i) inv[i][i] = Rat(1);
    for (size_t col = 0; col < n; ++col) {
        int p = find_pivot(a, col, col);
        if (p < 0) throw ConsistencyError("invert: singular matrix");
        std::swap(a[col], a[static_cast<size_t>(p)]);
        std::swap(inv[col], inv[static_cast<size_t>(p)]);
        const Rat inv_piv = Rat(1) / a[col][col];
        for (size_t c = 0; c < n; ++c) {
            a[col][c] *= inv_piv;
            inv[col][c] *= inv_piv;
        }
        for (size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col].is_zero()) continue;
            const Rat f = a[r][col];
            for (size_t c = 0; c < n; ++c) {
                a[r][c] -= f * a[col][c];
                inv[r][c] -= f * inv[col][c];
            }
        }
    }
    return inv;
}

}  // namespace bdiv
