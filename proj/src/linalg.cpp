#include "sandpile/linalg.hpp"

#include <algorithm>
#include <cstdlib>

namespace sandpile {

Int det(const IntMatrix &a) {
    if (a.rows != a.cols) throw NotSquare();
    const int n = a.rows;
    if (n == 0) return Int(1);
    IntMatrix m = a;
    Int prev(1);
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (m.at(k, k) == 0) {
            int p = -1;
            for (int i = k + 1; i < n; ++i)
                if (m.at(i, k) != 0) {
                    p = i;
                    break;
                }
            if (p < 0) return Int(0);
            for (int j = 0; j < n; ++j) std::swap(m.at(k, j), m.at(p, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) {
                Int t = m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j);
                mpz_divexact(m.at(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            m.at(i, k) = 0;
        }
        prev = m.at(k, k);
    }
    return sign > 0 ? m.at(n - 1, n - 1) : Int(-m.at(n - 1, n - 1));
}

namespace {

// Gauss-Jordan on [A | B]; on return B holds A^{-1} * B.
void gauss_jordan(RatMatrix &a, RatMatrix &b) {
    const int n = a.rows;
    for (int k = 0; k < n; ++k) {
        int p = -1;
        for (int i = k; i < n; ++i)
            if (a.at(i, k) != 0) {
                p = i;
                break;
            }
        if (p < 0) throw Singular();
        if (p != k) {
            for (int j = 0; j < n; ++j) std::swap(a.at(k, j), a.at(p, j));
            for (int j = 0; j < b.cols; ++j) std::swap(b.at(k, j), b.at(p, j));
        }
        Rat piv = a.at(k, k);
        for (int j = 0; j < n; ++j) a.at(k, j) /= piv;
        for (int j = 0; j < b.cols; ++j) b.at(k, j) /= piv;
        for (int i = 0; i < n; ++i) {
            if (i == k || a.at(i, k) == 0) continue;
            Rat f = a.at(i, k);
            for (int j = 0; j < n; ++j) a.at(i, j) -= f * a.at(k, j);
            for (int j = 0; j < b.cols; ++j) b.at(i, j) -= f * b.at(k, j);
        }
    }
}

}  // namespace

RatMatrix inverse(const IntMatrix &a) {
    if (a.rows != a.cols) throw NotSquare();
    RatMatrix m(a);
    RatMatrix inv = RatMatrix::identity(a.rows);
    gauss_jordan(m, inv);
    return inv;
}

RatVec solve_col(const IntMatrix &a, const RatVec &b) {
    if (a.rows != a.cols) throw NotSquare();
    if (static_cast<int>(b.size()) != a.rows) throw LinalgError("dimension mismatch");
    RatMatrix m(a);
    RatMatrix rhs(a.rows, 1);
    for (int i = 0; i < a.rows; ++i) rhs.at(i, 0) = b[i];
    gauss_jordan(m, rhs);
    RatVec x(a.rows);
    for (int i = 0; i < a.rows; ++i) x[i] = rhs.at(i, 0);
    return x;
}

RatVec solve_row(const IntMatrix &a, const RatVec &b) { return solve_col(a.transposed(), b); }

namespace {

struct SnfWork {
    IntMatrix a, u, v;

    void swap_rows(int i, int j) {
        if (i == j) return;
        for (int k = 0; k < a.cols; ++k) std::swap(a.at(i, k), a.at(j, k));
        for (int k = 0; k < u.cols; ++k) std::swap(u.at(i, k), u.at(j, k));
    }
    void swap_cols(int i, int j) {
        if (i == j) return;
        for (int k = 0; k < a.rows; ++k) std::swap(a.at(k, i), a.at(k, j));
        for (int k = 0; k < v.rows; ++k) std::swap(v.at(k, i), v.at(k, j));
    }
    // row_i += f * row_j
    void add_row(int i, int j, const Int &f) {
        for (int k = 0; k < a.cols; ++k) a.at(i, k) += f * a.at(j, k);
        for (int k = 0; k < u.cols; ++k) u.at(i, k) += f * u.at(j, k);
    }
    // col_i += f * col_j
    void add_col(int i, int j, const Int &f) {
        for (int k = 0; k < a.rows; ++k) a.at(k, i) += f * a.at(k, j);
        for (int k = 0; k < v.rows; ++k) v.at(k, i) += f * v.at(k, j);
    }
    void negate_row(int i) {
        for (int k = 0; k < a.cols; ++k) a.at(i, k) = -a.at(i, k);
        for (int k = 0; k < u.cols; ++k) u.at(i, k) = -u.at(i, k);
    }
};

}  // namespace

SnfResult smith_normal_form(const IntMatrix &a0) {
    SnfWork w{a0, IntMatrix::identity(a0.rows), IntMatrix::identity(a0.cols)};
    IntMatrix &a = w.a;
    const int n = a.rows, m = a.cols;
    const int r = std::min(n, m);

    for (int t = 0; t < r; ++t) {
        for (;;) {
            // Smallest-magnitude nonzero pivot in the trailing submatrix.
            int pi = -1, pj = -1;
            Int best;
            for (int i = t; i < n; ++i)
                for (int j = t; j < m; ++j) {
                    if (a.at(i, j) == 0) continue;
                    Int mag = abs(a.at(i, j));
                    if (pi < 0 || mag < best) {
                        best = mag;
                        pi = i;
                        pj = j;
                    }
                }
            if (pi < 0) goto done;
            w.swap_rows(t, pi);
            w.swap_cols(t, pj);
            if (a.at(t, t) < 0) w.negate_row(t);

            bool clean = true;
            for (int i = t + 1; i < n; ++i) {
                if (a.at(i, t) == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), a.at(i, t).get_mpz_t(), a.at(t, t).get_mpz_t());
                w.add_row(i, t, -q);
                if (a.at(i, t) != 0) clean = false;
            }
            for (int j = t + 1; j < m; ++j) {
                if (a.at(t, j) == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), a.at(t, j).get_mpz_t(), a.at(t, t).get_mpz_t());
                w.add_col(j, t, -q);
                if (a.at(t, j) != 0) clean = false;
            }
            if (!clean) continue;  // remainders are smaller; pick a new pivot

            // Pivot must divide every remaining entry for the divisibility chain.
            bool divides_all = true;
            for (int i = t + 1; i < n && divides_all; ++i)
                for (int j = t + 1; j < m; ++j)
                    if (a.at(i, j) % a.at(t, t) != 0) {
                        w.add_row(t, i, Int(1));
                        divides_all = false;
                        break;
                    }
            if (divides_all) break;
        }
    }
done:
    return SnfResult{a, w.u, w.v};
}

Int lcm_denominators(const RatVec &v) {
    Int l(1);
    for (const Rat &r : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), r.get_den_mpz_t());
    return l;
}

}  // namespace sandpile
