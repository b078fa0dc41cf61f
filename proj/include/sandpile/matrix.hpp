#ifndef SANDPILE_MATRIX_HPP
#define SANDPILE_MATRIX_HPP

#include <gmpxx.h>

#include <cassert>
#include <initializer_list>
#include <string>
#include <vector>

namespace sandpile {

using Int = mpz_class;
using Rat = mpq_class;
using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;

inline Rat make_rat(const Int &num, const Int &den) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline Int rat_floor(const Rat &r) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

inline Int rat_ceil(const Rat &r) {
    Int q;
    mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

inline bool rat_is_integer(const Rat &r) { return r.get_den() == 1; }

inline std::string rat_to_string(const Rat &r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

/// Dense row-major matrix over arbitrary-precision integers.
struct IntMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<Int> data;

    IntMatrix() = default;
    IntMatrix(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, Int(0)) {}
    IntMatrix(std::initializer_list<std::initializer_list<long>> rws) {
        rows = static_cast<int>(rws.size());
        cols = rows > 0 ? static_cast<int>(rws.begin()->size()) : 0;
        data.reserve(static_cast<size_t>(rows) * cols);
        for (const auto &row : rws) {
            assert(static_cast<int>(row.size()) == cols);
            for (long v : row) data.emplace_back(v);
        }
    }

    Int &at(int i, int j) { return data[static_cast<size_t>(i) * cols + j]; }
    const Int &at(int i, int j) const { return data[static_cast<size_t>(i) * cols + j]; }

    static IntMatrix identity(int n) {
        IntMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    IntMatrix transposed() const {
        IntMatrix m(cols, rows);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) m.at(j, i) = at(i, j);
        return m;
    }

    bool operator==(const IntMatrix &o) const = default;
};

inline IntMatrix operator*(const IntMatrix &a, const IntMatrix &b) {
    assert(a.cols == b.rows);
    IntMatrix r(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int k = 0; k < a.cols; ++k) {
            const Int &aik = a.at(i, k);
            if (aik == 0) continue;
            for (int j = 0; j < b.cols; ++j) r.at(i, j) += aik * b.at(k, j);
        }
    return r;
}

/// Dense row-major matrix over exact rationals; entries stay canonical.
struct RatMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<Rat> data;

    RatMatrix() = default;
    RatMatrix(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, Rat(0)) {}
    explicit RatMatrix(const IntMatrix &m) : rows(m.rows), cols(m.cols) {
        data.reserve(m.data.size());
        for (const Int &v : m.data) data.emplace_back(v);
    }

    Rat &at(int i, int j) { return data[static_cast<size_t>(i) * cols + j]; }
    const Rat &at(int i, int j) const { return data[static_cast<size_t>(i) * cols + j]; }

    static RatMatrix identity(int n) {
        RatMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    bool operator==(const RatMatrix &o) const = default;
};

// x * A for a row vector x.
inline IntVec row_times(const IntVec &x, const IntMatrix &a) {
    assert(static_cast<int>(x.size()) == a.rows);
    IntVec r(a.cols, Int(0));
    for (int i = 0; i < a.rows; ++i) {
        if (x[i] == 0) continue;
        for (int j = 0; j < a.cols; ++j) r[j] += x[i] * a.at(i, j);
    }
    return r;
}

inline RatVec row_times(const RatVec &x, const IntMatrix &a) {
    assert(static_cast<int>(x.size()) == a.rows);
    RatVec r(a.cols, Rat(0));
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j) r[j] += x[i] * Rat(a.at(i, j));
    return r;
}

// A * v for a column vector v.
inline IntVec times_col(const IntMatrix &a, const IntVec &v) {
    assert(static_cast<int>(v.size()) == a.cols);
    IntVec r(a.rows, Int(0));
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j) r[i] += a.at(i, j) * v[j];
    return r;
}

inline Rat dot(const RatVec &a, const RatVec &b) {
    assert(a.size() == b.size());
    Rat s(0);
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline Int dot(const IntVec &a, const IntVec &b) {
    assert(a.size() == b.size());
    Int s(0);
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline RatVec to_rat(const IntVec &v) {
    RatVec r;
    r.reserve(v.size());
    for (const Int &x : v) r.emplace_back(x);
    return r;
}

inline IntVec int_vec(std::initializer_list<long> vals) {
    IntVec r;
    r.reserve(vals.size());
    for (long v : vals) r.emplace_back(v);
    return r;
}

}  // namespace sandpile

#endif
