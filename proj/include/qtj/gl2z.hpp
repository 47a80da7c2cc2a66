#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>

#include "qtj/error.hpp"

namespace qtj
{

/// Integer lattice point (m, n); the lattice vector it names is m*mu + n.
struct LatticePoint
{
    std::int64_t m = 0;
    std::int64_t n = 0;

    friend auto operator<=>(const LatticePoint &, const LatticePoint &) = default;
    friend LatticePoint operator+(LatticePoint x, LatticePoint y) { return {x.m + y.m, x.n + y.n}; }
    friend LatticePoint operator-(LatticePoint x) { return {-x.m, -x.n}; }
    bool is_origin() const { return m == 0 && n == 0; }
};

/// 2x2 integer matrix [[a, b], [c, d]] with determinant +1 or -1.
class GL2Z
{
public:
    GL2Z() = default;

    static GL2Z make(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d)
    {
        std::int64_t det = a * d - b * c;
        if (det != 1 && det != -1)
            throw Error(Errc::InvalidArgument, "matrix [" + std::to_string(a) + "," + std::to_string(b) + "," +
                                                   std::to_string(c) + "," + std::to_string(d) +
                                                   "] has determinant " + std::to_string(det));
        GL2Z g;
        g.a_ = a;
        g.b_ = b;
        g.c_ = c;
        g.d_ = d;
        return g;
    }

    static GL2Z identity() { return {}; }
    static GL2Z translation(std::int64_t k) { return make(1, k, 0, 1); }
    static GL2Z inversion() { return make(0, -1, 1, 0); }
    static GL2Z negation() { return make(-1, 0, 0, 1); }

    std::int64_t a() const { return a_; }
    std::int64_t b() const { return b_; }
    std::int64_t c() const { return c_; }
    std::int64_t d() const { return d_; }
    std::int64_t det() const { return a_ * d_ - b_ * c_; }

    GL2Z transpose() const { return make(a_, c_, b_, d_); }
    GL2Z inverse() const
    {
        std::int64_t s = det();
        return make(s * d_, -s * b_, -s * c_, s * a_);
    }

    /// Column-vector action (m, n) -> (a m + b n, c m + d n).
    LatticePoint apply(LatticePoint p) const { return {a_ * p.m + b_ * p.n, c_ * p.m + d_ * p.n}; }

    friend GL2Z operator*(const GL2Z &x, const GL2Z &y)
    {
        auto entry = [](std::int64_t p, std::int64_t q, std::int64_t r, std::int64_t s) {
            __int128 v = static_cast<__int128>(p) * q + static_cast<__int128>(r) * s;
            if (v > INT64_MAX || v < INT64_MIN)
                throw Error(Errc::NotRepresentable, "matrix product overflows 64-bit entries");
            return static_cast<std::int64_t>(v);
        };
        return make(entry(x.a_, y.a_, x.b_, y.c_), entry(x.a_, y.b_, x.b_, y.d_), entry(x.c_, y.a_, x.d_, y.c_),
                    entry(x.c_, y.b_, x.d_, y.d_));
    }
    friend bool operator==(const GL2Z &, const GL2Z &) = default;

    std::string to_string() const
    {
        return "[" + std::to_string(a_) + "," + std::to_string(b_) + "," + std::to_string(c_) + "," +
               std::to_string(d_) + "]";
    }
    friend std::ostream &operator<<(std::ostream &os, const GL2Z &g) { return os << g.to_string(); }

private:
    std::int64_t a_ = 1, b_ = 0, c_ = 0, d_ = 1;
};

} // namespace qtj
