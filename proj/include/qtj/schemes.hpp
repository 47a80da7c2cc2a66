#pragma once

// Finite subsets of Z^2 described by construction rules, and the staged
// families (box exhaustion, convergent windows) that sums are taken over.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "qtj/dioph.hpp"
#include "qtj/gl2z.hpp"

namespace qtj
{

struct SetDescriptor;
using SetPtr = std::shared_ptr<const SetDescriptor>;

struct Box
{
    std::int64_t radius = 0;
    bool include_origin = false;
};

/// {±(p_j, q_j) : start <= j < start + length}; `enrich` adds the sums of
/// adjacent convergents (p_j + p_{j+1}, q_j + q_{j+1}) inside the window.
struct QuantumWindow
{
    QuadIrr theta;
    std::size_t start = 0;
    std::size_t length = 1;
    bool with_negation = true;
    bool enrich = false;
};

struct Explicit
{
    std::vector<LatticePoint> points;
};

struct Transformed
{
    GL2Z matrix;
    SetPtr inner;
};

struct Translated
{
    LatticePoint shift;
    SetPtr inner;
};

struct SetDescriptor
{
    std::variant<Box, QuantumWindow, Explicit, Transformed, Translated> rule;
};

inline SetDescriptor box(std::int64_t radius, bool include_origin = false)
{
    if (radius < 0)
        throw Error(Errc::InvalidArgument, "box radius must be nonnegative");
    if (radius > (std::int64_t{1} << 30))
        throw Error(Errc::InvalidArgument, "box radius too large");
    return {Box{radius, include_origin}};
}

inline SetDescriptor quantum_window(QuadIrr theta, std::size_t start, std::size_t length, bool with_negation = true,
                                    bool enrich = false)
{
    if (length == 0)
        throw Error(Errc::InvalidArgument, "window length must be positive");
    return {QuantumWindow{std::move(theta), start, length, with_negation, enrich}};
}

inline SetDescriptor explicit_set(std::vector<LatticePoint> points) { return {Explicit{std::move(points)}}; }

inline SetDescriptor transform_set(const GL2Z &A, SetDescriptor d)
{
    return {Transformed{A, std::make_shared<const SetDescriptor>(std::move(d))}};
}

inline SetDescriptor translated(LatticePoint shift, SetDescriptor d)
{
    return {Translated{shift, std::make_shared<const SetDescriptor>(std::move(d))}};
}

inline std::uint64_t box_size(const Box &b)
{
    std::uint64_t side = static_cast<std::uint64_t>(2 * b.radius + 1);
    return side * side - (b.include_origin ? 0 : 1);
}

/// i-th point of a box in lexicographic order.
inline LatticePoint box_point(const Box &b, std::uint64_t i)
{
    const std::uint64_t side = static_cast<std::uint64_t>(2 * b.radius + 1);
    if (!b.include_origin && i >= side * side / 2)
        ++i;
    return {static_cast<std::int64_t>(i / side) - b.radius, static_cast<std::int64_t>(i % side) - b.radius};
}

namespace detail
{
inline std::int64_t to_i64(const Integer &x)
{
    if (!x.fits_slong_p())
        throw Error(Errc::NotRepresentable, "lattice coordinate " + x.get_str() + " exceeds 64 bits");
    return x.get_si();
}

inline std::int64_t checked_lin(std::int64_t a, std::int64_t m, std::int64_t b, std::int64_t n)
{
    __int128 v = static_cast<__int128>(a) * m + static_cast<__int128>(b) * n;
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
        throw Error(Errc::NotRepresentable, "lattice coordinate exceeds 64 bits");
    return static_cast<std::int64_t>(v);
}

inline void sort_unique(std::vector<LatticePoint> &v)
{
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

inline std::vector<LatticePoint> window_points(const QuantumWindow &w)
{
    auto pairs = convergents(cf_expand(w.theta, w.start + w.length), w.start + w.length);
    std::vector<LatticePoint> out;
    auto push = [&](const Integer &m, const Integer &n) {
        LatticePoint p{to_i64(m), to_i64(n)};
        out.push_back(p);
        if (w.with_negation)
            out.push_back(-p);
    };
    for (std::size_t j = w.start; j < w.start + w.length; ++j)
        push(pairs[j].m, pairs[j].n);
    if (w.enrich)
        for (std::size_t j = w.start; j + 1 < w.start + w.length; ++j)
            push(pairs[j].m + pairs[j + 1].m, pairs[j].n + pairs[j + 1].n);
    return out;
}
} // namespace detail

/// Duplicate-free points in lexicographic (m, n) order.
inline std::vector<LatticePoint> enumerate(const SetDescriptor &d)
{
    std::vector<LatticePoint> out;
    std::visit(
        [&](const auto &r) {
            using R = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<R, Box>)
            {
                const std::uint64_t count = box_size(r);
                out.reserve(count);
                for (std::uint64_t i = 0; i < count; ++i)
                    out.push_back(box_point(r, i));
            }
            else if constexpr (std::is_same_v<R, QuantumWindow>)
                out = detail::window_points(r);
            else if constexpr (std::is_same_v<R, Explicit>)
                out = r.points;
            else if constexpr (std::is_same_v<R, Transformed>)
            {
                out = enumerate(*r.inner);
                const GL2Z &A = r.matrix;
                for (auto &p : out)
                    p = {detail::checked_lin(A.a(), p.m, A.b(), p.n), detail::checked_lin(A.c(), p.m, A.d(), p.n)};
            }
            else
            {
                out = enumerate(*r.inner);
                for (auto &p : out)
                    p = {detail::checked_lin(1, p.m, 1, r.shift.m), detail::checked_lin(1, p.n, 1, r.shift.n)};
            }
        },
        d.rule);
    detail::sort_unique(out);
    return out;
}

inline std::string describe(const SetDescriptor &d)
{
    return std::visit(
        [](const auto &r) -> std::string {
            using R = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<R, Box>)
                return "box:" + std::to_string(r.radius) + (r.include_origin ? "+origin" : "");
            else if constexpr (std::is_same_v<R, QuantumWindow>)
                return "qwin:" + std::to_string(r.start) + ":" + std::to_string(r.length) + "@" + r.theta.to_spec() +
                       (r.with_negation ? "" : ":positive") + (r.enrich ? ":enriched" : "");
            else if constexpr (std::is_same_v<R, Explicit>)
            {
                std::string s = "explicit:";
                for (std::size_t i = 0; i < r.points.size(); ++i)
                    s += (i ? ";" : "") + std::to_string(r.points[i].m) + "," + std::to_string(r.points[i].n);
                return s;
            }
            else if constexpr (std::is_same_v<R, Transformed>)
                return "T" + r.matrix.to_string() + ":" + describe(*r.inner);
            else
                return "shift[" + std::to_string(r.shift.m) + "," + std::to_string(r.shift.n) + "]:" +
                       describe(*r.inner);
        },
        d.rule);
}

/// min |n| over the points other than the origin.
inline std::int64_t min_abs_n(const SetDescriptor &d)
{
    if (const Box *b = std::get_if<Box>(&d.rule); b && b->radius > 0)
        return 0;
    std::int64_t best = -1;
    for (const auto &p : enumerate(d))
    {
        if (p.is_origin())
            continue;
        std::int64_t a = p.n < 0 ? -p.n : p.n;
        if (best < 0 || a < best)
            best = a;
    }
    if (best < 0)
        throw Error(Errc::EmptySet, "set has no point other than the origin");
    return best;
}

/// Stage s is Box(radii[s]) with the origin present.
struct ClassicalCone
{
    std::vector<std::int64_t> radii;
};

/// Stage s (one of `stages`) is the convergent window starting at index s.
struct QuantumTheta
{
    QuadIrr theta;
    std::size_t window = 1;
    std::vector<std::size_t> stages;
    bool enrich = false;
};

using SchemeId = std::variant<ClassicalCone, QuantumTheta>;

inline SchemeId classical_cone(std::vector<std::int64_t> radii)
{
    for (std::size_t i = 0; i < radii.size(); ++i)
    {
        if (radii[i] < 0 || (i > 0 && radii[i] <= radii[i - 1]))
            throw Error(Errc::InvalidArgument, "box radii must be nonnegative and strictly increasing");
    }
    return ClassicalCone{std::move(radii)};
}

inline SchemeId quantum_theta(QuadIrr theta, std::size_t window, std::vector<std::size_t> stages, bool enrich = false)
{
    if (window == 0)
        throw Error(Errc::InvalidArgument, "window length must be positive");
    for (std::size_t i = 1; i < stages.size(); ++i)
        if (stages[i] <= stages[i - 1])
            throw Error(Errc::InvalidArgument, "stages must be strictly increasing");
    return QuantumTheta{std::move(theta), window, std::move(stages), enrich};
}

/// Stage indices a scheme defines, in order.
inline std::vector<std::size_t> stage_indices(const SchemeId &sch)
{
    if (const auto *c = std::get_if<ClassicalCone>(&sch))
    {
        std::vector<std::size_t> out(c->radii.size());
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = i;
        return out;
    }
    return std::get<QuantumTheta>(sch).stages;
}

inline SetDescriptor stage(const SchemeId &sch, std::size_t s)
{
    if (const auto *c = std::get_if<ClassicalCone>(&sch))
    {
        if (s >= c->radii.size())
            throw Error(Errc::InvalidArgument, "stage " + std::to_string(s) + " is outside the radius sequence");
        return box(c->radii[s], true);
    }
    const auto &q = std::get<QuantumTheta>(sch);
    if (!q.stages.empty() && !std::binary_search(q.stages.begin(), q.stages.end(), s))
        throw Error(Errc::InvalidArgument, "stage " + std::to_string(s) + " is not in the stage sequence");
    return quantum_window(q.theta, s, q.window, true, q.enrich);
}

} // namespace qtj
