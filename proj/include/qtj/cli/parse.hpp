#pragma once

// Text formats accepted on the command line.
//   theta:   quad:a:b:c:d | rat:p:q | inf | decimal literal
//   mu:      i | x+yi (rational or terminating decimal parts) | gauss:<re>,<im>
//            where <re> and <im> are a:b:c:d meaning (a + b sqrt(d)) / c
//   set:     box:N | box:N:punctured | qwin:s:L | qwin:s:L:enrich | explicit:m,n;m,n;...
//            with prefixes T[a,b,c,d]: and shift[m0,n0]:
//   scheme:  classical:N1,N2,... | quantum:<theta>:L
//   stages:  lo..hi | s1,s2,...
//   z:       complex as for mu (any imaginary part) | t=<real>

#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qtj/foliation.hpp"
#include "qtj/schemes.hpp"
#include "qtj/weierstrass.hpp"

namespace qtj::cli
{

inline Error parse_error(const std::string &what, std::string_view text)
{
    return Error(Errc::Parse, what + ": '" + std::string(text) + "'");
}

inline std::vector<std::string> split(std::string_view s, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;)
    {
        std::size_t pos = s.find(sep, start);
        out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos)
            return out;
        start = pos + 1;
    }
}

inline std::int64_t parse_int(std::string_view s)
{
    std::int64_t v = 0;
    const char *first = s.data();
    if (!s.empty() && s[0] == '+')
        ++first;
    auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw parse_error("not an integer", s);
    return v;
}

inline Integer parse_integer(std::string_view s)
{
    std::string t(s);
    if (!t.empty() && t[0] == '+')
        t.erase(0, 1);
    Integer v;
    if (t.empty() || t == "-" || v.set_str(t, 10) != 0)
        throw parse_error("not an integer", s);
    return v;
}

/// "p", "p/q", or a terminating decimal such as -0.31 or 2.5e-3, read exactly.
inline Rational parse_rational(std::string_view s)
{
    if (s.empty())
        throw parse_error("empty number", s);
    if (auto slash = s.find('/'); slash != std::string_view::npos)
    {
        Integer den = parse_integer(s.substr(slash + 1));
        if (den == 0)
            throw parse_error("zero denominator", s);
        return make_rational(parse_integer(s.substr(0, slash)), den);
    }
    std::string_view mant = s;
    long exp10 = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos)
    {
        exp10 = static_cast<long>(parse_int(s.substr(e + 1)));
        mant = s.substr(0, e);
    }
    if (exp10 > 10000 || exp10 < -10000)
        throw parse_error("exponent out of range", s);
    std::string digits(mant);
    if (auto dot = digits.find('.'); dot != std::string::npos)
    {
        exp10 -= static_cast<long>(digits.size() - dot - 1);
        digits.erase(dot, 1);
    }
    if (digits.empty() || digits == "-" || digits == "+")
        throw parse_error("not a number", s);
    Integer num = parse_integer(digits);
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
    return exp10 < 0 ? make_rational(num, scale) : Rational(num * scale);
}

/// "a:b:c:d" meaning (a + b sqrt(d)) / c.
inline QuadIrr parse_quad_components(std::string_view s)
{
    auto parts = split(s, ':');
    if (parts.size() != 4)
        throw parse_error("expected a:b:c:d", s);
    if (parse_integer(parts[2]) == 0)
        throw parse_error("zero denominator", s);
    if (parse_integer(parts[3]) < 0)
        throw parse_error("negative radicand", s);
    return QuadIrr::make(parse_integer(parts[0]), parse_integer(parts[1]), parse_integer(parts[2]),
                         parse_integer(parts[3]));
}

/// A theta value: exact, or a float for heuristic expansion only.
struct ThetaText
{
    std::optional<QuadIrr> exact;
    std::optional<std::string> decimal;
    bool infinite = false;
};

inline ThetaText parse_theta_text(std::string_view s)
{
    ThetaText t;
    if (s == "inf")
        t.infinite = true;
    else if (s.starts_with("quad:"))
        t.exact = parse_quad_components(s.substr(5));
    else if (s.starts_with("rat:"))
    {
        auto parts = split(s.substr(4), ':');
        if (parts.size() != 2)
            throw parse_error("expected rat:p:q", s);
        t.exact = QuadIrr(parse_rational(parts[0] + "/" + parts[1]));
    }
    else
    {
        parse_rational(s); // validates the literal
        t.decimal = std::string(s);
    }
    return t;
}

inline QuadIrr parse_theta(std::string_view s)
{
    ThetaText t = parse_theta_text(s);
    if (!t.exact)
        throw Error(Errc::InvalidArgument, "this command needs an exact theta (quad: or rat:), got '" + std::string(s) + "'");
    return *t.exact;
}

inline Slope parse_slope(std::string_view s)
{
    ThetaText t = parse_theta_text(s);
    if (t.infinite)
        return Infinity{};
    if (!t.exact)
        throw Error(Errc::InvalidArgument, "slope must be exact or inf, got '" + std::string(s) + "'");
    return *t.exact;
}

/// Complex literal with rational parts: "i", "-2i", "3", "1/2+i", "0.31-0.17i".
inline GaussianRational parse_gaussian(std::string_view s)
{
    if (s.empty())
        throw parse_error("empty complex number", s);
    if (s.back() != 'i')
        return GaussianRational(parse_rational(s), Rational(0));
    std::string_view body = s.substr(0, s.size() - 1);
    std::size_t split_at = std::string_view::npos;
    for (std::size_t k = body.size(); k-- > 1;)
    {
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E')
        {
            split_at = k;
            break;
        }
    }
    std::string_view re = split_at == std::string_view::npos ? std::string_view() : body.substr(0, split_at);
    std::string_view im = split_at == std::string_view::npos ? body : body.substr(split_at);
    Rational im_v;
    if (im.empty() || im == "+")
        im_v = 1;
    else if (im == "-")
        im_v = -1;
    else
        im_v = parse_rational(im);
    return GaussianRational(re.empty() ? Rational(0) : parse_rational(re), im_v);
}

inline QuadComplex parse_quad_complex(std::string_view s)
{
    if (s.starts_with("gauss:"))
    {
        auto parts = split(s.substr(6), ',');
        if (parts.size() != 2)
            throw parse_error("expected gauss:a:b:c:d,a:b:c:d", s);
        return QuadComplex(parse_quad_components(parts[0]), parse_quad_components(parts[1]));
    }
    return to_quad(parse_gaussian(s));
}

inline Modulus parse_mu(std::string_view s) { return Modulus(parse_quad_complex(s)); }

inline LatticePoint parse_lattice_point(std::string_view s)
{
    auto parts = split(s, ',');
    if (parts.size() != 2)
        throw parse_error("expected m,n", s);
    return {parse_int(parts[0]), parse_int(parts[1])};
}

inline GL2Z parse_matrix(std::string_view s)
{
    auto parts = split(s, ',');
    if (parts.size() != 4)
        throw parse_error("expected a,b,c,d", s);
    return GL2Z::make(parse_int(parts[0]), parse_int(parts[1]), parse_int(parts[2]), parse_int(parts[3]));
}

inline std::size_t parse_size(std::string_view s)
{
    std::int64_t v = parse_int(s);
    if (v < 0)
        throw parse_error("expected a nonnegative integer", s);
    return static_cast<std::size_t>(v);
}

inline SetDescriptor parse_set(std::string_view s, const std::optional<QuadIrr> &theta = std::nullopt)
{
    if (s.starts_with("T[") || s.starts_with("shift["))
    {
        auto close = s.find("]:");
        if (close == std::string_view::npos)
            throw parse_error("expected T[a,b,c,d]:<set> or shift[m0,n0]:<set>", s);
        SetDescriptor inner = parse_set(s.substr(close + 2), theta);
        if (s[0] == 'T')
            return transform_set(parse_matrix(s.substr(2, close - 2)), std::move(inner));
        return translated(parse_lattice_point(s.substr(6, close - 6)), std::move(inner));
    }
    if (s.starts_with("box:"))
    {
        auto parts = split(s.substr(4), ':');
        if (parts.size() == 1)
            return box(parse_int(parts[0]), true);
        if (parts.size() == 2 && parts[1] == "punctured")
            return box(parse_int(parts[0]), false);
        throw parse_error("expected box:N or box:N:punctured", s);
    }
    if (s.starts_with("qwin:"))
    {
        if (!theta)
            throw Error(Errc::InvalidArgument, "qwin sets need --theta");
        auto parts = split(s.substr(5), ':');
        bool enrich = parts.size() == 3 && parts[2] == "enrich";
        if (parts.size() != 2 && !enrich)
            throw parse_error("expected qwin:s:L or qwin:s:L:enrich", s);
        return quantum_window(*theta, parse_size(parts[0]), parse_size(parts[1]), true, enrich);
    }
    if (s.starts_with("explicit:"))
    {
        std::vector<LatticePoint> pts;
        std::string_view body = s.substr(9);
        if (!body.empty())
            for (const auto &item : split(body, ';'))
                pts.push_back(parse_lattice_point(item));
        return explicit_set(std::move(pts));
    }
    throw parse_error("unknown set", s);
}

inline std::vector<std::size_t> parse_stages(std::string_view s)
{
    std::vector<std::size_t> out;
    if (auto dots = s.find(".."); dots != std::string_view::npos)
    {
        std::size_t lo = parse_size(s.substr(0, dots)), hi = parse_size(s.substr(dots + 2));
        if (hi < lo)
            throw parse_error("empty stage range", s);
        for (std::size_t v = lo; v <= hi; ++v)
            out.push_back(v);
        return out;
    }
    for (const auto &item : split(s, ','))
        out.push_back(parse_size(item));
    return out;
}

inline SchemeId parse_scheme(std::string_view s)
{
    if (s.starts_with("classical:"))
    {
        std::vector<std::int64_t> radii;
        for (const auto &item : split(s.substr(10), ','))
            radii.push_back(parse_int(item));
        return classical_cone(std::move(radii));
    }
    if (s.starts_with("quantum:"))
    {
        std::string_view body = s.substr(8);
        auto last = body.rfind(':');
        if (last == std::string_view::npos)
            throw parse_error("expected quantum:<theta>:L", s);
        // stages are attached by the caller
        return quantum_theta(parse_theta(body.substr(0, last)), parse_size(body.substr(last + 1)), {});
    }
    throw parse_error("unknown scheme", s);
}

/// "t=<real>" names the point t (1 + theta mu) on the slope line.
inline CPoint parse_z(std::string_view s, const Modulus &mu, const std::optional<QuadIrr> &theta)
{
    if (s.starts_with("t="))
    {
        if (!theta)
            throw Error(Errc::InvalidArgument, "z = t=<real> needs a slope theta");
        return slope_point(mu, *theta, QuadIrr(parse_rational(s.substr(2))));
    }
    return CPoint(parse_quad_complex(s));
}

} // namespace qtj::cli
