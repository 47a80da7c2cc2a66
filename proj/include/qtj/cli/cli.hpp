#pragma once

// Subcommand dispatch for the qtj tool.

#include <chrono>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "qtj/cli/parse.hpp"
#include "qtj/cli/report.hpp"
#include "qtj/modular.hpp"
#include "qtj/weierstrass.hpp"

namespace qtj::cli
{

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumeric = 3;

struct Built
{
    std::string kind;
    json payload;
    std::string table;                // CSV table key, empty for a single row
    std::vector<std::string> columns; // CSV columns
};

namespace detail
{
inline std::string exact_text(const QuadIrr &x) { return x.to_string(); }

inline void put_complex(json &j, const std::string &prefix, const BigComplex &z, Precision p)
{
    j[prefix + "re"] = num_text(z.re(), p);
    j[prefix + "im"] = num_text(z.im(), p);
}

inline std::string double_text(double v)
{
    BigFloat b(53);
    mpfr_set_d(b.raw(), v, MPFR_RNDN);
    return b.to_string(17);
}

inline Mode mode_of(bool exact) { return exact ? Mode::Exact : Mode::Float; }

inline std::optional<QuadIrr> optional_theta(const std::string &s)
{
    if (s.empty())
        return std::nullopt;
    return parse_theta(s);
}
} // namespace detail

struct EisensteinArgs
{
    std::string mu, set, theta;
    long k = 0;
    bool exact = false;
    int extrapolate = -1;
};

inline Built cmd_eisenstein(const EisensteinArgs &a, Precision p)
{
    Modulus mu = parse_mu(a.mu);
    SetDescriptor d = parse_set(a.set, detail::optional_theta(a.theta));
    json j;
    j["mu"] = mu.to_string();
    j["k"] = a.k;
    j["set"] = describe(d);
    j["precision"] = p;
    if (a.extrapolate >= 0)
    {
        const auto *b = std::get_if<Box>(&d.rule);
        if (!b || a.exact)
            throw Error(Errc::InvalidArgument, "--extrapolate needs a box:N set in float mode");
        ClassicalEstimate e = classical_G(mu, a.k, b->radius, p, a.extrapolate);
        detail::put_complex(j, "value_", e.estimate, p);
        j["term_count"] = box_size(*b) - 1;
        j["mode"] = mode_name(Mode::Float);
        j["extrapolation_order"] = e.order;
        j["shape_dependent"] = e.shape_dependent;
        if (e.error_bound)
            j["error_bound"] = num_text(*e.error_bound, p);
    }
    else
    {
        PartialSum s = partial_G(mu, a.k, d, p, detail::mode_of(a.exact));
        if (s.exact)
        {
            j["value_re"] = detail::exact_text(s.exact->re());
            j["value_im"] = detail::exact_text(s.exact->im());
        }
        else
            detail::put_complex(j, "value_", s.value, p);
        j["term_count"] = s.term_count;
        j["mode"] = mode_name(s.mode);
    }
    return {"eisenstein", j, "", {"mu", "k", "set", "value_re", "value_im", "term_count", "mode", "precision", "error_bound"}};
}

struct JClassArgs
{
    std::string mu;
    std::int64_t box_max = 0;
    int order = 2;
};

inline Built cmd_jclass(const JClassArgs &a, Precision p)
{
    Modulus mu = parse_mu(a.mu);
    JClassical r = j_classical(mu, a.box_max, p, a.order);
    json j;
    j["mu"] = mu.to_string();
    j["box_max"] = a.box_max;
    j["order"] = a.order;
    j["precision"] = p;
    detail::put_complex(j, "j_", r.value, p);
    detail::put_complex(j, "g2_", r.g2, p);
    detail::put_complex(j, "g3_", r.g3, p);
    j["error_bound"] = num_text(r.error_bound, p);
    return {"jclass", j, "", {"mu", "box_max", "order", "j_re", "j_im", "error_bound", "precision"}};
}

struct JQuantArgs
{
    std::string theta, mu, stages;
    std::size_t window = 2;
};

inline Built cmd_jquant(const JQuantArgs &a, Precision p)
{
    QuadIrr theta = parse_theta(a.theta);
    Modulus mu = parse_mu(a.mu);
    std::vector<std::size_t> stages = parse_stages(a.stages);
    JReport rep = j_quantum(mu, theta, stages, a.window, p);
    json j;
    j["theta"] = theta.to_spec();
    j["mu"] = mu.to_string();
    j["window"] = rep.window;
    j["precision"] = p;
    j["period_length"] = rep.period_length;
    j["stages"] = json::array();
    for (const auto &s : rep.stages)
    {
        json row;
        row["stage"] = s.stage;
        row["re"] = num_text(s.j.re(), p);
        row["im"] = num_text(s.j.im(), p);
        row["im_fraction"] = num_text(s.im_fraction, p);
        row["class"] = s.period_class;
        row["degenerate"] = s.degenerate;
        row["min_abs_n"] = s.min_abs_n;
        j["stages"].push_back(row);
    }
    j["classes"] = json::array();
    for (const auto &c : rep.classes)
    {
        json row;
        row["class"] = c.period_class;
        row["count"] = c.count;
        row["median_re"] = num_text(c.median_re, p);
        row["median_im"] = num_text(c.median_im, p);
        row["diameter"] = num_text(c.diameter, p);
        j["classes"].push_back(row);
    }
    return {"jquant", j, "stages", {"stage", "re", "im", "im_fraction", "class"}};
}

struct WeierArgs
{
    std::string mu, z, scheme, stages, theta;
};

inline Built cmd_weier_residual(const WeierArgs &a, Precision p)
{
    Modulus mu = parse_mu(a.mu);
    SchemeId scheme = parse_scheme(a.scheme);
    std::vector<std::size_t> stages;
    if (!a.stages.empty())
        stages = parse_stages(a.stages);
    else if (std::holds_alternative<ClassicalCone>(scheme))
        stages = stage_indices(scheme);
    else
        throw Error(Errc::InvalidArgument, "quantum schemes need --stages");
    std::optional<QuadIrr> theta = detail::optional_theta(a.theta);
    if (auto *q = std::get_if<QuantumTheta>(&scheme))
    {
        scheme = quantum_theta(q->theta, q->window, stages, q->enrich);
        if (!theta)
            theta = std::get<QuantumTheta>(scheme).theta;
    }
    CPoint z = parse_z(a.z, mu, theta);
    ResidualSeries series = residual_series(z, mu, scheme, stages, p);
    json j;
    j["mu"] = mu.to_string();
    std::ostringstream zs;
    if (z.is_exact())
        zs << z.exact();
    else
        zs << z.floating();
    j["z"] = zs.str();
    j["scheme"] = a.scheme;
    j["precision"] = p;
    if (series.decay_exponent)
        j["decay_exponent"] = detail::double_text(*series.decay_exponent);
    j["rows"] = json::array();
    for (const auto &r : series.rows)
    {
        json row;
        row["stage"] = r.stage;
        row["set"] = describe(r.descriptor);
        row["residual_abs"] = num_text(r.residual_abs, p);
        row["wp_abs"] = num_text(r.wp_abs, p);
        row["g2_abs"] = num_text(r.g2_abs, p);
        if (r.normalized)
            row["normalized"] = num_text(*r.normalized, p);
        j["rows"].push_back(row);
    }
    return {"weier-residual", j, "rows", {"stage", "set", "residual_abs", "wp_abs", "g2_abs", "normalized"}};
}

struct AutomorphyArgs
{
    std::string matrix, mu, set, theta;
    long k = 0;
    bool exact = false;
};

inline Built cmd_automorphy(const AutomorphyArgs &a, Precision p)
{
    GL2Z A = parse_matrix(a.matrix);
    Modulus mu = parse_mu(a.mu);
    SetDescriptor d = parse_set(a.set, detail::optional_theta(a.theta));
    AutomorphyResult r = automorphy_residual(A, mu, a.k, d, p, detail::mode_of(a.exact));
    json j;
    j["matrix"] = A.to_string();
    j["mu"] = mu.to_string();
    j["k"] = a.k;
    j["set"] = describe(d);
    j["det"] = r.det;
    j["mode"] = mode_name(detail::mode_of(a.exact));
    j["precision"] = p;
    if (r.exact)
    {
        j["residual_re"] = detail::exact_text(r.exact->re());
        j["residual_im"] = detail::exact_text(r.exact->im());
    }
    else
        detail::put_complex(j, "residual_", r.residual, p);
    j["residual_abs"] = num_text(r.residual.abs(), p);
    return {"automorphy", j, "", {"matrix", "mu", "k", "set", "residual_re", "residual_im", "residual_abs", "mode"}};
}

struct OrbitArgs
{
    std::string mu, theta = "inf", matrix = "1,0,0,1";
};

inline Built cmd_orbit(const OrbitArgs &a, Precision p)
{
    Modulus mu = parse_mu(a.mu);
    Slope theta = parse_slope(a.theta);
    GL2Z A = parse_matrix(a.matrix);
    FoliationPoint image = act(A, FoliationPoint{mu, theta});
    FoliationPoint canon = canonicalize_sign(image);
    Reduction red = reduce_modulus(canon.modulus);
    json j;
    j["mu"] = mu.to_string();
    j["theta"] = slope_to_string(theta);
    j["matrix"] = A.to_string();
    j["image_mu"] = image.modulus.to_string();
    j["image_theta"] = slope_to_string(image.theta);
    j["canonical_mu"] = canon.modulus.to_string();
    j["canonical_theta"] = slope_to_string(canon.theta);
    j["reduced_mu"] = red.modulus.to_string();
    j["reduction_matrix"] = red.matrix.to_string();
    j["precision"] = p;
    if (!is_infinite(canon.theta))
        detail::put_complex(j, "direction_", slope_direction_float(canon, p + 32), p);
    return {"orbit", j, "", {"mu", "theta", "matrix", "image_mu", "image_theta", "reduced_mu", "reduction_matrix"}};
}

struct CfArgs
{
    std::string theta;
    std::size_t terms = 10;
};

inline Built cmd_cf(const CfArgs &a, Precision p)
{
    ThetaText t = parse_theta_text(a.theta);
    if (t.infinite)
        throw Error(Errc::InvalidArgument, "cf needs a finite theta");
    if (a.terms == 0)
        throw Error(Errc::InvalidArgument, "--terms must be positive");
    auto as_int = [](const Integer &x) -> std::int64_t {
        if (!x.fits_slong_p())
            throw Error(Errc::NotRepresentable, "partial quotient does not fit in 64 bits");
        return x.get_si();
    };
    json j;
    j["theta"] = a.theta;
    j["terms"] = a.terms;
    j["quotients"] = json::array();
    j["convergents"] = json::array();
    if (t.exact)
    {
        CFExpansion cf = cf_expand(*t.exact, a.terms);
        j["mode"] = "exact";
        j["terminated"] = cf.terminated;
        std::size_t n = std::min(a.terms, cf.partial_quotients.size());
        for (std::size_t k = 0; k < n; ++k)
            j["quotients"].push_back(as_int(cf.partial_quotients[k]));
        if (cf.period)
        {
            j["period_preperiod"] = cf.period->preperiod;
            j["period_length"] = cf.period->length;
        }
        std::size_t k = 0;
        for (const auto &c : convergents(cf, n))
            j["convergents"].push_back({{"index", k++}, {"m", c.m.get_str()}, {"n", c.n.get_str()}, {"err", detail::exact_text(c.err)}});
    }
    else
    {
        HeuristicExpansion cf = cf_expand_heuristic(BigFloat::from_string(*t.decimal, p), a.terms);
        j["mode"] = "heuristic";
        j["terminated"] = false;
        j["precision"] = p;
        for (const auto &q : cf.partial_quotients)
            j["quotients"].push_back(as_int(q));
        std::size_t k = 0;
        for (const auto &c : cf.convergents)
            j["convergents"].push_back({{"index", k++}, {"m", c.m.get_str()}, {"n", c.n.get_str()}, {"err", num_text(c.err, p)}});
    }
    return {"cf", j, "convergents", {"index", "m", "n", "err"}};
}

namespace detail
{
inline json config_snapshot(const CLI::App &app)
{
    json snap = json::object();
    auto add = [&](const CLI::App &a, const std::string &prefix) {
        for (const CLI::Option *opt : a.get_options())
        {
            const std::string name = opt->get_single_name();
            if (name == "help" || name == "config" || name.empty())
                continue;
            std::string value;
            if (opt->count() > 0)
            {
                for (const auto &r : opt->results())
                    value += (value.empty() ? "" : " ") + r;
            }
            else
                value = opt->get_default_str();
            snap[prefix + name] = value;
        }
    };
    add(app, "");
    for (const CLI::App *sub : app.get_subcommands())
        add(*sub, sub->get_name() + ".");
    return snap;
}

inline std::optional<std::string> file_digest(const std::string &path)
{
    if (path.empty())
        return std::nullopt;
    std::ifstream f(path, std::ios::binary);
    if (!f)
        return std::nullopt;
    std::ostringstream ss;
    ss << f.rdbuf();
    return sha256_hex(ss.str());
}
} // namespace detail

inline int exit_code(const Error &e) { return e.is_numeric() ? kExitNumeric : kExitInput; }

/// Renders (validating first) and then writes to `path`, or to `out` when the
/// path is empty. Returns the payload digest.
inline std::string emit(const Built &b, const Manifest &m, bool csv, const std::string &path, std::ostream &out)
{
    Emitted e = render(b.kind, b.payload, m, csv, b.table, b.columns);
    if (path.empty())
        out << e.text;
    else
    {
        write_file(path, e.text);
        if (e.sidecar)
            write_file(path + ".manifest.json", *e.sidecar);
    }
    return e.digest;
}

/// Runs one subcommand; returns the process exit code.
inline int run(int argc, const char *const *argv, std::ostream &out = std::cout, std::ostream &err = std::cerr)
{
    const auto t0 = std::chrono::steady_clock::now();
    CLI::App app{"qtj: finite-stage invariants of quantum tori"};
    app.name("qtj");
    app.require_subcommand(1);
    app.fallthrough();

    long precision = 256;
    std::string format = "json", output;
    unsigned workers = 1;
    app.add_option("--precision,-p", precision, "working precision in bits")
        ->envname("QTJ_PRECISION")
        ->capture_default_str()
        ->check(CLI::Range(64L, 1L << 20));
    app.add_option("--out", format, "output format")->capture_default_str()->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--output,-o", output, "output path (stdout when omitted)");
    app.add_option("--workers", workers, "summation worker threads")->capture_default_str()->check(CLI::Range(1U, 256U));
    CLI::Option *config = app.set_config("--config", "", "key=value defaults; argv overrides");

    EisensteinArgs ea;
    auto *eis = app.add_subcommand("eisenstein", "partial Eisenstein sum G_k(mu)_F");
    eis->add_option("--mu", ea.mu, "modulus")->required();
    eis->add_option("--k", ea.k, "weight index")->required();
    eis->add_option("--set", ea.set, "lattice point set")->required();
    eis->add_option("--theta", ea.theta, "theta for qwin sets");
    eis->add_flag("--exact", ea.exact, "exact arithmetic");
    eis->add_option("--extrapolate", ea.extrapolate, "Richardson order over boxes up to box:N");

    JClassArgs ja;
    auto *jc = app.add_subcommand("jclass", "classical j from extrapolated box limits");
    jc->add_option("--mu", ja.mu, "modulus")->required();
    jc->add_option("--box-max", ja.box_max, "largest box radius")->required()->check(CLI::Range(2L, 1L << 20));
    jc->add_option("--order", ja.order, "Richardson order")->capture_default_str()->check(CLI::Range(0, 6));

    JQuantArgs qa;
    auto *jq = app.add_subcommand("jquant", "per-stage j over convergent windows");
    jq->add_option("--theta", qa.theta, "quad:a:b:c:d")->required();
    jq->add_option("--mu", qa.mu, "modulus")->required();
    jq->add_option("--stages", qa.stages, "lo..hi or s1,s2,...")->required();
    jq->add_option("--window", qa.window, "window length L")->capture_default_str()->check(CLI::Range(1, 64));

    WeierArgs wa;
    auto *wr = app.add_subcommand("weier-residual", "residual of the Weierstrass polynomial along a scheme");
    wr->add_option("--mu", wa.mu, "modulus")->required();
    wr->add_option("--z", wa.z, "complex point or t=<real> on the slope line")->required();
    wr->add_option("--scheme", wa.scheme, "classical:N1,N2,... or quantum:<theta>:L")->required();
    wr->add_option("--stages", wa.stages, "stage list");
    wr->add_option("--theta", wa.theta, "slope for t=<real> with classical schemes");

    AutomorphyArgs aa;
    auto *au = app.add_subcommand("automorphy", "finite-stage automorphy residual");
    au->add_option("--matrix", aa.matrix, "a,b,c,d in GL(2,Z)")->required();
    au->add_option("--mu", aa.mu, "modulus")->required();
    au->add_option("--k", aa.k, "weight index")->required();
    au->add_option("--set", aa.set, "lattice point set")->required();
    au->add_option("--theta", aa.theta, "theta for qwin sets");
    au->add_flag("--exact", aa.exact, "exact arithmetic");

    OrbitArgs oa;
    auto *ob = app.add_subcommand("orbit", "GL(2,Z) action on (mu, theta) and modulus reduction");
    ob->add_option("--mu", oa.mu, "modulus")->required();
    ob->add_option("--theta", oa.theta, "slope")->capture_default_str();
    ob->add_option("--matrix", oa.matrix, "a,b,c,d in GL(2,Z)")->capture_default_str();

    CfArgs ca;
    auto *cf = app.add_subcommand("cf", "continued fraction and convergents");
    cf->add_option("--theta", ca.theta, "quad:a:b:c:d, rat:p:q or a decimal")->required();
    cf->add_option("--terms", ca.terms, "number of partial quotients")->capture_default_str();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e, out, err);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e, out, err);
        const CLI::App *sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
        err << sub->help();
        return kExitInput;
    }

    try
    {
        set_worker_count(workers);
        const auto p = static_cast<Precision>(precision);
        Built b;
        if (eis->parsed())
            b = cmd_eisenstein(ea, p);
        else if (jc->parsed())
            b = cmd_jclass(ja, p);
        else if (jq->parsed())
            b = cmd_jquant(qa, p);
        else if (wr->parsed())
            b = cmd_weier_residual(wa, p);
        else if (au->parsed())
            b = cmd_automorphy(aa, p);
        else if (ob->parsed())
            b = cmd_orbit(oa, p);
        else
            b = cmd_cf(ca, p);

        Manifest m;
        for (int k = 0; k < argc; ++k)
            m.command_line.emplace_back(argv[k]);
        m.config = detail::config_snapshot(app);
        m.precision = p;
        m.workers = workers;
        m.config_file_digest = detail::file_digest(config->count() ? config->as<std::string>() : std::string());
        m.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        emit(b, m, format == "csv", output, out);
        return kExitOk;
    }
    catch (const Error &e)
    {
        err << "qtj: " << e.what() << "\n";
        return exit_code(e);
    }
    catch (const std::exception &e)
    {
        err << "qtj: " << e.what() << "\n";
        return kExitInput;
    }
}

} // namespace qtj::cli
