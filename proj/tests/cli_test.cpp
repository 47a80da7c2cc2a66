#include <cstdio>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "qtj/cli/cli.hpp"

using namespace qtj;
using namespace qtj::cli;

namespace
{
struct Result
{
    int code = 0;
    std::string out, err;
};

Result run_args(std::vector<std::string> args)
{
    args.insert(args.begin(), "qtj");
    std::vector<const char *> argv;
    for (const auto &a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

json payload_of(const Result &r) { return json::parse(r.out).at("payload"); }

std::filesystem::path temp_path(const std::string &name)
{
    return std::filesystem::temp_directory_path() / ("qtj_cli_test_" + name);
}
} // namespace

TEST(Parse, Rationals)
{
    EXPECT_EQ(parse_rational("7"), 7);
    EXPECT_EQ(parse_rational("-3/6"), make_rational(-1, 2));
    EXPECT_EQ(parse_rational("0.31"), make_rational(31, 100));
    EXPECT_EQ(parse_rational("-2.5e-3"), make_rational(-1, 400));
    EXPECT_EQ(parse_rational("1e3"), 1000);
    EXPECT_THROW(parse_rational("1/0"), Error);
    EXPECT_THROW(parse_rational("abc"), Error);
    EXPECT_THROW(parse_rational(""), Error);
}

TEST(Parse, ComplexAndModulus)
{
    EXPECT_EQ(parse_gaussian("i"), GaussianRational(Rational(0), Rational(1)));
    EXPECT_EQ(parse_gaussian("-i"), GaussianRational(Rational(0), Rational(-1)));
    EXPECT_EQ(parse_gaussian("2i"), GaussianRational(Rational(0), Rational(2)));
    EXPECT_EQ(parse_gaussian("1/2+i"), GaussianRational(make_rational(1, 2), Rational(1)));
    EXPECT_EQ(parse_gaussian("0.31-0.17i"), GaussianRational(make_rational(31, 100), make_rational(-17, 100)));
    EXPECT_EQ(parse_gaussian("1e-2+1e+1i"), GaussianRational(make_rational(1, 100), Rational(10)));
    EXPECT_EQ(parse_gaussian("-3"), GaussianRational(Rational(-3), Rational(0)));
    QuadComplex rho = parse_quad_complex("gauss:1:0:2:1,0:1:2:3");
    EXPECT_EQ(rho, QuadComplex(QuadIrr(make_rational(1, 2)), QuadIrr::make(0, 1, 2, 3)));
    EXPECT_TRUE(parse_mu("i").is_gaussian());
    EXPECT_THROW(parse_mu("2"), Error);
    EXPECT_THROW(parse_quad_complex("gauss:1:0:2:1"), Error);
}

TEST(Parse, Theta)
{
    EXPECT_EQ(parse_theta("quad:1:1:2:5"), QuadIrr::make(1, 1, 2, 5));
    EXPECT_EQ(parse_theta("rat:7:5"), QuadIrr(make_rational(7, 5)));
    EXPECT_TRUE(is_infinite(parse_slope("inf")));
    EXPECT_TRUE(parse_theta_text("1.618").decimal.has_value());
    EXPECT_THROW(parse_theta("1.618"), Error);
    EXPECT_THROW(parse_theta("quad:1:1:0:5"), Error);
    EXPECT_THROW(parse_theta("rat:1:0"), Error);
}

TEST(Parse, Sets)
{
    QuadIrr phi = QuadIrr::make(1, 1, 2, 5);
    EXPECT_EQ(enumerate(parse_set("box:1")).size(), 9U);
    EXPECT_EQ(enumerate(parse_set("box:1:punctured")).size(), 8U);
    EXPECT_EQ(enumerate(parse_set("explicit:1,2;-3,4")), (std::vector<LatticePoint>{{-3, 4}, {1, 2}}));
    EXPECT_EQ(enumerate(parse_set("shift[1,0]:explicit:0,0")), (std::vector<LatticePoint>{{1, 0}}));
    EXPECT_EQ(enumerate(parse_set("T[0,-1,1,0]:explicit:1,0")), enumerate(transform_set(GL2Z::inversion(), explicit_set({{1, 0}}))));
    EXPECT_EQ(enumerate(parse_set("qwin:3:2", phi)), enumerate(quantum_window(phi, 3, 2)));
    EXPECT_EQ(enumerate(parse_set("qwin:3:2:enrich", phi)), enumerate(quantum_window(phi, 3, 2, true, true)));
    EXPECT_THROW(parse_set("qwin:3:2"), Error);
    EXPECT_THROW(parse_set("ball:3"), Error);
    EXPECT_THROW(parse_set("T[1,1,1,1]:box:1"), Error);
}

TEST(Parse, StagesSchemesAndPoints)
{
    EXPECT_EQ(parse_stages("3..6"), (std::vector<std::size_t>{3, 4, 5, 6}));
    EXPECT_EQ(parse_stages("1,4,9"), (std::vector<std::size_t>{1, 4, 9}));
    EXPECT_THROW(parse_stages("6..3"), Error);
    SchemeId c = parse_scheme("classical:8,16,32");
    EXPECT_EQ(std::get<ClassicalCone>(c).radii, (std::vector<std::int64_t>{8, 16, 32}));
    SchemeId q = parse_scheme("quantum:quad:1:1:2:5:4");
    EXPECT_EQ(std::get<QuantumTheta>(q).window, 4U);
    EXPECT_EQ(std::get<QuantumTheta>(q).theta, QuadIrr::make(1, 1, 2, 5));
    EXPECT_THROW(parse_scheme("classical:8,4"), Error);

    Modulus mu = parse_mu("i");
    QuadIrr phi = QuadIrr::make(1, 1, 2, 5);
    CPoint z = parse_z("t=1/3", mu, phi);
    EXPECT_EQ(z.exact(), slope_point(mu, phi, QuadIrr(make_rational(1, 3))).exact());
    EXPECT_THROW(parse_z("t=1/3", mu, std::nullopt), Error);
    EXPECT_EQ(parse_z("0.31+0.17i", mu, std::nullopt).exact(), to_quad(parse_gaussian("0.31+0.17i")));
}

TEST(Run, CfExample)
{
    Result r = run_args({"cf", "--theta", "quad:1:1:2:5", "--terms", "10"});
    ASSERT_EQ(r.code, 0) << r.err;
    json p = payload_of(r);
    EXPECT_EQ(p.at("quotients"), json(std::vector<int>(10, 1)));
    EXPECT_EQ(p.at("period_preperiod"), 0);
    EXPECT_EQ(p.at("period_length"), 1);
    EXPECT_EQ(p.at("convergents").size(), 10U);
    EXPECT_EQ(p.at("convergents")[9].at("n"), "55");
}

TEST(Run, EisensteinExample)
{
    Result r = run_args({"eisenstein", "--mu", "i", "--k", "2", "--set", "box:1", "--exact"});
    ASSERT_EQ(r.code, 0) << r.err;
    json p = payload_of(r);
    EXPECT_EQ(p.at("value_re"), "3");
    EXPECT_EQ(p.at("value_im"), "0");
    EXPECT_EQ(p.at("term_count"), 8);
    EXPECT_EQ(p.at("mode"), "exact");
    Result f = run_args({"eisenstein", "--mu", "i", "--k", "2", "--set", "box:1"});
    EXPECT_EQ(BigFloat::from_string(payload_of(f).at("value_re"), 256), BigFloat(3, 256));
}

TEST(Run, JclassExample)
{
    Result r = run_args({"jclass", "--mu", "i", "--box-max", "50", "--precision", "256"});
    ASSERT_EQ(r.code, 0) << r.err;
    json p = payload_of(r);
    BigFloat re = BigFloat::from_string(p.at("j_re"), 256);
    BigFloat im = BigFloat::from_string(p.at("j_im"), 256);
    EXPECT_LE((re - BigFloat(1728, 256)).abs(), BigFloat::from_string("1e-20", 256));
    EXPECT_LE(im.abs(), BigFloat::from_string("1e-20", 256));
    EXPECT_LE(BigFloat::from_string(p.at("error_bound"), 256), BigFloat::from_string("1e-20", 256));
}

TEST(Run, NumericFieldsCarryPrecisionWidth)
{
    Result r = run_args({"--precision", "128", "jclass", "--mu", "1/2+i", "--box-max", "10"});
    ASSERT_EQ(r.code, 0) << r.err;
    json p = payload_of(r);
    EXPECT_EQ(p.at("precision"), 128);
    const std::string re = p.at("j_re");
    const std::size_t digits = BigFloat::decimal_digits(128);
    // d.ddd...e+XX with `digits` significant digits
    EXPECT_EQ(re.find('e'), digits + 1 + (re[0] == '-' ? 1 : 0)) << re;
}

TEST(Run, JquantCsvColumns)
{
    Result r = run_args({"jquant", "--theta", "quad:1:1:2:5", "--mu", "i", "--stages", "5..9", "--window", "2", "--out", "csv"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "stage,re,im,im_fraction,class");
    int rows = 0;
    while (std::getline(in, line))
        ++rows;
    EXPECT_EQ(rows, 5);
}

TEST(Run, OtherSubcommands)
{
    Result w = run_args({"weier-residual", "--mu", "i", "--z", "0.31+0.17i", "--scheme", "classical:4,8"});
    ASSERT_EQ(w.code, 0) << w.err;
    EXPECT_EQ(payload_of(w).at("rows").size(), 2U);
    EXPECT_TRUE(payload_of(w).contains("decay_exponent"));

    Result q = run_args({"weier-residual", "--mu", "i", "--z", "t=1/3", "--scheme", "quantum:quad:1:1:2:5:2", "--stages", "6..8"});
    ASSERT_EQ(q.code, 0) << q.err;
    for (const auto &row : payload_of(q).at("rows"))
        EXPECT_TRUE(row.contains("normalized"));

    Result a = run_args({"automorphy", "--matrix", "2,1,1,1", "--mu", "1/2+i", "--k", "3", "--set", "box:4", "--exact"});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(payload_of(a).at("residual_re"), "0");
    EXPECT_EQ(payload_of(a).at("residual_im"), "0");

    Result o = run_args({"orbit", "--mu", "-1/2+1/2i", "--theta", "inf", "--matrix", "1,0,0,1"});
    ASSERT_EQ(o.code, 0) << o.err;
    EXPECT_EQ(payload_of(o).at("reduced_mu"), "(0) + (1)i");
    EXPECT_EQ(payload_of(o).at("canonical_theta"), "inf");

    Result e = run_args({"eisenstein", "--mu", "i", "--k", "2", "--set", "box:32", "--extrapolate", "1"});
    ASSERT_EQ(e.code, 0) << e.err;
    EXPECT_TRUE(payload_of(e).contains("error_bound"));
}

TEST(Run, ExitCodes)
{
    EXPECT_EQ(run_args({}).code, 2);
    EXPECT_EQ(run_args({"frobnicate"}).code, 2);
    Result missing = run_args({"cf"});
    EXPECT_EQ(missing.code, 2);
    EXPECT_NE(missing.err.find("--theta"), std::string::npos); // grammar printed
    EXPECT_EQ(run_args({"cf", "--theta", "nonsense"}).code, 2);
    EXPECT_EQ(run_args({"jclass", "--mu", "3", "--box-max", "4"}).code, 2);
    EXPECT_EQ(run_args({"--precision", "16", "cf", "--theta", "rat:1:2"}).code, 2);
    // z on a lattice point is a numeric degeneracy
    EXPECT_EQ(run_args({"weier-residual", "--mu", "i", "--z", "1+i", "--scheme", "classical:2"}).code, 3);
    // a slope sent to infinity is projective, not an error
    Result o = run_args({"orbit", "--mu", "i", "--theta", "rat:1:1", "--matrix", "1,1,0,1"});
    ASSERT_EQ(o.code, 0) << o.err;
    EXPECT_EQ(payload_of(o).at("image_theta"), "inf");
}

TEST(Run, SchemaViolationWritesNothing)
{
    auto path = temp_path("violation.json");
    std::filesystem::remove(path);
    Built bad{"jclass", json{{"mu", "i"}, {"j_re", 1728.0}}, "", {"mu"}};
    try
    {
        std::ostringstream out;
        emit(bad, Manifest{}, false, path.string(), out);
        FAIL();
    }
    catch (const Error &e)
    {
        EXPECT_EQ(e.code(), Errc::SchemaViolation);
        EXPECT_EQ(exit_code(e), 3);
    }
    EXPECT_FALSE(std::filesystem::exists(path));

    Built extra{"cf", json{{"unexpected", 1}}, "", {}};
    EXPECT_THROW(validate_payload("cf", extra.payload), Error);
    EXPECT_THROW(validate_payload("nothing", json::object()), Error);
}

TEST(Run, Determinism)
{
    const std::vector<std::vector<std::string>> cmds = {
        {"cf", "--theta", "quad:1:1:2:5"},
        {"eisenstein", "--mu", "1/2+i", "--k", "2", "--set", "box:40"},
        {"jclass", "--mu", "1/2+i", "--box-max", "24"},
        {"jquant", "--theta", "quad:0:1:1:2", "--mu", "i", "--stages", "4..10"},
        {"weier-residual", "--mu", "i", "--z", "0.31+0.17i", "--scheme", "classical:8,16"},
        {"automorphy", "--matrix", "1,2,1,3", "--mu", "2i", "--k", "2", "--set", "box:20"},
        {"orbit", "--mu", "1/3+1/5i", "--theta", "quad:1:1:2:5", "--matrix", "0,-1,1,0"},
    };
    for (const auto &c : cmds)
    {
        auto one = c, three = c;
        one.insert(one.begin(), {"--workers", "1"});
        three.insert(three.begin(), {"--workers", "3"});
        Result a = run_args(one), b = run_args(three), again = run_args(one);
        ASSERT_EQ(a.code, 0) << c[0] << a.err;
        EXPECT_EQ(payload_of(a).dump(), payload_of(b).dump()) << c[0];
        EXPECT_EQ(payload_of(a).dump(), payload_of(again).dump()) << c[0];
        json ma = json::parse(a.out).at("manifest"), mb = json::parse(b.out).at("manifest");
        EXPECT_EQ(ma.at("output_digests").at("payload_sha256"), mb.at("output_digests").at("payload_sha256"));
        EXPECT_EQ(ma.at("output_digests").at("payload_sha256"), sha256_hex(payload_of(a).dump()));
    }
}

TEST(Run, ConfigFileAndEnvironment)
{
    auto cfg = temp_path("config.ini");
    {
        std::ofstream f(cfg);
        f << "precision=128\n[cf]\nterms=3\ntheta=\"rat:7:5\"\n";
    }
    Result r = run_args({"--config", cfg.string(), "cf"});
    ASSERT_EQ(r.code, 0) << r.err;
    json env = json::parse(r.out);
    EXPECT_EQ(env.at("manifest").at("precision"), 128);
    EXPECT_EQ(env.at("payload").at("quotients"), json({1, 2, 2}));
    EXPECT_TRUE(env.at("manifest").at("input_hashes").contains("config_file_sha256"));
    // argv overrides the file
    Result o = run_args({"--config", cfg.string(), "cf", "--theta", "quad:1:1:2:5"});
    EXPECT_EQ(json::parse(o.out).at("payload").at("quotients"), json({1, 1, 1}));

    ::setenv("QTJ_PRECISION", "96", 1);
    Result e = run_args({"cf", "--theta", "rat:1:3"});
    ::unsetenv("QTJ_PRECISION");
    EXPECT_EQ(json::parse(e.out).at("manifest").at("precision"), 96);
}

TEST(Run, OutputFilesAndSidecar)
{
    auto out = temp_path("out.csv");
    std::filesystem::remove(out);
    Result r = run_args({"cf", "--theta", "rat:7:5", "--out", "csv", "--output", out.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.out.empty());
    std::ifstream f(out);
    std::stringstream ss;
    ss << f.rdbuf();
    EXPECT_EQ(ss.str(), "index,m,n,err\n0,1,1,2/5\n1,3,2,-1/5\n2,7,5,0\n");
    std::ifstream side(out.string() + ".manifest.json");
    json m = json::parse(side);
    EXPECT_EQ(m.at("manifest").at("output_digests").at("payload_sha256"), sha256_hex(ss.str()));
    EXPECT_EQ(run_args({"cf", "--theta", "rat:7:5", "--output", "/nonexistent/dir/x.json"}).code, 2);
}

TEST(Binary, SpawnedProcessMatchesInProcess)
{
    std::string cmd = std::string(QTJ_CLI_PATH) + " cf --theta quad:0:1:1:2 --terms 5 2>/dev/null";
    FILE *pipe = popen(cmd.c_str(), "r");
    ASSERT_NE(pipe, nullptr);
    std::string text;
    char buf[4096];
    while (std::size_t n = fread(buf, 1, sizeof buf, pipe))
        text.append(buf, n);
    EXPECT_EQ(pclose(pipe), 0);
    Result r = run_args({"cf", "--theta", "quad:0:1:1:2", "--terms", "5"});
    EXPECT_EQ(json::parse(text).at("payload"), payload_of(r));
}
