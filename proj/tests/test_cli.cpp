#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"
#include "tsnoether/cli.hpp"
#include "tsnoether/config.hpp"
#include "tsnoether/csv.hpp"
#include "tsnoether/errors.hpp"
#include "tsnoether/runner.hpp"
#include "tsnoether/svg.hpp"

using namespace tsn;
namespace fs = std::filesystem;

namespace {

const char* kGoodConfig = R"(# scaling-symmetry experiment
scale.kind = uniform
scale.a = 1
scale.b = 10
scale.h = 0.001   # trailing comments are fine
lagrangian = x^2/t + t*v^2
dimension = 1
group.g0 = t*exp(s)
group.g1 = x
init.x0 = 1.0
init.v0 = 0.1
solver.variant = both
solver.tol = 1e-12
symmetry.s_samples = -1, -0.5, 0, 0.5, 1
output.dir = out
)";

fs::path test_dir() {
    const fs::path dir = fs::temp_directory_path() / "tsnoether-test-cli";
    fs::create_directories(dir);
    return dir;
}

fs::path write_file(const std::string& name, const std::string& text) {
    const fs::path p = test_dir() / name;
    std::ofstream out(p, std::ios::binary);
    out << text;
    return p;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::size_t count_lines(const std::string& s) {
    std::size_t n = 0;
    for (char c : s) {
        if (c == '\n') ++n;
    }
    return n;
}

std::size_t count_occurrences(const std::string& hay, const std::string& needle) {
    std::size_t n = 0, pos = 0;
    while ((pos = hay.find(needle, pos)) != std::string::npos) {
        ++n;
        pos += needle.size();
    }
    return n;
}

ExperimentSpec small_spec(const std::string& lagrangian, const std::string& out_name) {
    ExperimentSpec spec;
    spec.scale_kind = ScaleKind::Uniform;
    spec.a = 1.0;
    spec.b = 2.0;
    spec.h = 0.1;
    spec.lagrangian = lagrangian;
    spec.g0 = "t*exp(s)";
    spec.g1 = "x";
    spec.x0 = {1.0};
    spec.v0 = {0.1};
    spec.output_dir = (test_dir() / out_name).string();
    return spec;
}

/// Swallows std::cout/std::cerr so CLI runs stay quiet under the test runner.
struct StreamCapture {
    std::ostringstream out, err;
    std::streambuf* old_out;
    std::streambuf* old_err;
    StreamCapture()
        : old_out(std::cout.rdbuf(out.rdbuf())), old_err(std::cerr.rdbuf(err.rdbuf())) {}
    ~StreamCapture() {
        std::cout.rdbuf(old_out);
        std::cerr.rdbuf(old_err);
    }
};

int cli(std::vector<const char*> argv, std::string* out_text = nullptr) {
    argv.insert(argv.begin(), "tsnoether");
    StreamCapture cap;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data());
    if (out_text) *out_text = cap.out.str();
    return code;
}

} // namespace

TEST_CASE("config parsing fills every field") {
    const ExperimentSpec spec = parse_config_text(kGoodConfig);
    CHECK(spec.scale_kind == ScaleKind::Uniform);
    CHECK(spec.a == 1.0);
    CHECK(spec.b == 10.0);
    CHECK(spec.h == 0.001);
    CHECK(spec.lagrangian == "x^2/t + t*v^2");
    CHECK(spec.dimension == 1);
    CHECK(spec.g0 == "t*exp(s)");
    CHECK(spec.g1 == "x");
    CHECK(spec.has_group());
    CHECK(!spec.has_generator());
    CHECK(spec.x0 == std::vector<double>{1.0});
    CHECK(spec.v0 == std::vector<double>{0.1});
    CHECK(spec.variant == VariantChoice::Both);
    CHECK(spec.tol == 1e-12);
    CHECK(spec.s_samples == std::vector<double>{-1.0, -0.5, 0.0, 0.5, 1.0});
    CHECK(spec.output_dir == "out");
}

TEST_CASE("config parsing rejects malformed input") {
    const std::string base = "scale.kind = points\nscale.points = 1, 2, 4\n"
                             "lagrangian = v^2/2\ngenerator.zeta = 0\ngenerator.xi = 1\n"
                             "init.x0 = 0\ninit.v0 = 1\n";
    CHECK_NOTHROW(parse_config_text(base));

    // every required key missing in turn
    CHECK_THROWS_AS(parse_config_text("scale.kind = points\nscale.points = 1,2,4\n"
                                      "generator.zeta = 0\ngenerator.xi = 1\n"
                                      "init.x0 = 0\ninit.v0 = 1\n"),
                    MissingKey); // no lagrangian
    CHECK_THROWS_AS(parse_config_text("scale.kind = points\nscale.points = 1,2,4\n"
                                      "lagrangian = v^2/2\ninit.x0 = 0\ninit.v0 = 1\n"),
                    MissingKey); // neither group nor generator

    CHECK_THROWS_AS(parse_config_text(base + "solver.maxiter = 3\n"), UnknownKey);

    try {
        parse_config_text("scale.kind = uniform\nscale.a = abc\n");
        FAIL("expected ConfigTypeError");
    } catch (const ConfigTypeError& e) {
        CHECK(e.line() == 2);
    }

    CHECK_THROWS_AS(parse_config_text(base + "lagrangian = x\n"), ConfigTypeError); // duplicate
    CHECK_THROWS_AS(parse_config_text(base + "output.dir =\n"), ConfigTypeError);   // empty value
    CHECK_THROWS_AS(parse_config_text(base + "just words\n"), ConfigTypeError);     // no '='
    CHECK_THROWS_AS(parse_config_text(base + "scale.a = 1\n"), ConfigTypeError); // points scale
    CHECK_THROWS_AS(parse_config_text(base + "solver.variant = sideways\n"), ConfigTypeError);
    CHECK_THROWS_AS(parse_config_text(base + "solver.tol = 0\n"), ConfigTypeError);
    CHECK_THROWS_AS(parse_config_text(base + "dimension = 0\n"), ConfigTypeError);

    // group.g1 alone, generator.xi alone
    CHECK_THROWS_AS(parse_config_text("scale.kind = points\nscale.points = 1,2,4\n"
                                      "lagrangian = v^2/2\ngroup.g1 = x\n"
                                      "init.x0 = 0\ninit.v0 = 1\n"),
                    ConfigTypeError);

    // arity of the initial data
    CHECK_THROWS_AS(parse_config_text("scale.kind = points\nscale.points = 1,2,4\n"
                                      "lagrangian = v1^2 + v2^2\ndimension = 2\n"
                                      "generator.zeta = 0\ngenerator.xi = 1;0\n"
                                      "init.x0 = 0\ninit.v0 = 1, 1\n"),
                    ConfigTypeError);

    CHECK_THROWS_AS(parse_config("/no/such/config.cfg"), IoError);
}

TEST_CASE("configs can build every scale kind") {
    ExperimentSpec spec = parse_config_text("scale.kind = dyadic\nscale.a = 0\nscale.b = 3\n"
                                            "lagrangian = v^2/2\n"
                                            "generator.zeta = 0\ngenerator.xi = 1\n"
                                            "init.x0 = 0\ninit.v0 = 1\n");
    CHECK(spec.scale_kind == ScaleKind::Dyadic);
    const ScalePtr dy = build_scale(spec);
    CHECK(dy->size() == 4);
    CHECK(dy->point(0) == 1.0);
    CHECK(dy->point(3) == 8.0);

    spec = parse_config_text("scale.kind = points\nscale.points = 1, 2, 4\n"
                             "lagrangian = v^2/2\ngenerator.zeta = 0\ngenerator.xi = 1\n"
                             "init.x0 = 0\ninit.v0 = 1\nsolver.variant = shifted\n"
                             "symmetry.s_samples = 0.25, 0.75\n");
    CHECK(spec.variant == VariantChoice::Shifted);
    CHECK(spec.s_samples == std::vector<double>{0.25, 0.75});
    const ScalePtr pts = build_scale(spec);
    CHECK(pts->size() == 3);
    CHECK(pts->point(2) == 4.0);
}

TEST_CASE("run_experiment produces both trajectories and their files") {
    const ExperimentSpec spec = small_spec("x^2/t + t*v^2", "run-both");
    const RunReport rep = run_experiment(spec);
    CHECK(rep.exit_code == 0);
    CHECK(rep.admissibility_pass);
    CHECK(rep.invariance_pass);
    REQUIRE(rep.series.size() == 2);
    CHECK(rep.series[0].trajectory == "nonshifted");
    CHECK(rep.series[1].trajectory == "shifted");
    CHECK(rep.files.size() == 6);
    for (const std::string& f : rep.files) {
        CHECK(fs::file_size(f) > 0);
    }
    CHECK(!rep.text.empty());

    RunOptions check_only;
    check_only.check_only = true;
    const RunReport chk = run_experiment(spec, check_only);
    CHECK(chk.exit_code == 0);
    CHECK(chk.files.empty());
    CHECK(chk.series.empty());
}

TEST_CASE("failed invariance stops the run unless explicitly allowed") {
    const ExperimentSpec spec = small_spec("v^2/2", "run-noninv");
    const RunReport rep = run_experiment(spec);
    CHECK(rep.exit_code == 2);
    CHECK(!rep.invariance_pass);
    CHECK(rep.files.empty());

    RunOptions allow;
    allow.allow_noninvariant = true;
    const RunReport forced = run_experiment(spec, allow);
    CHECK(forced.exit_code == 0);
    CHECK(!forced.invariance_pass);
    CHECK(forced.files.size() == 6);
}

TEST_CASE("variant and tolerance overrides take effect") {
    ExperimentSpec spec = small_spec("x^2/t + t*v^2", "run-override");
    RunOptions opts;
    opts.variant = VariantChoice::NonShifted;
    opts.out_dir = (test_dir() / "run-override-b").string();
    const RunReport rep = run_experiment(spec, opts);
    CHECK(rep.exit_code == 0);
    REQUIRE(rep.series.size() == 1);
    CHECK(rep.series[0].trajectory == "nonshifted");
    CHECK(rep.files.size() == 4); // one solution, one conservation, figure, report
    for (const std::string& f : rep.files) {
        CHECK(f.find("run-override-b") != std::string::npos);
    }
}

TEST_CASE("identical runs emit identical bytes") {
    ExperimentSpec spec = small_spec("x^2/t + t*v^2", "det-a");
    const RunReport a = run_experiment(spec);
    spec.output_dir = (test_dir() / "det-b").string();
    const RunReport b = run_experiment(spec);
    REQUIRE(a.exit_code == 0);
    REQUIRE(b.exit_code == 0);
    const auto relative = [](const std::string& f) { return fs::path(f).filename().string(); };
    REQUIRE(a.files.size() == b.files.size());
    for (std::size_t i = 0; i < a.files.size(); ++i) {
        REQUIRE(relative(a.files[i]) == relative(b.files[i]));
        if (relative(a.files[i]) == "report.txt") continue; // lists the output dir itself
        CHECK(read_file(a.files[i]) == read_file(b.files[i]));
    }
}

TEST_CASE("the built-in example writes full tables") {
    ExperimentSpec spec = bt_example_spec();
    CHECK(spec.lagrangian == "x^2/t + t*v^2");
    CHECK(spec.a == 1.0);
    CHECK(spec.b == 10.0);
    CHECK(spec.h == 0.001);
    spec.output_dir = (test_dir() / "bt").string();
    const RunReport rep = run_experiment(spec);
    REQUIRE(rep.exit_code == 0);

    const std::string sol = read_file(test_dir() / "bt" / "solution_nonshifted.csv");
    CHECK(count_lines(sol) == 9002); // header + 9001 points
    CHECK(sol.rfind("t,x_1,v_1,p_1,el_residual\n", 0) == 0);

    const std::string cons = read_file(test_dir() / "bt" / "conservation_nonshifted.csv");
    CHECK(count_lines(cons) == 9000); // header + 8999 interior points
    CHECK(cons.rfind("t,I,C,nabla_I,second_el_residual\n", 0) == 0);

    const std::string svg = read_file(test_dir() / "bt" / "figure1.svg");
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(count_occurrences(svg, "<polyline") >= 2);
}

TEST_CASE("command line round trip") {
    const std::string text = std::string("scale.kind = uniform\nscale.a = 1\nscale.b = 2\n"
                                         "scale.h = 0.1\nlagrangian = x^2/t + t*v^2\n"
                                         "group.g0 = t*exp(s)\ngroup.g1 = x\n"
                                         "init.x0 = 1\ninit.v0 = 0.1\n"
                                         "output.dir = ") +
                             (test_dir() / "cli-out").string() + "\n";
    const fs::path clean = write_file("clean.cfg", text);

    std::string out;
    CHECK(cli({"run", clean.string().c_str()}, &out) == 0);
    CHECK(out.find("admissibility") != std::string::npos);
    CHECK(cli({"check", clean.string().c_str()}) == 0);

    CHECK(cli({"run", "/no/such/file.cfg"}) == 1);
    CHECK(cli({"frobnicate"}) == 1);
    CHECK(cli({}) == 1);
    CHECK(cli({"--help"}, &out) == 0);
    CHECK(!out.empty());
    CHECK(cli({"bt-example", "--variant", "sideways"}) == 1);

    const fs::path noninv = write_file("noninv.cfg",
                                       "scale.kind = uniform\nscale.a = 1\nscale.b = 2\n"
                                       "scale.h = 0.1\nlagrangian = v^2/2\n"
                                       "group.g0 = t*exp(s)\ngroup.g1 = x\n"
                                       "init.x0 = 1\ninit.v0 = 0.1\noutput.dir = " +
                                           (test_dir() / "cli-noninv").string() + "\n");
    CHECK(cli({"run", noninv.string().c_str()}) == 2);
    CHECK(cli({"check", noninv.string().c_str()}) == 2);
    CHECK(cli({"run", noninv.string().c_str(), "--allow-noninvariant"}) == 0);

    const fs::path solver_fail = write_file("singular.cfg",
                                            "scale.kind = uniform\nscale.a = 1\nscale.b = 2\n"
                                            "scale.h = 0.1\nlagrangian = t*v\n"
                                            "generator.zeta = 0\ngenerator.xi = 1\n"
                                            "init.x0 = 1\ninit.v0 = 0.1\noutput.dir = " +
                                                (test_dir() / "cli-sing").string() + "\n");
    CHECK(cli({"run", solver_fail.string().c_str()}) == 3);
}

TEST_CASE("csv column naming") {
    const ScalePtr ts = make_timescale({0, 1, 2});
    GridFunction f(ts, DomainKind::Full, 2);
    f.value(1, 0) = 0.5;
    const std::string plain = grid_csv(f);
    CHECK(plain.rfind("t,f_1,f_2\n", 0) == 0);
    const std::vector<std::string> names{"alpha", "beta"};
    const std::string named = grid_csv(f, names);
    CHECK(named.rfind("t,alpha,beta\n", 0) == 0);
    CHECK(count_lines(named) == 4);
    const std::vector<std::string> wrong{"only-one"};
    CHECK_THROWS_AS(grid_csv(f, wrong), DimensionMismatch);
}

TEST_CASE("line charts are standalone svg") {
    ChartSeries s1{"flat", {0, 1, 2}, {1, 1, 1}};
    ChartSeries s2{"rise", {0, 1, 2}, {0, 0.5, 4}};
    const std::vector<ChartSeries> both{s1, s2};
    const std::string svg = render_line_chart(both, "two series");
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(count_occurrences(svg, "<polyline") == 2);
    CHECK(svg.find("two series") != std::string::npos);
    CHECK(svg.find("flat") != std::string::npos);

    CHECK_THROWS_AS(render_line_chart({}), EmptySeries);
    ChartSeries bad{"bad", {0, 1}, {1}};
    const std::vector<ChartSeries> one_bad{bad};
    CHECK_THROWS_AS(render_line_chart(one_bad), DimensionMismatch);
}
