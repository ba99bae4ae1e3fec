#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "rholab/cli.hpp"
#include "rholab/field_io.hpp"
#include "rholab/generators.hpp"
#include "rholab/grid_ops.hpp"
#include "rholab/seminorms.hpp"

using namespace rholab;

namespace {

const std::string fixtures = RHOLAB_FIXTURES;

std::string fixture(const std::string& name) { return fixtures + "/" + name; }

struct Outcome {
    int code = 0;
    std::string out;
    std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return Outcome{code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "rholab_cli_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

std::vector<std::string> fixture_check(const std::string& theorem) {
    return {"check", "--theorem", theorem, "--f", fixture("martingale8.rsf"), "--weight", fixture("weight8.rsf"),
            "--potential", fixture("harmonic8.rsf"), "--p", "2", "--theta1", "0.5", "--theta2", "1"};
}

}  // namespace

TEST(ParseGeneratorSource, KindsAndParameters) {
    const GeneratorSpec a = parse_generator_source("gen:power:beta=0.25,center=1/2/-3");
    EXPECT_EQ(a.kind, GeneratorKind::power);
    EXPECT_EQ(a.beta, 0.25);
    EXPECT_EQ(a.center, (Point{1.0, 2.0, -3.0}));
    const GeneratorSpec b = parse_generator_source("gen:dyadic-martingale:seed=9,depth=2,step=0.5");
    EXPECT_EQ(b.kind, GeneratorKind::dyadic_martingale);
    EXPECT_EQ(b.seed, 9u);
    EXPECT_EQ(b.depth, 2);
    EXPECT_EQ(b.step, 0.5);
    EXPECT_EQ(parse_generator_source("gen:potential-one").kind, GeneratorKind::potential_one);
    EXPECT_THROW(parse_generator_source("power:beta=1"), std::invalid_argument);
    EXPECT_THROW(parse_generator_source("gen:nonsense"), std::invalid_argument);
    EXPECT_THROW(parse_generator_source("gen:power:beta"), std::invalid_argument);
    EXPECT_THROW(parse_generator_source("gen:power:colour=red"), std::invalid_argument);
}

TEST(FlatConfig, TokensCommentsAndCommand) {
    const auto path = scratch("flat.cfg");
    std::ofstream(path) << "# header\ncommand = seminorm\n\ntheta = 1.5  # trailing\nfamily=BMO\n";
    std::string command;
    const auto tokens = read_flat_config(path.string(), &command);
    EXPECT_EQ(command, "seminorm");
    EXPECT_EQ(tokens, (std::vector<std::string>{"--theta=1.5", "--family=BMO"}));
    std::ofstream(path) << "theta 1.5\n";
    EXPECT_THROW(read_flat_config(path.string(), nullptr), std::invalid_argument);
    EXPECT_THROW(read_flat_config(scratch("missing.cfg").string(), nullptr), std::runtime_error);
}

TEST(Generators, ConstantPowerWeightAndMartingaleBound) {
    const Box box = Box::centered(3, 4.0);
    GeneratorSpec c;
    c.value = 2.5;
    const Generated gc = generate(c, box, {4, 4, 4});
    for (double v : gc.field.values()) EXPECT_EQ(v, 2.5);
    GeneratorSpec w;
    w.kind = GeneratorKind::weight_power;
    w.gamma = 4.0;
    const Generated gw = generate(w, box, {32, 32, 32});
    const std::size_t k = gw.field.locate(Point{0.01, 0.01, 0.01});
    const Point xc = gw.field.cell_center(k);
    EXPECT_EQ(gw.field[k], std::pow(1.0 + std::sqrt(xc[0] * xc[0] + xc[1] * xc[1] + xc[2] * xc[2]), 4.0));
    EXPECT_EQ(gw.field.kind(), FieldKind::weight);
    GeneratorSpec m;
    m.kind = GeneratorKind::dyadic_martingale;
    m.seed = 7;
    m.depth = 3;
    m.step = 1.0;
    const Generated gm = generate(m, Box::centered(3, 1.0), {16, 16, 16});
    ASSERT_TRUE(gm.bound.has_value());
    EXPECT_EQ(*gm.bound, 3.0);
    const GridField rho = GridField::constant(gm.field.box(), gm.field.counts(), FieldKind::rho, 1.0);
    const double norm = seminorm(gm.field, rho, SeminormSpec{SeminormFamily::blo, 0.0, std::nullopt},
                                 cube_items(gm.field, dyadic_family(whole_range(gm.field)))).value;
    EXPECT_GT(norm, 0.0);
    EXPECT_LE(norm, *gm.bound);
    EXPECT_EQ(generate(m, Box::centered(3, 1.0), {16, 16, 16}).field.values()[123], gm.field.values()[123]);
}

TEST(RunCommand, CheckOnFixturesPasses) {
    for (const std::string t : {"6.1", "6.2", "cor"}) {
        std::vector<std::string> args = fixture_check(t);
        if (t != "6.1") args.insert(args.end(), {"--q", "3"});
        const Outcome r = invoke(args);
        EXPECT_EQ(r.code, exit_pass) << t << ": " << r.err;
        const auto doc = nlohmann::json::parse(r.out);
        EXPECT_EQ(doc["tool"], "rholab");
        EXPECT_EQ(doc["version"], "0.1.0");
        EXPECT_TRUE(doc["passed"].get<bool>());
        EXPECT_EQ(doc["params"]["theorem"], t);
    }
}

TEST(RunCommand, CorruptedHeaderIsInputError) {
    std::vector<std::string> args = fixture_check("6.1");
    args[4] = fixture("corrupted_header.rsf");
    const Outcome r = invoke(args);
    EXPECT_EQ(r.code, exit_input);
    EXPECT_NE(r.err.find("error"), std::string::npos);
    EXPECT_TRUE(r.out.empty());
}

TEST(RunCommand, NegativeControlReportsViolationWithWitness) {
    const Outcome r = invoke({"--config", fixture("negative_control.cfg")});
    EXPECT_EQ(r.code, exit_violation);
    const auto doc = nlohmann::json::parse(r.out);
    EXPECT_FALSE(doc["passed"].get<bool>());
    bool found = false;
    for (const auto& rep : doc["reports"]) {
        if (rep["id"] != "window-estimate") continue;
        found = true;
        EXPECT_EQ(rep["verdict"], "fail");
        EXPECT_EQ(rep["witness"]["shape"], "ball");
    }
    EXPECT_TRUE(found);
}

TEST(RunCommand, CommandLineOverridesConfig) {
    const Outcome r = invoke({"--config", fixture("negative_control.cfg"), "rho", "--c0-scale", "1"});
    EXPECT_EQ(r.code, exit_pass) << r.err;
    EXPECT_EQ(nlohmann::json::parse(r.out)["params"]["c0-scale"], "1");
}

TEST(RunCommand, InputErrors) {
    EXPECT_EQ(invoke({}).code, exit_input);
    EXPECT_EQ(invoke({"frobnicate"}).code, exit_input);
    EXPECT_EQ(invoke({"check"}).code, exit_input);
    EXPECT_EQ(invoke({"check", "--theorem", "9.9"}).code, exit_input);
    EXPECT_EQ(invoke({"rho", "--grid", "1"}).code, exit_input);
    EXPECT_EQ(invoke({"weight", "--grid", "8", "--draws", "10"}).code, exit_input);
    EXPECT_EQ(invoke({"generate", "--kind", "constant"}).code, exit_input);
    EXPECT_EQ(invoke({"--config", scratch("absent.cfg").string()}).code, exit_input);
    EXPECT_EQ(invoke({"rho", "--potential", scratch("absent.rsf").string(), "--grid", "4"}).code, exit_input);
}

TEST(RunCommand, DeterministicAcrossRunsAndThreads) {
    const std::vector<std::string> base{"weight", "--grid", "8", "--window", "1", "--seed", "5", "--draws", "300",
                                        "--weight", "gen:weight-power:gamma=2"};
    std::vector<std::string> one = base, four = base;
    one.insert(one.end(), {"--threads", "1"});
    four.insert(four.end(), {"--threads", "4"});
    const Outcome a = invoke(one);
    const Outcome b = invoke(four);
    const Outcome c = invoke(one);
    EXPECT_EQ(a.code, exit_pass) << a.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.out, c.out);
}

TEST(RunCommand, GenerateRoundTripsThroughFile) {
    const auto path = scratch("gen.rsf");
    const Outcome r = invoke({"generate", "--kind", "power", "--beta", "0.75", "--grid", "6", "--window", "1.5", "--out", path.string()});
    ASSERT_EQ(r.code, exit_pass) << r.err;
    const GridField loaded = load_field(path);
    GeneratorSpec spec;
    spec.kind = GeneratorKind::power;
    spec.beta = 0.75;
    const GridField direct = generate(spec, Box::centered(3, 1.5), {6, 6, 6}).field;
    ASSERT_TRUE(loaded.same_geometry(direct));
    for (std::size_t k = 0; k < direct.size(); ++k) EXPECT_EQ(loaded[k], direct[k]);
}

TEST(RunCommand, CsvReportAndOutFile) {
    const auto path = scratch("seminorm.csv");
    const Outcome r = invoke({"seminorm", "--grid", "8", "--window", "1", "--relations", "--format", "csv", "--out", path.string()});
    ASSERT_EQ(r.code, exit_pass) << r.err;
    std::ifstream in(path);
    std::string first;
    std::getline(in, first);
    EXPECT_EQ(first.rfind("# ", 0), 0u);
}

TEST(RunCommand, HelpAndVersion) {
    EXPECT_EQ(invoke({"--help"}).code, exit_pass);
    const Outcome v = invoke({"--version"});
    EXPECT_EQ(v.code, exit_pass);
    EXPECT_NE(v.out.find("0.1.0"), std::string::npos);
}
