#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include <unistd.h>

#include "oracles.hpp"
#include "pentaks_cli.hpp"

using namespace pentaks;
using Catch::Matchers::WithinAbs;
namespace fs = std::filesystem;

namespace {

struct Invocation {
    int code;
    std::string out;
    std::string err;
};

Invocation run(std::vector<std::string> args) {
    args.insert(args.begin(), "pentaks");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch() {
    const fs::path dir = fs::temp_directory_path() / ("pentaks_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir;
}

std::string write(const fs::path& p, const std::string& text) {
    std::ofstream(p) << text;
    return p.string();
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

} // namespace

TEST_CASE("spectrum of the degenerate pentagram") {
    const Invocation r = run({"spectrum", "--a", "0", "--b", "0"});
    REQUIRE(r.code == 0);
    const auto j = json_io::json::parse(r.out);
    const auto s = j.at("spectrum").get<std::vector<double>>();
    REQUIRE(s.size() == 3);
    CHECK_THAT(s[0], WithinAbs(2, 1e-9));
    CHECK_THAT(s[1], WithinAbs(2, 1e-9));
    CHECK_THAT(s[2], WithinAbs(1, 1e-9));
    CHECK_THAT(j.at("A").get<double>(), WithinAbs(2, 1e-15));
}

TEST_CASE("CLI output reproduces library values exactly") {
    const PentagramParams pp{0.7, 0.4, 1.1, 2.3};
    const Invocation r = run({"spectrum", "--a", "0.7", "--b", "0.4", "--mu", "1.1", "--nu", "2.3"});
    REQUIRE(r.code == 0);
    const auto j = json_io::json::parse(r.out);
    CHECK(j.at("spectrum").get<std::vector<double>>() == spectrum(build_family(pp).op()).values);
    CHECK(j.at("A").get<double>() == build_family(pp).overlap_sum());

    const Invocation g = run({"av-game", "--runs", "5000", "--seed", "3"});
    const auto gj = json_io::json::parse(g.out);
    const GameStats s = av_game(5000, 3);
    CHECK(gj.at("selected").get<std::uint64_t>() == s.selected);
    CHECK(gj.at("wins_among_selected").get<std::uint64_t>() == s.wins_among_selected);
}

TEST_CASE("numbers are written with 17 significant digits") {
    const Invocation r = run({"spectrum", "--a", "0.5", "--b", "0.5"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("\"A\":1.") != std::string::npos);
    const auto pos = r.out.find("\"A\":") + 4;
    const std::string num = r.out.substr(pos, r.out.find_first_of(",}", pos) - pos);
    CHECK(num.size() == 18);
    const Invocation p = run({"spectrum", "--a", "0.5", "--b", "0.5", "--pretty"});
    CHECK(p.out.find('\n') < p.out.size() - 1);
}

TEST_CASE("box game output is byte-identical across runs") {
    const Invocation a = run({"av-game", "--runs", "1000", "--seed", "7"});
    const Invocation b = run({"av-game", "--runs", "1000", "--seed", "7"});
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("validate rejects a non-orthogonal declared edge") {
    const fs::path dir = scratch();
    const std::string bad = write(dir / "bad.json", R"({"nodes":["x","y"],"edges":[[0,1]],"bases":[],
        "realization":{"x":{"dim":3,"re":[1,0,0],"im":[0,0,0]},"y":{"dim":3,"re":[1,1,0],"im":[0,0,0]}}})");
    const Invocation r = run({"validate", bad});
    CHECK(r.code == 1);
    CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);

    const std::string good = write(dir / "good.json", json_io::dump(json_io::to_json(cabello18())));
    CHECK(run({"validate", good}).code == 0);
}

TEST_CASE("malformed input names the offending field") {
    const fs::path dir = scratch();
    const std::string state = write(dir / "state.json", R"({"dim":3,"re":[1,0],"im":[0,0,0]})");
    const Invocation r = run({"tailor", "--state", state});
    CHECK(r.code == 1);
    CHECK(r.err.find("state.re") != std::string::npos);

    const std::string graph = write(dir / "graph.json", R"({"nodes":["a","b"],"edges":[[0,"b"]]})");
    const Invocation g = run({"color", graph});
    CHECK(g.code == 1);
    CHECK(g.err.find("graph.edges[0][1]") != std::string::npos);

    const std::string broken = write(dir / "broken.json", "{not json");
    CHECK(run({"pentagons", broken}).code == 1);
}

TEST_CASE("usage errors exit with 2") {
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"spectrum", "--a", "0"}).code == 2);
    CHECK(run({"av-game", "--runs", "ten", "--seed", "1"}).code == 2);
    CHECK(run({"four"}).code == 2);
    CHECK(run({"four", "--separable-regular", "--entangled-regular"}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("output files come with a manifest") {
    const fs::path dir = scratch();
    const fs::path out = dir / "game.json";
    const Invocation r = run({"av-game", "--runs", "100", "--seed", "11", "--out", out.string()});
    REQUIRE(r.code == 0);
    const auto m = json_io::json::parse(slurp(out.string() + ".manifest.json"));
    CHECK(m.at("command") == "av-game");
    CHECK(m.at("seed") == 11);
    CHECK(m.at("parameters").at("runs") == "100");
    CHECK(m.at("outputs").at(0) == out.string());
    CHECK(m.at("versions").contains("pentaks"));
    CHECK(slurp(out) == run({"av-game", "--runs", "100", "--seed", "11"}).out);
}

TEST_CASE("graph commands") {
    const Invocation c = run({"color", "builtin:cabello18"});
    REQUIRE(c.code == 0);
    CHECK(json_io::json::parse(c.out).at("colorable") == false);

    const Invocation p = run({"pentagons", "builtin:regular-pentagram"});
    REQUIRE(p.code == 0);
    CHECK(json_io::json::parse(p.out).at("count") == 1);

    const fs::path dir = scratch();
    const Invocation csv = run({"four", "--cabello-pentagons", "--out", (dir / "p.csv").string()});
    REQUIRE(csv.code == 0);
    const std::string text = slurp(dir / "p.csv");
    CHECK(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) == cabello_pentagon_spectra().size() + 1);
}

TEST_CASE("graph JSON round trip") {
    const OrthogonalityGraph g = cabello18();
    const OrthogonalityGraph back = json_io::graph_from_json(json_io::json::parse(json_io::dump(json_io::to_json(g))));
    CHECK(back.labels() == g.labels());
    CHECK(back.edges() == g.edges());
    CHECK(back.bases() == g.bases());
    for (int i = 0; i < g.node_count(); ++i)
        for (int k = 0; k < 4; ++k) CHECK(back.vector(i)[k] == g.vector(i)[k]);
}

TEST_CASE("state and operator JSON round trip") {
    std::mt19937_64 rng(71);
    const StateVector v = oracle::to_state(oracle::random_vector<4>(rng));
    const StateVector w = json_io::state_from_json(json_io::json::parse(json_io::dump(json_io::to_json(v))));
    for (int k = 0; k < 4; ++k) CHECK(std::abs(w[k] - v[k]) < 1e-15);
    const HermitianOperator op = build_family(regular_params()).op();
    const HermitianOperator back = json_io::operator_from_json(json_io::json::parse(json_io::dump(json_io::to_json(op))));
    CHECK(back.matrix().max_abs_difference(op.matrix()) == 0.0);
    CHECK_THROWS_AS(json_io::operator_from_json(json_io::json::parse(R"({"dim":2,"re":[[0,1],[0,0]],"im":[[0,0],[0,0]]})")),
                    ValidationError);
}
