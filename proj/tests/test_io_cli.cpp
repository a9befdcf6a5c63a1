#include <cstdlib>
#include <doctest.h>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tlopt/io.hpp"
#include "tlopt/ops.hpp"
#include "tlopt/parser.hpp"

using namespace tlopt;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
    fs::path dir = fs::temp_directory_path() / "tlopt_tests";
    fs::create_directories(dir);
    return dir;
}

fs::path write_file(const std::string& name, const std::string& content) {
    fs::path p = scratch_dir() / name;
    std::ofstream out(p);
    out << content;
    return p;
}

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

RunResult run_cli(const std::string& args) {
    fs::path out_file = scratch_dir() / "stdout.txt";
    fs::path err_file = scratch_dir() / "stderr.txt";
    std::string cmd = std::string(TLOPT_CLI_PATH) + " " + args + " >" +
                      out_file.string() + " 2>" + err_file.string();
    int rc = std::system(cmd.c_str());
    RunResult res;
    res.exit_code = rc < 0 ? rc : WEXITSTATUS(rc);
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    res.out = slurp(out_file);
    res.err = slurp(err_file);
    return res;
}

const char* kExample1Config = R"json({
  "logic": "stl",
  "formula": "(G[1,5] s1>=7 || G[1,5] s2<=2) && (F[5,10] s1<=3 || F[5,10] s2>=8)",
  "horizon": 10,
  "signals": {"s1": [0, 10], "s2": [0, 10]},
  "initial": {"s1": 0, "s2": 0}
})json";

const char* kExample2Config = R"json({
  "logic": "stl",
  "formula": "(G[3,5] (s1 >= 3)) && (G[9,10] (s2 >= 2))",
  "horizon": 10,
  "system": {
    "A": [[1, 1], [0, 1]],
    "B": [[1, 0], [0, 1]],
    "C": [[1, 0]],
    "D": [0, 0],
    "state_names": ["s1", "s2"],
    "input_names": ["u1", "u2"],
    "state_bounds": {"s1": [-9, 9], "s2": [-9, 9]},
    "input_bounds": {"u1": [-5, 5], "u2": [-5, 5]},
    "x0": [0, 0]
  },
  "costs": {"lambda": 1, "alpha": 0, "beta": 0}
})json";

} // namespace

TEST_CASE("trace csv round trip") {
    Trace t;
    t.add_signal("s1", {0.0, 1.5, -2.25});
    t.add_signal("s2", {1.0, 0.125, 3.0});
    fs::path p = scratch_dir() / "round.csv";
    write_trace_csv(p, t);
    Trace back = read_trace_csv(p);
    CHECK(back.signal_names() == t.signal_names());
    for (const auto& name : t.signal_names())
        for (int k = 0; k < t.length(); ++k)
            CHECK(back.value(name, k) == t.value(name, k));
}

TEST_CASE("trace csv validation") {
    CHECK_THROWS_AS(read_trace_csv(scratch_dir() / "missing.csv"), IoError);
    CHECK_THROWS_AS(read_trace_csv(write_file("bad_header.csv", "s1,s2\n0,1\n")),
                    IoError);
    CHECK_THROWS_AS(
        read_trace_csv(write_file("bad_time.csv", "time,s1\n0,1\n2,3\n")), IoError);
    CHECK_THROWS_AS(
        read_trace_csv(write_file("missing_cell.csv", "time,s1,s2\n0,1,\n")), IoError);
    CHECK_THROWS_AS(read_trace_csv(write_file("empty.csv", "time,s1\n")), IoError);
}

TEST_CASE("system config loading") {
    SystemConfig cfg = load_system_config(write_file("ex2.json", kExample2Config));
    CHECK(cfg.logic == Logic::Stl);
    REQUIRE(cfg.system.has_value());
    CHECK(cfg.system->horizon == 10);
    CHECK(cfg.system->A(0, 1) == 1.0);
    CHECK(cfg.system->state_names == std::vector<std::string>{"s1", "s2"});
    CHECK(cfg.costs.lambda == 1.0);
    CHECK(cfg.costs.alpha.size() == 2);
    CHECK(cfg.costs.alpha[0] == 0.0);

    CHECK_THROWS_AS(load_system_config(scratch_dir() / "nope.json"), IoError);
    CHECK_THROWS_AS(load_system_config(write_file("broken.json", "{not json")), IoError);
    CHECK_THROWS_AS(
        load_system_config(write_file("bad_logic.json",
                                      R"({"logic": "ltl", "formula": "x>0"})")),
        SemanticError);
}

TEST_CASE("cli parse") {
    RunResult r = run_cli("parse --logic stl --spec \"(F[0,4] s>2) && (G[2,4] s<=4)\"");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "And\n"
                   " Eventually[0,4]\n"
                   "  Pred s >= 2\n"
                   " Always[2,4]\n"
                   "  Pred s <= 4\n");

    RunResult atom = run_cli("parse --logic mtl --spec RegionA");
    CHECK(atom.exit_code == 0);
    CHECK(atom.out == "Atom RegionA\n");

    RunResult bad = run_cli("parse --logic stl --spec \"F[0,4] s >\"");
    CHECK(bad.exit_code == 1);
    CHECK(bad.err.find('^') != std::string::npos);
}

TEST_CASE("cli analyze") {
    CHECK(run_cli("analyze --logic stl --spec \"(F[0,4] s>2) && (G[2,4] s<=4)\" --horizon").out ==
          "4\n");
    CHECK(run_cli("analyze --logic stl --spec \"!(F[0,3] s>2)\" --pnf").out ==
          "G[0,3] (s <= 2)\n");
    RunResult neg = run_cli("analyze --logic stl --spec \"a>0 U[0,2] b>0\" --negate");
    CHECK(neg.exit_code == 2);
}

TEST_CASE("cli robustness") {
    write_file("const5.csv", "time,s\n0,5\n1,5\n2,5\n3,5\n");
    RunResult r = run_cli("robustness --logic stl --spec \"G[0,3] s>2\" --trace " +
                          (scratch_dir() / "const5.csv").string());
    CHECK(r.exit_code == 0);
    CHECK(r.out == "3\n");

    RunResult agm = run_cli("robustness --logic stl --spec \"G[0,3] s>2\" --method agm --trace " +
                            (scratch_dir() / "const5.csv").string());
    CHECK(agm.exit_code == 2);   // MissingBound without --bounds

    write_file("bounds.json", R"({"s": [0, 10]})");
    RunResult agm2 = run_cli(
        "robustness --logic stl --spec \"G[0,3] s>2\" --method agm --trace " +
        (scratch_dir() / "const5.csv").string() + " --bounds " +
        (scratch_dir() / "bounds.json").string());
    CHECK(agm2.exit_code == 0);
    CHECK(agm2.out == "0.375\n");   // (5-2)/max(|10-2|,|0-2|)

    // batch: one number per line, ordered by file name
    fs::path batch = scratch_dir() / "batch";
    fs::create_directories(batch);
    std::ofstream(batch / "a.csv") << "time,s\n0,5\n1,5\n2,5\n3,5\n";
    std::ofstream(batch / "b.csv") << "time,s\n0,3\n1,3\n2,3\n3,3\n";
    RunResult br = run_cli("robustness --logic stl --spec \"G[0,3] s>2\" --batch " +
                           batch.string());
    CHECK(br.exit_code == 0);
    CHECK(br.out == "3\n1\n");
}

TEST_CASE("cli parse from file and with weights") {
    fs::path spec_file = write_file("spec.txt", "(F[0,4] s>2) && (G[2,4] s<=4)\n");
    RunResult r = run_cli("parse --logic stl --file " + spec_file.string());
    CHECK(r.exit_code == 0);
    CHECK(r.out.substr(0, 4) == "And\n");

    write_file("weights.json", R"({"p": [0.2, 0.8]})");
    RunResult w = run_cli("parse --logic wstl --spec \"&&^p(s1>=3, s2>=2)\" --weights " +
                          (scratch_dir() / "weights.json").string());
    CHECK(w.exit_code == 0);
    CHECK(w.out.find("And^p") != std::string::npos);
    RunResult missing = run_cli("parse --logic wstl --spec \"&&^q(s1>=3, s2>=2)\" --weights " +
                                (scratch_dir() / "weights.json").string());
    CHECK(missing.exit_code == 2);
}

TEST_CASE("cli wstl robustness") {
    write_file("w2.json", R"({"p": [0.2, 0.8]})");
    write_file("two.csv", "time,a,b\n0,2,4\n");
    RunResult r = run_cli("robustness --logic wstl --spec \"&&^p(a>=0, b>=0)\" --weights " +
                          (scratch_dir() / "w2.json").string() + " --trace " +
                          (scratch_dir() / "two.csv").string());
    CHECK(r.exit_code == 0);
    CHECK(r.out == "0.4\n");
}

TEST_CASE("cli synth on example 1 and 2 configs") {
    fs::path cfg1 = write_file("ex1.json", kExample1Config);
    fs::path out1 = scratch_dir() / "ex1_trace.csv";
    RunResult r1 = run_cli("synth --config " + cfg1.string() + " --out " + out1.string());
    CHECK(r1.exit_code == 0);
    CHECK(r1.out.find("status: optimal") != std::string::npos);
    auto rho_pos = r1.out.find("rho_milp: ");
    REQUIRE(rho_pos != std::string::npos);
    CHECK(std::stod(r1.out.substr(rho_pos + 10)) >= 0.0);
    Trace t1 = read_trace_csv(out1);
    CHECK(t1.length() == 11);
    CHECK(t1.signal_names() == std::vector<std::string>{"s1", "s2"});

    fs::path cfg2 = write_file("ex2b.json", kExample2Config);
    fs::path out2 = scratch_dir() / "ex2_trace.csv";
    fs::path lp = scratch_dir() / "ex2.lp";
    RunResult r2 = run_cli("synth --config " + cfg2.string() + " --out " + out2.string() +
                           " --export-lp " + lp.string());
    CHECK(r2.exit_code == 0);
    Trace t2 = read_trace_csv(out2);
    CHECK(t2.signal_names() ==
          std::vector<std::string>{"s1", "s2", "u1", "u2"});
    std::ifstream lpin(lp);
    std::stringstream lpss;
    lpss << lpin.rdbuf();
    CHECK(lpss.str().find("Maximize") != std::string::npos);
    CHECK(lpss.str().find("Binaries") != std::string::npos);
    CHECK(lpss.str().find("End") != std::string::npos);

    // infeasible config exits 3
    fs::path cfg3 = write_file("infeasible.json", R"({
      "logic": "stl",
      "formula": "G[0,3] s>2",
      "signals": {"s": [0, 1]}
    })");
    RunResult r3 = run_cli("synth --config " + cfg3.string());
    CHECK(r3.exit_code == 3);
    CHECK(r3.out.find("status: infeasible") != std::string::npos);

    RunResult r4 = run_cli("synth --config " + (scratch_dir() / "ghost.json").string());
    CHECK(r4.exit_code == 4);
}
