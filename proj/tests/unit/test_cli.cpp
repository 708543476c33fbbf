#include "adaptps/io/csv.hpp"
#include "adaptps/io/matrix_market.hpp"
#include "adaptps/penalty.hpp"
#include "adaptps/simlab.hpp"

#include "test_helpers.hpp"
#include "toy.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace adaptps;
using namespace adaptps::testing;

namespace {

namespace fs = std::filesystem;

struct CliRunner {
    fs::path dir;
    CliRunner() {
        dir = fs::temp_directory_path() / ("adaptps_cli_" + std::to_string(std::rand()));
        fs::create_directories(dir);
    }
    ~CliRunner() { fs::remove_all(dir); }

    std::string file(const std::string& name) const { return (dir / name).string(); }

    int run(const std::string& args) const {
        const std::string cmd = std::string(ADAPTPS_CLI_PATH) + " " + args + " > " +
                                file("stdout.txt") + " 2> " + file("stderr.txt");
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    std::string read(const std::string& name) const {
        std::ifstream in(file(name));
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
};

void write_scenario_csv(const std::string& path, int n, std::uint64_t seed) {
    Scenario sc;
    sc.id = ScenarioId::II;
    sc.family = FamilyKind::Gaussian;
    sc.s = 0.1;
    sc.n = n;
    sc.seed = seed;
    const SimDataset ds = gen_dataset(sc);
    CsvTable table;
    table.columns = {"x1", "x2", "y"};
    table.data = {ds.data.x.col(0), ds.data.x.col(1), ds.data.y};
    write_csv(path, table);
}

}  // namespace

TEST_CASE("cli: fit with the paper-default adaptive config reports 50 variances") {
    CliRunner cli;
    write_scenario_csv(cli.file("data.csv"), 300, 3);
    {
        std::ofstream cfg(cli.file("model.cfg"));
        cfg << "family = gaussian\nresponse = y\n"
            << "dim1.column = x1\ndim2.column = x2\n";  // defaults: d=12 full p=5
    }
    const int code = cli.run("fit --data " + cli.file("data.csv") + " --config " +
                             cli.file("model.cfg") + " --out " + cli.file("fit.json"));
    CHECK((code == 0 || code == 3));
    std::ifstream in(cli.file("fit.json"));
    nlohmann::json j;
    in >> j;
    CHECK(j.at("variances").size() == 50);
    CHECK(j.at("coefficients").at("theta").size() == 144);
    CHECK(j.at("format_version") == 1);

    // Same-named flags override config keys: all-none gives 2 components.
    const int code2 = cli.run("fit --data " + cli.file("data.csv") + " --config " +
                              cli.file("model.cfg") + " --dim1.mode none --dim2.mode none" +
                              " --out " + cli.file("fit2.json"));
    CHECK((code2 == 0 || code2 == 3));
    std::ifstream in2(cli.file("fit2.json"));
    nlohmann::json j2;
    in2 >> j2;
    CHECK(j2.at("variances").size() == 2);
}

TEST_CASE("cli: predict reproduces training fits and honors the grid spec") {
    CliRunner cli;
    write_scenario_csv(cli.file("data.csv"), 200, 4);
    REQUIRE(cli.run("fit --data " + cli.file("data.csv") +
                    " --response y --dim1.column x1 --dim2.column x2" +
                    " --dim1.d 7 --dim2.d 7 --dim1.mode none --dim2.mode none --out " +
                    cli.file("fit.json")) == 0);

    REQUIRE(cli.run("predict --fit " + cli.file("fit.json") + " --points " +
                    cli.file("data.csv") + " --out " + cli.file("pred.csv")) == 0);
    const CsvTable pred = read_csv(cli.file("pred.csv"));
    CHECK(pred.n_rows() == 200);
    CHECK(pred.has_column("eta_hat"));
    CHECK(pred.has_column("se_eta"));
    CHECK(pred.column("se_eta").minCoeff() >= 0.0);
    CHECK((pred.column("upper").array() >= pred.column("lower").array()).all());

    // Deterministic: the same command writes identical bytes.
    REQUIRE(cli.run("predict --fit " + cli.file("fit.json") + " --points " +
                    cli.file("data.csv") + " --out " + cli.file("pred2.csv")) == 0);
    CHECK(cli.read("pred.csv") == cli.read("pred2.csv"));

    REQUIRE(cli.run("predict --fit " + cli.file("fit.json") + " --grid 50x50 --out " +
                    cli.file("grid.csv")) == 0);
    CHECK(read_csv(cli.file("grid.csv")).n_rows() == 2500);

    // Out-of-domain points exit with an input error listing rows.
    {
        std::ofstream out(cli.file("bad.csv"));
        out << "x1,x2\n0.0,0.0\n99.0,0.0\n";
    }
    CHECK(cli.run("predict --fit " + cli.file("fit.json") + " --points " + cli.file("bad.csv") +
                  " --out " + cli.file("nope.csv")) == 1);
}

TEST_CASE("cli: simulate is reproducible and rejects unknown scenarios") {
    CliRunner cli;
    const std::string args =
        " --n 100 --s 0.5 --R 1 --seed 7 --d 6 --p 2 --psi-degree 1 --methods standard";
    REQUIRE(cli.run("simulate --scenario III" + args + " --out " + cli.file("a.csv")) == 0);
    REQUIRE(cli.run("simulate --scenario III" + args + " --out " + cli.file("b.csv")) == 0);
    CHECK(cli.read("a.csv") == cli.read("b.csv"));
    CHECK(read_csv(cli.file("a.csv")).n_rows() == 1);

    CHECK(cli.run("simulate --scenario IV --out " + cli.file("c.csv")) == 1);
}

TEST_CASE("cli: dump-penalty writes one file per component plus a manifest") {
    CliRunner cli;
    SUBCASE("all-none 2-D gives two files") {
        REQUIRE(cli.run("dump-penalty --response y --dim1.column a --dim2.column b"
                        " --dim1.mode none --dim2.mode none --dim1.d 6 --dim2.d 5"
                        " --out-dir " +
                        cli.file("pen")) == 0);
        int mtx_files = 0;
        for (const auto& entry : fs::directory_iterator(cli.file("pen")))
            if (entry.path().extension() == ".mtx") ++mtx_files;
        CHECK(mtx_files == 2);

        // Round trip: the exported matrices equal the in-memory components.
        AdaptivePenaltySpec spec;
        spec.dims = {BasisSpec{0.0, 1.0, 6, 3, 2}, BasisSpec{0.0, 1.0, 5, 3, 2}};
        spec.modes = {AdaptivityMode::None, AdaptivityMode::None};
        spec.p = {{1, 1, 1}, {1, 1, 1}};
        const auto comps = adaptive_components_2d(spec);
        const Matrix first =
            read_matrix_market((fs::path(cli.file("pen")) / "penalty_dim1_0.mtx").string());
        CHECK(first == comps[0].matrix);
    }
    SUBCASE("full adaptive p=5 gives 50 files") {
        REQUIRE(cli.run("dump-penalty --response y --dim1.column a --dim2.column b"
                        " --out-dir " +
                        cli.file("pen50")) == 0);
        int mtx_files = 0;
        for (const auto& entry : fs::directory_iterator(cli.file("pen50")))
            if (entry.path().extension() == ".mtx") ++mtx_files;
        CHECK(mtx_files == 50);
        std::ifstream in((fs::path(cli.file("pen50")) / "manifest.json").string());
        nlohmann::json manifest;
        in >> manifest;
        CHECK(manifest.size() == 50);
    }
}

TEST_CASE("cli: poisson grid-array ingestion with a trials offset") {
    CliRunner cli;
    // A complete 6x6x4 grid of counts with per-cell trials.
    Philox rng(71);
    std::ofstream out(cli.file("grid.csv"));
    out << "row,col,time,count,trials\n";
    for (int t = 0; t < 4; ++t)
        for (int c = 0; c < 6; ++c)
            for (int r = 0; r < 6; ++r) {
                const double trials = 40.0;
                const double rate =
                    0.2 + 0.6 * std::exp(-((r - 3.0) * (r - 3.0) + (c - 2.0) * (c - 2.0)) / 4.0 -
                                         0.3 * t);
                out << r + 1 << "," << c + 1 << "," << t + 1 << ","
                    << poisson_draw(rng, trials * rate) << "," << trials << "\n";
            }
    out.close();
    {
        std::ofstream cfg(cli.file("model.cfg"));
        cfg << "family = poisson\nresponse = count\ntrials = trials\n"
            << "dim1.column = row\ndim1.d = 5\ndim1.mode = full\ndim1.p = 2\n"
            << "dim2.column = col\ndim2.d = 5\ndim2.mode = full\ndim2.p = 2\n"
            << "dim3.column = time\ndim3.d = 4\ndim3.q = 1\ndim3.mode = none\n"
            << "psi_degree = 1\n";
    }
    const int code = cli.run("fit --data " + cli.file("grid.csv") + " --config " +
                             cli.file("model.cfg") + " --out " + cli.file("fit3d.json"));
    CHECK((code == 0 || code == 3));
    CHECK(cli.read("stdout.txt").find("(grid)") != std::string::npos);
    std::ifstream in(cli.file("fit3d.json"));
    nlohmann::json j;
    in >> j;
    CHECK(j.at("variances").size() == 8 + 8 + 1);
    CHECK(j.at("coefficients").at("theta").size() == 5 * 5 * 4);
}
