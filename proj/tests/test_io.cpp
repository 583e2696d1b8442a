// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "neimkit/csv_io.hpp"
#include "neimkit/errors.hpp"
#include "neimkit/model_io.hpp"
#include "neimkit/testbeds.hpp"

using namespace neimkit;

namespace {

std::filesystem::path temp_dir() {
    const auto dir = std::filesystem::temp_directory_path() / "neimkit_io_test";
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

double unit(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

}  // namespace

TEST_CASE("format_double round-trips awkward values") {
    for (double v : {1.0, -0.1, 1e-300, 3.141592653589793, 1.7976931348623157e308,
                     4.9406564584124654e-324, 0.0}) {
        const std::string s = format_double(v);
        CHECK(std::stod(s) == v);
        CHECK(format_double(std::stod(s)) == s);
    }
}

TEST_CASE("snapshot csv round-trip is byte-identical") {
    const auto dir = temp_dir();
    SnapshotFile file;
    file.metadata = "neimkit v0.1.0 experiment=exp1 n=4 m=3 h_inv_sq=30 seed=0";
    file.set.parameters = {{1.0}, {1.5}, {3.0}};
    file.set.snapshots = DenseMatrix::from_columns(
        {{0.1, -0.2, 1.0 / 3.0, 4.0}, {1e-17, 2.0, -3.5, 0.0}, {9.9, 0.25, -1e5, 7.0}});
    const auto path = dir / "snap.csv";
    write_snapshot_csv(path, file);
    const SnapshotFile back = read_snapshot_csv(path);
    CHECK(back.metadata == file.metadata);
    CHECK(back.set.parameters == file.set.parameters);
    CHECK(back.set.snapshots.data() == file.set.snapshots.data());

    const auto path2 = dir / "snap2.csv";
    write_snapshot_csv(path2, back);
    CHECK(slurp(path) == slurp(path2));
}

TEST_CASE("generic csv round-trip is byte-identical") {
    const auto dir = temp_dir();
    CsvTable table;
    table.header = {"method", "mode_count", "avg_abs_error"};
    table.rows = {{"deim", "5", format_double(1.25e-3)}, {"neim", "5", format_double(0.5)}};
    const auto path = dir / "table.csv";
    write_csv(path, table);
    const CsvTable back = read_csv(path);
    CHECK(back.header == table.header);
    CHECK(back.rows == table.rows);
    const auto path2 = dir / "table2.csv";
    write_csv(path2, back);
    CHECK(slurp(path) == slurp(path2));
}

TEST_CASE("csv error paths") {
    const auto dir = temp_dir();
    CHECK_THROWS_AS(read_snapshot_csv(dir / "missing.csv"), IoError);
    const auto bad = dir / "bad.csv";
    std::ofstream(bad) << "no metadata line\n";
    CHECK_THROWS_AS(read_snapshot_csv(bad), IoError);
}

TEST_CASE("model save/load round-trips evaluation bit-identically") {
    // Small but fully populated model: trained networks, exact twin, deim.
    Exp2Problem problem;
    problem.grid = Grid1D::uniform(30, 30.0);
    problem.m = 9;
    const SnapshotSet set = problem.snapshots();

    ModelFile model;
    model.experiment = "exp2";
    model.seed = 3;
    model.pod = compute_pod(set, 5);
    const TrainingGrid grid = build_training_grid(set, model.pod, problem.nonlinearity());

    std::vector<Vector> nonlinear;
    for (std::size_t i = 0; i < set.count(); ++i) {
        nonlinear.push_back(problem.nonlinearity_vec(set.snapshots.column(i),
                                                     set.parameters[i][0]));
    }
    model.deim = deim_select(nonlinear, 4, model.pod);

    NeimTrainOptions options;
    options.stop.max_modes = 3;
    options.weights.error_weights.kind = ErrorWeights::Kind::Kronecker;
    options.net_config.layer_sizes = {5, 7, 5};
    options.net_config.epochs = 300;
    options.net_config.seed = 3;
    model.neim = neim_train(grid, options);
    options.exact_mode = true;
    model.neim_exact = neim_train(grid, options);

    const auto dir = temp_dir();
    const auto path = dir / "model.json";
    save_model(path, model);
    const ModelFile back = load_model(path);

    CHECK(back.experiment == model.experiment);
    CHECK(back.seed == model.seed);
    CHECK(back.pod.u_r.data() == model.pod.u_r.data());
    CHECK(back.neim->status == model.neim->status);
    CHECK(back.neim->theta_table.data() == model.neim->theta_table.data());

    std::mt19937_64 gen(17);
    for (int t = 0; t < 100; ++t) {
        Vector vr(5);
        for (double& v : vr) v = 2.0 * unit(gen) - 1.0;
        const Vector mu{1.0 + unit(gen) * 2.1415};
        const Vector a = neim_eval(*model.neim, vr, mu);
        const Vector b = neim_eval(*back.neim, vr, mu);
        CHECK(a == b);  // bit-identical
        const Vector ae = neim_eval(*model.neim_exact, vr, mu);
        const Vector be = neim_eval(*back.neim_exact, vr, mu);
        CHECK(ae == be);
        const Vector da = deim_eval(*model.deim, problem.row_nonlinearity(), vr, mu);
        const Vector db = deim_eval(*back.deim, problem.row_nonlinearity(), vr, mu);
        CHECK(da == db);
    }

    // step-restricted evaluators also round-trip
    const NeimStepEvaluator sa(*model.neim, 2);
    const NeimStepEvaluator sb(*back.neim, 2);
    const Vector vr(5, 0.2);
    CHECK(sa(vr, Vector{2.0}) == sb(vr, Vector{2.0}));
}

TEST_CASE("model load rejects malformed input") {
    const auto dir = temp_dir();
    const auto path = dir / "junk.json";
    std::ofstream(path) << "{\"format\": \"something-else\", \"version\": 1}";
    CHECK_THROWS_AS(load_model(path), IoError);
    std::ofstream(path) << "not json";
    CHECK_THROWS_AS(load_model(path), IoError);
    CHECK_THROWS_AS(load_model(dir / "missing.json"), IoError);
}
