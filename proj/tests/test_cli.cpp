#include <doctest.h>

#include <Eigen/Dense>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "ltimd/cli.hpp"
#include "ltimd/exceptions.hpp"
#include "ltimd/lti.hpp"
#include "ltimd/matrix_io.hpp"
#include "ltimd/numerics.hpp"
#include "ltimd/signals.hpp"

using namespace ltimd;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream sink;
  sink << in.rdbuf();
  return sink.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out.good());
  out << text;
}

const std::string kGappedRampCsv = "1\n2\nNaN\n4\n5\nNaN\n7\n8\n";

}  // namespace

TEST_CASE("kernel CSV round trip") {
  auto outcome = identify_exact(testing::gapped_ramp(), testing::affine_cx());
  REQUIRE(outcome.status == IdentStatus::Success);
  const auto dir = testing::temp_dir("io");

  write_kernel_csv_file(*outcome.kernel, dir + "/k.csv");
  auto back = read_kernel_csv_file(dir + "/k.csv");
  CHECK(back.d == outcome.kernel->d);
  CHECK(back.exact == outcome.kernel->exact);
  CHECK(back.cx.m == 0);
  CHECK(back.cx.p == 1);
  CHECK(back.cx.n == 2);
  CHECK(back.cx.ell == 2);
  CHECK(back.R == outcome.kernel->R);  // bitwise through %.17g

  SUBCASE("header validation") {
    spit(dir + "/bad1.csv", "# d=4, m=0, p=1, n=2, ell=2, exact=maybe\n1,0,0,0\n0,1,0,0\n");
    CHECK_THROWS_AS(read_kernel_csv_file(dir + "/bad1.csv"), ParseError);
    spit(dir + "/bad2.csv", "# d=4, m=0, p=1, n=2, ell=2, exact=true\n1,0,0,0\n");
    CHECK_THROWS_AS(read_kernel_csv_file(dir + "/bad2.csv"), DimensionError);
    spit(dir + "/bad3.csv", "1,0,0,0\n0,1,0,0\n");
    CHECK_THROWS_AS(read_kernel_csv_file(dir + "/bad3.csv"), ParseError);
    CHECK_THROWS_AS(read_kernel_csv_file(dir + "/absent.csv"), ParseError);
  }
}

TEST_CASE("model CSV round trip") {
  auto model = random_system(Complexity{1, 2, 3, 2}, 9);
  const auto dir = testing::temp_dir("io");
  write_model_csv_file(model, dir + "/model.csv");
  auto back = read_model_csv_file(dir + "/model.csv");
  CHECK(back.A == model.A);
  CHECK(back.B == model.B);
  CHECK(back.C == model.C);
  CHECK(back.D == model.D);
}

TEST_CASE("bare matrix CSV") {
  std::istringstream empty("");
  CHECK(read_matrix_csv(empty).size() == 0);
  std::istringstream some("1,2\n3,4\n");
  Eigen::MatrixXd M = read_matrix_csv(some);
  REQUIRE(M.rows() == 2);
  CHECK(M(1, 0) == 3.0);
}

TEST_CASE("cli: identify then complete restores the ramp") {
  const auto dir = testing::temp_dir("cli");
  spit(dir + "/w.csv", kGappedRampCsv);

  const int rc = run_cli({"identify", "--in", dir + "/w.csv", "--m", "0",
                          "--p", "1", "--n", "2", "--ell", "2", "--out",
                          dir + "/k.csv"});
  REQUIRE(rc == kExitOk);

  auto kernel = read_kernel_csv_file(dir + "/k.csv");
  CHECK(kernel.d == 4);
  CHECK(kernel.exact);
  CHECK(max_row_space_angle(kernel.R, testing::affine_kernel_span()) < 1e-8);

  REQUIRE(run_cli({"complete", "--in", dir + "/w.csv", "--kernel",
                   dir + "/k.csv", "--out", dir + "/filled.csv"}) == kExitOk);
  auto filled = parse_csv_file(dir + "/filled.csv");
  REQUIRE(!filled.any_missing());
  const Eigen::VectorXd truth = Eigen::VectorXd::LinSpaced(8, 1, 8);
  CHECK((filled.stacked() - truth).cwiseAbs().maxCoeff() < 1e-10);

  SUBCASE("reruns are byte-identical") {
    REQUIRE(run_cli({"identify", "--in", dir + "/w.csv", "--m", "0", "--p",
                     "1", "--n", "2", "--ell", "2", "--out",
                     dir + "/k2.csv"}) == kExitOk);
    CHECK(slurp(dir + "/k.csv") == slurp(dir + "/k2.csv"));
    REQUIRE(run_cli({"complete", "--in", dir + "/w.csv", "--kernel",
                     dir + "/k2.csv", "--out", dir + "/filled2.csv"}) ==
            kExitOk);
    CHECK(slurp(dir + "/filled.csv") == slurp(dir + "/filled2.csv"));
  }

  SUBCASE("the noisy search flag is honored in the written header") {
    REQUIRE(run_cli({"identify", "--noisy", "--in", dir + "/w.csv", "--m",
                     "0", "--p", "1", "--n", "2", "--ell", "2", "--out",
                     dir + "/kn.csv"}) == kExitOk);
    CHECK(!read_kernel_csv_file(dir + "/kn.csv").exact);
  }

  SUBCASE("nuclear-norm completion needs no kernel") {
    CHECK(run_cli({"complete", "--in", dir + "/w.csv", "--method", "nn",
                   "--out", dir + "/nn.csv"}) == kExitOk);
    CHECK(!parse_csv_file(dir + "/nn.csv").any_missing());
  }

  SUBCASE("behavior expands the kernel to a horizon basis") {
    REQUIRE(run_cli({"behavior", "--kernel", dir + "/k.csv", "--len", "10",
                     "--out", dir + "/P.csv"}) == kExitOk);
    std::ifstream in(dir + "/P.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header.find("# d=10") == 0);  // the horizon takes the depth slot
    Eigen::MatrixXd P = read_matrix_csv(in);
    REQUIRE(P.rows() == 10);
    REQUIRE(P.cols() == 2);
    // Both basis vectors obey the second-difference law at every offset.
    for (int t = 0; t + 2 < 10; ++t)
      CHECK((P.row(t) - 2.0 * P.row(t + 1) + P.row(t + 2)).norm() < 1e-12);
  }
}

TEST_CASE("cli: a too-short record exits Partial but leaves its stack") {
  const auto dir = testing::temp_dir("cli_partial");
  spit(dir + "/short.csv", "1\n2\nNaN\n4\n5\n");
  const int rc = run_cli({"identify", "--in", dir + "/short.csv", "--m", "0",
                          "--p", "1", "--n", "2", "--ell", "2", "--out",
                          dir + "/stack.csv"});
  CHECK(rc == kExitPartial);
  CHECK(std::ifstream(dir + "/stack.csv").good());
}

TEST_CASE("cli: usage errors") {
  const auto dir = testing::temp_dir("cli_usage");
  spit(dir + "/empty.csv", "");
  spit(dir + "/w.csv", kGappedRampCsv);

  CHECK(run_cli({"identify", "--in", dir + "/empty.csv", "--m", "0", "--p",
                 "1", "--n", "2", "--ell", "2", "--out", dir + "/k.csv"}) ==
        kExitUsage);
  CHECK(run_cli({"identify", "--in", dir + "/w.csv", "--out",
                 dir + "/k.csv"}) == kExitUsage);  // complexity missing
  CHECK(run_cli({"frobnicate"}) == kExitUsage);
  CHECK(run_cli({}) == kExitUsage);
  CHECK(run_cli({"identify", "--in", dir + "/w.csv", "--m", "0", "--p", "1",
                 "--n", "5", "--ell", "2", "--out",
                 dir + "/k.csv"}) == kExitUsage);  // infeasible complexity
  CHECK(run_cli({"complete", "--in", dir + "/w.csv", "--out",
                 dir + "/c.csv"}) == kExitUsage);  // exact method, no kernel
  CHECK(run_cli({"complete", "--in", dir + "/w.csv", "--method", "svd",
                 "--out", dir + "/c.csv"}) == kExitUsage);
  CHECK(run_cli({"check", "--in", dir + "/w.csv"}) ==
        kExitUsage);  // neither certificate requested
  CHECK(run_cli({"experiment", "bogus", "--out", dir}) == kExitUsage);
  CHECK(run_cli({"--help"}) == kExitOk);
}

TEST_CASE("cli: excitation and observability certificates") {
  const auto dir = testing::temp_dir("cli_check");

  // A rich input passes the mosaic test, a constant one fails it.
  Rng rng(63);
  std::ostringstream rich;
  rich << "u1,y1\n";
  for (int t = 0; t < 40; ++t)
    rich << format_double(rng.uniform(-1.0, 1.0)) << ",0\n";
  spit(dir + "/rich.csv", rich.str());
  CHECK(run_cli({"check", "--pe-mosaic", "--in", dir + "/rich.csv", "--m",
                 "1", "--p", "1", "--n", "2", "--ell", "2"}) == kExitOk);

  std::ostringstream flat;
  flat << "u1,y1\n";
  for (int t = 0; t < 40; ++t) flat << "1,0\n";
  spit(dir + "/flat.csv", flat.str());
  CHECK(run_cli({"check", "--pe-mosaic", "--in", dir + "/flat.csv", "--m",
                 "1", "--p", "1", "--n", "2", "--ell", "2"}) ==
        kExitCheckFail);

  // Missing samples inside the input columns are unusable.
  spit(dir + "/holey.csv", "u1,y1\nNaN,0\n1,0\n2,0\n");
  CHECK(run_cli({"check", "--pe-mosaic", "--in", dir + "/holey.csv", "--m",
                 "1", "--p", "1", "--n", "2", "--ell", "2"}) == kExitUsage);

  // Sample-observability of models read from disk.
  StateSpaceModel generic, resonant;
  generic.A.resize(2, 2);
  generic.A << std::cos(0.4), -std::sin(0.4), std::sin(0.4), std::cos(0.4);
  generic.A *= 0.9;
  generic.B.resize(2, 0);
  generic.C.resize(1, 2);
  generic.C << 1, 0;
  generic.D.resize(1, 0);
  resonant = generic;
  const double a = 2.0 * M_PI / 3.0;
  resonant.A << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  resonant.A *= 0.9;

  write_model_csv_file(generic, dir + "/generic.csv");
  write_model_csv_file(resonant, dir + "/resonant.csv");
  CHECK(run_cli({"check", "--sample-obs", dir + "/generic.csv"}) == kExitOk);
  CHECK(run_cli({"check", "--sample-obs", dir + "/resonant.csv"}) ==
        kExitCheckFail);
}

TEST_CASE("cli: simulate writes the trajectory the library computes") {
  const auto dir = testing::temp_dir("cli_sim");

  StateSpaceModel model;
  model.A = Eigen::MatrixXd::Constant(1, 1, 0.5);
  model.B = Eigen::MatrixXd::Constant(1, 1, 1.0);
  model.C = Eigen::MatrixXd::Constant(1, 1, 2.0);
  model.D = Eigen::MatrixXd::Constant(1, 1, 0.25);
  write_model_csv_file(model, dir + "/model.csv");
  spit(dir + "/x0.csv", "1\n");
  spit(dir + "/u.csv", "1\n-1\n2\n");

  REQUIRE(run_cli({"simulate", "--model", dir + "/model.csv", "--x0",
                   dir + "/x0.csv", "--u", dir + "/u.csv", "--T", "3",
                   "--out", dir + "/w.csv"}) == kExitOk);

  auto w = parse_csv_file(dir + "/w.csv");
  Eigen::MatrixXd u(3, 1);
  u << 1, -1, 2;
  auto expect = simulate(model, Eigen::VectorXd::Ones(1), u);
  CHECK(w.raw_values() == expect.raw_values());

  // Input length must agree, and driven models cannot run open-loop.
  CHECK(run_cli({"simulate", "--model", dir + "/model.csv", "--x0",
                 dir + "/x0.csv", "--u", dir + "/u.csv", "--T", "4", "--out",
                 dir + "/w2.csv"}) == kExitUsage);
  CHECK(run_cli({"simulate", "--model", dir + "/model.csv", "--x0",
                 dir + "/x0.csv", "--T", "3", "--out", dir + "/w3.csv"}) ==
        kExitUsage);
}

TEST_CASE("cli: experiment subcommand writes tables and validates config") {
  const auto dir = testing::temp_dir("cli_exp");
  spit(dir + "/fig1.json",
       R"({"n_systems":1,"n_trials":2,"T_grid":[20],)"
       R"("given_fraction_grid":[1.0],"seed":3})");

  REQUIRE(run_cli({"experiment", "fig1", "--config", dir + "/fig1.json",
                   "--out", dir + "/out"}) == kExitOk);
  CHECK(std::ifstream(dir + "/out/fig1_sweep.csv").good());
  CHECK(std::ifstream(dir + "/out/fig1_sweep.meta.json").good());

  spit(dir + "/broken.json", "{not json");
  CHECK(run_cli({"experiment", "fig1", "--config", dir + "/broken.json",
                 "--out", dir + "/out"}) == kExitUsage);
  CHECK(run_cli({"experiment", "fig1", "--config", dir + "/absent.json",
                 "--out", dir + "/out"}) == kExitUsage);

  spit(dir + "/badcx.json", R"({"complexity":[1,2,3]})");
  CHECK(run_cli({"experiment", "fig1", "--config", dir + "/badcx.json",
                 "--out", dir + "/out"}) == kExitUsage);
}
