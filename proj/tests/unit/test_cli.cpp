#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dioph/errors.hpp"
#include "dioph_cli/alpha.hpp"
#include "dioph_cli/cli.hpp"
#include "json.hpp"

using namespace dioph;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string line; std::getline(ss, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("farey command") {
  CHECK(run({"farey", "--n", "2"}).out == "1/0, 2/1, 1/1, 1/2, 0/1\n");
  CHECK(run({"farey", "--n", "0"}).out == "1/0, 0/1\n");
  const Run capped = run({"farey", "--n", "31"});
  CHECK(capped.code == static_cast<int>(ExitCode::cap_exceeded));
  CHECK(capped.out.empty());
  const auto j = nlohmann::json::parse(run({"--format", "json", "farey", "--n", "3"}).out);
  CHECK(j["size"] == 9);
  CHECK(lines(run({"farey", "--n", "1", "--format", "csv"}).out) ==
        std::vector<std::string>{"index,p,q", "0,1,0", "1,1,1", "2,0,1"});
}

TEST_CASE("cf command") {
  CHECK(first_line(run({"cf", "--surd", "0,1,2", "--depth", "6"}).out) == "[1;2,2,2,2,2] (period: 2)");
  CHECK(first_line(run({"cf", "--named", "e_minus_1", "--depth", "9"}).out) == "[1;1,2,1,1,4,1,1,6]");
  const auto rat = lines(run({"cf", "--rational", "7/3"}).out);
  CHECK(rat == std::vector<std::string>{"[2;3]", "m,a_m,p_m,q_m,N_m", "0,2,2,1,2", "1,3,7,3,5"});
  CHECK(first_line(run({"cf", "--named", "pi_literal", "--depth", "5"}).out) == "[3;7,15,1,292]");
  CHECK(first_line(run({"cf", "--literal", "1.41421356237309504880@60", "--depth", "4"}).out) == "[1;2,2,2]");
  CHECK(first_line(run({"cf", "--construct", "thm42", "--depth", "4"}).out) == "[1;2,2,25]");
}

TEST_CASE("partition command") {
  const auto dioph = lines(run({"partition", "--kind", "dioph", "--surd", "0,1,2", "--N", "1", "--beta", "2"}).out);
  REQUIRE(dioph.size() == 2);
  CHECK(dioph[0] == "kind,N,beta,method,terms,lo,hi,midpoint");
  CHECK(dioph[1].find(",6.32842712474619") != std::string::npos);

  const auto knauf = lines(run({"partition", "--kind", "knauf", "--N", "1", "--beta", "3", "--form", "matrix"}).out);
  CHECK(knauf[1].find("1.1250000000000000e+00,1.1250000000000000e+00") != std::string::npos);

  auto values = [](const std::string& row) { return row.substr(row.find(",dfs,")); };
  const auto fk = lines(run({"partition", "--kind", "fk", "--x", "0", "--N", "5", "--beta", "3"}).out);
  const auto k5 = lines(run({"partition", "--kind", "knauf", "--N", "5", "--beta", "3"}).out);
  CHECK(values(fk[1]) == values(k5[1]));

  const auto range = lines(run({"partition", "--kind", "dioph", "--named", "golden", "--N", "1..6", "--beta", "3",
                                "--method", "series"})
                               .out);
  CHECK(range.size() == 7);

  CHECK(run({"partition", "--kind", "dioph", "--rational", "1/2", "--N", "2"}).code ==
        static_cast<int>(ExitCode::zero_form));
  CHECK(run({"partition", "--kind", "dioph", "--surd", "0,1,2", "--N", "27"}).code ==
        static_cast<int>(ExitCode::cap_exceeded));
}

TEST_CASE("free-energy command") {
  const auto golden = lines(run({"free-energy", "--named", "golden", "--beta", "3", "--N", "1..8"}).out);
  REQUIRE(golden.size() == 9);
  CHECK(golden[0] == "N_or_m,lower,upper,midpoint,scale_tag");
  CHECK(golden[8].substr(0, 2) == "8,");

  const auto e = lines(run({"free-energy", "--named", "e_minus_1", "--scale", "sqrtN_logN", "--m", "50"}).out);
  CHECK(e.back().find(",sqrtN_logN") != std::string::npos);

  const auto witness = lines(run({"free-energy", "--construct", "thm43", "--beta", "3"}).out);
  CHECK(witness.size() >= 5);
  CHECK(witness.back().find("diagnostic") != std::string::npos);
}

TEST_CASE("classify command") {
  const auto golden = nlohmann::json::parse(run({"classify", "--named", "golden", "--beta", "3", "--m-max", "120"}).out);
  CHECK(golden["one_free_energy"]["verdict"] == "supported");
  const auto thm43 = nlohmann::json::parse(run({"classify", "--construct", "thm43", "--beta", "3"}).out);
  CHECK(thm43["one_free_energy"]["verdict"] == "refuted");
  const auto e = nlohmann::json::parse(run({"classify", "--named", "e_minus_1", "--beta", "3"}).out);
  CHECK(e["fitted_scale"] == "sqrtN_logN");
}

TEST_CASE("parse errors and options") {
  CHECK(run({"cf", "--rational", "1/x"}).code == static_cast<int>(ExitCode::parse));
  CHECK(run({"cf", "--surd", "1,2"}).code == static_cast<int>(ExitCode::parse));
  CHECK(run({"cf", "--named", "tau"}).code == static_cast<int>(ExitCode::parse));
  CHECK(run({"cf", "--rational", "1/2", "--surd", "0,1,2"}).code == static_cast<int>(ExitCode::parse));
  CHECK(run({"bogus"}).code == static_cast<int>(ExitCode::parse));
  CHECK(run({"farey", "--n", "2", "--format", "xml"}).code == static_cast<int>(ExitCode::parse));
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("output file, config file and environment") {
  const std::string out_path = "cli_test_output.csv";
  const Run r = run({"--output", out_path, "farey", "--n", "1"});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(out_path);
  std::stringstream content;
  content << in.rdbuf();
  CHECK(content.str() == "1/0, 1/1, 0/1\n");
  std::remove(out_path.c_str());

  const std::string cfg = "cli_test.cfg";
  {
    std::ofstream f(cfg);
    f << "format=csv\n";
  }
  CHECK(first_line(run({"--config", cfg, "farey", "--n", "1"}).out) == "index,p,q");
  std::remove(cfg.c_str());

  setenv("DIOPH_MAX_PRECISION", "100", 1);
  const Run capped = run({"cf", "--literal", "1.4142135623730950488016887242096980785696@300", "--depth", "60"});
  setenv("DIOPH_MAX_PRECISION", "12", 1);
  const Run bad_env = run({"farey", "--n", "1"});
  unsetenv("DIOPH_MAX_PRECISION");
  CHECK(capped.code == static_cast<int>(ExitCode::precision_exhausted));
  CHECK(bad_env.code == static_cast<int>(ExitCode::parse));
}

TEST_CASE("same bytes for any thread count") {
  const std::vector<std::string> base{"free-energy", "--surd", "0,1,3", "--beta", "3", "--N", "1..16"};
  auto with_threads = [&base](const char* t) {
    std::vector<std::string> args{"--threads", t};
    args.insert(args.end(), base.begin(), base.end());
    return run(args).out;
  };
  const std::string one = with_threads("1");
  CHECK(one == with_threads("8"));
  CHECK(one == with_threads("1"));
}

TEST_CASE("index lists") {
  CHECK(cli::parse_index_list("3") == std::vector<unsigned>{3});
  CHECK(cli::parse_index_list("2..4") == std::vector<unsigned>{2, 3, 4});
  CHECK(cli::parse_index_list("1,5,9") == std::vector<unsigned>{1, 5, 9});
  CHECK_THROWS_AS(cli::parse_index_list("4..2"), ParseError);
  CHECK_THROWS_AS(cli::parse_index_list("a"), ParseError);
  CHECK(cli::parse_rational_value("2.5") == mpq_class(5, 2));
  CHECK(cli::parse_rational_value("5/2") == mpq_class(5, 2));
}
