#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "sdv/evaluator.hpp"
#include "test_util.hpp"

using namespace sdv;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(SDVERIFY_BIN) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string prog(const std::string& name) { return test::program_path(name); }

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

std::filesystem::path scratch(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("sdverify_test_" + name);
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("check flagship") {
    const auto r = run("check " + prog("sort.fp") + " --spec " + prog("ord.fp"));
    CHECK(r.code == 0);
    CHECK(first_line(r.out) == "VERIFIED");
    CHECK(r.out.find("diagram: ") != std::string::npos);
  }

  TEST_CASE("check buggy sort") {
    const auto r = run("check " + prog("buggy_sort.fp") + " --spec " + prog("ord.fp") + " --jobs 2");
    CHECK(r.code == 2);
    CHECK(first_line(r.out) == "REFUTED");
    CHECK(r.out.find("witness: ") != std::string::npos);
  }

  TEST_CASE("unknown verdict") {
    const auto r = run("check " + prog("short7.fp"));
    CHECK(r.code == 1);
    CHECK(first_line(r.out) == "UNKNOWN");
  }

  TEST_CASE("input errors exit 3") {
    CHECK(run("check /nonexistent.fp").code == 3);
    CHECK(run("check " + prog("sort.fp") + " --spec " + prog("ord.fp") + " --target \"'a'\"").code == 3);
    CHECK(run("check " + prog("sort.fp") + " --max-depth 0").code == 3);
    CHECK(run("check " + prog("sort.fp") + " --fuel -4").code == 3);
    CHECK(run("check " + prog("sort.fp") + " --alphabet aa").code == 3);
    CHECK(run("frobnicate").code == 3);
    CHECK(run("").code == 3);
    CHECK(run("eval " + prog("sort.fp") + " --input ab --input cd").code == 3);
    CHECK(run("compose " + prog("ord.fp") + " " + prog("ord.fp")).code == 3);
    const auto bad = scratch("bad.fp");
    std::ofstream(bad) << "fun f(x: S): S = y;\n";
    CHECK(run("diagram " + bad.string()).code == 3);
  }

  TEST_CASE("eval") {
    const auto r = run("eval " + prog("sort.fp") + " --input cab");
    CHECK(r.code == 0);
    CHECK(r.out == "abc\n");
    CHECK(run("eval " + prog("member.fp") + " --input b --input abc").out == "true\n");
    CHECK(run("eval " + prog("sort.fp") + " --input eps").out == "eps\n");
  }

  TEST_CASE("eval agrees with the library") {
    for (const auto& f : test::corpus_files()) {
      const auto p = test::load(f);
      if (p.main().params.size() != 1 || p.main().params[0].sort != Sort::Str) continue;
      CAPTURE(f);
      for (const char* in : {"bca", "aab", "c"}) {
        const auto lib = eval_program(p, {Value::of_str(in)});
        if (!lib.defined()) continue;
        CHECK(run("eval " + prog(f) + " --input " + in).out == to_string(lib.value) + "\n");
      }
    }
  }

  TEST_CASE("compose") {
    const auto r = run("compose " + prog("sort.fp") + " " + prog("ord.fp"));
    CHECK(r.code == 0);
    const auto p = parse_program(r.out);
    CHECK(p.main().result == Sort::Bool);
    CHECK(eval_program(p, {Value::of_str("cba")}).value == Value::of_bool(true));
  }

  TEST_CASE("diagram output is byte-stable") {
    const auto a = run("diagram " + prog("ord.fp"));
    const auto b = run("diagram " + prog("ord.fp"));
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("\"format\": \"sdverify-diagram\"") != std::string::npos);
    const auto dot1 = scratch("a.dot"), dot2 = scratch("b.dot"), json = scratch("a.json");
    CHECK(run("diagram " + prog("sort.fp") + " --dot " + dot1.string() + " --json " + json.string()).code == 0);
    CHECK(run("diagram " + prog("sort.fp") + " --dot " + dot2.string()).code == 0);
    CHECK(test::read_file(dot1.string()) == test::read_file(dot2.string()));
    CHECK(test::read_file(json.string()) == run("diagram " + prog("sort.fp")).out);
  }

  TEST_CASE("check writes the certificate") {
    const auto json = scratch("flagship.json");
    std::filesystem::remove(json);
    CHECK(run("check " + prog("sort.fp") + " --spec " + prog("ord.fp") + " --json " + json.string()).code == 0);
    CHECK(std::filesystem::exists(json));
  }
}
