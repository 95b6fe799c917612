#include <doctest.h>

#include <sstream>

#include "pronlex/cli.hpp"
#include "tempdir.hpp"

using namespace pronlex;
using testutil::slurp;
using testutil::TempDir;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string lexicon_of_size(std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s += "w" + std::to_string(i) + "\t1\tA\n";
  return s;
}

}  // namespace

TEST_CASE("usage errors") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"frobnicate"}).code == kExitUsage);
  CHECK(run({"stats"}).code == kExitUsage);
  CHECK(run({"stats", "--lex", "/nonexistent/file"}).code == kExitUsage);
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("align-dp") {
  TempDir dir;
  const auto dict = dir.write("dict", "doesn't\tD AH Z N T\nthe\tDH AH\ncat\tK AE T\n");
  const auto ref = dir.write("ref", "u1\tD AH Z N T\tdoesn't\nu2\tDH AH # K AE T\tthe cat\n");

  SUBCASE("variant pairs") {
    const auto hyp = dir.write("hyp", "u1\tD AH S N T\nu2\tD AH K AE T\n");
    const auto r = run({"align-dp", "--hyp", hyp, "--ref", ref, "--dict", dict, "--out",
                        dir.file("out")});
    CHECK(r.code == kExitOk);
    CHECK(slurp(dir.file("out")) ==
          "doesn't\t1\tD AH S N T\nthe\t1\tD AH\ncat\t1\tK AE T\n");
  }
  SUBCASE("empty hypothesis file") {
    const auto hyp = dir.write("hyp", "");
    const auto r = run({"align-dp", "--hyp", hyp, "--ref", ref, "--dict", dict, "--out",
                        dir.file("out")});
    CHECK(r.code == kExitOk);
    CHECK(slurp(dir.file("out")).empty());
  }
  SUBCASE("format error names file and line") {
    const auto hyp = dir.write("hyp", "u1\tD AH S N T\nbroken\n");
    const auto r = run({"align-dp", "--hyp", hyp, "--ref", ref, "--dict", dict, "--out",
                        dir.file("out")});
    CHECK(r.code == kExitFormat);
    CHECK(r.err.find(hyp + ":2: MalformedLine") != std::string::npos);
  }
  SUBCASE("constraint violation") {
    const auto bad_ref = dir.write("bad_ref", "u1\tDH AH # K AE T\tthe\n");
    const auto hyp = dir.write("hyp", "u1\tD AH K AE T\n");
    const auto r = run({"align-dp", "--hyp", hyp, "--ref", bad_ref, "--dict", dict, "--out",
                        dir.file("out")});
    CHECK(r.code == kExitConstraint);
    CHECK(r.err.find("SpanWordMismatch") != std::string::npos);
  }
  SUBCASE("invalid costs") {
    const auto hyp = dir.write("hyp", "u1\tD AH S N T\n");
    const auto r = run({"align-dp", "--hyp", hyp, "--ref", ref, "--dict", dict, "--out",
                        dir.file("out"), "--gap", "0"});
    CHECK(r.code == kExitUsage);
  }
}

TEST_CASE("align-attn") {
  TempDir dir;
  const auto dict = dir.write("dict", "the\tDH AH\ncat\tK AE T\n");
  const auto ref = dir.write("ref", "u1\tDH AH # K AE T\tthe cat\n");
  const auto attn = dir.write("attn",
                              "u1 5 5\nDH AH K AE T\nD AH K AE T\n"
                              "1 0 0 0 0\n0 1 0 0 0\n0 0 1 0 0\n0 0 0 1 0\n0 0 0 0 1\n");
  auto r = run({"align-attn", "--attn", attn, "--ref", ref, "--dict", dict, "--out",
                dir.file("out"), "--rejects", dir.file("rej"), "--bounds", dir.file("bounds")});
  CHECK(r.code == kExitOk);
  CHECK(slurp(dir.file("out")) == "the\t1\tD AH\ncat\t1\tK AE T\n");
  CHECK(slurp(dir.file("rej")).empty());
  CHECK(slurp(dir.file("bounds")) == "u1\t2\n");

  r = run({"align-attn", "--attn", attn, "--ref", ref, "--dict", dict, "--out", dir.file("out"),
           "--rejects", dir.file("rej"), "--threshold", "0"});
  CHECK(r.code == kExitOk);
  CHECK(slurp(dir.file("out")).empty());
  CHECK(slurp(dir.file("rej")) == "u1\t0.200000\n");

  r = run({"align-attn", "--attn", attn, "--ref", ref, "--dict", dict, "--out", dir.file("out"),
           "--mode", "sideways"});
  CHECK(r.code == kExitUsage);
}

TEST_CASE("build, merge and stats") {
  TempDir dir;
  const auto p1 = dir.write("p1", "doesn't\t1\tD AH S N T\ndoesn't\t1\tD AH S N T\n");
  const auto p2 = dir.write("p2", "doesn't\t1\tD AH T\n");
  auto r = run({"build", "--pairs", p1, p2, "--out", dir.file("lex")});
  CHECK(r.code == kExitOk);
  CHECK(slurp(dir.file("lex")) == "doesn't\t2\tD AH S N T\ndoesn't\t1\tD AH T\n");

  r = run({"build", "--pairs", p1, p2, "--out", dir.file("lex2"), "--min-count", "2"});
  CHECK(slurp(dir.file("lex2")) == "doesn't\t2\tD AH S N T\n");

  const auto dict = dir.write("dict", "doesn't\tD AH Z N T\n");
  r = run({"build", "--pairs", p2, "--out", dir.file("lex3"), "--dict", dict, "--max-variants",
           "1"});
  CHECK(r.code == kExitOk);
  CHECK(slurp(dir.file("lex3")) == "doesn't\t0\tD AH Z N T\n");

  r = run({"merge", "--in", dir.file("lex"), "--in", dir.file("lex2"), "--out", dir.file("m")});
  CHECK(r.code == kExitOk);
  CHECK(slurp(dir.file("m")) == "doesn't\t4\tD AH S N T\ndoesn't\t1\tD AH T\n");
  CHECK(r.out == "input_entries\t3\nmerged_entries\t2\nshared_entries\t1\n");

  const auto attn = dir.write("attn.lex", lexicon_of_size(35204));
  const auto rule = dir.write("rule.lex", lexicon_of_size(336882));
  r = run({"stats", "--lex", attn, "--baseline", rule});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("reduction_pct\t89.55\n") != std::string::npos);
  r = run({"stats", "--lex", attn, "--baseline", dir.write("empty.lex", "")});
  CHECK(r.out.find("reduction_pct\tundefined\n") != std::string::npos);
  r = run({"stats", "--lex", attn, "--text"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("entries") != std::string::npos);
}

TEST_CASE("synth, eval and eval-bounds") {
  TempDir dir;
  const auto dict = dir.write("dict", "doesn't\tD AH Z N T\nzoo\tZ UW\nis\tIH Z\n");
  const auto rules = dir.write("rules", "Z\tS\t1\n");
  const auto out_dir = dir.file("corpus");
  auto r = run({"synth", "--dict", dict, "--rules", rules, "--words", "2", "--utts", "10",
                "--seed", "4", "--out-dir", out_dir});
  REQUIRE(r.code == kExitOk);
  for (const char* f : {"hyp.txt", "ref.txt", "attn.txt", "truth.lex", "truth.bounds"})
    CHECK(std::filesystem::exists(std::filesystem::path(out_dir) / f));

  r = run({"align-attn", "--attn", out_dir + "/attn.txt", "--ref", out_dir + "/ref.txt", "--dict",
           dict, "--out", dir.file("pairs"), "--bounds", dir.file("bounds")});
  REQUIRE(r.code == kExitOk);
  r = run({"build", "--pairs", dir.file("pairs"), "--out", dir.file("built")});
  REQUIRE(r.code == kExitOk);
  r = run({"eval", "--built", dir.file("built"), "--truth", out_dir + "/truth.lex", "--dict",
           dict});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("recall\t1.000000\n") != std::string::npos);

  r = run({"eval-bounds", "--pred", dir.file("bounds"), "--truth", out_dir + "/truth.bounds"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("f1\t1.000000\n") != std::string::npos);

  const auto partial = dir.write("partial", "utt0000\t1\n");
  r = run({"eval-bounds", "--pred", partial, "--truth", out_dir + "/truth.bounds"});
  CHECK(r.code == kExitConstraint);

  r = run({"synth", "--dict", dict, "--rules", rules, "--words", "2", "--utts", "3", "--seed",
           "4", "--out-dir", dir.file("c2"), "--attn", "jitter:x"});
  CHECK(r.code == kExitUsage);
}
