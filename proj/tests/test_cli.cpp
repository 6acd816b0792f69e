#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "twiglearn/cli.hpp"
#include "twiglearn/matching.hpp"
#include "twiglearn/query.hpp"
#include "twiglearn/tree.hpp"

using namespace twiglearn;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(TWIGLEARN_TEST_DATA) + "/" + name; }

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("learn twig1 on the two library documents") {
  auto r = run({"learn", "--class", "twig1", data("library_collection.xml"), data("library_book.xml")});
  CHECK(r.code == cli::ok);
  CHECK(r.out == "library/*[author/marx]/title[.//*]\n");
  CHECK(r.err.empty());
  auto back = parse_query(lines(r.out).at(0), Arity::unary);
  CHECK(query_iso(back, parse_query("library/*[author/marx]/title[.//*]", Arity::unary)));
}

TEST_CASE("learn the Boolean classes from term fixtures") {
  auto conj = run({"learn", "--class", "conj0", data("offers.terms")});
  CHECK(conj.code == cli::ok);
  CHECK(lines(conj.out) == std::vector<std::string>{"offer//item/descr", "offer//item/for-sale"});

  auto path0 = run({"learn", "--class", "path0", data("offers.terms")});
  CHECK(path0.out == "offer//item/descr\n");
  auto heuristic = run({"learn", "--class", "path0", "--heuristic", "--pos", data("offers.terms"),
                        "--neg", data("offers_neg.terms")});
  CHECK(heuristic.code == cli::ok);
  CHECK(heuristic.out == "offer//item/for-sale\n");

  CHECK(run({"learn", "--class", "twig0", data("dblp.terms")}).out ==
        "dblp[*/url]/*[title]/author\n");
  CHECK(run({"learn", "--class", "path1", data("paths.terms")}).out == "r/*/b/c//*\n");
}

TEST_CASE("learn reports inconsistent samples with exit code 1") {
  auto r = run({"learn", "--class", "path0", "--pos", data("offers.terms"), "--neg",
                data("offers.terms")});
  CHECK(r.code == cli::no_result);
  CHECK(r.out.empty());
  CHECK(r.err.find("inconsistent") != std::string::npos);
}

TEST_CASE("json report") {
  auto r = run({"learn", "--class", "twig0", "--json", data("dblp.terms")});
  REQUIRE(r.code == cli::ok);
  auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["class"] == "twig0");
  CHECK(doc["outcome"] == "learned");
  CHECK(doc["queries"][0]["query"] == "dblp[*/url]/*[title]/author");
  CHECK(doc["queries"][0]["size"] == 6);
  REQUIRE(doc["examples"].size() == 2);
  for (const auto& ex : doc["examples"]) {
    CHECK(ex["sign"] == "+");
    CHECK(ex["accepted"] == true);
  }
}

TEST_CASE("eval lists node paths or verdicts") {
  auto r = run({"eval", "--query", "library/*[author/marx]/title", data("library.xml")});
  CHECK(r.code == cli::ok);
  CHECK(lines(r.out) ==
        std::vector<std::string>{"/library/collection[1]/title[1]", "/library/book[1]/title[1]"});

  // Every non-root node.
  auto all = run({"eval", "-q", "*//*", data("library_book.xml")});
  CHECK(lines(all.out).size() == parse_tree("library(book(title(manifesto),author(marx),author(engels)))").size() - 1);
  CHECK(all.out.find("/library/book[1]/author[2]/engels[1]\n") != std::string::npos);

  auto verdicts = run({"eval", "--boolean", "-q", "offer/list", data("offers.terms")});
  CHECK(lines(verdicts.out) == std::vector<std::string>{data("offers.terms") + "#1\tfalse",
                                                         data("offers.terms") + "#2\ttrue"});
  CHECK(run({"eval", "--boolean", "-q", "nothing", data("offers_neg.terms")}).code == cli::no_result);
}

TEST_CASE("virtual root") {
  auto r = run({"eval", "--virtual-root", "-q", "_root/library", data("library.xml")});
  CHECK(r.out == "/_root/library[1]\n");
}

TEST_CASE("subsume, charsample and refute") {
  CHECK(run({"subsume", "a//b", "a/c/b"}).out == "true\n");
  auto no = run({"subsume", "a/c/b", "a//b"});
  CHECK(no.out == "false\n");
  CHECK(no.code == cli::no_result);

  auto cs = run({"charsample", "--unary", "r//a/*"});
  CHECK(cs.out == "r(a(a0!))\nr(a2_0(a2_0(a2_0(a(a1_0!)))))\n");

  auto refuted = run({"oracle", "refute", "a/*", "a/b"});
  CHECK(refuted.code == cli::ok);
  auto witness = parse_tree(lines(refuted.out).at(0));
  CHECK(embeds(parse_query("a/*", Arity::boolean), witness));
  CHECK_FALSE(embeds(parse_query("a/b", Arity::boolean), witness));
  CHECK(run({"oracle", "refute", "a/b", "a//b", "--budget", "50"}).code == cli::no_result);
}

TEST_CASE("oracle enumeration and minimal queries") {
  auto r = run({"oracle", "enumerate", "--labels", "a", "--class", "anchored-path-boolean",
                "--min-nodes", "2", "--max-nodes", "2"});
  CHECK(lines(r.out).size() == 6);

  auto minimal = run({"oracle", "minimal", "--class", "anchored-path-boolean", "--max-nodes", "4",
                      data("offers.terms")});
  CHECK(minimal.code == cli::ok);
  auto found = lines(minimal.out);
  CHECK(std::find(found.begin(), found.end(), "offer//item/descr") != found.end());
  CHECK(std::is_sorted(found.begin(), found.end()));
}

TEST_CASE("reduction through the command line") {
  auto sample = run({"sat2sample", "--check", data("phi0.cnf")});
  CHECK(sample.code == cli::ok);
  CHECK(lines(sample.out).size() == 3);
  CHECK(lines(sample.out).back().starts_with("- c(d(x1,"));

  auto unsat = run({"sat2sample", data("unsat.cnf")});
  auto path = (std::filesystem::temp_directory_path() / "twiglearn_cli_unsat.terms").string();
  std::ofstream(path) << unsat.out;
  auto verdict = run({"consistency", "--reduction", path});
  CHECK(verdict.code == cli::no_result);
  CHECK(verdict.out == "inconsistent\n");
  auto with_star = run({"consistency", "--class", "twig-boolean", "--max-nodes", "4", path});
  CHECK(with_star.code == cli::ok);
}

TEST_CASE("usage errors exit with code 2 on the error stream") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {},
           {"learn", "--class", "bogus", data("offers.terms")},
           {"learn", "--class", "path0", data("missing.xml")},
           {"learn", "--class", "path0"},
           {"learn", "--class", "twig1", data("dblp.terms")},
           {"eval", "-q", "a[", data("offers.terms")},
           {"oracle", "enumerate", "--labels", "a", "--class", "nope"},
           {"sat2sample", data("offers.terms")},
           {"frobnicate"}}) {
    auto r = run(args);
    CHECK_MESSAGE(r.code == cli::usage_error, (args.empty() ? std::string() : args[0]));
    CHECK(r.out.empty());
    CHECK_FALSE(r.err.empty());
  }
  CHECK(run({"--help"}).code == cli::ok);
}

TEST_CASE("identical invocations give identical output") {
  std::vector<std::string> args{"learn", "--class", "twig1", "--json", data("library.xml")};
  auto first = run(args);
  for (int i = 0; i < 3; ++i) CHECK(run(args).out == first.out);
}
