/* SPDX-License-Identifier: Apache-2.0 */

#include <catch_amalgamated.hpp>

#include "support.hpp"

#include <sarsolve/io.hpp>

using namespace sar;
using io::json;

namespace {

std::string src(const std::string &rel) { return std::string(SARSOLVE_SOURCE_DIR) + "/" + rel; }

std::filesystem::path write_script(const std::string &name, const std::string &body)
{
	auto dir = std::filesystem::temp_directory_path() / "sarsolve-test-io";
	std::filesystem::create_directories(dir);
	auto p = dir / name;
	std::ofstream(p) << "#!/bin/sh\n" << body << "\n";
	std::filesystem::permissions(p, std::filesystem::perms::owner_all);
	return p;
}

} // namespace

TEST_CASE("guard JSON round trip")
{
	std::mt19937 rng(3);
	for (int i = 0; i < 200; ++i) {
		auto g = sartest::random_guard(rng, 3, 2, 3);
		auto back = io::parse_guard(io::guard_to_json(g));
		CHECK(to_string(back) == to_string(g));
	}
	CHECK_THROWS_AS(io::parse_guard(json::parse(R"({"~": [1, 2]})")), InputError);
	CHECK_THROWS_AS(io::parse_guard(json::parse(R"({"=": ["y0", 2]})")), InputError);
	CHECK_THROWS_AS(io::parse_guard(json::parse(R"({"=": [1]})")), InputError);
}

TEST_CASE("automaton JSON round trip")
{
	auto m = pred::m_nth();
	auto back = io::parse_automaton(io::automaton_to_json(m));
	CHECK(to_string(back) == to_string(m));
	auto j = io::automaton_to_json(m);
	j["transitions"][0]["to"] = "nowhere";
	CHECK_THROWS_AS(io::parse_automaton(j), InputError);
	j = io::automaton_to_json(m);
	j["transitions"][0]["guard"] = json::parse(R"({"=": ["l7", 0]})");
	CHECK_THROWS_AS(io::parse_automaton(j), InputError);
}

TEST_CASE("formulas and terms")
{
	io::Scope s;
	auto f = io::parse_formula(json::parse(R"({"and": [
		{"pred": "sorted", "args": [{"cons": [1, "X"]}]},
		{"<=": [{"head": "X"}, {"+": ["y", 2]}]},
		{"list!=": [{"tail": "X"}, {"list": [1, 2]}]},
		{"exists": [["Z", "list"]], "body": {"list=": ["Z", "X"]}}]})"), s);
	Assignment a;
	a.lists["X"] = {1, 3};
	a.ints["y"] = 1;
	CHECK(eval_formula(f, a));
	a.lists["X"] = {0};
	CHECK_FALSE(eval_formula(f, a));
	CHECK_THROWS_AS(io::parse_formula(json::parse(R"({"pred": "nope", "args": []})"), s), InputError);
	CHECK_THROWS_AS(io::parse_formula(json::parse(R"({"pred": "sorted", "args": []})"), s),
	                InputError);
	CHECK_THROWS_AS(io::parse_formula(json::parse(R"({"atom": "M", "lists": []})"), s), InputError);
	CHECK_THROWS_AS(io::parse_formula(json::parse(R"([1, 2])"), s), InputError);
}

TEST_CASE("user predicates bind their parameters")
{
	auto j = json::parse(R"({
		"version": 1,
		"predicates": {
			"nonneg": {"params": [["X", "list"]], "positive": {"pred": "le_all", "args": [0, "X"]}},
			"twice": {"params": [["X", "list"], ["v", "int"]],
			          "positive": {"and": [{"pred": "mem", "args": ["v", "X"]},
			                               {"pred": "nonneg", "args": ["X"]}]}}
		},
		"formula": {"pred": "twice", "args": [{"cons": ["a", "nil"]}, 3]},
		"expected": "SAT"})");
	auto in = io::parse_instance(j);
	CHECK(in.expected == Verdict::Sat);
	Assignment a;
	a.ints["a"] = 3;
	CHECK(eval_formula(in.formula, a));
	a.ints["a"] = -3;
	CHECK_FALSE(eval_formula(in.formula, a));
}

TEST_CASE("instances: version and schema checks")
{
	CHECK_THROWS_AS(io::load_instance(src("instances/examples/bad_version.json")), InputError);
	CHECK_THROWS_AS(io::parse_instance(json::parse(R"({"version": 1})")), InputError);
	CHECK_THROWS_AS(io::parse_instance(json::parse(R"({"version": 1, "formula": true, "expected": "MAYBE"})")),
	                InputError);
	CHECK_THROWS_AS(io::load_instance(src("instances/does-not-exist.json")), InputError);
	auto in = io::load_instance(src("instances/examples/nth.json"));
	CHECK(in.name == "nth");
}

TEST_CASE("every bundled instance loads")
{
	std::size_t n = 0;
	for (auto dir : {"instances/bench", "instances/examples"})
		for (auto &e : std::filesystem::directory_iterator(src(dir))) {
			auto name = e.path().filename().string();
			if (e.path().extension() != ".json" || name == "bad_version.json" ||
			    name.find("sorted_zero") == 0 || name.find("empty") == 0)
				continue;
			INFO(name);
			auto in = io::load_instance(e.path().string());
			CHECK_NOTHROW(translate(in.formula));
			++n;
		}
	CHECK(n >= 17);
}

TEST_CASE("clause files and models")
{
	auto sys = io::parse_list_chc(io::read_json_file(src("instances/examples/sorted_zero_clauses.json")));
	CHECK(sys.clauses.size() == 5);
	CHECK(sys.predicate_vars.size() == 2);
	CHECK_FALSE(sys.clauses[4].head.has_value());
	auto theta = io::parse_model(io::read_json_file(src("instances/examples/sorted_zero_model.json")));
	CHECK(theta.at("P")->name == "sorted");
	CandidateModel partial{{"P", theta.at("P")}};
	CHECK_THROWS_AS(check_candidate_model(sys, partial), InputError);
	CandidateModel wrong{{"P", pred::library().get("mem")}, {"Q", theta.at("Q")}};
	SolveOptions o;
	CHECK_THROWS_AS(check_candidate_model(sys, wrong, o), InputError);
}

TEST_CASE("backend configuration")
{
	auto bs = io::parse_backends(json::parse(
		R"({"backends": [{"name": "a", "command": "a {file}", "timeout": 5, "enabled": false}]})"));
	REQUIRE(bs.size() == 1);
	CHECK(bs[0].timeout == 5);
	CHECK_FALSE(bs[0].enabled);
	CHECK_FALSE(backend_available(bs[0]));
	CHECK_THROWS_AS(io::parse_backends(json::parse(R"([{"name": "a", "command": "a"}])")), InputError);
	CHECK(default_backends().front().command.find("{file}") != std::string::npos);
}

TEST_CASE("backend processes")
{
	auto ok = write_script("fake-unsat", "cat \"$1\" > /dev/null && echo unsat");
	BackendConfig b{"fake", ok.string() + " {file}", 10, true};
	CHECK(backend_available(b));
	auto r = run_backend(b, "(check-sat)\n");
	CHECK(r.verdict.verdict == Verdict::Sat);
	CHECK_FALSE(r.timed_out);

	auto slow = write_script("fake-slow", "sleep 5; echo sat");
	BackendConfig s{"slow", slow.string() + " {file}", 0.3, true};
	auto t = run_backend(s, "");
	CHECK(t.timed_out);
	CHECK(t.verdict.verdict == Verdict::Unknown);
	CHECK(t.seconds < 3);

	BackendConfig missing{"missing", "/nonexistent/solver {file}", 1, true};
	CHECK_FALSE(backend_available(missing));
	auto m = run_backend(missing, "");
	CHECK(m.verdict.verdict == Verdict::Unknown);
}

TEST_CASE("solve combines the oracle and a backend")
{
	auto in = io::load_instance(src("instances/examples/sorted_nil.json"));
	SolveOptions o;
	auto r = solve(in.formula, o);
	CHECK(r.verdict == Verdict::Sat);
	CHECK(r.source == "oracle");

	// a lying backend that claims UNSAT after the oracle found a model
	auto liar = write_script("fake-sat", "sleep 1; echo sat");
	o.backends = {{"liar", liar.string() + " {file}", 10, true}};
	auto c = solve(in.formula, o);
	CHECK(c.conflict);

	// oracle only never reports UNSAT
	auto u = io::load_instance(src("instances/bench/chc_sorted.json"));
	SolveOptions quick;
	quick.oracle = {3, -2, 2, 20000, 5};
	CHECK(solve(u.formula, quick).verdict == Verdict::Unknown);
}
