/* SPDX-License-Identifier: Apache-2.0 */

#include <catch_amalgamated.hpp>

#include <sarsolve/normalize.hpp>
#include <sarsolve/oracle.hpp>
#include <sarsolve/predicates.hpp>

#include "random_atoms.hpp"

using namespace sar;
using sartest::random_atom;

namespace {

Assignment env(std::map<std::string, Int> ints, std::map<std::string, IntList> lists)
{
	Assignment a;
	a.ints = std::move(ints);
	a.lists = std::move(lists);
	return a;
}

// nth automaton on (cons(1, cons(t, Y)), cons(0, Y), X; x)
SarAtom fig_atom()
{
	return SarAtom(pred::m_nth(), {cons(ic(1), cons(iv("t"), lv("Y"))), cons(ic(0), lv("Y")), lv("X")},
	               {iv("x")});
}

std::vector<Assignment> sample_assignments(std::mt19937 &rng, const VarSet &vs, int count)
{
	auto lists = all_lists(3, -1, 1);
	std::vector<Assignment> out;
	for (int i = 0; i < count; ++i) {
		Assignment a;
		for (auto &v : vs.ints)
			a.ints[v] = Int(rng() % 3) - 1;
		for (auto &v : vs.lists)
			a.lists[v] = lists[rng() % lists.size()];
		out.push_back(a);
	}
	return out;
}

} // namespace

TEST_CASE("gap completion adds every shorter tail")
{
	SsNfa m(1, 0);
	auto q = m.add_state("q", true, true);
	m.add_transition(q, ge(l(0), c(0)), q);
	Normalizer nz;
	nz.load(SarAtom(m, {tail(tail(lv("X")))}, {}));
	nz.make_gap_free();
	auto a = nz.current();
	REQUIRE(a.lists.size() == 3);
	std::set<std::string> names;
	for (auto &t : a.lists)
		names.insert(to_string(t));
	CHECK(names == std::set<std::string>{"X", "tail(X)", "tail(tail(X))"});
	for (auto &w : all_lists(4, -1, 1)) {
		auto e = env({}, {{"X", w}});
		REQUIRE(eval_atom(a, e) == eval_atom(SarAtom(m, {tail(tail(lv("X")))}, {}), e));
	}

	Normalizer same;
	same.load(SarAtom(m, {lv("X")}, {}));
	same.make_gap_free();
	CHECK(same.current().lists.size() == 1);
}

TEST_CASE("integer arguments become distinct variables")
{
	SsNfa m(1, 2);
	auto q = m.add_state("q", true, true);
	m.add_transition(q, eq(l(0), x(0) + x(1)), q);
	SarAtom a(m, {lv("X")}, {iv("y") + 1, iv("y")});
	auto na = normalize(a);
	REQUIRE(na.ints == std::vector<std::string>{"y"});
	CHECK(is_normal(na));
	for (Int y = -2; y <= 2; ++y)
		for (auto &w : all_lists(3, -2, 3)) {
			auto e = env({{"y", y}}, {{"X", w}});
			REQUIRE(eval_atom(na.to_atom(), e) == eval_atom(a, e));
		}

	SarAtom plain(m, {lv("X")}, {iv("a"), iv("b")});
	CHECK(normalize(plain).ints == std::vector<std::string>{"a", "b"});
}

TEST_CASE("cons under cons is removed by unrolling")
{
	Normalizer nz;
	auto na = nz.run(fig_atom());
	CHECK(nz.unroll_depth() == 2);
	// two states per level for three levels, plus the tail state of the
	// gap completion
	CHECK(na.automaton.num_states() == 2 * 3 + 1);
	REQUIRE(na.lists.size() >= 3);
	CHECK(to_string(na.lists[0]) == "cons(1, Y)");
	CHECK(to_string(na.lists[1]) == "cons(0, tail(Y))");
	CHECK(to_string(na.lists[2]) == "X");
	CHECK(na.ints == std::vector<std::string>{"x", "t"});
	CHECK(is_normal(na));
	std::set<std::string> tracks;
	for (auto &t : na.lists)
		tracks.insert(to_string(t));
	CHECK(tracks.count("Y"));
	CHECK(tracks.count("tail(Y)"));

	// the second step reads t instead of the first track
	bool saw = false;
	for (auto &t : na.automaton.transitions())
		if (na.automaton.name(t.from) == "q0.1" && na.automaton.name(t.to) == "q0.2")
			saw = to_string(t.guard).find("x1 = (l1 + 1)") != std::string::npos;
	CHECK(saw);
}

TEST_CASE("strict mode leaves no cons at all")
{
	auto na = normalize(fig_atom(), NormalizeOptions{false});
	CHECK(is_normal(na, NormalizeOptions{false}));
	for (auto &t : na.lists)
		CHECK(t.kind != NormalListArg::Kind::Cons);
}

TEST_CASE("normalizing a normal atom changes nothing")
{
	auto a = SarAtom(pred::m_sorted(), {lv("X"), tail(lv("X"))}, {});
	auto na = normalize(a);
	CHECK(na.automaton.num_states() == 1);
	CHECK(na.lists.size() == 2);
	auto again = normalize(na.to_atom());
	CHECK(to_string(again) == to_string(na));
	CHECK(again.automaton.transitions().size() == na.automaton.transitions().size());
}

TEST_CASE("head terms are bound through an extra track")
{
	SsNfa m(1, 1);
	auto q = m.add_state("q", true, true);
	m.add_transition(q, gt(l(0), x(0)), q);
	SarAtom a(m, {tail(lv("X"))}, {head(lv("X"))});
	Normalizer nz;
	auto na = nz.run(a);
	CHECK(is_normal(na));
	for (auto &w : all_lists(4, -1, 1)) {
		auto e = env({}, {{"X", w}});
		REQUIRE(eval_atom(na.to_atom(), nz.forward(e)) == eval_atom(a, e));
	}
}

TEST_CASE("property: model translation across normalization")
{
	std::mt19937 rng(31337);
	int fwd = 0, bwd = 0;
	for (auto strict : {false, true}) {
		for (int it = 0; it < 150; ++it) {
			auto a = random_atom(rng);
			Normalizer nz(NormalizeOptions{!strict});
			auto na = nz.run(a);
			REQUIRE(is_normal(na, NormalizeOptions{!strict}));
			auto out = na.to_atom();
			INFO(to_string(a) << "  ~>  " << to_string(out));
			for (auto &e : sample_assignments(rng, a.vars(), 60))
				if (eval_atom(a, e)) {
					++fwd;
					REQUIRE(eval_atom(out, nz.forward(e)));
				}
			for (auto &e : sample_assignments(rng, out.vars(), 200))
				if (eval_atom(out, e)) {
					++bwd;
					REQUIRE(eval_atom(a, nz.backward(e)));
				}
		}
	}
	// both directions must actually be exercised
	CHECK(fwd > 500);
	CHECK(bwd > 500);
}

TEST_CASE("property: oracle verdicts agree before and after normalization")
{
	std::mt19937 rng(4242);
	int atoms = 0, decided = 0;
	while (atoms < 20) {
		auto a = random_atom(rng);
		std::size_t depth = 0;
		for (auto &t : a.lists) {
			std::size_t d = 0;
			for (auto u = t; u.kind() == ListTerm::Kind::Cons; u = u.rest())
				++d;
			depth = std::max(depth, d);
		}
		if (depth == 0 || depth > 2)
			continue;
		++atoms;
		Normalizer nz;
		auto na = nz.run(a);
		std::size_t shift = nz.log().size();
		OracleBounds small{2, -1, 1, 200000};
		OracleBounds wide{2 + shift, -1, 1, 200000};
		auto before = oracle_solve(a, small);
		auto after = oracle_solve(na.to_atom(), wide);
		INFO(to_string(a));
		if (before.sat) {
			++decided;
			CHECK((after.sat || !after.exhausted));
		}
		auto after_small = oracle_solve(na.to_atom(), small);
		auto before_wide = oracle_solve(a, wide);
		if (after_small.sat)
			CHECK((before_wide.sat || !before_wide.exhausted));
	}
	CHECK(decided > 0);
}
