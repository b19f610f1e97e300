/* SPDX-License-Identifier: Apache-2.0 */

#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace sar;
using namespace sartest;

namespace {

SsNfa sorted_nfa()
{
	SsNfa m(2, 0);
	auto q = m.add_state("q", true, true);
	m.add_transition(q, !gt(l(0), l(1)), q);
	return m;
}

SyncWord word(std::initializer_list<std::initializer_list<PaddedValue>> ls)
{
	SyncWord w;
	for (auto &a : ls)
		w.emplace_back(a);
	return w;
}

const std::vector<Int> none{};

} // namespace

TEST_CASE("sortedness automaton on convolutions")
{
	auto m = sorted_nfa();
	// tracks: X and tail X
	CHECK(accepts(m, none, word({{1, 2}, {2, 3}, {3, pad}})));
	CHECK_FALSE(accepts(m, none, word({{1, 3}, {3, 2}, {2, pad}})));
	CHECK(accepts(m, none, {}));
	CHECK_THROWS_AS(accepts(m, std::vector<Int>{1}, {}), ContractViolation);
}

TEST_CASE("empty word accepted iff an initial state is final")
{
	SsNfa m(1, 0);
	m.add_state("a", true, false);
	m.add_state("b", false, true);
	m.add_transition(0, GuardFormula::top(), 1);
	CHECK_FALSE(accepts(m, none, {}));
	m.set_final(0);
	CHECK(accepts(m, none, {}));
}

TEST_CASE("add_transition rejects out-of-range variables")
{
	SsNfa m(1, 0);
	m.add_state("a", true, true);
	CHECK_THROWS_AS(m.add_transition(0, eq(l(1), c(0)), 0), ContractViolation);
	CHECK_THROWS_AS(m.add_transition(0, eq(x(0), c(0)), 0), ContractViolation);
	CHECK_THROWS_AS(m.add_transition(0, GuardFormula::top(), 3), ContractViolation);
	m.add_transition(0, GuardFormula::bottom(), 0);
	CHECK(m.transitions().empty());
}

TEST_CASE("convolution automaton recognises exactly the convolutions")
{
	for (std::size_t k = 1; k <= 3; ++k) {
		auto conv = convolution_automaton(k, 0);
		CHECK(conv.num_states() == (1u << k));
		for (auto &w : all_words(k, k == 3 ? 2 : 3, 0, 1))
			REQUIRE(accepts(conv, none, w) == is_convolution(w, k));
	}
}

TEST_CASE("property: boolean operations agree with acceptance on short words")
{
	std::mt19937 rng(7);
	const std::size_t k = 2, n = 1;
	auto words = all_words(k, 3, -1, 1);
	for (int it = 0; it < 60; ++it) {
		auto a = random_nfa(rng, k, n);
		auto b = random_nfa(rng, k, n);
		auto ab = product(a, b);
		auto u = disjoint_union(a, b);
		auto d = determinize(a);
		auto cm = complement(a);
		auto tr = trim(a);
		auto cp = complete(a);
		auto rs = restrict_to_convolutions(a);
		REQUIRE(is_deterministic(d));
		REQUIRE(is_complete_heuristic(cp));
		for (Int p = -1; p <= 1; ++p) {
			std::vector<Int> ps{p};
			for (auto &w : words) {
				bool va = accepts(a, ps, w), vb = accepts(b, ps, w);
				REQUIRE(accepts(ab, ps, w) == (va && vb));
				REQUIRE(accepts(u, ps, w) == (va || vb));
				REQUIRE(accepts(d, ps, w) == va);
				REQUIRE(accepts(tr, ps, w) == va);
				REQUIRE(accepts(cp, ps, w) == va);
				REQUIRE(accepts(rs, ps, w) == (va && is_convolution(w, k)));
				if (is_convolution(w, k))
					REQUIRE(accepts(cm, ps, w) == !va);
			}
		}
	}
}

TEST_CASE("enumerate_accepted matches brute force")
{
	std::mt19937 rng(99);
	for (int it = 0; it < 20; ++it) {
		auto a = random_nfa(rng, 1, 1);
		std::vector<Int> ps{0};
		auto got = enumerate_accepted(a, ps, 3, -1, 1);
		std::set<SyncWord> want;
		for (auto &w : all_words(1, 3, -1, 1))
			if (accepts(a, ps, w))
				want.insert(w);
		REQUIRE(got == want);
	}
}

TEST_CASE("rendering")
{
	auto m = sorted_nfa();
	auto dot = to_dot(m);
	CHECK(dot.find("digraph") != std::string::npos);
	CHECK(to_string(m).find("!(l0 > l1)") != std::string::npos);
}
