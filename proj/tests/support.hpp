/* SPDX-License-Identifier: Apache-2.0 */
#pragma once

#include <sarsolve/ssnfa.hpp>

#include <random>

namespace sartest {

using namespace sar;

inline GuardTerm random_term(std::mt19937 &rng, std::size_t k, std::size_t n)
{
	switch (rng() % 4) {
	case 0: return l(rng() % k);
	case 1: return n ? x(rng() % n) : c(0);
	case 2: return c(Int(rng() % 5) - 2);
	default: return l(rng() % k) + c(Int(rng() % 3) - 1);
	}
}

inline GuardFormula random_guard(std::mt19937 &rng, std::size_t k, std::size_t n, int depth)
{
	switch (rng() % (depth > 0 ? 7 : 3)) {
	case 0: return GuardFormula::cmp(CmpOp(rng() % 6), random_term(rng, k, n),
	                                 random_term(rng, k, n));
	case 1: return is_pad(l(rng() % k));
	case 2: return rng() % 4 ? GuardFormula::top() : GuardFormula::bottom();
	case 3: return !random_guard(rng, k, n, depth - 1);
	case 4: return random_guard(rng, k, n, depth - 1) && random_guard(rng, k, n, depth - 1);
	default: return random_guard(rng, k, n, depth - 1) || random_guard(rng, k, n, depth - 1);
	}
}

inline SsNfa random_nfa(std::mt19937 &rng, std::size_t k, std::size_t n)
{
	SsNfa m(k, n);
	std::size_t states = 1 + rng() % 3;
	for (std::size_t i = 0; i < states; ++i)
		m.add_state("q" + std::to_string(i), i == 0 || rng() % 5 == 0, rng() % 2);
	std::size_t edges = rng() % (2 * states + 2);
	for (std::size_t e = 0; e < edges; ++e)
		m.add_transition(rng() % states, random_guard(rng, k, n, 2), rng() % states);
	return m;
}

// Independent definition: each track pads a suffix and no letter is all padding.
inline bool is_convolution(const SyncWord &w, std::size_t k)
{
	std::vector<bool> done(k, false);
	for (auto &a : w) {
		bool all = true;
		for (std::size_t i = 0; i < k; ++i) {
			if (a[i].is_pad())
				done[i] = true;
			else if (done[i])
				return false;
			all = all && a[i].is_pad();
		}
		if (all)
			return false;
	}
	return true;
}

inline std::vector<SyncWord> all_words(std::size_t k, std::size_t max_len, Int lo, Int hi)
{
	auto letters = all_letters(k, lo, hi);
	std::vector<SyncWord> out{{}};
	std::size_t begin = 0;
	for (std::size_t len = 1; len <= max_len; ++len) {
		std::size_t end = out.size();
		for (std::size_t i = begin; i < end; ++i)
			for (auto &a : letters) {
				auto w = out[i];
				w.push_back(a);
				out.push_back(std::move(w));
			}
		begin = end;
	}
	return out;
}

} // namespace sartest
