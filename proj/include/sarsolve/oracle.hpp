/* SPDX-License-Identifier: Apache-2.0 */

// Bounded witness search under the reference semantics. A hit is a real
// model; a miss only says that no model exists inside the bounds.

#pragma once

#include "listlang.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>

namespace sar {

struct OracleBounds {
	std::size_t max_len = 6;
	Int lo = -3, hi = 3;
	// Upper limit on formula evaluations; 0 means unlimited.
	std::size_t budget = 2'000'000;
	// Wall-clock limit in seconds; 0 means unlimited.
	double seconds = 0;
	// Polled during the search; setting it abandons the search.
	const std::atomic<bool> *stop = nullptr;
};

struct OracleResult {
	bool sat = false;
	// No witness and every candidate inside the bounds was examined.
	bool exhausted = false;
	Assignment witness;
	std::size_t evaluations = 0;
};

namespace detail {

// Values of the range ordered by magnitude, so small witnesses come first.
inline std::vector<Int> ordered_values(Int lo, Int hi)
{
	std::vector<Int> v;
	for (Int x = lo; x <= hi; ++x)
		v.push_back(x);
	std::stable_sort(v.begin(), v.end(), [](Int a, Int b) {
		return std::llabs(a) < std::llabs(b) || (std::llabs(a) == std::llabs(b) && a > b);
	});
	return v;
}

inline std::vector<IntList> lists_of_length(std::size_t len, const std::vector<Int> &vals)
{
	std::vector<IntList> out{{}};
	for (std::size_t i = 0; i < len; ++i) {
		std::vector<IntList> next;
		for (auto &w : out)
			for (auto v : vals) {
				auto u = w;
				u.push_back(v);
				next.push_back(std::move(u));
			}
		out = std::move(next);
	}
	return out;
}

} // namespace detail

// Searches assignments to the free variables of `f` together with the
// variables bound by its outer existentials. Candidates are explored by
// increasing maximal list length.
inline OracleResult oracle_solve(const SarFormula &f, const OracleBounds &b = {})
{
	auto p = prenex(f);
	auto fv = free_vars(f);
	std::vector<std::string> ints(fv.ints.begin(), fv.ints.end());
	std::vector<std::string> lists(fv.lists.begin(), fv.lists.end());
	for (auto &[name, sort] : p.exists)
		(sort == Sort::Int ? ints : lists).push_back(name);

	auto vals = detail::ordered_values(b.lo, b.hi);
	OracleResult res;
	auto start = std::chrono::steady_clock::now();
	auto interrupted = [&]() {
		if (res.evaluations % 1024)
			return false;
		if (b.stop && b.stop->load())
			return true;
		return b.seconds > 0 &&
		       std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() >
		               b.seconds;
	};
	std::vector<std::vector<IntList>> by_len;
	for (std::size_t len = 0; len <= b.max_len; ++len)
		by_len.push_back(detail::lists_of_length(len, vals));

	std::size_t max_level = lists.empty() ? 0 : b.max_len;
	for (std::size_t level = 0; level <= max_level; ++level) {
		// candidate lists of length <= level
		std::vector<const IntList *> pool;
		for (std::size_t len = 0; len <= level; ++len)
			for (auto &w : by_len[len])
				pool.push_back(&w);
		std::vector<std::size_t> li(lists.size(), 0), ii(ints.size(), 0);
		Assignment a;
		for (;;) {
			bool reaches = lists.empty();
			for (std::size_t i = 0; i < lists.size(); ++i) {
				a.lists[lists[i]] = *pool[li[i]];
				reaches = reaches || pool[li[i]]->size() == level;
			}
			if (reaches) {
				for (std::size_t i = 0; i < ints.size(); ++i)
					a.ints[ints[i]] = vals[ii[i]];
				if ((b.budget && res.evaluations >= b.budget) || interrupted())
					return res;
				++res.evaluations;
				if (eval_formula(p.matrix, a)) {
					res.sat = true;
					res.witness = a;
					return res;
				}
			}
			// odometer: integers change fastest
			std::size_t d = 0;
			bool done = true;
			for (; reaches && d < ints.size(); ++d) {
				if (++ii[d] < vals.size()) {
					done = false;
					break;
				}
				ii[d] = 0;
			}
			if (!done)
				continue;
			std::fill(ii.begin(), ii.end(), 0);
			for (d = 0; d < lists.size(); ++d) {
				if (++li[d] < pool.size()) {
					done = false;
					break;
				}
				li[d] = 0;
			}
			if (done)
				break;
		}
	}
	res.exhausted = true;
	return res;
}

inline OracleResult oracle_solve(const SarAtom &a, const OracleBounds &b = {})
{
	return oracle_solve(SarFormula::atom(a), b);
}

} // namespace sar
