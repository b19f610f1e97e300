/* SPDX-License-Identifier: Apache-2.0 */

// Symbolic synchronous NFAs over padded integer tuples.

#pragma once

#include "padded.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace sar {

using Letter = std::vector<PaddedValue>;
using SyncWord = std::vector<Letter>;

inline std::string to_string(const Letter &a)
{
	std::string s = "(";
	for (std::size_t i = 0; i < a.size(); ++i)
		s += (i ? "," : "") + a[i].str();
	return s + ")";
}

inline std::string to_string(const SyncWord &w)
{
	std::string s = "[";
	for (std::size_t i = 0; i < w.size(); ++i)
		s += (i ? "," : "") + to_string(w[i]);
	return s + "]";
}

using StateId = std::size_t;

struct Transition {
	StateId from;
	GuardFormula guard;
	StateId to;
};

class SsNfa {
public:
	SsNfa() = default;
	SsNfa(std::size_t k, std::size_t n) : k_(k), n_(n) {}

	std::size_t k() const { return k_; }
	std::size_t n() const { return n_; }
	std::size_t num_states() const { return names_.size(); }
	const std::string &name(StateId q) const { return names_.at(q); }
	const std::vector<std::string> &names() const { return names_; }
	const std::set<StateId> &initial() const { return initial_; }
	const std::set<StateId> &final() const { return final_; }
	const std::vector<Transition> &transitions() const { return transitions_; }

	bool is_initial(StateId q) const { return initial_.count(q) != 0; }
	bool is_final(StateId q) const { return final_.count(q) != 0; }

	StateId add_state(std::string name, bool initial = false, bool final = false)
	{
		StateId q = names_.size();
		names_.push_back(std::move(name));
		if (initial)
			initial_.insert(q);
		if (final)
			final_.insert(q);
		return q;
	}

	void set_initial(StateId q, bool on = true)
	{
		check_state(q);
		on ? (void)initial_.insert(q) : (void)initial_.erase(q);
	}
	void set_final(StateId q, bool on = true)
	{
		check_state(q);
		on ? (void)final_.insert(q) : (void)final_.erase(q);
	}

	// Structurally false guards are dropped on insertion.
	void add_transition(StateId from, GuardFormula guard, StateId to)
	{
		check_state(from);
		check_state(to);
		for (auto t : free_tracks(guard))
			if (t >= k_)
				throw ContractViolation("guard mentions l" + std::to_string(t) +
				                        " but automaton has " + std::to_string(k_) +
				                        " tracks");
		for (auto p : free_params(guard))
			if (p >= n_)
				throw ContractViolation("guard mentions x" + std::to_string(p) +
				                        " but automaton has " + std::to_string(n_) +
				                        " parameters");
		if (guard.is_false())
			return;
		transitions_.push_back({from, std::move(guard), to});
	}

	std::vector<std::vector<std::size_t>> outgoing() const
	{
		std::vector<std::vector<std::size_t>> out(num_states());
		for (std::size_t i = 0; i < transitions_.size(); ++i)
			out[transitions_[i].from].push_back(i);
		return out;
	}

private:
	void check_state(StateId q) const
	{
		if (q >= names_.size())
			throw ContractViolation("unknown state " + std::to_string(q));
	}

	std::size_t k_ = 0, n_ = 0;
	std::vector<std::string> names_;
	std::set<StateId> initial_, final_;
	std::vector<Transition> transitions_;
};

// ---------------------------------------------------------------------------
// Acceptance

inline std::set<StateId> step(const SsNfa &m, const std::set<StateId> &current,
                              const Letter &a, std::span<const Int> params)
{
	std::set<StateId> next;
	for (auto &t : m.transitions())
		if (current.count(t.from) && !next.count(t.to) && eval_guard(t.guard, a, params))
			next.insert(t.to);
	return next;
}

inline bool accepts(const SsNfa &m, std::span<const Int> params, const SyncWord &w)
{
	if (params.size() != m.n())
		throw ContractViolation("accepts: expected " + std::to_string(m.n()) +
		                        " parameters, got " + std::to_string(params.size()));
	for (auto &a : w)
		if (a.size() != m.k())
			throw ContractViolation("accepts: letter width " + std::to_string(a.size()) +
			                        " but automaton has " + std::to_string(m.k()) +
			                        " tracks");
	std::set<StateId> cur = m.initial();
	for (auto &a : w) {
		cur = step(m, cur, a, params);
		if (cur.empty())
			return false;
	}
	for (auto q : cur)
		if (m.is_final(q))
			return true;
	return false;
}

// ---------------------------------------------------------------------------
// Constructions

// Pair construction restricted to pairs reachable from the initial pairs.
inline SsNfa product(const SsNfa &a, const SsNfa &b)
{
	if (a.k() != b.k() || a.n() != b.n())
		throw ContractViolation("product: arity mismatch");
	SsNfa r(a.k(), a.n());
	std::map<std::pair<StateId, StateId>, StateId> ids;
	std::deque<std::pair<StateId, StateId>> todo;
	auto get = [&](StateId p, StateId q) {
		auto key = std::make_pair(p, q);
		auto it = ids.find(key);
		if (it != ids.end())
			return it->second;
		StateId s = r.add_state("(" + a.name(p) + "," + b.name(q) + ")", false,
		                        a.is_final(p) && b.is_final(q));
		ids.emplace(key, s);
		todo.push_back(key);
		return s;
	};
	for (auto p : a.initial())
		for (auto q : b.initial())
			r.set_initial(get(p, q));
	auto oa = a.outgoing(), ob = b.outgoing();
	while (!todo.empty()) {
		auto [p, q] = todo.front();
		todo.pop_front();
		StateId src = ids.at({p, q});
		for (auto i : oa[p])
			for (auto j : ob[q]) {
				auto &ta = a.transitions()[i];
				auto &tb = b.transitions()[j];
				auto g = ta.guard && tb.guard;
				if (g.is_false())
					continue;
				r.add_transition(src, g, get(ta.to, tb.to));
			}
	}
	return r;
}

// Union of languages by juxtaposing both automata.
inline SsNfa disjoint_union(const SsNfa &a, const SsNfa &b)
{
	if (a.k() != b.k() || a.n() != b.n())
		throw ContractViolation("union: arity mismatch");
	SsNfa r(a.k(), a.n());
	for (StateId q = 0; q < a.num_states(); ++q)
		r.add_state("L" + a.name(q), a.is_initial(q), a.is_final(q));
	std::size_t off = a.num_states();
	for (StateId q = 0; q < b.num_states(); ++q)
		r.add_state("R" + b.name(q), b.is_initial(q), b.is_final(q));
	for (auto &t : a.transitions())
		r.add_transition(t.from, t.guard, t.to);
	for (auto &t : b.transitions())
		r.add_transition(t.from + off, t.guard, t.to + off);
	return r;
}

// Subset construction. The outgoing guards of a subset are refined into
// blocks one transition at a time; a block only splits on a guard whose
// target it does not already contain, so the emitted guards are mutually
// exclusive minterms without enumerating all sign patterns.
inline SsNfa determinize(const SsNfa &m)
{
	SsNfa r(m.k(), m.n());
	std::map<std::set<StateId>, StateId> ids;
	std::deque<std::set<StateId>> todo;
	auto get = [&](const std::set<StateId> &s) {
		auto it = ids.find(s);
		if (it != ids.end())
			return it->second;
		std::string nm = "{";
		bool fin = false;
		for (auto q : s) {
			nm += (nm.size() > 1 ? "," : "") + m.name(q);
			fin = fin || m.is_final(q);
		}
		StateId id = r.add_state(nm + "}", false, fin);
		ids.emplace(s, id);
		todo.push_back(s);
		return id;
	};
	r.set_initial(get(m.initial()));
	auto out = m.outgoing();
	while (!todo.empty()) {
		auto s = todo.front();
		todo.pop_front();
		StateId src = ids.at(s);
		struct Block {
			GuardFormula guard;
			std::set<StateId> targets;
		};
		std::vector<Block> blocks{{GuardFormula::top(), {}}};
		for (auto q : s)
			for (auto i : out[q]) {
				auto &t = m.transitions()[i];
				std::vector<Block> next;
				for (auto &b : blocks) {
					if (b.targets.count(t.to)) {
						next.push_back(b);
						continue;
					}
					auto yes = b.guard && t.guard;
					auto no = b.guard && !t.guard;
					if (!yes.is_false()) {
						auto tg = b.targets;
						tg.insert(t.to);
						next.push_back({yes, std::move(tg)});
					}
					if (!no.is_false())
						next.push_back({no, b.targets});
				}
				blocks = std::move(next);
			}
		for (auto &b : blocks)
			if (!b.targets.empty())
				r.add_transition(src, b.guard, get(b.targets));
	}
	return r;
}

inline SsNfa complete(const SsNfa &m)
{
	SsNfa r(m.k(), m.n());
	for (StateId q = 0; q < m.num_states(); ++q)
		r.add_state(m.name(q), m.is_initial(q), m.is_final(q));
	for (auto &t : m.transitions())
		r.add_transition(t.from, t.guard, t.to);
	auto out = m.outgoing();
	std::vector<std::pair<StateId, GuardFormula>> missing;
	for (StateId q = 0; q < m.num_states(); ++q) {
		std::vector<GuardFormula> gs;
		for (auto i : out[q])
			gs.push_back(m.transitions()[i].guard);
		auto rest = !GuardFormula::disj(std::move(gs));
		if (!rest.is_false())
			missing.emplace_back(q, rest);
	}
	if (missing.empty() && !m.initial().empty())
		return r;
	StateId sink = r.add_state("sink");
	if (m.initial().empty())
		r.set_initial(sink);
	r.add_transition(sink, GuardFormula::top(), sink);
	for (auto &[q, g] : missing)
		r.add_transition(q, g, sink);
	return r;
}

inline SsNfa complement(const SsNfa &m)
{
	SsNfa d = complete(determinize(m));
	SsNfa r(d.k(), d.n());
	for (StateId q = 0; q < d.num_states(); ++q)
		r.add_state(d.name(q), d.is_initial(q), !d.is_final(q));
	for (auto &t : d.transitions())
		r.add_transition(t.from, t.guard, t.to);
	return r;
}

// Letter class for the set `padded` of exhausted tracks: exactly those
// tracks read padding.
inline GuardFormula pad_pattern(std::size_t k, unsigned long long padded)
{
	std::vector<GuardFormula> cs;
	for (std::size_t i = 0; i < k; ++i)
		cs.push_back((padded >> i) & 1 ? is_pad(l(i)) : !is_pad(l(i)));
	return GuardFormula::conj(std::move(cs));
}

// States are the sets of tracks already exhausted. Every state is final.
inline SsNfa convolution_automaton(std::size_t k, std::size_t n)
{
	if (k >= 20)
		throw ContractViolation("convolution_automaton: too many tracks");
	SsNfa r(k, n);
	const unsigned long long full = (1ull << k) - 1;
	for (unsigned long long s = 0; s <= full; ++s) {
		std::string nm = "P{";
		bool first = true;
		for (std::size_t i = 0; i < k; ++i)
			if ((s >> i) & 1) {
				nm += (first ? "" : ",") + std::to_string(i);
				first = false;
			}
		r.add_state(nm + "}", s == 0, true);
	}
	for (unsigned long long s = 0; s <= full; ++s)
		for (unsigned long long t = s; t <= full; ++t)
			if ((t & s) == s && t != full)
				r.add_transition(StateId(s), pad_pattern(k, t), StateId(t));
	return r;
}

inline SsNfa restrict_to_convolutions(const SsNfa &m)
{
	return product(m, convolution_automaton(m.k(), m.n()));
}

// Drops states that are unreachable from I or cannot reach F. Guards are
// not consulted, so the result accepts exactly the same language.
inline SsNfa trim(const SsNfa &m)
{
	std::size_t N = m.num_states();
	std::vector<char> fwd(N, 0), bwd(N, 0);
	std::deque<StateId> q;
	for (auto s : m.initial()) {
		fwd[s] = 1;
		q.push_back(s);
	}
	auto out = m.outgoing();
	while (!q.empty()) {
		auto s = q.front();
		q.pop_front();
		for (auto i : out[s]) {
			auto t = m.transitions()[i].to;
			if (!fwd[t]) {
				fwd[t] = 1;
				q.push_back(t);
			}
		}
	}
	std::vector<std::vector<StateId>> in(N);
	for (auto &t : m.transitions())
		in[t.to].push_back(t.from);
	for (auto s : m.final()) {
		bwd[s] = 1;
		q.push_back(s);
	}
	while (!q.empty()) {
		auto s = q.front();
		q.pop_front();
		for (auto p : in[s])
			if (!bwd[p]) {
				bwd[p] = 1;
				q.push_back(p);
			}
	}
	SsNfa r(m.k(), m.n());
	std::vector<StateId> id(N, StateId(-1));
	for (StateId s = 0; s < N; ++s)
		if (fwd[s] && bwd[s])
			id[s] = r.add_state(m.name(s), m.is_initial(s), m.is_final(s));
	if (r.num_states() == 0) {
		// keep one rejecting state so the automaton stays well-formed
		r.add_state("dead", true, false);
		return r;
	}
	for (auto &t : m.transitions())
		if (id[t.from] != StateId(-1) && id[t.to] != StateId(-1))
			r.add_transition(id[t.from], t.guard, id[t.to]);
	return r;
}

// ---------------------------------------------------------------------------
// Probe-relative structural checks

inline bool is_deterministic(const SsNfa &m, const ProbeSet &probe = {})
{
	if (m.initial().size() != 1)
		return false;
	auto out = m.outgoing();
	for (auto &ts : out)
		for (std::size_t a = 0; a < ts.size(); ++a)
			for (std::size_t b = a + 1; b < ts.size(); ++b) {
				auto &t1 = m.transitions()[ts[a]];
				auto &t2 = m.transitions()[ts[b]];
				if (t1.to != t2.to &&
				    probe_satisfiable(t1.guard && t2.guard, m.k(), m.n(), probe))
					return false;
			}
	return true;
}

inline bool is_complete_heuristic(const SsNfa &m, const ProbeSet &probe = {})
{
	auto out = m.outgoing();
	for (StateId q = 0; q < m.num_states(); ++q) {
		std::vector<GuardFormula> gs;
		for (auto i : out[q])
			gs.push_back(m.transitions()[i].guard);
		if (probe_satisfiable(!GuardFormula::disj(std::move(gs)), m.k(), m.n(), probe))
			return false;
	}
	return true;
}

// ---------------------------------------------------------------------------
// Brute-force enumeration. Explores ((hi-lo+2)^k)^max_len words in the
// worst case; prefixes with an empty state set are cut off.

inline std::vector<Letter> all_letters(std::size_t k, Int lo, Int hi)
{
	std::vector<PaddedValue> vals;
	for (Int v = lo; v <= hi; ++v)
		vals.emplace_back(v);
	vals.push_back(pad);
	std::vector<Letter> out;
	Letter cur(k);
	std::function<void(std::size_t)> rec = [&](std::size_t i) {
		if (i == k) {
			out.push_back(cur);
			return;
		}
		for (auto &v : vals) {
			cur[i] = v;
			rec(i + 1);
		}
	};
	rec(0);
	return out;
}

inline std::set<SyncWord> enumerate_accepted(const SsNfa &m, std::span<const Int> params,
                                             std::size_t max_len, Int lo, Int hi)
{
	if (params.size() != m.n())
		throw ContractViolation("enumerate_accepted: parameter count mismatch");
	std::set<SyncWord> result;
	auto letters = all_letters(m.k(), lo, hi);
	SyncWord w;
	std::function<void(const std::set<StateId> &)> rec = [&](const std::set<StateId> &cur) {
		for (auto q : cur)
			if (m.is_final(q)) {
				result.insert(w);
				break;
			}
		if (w.size() == max_len)
			return;
		for (auto &a : letters) {
			auto nxt = step(m, cur, a, params);
			if (nxt.empty())
				continue;
			w.push_back(a);
			rec(nxt);
			w.pop_back();
		}
	};
	rec(m.initial());
	return result;
}

// ---------------------------------------------------------------------------

inline std::string to_dot(const SsNfa &m)
{
	std::ostringstream os;
	os << "digraph ssnfa {\n  rankdir=LR;\n";
	for (StateId q = 0; q < m.num_states(); ++q) {
		os << "  s" << q << " [label=\"" << m.name(q) << "\""
		   << (m.is_final(q) ? ", shape=doublecircle" : ", shape=circle") << "];\n";
		if (m.is_initial(q))
			os << "  init" << q << " [shape=point];\n  init" << q << " -> s" << q << ";\n";
	}
	for (auto &t : m.transitions())
		os << "  s" << t.from << " -> s" << t.to << " [label=\"" << to_string(t.guard)
		   << "\"];\n";
	os << "}\n";
	return os.str();
}

inline std::string to_string(const SsNfa &m)
{
	std::ostringstream os;
	os << "ssnfa k=" << m.k() << " n=" << m.n() << "\n";
	for (StateId q = 0; q < m.num_states(); ++q)
		os << "  state " << m.name(q) << (m.is_initial(q) ? " initial" : "")
		   << (m.is_final(q) ? " final" : "") << "\n";
	for (auto &t : m.transitions())
		os << "  " << m.name(t.from) << " --[" << to_string(t.guard) << "]--> "
		   << m.name(t.to) << "\n";
	return os.str();
}

} // namespace sar
