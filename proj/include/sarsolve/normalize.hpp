/* SPDX-License-Identifier: Apache-2.0 */

// Rewriting a SAR atom into normal form: list arguments are nil or
// tail^m(X) and gap-free, integer arguments are distinct variables.
//
// By default the outermost cons of an argument is kept when its rest is
// already nil or tail^m(X). The CHC translation handles such a "head-cons"
// track directly by fixing its first letter, which avoids unrolling the
// automaton for the common cons(i, Y) counter pattern. Strict mode removes
// every cons.

#pragma once

#include "listlang.hpp"

namespace sar {

struct NormalizeOptions {
	bool keep_outer_cons = true;
};

struct NormalListArg {
	enum class Kind { Nil, Tail, Cons };
	Kind kind = Kind::Nil;
	std::string var;              // Tail, or Cons with a tail^depth(var) rest
	std::size_t depth = 0;
	std::optional<IntTerm> head;  // Cons only

	bool cons_of_nil() const { return kind == Kind::Cons && var.empty(); }

	ListTerm term() const
	{
		ListTerm rest = var.empty() ? nil() : ListTerm::tail_n(lv(var), depth);
		return kind == Kind::Cons ? cons(*head, rest) : rest;
	}
};

inline std::string to_string(const NormalListArg &a) { return to_string(a.term()); }

struct NormalAtom {
	SsNfa automaton;
	std::vector<NormalListArg> lists;
	std::vector<std::string> ints;

	SarAtom to_atom() const
	{
		std::vector<ListTerm> ls;
		for (auto &a : lists)
			ls.push_back(a.term());
		std::vector<IntTerm> is;
		for (auto &v : ints)
			is.push_back(iv(v));
		return SarAtom(automaton, ls, is);
	}

	// Index of the track holding tail^m(X), if any.
	std::optional<std::size_t> find_tail(const std::string &x, std::size_t m) const
	{
		for (std::size_t i = 0; i < lists.size(); ++i)
			if (lists[i].kind == NormalListArg::Kind::Tail && lists[i].var == x &&
			    lists[i].depth == m)
				return i;
		return std::nullopt;
	}
};

inline std::string to_string(const NormalAtom &a) { return to_string(a.to_atom()); }

// ---------------------------------------------------------------------------
// Term helpers

inline ListTerm simplify(const ListTerm &t);

// head(cons(s, T)) = s, head(nil) = 0
inline IntTerm simplify(const IntTerm &t)
{
	using K = IntTerm::Kind;
	switch (t.kind()) {
	case K::Var:
	case K::Const: return t;
	case K::Add: return simplify(t.lhs()) + simplify(t.rhs());
	case K::Sub: return simplify(t.lhs()) - simplify(t.rhs());
	case K::MulConst: return t.value() * simplify(t.lhs());
	case K::Head: {
		auto l = simplify(t.list());
		if (l.kind() == ListTerm::Kind::Nil)
			return ic(0);
		if (l.kind() == ListTerm::Kind::Cons)
			return l.head();
		return head(l);
	}
	}
	return t;
}

// tail(cons(s, T)) = T, tail(nil) = nil
inline ListTerm simplify(const ListTerm &t)
{
	using K = ListTerm::Kind;
	switch (t.kind()) {
	case K::Nil:
	case K::Var: return t;
	case K::Cons: return cons(simplify(t.head()), simplify(t.rest()));
	case K::Tail: {
		auto r = simplify(t.rest());
		if (r.kind() == K::Nil)
			return r;
		if (r.kind() == K::Cons)
			return r.rest();
		return tail(r);
	}
	}
	return t;
}

// T = cons(s_0, ..., cons(s_{d-1}, R)) with R = nil or tail^r(X).
struct ConsChain {
	std::vector<IntTerm> heads;
	std::optional<std::pair<std::string, std::size_t>> rest; // empty: nil
};

inline ConsChain decompose(const ListTerm &t)
{
	ConsChain c;
	ListTerm cur = t;
	while (cur.kind() == ListTerm::Kind::Cons) {
		c.heads.push_back(cur.head());
		cur = cur.rest();
	}
	if (cur.kind() == ListTerm::Kind::Nil)
		return c;
	auto tv = as_tail_of_var(cur);
	if (!tv)
		throw ContractViolation("list term not simplified: " + to_string(t));
	c.rest = *tv;
	return c;
}

inline ListTerm compose(const std::vector<IntTerm> &heads, std::size_t count, ListTerm rest)
{
	for (std::size_t i = count; i-- > 0;)
		rest = cons(heads[i], rest);
	return rest;
}

// T[tail X / X]
inline ListTerm shift_var(const ListTerm &t, const std::string &x)
{
	using K = ListTerm::Kind;
	switch (t.kind()) {
	case K::Nil: return t;
	case K::Var: return t.name() == x ? tail(t) : t;
	case K::Cons: return cons(t.head(), shift_var(t.rest(), x));
	case K::Tail: return tail(shift_var(t.rest(), x));
	}
	return t;
}

inline void collect_heads(const IntTerm &t, std::vector<ListTerm> &out)
{
	using K = IntTerm::Kind;
	switch (t.kind()) {
	case K::Head: detail::index_of(out, t.list()); break;
	case K::Add:
	case K::Sub:
		collect_heads(t.lhs(), out);
		collect_heads(t.rhs(), out);
		break;
	case K::MulConst: collect_heads(t.lhs(), out); break;
	default: break;
	}
}

inline IntTerm replace_heads(const IntTerm &t, const std::map<std::string, std::string> &names)
{
	using K = IntTerm::Kind;
	switch (t.kind()) {
	case K::Head: return iv(names.at(to_string(t.list())));
	case K::Add: return replace_heads(t.lhs(), names) + replace_heads(t.rhs(), names);
	case K::Sub: return replace_heads(t.lhs(), names) - replace_heads(t.rhs(), names);
	case K::MulConst: return t.value() * replace_heads(t.lhs(), names);
	default: return t;
	}
}

inline ListTerm replace_heads(const ListTerm &t, const std::map<std::string, std::string> &names)
{
	if (t.kind() == ListTerm::Kind::Cons)
		return cons(replace_heads(t.head(), names), replace_heads(t.rest(), names));
	return t;
}

// Linear integer term as a guard term; variable v becomes param index_of(v).
inline GuardTerm linearize(const IntTerm &t, const std::vector<std::string> &params)
{
	using K = IntTerm::Kind;
	switch (t.kind()) {
	case K::Var: {
		auto it = std::find(params.begin(), params.end(), t.name());
		if (it == params.end())
			throw ContractViolation("linearize: unknown variable " + t.name());
		return x(std::size_t(it - params.begin()));
	}
	case K::Const: return c(t.value());
	case K::Add: return linearize(t.lhs(), params) + linearize(t.rhs(), params);
	case K::Sub: return linearize(t.lhs(), params) - linearize(t.rhs(), params);
	case K::MulConst: return t.value() * linearize(t.lhs(), params);
	case K::Head: throw ContractViolation("linearize: head term left in " + to_string(t));
	}
	return c(0);
}

inline bool contains_list_var(const IntTerm &t)
{
	VarSet vs;
	collect_vars(t, vs);
	return !vs.lists.empty();
}

// Rebuilds m with k tracks and n params (k, n at least the old ones) and
// each guard passed through `g(transition, source state)`.
inline SsNfa rebuild(const SsNfa &m, std::size_t k, std::size_t n,
                     const std::function<GuardFormula(const Transition &)> &g)
{
	SsNfa r(k, n);
	for (StateId q = 0; q < m.num_states(); ++q)
		r.add_state(m.name(q), m.is_initial(q), m.is_final(q));
	for (auto &t : m.transitions())
		r.add_transition(t.from, g(t), t.to);
	return r;
}

// ---------------------------------------------------------------------------
// The pipeline works on a mutable atom and logs every change of variables,
// so that models can be carried across in both directions.

struct RewriteStep {
	enum class Kind { Head, Nil, Link, Shift };
	Kind kind;
	std::string var;      // introduced (Head, Nil, Link) or shifted (Shift) variable
	ListTerm list;        // Head: h = head(list); Link: var = list
	IntTerm value;        // Nil: var = [value]
};

class Normalizer {
public:
	explicit Normalizer(NormalizeOptions opts = {}) : opts_(opts) {}

	NormalAtom run(const SarAtom &a)
	{
		load(a);
		flatten_heads();
		eliminate_cons();
		make_gap_free();
		merge_duplicate_tracks();
		eliminate_integer_terms();
		return finish();
	}

	// Individual stages, exposed for testing.
	void load(const SarAtom &a)
	{
		a.check();
		m_ = a.nfa();
		lists_.clear();
		ints_.clear();
		for (auto &t : a.lists)
			lists_.push_back(simplify(t));
		for (auto &t : a.ints)
			ints_.push_back(simplify(t));
		levels_.assign(m_.num_states(), 0);
		unroll_depth_ = 0;
		log_.clear();
	}

	// Every head(T) becomes a fresh integer h tied to T by h = head(T).
	void flatten_heads()
	{
		std::vector<ListTerm> hs;
		for (auto &t : ints_)
			collect_heads(t, hs);
		for (auto &t : lists_)
			for (auto &s : decompose(t).heads)
				collect_heads(s, hs);
		if (hs.empty())
			return;
		std::map<std::string, std::string> names;
		std::vector<SarAtom> parts;
		for (auto &h : hs) {
			auto v = fresh("h");
			names[to_string(h)] = v;
			log_.push_back({RewriteStep::Kind::Head, v, h, ic(0)});
			parts.push_back(lift_arith(CmpOp::Eq, iv(v), head(h)));
		}
		for (auto &t : ints_)
			t = replace_heads(t, names);
		for (auto &t : lists_)
			t = replace_heads(t, names);
		parts.insert(parts.begin(), SarAtom(m_, lists_, ints_));
		auto r = delta0_and(parts);
		m_ = r.nfa();
		lists_ = r.lists;
		ints_ = r.ints;
		levels_.assign(m_.num_states(), 0);
	}

	void eliminate_cons()
	{
		const std::size_t keep = opts_.keep_outer_cons ? 1 : 0;
		std::size_t l = 0;
		for (auto &t : lists_) {
			auto d = decompose(t).heads.size();
			if (d > keep)
				l = std::max(l, d);
		}
		if (l == 0)
			return;
		unroll(l);
		for (std::size_t i = 0; i < lists_.size(); ++i)
			while (decompose(lists_[i]).heads.size() > keep)
				eliminate_innermost(i);
	}

	void make_gap_free()
	{
		std::map<std::string, std::size_t> need;
		for (auto &t : lists_) {
			auto c = decompose(t);
			if (c.rest)
				need[c.rest->first] = std::max(need[c.rest->first], c.rest->second);
		}
		std::size_t k = lists_.size();
		for (auto &[x, depth] : need)
			for (std::size_t m = 0; m <= depth; ++m)
				detail::index_of(lists_, ListTerm::tail_n(lv(x), m));
		if (lists_.size() == k)
			return;
		std::vector<std::size_t> tm(k), pm(m_.n());
		for (std::size_t i = 0; i < k; ++i)
			tm[i] = i;
		for (std::size_t j = 0; j < m_.n(); ++j)
			pm[j] = j;
		m_ = embed(m_, lists_.size(), m_.n(), tm, pm);
	}

	// Shifting can make two arguments syntactically equal; they denote the
	// same list, so their tracks are merged.
	void merge_duplicate_tracks()
	{
		std::vector<ListTerm> uniq;
		std::vector<std::size_t> to;
		for (auto &t : lists_)
			to.push_back(detail::index_of(uniq, t));
		if (uniq.size() == lists_.size())
			return;
		m_ = rebuild(m_, uniq.size(), m_.n(), [&](const Transition &t) {
			return substitute(
				t.guard, [&](std::size_t i) { return l(to[i]); },
				[](std::size_t j) { return x(j); });
		});
		lists_ = std::move(uniq);
	}

	void eliminate_integer_terms()
	{
		std::vector<std::string> vars;
		bool identity = true;
		for (auto &t : ints_) {
			if (t.kind() != IntTerm::Kind::Var ||
			    std::find(vars.begin(), vars.end(), t.name()) != vars.end())
				identity = false;
			VarSet vs;
			collect_vars(t, vs);
			if (!vs.lists.empty())
				throw ContractViolation("integer argument still mentions a list: " +
				                        to_string(t));
			// keep first-occurrence order for reproducible output
			std::vector<std::string> order;
			order_vars(t, order);
			for (auto &v : order)
				if (std::find(vars.begin(), vars.end(), v) == vars.end())
					vars.push_back(v);
		}
		if (identity)
			return;
		std::vector<GuardTerm> image;
		for (auto &t : ints_)
			image.push_back(linearize(t, vars));
		m_ = rebuild(m_, m_.k(), vars.size(), [&](const Transition &t) {
			return substitute(
				t.guard, [](std::size_t i) { return l(i); },
				[&](std::size_t j) { return image.at(j); });
		});
		ints_.clear();
		for (auto &v : vars)
			ints_.push_back(iv(v));
	}

	NormalAtom finish() const
	{
		NormalAtom out;
		out.automaton = m_;
		for (auto &t : lists_) {
			auto c = decompose(t);
			NormalListArg a;
			if (c.heads.size() > 1 || (c.heads.size() == 1 && !opts_.keep_outer_cons))
				throw ContractViolation("cons left after elimination: " + to_string(t));
			if (c.rest) {
				a.var = c.rest->first;
				a.depth = c.rest->second;
			}
			if (!c.heads.empty()) {
				a.kind = NormalListArg::Kind::Cons;
				a.head = c.heads[0];
			} else {
				a.kind = c.rest ? NormalListArg::Kind::Tail : NormalListArg::Kind::Nil;
			}
			out.lists.push_back(std::move(a));
		}
		for (auto &t : ints_)
			out.ints.push_back(t.name());
		return out;
	}

	SarAtom current() const { return SarAtom(m_, lists_, ints_); }
	const std::vector<RewriteStep> &log() const { return log_; }

	// Model of the input atom -> model of the output atom.
	Assignment forward(Assignment a) const
	{
		for (auto &s : log_) {
			switch (s.kind) {
			case RewriteStep::Kind::Head: a.ints[s.var] = eval_int_term(head(s.list), a); break;
			case RewriteStep::Kind::Nil: a.lists[s.var] = {eval_int_term(s.value, a)}; break;
			case RewriteStep::Kind::Link: a.lists[s.var] = eval_list_term(s.list, a); break;
			case RewriteStep::Kind::Shift: {
				auto &w = a.lists.at(s.var);
				w.insert(w.begin(), 0);
				break;
			}
			}
		}
		return a;
	}

	// Model of the output atom -> model of the input atom.
	Assignment backward(Assignment a) const
	{
		for (auto it = log_.rbegin(); it != log_.rend(); ++it) {
			switch (it->kind) {
			case RewriteStep::Kind::Head: a.ints.erase(it->var); break;
			case RewriteStep::Kind::Nil:
			case RewriteStep::Kind::Link: a.lists.erase(it->var); break;
			case RewriteStep::Kind::Shift: {
				auto &w = a.lists.at(it->var);
				if (!w.empty())
					w.erase(w.begin());
				break;
			}
			}
		}
		return a;
	}
	std::size_t unroll_depth() const { return unroll_depth_; }

private:
	NormalizeOptions opts_;
	SsNfa m_;
	std::vector<ListTerm> lists_;
	std::vector<IntTerm> ints_;
	std::vector<std::size_t> levels_;
	std::size_t unroll_depth_ = 0;
	int counter_ = 0;
	std::vector<RewriteStep> log_;

	// `_.` never occurs in user or prenex-generated names.
	std::string fresh(const std::string &base) { return "_." + base + std::to_string(counter_++); }

	static void order_vars(const IntTerm &t, std::vector<std::string> &out)
	{
		using K = IntTerm::Kind;
		switch (t.kind()) {
		case K::Var:
			if (std::find(out.begin(), out.end(), t.name()) == out.end())
				out.push_back(t.name());
			break;
		case K::Add:
		case K::Sub:
			order_vars(t.lhs(), out);
			order_vars(t.rhs(), out);
			break;
		case K::MulConst: order_vars(t.lhs(), out); break;
		default: break;
		}
	}

	// States Q x {0..l}: level j < l steps to level j+1, level l loops. Only
	// level-l states are final, so every accepted word has length >= l.
	void unroll(std::size_t l)
	{
		SsNfa r(m_.k(), m_.n());
		std::size_t N = m_.num_states();
		levels_.clear();
		for (std::size_t j = 0; j <= l; ++j)
			for (StateId q = 0; q < N; ++q) {
				r.add_state(m_.name(q) + "." + std::to_string(j), j == 0 && m_.is_initial(q),
				            j == l && m_.is_final(q));
				levels_.push_back(j);
			}
		for (auto &t : m_.transitions())
			for (std::size_t j = 0; j <= l; ++j)
				r.add_transition(j * N + t.from, t.guard, std::min(j + 1, l) * N + t.to);
		m_ = std::move(r);
		unroll_depth_ = l;
	}

	void eliminate_innermost(std::size_t i)
	{
		auto c = decompose(lists_[i]);
		const std::size_t p = c.heads.size() - 1;
		const std::size_t y = m_.n();
		ints_.push_back(c.heads[p]);

		if (!c.rest) {
			// cons(s_0..s_{p-1}, cons(s_p, nil)): Y holds at most the letter at
			// position p, which the automaton reads from y instead.
			auto yv = fresh("Y");
			log_.push_back({RewriteStep::Kind::Nil, yv, nil(), c.heads[p]});
			lists_[i] = compose(c.heads, p, lv(yv));
			m_ = rebuild(m_, m_.k(), y + 1, [&](const Transition &t) {
				auto lev = levels_[t.from];
				if (lev == p)
					return at_track(t.guard, i, x(y));
				if (lev > p)
					return t.guard && is_pad(l(i));
				return t.guard;
			});
			return;
		}

		auto [var, r] = *c.rest;
		if (r > 0) {
			// Rename tail^r(X) to a fresh Z linked letter by letter, so that
			// the shift below keeps every list at its original length.
			auto z = fresh("Z");
			log_.push_back({RewriteStep::Kind::Link, z, ListTerm::tail_n(lv(var), r), ic(0)});
			auto zi = detail::index_of(lists_, lv(z));
			auto ei = detail::index_of(lists_, ListTerm::tail_n(lv(var), r));
			auto link = eq(l(zi), l(ei)) || (is_pad(l(zi)) && is_pad(l(ei)));
			m_ = rebuild(m_, lists_.size(), m_.n(),
			             [&](const Transition &t) { return t.guard && link; });
			var = z;
		}
		// X now stands for s_p :: X. Its old value is tail X everywhere else.
		log_.push_back({RewriteStep::Kind::Shift, var, nil(), ic(0)});
		for (std::size_t j = 0; j < lists_.size(); ++j)
			if (j != i)
				lists_[j] = shift_var(lists_[j], var);
		lists_[i] = compose(c.heads, p, lv(var));
		m_ = rebuild(m_, m_.k(), y + 1, [&](const Transition &t) {
			return levels_[t.from] == p ? at_track(t.guard, i, x(y)) : t.guard;
		});
	}

	static GuardFormula at_track(const GuardFormula &g, std::size_t i, GuardTerm v)
	{
		return substitute(
			g, [&](std::size_t j) { return j == i ? v : l(j); },
			[](std::size_t j) { return x(j); });
	}
};

inline NormalAtom normalize(const SarAtom &a, NormalizeOptions opts = {})
{
	return Normalizer(opts).run(a);
}

inline bool is_normal(const NormalAtom &a, NormalizeOptions opts = {})
{
	if (a.automaton.k() != a.lists.size() || a.automaton.n() != a.ints.size())
		return false;
	std::set<std::pair<std::string, std::size_t>> present;
	for (auto &t : a.lists)
		if (t.kind == NormalListArg::Kind::Tail)
			present.insert({t.var, t.depth});
	for (auto &t : a.lists) {
		if (t.kind == NormalListArg::Kind::Cons) {
			if (!opts.keep_outer_cons || !t.head || contains_head(*t.head) ||
			    contains_list_var(*t.head))
				return false;
		}
		if (!t.var.empty())
			for (std::size_t m = 0; m <= t.depth; ++m)
				if (!present.count({t.var, m}))
					return false;
	}
	std::set<std::string> seen;
	for (auto &v : a.ints)
		if (!seen.insert(v).second)
			return false;
	return true;
}

} // namespace sar
