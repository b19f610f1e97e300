/* SPDX-License-Identifier: Apache-2.0 */

// Library of list predicates expressed as SAR atoms.

#pragma once

#include "listlang.hpp"

namespace sar::pred {

// Single accepting state, loop !(l0 > l1). Read on (X, tail X) it says
// that no element exceeds its successor.
inline SsNfa m_sorted()
{
	SsNfa m(2, 0);
	auto q = m.add_state("q", true, true);
	m.add_transition(q, !gt(l(0), l(1)), q);
	return m;
}

// nth on (cons(i,Y), Y, X): the counter track counts down to 0 and the
// letter of X read at that moment is x.
inline SsNfa m_nth()
{
	SsNfa m(3, 1);
	auto q0 = m.add_state("q0", true, false);
	auto q1 = m.add_state("q1", false, true);
	m.add_transition(q0, eq(l(0), l(1) + 1), q0);
	m.add_transition(q0, eq(l(0), c(0)) && eq(l(2), x(0)), q1);
	m.add_transition(q1, GuardFormula::top(), q1);
	return m;
}

// Negation of nth. The disequality is written !(l2 = x) so that an
// index past the end of X (l2 padded) also satisfies it.
inline SsNfa m_not_nth()
{
	SsNfa m(3, 1);
	auto q0 = m.add_state("q0", true, false);
	auto q1 = m.add_state("q1", false, true);
	m.add_transition(q0, gt(l(0), c(0)) && eq(l(0), l(1) + 1), q0);
	m.add_transition(q0, (eq(l(0), c(0)) && !eq(l(2), x(0))) || lt(l(0), c(0)), q1);
	m.add_transition(q1, GuardFormula::top(), q1);
	return m;
}

// length on (cons(n,C), C, X)
inline SsNfa m_length()
{
	SsNfa m(3, 0);
	auto q0 = m.add_state("q0", true, false);
	auto q1 = m.add_state("q1", false, true);
	m.add_transition(q0, eq(l(0), l(1) + 1) && !is_pad(l(2)), q0);
	m.add_transition(q0, eq(l(0), c(0)) && is_pad(l(2)), q1);
	m.add_transition(q1, GuardFormula::top(), q1);
	return m;
}

inline SsNfa m_not_length()
{
	SsNfa m(3, 0);
	auto q0 = m.add_state("q0", true, false);
	auto q1 = m.add_state("q1", false, true);
	m.add_transition(q0, gt(l(0), c(0)) && eq(l(0), l(1) + 1) && !is_pad(l(2)), q0);
	m.add_transition(q0,
	                 lt(l(0), c(0)) || (eq(l(0), c(0)) && !is_pad(l(2))) ||
	                         (gt(l(0), c(0)) && is_pad(l(2))),
	                 q1);
	m.add_transition(q1, GuardFormula::top(), q1);
	return m;
}

// count on (cons(n,C), C, X; x): the counter drops by one on every x.
inline SsNfa m_count(bool negative)
{
	SsNfa m(3, 1);
	auto q0 = m.add_state("q0", true, false);
	auto q1 = m.add_state("q1", false, true);
	m.add_transition(q0, eq(l(2), x(0)) && eq(l(0), l(1) + 1), q0);
	m.add_transition(q0, !is_pad(l(2)) && !eq(l(2), x(0)) && eq(l(0), l(1)), q0);
	m.add_transition(q0, is_pad(l(2)) && (negative ? ne(l(0), c(0)) : eq(l(0), c(0))), q1);
	m.add_transition(q1, GuardFormula::top(), q1);
	return m;
}

inline SsNfa m_prefix()
{
	SsNfa m(2, 0);
	auto q0 = m.add_state("q0", true, true);
	auto q1 = m.add_state("q1", false, true);
	m.add_transition(q0, eq(l(0), l(1)), q0);
	m.add_transition(q0, is_pad(l(0)), q1);
	m.add_transition(q1, is_pad(l(0)), q1);
	return m;
}

inline SsNfa m_has_zero()
{
	SsNfa m(1, 0);
	auto q0 = m.add_state("q0", true, false);
	auto q1 = m.add_state("q1", false, true);
	m.add_transition(q0, GuardFormula::top(), q0);
	m.add_transition(q0, eq(l(0), c(0)), q1);
	m.add_transition(q1, GuardFormula::top(), q1);
	return m;
}

inline SsNfa m_mem()
{
	SsNfa m(1, 1);
	auto q0 = m.add_state("q0", true, false);
	auto q1 = m.add_state("q1", false, true);
	m.add_transition(q0, GuardFormula::top(), q0);
	m.add_transition(q0, eq(l(0), x(0)), q1);
	m.add_transition(q1, GuardFormula::top(), q1);
	return m;
}

// Every element satisfies `rel` against the parameter: l0 = x, x <= l0, ...
inline SsNfa m_forall(CmpOp op, bool param_on_left)
{
	SsNfa m(1, 1);
	auto q = m.add_state("q", true, true);
	m.add_transition(q,
	                 param_on_left ? GuardFormula::cmp(op, x(0), l(0))
	                               : GuardFormula::cmp(op, l(0), x(0)),
	                 q);
	return m;
}

// insert on (cons(0,X), X, Y). q0 copies elements smaller than x, the
// step into q1 places x, and q1 copies the rest of X shifted by one.
inline SsNfa m_insert()
{
	SsNfa m(3, 1);
	auto q0 = m.add_state("q0", true, false);
	auto q1 = m.add_state("q1", false, true);
	m.add_transition(q0, eq(l(1), l(2)) && gt(x(0), l(1)), q0);
	m.add_transition(q0, eq(x(0), l(2)) && (le(x(0), l(1)) || is_pad(l(1))), q1);
	m.add_transition(q1, eq(l(0), l(2)), q1);
	return m;
}

// take on (cons(n,C), C, X, Y): copy while the counter is positive.
inline SsNfa m_take()
{
	SsNfa m(4, 0);
	auto q0 = m.add_state("q0", true, false);
	auto q1 = m.add_state("q1", false, true);
	m.add_transition(q0,
	                 gt(l(0), c(0)) && eq(l(0), l(1) + 1) && !is_pad(l(2)) && eq(l(3), l(2)),
	                 q0);
	m.add_transition(q0, (le(l(0), c(0)) || is_pad(l(2))) && is_pad(l(3)), q1);
	m.add_transition(q1, is_pad(l(3)), q1);
	return m;
}

// On (X, tail X; x) for non-empty X: the letter read when tail X runs out
// is the last one.
inline SsNfa m_last()
{
	SsNfa m(2, 1);
	auto q0 = m.add_state("q0", true, false);
	auto q1 = m.add_state("q1", false, true);
	m.add_transition(q0, !is_pad(l(1)), q0);
	m.add_transition(q0, !is_pad(l(0)) && is_pad(l(1)) && eq(l(0), x(0)), q1);
	return m;
}

// ---------------------------------------------------------------------------

inline const IntTerm &int_arg(const std::vector<Arg> &a, std::size_t i)
{
	return std::get<IntTerm>(a.at(i));
}
inline const ListTerm &list_arg(const std::vector<Arg> &a, std::size_t i)
{
	return std::get<ListTerm>(a.at(i));
}

inline SarFormula atom(SsNfa m, std::vector<ListTerm> ls, std::vector<IntTerm> is = {})
{
	return SarFormula::atom(SarAtom(std::move(m), std::move(ls), std::move(is)));
}

// Counter-list predicates: exists C. R(cons(n, C), C, ...)
inline SarFormula with_counter(const IntTerm &n, SsNfa m, std::vector<ListTerm> rest,
                               std::vector<IntTerm> ints = {})
{
	std::vector<ListTerm> ls{cons(n, lv("C")), lv("C")};
	ls.insert(ls.end(), rest.begin(), rest.end());
	return SarFormula::exists("C", Sort::List, atom(std::move(m), std::move(ls), std::move(ints)));
}

class Library {
public:
	Library()
	{
		using S = Sort;
		add("sorted", {S::List}, [](auto &a) {
			return atom(m_sorted(), {list_arg(a, 0), tail(list_arg(a, 0))});
		});
		add(
			"nth", {S::Int, S::Int, S::List},
			[](auto &a) {
				return with_counter(int_arg(a, 0), m_nth(), {list_arg(a, 2)}, {int_arg(a, 1)});
			},
			[](auto &a) {
				return with_counter(int_arg(a, 0), m_not_nth(), {list_arg(a, 2)},
				                    {int_arg(a, 1)});
			});
		add(
			"length", {S::List, S::Int},
			[](auto &a) { return with_counter(int_arg(a, 1), m_length(), {list_arg(a, 0)}); },
			[](auto &a) {
				return with_counter(int_arg(a, 1), m_not_length(), {list_arg(a, 0)});
			});
		add(
			"count", {S::Int, S::List, S::Int},
			[](auto &a) {
				return with_counter(int_arg(a, 2), m_count(false), {list_arg(a, 1)},
				                    {int_arg(a, 0)});
			},
			[](auto &a) {
				return with_counter(int_arg(a, 2), m_count(true), {list_arg(a, 1)},
				                    {int_arg(a, 0)});
			});
		add("prefix", {S::List, S::List},
		    [](auto &a) { return atom(m_prefix(), {list_arg(a, 0), list_arg(a, 1)}); });
		add("has_zero", {S::List}, [](auto &a) { return atom(m_has_zero(), {list_arg(a, 0)}); });
		add("mem", {S::Int, S::List},
		    [](auto &a) { return atom(m_mem(), {list_arg(a, 1)}, {int_arg(a, 0)}); });
		add("eq_list", {S::List, S::List}, [](auto &a) {
			return SarFormula::list_eq(list_arg(a, 0), list_arg(a, 1));
		});
		add("insert", {S::Int, S::List, S::List}, [](auto &a) {
			auto &xs = list_arg(a, 1);
			return atom(m_insert(), {cons(ic(0), xs), xs, list_arg(a, 2)}, {int_arg(a, 0)});
		});
		add("le_all", {S::Int, S::List}, [](auto &a) {
			return atom(m_forall(CmpOp::Le, true), {list_arg(a, 1)}, {int_arg(a, 0)});
		});
		add("all_eq", {S::List, S::Int}, [](auto &a) {
			return atom(m_forall(CmpOp::Eq, false), {list_arg(a, 0)}, {int_arg(a, 1)});
		});
		add("take", {S::Int, S::List, S::List}, [](auto &a) {
			return with_counter(int_arg(a, 0), m_take(), {list_arg(a, 1), list_arg(a, 2)});
		});
		add("last", {S::List, S::Int}, [](auto &a) {
			auto &xs = list_arg(a, 0);
			auto &v = int_arg(a, 1);
			return (SarFormula::list_eq(xs, nil()) && SarFormula::arith(CmpOp::Eq, v, ic(0))) ||
			       (!SarFormula::list_eq(xs, nil()) && atom(m_last(), {xs, tail(xs)}, {v}));
		});
	}

	std::shared_ptr<const PredicateDef> find(const std::string &name) const
	{
		auto it = defs_.find(name);
		return it == defs_.end() ? nullptr : it->second;
	}

	std::shared_ptr<const PredicateDef> get(const std::string &name) const
	{
		auto d = find(name);
		if (!d)
			throw InputError("unknown predicate " + name);
		return d;
	}

	void add(std::shared_ptr<const PredicateDef> def) { defs_[def->name] = std::move(def); }

	std::vector<std::string> names() const
	{
		std::vector<std::string> out;
		for (auto &[k, v] : defs_)
			out.push_back(k);
		return out;
	}

	SarFormula apply(const std::string &name, std::vector<Arg> args) const
	{
		return SarFormula::pred(get(name), std::move(args));
	}

private:
	using Builder = std::function<SarFormula(const std::vector<Arg> &)>;
	void add(std::string name, std::vector<Sort> sig, Builder pos, Builder neg = {})
	{
		auto d = std::make_shared<PredicateDef>();
		d->name = std::move(name);
		d->signature = std::move(sig);
		d->positive = std::move(pos);
		d->negative = std::move(neg);
		defs_[d->name] = d;
	}

	std::map<std::string, std::shared_ptr<const PredicateDef>> defs_;
};

inline const Library &library()
{
	static const Library lib;
	return lib;
}

// Convenience wrappers.
inline SarFormula sorted(ListTerm xs) { return library().apply("sorted", {xs}); }
inline SarFormula nth(IntTerm i, IntTerm v, ListTerm xs) { return library().apply("nth", {i, v, xs}); }
inline SarFormula length(ListTerm xs, IntTerm n) { return library().apply("length", {xs, n}); }
inline SarFormula count(IntTerm v, ListTerm xs, IntTerm n) { return library().apply("count", {v, xs, n}); }
inline SarFormula prefix(ListTerm a, ListTerm b) { return library().apply("prefix", {a, b}); }
inline SarFormula has_zero(ListTerm xs) { return library().apply("has_zero", {xs}); }
inline SarFormula mem(IntTerm v, ListTerm xs) { return library().apply("mem", {v, xs}); }
inline SarFormula eq_list(ListTerm a, ListTerm b) { return library().apply("eq_list", {a, b}); }
inline SarFormula insert(IntTerm v, ListTerm xs, ListTerm ys) { return library().apply("insert", {v, xs, ys}); }
inline SarFormula le_all(IntTerm v, ListTerm xs) { return library().apply("le_all", {v, xs}); }
inline SarFormula all_eq(ListTerm xs, IntTerm v) { return library().apply("all_eq", {xs, v}); }
inline SarFormula take(IntTerm n, ListTerm xs, ListTerm ys) { return library().apply("take", {n, xs, ys}); }
inline SarFormula last(ListTerm xs, IntTerm v) { return library().apply("last", {xs, v}); }

} // namespace sar::pred
