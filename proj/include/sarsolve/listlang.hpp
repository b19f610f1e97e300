/* SPDX-License-Identifier: Apache-2.0 */

// List/integer terms, SAR atoms and formulas, their reference semantics in
// the standard list model, and Boolean closure of atoms.

#pragma once

#include "ssnfa.hpp"

#include <memory>
#include <variant>

namespace sar {

using IntList = std::vector<Int>;

class ListTerm;

class IntTerm {
public:
	enum class Kind { Var, Const, Add, Sub, MulConst, Head };

	IntTerm() : IntTerm(constant(0)) {}

	static IntTerm var(std::string name);
	static IntTerm constant(Int v);
	static IntTerm head(const ListTerm &t);
	friend IntTerm operator+(IntTerm a, IntTerm b);
	friend IntTerm operator-(IntTerm a, IntTerm b);
	friend IntTerm operator*(Int c, IntTerm t);

	Kind kind() const;
	const std::string &name() const;
	Int value() const;
	const IntTerm &lhs() const;
	const IntTerm &rhs() const;
	const ListTerm &list() const;

private:
	struct Node;
	IntTerm(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
	std::shared_ptr<const Node> node_;
};

class ListTerm {
public:
	enum class Kind { Nil, Var, Cons, Tail };

	ListTerm() : ListTerm(nil()) {}

	static ListTerm nil();
	static ListTerm var(std::string name);
	static ListTerm cons(IntTerm h, ListTerm t);
	static ListTerm tail(ListTerm t);
	static ListTerm tail_n(ListTerm t, std::size_t m)
	{
		while (m--)
			t = tail(t);
		return t;
	}

	Kind kind() const;
	const std::string &name() const;
	const IntTerm &head() const;
	const ListTerm &rest() const;

private:
	struct Node;
	ListTerm(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
	std::shared_ptr<const Node> node_;
};

struct IntTerm::Node {
	Kind kind;
	std::string name;
	Int value = 0;
	std::vector<IntTerm> args;
	std::vector<ListTerm> lists;
};

struct ListTerm::Node {
	Kind kind;
	std::string name;
	std::vector<IntTerm> heads;
	std::vector<ListTerm> rests;
};

inline IntTerm IntTerm::var(std::string name)
{
	return IntTerm(std::make_shared<const Node>(Node{Kind::Var, std::move(name), 0, {}, {}}));
}
inline IntTerm IntTerm::constant(Int v)
{
	return IntTerm(std::make_shared<const Node>(Node{Kind::Const, {}, v, {}, {}}));
}
inline IntTerm IntTerm::head(const ListTerm &t)
{
	return IntTerm(std::make_shared<const Node>(Node{Kind::Head, {}, 0, {}, {t}}));
}
inline IntTerm operator+(IntTerm a, IntTerm b)
{
	using N = IntTerm::Node;
	return IntTerm(std::make_shared<const N>(N{IntTerm::Kind::Add, {}, 0, {a, b}, {}}));
}
inline IntTerm operator-(IntTerm a, IntTerm b)
{
	using N = IntTerm::Node;
	return IntTerm(std::make_shared<const N>(N{IntTerm::Kind::Sub, {}, 0, {a, b}, {}}));
}
inline IntTerm operator*(Int c, IntTerm t)
{
	using N = IntTerm::Node;
	return IntTerm(std::make_shared<const N>(N{IntTerm::Kind::MulConst, {}, c, {t}, {}}));
}
inline IntTerm operator+(IntTerm a, Int c) { return a + IntTerm::constant(c); }
inline IntTerm operator-(IntTerm a, Int c) { return a - IntTerm::constant(c); }

inline IntTerm::Kind IntTerm::kind() const { return node_->kind; }
inline const std::string &IntTerm::name() const { return node_->name; }
inline Int IntTerm::value() const { return node_->value; }
inline const IntTerm &IntTerm::lhs() const { return node_->args.at(0); }
inline const IntTerm &IntTerm::rhs() const { return node_->args.at(1); }
inline const ListTerm &IntTerm::list() const { return node_->lists.at(0); }

inline ListTerm ListTerm::nil()
{
	return ListTerm(std::make_shared<const Node>(Node{Kind::Nil, {}, {}, {}}));
}
inline ListTerm ListTerm::var(std::string name)
{
	return ListTerm(std::make_shared<const Node>(Node{Kind::Var, std::move(name), {}, {}}));
}
inline ListTerm ListTerm::cons(IntTerm h, ListTerm t)
{
	return ListTerm(std::make_shared<const Node>(Node{Kind::Cons, {}, {h}, {t}}));
}
inline ListTerm ListTerm::tail(ListTerm t)
{
	return ListTerm(std::make_shared<const Node>(Node{Kind::Tail, {}, {}, {t}}));
}
inline ListTerm::Kind ListTerm::kind() const { return node_->kind; }
inline const std::string &ListTerm::name() const { return node_->name; }
inline const IntTerm &ListTerm::head() const { return node_->heads.at(0); }
inline const ListTerm &ListTerm::rest() const { return node_->rests.at(0); }

// Short builders used throughout the library and tests.
inline IntTerm iv(std::string n) { return IntTerm::var(std::move(n)); }
inline IntTerm ic(Int v) { return IntTerm::constant(v); }
inline ListTerm lv(std::string n) { return ListTerm::var(std::move(n)); }
inline ListTerm nil() { return ListTerm::nil(); }
inline ListTerm cons(IntTerm h, ListTerm t) { return ListTerm::cons(std::move(h), std::move(t)); }
inline ListTerm tail(ListTerm t) { return ListTerm::tail(std::move(t)); }
inline IntTerm head(ListTerm t) { return IntTerm::head(t); }

inline std::string to_string(const ListTerm &t);

inline std::string to_string(const IntTerm &t)
{
	using K = IntTerm::Kind;
	switch (t.kind()) {
	case K::Var: return t.name();
	case K::Const: return t.value() < 0 ? "(" + std::to_string(t.value()) + ")"
	                                    : std::to_string(t.value());
	case K::Add: return "(" + to_string(t.lhs()) + " + " + to_string(t.rhs()) + ")";
	case K::Sub: return "(" + to_string(t.lhs()) + " - " + to_string(t.rhs()) + ")";
	case K::MulConst: return "(" + std::to_string(t.value()) + " * " + to_string(t.lhs()) + ")";
	case K::Head: return "head(" + to_string(t.list()) + ")";
	}
	return "?";
}

inline std::string to_string(const ListTerm &t)
{
	using K = ListTerm::Kind;
	switch (t.kind()) {
	case K::Nil: return "nil";
	case K::Var: return t.name();
	case K::Cons: return "cons(" + to_string(t.head()) + ", " + to_string(t.rest()) + ")";
	case K::Tail: return "tail(" + to_string(t.rest()) + ")";
	}
	return "?";
}

// Structural equality through the canonical printed form.
inline bool operator==(const IntTerm &a, const IntTerm &b) { return to_string(a) == to_string(b); }
inline bool operator==(const ListTerm &a, const ListTerm &b) { return to_string(a) == to_string(b); }

// Tail^m(X) recognition: returns (X, m) or nothing.
inline std::optional<std::pair<std::string, std::size_t>> as_tail_of_var(const ListTerm &t)
{
	std::size_t m = 0;
	const ListTerm *cur = &t;
	while (cur->kind() == ListTerm::Kind::Tail) {
		++m;
		cur = &cur->rest();
	}
	if (cur->kind() != ListTerm::Kind::Var)
		return std::nullopt;
	return std::make_pair(cur->name(), m);
}

// ---------------------------------------------------------------------------
// Assignments and the standard list model (head(nil) = 0, tail(nil) = nil)

struct Assignment {
	std::map<std::string, Int> ints;
	std::map<std::string, IntList> lists;

	friend bool operator==(const Assignment &, const Assignment &) = default;
};

inline std::string to_string(const IntList &w)
{
	std::string s = "[";
	for (std::size_t i = 0; i < w.size(); ++i)
		s += (i ? "," : "") + std::to_string(w[i]);
	return s + "]";
}

inline std::string to_string(const Assignment &a)
{
	std::string s;
	for (auto &[k, v] : a.ints)
		s += (s.empty() ? "" : ", ") + k + "=" + std::to_string(v);
	for (auto &[k, v] : a.lists)
		s += (s.empty() ? "" : ", ") + k + "=" + to_string(v);
	return "{" + s + "}";
}

inline IntList eval_list_term(const ListTerm &t, const Assignment &a);

inline Int eval_int_term(const IntTerm &t, const Assignment &a)
{
	using K = IntTerm::Kind;
	switch (t.kind()) {
	case K::Var: {
		auto it = a.ints.find(t.name());
		if (it == a.ints.end())
			throw ContractViolation("unassigned integer variable " + t.name());
		return it->second;
	}
	case K::Const: return t.value();
	case K::Add: return eval_int_term(t.lhs(), a) + eval_int_term(t.rhs(), a);
	case K::Sub: return eval_int_term(t.lhs(), a) - eval_int_term(t.rhs(), a);
	case K::MulConst: return t.value() * eval_int_term(t.lhs(), a);
	case K::Head: {
		auto w = eval_list_term(t.list(), a);
		return w.empty() ? 0 : w.front();
	}
	}
	return 0;
}

inline IntList eval_list_term(const ListTerm &t, const Assignment &a)
{
	using K = ListTerm::Kind;
	switch (t.kind()) {
	case K::Nil: return {};
	case K::Var: {
		auto it = a.lists.find(t.name());
		if (it == a.lists.end())
			throw ContractViolation("unassigned list variable " + t.name());
		return it->second;
	}
	case K::Cons: {
		IntList w{eval_int_term(t.head(), a)};
		auto r = eval_list_term(t.rest(), a);
		w.insert(w.end(), r.begin(), r.end());
		return w;
	}
	case K::Tail: {
		auto w = eval_list_term(t.rest(), a);
		if (!w.empty())
			w.erase(w.begin());
		return w;
	}
	}
	return {};
}

inline SyncWord convolve(const std::vector<IntList> &words)
{
	std::size_t len = 0;
	for (auto &w : words)
		len = std::max(len, w.size());
	SyncWord out(len, Letter(words.size()));
	for (std::size_t j = 0; j < len; ++j)
		for (std::size_t i = 0; i < words.size(); ++i)
			out[j][i] = j < words[i].size() ? PaddedValue(words[i][j]) : pad;
	return out;
}

// ---------------------------------------------------------------------------
// Free variables

struct VarSet {
	std::set<std::string> ints, lists;
	void merge(const VarSet &o)
	{
		ints.insert(o.ints.begin(), o.ints.end());
		lists.insert(o.lists.begin(), o.lists.end());
	}
};

inline void collect_vars(const ListTerm &t, VarSet &vs);

inline void collect_vars(const IntTerm &t, VarSet &vs)
{
	using K = IntTerm::Kind;
	switch (t.kind()) {
	case K::Var: vs.ints.insert(t.name()); break;
	case K::Const: break;
	case K::Add:
	case K::Sub:
		collect_vars(t.lhs(), vs);
		collect_vars(t.rhs(), vs);
		break;
	case K::MulConst: collect_vars(t.lhs(), vs); break;
	case K::Head: collect_vars(t.list(), vs); break;
	}
}

inline void collect_vars(const ListTerm &t, VarSet &vs)
{
	using K = ListTerm::Kind;
	switch (t.kind()) {
	case K::Nil: break;
	case K::Var: vs.lists.insert(t.name()); break;
	case K::Cons:
		collect_vars(t.head(), vs);
		collect_vars(t.rest(), vs);
		break;
	case K::Tail: collect_vars(t.rest(), vs); break;
	}
}

// ---------------------------------------------------------------------------
// Renaming

using NameMap = std::map<std::string, std::string>;

inline ListTerm rename(const ListTerm &t, const NameMap &ints, const NameMap &lists);

inline IntTerm rename(const IntTerm &t, const NameMap &ints, const NameMap &lists)
{
	using K = IntTerm::Kind;
	switch (t.kind()) {
	case K::Var: {
		auto it = ints.find(t.name());
		return it == ints.end() ? t : iv(it->second);
	}
	case K::Const: return t;
	case K::Add: return rename(t.lhs(), ints, lists) + rename(t.rhs(), ints, lists);
	case K::Sub: return rename(t.lhs(), ints, lists) - rename(t.rhs(), ints, lists);
	case K::MulConst: return t.value() * rename(t.lhs(), ints, lists);
	case K::Head: return head(rename(t.list(), ints, lists));
	}
	return t;
}

inline ListTerm rename(const ListTerm &t, const NameMap &ints, const NameMap &lists)
{
	using K = ListTerm::Kind;
	switch (t.kind()) {
	case K::Nil: return t;
	case K::Var: {
		auto it = lists.find(t.name());
		return it == lists.end() ? t : lv(it->second);
	}
	case K::Cons: return cons(rename(t.head(), ints, lists), rename(t.rest(), ints, lists));
	case K::Tail: return tail(rename(t.rest(), ints, lists));
	}
	return t;
}

// ---------------------------------------------------------------------------
// SAR atoms

struct SarAtom {
	std::shared_ptr<const SsNfa> automaton;
	std::vector<ListTerm> lists;
	std::vector<IntTerm> ints;

	SarAtom() = default;
	SarAtom(SsNfa m, std::vector<ListTerm> ls, std::vector<IntTerm> is)
		: automaton(std::make_shared<const SsNfa>(std::move(m))), lists(std::move(ls)),
		  ints(std::move(is))
	{
		check();
	}

	const SsNfa &nfa() const { return *automaton; }

	void check() const
	{
		if (!automaton)
			throw ContractViolation("atom without automaton");
		if (automaton->k() != lists.size() || automaton->n() != ints.size())
			throw ContractViolation("atom arity mismatch: automaton is (" +
			                        std::to_string(automaton->k()) + "," +
			                        std::to_string(automaton->n()) + "), arguments are (" +
			                        std::to_string(lists.size()) + "," +
			                        std::to_string(ints.size()) + ")");
	}

	VarSet vars() const
	{
		VarSet vs;
		for (auto &t : lists)
			collect_vars(t, vs);
		for (auto &t : ints)
			collect_vars(t, vs);
		return vs;
	}
};

inline std::string to_string(const SarAtom &a)
{
	std::string s = "R[" + std::to_string(a.nfa().num_states()) + " states](";
	for (std::size_t i = 0; i < a.lists.size(); ++i)
		s += (i ? ", " : "") + to_string(a.lists[i]);
	s += ";";
	for (std::size_t i = 0; i < a.ints.size(); ++i)
		s += (i ? ", " : " ") + to_string(a.ints[i]);
	return s + ")";
}

// Runs the automaton itself on the convolution. Only convolution words are
// ever fed in, so intersecting with the convolution automaton first would
// not change the answer.
inline bool eval_atom(const SarAtom &a, const Assignment &alpha)
{
	std::vector<IntList> words;
	for (auto &t : a.lists)
		words.push_back(eval_list_term(t, alpha));
	std::vector<Int> params;
	for (auto &t : a.ints)
		params.push_back(eval_int_term(t, alpha));
	return accepts(a.nfa(), params, convolve(words));
}

// ---------------------------------------------------------------------------
// Formulas

class SarFormula;
struct PredicateDef;

using Arg = std::variant<IntTerm, ListTerm>;

enum class Sort { Int, List };

class SarFormula {
public:
	enum class Kind { True, False, Atom, Arith, ListEq, Pred, Not, And, Or, Exists };

	SarFormula() : SarFormula(top()) {}

	static SarFormula top() { return make(Kind::True); }
	static SarFormula bottom() { return make(Kind::False); }
	static SarFormula atom(SarAtom a)
	{
		auto f = make(Kind::Atom);
		f.mut().atom = std::move(a);
		return f;
	}
	static SarFormula arith(CmpOp op, IntTerm a, IntTerm b)
	{
		auto f = make(Kind::Arith);
		f.mut().op = op;
		f.mut().ints = {std::move(a), std::move(b)};
		return f;
	}
	static SarFormula list_eq(ListTerm a, ListTerm b)
	{
		auto f = make(Kind::ListEq);
		f.mut().lists = {std::move(a), std::move(b)};
		return f;
	}
	static SarFormula pred(std::shared_ptr<const PredicateDef> def, std::vector<Arg> args);
	static SarFormula negate(SarFormula g)
	{
		if (g.kind() == Kind::True)
			return bottom();
		if (g.kind() == Kind::False)
			return top();
		auto f = make(Kind::Not);
		f.mut().children = {std::move(g)};
		return f;
	}
	static SarFormula conj(std::vector<SarFormula> gs) { return nary(Kind::And, std::move(gs)); }
	static SarFormula disj(std::vector<SarFormula> gs) { return nary(Kind::Or, std::move(gs)); }
	static SarFormula exists(std::string var, Sort sort, SarFormula body)
	{
		auto f = make(Kind::Exists);
		f.mut().var = std::move(var);
		f.mut().sort = sort;
		f.mut().children = {std::move(body)};
		return f;
	}

	Kind kind() const { return node_->kind; }
	const SarAtom &atom() const { return node_->atom; }
	CmpOp op() const { return node_->op; }
	const std::vector<IntTerm> &ints() const { return node_->ints; }
	const std::vector<ListTerm> &lists() const { return node_->lists; }
	const std::vector<SarFormula> &children() const { return node_->children; }
	const SarFormula &child() const { return node_->children.at(0); }
	const std::string &var() const { return node_->var; }
	Sort sort() const { return node_->sort; }
	const PredicateDef &def() const { return *node_->def; }
	const std::shared_ptr<const PredicateDef> &def_ptr() const { return node_->def; }
	const std::vector<Arg> &args() const { return node_->args; }

private:
	struct Node {
		Kind kind;
		SarAtom atom;
		CmpOp op = CmpOp::Eq;
		std::vector<IntTerm> ints;
		std::vector<ListTerm> lists;
		std::vector<SarFormula> children;
		std::string var;
		Sort sort = Sort::Int;
		std::shared_ptr<const PredicateDef> def;
		std::vector<Arg> args;
	};
	static SarFormula make(Kind k)
	{
		SarFormula f{nullptr};
		f.node_ = std::make_shared<Node>();
		f.mut().kind = k;
		return f;
	}
	static SarFormula nary(Kind k, std::vector<SarFormula> gs)
	{
		Kind unit = k == Kind::And ? Kind::True : Kind::False;
		Kind zero = k == Kind::And ? Kind::False : Kind::True;
		std::vector<SarFormula> flat;
		for (auto &g : gs) {
			if (g.kind() == unit)
				continue;
			if (g.kind() == zero)
				return g;
			if (g.kind() == k)
				flat.insert(flat.end(), g.children().begin(), g.children().end());
			else
				flat.push_back(g);
		}
		if (flat.empty())
			return make(unit);
		if (flat.size() == 1)
			return flat.front();
		auto f = make(k);
		f.mut().children = std::move(flat);
		return f;
	}
	SarFormula(std::nullptr_t) {}
	Node &mut() { return const_cast<Node &>(*node_); }
	std::shared_ptr<const Node> node_;
};

// A named predicate with an optional dedicated encoding of its negation.
// Both builders receive the argument terms and return formulas that may
// introduce existentially bound helper variables.
struct PredicateDef {
	std::string name;
	std::vector<Sort> signature;
	std::function<SarFormula(const std::vector<Arg> &)> positive;
	std::function<SarFormula(const std::vector<Arg> &)> negative; // may be empty
};

inline SarFormula SarFormula::pred(std::shared_ptr<const PredicateDef> def, std::vector<Arg> args)
{
	if (!def)
		throw ContractViolation("predicate application without definition");
	if (args.size() != def->signature.size())
		throw InputError("predicate " + def->name + " expects " +
		                 std::to_string(def->signature.size()) + " arguments, got " +
		                 std::to_string(args.size()));
	for (std::size_t i = 0; i < args.size(); ++i) {
		bool is_int = std::holds_alternative<IntTerm>(args[i]);
		if (is_int != (def->signature[i] == Sort::Int))
			throw InputError("predicate " + def->name + ": argument " + std::to_string(i + 1) +
			                 " has the wrong sort");
	}
	auto f = make(Kind::Pred);
	f.mut().def = std::move(def);
	f.mut().args = std::move(args);
	return f;
}

inline SarFormula operator&&(SarFormula a, SarFormula b) { return SarFormula::conj({a, b}); }
inline SarFormula operator||(SarFormula a, SarFormula b) { return SarFormula::disj({a, b}); }
inline SarFormula operator!(SarFormula a) { return SarFormula::negate(std::move(a)); }

inline std::string to_string(const Arg &a)
{
	return std::visit([](auto &t) { return to_string(t); }, a);
}

inline std::string to_string(const SarFormula &f)
{
	using K = SarFormula::Kind;
	switch (f.kind()) {
	case K::True: return "true";
	case K::False: return "false";
	case K::Atom: return to_string(f.atom());
	case K::Arith:
		return to_string(f.ints()[0]) + " " + to_string(f.op()) + " " + to_string(f.ints()[1]);
	case K::ListEq: return to_string(f.lists()[0]) + " == " + to_string(f.lists()[1]);
	case K::Pred: {
		std::string s = f.def().name + "(";
		for (std::size_t i = 0; i < f.args().size(); ++i)
			s += (i ? ", " : "") + to_string(f.args()[i]);
		return s + ")";
	}
	case K::Not: return "!(" + to_string(f.child()) + ")";
	case K::And:
	case K::Or: {
		std::string s = "(";
		for (std::size_t i = 0; i < f.children().size(); ++i)
			s += (i ? (f.kind() == K::And ? " && " : " || ") : "") + to_string(f.children()[i]);
		return s + ")";
	}
	case K::Exists:
		return std::string("exists ") + (f.sort() == Sort::Int ? "int " : "list ") + f.var() +
		       ". " + to_string(f.child());
	}
	return "?";
}

inline void collect_free_vars(const SarFormula &f, VarSet &vs)
{
	using K = SarFormula::Kind;
	switch (f.kind()) {
	case K::True:
	case K::False: break;
	case K::Atom: vs.merge(f.atom().vars()); break;
	case K::Arith:
		for (auto &t : f.ints())
			collect_vars(t, vs);
		break;
	case K::ListEq:
		for (auto &t : f.lists())
			collect_vars(t, vs);
		break;
	case K::Pred:
		for (auto &a : f.args())
			std::visit([&](auto &t) { collect_vars(t, vs); }, a);
		break;
	case K::Not:
	case K::And:
	case K::Or:
		for (auto &g : f.children())
			collect_free_vars(g, vs);
		break;
	case K::Exists: {
		VarSet inner;
		collect_free_vars(f.child(), inner);
		(f.sort() == Sort::Int ? inner.ints : inner.lists).erase(f.var());
		vs.merge(inner);
		break;
	}
	}
}

inline VarSet free_vars(const SarFormula &f)
{
	VarSet vs;
	collect_free_vars(f, vs);
	return vs;
}

// ---------------------------------------------------------------------------
// Prenex form: existentials pulled out, predicates expanded, negation pushed
// onto Atom/Arith/ListEq leaves. Bound variables are renamed apart with a
// leading underscore, a prefix reserved for generated names.

struct Prenex {
	std::vector<std::pair<std::string, Sort>> exists;
	SarFormula matrix;
};

class Prenexer {
public:
	Prenex run(const SarFormula &f)
	{
		Prenex p;
		p.matrix = walk(f, true, {}, {}, p);
		return p;
	}

private:
	int counter_ = 0;

	SarFormula walk(const SarFormula &f, bool pos, const NameMap &ints, const NameMap &lists,
	                Prenex &out)
	{
		using K = SarFormula::Kind;
		switch (f.kind()) {
		case K::True: return pos ? f : SarFormula::bottom();
		case K::False: return pos ? f : SarFormula::top();
		case K::Atom: {
			SarAtom a = f.atom();
			for (auto &t : a.lists)
				t = rename(t, ints, lists);
			for (auto &t : a.ints)
				t = rename(t, ints, lists);
			auto g = SarFormula::atom(std::move(a));
			return pos ? g : !g;
		}
		case K::Arith: {
			auto g = SarFormula::arith(f.op(), rename(f.ints()[0], ints, lists),
			                           rename(f.ints()[1], ints, lists));
			return pos ? g : !g;
		}
		case K::ListEq: {
			auto g = SarFormula::list_eq(rename(f.lists()[0], ints, lists),
			                             rename(f.lists()[1], ints, lists));
			return pos ? g : !g;
		}
		case K::Pred: {
			std::vector<Arg> args;
			for (auto &a : f.args())
				args.push_back(std::visit([&](auto &t) -> Arg { return rename(t, ints, lists); },
				                          a));
			auto &d = f.def();
			if (pos)
				return walk(d.positive(args), true, {}, {}, out);
			if (d.negative)
				return walk(d.negative(args), true, {}, {}, out);
			auto body = d.positive(args);
			if (contains_exists(body))
				throw InputError("negation of predicate " + d.name +
				                 " needs a negative encoding (it is not a Delta0 formula)");
			return walk(body, false, {}, {}, out);
		}
		case K::Not: return walk(f.child(), !pos, ints, lists, out);
		case K::And:
		case K::Or: {
			std::vector<SarFormula> cs;
			for (auto &g : f.children())
				cs.push_back(walk(g, pos, ints, lists, out));
			bool conj = (f.kind() == K::And) == pos;
			return conj ? SarFormula::conj(std::move(cs)) : SarFormula::disj(std::move(cs));
		}
		case K::Exists: {
			if (!pos)
				throw InputError("existential quantifier under negation: the formula is not "
				                 "in the existential fragment");
			std::string fresh = "_" + f.var() + std::to_string(counter_++);
			NameMap i2 = ints, l2 = lists;
			(f.sort() == Sort::Int ? i2 : l2)[f.var()] = fresh;
			out.exists.emplace_back(fresh, f.sort());
			return walk(f.child(), true, i2, l2, out);
		}
		}
		return f;
	}

	static bool contains_exists(const SarFormula &f)
	{
		using K = SarFormula::Kind;
		if (f.kind() == K::Exists)
			return true;
		if (f.kind() == K::Pred)
			return contains_exists(f.def().positive(f.args()));
		if (f.kind() == K::Not || f.kind() == K::And || f.kind() == K::Or)
			for (auto &g : f.children())
				if (contains_exists(g))
					return true;
		return false;
	}
};

inline Prenex prenex(const SarFormula &f) { return Prenexer().run(f); }

// ---------------------------------------------------------------------------
// Reference evaluation. Existentials range over bounded domains.

struct Bounds {
	std::size_t max_len = 6;
	Int lo = -3, hi = 3;
};

inline std::vector<IntList> all_lists(std::size_t max_len, Int lo, Int hi)
{
	std::vector<IntList> out{{}};
	std::size_t begin = 0;
	for (std::size_t len = 1; len <= max_len; ++len) {
		std::size_t end = out.size();
		for (std::size_t i = begin; i < end; ++i)
			for (Int v = lo; v <= hi; ++v) {
				auto w = out[i];
				w.push_back(v);
				out.push_back(std::move(w));
			}
		begin = end;
	}
	return out;
}

inline bool eval_formula(const SarFormula &f, const Assignment &alpha, const Bounds &b = {})
{
	using K = SarFormula::Kind;
	switch (f.kind()) {
	case K::True: return true;
	case K::False: return false;
	case K::Atom: return eval_atom(f.atom(), alpha);
	case K::Arith:
		return apply(f.op(), eval_int_term(f.ints()[0], alpha), eval_int_term(f.ints()[1], alpha));
	case K::ListEq:
		return eval_list_term(f.lists()[0], alpha) == eval_list_term(f.lists()[1], alpha);
	case K::Pred:
		return eval_formula(f.def().positive(f.args()), alpha, b);
	case K::Not: return !eval_formula(f.child(), alpha, b);
	case K::And:
		for (auto &g : f.children())
			if (!eval_formula(g, alpha, b))
				return false;
		return true;
	case K::Or:
		for (auto &g : f.children())
			if (eval_formula(g, alpha, b))
				return true;
		return false;
	case K::Exists: {
		Assignment a = alpha;
		if (f.sort() == Sort::Int) {
			for (Int v = b.lo; v <= b.hi; ++v) {
				a.ints[f.var()] = v;
				if (eval_formula(f.child(), a, b))
					return true;
			}
		} else {
			for (auto &w : all_lists(b.max_len, b.lo, b.hi)) {
				a.lists[f.var()] = w;
				if (eval_formula(f.child(), a, b))
					return true;
			}
		}
		return false;
	}
	}
	return false;
}

// ---------------------------------------------------------------------------
// Boolean closure of atoms

namespace detail {

template <class T>
std::size_t index_of(std::vector<T> &pool, const T &t)
{
	auto key = to_string(t);
	for (std::size_t i = 0; i < pool.size(); ++i)
		if (to_string(pool[i]) == key)
			return i;
	pool.push_back(t);
	return pool.size() - 1;
}

} // namespace detail

// Lifts an atom's automaton to a wider argument tuple. Own track i becomes
// track track_map[i] of `k` tracks, own parameter j becomes param_map[j] of
// `n`. Once all own tracks are padded the factor's word has ended, so
// remaining letters are absorbed by an accepting tail state.
inline SsNfa embed(const SsNfa &m, std::size_t k, std::size_t n,
                   const std::vector<std::size_t> &track_map,
                   const std::vector<std::size_t> &param_map)
{
	if (track_map.size() != m.k() || param_map.size() != m.n())
		throw ContractViolation("embed: map size mismatch");
	bool covers = m.k() == k;
	for (std::size_t i = 0; covers && i < k; ++i)
		covers = track_map[i] == i;
	bool same_params = m.n() == n;
	for (std::size_t j = 0; same_params && j < n; ++j)
		same_params = param_map[j] == j;
	if (covers && same_params)
		return m;

	std::vector<GuardFormula> pads;
	std::set<std::size_t> own(track_map.begin(), track_map.end());
	for (auto t : own)
		pads.push_back(is_pad(l(t)));
	GuardFormula all_pad = GuardFormula::conj(pads);
	bool need_tail = own.size() != k;

	SsNfa r(k, n);
	for (StateId q = 0; q < m.num_states(); ++q)
		r.add_state(m.name(q), m.is_initial(q), m.is_final(q));
	for (auto &t : m.transitions()) {
		auto g = reindex(t.guard, track_map, param_map);
		r.add_transition(t.from, need_tail ? (g && !all_pad) : g, t.to);
	}
	if (need_tail) {
		StateId tailq = r.add_state("end", false, true);
		for (auto f : m.final())
			r.add_transition(f, all_pad, tailq);
		r.add_transition(tailq, all_pad, tailq);
	}
	return r;
}

// Collects the argument tuples of several atoms into one tuple without
// duplicates and embeds every automaton into it.
struct Joined {
	std::vector<ListTerm> lists;
	std::vector<IntTerm> ints;
	std::vector<SsNfa> parts;
};

inline Joined join(const std::vector<SarAtom> &atoms)
{
	Joined j;
	std::vector<std::vector<std::size_t>> tmaps, pmaps;
	for (auto &a : atoms) {
		std::vector<std::size_t> tm, pm;
		for (auto &t : a.lists)
			tm.push_back(detail::index_of(j.lists, t));
		for (auto &t : a.ints)
			pm.push_back(detail::index_of(j.ints, t));
		tmaps.push_back(std::move(tm));
		pmaps.push_back(std::move(pm));
	}
	for (std::size_t i = 0; i < atoms.size(); ++i)
		j.parts.push_back(embed(atoms[i].nfa(), j.lists.size(), j.ints.size(), tmaps[i], pmaps[i]));
	return j;
}

// An automaton may mention the same track twice in the argument list; this
// is harmless, the repeated list just appears on two tracks.
inline SarAtom delta0_and(const std::vector<SarAtom> &atoms)
{
	if (atoms.empty())
		throw ContractViolation("delta0_and of nothing");
	auto j = join(atoms);
	SsNfa m = j.parts[0];
	for (std::size_t i = 1; i < j.parts.size(); ++i)
		m = trim(product(m, j.parts[i]));
	return SarAtom(std::move(m), j.lists, j.ints);
}

inline SarAtom delta0_or(const std::vector<SarAtom> &atoms)
{
	if (atoms.empty())
		throw ContractViolation("delta0_or of nothing");
	auto j = join(atoms);
	SsNfa m = j.parts[0];
	for (std::size_t i = 1; i < j.parts.size(); ++i)
		m = disjoint_union(m, j.parts[i]);
	return SarAtom(trim(m), j.lists, j.ints);
}

inline SarAtom delta0_and(const SarAtom &a, const SarAtom &b) { return delta0_and({a, b}); }
inline SarAtom delta0_or(const SarAtom &a, const SarAtom &b) { return delta0_or({a, b}); }

// within_conv: the caller only ever runs the result on convolution words,
// so the complement need not be cut back to them.
inline SarAtom delta0_not(const SarAtom &a, bool within_conv = false)
{
	SsNfa c = complement(a.nfa());
	if (!within_conv)
		c = restrict_to_convolutions(c);
	return SarAtom(trim(c), a.lists, a.ints);
}

// ---------------------------------------------------------------------------
// Arithmetic as an atom: every integer variable v is read as the singleton
// list [v] on its own track, every head(T) reads the first letter of T.

inline bool contains_head(const IntTerm &t)
{
	using K = IntTerm::Kind;
	switch (t.kind()) {
	case K::Head: return true;
	case K::Add:
	case K::Sub: return contains_head(t.lhs()) || contains_head(t.rhs());
	case K::MulConst: return contains_head(t.lhs());
	default: return false;
	}
}

inline SarAtom lift_arith(CmpOp op, const IntTerm &a, const IntTerm &b)
{
	std::vector<ListTerm> lists;
	std::vector<std::size_t> head_tracks;
	bool has_vars = false;
	std::function<GuardTerm(const IntTerm &, const std::map<std::size_t, bool> &)> conv;
	std::function<void(const IntTerm &)> scan = [&](const IntTerm &t) {
		using K = IntTerm::Kind;
		switch (t.kind()) {
		case K::Var:
			detail::index_of(lists, cons(t, nil()));
			has_vars = true;
			break;
		case K::Head: {
			auto i = detail::index_of(lists, t.list());
			if (std::find(head_tracks.begin(), head_tracks.end(), i) == head_tracks.end())
				head_tracks.push_back(i);
			break;
		}
		case K::Add:
		case K::Sub:
			scan(t.lhs());
			scan(t.rhs());
			break;
		case K::MulConst: scan(t.lhs()); break;
		case K::Const: break;
		}
	};
	scan(a);
	scan(b);
	// `padded` says, per head track, whether its first letter is padding.
	conv = [&](const IntTerm &t, const std::map<std::size_t, bool> &padded) -> GuardTerm {
		using K = IntTerm::Kind;
		switch (t.kind()) {
		case K::Var: return GuardTerm::track(detail::index_of(lists, cons(t, nil())));
		case K::Const: return GuardTerm::constant(t.value());
		case K::Add: return conv(t.lhs(), padded) + conv(t.rhs(), padded);
		case K::Sub: return conv(t.lhs(), padded) - conv(t.rhs(), padded);
		case K::MulConst: return t.value() * conv(t.lhs(), padded);
		case K::Head: {
			auto i = detail::index_of(lists, t.list());
			return padded.at(i) ? GuardTerm::constant(0) : GuardTerm::track(i);
		}
		}
		return GuardTerm::constant(0);
	};
	std::vector<GuardFormula> cases;
	std::size_t h = head_tracks.size();
	GuardFormula at_empty = GuardFormula::bottom();
	for (unsigned long long mask = 0; mask < (1ull << h); ++mask) {
		std::map<std::size_t, bool> padded;
		std::vector<GuardFormula> side;
		for (std::size_t i = 0; i < h; ++i) {
			bool p = (mask >> i) & 1;
			padded[head_tracks[i]] = p;
			side.push_back(p ? is_pad(l(head_tracks[i])) : !is_pad(l(head_tracks[i])));
		}
		side.push_back(GuardFormula::cmp(op, conv(a, padded), conv(b, padded)));
		cases.push_back(GuardFormula::conj(side));
		if (mask + 1 == (1ull << h)) {
			// every head track padded: also decides the empty word
			std::vector<PaddedValue> none(lists.size(), pad);
			bool holds = eval_guard(GuardFormula::cmp(op, conv(a, padded), conv(b, padded)),
			                        none, {});
			at_empty = holds ? GuardFormula::top() : GuardFormula::bottom();
		}
	}
	SsNfa m(lists.size(), 0);
	auto q0 = m.add_state("q0", true, !has_vars && at_empty.is_true());
	auto q1 = m.add_state("q1", false, true);
	m.add_transition(q0, GuardFormula::disj(cases), q1);
	m.add_transition(q1, GuardFormula::top(), q1);
	return SarAtom(std::move(m), std::move(lists), {});
}

// Equality of two lists: letters agree everywhere (both padded after the
// shorter one ends is impossible in a convolution, so plain equality works).
inline SarAtom list_eq_atom(const ListTerm &a, const ListTerm &b)
{
	if (a == b) {
		SsNfa m(1, 0);
		auto q = m.add_state("q", true, true);
		m.add_transition(q, GuardFormula::top(), q);
		return SarAtom(std::move(m), {a}, {});
	}
	SsNfa m(2, 0);
	auto q = m.add_state("q", true, true);
	m.add_transition(q, eq(l(0), l(1)), q);
	return SarAtom(std::move(m), {a, b}, {});
}

inline SarAtom constant_atom(bool value)
{
	SsNfa m(0, 0);
	m.add_state("q", true, value);
	return SarAtom(std::move(m), {}, {});
}

// Compiles a quantifier-free formula (as produced by prenex) into a single
// atom. Negated atoms are complemented; the result is only meaningful on
// convolution words, which is all an atom is ever evaluated on.
inline SarAtom compile_delta0(const SarFormula &f)
{
	using K = SarFormula::Kind;
	switch (f.kind()) {
	case K::True: return constant_atom(true);
	case K::False: return constant_atom(false);
	case K::Atom: return f.atom();
	case K::Arith: return lift_arith(f.op(), f.ints()[0], f.ints()[1]);
	case K::ListEq: return list_eq_atom(f.lists()[0], f.lists()[1]);
	case K::Not: {
		auto &g = f.child();
		if (g.kind() == K::Arith) {
			// integers are never padded here, so the complementary operator
			// is exact and avoids a complement construction
			static const std::map<CmpOp, CmpOp> flip{
				{CmpOp::Eq, CmpOp::Ne}, {CmpOp::Ne, CmpOp::Eq}, {CmpOp::Lt, CmpOp::Ge},
				{CmpOp::Le, CmpOp::Gt}, {CmpOp::Gt, CmpOp::Le}, {CmpOp::Ge, CmpOp::Lt}};
			return lift_arith(flip.at(g.op()), g.ints()[0], g.ints()[1]);
		}
		if (g.kind() == K::ListEq && !(g.lists()[0] == g.lists()[1])) {
			SsNfa m(2, 0);
			auto q = m.add_state("q", true, false);
			auto d = m.add_state("d", false, true);
			m.add_transition(q, eq(l(0), l(1)), q);
			m.add_transition(q, !eq(l(0), l(1)), d);
			m.add_transition(d, GuardFormula::top(), d);
			return SarAtom(std::move(m), {g.lists()[0], g.lists()[1]}, {});
		}
		// push negations to the leaves so that only atoms get complemented
		if (g.kind() == K::Not)
			return compile_delta0(g.child());
		if (g.kind() == K::And || g.kind() == K::Or) {
			std::vector<SarFormula> neg;
			for (auto &h : g.children())
				neg.push_back(!h);
			return compile_delta0(g.kind() == K::And ? SarFormula::disj(std::move(neg))
			                                         : SarFormula::conj(std::move(neg)));
		}
		return delta0_not(compile_delta0(g), true);
	}
	case K::And:
	case K::Or: {
		std::vector<SarAtom> parts;
		for (auto &g : f.children())
			parts.push_back(compile_delta0(g));
		return f.kind() == K::And ? delta0_and(parts) : delta0_or(parts);
	}
	case K::Pred:
	case K::Exists:
		throw ContractViolation("compile_delta0 expects a prenex matrix");
	}
	return constant_atom(false);
}

} // namespace sar
