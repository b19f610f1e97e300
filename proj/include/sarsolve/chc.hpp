/* SPDX-License-Identifier: Apache-2.0 */

// Linear CHCs over padded integers from a normal atom, their SMT-LIB
// rendering with (flag, value) pairs, and a bounded SLD refuter.
//
// Variable layout inside clause constraints: tracks 0..k-1 are the body
// letters u, tracks k..2k-1 the head letters v. Parameters 0..n-1 are the
// predicate parameters, n.. are extra formula variables that only occur in
// initial clauses (first letters fixed by a kept cons).

#pragma once

#include "normalize.hpp"

#include <deque>
#include <regex>

namespace sar {

struct ChcClause {
	enum class Kind { Init, Step, Goal };
	Kind kind;
	std::optional<StateId> head; // Init, Step
	std::optional<StateId> body; // Step, Goal
	GuardFormula constraint;
	std::optional<std::size_t> transition; // Step: index into the automaton
};

struct ChcSystem {
	std::size_t k = 0;
	std::vector<std::string> predicates; // one per automaton state
	std::vector<std::string> params;     // shared with the formula
	std::vector<std::string> extras;
	std::vector<ChcClause> clauses;

	std::size_t n() const { return params.size(); }
	std::size_t num_vars() const { return params.size() + extras.size(); }
};

namespace detail {

inline std::string predicate_name(const std::string &state, std::set<std::string> &used)
{
	std::string s = "I_";
	for (char ch : state)
		s += std::isalnum(static_cast<unsigned char>(ch)) ? ch : '_';
	std::string base = s;
	for (int i = 1; used.count(s); ++i)
		s = base + "_" + std::to_string(i);
	used.insert(s);
	return s;
}

} // namespace detail

inline GuardTerm u_var(std::size_t i) { return l(i); }
inline GuardTerm v_var(std::size_t k, std::size_t i) { return l(k + i); }

inline ChcSystem to_chc(const NormalAtom &a)
{
	if (!is_normal(a))
		throw ContractViolation("to_chc: atom is not normal: " + to_string(a));
	const SsNfa &m = a.automaton;
	const std::size_t k = a.lists.size();
	ChcSystem sys;
	sys.k = k;
	sys.params = a.ints;
	std::set<std::string> used;
	for (StateId q = 0; q < m.num_states(); ++q)
		sys.predicates.push_back(detail::predicate_name(m.name(q), used));

	std::vector<std::string> all_vars = a.ints;
	for (auto &t : a.lists)
		if (t.kind == NormalListArg::Kind::Cons) {
			std::function<void(const IntTerm &)> walk = [&](const IntTerm &e) {
				using K = IntTerm::Kind;
				if (e.kind() == K::Var) {
					if (std::find(all_vars.begin(), all_vars.end(), e.name()) == all_vars.end()) {
						all_vars.push_back(e.name());
						sys.extras.push_back(e.name());
					}
				} else if (e.kind() == K::Add || e.kind() == K::Sub) {
					walk(e.lhs());
					walk(e.rhs());
				} else if (e.kind() == K::MulConst) {
					walk(e.lhs());
				}
			};
			walk(*t.head);
		}

	// (i, j): track j reads the list of track i shifted by one.
	std::vector<std::pair<std::size_t, std::size_t>> shift, tail_pairs;
	std::vector<std::size_t> nils, cons_nil;
	for (std::size_t i = 0; i < k; ++i) {
		auto &ti = a.lists[i];
		using K = NormalListArg::Kind;
		if (ti.kind == K::Nil)
			nils.push_back(i);
		if (ti.cons_of_nil())
			cons_nil.push_back(i);
		for (std::size_t j = 0; j < k; ++j) {
			auto &tj = a.lists[j];
			if (tj.kind != K::Tail || ti.var.empty() || ti.var != tj.var)
				continue;
			if (ti.kind == K::Tail && tj.depth == ti.depth + 1) {
				shift.emplace_back(i, j);
				tail_pairs.emplace_back(i, j);
			}
			if (ti.kind == K::Cons && tj.depth == ti.depth)
				shift.emplace_back(i, j);
		}
	}

	std::vector<GuardFormula> ed_parts;
	for (std::size_t i = 0; i < k; ++i)
		ed_parts.push_back(is_pad(u_var(i)));
	auto ed = GuardFormula::conj(ed_parts);

	for (auto q : m.initial()) {
		std::vector<GuardFormula> cs;
		for (auto i : nils)
			cs.push_back(is_pad(v_var(k, i)));
		for (auto [i, j] : tail_pairs)
			cs.push_back(implies(is_pad(v_var(k, i)), is_pad(v_var(k, j))));
		for (std::size_t i = 0; i < k; ++i)
			if (a.lists[i].kind == NormalListArg::Kind::Cons)
				cs.push_back(eq(v_var(k, i), linearize(*a.lists[i].head, all_vars)));
		sys.clauses.push_back({ChcClause::Kind::Init, q, std::nullopt,
		                       GuardFormula::conj(cs), std::nullopt});
	}
	for (std::size_t ti = 0; ti < m.transitions().size(); ++ti) {
		auto &t = m.transitions()[ti];
		std::vector<GuardFormula> cs{t.guard};
		for (auto [i, j] : shift)
			cs.push_back(eq(v_var(k, i), u_var(j)) ||
			             (is_pad(v_var(k, i)) && is_pad(u_var(j))));
		for (auto i : cons_nil)
			cs.push_back(is_pad(v_var(k, i)));
		for (std::size_t i = 0; i < k; ++i)
			cs.push_back(implies(is_pad(u_var(i)), is_pad(v_var(k, i))));
		cs.push_back(!ed);
		sys.clauses.push_back({ChcClause::Kind::Step, t.to, t.from, GuardFormula::conj(cs), ti});
	}
	for (auto q : m.final())
		sys.clauses.push_back({ChcClause::Kind::Goal, std::nullopt, q, ed, std::nullopt});
	return sys;
}

// ---------------------------------------------------------------------------
// Human-readable listing

inline VarNamer clause_namer(const ChcSystem &s)
{
	return [&s](bool is_track, std::size_t i) -> std::string {
		if (is_track)
			return i < s.k ? "u" + std::to_string(i) : "v" + std::to_string(i - s.k);
		return i < s.params.size() ? s.params[i] : s.extras.at(i - s.params.size());
	};
}

inline std::string predicate_app(const ChcSystem &s, StateId q, char letter)
{
	std::string r = s.predicates.at(q) + "(";
	bool first = true;
	for (std::size_t i = 0; i < s.k; ++i) {
		r += (first ? "" : ", ") + std::string(1, letter) + std::to_string(i);
		first = false;
	}
	for (auto &p : s.params) {
		r += (first ? "" : ", ") + p;
		first = false;
	}
	return r + ")";
}

inline std::string to_string(const ChcSystem &s, const ChcClause &c)
{
	auto name = clause_namer(s);
	std::string head = c.head ? predicate_app(s, *c.head, 'v') : "false";
	std::vector<std::string> body;
	if (c.body)
		body.push_back(predicate_app(s, *c.body, 'u'));
	if (c.constraint.kind() == GuardFormula::Kind::And) {
		for (auto &g : c.constraint.children())
			body.push_back(to_string(g, name));
	} else if (!c.constraint.is_true() || body.empty()) {
		body.push_back(to_string(c.constraint, name));
	}
	std::string r = head + " <= ";
	for (std::size_t i = 0; i < body.size(); ++i)
		r += (i ? " && " : "") + body[i];
	return r;
}

inline std::string to_string(const ChcSystem &s)
{
	std::string r;
	for (auto &c : s.clauses)
		r += to_string(s, c) + "\n";
	return r;
}

// ---------------------------------------------------------------------------
// Flagged compilation: track i becomes the parameter pair (2i: flag, 2i+1:
// value) with flag 1 meaning padding; parameter j becomes 2k + j. The result
// mentions no tracks, so it is evaluated without any padding at all.

inline GuardFormula compile_guard_flagged(const GuardFormula &f, std::size_t k)
{
	auto term = [k](const GuardTerm &t) {
		return substitute(
			t, [](std::size_t i) { return x(2 * i + 1); },
			[k](std::size_t j) { return x(2 * k + j); });
	};
	auto flags_of = [](const GuardTerm &t) {
		std::set<std::size_t> tr, pr;
		collect_vars(t, tr, pr);
		return tr;
	};
	using K = GuardFormula::Kind;
	switch (f.kind()) {
	case K::True:
	case K::False: return f;
	case K::IsPad: {
		std::vector<GuardFormula> ds;
		for (auto i : flags_of(f.term()))
			ds.push_back(eq(x(2 * i), c(1)));
		return GuardFormula::disj(ds);
	}
	case K::Cmp: {
		std::vector<GuardFormula> cs;
		auto tr = flags_of(f.term(0));
		auto more = flags_of(f.term(1));
		tr.insert(more.begin(), more.end());
		for (auto i : tr)
			cs.push_back(eq(x(2 * i), c(0)));
		cs.push_back(GuardFormula::cmp(f.op(), term(f.term(0)), term(f.term(1))));
		return GuardFormula::conj(cs);
	}
	case K::Not: return !compile_guard_flagged(f.child(), k);
	case K::And:
	case K::Or: {
		std::vector<GuardFormula> cs;
		for (auto &g : f.children())
			cs.push_back(compile_guard_flagged(g, k));
		return f.kind() == K::And ? GuardFormula::conj(cs) : GuardFormula::disj(cs);
	}
	}
	return f;
}

// Parameter vector for a compiled formula: flags and values, then params.
inline std::vector<Int> flagged_values(std::span<const PaddedValue> tracks,
                                       std::span<const Int> params)
{
	std::vector<Int> out;
	for (auto &v : tracks) {
		out.push_back(v.is_pad() ? 1 : 0);
		out.push_back(v.is_pad() ? 0 : v.value());
	}
	out.insert(out.end(), params.begin(), params.end());
	return out;
}

// ---------------------------------------------------------------------------
// SMT-LIB2 HORN

struct SmtOptions {
	// Flags as Int in {0,1} instead of Bool.
	bool int_flags = false;
};

namespace detail {

inline std::string smt_symbol(const std::string &name)
{
	static const std::set<std::string> reserved{
		"and", "or", "not", "true", "false", "forall", "exists", "let", "ite", "=>",
		"distinct", "assert", "check-sat", "declare-fun", "Int", "Bool", "par", "_", "!",
		"as", "match"};
	static const std::regex simple("[A-Za-z_][A-Za-z0-9_.]*");
	static const std::regex generated("[uv][0-9]+[fv]");
	if (std::regex_match(name, simple) && !std::regex_match(name, generated) &&
	    !reserved.count(name))
		return name;
	return "|" + name + "|";
}

inline std::string smt_const(Int v)
{
	return v < 0 ? "(- " + std::to_string(-v) + ")" : std::to_string(v);
}

class SmtPrinter {
public:
	SmtPrinter(const ChcSystem &s, const SmtOptions &o) : s_(s), o_(o) {}

	// Name of parameter i of a compiled clause constraint (2k tracks).
	std::string var(std::size_t i) const
	{
		std::size_t tracks = 2 * s_.k;
		if (i < 2 * tracks) {
			std::size_t t = i / 2;
			std::string base = t < s_.k ? "u" + std::to_string(t) : "v" + std::to_string(t - s_.k);
			return base + (i % 2 == 0 ? "f" : "v");
		}
		i -= 2 * tracks;
		return smt_symbol(i < s_.params.size() ? s_.params[i] : s_.extras.at(i - s_.params.size()));
	}

	bool is_flag(std::size_t i) const { return i < 4 * s_.k && i % 2 == 0; }

	std::string term(const GuardTerm &t) const
	{
		using K = GuardTerm::Kind;
		switch (t.kind()) {
		case K::Param: return var(t.index());
		case K::Const: return smt_const(t.value());
		case K::Add: return "(+ " + term(t.lhs()) + " " + term(t.rhs()) + ")";
		case K::Sub: return "(- " + term(t.lhs()) + " " + term(t.rhs()) + ")";
		case K::MulConst: return "(* " + smt_const(t.value()) + " " + term(t.lhs()) + ")";
		case K::Track: throw ContractViolation("smt: uncompiled track variable");
		}
		return "?";
	}

	std::string formula(const GuardFormula &f) const
	{
		using K = GuardFormula::Kind;
		switch (f.kind()) {
		case K::True: return "true";
		case K::False: return "false";
		case K::Cmp: {
			auto &a = f.term(0);
			auto &b = f.term(1);
			if (!o_.int_flags && f.op() == CmpOp::Eq && a.kind() == GuardTerm::Kind::Param &&
			    is_flag(a.index()) && b.kind() == GuardTerm::Kind::Const)
				return b.value() == 1 ? var(a.index()) : "(not " + var(a.index()) + ")";
			static const std::map<CmpOp, std::string> ops{
				{CmpOp::Eq, "="}, {CmpOp::Ne, "distinct"}, {CmpOp::Lt, "<"},
				{CmpOp::Le, "<="}, {CmpOp::Gt, ">"}, {CmpOp::Ge, ">="}};
			return "(" + ops.at(f.op()) + " " + term(a) + " " + term(b) + ")";
		}
		case K::IsPad: throw ContractViolation("smt: uncompiled ispad");
		case K::Not: return "(not " + formula(f.child()) + ")";
		case K::And:
		case K::Or: {
			std::string r = f.kind() == K::And ? "(and" : "(or";
			for (auto &g : f.children())
				r += " " + formula(g);
			return r + ")";
		}
		}
		return "?";
	}

	std::string app(StateId q, bool head) const
	{
		std::string args;
		std::size_t off = head ? s_.k : 0;
		for (std::size_t i = 0; i < s_.k; ++i)
			args += " " + var(2 * (off + i)) + " " + var(2 * (off + i) + 1);
		for (std::size_t j = 0; j < s_.params.size(); ++j)
			args += " " + var(4 * s_.k + j);
		auto name = smt_symbol(s_.predicates.at(q));
		return args.empty() ? name : "(" + name + args + ")";
	}

private:
	const ChcSystem &s_;
	const SmtOptions &o_;
};

} // namespace detail

inline std::string emit_smtlib_horn(const ChcSystem &s, const SmtOptions &o = {})
{
	detail::SmtPrinter pr(s, o);
	std::ostringstream os;
	os << "(set-logic HORN)\n";
	std::vector<std::pair<std::string, StateId>> decls;
	for (StateId q = 0; q < s.predicates.size(); ++q)
		decls.emplace_back(s.predicates[q], q);
	std::sort(decls.begin(), decls.end());
	const std::string flag_sort = o.int_flags ? "Int" : "Bool";
	for (auto &[name, q] : decls) {
		os << "(declare-fun " << detail::smt_symbol(name) << " (";
		bool first = true;
		for (std::size_t i = 0; i < s.k; ++i) {
			os << (first ? "" : " ") << flag_sort << " Int";
			first = false;
		}
		for (std::size_t j = 0; j < s.params.size(); ++j) {
			os << (first ? "" : " ") << "Int";
			first = false;
		}
		os << ") Bool)\n";
	}
	for (auto &c : s.clauses) {
		auto compiled = compile_guard_flagged(c.constraint, 2 * s.k);
		std::vector<std::string> bound;
		std::vector<std::string> ranges;
		auto bind_track = [&](std::size_t t) {
			bound.push_back("(" + pr.var(2 * t) + " " + flag_sort + ")");
			bound.push_back("(" + pr.var(2 * t + 1) + " Int)");
			if (o.int_flags)
				ranges.push_back("(<= 0 " + pr.var(2 * t) + " 1)");
		};
		if (c.body)
			for (std::size_t i = 0; i < s.k; ++i)
				bind_track(i);
		if (c.head)
			for (std::size_t i = 0; i < s.k; ++i)
				bind_track(s.k + i);
		for (std::size_t j = 0; j < s.params.size(); ++j)
			bound.push_back("(" + pr.var(4 * s.k + j) + " Int)");
		if (c.kind == ChcClause::Kind::Init)
			for (std::size_t e = 0; e < s.extras.size(); ++e)
				bound.push_back("(" + pr.var(4 * s.k + s.params.size() + e) + " Int)");

		std::vector<std::string> body;
		if (c.body)
			body.push_back(pr.app(*c.body, false));
		body.insert(body.end(), ranges.begin(), ranges.end());
		body.push_back(pr.formula(compiled));
		std::string conj = body.size() == 1 ? body[0] : "(and";
		if (body.size() > 1) {
			for (auto &b : body)
				conj += " " + b;
			conj += ")";
		}
		std::string head = c.head ? pr.app(*c.head, true) : "false";
		std::string imp = "(=> " + conj + " " + head + ")";
		if (bound.empty()) {
			os << "(assert " << imp << ")\n";
		} else {
			os << "(assert (forall (";
			for (std::size_t i = 0; i < bound.size(); ++i)
				os << (i ? " " : "") << bound[i];
			os << ") " << imp << "))\n";
		}
	}
	os << "(check-sat)\n";
	return os.str();
}

// ---------------------------------------------------------------------------
// Verdicts

enum class Verdict { Sat, Unsat, Unknown };

inline std::string to_string(Verdict v)
{
	switch (v) {
	case Verdict::Sat: return "SAT";
	case Verdict::Unsat: return "UNSAT";
	case Verdict::Unknown: return "UNKNOWN";
	}
	return "?";
}

inline std::optional<Verdict> parse_verdict(const std::string &s)
{
	if (s == "SAT")
		return Verdict::Sat;
	if (s == "UNSAT")
		return Verdict::Unsat;
	if (s == "UNKNOWN")
		return Verdict::Unknown;
	return std::nullopt;
}

struct BackendVerdict {
	Verdict verdict = Verdict::Unknown;
	std::string diagnostic;
};

// The CHCs are unsatisfiable exactly when the formula has a model, so the
// backend answer is inverted. Anything else is inconclusive.
inline BackendVerdict interpret_backend_result(const std::string &output)
{
	std::istringstream is(output);
	std::string line, last;
	while (std::getline(is, line))
		if (line.find_first_not_of(" \t\r") != std::string::npos)
			last = line;
	std::istringstream ls(last);
	std::string tok;
	ls >> tok;
	if (tok == "unsat")
		return {Verdict::Sat, ""};
	if (tok == "sat")
		return {Verdict::Unsat, ""};
	if (tok == "unknown" || tok == "timeout")
		return {Verdict::Unknown, tok};
	return {Verdict::Unknown, "unrecognised backend output: " + (last.empty() ? "<empty>" : last)};
}

// ---------------------------------------------------------------------------
// Bounded SLD refutation over concrete letters

struct SldBounds {
	std::size_t max_depth = 8; // clauses per derivation
	Int lo = -2, hi = 2;
	std::size_t max_nodes = 2'000'000;
};

// Resolution order: states[0] is the body of the goal clause, states.back()
// the head of the initial clause. letters[i] are the letters of states[i].
struct Derivation {
	std::vector<std::size_t> clauses;
	std::vector<StateId> states;
	std::vector<Letter> letters;
	std::vector<Int> vars; // params then extras

	std::size_t length() const { return clauses.size(); }
};

namespace detail {

inline bool clause_holds(const ChcSystem &s, const ChcClause &c, const Letter &u, const Letter &v,
                         std::span<const Int> vars)
{
	std::vector<PaddedValue> tr(2 * s.k, pad);
	for (std::size_t i = 0; i < s.k; ++i) {
		if (c.body)
			tr[i] = u[i];
		if (c.head)
			tr[s.k + i] = v[i];
	}
	return eval_guard(c.constraint, tr, vars);
}

} // namespace detail

// Checks every resolution step of d against its clause.
inline bool replay(const ChcSystem &s, const Derivation &d)
{
	if (d.clauses.size() < 2 || d.states.size() + 1 != d.clauses.size() ||
	    d.letters.size() != d.states.size() || d.vars.size() != s.num_vars())
		return false;
	const Letter none(s.k, pad);
	auto &goal = s.clauses.at(d.clauses.front());
	if (goal.kind != ChcClause::Kind::Goal || goal.body != d.states[0] ||
	    !detail::clause_holds(s, goal, d.letters[0], none, d.vars))
		return false;
	for (std::size_t i = 1; i + 1 < d.clauses.size(); ++i) {
		auto &c = s.clauses.at(d.clauses[i]);
		if (c.kind != ChcClause::Kind::Step || c.head != d.states[i - 1] || c.body != d.states[i] ||
		    !detail::clause_holds(s, c, d.letters[i], d.letters[i - 1], d.vars))
			return false;
	}
	auto &init = s.clauses.at(d.clauses.back());
	return init.kind == ChcClause::Kind::Init && init.head == d.states.back() &&
	       detail::clause_holds(s, init, none, d.letters.back(), d.vars);
}

// Input word read along the derivation, first letter first.
inline SyncWord derivation_word(const Derivation &d)
{
	SyncWord w;
	for (std::size_t i = d.letters.size(); i-- > 1;)
		w.push_back(d.letters[i]);
	return w;
}

// Breadth-first, so the derivation returned is a shortest one within the
// bounds. Parameter assignments are enumerated exhaustively.
inline std::optional<Derivation> bounded_sld_refute(const ChcSystem &s, const SldBounds &b = {})
{
	auto letters = all_letters(s.k, b.lo, b.hi);
	const Letter none(s.k, pad);
	std::vector<std::vector<std::size_t>> into(s.predicates.size());
	std::vector<std::size_t> goals;
	for (std::size_t i = 0; i < s.clauses.size(); ++i) {
		auto &c = s.clauses[i];
		if (c.kind == ChcClause::Kind::Goal)
			goals.push_back(i);
		else
			into.at(*c.head).push_back(i);
	}
	if (goals.empty())
		return std::nullopt;

	std::optional<Derivation> best;
	std::size_t nodes_total = 0;
	const std::size_t nv = s.num_vars();
	std::vector<Int> vars(nv, b.lo);
	for (;;) {
		// node = (state, letter index); parent links for reconstruction
		struct Node {
			StateId q;
			std::size_t letter;
			std::size_t clause;
			std::size_t parent;
			std::size_t depth;
		};
		std::vector<Node> nodes;
		std::set<std::pair<StateId, std::size_t>> seen;
		std::deque<std::size_t> queue;
		for (auto gi : goals)
			for (std::size_t li = 0; li < letters.size(); ++li) {
				auto q = *s.clauses[gi].body;
				if (seen.count({q, li}) ||
				    !detail::clause_holds(s, s.clauses[gi], letters[li], none, vars))
					continue;
				seen.insert({q, li});
				nodes.push_back({q, li, gi, std::size_t(-1), 1});
				queue.push_back(nodes.size() - 1);
			}
		std::optional<std::pair<std::size_t, std::size_t>> found; // node, init clause
		std::size_t limit = best ? best->length() - 1 : b.max_depth;
		while (!queue.empty() && !found) {
			auto ni = queue.front();
			queue.pop_front();
			Node nd = nodes[ni];
			if (nd.depth + 1 > limit)
				continue;
			for (auto ci : into[nd.q]) {
				auto &c = s.clauses[ci];
				if (c.kind == ChcClause::Kind::Init) {
					if (detail::clause_holds(s, c, none, letters[nd.letter], vars)) {
						found = std::make_pair(ni, ci);
						break;
					}
					continue;
				}
				if (nd.depth + 2 > limit)
					continue;
				for (std::size_t li = 0; li < letters.size(); ++li) {
					if (seen.count({*c.body, li}) ||
					    !detail::clause_holds(s, c, letters[li], letters[nd.letter], vars))
						continue;
					seen.insert({*c.body, li});
					nodes.push_back({*c.body, li, ci, ni, nd.depth + 1});
					queue.push_back(nodes.size() - 1);
				}
			}
			if (b.max_nodes && nodes_total + nodes.size() > b.max_nodes)
				break;
		}
		nodes_total += nodes.size();
		if (found) {
			// The chain from the found node back to the goal.
			Derivation d;
			std::vector<std::size_t> chain;
			for (auto ni = found->first; ni != std::size_t(-1); ni = nodes[ni].parent)
				chain.push_back(ni);
			std::reverse(chain.begin(), chain.end());
			for (auto ni : chain) {
				d.clauses.push_back(nodes[ni].clause);
				d.states.push_back(nodes[ni].q);
				d.letters.push_back(letters[nodes[ni].letter]);
			}
			d.clauses.push_back(found->second);
			d.vars = vars;
			if (!best || d.length() < best->length())
				best = std::move(d);
		}
		if (b.max_nodes && nodes_total > b.max_nodes)
			break;
		std::size_t i = 0;
		for (; i < nv; ++i) {
			if (++vars[i] <= b.hi)
				break;
			vars[i] = b.lo;
		}
		if (i == nv)
			break;
	}
	return best;
}

// Lists and integers read off a derivation of to_chc(a).
inline Assignment derivation_assignment(const NormalAtom &a, const ChcSystem &s,
                                        const Derivation &d)
{
	Assignment out;
	for (std::size_t j = 0; j < s.params.size(); ++j)
		out.ints[s.params[j]] = d.vars.at(j);
	for (std::size_t e = 0; e < s.extras.size(); ++e)
		out.ints[s.extras[e]] = d.vars.at(s.params.size() + e);
	auto w = derivation_word(d);
	for (std::size_t i = 0; i < a.lists.size(); ++i) {
		auto &t = a.lists[i];
		if (t.kind != NormalListArg::Kind::Tail || t.depth != 0)
			continue;
		IntList xs;
		for (auto &letter : w) {
			if (letter[i].is_pad())
				break;
			xs.push_back(letter[i].value());
		}
		out.lists[t.var] = xs;
	}
	return out;
}

} // namespace sar
