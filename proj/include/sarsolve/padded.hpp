/* SPDX-License-Identifier: Apache-2.0 */

// Padded integers and guard formulas.
//
// A guard is a quantifier-free linear integer formula whose free variables
// are track variables l0..l{k-1} (bound to the current letter, which may be
// the padding symbol) and parameter variables x0..x{n-1} (always integers).
// Arithmetic on a padded operand yields padding; every comparison involving
// padding is false; ispad(t) holds exactly when t evaluates to padding.
// Connectives stay classical, so !(1 >= pad) is true while (1 < pad) is not.

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sar {

using Int = std::int64_t;

struct ContractViolation : std::logic_error {
	using std::logic_error::logic_error;
};

struct InputError : std::runtime_error {
	using std::runtime_error::runtime_error;
};

class PaddedValue {
public:
	PaddedValue() = default; // padding
	PaddedValue(Int v) : value_(v) {}

	static PaddedValue pad() { return {}; }

	bool is_pad() const { return !value_.has_value(); }
	Int value() const
	{
		if (!value_)
			throw ContractViolation("value() on padding");
		return *value_;
	}

	friend bool operator==(const PaddedValue &, const PaddedValue &) = default;
	friend auto operator<=>(const PaddedValue &a, const PaddedValue &b)
	{
		// padding sorts after every integer
		if (a.is_pad() || b.is_pad())
			return a.is_pad() <=> b.is_pad();
		return *a.value_ <=> *b.value_;
	}

	std::string str() const { return is_pad() ? "#" : std::to_string(*value_); }

private:
	std::optional<Int> value_;
};

inline const PaddedValue pad = PaddedValue::pad();

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

inline const char *to_string(CmpOp op)
{
	switch (op) {
	case CmpOp::Eq: return "=";
	case CmpOp::Ne: return "!=";
	case CmpOp::Lt: return "<";
	case CmpOp::Le: return "<=";
	case CmpOp::Gt: return ">";
	case CmpOp::Ge: return ">=";
	}
	return "?";
}

inline bool apply(CmpOp op, Int a, Int b)
{
	switch (op) {
	case CmpOp::Eq: return a == b;
	case CmpOp::Ne: return a != b;
	case CmpOp::Lt: return a < b;
	case CmpOp::Le: return a <= b;
	case CmpOp::Gt: return a > b;
	case CmpOp::Ge: return a >= b;
	}
	return false;
}

// ---------------------------------------------------------------------------
// GuardTerm

class GuardTerm {
public:
	enum class Kind { Track, Param, Const, Add, Sub, MulConst };

private:
	struct Node {
		Kind kind;
		Int num;
		std::vector<GuardTerm> args;
	};

public:

	GuardTerm() : GuardTerm(constant(0)) {}

	static GuardTerm track(std::size_t i) { return make(Kind::Track, Int(i)); }
	static GuardTerm param(std::size_t j) { return make(Kind::Param, Int(j)); }
	static GuardTerm constant(Int c) { return make(Kind::Const, c); }

	friend GuardTerm operator+(GuardTerm a, GuardTerm b)
	{
		return make(Kind::Add, 0, std::move(a), std::move(b));
	}
	friend GuardTerm operator-(GuardTerm a, GuardTerm b)
	{
		return make(Kind::Sub, 0, std::move(a), std::move(b));
	}
	friend GuardTerm operator*(Int c, GuardTerm t)
	{
		return make(Kind::MulConst, c, std::move(t), constant(0));
	}

	Kind kind() const { return node_->kind; }
	std::size_t index() const { return std::size_t(node_->num); }
	Int value() const { return node_->num; } // Const value or MulConst factor
	const GuardTerm &lhs() const { return node_->args[0]; }
	const GuardTerm &rhs() const { return node_->args[1]; }

	bool is_leaf() const
	{
		return kind() == Kind::Track || kind() == Kind::Param ||
		       kind() == Kind::Const;
	}

	friend bool operator==(const GuardTerm &a, const GuardTerm &b)
	{
		if (a.node_ == b.node_)
			return true;
		if (a.kind() != b.kind() || a.node_->num != b.node_->num)
			return false;
		if (a.is_leaf())
			return true;
		return a.lhs() == b.lhs() && a.rhs() == b.rhs();
	}

private:
	static GuardTerm make(Kind k, Int num, GuardTerm a = {nullptr},
	                      GuardTerm b = {nullptr});
	GuardTerm(std::nullptr_t) {}
	std::shared_ptr<const Node> node_;
};

inline GuardTerm GuardTerm::make(Kind k, Int num, GuardTerm a, GuardTerm b)
{
	GuardTerm t{nullptr};
	t.node_ = std::make_shared<const Node>(Node{k, num, std::vector<GuardTerm>{std::move(a), std::move(b)}});
	return t;
}

inline GuardTerm operator+(GuardTerm a, Int c) { return a + GuardTerm::constant(c); }
inline GuardTerm operator-(GuardTerm a, Int c) { return a - GuardTerm::constant(c); }

inline GuardTerm l(std::size_t i) { return GuardTerm::track(i); }
inline GuardTerm x(std::size_t j) { return GuardTerm::param(j); }
inline GuardTerm c(Int v) { return GuardTerm::constant(v); }

// ---------------------------------------------------------------------------
// GuardFormula

class GuardFormula {
public:
	enum class Kind { True, False, Cmp, IsPad, Not, And, Or };

	GuardFormula() : GuardFormula(top()) {}

	static GuardFormula top() { return make(Kind::True); }
	static GuardFormula bottom() { return make(Kind::False); }
	static GuardFormula cmp(CmpOp op, GuardTerm a, GuardTerm b)
	{
		auto f = make(Kind::Cmp);
		f.mut().op = op;
		f.mut().terms = {std::move(a), std::move(b)};
		return f;
	}
	static GuardFormula is_pad(GuardTerm t)
	{
		auto f = make(Kind::IsPad);
		f.mut().terms = {std::move(t)};
		return f;
	}

	// Smart constructors: fold constants, flatten nested connectives and
	// detect a conjunct next to its own negation.
	static GuardFormula negate(const GuardFormula &f);
	static GuardFormula conj(std::vector<GuardFormula> fs);
	static GuardFormula disj(std::vector<GuardFormula> fs);

	Kind kind() const { return node_->kind; }
	CmpOp op() const { return node_->op; }
	const GuardTerm &term(std::size_t i = 0) const { return node_->terms.at(i); }
	const std::vector<GuardFormula> &children() const { return node_->children; }
	const GuardFormula &child() const { return node_->children.at(0); }

	bool is_true() const { return kind() == Kind::True; }
	bool is_false() const { return kind() == Kind::False; }

	friend bool operator==(const GuardFormula &a, const GuardFormula &b)
	{
		if (a.node_ == b.node_)
			return true;
		if (a.kind() != b.kind())
			return false;
		switch (a.kind()) {
		case Kind::True:
		case Kind::False:
			return true;
		case Kind::Cmp:
			return a.op() == b.op() && a.term(0) == b.term(0) &&
			       a.term(1) == b.term(1);
		case Kind::IsPad:
			return a.term() == b.term();
		default:
			return a.children() == b.children();
		}
	}

private:
	struct Node {
		Kind kind;
		CmpOp op = CmpOp::Eq;
		std::vector<GuardTerm> terms;
		std::vector<GuardFormula> children;
	};
	static GuardFormula make(Kind k)
	{
		GuardFormula f{nullptr};
		f.node_ = std::make_shared<Node>(Node{k, CmpOp::Eq, {}, {}});
		return f;
	}
	Node &mut() { return const_cast<Node &>(*node_); }
	GuardFormula(std::nullptr_t) {}
	static GuardFormula nary(Kind k, std::vector<GuardFormula> fs);

	std::shared_ptr<const Node> node_;
};

inline GuardFormula GuardFormula::negate(const GuardFormula &f)
{
	switch (f.kind()) {
	case Kind::True: return bottom();
	case Kind::False: return top();
	case Kind::Not: return f.child();
	default: {
		auto r = make(Kind::Not);
		r.mut().children = {f};
		return r;
	}
	}
}

inline GuardFormula GuardFormula::nary(Kind k, std::vector<GuardFormula> fs)
{
	// k is And or Or; unit is True for And, False for Or
	const Kind unit = k == Kind::And ? Kind::True : Kind::False;
	const Kind zero = k == Kind::And ? Kind::False : Kind::True;
	std::vector<GuardFormula> flat;
	for (auto &f : fs) {
		if (f.kind() == unit)
			continue;
		if (f.kind() == zero)
			return f;
		if (f.kind() == k) {
			for (auto &g : f.children())
				flat.push_back(g);
		} else {
			flat.push_back(std::move(f));
		}
	}
	std::vector<GuardFormula> uniq;
	for (auto &f : flat) {
		bool dup = false;
		for (auto &g : uniq) {
			if (g == f) {
				dup = true;
				break;
			}
			if ((g.kind() == Kind::Not && g.child() == f) ||
			    (f.kind() == Kind::Not && f.child() == g))
				return make(zero);
		}
		if (!dup)
			uniq.push_back(std::move(f));
	}
	if (uniq.empty())
		return make(unit);
	if (uniq.size() == 1)
		return uniq.front();
	auto r = make(k);
	r.mut().children = std::move(uniq);
	return r;
}

inline GuardFormula GuardFormula::conj(std::vector<GuardFormula> fs)
{
	return nary(Kind::And, std::move(fs));
}

inline GuardFormula GuardFormula::disj(std::vector<GuardFormula> fs)
{
	return nary(Kind::Or, std::move(fs));
}

inline GuardFormula operator&&(GuardFormula a, GuardFormula b)
{
	return GuardFormula::conj({std::move(a), std::move(b)});
}
inline GuardFormula operator||(GuardFormula a, GuardFormula b)
{
	return GuardFormula::disj({std::move(a), std::move(b)});
}
inline GuardFormula operator!(const GuardFormula &a) { return GuardFormula::negate(a); }

inline GuardFormula implies(GuardFormula a, GuardFormula b) { return !a || std::move(b); }

inline GuardFormula eq(GuardTerm a, GuardTerm b) { return GuardFormula::cmp(CmpOp::Eq, a, b); }
inline GuardFormula ne(GuardTerm a, GuardTerm b) { return GuardFormula::cmp(CmpOp::Ne, a, b); }
inline GuardFormula lt(GuardTerm a, GuardTerm b) { return GuardFormula::cmp(CmpOp::Lt, a, b); }
inline GuardFormula le(GuardTerm a, GuardTerm b) { return GuardFormula::cmp(CmpOp::Le, a, b); }
inline GuardFormula gt(GuardTerm a, GuardTerm b) { return GuardFormula::cmp(CmpOp::Gt, a, b); }
inline GuardFormula ge(GuardTerm a, GuardTerm b) { return GuardFormula::cmp(CmpOp::Ge, a, b); }
inline GuardFormula is_pad(GuardTerm t) { return GuardFormula::is_pad(std::move(t)); }

// ---------------------------------------------------------------------------
// Evaluation

inline PaddedValue eval_term(const GuardTerm &t, std::span<const PaddedValue> tracks,
                             std::span<const Int> params)
{
	using K = GuardTerm::Kind;
	switch (t.kind()) {
	case K::Track:
		if (t.index() >= tracks.size())
			throw ContractViolation("track index l" + std::to_string(t.index()) +
			                        " out of range");
		return tracks[t.index()];
	case K::Param:
		if (t.index() >= params.size())
			throw ContractViolation("parameter index x" + std::to_string(t.index()) +
			                        " out of range");
		return params[t.index()];
	case K::Const:
		return t.value();
	case K::MulConst: {
		auto v = eval_term(t.lhs(), tracks, params);
		return v.is_pad() ? pad : PaddedValue(t.value() * v.value());
	}
	case K::Add:
	case K::Sub: {
		auto a = eval_term(t.lhs(), tracks, params);
		auto b = eval_term(t.rhs(), tracks, params);
		if (a.is_pad() || b.is_pad())
			return pad;
		return t.kind() == K::Add ? a.value() + b.value() : a.value() - b.value();
	}
	}
	return pad;
}

inline bool eval_guard(const GuardFormula &f, std::span<const PaddedValue> tracks,
                       std::span<const Int> params)
{
	using K = GuardFormula::Kind;
	switch (f.kind()) {
	case K::True: return true;
	case K::False: return false;
	case K::Cmp: {
		auto a = eval_term(f.term(0), tracks, params);
		auto b = eval_term(f.term(1), tracks, params);
		return !a.is_pad() && !b.is_pad() && apply(f.op(), a.value(), b.value());
	}
	case K::IsPad:
		return eval_term(f.term(), tracks, params).is_pad();
	case K::Not:
		return !eval_guard(f.child(), tracks, params);
	case K::And:
		for (auto &g : f.children())
			if (!eval_guard(g, tracks, params))
				return false;
		return true;
	case K::Or:
		for (auto &g : f.children())
			if (eval_guard(g, tracks, params))
				return true;
		return false;
	}
	return false;
}

// ---------------------------------------------------------------------------
// Free variables and substitution

inline void collect_vars(const GuardTerm &t, std::set<std::size_t> &tracks,
                         std::set<std::size_t> &params)
{
	using K = GuardTerm::Kind;
	switch (t.kind()) {
	case K::Track: tracks.insert(t.index()); break;
	case K::Param: params.insert(t.index()); break;
	case K::Const: break;
	case K::MulConst: collect_vars(t.lhs(), tracks, params); break;
	default:
		collect_vars(t.lhs(), tracks, params);
		collect_vars(t.rhs(), tracks, params);
	}
}

inline void collect_vars(const GuardFormula &f, std::set<std::size_t> &tracks,
                         std::set<std::size_t> &params)
{
	using K = GuardFormula::Kind;
	switch (f.kind()) {
	case K::True:
	case K::False: break;
	case K::Cmp:
		collect_vars(f.term(0), tracks, params);
		collect_vars(f.term(1), tracks, params);
		break;
	case K::IsPad: collect_vars(f.term(), tracks, params); break;
	default:
		for (auto &g : f.children())
			collect_vars(g, tracks, params);
	}
}

inline std::set<std::size_t> free_tracks(const GuardFormula &f)
{
	std::set<std::size_t> t, p;
	collect_vars(f, t, p);
	return t;
}

inline std::set<std::size_t> free_params(const GuardFormula &f)
{
	std::set<std::size_t> t, p;
	collect_vars(f, t, p);
	return p;
}

using TermMap = std::function<GuardTerm(std::size_t)>;

inline GuardTerm substitute(const GuardTerm &t, const TermMap &on_track,
                            const TermMap &on_param)
{
	using K = GuardTerm::Kind;
	switch (t.kind()) {
	case K::Track: return on_track(t.index());
	case K::Param: return on_param(t.index());
	case K::Const: return t;
	case K::MulConst: return t.value() * substitute(t.lhs(), on_track, on_param);
	case K::Add:
		return substitute(t.lhs(), on_track, on_param) + substitute(t.rhs(), on_track, on_param);
	case K::Sub:
		return substitute(t.lhs(), on_track, on_param) - substitute(t.rhs(), on_track, on_param);
	}
	return t;
}

// Simultaneous substitution of tracks and parameters.
inline GuardFormula substitute(const GuardFormula &f, const TermMap &on_track,
                               const TermMap &on_param)
{
	using K = GuardFormula::Kind;
	switch (f.kind()) {
	case K::True:
	case K::False: return f;
	case K::Cmp:
		return GuardFormula::cmp(f.op(), substitute(f.term(0), on_track, on_param),
		                         substitute(f.term(1), on_track, on_param));
	case K::IsPad: return is_pad(substitute(f.term(), on_track, on_param));
	case K::Not: return !substitute(f.child(), on_track, on_param);
	case K::And:
	case K::Or: {
		std::vector<GuardFormula> cs;
		for (auto &g : f.children())
			cs.push_back(substitute(g, on_track, on_param));
		return f.kind() == K::And ? GuardFormula::conj(std::move(cs))
		                          : GuardFormula::disj(std::move(cs));
	}
	}
	return f;
}

inline GuardFormula substitute_tracks(const GuardFormula &f,
                                      const std::map<std::size_t, GuardTerm> &mapping)
{
	return substitute(
		f,
		[&](std::size_t i) {
			auto it = mapping.find(i);
			if (it == mapping.end())
				throw ContractViolation("substitute_tracks: l" + std::to_string(i) +
				                        " is not mapped");
			return it->second;
		},
		[](std::size_t j) { return GuardTerm::param(j); });
}

// Renumber variables: track i becomes track track_map[i], parameter j
// becomes parameter param_map[j].
inline GuardFormula reindex(const GuardFormula &f, std::span<const std::size_t> track_map,
                            std::span<const std::size_t> param_map)
{
	return substitute(
		f, [&](std::size_t i) { return GuardTerm::track(track_map[i]); },
		[&](std::size_t j) { return GuardTerm::param(param_map[j]); });
}

// ---------------------------------------------------------------------------
// Printing

// Names a variable occurrence: (is_track, index) -> text.
using VarNamer = std::function<std::string(bool, std::size_t)>;

inline std::string default_var_name(bool is_track, std::size_t i)
{
	return (is_track ? "l" : "x") + std::to_string(i);
}

inline std::string to_string(const GuardTerm &t, const VarNamer &name)
{
	using K = GuardTerm::Kind;
	switch (t.kind()) {
	case K::Track: return name(true, t.index());
	case K::Param: return name(false, t.index());
	case K::Const: return t.value() < 0 ? "(" + std::to_string(t.value()) + ")"
	                                    : std::to_string(t.value());
	case K::MulConst:
		return "(" + std::to_string(t.value()) + " * " + to_string(t.lhs(), name) + ")";
	case K::Add: return "(" + to_string(t.lhs(), name) + " + " + to_string(t.rhs(), name) + ")";
	case K::Sub: return "(" + to_string(t.lhs(), name) + " - " + to_string(t.rhs(), name) + ")";
	}
	return "?";
}

inline std::string to_string(const GuardFormula &f, const VarNamer &name)
{
	using K = GuardFormula::Kind;
	switch (f.kind()) {
	case K::True: return "true";
	case K::False: return "false";
	case K::Cmp:
		return to_string(f.term(0), name) + " " + to_string(f.op()) + " " +
		       to_string(f.term(1), name);
	case K::IsPad: return "ispad(" + to_string(f.term(), name) + ")";
	case K::Not: return "!(" + to_string(f.child(), name) + ")";
	case K::And:
	case K::Or: {
		std::string s = "(";
		const char *sep = f.kind() == K::And ? " && " : " || ";
		for (std::size_t i = 0; i < f.children().size(); ++i) {
			if (i)
				s += sep;
			s += to_string(f.children()[i], name);
		}
		return s + ")";
	}
	}
	return "?";
}

inline std::string to_string(const GuardTerm &t) { return to_string(t, default_var_name); }
inline std::string to_string(const GuardFormula &f) { return to_string(f, default_var_name); }

// ---------------------------------------------------------------------------
// Probe-based satisfiability

struct ProbeSet {
	std::vector<PaddedValue> track_values{-2, -1, 0, 1, 2, pad};
	std::vector<Int> param_values{-2, -1, 0, 1, 2};
};

// Searches probe_set^k x probe_params^n for a model of f. Only the variables
// that actually occur in f are enumerated. A true answer is a witness; a
// false answer proves nothing.
inline bool probe_satisfiable(const GuardFormula &f, std::size_t k, std::size_t n,
                              const ProbeSet &probe = {})
{
	std::set<std::size_t> ft, fp;
	collect_vars(f, ft, fp);
	std::vector<std::size_t> tv(ft.begin(), ft.end()), pv(fp.begin(), fp.end());
	std::size_t kk = std::max(k, ft.empty() ? 0 : *ft.rbegin() + 1);
	std::size_t nn = std::max(n, fp.empty() ? 0 : *fp.rbegin() + 1);
	std::vector<PaddedValue> tracks(kk, pad);
	std::vector<Int> params(nn, 0);
	std::vector<Int> params_probe = probe.param_values;
	if (params_probe.empty())
		params_probe.push_back(0);
	if (probe.track_values.empty())
		return false;

	std::size_t vars = tv.size() + pv.size();
	std::vector<std::size_t> idx(vars, 0);
	for (;;) {
		for (std::size_t i = 0; i < tv.size(); ++i)
			tracks[tv[i]] = probe.track_values[idx[i]];
		for (std::size_t i = 0; i < pv.size(); ++i)
			params[pv[i]] = params_probe[idx[tv.size() + i]];
		if (eval_guard(f, tracks, params))
			return true;
		std::size_t d = 0;
		for (; d < vars; ++d) {
			std::size_t lim = d < tv.size() ? probe.track_values.size() : params_probe.size();
			if (++idx[d] < lim)
				break;
			idx[d] = 0;
		}
		if (d == vars)
			return false;
	}
}

} // namespace sar
