/* SPDX-License-Identifier: Apache-2.0 */

// Checking a candidate model of CHCs over lists: each clause is valid iff
// the existential closure of body && !head is unsatisfiable.

#pragma once

#include "solve.hpp"

namespace sar {

// Predicate variables appear as predicate applications whose definition is
// a placeholder; the candidate model supplies the real ones.
struct ListClause {
	SarFormula body;
	std::optional<SarFormula> head; // empty: false
	std::string label;
};

struct ListChcSystem {
	std::map<std::string, std::shared_ptr<const PredicateDef>> predicate_vars;
	std::vector<ListClause> clauses;

	std::shared_ptr<const PredicateDef> declare(const std::string &name, std::vector<Sort> sig)
	{
		auto d = std::make_shared<PredicateDef>();
		d->name = name;
		d->signature = std::move(sig);
		d->positive = [name](const std::vector<Arg> &) -> SarFormula {
			throw InputError("predicate variable " + name + " has no interpretation");
		};
		predicate_vars[name] = d;
		return d;
	}
};

using CandidateModel = std::map<std::string, std::shared_ptr<const PredicateDef>>;

inline SarFormula instantiate(const SarFormula &f, const ListChcSystem &s, const CandidateModel &theta)
{
	using K = SarFormula::Kind;
	switch (f.kind()) {
	case K::Pred: {
		auto &name = f.def().name;
		auto pv = s.predicate_vars.find(name);
		if (pv == s.predicate_vars.end() || pv->second != f.def_ptr())
			return f;
		auto it = theta.find(name);
		if (it == theta.end())
			throw InputError("candidate model has no entry for predicate variable " + name);
		if (it->second->signature != pv->second->signature)
			throw InputError("candidate for " + name + " has the wrong signature");
		return SarFormula::pred(it->second, f.args());
	}
	case K::Not: return !instantiate(f.child(), s, theta);
	case K::And:
	case K::Or: {
		std::vector<SarFormula> cs;
		for (auto &g : f.children())
			cs.push_back(instantiate(g, s, theta));
		return f.kind() == K::And ? SarFormula::conj(cs) : SarFormula::disj(cs);
	}
	case K::Exists: return SarFormula::exists(f.var(), f.sort(), instantiate(f.child(), s, theta));
	default: return f;
	}
}

enum class ClauseStatus { Valid, Invalid, Unknown };

inline std::string to_string(ClauseStatus s)
{
	switch (s) {
	case ClauseStatus::Valid: return "VALID";
	case ClauseStatus::Invalid: return "INVALID";
	case ClauseStatus::Unknown: return "UNKNOWN";
	}
	return "?";
}

struct ClauseReport {
	std::string label;
	ClauseStatus status = ClauseStatus::Unknown;
	std::optional<Assignment> witness;
	SolveResult detail;
};

// Negated clause whose satisfiability refutes the candidate on that clause.
inline SarFormula violation_formula(const ListClause &c, const ListChcSystem &s,
                                    const CandidateModel &theta)
{
	auto body = instantiate(c.body, s, theta);
	auto head = c.head ? instantiate(*c.head, s, theta) : SarFormula::bottom();
	return body && !head;
}

inline std::vector<ClauseReport> check_candidate_model(const ListChcSystem &s,
                                                       const CandidateModel &theta,
                                                       const SolveOptions &o = {})
{
	for (auto &[name, d] : s.predicate_vars)
		if (!theta.count(name))
			throw InputError("candidate model has no entry for predicate variable " + name);
	std::vector<ClauseReport> out;
	for (std::size_t i = 0; i < s.clauses.size(); ++i) {
		auto &c = s.clauses[i];
		ClauseReport r;
		r.label = c.label.empty() ? "clause " + std::to_string(i + 1) : c.label;
		r.detail = solve(violation_formula(c, s, theta), o);
		if (r.detail.verdict == Verdict::Sat) {
			r.status = ClauseStatus::Invalid;
			r.witness = r.detail.witness;
		} else if (r.detail.verdict == Verdict::Unsat) {
			r.status = ClauseStatus::Valid;
		}
		out.push_back(std::move(r));
	}
	return out;
}

} // namespace sar
