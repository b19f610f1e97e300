/* SPDX-License-Identifier: Apache-2.0 */

// End-to-end decision procedure: closure, normalization, CHC translation,
// then the bounded oracle and an external backend side by side.

#pragma once

#include "backend.hpp"
#include "oracle.hpp"

#include <future>

namespace sar {

struct Translation {
	Prenex prenex;
	SarAtom atom;
	NormalAtom normal;
	ChcSystem chc;
};

inline Translation translate(const SarFormula &f, NormalizeOptions opts = {})
{
	Translation t;
	t.prenex = prenex(f);
	t.atom = compile_delta0(t.prenex.matrix);
	t.normal = normalize(t.atom, opts);
	t.chc = to_chc(t.normal);
	return t;
}

struct SolveOptions {
	bool use_oracle = true;
	OracleBounds oracle{6, -3, 3, 2'000'000, 10};
	// Tried in order; the first available one is used.
	std::vector<BackendConfig> backends;
	NormalizeOptions normal;
	SmtOptions smt;
};

struct SolveResult {
	Verdict verdict = Verdict::Unknown;
	std::string source = "none"; // oracle | backend | none
	std::optional<Assignment> witness;
	std::optional<Verdict> oracle_verdict;
	std::optional<Verdict> backend_verdict;
	std::string backend;
	std::string diagnostic;
	// Oracle witness while the backend claims UNSAT: a soundness violation.
	bool conflict = false;
	double seconds = 0;
};

inline std::optional<BackendConfig> pick_backend(const std::vector<BackendConfig> &bs)
{
	for (auto &b : bs)
		if (backend_available(b))
			return b;
	return std::nullopt;
}

inline SolveResult solve(const SarFormula &f, const SolveOptions &o = {})
{
	auto start = std::chrono::steady_clock::now();
	SolveResult r;
	auto tr = translate(f, o.normal);
	auto backend = pick_backend(o.backends);

	std::atomic<bool> stop{false};
	std::future<OracleResult> oracle;
	if (o.use_oracle) {
		OracleBounds b = o.oracle;
		b.stop = &stop;
		oracle = std::async(std::launch::async, [f, b]() { return oracle_solve(f, b); });
	}
	if (backend) {
		r.backend = backend->name;
		try {
			auto run = run_backend(*backend, emit_smtlib_horn(tr.chc, o.smt));
			r.backend_verdict = run.verdict.verdict;
			r.diagnostic = run.verdict.diagnostic;
		} catch (const std::exception &e) {
			r.backend_verdict = Verdict::Unknown;
			r.diagnostic = e.what();
		}
		// A backend model leaves nothing for the oracle to find.
		if (r.backend_verdict == Verdict::Unsat)
			stop = true;
	} else if (!o.backends.empty()) {
		r.diagnostic = "no configured backend is available";
	}
	if (o.use_oracle) {
		auto res = oracle.get();
		if (res.sat) {
			r.oracle_verdict = Verdict::Sat;
			r.witness = res.witness;
		} else {
			r.oracle_verdict = Verdict::Unknown;
		}
	}

	if (r.oracle_verdict == Verdict::Sat) {
		r.verdict = Verdict::Sat;
		r.source = "oracle";
		r.conflict = r.backend_verdict == Verdict::Unsat;
	} else if (r.backend_verdict && *r.backend_verdict != Verdict::Unknown) {
		r.verdict = *r.backend_verdict;
		r.source = "backend";
	}
	r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
	return r;
}

} // namespace sar
