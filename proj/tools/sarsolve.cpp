/* SPDX-License-Identifier: Apache-2.0 */

#include <sarsolve/io.hpp>

#include <CLI11.hpp>

#include <iomanip>
#include <iostream>
#include <mutex>
#include <thread>

using namespace sar;
using io::json;

namespace {

enum Exit { ExitSat = 0, ExitUnsat = 1, ExitUnknown = 2, ExitInput = 3, ExitConflict = 4 };

int exit_code(Verdict v)
{
	switch (v) {
	case Verdict::Sat: return ExitSat;
	case Verdict::Unsat: return ExitUnsat;
	default: return ExitUnknown;
	}
}

struct Common {
	std::vector<std::string> backends;
	bool no_backend = false;
	bool no_oracle = false;
	double timeout = 60;
	std::size_t oracle_max_len = 6;
	std::string oracle_range = "-3..3";
	bool strict = false;
	bool int_flags = false;

	void add(CLI::App *app)
	{
		app->add_option("--backend", backends, "Backend name (repeatable; default: first available)");
		app->add_flag("--oracle-only", no_backend, "Do not call any backend");
		app->add_flag("--no-oracle", no_oracle, "Do not run the bounded oracle");
		app->add_option("--timeout", timeout, "Backend timeout in seconds")->check(CLI::PositiveNumber);
		app->add_option("--oracle-max-len", oracle_max_len, "Oracle list length bound");
		app->add_option("--oracle-range", oracle_range, "Oracle value range A..B");
		app->add_flag("--strict", strict, "Remove every cons during normalization");
		app->add_flag("--int-flags", int_flags, "Encode padding flags as Int in SMT-LIB");
	}

	std::vector<BackendConfig> selected() const
	{
		if (no_backend)
			return {};
		auto all = io::configured_backends();
		std::vector<BackendConfig> out;
		if (backends.empty()) {
			out = all;
		} else {
			for (auto &name : backends) {
				auto it = std::find_if(all.begin(), all.end(),
				                       [&](const BackendConfig &b) { return b.name == name; });
				if (it == all.end())
					throw InputError("unknown backend " + name);
				out.push_back(*it);
			}
		}
		for (auto &b : out)
			b.timeout = timeout;
		return out;
	}

	SolveOptions options(std::vector<BackendConfig> bs) const
	{
		SolveOptions o;
		o.use_oracle = !no_oracle;
		o.oracle.max_len = oracle_max_len;
		auto dots = oracle_range.find("..");
		if (dots == std::string::npos)
			throw InputError("--oracle-range expects A..B");
		try {
			o.oracle.lo = std::stoll(oracle_range.substr(0, dots));
			o.oracle.hi = std::stoll(oracle_range.substr(dots + 2));
		} catch (const std::exception &) {
			throw InputError("--oracle-range expects A..B");
		}
		if (o.oracle.lo > o.oracle.hi)
			throw InputError("--oracle-range is empty");
		o.oracle.seconds = timeout;
		o.backends = std::move(bs);
		o.normal.keep_outer_cons = !strict;
		o.smt.int_flags = int_flags;
		return o;
	}
};

std::string witness_text(const Assignment &a)
{
	return io::assignment_to_json(a).dump();
}

int cmd_solve(const std::string &path, const Common &c, bool as_json)
{
	auto in = io::load_instance(path);
	auto r = solve(in.formula, c.options(c.selected()));
	if (as_json) {
		json j{{"instance", in.name}, {"verdict", to_string(r.verdict)}, {"source", r.source},
		       {"time_ms", long(r.seconds * 1000)}};
		if (in.expected)
			j["expected"] = to_string(*in.expected);
		if (r.witness)
			j["witness"] = io::assignment_to_json(*r.witness);
		if (!r.backend.empty())
			j["backend"] = r.backend;
		if (!r.diagnostic.empty())
			j["diagnostic"] = r.diagnostic;
		if (r.conflict)
			j["conflict"] = true;
		std::cout << j.dump(2) << "\n";
	} else {
		std::cout << to_string(r.verdict) << " (" << r.source;
		if (r.source == "backend")
			std::cout << " " << r.backend;
		std::cout << ") " << long(r.seconds * 1000) << " ms\n";
		if (r.witness)
			std::cout << "witness: " << witness_text(*r.witness) << "\n";
		if (!r.diagnostic.empty())
			std::cout << "note: " << r.diagnostic << "\n";
	}
	if (r.conflict) {
		std::cerr << "error: oracle witness contradicts backend UNSAT (soundness violation)\n";
		return ExitConflict;
	}
	return exit_code(r.verdict);
}

int cmd_translate(const std::string &path, const Common &c, bool normal, bool chc, bool smt2)
{
	auto in = io::load_instance(path);
	NormalizeOptions no;
	no.keep_outer_cons = !c.strict;
	auto t = translate(in.formula, no);
	if (!normal && !chc && !smt2)
		chc = true;
	if (normal) {
		std::cout << "atom: " << to_string(t.normal) << "\n";
		std::cout << io::automaton_to_json(t.normal.automaton).dump(2) << "\n";
	}
	if (chc)
		std::cout << to_string(t.chc);
	if (smt2)
		std::cout << emit_smtlib_horn(t.chc, SmtOptions{c.int_flags});
	return 0;
}

struct BenchRow {
	std::string instance;
	std::string verdict;
	std::string expected;
	std::string source;
	long time_ms = 0;
	bool conflict = false;
};

int cmd_bench(const std::string &dir, const Common &c, std::size_t jobs, const std::string &csv)
{
	namespace fs = std::filesystem;
	std::vector<std::string> files;
	if (!fs::is_directory(dir))
		throw InputError(dir + " is not a directory");
	for (auto &e : fs::directory_iterator(dir))
		if (e.path().extension() == ".json")
			files.push_back(e.path().string());
	std::sort(files.begin(), files.end());
	std::vector<io::Instance> instances;
	for (auto &f : files)
		instances.push_back(io::load_instance(f));

	// Each backend gets its own table; oracle-only mode has a single one.
	std::vector<std::optional<BackendConfig>> runs;
	if (c.no_backend)
		runs.push_back(std::nullopt);
	else if (c.backends.empty()) {
		auto b = pick_backend(c.selected());
		if (!b)
			std::cerr << "note: no backend available, running oracle only\n";
		runs.push_back(b);
	} else {
		for (auto &b : c.selected())
			runs.push_back(b);
	}
	if (jobs == 0)
		jobs = std::max(1u, std::thread::hardware_concurrency());

	bool conflict = false;
	for (auto &backend : runs) {
		std::string label = backend ? backend->name : "oracle";
		bool skipped = backend && !backend_available(*backend);
		std::vector<BenchRow> rows(instances.size());
		std::atomic<std::size_t> next{0};
		auto worker = [&]() {
			for (std::size_t i; (i = next++) < instances.size();) {
				auto &in = instances[i];
				BenchRow &row = rows[i];
				row.instance = in.name;
				row.expected = in.expected ? to_string(*in.expected) : "-";
				if (skipped) {
					row.verdict = "SKIPPED";
					row.source = "none";
					continue;
				}
				std::vector<BackendConfig> bs;
				if (backend)
					bs.push_back(*backend);
				try {
					auto r = solve(in.formula, c.options(bs));
					row.verdict = to_string(r.verdict);
					row.source = r.source;
					row.time_ms = long(r.seconds * 1000);
					row.conflict = r.conflict;
				} catch (const std::exception &e) {
					row.verdict = "ERROR";
					row.source = e.what();
				}
			}
		};
		std::vector<std::thread> pool;
		for (std::size_t t = 0; t < std::min(jobs, instances.size()); ++t)
			pool.emplace_back(worker);
		for (auto &t : pool)
			t.join();

		std::size_t solved = 0;
		long total_ms = 0;
		std::cout << "backend: " << label << (skipped ? " (not installed, skipped)" : "") << "\n";
		std::cout << std::left << std::setw(24) << "instance" << std::setw(10) << "expected"
		          << std::setw(10) << "verdict" << std::setw(9) << "source" << std::right
		          << std::setw(9) << "time_ms" << "\n";
		for (auto &r : rows) {
			bool ok = r.verdict == r.expected && r.verdict != "UNKNOWN";
			if (ok) {
				++solved;
				total_ms += r.time_ms;
			}
			conflict = conflict || r.conflict;
			std::cout << std::left << std::setw(24) << r.instance << std::setw(10) << r.expected
			          << std::setw(10) << r.verdict << std::setw(9) << r.source << std::right
			          << std::setw(9) << r.time_ms;
			if (r.verdict != r.expected && r.expected != "-" &&
			    (r.verdict == "SAT" || r.verdict == "UNSAT"))
				std::cout << "  WRONG";
			if (r.conflict)
				std::cout << "  CONFLICT";
			std::cout << "\n";
		}
		std::cout << "solved " << solved << "/" << rows.size();
		if (solved)
			std::cout << ", average " << total_ms / long(solved) << " ms";
		std::cout << "\n";
		if (!csv.empty()) {
			std::string path = csv;
			if (runs.size() > 1) {
				fs::path p(csv);
				path = (p.parent_path() / (p.stem().string() + "-" + label + p.extension().string()))
				               .string();
			}
			std::ofstream os(path);
			if (!os)
				throw InputError("cannot write " + path);
			os << "instance,verdict,expected,source,time_ms\n";
			for (auto &r : rows)
				os << r.instance << "," << r.verdict << "," << r.expected << "," << r.source << ","
				   << r.time_ms << "\n";
		}
	}
	return conflict ? ExitConflict : 0;
}

int cmd_check_model(const std::string &clauses, const std::string &model, const Common &c)
{
	auto sys = io::parse_list_chc(io::read_json_file(clauses));
	auto theta = io::parse_model(io::read_json_file(model));
	auto reports = check_candidate_model(sys, theta, c.options(c.selected()));
	bool conflict = false, all_valid = true, any_invalid = false;
	for (auto &r : reports) {
		std::cout << r.label << ": " << to_string(r.status);
		if (r.witness)
			std::cout << " " << witness_text(*r.witness);
		std::cout << " (" << r.detail.source << ")\n";
		conflict = conflict || r.detail.conflict;
		all_valid = all_valid && r.status == ClauseStatus::Valid;
		any_invalid = any_invalid || r.status == ClauseStatus::Invalid;
	}
	if (conflict)
		return ExitConflict;
	return all_valid ? 0 : any_invalid ? 1 : 2;
}

int cmd_encode_minsky(const std::string &path, const Common &c, std::size_t fuel, bool run_solver)
{
	auto p = io::parse_minsky(io::read_json_file(path));
	auto run = minsky::run_machine(p, fuel);
	if (run)
		std::cout << "halts: X0=" << to_string(run->log0) << " X1=" << to_string(run->log1) << "\n";
	else
		std::cout << "no halt within " << fuel << " steps\n";
	auto atom = minsky::encode_program(p);
	std::cout << "atom: " << to_string(atom) << "\n";
	std::cout << io::automaton_to_json(atom.nfa()).dump(2) << "\n";
	if (!run_solver)
		return 0;
	auto r = solve(SarFormula::atom(atom), c.options(c.selected()));
	std::cout << to_string(r.verdict) << " (" << r.source << ")\n";
	if (r.witness)
		std::cout << "witness: " << witness_text(*r.witness) << "\n";
	if (r.conflict)
		return ExitConflict;
	return exit_code(r.verdict);
}

} // namespace

int main(int argc, char **argv)
{
	CLI::App app{"Satisfiability of symbolic automatic relations over integer lists"};
	app.require_subcommand(1);
	Common common;

	std::string path, model;
	bool as_json = false, dump_normal = false, dump_chc = false, dump_smt2 = false, run_solver = false;
	std::size_t jobs = 1, fuel = 1000;
	std::string csv;

	auto *solve_cmd = app.add_subcommand("solve", "Decide an instance");
	solve_cmd->add_option("instance", path, "Instance JSON")->required();
	solve_cmd->add_flag("--json", as_json, "Machine-readable output");
	common.add(solve_cmd);

	auto *tr = app.add_subcommand("translate", "Print an intermediate representation");
	tr->add_option("instance", path, "Instance JSON")->required();
	tr->add_flag("--dump-normal", dump_normal, "Normalized atom");
	tr->add_flag("--dump-chc", dump_chc, "CHC system");
	tr->add_flag("--dump-smt2", dump_smt2, "SMT-LIB2 HORN");
	common.add(tr);

	auto *bench = app.add_subcommand("bench", "Run every instance in a directory");
	bench->add_option("dir", path, "Instance directory")->required();
	bench->add_option("--jobs", jobs, "Parallel instances (0: CPU count)");
	bench->add_option("--csv", csv, "Write CSV results");
	common.add(bench);

	auto *cm = app.add_subcommand("check-model", "Check a candidate model of CHCs over lists");
	cm->add_option("clauses", path, "Clause JSON")->required();
	cm->add_option("model", model, "Model JSON")->required();
	common.add(cm);

	auto *mk = app.add_subcommand("encode-minsky", "Encode a two-counter program");
	mk->add_option("program", path, "Program JSON")->required();
	mk->add_option("--fuel", fuel, "Simulation step limit");
	mk->add_flag("--solve", run_solver, "Also solve the encoded atom");
	common.add(mk);

	try {
		app.parse(argc, argv);
	} catch (const CLI::ParseError &e) {
		int rc = app.exit(e);
		return rc == 0 ? 0 : ExitInput;
	}

	try {
		if (*solve_cmd)
			return cmd_solve(path, common, as_json);
		if (*tr)
			return cmd_translate(path, common, dump_normal, dump_chc, dump_smt2);
		if (*bench)
			return cmd_bench(path, common, jobs, csv);
		if (*cm)
			return cmd_check_model(path, model, common);
		if (*mk)
			return cmd_encode_minsky(path, common, fuel, run_solver);
	} catch (const InputError &e) {
		std::cerr << "error: " << e.what() << "\n";
		return ExitInput;
	} catch (const ContractViolation &e) {
		std::cerr << "internal error: " << e.what() << "\n";
		return ExitInput;
	} catch (const std::exception &e) {
		std::cerr << "error: " << e.what() << "\n";
		return ExitInput;
	}
	return ExitInput;
}
