/* SPDX-License-Identifier: Apache-2.0 */

// JSON formats (version 1): guards, automata, formulas, instances,
// candidate models, CHCs over lists, Minsky programs, backend lists.

#pragma once

#include "backend.hpp"
#include "minsky.hpp"
#include "predicates.hpp"
#include "teacher.hpp"

#include <json.hpp>

namespace sar::io {

using json = nlohmann::json;

inline json read_json_file(const std::string &path)
{
	std::ifstream is(path);
	if (!is)
		throw InputError("cannot open " + path);
	try {
		return json::parse(is);
	} catch (const json::exception &e) {
		throw InputError(path + ": " + e.what());
	}
}

inline void check_version(const json &j, const std::string &what)
{
	if (!j.is_object())
		throw InputError(what + ": expected a JSON object");
	if (!j.contains("version") || j["version"] != 1)
		throw InputError(what + ": missing or unsupported \"version\" (expected 1)");
}

namespace detail {

inline const std::map<std::string, CmpOp> &cmp_ops()
{
	static const std::map<std::string, CmpOp> ops{{"=", CmpOp::Eq}, {"!=", CmpOp::Ne},
	                                              {"<", CmpOp::Lt}, {"<=", CmpOp::Le},
	                                              {">", CmpOp::Gt}, {">=", CmpOp::Ge}};
	return ops;
}

// The single key of a one-entry object.
inline std::pair<std::string, const json &> single(const json &j, const std::string &what)
{
	if (!j.is_object() || j.size() != 1)
		throw InputError(what + ": expected an object with one operator key, got " + j.dump());
	return {j.begin().key(), j.begin().value()};
}

inline const json &array_of(const json &j, std::size_t n, const std::string &what)
{
	if (!j.is_array() || (n && j.size() != n))
		throw InputError(what + ": expected an array" + (n ? " of " + std::to_string(n) : "") +
		                 ", got " + j.dump());
	return j;
}

inline Int as_int(const json &j, const std::string &what)
{
	if (!j.is_number_integer())
		throw InputError(what + ": expected an integer, got " + j.dump());
	return j.get<Int>();
}

inline std::size_t index_suffix(const std::string &s, std::size_t from)
{
	if (s.size() <= from || !std::all_of(s.begin() + long(from), s.end(), ::isdigit))
		throw InputError("bad guard variable " + s);
	return std::stoul(s.substr(from));
}

} // namespace detail

// ---------------------------------------------------------------------------
// Guards: tracks "l0", parameters "x0", integer constants.

inline GuardTerm parse_guard_term(const json &j)
{
	using namespace detail;
	if (j.is_number_integer())
		return c(j.get<Int>());
	if (j.is_string()) {
		auto s = j.get<std::string>();
		if (!s.empty() && s[0] == 'l')
			return l(index_suffix(s, 1));
		if (!s.empty() && s[0] == 'x')
			return x(index_suffix(s, 1));
		throw InputError("bad guard variable " + s);
	}
	auto [op, arg] = single(j, "guard term");
	if (op == "+") {
		array_of(arg, 0, "+");
		if (arg.empty())
			return c(0);
		GuardTerm t = parse_guard_term(arg[0]);
		for (std::size_t i = 1; i < arg.size(); ++i)
			t = t + parse_guard_term(arg[i]);
		return t;
	}
	if (op == "-") {
		array_of(arg, 2, "-");
		return parse_guard_term(arg[0]) - parse_guard_term(arg[1]);
	}
	if (op == "*") {
		array_of(arg, 2, "*");
		return as_int(arg[0], "*") * parse_guard_term(arg[1]);
	}
	throw InputError("unknown guard term operator " + op);
}

inline GuardFormula parse_guard(const json &j)
{
	using namespace detail;
	if (j.is_boolean())
		return j.get<bool>() ? GuardFormula::top() : GuardFormula::bottom();
	auto [op, arg] = single(j, "guard");
	if (auto it = cmp_ops().find(op); it != cmp_ops().end()) {
		array_of(arg, 2, op);
		return GuardFormula::cmp(it->second, parse_guard_term(arg[0]), parse_guard_term(arg[1]));
	}
	if (op == "ispad")
		return is_pad(parse_guard_term(arg));
	if (op == "not")
		return !parse_guard(arg);
	if (op == "and" || op == "or") {
		array_of(arg, 0, op);
		std::vector<GuardFormula> cs;
		for (auto &a : arg)
			cs.push_back(parse_guard(a));
		return op == "and" ? GuardFormula::conj(cs) : GuardFormula::disj(cs);
	}
	if (op == "implies") {
		array_of(arg, 2, op);
		return implies(parse_guard(arg[0]), parse_guard(arg[1]));
	}
	throw InputError("unknown guard operator " + op);
}

inline json guard_term_to_json(const GuardTerm &t)
{
	using K = GuardTerm::Kind;
	switch (t.kind()) {
	case K::Track: return "l" + std::to_string(t.index());
	case K::Param: return "x" + std::to_string(t.index());
	case K::Const: return t.value();
	case K::Add: return {{"+", {guard_term_to_json(t.lhs()), guard_term_to_json(t.rhs())}}};
	case K::Sub: return {{"-", {guard_term_to_json(t.lhs()), guard_term_to_json(t.rhs())}}};
	case K::MulConst: return {{"*", {t.value(), guard_term_to_json(t.lhs())}}};
	}
	return nullptr;
}

inline json guard_to_json(const GuardFormula &f)
{
	using K = GuardFormula::Kind;
	switch (f.kind()) {
	case K::True: return true;
	case K::False: return false;
	case K::Cmp:
		return {{to_string(f.op()), {guard_term_to_json(f.term(0)), guard_term_to_json(f.term(1))}}};
	case K::IsPad: return {{"ispad", guard_term_to_json(f.term())}};
	case K::Not: return {{"not", guard_to_json(f.child())}};
	case K::And:
	case K::Or: {
		json cs = json::array();
		for (auto &g : f.children())
			cs.push_back(guard_to_json(g));
		return {{f.kind() == K::And ? "and" : "or", cs}};
	}
	}
	return nullptr;
}

// ---------------------------------------------------------------------------
// Automata

inline SsNfa parse_automaton(const json &j, const std::string &name = "automaton")
{
	try {
		std::size_t k = j.at("tracks").get<std::size_t>();
		std::size_t n = j.value("params", std::size_t(0));
		SsNfa m(k, n);
		std::set<std::string> initial, final;
		for (auto &s : j.at("initial"))
			initial.insert(s.get<std::string>());
		for (auto &s : j.at("final"))
			final.insert(s.get<std::string>());
		std::map<std::string, StateId> ids;
		for (auto &s : j.at("states")) {
			auto nm = s.get<std::string>();
			if (ids.count(nm))
				throw InputError("duplicate state " + nm);
			ids[nm] = m.add_state(nm, initial.count(nm) > 0, final.count(nm) > 0);
		}
		for (auto &s : initial)
			if (!ids.count(s))
				throw InputError("unknown initial state " + s);
		for (auto &s : final)
			if (!ids.count(s))
				throw InputError("unknown final state " + s);
		auto state = [&](const json &s) {
			auto nm = s.get<std::string>();
			auto it = ids.find(nm);
			if (it == ids.end())
				throw InputError("unknown state " + nm);
			return it->second;
		};
		for (auto &t : j.value("transitions", json::array()))
			m.add_transition(state(t.at("from")), parse_guard(t.value("guard", json(true))),
			                 state(t.at("to")));
		return m;
	} catch (const json::exception &e) {
		throw InputError(name + ": " + e.what());
	} catch (const ContractViolation &e) {
		throw InputError(name + ": " + e.what());
	} catch (const InputError &e) {
		throw InputError(name + ": " + e.what());
	}
}

inline json automaton_to_json(const SsNfa &m)
{
	json states = json::array(), init = json::array(), fin = json::array(), tr = json::array();
	for (StateId q = 0; q < m.num_states(); ++q) {
		states.push_back(m.name(q));
		if (m.is_initial(q))
			init.push_back(m.name(q));
		if (m.is_final(q))
			fin.push_back(m.name(q));
	}
	for (auto &t : m.transitions())
		tr.push_back({{"from", m.name(t.from)}, {"guard", guard_to_json(t.guard)}, {"to", m.name(t.to)}});
	return {{"tracks", m.k()}, {"params", m.n()}, {"states", states},
	        {"initial", init}, {"final", fin}, {"transitions", tr}};
}

// ---------------------------------------------------------------------------
// Formulas

// Names visible while parsing: automata, predicates, and variables bound to
// argument terms inside predicate bodies.
struct Scope {
	std::map<std::string, std::shared_ptr<const SsNfa>> automata;
	std::map<std::string, std::shared_ptr<const PredicateDef>> predicates;
	std::map<std::string, Arg> bound;

	std::shared_ptr<const PredicateDef> predicate(const std::string &name) const
	{
		if (auto it = predicates.find(name); it != predicates.end())
			return it->second;
		return pred::library().get(name);
	}
};

inline IntTerm parse_int_term(const json &j, const Scope &s);
inline ListTerm parse_list_term(const json &j, const Scope &s);

inline IntTerm parse_int_term(const json &j, const Scope &s)
{
	using namespace detail;
	if (j.is_number_integer())
		return ic(j.get<Int>());
	if (j.is_string()) {
		auto v = j.get<std::string>();
		if (auto it = s.bound.find(v); it != s.bound.end()) {
			if (!std::holds_alternative<IntTerm>(it->second))
				throw InputError("list variable " + v + " used as an integer");
			return std::get<IntTerm>(it->second);
		}
		return iv(v);
	}
	auto [op, arg] = single(j, "integer term");
	if (op == "head")
		return head(parse_list_term(arg, s));
	if (op == "+") {
		array_of(arg, 0, "+");
		if (arg.empty())
			return ic(0);
		IntTerm t = parse_int_term(arg[0], s);
		for (std::size_t i = 1; i < arg.size(); ++i)
			t = t + parse_int_term(arg[i], s);
		return t;
	}
	if (op == "-") {
		array_of(arg, 2, "-");
		return parse_int_term(arg[0], s) - parse_int_term(arg[1], s);
	}
	if (op == "*") {
		array_of(arg, 2, "*");
		return as_int(arg[0], "*") * parse_int_term(arg[1], s);
	}
	throw InputError("unknown integer term operator " + op);
}

inline ListTerm parse_list_term(const json &j, const Scope &s)
{
	using namespace detail;
	if (j.is_string()) {
		auto v = j.get<std::string>();
		if (v == "nil")
			return nil();
		if (auto it = s.bound.find(v); it != s.bound.end()) {
			if (!std::holds_alternative<ListTerm>(it->second))
				throw InputError("integer variable " + v + " used as a list");
			return std::get<ListTerm>(it->second);
		}
		return lv(v);
	}
	auto [op, arg] = single(j, "list term");
	if (op == "cons") {
		array_of(arg, 2, "cons");
		return cons(parse_int_term(arg[0], s), parse_list_term(arg[1], s));
	}
	if (op == "tail")
		return tail(parse_list_term(arg, s));
	if (op == "list") {
		// [a, b, ...] is cons(a, cons(b, ... nil))
		array_of(arg, 0, "list");
		ListTerm t = nil();
		for (std::size_t i = arg.size(); i-- > 0;)
			t = cons(parse_int_term(arg[i], s), t);
		return t;
	}
	throw InputError("unknown list term operator " + op);
}

inline SarFormula parse_formula(const json &j, const Scope &s);

inline std::shared_ptr<const PredicateDef> parse_predicate_def(const std::string &name,
                                                               const json &j, const Scope &outer)
{
	auto def = std::make_shared<PredicateDef>();
	def->name = name;
	std::vector<std::string> params;
	try {
		for (auto &p : j.at("params")) {
			detail::array_of(p, 2, "predicate parameter");
			params.push_back(p[0].get<std::string>());
			auto sort = p[1].get<std::string>();
			if (sort != "int" && sort != "list")
				throw InputError("predicate " + name + ": unknown sort " + sort);
			def->signature.push_back(sort == "int" ? Sort::Int : Sort::List);
		}
	} catch (const json::exception &e) {
		throw InputError("predicate " + name + ": " + e.what());
	}
	auto builder = [params, outer](const json &body) {
		return [params, outer, body](const std::vector<Arg> &args) {
			Scope s = outer;
			s.bound.clear();
			for (std::size_t i = 0; i < params.size(); ++i)
				s.bound.insert_or_assign(params[i], args.at(i));
			return parse_formula(body, s);
		};
	};
	if (!j.contains("positive"))
		throw InputError("predicate " + name + ": missing \"positive\"");
	def->positive = builder(j["positive"]);
	if (j.contains("negative") && !j["negative"].is_null())
		def->negative = builder(j["negative"]);
	// Parse once against fresh variables so errors surface at load time.
	std::vector<Arg> probe;
	for (std::size_t i = 0; i < params.size(); ++i)
		probe.push_back(def->signature[i] == Sort::Int ? Arg(iv(params[i])) : Arg(lv(params[i])));
	def->positive(probe);
	if (def->negative)
		def->negative(probe);
	return def;
}

inline SarFormula parse_formula(const json &j, const Scope &s)
{
	using namespace detail;
	if (j.is_boolean())
		return j.get<bool>() ? SarFormula::top() : SarFormula::bottom();
	// Nodes with named fields are wrapped so that dispatch is on one key.
	json wrapped;
	for (auto key : {"pred", "atom", "exists"})
		if (j.is_object() && j.contains(key))
			wrapped = json{{key, j}};
	auto [op, arg] = single(wrapped.is_null() ? j : wrapped, "formula");
	if (auto it = cmp_ops().find(op); it != cmp_ops().end()) {
		array_of(arg, 2, op);
		return SarFormula::arith(it->second, parse_int_term(arg[0], s), parse_int_term(arg[1], s));
	}
	if (op == "list=" || op == "list!=") {
		array_of(arg, 2, op);
		auto f = SarFormula::list_eq(parse_list_term(arg[0], s), parse_list_term(arg[1], s));
		return op == "list=" ? f : !f;
	}
	if (op == "not")
		return !parse_formula(arg, s);
	if (op == "and" || op == "or") {
		array_of(arg, 0, op);
		std::vector<SarFormula> cs;
		for (auto &a : arg)
			cs.push_back(parse_formula(a, s));
		return op == "and" ? SarFormula::conj(cs) : SarFormula::disj(cs);
	}
	if (op == "implies") {
		array_of(arg, 2, op);
		return !parse_formula(arg[0], s) || parse_formula(arg[1], s);
	}
	if (op == "exists") {
		Scope inner = s;
		std::vector<std::pair<std::string, Sort>> vars;
		for (auto &v : array_of(arg.at("exists"), 0, "exists")) {
			array_of(v, 2, "exists binder");
			auto name = v[0].get<std::string>();
			auto sort = v[1].get<std::string>();
			if (sort != "int" && sort != "list")
				throw InputError("exists: unknown sort " + sort);
			vars.emplace_back(name, sort == "int" ? Sort::Int : Sort::List);
			inner.bound.erase(name);
		}
		if (!arg.contains("body"))
			throw InputError("exists: missing \"body\"");
		auto f = parse_formula(arg["body"], inner);
		for (std::size_t i = vars.size(); i-- > 0;)
			f = SarFormula::exists(vars[i].first, vars[i].second, f);
		return f;
	}
	if (op == "pred") {
		auto def = s.predicate(arg.at("pred").get<std::string>());
		auto &as = arg.contains("args") ? arg["args"] : json::array();
		array_of(as, 0, "args");
		if (as.size() != def->signature.size())
			throw InputError("predicate " + def->name + " expects " +
			                 std::to_string(def->signature.size()) + " arguments");
		std::vector<Arg> args;
		for (std::size_t i = 0; i < as.size(); ++i)
			args.push_back(def->signature[i] == Sort::Int ? Arg(parse_int_term(as[i], s))
			                                              : Arg(parse_list_term(as[i], s)));
		return SarFormula::pred(def, std::move(args));
	}
	if (op == "atom") {
		auto name = arg.at("atom").get<std::string>();
		auto it = s.automata.find(name);
		if (it == s.automata.end())
			throw InputError("unknown automaton " + name);
		std::vector<ListTerm> ls;
		std::vector<IntTerm> is;
		for (auto &t : arg.value("lists", json::array()))
			ls.push_back(parse_list_term(t, s));
		for (auto &t : arg.value("ints", json::array()))
			is.push_back(parse_int_term(t, s));
		if (ls.size() != it->second->k() || is.size() != it->second->n())
			throw InputError("automaton " + name + " applied with the wrong number of arguments");
		SarAtom a;
		a.automaton = it->second;
		a.lists = std::move(ls);
		a.ints = std::move(is);
		return SarFormula::atom(std::move(a));
	}
	throw InputError("unknown formula operator " + op);
}

// Reads "automata" and "predicates" sections into a scope, in file order.
inline Scope parse_scope(const json &j)
{
	Scope s;
	if (j.contains("automata"))
		for (auto &[name, a] : j["automata"].items())
			s.automata[name] = std::make_shared<const SsNfa>(parse_automaton(a, name));
	if (j.contains("predicates"))
		for (auto &[name, p] : j["predicates"].items())
			s.predicates[name] = parse_predicate_def(name, p, s);
	return s;
}

// ---------------------------------------------------------------------------
// Instances

struct Instance {
	std::string name;
	std::string description;
	SarFormula formula;
	std::optional<Verdict> expected;
};

inline Instance parse_instance(const json &j, const std::string &fallback_name = "instance")
{
	check_version(j, fallback_name);
	try {
		Instance in;
		in.name = j.value("name", fallback_name);
		in.description = j.value("description", "");
		auto scope = parse_scope(j);
		if (!j.contains("formula"))
			throw InputError("missing \"formula\"");
		in.formula = parse_formula(j["formula"], scope);
		if (j.contains("expected") && !j["expected"].is_null()) {
			auto v = parse_verdict(j["expected"].get<std::string>());
			if (!v)
				throw InputError("expected must be SAT, UNSAT or UNKNOWN");
			in.expected = v;
		}
		return in;
	} catch (const json::exception &e) {
		throw InputError(fallback_name + ": " + e.what());
	}
}

inline Instance load_instance(const std::string &path)
{
	auto stem = std::filesystem::path(path).stem().string();
	return parse_instance(read_json_file(path), stem);
}

// ---------------------------------------------------------------------------
// CHCs over lists and candidate models

inline ListChcSystem parse_list_chc(const json &j)
{
	check_version(j, "clause file");
	try {
		ListChcSystem sys;
		Scope scope = parse_scope(j);
		const json vars = j.value("predicate_vars", json::object());
		for (auto &[name, sig] : vars.items()) {
			std::vector<Sort> sorts;
			for (auto &t : sig) {
				auto st = t.get<std::string>();
				if (st != "int" && st != "list")
					throw InputError("predicate variable " + name + ": unknown sort " + st);
				sorts.push_back(st == "int" ? Sort::Int : Sort::List);
			}
			scope.predicates[name] = sys.declare(name, sorts);
		}
		std::size_t i = 0;
		for (auto &c : j.at("clauses")) {
			++i;
			ListClause cl;
			cl.label = c.value("label", "clause " + std::to_string(i));
			cl.body = parse_formula(c.value("body", json(true)), scope);
			if (c.contains("head") && !c["head"].is_null() && c["head"] != false)
				cl.head = parse_formula(c["head"], scope);
			sys.clauses.push_back(std::move(cl));
		}
		return sys;
	} catch (const json::exception &e) {
		throw InputError(std::string("clause file: ") + e.what());
	}
}

// Entries are a library predicate name or an inline definition.
inline CandidateModel parse_model(const json &j)
{
	check_version(j, "model file");
	try {
		Scope scope = parse_scope(j);
		CandidateModel m;
		for (auto &[name, d] : j.at("model").items()) {
			if (d.is_string())
				m[name] = scope.predicate(d.get<std::string>());
			else
				m[name] = parse_predicate_def(name, d, scope);
		}
		return m;
	} catch (const json::exception &e) {
		throw InputError(std::string("model file: ") + e.what());
	}
}

// ---------------------------------------------------------------------------
// Minsky programs

inline minsky::Program parse_minsky(const json &j)
{
	try {
		minsky::Program p;
		for (auto &l : j.at("lines"))
			p.lines.insert(l.get<std::size_t>());
		for (auto &[key, ins] : j.at("code").items()) {
			std::size_t ln = 0;
			try {
				ln = std::stoul(key);
			} catch (const std::exception &) {
				throw InputError("minsky: bad line number " + key);
			}
			auto op = ins.at("op").get<std::string>();
			if (op == "inc")
				p.code[ln] = minsky::Inc{ins.at("reg").get<int>(), ins.at("next").get<std::size_t>()};
			else if (op == "jzdec")
				p.code[ln] = minsky::JzDec{ins.at("reg").get<int>(), ins.at("pos").get<std::size_t>(),
				                           ins.at("zero").get<std::size_t>()};
			else if (op == "halt")
				p.code[ln] = minsky::Halt{};
			else
				throw InputError("minsky: unknown op " + op);
		}
		p.validate();
		return p;
	} catch (const json::exception &e) {
		throw InputError(std::string("minsky program: ") + e.what());
	}
}

// ---------------------------------------------------------------------------
// Backends

inline std::vector<BackendConfig> parse_backends(const json &j)
{
	try {
		const json &arr = j.is_array() ? j : j.at("backends");
		std::vector<BackendConfig> out;
		for (auto &b : arr) {
			BackendConfig c;
			c.name = b.at("name").get<std::string>();
			c.command = b.at("command").get<std::string>();
			c.timeout = b.value("timeout", 60.0);
			c.enabled = b.value("enabled", true);
			validate(c);
			out.push_back(c);
		}
		return out;
	} catch (const json::exception &e) {
		throw InputError(std::string("backend config: ") + e.what());
	}
}

// SARSOLVE_BACKENDS overrides the built-in defaults.
inline std::vector<BackendConfig> configured_backends()
{
	if (const char *p = std::getenv("SARSOLVE_BACKENDS"); p && *p)
		return parse_backends(read_json_file(p));
	return default_backends();
}

inline json assignment_to_json(const Assignment &a, bool hide_internal = true)
{
	json out = json::object();
	for (auto &[k, v] : a.ints)
		if (!hide_internal || k.empty() || k[0] != '_')
			out[k] = v;
	for (auto &[k, v] : a.lists)
		if (!hide_internal || k.empty() || k[0] != '_')
			out[k] = v;
	return out;
}

} // namespace sar::io
