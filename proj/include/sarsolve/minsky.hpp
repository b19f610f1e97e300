/* SPDX-License-Identifier: Apache-2.0 */

// Two-counter machines and their encoding as a four-track SAR atom over
// (X0, X1, tail X0, tail X1), where Xr is the value log of register r.

#pragma once

#include "listlang.hpp"

namespace sar::minsky {

struct Inc {
	int reg;
	std::size_t next;
};
struct JzDec {
	int reg;
	std::size_t if_pos, if_zero;
};
struct Halt {
};

using Instruction = std::variant<Inc, JzDec, Halt>;

struct Program {
	std::set<std::size_t> lines;
	std::map<std::size_t, Instruction> code;

	// Checks that line 0 exists and every jump target has code.
	void validate() const
	{
		if (!lines.count(0))
			throw InputError("minsky: line 0 is missing");
		for (auto ln : lines)
			if (!code.count(ln))
				throw InputError("minsky: no code for line " + std::to_string(ln));
		auto target = [&](std::size_t from, std::size_t to) {
			if (!lines.count(to))
				throw InputError("minsky: line " + std::to_string(from) + " jumps to unknown line " +
				                 std::to_string(to));
		};
		for (auto &[ln, ins] : code) {
			if (!lines.count(ln))
				throw InputError("minsky: code for undeclared line " + std::to_string(ln));
			if (auto *i = std::get_if<Inc>(&ins)) {
				if (i->reg != 0 && i->reg != 1)
					throw InputError("minsky: register must be 0 or 1");
				target(ln, i->next);
			} else if (auto *j = std::get_if<JzDec>(&ins)) {
				if (j->reg != 0 && j->reg != 1)
					throw InputError("minsky: register must be 0 or 1");
				target(ln, j->if_pos);
				target(ln, j->if_zero);
			}
		}
	}
};

struct Halted {
	IntList log0, log1;
};

// Halted with the register logs (initial and final values included), or
// nothing when the fuel runs out.
inline std::optional<Halted> run_machine(const Program &p, std::size_t fuel)
{
	std::size_t pc = 0;
	Int r[2] = {0, 0};
	Halted h;
	h.log0.push_back(0);
	h.log1.push_back(0);
	for (std::size_t step = 0; step < fuel; ++step) {
		auto it = p.code.find(pc);
		if (it == p.code.end())
			throw InputError("minsky: no code for line " + std::to_string(pc));
		auto &ins = it->second;
		if (std::holds_alternative<Halt>(ins))
			return h;
		if (auto *i = std::get_if<Inc>(&ins)) {
			++r[i->reg];
			pc = i->next;
		} else {
			auto &j = std::get<JzDec>(ins);
			if (r[j.reg] > 0) {
				--r[j.reg];
				pc = j.if_pos;
			} else {
				pc = j.if_zero;
			}
		}
		h.log0.push_back(r[0]);
		h.log1.push_back(r[1]);
	}
	return std::nullopt;
}

// Tracks: 0 = X0, 1 = X1, 2 = tail X0, 3 = tail X1. Line 0 is entered
// through a separate initial state that also pins both registers to 0.
inline SsNfa encode_automaton(const Program &p)
{
	p.validate();
	SsNfa m(4, 0);
	auto init = m.add_state("q_init", true, false);
	std::map<std::size_t, StateId> q;
	for (auto ln : p.lines)
		q[ln] = m.add_state("q" + std::to_string(ln), false, false);
	auto accept = m.add_state("q_accept", false, true);

	auto reg = [](int r) { return l(std::size_t(r)); };
	auto next = [](int r) { return l(std::size_t(2 + r)); };
	auto zero = eq(l(0), c(0)) && eq(l(1), c(0));
	for (auto &[ln, ins] : p.code) {
		std::vector<std::pair<GuardFormula, StateId>> out;
		if (auto *i = std::get_if<Inc>(&ins)) {
			int r = i->reg;
			out.emplace_back(eq(next(r), reg(r) + 1) && eq(next(1 - r), reg(1 - r)), q.at(i->next));
		} else if (auto *j = std::get_if<JzDec>(&ins)) {
			int r = j->reg;
			out.emplace_back(gt(reg(r), c(0)) && eq(next(r), reg(r) - 1) &&
			                         eq(next(1 - r), reg(1 - r)),
			                 q.at(j->if_pos));
			out.emplace_back(eq(reg(r), c(0)) && eq(next(0), reg(0)) && eq(next(1), reg(1)),
			                 q.at(j->if_zero));
		} else {
			out.emplace_back(is_pad(next(0)) && is_pad(next(1)), accept);
		}
		for (auto &[g, to] : out) {
			m.add_transition(q.at(ln), g, to);
			if (ln == 0)
				m.add_transition(init, zero && g, to);
		}
	}
	return m;
}

inline SarAtom encode_program(const Program &p)
{
	return SarAtom(encode_automaton(p), {lv("X0"), lv("X1"), tail(lv("X0")), tail(lv("X1"))}, {});
}

} // namespace sar::minsky
