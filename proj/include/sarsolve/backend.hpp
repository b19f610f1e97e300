/* SPDX-License-Identifier: Apache-2.0 */

// External CHC solvers run as child processes on a temporary SMT-LIB file.

#pragma once

#include "chc.hpp"

#include <chrono>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <thread>

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

namespace sar {

struct BackendConfig {
	std::string name;
	std::string command; // contains {file}
	double timeout = 60;
	bool enabled = true;
};

inline std::vector<BackendConfig> default_backends()
{
	return {
		{"z3", "z3 -smt2 {file}", 60, true},
		{"spacer", "z3 fp.engine=spacer -smt2 {file}", 60, true},
		{"eldarica", "eld -hsmt {file}", 60, true},
		{"hoice", "hoice {file}", 60, true},
	};
}

inline void validate(const BackendConfig &b)
{
	if (b.name.empty())
		throw InputError("backend without a name");
	if (b.command.find("{file}") == std::string::npos)
		throw InputError("backend " + b.name + ": command template lacks {file}");
	if (!(b.timeout > 0))
		throw InputError("backend " + b.name + ": timeout must be positive");
}

namespace detail {

inline std::vector<std::string> split_words(const std::string &s)
{
	std::vector<std::string> out;
	std::istringstream is(s);
	std::string w;
	while (is >> w)
		out.push_back(w);
	return out;
}

inline std::optional<std::filesystem::path> find_executable(const std::string &prog)
{
	namespace fs = std::filesystem;
	if (prog.find('/') != std::string::npos)
		return access(prog.c_str(), X_OK) == 0 ? std::optional<fs::path>(prog) : std::nullopt;
	const char *path = std::getenv("PATH");
	std::istringstream is(path ? path : "");
	std::string dir;
	while (std::getline(is, dir, ':')) {
		if (dir.empty())
			continue;
		fs::path p = fs::path(dir) / prog;
		if (access(p.c_str(), X_OK) == 0 && !fs::is_directory(p))
			return p;
	}
	return std::nullopt;
}

} // namespace detail

inline bool backend_available(const BackendConfig &b)
{
	auto words = detail::split_words(b.command);
	return b.enabled && !words.empty() && detail::find_executable(words[0]).has_value();
}

struct ProcessResult {
	std::string output;
	int status = -1;
	bool timed_out = false;
	double seconds = 0;
};

// Runs argv with stdout and stderr captured, killing it after `timeout`.
inline ProcessResult run_process(const std::vector<std::string> &argv, double timeout)
{
	if (argv.empty())
		throw ContractViolation("run_process: empty command");
	int fds[2];
	if (pipe(fds) != 0)
		throw std::runtime_error(std::string("pipe: ") + std::strerror(errno));
	auto start = std::chrono::steady_clock::now();
	pid_t pid = fork();
	if (pid < 0) {
		close(fds[0]);
		close(fds[1]);
		throw std::runtime_error(std::string("fork: ") + std::strerror(errno));
	}
	if (pid == 0) {
		setpgid(0, 0);
		dup2(fds[1], STDOUT_FILENO);
		dup2(fds[1], STDERR_FILENO);
		close(fds[0]);
		close(fds[1]);
		std::vector<char *> args;
		for (auto &a : argv)
			args.push_back(const_cast<char *>(a.c_str()));
		args.push_back(nullptr);
		execvp(args[0], args.data());
		_exit(127);
	}
	close(fds[1]);
	ProcessResult r;
	auto deadline = start + std::chrono::duration<double>(timeout);
	char buf[4096];
	for (;;) {
		auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
			deadline - std::chrono::steady_clock::now()).count();
		if (left <= 0) {
			r.timed_out = true;
			break;
		}
		pollfd p{fds[0], POLLIN, 0};
		int rc = poll(&p, 1, int(std::min<long long>(left, 1000)));
		if (rc < 0 && errno != EINTR)
			break;
		if (rc <= 0)
			continue;
		ssize_t got = read(fds[0], buf, sizeof buf);
		if (got <= 0)
			break;
		r.output.append(buf, std::size_t(got));
	}
	if (r.timed_out) {
		kill(-pid, SIGKILL);
		kill(pid, SIGKILL);
	}
	close(fds[0]);
	int status = 0;
	while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
	}
	r.status = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
	r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
	return r;
}

struct BackendRun {
	BackendVerdict verdict;
	std::string raw;
	double seconds = 0;
	bool timed_out = false;
};

namespace detail {

inline std::filesystem::path temp_smt_file()
{
	namespace fs = std::filesystem;
	std::string tmpl = (fs::temp_directory_path() / "sarsolve-XXXXXX").string();
	std::vector<char> buf(tmpl.begin(), tmpl.end());
	buf.push_back('\0');
	if (!mkdtemp(buf.data()))
		throw std::runtime_error(std::string("mkdtemp: ") + std::strerror(errno));
	return fs::path(buf.data()) / "query.smt2";
}

} // namespace detail

// Each call owns a private directory that is removed afterwards.
inline BackendRun run_backend(const BackendConfig &b, const std::string &smt2)
{
	validate(b);
	auto file = detail::temp_smt_file();
	{
		std::ofstream os(file);
		os << smt2;
		if (!os)
			throw std::runtime_error("cannot write " + file.string());
	}
	std::vector<std::string> argv;
	for (auto w : detail::split_words(b.command)) {
		for (std::size_t p; (p = w.find("{file}")) != std::string::npos;)
			w.replace(p, 6, file.string());
		argv.push_back(w);
	}
	BackendRun run;
	try {
		auto pr = run_process(argv, b.timeout);
		run.raw = pr.output;
		run.seconds = pr.seconds;
		run.timed_out = pr.timed_out;
		run.verdict = pr.timed_out ? BackendVerdict{Verdict::Unknown, "timeout"}
		                           : interpret_backend_result(pr.output);
		if (pr.status == 127 && run.verdict.verdict == Verdict::Unknown)
			run.verdict.diagnostic = "cannot execute " + argv[0];
	} catch (...) {
		std::filesystem::remove_all(file.parent_path());
		throw;
	}
	std::filesystem::remove_all(file.parent_path());
	return run;
}

} // namespace sar
