#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nexact.h"

namespace {

std::string slurp(const std::string& path, bool& ok) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        ok = false;
        return "";
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    ok = true;
    return buf.str();
}

struct Options {
    std::string algebraPath;
    std::string modulesPath;
    std::string structurePath;
    uint64_t n = 0;
    uint64_t dimBound = 0;
    uint64_t multBound = 2;
    uint64_t isoCap = 1u << 20;
    uint64_t latticeCap = 65536;
    uint64_t classCap = 4096;
    uint64_t subsetCap = 1u << 20;
    uint64_t seed = 0;
    std::string format = "text";
};

void add_common_flags(CLI::App* sub, Options& opt) {
    sub->add_option("--n", opt.n, "positive integer n (default: the algebra file's n line)");
    sub->add_option("--dim-bound", opt.dimBound,
                    "enumerate indecomposables up to this total dimension (default: twice the "
                    "algebra dimension)");
    sub->add_option("--mult-bound", opt.multBound,
                    "summands per side in extension-closure checks (default 2)");
    sub->add_option("--iso-cap", opt.isoCap, "exhaustive isomorphism scan budget");
    sub->add_option("--lattice-cap", opt.latticeCap, "submodule lattice size budget");
    sub->add_option("--class-cap", opt.classCap, "extension class budget per Ext group");
    sub->add_option("--subset-cap", opt.subsetCap, "subset budget for structure enumeration");
    sub->add_option("--seed", opt.seed, "seed for randomized fallbacks past the scan caps");
    sub->add_option("--format", opt.format, "output format: text | structured")
        ->check(CLI::IsMember({"text", "structured"}));
}

int fail_with(nx_session* s, nx_status st) {
    std::cerr << "error: " << nx_last_error(s) << "\n";
    nx_session_free(s);
    return static_cast<int>(st);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact-structure calculator for module categories of quiver algebras"};
    app.set_version_flag("--version", nx_version());
    app.require_subcommand(1);

    Options opt;
    const struct {
        const char* name;
        const char* help;
        bool needsModules;
        bool takesStructure;
    } commands[] = {
        {"exn", "list the indecomposable class members with resolutions and Ext tables", false,
         false},
        {"maxn", "compute the maximal stable class with its iteration trace and conflations",
         false, false},
        {"structures", "enumerate all structures between split and maximal, with inclusions",
         false, false},
        {"check", "audit a candidate set of modules against the axioms", true, true},
        {"tr", "transpose each module, with the Ext dimension cross-check", true, false},
        {"resolve", "print the minimal projective resolution of each module", true, false},
    };

    for (const auto& c : commands) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        sub->add_option("algebra", opt.algebraPath, "algebra description file")
            ->required()
            ->check(CLI::ExistingFile);
        if (c.needsModules)
            sub->add_option("modules", opt.modulesPath, "module bundle file")
                ->required()
                ->check(CLI::ExistingFile);
        if (c.takesStructure)
            sub->add_option("--structure", opt.structurePath,
                            "structure file naming the candidate members (default: the whole "
                            "bundle)")
                ->check(CLI::ExistingFile);
        add_common_flags(sub, opt);
    }

    CLI11_PARSE(app, argc, argv);
    std::string command = app.get_subcommands().front()->get_name();

    nx_session* s = nx_session_new();
    if (s == nullptr) {
        std::cerr << "error: out of memory\n";
        return 3;
    }

    nx_status st;
    const std::pair<const char*, std::string> pairs[] = {
        {"n", std::to_string(opt.n)},
        {"dim-bound", std::to_string(opt.dimBound)},
        {"mult-bound", std::to_string(opt.multBound)},
        {"iso-cap", std::to_string(opt.isoCap)},
        {"lattice-cap", std::to_string(opt.latticeCap)},
        {"class-cap", std::to_string(opt.classCap)},
        {"subset-cap", std::to_string(opt.subsetCap)},
        {"seed", std::to_string(opt.seed)},
        {"format", opt.format},
        {"algebra-path", opt.algebraPath},
        {"modules-path", opt.modulesPath},
        {"structure-path", opt.structurePath},
    };
    for (const auto& [k, v] : pairs)
        if ((st = nx_set_option(s, k, v.c_str())) != NX_OK) return fail_with(s, st);

    bool ok = true;
    std::string algebraText = slurp(opt.algebraPath, ok);
    if (!ok) {
        std::cerr << "error: cannot read " << opt.algebraPath << "\n";
        nx_session_free(s);
        return 1;
    }
    if ((st = nx_set_algebra(s, algebraText.c_str())) != NX_OK) return fail_with(s, st);

    if (!opt.modulesPath.empty()) {
        std::string modulesText = slurp(opt.modulesPath, ok);
        if (!ok) {
            std::cerr << "error: cannot read " << opt.modulesPath << "\n";
            nx_session_free(s);
            return 1;
        }
        if ((st = nx_set_modules(s, modulesText.c_str())) != NX_OK) return fail_with(s, st);
    }
    if (!opt.structurePath.empty()) {
        std::string structureText = slurp(opt.structurePath, ok);
        if (!ok) {
            std::cerr << "error: cannot read " << opt.structurePath << "\n";
            nx_session_free(s);
            return 1;
        }
        if ((st = nx_set_structure(s, structureText.c_str())) != NX_OK) return fail_with(s, st);
    }

    if ((st = nx_run(s, command.c_str())) != NX_OK) return fail_with(s, st);

    std::cout << nx_report(s);
    nx_session_free(s);
    return 0;
}
