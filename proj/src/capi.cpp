#include "nexact.h"

#include <cstdint>
#include <exception>
#include <string>

#include "nexact/errors.hpp"
#include "nexact/session.hpp"

struct nx_session {
    nexact::SessionConfig cfg;
    std::string algebra;
    std::string modules;
    std::string structure;
    std::string report;
    std::string error;
};

namespace {

template <typename F>
nx_status guarded(nx_session* s, F&& body) {
    if (s == nullptr) return NX_ERR_INPUT;
    try {
        body();
        s->error.clear();
        return NX_OK;
    } catch (const nexact::InputError& e) {
        s->error = e.what();
        return NX_ERR_INPUT;
    } catch (const nexact::CapError& e) {
        s->error = e.what();
        return NX_ERR_CAPPED;
    } catch (const std::exception& e) {
        s->error = e.what();
        return NX_ERR_INTERNAL;
    }
}

uint64_t parse_u64(const std::string& v, const char* key) {
    if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos)
        throw nexact::InputError(std::string(key) + " must be a nonnegative integer, got '" + v +
                                 "'");
    try {
        return std::stoull(v);
    } catch (const std::out_of_range&) {
        throw nexact::InputError(std::string(key) + " is out of range: '" + v + "'");
    }
}

int parse_bounded_int(const std::string& v, const char* key) {
    uint64_t u = parse_u64(v, key);
    if (u > (1u << 30)) throw nexact::InputError(std::string(key) + " is out of range: '" + v + "'");
    return static_cast<int>(u);
}

}  // namespace

extern "C" {

const char* nx_version(void) { return "nexact 1.0.0"; }

nx_session* nx_session_new(void) { return new (std::nothrow) nx_session(); }

void nx_session_free(nx_session* s) { delete s; }

nx_status nx_set_option(nx_session* s, const char* key, const char* value) {
    return guarded(s, [&]() {
        if (key == nullptr || value == nullptr)
            throw nexact::InputError("option key and value must not be null");
        std::string k = key;
        std::string v = value;
        if (k == "n") {
            s->cfg.n = parse_bounded_int(v, "n");
        } else if (k == "dim-bound") {
            s->cfg.dimBound = parse_bounded_int(v, "dim-bound");
        } else if (k == "mult-bound") {
            s->cfg.multBound = parse_bounded_int(v, "mult-bound");
        } else if (k == "iso-cap") {
            s->cfg.isoCap = parse_u64(v, "iso-cap");
        } else if (k == "lattice-cap") {
            s->cfg.latticeCap = parse_u64(v, "lattice-cap");
        } else if (k == "class-cap") {
            s->cfg.classCap = parse_u64(v, "class-cap");
        } else if (k == "subset-cap") {
            s->cfg.subsetCap = parse_u64(v, "subset-cap");
        } else if (k == "seed") {
            s->cfg.seed = parse_u64(v, "seed");
        } else if (k == "format") {
            if (v != "text" && v != "structured")
                throw nexact::InputError("format must be text or structured, got '" + v + "'");
            s->cfg.format = v;
        } else if (k == "algebra-path") {
            s->cfg.algebraPath = v;
        } else if (k == "modules-path") {
            s->cfg.modulesPath = v;
        } else if (k == "structure-path") {
            s->cfg.structurePath = v;
        } else {
            throw nexact::InputError("unknown option '" + k + "'");
        }
    });
}

nx_status nx_set_algebra(nx_session* s, const char* text) {
    return guarded(s, [&]() {
        if (text == nullptr) throw nexact::InputError("algebra text must not be null");
        s->algebra = text;
    });
}

nx_status nx_set_modules(nx_session* s, const char* text) {
    return guarded(s, [&]() {
        if (text == nullptr) throw nexact::InputError("module text must not be null");
        s->modules = text;
    });
}

nx_status nx_set_structure(nx_session* s, const char* text) {
    return guarded(s, [&]() {
        if (text == nullptr) throw nexact::InputError("structure text must not be null");
        s->structure = text;
    });
}

nx_status nx_run(nx_session* s, const char* command) {
    return guarded(s, [&]() {
        if (command == nullptr) throw nexact::InputError("command must not be null");
        if (s->algebra.empty())
            throw nexact::InputError("no algebra loaded; call nx_set_algebra first");
        s->report = nexact::run_command(command, s->cfg, s->algebra, s->modules, s->structure);
    });
}

const char* nx_report(const nx_session* s) {
    if (s == nullptr) return "";
    return s->report.c_str();
}

const char* nx_last_error(const nx_session* s) {
    if (s == nullptr) return "";
    return s->error.c_str();
}

}  // extern "C"
