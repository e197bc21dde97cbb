#include "nexact/io.hpp"

#include <cctype>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "nexact/errors.hpp"

namespace nexact {

namespace {

struct Line {
    int no;  // 1-based position in the original text
    std::string text;
};

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Comment-stripped, trimmed, non-blank lines with their original numbers.
std::vector<Line> split_lines(const std::string& text) {
    std::vector<Line> out;
    std::istringstream in(text);
    std::string raw;
    int no = 0;
    while (std::getline(in, raw)) {
        ++no;
        size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        std::string t = trim(raw);
        if (!t.empty()) out.push_back({no, t});
    }
    return out;
}

[[noreturn]] void fail(int lineNo, const std::string& what) {
    throw InputError("line " + std::to_string(lineNo) + ": " + what);
}

// Splits "head rest" on the first run of whitespace; rest may be empty.
std::pair<std::string, std::string> split_head(const std::string& s) {
    size_t ws = s.find_first_of(" \t");
    if (ws == std::string::npos) return {s, ""};
    return {s.substr(0, ws), trim(s.substr(ws))};
}

bool parse_int(const std::string& s, long long& out) {
    if (s.empty()) return false;
    size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (size_t k = i; k < s.size(); ++k)
        if (!std::isdigit(static_cast<unsigned char>(s[k]))) return false;
    try {
        out = std::stoll(s);
    } catch (const std::out_of_range&) {
        return false;
    }
    return true;
}

uint32_t reduce_mod(long long v, uint32_t p) {
    long long r = v % static_cast<long long>(p);
    if (r < 0) r += p;
    return static_cast<uint32_t>(r);
}

std::vector<std::string> split_on(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(trim(cur));
    return out;
}

/* A relation line is a signed sum of terms; each term is an optional
 * coefficient, then `*`-joined arrow names written composition-style
 * (`b*a` applies a first).  Arrows resolve against the finished quiver,
 * so relation lines are collected during the scan and parsed afterwards. */
Relation parse_relation(const std::string& body, int lineNo, const Quiver& q, uint32_t p) {
    std::string spaced;
    for (char c : body) {
        if (c == '+' || c == '-') {
            spaced.push_back(' ');
            spaced.push_back(c);
            spaced.push_back(' ');
        } else {
            spaced.push_back(c);
        }
    }
    std::istringstream in(spaced);
    std::string tok;
    Relation rel;
    int sign = +1;
    bool expectTerm = true;
    while (in >> tok) {
        if (tok == "+" || tok == "-") {
            if (expectTerm) fail(lineNo, "misplaced sign in relation");
            sign = (tok == "-") ? -1 : +1;
            expectTerm = true;
            continue;
        }
        if (!expectTerm) fail(lineNo, "missing sign between relation terms");
        std::vector<std::string> factors = split_on(tok, '*');
        long long coeff = 1;
        size_t first = 0;
        long long parsed;
        if (parse_int(factors[0], parsed)) {
            coeff = parsed;
            first = 1;
        }
        if (first == factors.size()) fail(lineNo, "relation term has no arrows");
        RelationTerm term;
        term.coeff = reduce_mod(sign * coeff, p);
        // Composition order on the page, application order in storage.
        for (size_t i = factors.size(); i-- > first;) {
            const std::string& name = factors[i];
            int ai = q.arrow_index(name);
            if (ai < 0) fail(lineNo, "unknown arrow '" + name + "' in relation");
            term.arrows.push_back(ai);
        }
        for (size_t i = 1; i < term.arrows.size(); ++i) {
            const Arrow& prev = q.arrows[term.arrows[i - 1]];
            const Arrow& next = q.arrows[term.arrows[i]];
            if (prev.tgt != next.src)
                fail(lineNo, "path does not compose: arrow '" + next.name +
                                 "' does not start where '" + prev.name + "' ends");
        }
        if (term.coeff != 0) rel.terms.push_back(std::move(term));
        sign = +1;
        expectTerm = false;
    }
    if (expectTerm) fail(lineNo, "relation line has a trailing sign");
    if (!rel.terms.empty()) {
        int src = q.arrows[rel.terms.front().arrows.front()].src;
        int tgt = q.arrows[rel.terms.front().arrows.back()].tgt;
        for (const auto& t : rel.terms) {
            if (q.arrows[t.arrows.front()].src != src || q.arrows[t.arrows.back()].tgt != tgt)
                fail(lineNo, "relation terms do not share source and target");
        }
    }
    return rel;
}

// Parses "k = v" or "k=v" bodies such as `p=2` and `n = 3`.
bool parse_assignment(const std::string& s, const std::string& key, std::string& value) {
    size_t eq = s.find('=');
    if (eq == std::string::npos) return false;
    if (trim(s.substr(0, eq)) != key) return false;
    value = trim(s.substr(eq + 1));
    return true;
}

/* The matrix literal is a nested array of integers.  A tiny recursive
 * descent keeps the dependency surface at zero and reports positions. */
struct MatScanner {
    const std::string& s;
    size_t i = 0;
    int lineNo;

    explicit MatScanner(const std::string& text, int line) : s(text), lineNo(line) {}

    void skip() {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    }
    bool eat(char c) {
        skip();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }
    long long integer() {
        skip();
        size_t start = i;
        if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        long long v;
        if (i == start || !parse_int(s.substr(start, i - start), v))
            fail(lineNo, "expected an integer in the matrix literal");
        return v;
    }

    std::vector<std::vector<long long>> matrix() {
        std::vector<std::vector<long long>> rows;
        if (!eat('[')) fail(lineNo, "matrix literal must start with '['");
        skip();
        if (eat(']')) {
            finish();
            return rows;
        }
        do {
            rows.push_back(row());
        } while (eat(','));
        if (!eat(']')) fail(lineNo, "matrix literal is missing its closing ']'");
        finish();
        return rows;
    }

    std::vector<long long> row() {
        std::vector<long long> out;
        if (!eat('[')) fail(lineNo, "matrix row must start with '['");
        skip();
        if (eat(']')) return out;
        do {
            out.push_back(integer());
        } while (eat(','));
        if (!eat(']')) fail(lineNo, "matrix row is missing its closing ']'");
        return out;
    }

    void finish() {
        skip();
        if (i != s.size()) fail(lineNo, "trailing characters after the matrix literal");
    }
};

}  // namespace

AlgebraFile parse_algebra_file(const std::string& text) {
    std::vector<Line> lines = split_lines(text);
    Quiver q;
    std::vector<Line> relationLines;
    long long p = 0;
    int pLine = 0;
    long long n = 0;

    for (const Line& ln : lines) {
        auto [head, rest] = split_head(ln.text);
        if (head == "field") {
            if (p != 0) fail(ln.no, "duplicate field line");
            std::string value;
            if (!parse_assignment(rest, "p", value) || !parse_int(value, p) || p < 2 ||
                p > (1LL << 20))
                fail(ln.no, "field line must read `field p=<prime>`");
            if (!is_prime(static_cast<uint32_t>(p))) fail(ln.no, "p must be prime");
            pLine = ln.no;
        } else if (head == "vertex") {
            if (rest.empty()) fail(ln.no, "vertex line needs a label");
            if (q.vertex_index(rest) >= 0) fail(ln.no, "duplicate vertex '" + rest + "'");
            q.vertices.push_back(rest);
        } else if (head == "arrow") {
            size_t colon = rest.find(':');
            if (colon == std::string::npos)
                fail(ln.no, "arrow line must read `arrow <name>: <src> -> <tgt>`");
            std::string name = trim(rest.substr(0, colon));
            std::string ends = trim(rest.substr(colon + 1));
            size_t arr = ends.find("->");
            if (name.empty() || arr == std::string::npos)
                fail(ln.no, "arrow line must read `arrow <name>: <src> -> <tgt>`");
            if (q.arrow_index(name) >= 0) fail(ln.no, "duplicate arrow '" + name + "'");
            std::string src = trim(ends.substr(0, arr));
            std::string tgt = trim(ends.substr(arr + 2));
            int si = q.vertex_index(src);
            int ti = q.vertex_index(tgt);
            if (si < 0) fail(ln.no, "unknown vertex '" + src + "'");
            if (ti < 0) fail(ln.no, "unknown vertex '" + tgt + "'");
            q.arrows.push_back({name, si, ti});
        } else if (head == "relation") {
            if (rest.empty()) fail(ln.no, "relation line is empty");
            relationLines.push_back({ln.no, rest});
        } else {
            std::string value;
            if (parse_assignment(ln.text, "n", value)) {
                if (!parse_int(value, n) || n < 1) fail(ln.no, "n must be a positive integer");
            } else {
                fail(ln.no, "unrecognized line '" + head + "'");
            }
        }
    }

    if (p == 0) fail(lines.empty() ? 1 : lines.back().no, "missing `field p=<prime>` line");
    if (q.vertices.empty()) fail(pLine, "the quiver needs at least one vertex");

    std::vector<Relation> rels;
    for (const Line& ln : relationLines)
        rels.push_back(parse_relation(ln.text, ln.no, q, static_cast<uint32_t>(p)));

    AlgebraFile out;
    out.n = (n == 0) ? 1 : static_cast<int>(n);
    out.alg = build_algebra(q, rels, static_cast<uint32_t>(p), 32, out.n);
    return out;
}

std::vector<NamedModule> parse_module_file(const std::string& text, const Algebra& a) {
    std::vector<Line> lines = split_lines(text);
    std::vector<NamedModule> out;
    std::map<std::string, int> seen;

    const Algebra* side = nullptr;
    std::string name;
    int headerLine = 0;
    std::vector<long long> dims;
    std::vector<int> dimLine;
    std::vector<bool> mapSeen;
    std::vector<std::vector<std::vector<long long>>> rawMaps;
    std::vector<int> mapLine;

    auto flush = [&]() {
        if (side == nullptr) return;
        Module m;
        m.alg = side;
        m.dims.assign(side->vertex_count(), 0);
        for (int v = 0; v < side->vertex_count(); ++v) {
            if (dims[v] < 0) fail(dimLine[v], "dimensions must be nonnegative");
            m.dims[v] = static_cast<int>(dims[v]);
        }
        for (int ai = 0; ai < side->arrow_count(); ++ai) {
            const Arrow& ar = side->quiver.arrows[ai];
            Mat mat(m.dims[ar.tgt], m.dims[ar.src], side->p);
            if (mapSeen[ai]) {
                const auto& rows = rawMaps[ai];
                if (static_cast<int>(rows.size()) != mat.rows)
                    fail(mapLine[ai], "matrix for arrow " + ar.name + " needs " +
                                          std::to_string(mat.rows) + " rows, got " +
                                          std::to_string(rows.size()));
                for (int r = 0; r < mat.rows; ++r) {
                    if (static_cast<int>(rows[r].size()) != mat.cols)
                        fail(mapLine[ai], "matrix for arrow " + ar.name + " needs " +
                                              std::to_string(mat.cols) + " columns, got " +
                                              std::to_string(rows[r].size()));
                    for (int c = 0; c < mat.cols; ++c)
                        mat.at(r, c) = reduce_mod(rows[r][c], side->p);
                }
            }
            m.maps.push_back(std::move(mat));
        }
        try {
            validate_module(m);
        } catch (const InputError& e) {
            fail(headerLine, "module " + name + ": " + e.what());
        }
        out.push_back({name, std::move(m)});
    };

    for (const Line& ln : lines) {
        auto [head, rest] = split_head(ln.text);
        if (head == "module") {
            flush();
            auto [mname, tail] = split_head(rest);
            auto [overKw, sideName] = split_head(tail);
            if (mname.empty() || overKw != "over" || sideName.empty())
                fail(ln.no, "module line must read `module <name> over <side>`");
            if (sideName == "A") {
                side = &a;
            } else if (sideName == "A^op" || sideName == "Aop") {
                side = &opposite_algebra(a);
            } else {
                fail(ln.no, "side must be A or A^op, got '" + sideName + "'");
            }
            if (seen.count(mname)) fail(ln.no, "duplicate module name '" + mname + "'");
            seen[mname] = ln.no;
            name = mname;
            headerLine = ln.no;
            dims.assign(side->vertex_count(), 0);
            dimLine.assign(side->vertex_count(), ln.no);
            mapSeen.assign(side->arrow_count(), false);
            rawMaps.assign(side->arrow_count(), {});
            mapLine.assign(side->arrow_count(), ln.no);
        } else if (head == "dim") {
            if (side == nullptr) fail(ln.no, "dim line before any module header");
            size_t eq = rest.find('=');
            if (eq == std::string::npos) fail(ln.no, "dim line must read `dim <vertex> = <k>`");
            std::string label = trim(rest.substr(0, eq));
            int vi = side->quiver.vertex_index(label);
            if (vi < 0) fail(ln.no, "unknown vertex '" + label + "'");
            long long k;
            if (!parse_int(trim(rest.substr(eq + 1)), k))
                fail(ln.no, "dim line must read `dim <vertex> = <k>`");
            if (k < 0 || k > 4096) fail(ln.no, "dimension out of range [0, 4096]");
            dims[vi] = k;
            dimLine[vi] = ln.no;
        } else if (head == "map") {
            if (side == nullptr) fail(ln.no, "map line before any module header");
            size_t eq = rest.find('=');
            if (eq == std::string::npos)
                fail(ln.no, "map line must read `map <arrow> = [[...],[...]]`");
            std::string label = trim(rest.substr(0, eq));
            int ai = side->quiver.arrow_index(label);
            if (ai < 0) fail(ln.no, "unknown arrow '" + label + "'");
            std::string literal = trim(rest.substr(eq + 1));
            MatScanner scan(literal, ln.no);
            rawMaps[ai] = scan.matrix();
            mapSeen[ai] = true;
            mapLine[ai] = ln.no;
        } else {
            fail(ln.no, "unrecognized line '" + head + "'");
        }
    }
    flush();
    return out;
}

std::vector<std::string> parse_structure_file(const std::string& text) {
    std::vector<std::string> out;
    for (const Line& ln : split_lines(text)) {
        if (ln.text.find_first_of(" \t") != std::string::npos)
            fail(ln.no, "structure files list one module name per line");
        out.push_back(ln.text);
    }
    return out;
}

std::string mat_text(const Mat& m) {
    if (m.rows == 0 || m.cols == 0) return "[]";
    std::string s = "[";
    for (int r = 0; r < m.rows; ++r) {
        if (r) s += ",";
        s += "[";
        for (int c = 0; c < m.cols; ++c) {
            if (c) s += ",";
            s += std::to_string(m.at(r, c));
        }
        s += "]";
    }
    s += "]";
    return s;
}

std::string module_file_text(const std::string& name, const Module& m) {
    const Algebra& a = *m.alg;
    std::string s = "module " + name + " over " + (a.is_opposite_side() ? "A^op" : "A") + "\n";
    for (int v = 0; v < a.vertex_count(); ++v)
        if (m.dims[v] != 0)
            s += "dim " + a.quiver.vertices[v] + " = " + std::to_string(m.dims[v]) + "\n";
    for (int ai = 0; ai < a.arrow_count(); ++ai)
        if (!m.maps[ai].is_zero())
            s += "map " + a.quiver.arrows[ai].name + " = " + mat_text(m.maps[ai]) + "\n";
    return s;
}

}  // namespace nexact
