#include "dgforge/cli.hpp"

#include <cctype>
#include <cstdio>
#include <set>
#include <sstream>

#include "dgforge/resolutions.hpp"

namespace dgforge::cli {

namespace {

struct Line {
    int number = 0;
    std::string text;
    std::vector<Token> tokens;
};

std::vector<Token> split(const std::string& text, int line, int offset = 0)
{
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
            ++i;
        if (i == text.size())
            break;
        std::size_t j = i;
        while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])))
            ++j;
        out.push_back({text.substr(i, j - i), line, offset + static_cast<int>(i) + 1});
        i = j;
    }
    return out;
}

[[noreturn]] void malformed(const Token& at, const std::string& keyword, const std::string& expected)
{
    throw ParseError("malformed '" + keyword + "' stanza: expected '" + expected + "'", at.line, at.column);
}

int parse_degree(const Token& t, const std::string& keyword, const std::string& expected)
{
    const std::string& s = t.text;
    std::size_t i = (s.size() > 1 && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (i == s.size() || s.size() > 9)
        malformed(t, keyword, expected);
    for (std::size_t k = i; k < s.size(); ++k)
        if (!std::isdigit(static_cast<unsigned char>(s[k])))
            malformed(t, keyword, expected);
    return std::stoi(s);
}

bool valid_name(const std::string& s)
{
    if (s.empty())
        return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '^' || c == '\''))
            return false;
    return true;
}

// Linear combination starting at `column` (1-based) of `line`.
std::vector<TermSpec> parse_rhs(const std::string& text, int line, int column, const std::string& keyword)
{
    struct Ch {
        char c;
        int col;
    };
    std::vector<Ch> chars;
    for (std::size_t i = 0; i < text.size(); ++i)
        if (!std::isspace(static_cast<unsigned char>(text[i])))
            chars.push_back({text[i], column + static_cast<int>(i)});
    if (chars.empty())
        malformed({"", line, column}, keyword, "a linear combination after '='");
    std::vector<TermSpec> out;
    std::size_t i = 0;
    while (i < chars.size()) {
        bool negative = false;
        if (chars[i].c == '+' || chars[i].c == '-') {
            negative = chars[i].c == '-';
            ++i;
        } else if (!out.empty()) {
            malformed({"", line, chars[i].col}, keyword, "'+' between terms");
        }
        std::size_t j = i;
        while (j < chars.size() && chars[j].c != '+' && chars[j].c != '-')
            ++j;
        if (j == i)
            malformed({"", line, i < chars.size() ? chars[i].col : column}, keyword, "a term");
        std::string term;
        for (std::size_t k = i; k < j; ++k)
            term += chars[k].c;
        int term_col = chars[i].col;
        TermSpec t;
        auto star = term.find('*');
        std::string name = term;
        t.coeff = "1";
        if (star != std::string::npos) {
            t.coeff = term.substr(0, star);
            name = term.substr(star + 1);
            if (t.coeff.empty())
                malformed({"", line, term_col}, keyword, "<coeff>*<name>");
            for (char c : t.coeff)
                if (!std::isdigit(static_cast<unsigned char>(c)) && c != '/')
                    malformed({"", line, term_col}, keyword, "an integer or fraction coefficient");
            term_col = chars[i + star + 1 < j ? i + star + 1 : i].col;
        }
        if (!valid_name(name))
            malformed({"", line, term_col}, keyword, "<coeff>*<name>");
        if (negative)
            t.coeff = "-" + t.coeff;
        t.name = {name, line, term_col};
        out.push_back(std::move(t));
        i = j;
    }
    return out;
}

Assignment parse_assignment(const Line& l, std::size_t lhs_count, const std::string& expected)
{
    const std::string& keyword = l.tokens[0].text;
    auto eq = l.text.find('=');
    if (eq == std::string::npos)
        malformed(l.tokens[0], keyword, expected);
    Assignment a;
    a.keyword = l.tokens[0];
    auto lhs = split(l.text.substr(0, eq), l.number);
    if (lhs.size() != lhs_count + 1)
        malformed(l.tokens[0], keyword, expected);
    for (std::size_t k = 1; k < lhs.size(); ++k) {
        if (!valid_name(lhs[k].text))
            malformed(lhs[k], keyword, expected);
        a.lhs.push_back(lhs[k]);
    }
    a.rhs = parse_rhs(l.text.substr(eq + 1), l.number, static_cast<int>(eq) + 2, keyword);
    return a;
}

BasisSpec parse_basis(const Line& l, const std::string& expected)
{
    const auto& t = l.tokens;
    if (t.size() != 4 || t[2].text != "deg" || !valid_name(t[1].text))
        malformed(t[0], t[0].text, expected);
    return {t[1], parse_degree(t[3], t[0].text, expected)};
}

IdealSpec parse_ideal(const Line& l)
{
    const char* expected = "ideal <name> = span <elements>";
    const auto& t = l.tokens;
    auto eq = l.text.find('=');
    if (t.size() < 2 || eq == std::string::npos || !valid_name(t[1].text))
        malformed(t[0], "ideal", expected);
    auto lhs = split(l.text.substr(0, eq), l.number);
    if (lhs.size() != 2)
        malformed(t[0], "ideal", expected);
    std::string rest = l.text.substr(eq + 1);
    auto words = split(rest, l.number, static_cast<int>(eq) + 1);
    if (words.empty() || words[0].text != "span")
        malformed(t[0], "ideal", expected);
    IdealSpec out{t[1], {}};
    int start = words[0].column + 4; // just past "span"
    std::string list = l.text.substr(start - 1);
    if (list.find(',') != std::string::npos) {
        std::size_t from = 0;
        while (from <= list.size()) {
            auto comma = list.find(',', from);
            std::size_t to = comma == std::string::npos ? list.size() : comma;
            out.elements.push_back(
                parse_rhs(list.substr(from, to - from), l.number, start + static_cast<int>(from), "ideal"));
            if (comma == std::string::npos)
                break;
            from = comma + 1;
        }
    } else {
        for (const auto& w : split(list, l.number, start - 1))
            out.elements.push_back(parse_rhs(w.text, l.number, w.column, "ideal"));
    }
    return out;
}

} // namespace

InputSpec parse_input(const std::string& text)
{
    InputSpec spec;
    std::istringstream in(text);
    std::string raw;
    int number = 0;
    int cur_module = -1;
    while (std::getline(in, raw)) {
        ++number;
        if (!raw.empty() && raw.back() == '\r')
            raw.pop_back();
        auto hash = raw.find('#');
        Line l{number, hash == std::string::npos ? raw : raw.substr(0, hash), {}};
        l.tokens = split(l.text, number);
        if (l.tokens.empty())
            continue;
        const Token& key = l.tokens[0];
        const std::string& k = key.text;
        auto need_algebra = [&]() {
            if (spec.algebras.empty())
                throw ParseError("'" + k + "' stanza outside an algebra", key.line, key.column);
        };
        auto need_algebra_level = [&]() {
            need_algebra();
            if (cur_module >= 0)
                throw ParseError("'" + k + "' stanza inside module '" + spec.modules[cur_module].name.text + "'",
                                 key.line, key.column);
        };
        auto need_module = [&]() {
            if (cur_module < 0)
                throw ParseError("'" + k + "' stanza outside a module", key.line, key.column);
        };
        if (k == "field") {
            if (l.tokens.size() != 2)
                malformed(key, k, "field <p>");
            if (spec.field)
                throw ParseError("second 'field' stanza", key.line, key.column);
            spec.field = l.tokens[1];
        } else if (k == "algebra") {
            if (l.tokens.size() != 2 || !valid_name(l.tokens[1].text))
                malformed(key, k, "algebra <name>");
            spec.algebras.push_back({l.tokens[1], {}, {}, {}, {}});
            cur_module = -1;
        } else if (k == "basis") {
            need_algebra_level();
            spec.algebras.back().basis.push_back(parse_basis(l, "basis <name> deg <d>"));
        } else if (k == "mul") {
            need_algebra_level();
            spec.algebras.back().mul.push_back(parse_assignment(l, 2, "mul <a> <b> = <coeff>*<c> + ..."));
        } else if (k == "ideal") {
            need_algebra_level();
            spec.algebras.back().ideals.push_back(parse_ideal(l));
        } else if (k == "diff") {
            need_algebra();
            Assignment a = parse_assignment(l, 1, "diff <a> = <coeff>*<b> + ...");
            if (cur_module >= 0)
                spec.modules[cur_module].diff.push_back(std::move(a));
            else
                spec.algebras.back().diff.push_back(std::move(a));
        } else if (k == "module") {
            need_algebra();
            if (l.tokens.size() != 2 || !valid_name(l.tokens[1].text))
                malformed(key, k, "module <name>");
            spec.modules.push_back({l.tokens[1], static_cast<int>(spec.algebras.size()) - 1, {}, {}, {}});
            cur_module = static_cast<int>(spec.modules.size()) - 1;
        } else if (k == "gen") {
            need_module();
            spec.modules[cur_module].gens.push_back(parse_basis(l, "gen <m> deg <d>"));
        } else if (k == "act") {
            need_module();
            spec.modules[cur_module].act.push_back(parse_assignment(l, 2, "act <m> <a> = <coeff>*<n> + ..."));
        } else {
            throw ParseError("unknown stanza '" + k + "'", key.line, key.column);
        }
    }
    if (!spec.field)
        throw ParseError("missing 'field' stanza", 1, 1);
    if (spec.algebras.empty())
        throw ParseError("missing 'algebra' stanza", number > 0 ? number : 1, 1);
    return spec;
}

namespace {

std::string where(const Token& t) { return "line " + std::to_string(t.line); }

Field parse_field(const Token& t)
{
    if (t.text == "Q" || t.text == "0")
        return Field::rationals();
    for (char c : t.text)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            malformed(t, "field", "field <p>");
    if (t.text.size() > 10)
        throw ParseError("field size out of range", t.line, t.column);
    unsigned long q = std::stoul(t.text);
    if (q > 0x7fffffffUL || !is_prime(q))
        throw ParseError("field " + t.text + " is not a prime below 2^31", t.line, t.column);
    return Field::prime(static_cast<std::uint32_t>(q));
}

using Index = std::map<std::string, int>;

Index index_of(const std::vector<BasisSpec>& basis, const std::string& keyword)
{
    Index out;
    for (int i = 0; i < static_cast<int>(basis.size()); ++i)
        if (!out.emplace(basis[i].name.text, i).second)
            throw ParseError("duplicate element '" + basis[i].name.text + "' in '" + keyword + "' stanza",
                             basis[i].name.line, basis[i].name.column);
    return out;
}

int lookup(const Index& idx, const Token& t, const std::string& keyword)
{
    auto it = idx.find(t.text);
    if (it == idx.end())
        throw ParseError("unknown element '" + t.text + "' in '" + keyword + "' stanza", t.line, t.column);
    return it->second;
}

SparseVec combination(Field f, const Index& idx, const std::vector<TermSpec>& terms, const std::string& keyword)
{
    SparseVec out(f);
    for (const auto& t : terms) {
        if (t.name.text == "0" && !idx.count("0")) {
            if (terms.size() != 1)
                throw ParseError("'0' mixed with other terms in '" + keyword + "' stanza", t.name.line,
                                 t.name.column);
            continue;
        }
        Scalar c;
        try {
            c = Scalar::parse(f, t.coeff);
        } catch (const Error& e) {
            throw ParseError("bad coefficient '" + t.coeff + "' in '" + keyword + "' stanza", t.name.line,
                             t.name.column);
        }
        out.add(lookup(idx, t.name, keyword), c);
    }
    return out;
}

ModulePtr share(DgModule m) { return std::make_shared<const DgModule>(std::move(m)); }

} // namespace

Workspace build_workspace(const InputSpec& spec)
{
    Workspace ws;
    ws.field = parse_field(*spec.field);
    Field f = ws.field;
    std::set<std::string> algebra_names;
    for (const auto& a : spec.algebras) {
        if (!algebra_names.insert(a.name.text).second)
            throw ParseError("duplicate algebra '" + a.name.text + "'", a.name.line, a.name.column);
        std::string label = "algebra '" + a.name.text + "' (" + where(a.name) + ")";
        Index idx = index_of(a.basis, "basis");
        int n = static_cast<int>(a.basis.size());
        auto unit_it = idx.find("1");
        if (unit_it == idx.end())
            throw InputError(label + " has no basis element named 1");
        int u = unit_it->second;
        if (a.basis[u].degree != 0)
            throw InputError(label + ": the unit 1 must sit in degree 0");

        std::vector<BasisElement> basis;
        for (const auto& b : a.basis)
            basis.push_back({b.name.text, b.degree});
        StructureTable mult(n, n, f);
        std::set<std::pair<int, int>> seen;
        for (const auto& m : a.mul) {
            int x = lookup(idx, m.lhs[0], "mul"), y = lookup(idx, m.lhs[1], "mul");
            if (!seen.insert({x, y}).second)
                throw ParseError("duplicate product " + m.lhs[0].text + " " + m.lhs[1].text + " in 'mul' stanza",
                                 m.keyword.line, m.keyword.column);
            mult.set(x, y, combination(f, idx, m.rhs, "mul"));
        }
        for (int b = 0; b < n; ++b) {
            if (!seen.count({u, b}))
                mult.set(u, b, SparseVec::unit(f, b));
            if (!seen.count({b, u}))
                mult.set(b, u, SparseVec::unit(f, b));
        }
        std::vector<SparseVec> diffs(n, SparseVec(f));
        std::set<int> diffed;
        for (const auto& d : a.diff) {
            int x = lookup(idx, d.lhs[0], "diff");
            if (!diffed.insert(x).second)
                throw ParseError("duplicate differential of " + d.lhs[0].text + " in 'diff' stanza",
                                 d.keyword.line, d.keyword.column);
            diffs[x] = combination(f, idx, d.rhs, "diff");
        }
        AlgebraEntry entry;
        entry.name = a.name.text;
        try {
            entry.algebra = std::make_shared<const DgAlgebra>(f, basis, mult, SparseVec::unit(f, u), diffs);
        } catch (const VerificationError& e) {
            throw InputError(label + ": " + e.what());
        }
        const DgAlgebra& alg = *entry.algebra;
        for (const auto& ideal : a.ideals) {
            if (entry.ideals.count(ideal.name.text))
                throw ParseError("duplicate ideal '" + ideal.name.text + "'", ideal.name.line, ideal.name.column);
            std::vector<SparseVec> cols;
            for (const auto& e : ideal.elements)
                cols.push_back(combination(f, idx, e, "ideal"));
            Matrix span = Matrix::from_columns(n, f, cols);
            int r = rank(span);
            std::vector<SparseVec> more = cols;
            for (const auto& v : cols) {
                more.push_back(alg.differentiate(v));
                for (int b = 0; b < n; ++b) {
                    more.push_back(alg.multiply(SparseVec::unit(f, b), v));
                    more.push_back(alg.multiply(v, SparseVec::unit(f, b)));
                }
            }
            if (rank(Matrix::from_columns(n, f, more)) != r)
                throw InputError("ideal '" + ideal.name.text + "' (" + where(ideal.name) +
                                 ") is not a two-sided dg-ideal");
            entry.ideal_names.push_back(ideal.name.text);
            entry.ideals.emplace(ideal.name.text, std::move(span));
        }
        ws.algebras.push_back(std::move(entry));
    }

    for (const auto& m : spec.modules) {
        const AlgebraEntry& a = ws.algebras[m.algebra];
        const AlgebraSpec& as = spec.algebras[m.algebra];
        std::string label = "module '" + m.name.text + "' (" + where(m.name) + ")";
        for (const auto& other : ws.modules)
            if (other.algebra == a.name && other.name == m.name.text)
                throw ParseError("duplicate module '" + m.name.text + "'", m.name.line, m.name.column);
        Index aidx = index_of(as.basis, "basis");
        Index midx = index_of(m.gens, "gen");
        int dm = static_cast<int>(m.gens.size());
        int da = a.algebra->dim();
        int u = aidx.at("1");
        std::vector<BasisElement> basis;
        for (const auto& g : m.gens)
            basis.push_back({g.name.text, g.degree});
        StructureTable action(dm, da, f);
        std::set<std::pair<int, int>> seen;
        for (const auto& act : m.act) {
            int i = lookup(midx, act.lhs[0], "act"), x = lookup(aidx, act.lhs[1], "act");
            if (!seen.insert({i, x}).second)
                throw ParseError("duplicate action " + act.lhs[0].text + " " + act.lhs[1].text + " in 'act' stanza",
                                 act.keyword.line, act.keyword.column);
            action.set(i, x, combination(f, midx, act.rhs, "act"));
        }
        for (int i = 0; i < dm; ++i)
            if (!seen.count({i, u}))
                action.set(i, u, SparseVec::unit(f, i));
        std::vector<SparseVec> diffs(dm, SparseVec(f));
        std::set<int> diffed;
        for (const auto& d : m.diff) {
            int i = lookup(midx, d.lhs[0], "diff");
            if (!diffed.insert(i).second)
                throw ParseError("duplicate differential of " + d.lhs[0].text + " in 'diff' stanza",
                                 d.keyword.line, d.keyword.column);
            diffs[i] = combination(f, midx, d.rhs, "diff");
        }
        try {
            ws.modules.push_back({m.name.text, a.name, share(DgModule(a.algebra, basis, diffs, action))});
        } catch (const VerificationError& e) {
            throw InputError(label + ": " + e.what());
        }
    }
    return ws;
}

Workspace load_workspace(const std::string& text) { return build_workspace(parse_input(text)); }

const AlgebraEntry& Workspace::algebra(const std::string& name) const
{
    if (name.empty())
        return algebras.front();
    for (const auto& a : algebras)
        if (a.name == name)
            return a;
    throw InputError("unknown algebra '" + name + "'");
}

ModulePtr Workspace::module(const AlgebraEntry& a, const std::string& name) const
{
    for (const auto& m : modules)
        if (m.algebra == a.name && m.name == name)
            return m.module;
    if (name == "regular")
        return share(regular_module(a.algebra));
    if (name == "dual") {
        if (!a.algebra->ordinary())
            throw InputError("the dual module needs an ordinary algebra");
        return share(dual_module(a.algebra));
    }
    if (name.rfind("R/", 0) == 0) {
        auto it = a.ideals.find(name.substr(2));
        if (it == a.ideals.end())
            throw InputError("unknown ideal '" + name.substr(2) + "' of algebra '" + a.name + "'");
        return quotient_module(share(regular_module(a.algebra)), it->second).quotient;
    }
    throw InputError("unknown module '" + name + "' over algebra '" + a.name + "'");
}

std::string digest(const std::string& bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string("fnv1a64:") + buf;
}

} // namespace dgforge::cli
