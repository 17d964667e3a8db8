#include "dgforge/cli.hpp"

#include <chrono>

#include "dgforge/completion.hpp"
#include "dgforge/oracle.hpp"
#include "dgforge/resolutions.hpp"

namespace dgforge::cli {

namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

std::string range_text(const Certification& c)
{
    if (c.complete)
        return "all degrees";
    if (c.empty())
        return "none";
    bool open_lo = c.lo <= Certification::everywhere().lo, open_hi = c.hi >= Certification::everywhere().hi;
    if (open_lo && open_hi)
        return "all degrees";
    if (open_lo)
        return "degrees <= " + std::to_string(c.hi);
    if (open_hi)
        return "degrees >= " + std::to_string(c.lo);
    return "degrees " + std::to_string(c.lo) + ".." + std::to_string(c.hi);
}

// Smallest range covering the listed degrees, "none" when empty.
std::string degrees_text(const std::vector<int>& ds)
{
    if (ds.empty())
        return "none";
    auto [lo, hi] = std::minmax_element(ds.begin(), ds.end());
    std::string out = "degrees " + std::to_string(*lo) + ".." + std::to_string(*hi);
    if (static_cast<int>(ds.size()) != *hi - *lo + 1) {
        out += " (";
        for (std::size_t i = 0; i < ds.size(); ++i)
            out += (i ? "," : "") + std::to_string(ds[i]);
        out += ")";
    }
    return out;
}

struct Builder {
    json doc;
    Clock::time_point start = Clock::now();

    Builder(const Options& o, const AlgebraEntry& a)
    {
        doc["schema"] = schema_version;
        doc["tool"] = {{"name", "dgforge"}, {"version", tool_version()}};
        doc["command"] = o.command;
        doc["input"] = {{"name", o.input_name}, {"digest", o.input_digest}};
        doc["algebra"] = {{"name", a.name}, {"field", a.algebra->field().name()}, {"dim", a.algebra->dim()}};
        doc["facts"] = json::array();
        doc["tables"] = json::array();
        doc["verdicts"] = json::array();
        doc["notes"] = json::array();
    }

    void fact(const std::string& name, json value, const std::string& certified)
    {
        doc["facts"].push_back({{"name", name}, {"value", std::move(value)}, {"certified", certified}});
    }
    void fact(const std::string& name, json value)
    {
        doc["facts"].push_back({{"name", name}, {"value", std::move(value)}});
    }
    json& table(const std::string& title, std::vector<std::string> columns, const std::string& certified)
    {
        doc["tables"].push_back({{"title", title}, {"certified", certified}, {"columns", columns},
                                 {"rows", json::array()}});
        return doc["tables"].back()["rows"];
    }
    void verdict(const std::string& name, Verdict v, const std::string& certified)
    {
        doc["verdicts"].push_back({{"name", name}, {"value", to_string(v)}, {"certified", certified}});
    }
    void note(const std::string& n)
    {
        if (!n.empty())
            doc["notes"].push_back(n);
    }
    Report finish(int code, const Options& o)
    {
        doc["exit_code"] = code;
        if (o.timing)
            doc["timing_ms"] =
                std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
        return {std::move(doc), code};
    }
};

int top_degree(const DgModule& m)
{
    if (m.dim() == 0)
        return 0;
    int top = m.degree(0);
    for (int i = 1; i < m.dim(); ++i)
        top = std::max(top, m.degree(i));
    return top;
}

void check_window(const Options& o)
{
    if (o.window < 0)
        throw InputError("--window must be non-negative");
    if (o.depth < 0)
        throw InputError("--depth must be non-negative");
}

BidualityOptions biduality_options(const Options& o)
{
    BidualityOptions b;
    b.depth = o.depth;
    b.window = Window(-o.window, o.window);
    b.stages = o.stages;
    b.minimal = o.minimal;
    return b;
}

std::string bic_table(Builder& b, const std::string& title, const BicResult& r)
{
    std::vector<int> certified;
    for (const auto& [t, row] : r.table)
        if (row.certified && !row.boundary_suspect)
            certified.push_back(t);
    std::string text = degrees_text(certified);
    json& rows = b.table(title, {"degree", "dim", "certified", "stable", "boundary", "base"}, text);
    for (const auto& [t, row] : r.table)
        rows.push_back({t, row.dim, row.certified, row.stable, row.boundary_suspect, row.base});
    return text;
}

void bic_facts(Builder& b, const std::string& prefix, const BicResult& r)
{
    b.fact(prefix + "scheme", r.scheme);
    b.fact(prefix + "stages", r.stages);
    b.fact(prefix + "base stage", r.base_stage);
    b.fact(prefix + "resolution terminated", r.resolution_terminated);
    b.fact(prefix + "unit injective", r.unit_injective);
    b.fact(prefix + "unit surjective", r.unit_surjective);
    b.fact(prefix + "unit multiplicative", r.unit_multiplicative);
    b.fact(prefix + "product well defined", r.product_well_defined);
    b.fact(prefix + "higher vanishing", r.higher_vanishing);
    if (r.target_iso)
        b.fact(prefix + "target iso", *r.target_iso);
    b.note(r.h0_note.empty() ? "" : prefix + r.h0_note);
    b.note(r.target_note.empty() ? "" : prefix + r.target_note);
}

std::optional<BicTarget> target_of(const Workspace& ws, const AlgebraEntry& a, const std::string& name)
{
    if (name.empty())
        return std::nullopt;
    Field f = a.algebra->field();
    if (name == "self")
        return BicTarget{a.algebra, Matrix::identity(a.algebra->dim(), f)};
    const AlgebraEntry& t = ws.algebra(name);
    // basis elements are matched by name
    Matrix comp(t.algebra->dim(), a.algebra->dim(), f);
    for (int i = 0; i < a.algebra->dim(); ++i) {
        const std::string& n = a.algebra->basis(i).name;
        int j = -1;
        for (int k = 0; k < t.algebra->dim(); ++k)
            if (t.algebra->basis(k).name == n)
                j = k;
        if (j < 0)
            throw InputError("target algebra '" + name + "' has no element named " + n);
        comp.set(j, i, Scalar::one(f));
    }
    return BicTarget{t.algebra, comp};
}

} // namespace

Report cmd_resolve(const Workspace& ws, const Options& o)
{
    check_window(o);
    const AlgebraEntry& a = ws.algebra(o.algebra);
    if (o.modules.size() != 1)
        throw InputError("resolve takes exactly one --module");
    Builder b(o, a);
    ModulePtr m = ws.module(a, o.modules[0]);
    int top = top_degree(*m);
    auto res = semifree_resolve(m, Window(top - o.window, top), o.minimal);
    std::string exact = range_text(res.exact);
    b.fact("module", o.modules[0]);
    b.fact("generators", res.generator_count(), exact);
    b.fact("minimal", res.minimal);
    b.fact("stages", res.stages);
    b.fact("missing generators up to degree",
           res.missing_bound ? json(*res.missing_bound) : json("none"));
    json& rows = b.table("generators", {"degree", "count"}, exact);
    for (int d = top; d >= top - o.window; --d)
        rows.push_back({d, static_cast<int>(res.generators_in_degree(d).size())});
    b.note(res.note);
    return b.finish(0, o);
}

Report cmd_ext(const Workspace& ws, const Options& o)
{
    check_window(o);
    const AlgebraEntry& a = ws.algebra(o.algebra);
    if (o.modules.size() != 2)
        throw InputError("ext takes two --module options");
    Builder b(o, a);
    ModulePtr m = ws.module(a, o.modules[0]);
    ModulePtr n = ws.module(a, o.modules[1]);
    int top = top_degree(*m);
    auto res = semifree_resolve(m, Window(top - o.window, top), o.minimal);
    ModuleHom h = derived_hom(res, n);
    const Complex& c = h.complex();
    std::string cert = range_text(c.cert());
    b.fact("source", o.modules[0]);
    b.fact("target", o.modules[1]);
    b.fact("generators", res.generator_count(), range_text(res.exact));
    json& rows = b.table("Ext", {"degree", "dim", "certified"}, cert);
    int lo = std::max(c.lo(), -o.window), hi = std::min(c.hi(), o.window);
    for (int t = lo; t <= hi; ++t)
        rows.push_back({t, cohomology_dim(c, t, Certify::relaxed), c.certified_at(t)});
    b.note(res.note);
    return b.finish(0, o);
}

Report cmd_bic(const Workspace& ws, const Options& o)
{
    check_window(o);
    const AlgebraEntry& a = ws.algebra(o.algebra);
    if (o.j.empty())
        throw InputError("bic needs --j");
    Builder b(o, a);
    ModulePtr j = ws.module(a, o.j);
    auto target = target_of(ws, a, o.target);
    auto ctx = make_context(a.algebra, j, biduality_options(o));
    BicResult r = bicommutator(ctx, target);
    b.fact("j", o.j);
    b.fact("dim P", ctx.p->dim());
    b.fact("dim E", ctx.endo->dim());
    std::string cert = bic_table(b, "H(Bic)", r);
    bic_facts(b, "", r);
    Verdict v = r.verdict();
    b.verdict("bic", v, cert);
    return b.finish(exit_code(v), o);
}

Report cmd_complete(const Workspace& ws, const Options& o)
{
    check_window(o);
    const AlgebraEntry& a = ws.algebra(o.algebra);
    std::string ideal = o.ideal;
    if (ideal.empty()) {
        if (a.ideal_names.empty())
            throw InputError("algebra '" + a.name + "' declares no ideal");
        ideal = a.ideal_names.front();
    }
    auto it = a.ideals.find(ideal);
    if (it == a.ideals.end())
        throw InputError("unknown ideal '" + ideal + "' of algebra '" + a.name + "'");
    if (o.nmax < 1)
        throw InputError("--nmax must be positive");
    Builder b(o, a);
    CompletionOptions co;
    co.bic = biduality_options(o);
    co.n_max = o.nmax;
    CompletionReport rep = completion_theorem_check(a.algebra, it->second, co);

    b.fact("ideal", ideal);
    b.fact("tower stabilized at", rep.tower.stabilized_at ? json(*rep.tower.stabilized_at) : json("no"));
    b.fact("limit stage", rep.limit.stage);
    b.fact("limit dim", rep.limit.algebra->dim());
    json& tower = b.table("adic tower", {"n", "dim R/a^n"}, "exact");
    for (int n = 1; n <= rep.tower.size(); ++n)
        tower.push_back({n, rep.tower.stages[n - 1].algebra->dim()});

    std::string qcert = bic_table(b, "H(Bic) for J = " + rep.quotient.j_name, rep.quotient.bic);
    bic_facts(b, "quotient: ", rep.quotient.bic);
    b.verdict("quotient", rep.quotient.verdict, qcert);
    if (rep.koszul) {
        std::string kcert = bic_table(b, "H(Bic) for J = " + rep.koszul->j_name, rep.koszul->bic);
        bic_facts(b, "koszul: ", rep.koszul->bic);
        b.verdict("koszul", rep.koszul->verdict, kcert);
    } else {
        b.note("koszul side skipped: " + rep.koszul_note);
    }
    if (rep.h0_isomorphic)
        b.fact("H0 of the two Bic algebras isomorphic", *rep.h0_isomorphic);
    for (const auto& n : rep.notes)
        b.note(n);
    Verdict v = rep.verdict();
    b.verdict("completion", v, qcert);
    return b.finish(exit_code(v), o);
}

Report cmd_classical(const Workspace& ws, const Options& o)
{
    const AlgebraEntry& a = ws.algebra(o.algebra);
    if (o.j.empty())
        throw InputError("classical needs --j");
    Builder b(o, a);
    ModulePtr j = ws.module(a, o.j);
    oracle::FiniteAlgebra r;
    oracle::FiniteModuleTable table;
    try {
        r = oracle::finite_algebra(*a.algebra);
        table = oracle::module_table(*j);
    } catch (const VerificationError& e) {
        throw InputError(std::string("classical: ") + e.what());
    }
    oracle::ClassicalBic c = oracle::classical_bicommutator(r, table);
    b.fact("j", o.j);
    b.fact("dim J", table.dim, "exact");
    b.fact("dim E", c.e.algebra.dim, "exact");
    b.fact("dim Bic", c.algebra.dim, "exact");
    b.fact("enumerated", c.enumerated && c.e.enumerated);
    b.fact("unit injective", c.unit_injective);
    b.fact("unit surjective", c.unit_surjective);
    b.fact("unit multiplicative", c.unit_multiplicative);
    Verdict v = c.holds() ? Verdict::iso : Verdict::not_iso;
    b.verdict("double centralizer", v, "exact");
    return b.finish(exit_code(v), o);
}

} // namespace dgforge::cli
