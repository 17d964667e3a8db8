#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "dgforge/cli.hpp"

using namespace dgforge;

namespace {

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw cli::InputError("cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw cli::InputError("cannot write " + path);
    out << text;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"dgforge: derived bi-commutators over finite-dimensional dg-algebras"};
    app.set_version_flag("--version", cli::tool_version());
    app.require_subcommand(1);

    cli::Options o;
    std::string input;
    std::string format = "text";
    std::string output;
    std::string json_path;

    auto common = [&](CLI::App* sub) {
        sub->add_option("input", input, "algebra/module presentation file")->required();
        sub->add_option("--algebra", o.algebra, "algebra of the file to use (default: the first)");
        sub->add_option("--format", format, "report on stdout: text or json")
            ->check(CLI::IsMember({"text", "json"}));
        sub->add_option("-o,--output", output, "write the report here instead of stdout");
        sub->add_option("--json", json_path, "also write the JSON report here");
        sub->add_flag("--timing", o.timing, "add wall-clock time to the report");
    };

    auto* resolve = app.add_subcommand("resolve", "semi-free resolution of a module");
    common(resolve);
    resolve->add_option("--module", o.modules, "module to resolve")->required()->expected(1);
    resolve->add_option("--window", o.window, "number of degrees below the top of the module");
    resolve->add_flag("--minimal,!--no-minimal", o.minimal, "minimal resolution when possible (default)");

    auto* ext = app.add_subcommand("ext", "Ext table via the derived Hom");
    common(ext);
    ext->add_option("--module", o.modules, "source, then target")->required()->expected(2);
    ext->add_option("--window", o.window, "resolution window");

    auto* bic = app.add_subcommand("bic", "derived bi-commutator of J");
    common(bic);
    bic->add_option("--j", o.j, "module J")->required();
    bic->add_option("--target", o.target, "self, or an algebra of the file matched by basis names");
    bic->add_option("--window", o.window, "degrees -w..w of the tables");
    bic->add_option("--depth", o.depth, "length of the resolution P of J");
    bic->add_option("--stages", o.stages, "stages of the resolution over E");

    auto* complete = app.add_subcommand("complete", "completion theorem check for an ideal");
    common(complete);
    complete->add_option("--ideal", o.ideal, "ideal of the algebra (default: the first)");
    complete->add_option("--nmax", o.nmax, "longest adic tower");
    complete->add_option("--window", o.window, "degrees -w..w of the tables");
    complete->add_option("--depth", o.depth, "length of the resolution P of J");
    complete->add_option("--stages", o.stages, "stages of the resolution over E");

    auto* classical = app.add_subcommand("classical", "classical bi-commutator by brute force");
    common(classical);
    classical->add_option("--j", o.j, "module J")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    for (int i = 1; i < argc; ++i)
        o.command += (i > 1 ? " " : "") + std::string(argv[i]);
    try {
        std::string text = slurp(input);
        o.input_name = input;
        o.input_digest = cli::digest(text);
        cli::Workspace ws = cli::load_workspace(text);
        cli::Report r;
        if (*resolve)
            r = cli::cmd_resolve(ws, o);
        else if (*ext)
            r = cli::cmd_ext(ws, o);
        else if (*bic)
            r = cli::cmd_bic(ws, o);
        else if (*complete)
            r = cli::cmd_complete(ws, o);
        else
            r = cli::cmd_classical(ws, o);
        std::string shown = format == "json" ? r.json() : r.text();
        if (output.empty())
            std::cout << shown;
        else
            write(output, shown);
        if (!json_path.empty())
            write(json_path, r.json());
        return r.exit_code;
    } catch (const ParseError& e) {
        std::cerr << "dgforge: input error: " << input << ": " << e.what() << "\n";
        return 2;
    } catch (const CapExceeded& e) {
        std::cerr << "dgforge: resource cap: " << e.what() << "\n";
        return 4;
    } catch (const WindowError& e) {
        std::cerr << "dgforge: window: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "dgforge: input error: " << e.what() << "\n";
        return 2;
    }
}
