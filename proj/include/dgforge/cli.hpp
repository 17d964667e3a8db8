#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "dgforge/biduality.hpp"
#include "dgforge/error.hpp"

// Input grammar, workspace and report assembly behind the dgforge tool.
namespace dgforge::cli {

inline constexpr const char* schema_version = "dgforge-report/1";
std::string tool_version();

// Well-formed input that does not describe a valid object (unknown name,
// failed axiom, ideal not two-sided, ...). Exit code 2, like ParseError.
class InputError : public Error {
public:
    explicit InputError(const std::string& what) : Error(what) {}
};

struct Token {
    std::string text;
    int line = 0;
    int column = 0;
};

struct TermSpec {
    std::string coeff; // "1" when omitted
    Token name;
};

// mul a b = ..., diff a = ..., act m a = ...
struct Assignment {
    Token keyword;
    std::vector<Token> lhs;
    std::vector<TermSpec> rhs;
};

struct BasisSpec {
    Token name;
    int degree = 0;
};

struct IdealSpec {
    Token name;
    std::vector<std::vector<TermSpec>> elements;
};

struct AlgebraSpec {
    Token name;
    std::vector<BasisSpec> basis;
    std::vector<Assignment> mul;
    std::vector<Assignment> diff;
    std::vector<IdealSpec> ideals;
};

struct ModuleSpec {
    Token name;
    int algebra = 0; // index into InputSpec::algebras
    std::vector<BasisSpec> gens;
    std::vector<Assignment> act;
    std::vector<Assignment> diff;
};

struct InputSpec {
    std::optional<Token> field;
    std::vector<AlgebraSpec> algebras;
    std::vector<ModuleSpec> modules;
};

// Line-oriented stanzas:
//   field <p | Q>
//   algebra <name>
//   basis <name> deg <d>
//   mul <a> <b> = <c>*<e> + ...
//   diff <a> = ...            (module element inside a module stanza)
//   ideal <name> = span <e> <e> ...   or   span <expr>, <expr>, ...
//   module <name>
//   gen <m> deg <d>
//   act <m> <a> = ...
// '#' starts a comment. The algebra element named 1 is the unit; products
// with it and its action default to the identity, everything else to 0.
// Throws ParseError naming the stanza.
InputSpec parse_input(const std::string& text);

struct AlgebraEntry {
    std::string name;
    AlgebraPtr algebra;
    std::vector<std::string> ideal_names;
    std::map<std::string, Matrix> ideals; // spanning columns
};

struct ModuleEntry {
    std::string name;
    std::string algebra;
    ModulePtr module;
};

struct Workspace {
    Field field;
    std::vector<AlgebraEntry> algebras;
    std::vector<ModuleEntry> modules;

    // Empty name: the first algebra.
    const AlgebraEntry& algebra(const std::string& name = "") const;
    // Modules of the file, or the built-ins regular, dual and R/<ideal>.
    ModulePtr module(const AlgebraEntry& a, const std::string& name) const;
};

// Throws InputError naming the offending stanza.
Workspace build_workspace(const InputSpec& spec);
Workspace load_workspace(const std::string& text);

// FNV-1a 64 of the bytes, as "fnv1a64:<16 hex digits>".
std::string digest(const std::string& bytes);

struct Options {
    std::string command;      // echoed verbatim
    std::string input_name;
    std::string input_digest;
    std::string algebra;
    std::vector<std::string> modules;
    std::string j;
    std::string target;
    std::string ideal;
    int window = 6;
    int depth = 3;
    int stages = 7;
    int nmax = 8;
    bool minimal = true;
    bool timing = false;
};

// One document rendered two ways; the text lists exactly the JSON content.
struct Report {
    nlohmann::ordered_json doc;
    int exit_code = 0;
    std::string text() const;
    std::string json() const;
};

int exit_code(Verdict v);

Report cmd_resolve(const Workspace& ws, const Options& o);
Report cmd_ext(const Workspace& ws, const Options& o);
Report cmd_bic(const Workspace& ws, const Options& o);
Report cmd_complete(const Workspace& ws, const Options& o);
Report cmd_classical(const Workspace& ws, const Options& o);

} // namespace dgforge::cli
