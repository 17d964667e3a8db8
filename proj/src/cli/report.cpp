#include "dgforge/cli.hpp"

#include <algorithm>
#include <sstream>

#ifndef DGFORGE_VERSION
#define DGFORGE_VERSION "0.0.0"
#endif

namespace dgforge::cli {

namespace {

using json = nlohmann::ordered_json;

std::string plain(const json& v)
{
    if (v.is_string())
        return v.get<std::string>();
    if (v.is_boolean())
        return v.get<bool>() ? "yes" : "no";
    if (v.is_null())
        return "-";
    return v.dump();
}

std::string bracket(const json& item)
{
    if (!item.contains("certified"))
        return "";
    return "  [certified: " + plain(item["certified"]) + "]";
}

} // namespace

std::string tool_version() { return DGFORGE_VERSION; }

int exit_code(Verdict v)
{
    switch (v) {
    case Verdict::iso:
        return 0;
    case Verdict::not_iso:
        return 1;
    case Verdict::inconclusive_window:
        return 3;
    }
    return 3;
}

std::string Report::json() const { return doc.dump(2) + "\n"; }

std::string Report::text() const
{
    std::ostringstream out;
    out << "dgforge report " << plain(doc.value("schema", json())) << "\n";
    if (doc.contains("tool"))
        out << "tool: " << plain(doc["tool"]["name"]) << " " << plain(doc["tool"]["version"]) << "\n";
    if (doc.contains("command"))
        out << "command: " << plain(doc["command"]) << "\n";
    if (doc.contains("input"))
        out << "input: " << plain(doc["input"]["name"]) << " (" << plain(doc["input"]["digest"]) << ")\n";
    if (doc.contains("algebra")) {
        const auto& a = doc["algebra"];
        out << "algebra: " << plain(a["name"]) << " over " << plain(a["field"]) << ", dim " << plain(a["dim"])
            << "\n";
    }
    for (const auto& f : doc.value("facts", json::array()))
        out << "fact " << plain(f["name"]) << ": " << plain(f["value"]) << bracket(f) << "\n";
    for (const auto& t : doc.value("tables", json::array())) {
        out << "\ntable " << plain(t["title"]) << bracket(t) << "\n";
        std::vector<std::vector<std::string>> cells;
        std::vector<std::string> head;
        for (const auto& c : t["columns"])
            head.push_back(plain(c));
        cells.push_back(head);
        for (const auto& row : t["rows"]) {
            std::vector<std::string> r;
            for (const auto& v : row)
                r.push_back(plain(v));
            cells.push_back(r);
        }
        std::vector<std::size_t> width(head.size(), 0);
        for (const auto& r : cells)
            for (std::size_t i = 0; i < r.size() && i < width.size(); ++i)
                width[i] = std::max(width[i], r[i].size());
        for (const auto& r : cells) {
            out << " ";
            for (std::size_t i = 0; i < r.size() && i < width.size(); ++i)
                out << " " << std::string(width[i] - r[i].size(), ' ') << r[i];
            out << "\n";
        }
    }
    if (doc.contains("verdicts") && !doc["verdicts"].empty())
        out << "\n";
    for (const auto& v : doc.value("verdicts", json::array()))
        out << "verdict " << plain(v["name"]) << ": " << plain(v["value"]) << bracket(v) << "\n";
    for (const auto& n : doc.value("notes", json::array()))
        out << "note: " << plain(n) << "\n";
    if (doc.contains("exit_code"))
        out << "exit code: " << plain(doc["exit_code"]) << "\n";
    if (doc.contains("timing_ms"))
        out << "timing: " << plain(doc["timing_ms"]) << " ms\n";
    return out.str();
}

} // namespace dgforge::cli
