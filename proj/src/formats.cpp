#include <fstream>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "catdb/io.hpp"

namespace catdb {

using nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Files

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& text) {
    auto tmp = path;
    tmp += ".tmp" + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write '" + tmp.string() + "'");
        out << text;
        out.flush();
        if (!out) throw Error("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw Error("cannot rename onto '" + path.string() + "': " + ec.message());
    }
}

// ---------------------------------------------------------------------------
// CSV

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false;
    bool field_started = false;
    std::size_t line = 1;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') ++line;
                field += c;
            }
            continue;
        }
        if (c == '"') {
            if (field_started) throw Error("csv line " + std::to_string(line) + ": stray quote");
            quoted = true;
            field_started = true;
        } else if (c == ',') {
            record.push_back(std::move(field));
            field.clear();
            field_started = false;
        } else if (c == '\r' || c == '\n') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            record.push_back(std::move(field));
            field.clear();
            field_started = false;
            records.push_back(std::move(record));
            record.clear();
            ++line;
        } else {
            field += c;
            field_started = true;
        }
    }
    if (quoted) throw Error("csv: unterminated quoted field");
    if (field_started || !record.empty()) {
        record.push_back(std::move(field));
        records.push_back(std::move(record));
    }
    return records;
}

Table read_csv_table(const std::string& text, const Signature& sig, ClassificationPtr cls,
                     const Name& key_column) {
    auto records = parse_csv(text);
    if (records.empty()) throw ValidationError("csv has no header row", {});
    const auto& header = records[0];
    ValidationReport report;
    std::map<Name, std::size_t> position;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (!position.emplace(header[c], c).second) report.add("duplicate header column '" + header[c] + "'");
        if (header[c] != key_column && !sig.has_column(header[c])) {
            report.add("header column '" + header[c] + "' is not in the signature");
        }
    }
    if (!position.count(key_column)) report.add("missing key column '" + key_column + "'");
    for (const auto& column : sig.arity()) {
        if (!position.count(column)) report.add("missing column '" + column + "'");
    }
    if (!report.ok()) throw ValidationError("invalid csv header", std::move(report));

    std::vector<std::pair<Name, Tup>> rows;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        const std::string where = "row " + std::to_string(r);
        if (rec.size() != header.size()) {
            report.add(where + ": expected " + std::to_string(header.size()) + " fields, found " +
                       std::to_string(rec.size()));
            continue;
        }
        Tup tup;
        for (const auto& column : sig.arity()) {
            const Name& value = rec[position.at(column)];
            if (!cls->has_instance(value)) {
                report.add(where + ": unknown instance '" + value + "' in column " + column);
            }
            tup.entries.emplace(column, value);
        }
        rows.emplace_back(rec[position.at(key_column)], std::move(tup));
    }
    if (!report.ok()) throw ValidationError("invalid csv rows", std::move(report));
    return Table::make(sig, std::move(cls), rows);
}

Table load_csv(const std::filesystem::path& path, const Signature& sig, ClassificationPtr cls,
               const Name& key_column) {
    return read_csv_table(read_file(path), sig, std::move(cls), key_column);
}

namespace {

std::string csv_field(const std::string& s) {
    bool quote = s.empty() ? false : (s.front() == ' ' || s.back() == ' ');
    for (char c : s) {
        if (c == ',' || c == '"' || c == '\n' || c == '\r') quote = true;
    }
    if (!quote) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string export_csv(const Table& table, const Name& key_column) {
    std::string out = csv_field(key_column);
    const auto columns = table.signature().arity();
    for (const auto& c : columns) out += "," + csv_field(c);
    out += "\n";
    for (const auto& [k, row] : table.content()) {
        out += csv_field(k);
        for (const auto& c : columns) out += "," + csv_field(row.at(c));
        out += "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

ordered_json to_json(const Classification& cls) {
    ordered_json holds = ordered_json::array();
    for (const auto& [y, x] : cls.incidence()) holds.push_back({y, x});
    return {{"types", cls.types()}, {"instances", cls.instances()}, {"incidence", holds}};
}

ordered_json to_json(const Signature& sig) {
    ordered_json sorts = ordered_json::object();
    for (const auto& [c, s] : sig.sorts) sorts[c] = s;
    return {{"sorts", sorts}, {"universe", sig.universe}};
}

ordered_json to_json(const Table& t) {
    ordered_json content = ordered_json::object();
    for (const auto& [k, row] : t.content()) {
        ordered_json r = ordered_json::object();
        for (const auto& [c, v] : row.entries) r[c] = v;
        content[k] = r;
    }
    return {{"signature", to_json(t.signature())},
            {"classification", to_json(t.classification())},
            {"content", content}};
}

ordered_json to_json(const NameMap& m) {
    ordered_json out = ordered_json::object();
    for (const auto& [k, v] : m) out[k] = v;
    return out;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string export_json(const Classification& cls) { return dump(to_json(cls)); }

std::string export_json(const Table& table) { return dump(to_json(table)); }

std::string export_json(const Database& db) {
    const DbSchema& s = db.schema();
    ordered_json arrows = ordered_json::array();
    for (const auto& a : s.rel_cat().non_identity_arrows()) {
        arrows.push_back({{"name", a.name}, {"dom", a.dom}, {"cod", a.cod}});
    }
    ordered_json composites = ordered_json::array();
    for (const auto& c : s.rel_cat().non_identity_composites()) {
        composites.push_back({{"first", c.first}, {"second", c.second}, {"result", c.result}});
    }
    ordered_json sig_at = ordered_json::object();
    for (const auto& [r, sig] : s.sig_at()) sig_at[r] = to_json(sig);
    ordered_json sig_morph = ordered_json::object();
    ordered_json key_maps = ordered_json::object();
    for (const auto& a : s.rel_cat().non_identity_arrows()) {
        sig_morph[a.name] = to_json(s.sig_morph(a.name));
        key_maps[a.name] = to_json(db.key_map(a.name));
    }
    ordered_json keys = ordered_json::object();
    ordered_json tuples = ordered_json::object();
    for (const auto& [r, t] : db.tables()) {
        keys[r] = t->keys();
        ordered_json rows = ordered_json::object();
        for (const auto& [k, row] : t->content()) rows[k] = to_json(row.entries);
        tuples[r] = rows;
    }
    ordered_json schema = {{"rel_cat", {{"objects", s.rel_cat().objects()}, {"arrows", arrows}, {"composites", composites}}},
                           {"universe", s.universe()},
                           {"sig_at", sig_at},
                           {"sig_morph_at", sig_morph}};
    return dump({{"schema", schema},
                 {"classification", to_json(db.classification())},
                 {"key_at", keys},
                 {"key_map_at", key_maps},
                 {"tup_at", tuples}});
}

std::string export_json(const SketchGraph& graph) {
    ordered_json edges = ordered_json::array();
    for (const auto& e : graph.edges) {
        edges.push_back({{"relation", e.relation}, {"column", e.column}, {"target", e.target}});
    }
    ordered_json arrows = ordered_json::array();
    for (const auto& a : graph.constraint_arrows) {
        arrows.push_back({{"name", a.name}, {"dom", a.dom}, {"cod", a.cod}});
    }
    return dump({{"nodes", graph.nodes}, {"edges", edges}, {"constraint_arrows", arrows}});
}

// ---------------------------------------------------------------------------
// DOT

namespace {

std::string dot_id(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string export_dot(const SketchGraph& graph, const Name& name) {
    std::string out = "digraph " + dot_id(name) + " {\n";
    for (const auto& n : graph.nodes) out += "  " + dot_id(n) + ";\n";
    for (const auto& e : graph.edges) {
        out += "  " + dot_id(e.relation) + " -> " + dot_id(e.target) + " [label=" + dot_id(e.column) + "];\n";
    }
    for (const auto& a : graph.constraint_arrows) {
        out += "  // constraint " + a.name + ": " + a.dom + " -> " + a.cod + "\n";
    }
    return out + "}\n";
}

}  // namespace catdb
