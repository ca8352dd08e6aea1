#include <cctype>
#include <sstream>

#include "catdb/io.hpp"

namespace catdb {

std::string SourceLocation::str() const {
    return file + ":" + std::to_string(line) + ":" + std::to_string(column);
}

ParseError::ParseError(SourceLocation where, const std::string& message)
    : Error(where.str() + ": " + message), where_(std::move(where)) {}

DeclarationError::DeclarationError(SourceLocation where, const std::string& message,
                                   ValidationReport report)
    : ValidationError(where.str() + ": " + message, std::move(report)), where_(std::move(where)) {}

// ---------------------------------------------------------------------------
// Workspace lookups

namespace {

template <typename Map>
const typename Map::mapped_type& lookup(const Map& map, const Name& name, const char* kind) {
    auto it = map.find(name);
    if (it == map.end()) throw UnknownNameError(std::string("unknown ") + kind + " '" + name + "'");
    return it->second;
}

}  // namespace

const ClassificationPtr& Workspace::classification(const Name& name) const {
    return lookup(classifications, name, "classification");
}
const TableEntry& Workspace::table(const Name& name) const { return lookup(tables, name, "table"); }
const InfomorphismEntry& Workspace::infomorphism(const Name& name) const {
    return lookup(infomorphisms, name, "infomorphism");
}
const SchemaEntry& Workspace::schema(const Name& name) const { return lookup(schemas, name, "schema"); }
const DatabaseEntry& Workspace::database(const Name& name) const {
    return lookup(databases, name, "database");
}

bool Workspace::empty() const {
    return classifications.empty() && tables.empty() && infomorphisms.empty() && schemas.empty() &&
           databases.empty() && morphisms.empty() && db_morphisms.empty();
}

Name Workspace::classification_name(const Classification& cls) const {
    for (const auto& [name, c] : classifications) {
        if (*c == cls) return name;
    }
    return {};
}

TableMorphism Workspace::table_morphism(const Name& name) const {
    const MorphismDecl& m = lookup(morphisms, name, "morphism");
    const TableEntry& src = table(m.src);
    const TableEntry& dst = table(m.dst);
    if (m.via.empty()) {
        if (!(src.table->classification() == dst.table->classification())) {
            throw BoundaryMismatchError("morphism " + name +
                                        " has no infomorphism but its tables are over different classifications");
        }
        return TableMorphism::make_fiber(src.table, dst.table, m.cols, m.keys);
    }
    return TableMorphism::make(src.table, dst.table, m.cols, *infomorphism(m.via).info, m.keys);
}

DatabaseMorphism Workspace::db_morphism(const Name& name) const {
    const DbMorphismDecl& m = lookup(db_morphisms, name, "database morphism");
    const DatabaseEntry& src = database(m.src);
    const DatabaseEntry& dst = database(m.dst);
    DbMorphismData data{m.objects, m.arrows, m.cols, {}, {}, m.keys};
    if (m.via.empty()) {
        if (!(src.db->classification() == dst.db->classification())) {
            throw BoundaryMismatchError("database morphism " + name +
                                        " has no infomorphism but its databases are over different classifications");
        }
        data.type_map = identity_map(src.db->classification().types());
        data.inst_map = identity_map(src.db->classification().instances());
    } else {
        const Infomorphism& info = *infomorphism(m.via).info;
        data.type_map = info.type_map();
        data.inst_map = info.inst_map();
    }
    return DatabaseMorphism::make(src.db, dst.db, std::move(data));
}

ValidationReport Workspace::check_morphism(const Name& name) const {
    ValidationReport report;
    try {
        if (morphisms.count(name)) {
            table_morphism(name);
        } else if (db_morphisms.count(name)) {
            db_morphism(name);
        } else {
            throw UnknownNameError("unknown morphism '" + name + "'");
        }
    } catch (const ValidationError& e) {
        if (e.report().ok()) report.add(e.what());
        report.merge(e.report());
    } catch (const UnknownNameError&) {
        throw;
    } catch (const Error& e) {
        report.add(e.what());
    }
    return report;
}

namespace {

bool same_ptr(const auto& a, const auto& b) { return a == b || (a && b && *a == *b); }

bool same_decl(const MorphismDecl& a, const MorphismDecl& b) {
    return a.src == b.src && a.dst == b.dst && a.cols == b.cols && a.keys == b.keys && a.via == b.via;
}

bool same_decl(const DbMorphismDecl& a, const DbMorphismDecl& b) {
    return a.src == b.src && a.dst == b.dst && a.objects == b.objects && a.arrows == b.arrows &&
           a.via == b.via && a.cols == b.cols && a.keys == b.keys;
}

template <typename Map, typename Eq>
bool same_map(const Map& a, const Map& b, Eq eq) {
    if (a.size() != b.size()) return false;
    for (const auto& [k, v] : a) {
        auto it = b.find(k);
        if (it == b.end() || !eq(v, it->second)) return false;
    }
    return true;
}

}  // namespace

bool operator==(const Workspace& a, const Workspace& b) {
    return same_map(a.classifications, b.classifications,
                    [](const auto& x, const auto& y) { return same_ptr(x, y); }) &&
           same_map(a.tables, b.tables,
                    [](const auto& x, const auto& y) { return x.cls == y.cls && same_ptr(x.table, y.table); }) &&
           same_map(a.infomorphisms, b.infomorphisms,
                    [](const auto& x, const auto& y) {
                        return x.source == y.source && x.target == y.target && same_ptr(x.info, y.info);
                    }) &&
           same_map(a.schemas, b.schemas,
                    [](const auto& x, const auto& y) { return x.cls == y.cls && same_ptr(x.schema, y.schema); }) &&
           same_map(a.databases, b.databases,
                    [](const auto& x, const auto& y) {
                        return x.schema == y.schema && x.cls == y.cls && same_ptr(x.db, y.db);
                    }) &&
           same_map(a.morphisms, b.morphisms,
                    [](const auto& x, const auto& y) { return same_decl(x, y); }) &&
           same_map(a.db_morphisms, b.db_morphisms,
                    [](const auto& x, const auto& y) { return same_decl(x, y); });
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

bool bare_char(unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '.' || c == '@' || c >= 0x80;
}

enum class Tok { Ident, String, Punct, End };

struct Token {
    Tok kind;
    std::string text;
    SourceLocation where;
};

std::vector<Token> lex(const std::string& text, const std::string& file) {
    std::vector<Token> out;
    int line = 1;
    int col = 1;
    std::size_t i = 0;
    auto here = [&] { return SourceLocation{file, line, col}; };
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) {
                ++col;
            }
        }
    };
    while (i < text.size()) {
        const char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
        } else if (c == '#' || text.compare(i, 2, "//") == 0) {
            while (i < text.size() && text[i] != '\n') advance(1);
        } else if (text.compare(i, 3, "<->") == 0) {
            out.push_back({Tok::Punct, "<->", here()});
            advance(3);
        } else if (text.compare(i, 2, "->") == 0) {
            out.push_back({Tok::Punct, "->", here()});
            advance(2);
        } else if (std::string("{}():;,=").find(c) != std::string::npos) {
            out.push_back({Tok::Punct, std::string(1, c), here()});
            advance(1);
        } else if (c == '"') {
            SourceLocation start = here();
            advance(1);
            std::string value;
            for (;;) {
                if (i >= text.size()) throw ParseError(start, "unterminated string");
                if (text[i] == '"') {
                    advance(1);
                    break;
                }
                if (text[i] == '\\') {
                    if (i + 1 >= text.size() || (text[i + 1] != '"' && text[i + 1] != '\\')) {
                        throw ParseError(here(), "invalid escape in string");
                    }
                    advance(1);
                }
                value += text[i];
                advance(1);
            }
            out.push_back({Tok::String, std::move(value), start});
        } else if (bare_char(static_cast<unsigned char>(c))) {
            SourceLocation start = here();
            std::size_t j = i;
            while (j < text.size() && bare_char(static_cast<unsigned char>(text[j]))) ++j;
            out.push_back({Tok::Ident, text.substr(i, j - i), start});
            advance(j - i);
        } else {
            throw ParseError(here(), std::string("unexpected character '") + c + "'");
        }
    }
    out.push_back({Tok::End, "", here()});
    return out;
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
public:
    Parser(Workspace& ws, const std::string& text, const std::string& file)
        : ws_(ws), tokens_(lex(text, file)) {}

    void run() {
        while (peek().kind != Tok::End) declaration();
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    const Token& next() { return tokens_[pos_++]; }

    bool at(const std::string& punct) const {
        return peek().kind == Tok::Punct && peek().text == punct;
    }
    bool at_word(const std::string& word) const {
        return peek().kind == Tok::Ident && peek().text == word;
    }

    [[noreturn]] void fail(const std::string& message) const { throw ParseError(peek().where, message); }

    std::string describe(const Token& t) const {
        switch (t.kind) {
            case Tok::End: return "end of input";
            case Tok::String: return "string \"" + t.text + "\"";
            default: return "'" + t.text + "'";
        }
    }

    void expect(const std::string& punct) {
        if (!at(punct)) fail("expected '" + punct + "', found " + describe(peek()));
        ++pos_;
    }
    void expect_word(const std::string& word) {
        if (!at_word(word)) fail("expected '" + word + "', found " + describe(peek()));
        ++pos_;
    }
    bool accept(const std::string& punct) {
        if (!at(punct)) return false;
        ++pos_;
        return true;
    }

    Name name() {
        if (peek().kind != Tok::Ident && peek().kind != Tok::String) {
            fail("expected a name, found " + describe(peek()));
        }
        return next().text;
    }

    /// Word introducing a section; left unconsumed when the body ends.
    std::string section_word() {
        if (peek().kind != Tok::Ident) fail("expected a section name, found " + describe(peek()));
        return next().text;
    }

    /// item (',' item)* ';' with an empty list allowed.
    template <typename F>
    void list(F item) {
        if (accept(";")) return;
        do {
            item();
        } while (accept(","));
        expect(";");
    }

    void pair_into(NameMap& map, const std::string& sep, const char* what) {
        const SourceLocation where = peek().where;
        Name a = name();
        expect(sep);
        Name b = name();
        if (!map.emplace(a, b).second) throw ParseError(where, std::string("duplicate ") + what + " for '" + a + "'");
    }

    template <typename Map>
    void fresh(const Map& map, const Name& n, const SourceLocation& where, const char* kind) {
        if (map.count(n)) throw ParseError(where, std::string("duplicate ") + kind + " '" + n + "'");
    }

    template <typename Map>
    void resolve(const Map& map, const Name& n, const SourceLocation& where, const char* kind) {
        if (!map.count(n)) throw ParseError(where, std::string("unresolved ") + kind + " '" + n + "'");
    }

    Tup row_tuple() {
        Tup t;
        expect("(");
        if (!accept(")")) {
            do {
                const SourceLocation where = peek().where;
                Name c = name();
                expect("=");
                if (!t.entries.emplace(c, name()).second) {
                    throw ParseError(where, "duplicate column '" + c + "' in row");
                }
            } while (accept(","));
            expect(")");
        }
        return t;
    }

    void declaration() {
        const Token& head = peek();
        if (head.kind != Tok::Ident) fail("expected a declaration, found " + describe(head));
        const std::string kind = head.text;
        const SourceLocation where = head.where;
        ++pos_;
        if (kind == "classification") return classification(where);
        if (kind == "table") return table(where);
        if (kind == "infomorphism") return infomorphism(where);
        if (kind == "schema") return schema(where);
        if (kind == "database") return database(where);
        if (kind == "morphism") return morphism(where);
        if (kind == "dbmorphism") return dbmorphism(where);
        throw ParseError(where, "unknown declaration kind '" + kind + "'");
    }

    void classification(const SourceLocation& where) {
        const SourceLocation name_at = peek().where;
        Name n = name();
        fresh(ws_.classifications, n, name_at, "classification");
        std::vector<Name> types;
        std::vector<Name> instances;
        std::vector<std::pair<Name, Name>> holds;
        expect("{");
        while (!accept("}")) {
            const std::string s = section_word();
            expect(":");
            if (s == "types") {
                list([&] { types.push_back(name()); });
            } else if (s == "instances") {
                list([&] { instances.push_back(name()); });
            } else if (s == "holds") {
                list([&] {
                    Name y = name();
                    expect(":");
                    holds.emplace_back(y, name());
                });
            } else {
                throw ParseError(tokens_[pos_ - 2].where, "unknown classification section '" + s + "'");
            }
        }
        try {
            ws_.classifications.emplace(
                n, std::make_shared<const Classification>(Classification::make(types, instances, holds)));
        } catch (const ValidationError& e) {
            throw DeclarationError(where, "classification " + n, e.report());
        } catch (const Error& e) {
            throw DeclarationError(where, "classification " + n, ValidationReport{{e.what()}});
        }
    }

    void table(const SourceLocation& where) {
        const SourceLocation name_at = peek().where;
        Name n = name();
        fresh(ws_.tables, n, name_at, "table");
        expect_word("over");
        const SourceLocation cls_at = peek().where;
        Name cls_name = name();
        resolve(ws_.classifications, cls_name, cls_at, "classification");
        const ClassificationPtr& cls = ws_.classifications.at(cls_name);
        Signature sig{{}, cls->types()};
        std::vector<std::pair<Name, Tup>> rows;
        std::vector<SourceLocation> row_at;
        expect("{");
        while (!accept("}")) {
            const std::string s = section_word();
            expect(":");
            if (s == "cols") {
                list([&] {
                    const SourceLocation col_at = peek().where;
                    Name c = name();
                    expect(":");
                    if (!sig.sorts.emplace(c, name()).second) {
                        throw ParseError(col_at, "duplicate column '" + c + "'");
                    }
                });
            } else if (s == "rows") {
                list([&] {
                    row_at.push_back(peek().where);
                    Name k = name();
                    expect("->");
                    rows.emplace_back(k, row_tuple());
                });
            } else {
                throw ParseError(tokens_[pos_ - 2].where, "unknown table section '" + s + "'");
            }
        }
        try {
            ws_.tables.emplace(n, TableEntry{cls_name, std::make_shared<const Table>(
                                                           Table::make(sig, cls, rows))});
        } catch (const ValidationError& e) {
            // Point at the first row that fails on its own.
            SourceLocation at = where;
            NameSet seen;
            for (std::size_t r = 0; r < rows.size(); ++r) {
                bool bad = !seen.insert(rows[r].first).second;
                try {
                    bad = bad || !classify_tuple(*cls, sig, rows[r].second);
                } catch (const Error&) {
                    bad = true;
                }
                if (bad) {
                    at = row_at[r];
                    break;
                }
            }
            throw DeclarationError(at, "table " + n, e.report());
        } catch (const Error& e) {
            throw DeclarationError(where, "table " + n, ValidationReport{{e.what()}});
        }
    }

    void infomorphism(const SourceLocation& where) {
        const SourceLocation name_at = peek().where;
        Name n = name();
        fresh(ws_.infomorphisms, n, name_at, "infomorphism");
        expect(":");
        const SourceLocation src_at = peek().where;
        Name src = name();
        resolve(ws_.classifications, src, src_at, "classification");
        expect("<->");
        const SourceLocation dst_at = peek().where;
        Name dst = name();
        resolve(ws_.classifications, dst, dst_at, "classification");
        NameMap f;
        NameMap g;
        expect("{");
        while (!accept("}")) {
            const std::string s = section_word();
            expect(":");
            if (s == "f") {
                list([&] { pair_into(f, "->", "image"); });
            } else if (s == "g") {
                list([&] { pair_into(g, "->", "image"); });
            } else {
                throw ParseError(tokens_[pos_ - 2].where, "unknown infomorphism section '" + s + "'");
            }
        }
        try {
            ws_.infomorphisms.emplace(
                n, InfomorphismEntry{src, dst,
                                     std::make_shared<const Infomorphism>(Infomorphism::make(
                                         ws_.classifications.at(src), ws_.classifications.at(dst), f, g))});
        } catch (const ValidationError& e) {
            throw DeclarationError(where, "infomorphism " + n, e.report());
        } catch (const Error& e) {
            throw DeclarationError(where, "infomorphism " + n, ValidationReport{{e.what()}});
        }
    }

    void schema(const SourceLocation& where) {
        const SourceLocation name_at = peek().where;
        Name n = name();
        fresh(ws_.schemas, n, name_at, "schema");
        expect_word("over");
        const SourceLocation cls_at = peek().where;
        Name cls_name = name();
        resolve(ws_.classifications, cls_name, cls_at, "classification");
        const ClassificationPtr& cls = ws_.classifications.at(cls_name);
        std::vector<Name> objects;
        std::map<Name, Signature> sigs;
        std::vector<Arrow> arrows;
        std::map<Name, NameMap> maps;
        std::vector<Composite> composites;
        expect("{");
        while (!accept("}")) {
            const std::string s = section_word();
            expect(":");
            if (s == "relations") {
                list([&] {
                    const SourceLocation rel_at = peek().where;
                    Name r = name();
                    if (sigs.count(r)) throw ParseError(rel_at, "duplicate relation '" + r + "'");
                    Signature sig{{}, cls->types()};
                    expect("(");
                    if (!accept(")")) {
                        do {
                            const SourceLocation col_at = peek().where;
                            Name c = name();
                            expect(":");
                            if (!sig.sorts.emplace(c, name()).second) {
                                throw ParseError(col_at, "duplicate column '" + c + "'");
                            }
                        } while (accept(","));
                        expect(")");
                    }
                    objects.push_back(r);
                    sigs.emplace(r, std::move(sig));
                });
            } else if (s == "arrows") {
                list([&] {
                    const SourceLocation arrow_at = peek().where;
                    Name p = name();
                    if (maps.count(p)) throw ParseError(arrow_at, "duplicate arrow '" + p + "'");
                    expect(":");
                    Name dom = name();
                    expect("->");
                    Name cod = name();
                    NameMap m;
                    expect("{");
                    if (!accept("}")) {
                        do {
                            pair_into(m, "->", "column image");
                        } while (accept(","));
                        expect("}");
                    }
                    arrows.push_back({p, dom, cod});
                    maps.emplace(p, std::move(m));
                });
            } else if (s == "compose") {
                list([&] {
                    expect("(");
                    Name a = name();
                    expect(",");
                    Name b = name();
                    expect(")");
                    expect("=");
                    composites.push_back({a, b, name()});
                });
            } else {
                throw ParseError(tokens_[pos_ - 2].where, "unknown schema section '" + s + "'");
            }
        }
        try {
            FinCat cat = FinCat::make(objects, arrows, composites);
            ws_.schemas.emplace(n, SchemaEntry{cls_name, std::make_shared<const DbSchema>(DbSchema::make(
                                                             std::move(cat), cls->types(), sigs, maps))});
        } catch (const ValidationError& e) {
            throw DeclarationError(where, "schema " + n, e.report());
        } catch (const Error& e) {
            throw DeclarationError(where, "schema " + n, ValidationReport{{e.what()}});
        }
    }

    void database(const SourceLocation& where) {
        const SourceLocation name_at = peek().where;
        Name n = name();
        fresh(ws_.databases, n, name_at, "database");
        expect_word("over");
        const SourceLocation schema_at = peek().where;
        Name schema_name = name();
        resolve(ws_.schemas, schema_name, schema_at, "schema");
        expect(",");
        const SourceLocation cls_at = peek().where;
        Name cls_name = name();
        resolve(ws_.classifications, cls_name, cls_at, "classification");
        std::map<Name, std::vector<Name>> keys;
        std::map<Name, NameMap> key_maps;
        std::map<Name, std::map<Name, Tup>> rows;
        expect("{");
        while (!accept("}")) {
            const SourceLocation section_at = peek().where;
            const std::string s = section_word();
            const SourceLocation target_at = peek().where;
            Name target = name();
            expect(":");
            if (s == "keys") {
                if (keys.count(target)) throw ParseError(target_at, "duplicate keys for '" + target + "'");
                auto& ks = keys[target];
                list([&] { ks.push_back(name()); });
            } else if (s == "keymap") {
                if (key_maps.count(target)) {
                    throw ParseError(target_at, "duplicate keymap for '" + target + "'");
                }
                auto& m = key_maps[target];
                list([&] { pair_into(m, "->", "key image"); });
            } else if (s == "rows") {
                if (rows.count(target)) throw ParseError(target_at, "duplicate rows for '" + target + "'");
                auto& rs = rows[target];
                list([&] {
                    const SourceLocation row_at = peek().where;
                    Name k = name();
                    expect("->");
                    if (!rs.emplace(k, row_tuple()).second) {
                        throw ParseError(row_at, "duplicate row for key '" + k + "'");
                    }
                });
            } else {
                throw ParseError(section_at, "unknown database section '" + s + "'");
            }
        }
        try {
            ws_.databases.emplace(
                n, DatabaseEntry{schema_name, cls_name,
                                 std::make_shared<const Database>(Database::make(
                                     ws_.schemas.at(schema_name).schema, ws_.classifications.at(cls_name),
                                     keys, key_maps, rows))});
        } catch (const ValidationError& e) {
            throw DeclarationError(where, "database " + n, e.report());
        } catch (const Error& e) {
            throw DeclarationError(where, "database " + n, ValidationReport{{e.what()}});
        }
    }

    void morphism(const SourceLocation& where) {
        const SourceLocation name_at = peek().where;
        Name n = name();
        fresh(ws_.morphisms, n, name_at, "morphism");
        MorphismDecl m;
        m.where = where;
        expect(":");
        const SourceLocation src_at = peek().where;
        m.src = name();
        resolve(ws_.tables, m.src, src_at, "table");
        expect("->");
        const SourceLocation dst_at = peek().where;
        m.dst = name();
        resolve(ws_.tables, m.dst, dst_at, "table");
        expect("{");
        while (!accept("}")) {
            const std::string s = section_word();
            expect(":");
            if (s == "cols") {
                list([&] { pair_into(m.cols, "->", "column image"); });
            } else if (s == "keys") {
                list([&] { pair_into(m.keys, "->", "key image"); });
            } else if (s == "via") {
                const SourceLocation via_at = peek().where;
                m.via = name();
                resolve(ws_.infomorphisms, m.via, via_at, "infomorphism");
                expect(";");
            } else {
                throw ParseError(tokens_[pos_ - 2].where, "unknown morphism section '" + s + "'");
            }
        }
        ws_.morphisms.emplace(n, std::move(m));
    }

    void dbmorphism(const SourceLocation& where) {
        const SourceLocation name_at = peek().where;
        Name n = name();
        fresh(ws_.db_morphisms, n, name_at, "database morphism");
        DbMorphismDecl m;
        m.where = where;
        expect(":");
        const SourceLocation src_at = peek().where;
        m.src = name();
        resolve(ws_.databases, m.src, src_at, "database");
        expect("->");
        const SourceLocation dst_at = peek().where;
        m.dst = name();
        resolve(ws_.databases, m.dst, dst_at, "database");
        expect("{");
        while (!accept("}")) {
            const SourceLocation section_at = peek().where;
            const std::string s = section_word();
            if (s == "objects" || s == "arrows") {
                expect(":");
                NameMap& target = s == "objects" ? m.objects : m.arrows;
                list([&] { pair_into(target, "->", "image"); });
            } else if (s == "via") {
                expect(":");
                const SourceLocation via_at = peek().where;
                m.via = name();
                resolve(ws_.infomorphisms, m.via, via_at, "infomorphism");
                expect(";");
            } else if (s == "cols" || s == "keys") {
                auto& family = s == "cols" ? m.cols : m.keys;
                const SourceLocation rel_at = peek().where;
                Name r = name();
                expect(":");
                if (family.count(r)) throw ParseError(rel_at, "duplicate " + s + " for '" + r + "'");
                auto& target = family[r];
                list([&] { pair_into(target, "->", "image"); });
            } else {
                throw ParseError(section_at, "unknown dbmorphism section '" + s + "'");
            }
        }
        ws_.db_morphisms.emplace(n, std::move(m));
    }

    Workspace& ws_;
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

}  // namespace

void parse_into(Workspace& ws, const std::string& text, const std::string& file) {
    Parser(ws, text, file).run();
}

Workspace parse_workspace(const std::string& text, const std::string& file) {
    Workspace ws;
    parse_into(ws, text, file);
    return ws;
}

Workspace load_workspace(const std::vector<std::filesystem::path>& files) {
    Workspace ws;
    for (const auto& f : files) parse_into(ws, read_file(f), f.string());
    return ws;
}

// ---------------------------------------------------------------------------
// Exporter

std::string dsl_token(const std::string& name) {
    bool bare = !name.empty();
    for (unsigned char c : name) {
        if (!(std::isalnum(c) || c == '_' || c == '.' || c == '@')) bare = false;
    }
    if (bare) return name;
    std::string out = "\"";
    for (char c : name) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

namespace {

template <typename Range, typename F>
std::string join_items(const Range& items, F render, const std::string& sep = ", ") {
    std::string out;
    bool first = true;
    for (const auto& item : items) {
        if (!first) out += sep;
        first = false;
        out += render(item);
    }
    return out;
}

std::string render_map(const NameMap& m) {
    return join_items(m, [](const auto& kv) { return dsl_token(kv.first) + " -> " + dsl_token(kv.second); });
}

std::string render_tuple(const Tup& t) {
    return "(" +
           join_items(t.entries, [](const auto& kv) { return dsl_token(kv.first) + "=" + dsl_token(kv.second); }) +
           ")";
}

std::string render_sorts(const Signature& sig) {
    return join_items(sig.sorts, [](const auto& kv) { return dsl_token(kv.first) + ":" + dsl_token(kv.second); });
}

std::string render_rows(const std::map<Name, Tup>& content) {
    if (content.empty()) return ";";
    return "\n" +
           join_items(content, [](const auto& kv) { return "    " + dsl_token(kv.first) + " -> " + render_tuple(kv.second); },
                      ",\n") +
           ";";
}

std::string section(const std::string& head, const std::string& body) {
    return "  " + head + ":" + (body.empty() ? "" : " " + body) + ";\n";
}

}  // namespace

std::string export_dsl(const Workspace& ws) {
    std::ostringstream out;
    bool first = true;
    auto open = [&](const std::string& header) {
        if (!first) out << "\n";
        first = false;
        out << header << " {\n";
    };
    for (const auto& [n, cls] : ws.classifications) {
        open("classification " + dsl_token(n));
        out << section("types", join_items(cls->types(), dsl_token));
        out << section("instances", join_items(cls->instances(), dsl_token));
        out << section("holds", join_items(cls->incidence(), [](const auto& p) {
                           return dsl_token(p.first) + ":" + dsl_token(p.second);
                       }));
        out << "}\n";
    }
    for (const auto& [n, e] : ws.tables) {
        open("table " + dsl_token(n) + " over " + dsl_token(e.cls));
        out << section("cols", render_sorts(e.table->signature()));
        out << "  rows:" << render_rows(e.table->content()) << "\n";
        out << "}\n";
    }
    for (const auto& [n, e] : ws.infomorphisms) {
        open("infomorphism " + dsl_token(n) + " : " + dsl_token(e.source) + " <-> " + dsl_token(e.target));
        out << section("f", render_map(e.info->type_map()));
        out << section("g", render_map(e.info->inst_map()));
        out << "}\n";
    }
    for (const auto& [n, e] : ws.schemas) {
        const DbSchema& s = *e.schema;
        open("schema " + dsl_token(n) + " over " + dsl_token(e.cls));
        out << section("relations", join_items(s.sig_at(), [](const auto& kv) {
                           return dsl_token(kv.first) + "(" + render_sorts(kv.second) + ")";
                       }));
        const auto arrows = s.rel_cat().non_identity_arrows();
        if (arrows.empty()) {
            out << "  arrows:;\n";
        } else {
            out << "  arrows:\n"
                << join_items(arrows,
                              [&](const Arrow& a) {
                                  const NameMap& m = s.sig_morph(a.name);
                                  return "    " + dsl_token(a.name) + ": " + dsl_token(a.dom) + " -> " +
                                         dsl_token(a.cod) + " {" + (m.empty() ? "" : " " + render_map(m) + " ") + "}";
                              },
                              ",\n")
                << ";\n";
        }
        out << section("compose", join_items(s.rel_cat().non_identity_composites(), [](const Composite& c) {
                           return "(" + dsl_token(c.first) + ", " + dsl_token(c.second) + ") = " + dsl_token(c.result);
                       }));
        out << "}\n";
    }
    for (const auto& [n, e] : ws.databases) {
        const Database& db = *e.db;
        open("database " + dsl_token(n) + " over " + dsl_token(e.schema) + ", " + dsl_token(e.cls));
        for (const auto& [r, t] : db.tables()) {
            out << "  keys " << dsl_token(r) << ":" << (t->size() ? " " : "")
                << join_items(t->keys(), dsl_token) << ";\n";
        }
        for (const auto& a : db.schema().rel_cat().non_identity_arrows()) {
            const NameMap& m = db.key_map(a.name);
            out << "  keymap " << dsl_token(a.name) << ":" << (m.empty() ? "" : " ") << render_map(m) << ";\n";
        }
        for (const auto& [r, t] : db.tables()) {
            out << "  rows " << dsl_token(r) << ":" << render_rows(t->content()) << "\n";
        }
        out << "}\n";
    }
    for (const auto& [n, m] : ws.morphisms) {
        open("morphism " + dsl_token(n) + " : " + dsl_token(m.src) + " -> " + dsl_token(m.dst));
        out << section("cols", render_map(m.cols));
        out << section("keys", render_map(m.keys));
        if (!m.via.empty()) out << section("via", dsl_token(m.via));
        out << "}\n";
    }
    for (const auto& [n, m] : ws.db_morphisms) {
        open("dbmorphism " + dsl_token(n) + " : " + dsl_token(m.src) + " -> " + dsl_token(m.dst));
        out << section("objects", render_map(m.objects));
        out << section("arrows", render_map(m.arrows));
        if (!m.via.empty()) out << section("via", dsl_token(m.via));
        for (const auto& [r, cm] : m.cols) out << section("cols " + dsl_token(r), render_map(cm));
        for (const auto& [r, km] : m.keys) out << section("keys " + dsl_token(r), render_map(km));
        out << "}\n";
    }
    return out.str();
}

}  // namespace catdb
