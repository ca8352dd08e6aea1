#pragma once

// Text formats: the workspace DSL, CSV tables, JSON and DOT exporters.

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "catdb/colimits.hpp"
#include "catdb/unified.hpp"

namespace catdb {

struct SourceLocation {
    std::string file;
    int line = 0;
    int column = 0;

    std::string str() const;
};

/// Syntax errors and unresolved references.
class ParseError : public Error {
public:
    ParseError(SourceLocation where, const std::string& message);
    const SourceLocation& where() const { return where_; }

private:
    SourceLocation where_;
};

/// A declaration that parsed but does not validate.
class DeclarationError : public ValidationError {
public:
    DeclarationError(SourceLocation where, const std::string& message, ValidationReport report);
    const SourceLocation& where() const { return where_; }

private:
    SourceLocation where_;
};

// ---------------------------------------------------------------------------
// Workspace

struct TableEntry {
    Name cls;
    TablePtr table;
};

struct InfomorphismEntry {
    Name source;  // E2
    Name target;  // E1
    std::shared_ptr<const Infomorphism> info;
};

struct SchemaEntry {
    Name cls;
    DbSchemaPtr schema;
};

struct DatabaseEntry {
    Name schema;
    Name cls;
    DatabasePtr db;
};

/// Table morphisms are kept as written and validated on demand, so that an
/// ill-formed morphism is a check failure rather than a load failure. An
/// empty `via` means the identity infomorphism.
struct MorphismDecl {
    Name src;
    Name dst;
    NameMap cols;
    NameMap keys;
    Name via;
    SourceLocation where;
};

struct DbMorphismDecl {
    Name src;
    Name dst;
    NameMap objects;
    NameMap arrows;
    Name via;
    std::map<Name, NameMap> cols;
    std::map<Name, NameMap> keys;
    SourceLocation where;
};

class Workspace {
public:
    std::map<Name, ClassificationPtr> classifications;
    std::map<Name, TableEntry> tables;
    std::map<Name, InfomorphismEntry> infomorphisms;
    std::map<Name, SchemaEntry> schemas;
    std::map<Name, DatabaseEntry> databases;
    std::map<Name, MorphismDecl> morphisms;
    std::map<Name, DbMorphismDecl> db_morphisms;

    const ClassificationPtr& classification(const Name& name) const;
    const TableEntry& table(const Name& name) const;
    const InfomorphismEntry& infomorphism(const Name& name) const;
    const SchemaEntry& schema(const Name& name) const;
    const DatabaseEntry& database(const Name& name) const;

    bool empty() const;
    /// Name of a classification equal to `cls`, or empty.
    Name classification_name(const Classification& cls) const;

    /// Throws ValidationError or UnknownNameError.
    TableMorphism table_morphism(const Name& name) const;
    DatabaseMorphism db_morphism(const Name& name) const;
    /// Report for one morphism declaration of either kind.
    ValidationReport check_morphism(const Name& name) const;

    /// Same declarations with equal contents.
    friend bool operator==(const Workspace& a, const Workspace& b);
};

/// Parses `text` into `ws`, resolving names against what `ws` already
/// holds. Declarations must precede their uses.
void parse_into(Workspace& ws, const std::string& text, const std::string& file = "<input>");
Workspace parse_workspace(const std::string& text, const std::string& file = "<input>");
Workspace load_workspace(const std::vector<std::filesystem::path>& files);

/// Canonical DSL: declarations grouped by kind in dependency order, names,
/// keys and columns sorted.
std::string export_dsl(const Workspace& ws);

/// A bare token if possible, otherwise a quoted string.
std::string dsl_token(const std::string& name);

// ---------------------------------------------------------------------------
// CSV

/// Parses RFC 4180 text into records.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

/// The header must name `key_column` and every column of `sig`; extra
/// columns are an error. Values must already be instances of `cls`.
Table read_csv_table(const std::string& text, const Signature& sig, ClassificationPtr cls,
                     const Name& key_column);
Table load_csv(const std::filesystem::path& path, const Signature& sig, ClassificationPtr cls,
               const Name& key_column);

/// Header is `key_column` followed by the columns in name order; rows in
/// key order.
std::string export_csv(const Table& table, const Name& key_column = "key");

// ---------------------------------------------------------------------------
// JSON and DOT

std::string export_json(const Classification& cls);
std::string export_json(const Table& table);
std::string export_json(const Database& db);
std::string export_json(const SketchGraph& graph);

/// One node per relation, one labeled edge per column; constraint arrows
/// appear as comments.
std::string export_dot(const SketchGraph& graph, const Name& name);

// ---------------------------------------------------------------------------

/// Reads a whole file; throws Error if it cannot be opened.
std::string read_file(const std::filesystem::path& path);
/// Writes to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& text);

}  // namespace catdb
