#pragma once

// Database schemas over a category of relation symbols, databases as
// naturally connected diagrams of tables, the join functor, database
// morphisms, and classifications viewed as databases.

#include <map>
#include <memory>
#include <vector>

#include "catdb/limits.hpp"

namespace catdb {

/// Signature functor S from a relation category R into signatures over X.
/// An arrow p: r' -> r carries a column map I(r') -> I(r) that preserves
/// sorts.
class DbSchema {
public:
    DbSchema() = default;

    /// `sig_morph_at` may omit identities and derivable composites.
    static DbSchema make(FinCat rel_cat, NameSet universe, std::map<Name, Signature> sig_at,
                         const std::map<Name, NameMap>& sig_morph_at);

    const FinCat& rel_cat() const { return rel_cat_; }
    const NameSet& universe() const { return universe_; }
    const std::map<Name, Signature>& sig_at() const { return sig_at_; }
    const Signature& signature(const Name& relation) const;
    /// Includes identities and composites.
    const std::map<Name, NameMap>& sig_morph_at() const { return sig_morph_at_; }
    const NameMap& sig_morph(const Name& arrow) const;

    friend bool operator==(const DbSchema&, const DbSchema&) = default;

private:
    FinCat rel_cat_;
    NameSet universe_;
    std::map<Name, Signature> sig_at_;
    std::map<Name, NameMap> sig_morph_at_;
};

using DbSchemaPtr = std::shared_ptr<const DbSchema>;

DbSchema make_db_schema(FinCat rel_cat, NameSet universe, std::map<Name, Signature> sig_at,
                        const std::map<Name, NameMap>& sig_morph_at);

/// Colimit of the schema's signatures: merged columns plus one injection
/// per relation (relation column -> merged column).
struct ReferenceSchema {
    Signature signature;
    std::map<Name, NameMap> injections;
};

ReferenceSchema reference_schema(const DbSchema& schema);

/// Key functor K (contravariant: p: r' -> r gives K(r) -> K(r')) and tuple
/// components over a schema, validated table by table and cell by cell.
class Database {
public:
    Database() = default;

    /// `key_map_at` may omit identities and derivable composites.
    static Database make(DbSchemaPtr schema, ClassificationPtr cls,
                         const std::map<Name, std::vector<Name>>& key_at,
                         const std::map<Name, NameMap>& key_map_at,
                         const std::map<Name, std::map<Name, Tup>>& tup_at);

    const DbSchema& schema() const { return *schema_; }
    const DbSchemaPtr& schema_ptr() const { return schema_; }
    const Classification& classification() const { return *cls_; }
    const ClassificationPtr& classification_ptr() const { return cls_; }
    const std::map<Name, TablePtr>& tables() const { return tables_; }
    const Table& table(const Name& relation) const;
    const TablePtr& table_ptr(const Name& relation) const;
    NameSet keys(const Name& relation) const { return table(relation).keys(); }
    /// Includes identities and composites.
    const std::map<Name, NameMap>& key_map_at() const { return key_map_at_; }
    const NameMap& key_map(const Name& arrow) const;

    friend bool operator==(const Database& a, const Database& b);

private:
    DbSchemaPtr schema_;
    ClassificationPtr cls_;
    std::map<Name, TablePtr> tables_;
    std::map<Name, NameMap> key_map_at_;
};

using DatabasePtr = std::shared_ptr<const Database>;

Database make_database(DbSchemaPtr schema, ClassificationPtr cls,
                       const std::map<Name, std::vector<Name>>& key_at,
                       const std::map<Name, NameMap>& key_map_at,
                       const std::map<Name, std::map<Name, Tup>>& tup_at);

/// One-relation database over the terminal category.
Database database_of_table(const TablePtr& table, const Name& relation = "*");

/// Shape is the opposite of the relation category; arrow p: r' -> r becomes
/// the table morphism T(r) -> T(r').
TableDiagram db_to_diagram(const Database& db);

/// Limit of the database's diagram.
LimitResult join(const Database& db);

// ---------------------------------------------------------------------------
// Database morphisms

/// Components of a morphism src -> dst. Mirrors a table morphism: the
/// relation functor, column maps and type map run dst -> src, while the
/// instance map and key maps run src -> dst.
struct DbMorphismData {
    NameMap object_map;                  // R_dst objects -> R_src objects
    NameMap arrow_map;                   // R_dst arrows -> R_src arrows
    std::map<Name, NameMap> col_maps;    // r2 -> (I_dst(r2) -> I_src(F r2))
    NameMap type_map;                    // X_dst -> X_src
    NameMap inst_map;                    // Y_src -> Y_dst
    std::map<Name, NameMap> key_maps;    // r2 -> (K_src(F r2) -> K_dst(r2))

    friend bool operator==(const DbMorphismData&, const DbMorphismData&) = default;
};

/// Empty iff the relation functor is functorial, (f, g) is an infomorphism,
/// the column and key transformations are natural and sort compatible, and
/// the per-cell condition
///     tup_dst(r2)(key(k1))(i2) = g(tup_src(F r2)(k1)(col(i2)))
/// holds everywhere. Identity arrows may be omitted from `arrow_map`.
ValidationReport check_db_morphism(const Database& src, const Database& dst,
                                   const DbMorphismData& data);

class DatabaseMorphism {
public:
    DatabaseMorphism() = default;

    static DatabaseMorphism make(DatabasePtr src, DatabasePtr dst, DbMorphismData data);
    static DatabaseMorphism identity(DatabasePtr db);

    const Database& src() const { return *src_; }
    const Database& dst() const { return *dst_; }
    const DatabasePtr& src_ptr() const { return src_; }
    const DatabasePtr& dst_ptr() const { return dst_; }
    /// Arrow map completed with identities.
    const DbMorphismData& data() const { return data_; }

    friend bool operator==(const DatabaseMorphism& a, const DatabaseMorphism& b);

private:
    DatabasePtr src_;
    DatabasePtr dst_;
    DbMorphismData data_;
};

/// m1: A -> B then m2: B -> C.
DatabaseMorphism compose_db_morphisms(const DatabaseMorphism& m1, const DatabaseMorphism& m2);

// ---------------------------------------------------------------------------
// Classifications as databases

/// Relations are the types, ordered by reverse extent containment (an arrow
/// x' -> x whenever ext(x') contains ext(x)); each relation x has the
/// principal filter of x as columns, its extent as keys, and constant rows.
Database db_of_classification(const ClassificationPtr& cls);

/// For an infomorphism E2 <-> E1, the morphism db_of_classification(E1) ->
/// db_of_classification(E2) with relation functor f, column maps f restricted
/// to principal filters and key maps g restricted to extents.
DatabaseMorphism db_morphism_of_infomorphism(const Infomorphism& info);

}  // namespace catdb
