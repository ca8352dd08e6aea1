#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "catdb/core.hpp"

namespace catdb {

/// A signature over a classification plus a key set and a content map from
/// keys to classified tuples. Keys are opaque tokens and unique per table.
class Table {
public:
    Table() = default;

    /// Enforces entity integrity (no duplicate keys) and domain integrity
    /// (every row is classified by the signature). All violations are
    /// collected into the thrown ValidationError.
    static Table make(Signature sig, ClassificationPtr cls,
                      const std::vector<std::pair<Name, Tup>>& rows);

    const Signature& signature() const { return sig_; }
    const Classification& classification() const { return *cls_; }
    const ClassificationPtr& classification_ptr() const { return cls_; }
    const std::map<Name, Tup>& content() const { return content_; }

    NameSet keys() const;
    bool has_key(const Name& key) const { return content_.count(key) != 0; }
    const Tup& row(const Name& key) const;
    const Name& cell(const Name& key, const Name& column) const { return row(key).at(column); }
    std::size_t size() const { return content_.size(); }

    friend bool operator==(const Table& a, const Table& b);

private:
    Signature sig_;
    ClassificationPtr cls_;
    std::map<Name, Tup> content_;
};

using TablePtr = std::shared_ptr<const Table>;

Table make_table(const Signature& sig, ClassificationPtr cls,
                 const std::vector<std::pair<Name, Tup>>& rows);

/// Same content, possibly distinct objects.
bool same_table(const TablePtr& a, const TablePtr& b);

/// A morphism src -> dst. Following the commuting square of a table
/// morphism, the column map runs backwards (dst columns -> src columns), the
/// infomorphism runs dst.cls <-> src.cls (types dst -> src, instances
/// src -> dst), and the key map runs forwards (src keys -> dst keys).
class TableMorphism {
public:
    TableMorphism() = default;

    /// Throws TotalityError or ValidationError.
    static TableMorphism make(TablePtr src, TablePtr dst, NameMap col_map, Infomorphism info,
                              NameMap key_map);
    /// Morphism of the fiber over one classification (identity infomorphism).
    static TableMorphism make_fiber(TablePtr src, TablePtr dst, NameMap col_map, NameMap key_map);
    static TableMorphism identity(TablePtr table);

    const Table& src() const { return *src_; }
    const Table& dst() const { return *dst_; }
    const TablePtr& src_ptr() const { return src_; }
    const TablePtr& dst_ptr() const { return dst_; }
    const NameMap& col_map() const { return col_map_; }
    const Infomorphism& info() const { return info_; }
    const NameMap& key_map() const { return key_map_; }

    friend bool operator==(const TableMorphism& a, const TableMorphism& b);

private:
    TablePtr src_;
    TablePtr dst_;
    NameMap col_map_;
    Infomorphism info_;
    NameMap key_map_;
};

/// Full check of a candidate morphism T1 -> T2 given as raw maps:
/// h: I2 -> I1, f: X2 -> X1, g: Y1 -> Y2, k: K1 -> K2. Totality failures
/// throw TotalityError; everything else is itemized in the report.
ValidationReport check_table_morphism(const Table& t1, const Table& t2, const NameMap& col_map,
                                      const NameMap& type_map, const NameMap& inst_map,
                                      const NameMap& key_map);

/// m1: T1 -> T2 then m2: T2 -> T3.
TableMorphism compose_table_morphisms(const TableMorphism& m1, const TableMorphism& m2);

/// Base change of a table over E1 along an infomorphism E2 <-> E1.
Table migrate(const Table& table, const Infomorphism& info);

/// Column bijection dst -> src (respecting sorts) and key bijection src -> dst
/// that make `src -> dst` an isomorphism with identity infomorphism.
struct TableIsomorphism {
    NameMap col_map;
    NameMap key_map;
};

struct IsoSearchLimits {
    std::size_t max_columns = 10;
    std::size_t max_keys = 64;
};

/// Exhaustive search over sort-respecting column bijections followed by key
/// matching. Throws SizeCapError past the limits and BoundaryMismatchError if
/// the tables live over different classifications.
std::optional<TableIsomorphism> tables_isomorphic(const Table& a, const Table& b,
                                                  IsoSearchLimits limits = {});

}  // namespace catdb
