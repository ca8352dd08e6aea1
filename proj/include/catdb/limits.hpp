#pragma once

// Limits in the fiber of tables over one classification: the terminal
// table, pullbacks, joins over arbitrary finite diagrams, and mediators.

#include <map>
#include <utility>
#include <vector>

#include "catdb/fincat.hpp"

namespace catdb {

/// A shape object paired with one of its table's columns (or keys).
using Member = std::pair<Name, Name>;

struct LimitResult {
    TablePtr table;
    /// table -> T(j) for every shape object j.
    std::map<Name, TableMorphism> projections;
    /// Merged column name -> the (object, column) pairs it identifies.
    std::map<Name, std::vector<Member>> column_classes;
};

/// Key used by the terminal table.
inline const Name kTerminalKey = "⋆";

/// Serializes a key family as "⟨k1,…,kn⟩".
Name encode_family(const std::vector<Name>& family);

/// Zero columns, one key.
Table terminal_table(ClassificationPtr cls);

/// Limit of the diagram T. Columns are the classes of the disjoint union of
/// component columns under the equivalence generated by the column maps,
/// each named by its least "object.column" member. Keys are the families
/// of component keys, in object order, compatible with every key map.
LimitResult limit(const TableDiagram& diagram);

/// Limit over the span A -> C <- B; shape objects are named "A", "B", "C".
LimitResult pullback(const TableMorphism& left, const TableMorphism& right);

/// The projections of `lim` as a cone.
Cone as_cone(const LimitResult& lim);

/// Unique morphism cone.apex -> lim.table through which every leg factors.
/// Throws ValidationError if the cone is invalid.
TableMorphism mediating_morphism(const TableDiagram& diagram, const LimitResult& lim,
                                 const Cone& cone);

/// Rows of `table` whose entries in the bound columns occur as a row of
/// `ref`. `binding` maps ref columns to table columns of the same sort.
/// Computed as a pullback over the table of bound values.
LimitResult select(const Table& table, const Table& ref, const NameMap& binding);

/// Base change of every table and morphism of the diagram along an
/// infomorphism E2 <-> E1 whose target is the diagram's classification.
TableDiagram migrate_diagram(const TableDiagram& diagram, const Infomorphism& info);

namespace kernels {

/// Key families as indices into each object's sorted key list, objects in
/// shape order.
using KeyFamily = std::vector<std::size_t>;

/// Reference enumeration: backtracking over objects, propagating keys along
/// arrows whenever the choice is forced.
std::vector<KeyFamily> key_families_serial(const TableDiagram& diagram);

/// Same result and order as the serial kernel; the keys of the first object
/// are distributed across OpenMP threads.
std::vector<KeyFamily> key_families_parallel(const TableDiagram& diagram);

}  // namespace kernels

}  // namespace catdb
