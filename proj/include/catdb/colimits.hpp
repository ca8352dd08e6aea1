#pragma once

// Colimits in the fiber of tables over one classification: the initial
// table, the distributed union (coproduct), general finite colimits and
// comediators.

#include <map>
#include <vector>

#include "catdb/limits.hpp"

namespace catdb {

struct ColimitResult {
    TablePtr table;
    /// T(j) -> table for every shape object j.
    std::map<Name, TableMorphism> injections;
    /// Merged key name -> the (object, key) pairs it identifies.
    std::map<Name, std::vector<Member>> key_classes;
    /// Column name -> its family of component columns in object order.
    std::map<Name, std::vector<Name>> column_families;
};

/// Apex plus one leg T(j) -> apex per shape object.
struct Cocone {
    TablePtr apex;
    std::map<Name, FiberMaps> legs;
};

/// Hard cap on component arity for column-family enumeration.
inline constexpr std::size_t kMaxColimitArity = 8;

/// No keys; one column per type, sorted by itself.
Table initial_table(ClassificationPtr cls);

/// Colimit of the diagram. Keys are the classes of the disjoint union of
/// component keys under the equivalence generated by the key maps, named by
/// their least "object.key" member. Columns are the families of component
/// columns of one sort compatible with every column map, named with
/// encode_family; an empty shape yields one column per type.
/// Throws SizeCapError when a component has more than kMaxColimitArity columns.
ColimitResult colimit(const TableDiagram& diagram);

/// Distributed union of two tables over one classification, computed as the
/// colimit of the discrete diagram on objects "left" and "right".
ColimitResult coproduct(const TablePtr& left, const TablePtr& right);

Cocone as_cocone(const ColimitResult& colim);

ValidationReport check_cocone(const TableDiagram& diagram, const Cocone& cocone);

/// Unique morphism colim.table -> cocone.apex commuting with every
/// injection. Throws ValidationError if the cocone is invalid.
TableMorphism comediating_morphism(const TableDiagram& diagram, const ColimitResult& colim,
                                   const Cocone& cocone);

namespace kernels {

/// Column families as indices into each object's sorted column list.
using ColumnFamily = std::vector<std::size_t>;

std::vector<ColumnFamily> column_families_serial(const TableDiagram& diagram);
/// Same result and order as the serial kernel.
std::vector<ColumnFamily> column_families_parallel(const TableDiagram& diagram);

}  // namespace kernels

}  // namespace catdb
