#pragma once

// Explicitly tabulated finite categories and diagrams of tables over them.

#include <map>
#include <utility>
#include <vector>

#include "catdb/table.hpp"

namespace catdb {

struct Arrow {
    Name name;
    Name dom;
    Name cod;

    friend bool operator==(const Arrow&, const Arrow&) = default;
};

/// Entry of a composition table: `first` then `second` equals `result`.
struct Composite {
    Name first;
    Name second;
    Name result;
};

/// A finite category given by its full composition table. Composition is
/// written in diagrammatic order: compose(a, b) is "a then b" and requires
/// cod(a) = dom(b).
class FinCat {
public:
    FinCat() = default;

    /// Builds a category from its non-identity arrows and the composites of
    /// composable non-identity pairs. Identities are added under the name
    /// identity_name(x). Every composable pair of non-identity arrows must
    /// have an entry; identity, closure and associativity laws are checked
    /// exhaustively and violations name the offending arrows.
    static FinCat make(const std::vector<Name>& objects, const std::vector<Arrow>& arrows,
                       const std::vector<Composite>& composites);

    static Name identity_name(const Name& object) { return "id(" + object + ")"; }

    const NameSet& objects() const { return objects_; }
    const std::map<Name, Arrow>& arrows() const { return arrows_; }
    std::vector<Arrow> non_identity_arrows() const;
    /// Composition table restricted to non-identity pairs.
    std::vector<Composite> non_identity_composites() const;

    bool has_object(const Name& x) const { return objects_.count(x) != 0; }
    bool has_arrow(const Name& a) const { return arrows_.count(a) != 0; }
    const Arrow& arrow(const Name& a) const;
    const Name& dom(const Name& a) const { return arrow(a).dom; }
    const Name& cod(const Name& a) const { return arrow(a).cod; }
    const Name& identity(const Name& x) const;
    bool is_identity(const Name& a) const;

    /// "a then b". Throws BoundaryMismatchError if cod(a) != dom(b).
    const Name& compose(const Name& a, const Name& b) const;
    /// Arrows x -> y in name order.
    std::vector<Name> hom(const Name& x, const Name& y) const;

    friend bool operator==(const FinCat&, const FinCat&) = default;

private:
    NameSet objects_;
    std::map<Name, Arrow> arrows_;
    NameMap identities_;
    std::map<std::pair<Name, Name>, Name> table_;
};

/// One object, one arrow.
FinCat terminal_category(const Name& object = "*");
/// Only identities.
FinCat discrete_category(const std::vector<Name>& objects);
/// Free category on a finite acyclic graph; paths of length >= 2 become
/// arrows named by joining edge names with ';'. Throws ValidationError on a
/// cycle.
FinCat free_category(const std::vector<Name>& objects, const std::vector<Arrow>& edges);
/// Preorder category: one arrow a -> b, named "a->b", for every pair in the
/// reflexive-transitive closure of `order`.
FinCat preorder_category(const std::vector<Name>& objects,
                         const std::vector<std::pair<Name, Name>>& order);
/// Same objects and arrow names, arrows reversed.
FinCat opposite(const FinCat& cat);

// ---------------------------------------------------------------------------
// Diagrams of tables

/// Column and key maps of a morphism in the fiber over one classification.
struct FiberMaps {
    NameMap col_map;  // target columns -> source columns
    NameMap key_map;  // source keys -> target keys

    friend bool operator==(const FiberMaps&, const FiberMaps&) = default;
};

/// A functor from a finite shape into the tables over one classification.
/// Arrow e: j -> j' is sent to a table morphism T(j) -> T(j') with identity
/// infomorphism.
class TableDiagram {
public:
    TableDiagram() = default;

    /// `morphisms` may omit identities and composite arrows whose components
    /// are present; those are derived. Functoriality and every morphism
    /// condition are checked and all failures are itemized. `cls` is only
    /// needed for an empty shape; otherwise it must match the tables.
    static TableDiagram make(FinCat shape, std::map<Name, TablePtr> tables,
                             const std::map<Name, FiberMaps>& morphisms,
                             ClassificationPtr cls = nullptr);
    static TableDiagram make(FinCat shape, std::map<Name, TablePtr> tables,
                             const std::map<Name, TableMorphism>& morphisms,
                             ClassificationPtr cls = nullptr);

    const FinCat& shape() const { return shape_; }
    const std::map<Name, TablePtr>& tables() const { return tables_; }
    const Table& table(const Name& object) const;
    const TablePtr& table_ptr(const Name& object) const;
    /// Includes identities and composites.
    const std::map<Name, TableMorphism>& morphisms() const { return morphisms_; }
    const TableMorphism& morphism(const Name& arrow) const;
    /// Shared classification of the tables.
    const ClassificationPtr& classification_ptr() const { return cls_; }

private:
    FinCat shape_;
    std::map<Name, TablePtr> tables_;
    std::map<Name, TableMorphism> morphisms_;
    ClassificationPtr cls_;
};

TableDiagram make_diagram(FinCat shape, std::map<Name, TablePtr> tables,
                          const std::map<Name, FiberMaps>& morphisms,
                          ClassificationPtr cls = nullptr);

/// Apex plus one leg apex -> T(j) per shape object.
struct Cone {
    TablePtr apex;
    std::map<Name, FiberMaps> legs;
};

/// Empty iff every leg is a valid fiber morphism and every triangle over a
/// shape arrow commutes.
ValidationReport check_cone(const TableDiagram& diagram, const Cone& cone);

/// Raw maps of a validated morphism.
FiberMaps fiber_maps(const TableMorphism& m);

/// `first` then `second`. Throws TotalityError if they do not compose.
FiberMaps compose_fiber(const FiberMaps& first, const FiberMaps& second);

/// check_table_morphism with identity infomorphism; totality failures are
/// reported instead of thrown.
ValidationReport check_fiber_morphism(const Table& src, const Table& dst, const FiberMaps& maps);

}  // namespace catdb
