#pragma once

// Classifications, signatures, tuples and infomorphisms.
//
// Every set is finite and ordered by the byte order of its string
// elements, so all containers here iterate in canonical order.

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "catdb/error.hpp"

namespace catdb {

using Name = std::string;
using NameSet = std::set<Name>;
using NameMap = std::map<Name, Name>;

/// Incidence between entity types X and entity instances Y.
class Classification {
public:
    Classification() = default;

    /// Validating constructor. Rejects duplicate types or instances and
    /// incidence pairs (instance, type) that reference undeclared names.
    static Classification make(const std::vector<Name>& types,
                               const std::vector<Name>& instances,
                               const std::vector<std::pair<Name, Name>>& holds);

    const NameSet& types() const { return types_; }
    const NameSet& instances() const { return instances_; }
    /// Pairs (instance, type).
    const std::set<std::pair<Name, Name>>& incidence() const { return incidence_; }

    bool has_type(const Name& x) const { return types_.count(x) != 0; }
    bool has_instance(const Name& y) const { return instances_.count(y) != 0; }
    bool holds(const Name& y, const Name& x) const { return incidence_.count({y, x}) != 0; }

    /// Instances classified by `x`. Throws UnknownNameError for undeclared types.
    const NameSet& extent(const Name& x) const;

    friend bool operator==(const Classification& a, const Classification& b) {
        return a.types_ == b.types_ && a.instances_ == b.instances_ &&
               a.incidence_ == b.incidence_;
    }

private:
    NameSet types_;
    NameSet instances_;
    std::set<std::pair<Name, Name>> incidence_;
    std::map<Name, NameSet> extents_;
};

using ClassificationPtr = std::shared_ptr<const Classification>;

/// Free function form of Classification::extent.
const NameSet& extent(const Classification& cls, const Name& type);

/// Column set with a sort map into a type universe.
struct Signature {
    std::map<Name, Name> sorts;  // column -> type
    NameSet universe;

    NameSet arity() const;
    const Name& sort(const Name& column) const;
    bool has_column(const Name& column) const { return sorts.count(column) != 0; }

    /// Throws ValidationError if some sort escapes the universe.
    static Signature make(std::map<Name, Name> sorts, NameSet universe);

    friend bool operator==(const Signature&, const Signature&) = default;
};

/// Total assignment of instances to an index set.
struct Tup {
    std::map<Name, Name> entries;  // index -> instance

    NameSet arity() const;
    const Name& at(const Name& index) const;

    friend bool operator==(const Tup&, const Tup&) = default;
    friend auto operator<=>(const Tup&, const Tup&) = default;
};

/// True iff the tuple has the signature's arity and each entry is
/// classified by the sort of its column.
bool classify_tuple(const Classification& cls, const Signature& sig, const Tup& tup);

/// Calls `visit` for every tuple classified by `sig`, in lexicographic order
/// of the column-wise extents. Never materializes the tuple set.
void for_each_tuple(const Classification& cls, const Signature& sig,
                    const std::function<void(const Tup&)>& visit);

// ---------------------------------------------------------------------------
// Finite maps

/// Throws TotalityError unless `map` is defined on exactly `domain` and lands
/// in `codomain`. `what` names the map in the message.
void require_total(const NameMap& map, const NameSet& domain, const NameSet& codomain,
                   const std::string& what);

/// x -> second(first(x)). Throws TotalityError if `second` is undefined on an
/// image of `first`.
NameMap compose_maps(const NameMap& first, const NameMap& second);

NameMap identity_map(const NameSet& domain);

/// Looks `key` up and throws TotalityError naming `what` if absent.
const Name& apply(const NameMap& map, const Name& key, const std::string& what);

// ---------------------------------------------------------------------------
// Infomorphisms

/// A contravariant pair (f, g) between `source` (E2) and `target` (E1) with
/// f: X2 -> X1 and g: Y1 -> Y2 such that g(y1) |=2 x2 iff y1 |=1 f(x2).
class Infomorphism {
public:
    Infomorphism() = default;

    /// Validating constructor; throws TotalityError or ValidationError.
    static Infomorphism make(ClassificationPtr source, ClassificationPtr target,
                             NameMap type_map, NameMap inst_map);
    static Infomorphism identity(ClassificationPtr cls);

    const Classification& source() const { return *source_; }
    const Classification& target() const { return *target_; }
    const ClassificationPtr& source_ptr() const { return source_; }
    const ClassificationPtr& target_ptr() const { return target_; }
    const NameMap& type_map() const { return type_map_; }
    const NameMap& inst_map() const { return inst_map_; }

    bool is_identity() const;

    friend bool operator==(const Infomorphism& a, const Infomorphism& b);

private:
    ClassificationPtr source_;
    ClassificationPtr target_;
    NameMap type_map_;
    NameMap inst_map_;
};

/// Lists every (y1, x2) that breaks the infomorphism biconditional.
/// Throws TotalityError if f or g is partial or escapes its codomain.
ValidationReport check_infomorphism(const Classification& source, const Classification& target,
                                    const NameMap& type_map, const NameMap& inst_map);

/// Composite of `outer`: E3 <-> E2 and `inner`: E2 <-> E1, giving E3 <-> E1
/// with types X3 -> X2 -> X1 and instances Y1 -> Y2 -> Y3.
Infomorphism compose_infomorphisms(const Infomorphism& outer, const Infomorphism& inner);

// ---------------------------------------------------------------------------
// Signature transport

/// Same columns, sorts pushed forward along f: X2 -> X1.
Signature sigma_f(const Signature& sig, const NameMap& type_map, const NameSet& target_universe);

/// Column name used by f_star for the pair (column, type).
Name pullback_column(const Name& column, const Name& type);

/// Pullback of a signature over X1 along f: X2 -> X1. Columns are the pairs
/// (i, x2) with sort(i) = f(x2), named "i@x2" and sorted x2.
Signature f_star(const Signature& sig, const NameMap& type_map);

/// Empty iff dst.sort(h(i2)) = f(src.sort(i2)) for every source column.
/// `col_map` runs src.arity -> dst.arity. Throws TotalityError on partial maps.
ValidationReport check_signature_morphism(const NameMap& col_map, const Signature& src,
                                          const Signature& dst, const NameMap& type_map);

/// result(i2) = g(t1(h(i2))).
Tup tuple_transport(const Tup& tup, const NameMap& col_map, const NameMap& inst_map);

}  // namespace catdb
