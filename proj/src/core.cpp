#include "catdb/core.hpp"

#include <sstream>

namespace catdb {

void ValidationReport::merge(const ValidationReport& other, const std::string& prefix) {
    for (const auto& issue : other.issues) {
        issues.push_back(prefix.empty() ? issue : prefix + ": " + issue);
    }
}

std::string ValidationReport::str() const {
    std::ostringstream out;
    for (const auto& issue : issues) {
        out << issue << '\n';
    }
    return out.str();
}

namespace {

std::string first_line(const ValidationReport& report) {
    if (report.issues.empty()) {
        return "validation failed";
    }
    if (report.issues.size() == 1) {
        return report.issues.front();
    }
    return report.issues.front() + " (and " + std::to_string(report.issues.size() - 1) + " more)";
}

}  // namespace

ValidationError::ValidationError(ValidationReport report)
    : Error(first_line(report)), report_(std::move(report)) {}

ValidationError::ValidationError(const std::string& what, ValidationReport report)
    : Error(what + ": " + first_line(report)), report_(std::move(report)) {}

// ---------------------------------------------------------------------------

Classification Classification::make(const std::vector<Name>& types,
                                    const std::vector<Name>& instances,
                                    const std::vector<std::pair<Name, Name>>& holds) {
    Classification cls;
    ValidationReport report;
    for (const auto& x : types) {
        if (!cls.types_.insert(x).second) {
            report.add("duplicate type '" + x + "'");
        }
    }
    for (const auto& y : instances) {
        if (!cls.instances_.insert(y).second) {
            report.add("duplicate instance '" + y + "'");
        }
    }
    for (const auto& [y, x] : holds) {
        bool known = true;
        if (!cls.has_instance(y)) {
            report.add("incidence " + y + ":" + x + " references undeclared instance '" + y + "'");
            known = false;
        }
        if (!cls.has_type(x)) {
            report.add("incidence " + y + ":" + x + " references undeclared type '" + x + "'");
            known = false;
        }
        if (known) {
            cls.incidence_.insert({y, x});
        }
    }
    if (!report.ok()) {
        throw ValidationError("invalid classification", std::move(report));
    }
    for (const auto& x : cls.types_) {
        cls.extents_[x];
    }
    for (const auto& [y, x] : cls.incidence_) {
        cls.extents_[x].insert(y);
    }
    return cls;
}

const NameSet& Classification::extent(const Name& x) const {
    auto it = extents_.find(x);
    if (it == extents_.end()) {
        throw UnknownNameError("unknown type '" + x + "'");
    }
    return it->second;
}

const NameSet& extent(const Classification& cls, const Name& type) { return cls.extent(type); }

// ---------------------------------------------------------------------------

NameSet Signature::arity() const {
    NameSet out;
    for (const auto& [column, sort] : sorts) {
        out.insert(out.end(), column);
    }
    return out;
}

const Name& Signature::sort(const Name& column) const {
    auto it = sorts.find(column);
    if (it == sorts.end()) {
        throw UnknownNameError("unknown column '" + column + "'");
    }
    return it->second;
}

Signature Signature::make(std::map<Name, Name> sorts, NameSet universe) {
    ValidationReport report;
    for (const auto& [column, sort] : sorts) {
        if (universe.count(sort) == 0) {
            report.add("column '" + column + "' has sort '" + sort + "' outside the type universe");
        }
    }
    if (!report.ok()) {
        throw ValidationError("invalid signature", std::move(report));
    }
    return Signature{std::move(sorts), std::move(universe)};
}

NameSet Tup::arity() const {
    NameSet out;
    for (const auto& [index, value] : entries) {
        out.insert(out.end(), index);
    }
    return out;
}

const Name& Tup::at(const Name& index) const {
    auto it = entries.find(index);
    if (it == entries.end()) {
        throw UnknownNameError("tuple has no index '" + index + "'");
    }
    return it->second;
}

bool classify_tuple(const Classification& cls, const Signature& sig, const Tup& tup) {
    if (tup.entries.size() != sig.sorts.size()) {
        return false;
    }
    auto t = tup.entries.begin();
    for (auto s = sig.sorts.begin(); s != sig.sorts.end(); ++s, ++t) {
        if (t->first != s->first || !cls.holds(t->second, s->second)) {
            return false;
        }
    }
    return true;
}

void for_each_tuple(const Classification& cls, const Signature& sig,
                    const std::function<void(const Tup&)>& visit) {
    std::vector<std::pair<Name, const NameSet*>> columns;
    for (const auto& [column, sort] : sig.sorts) {
        const NameSet& ext = cls.extent(sort);
        if (ext.empty()) {
            return;
        }
        columns.emplace_back(column, &ext);
    }
    std::vector<NameSet::const_iterator> cursor;
    Tup tup;
    for (const auto& [column, ext] : columns) {
        cursor.push_back(ext->begin());
        tup.entries[column] = *ext->begin();
    }
    while (true) {
        visit(tup);
        // Odometer increment, last column fastest.
        std::size_t pos = columns.size();
        while (pos > 0) {
            --pos;
            auto& it = cursor[pos];
            ++it;
            if (it != columns[pos].second->end()) {
                tup.entries[columns[pos].first] = *it;
                break;
            }
            it = columns[pos].second->begin();
            tup.entries[columns[pos].first] = *it;
            if (pos == 0) {
                return;
            }
        }
        if (columns.empty()) {
            return;
        }
    }
}

// ---------------------------------------------------------------------------

void require_total(const NameMap& map, const NameSet& domain, const NameSet& codomain,
                   const std::string& what) {
    std::vector<std::string> problems;
    for (const auto& x : domain) {
        if (map.count(x) == 0) {
            problems.push_back("undefined on '" + x + "'");
        }
    }
    for (const auto& [x, y] : map) {
        if (domain.count(x) == 0) {
            problems.push_back("defined on '" + x + "' outside its domain");
        } else if (codomain.count(y) == 0) {
            problems.push_back("sends '" + x + "' to '" + y + "' outside its codomain");
        }
    }
    if (!problems.empty()) {
        std::string msg = what + " is not total:";
        for (const auto& p : problems) {
            msg += " " + p + ";";
        }
        msg.pop_back();
        throw TotalityError(msg);
    }
}

NameMap compose_maps(const NameMap& first, const NameMap& second) {
    NameMap out;
    for (const auto& [x, y] : first) {
        out.emplace_hint(out.end(), x, apply(second, y, "composite map"));
    }
    return out;
}

NameMap identity_map(const NameSet& domain) {
    NameMap out;
    for (const auto& x : domain) {
        out.emplace_hint(out.end(), x, x);
    }
    return out;
}

const Name& apply(const NameMap& map, const Name& key, const std::string& what) {
    auto it = map.find(key);
    if (it == map.end()) {
        throw TotalityError(what + " is undefined on '" + key + "'");
    }
    return it->second;
}

// ---------------------------------------------------------------------------

ValidationReport check_infomorphism(const Classification& source, const Classification& target,
                                    const NameMap& type_map, const NameMap& inst_map) {
    require_total(type_map, source.types(), target.types(), "type map f");
    require_total(inst_map, target.instances(), source.instances(), "instance map g");
    ValidationReport report;
    for (const auto& y1 : target.instances()) {
        const Name& y2 = inst_map.at(y1);
        for (const auto& x2 : source.types()) {
            const Name& x1 = type_map.at(x2);
            bool lhs = source.holds(y2, x2);
            bool rhs = target.holds(y1, x1);
            if (lhs != rhs) {
                report.add("infomorphism condition fails at (" + y1 + ", " + x2 + "): g(" + y1 +
                           ")=" + y2 + (lhs ? " |= " : " does not classify as ") + x2 + " but " +
                           y1 + (rhs ? " |= " : " does not classify as ") + x1);
            }
        }
    }
    return report;
}

Infomorphism Infomorphism::make(ClassificationPtr source, ClassificationPtr target,
                                NameMap type_map, NameMap inst_map) {
    auto report = check_infomorphism(*source, *target, type_map, inst_map);
    if (!report.ok()) {
        throw ValidationError("invalid infomorphism", std::move(report));
    }
    Infomorphism m;
    m.source_ = std::move(source);
    m.target_ = std::move(target);
    m.type_map_ = std::move(type_map);
    m.inst_map_ = std::move(inst_map);
    return m;
}

Infomorphism Infomorphism::identity(ClassificationPtr cls) {
    Infomorphism m;
    m.type_map_ = identity_map(cls->types());
    m.inst_map_ = identity_map(cls->instances());
    m.source_ = cls;
    m.target_ = std::move(cls);
    return m;
}

bool Infomorphism::is_identity() const {
    if (!(source_ == target_ || *source_ == *target_)) {
        return false;
    }
    for (const auto& [a, b] : type_map_) {
        if (a != b) return false;
    }
    for (const auto& [a, b] : inst_map_) {
        if (a != b) return false;
    }
    return true;
}

bool operator==(const Infomorphism& a, const Infomorphism& b) {
    auto same = [](const ClassificationPtr& p, const ClassificationPtr& q) {
        return p == q || (p && q && *p == *q);
    };
    return same(a.source_, b.source_) && same(a.target_, b.target_) &&
           a.type_map_ == b.type_map_ && a.inst_map_ == b.inst_map_;
}

Infomorphism compose_infomorphisms(const Infomorphism& outer, const Infomorphism& inner) {
    if (!(outer.target() == inner.source())) {
        throw BoundaryMismatchError("infomorphisms are not composable");
    }
    return Infomorphism::make(outer.source_ptr(), inner.target_ptr(),
                              compose_maps(outer.type_map(), inner.type_map()),
                              compose_maps(inner.inst_map(), outer.inst_map()));
}

// ---------------------------------------------------------------------------

Signature sigma_f(const Signature& sig, const NameMap& type_map, const NameSet& target_universe) {
    Signature out;
    out.universe = target_universe;
    for (const auto& [column, sort] : sig.sorts) {
        const Name& image = apply(type_map, sort, "type map f");
        if (target_universe.count(image) == 0) {
            throw TotalityError("type map f sends '" + sort + "' outside the target universe");
        }
        out.sorts.emplace_hint(out.sorts.end(), column, image);
    }
    return out;
}

Name pullback_column(const Name& column, const Name& type) { return column + "@" + type; }

Signature f_star(const Signature& sig, const NameMap& type_map) {
    Signature out;
    for (const auto& [x2, x1] : type_map) {
        out.universe.insert(x2);
    }
    for (const auto& [column, sort] : sig.sorts) {
        for (const auto& [x2, x1] : type_map) {
            if (x1 == sort) {
                out.sorts.emplace(pullback_column(column, x2), x2);
            }
        }
    }
    return out;
}

ValidationReport check_signature_morphism(const NameMap& col_map, const Signature& src,
                                          const Signature& dst, const NameMap& type_map) {
    require_total(col_map, src.arity(), dst.arity(), "column map h");
    ValidationReport report;
    for (const auto& [i2, i1] : col_map) {
        const Name& expected = apply(type_map, src.sort(i2), "type map f");
        const Name& actual = dst.sort(i1);
        if (expected != actual) {
            report.add("sort mismatch at column '" + i2 + "' -> '" + i1 + "': " + actual +
                       " != f(" + src.sort(i2) + ") = " + expected);
        }
    }
    return report;
}

Tup tuple_transport(const Tup& tup, const NameMap& col_map, const NameMap& inst_map) {
    Tup out;
    for (const auto& [i2, i1] : col_map) {
        out.entries.emplace_hint(out.entries.end(), i2,
                                 apply(inst_map, tup.at(i1), "instance map g"));
    }
    return out;
}

}  // namespace catdb
