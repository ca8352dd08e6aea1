#include "catdb/database.hpp"

#include <functional>

#include "catdb/union_find.hpp"

namespace catdb {

namespace {

using ComposeFn = std::function<NameMap(const NameMap& first_image, const NameMap& second_image)>;

/// Fills identities (via `identity_of`) and derivable composites of an
/// arrow-indexed family of maps, reporting missing arrows and functor-law
/// failures.
std::map<Name, NameMap> complete_functor(const FinCat& cat, std::map<Name, NameMap> given,
                                         const std::function<NameMap(const Name&)>& identity_of,
                                         const ComposeFn& compose, const std::string& what,
                                         ValidationReport& report) {
    for (const auto& [a, m] : given) {
        if (!cat.has_arrow(a)) report.add(what + " assigned to unknown arrow '" + a + "'");
    }
    for (const auto& x : cat.objects()) {
        NameMap id = identity_of(x);
        auto [it, inserted] = given.emplace(cat.identity(x), id);
        if (!inserted && it->second != id) {
            report.add("functor law fails: " + what + " of identity on '" + x + "' is not the identity");
        }
    }
    const auto composites = cat.non_identity_composites();
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& c : composites) {
            if (given.count(c.result) || !given.count(c.first) || !given.count(c.second)) continue;
            try {
                given.emplace(c.result, compose(given.at(c.first), given.at(c.second)));
                changed = true;
            } catch (const TotalityError&) {
            }
        }
    }
    for (const auto& [name, a] : cat.arrows()) {
        if (!given.count(name)) report.add(what + " missing for arrow '" + name + "'");
    }
    return given;
}

void check_composites(const FinCat& cat, const std::map<Name, NameMap>& maps,
                      const ComposeFn& compose, const std::string& what, ValidationReport& report) {
    for (const auto& c : cat.non_identity_composites()) {
        try {
            if (compose(maps.at(c.first), maps.at(c.second)) != maps.at(c.result)) {
                report.add("functor law fails: " + what + " of " + c.result +
                           " differs from the composite of " + c.first + " then " + c.second);
            }
        } catch (const TotalityError& e) {
            report.add("functor law fails at (" + c.first + ", " + c.second + "): " + e.what());
        }
    }
}

NameMap covariant(const NameMap& first, const NameMap& second) { return compose_maps(first, second); }
NameMap contravariant(const NameMap& first, const NameMap& second) {
    return compose_maps(second, first);
}

}  // namespace

// ---------------------------------------------------------------------------

DbSchema DbSchema::make(FinCat rel_cat, NameSet universe, std::map<Name, Signature> sig_at,
                        const std::map<Name, NameMap>& sig_morph_at) {
    ValidationReport report;
    for (const auto& r : rel_cat.objects()) {
        if (!sig_at.count(r)) report.add("relation '" + r + "' has no signature");
    }
    for (auto& [r, sig] : sig_at) {
        if (!rel_cat.has_object(r)) report.add("signature assigned to unknown relation '" + r + "'");
        sig.universe = universe;
        for (const auto& [column, sort] : sig.sorts) {
            if (!universe.count(sort)) {
                report.add("relation '" + r + "' column '" + column + "' has sort '" + sort +
                           "' outside the universe");
            }
        }
    }
    if (!report.ok()) {
        throw ValidationError("invalid schema", std::move(report));
    }
    auto all = complete_functor(
        rel_cat, sig_morph_at, [&](const Name& x) { return identity_map(sig_at.at(x).arity()); },
        covariant, "column map", report);
    if (!report.ok()) {
        throw ValidationError("invalid schema", std::move(report));
    }
    const NameMap id_types = identity_map(universe);
    for (const auto& [name, a] : rel_cat.arrows()) {
        try {
            report.merge(check_signature_morphism(all.at(name), sig_at.at(a.dom), sig_at.at(a.cod),
                                                  id_types),
                         "arrow " + name + ": " + a.dom + " -> " + a.cod);
        } catch (const Error& e) {
            report.add("arrow " + name + ": " + e.what());
        }
    }
    if (!report.ok()) {
        throw ValidationError("invalid schema", std::move(report));
    }
    check_composites(rel_cat, all, covariant, "column map", report);
    if (!report.ok()) {
        throw ValidationError("invalid schema", std::move(report));
    }
    DbSchema s;
    s.rel_cat_ = std::move(rel_cat);
    s.universe_ = std::move(universe);
    s.sig_at_ = std::move(sig_at);
    s.sig_morph_at_ = std::move(all);
    return s;
}

DbSchema make_db_schema(FinCat rel_cat, NameSet universe, std::map<Name, Signature> sig_at,
                        const std::map<Name, NameMap>& sig_morph_at) {
    return DbSchema::make(std::move(rel_cat), std::move(universe), std::move(sig_at), sig_morph_at);
}

const Signature& DbSchema::signature(const Name& relation) const {
    auto it = sig_at_.find(relation);
    if (it == sig_at_.end()) throw UnknownNameError("unknown relation '" + relation + "'");
    return it->second;
}

const NameMap& DbSchema::sig_morph(const Name& arrow) const {
    auto it = sig_morph_at_.find(arrow);
    if (it == sig_morph_at_.end()) throw UnknownNameError("unknown arrow '" + arrow + "'");
    return it->second;
}

ReferenceSchema reference_schema(const DbSchema& schema) {
    std::vector<Member> members;
    std::map<Member, std::size_t> index;
    for (const auto& [r, sig] : schema.sig_at()) {
        for (const auto& [column, sort] : sig.sorts) {
            index[{r, column}] = members.size();
            members.emplace_back(r, column);
        }
    }
    UnionFind classes(members.size());
    for (const auto& a : schema.rel_cat().non_identity_arrows()) {
        for (const auto& [from, to] : schema.sig_morph(a.name)) {
            classes.unite(index.at({a.dom, from}), index.at({a.cod, to}));
        }
    }
    std::map<std::size_t, Name> root_name;
    for (std::size_t m = 0; m < members.size(); ++m) {
        Name n = members[m].first + "." + members[m].second;
        auto [it, inserted] = root_name.emplace(classes.find(m), n);
        if (!inserted && n < it->second) it->second = n;
    }
    ReferenceSchema out;
    out.signature.universe = schema.universe();
    for (const auto& r : schema.rel_cat().objects()) out.injections[r];
    for (std::size_t m = 0; m < members.size(); ++m) {
        const Name& cname = root_name.at(classes.find(m));
        const auto& [r, column] = members[m];
        out.injections[r].emplace(column, cname);
        const Name& sort = schema.signature(r).sort(column);
        auto [it, inserted] = out.signature.sorts.emplace(cname, sort);
        if (!inserted && it->second != sort) {
            throw InternalError("reference schema class " + cname + " mixes sorts");
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

Database Database::make(DbSchemaPtr schema, ClassificationPtr cls,
                        const std::map<Name, std::vector<Name>>& key_at,
                        const std::map<Name, NameMap>& key_map_at,
                        const std::map<Name, std::map<Name, Tup>>& tup_at) {
    ValidationReport report;
    if (cls->types() != schema->universe()) {
        report.add("classification types differ from the schema universe");
        throw ValidationError("invalid database", std::move(report));
    }
    const FinCat& cat = schema->rel_cat();
    std::map<Name, TablePtr> tables;
    for (const auto& r : cat.objects()) {
        auto keys = key_at.find(r);
        auto rows = tup_at.find(r);
        std::vector<std::pair<Name, Tup>> listed;
        if (keys != key_at.end()) {
            for (const auto& k : keys->second) {
                if (rows == tup_at.end() || !rows->second.count(k)) {
                    report.add("relation " + r + ": key '" + k + "' has no tuple");
                    continue;
                }
                listed.emplace_back(k, rows->second.at(k));
            }
        }
        if (rows != tup_at.end()) {
            NameSet declared;
            if (keys != key_at.end()) declared.insert(keys->second.begin(), keys->second.end());
            for (const auto& [k, tup] : rows->second) {
                if (!declared.count(k)) report.add("relation " + r + ": tuple for undeclared key '" + k + "'");
            }
        }
        try {
            tables.emplace(r, std::make_shared<const Table>(
                                  Table::make(schema->signature(r), cls, listed)));
        } catch (const ValidationError& e) {
            report.merge(e.report(), "relation " + r);
        }
    }
    for (const auto& [r, keys] : key_at) {
        if (!cat.has_object(r)) report.add("keys assigned to unknown relation '" + r + "'");
    }
    for (const auto& [r, rows] : tup_at) {
        if (!cat.has_object(r)) report.add("tuples assigned to unknown relation '" + r + "'");
    }
    if (!report.ok()) {
        throw ValidationError("invalid database", std::move(report));
    }
    auto all = complete_functor(
        cat, key_map_at, [&](const Name& x) { return identity_map(tables.at(x)->keys()); },
        contravariant, "key map", report);
    if (!report.ok()) {
        throw ValidationError("invalid database", std::move(report));
    }
    for (const auto& [name, a] : cat.arrows()) {
        try {
            require_total(all.at(name), tables.at(a.cod)->keys(), tables.at(a.dom)->keys(),
                          "key map of arrow " + name);
        } catch (const TotalityError& e) {
            report.add(e.what());
        }
    }
    if (!report.ok()) {
        throw ValidationError("invalid database", std::move(report));
    }
    check_composites(cat, all, contravariant, "key map", report);
    // Naturality of the tuple components.
    for (const auto& [name, a] : cat.arrows()) {
        const Table& from = *tables.at(a.cod);  // T(r)
        const Table& to = *tables.at(a.dom);    // T(r')
        const NameMap& cols = schema->sig_morph(name);
        for (const auto& [k, row] : from.content()) {
            const Name& k2 = all.at(name).at(k);
            for (const auto& [i2, i1] : cols) {
                const Name& lhs = to.cell(k2, i2);
                const Name& rhs = row.at(i1);
                if (lhs != rhs) {
                    report.add("naturality fails at (arrow " + name + ": " + a.dom + " -> " + a.cod +
                               ", key " + k + ", column " + i2 + "): " + lhs + " != " + rhs);
                }
            }
        }
    }
    if (!report.ok()) {
        throw ValidationError("invalid database", std::move(report));
    }
    Database db;
    db.schema_ = std::move(schema);
    db.cls_ = std::move(cls);
    db.tables_ = std::move(tables);
    db.key_map_at_ = std::move(all);
    return db;
}

Database make_database(DbSchemaPtr schema, ClassificationPtr cls,
                       const std::map<Name, std::vector<Name>>& key_at,
                       const std::map<Name, NameMap>& key_map_at,
                       const std::map<Name, std::map<Name, Tup>>& tup_at) {
    return Database::make(std::move(schema), std::move(cls), key_at, key_map_at, tup_at);
}

const Table& Database::table(const Name& relation) const { return *table_ptr(relation); }

const TablePtr& Database::table_ptr(const Name& relation) const {
    auto it = tables_.find(relation);
    if (it == tables_.end()) throw UnknownNameError("unknown relation '" + relation + "'");
    return it->second;
}

const NameMap& Database::key_map(const Name& arrow) const {
    auto it = key_map_at_.find(arrow);
    if (it == key_map_at_.end()) throw UnknownNameError("unknown arrow '" + arrow + "'");
    return it->second;
}

bool operator==(const Database& a, const Database& b) {
    if (!(*a.schema_ == *b.schema_) || !(*a.cls_ == *b.cls_) || a.key_map_at_ != b.key_map_at_) {
        return false;
    }
    if (a.tables_.size() != b.tables_.size()) return false;
    for (const auto& [r, t] : a.tables_) {
        auto it = b.tables_.find(r);
        if (it == b.tables_.end() || !same_table(t, it->second)) return false;
    }
    return true;
}

Database database_of_table(const TablePtr& table, const Name& relation) {
    auto schema = std::make_shared<const DbSchema>(DbSchema::make(
        terminal_category(relation), table->classification().types(),
        {{relation, table->signature()}}, {}));
    const auto keys = table->keys();
    return Database::make(schema, table->classification_ptr(),
                          {{relation, std::vector<Name>(keys.begin(), keys.end())}}, {},
                          {{relation, table->content()}});
}

TableDiagram db_to_diagram(const Database& db) {
    std::map<Name, FiberMaps> maps;
    for (const auto& [name, a] : db.schema().rel_cat().arrows()) {
        maps.emplace(name, FiberMaps{db.schema().sig_morph(name), db.key_map(name)});
    }
    return TableDiagram::make(opposite(db.schema().rel_cat()), db.tables(), maps,
                              db.classification_ptr());
}

LimitResult join(const Database& db) { return limit(db_to_diagram(db)); }

// ---------------------------------------------------------------------------

namespace {

/// Fills images of identity arrows; composites must be listed.
NameMap complete_arrow_map(const FinCat& dst_cat, const FinCat& src_cat, const NameMap& object_map,
                           NameMap arrow_map) {
    for (const auto& x : dst_cat.objects()) {
        auto it = object_map.find(x);
        if (it != object_map.end() && src_cat.has_object(it->second)) {
            arrow_map.emplace(dst_cat.identity(x), src_cat.identity(it->second));
        }
    }
    return arrow_map;
}

}  // namespace

ValidationReport check_db_morphism(const Database& src, const Database& dst,
                                   const DbMorphismData& data) {
    ValidationReport report;
    const FinCat& r1 = src.schema().rel_cat();
    const FinCat& r2 = dst.schema().rel_cat();

    // Relation functor F: R2 -> R1.
    try {
        require_total(data.object_map, r2.objects(), r1.objects(), "relation functor on objects");
    } catch (const TotalityError& e) {
        report.add(e.what());
        return report;
    }
    NameMap arrows = complete_arrow_map(r2, r1, data.object_map, data.arrow_map);
    NameSet r1_arrows;
    NameSet r2_arrows;
    for (const auto& [n, a] : r1.arrows()) r1_arrows.insert(n);
    for (const auto& [n, a] : r2.arrows()) r2_arrows.insert(n);
    try {
        require_total(arrows, r2_arrows, r1_arrows, "relation functor on arrows");
    } catch (const TotalityError& e) {
        report.add(e.what());
        return report;
    }
    for (const auto& [n, a] : r2.arrows()) {
        const Arrow& image = r1.arrow(arrows.at(n));
        if (image.dom != data.object_map.at(a.dom) || image.cod != data.object_map.at(a.cod)) {
            report.add("relation functor does not preserve endpoints of arrow '" + n + "'");
        }
        if (r2.is_identity(n) && !r1.is_identity(arrows.at(n))) {
            report.add("relation functor sends identity '" + n + "' to a non-identity");
        }
    }
    if (!report.ok()) return report;
    for (const auto& c : r2.non_identity_composites()) {
        if (r1.compose(arrows.at(c.first), arrows.at(c.second)) != arrows.at(c.result)) {
            report.add("relation functor does not preserve the composite (" + c.first + ", " +
                       c.second + ")");
        }
    }

    // Infomorphism dst.cls <-> src.cls.
    try {
        report.merge(check_infomorphism(dst.classification(), src.classification(), data.type_map,
                                        data.inst_map),
                     "infomorphism");
    } catch (const TotalityError& e) {
        report.add(std::string("infomorphism: ") + e.what());
        return report;
    }

    // Column and key components.
    bool components_total = true;
    for (const auto& rel2 : r2.objects()) {
        const Name& rel1 = data.object_map.at(rel2);
        auto cols = data.col_maps.find(rel2);
        auto keys = data.key_maps.find(rel2);
        if (cols == data.col_maps.end() || keys == data.key_maps.end()) {
            report.add("missing column or key component at relation '" + rel2 + "'");
            components_total = false;
            continue;
        }
        try {
            report.merge(check_signature_morphism(cols->second, dst.schema().signature(rel2),
                                                  src.schema().signature(rel1), data.type_map),
                         "column component at " + rel2);
            require_total(keys->second, src.keys(rel1), dst.keys(rel2), "key component at " + rel2);
        } catch (const TotalityError& e) {
            report.add(e.what());
            components_total = false;
        }
    }
    if (!components_total) return report;

    // Naturality of both components along p2: a -> b in R2.
    for (const auto& [n, p2] : r2.arrows()) {
        if (r2.is_identity(n)) continue;
        const Name& p1 = arrows.at(n);
        const NameMap& theta_a = data.col_maps.at(p2.dom);
        const NameMap& theta_b = data.col_maps.at(p2.cod);
        const NameMap& s1 = src.schema().sig_morph(p1);
        const NameMap& s2 = dst.schema().sig_morph(n);
        for (const auto& [i, image] : theta_a) {
            const Name& lhs = s1.at(image);
            const Name& rhs = theta_b.at(s2.at(i));
            if (lhs != rhs) {
                report.add("column naturality fails at (arrow " + n + ", column " + i + "): " + lhs +
                           " != " + rhs);
            }
        }
        const NameMap& kappa_a = data.key_maps.at(p2.dom);
        const NameMap& kappa_b = data.key_maps.at(p2.cod);
        const NameMap& k1 = src.key_map(p1);
        const NameMap& k2 = dst.key_map(n);
        for (const auto& [k, image] : kappa_b) {
            const Name& lhs = k2.at(image);
            const Name& rhs = kappa_a.at(k1.at(k));
            if (lhs != rhs) {
                report.add("key naturality fails at (arrow " + n + ", key " + k + "): " + lhs +
                           " != " + rhs);
            }
        }
    }

    // Per-cell condition.
    for (const auto& rel2 : r2.objects()) {
        const Name& rel1 = data.object_map.at(rel2);
        const Table& t1 = src.table(rel1);
        const Table& t2 = dst.table(rel2);
        const NameMap& theta = data.col_maps.at(rel2);
        const NameMap& kappa = data.key_maps.at(rel2);
        for (const auto& [k1, row1] : t1.content()) {
            const Tup& row2 = t2.row(kappa.at(k1));
            for (const auto& [i2, i1] : theta) {
                const Name& expected = apply(data.inst_map, row1.at(i1), "instance map g");
                if (row2.at(i2) != expected) {
                    report.add("cell condition fails at (" + rel2 + ", " + k1 + ", " + i2 + "): " +
                               row2.at(i2) + " != g(" + row1.at(i1) + ") = " + expected);
                }
            }
        }
    }
    return report;
}

DatabaseMorphism DatabaseMorphism::make(DatabasePtr src, DatabasePtr dst, DbMorphismData data) {
    auto report = check_db_morphism(*src, *dst, data);
    if (!report.ok()) {
        throw ValidationError("invalid database morphism", std::move(report));
    }
    data.arrow_map = complete_arrow_map(dst->schema().rel_cat(), src->schema().rel_cat(),
                                        data.object_map, std::move(data.arrow_map));
    DatabaseMorphism m;
    m.src_ = std::move(src);
    m.dst_ = std::move(dst);
    m.data_ = std::move(data);
    return m;
}

DatabaseMorphism DatabaseMorphism::identity(DatabasePtr db) {
    DbMorphismData data;
    const FinCat& cat = db->schema().rel_cat();
    data.object_map = identity_map(cat.objects());
    for (const auto& [n, a] : cat.arrows()) data.arrow_map.emplace(n, n);
    for (const auto& [r, t] : db->tables()) {
        data.col_maps.emplace(r, identity_map(t->signature().arity()));
        data.key_maps.emplace(r, identity_map(t->keys()));
    }
    data.type_map = identity_map(db->classification().types());
    data.inst_map = identity_map(db->classification().instances());
    return make(db, db, std::move(data));
}

bool operator==(const DatabaseMorphism& a, const DatabaseMorphism& b) {
    auto same = [](const DatabasePtr& p, const DatabasePtr& q) { return p == q || *p == *q; };
    return same(a.src_, b.src_) && same(a.dst_, b.dst_) && a.data_ == b.data_;
}

DatabaseMorphism compose_db_morphisms(const DatabaseMorphism& m1, const DatabaseMorphism& m2) {
    if (!(m1.dst_ptr() == m2.src_ptr() || m1.dst() == m2.src())) {
        throw BoundaryMismatchError("database morphisms are not composable");
    }
    const DbMorphismData& d1 = m1.data();
    const DbMorphismData& d2 = m2.data();
    DbMorphismData out;
    out.object_map = compose_maps(d2.object_map, d1.object_map);
    out.arrow_map = compose_maps(d2.arrow_map, d1.arrow_map);
    for (const auto& [rc, theta2] : d2.col_maps) {
        const Name& rb = d2.object_map.at(rc);
        out.col_maps.emplace(rc, compose_maps(theta2, d1.col_maps.at(rb)));
        out.key_maps.emplace(rc, compose_maps(d1.key_maps.at(rb), d2.key_maps.at(rc)));
    }
    out.type_map = compose_maps(d2.type_map, d1.type_map);
    out.inst_map = compose_maps(d1.inst_map, d2.inst_map);
    return DatabaseMorphism::make(m1.src_ptr(), m2.dst_ptr(), std::move(out));
}

// ---------------------------------------------------------------------------

namespace {

/// Types whose extent contains ext(x), i.e. the principal filter of x in the
/// reverse extent order.
NameSet principal_filter(const Classification& cls, const Name& x) {
    NameSet out;
    const NameSet& ext = cls.extent(x);
    for (const auto& other : cls.types()) {
        const NameSet& big = cls.extent(other);
        if (std::includes(big.begin(), big.end(), ext.begin(), ext.end())) out.insert(other);
    }
    return out;
}

}  // namespace

Database db_of_classification(const ClassificationPtr& cls) {
    std::vector<Name> objects(cls->types().begin(), cls->types().end());
    std::vector<std::pair<Name, Name>> order;
    std::map<Name, NameSet> filters;
    for (const auto& x : objects) {
        filters[x] = principal_filter(*cls, x);
        for (const auto& above : filters[x]) {
            if (above != x) order.emplace_back(above, x);
        }
    }
    FinCat rel_cat = preorder_category(objects, order);
    std::map<Name, Signature> sig_at;
    for (const auto& x : objects) {
        sig_at.emplace(x, Signature{identity_map(filters[x]), cls->types()});
    }
    std::map<Name, NameMap> sig_morph;
    std::map<Name, NameMap> key_maps;
    for (const auto& a : rel_cat.non_identity_arrows()) {
        // a: x' -> x with filter(x') inside filter(x) and ext(x) inside ext(x').
        sig_morph.emplace(a.name, identity_map(filters[a.dom]));
        key_maps.emplace(a.name, identity_map(cls->extent(a.cod)));
    }
    auto schema = std::make_shared<const DbSchema>(
        DbSchema::make(rel_cat, cls->types(), std::move(sig_at), sig_morph));
    std::map<Name, std::vector<Name>> key_at;
    std::map<Name, std::map<Name, Tup>> tup_at;
    for (const auto& x : objects) {
        const NameSet& ext = cls->extent(x);
        key_at[x] = std::vector<Name>(ext.begin(), ext.end());
        auto& rows = tup_at[x];
        for (const auto& y : ext) {
            Tup constant;
            for (const auto& column : filters[x]) constant.entries.emplace(column, y);
            rows.emplace(y, std::move(constant));
        }
    }
    return Database::make(std::move(schema), cls, key_at, key_maps, tup_at);
}

DatabaseMorphism db_morphism_of_infomorphism(const Infomorphism& info) {
    auto src = std::make_shared<const Database>(db_of_classification(info.target_ptr()));
    auto dst = std::make_shared<const Database>(db_of_classification(info.source_ptr()));
    const FinCat& r1 = src->schema().rel_cat();
    const FinCat& r2 = dst->schema().rel_cat();
    const NameMap& f = info.type_map();
    DbMorphismData data;
    data.object_map = f;
    for (const auto& a : r2.non_identity_arrows()) {
        const Name& fa = f.at(a.dom);
        const Name& fb = f.at(a.cod);
        auto hom = r1.hom(fa, fb);
        if (hom.empty()) {
            throw InternalError("relation map of an infomorphism is not monotone at '" + a.name + "'");
        }
        data.arrow_map.emplace(a.name, hom.front());
    }
    for (const auto& x2 : r2.objects()) {
        NameMap theta;
        for (const auto& column : dst->schema().signature(x2).arity()) theta.emplace(column, f.at(column));
        data.col_maps.emplace(x2, std::move(theta));
        NameMap kappa;
        for (const auto& y1 : src->keys(f.at(x2))) kappa.emplace(y1, info.inst_map().at(y1));
        data.key_maps.emplace(x2, std::move(kappa));
    }
    data.type_map = f;
    data.inst_map = info.inst_map();
    return DatabaseMorphism::make(std::move(src), std::move(dst), std::move(data));
}

}  // namespace catdb
