#include "catdb/fincat.hpp"

#include <functional>

namespace catdb {

FinCat FinCat::make(const std::vector<Name>& objects, const std::vector<Arrow>& arrows,
                    const std::vector<Composite>& composites) {
    FinCat cat;
    ValidationReport report;
    for (const auto& x : objects) {
        if (!cat.objects_.insert(x).second) {
            report.add("duplicate object '" + x + "'");
        }
    }
    for (const auto& x : cat.objects_) {
        Name id = identity_name(x);
        cat.arrows_.emplace(id, Arrow{id, x, x});
        cat.identities_.emplace(x, id);
    }
    for (const auto& a : arrows) {
        if (!cat.has_object(a.dom) || !cat.has_object(a.cod)) {
            report.add("arrow '" + a.name + "' has undeclared endpoint");
            continue;
        }
        if (!cat.arrows_.emplace(a.name, a).second) {
            report.add("duplicate arrow '" + a.name + "'");
        }
    }
    if (!report.ok()) {
        throw ValidationError("invalid category", std::move(report));
    }
    for (const auto& [name, a] : cat.arrows_) {
        cat.table_[{cat.identities_.at(a.dom), name}] = name;
        cat.table_[{name, cat.identities_.at(a.cod)}] = name;
    }
    for (const auto& c : composites) {
        if (!cat.has_arrow(c.first) || !cat.has_arrow(c.second) || !cat.has_arrow(c.result)) {
            report.add("composite (" + c.first + ", " + c.second + ") = " + c.result +
                       " references an undeclared arrow");
            continue;
        }
        const Arrow& a = cat.arrows_.at(c.first);
        const Arrow& b = cat.arrows_.at(c.second);
        const Arrow& r = cat.arrows_.at(c.result);
        if (a.cod != b.dom) {
            report.add("composite (" + c.first + ", " + c.second + ") of non-composable arrows");
            continue;
        }
        if (r.dom != a.dom || r.cod != b.cod) {
            report.add("composite (" + c.first + ", " + c.second + ") = " + c.result +
                       " has wrong endpoints");
            continue;
        }
        auto [it, inserted] = cat.table_.emplace(std::make_pair(c.first, c.second), c.result);
        if (!inserted && it->second != c.result) {
            report.add("composite (" + c.first + ", " + c.second + ") defined as both " +
                       it->second + " and " + c.result);
        }
    }
    if (!report.ok()) {
        throw ValidationError("invalid category", std::move(report));
    }
    // Closure.
    for (const auto& [an, a] : cat.arrows_) {
        for (const auto& [bn, b] : cat.arrows_) {
            if (a.cod == b.dom && cat.table_.count({an, bn}) == 0) {
                report.add("closure fails: no composite for (" + an + ", " + bn + ")");
            }
        }
    }
    if (!report.ok()) {
        throw ValidationError("invalid category", std::move(report));
    }
    // Associativity over every composable triple.
    for (const auto& [an, a] : cat.arrows_) {
        for (const auto& [bn, b] : cat.arrows_) {
            if (a.cod != b.dom) continue;
            const Name& ab = cat.table_.at({an, bn});
            for (const auto& [cn, c] : cat.arrows_) {
                if (b.cod != c.dom) continue;
                const Name& left = cat.table_.at({ab, cn});
                const Name& right = cat.table_.at({an, cat.table_.at({bn, cn})});
                if (left != right) {
                    report.add("associativity fails at (" + an + ", " + bn + ", " + cn + "): " +
                               left + " != " + right);
                }
            }
        }
    }
    if (!report.ok()) {
        throw ValidationError("invalid category", std::move(report));
    }
    return cat;
}

std::vector<Arrow> FinCat::non_identity_arrows() const {
    std::vector<Arrow> out;
    for (const auto& [name, a] : arrows_) {
        if (!is_identity(name)) out.push_back(a);
    }
    return out;
}

std::vector<Composite> FinCat::non_identity_composites() const {
    std::vector<Composite> out;
    for (const auto& [pair, result] : table_) {
        if (!is_identity(pair.first) && !is_identity(pair.second)) {
            out.push_back({pair.first, pair.second, result});
        }
    }
    return out;
}

const Arrow& FinCat::arrow(const Name& a) const {
    auto it = arrows_.find(a);
    if (it == arrows_.end()) {
        throw UnknownNameError("unknown arrow '" + a + "'");
    }
    return it->second;
}

const Name& FinCat::identity(const Name& x) const {
    auto it = identities_.find(x);
    if (it == identities_.end()) {
        throw UnknownNameError("unknown object '" + x + "'");
    }
    return it->second;
}

bool FinCat::is_identity(const Name& a) const {
    const Arrow& arr = arrow(a);
    return identities_.at(arr.dom) == a;
}

const Name& FinCat::compose(const Name& a, const Name& b) const {
    auto it = table_.find({a, b});
    if (it == table_.end()) {
        arrow(a);
        arrow(b);
        throw BoundaryMismatchError("arrows '" + a + "' and '" + b + "' are not composable");
    }
    return it->second;
}

std::vector<Name> FinCat::hom(const Name& x, const Name& y) const {
    std::vector<Name> out;
    for (const auto& [name, a] : arrows_) {
        if (a.dom == x && a.cod == y) out.push_back(name);
    }
    return out;
}

// ---------------------------------------------------------------------------

FinCat terminal_category(const Name& object) { return FinCat::make({object}, {}, {}); }

FinCat discrete_category(const std::vector<Name>& objects) {
    return FinCat::make(objects, {}, {});
}

FinCat free_category(const std::vector<Name>& objects, const std::vector<Arrow>& edges) {
    // Paths as sequences of edge indices.
    std::map<Name, std::vector<std::size_t>> out_edges;
    for (std::size_t e = 0; e < edges.size(); ++e) {
        out_edges[edges[e].dom].push_back(e);
    }
    // Cycle check by DFS colouring.
    std::map<Name, int> colour;
    std::function<bool(const Name&)> has_cycle = [&](const Name& v) {
        colour[v] = 1;
        for (std::size_t e : out_edges[v]) {
            const Name& w = edges[e].cod;
            if (colour[w] == 1 || (colour[w] == 0 && has_cycle(w))) return true;
        }
        colour[v] = 2;
        return false;
    };
    for (const auto& v : objects) {
        if (colour[v] == 0 && has_cycle(v)) {
            ValidationReport report;
            report.add("graph has a cycle through '" + v + "'");
            throw ValidationError("free category needs an acyclic graph", std::move(report));
        }
    }
    std::vector<std::vector<std::size_t>> paths;
    std::function<void(std::vector<std::size_t>&)> extend = [&](std::vector<std::size_t>& path) {
        paths.push_back(path);
        for (std::size_t e : out_edges[edges[path.back()].cod]) {
            path.push_back(e);
            extend(path);
            path.pop_back();
        }
    };
    for (std::size_t e = 0; e < edges.size(); ++e) {
        std::vector<std::size_t> path{e};
        extend(path);
    }
    auto path_name = [&](const std::vector<std::size_t>& path) {
        Name n;
        for (std::size_t e : path) {
            if (!n.empty()) n += ";";
            n += edges[e].name;
        }
        return n;
    };
    std::vector<Arrow> arrows;
    std::map<std::vector<std::size_t>, Name> names;
    for (const auto& p : paths) {
        Name n = path_name(p);
        names[p] = n;
        arrows.push_back({n, edges[p.front()].dom, edges[p.back()].cod});
    }
    std::vector<Composite> composites;
    for (const auto& p : paths) {
        for (const auto& q : paths) {
            if (edges[p.back()].cod != edges[q.front()].dom) continue;
            std::vector<std::size_t> pq = p;
            pq.insert(pq.end(), q.begin(), q.end());
            composites.push_back({names.at(p), names.at(q), names.at(pq)});
        }
    }
    return FinCat::make(objects, arrows, composites);
}

FinCat preorder_category(const std::vector<Name>& objects,
                         const std::vector<std::pair<Name, Name>>& order) {
    std::map<Name, NameSet> reach;
    for (const auto& x : objects) reach[x].insert(x);
    for (const auto& [a, b] : order) reach[a].insert(b);
    // Warshall closure.
    for (const auto& k : objects) {
        for (const auto& i : objects) {
            if (reach[i].count(k) == 0) continue;
            for (const auto& j : reach[k]) reach[i].insert(j);
        }
    }
    auto name = [](const Name& a, const Name& b) { return a + "->" + b; };
    std::vector<Arrow> arrows;
    for (const auto& a : objects) {
        for (const auto& b : reach[a]) {
            if (a != b) arrows.push_back({name(a, b), a, b});
        }
    }
    std::vector<Composite> composites;
    for (const auto& f : arrows) {
        for (const auto& g : arrows) {
            if (f.cod != g.dom) continue;
            Name result = f.dom == g.cod ? FinCat::identity_name(f.dom) : name(f.dom, g.cod);
            composites.push_back({f.name, g.name, result});
        }
    }
    return FinCat::make(objects, arrows, composites);
}

FinCat opposite(const FinCat& cat) {
    std::vector<Name> objects(cat.objects().begin(), cat.objects().end());
    std::vector<Arrow> arrows;
    for (const auto& a : cat.non_identity_arrows()) {
        arrows.push_back({a.name, a.cod, a.dom});
    }
    std::vector<Composite> composites;
    for (const auto& c : cat.non_identity_composites()) {
        composites.push_back({c.second, c.first, c.result});
    }
    return FinCat::make(objects, arrows, composites);
}

// ---------------------------------------------------------------------------

FiberMaps fiber_maps(const TableMorphism& m) { return {m.col_map(), m.key_map()}; }

FiberMaps compose_fiber(const FiberMaps& first, const FiberMaps& second) {
    return {compose_maps(second.col_map, first.col_map),
            compose_maps(first.key_map, second.key_map)};
}

ValidationReport check_fiber_morphism(const Table& src, const Table& dst, const FiberMaps& maps) {
    ValidationReport report;
    if (!(src.classification() == dst.classification())) {
        report.add("tables are over different classifications");
        return report;
    }
    try {
        const NameMap types = identity_map(src.classification().types());
        const NameMap insts = identity_map(src.classification().instances());
        report.merge(check_table_morphism(src, dst, maps.col_map, types, insts, maps.key_map));
    } catch (const Error& e) {
        report.add(e.what());
    }
    return report;
}

namespace {

void check_fiber(const Table& src, const Table& dst, const FiberMaps& maps,
                 const std::string& label, ValidationReport& report) {
    report.merge(check_fiber_morphism(src, dst, maps), label);
}

}  // namespace

TableDiagram TableDiagram::make(FinCat shape, std::map<Name, TablePtr> tables,
                                const std::map<Name, FiberMaps>& morphisms,
                                ClassificationPtr cls) {
    ValidationReport report;
    for (const auto& x : shape.objects()) {
        if (tables.count(x) == 0) report.add("object '" + x + "' has no table");
    }
    for (const auto& [x, t] : tables) {
        if (!shape.has_object(x)) report.add("table assigned to unknown object '" + x + "'");
    }
    for (const auto& [a, maps] : morphisms) {
        if (!shape.has_arrow(a)) report.add("morphism assigned to unknown arrow '" + a + "'");
    }
    if (!report.ok()) {
        throw ValidationError("invalid diagram", std::move(report));
    }
    if (!cls) {
        if (tables.empty()) {
            throw BoundaryMismatchError("an empty diagram needs an explicit classification");
        }
        cls = tables.begin()->second->classification_ptr();
    }
    for (const auto& [x, t] : tables) {
        if (!(t->classification() == *cls)) {
            report.add("table at '" + x + "' is over a different classification");
        }
    }
    if (!report.ok()) {
        throw ValidationError("invalid diagram", std::move(report));
    }

    std::map<Name, FiberMaps> all = morphisms;
    for (const auto& x : shape.objects()) {
        const Table& t = *tables.at(x);
        FiberMaps id{identity_map(t.signature().arity()), identity_map(t.keys())};
        auto [it, inserted] = all.emplace(shape.identity(x), id);
        if (!inserted && !(it->second == id)) {
            report.add("functor law fails: identity arrow of '" + x + "' is not sent to the identity");
        }
    }
    // Derive composites from their components until nothing changes.
    const auto composites = shape.non_identity_composites();
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& c : composites) {
            if (all.count(c.result) || !all.count(c.first) || !all.count(c.second)) continue;
            try {
                all.emplace(c.result, compose_fiber(all.at(c.first), all.at(c.second)));
                changed = true;
            } catch (const TotalityError&) {
                // Reported by the per-arrow check of the components.
            }
        }
    }
    for (const auto& [name, a] : shape.arrows()) {
        auto it = all.find(name);
        if (it == all.end()) {
            report.add("arrow '" + name + "' has no morphism");
            continue;
        }
        check_fiber(*tables.at(a.dom), *tables.at(a.cod), it->second,
                    "arrow " + name + ": " + a.dom + " -> " + a.cod, report);
    }
    if (!report.ok()) {
        throw ValidationError("invalid diagram", std::move(report));
    }
    for (const auto& c : composites) {
        FiberMaps composed = compose_fiber(all.at(c.first), all.at(c.second));
        if (!(composed == all.at(c.result))) {
            report.add("functor law fails: image of " + c.result + " differs from the composite of " +
                       c.first + " then " + c.second);
        }
    }
    if (!report.ok()) {
        throw ValidationError("invalid diagram", std::move(report));
    }

    TableDiagram d;
    for (const auto& [name, a] : shape.arrows()) {
        const FiberMaps& maps = all.at(name);
        d.morphisms_.emplace(name, TableMorphism::make_fiber(tables.at(a.dom), tables.at(a.cod),
                                                             maps.col_map, maps.key_map));
    }
    d.shape_ = std::move(shape);
    d.tables_ = std::move(tables);
    d.cls_ = std::move(cls);
    return d;
}

TableDiagram TableDiagram::make(FinCat shape, std::map<Name, TablePtr> tables,
                                const std::map<Name, TableMorphism>& morphisms,
                                ClassificationPtr cls) {
    std::map<Name, FiberMaps> maps;
    ValidationReport report;
    for (const auto& [a, m] : morphisms) {
        if (!shape.has_arrow(a)) {
            report.add("morphism assigned to unknown arrow '" + a + "'");
            continue;
        }
        const Arrow& arr = shape.arrow(a);
        auto src = tables.find(arr.dom);
        auto dst = tables.find(arr.cod);
        if (src == tables.end() || dst == tables.end() || !same_table(m.src_ptr(), src->second) ||
            !same_table(m.dst_ptr(), dst->second)) {
            report.add("morphism at arrow '" + a + "' does not run between its endpoint tables");
        }
        if (!m.info().is_identity()) {
            report.add("morphism at arrow '" + a + "' has a non-identity infomorphism");
        }
        maps.emplace(a, fiber_maps(m));
    }
    if (!report.ok()) {
        throw ValidationError("invalid diagram", std::move(report));
    }
    return make(std::move(shape), std::move(tables), maps, std::move(cls));
}

const Table& TableDiagram::table(const Name& object) const { return *table_ptr(object); }

const TablePtr& TableDiagram::table_ptr(const Name& object) const {
    auto it = tables_.find(object);
    if (it == tables_.end()) {
        throw UnknownNameError("diagram has no object '" + object + "'");
    }
    return it->second;
}

const TableMorphism& TableDiagram::morphism(const Name& arrow) const {
    auto it = morphisms_.find(arrow);
    if (it == morphisms_.end()) {
        throw UnknownNameError("diagram has no arrow '" + arrow + "'");
    }
    return it->second;
}

TableDiagram make_diagram(FinCat shape, std::map<Name, TablePtr> tables,
                          const std::map<Name, FiberMaps>& morphisms, ClassificationPtr cls) {
    return TableDiagram::make(std::move(shape), std::move(tables), morphisms, std::move(cls));
}

ValidationReport check_cone(const TableDiagram& diagram, const Cone& cone) {
    ValidationReport report;
    if (!cone.apex) {
        report.add("cone has no apex");
        return report;
    }
    if (!(cone.apex->classification() == *diagram.classification_ptr())) {
        report.add("apex is over a different classification");
        return report;
    }
    for (const auto& x : diagram.shape().objects()) {
        auto it = cone.legs.find(x);
        if (it == cone.legs.end()) {
            report.add("cone has no leg at '" + x + "'");
            continue;
        }
        check_fiber(*cone.apex, diagram.table(x), it->second, "leg " + x, report);
    }
    for (const auto& [x, leg] : cone.legs) {
        if (!diagram.shape().has_object(x)) report.add("cone leg at unknown object '" + x + "'");
    }
    if (!report.ok()) {
        return report;
    }
    for (const auto& [name, a] : diagram.shape().arrows()) {
        const FiberMaps& from = cone.legs.at(a.dom);
        const FiberMaps& to = cone.legs.at(a.cod);
        FiberMaps composed = compose_fiber(from, fiber_maps(diagram.morphism(name)));
        if (composed.key_map != to.key_map) {
            for (const auto& [k, v] : composed.key_map) {
                if (to.key_map.at(k) != v) {
                    report.add("triangle at arrow " + name + " fails on key '" + k + "': " + v +
                               " != " + to.key_map.at(k));
                }
            }
        }
        if (composed.col_map != to.col_map) {
            for (const auto& [i, v] : composed.col_map) {
                if (to.col_map.at(i) != v) {
                    report.add("triangle at arrow " + name + " fails on column '" + i + "': " + v +
                               " != " + to.col_map.at(i));
                }
            }
        }
    }
    return report;
}

}  // namespace catdb
