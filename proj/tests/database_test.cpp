#include <gtest/gtest.h>

#include "catdb/database.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

namespace catdb {
namespace {

using namespace catdb::testing;

DatabasePtr share(Database db) { return std::make_shared<const Database>(std::move(db)); }

DbSchemaPtr single_schema(const Signature& sig) {
    return std::make_shared<const DbSchema>(DbSchema::make(terminal_category("Emp"), sig.universe, {{"Emp", sig}}, {}));
}

TEST(DbSchema, SingleRelationOverTheTerminalShape) {
    auto s = single_schema(emp_sig());
    EXPECT_EQ(s->signature("Emp"), emp_sig());
    EXPECT_EQ(s->sig_morph(FinCat::identity_name("Emp")), identity_map(emp_sig().arity()));
}

TEST(DbSchema, CompanySpanIsValid) {
    auto s = span_schema();
    EXPECT_EQ(s->sig_morph("p"), (NameMap{{"d", "dept"}}));
    EXPECT_EQ(s->rel_cat().arrow("q").dom, "DRef");
}

TEST(DbSchema, ArrowToAStringColumnIsASortFailure) {
    FinCat rel = FinCat::make({"Emp", "DRef"}, {{"p", "DRef", "Emp"}}, {});
    try {
        DbSchema::make(rel, company_cls()->types(), {{"Emp", emp_sig()}, {"DRef", dref_table()->signature()}},
                       {{"p", {{"d", "name"}}}});
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_NE(e.report().str().find("arrow p"), std::string::npos) << e.report().str();
    }
}

// ---------------------------------------------------------------------------

TEST(ReferenceSchema, SingleRelationIsItsSignature) {
    auto ref = reference_schema(*single_schema(emp_sig()));
    EXPECT_EQ(ref.signature.arity().size(), 3u);
    for (const auto& [c, merged] : ref.injections.at("Emp")) EXPECT_EQ(ref.signature.sort(merged), emp_sig().sort(c));
}

TEST(ReferenceSchema, CompanySpanMergesTheDepartmentColumns) {
    auto s = span_schema();
    auto ref = reference_schema(*s);
    EXPECT_EQ(ref.signature.arity().size(), 5u);
    const auto& inj = ref.injections;
    EXPECT_EQ(inj.at("Emp").at("dept"), inj.at("DRef").at("d"));
    EXPECT_EQ(inj.at("DeptSelf").at("d"), inj.at("DRef").at("d"));
    EXPECT_NE(inj.at("Emp").at("name"), inj.at("DeptSelf").at("name"));
    // Oracle: the classes of the join's column equivalence, read off the diagram.
    auto classes = connected_column_classes(db_to_diagram(span_database()));
    EXPECT_EQ(classes.size(), 5u);
}

TEST(ReferenceSchema, DiscreteSchemaIsTheDisjointUnion) {
    auto s = DbSchema::make(discrete_category({"Emp", "Dept"}), company_cls()->types(),
                            {{"Emp", emp_sig()}, {"Dept", dept_sig()}}, {});
    EXPECT_EQ(reference_schema(s).signature.arity().size(), 5u);
}

// ---------------------------------------------------------------------------

TEST(Database, CompanySpanIsValid) {
    Database db = span_database();
    EXPECT_EQ(db.key_map("p"), (NameMap{{"e1", "d1"}, {"e2", "d2"}, {"e3", "d1"}}));
    EXPECT_EQ(db.keys("DRef"), (NameSet{"d1", "d2"}));
}

TEST(Database, SingleTable) {
    Database db = database_of_table(emp_table(), "Emp");
    EXPECT_EQ(db.table("Emp"), *emp_table());
}

TEST(Database, BrokenKeyMapIsANaturalityViolation) {
    auto rows = std::map<Name, std::map<Name, Tup>>{{"Emp", emp_table()->content()},
                                                    {"DeptSelf", deptself_table()->content()},
                                                    {"DRef", dref_table()->content()}};
    try {
        Database::make(span_schema(), company_cls(),
                       {{"Emp", {"e1", "e2", "e3"}}, {"DeptSelf", {"d1", "d2"}}, {"DRef", {"d1", "d2"}}},
                       {{"p", {{"e1", "d1"}, {"e2", "d1"}, {"e3", "d1"}}}, {"q", {{"d1", "d1"}, {"d2", "d2"}}}}, rows);
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        ASSERT_EQ(e.report().issues.size(), 1u);
        EXPECT_EQ(e.report().issues[0], "naturality fails at (arrow p: DRef -> Emp, key e2, column d): d1 != d2");
    }
}

TEST(Database, InvalidRowIsPrefixedWithItsRelation) {
    auto rows = std::map<Name, std::map<Name, Tup>>{{"Emp", emp_table()->content()}};
    rows["Emp"]["e1"].entries["dept"] = "Greece";
    EXPECT_THROW(Database::make(single_schema(emp_sig()), company_cls(), {{"Emp", {"e1", "e2", "e3"}}}, {}, rows),
                 ValidationError);
}

// ---------------------------------------------------------------------------

TEST(DbToDiagram, SingleTableGivesTheTerminalShape) {
    auto d = db_to_diagram(database_of_table(emp_table(), "Emp"));
    EXPECT_EQ(d.shape().objects(), NameSet{"Emp"});
    EXPECT_EQ(d.shape().arrows().size(), 1u);
}

TEST(DbToDiagram, CompanySpanUnfoldsToTheSpanDiagram) {
    auto d = db_to_diagram(span_database());
    auto expected = span_diagram();
    EXPECT_EQ(d.shape().arrow("p"), (Arrow{"p", "Emp", "DRef"}));
    EXPECT_EQ(d.morphism("p"), expected.morphism("p"));
    EXPECT_EQ(d.morphism("q"), expected.morphism("q"));
}

TEST(DbToDiagram, AbClassificationGivesOneArrow) {
    auto d = db_to_diagram(db_of_classification(ab_cls()));
    auto arrows = d.shape().non_identity_arrows();
    ASSERT_EQ(arrows.size(), 1u);
    EXPECT_EQ(arrows[0], (Arrow{"B->A", "A", "B"}));
}

// ---------------------------------------------------------------------------

TEST(Join, SingleTableIsItself) {
    EXPECT_TRUE(tables_isomorphic(*join(database_of_table(emp_table())).table, *emp_table()).has_value());
}

TEST(Join, CompanySpanHasThreeRowsAndFiveColumns) {
    auto j = join(span_database());
    EXPECT_EQ(j.table->keys(), (NameSet{"⟨d1,d1,e1⟩", "⟨d1,d1,e3⟩", "⟨d2,d2,e2⟩"}));
    EXPECT_EQ(j.table->signature().arity().size(), 5u);
    auto pairs = nested_loop_join(*emp_table(), "dept", *deptself_table(), "d");
    for (const auto& [e, d] : pairs) {
        const Tup& row = j.table->row(encode_family({d, d, e}));
        EXPECT_EQ(row.at("Emp.name"), emp_table()->cell(e, "name"));
        EXPECT_EQ(row.at("DeptSelf.mngr"), deptself_table()->cell(d, "mngr"));
        EXPECT_EQ(row.at("DRef.d"), d);
    }
}

TEST(Join, EmptyTablesGiveAnEmptyJoin) {
    Database db = Database::make(span_schema(), company_cls(), {{"Emp", {}}, {"DeptSelf", {}}, {"DRef", {}}},
                                 {{"p", {}}, {"q", {}}}, {{"Emp", {}}, {"DeptSelf", {}}, {"DRef", {}}});
    EXPECT_EQ(join(db).table->size(), 0u);
}

TEST(Join, SignatureMatchesTheReferenceSchema) {
    Database db = span_database();
    auto j = join(db);
    auto ref = reference_schema(db.schema());
    // Merged classes correspond: each relation column lands in a join column
    // of the same sort, and the correspondence is a bijection.
    std::map<Name, Name> ref_to_join;
    for (const auto& [r, inj] : ref.injections) {
        for (const auto& [c, merged] : inj) {
            const Name& jc = j.projections.at(r).col_map().at(c);
            auto [it, fresh] = ref_to_join.emplace(merged, jc);
            EXPECT_EQ(it->second, jc);
            EXPECT_EQ(ref.signature.sort(merged), j.table->signature().sort(jc));
        }
    }
    EXPECT_EQ(ref_to_join.size(), j.table->signature().arity().size());
}

// ---------------------------------------------------------------------------

TEST(CheckDbMorphism, IdentityOnCompanySpan) {
    auto db = share(span_database());
    auto id = DatabaseMorphism::identity(db);
    EXPECT_TRUE(check_db_morphism(*db, *db, id.data()).ok());
}

TEST(CheckDbMorphism, SingleTableDatabasesAgreeWithTableMorphisms) {
    auto src = share(database_of_table(emp_table()));
    auto dst = share(database_of_table(dref_table()));
    auto cls = company_cls();
    const Name id = FinCat::identity_name("*");
    DbMorphismData data{{{"*", "*"}},
                        {{id, id}},
                        {{"*", {{"d", "dept"}}}},
                        identity_map(cls->types()),
                        identity_map(cls->instances()),
                        {{"*", {{"e1", "d1"}, {"e2", "d2"}, {"e3", "d1"}}}}};
    EXPECT_TRUE(check_db_morphism(*src, *dst, data).ok());
    EXPECT_TRUE(check_table_morphism(*emp_table(), *dref_table(), {{"d", "dept"}}, data.type_map, data.inst_map,
                                     data.key_maps.at("*"))
                    .ok());
    data.key_maps.at("*").at("e2") = "d1";
    auto report = check_db_morphism(*src, *dst, data);
    EXPECT_FALSE(report.ok());
    EXPECT_FALSE(check_table_morphism(*emp_table(), *dref_table(), {{"d", "dept"}}, data.type_map, data.inst_map,
                                      data.key_maps.at("*"))
                     .ok());
}

TEST(CheckDbMorphism, BrokenKeyComponentNamesTheCell) {
    auto src = share(database_of_table(emp_table()));
    auto dst = share(database_of_table(dref_table()));
    auto cls = company_cls();
    DbMorphismData data{{{"*", "*"}}, {}, {{"*", {{"d", "dept"}}}}, identity_map(cls->types()),
                        identity_map(cls->instances()), {{"*", {{"e1", "d1"}, {"e2", "d1"}, {"e3", "d1"}}}}};
    auto report = check_db_morphism(*src, *dst, data);
    ASSERT_EQ(report.issues.size(), 1u);
    EXPECT_EQ(report.issues[0].rfind("cell condition fails at (*, e2, d)", 0), 0u) << report.issues[0];
    EXPECT_THROW(DatabaseMorphism::make(src, dst, data), ValidationError);
}

// ---------------------------------------------------------------------------

TEST(ComposeDb, IdentityLaws) {
    auto db = share(span_database());
    auto id = DatabaseMorphism::identity(db);
    EXPECT_EQ(compose_db_morphisms(id, id), id);
    auto m = db_morphism_of_infomorphism(person_info());
    EXPECT_EQ(compose_db_morphisms(m, DatabaseMorphism::identity(m.dst_ptr())), m);
    EXPECT_EQ(compose_db_morphisms(DatabaseMorphism::identity(m.src_ptr()), m), m);
}

TEST(ComposeDb, CompositeOfInfomorphismMorphismsIsValid) {
    // E3 -> E2 -> E1 with E1 = Person, E2 = E3 = AB-like single type.
    auto one = std::make_shared<const Classification>(Classification::make({"T"}, {"t", "u"}, {{"t", "T"}}));
    auto inner = Infomorphism::make(one, person_cls(), {{"T", "Person"}}, {{"p", "t"}, {"q", "u"}});
    auto m1 = db_morphism_of_infomorphism(person_info());  // db(company) -> db(person)
    auto m2 = db_morphism_of_infomorphism(inner);          // db(person) -> db(one)
    auto m = compose_db_morphisms(m1, m2);
    EXPECT_TRUE(check_db_morphism(m.src(), m.dst(), m.data()).ok());
    EXPECT_EQ(m, db_morphism_of_infomorphism(compose_infomorphisms(inner, person_info())));
}

TEST(ComposeDb, MismatchedBoundariesThrow) {
    auto m = db_morphism_of_infomorphism(person_info());
    EXPECT_THROW(compose_db_morphisms(m, m), BoundaryMismatchError);
}

// ---------------------------------------------------------------------------

TEST(DbOfClassification, AbFixture) {
    Database db = db_of_classification(ab_cls());
    EXPECT_EQ(db.schema().rel_cat().arrow("B->A"), (Arrow{"B->A", "B", "A"}));
    EXPECT_EQ(db.schema().signature("A").arity(), (NameSet{"A", "B"}));
    EXPECT_EQ(db.schema().signature("B").arity(), (NameSet{"B"}));
    EXPECT_EQ(db.keys("A"), NameSet{"y1"});
    EXPECT_EQ(db.keys("B"), (NameSet{"y1", "y2"}));
    EXPECT_EQ(db.table("A").row("y1"), (Tup{{{"A", "y1"}, {"B", "y1"}}}));
}

TEST(DbOfClassification, DistinctExtentsGiveADiscreteCategory) {
    auto cls = std::make_shared<const Classification>(
        Classification::make({"a", "b"}, {"x", "y"}, {{"x", "a"}, {"y", "b"}}));
    Database db = db_of_classification(cls);
    EXPECT_TRUE(db.schema().rel_cat().non_identity_arrows().empty());
    EXPECT_EQ(db.table("a").signature().arity(), NameSet{"a"});
    EXPECT_EQ(db.table("a").row("x"), (Tup{{{"a", "x"}}}));
}

TEST(DbOfClassification, EmptyClassificationIsAnEmptyDatabase) {
    auto cls = std::make_shared<const Classification>(Classification::make({}, {}, {}));
    Database db = db_of_classification(cls);
    EXPECT_TRUE(db.tables().empty());
    EXPECT_EQ(join(db).table->size(), 1u);  // the terminal table
}

TEST(DbOfClassification, RowsAreConstant) {
    Database db = db_of_classification(company_cls());
    for (const auto& [r, t] : db.tables()) {
        for (const auto& [k, row] : t->content()) {
            for (const auto& [c, v] : row.entries) EXPECT_EQ(v, k) << r;
        }
    }
}

// ---------------------------------------------------------------------------

TEST(DbMorphismOfInfomorphism, IdentityGivesTheIdentity) {
    auto m = db_morphism_of_infomorphism(Infomorphism::identity(ab_cls()));
    EXPECT_EQ(m, DatabaseMorphism::identity(m.src_ptr()));
}

TEST(DbMorphismOfInfomorphism, PersonKeyComponentIsGOnEmployees) {
    auto m = db_morphism_of_infomorphism(person_info());
    EXPECT_EQ(m.data().object_map, (NameMap{{"Person", "Emp"}}));
    EXPECT_EQ(m.data().key_maps.at("Person"), (NameMap{{"e1", "p"}, {"e2", "p"}, {"e3", "p"}}));
    EXPECT_TRUE(check_db_morphism(m.src(), m.dst(), m.data()).ok());
}

TEST(DbMorphismOfInfomorphism, BothTransportPathsAgree) {
    Infomorphism info = person_info();
    auto m = db_morphism_of_infomorphism(info);
    const NameMap& f = info.type_map();
    const NameMap& g = info.inst_map();
    for (const auto& x2 : info.source().types()) {
        for (const auto& y1 : info.target().extent(f.at(x2))) {
            // Constant tuple on the filter of x2 with value g(y1).
            Tup first;
            for (const auto& c : m.dst().schema().signature(x2).arity()) first.entries.emplace(c, g.at(y1));
            // Constant tuple on the filter of f(x2), restricted along f, then g.
            Tup second = tuple_transport(m.src().table(f.at(x2)).row(y1), m.data().col_maps.at(x2), g);
            EXPECT_EQ(first, second) << x2 << " " << y1;
            EXPECT_EQ(m.dst().table(x2).row(m.data().key_maps.at(x2).at(y1)), first);
        }
    }
}

}  // namespace
}  // namespace catdb
