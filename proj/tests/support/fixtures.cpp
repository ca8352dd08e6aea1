#include "fixtures.hpp"

namespace catdb::testing {

namespace {

Tup tup(std::map<Name, Name> entries) { return Tup{std::move(entries)}; }

const std::vector<Name> kStrings = {"Plato",  "Aquinus", "Decartes", "Greece",
                                    "Italy",  "France",  "Sales",    "Production"};

TablePtr share(Table t) { return std::make_shared<const Table>(std::move(t)); }

}  // namespace

std::filesystem::path fixture_path(const std::string& name) {
    return std::filesystem::path(CATDB_FIXTURE_DIR) / name;
}

ClassificationPtr company_cls() {
    static const ClassificationPtr cls = [] {
        std::vector<Name> instances = {"e1", "e2", "e3", "d1", "d2"};
        std::vector<std::pair<Name, Name>> holds = {{"e1", "Emp"}, {"e2", "Emp"}, {"e3", "Emp"},
                                                    {"d1", "Dept"}, {"d2", "Dept"}};
        for (const auto& s : kStrings) {
            instances.push_back(s);
            holds.emplace_back(s, "Str");
        }
        return std::make_shared<const Classification>(
            Classification::make({"Emp", "Dept", "Str"}, instances, holds));
    }();
    return cls;
}

Signature emp_sig() {
    return Signature::make({{"name", "Str"}, {"addr", "Str"}, {"dept", "Dept"}}, company_cls()->types());
}

Signature dept_sig() {
    return Signature::make({{"name", "Str"}, {"mngr", "Emp"}}, company_cls()->types());
}

TablePtr emp_table() {
    return share(Table::make(emp_sig(), company_cls(),
                             {{"e1", tup({{"name", "Plato"}, {"addr", "Greece"}, {"dept", "d1"}})},
                              {"e2", tup({{"name", "Aquinus"}, {"addr", "Italy"}, {"dept", "d2"}})},
                              {"e3", tup({{"name", "Decartes"}, {"addr", "France"}, {"dept", "d1"}})}}));
}

TablePtr dept_table() {
    return share(Table::make(dept_sig(), company_cls(),
                             {{"d1", tup({{"name", "Sales"}, {"mngr", "e3"}})},
                              {"d2", tup({{"name", "Production"}, {"mngr", "e2"}})}}));
}

TablePtr str_table() {
    std::vector<std::pair<Name, Tup>> rows;
    for (const auto& s : kStrings) rows.emplace_back(s, Tup{});
    return share(Table::make(Signature::make({}, company_cls()->types()), company_cls(), rows));
}

TablePtr dref_table() {
    return share(Table::make(Signature::make({{"d", "Dept"}}, company_cls()->types()), company_cls(),
                             {{"d1", tup({{"d", "d1"}})}, {"d2", tup({{"d", "d2"}})}}));
}

TablePtr deptself_table() {
    return share(Table::make(
        Signature::make({{"name", "Str"}, {"mngr", "Emp"}, {"d", "Dept"}}, company_cls()->types()),
        company_cls(),
        {{"d1", tup({{"name", "Sales"}, {"mngr", "e3"}, {"d", "d1"}})},
         {"d2", tup({{"name", "Production"}, {"mngr", "e2"}, {"d", "d2"}})}}));
}

TableMorphism emp_to_dref() {
    return TableMorphism::make_fiber(emp_table(), dref_table(), {{"d", "dept"}},
                                     {{"e1", "d1"}, {"e2", "d2"}, {"e3", "d1"}});
}

TableMorphism deptself_to_dref() {
    return TableMorphism::make_fiber(deptself_table(), dref_table(), {{"d", "d"}},
                                     {{"d1", "d1"}, {"d2", "d2"}});
}

TableDiagram span_diagram() {
    FinCat shape = FinCat::make({"Emp", "DeptSelf", "DRef"},
                                {{"p", "Emp", "DRef"}, {"q", "DeptSelf", "DRef"}}, {});
    auto p = emp_to_dref();
    auto q = deptself_to_dref();
    std::map<Name, TablePtr> tables{{"Emp", p.src_ptr()}, {"DeptSelf", q.src_ptr()}, {"DRef", p.dst_ptr()}};
    return TableDiagram::make(std::move(shape), std::move(tables), std::map<Name, TableMorphism>{{"p", p}, {"q", q}});
}

DbSchemaPtr span_schema() {
    FinCat rel = FinCat::make({"Emp", "DeptSelf", "DRef"},
                              {{"p", "DRef", "Emp"}, {"q", "DRef", "DeptSelf"}}, {});
    std::map<Name, Signature> sigs{{"Emp", emp_sig()},
                                   {"DeptSelf", deptself_table()->signature()},
                                   {"DRef", dref_table()->signature()}};
    return std::make_shared<const DbSchema>(DbSchema::make(
        std::move(rel), company_cls()->types(), sigs, {{"p", {{"d", "dept"}}}, {"q", {{"d", "d"}}}}));
}

Database span_database() {
    std::map<Name, std::map<Name, Tup>> rows{{"Emp", emp_table()->content()},
                                             {"DeptSelf", deptself_table()->content()},
                                             {"DRef", dref_table()->content()}};
    return Database::make(span_schema(), company_cls(),
                          {{"Emp", {"e1", "e2", "e3"}}, {"DeptSelf", {"d1", "d2"}}, {"DRef", {"d1", "d2"}}},
                          {{"p", {{"e1", "d1"}, {"e2", "d2"}, {"e3", "d1"}}}, {"q", {{"d1", "d1"}, {"d2", "d2"}}}},
                          rows);
}

Database unified_company_db() {
    auto schema = std::make_shared<const DbSchema>(
        DbSchema::make(discrete_category({"Emp", "Dept", "Str"}), company_cls()->types(),
                       {{"Emp", emp_sig()}, {"Dept", dept_sig()}, {"Str", str_table()->signature()}}, {}));
    std::map<Name, std::vector<Name>> keys;
    std::map<Name, std::map<Name, Tup>> rows;
    for (const auto& [r, t] : std::map<Name, TablePtr>{{"Emp", emp_table()}, {"Dept", dept_table()}, {"Str", str_table()}}) {
        const auto ks = t->keys();
        keys[r] = std::vector<Name>(ks.begin(), ks.end());
        rows[r] = t->content();
    }
    return Database::make(schema, company_cls(), keys, {}, rows);
}

ClassificationPtr ab_cls() {
    return std::make_shared<const Classification>(
        Classification::make({"A", "B"}, {"y1", "y2"}, {{"y1", "A"}, {"y1", "B"}, {"y2", "B"}}));
}

ClassificationPtr person_cls() {
    return std::make_shared<const Classification>(Classification::make({"Person"}, {"p", "q"}, {{"p", "Person"}}));
}

Infomorphism person_info() {
    NameMap g;
    const NameSet employees = company_cls()->extent("Emp");
    for (const auto& y : company_cls()->instances()) g.emplace(y, employees.count(y) ? "p" : "q");
    return Infomorphism::make(person_cls(), company_cls(), {{"Person", "Emp"}}, g);
}

}  // namespace catdb::testing
