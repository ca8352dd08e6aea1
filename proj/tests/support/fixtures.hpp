#pragma once

// Company data and small classifications, built directly through the
// library API so module tests do not depend on the DSL.

#include <filesystem>
#include <string>

#include "catdb/database.hpp"

namespace catdb::testing {

std::filesystem::path fixture_path(const std::string& name);

ClassificationPtr company_cls();
Signature emp_sig();
Signature dept_sig();
TablePtr emp_table();
TablePtr dept_table();
/// Zero columns, one key per string.
TablePtr str_table();
/// d:Dept, keys d1, d2, rows d_i -> (d=d_i).
TablePtr dref_table();
/// Dept plus the self reference d:Dept.
TablePtr deptself_table();

/// Emp -> DRef sending each employee to its department.
TableMorphism emp_to_dref();
/// DeptSelf -> DRef on the d column.
TableMorphism deptself_to_dref();

/// Shape objects Emp, DeptSelf, DRef with arrows p: Emp -> DRef and
/// q: DeptSelf -> DRef.
TableDiagram span_diagram();

/// Relation arrows p: DRef -> Emp and q: DRef -> DeptSelf.
DbSchemaPtr span_schema();
Database span_database();

/// Relations Emp, Dept, Str over the company classification.
Database unified_company_db();

/// X = {A, B}, Y = {y1, y2}, y1 |= A, y1 |= B, y2 |= B.
ClassificationPtr ab_cls();

/// X = {Person}, Y = {p, q}, p |= Person.
ClassificationPtr person_cls();
/// Person <-> company: f(Person) = Emp, g(e_i) = p, g(anything else) = q.
Infomorphism person_info();

}  // namespace catdb::testing
