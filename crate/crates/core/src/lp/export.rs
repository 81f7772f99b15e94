//! Free-format MPS export for cross-checking with external solvers.

use std::fmt::Write;

use super::{LpModel, Relation, VarTag};
use crate::num::{to_f64, Rat};

fn column_name(tag: &VarTag) -> String {
    match *tag {
        VarTag::Facility(u) => format!("z_{u}"),
        VarTag::Edge { facility, client, day } => format!("y_{facility}_{client}_{day}"),
        VarTag::Assign { facility, client, day, deadline } => {
            format!("a_{facility}_{client}_{day}_{deadline}")
        }
        VarTag::Serve { client, day, deadline } => format!("x_{client}_{day}_{deadline}"),
        VarTag::Trips(s) => format!("k_{s}"),
        VarTag::Deliver { day, demand } => format!("q_{day}_{demand}"),
        VarTag::Free(j) => format!("c_{j}"),
    }
}

/// 15 significant digits, printed in the shortest form that round-trips.
fn number(value: &Rat) -> String {
    let rounded: f64 = format!("{:.14e}", to_f64(value)).parse().expect("float literal");
    format!("{rounded}")
}

/// Renders the model as free MPS (NAME, ROWS, COLUMNS, RHS, ENDATA).
/// Coefficients are decimal approximations of the exact rationals.
pub fn export_mps(model: &LpModel) -> String {
    let mut out = String::new();
    out.push_str("* approximate export: rationals rounded to 15 significant digits\n");
    out.push_str("NAME irpfl\nROWS\n N obj\n");
    let rows: Vec<String> = model
        .constraints()
        .iter()
        .enumerate()
        .map(|(i, c)| format!("{}_{i}", c.family.label()))
        .collect();
    for (c, name) in model.constraints().iter().zip(&rows) {
        let kind = match c.relation {
            Relation::Ge => "G",
            Relation::Le => "L",
            Relation::Eq => "E",
        };
        writeln!(out, " {kind} {name}").unwrap();
    }

    let mut by_column: Vec<Vec<(usize, &Rat)>> = vec![Vec::new(); model.num_vars()];
    for (i, c) in model.constraints().iter().enumerate() {
        for (j, a) in &c.terms {
            by_column[*j].push((i, a));
        }
    }
    out.push_str("COLUMNS\n");
    for (j, tag) in model.tags().iter().enumerate() {
        let name = column_name(tag);
        writeln!(out, " {name} obj {}", number(&model.objective()[j])).unwrap();
        for (i, a) in &by_column[j] {
            writeln!(out, " {name} {} {}", rows[*i], number(a)).unwrap();
        }
    }
    out.push_str("RHS\n");
    for (c, name) in model.constraints().iter().zip(&rows) {
        if c.rhs != Rat::from_integer(0.into()) {
            writeln!(out, " rhs {name} {}", number(&c.rhs)).unwrap();
        }
    }
    out.push_str("ENDATA\n");
    out
}
