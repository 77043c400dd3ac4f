use super::model::{IlpModel, Sense, Var};
use std::fmt::Write;

const TERMS_PER_LINE: usize = 8;

fn write_terms(out: &mut String, label: &str, terms: &[(Var, f64)]) {
    let _ = write!(out, " {label}:");
    for (k, &(v, c)) in terms.iter().enumerate() {
        if k > 0 && k % TERMS_PER_LINE == 0 {
            out.push_str("\n   ");
        }
        let sign = if c < 0.0 { '-' } else { '+' };
        if k == 0 && sign == '+' {
            let _ = write!(out, " {} {v}", c.abs());
        } else {
            let _ = write!(out, " {sign} {} {v}", c.abs());
        }
    }
}

/// CPLEX LP text. Numbers use the shortest round-trip representation, so
/// identical models give identical bytes.
pub fn write_lp_file(m: &IlpModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "\\ vertex-restricted aggregation, alpha = {}", m.alpha);
    let _ = writeln!(out, "\\ constant offset = {}", m.constant_offset);
    out.push_str("Minimize\n");
    write_terms(&mut out, "obj", &m.objective);
    out.push('\n');
    out.push_str("Subject To\n");
    for c in &m.constraints {
        write_terms(&mut out, &c.name, &c.terms);
        let op = match c.sense {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        };
        let _ = writeln!(out, " {op} {}", c.rhs);
    }
    out.push_str("Binary\n");
    for chunk in m.variables.chunks(TERMS_PER_LINE) {
        out.push(' ');
        out.push_str(&chunk.iter().map(Var::to_string).collect::<Vec<_>>().join(" "));
        out.push('\n');
    }
    out.push_str("End\n");
    out
}
