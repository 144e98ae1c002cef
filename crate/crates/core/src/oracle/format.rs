//! Plain-text LP exchange format.
//!
//! ```text
//! lp thermocat/1
//! variables w1 w2 t1 t2
//! minimize 1/2 t1 1/2 t2
//! abs_pos_1: 1 t1 -1 w1 >= 0
//! norm_w: 1 w1 1 w2 = 1
//! end
//! ```
//!
//! One constraint per line as `name: (coef var)* sense rhs`, with sense one of
//! `<=`, `>=`, `=` and every number an exact `p/q` rational. All variables are
//! non-negative. Lines starting with `#` are comments.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::{Constraint, LpProblem, Sense};
use crate::error::{Error, Result};
use crate::hamiltonians::SCHEMA;
use crate::scalar::{parse_rational, Rational};

fn write_terms(out: &mut String, names: &[String], terms: &[(usize, Rational)]) {
    for (j, c) in terms {
        let _ = write!(out, " {c} {}", names[*j]);
    }
}

pub fn write_lp(p: &LpProblem) -> String {
    let mut out = format!("lp {SCHEMA}\nvariables");
    for name in &p.var_names {
        out.push(' ');
        out.push_str(name);
    }
    out.push_str("\nminimize");
    write_terms(&mut out, &p.var_names, &p.objective);
    out.push('\n');
    for c in &p.constraints {
        out.push_str(&c.name);
        out.push(':');
        write_terms(&mut out, &p.var_names, &c.coeffs);
        let _ = writeln!(out, " {} {}", c.sense.symbol(), c.rhs);
    }
    out.push_str("end\n");
    out
}

fn parse_terms(tokens: &[&str], index: &HashMap<&str, usize>, line: usize) -> Result<Vec<(usize, Rational)>> {
    if !tokens.len().is_multiple_of(2) {
        return Err(Error::Parse(format!("line {line}: dangling coefficient")));
    }
    tokens
        .chunks(2)
        .map(|pair| {
            let c = parse_rational(pair[0])?;
            let j = *index
                .get(pair[1])
                .ok_or_else(|| Error::Parse(format!("line {line}: unknown variable {:?}", pair[1])))?;
            Ok((j, c))
        })
        .collect()
}

pub fn parse_lp(text: &str) -> Result<LpProblem> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let header = format!("lp {SCHEMA}");
    match lines.next() {
        Some((_, l)) if l == header => {}
        _ => return Err(Error::Parse(format!("expected header {header:?}"))),
    }
    let (ln, vars) = lines.next().ok_or_else(|| Error::Parse("missing variables line".into()))?;
    let var_names: Vec<String> = match vars.strip_prefix("variables") {
        Some(rest) => rest.split_whitespace().map(str::to_string).collect(),
        None => return Err(Error::Parse(format!("line {ln}: expected \"variables\""))),
    };
    let mut problem = LpProblem::new(var_names.clone());
    let index: HashMap<&str, usize> = var_names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    if index.len() != var_names.len() {
        return Err(Error::Parse(format!("line {ln}: duplicate variable name")));
    }

    let (ln, obj) = lines.next().ok_or_else(|| Error::Parse("missing objective line".into()))?;
    let rest = obj
        .strip_prefix("minimize")
        .ok_or_else(|| Error::Parse(format!("line {ln}: expected \"minimize\"")))?;
    let tokens: Vec<&str> = rest.split_whitespace().collect();
    problem.objective = parse_terms(&tokens, &index, ln)?;

    for (ln, l) in lines {
        if l == "end" {
            return Ok(problem);
        }
        let (name, body) = l
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("line {ln}: expected \"name: …\"")))?;
        let tokens: Vec<&str> = body.split_whitespace().collect();
        if tokens.len() < 2 {
            return Err(Error::Parse(format!("line {ln}: missing sense or rhs")));
        }
        let (terms, tail) = tokens.split_at(tokens.len() - 2);
        let sense = match tail[0] {
            "<=" => Sense::Le,
            ">=" => Sense::Ge,
            "=" => Sense::Eq,
            other => return Err(Error::Parse(format!("line {ln}: unknown sense {other:?}"))),
        };
        problem.constraints.push(Constraint {
            name: name.trim().to_string(),
            coeffs: parse_terms(terms, &index, ln)?,
            sense,
            rhs: parse_rational(tail[1])?,
        });
    }
    Err(Error::Parse("missing \"end\"".into()))
}
