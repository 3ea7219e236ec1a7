//! Text formats: cohomology spec files, derivation files and named bases.
//!
//! A spec file has three sections:
//!
//! ```text
//! name wedge_r2_k3
//! classes
//!   x1 3
//!   x2 3
//!   y 8
//!   z 13
//! products
//!   x2 * x10 -> x13
//!   u * v -> 3/2*w + -1*w2
//! ```
//!
//! Unlisted products are zero; the table is completed under the
//! graded-commutative swap.  A derivation file has one term per line,
//! `coeff * [word] d target`, the whole file summing to one derivation; a
//! basis file names one derivation per line, `name = coeff * [word] d
//! target [+ ...]`.  Gauge path files allow an optional `t^k *` factor in
//! each term.

use std::collections::BTreeMap;

use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::lie::{normalize, Expr};
use crate::mcideal::NamedDerivation;
use crate::quillen::{CohomologySpec, QuillenModel};
use crate::scalar::{self, Scalar};

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, col: 1, msg: msg.into() }
}

/// Parses the spec file format.
pub fn parse_spec(text: &str) -> Result<CohomologySpec> {
    #[derive(PartialEq)]
    enum Section {
        Head,
        Classes,
        Products,
    }
    let mut name = String::new();
    let mut classes: Vec<(String, i64)> = Vec::new();
    let mut products: BTreeMap<(usize, usize), Vec<(Scalar, usize)>> = BTreeMap::new();
    let mut section = Section::Head;
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let lno = ln + 1;
        match line {
            "classes" => {
                section = Section::Classes;
                continue;
            }
            "products" => {
                section = Section::Products;
                continue;
            }
            _ => {}
        }
        match section {
            Section::Head => {
                let Some(rest) = line.strip_prefix("name") else {
                    return Err(perr(lno, "expected `name <identifier>` first"));
                };
                name = rest.trim().to_string();
                if name.is_empty() {
                    return Err(perr(lno, "empty spec name"));
                }
            }
            Section::Classes => {
                let mut it = line.split_whitespace();
                let (Some(n), Some(d), None) = (it.next(), it.next(), it.next()) else {
                    return Err(perr(lno, "expected `<class> <degree>`"));
                };
                let degree: i64 =
                    d.parse().map_err(|_| perr(lno, format!("bad degree `{d}`")))?;
                classes.push((n.to_string(), degree));
            }
            Section::Products => {
                let (lhs, rhs) = line
                    .split_once("->")
                    .ok_or_else(|| perr(lno, "expected `left right -> terms`"))?;
                let lhs = lhs.replace('*', " ");
                let mut it = lhs.split_whitespace();
                let (Some(l), Some(r), None) = (it.next(), it.next(), it.next()) else {
                    return Err(perr(lno, "expected exactly two factors before `->`"));
                };
                let idx = |n: &str| -> Result<usize> {
                    classes
                        .iter()
                        .position(|(c, _)| c == n)
                        .ok_or_else(|| perr(lno, format!("unknown class `{n}`")))
                };
                let (li, ri) = (idx(l)?, idx(r)?);
                let mut terms = Vec::new();
                let rhs = rhs.trim();
                if rhs != "0" {
                    for part in rhs.split('+') {
                        let part = part.trim();
                        let (c, cls) = match part.split_once('*') {
                            Some((c, cls)) => (
                                scalar::parse(c)
                                    .ok_or_else(|| perr(lno, format!("bad coefficient `{c}`")))?,
                                cls.trim(),
                            ),
                            None => (scalar::one(), part),
                        };
                        terms.push((c, idx(cls)?));
                    }
                }
                if products.insert((li, ri), terms).is_some() {
                    return Err(perr(lno, format!("product {l}*{r} listed twice")));
                }
            }
        }
    }
    if name.is_empty() {
        return Err(perr(1, "missing `name` line"));
    }
    if classes.is_empty() {
        return Err(perr(1, "missing `classes` section"));
    }
    Ok(CohomologySpec { name, classes, products })
}

pub fn load_spec_file(path: &std::path::Path) -> Result<CohomologySpec> {
    let text = std::fs::read_to_string(path)?;
    parse_spec(&text)
}

/// One parsed derivation term: `coeff * t^k * [word] d target`.
pub struct DerTerm {
    pub coeff: Scalar,
    pub t_power: u32,
    pub value: Expr,
    pub target: String,
}

pub fn parse_der_term(line: &str, lno: usize) -> Result<DerTerm> {
    // coeff * [word] d target   |   [word] d target
    let (value_part, target) = {
        let mut split = line.rsplitn(2, " d ");
        let target = split
            .next()
            .ok_or_else(|| perr(lno, "expected `... d <target>`"))?
            .trim()
            .to_string();
        let rest = split.next().ok_or_else(|| perr(lno, "expected `... d <target>`"))?;
        (rest.trim().to_string(), target)
    };
    let mut coeff = scalar::one();
    let mut t_power = 0u32;
    let mut expr_part = value_part.as_str();
    // Leading factors separated by '*' until the bracket expression starts.
    while let Some((head, rest)) = expr_part.split_once('*') {
        let head_t = head.trim();
        if head_t.starts_with('[') {
            break;
        }
        if let Some(p) = head_t.strip_prefix("t^") {
            t_power += p
                .parse::<u32>()
                .map_err(|_| perr(lno, format!("bad power `{head_t}`")))?;
        } else if head_t == "t" {
            t_power += 1;
        } else {
            let c = scalar::parse(head_t)
                .ok_or_else(|| perr(lno, format!("bad coefficient `{head_t}`")))?;
            coeff *= c;
        }
        expr_part = rest;
    }
    let value = Expr::parse(expr_part.trim()).map_err(|e| match e {
        Error::Parse { col, msg, .. } => Error::Parse { line: lno, col, msg },
        other => other,
    })?;
    Ok(DerTerm { coeff, t_power, value, target })
}

/// Parses a derivation file: the sum of all term lines.  Terms carrying `t`
/// powers are grouped into a polynomial family.
pub fn parse_derivation_file(
    model: &QuillenModel,
    text: &str,
) -> Result<BTreeMap<u32, Derivation>> {
    let mut by_power: BTreeMap<u32, Derivation> = BTreeMap::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let term = parse_der_term(line, ln + 1)?;
        let value = normalize(&model.table, &term.value)?.scale(&term.coeff);
        let target = model.table.id_of(&term.target)?;
        let single = Derivation::single(target, value)?;
        let entry = by_power.entry(term.t_power);
        match entry {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(single);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let merged = e.get().add(&single)?;
                e.insert(merged);
            }
        }
    }
    if by_power.is_empty() {
        return Err(perr(1, "empty derivation file"));
    }
    Ok(by_power)
}

/// A derivation file without `t` powers collapses to a single derivation.
pub fn parse_constant_derivation(model: &QuillenModel, text: &str) -> Result<Derivation> {
    let by_power = parse_derivation_file(model, text)?;
    if by_power.len() != 1 || !by_power.contains_key(&0) {
        return Err(Error::Input("expected a t-independent derivation".into()));
    }
    Ok(by_power.into_iter().next().unwrap().1)
}

/// Parses a named basis file: `name = term [+ term ...]` per line.
pub fn parse_basis_file(model: &QuillenModel, text: &str) -> Result<Vec<NamedDerivation>> {
    let mut out = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let lno = ln + 1;
        let (name, rhs) =
            line.split_once('=').ok_or_else(|| perr(lno, "expected `name = terms`"))?;
        let name = name.trim().to_string();
        let mut der: Option<Derivation> = None;
        for part in rhs.split(" + ") {
            let term = parse_der_term(part.trim(), lno)?;
            if term.t_power != 0 {
                return Err(perr(lno, "basis entries cannot carry t powers"));
            }
            let value = normalize(&model.table, &term.value)?.scale(&term.coeff);
            let target = model.table.id_of(&term.target)?;
            let single = Derivation::single(target, value)?;
            der = Some(match der {
                None => single,
                Some(d) => d.add(&single)?,
            });
        }
        let der = der.ok_or_else(|| perr(lno, "empty derivation"))?;
        out.push(NamedDerivation { name, der });
    }
    Ok(out)
}

/// Builds the generator table and model for a spec, as `load_spec` does in
/// the CLI.
pub fn load_model(spec: &CohomologySpec) -> Result<QuillenModel> {
    crate::quillen::build_model(spec)
}

/// Renders a spec back to the file format (used by reports).
pub fn render_spec(spec: &CohomologySpec) -> String {
    let mut out = format!("name {}\nclasses\n", spec.name);
    for (n, d) in &spec.classes {
        out.push_str(&format!("  {n} {d}\n"));
    }
    out.push_str("products\n");
    for (&(i, j), terms) in &spec.products {
        let rhs = if terms.is_empty() {
            "0".to_string()
        } else {
            terms
                .iter()
                .map(|(c, k)| format!("{}*{}", scalar::fmt(c), spec.classes[*k].0))
                .collect::<Vec<_>>()
                .join(" + ")
        };
        out.push_str(&format!(
            "  {} * {} -> {}\n",
            spec.classes[i].0, spec.classes[j].0, rhs
        ));
    }
    out
}
