//! Quillen models: the free graded Lie algebra on the suspended dual of a
//! simply connected cohomology algebra, with the quadratic differential
//! generated by the multiplication.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::Zero;

use crate::derivation::{differential_der, Derivation};
use crate::error::{Error, Result};
use crate::gens::{Generator, GeneratorTable};
use crate::lie::{parity, LieElement, Rewriter};
use crate::scalar::{self, Scalar};
use crate::word::BasisWord;

/// A finite simply connected graded commutative algebra, given by a basis of
/// positive-degree classes and a product table.
#[derive(Debug, Clone)]
pub struct CohomologySpec {
    pub name: String,
    /// Ordered classes `(name, degree)` with degree >= 2.
    pub classes: Vec<(String, i64)>,
    /// `products[(i, j)]` = coefficients of `class_i * class_j`.  The table
    /// is completed under the graded-commutative swap at load time; missing
    /// entries are zero.
    pub products: BTreeMap<(usize, usize), Vec<(Scalar, usize)>>,
}

/// One violation found by [`validate_spec`].
#[derive(Debug, Clone)]
pub enum Violation {
    DegreeTooSmall { class: String, degree: i64 },
    DuplicateClass { class: String },
    ProductDegreeMismatch { left: String, right: String, expected: i64, found: String },
    CommutativityMismatch { left: String, right: String },
    AssociativityFailure { a: String, b: String, c: String },
    OddSquareNonzero { class: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DegreeTooSmall { class, degree } => {
                write!(f, "class `{class}` has degree {degree} < 2 (not simply connected)")
            }
            Violation::DuplicateClass { class } => write!(f, "duplicate class `{class}`"),
            Violation::ProductDegreeMismatch { left, right, expected, found } => write!(
                f,
                "product {left}*{right} must have degree {expected}, found a term of class `{found}`"
            ),
            Violation::CommutativityMismatch { left, right } => write!(
                f,
                "products {left}*{right} and {right}*{left} violate graded commutativity"
            ),
            Violation::AssociativityFailure { a, b, c } => {
                write!(f, "associativity fails on ({a}*{b})*{c} vs {a}*({b}*{c})")
            }
            Violation::OddSquareNonzero { class } => {
                write!(f, "odd class `{class}` has nonzero square")
            }
        }
    }
}

impl CohomologySpec {
    /// A wedge of spheres: all products of positive classes vanish.
    pub fn bouquet(name: &str, classes: &[(&str, i64)]) -> CohomologySpec {
        CohomologySpec {
            name: name.to_string(),
            classes: classes.iter().map(|(n, d)| (n.to_string(), *d)).collect(),
            products: BTreeMap::new(),
        }
    }

    pub fn class_index(&self, name: &str) -> Result<usize> {
        self.classes
            .iter()
            .position(|(n, _)| n == name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    fn product(&self, i: usize, j: usize) -> Vec<(Scalar, usize)> {
        if let Some(p) = self.products.get(&(i, j)) {
            return p.clone();
        }
        // Complete by graded commutativity: a*b = (-1)^{|a||b|} b*a.
        if let Some(p) = self.products.get(&(j, i)) {
            let sign = if parity(self.classes[i].1) * parity(self.classes[j].1) == 1 {
                -scalar::one()
            } else {
                scalar::one()
            };
            return p.iter().map(|(c, k)| (c * &sign, *k)).collect();
        }
        Vec::new()
    }

    fn product_vec(&self, i: usize, j: usize) -> Vec<Scalar> {
        let mut v = vec![scalar::zero(); self.classes.len()];
        for (c, k) in self.product(i, j) {
            v[k] += c;
        }
        v
    }

    fn vec_product(&self, v: &[Scalar], j: usize) -> Vec<Scalar> {
        let mut out = vec![scalar::zero(); self.classes.len()];
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (k, x) in self.product_vec(i, j).iter().enumerate() {
                out[k] += c * x;
            }
        }
        out
    }

    fn product_vec_left(&self, i: usize, v: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![scalar::zero(); self.classes.len()];
        for (j, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (k, x) in self.product_vec(i, j).iter().enumerate() {
                out[k] += c * x;
            }
        }
        out
    }
}

/// Checks degrees, graded commutativity of the stored table and
/// associativity of the induced multiplication on all triples.  Returns the
/// list of violations; an empty report means the spec is valid.
pub fn validate_spec(spec: &CohomologySpec) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = spec.classes.len();
    let mut seen = std::collections::HashSet::new();
    for (name, degree) in &spec.classes {
        if *degree < 2 {
            out.push(Violation::DegreeTooSmall { class: name.clone(), degree: *degree });
        }
        if !seen.insert(name.clone()) {
            out.push(Violation::DuplicateClass { class: name.clone() });
        }
    }
    // Degree additivity of every stored product term.
    for (&(i, j), terms) in &spec.products {
        let expected = spec.classes[i].1 + spec.classes[j].1;
        for (c, k) in terms {
            if !c.is_zero() && spec.classes[*k].1 != expected {
                out.push(Violation::ProductDegreeMismatch {
                    left: spec.classes[i].0.clone(),
                    right: spec.classes[j].0.clone(),
                    expected,
                    found: spec.classes[*k].0.clone(),
                });
            }
        }
    }
    // Graded commutativity where both orders are stored, and odd squares.
    for i in 0..n {
        for j in 0..n {
            if spec.products.contains_key(&(i, j)) && spec.products.contains_key(&(j, i)) {
                let sign = if parity(spec.classes[i].1) * parity(spec.classes[j].1) == 1 {
                    -scalar::one()
                } else {
                    scalar::one()
                };
                let lhs = spec.product_vec(i, j);
                let rhs: Vec<Scalar> =
                    spec.product_vec(j, i).iter().map(|c| c * &sign).collect();
                if lhs != rhs {
                    out.push(Violation::CommutativityMismatch {
                        left: spec.classes[i].0.clone(),
                        right: spec.classes[j].0.clone(),
                    });
                }
            }
        }
        if parity(spec.classes[i].1) == 1
            && spec.product_vec(i, i).iter().any(|c| !c.is_zero())
        {
            out.push(Violation::OddSquareNonzero { class: spec.classes[i].0.clone() });
        }
    }
    // Associativity on all triples.
    for a in 0..n {
        for b in 0..n {
            let ab = spec.product_vec(a, b);
            for c in 0..n {
                let left = spec.vec_product(&ab, c);
                let bc = spec.product_vec(b, c);
                let right = spec.product_vec_left(a, &bc);
                if left != right {
                    out.push(Violation::AssociativityFailure {
                        a: spec.classes[a].0.clone(),
                        b: spec.classes[b].0.clone(),
                        c: spec.classes[c].0.clone(),
                    });
                }
            }
        }
    }
    out
}

/// The Quillen model: generators dual to the classes (degree `1 - s`,
/// weight `s`) and the quadratic differential generated by the product.
#[derive(Debug, Clone)]
pub struct QuillenModel {
    pub spec: CohomologySpec,
    pub table: Arc<GeneratorTable>,
    /// Degree +1, weight 0 derivation with `d² = 0`.
    pub differential: Derivation,
}

impl QuillenModel {
    pub fn is_bouquet(&self) -> bool {
        self.differential.is_zero()
    }
}

/// Builds the model and verifies `d² = 0` on every generator.
///
/// For each class `z` and ordered pair `(u, v)` with coefficient `c` of `z`
/// in `u*v`, the differential picks up `½ (-1)^{deg u} c [u', v']` on the
/// dual generator of `z`; the sign convention is validated by the `d² = 0`
/// check, which any consistent choice must pass on an associative spec.
pub fn build_model(spec: &CohomologySpec) -> Result<QuillenModel> {
    let violations = validate_spec(spec);
    if !violations.is_empty() {
        let report =
            violations.iter().map(|v| format!("  - {v}")).collect::<Vec<_>>().join("\n");
        return Err(Error::SpecInvalid { name: spec.name.clone(), report });
    }
    let gens: Vec<Generator> = spec
        .classes
        .iter()
        .map(|(n, s)| Generator { name: n.clone(), degree: 1 - s, weight: *s })
        .collect();
    let table = GeneratorTable::new(gens)?;
    let mut rw = Rewriter::new(table.clone());
    let n = spec.classes.len();
    let mut values: BTreeMap<u32, LieElement> = BTreeMap::new();
    for z in 0..n {
        let mut dz = LieElement::zero(table.clone());
        for u in 0..n {
            for v in 0..n {
                let terms = spec.product(u, v);
                let Some(c) = terms
                    .iter()
                    .filter(|(_, k)| *k == z)
                    .map(|(c, _)| c.clone())
                    .reduce(|a, b| a + b)
                else {
                    continue;
                };
                if c.is_zero() {
                    continue;
                }
                let sign = if parity(spec.classes[u].1) == 1 {
                    -scalar::one()
                } else {
                    scalar::one()
                };
                let gu = LieElement::generator(table.clone(), u as u32);
                let gv = LieElement::generator(table.clone(), v as u32);
                let br = rw.bracket_elements(&gu, &gv);
                dz = dz.add(&br.scale(&(c * sign * scalar::ratio(1, 2))))?;
            }
        }
        if !dz.is_zero() {
            values.insert(z as u32, dz);
        }
    }
    let differential = Derivation::from_values(table.clone(), 1, values)?;
    // d preserves weight and raises degree by 1 by construction; verify the
    // weight claim and d² = 0 on every generator.
    if let Some(w) = differential.weight() {
        if w != 0 {
            return Err(Error::ModelConstruction(format!(
                "differential has weight {w}, expected 0"
            )));
        }
    }
    let dd = differential_der(&differential, &differential)?;
    for (x, _) in table.iter() {
        // [d,d] = 2 d², so d²x = ½ [d,d]x.
        let v = dd.value_on(x);
        if !v.is_zero() {
            return Err(Error::ModelConstruction(format!(
                "d² is nonzero on generator `{}`: {}",
                table.name(x),
                v.scale(&scalar::ratio(1, 2))
            )));
        }
    }
    Ok(QuillenModel { spec: spec.clone(), table, differential })
}

/// Parses a named derivation value like `[x1,[x1,x2]]` and wraps it as
/// `value ∂target`.
pub fn single_derivation(
    model: &QuillenModel,
    value: &LieElement,
    target: &str,
) -> Result<Derivation> {
    let id = model.table.id_of(target)?;
    Derivation::single(id, value.clone())
}

/// Convenience: the basis word `w ∂x` as a derivation.
pub fn word_derivation(model: &QuillenModel, w: &BasisWord, x: u32) -> Result<Derivation> {
    Derivation::single(x, LieElement::from_basis_word(model.table.clone(), w.clone()))
}
