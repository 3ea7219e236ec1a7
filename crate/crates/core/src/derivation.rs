//! Derivations of a free graded Lie algebra, stored by their values on
//! generators and extended everywhere else by the graded Leibniz rule.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gens::{same_table, GeneratorTable};
use crate::lie::{parity, LieElement, Rewriter};
use crate::scalar::{self, Scalar};
use crate::word::{BasisWord, Tree};

/// A degree-homogeneous derivation θ.  The weight convention is
/// `wt(θ) = wt(x) - wt(θ(x))`, so the controlling algebra consists of the
/// derivations of strictly negative weight.  A derivation may mix weights;
/// [`Derivation::weight`] reports the weight only when it is homogeneous.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    table: Arc<GeneratorTable>,
    degree: i64,
    values: BTreeMap<u32, LieElement>,
}

impl Derivation {
    pub fn zero(table: Arc<GeneratorTable>, degree: i64) -> Self {
        Derivation { table, degree, values: BTreeMap::new() }
    }

    /// The derivation `w ∂x`: sends generator `x` to the element `w`, every
    /// other generator to zero.
    pub fn single(target: u32, value: LieElement) -> Result<Self> {
        let table = value.table().clone();
        if target as usize >= table.len() {
            return Err(Error::GeneratorIndex(target as usize));
        }
        let Some(d) = value.homogeneous_degree() else {
            return Err(Error::Input("derivation value must be degree-homogeneous".into()));
        };
        let degree = d - table.degree(target);
        let mut values = BTreeMap::new();
        values.insert(target, value);
        Ok(Derivation { table, degree, values })
    }

    pub fn from_values(
        table: Arc<GeneratorTable>,
        degree: i64,
        values: BTreeMap<u32, LieElement>,
    ) -> Result<Self> {
        for (x, v) in &values {
            same_table(&table, v.table())?;
            if v.is_zero() {
                continue;
            }
            match v.homogeneous_degree() {
                Some(d) if d == table.degree(*x) + degree => {}
                _ => {
                    return Err(Error::Input(format!(
                        "value on `{}` is not homogeneous of degree {}",
                        table.name(*x),
                        table.degree(*x) + degree
                    )))
                }
            }
        }
        let values = values.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        Ok(Derivation { table, degree, values })
    }

    pub fn table(&self) -> &Arc<GeneratorTable> {
        &self.table
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.values.values().all(|v| v.is_zero())
    }

    pub fn value_on(&self, x: u32) -> LieElement {
        self.values
            .get(&x)
            .cloned()
            .unwrap_or_else(|| LieElement::zero(self.table.clone()))
    }

    pub fn values(&self) -> impl Iterator<Item = (&u32, &LieElement)> {
        self.values.iter()
    }

    /// `wt(x) - wt(θ(x))`, when this is the same for every nonzero value.
    pub fn weight(&self) -> Option<i64> {
        let mut w = None;
        for (x, v) in &self.values {
            if v.is_zero() {
                continue;
            }
            let vw = v.homogeneous_weight()?;
            let this = self.table.weight(*x) - vw;
            match w {
                None => w = Some(this),
                Some(prev) if prev == this => {}
                _ => return None,
            }
        }
        w
    }

    /// Splits into weight-homogeneous derivations, keyed by weight.
    pub fn weight_components(&self) -> BTreeMap<i64, Derivation> {
        let mut out: BTreeMap<i64, Derivation> = BTreeMap::new();
        for (x, v) in &self.values {
            for (w, part) in v.weight_components() {
                let key = self.table.weight(*x) - w;
                let entry = out
                    .entry(key)
                    .or_insert_with(|| Derivation::zero(self.table.clone(), self.degree));
                let merged = entry.value_on(*x).add(&part).expect("same table");
                entry.values.insert(*x, merged);
            }
        }
        out.retain(|_, d| !d.is_zero());
        out
    }

    /// Content vector `content(θ(x)) - e_x`, when independent of `x` and
    /// content-homogeneous.
    pub fn content(&self) -> Option<Vec<i64>> {
        let mut c: Option<Vec<i64>> = None;
        for (x, v) in &self.values {
            if v.is_zero() {
                continue;
            }
            let mut vc = v.homogeneous_content()?;
            vc[*x as usize] -= 1;
            match &c {
                None => c = Some(vc),
                Some(prev) if *prev == vc => {}
                _ => return None,
            }
        }
        c
    }

    pub fn scale(&self, c: &Scalar) -> Derivation {
        let mut values: BTreeMap<u32, LieElement> =
            self.values.iter().map(|(x, v)| (*x, v.scale(c))).collect();
        values.retain(|_, v| !v.is_zero());
        Derivation { table: self.table.clone(), degree: self.degree, values }
    }

    pub fn add(&self, other: &Derivation) -> Result<Derivation> {
        same_table(&self.table, &other.table)?;
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.degree != other.degree {
            return Err(Error::Input(format!(
                "cannot add derivations of degrees {} and {}",
                self.degree, other.degree
            )));
        }
        let mut values = self.values.clone();
        for (x, v) in &other.values {
            let merged = match values.get(x) {
                Some(u) => u.add(v)?,
                None => v.clone(),
            };
            values.insert(*x, merged);
        }
        values.retain(|_, v| !v.is_zero());
        Ok(Derivation { table: self.table.clone(), degree: self.degree, values })
    }

    pub fn sub(&self, other: &Derivation) -> Result<Derivation> {
        self.add(&other.scale(&-scalar::one()))
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (x, v) in &self.values {
            if v.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({}) d{}", v, self.table.name(*x))?;
        }
        Ok(())
    }
}

/// Applies θ to an element by the graded Leibniz rule
/// `θ[a,b] = [θa, b] + (-1)^{|θ||a|}[a, θb]`.
pub fn apply(theta: &Derivation, e: &LieElement) -> Result<LieElement> {
    same_table(&theta.table, e.table())?;
    let mut rw = Rewriter::new(theta.table.clone());
    apply_with(theta, e, &mut rw)
}

pub(crate) fn apply_with(
    theta: &Derivation,
    e: &LieElement,
    rw: &mut Rewriter,
) -> Result<LieElement> {
    let mut out = LieElement::zero(theta.table.clone());
    for (w, c) in e.terms() {
        let applied = apply_tree(theta, &w.tree(), rw);
        out = out.add(&applied.scale(c))?;
    }
    Ok(out)
}

fn apply_tree(theta: &Derivation, t: &Tree, rw: &mut Rewriter) -> LieElement {
    match t {
        Tree::Leaf(x) => theta.value_on(*x),
        Tree::Node(a, b) => {
            let ea = tree_element(theta.table.clone(), a);
            let eb = tree_element(theta.table.clone(), b);
            let da = ea.homogeneous_degree().unwrap_or(0);
            let ta = apply_tree(theta, a, rw);
            let tb = apply_tree(theta, b, rw);
            let left = rw.bracket_elements(&ta, &eb);
            let right = rw.bracket_elements(&ea, &tb);
            let sign = if parity(theta.degree) * parity(da) == 1 {
                -scalar::one()
            } else {
                scalar::one()
            };
            left.add(&right.scale(&sign)).expect("same table")
        }
    }
}

/// Subtrees of canonical bracketings are themselves canonical basis words.
fn tree_element(table: Arc<GeneratorTable>, t: &Tree) -> LieElement {
    fn word_of(t: &Tree, out: &mut Vec<u32>) {
        match t {
            Tree::Leaf(x) => out.push(*x),
            Tree::Node(a, b) => {
                word_of(a, out);
                word_of(b, out);
            }
        }
    }
    match t {
        Tree::Leaf(x) => LieElement::generator(table, *x),
        Tree::Node(a, b) => {
            let mut wa = Vec::new();
            word_of(a, &mut wa);
            let mut wb = Vec::new();
            word_of(b, &mut wb);
            if wa == wb {
                LieElement::from_basis_word(table, BasisWord::Square(wa))
            } else {
                let mut w = wa;
                w.extend_from_slice(&wb);
                LieElement::from_basis_word(table, BasisWord::Lyndon(w))
            }
        }
    }
}

/// Graded commutator `[θ, φ] = θφ - (-1)^{|θ||φ|}φθ`, evaluated on
/// generators.
pub fn bracket_der(theta: &Derivation, phi: &Derivation) -> Result<Derivation> {
    same_table(&theta.table, &phi.table)?;
    let degree = theta.degree + phi.degree;
    let sign = if parity(theta.degree) * parity(phi.degree) == 1 {
        scalar::one()
    } else {
        -scalar::one()
    };
    let mut rw = Rewriter::new(theta.table.clone());
    let mut values = BTreeMap::new();
    for (x, _) in theta.table.iter() {
        let a = apply_with(theta, &phi.value_on(x), &mut rw)?;
        let b = apply_with(phi, &theta.value_on(x), &mut rw)?;
        let v = a.add(&b.scale(&sign))?;
        if !v.is_zero() {
            values.insert(x, v);
        }
    }
    Ok(Derivation { table: theta.table.clone(), degree, values })
}

/// `ad(d)θ = [d, θ]` for the model differential `d`.
pub fn differential_der(d_model: &Derivation, theta: &Derivation) -> Result<Derivation> {
    bracket_der(d_model, theta)
}

/// `dθ + ½[θ,θ]`, the Maurer-Cartan defect of a degree-1 derivation.
pub fn mc_defect(d_model: &Derivation, theta: &Derivation) -> Result<Derivation> {
    if theta.degree != 1 {
        return Err(Error::Precondition(format!(
            "Maurer-Cartan defect needs a degree-1 derivation, got degree {}",
            theta.degree
        )));
    }
    let dd = differential_der(d_model, theta)?;
    let sq = bracket_der(theta, theta)?.scale(&scalar::ratio(1, 2));
    dd.add(&sq)
}

/// Evaluates `Σ_{n>=0} (ad b)^n(θ)/n!`, a finite sum whenever `ad b` is
/// nilpotent on θ.  `max_terms` bounds the expansion defensively.
pub fn exp_ad(b: &Derivation, theta: &Derivation, max_terms: usize) -> Result<Derivation> {
    let mut sum = theta.clone();
    let mut term = theta.clone();
    let mut factorial = scalar::one();
    for n in 1..=max_terms {
        term = bracket_der(b, &term)?;
        if term.is_zero() {
            return Ok(sum);
        }
        factorial *= scalar::int(n as i64);
        sum = sum.add(&term.scale(&(scalar::one() / factorial.clone())))?;
    }
    Err(Error::Input(format!(
        "exp(ad b) did not terminate within {max_terms} terms; the parameter is not nilpotent on the argument"
    )))
}
