//! Multivariate polynomials over ℚ in named coordinates.
//!
//! Coordinates carry integer content vectors (letter multiplicities of the
//! dual basis derivation, with the target generator subtracted), which add
//! under multiplication; all ideal-theoretic questions downstream are
//! content-homogeneous.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::Zero;

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

/// A coordinate of the ambient affine space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coord {
    pub name: String,
    /// Content vector over the model's generators; entries may be negative.
    pub content: Vec<i64>,
    /// Weight of the dual basis derivation (negative), 0 when untracked.
    pub weight: i64,
}

/// The ordered coordinate table of an affine space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordTable {
    pub coords: Vec<Coord>,
}

impl CoordTable {
    pub fn new(coords: Vec<Coord>) -> Result<Arc<Self>> {
        let mut seen = std::collections::HashSet::new();
        for c in &coords {
            if !seen.insert(c.name.clone()) {
                return Err(Error::Input(format!("duplicate coordinate `{}`", c.name)));
            }
        }
        Ok(Arc::new(CoordTable { coords }))
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.coords
            .iter()
            .position(|c| c.name == name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }
}

/// A monomial: sorted `(coordinate, exponent)` pairs with positive exponents.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(pub Vec<(usize, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(i: usize) -> Self {
        Monomial(vec![(i, 1)])
    }

    pub fn from_pairs(mut pairs: Vec<(usize, u32)>) -> Self {
        pairs.retain(|(_, e)| *e > 0);
        pairs.sort_unstable();
        let mut out: Vec<(usize, u32)> = Vec::with_capacity(pairs.len());
        for (i, e) in pairs {
            match out.last_mut() {
                Some((j, f)) if *j == i => *f += e,
                _ => out.push((i, e)),
            }
        }
        Monomial(out)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut pairs = self.0.clone();
        pairs.extend_from_slice(&other.0);
        Monomial::from_pairs(pairs)
    }

    pub fn pow(&self, e: u32) -> Monomial {
        Monomial::from_pairs(self.0.iter().map(|&(i, k)| (i, k * e)).collect())
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn content(&self, table: &CoordTable) -> Vec<i64> {
        let n = table.coords.first().map_or(0, |c| c.content.len());
        let mut out = vec![0i64; n];
        for &(i, e) in &self.0 {
            for (k, v) in table.coords[i].content.iter().enumerate() {
                out[k] += v * e as i64;
            }
        }
        out
    }

    pub fn display(&self, table: &CoordTable) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        self.0
            .iter()
            .map(|&(i, e)| {
                if e == 1 {
                    table.coords[i].name.clone()
                } else {
                    format!("{}^{}", table.coords[i].name, e)
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// A polynomial with deterministic term order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    pub table: Arc<CoordTable>,
    pub terms: BTreeMap<Monomial, Scalar>,
}

impl Polynomial {
    pub fn zero(table: Arc<CoordTable>) -> Self {
        Polynomial { table, terms: BTreeMap::new() }
    }

    pub fn constant(table: Arc<CoordTable>, c: Scalar) -> Self {
        let mut p = Polynomial::zero(table);
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn var(table: Arc<CoordTable>, i: usize) -> Self {
        let mut p = Polynomial::zero(table);
        p.add_term(Monomial::var(i), scalar::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.scale(&-scalar::one()))
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.table.clone());
        }
        Polynomial {
            table: self.table.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.table.clone());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Scalar) -> Polynomial {
        let mut out = Polynomial::zero(self.table.clone());
        for (mm, cc) in &self.terms {
            out.add_term(mm.mul(m), cc * c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut out = Polynomial::constant(self.table.clone(), scalar::one());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Content if all terms agree (`None` for zero or mixed).
    pub fn homogeneous_content(&self) -> Option<Vec<i64>> {
        let mut it = self.terms.keys().map(|m| m.content(&self.table));
        let first = it.next()?;
        it.all(|c| c == first).then_some(first)
    }

    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|m| m.total_degree());
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Splits into content-homogeneous components.
    pub fn content_components(&self) -> BTreeMap<Vec<i64>, Polynomial> {
        let mut out: BTreeMap<Vec<i64>, Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.content(&self.table))
                .or_insert_with(|| Polynomial::zero(self.table.clone()))
                .add_term(m.clone(), c.clone());
        }
        out
    }

    /// Substitutes polynomials for coordinates.
    pub fn substitute(&self, images: &[Polynomial], target: Arc<CoordTable>) -> Result<Polynomial> {
        if images.len() != self.table.len() {
            return Err(Error::Input("substitution image count mismatch".into()));
        }
        let mut out = Polynomial::zero(target.clone());
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(target.clone(), c.clone());
            for &(i, e) in &m.0 {
                term = term.mul(&images[i].pow(e));
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Evaluates at a rational point.
    pub fn eval(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.table.len() {
            return Err(Error::Input("evaluation point has wrong length".into()));
        }
        let mut total = scalar::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for &(i, e) in &m.0 {
                for _ in 0..e {
                    v *= &point[i];
                }
            }
            total += v;
        }
        Ok(total)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let cs = scalar::fmt(c);
            let ms = m.display(&self.table);
            if first {
                first = false;
            } else {
                write!(f, " + ")?;
            }
            if ms == "1" {
                write!(f, "{cs}")?;
            } else if cs == "1" {
                write!(f, "{ms}")?;
            } else if cs == "-1" {
                write!(f, "-{ms}")?;
            } else {
                write!(f, "{cs}*{ms}")?;
            }
        }
        Ok(())
    }
}

/// Sorted positive entries of a content vector, descending: the partition.
pub fn partition_of_content(content: &[i64]) -> Vec<i64> {
    let mut p: Vec<i64> = content.iter().copied().filter(|&x| x > 0).collect();
    p.sort_unstable_by(|a, b| b.cmp(a));
    p
}
