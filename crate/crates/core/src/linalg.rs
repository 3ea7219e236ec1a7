//! Exact sparse linear algebra over ℚ.
//!
//! Row echelon with leftmost-pivot, first-nonzero-row tie-breaking, so pivot
//! choices (and hence representatives downstream) are reproducible.

use std::collections::BTreeMap;

use num::Zero;

use crate::scalar::{self, Scalar};

/// A sparse row: sorted column -> coefficient, no zeros stored.
pub type SparseVec = BTreeMap<usize, Scalar>;

pub fn sv_from_dense(v: &[Scalar]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c.clone()))
        .collect()
}

pub fn sv_to_dense(v: &SparseVec, n: usize) -> Vec<Scalar> {
    let mut out = vec![scalar::zero(); n];
    for (&i, c) in v {
        out[i] = c.clone();
    }
    out
}

pub fn sv_add_scaled(acc: &mut SparseVec, other: &SparseVec, factor: &Scalar) {
    if factor.is_zero() {
        return;
    }
    for (&i, c) in other {
        let e = acc.entry(i).or_insert_with(scalar::zero);
        *e += c * factor;
        if e.is_zero() {
            acc.remove(&i);
        }
    }
}

pub fn sv_scale(v: &SparseVec, factor: &Scalar) -> SparseVec {
    if factor.is_zero() {
        return SparseVec::new();
    }
    v.iter().map(|(&i, c)| (i, c * factor)).collect()
}

/// An incrementally built echelon basis of a row space.
///
/// Optionally tracks, for every stored row, its expression in terms of the
/// inserted rows, so that membership queries come with certificates.
#[derive(Debug, Clone)]
pub struct Echelon {
    /// Rows reduced so that each has a distinct leading column, kept sorted
    /// by leading column; every pivot column is cleared from all other rows.
    rows: Vec<SparseVec>,
    leads: Vec<usize>,
    /// `trace[k][j]` = coefficient of inserted row `j` in stored row `k`.
    trace: Option<Vec<SparseVec>>,
    inserted: usize,
}

impl Echelon {
    pub fn new(with_certificates: bool) -> Self {
        Echelon {
            rows: Vec::new(),
            leads: Vec::new(),
            trace: if with_certificates { Some(Vec::new()) } else { None },
            inserted: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn leads(&self) -> &[usize] {
        &self.leads
    }

    /// Reduces `v` against the basis: clears every coordinate sitting in a
    /// pivot column.  Returns the residue and, when certificate tracking is
    /// on, the combination of inserted rows with `v = residue + combination`.
    pub fn reduce(&self, v: &SparseVec) -> (SparseVec, SparseVec) {
        let mut res = v.clone();
        let mut combo = SparseVec::new();
        loop {
            let hit = res
                .iter()
                .find_map(|(&c, _)| self.leads.binary_search(&c).ok().map(|k| (c, k)));
            let Some((c, k)) = hit else { break };
            let lc = res[&c].clone();
            let pivot = &self.rows[k][&c];
            let f = -(&lc / pivot);
            let row = self.rows[k].clone();
            sv_add_scaled(&mut res, &row, &f);
            if let Some(trace) = &self.trace {
                sv_add_scaled(&mut combo, &trace[k], &-&f);
            }
        }
        (res, combo)
    }

    /// Inserts a row.  Returns `Some(position)` of the new pivot row when `v`
    /// enlarged the space, `None` when it was already in the span.
    pub fn insert(&mut self, v: &SparseVec) -> Option<usize> {
        let this = self.inserted;
        self.inserted += 1;
        let (mut res, combo) = self.reduce(v);
        if res.is_empty() {
            return None;
        }
        let mut cert = SparseVec::new();
        if self.trace.is_some() {
            // res = v - combo, so res is (this row) - combo in inserted rows.
            cert = sv_scale(&combo, &-scalar::one());
            cert.insert(this, scalar::one());
        }
        let (&lead, lc) = res.iter().next().unwrap();
        let inv = scalar::one() / lc.clone();
        res = sv_scale(&res, &inv);
        if self.trace.is_some() {
            cert = sv_scale(&cert, &inv);
        }
        // Clear the new pivot column from existing rows to keep residues
        // canonical.
        for k in 0..self.rows.len() {
            if let Some(c) = self.rows[k].get(&lead).cloned() {
                let f = -c;
                sv_add_scaled(&mut self.rows[k], &res, &f);
                if let Some(trace) = &mut self.trace {
                    let cert_row = cert.clone();
                    sv_add_scaled(&mut trace[k], &cert_row, &f);
                }
            }
        }
        let pos = self.leads.binary_search(&lead).unwrap_err();
        self.rows.insert(pos, res);
        self.leads.insert(pos, lead);
        if let Some(trace) = &mut self.trace {
            trace.insert(pos, cert);
        }
        Some(pos)
    }

    /// Whether `v` lies in the span; with certificates on, also returns the
    /// combination of inserted rows realizing it.
    pub fn membership(&self, v: &SparseVec) -> Option<SparseVec> {
        let (res, combo) = self.reduce(v);
        res.is_empty().then_some(combo)
    }
}

/// Kernel basis of the linear map sending domain vector `e_i` to `rows[i]`.
/// Kernel vectors come out with unit leading coefficient at their largest
/// domain index, in insertion order; the result is deterministic.
pub fn kernel_basis(rows: &[SparseVec]) -> Vec<SparseVec> {
    let mut ech = Echelon::new(true);
    let mut kernel = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let (res, combo) = ech.reduce(r);
        if res.is_empty() {
            let mut k = sv_scale(&combo, &-scalar::one());
            k.insert(i, scalar::one());
            kernel.push(k);
        } else {
            ech.insert(r);
        }
    }
    kernel
}
