//! The controlling bigraded complex: negative-weight derivations of a
//! Quillen model, organized in (degree, weight) blocks, with differential
//! `ad(d)` and exact cohomology.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::Zero;

use crate::derivation::{differential_der, Derivation};
use crate::error::{Error, Result};
use crate::gens::GeneratorTable;
use crate::lie::LieElement;
use crate::linalg::{kernel_basis, sv_add_scaled, Echelon, SparseVec};
use crate::quillen::QuillenModel;
use crate::scalar::{self, Scalar};
use crate::word::{basis_of_bidegree, BasisWord};

/// Basis element of a block: the derivation `w ∂x`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct BlockBasisElem {
    pub target: u32,
    pub word: BasisWord,
}

/// One (degree, weight) block with its ordered derivation basis.
#[derive(Debug, Clone)]
pub struct Block {
    pub degree: i64,
    pub weight: i64,
    pub basis: Vec<BlockBasisElem>,
    index: BTreeMap<BlockBasisElem, usize>,
}

impl Block {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// The assembled truncation: blocks for all degrees in `degrees` and weights
/// in `[weight_min, -1]`, together with the matrices of `ad(d)`.
#[derive(Debug, Clone)]
pub struct BigradedComplex {
    pub model: QuillenModel,
    pub weight_min: i64,
    pub degrees: Vec<i64>,
    blocks: BTreeMap<(i64, i64), Block>,
    /// Rows of `d: block(n, w) -> block(n+1, w)` per basis element, present
    /// whenever both blocks are assembled.
    dmat: BTreeMap<(i64, i64), Vec<SparseVec>>,
}

/// Exact cohomology of one block, with the splitting used by the transfer.
///
/// The middle block decomposes as `H ⊕ R ⊕ dR`: chosen cycle representatives
/// spanning cohomology, a complement `R` of the kernel, and the image `dR` of
/// the incoming differential.  The contraction `G` maps `d(r) -> r` and kills
/// `H ⊕ R`.
#[derive(Debug, Clone)]
pub struct BlockCohomology {
    pub degree: i64,
    pub weight: i64,
    pub dim: usize,
    /// Cycle representatives of a basis of H, as coordinate vectors.
    pub h_reps: Vec<SparseVec>,
    /// Complement of the kernel.
    pub r_basis: Vec<SparseVec>,
    /// `d` applied to the previous block's `r_basis` preimages: a basis of
    /// the image.
    pub dr_basis: Vec<SparseVec>,
    /// Preimages in the previous block: `d(pre_r[i]) = dr_basis[i]`.
    pub preimages: Vec<SparseVec>,
    /// Echelon of `[h_reps | r_basis | dr_basis]` with certificates, used to
    /// decompose arbitrary vectors.
    decomposer: Echelon,
}

/// Decomposition of a block vector into the `H ⊕ R ⊕ dR` pieces.
#[derive(Debug, Clone)]
pub struct Split {
    pub h_coords: Vec<Scalar>,
    pub r_part: SparseVec,
    pub dr_coords: Vec<Scalar>,
}

impl BigradedComplex {
    pub fn table(&self) -> &Arc<GeneratorTable> {
        &self.model.table
    }

    pub fn block(&self, degree: i64, weight: i64) -> Result<&Block> {
        self.blocks
            .get(&(degree, weight))
            .ok_or(Error::TruncationRequired { degree, weight })
    }

    pub fn has_block(&self, degree: i64, weight: i64) -> bool {
        self.blocks.contains_key(&(degree, weight))
    }

    pub fn blocks(&self) -> impl Iterator<Item = &Block> {
        self.blocks.values()
    }

    /// Sum of block dimensions in one degree across the assembled weights.
    pub fn degree_dim(&self, degree: i64) -> usize {
        self.blocks
            .iter()
            .filter(|((n, _), _)| *n == degree)
            .map(|(_, b)| b.dim())
            .sum()
    }

    /// Coordinates of a weight-homogeneous component of a derivation in its
    /// block basis.  Errors when the derivation does not lie in an assembled
    /// block.
    pub fn coords(&self, theta: &Derivation) -> Result<BTreeMap<(i64, i64), SparseVec>> {
        let mut out = BTreeMap::new();
        for (w, part) in theta.weight_components() {
            let degree = part.degree();
            let block = self.block(degree, w)?;
            let mut v = SparseVec::new();
            for (x, val) in part.values() {
                for (bw, c) in val.terms() {
                    let key = BlockBasisElem { target: *x, word: bw.clone() };
                    let idx = block.index.get(&key).ok_or(Error::TruncationRequired {
                        degree,
                        weight: w,
                    })?;
                    v.insert(*idx, c.clone());
                }
            }
            out.insert((degree, w), v);
        }
        Ok(out)
    }

    /// The derivation corresponding to a coordinate vector of one block.
    pub fn from_coords(&self, degree: i64, weight: i64, v: &SparseVec) -> Result<Derivation> {
        let block = self.block(degree, weight)?;
        let mut der = Derivation::zero(self.table().clone(), degree);
        for (&i, c) in v {
            let elem = &block.basis[i];
            let le = LieElement::from_basis_word(self.table().clone(), elem.word.clone())
                .scale(c);
            der = der.add(&Derivation::single(elem.target, le)?)?;
        }
        Ok(der)
    }

    /// Matrix rows of `d` out of block `(degree, weight)`.
    pub fn d_rows(&self, degree: i64, weight: i64) -> Result<&Vec<SparseVec>> {
        self.dmat
            .get(&(degree, weight))
            .ok_or(Error::TruncationRequired { degree: degree + 1, weight })
    }

    /// Exact kernel/image computation on one block, with deterministic
    /// representatives and the `H ⊕ R ⊕ dR` splitting.
    pub fn cohomology(&self, degree: i64, weight: i64) -> Result<BlockCohomology> {
        let block = self.block(degree, weight)?;
        let n = block.dim();
        // Kernel of d out of this block (everything, if d has no target
        // block because the degree above is not assembled: then d must map
        // to an empty block, which we verify).
        let kernel: Vec<SparseVec> = match self.dmat.get(&(degree, weight)) {
            Some(rows) => kernel_basis(rows),
            None => {
                // No outgoing matrix assembled: legitimate only if the
                // outgoing block would be empty; then everything is a cycle.
                let out_dim = basis_count(self.table(), degree + 1, weight);
                if out_dim != 0 {
                    return Err(Error::TruncationRequired { degree: degree + 1, weight });
                }
                (0..n)
                    .map(|i| {
                        let mut v = SparseVec::new();
                        v.insert(i, scalar::one());
                        v
                    })
                    .collect()
            }
        };
        // Image of d from below, with preimages.
        let (dr_basis, preimages) = match self.dmat.get(&(degree - 1, weight)) {
            Some(rows) => {
                let mut ech = Echelon::new(true);
                let mut img = Vec::new();
                let mut pre = Vec::new();
                for (i, r) in rows.iter().enumerate() {
                    if r.is_empty() {
                        continue;
                    }
                    if ech.insert(r).is_some() {
                        img.push(r.clone());
                        let mut p = SparseVec::new();
                        p.insert(i, scalar::one());
                        pre.push(p);
                    }
                }
                (img, pre)
            }
            None => {
                let below = basis_count(self.table(), degree - 1, weight);
                if below != 0 {
                    return Err(Error::TruncationRequired { degree: degree - 1, weight });
                }
                (Vec::new(), Vec::new())
            }
        };
        // H representatives: kernel vectors independent modulo the image.
        let mut ech = Echelon::new(false);
        for v in &dr_basis {
            ech.insert(v);
        }
        let mut h_reps = Vec::new();
        for v in &kernel {
            if ech.insert(v).is_some() {
                h_reps.push(v.clone());
            }
        }
        // R: standard basis vectors extending the kernel to the whole block.
        let mut ech_k = Echelon::new(false);
        for v in &kernel {
            ech_k.insert(v);
        }
        let mut r_basis = Vec::new();
        for i in 0..n {
            let mut v = SparseVec::new();
            v.insert(i, scalar::one());
            if ech_k.insert(&v).is_some() {
                r_basis.push(v);
            }
        }
        let mut decomposer = Echelon::new(true);
        for v in h_reps.iter().chain(&r_basis).chain(&dr_basis) {
            if decomposer.insert(v).is_none() {
                return Err(Error::Input(
                    "internal: splitting vectors are dependent".into(),
                ));
            }
        }
        if decomposer.rank() != n {
            return Err(Error::Input("internal: splitting does not span the block".into()));
        }
        Ok(BlockCohomology {
            degree,
            weight,
            dim: h_reps.len(),
            h_reps,
            r_basis,
            dr_basis,
            preimages,
            decomposer,
        })
    }
}

impl BlockCohomology {
    /// Decomposes a coordinate vector as `h + r + dr`.
    pub fn split(&self, v: &SparseVec) -> Split {
        let combo = self
            .decomposer
            .membership(v)
            .expect("splitting spans the block");
        let nh = self.h_reps.len();
        let nr = self.r_basis.len();
        let mut h_coords = vec![scalar::zero(); nh];
        let mut r_part = SparseVec::new();
        let mut dr_coords = vec![scalar::zero(); self.dr_basis.len()];
        for (&j, c) in &combo {
            if j < nh {
                h_coords[j] = c.clone();
            } else if j < nh + nr {
                sv_add_scaled(&mut r_part, &self.r_basis[j - nh], c);
            } else {
                dr_coords[j - nh - nr] = c.clone();
            }
        }
        Split { h_coords, r_part, dr_coords }
    }

    /// The contraction `G`: maps the `dR` part to its preimage in the block
    /// below (coordinates there), killing `H ⊕ R`.
    pub fn contraction(&self, v: &SparseVec) -> SparseVec {
        let split = self.split(v);
        let mut out = SparseVec::new();
        for (i, c) in split.dr_coords.iter().enumerate() {
            if !c.is_zero() {
                sv_add_scaled(&mut out, &self.preimages[i], c);
            }
        }
        out
    }

    /// Projection to H coordinates.
    pub fn project_h(&self, v: &SparseVec) -> Vec<Scalar> {
        self.split(v).h_coords
    }

    /// The class of a vector; `None` when the vector is not a cycle
    /// (nonzero R part).
    pub fn class_of(&self, v: &SparseVec) -> Option<Vec<Scalar>> {
        let split = self.split(v);
        split.r_part.is_empty().then_some(split.h_coords)
    }
}

fn basis_count(table: &Arc<GeneratorTable>, degree: i64, weight: i64) -> usize {
    let mut count = 0;
    for (x, g) in table.iter() {
        let _ = x;
        let word_weight = g.weight - weight;
        let word_degree = g.degree + degree;
        if word_weight <= 0 {
            continue;
        }
        count += basis_of_bidegree(table, word_degree, word_weight).len();
    }
    count
}

/// Assembles the controlling truncation: all blocks with degree in
/// `degrees` and weight in `[weight_min, -1]`, and the differential matrices
/// between assembled neighbours.
pub fn assemble_controlling(
    model: &QuillenModel,
    degrees: &[i64],
    weight_min: i64,
) -> Result<BigradedComplex> {
    if weight_min >= 0 {
        return Err(Error::Input(format!(
            "weight bound must be negative, got {weight_min}"
        )));
    }
    if !model.table.weights_positive() {
        return Err(Error::Input(
            "generator weights must be positive to bound enumeration".into(),
        ));
    }
    let table = &model.table;
    let mut degrees: Vec<i64> = degrees.to_vec();
    degrees.sort_unstable();
    degrees.dedup();
    let mut blocks = BTreeMap::new();
    for &n in &degrees {
        for w in weight_min..=-1 {
            let mut basis = Vec::new();
            for (x, g) in table.iter() {
                let word_weight = g.weight - w;
                let word_degree = g.degree + n;
                if word_weight <= 0 {
                    continue;
                }
                for bw in basis_of_bidegree(table, word_degree, word_weight) {
                    basis.push(BlockBasisElem { target: x, word: bw });
                }
            }
            basis.sort();
            let index = basis.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();
            blocks.insert((n, w), Block { degree: n, weight: w, basis, index });
        }
    }
    let mut cx = BigradedComplex {
        model: model.clone(),
        weight_min,
        degrees: degrees.clone(),
        blocks,
        dmat: BTreeMap::new(),
    };
    // Differential matrices wherever source and target are both assembled.
    let keys: Vec<(i64, i64)> = cx.blocks.keys().copied().collect();
    for (n, w) in keys {
        if !cx.has_block(n + 1, w) {
            continue;
        }
        let src = cx.blocks.get(&(n, w)).unwrap().clone();
        let mut rows = Vec::with_capacity(src.dim());
        for elem in &src.basis {
            let le =
                LieElement::from_basis_word(table.clone(), elem.word.clone());
            let der = Derivation::single(elem.target, le)?;
            let image = differential_der(&model.differential, &der)?;
            let row = if image.is_zero() {
                SparseVec::new()
            } else {
                let coords = cx.coords(&image)?;
                debug_assert!(coords.len() <= 1);
                coords.into_values().next().unwrap_or_default()
            };
            rows.push(row);
        }
        cx.dmat.insert((n, w), rows);
    }
    // d² = 0 blockwise.
    for ((n, w), rows) in &cx.dmat {
        if let Some(next) = cx.dmat.get(&(n + 1, *w)) {
            for row in rows {
                let mut image = SparseVec::new();
                for (&j, c) in row {
                    sv_add_scaled(&mut image, &next[j], c);
                }
                if !image.is_empty() {
                    return Err(Error::ModelConstruction(format!(
                        "composite differential is nonzero out of block ({n}, {w})"
                    )));
                }
            }
        }
    }
    Ok(cx)
}
