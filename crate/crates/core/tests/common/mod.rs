//! Shared test oracles, independent of the rewriting engine under test.
//!
//! The free graded Lie algebra embeds into the tensor algebra by expanding
//! brackets as graded commutators.  All expected values here are computed on
//! that side and compared against the canonical-basis arithmetic.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use num::Zero;
use rand::rngs::StdRng;
use rand::Rng;

use rhodef::gens::GeneratorTable;
use rhodef::lie::{Expr, LieElement};
use rhodef::scalar::{self, Scalar};
use rhodef::word::Tree;

/// An element of the free associative algebra: words over generator indices.
pub type TensorElem = BTreeMap<Vec<u32>, Scalar>;

pub fn tensor_add(acc: &mut TensorElem, other: &TensorElem, scale: &Scalar) {
    for (w, c) in other {
        let e = acc.entry(w.clone()).or_insert_with(scalar::zero);
        *e += c * scale;
        if e.is_zero() {
            acc.remove(w);
        }
    }
}

pub fn tensor_concat(a: &TensorElem, b: &TensorElem) -> TensorElem {
    let mut out = TensorElem::new();
    for (wa, ca) in a {
        for (wb, cb) in b {
            let mut w = wa.clone();
            w.extend_from_slice(wb);
            let e = out.entry(w).or_insert_with(scalar::zero);
            *e += ca * cb;
            if e.is_zero() {
                let key = out.iter().find(|(_, v)| v.is_zero()).map(|(k, _)| k.clone());
                if let Some(k) = key {
                    out.remove(&k);
                }
            }
        }
    }
    out
}

/// Graded commutator in the tensor algebra.
pub fn tensor_commutator(a: &TensorElem, da: i64, b: &TensorElem, db: i64) -> TensorElem {
    let mut out = tensor_concat(a, b);
    let sign = if (da.rem_euclid(2)) * (db.rem_euclid(2)) == 1 {
        scalar::one()
    } else {
        -scalar::one()
    };
    tensor_add(&mut out, &tensor_concat(b, a), &sign);
    out
}

/// Expands a bracketing tree into the tensor algebra; returns the expansion
/// and its degree.
pub fn expand_tree(table: &GeneratorTable, t: &Tree) -> (TensorElem, i64) {
    match t {
        Tree::Leaf(l) => {
            let mut e = TensorElem::new();
            e.insert(vec![*l], scalar::one());
            (e, table.degree(*l))
        }
        Tree::Node(a, b) => {
            let (ea, da) = expand_tree(table, a);
            let (eb, db) = expand_tree(table, b);
            (tensor_commutator(&ea, da, &eb, db), da + db)
        }
    }
}

pub fn expr_to_tree(table: &GeneratorTable, e: &Expr) -> Tree {
    match e {
        Expr::Gen(n) => Tree::Leaf(table.id_of(n).unwrap()),
        Expr::Bracket(a, b) => Tree::Node(
            Box::new(expr_to_tree(table, a)),
            Box::new(expr_to_tree(table, b)),
        ),
    }
}

/// The image of a normalized element under the embedding: expand every basis
/// word's canonical bracketing.
pub fn expand_element(e: &LieElement) -> TensorElem {
    let mut out = TensorElem::new();
    for (w, c) in e.terms() {
        let (ew, _) = expand_tree(e.table(), &w.tree());
        tensor_add(&mut out, &ew, c);
    }
    out
}

/// Rank of the span of tensor elements, by exact Gaussian elimination.
pub fn tensor_rank(rows: &[TensorElem]) -> usize {
    let mut cols: Vec<Vec<u32>> = Vec::new();
    let mut col_index: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
    for r in rows {
        for w in r.keys() {
            if !col_index.contains_key(w) {
                col_index.insert(w.clone(), cols.len());
                cols.push(w.clone());
            }
        }
    }
    let mut mat: Vec<Vec<Scalar>> = rows
        .iter()
        .map(|r| {
            let mut v = vec![scalar::zero(); cols.len()];
            for (w, c) in r {
                v[col_index[w]] = c.clone();
            }
            v
        })
        .collect();
    let mut rank = 0usize;
    let ncols = cols.len();
    for col in 0..ncols {
        let Some(p) = (rank..mat.len()).find(|&i| !mat[i][col].is_zero()) else {
            continue;
        };
        mat.swap(rank, p);
        let inv = mat[rank][col].clone();
        for i in 0..mat.len() {
            if i != rank && !mat[i][col].is_zero() {
                let f = &mat[i][col] / &inv;
                for j in col..ncols {
                    let s = &mat[rank][j] * &f;
                    mat[i][j] = &mat[i][j] - &s;
                }
            }
        }
        rank += 1;
        if rank == mat.len() {
            break;
        }
    }
    rank
}

/// A random bracket tree with leaves drawn from the first `r` generators.
pub fn random_tree(rng: &mut StdRng, r: u32, len: usize) -> Tree {
    if len == 1 {
        Tree::Leaf(rng.random_range(0..r))
    } else {
        let left = rng.random_range(1..len);
        Tree::Node(
            Box::new(random_tree(rng, r, left)),
            Box::new(random_tree(rng, r, len - left)),
        )
    }
}

pub fn tree_to_expr(table: &GeneratorTable, t: &Tree) -> Expr {
    match t {
        Tree::Leaf(l) => Expr::gen(table.name(*l)),
        Tree::Node(a, b) => Expr::bracket(tree_to_expr(table, a), tree_to_expr(table, b)),
    }
}

/// Generator tables used for kernel oracle sweeps: even, odd and mixed
/// degree profiles.
pub fn oracle_tables() -> Vec<Arc<GeneratorTable>> {
    vec![
        GeneratorTable::from_triples(&[("a", -2, 3), ("b", -2, 3), ("c", -2, 3)]).unwrap(),
        GeneratorTable::from_triples(&[("a", -1, 2), ("b", -1, 2), ("c", -1, 2)]).unwrap(),
        GeneratorTable::from_triples(&[("a", -1, 2), ("b", -2, 3), ("c", -3, 4)]).unwrap(),
        GeneratorTable::from_triples(&[("a", -2, 3), ("b", -7, 8), ("c", -12, 13)]).unwrap(),
    ]
}
