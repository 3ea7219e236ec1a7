//! Transferred minimal L∞ structure on the cohomology of the controlling
//! algebra, by successive approximation of the Maurer-Cartan equation
//! through a chosen splitting `L = H ⊕ R ⊕ dR`, and the miniversal scheme's
//! defining polynomials in tangent coordinates.
//!
//! The recursion solves `F = d x + ½[x,x]` order by order for
//! `x = Σ h_i t^i + Σ k_j s^j + corrections`, with even coordinates `t^i`
//! dual to a basis of H¹ and odd coordinates `s^j` dual to a basis of H²;
//! at every order the `dR` component of `F` is cancelled by the contraction
//! and the `H` component is recorded as an evaluated bracket.  Signs and
//! coefficients of the brackets are therefore fixed by the master equation
//! itself; the generalized Jacobi checker validates them independently.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::Zero;

use crate::complex::{BigradedComplex, BlockCohomology};
use crate::derivation::{bracket_der, differential_der, Derivation};
use crate::error::{Error, Result};
use crate::lie::parity;
use crate::mcideal::{McGenerator, McIdeal};
use crate::poly::{Coord, CoordTable, Monomial, Polynomial};
use crate::scalar::{self, Scalar};

/// A monomial in even variables `t^i` and odd (anticommuting, square-zero)
/// variables `s^j`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SuperMono {
    /// Sorted `(variable, exponent)` pairs.
    pub even: Vec<(u32, u32)>,
    /// Strictly increasing odd variable indices.
    pub odd: Vec<u32>,
}

impl SuperMono {
    pub fn even_var(i: u32) -> Self {
        SuperMono { even: vec![(i, 1)], odd: Vec::new() }
    }

    pub fn odd_var(j: u32) -> Self {
        SuperMono { even: Vec::new(), odd: vec![j] }
    }

    pub fn order(&self) -> u32 {
        self.even.iter().map(|(_, e)| e).sum::<u32>() + self.odd.len() as u32
    }

    pub fn odd_parity(&self) -> u8 {
        (self.odd.len() % 2) as u8
    }

    /// The even part as a sorted multiset of variable indices.
    pub fn even_multiset(&self) -> Vec<u32> {
        let mut out = Vec::new();
        for &(i, e) in &self.even {
            for _ in 0..e {
                out.push(i);
            }
        }
        out
    }

    /// Product with the Koszul sign of merging the odd parts; `None` when an
    /// odd variable repeats.
    pub fn mul(&self, other: &SuperMono) -> Option<(SuperMono, bool)> {
        let mut even = self.even.clone();
        for &(i, e) in &other.even {
            match even.iter_mut().find(|(j, _)| *j == i) {
                Some((_, f)) => *f += e,
                None => even.push((i, e)),
            }
        }
        even.sort_unstable();
        // Count inversions between the two sorted odd lists.
        let mut inversions = 0usize;
        for &x in &self.odd {
            for &y in &other.odd {
                if x == y {
                    return None;
                }
                if x > y {
                    inversions += 1;
                }
            }
        }
        let mut odd = self.odd.clone();
        odd.extend_from_slice(&other.odd);
        odd.sort_unstable();
        Some((SuperMono { even, odd }, inversions % 2 == 1))
    }
}

/// Chosen cohomology representatives per degree, flattened across weights.
#[derive(Debug, Clone)]
pub struct HBasis {
    /// `(weight, representative)` in block order.
    pub h1: Vec<(i64, Derivation)>,
    pub h2: Vec<(i64, Derivation)>,
    pub h3: Vec<(i64, Derivation)>,
}

/// The splitting data backing the transfer: block cohomologies for degrees
/// 1..=3 over the assembled weights.
pub struct TransferData {
    pub cohom: BTreeMap<(i64, i64), BlockCohomology>,
    pub basis: HBasis,
    /// Global index offset of each block's H classes: `(degree, weight) ->
    /// offset`.
    offsets: BTreeMap<(i64, i64), usize>,
}

impl TransferData {
    pub fn new(cx: &BigradedComplex) -> Result<TransferData> {
        let mut cohom = BTreeMap::new();
        let mut offsets = BTreeMap::new();
        let mut h = [Vec::new(), Vec::new(), Vec::new()];
        for degree in 1..=3i64 {
            let mut offset = 0usize;
            for w in cx.weight_min..=-1 {
                if !cx.has_block(degree, w) {
                    continue;
                }
                let bc = cx.cohomology(degree, w)?;
                offsets.insert((degree, w), offset);
                offset += bc.dim;
                for rep in &bc.h_reps {
                    h[(degree - 1) as usize].push((w, cx.from_coords(degree, w, rep)?));
                }
                cohom.insert((degree, w), bc);
            }
        }
        let [h1, h2, h3] = h;
        Ok(TransferData { cohom, basis: HBasis { h1, h2, h3 }, offsets })
    }

    fn global_h_index(&self, degree: i64, weight: i64, local: usize) -> usize {
        self.offsets[&(degree, weight)] + local
    }
}

/// The transferred brackets, evaluated on the chosen representatives.
///
/// `t_brackets[m]` is the coefficient of the monomial `t^m` in the
/// H-projection of the master-equation value, an H²-coordinate vector; the
/// symmetric bracket on the classes indexed by the multiset `m` is
/// `(∏ multiplicities!) ·` that coefficient.  `s_brackets[(j, m)]` plays the
/// same role with one H²-class argument `k_j` and values in H³.
pub struct LInftyBrackets {
    pub cutoff: u32,
    /// Whether the splitting has no complement anywhere (`R = dR = 0`), so
    /// the transferred structure is provably strict (no brackets of arity
    /// three or more).
    pub strict: bool,
    pub basis: HBasis,
    pub t_brackets: BTreeMap<Vec<u32>, Vec<Scalar>>,
    pub s_brackets: BTreeMap<(u32, Vec<u32>), Vec<Scalar>>,
    /// Order-2 corrections `x₂` per even monomial: the bracket witnesses
    /// `⟨h_i, h_j⟩` (up to the recursion's normalization).
    pub pair_witnesses: BTreeMap<Vec<u32>, Derivation>,
    /// Nonzero R-components of the master-equation value in the pure-even
    /// sector, violating the master identity if present.
    pub master_residuals: Vec<(Vec<u32>, Derivation)>,
    /// The full correction series, for recomputation-style checks.
    pub x_series: BTreeMap<SuperMono, Derivation>,
}

/// Runs the successive-approximation transfer up to the given polynomial
/// order.  Monomials with two or more odd variables are truncated away; the
/// retained sectors are exactly what the miniversal ideal and the
/// generalized Jacobi checks up to arity `cutoff` consume.
pub fn transfer(cx: &BigradedComplex, cutoff: u32) -> Result<LInftyBrackets> {
    if cutoff < 2 {
        return Err(Error::Precondition("cutoff must be at least 2".into()));
    }
    let data = TransferData::new(cx)?;
    let table = cx.table().clone();
    let mut x: BTreeMap<SuperMono, Derivation> = BTreeMap::new();
    for (i, (_, h)) in data.basis.h1.iter().enumerate() {
        x.insert(SuperMono::even_var(i as u32), h.clone());
    }
    for (j, (_, k)) in data.basis.h2.iter().enumerate() {
        x.insert(SuperMono::odd_var(j as u32), k.clone());
    }
    let strict = data.cohom.values().all(|c| c.r_basis.is_empty());
    let mut t_brackets: BTreeMap<Vec<u32>, Vec<Scalar>> = BTreeMap::new();
    let mut s_brackets: BTreeMap<(u32, Vec<u32>), Vec<Scalar>> = BTreeMap::new();
    let mut pair_witnesses = BTreeMap::new();
    let mut master_residuals = Vec::new();

    for n in 2..=cutoff {
        // P_n = ½ Σ_{a+b=n} [x_a ⊗ λ, x_b ⊗ μ], coefficients on the right:
        // [u ⊗ λ, v ⊗ μ] = (-1)^{|λ||v|} [u, v] ⊗ λμ.
        let mut p: BTreeMap<SuperMono, Derivation> = BTreeMap::new();
        let terms: Vec<(SuperMono, Derivation)> =
            x.iter().map(|(m, d)| (m.clone(), d.clone())).collect();
        for (ma, da) in &terms {
            for (mb, db) in &terms {
                if ma.order() + mb.order() != n {
                    continue;
                }
                let Some((m, negative)) = ma.mul(mb) else { continue };
                if m.odd.len() >= 2 {
                    continue;
                }
                let br = bracket_der(da, db)?;
                if br.is_zero() {
                    continue;
                }
                let mut c = scalar::ratio(1, 2);
                if negative {
                    c = -c;
                }
                if ma.odd_parity() * parity(db.degree()) == 1 {
                    c = -c;
                }
                let entry = p.entry(m).or_insert_with(|| Derivation::zero(table.clone(), 0));
                let merged = if entry.is_zero() { br.scale(&c) } else { entry.add(&br.scale(&c))? };
                *entry = merged;
            }
        }
        // Split every component; cancel dR with a correction, record H.
        for (mono, der) in p {
            if der.is_zero() {
                continue;
            }
            let degree = der.degree();
            for (w, part) in der.weight_components() {
                let Some(coh) = data.cohom.get(&(degree, w)) else {
                    return Err(Error::TruncationRequired { degree, weight: w });
                };
                let coords = cx.coords(&part)?;
                let v = coords.get(&(degree, w)).cloned().unwrap_or_default();
                let split = coh.split(&v);
                // Record the H component.
                if degree == 2 && mono.odd.is_empty() {
                    let key = mono.even_multiset();
                    let vecref = t_brackets
                        .entry(key)
                        .or_insert_with(|| vec![scalar::zero(); data.basis.h2.len()]);
                    for (local, c) in split.h_coords.iter().enumerate() {
                        if !c.is_zero() {
                            vecref[data.global_h_index(2, w, local)] += c;
                        }
                    }
                } else if degree == 3 && mono.odd.len() == 1 {
                    let key = (mono.odd[0], mono.even_multiset());
                    let vecref = s_brackets
                        .entry(key)
                        .or_insert_with(|| vec![scalar::zero(); data.basis.h3.len()]);
                    for (local, c) in split.h_coords.iter().enumerate() {
                        if !c.is_zero() {
                            vecref[data.global_h_index(3, w, local)] += c;
                        }
                    }
                }
                // R component: obstruction to the master identity.
                if !split.r_part.is_empty() && mono.odd.is_empty() {
                    let res = cx.from_coords(degree, w, &split.r_part)?;
                    master_residuals.push((mono.even_multiset(), res));
                }
                // Cancel the dR component: x_n -= G(F_n).
                let pre = coh.contraction(&v);
                if !pre.is_empty() {
                    let corr = cx.from_coords(degree - 1, w, &pre)?.scale(&-scalar::one());
                    let entry = x
                        .entry(mono.clone())
                        .or_insert_with(|| Derivation::zero(table.clone(), degree - 1));
                    let merged =
                        if entry.is_zero() { corr } else { entry.add(&corr)? };
                    *entry = merged;
                    if n == 2 && mono.odd.is_empty() {
                        pair_witnesses
                            .insert(mono.even_multiset(), x[&mono].clone());
                    }
                }
            }
        }
    }
    // Normalize away explicit zero vectors.
    t_brackets.retain(|_, v| v.iter().any(|c| !c.is_zero()));
    s_brackets.retain(|_, v| v.iter().any(|c| !c.is_zero()));
    Ok(LInftyBrackets {
        cutoff,
        strict,
        basis: data.basis,
        t_brackets,
        s_brackets,
        pair_witnesses,
        master_residuals,
        x_series: x,
    })
}

fn multiplicity_factor(multiset: &[u32]) -> Scalar {
    let mut f = scalar::one();
    let mut run = 1i64;
    for w in multiset.windows(2) {
        if w[0] == w[1] {
            run += 1;
            f *= scalar::int(run);
        } else {
            run = 1;
        }
    }
    f
}

impl LInftyBrackets {
    /// The evaluated symmetric bracket on H¹ classes, as H² coordinates.
    pub fn ell_t(&self, multiset: &[u32]) -> Vec<Scalar> {
        let mut key = multiset.to_vec();
        key.sort_unstable();
        let factor = multiplicity_factor(&key);
        match self.t_brackets.get(&key) {
            Some(v) => v.iter().map(|c| c * &factor).collect(),
            None => vec![scalar::zero(); self.basis.h2.len()],
        }
    }

    /// The evaluated bracket with one H² argument, as H³ coordinates.
    pub fn ell_s(&self, j: u32, multiset: &[u32]) -> Vec<Scalar> {
        let mut key = multiset.to_vec();
        key.sort_unstable();
        let factor = multiplicity_factor(&key);
        match self.s_brackets.get(&(j, key)) {
            Some(v) => v.iter().map(|c| c * &factor).collect(),
            None => vec![scalar::zero(); self.basis.h3.len()],
        }
    }
}

/// The miniversal scheme: one polynomial generator per H² class, in the
/// tangent coordinates `t^i` dual to the H¹ basis.
pub fn miniversal_ideal(br: &LInftyBrackets) -> Result<McIdeal> {
    // Weight bookkeeping: the largest arity that can pair H¹ weights into an
    // H² weight must not exceed the cutoff.
    let h1w: Vec<i64> = br.basis.h1.iter().map(|(w, _)| *w).collect();
    let h2w: Vec<i64> = br.basis.h2.iter().map(|(w, _)| *w).collect();
    if let (false, Some(&w1min), Some(&w1max), Some(&w2min)) =
        (br.strict, h1w.iter().min(), h1w.iter().max(), h2w.iter().min())
    {
        let mut needed = 0u32;
        for n in 2..=(-w2min).max(2) as u32 {
            let lo = w1min * n as i64;
            let hi = w1max * n as i64;
            if h2w.iter().any(|&w2| lo <= w2 && w2 <= hi) {
                needed = n;
            }
        }
        if needed > br.cutoff {
            return Err(Error::Precondition(format!(
                "cutoff {} is insufficient: arity-{} brackets can be nonzero by weight bookkeeping",
                br.cutoff, needed
            )));
        }
    }
    let coords = CoordTable::new(
        (0..br.basis.h1.len())
            .map(|i| Coord {
                name: format!("t{}", i + 1),
                content: br.basis.h1[i].1.content().unwrap_or_default(),
                weight: br.basis.h1[i].0,
            })
            .collect(),
    )?;
    let mut polys: Vec<Polynomial> =
        (0..br.basis.h2.len()).map(|_| Polynomial::zero(coords.clone())).collect();
    for (multiset, coeffs) in &br.t_brackets {
        let mono = Monomial::from_pairs(multiset.iter().map(|&i| (i as usize, 1)).collect());
        for (j, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                polys[j].add_term(mono.clone(), c.clone());
            }
        }
    }
    let generators = polys
        .into_iter()
        .enumerate()
        .filter(|(_, p)| !p.is_zero())
        .map(|(j, poly)| McGenerator {
            label: format!("H2 class {}", j + 1),
            weight: br.basis.h2[j].0,
            poly,
        })
        .collect();
    Ok(McIdeal { coords, generators })
}

/// Exact residuals of the n-Jacobi relation on tuples of H¹ basis classes.
///
/// With `ℓ₁ = 0` the relation reduces to the inner-arity range `2..=n-1`;
/// on degree-1 arguments every unshuffle sign is `+1` (the permutation sign
/// cancels against the Koszul sign of odd arguments).
pub fn check_n_jacobi(
    br: &LInftyBrackets,
    n: u32,
    tuples: &[Vec<u32>],
) -> Result<Vec<(Vec<u32>, Vec<Scalar>)>> {
    if n > br.cutoff {
        return Err(Error::Precondition(format!(
            "n = {n} exceeds the transfer cutoff {}",
            br.cutoff
        )));
    }
    let mut out = Vec::new();
    for tuple in tuples {
        if tuple.len() != n as usize {
            return Err(Error::Input(format!("tuple {tuple:?} does not have length {n}")));
        }
        let mut residual = vec![scalar::zero(); br.basis.h3.len()];
        for k in 2..n.max(2) {
            for sel in subsets_of_size(tuple.len(), k as usize) {
                let (first, rest): (Vec<u32>, Vec<u32>) = {
                    let mut a = Vec::new();
                    let mut b = Vec::new();
                    for (idx, &v) in tuple.iter().enumerate() {
                        if sel.contains(&idx) {
                            a.push(v);
                        } else {
                            b.push(v);
                        }
                    }
                    (a, b)
                };
                let inner = br.ell_t(&first);
                for (j, c) in inner.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let outer = br.ell_s(j as u32, &rest);
                    for (i, o) in outer.iter().enumerate() {
                        residual[i] += c * o;
                    }
                }
            }
        }
        out.push((tuple.clone(), residual));
    }
    Ok(out)
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    rec(0, n, k, &mut current, &mut out);
    out
}

/// Recomputes the master identity from scratch: the pure-even sector of
/// `d x + ½[x,x]` must equal `Σ_j g_j(t) · k_j` for the stored generators.
/// Returns the per-monomial residuals (empty means the identity holds to
/// the cutoff).
pub fn master_identity_check(
    cx: &BigradedComplex,
    br: &LInftyBrackets,
) -> Result<Vec<(Vec<u32>, Derivation)>> {
    let table = cx.table().clone();
    // Pure-even part of the stored series.
    let even_terms: Vec<(SuperMono, Derivation)> = br
        .x_series
        .iter()
        .filter(|(m, _)| m.odd.is_empty())
        .map(|(m, d)| (m.clone(), d.clone()))
        .collect();
    let mut f: BTreeMap<Vec<u32>, Derivation> = BTreeMap::new();
    let add = |key: Vec<u32>, d: Derivation, f: &mut BTreeMap<Vec<u32>, Derivation>| {
        if d.is_zero() {
            return;
        }
        match f.remove(&key) {
            None => {
                f.insert(key, d);
            }
            Some(prev) => {
                let merged = prev.add(&d).expect("same degree");
                if !merged.is_zero() {
                    f.insert(key, merged);
                }
            }
        }
    };
    for (m, d) in &even_terms {
        if m.order() > br.cutoff {
            continue;
        }
        let dd = differential_der(&cx.model.differential, d)?;
        add(m.even_multiset(), dd, &mut f);
    }
    for (ma, da) in &even_terms {
        for (mb, db) in &even_terms {
            let order = ma.order() + mb.order();
            if order > br.cutoff {
                continue;
            }
            let Some((m, neg)) = ma.mul(mb) else { continue };
            let br_ab = bracket_der(da, db)?;
            let mut c = scalar::ratio(1, 2);
            if neg {
                c = -c;
            }
            add(m.even_multiset(), br_ab.scale(&c), &mut f);
        }
    }
    // Subtract Σ_j coeff · k_j per monomial.
    for (key, coeffs) in &br.t_brackets {
        let mut rhs = Derivation::zero(table.clone(), 2);
        for (j, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                rhs = rhs.add(&br.basis.h2[j].1.scale(c))?;
            }
        }
        add(key.clone(), rhs.scale(&-scalar::one()), &mut f);
    }
    Ok(f.into_iter().collect())
}

/// The weights available to H¹ classes, for reporting.
pub fn h1_weights(br: &LInftyBrackets) -> Vec<i64> {
    br.basis.h1.iter().map(|(w, _)| *w).collect()
}

pub fn coord_table_of(br: &LInftyBrackets) -> Result<Arc<CoordTable>> {
    Ok(miniversal_ideal(br)?.coords)
}
