//! The Maurer-Cartan ideal: quadric extraction from the bracket
//! `L¹ ⊗ L¹ -> L²`, multigraded ideal membership with certificates,
//! nilpotency testing, the content/partition induction, and the fan and
//! Segre decompositions of the reduced scheme.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::Zero;

use crate::complex::BigradedComplex;
use crate::derivation::{bracket_der, differential_der, mc_defect, Derivation};
use crate::error::{Error, Result};
use crate::lie::{bracket, LieElement};
use crate::linalg::{sv_add_scaled, Echelon, SparseVec};
use crate::poly::{partition_of_content, Coord, CoordTable, Monomial, Polynomial};
use crate::quillen::QuillenModel;
use crate::scalar::{self, Scalar};
use crate::word::BasisWord;

/// A named element of the chosen L¹ basis.
#[derive(Debug, Clone)]
pub struct NamedDerivation {
    pub name: String,
    pub der: Derivation,
}

/// One generator of the ideal: the transposed column dual to an L² basis
/// element.
#[derive(Debug, Clone)]
pub struct McGenerator {
    /// The L² basis element this generator is dual to.
    pub label: String,
    pub weight: i64,
    pub poly: Polynomial,
}

/// The Maurer-Cartan ideal in the coordinates dual to a chosen L¹ basis.
#[derive(Debug, Clone)]
pub struct McIdeal {
    pub coords: Arc<CoordTable>,
    pub generators: Vec<McGenerator>,
}

/// Extracts the ideal generators: writes `dp + ½[p,p]` for
/// `p = Σ x_u θ_u` over the named basis and reads off one polynomial per L²
/// basis element in range.  Zero generators are dropped.
pub fn mc_generators(cx: &BigradedComplex, basis: &[NamedDerivation]) -> Result<McIdeal> {
    if basis.is_empty() {
        return Err(Error::Precondition("empty L¹ basis".into()));
    }
    for nd in basis {
        if nd.der.degree() != 1 {
            return Err(Error::Precondition(format!(
                "basis element `{}` has degree {}, expected 1",
                nd.name,
                nd.der.degree()
            )));
        }
    }
    // The named set must be a basis of the assembled degree-1 part.
    let total: usize = cx.degree_dim(1);
    if basis.len() != total {
        return Err(Error::Precondition(format!(
            "named basis has {} elements but the degree-1 truncation has dimension {}",
            basis.len(),
            total
        )));
    }
    let mut offsets: BTreeMap<i64, usize> = BTreeMap::new();
    let mut acc = 0usize;
    for w in cx.weight_min..=-1 {
        if let Ok(b) = cx.block(1, w) {
            offsets.insert(w, acc);
            acc += b.dim();
        }
    }
    let mut ech = Echelon::new(false);
    for nd in basis {
        let mut flat = SparseVec::new();
        for ((deg, w), v) in cx.coords(&nd.der)? {
            debug_assert_eq!(deg, 1);
            let off = offsets[&w];
            for (i, c) in v {
                flat.insert(off + i, c);
            }
        }
        if ech.insert(&flat).is_none() {
            return Err(Error::Precondition(format!(
                "named elements are not linearly independent at `{}`",
                nd.name
            )));
        }
    }

    let coords = CoordTable::new(
        basis
            .iter()
            .map(|nd| {
                Ok(Coord {
                    name: nd.name.clone(),
                    content: nd.der.content().ok_or_else(|| {
                        Error::Precondition(format!(
                            "basis element `{}` is not content-homogeneous",
                            nd.name
                        ))
                    })?,
                    weight: nd.der.weight().unwrap_or(0),
                })
            })
            .collect::<Result<Vec<_>>>()?,
    )?;

    // Accumulate polynomial coefficients per L² basis element.
    let mut table: BTreeMap<(i64, i64, usize), Polynomial> = BTreeMap::new();
    let push = |cx: &BigradedComplex,
                    table: &mut BTreeMap<(i64, i64, usize), Polynomial>,
                    der: &Derivation,
                    mono: Monomial,
                    scale: Scalar|
     -> Result<()> {
        if der.is_zero() {
            return Ok(());
        }
        for (w, part) in der.weight_components() {
            if !cx.has_block(2, w) {
                return Err(Error::TruncationRequired { degree: 2, weight: w });
            }
            let coords_map = cx.coords(&part)?;
            for ((_, wc), v) in coords_map {
                for (i, c) in v {
                    table
                        .entry((wc, part.degree(), i))
                        .or_insert_with(|| Polynomial::zero(coords.clone()))
                        .add_term(mono.clone(), &c * &scale);
                }
            }
        }
        Ok(())
    };

    // Linear part dp.
    for (u, nd) in basis.iter().enumerate() {
        let ddu = differential_der(&cx.model.differential, &nd.der)?;
        push(cx, &mut table, &ddu, Monomial::var(u), scalar::one())?;
    }
    // Quadratic part ½[p,p].
    for (u, nu) in basis.iter().enumerate() {
        for (v, nv) in basis.iter().enumerate().skip(u) {
            let br = bracket_der(&nu.der, &nv.der)?;
            let scale = if u == v { scalar::ratio(1, 2) } else { scalar::one() };
            let mono = Monomial::var(u).mul(&Monomial::var(v));
            push(cx, &mut table, &br, mono, scale)?;
        }
    }

    let mut generators = Vec::new();
    for ((w, _deg2, i), poly) in table {
        if poly.is_zero() {
            continue;
        }
        let block = cx.block(2, w)?;
        let elem = &block.basis[i];
        let label = format!(
            "{} d{}",
            elem.word.display(cx.table()),
            cx.table().name(elem.target)
        );
        generators.push(McGenerator { label, weight: w, poly });
    }
    Ok(McIdeal { coords, generators })
}

/// The ideal in the coordinates dual to a user-supplied L² basis, together
/// with the change of basis: row `j` expands the `j`-th named L² element in
/// the canonical block coordinates.
pub struct BasisChangedIdeal {
    pub ideal: McIdeal,
    pub l2_names: Vec<String>,
    pub change_of_basis: Vec<SparseVec>,
}

/// As [`mc_generators`], but the transposed columns are read off against a
/// named basis of the degree-2 truncation instead of the canonical one.
/// The named elements must form a basis; the returned rows record the
/// change of basis against the canonical block coordinates.
pub fn mc_generators_in_basis(
    cx: &BigradedComplex,
    basis: &[NamedDerivation],
    l2_basis: &[NamedDerivation],
) -> Result<BasisChangedIdeal> {
    let canonical = mc_generators(cx, basis)?;
    // Flatten the degree-2 truncation.
    let mut offsets: BTreeMap<i64, usize> = BTreeMap::new();
    let mut total = 0usize;
    for w in cx.weight_min..=-1 {
        if let Ok(b) = cx.block(2, w) {
            offsets.insert(w, total);
            total += b.dim();
        }
    }
    if l2_basis.len() != total {
        return Err(Error::Precondition(format!(
            "named L² set has {} elements but the degree-2 truncation has dimension {total}",
            l2_basis.len()
        )));
    }
    let flat = |der: &Derivation| -> Result<SparseVec> {
        let mut out = SparseVec::new();
        for ((deg, w), v) in cx.coords(der)? {
            if deg != 2 {
                return Err(Error::Precondition("L² basis elements must have degree 2".into()));
            }
            let off = offsets[&w];
            for (i, c) in v {
                out.insert(off + i, c);
            }
        }
        Ok(out)
    };
    let mut ech = Echelon::new(true);
    let mut rows = Vec::new();
    for nd in l2_basis {
        let row = flat(&nd.der)?;
        rows.push(row.clone());
        if ech.insert(&row).is_none() {
            return Err(Error::Precondition(format!(
                "named L² elements are dependent at `{}`",
                nd.name
            )));
        }
    }
    // The canonical generators are indexed by flattened block coordinates;
    // rebuild that indexing, then convert: if e_i = Σ_j (M^{-1})_{ji} g_j,
    // the coefficient polynomials transform by membership certificates of
    // the unit vectors.
    let mut canonical_polys: Vec<Polynomial> =
        vec![Polynomial::zero(canonical.coords.clone()); total];
    for g in &canonical.generators {
        // Recover the flat index of this generator's block element.
        let block = cx.block(2, g.weight)?;
        let idx = block
            .basis
            .iter()
            .position(|e| {
                format!("{} d{}", e.word.display(cx.table()), cx.table().name(e.target))
                    == g.label
            })
            .expect("generator label corresponds to a block element");
        canonical_polys[offsets[&g.weight] + idx] = g.poly.clone();
    }
    // Dual coordinates transform contravariantly: with g_j = Σ_i M_ij e_i,
    // the polynomial dual to g_j is q'_j = Σ_i (M^{-1})_{ji} q_i; the
    // inverse columns are the expansions of the unit vectors e_i in the
    // named basis.
    let mut named_polys: Vec<Polynomial> =
        vec![Polynomial::zero(canonical.coords.clone()); l2_basis.len()];
    for (i, qi) in canonical_polys.iter().enumerate() {
        if qi.is_zero() {
            continue;
        }
        let mut e_i = SparseVec::new();
        e_i.insert(i, scalar::one());
        let combo = ech.membership(&e_i).ok_or_else(|| {
            Error::Precondition("named L² elements do not span the truncation".into())
        })?;
        for (&j, c) in &combo {
            named_polys[j] = named_polys[j].add(&qi.scale(c));
        }
    }
    let mut generators = Vec::new();
    for (j, nd) in l2_basis.iter().enumerate() {
        if !named_polys[j].is_zero() {
            generators.push(McGenerator {
                label: nd.name.clone(),
                weight: nd.der.weight().unwrap_or(0),
                poly: named_polys[j].clone(),
            });
        }
    }
    Ok(BasisChangedIdeal {
        ideal: McIdeal { coords: canonical.coords, generators },
        l2_names: l2_basis.iter().map(|nd| nd.name.clone()).collect(),
        change_of_basis: rows,
    })
}

/// A membership certificate: `p = Σ c_k · m_k · g_{i_k}`.
pub type Certificate = Vec<(Scalar, Monomial, usize)>;

/// Exact ideal membership for a content- and degree-homogeneous polynomial,
/// by linear algebra in its multidegree slice.
pub fn is_in_ideal(p: &Polynomial, ideal: &McIdeal) -> Result<Option<Certificate>> {
    if p.is_zero() {
        return Ok(Some(Vec::new()));
    }
    if p.table != ideal.coords {
        return Err(Error::Input("polynomial is over different coordinates".into()));
    }
    let content = p
        .homogeneous_content()
        .ok_or_else(|| Error::Precondition("polynomial must be content-homogeneous".into()))?;
    let degree = p
        .homogeneous_degree()
        .ok_or_else(|| Error::Precondition("polynomial must be degree-homogeneous".into()))?;

    let mut mono_index: BTreeMap<Monomial, usize> = BTreeMap::new();
    let index_of = |m: &Monomial, mono_index: &mut BTreeMap<Monomial, usize>| -> usize {
        if let Some(&i) = mono_index.get(m) {
            return i;
        }
        let i = mono_index.len();
        mono_index.insert(m.clone(), i);
        i
    };

    let mut ech = Echelon::new(true);
    // Track which (generator, multiplier monomial) each inserted row is.
    let mut provenance: Vec<(Monomial, usize)> = Vec::new();
    for (gi, g) in ideal.generators.iter().enumerate() {
        let Some(gc) = g.poly.homogeneous_content() else { continue };
        let Some(gd) = g.poly.homogeneous_degree() else { continue };
        if gd > degree {
            continue;
        }
        let want: Vec<i64> = content.iter().zip(&gc).map(|(a, b)| a - b).collect();
        for m in monomials_with(&ideal.coords, degree - gd, &want) {
            let prod = g.poly.mul_monomial(&m, &scalar::one());
            let mut row = SparseVec::new();
            for (mm, c) in &prod.terms {
                row.insert(index_of(mm, &mut mono_index), c.clone());
            }
            provenance.push((m, gi));
            ech.insert(&row);
        }
    }
    let mut target = SparseVec::new();
    for (m, c) in &p.terms {
        target.insert(index_of(m, &mut mono_index), c.clone());
    }
    let Some(combo) = ech.membership(&target) else {
        return Ok(None);
    };
    let mut cert: Certificate = Vec::new();
    for (&row, c) in &combo {
        if !c.is_zero() {
            let (m, gi) = &provenance[row];
            cert.push((c.clone(), m.clone(), *gi));
        }
    }
    Ok(Some(cert))
}

/// Expands a certificate back into a polynomial (for consistency checks).
pub fn expand_certificate(ideal: &McIdeal, cert: &Certificate) -> Polynomial {
    let mut out = Polynomial::zero(ideal.coords.clone());
    for (c, m, gi) in cert {
        out = out.add(&ideal.generators[*gi].poly.mul_monomial(m, c));
    }
    out
}

/// All monomials of the given total degree and exact content vector.
pub fn monomials_with(table: &Arc<CoordTable>, degree: u32, content: &[i64]) -> Vec<Monomial> {
    let n = table.len();
    // Suffix bounds for pruning: per content entry, the min/max contribution
    // of one variable among coordinates i..n.
    let dims = content.len();
    let mut min_suffix = vec![vec![0i64; dims]; n + 1];
    let mut max_suffix = vec![vec![0i64; dims]; n + 1];
    for i in (0..n).rev() {
        for k in 0..dims {
            let v = table.coords[i].content.get(k).copied().unwrap_or(0);
            min_suffix[i][k] = v.min(min_suffix[i + 1][k]).min(0).min(v);
            max_suffix[i][k] = v.max(max_suffix[i + 1][k]).max(0).max(v);
        }
    }
    let mut out = Vec::new();
    let mut stack: Vec<(usize, u32)> = Vec::new();
    fn rec(
        table: &CoordTable,
        i: usize,
        deg_left: u32,
        rem: &mut [i64],
        stack: &mut Vec<(usize, u32)>,
        min_suffix: &[Vec<i64>],
        max_suffix: &[Vec<i64>],
        out: &mut Vec<Monomial>,
    ) {
        if i == table.len() {
            if deg_left == 0 && rem.iter().all(|&x| x == 0) {
                out.push(Monomial::from_pairs(stack.clone()));
            }
            return;
        }
        // Feasibility: each remaining entry must lie within deg_left times
        // the suffix bounds.
        for (k, &r) in rem.iter().enumerate() {
            let lo = min_suffix[i][k] * deg_left as i64;
            let hi = max_suffix[i][k] * deg_left as i64;
            if r < lo || r > hi {
                return;
            }
        }
        let c = &table.coords[i].content;
        for e in 0..=deg_left {
            if e > 0 {
                for (k, r) in rem.iter_mut().enumerate() {
                    *r -= c.get(k).copied().unwrap_or(0);
                }
                stack.push((i, e));
            }
            rec(table, i + 1, deg_left - e, rem, stack, min_suffix, max_suffix, out);
            if e > 0 {
                stack.pop();
            }
        }
        // restore rem
        for (k, r) in rem.iter_mut().enumerate() {
            *r += c.get(k).copied().unwrap_or(0) * deg_left as i64;
        }
    }
    let mut rem = content.to_vec();
    rec(&table.clone(), 0, degree, &mut rem, &mut stack, &min_suffix, &max_suffix, &mut out);
    out.sort();
    out.dedup();
    out
}

/// Least power `e <= max_power` with `m^e` in the ideal.
pub fn is_nilpotent_mod(m: &Monomial, ideal: &McIdeal, max_power: u32) -> Result<Option<u32>> {
    if max_power < 1 {
        return Err(Error::Precondition("max_power must be >= 1".into()));
    }
    let base = {
        let mut p = Polynomial::zero(ideal.coords.clone());
        p.add_term(m.clone(), scalar::one());
        p
    };
    for e in 1..=max_power {
        if is_in_ideal(&base.pow(e), ideal)?.is_some() {
            return Ok(Some(e));
        }
    }
    Ok(None)
}

/// Content and partition of a monomial in the ideal's coordinates.
pub fn partition_of(ideal: &McIdeal, m: &Monomial) -> (Vec<i64>, Vec<i64>) {
    let content = m.content(&ideal.coords);
    let partition = partition_of_content(&content);
    (content, partition)
}

/// Outcome of one induction-step query.
#[derive(Debug, Clone)]
pub struct InductionStep {
    pub base_partition: Vec<i64>,
    /// `(monomial, partition, is_higher)` for a'b and ab'.
    pub candidates: Vec<(Monomial, Vec<i64>, bool)>,
    /// The first candidate with strictly higher partition, if any.
    pub witness: Option<Monomial>,
}

/// Checks the induction step: among `a'b` and `ab'`, which has strictly
/// higher partition than `ab` (lexicographically)?
pub fn induction_step_check(
    ideal: &McIdeal,
    a: usize,
    a_prime: usize,
    b: usize,
    b_prime: usize,
) -> Result<InductionStep> {
    let t = &ideal.coords;
    let ca = &t.coords[a].content;
    let ca2 = &t.coords[a_prime].content;
    if ca == ca2 {
        return Err(Error::Precondition(
            "the two A-coordinates must have different content".into(),
        ));
    }
    let ab = Monomial::var(a).mul(&Monomial::var(b));
    let a2b2 = Monomial::var(a_prime).mul(&Monomial::var(b_prime));
    if ab.content(t) != a2b2.content(t) {
        return Err(Error::Precondition("ab and a'b' must have the same content".into()));
    }
    let base = partition_of_content(&ab.content(t));
    let mut candidates = Vec::new();
    let mut witness = None;
    for m in [
        Monomial::var(a_prime).mul(&Monomial::var(b)),
        Monomial::var(a).mul(&Monomial::var(b_prime)),
    ] {
        let p = partition_of_content(&m.content(t));
        let higher = p > base;
        if higher && witness.is_none() {
            witness = Some(m.clone());
        }
        candidates.push((m, p, higher));
    }
    Ok(InductionStep { base_partition: base, candidates, witness })
}

/// Report of the fan decomposition `W_red = A ∨ B`.
#[derive(Debug, Clone)]
pub struct FanReport {
    /// Generators that fail to vanish on A or on B (must be empty).
    pub non_mixed_generators: Vec<String>,
    /// Per mixed product `a*b`: the found nilpotency power, or `None`.
    pub products: Vec<(String, Monomial, Option<u32>)>,
    pub success: bool,
}

/// Verifies that every generator vanishes on both summands of
/// `L¹ = A ⊕ B` and that every mixed coordinate product is nilpotent modulo
/// the ideal within `max_power`.
pub fn fan_decomposition(
    ideal: &McIdeal,
    a_coords: &[usize],
    b_coords: &[usize],
    max_power: u32,
) -> Result<FanReport> {
    let n = ideal.coords.len();
    let mut seen = vec![false; n];
    for &i in a_coords.iter().chain(b_coords) {
        if i >= n || seen[i] {
            return Err(Error::Precondition("A/B split must partition the coordinates".into()));
        }
        seen[i] = true;
    }
    if !seen.iter().all(|&s| s) {
        return Err(Error::Precondition("A/B split must cover all coordinates".into()));
    }
    for g in &ideal.generators {
        if g.poly.homogeneous_degree() != Some(2) {
            return Err(Error::Precondition(format!(
                "fan decomposition expects quadratic generators; `{}` is not",
                g.label
            )));
        }
    }
    let is_a = |i: usize| a_coords.contains(&i);
    // (i) every monomial of every generator mixes A and B.
    let mut non_mixed = Vec::new();
    for g in &ideal.generators {
        let mixed = g.poly.terms.keys().all(|m| {
            let has_a = m.0.iter().any(|&(i, _)| is_a(i));
            let has_b = m.0.iter().any(|&(i, _)| !is_a(i));
            has_a && has_b
        });
        if !mixed {
            non_mixed.push(g.label.clone());
        }
    }
    // (ii) nilpotency of all mixed products.
    let mut products = Vec::new();
    let mut all_nilpotent = true;
    for &a in a_coords {
        for &b in b_coords {
            let m = Monomial::var(a).mul(&Monomial::var(b));
            let power = is_nilpotent_mod(&m, ideal, max_power)?;
            if power.is_none() {
                all_nilpotent = false;
            }
            let name =
                format!("{}*{}", ideal.coords.coords[a].name, ideal.coords.coords[b].name);
            products.push((name, m, power));
        }
    }
    let success = non_mixed.is_empty() && all_nilpotent;
    Ok(FanReport { non_mixed_generators: non_mixed, products, success })
}

/// Result of the primary obstruction computation for a degree-1 derivation.
#[derive(Debug, Clone)]
pub struct ObstructionReport {
    /// The Maurer-Cartan defect `dθ + ½[θ,θ]`.
    pub defect: Derivation,
    /// Whether the class of the defect in H² vanishes.
    pub class_zero: bool,
    /// When zero: ξ with `dξ = defect`.
    pub witness: Option<Derivation>,
    /// When zero and θ is a cycle: θ₂ with `[d,θ₂] = [θ,θ]` (twice the
    /// witness).
    pub square_witness: Option<Derivation>,
}

/// Computes `½[θ,θ] + dθ` and reduces it modulo the image of `d` in the
/// relevant blocks.
pub fn primary_obstruction(cx: &BigradedComplex, theta: &Derivation) -> Result<ObstructionReport> {
    if theta.degree() != 1 {
        return Err(Error::Precondition("obstruction input must have degree 1".into()));
    }
    if theta.weight_components().keys().any(|&w| w >= 0) {
        return Err(Error::Precondition("obstruction input must have negative weight".into()));
    }
    let defect = mc_defect(&cx.model.differential, theta)?;
    if defect.is_zero() {
        let zero = Derivation::zero(cx.table().clone(), 1);
        return Ok(ObstructionReport {
            defect,
            class_zero: true,
            witness: Some(zero.clone()),
            square_witness: Some(zero),
        });
    }
    let mut witness = Derivation::zero(cx.table().clone(), 1);
    let mut class_zero = true;
    for (w, part) in defect.weight_components() {
        if !cx.has_block(2, w) {
            return Err(Error::TruncationRequired { degree: 2, weight: w });
        }
        let coords = cx.coords(&part)?;
        let v = coords.get(&(2, w)).cloned().unwrap_or_default();
        // Image of d: block(1, w) -> block(2, w).
        let rows = cx.d_rows(1, w)?;
        let mut ech = Echelon::new(true);
        let mut provenance = Vec::new();
        for (i, r) in rows.iter().enumerate() {
            if !r.is_empty() && ech.insert(r).is_some() {
                provenance.push(i);
            }
        }
        match ech.membership(&v) {
            None => {
                class_zero = false;
            }
            Some(combo) => {
                let mut pre = SparseVec::new();
                for (&k, c) in &combo {
                    let mut unit = SparseVec::new();
                    unit.insert(provenance[k], scalar::one());
                    sv_add_scaled(&mut pre, &unit, c);
                }
                let xi = cx.from_coords(1, w, &pre)?;
                witness = witness.add(&xi)?;
            }
        }
    }
    if class_zero {
        let dtheta = differential_der(&cx.model.differential, theta)?;
        let square_witness = dtheta.is_zero().then(|| witness.scale(&scalar::int(2)));
        Ok(ObstructionReport { defect, class_zero, witness: Some(witness), square_witness })
    } else {
        Ok(ObstructionReport { defect, class_zero, witness: None, square_witness: None })
    }
}

/// Report of the Segre analysis of the family `∨^r S^k ∨ S^{3k-1} ∨
/// S^{6k-3}`.
#[derive(Debug, Clone)]
pub struct SegreReport {
    /// Dimension of the space of length-3 words (the index set of A₃ and B).
    pub c: usize,
    /// Whether the `[p,q] ∂z` images are linearly independent in L².
    pub images_independent: bool,
    /// Whether the A₃ x B component of the ideal equals the span of the
    /// 2 x 2 minors.
    pub minors_match: bool,
    pub minor_count: usize,
    pub ideal: McIdeal,
    /// Indices of the A₃ and B coordinates inside the ideal's table.
    pub a3_coords: Vec<usize>,
    pub b_coords: Vec<usize>,
}

/// Detects the bouquet shape `∨^r S^k ∨ S^{3k-1} ∨ S^{6k-3}` and returns
/// `(r, k, y-index, z-index)` in class indices.
pub fn detect_segre_family(model: &QuillenModel) -> Result<(usize, i64, usize, usize)> {
    if !model.is_bouquet() {
        return Err(Error::NotImplemented("Segre analysis needs a bouquet".into()));
    }
    let classes = &model.spec.classes;
    let k = classes.iter().map(|(_, d)| *d).min().unwrap_or(0);
    let xs: Vec<usize> =
        classes.iter().enumerate().filter(|(_, (_, d))| *d == k).map(|(i, _)| i).collect();
    let ys: Vec<usize> = classes
        .iter()
        .enumerate()
        .filter(|(_, (_, d))| *d == 3 * k - 1)
        .map(|(i, _)| i)
        .collect();
    let zs: Vec<usize> = classes
        .iter()
        .enumerate()
        .filter(|(_, (_, d))| *d == 6 * k - 3)
        .map(|(i, _)| i)
        .collect();
    let r = xs.len();
    if r < 2 || ys.len() != 1 || zs.len() != 1 || classes.len() != r + 2 || k % 2 == 0 {
        return Err(Error::NotImplemented(format!(
            "spec `{}` is not of the shape ∨^r S^k ∨ S^(3k-1) ∨ S^(6k-3) with k odd, r >= 2",
            model.spec.name
        )));
    }
    Ok((r, k, ys[0], zs[0]))
}

/// Runs the Segre analysis on a model of the right shape.
pub fn segre_relations(cx: &BigradedComplex, max_check: Option<u32>) -> Result<SegreReport> {
    let _ = max_check;
    let model = &cx.model;
    let (r, _k, y, z) = detect_segre_family(model)?;
    let table = cx.table();
    let y = y as u32;
    let z = z as u32;
    // Length-3 words over the first r letters (the sphere duals come first
    // only if the spec lists them first; use explicit x indices instead).
    let xs: Vec<u32> = (0..model.spec.classes.len() as u32)
        .filter(|&i| i != y && i != z)
        .collect();
    debug_assert_eq!(xs.len(), r);
    // Canonical length-3 basis words in the x letters.
    let mut p_words: Vec<LieElement> = Vec::new();
    let all3 = crate::word::basis_of_length(table, 3, None);
    for bw in all3 {
        if bw.letters().iter().all(|l| xs.contains(l)) {
            p_words.push(LieElement::from_basis_word(table.clone(), bw));
        }
    }
    let c = p_words.len();

    // Named basis: u_p = [y, p] ∂z (A₃), v_p = p ∂y (B), then the remaining
    // canonical block elements extend A₃ to the full degree-1 truncation.
    let ygen = LieElement::generator(table.clone(), y);
    let mut basis: Vec<NamedDerivation> = Vec::new();
    let mut a3 = Vec::new();
    let mut bs = Vec::new();
    for (i, p) in p_words.iter().enumerate() {
        let val = bracket(&ygen, p)?;
        let der = Derivation::single(z, val)?;
        a3.push(basis.len());
        basis.push(NamedDerivation { name: format!("u{}", i + 1), der });
    }
    for (i, p) in p_words.iter().enumerate() {
        let der = Derivation::single(y, p.clone())?;
        bs.push(basis.len());
        basis.push(NamedDerivation { name: format!("v{}", i + 1), der });
    }
    // Extend with canonical block elements not in the span so far.
    let mut offsets: BTreeMap<i64, usize> = BTreeMap::new();
    let mut acc = 0usize;
    for w in cx.weight_min..=-1 {
        if let Ok(b) = cx.block(1, w) {
            offsets.insert(w, acc);
            acc += b.dim();
        }
    }
    let flat = |der: &Derivation| -> Result<SparseVec> {
        let mut out = SparseVec::new();
        for ((_, w), v) in cx.coords(der)? {
            let off = offsets[&w];
            for (i, cc) in v {
                out.insert(off + i, cc);
            }
        }
        Ok(out)
    };
    let mut ech = Echelon::new(false);
    for nd in &basis {
        if ech.insert(&flat(&nd.der)?).is_none() {
            return Err(Error::Precondition("Segre basis is degenerate".into()));
        }
    }
    let mut extra = 0usize;
    for w in cx.weight_min..=-1 {
        if let Ok(block) = cx.block(1, w) {
            for elem in block.basis.clone() {
                let le = LieElement::from_basis_word(table.clone(), elem.word.clone());
                let der = Derivation::single(elem.target, le)?;
                if ech.insert(&flat(&der)?).is_some() {
                    extra += 1;
                    basis.push(NamedDerivation { name: format!("w{extra}"), der });
                }
            }
        }
    }
    let ideal = mc_generators(cx, &basis)?;

    // Independence of the [p,q] ∂z images, p < q.
    let mut img_ech = Echelon::new(false);
    let mut independent = true;
    let mut minor_count = 0usize;
    for i in 0..c {
        for j in (i + 1)..c {
            let br = bracket(&p_words[i], &p_words[j])?;
            let der = Derivation::single(z, br)?;
            minor_count += 1;
            if img_ech.insert(&flat2(cx, &der)?).is_none() {
                independent = false;
            }
        }
    }

    // The A₃ x B component of each generator, as a vector over monomials
    // u_i v_j; compare spans with the minors u_p v_q - u_q v_p.
    let mono_index = |i: usize, j: usize| i * c + j;
    let mut gen_rows = Vec::new();
    for g in &ideal.generators {
        let mut row = SparseVec::new();
        for (m, cc) in &g.poly.terms {
            if m.0.len() == 2 && m.0[0].1 == 1 && m.0[1].1 == 1 {
                let (x1, x2) = (m.0[0].0, m.0[1].0);
                let (ai, bj) = if a3.contains(&x1) && bs.contains(&x2) {
                    (x1, x2 - c)
                } else if bs.contains(&x1) && a3.contains(&x2) {
                    (x2, x1 - c)
                } else {
                    continue;
                };
                row.insert(mono_index(ai, bj), cc.clone());
            }
        }
        if !row.is_empty() {
            gen_rows.push(row);
        }
    }
    let mut minor_rows = Vec::new();
    for p in 0..c {
        for q in (p + 1)..c {
            let mut row = SparseVec::new();
            row.insert(mono_index(p, q), scalar::one());
            row.insert(mono_index(q, p), -scalar::one());
            minor_rows.push(row);
        }
    }
    let span_eq = {
        let mut e1 = Echelon::new(false);
        for r in &gen_rows {
            e1.insert(r);
        }
        let mut e2 = Echelon::new(false);
        for r in &minor_rows {
            e2.insert(r);
        }
        e1.rank() == e2.rank()
            && minor_rows.iter().all(|r| e1.membership(r).is_some())
            && gen_rows.iter().all(|r| e2.membership(r).is_some())
    };
    Ok(SegreReport {
        c,
        images_independent: independent,
        minors_match: span_eq,
        minor_count,
        ideal,
        a3_coords: a3,
        b_coords: bs,
    })
}

fn flat2(cx: &BigradedComplex, der: &Derivation) -> Result<SparseVec> {
    let mut offsets: BTreeMap<i64, usize> = BTreeMap::new();
    let mut acc = 0usize;
    for w in cx.weight_min..=-1 {
        if let Ok(b) = cx.block(2, w) {
            offsets.insert(w, acc);
            acc += b.dim();
        }
    }
    let mut out = SparseVec::new();
    for ((_, w), v) in cx.coords(der)? {
        let off = offsets[&w];
        for (i, cc) in v {
            out.insert(off + i, cc);
        }
    }
    Ok(out)
}

/// The Hall-convention words used for golden comparisons of quadric tables:
/// simple `[x_p,[x_q,[x_r,[x_s,x_t]]]]` and compound
/// `[[x_p,x_q],[x_r,[x_s,x_t]]]`.
pub fn hall_simple(table: &Arc<crate::gens::GeneratorTable>, w: &[u32]) -> Result<LieElement> {
    if w.len() != 5 {
        return Err(Error::Input("simple Hall words here have five letters".into()));
    }
    let mut e = LieElement::generator(table.clone(), w[4]);
    for &l in w[..4].iter().rev() {
        e = bracket(&LieElement::generator(table.clone(), l), &e)?;
    }
    Ok(e)
}

pub fn hall_compound(
    table: &Arc<crate::gens::GeneratorTable>,
    pq: &[u32],
    rst: &[u32],
) -> Result<LieElement> {
    if pq.len() != 2 || rst.len() != 3 {
        return Err(Error::Input("compound Hall words here are 2|3 splits".into()));
    }
    let left = bracket(
        &LieElement::generator(table.clone(), pq[0]),
        &LieElement::generator(table.clone(), pq[1]),
    )?;
    let mut right = LieElement::generator(table.clone(), rst[2]);
    for &l in rst[..2].iter().rev() {
        right = bracket(&LieElement::generator(table.clone(), l), &right)?;
    }
    bracket(&left, &right)
}

/// Change of basis: expresses the given elements in the coordinates of an
/// assembled block's basis words, as rows.  Errors unless they form a basis
/// of the span of the given target words.
pub fn expansion_rows(
    cx: &BigradedComplex,
    elements: &[(String, Derivation)],
) -> Result<Vec<(String, BTreeMap<String, Scalar>)>> {
    let mut out = Vec::new();
    for (name, der) in elements {
        let mut row = BTreeMap::new();
        for (w, part) in der.weight_components() {
            let block = cx.block(part.degree(), w)?;
            let coords = cx.coords(&part)?;
            if let Some(v) = coords.get(&(part.degree(), w)) {
                for (&i, c) in v {
                    let elem = &block.basis[i];
                    let label = format!(
                        "{} d{}",
                        elem.word.display(cx.table()),
                        cx.table().name(elem.target)
                    );
                    row.insert(label, c.clone());
                }
            }
        }
        out.push((name.clone(), row));
    }
    Ok(out)
}

/// Convenience for labelling block elements consistently.
pub fn block_elem_label(cx: &BigradedComplex, word: &BasisWord, target: u32) -> String {
    format!("{} d{}", word.display(cx.table()), cx.table().name(target))
}
