//! The gauge action of degree-0 derivations on Maurer-Cartan elements:
//! nilpotent exponentials, formal integration of the homotopy flow
//! equations, and conservation of the MC condition along flows.
//!
//! Time `t` is a formal polynomial variable throughout; nilpotence (strictly
//! negative weights over a generator alphabet of bounded degree) makes every
//! series here a polynomial.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::bigint::BigInt;

use crate::derivation::{bracket_der, exp_ad, mc_defect, Derivation};
use crate::error::{Error, Result};
use crate::gens::GeneratorTable;
use crate::quillen::QuillenModel;
use crate::scalar::{self, Scalar};

const EXP_TERM_BOUND: usize = 512;

/// A polynomial in `t` with derivation coefficients, all of one degree.
#[derive(Debug, Clone)]
pub struct DerPoly {
    pub table: Arc<GeneratorTable>,
    pub degree: i64,
    /// Coefficient of `t^k`; zero coefficients are dropped.
    pub coeffs: BTreeMap<u32, Derivation>,
}

impl DerPoly {
    pub fn constant(d: Derivation) -> DerPoly {
        let degree = d.degree();
        let table = d.table().clone();
        let mut coeffs = BTreeMap::new();
        if !d.is_zero() {
            coeffs.insert(0, d);
        }
        DerPoly { table, degree, coeffs }
    }

    pub fn zero(table: Arc<GeneratorTable>, degree: i64) -> DerPoly {
        DerPoly { table, degree, coeffs: BTreeMap::new() }
    }

    pub fn from_coeffs(
        table: Arc<GeneratorTable>,
        degree: i64,
        coeffs: BTreeMap<u32, Derivation>,
    ) -> Result<DerPoly> {
        for c in coeffs.values() {
            if !c.is_zero() && c.degree() != degree {
                return Err(Error::Input("mixed degrees in a t-polynomial".into()));
            }
        }
        let coeffs = coeffs.into_iter().filter(|(_, d)| !d.is_zero()).collect();
        Ok(DerPoly { table, degree, coeffs })
    }

    pub fn zero_like(&self) -> DerPoly {
        DerPoly { table: self.table.clone(), degree: self.degree, coeffs: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(|d| d.is_zero())
    }

    pub fn coeff(&self, k: u32) -> Option<&Derivation> {
        self.coeffs.get(&k)
    }

    pub fn max_power(&self) -> u32 {
        self.coeffs.keys().next_back().copied().unwrap_or(0)
    }

    pub fn add(&self, other: &DerPoly) -> Result<DerPoly> {
        if !self.is_zero() && !other.is_zero() && self.degree != other.degree {
            return Err(Error::Input("mixed degrees in a t-polynomial sum".into()));
        }
        let mut coeffs = self.coeffs.clone();
        for (k, d) in &other.coeffs {
            let merged = match coeffs.get(k) {
                Some(e) => e.add(d)?,
                None => d.clone(),
            };
            coeffs.insert(*k, merged);
        }
        coeffs.retain(|_, d| !d.is_zero());
        let degree = if self.coeffs.is_empty() { other.degree } else { self.degree };
        Ok(DerPoly { table: self.table.clone(), degree, coeffs })
    }

    pub fn scale(&self, c: &Scalar) -> DerPoly {
        let mut coeffs: BTreeMap<u32, Derivation> =
            self.coeffs.iter().map(|(k, d)| (*k, d.scale(c))).collect();
        coeffs.retain(|_, d| !d.is_zero());
        DerPoly { table: self.table.clone(), degree: self.degree, coeffs }
    }

    /// Derivative in `t`.
    pub fn ddt(&self) -> DerPoly {
        let mut coeffs = BTreeMap::new();
        for (&k, d) in &self.coeffs {
            if k > 0 {
                coeffs.insert(k - 1, d.scale(&scalar::int(k as i64)));
            }
        }
        DerPoly { table: self.table.clone(), degree: self.degree, coeffs }
    }

    /// Bracket of polynomial families: convolution in `t`.
    pub fn bracket(&self, other: &DerPoly) -> Result<DerPoly> {
        let mut coeffs: BTreeMap<u32, Derivation> = BTreeMap::new();
        for (&i, a) in &self.coeffs {
            for (&j, b) in &other.coeffs {
                let br = bracket_der(a, b)?;
                if br.is_zero() {
                    continue;
                }
                let merged = match coeffs.get(&(i + j)) {
                    Some(e) => e.add(&br)?,
                    None => br,
                };
                coeffs.insert(i + j, merged);
            }
        }
        coeffs.retain(|_, d| !d.is_zero());
        DerPoly::from_coeffs(self.table.clone(), self.degree + other.degree, coeffs)
    }

    /// Exact evaluation at a rational time.
    pub fn eval(&self, t: &Scalar) -> Result<Derivation> {
        let mut out = Derivation::zero(self.table.clone(), self.degree);
        for (&k, d) in &self.coeffs {
            let mut c = scalar::one();
            for _ in 0..k {
                c *= t;
            }
            out = out.add(&d.scale(&c))?;
        }
        Ok(out)
    }
}

fn check_gauge_parameter(b: &Derivation) -> Result<()> {
    if b.degree() != 0 {
        return Err(Error::Precondition(format!(
            "gauge parameter must have degree 0, got {}",
            b.degree()
        )));
    }
    if let Some(&w) = b.weight_components().keys().max() {
        if w >= 0 {
            return Err(Error::NilpotenceNotGuaranteed(w));
        }
    }
    Ok(())
}

/// `p ↦ (exp ad b)(d + p) - d` for a strictly negative-weight degree-0
/// parameter.  The sum is finite because each `ad b` strictly lowers weight
/// and degree-1 derivations of a fixed model live in finitely many weights.
pub fn exp_action(model: &QuillenModel, b: &Derivation, p: &Derivation) -> Result<Derivation> {
    check_gauge_parameter(b)?;
    if p.degree() != 1 {
        return Err(Error::Precondition("Maurer-Cartan elements have degree 1".into()));
    }
    let moved_d = exp_ad(b, &model.differential, EXP_TERM_BOUND)?;
    let moved_p = exp_ad(b, p, EXP_TERM_BOUND)?;
    let q = moved_d.add(&moved_p)?.sub(&model.differential)?;
    // The action must carry solutions to solutions; verify whenever the
    // input is on shell.
    if mc_defect(&model.differential, p)?.is_zero()
        && !mc_defect(&model.differential, &q)?.is_zero()
    {
        return Err(Error::Input(
            "internal: gauge action failed to preserve the Maurer-Cartan equation".into(),
        ));
    }
    Ok(q)
}

/// The Maurer-Cartan defect of a fixed derivation, `dp + ½[p,p]`.
pub fn defect(model: &QuillenModel, p: &Derivation) -> Result<Derivation> {
    mc_defect(&model.differential, p)
}

/// A gauge path: `η(t)` of degree 1 driven by `ζ(t)` of degree 0 through
/// `dη/dt + dζ + [η,ζ] = 0`.
#[derive(Debug, Clone)]
pub struct FlowPath {
    pub eta: DerPoly,
    pub zeta: DerPoly,
}

/// Integrates the flow equation from `η(0) = p0` for a polynomial `ζ(t)`
/// with strictly negative-weight coefficients:
/// `(n+1) y_{n+1} + d z_n + Σ_{i+j=n} [y_i, z_j] = 0`.
pub fn flow_solve(model: &QuillenModel, p0: &Derivation, zeta: &DerPoly) -> Result<FlowPath> {
    if p0.degree() != 1 {
        return Err(Error::Precondition("initial value must have degree 1".into()));
    }
    for z in zeta.coeffs.values() {
        check_gauge_parameter(z)?;
    }
    let table = p0.table().clone();
    let k_max = zeta.max_power();
    let mut ys: Vec<Derivation> = vec![p0.clone()];
    let mut n = 0u32;
    loop {
        // y_{n+1} = -(d z_n + Σ_{i+j=n} [y_i, z_j]) / (n+1)
        let mut rhs = Derivation::zero(table.clone(), 1);
        if let Some(zn) = zeta.coeff(n) {
            rhs = rhs.add(&bracket_der(&model.differential, zn)?)?;
        }
        for i in 0..=n {
            let j = n - i;
            if let (Some(yi), Some(zj)) = (ys.get(i as usize), zeta.coeff(j)) {
                rhs = rhs.add(&bracket_der(yi, zj)?)?;
            }
        }
        let y_next = rhs.scale(&-(scalar::one() / scalar::int(n as i64 + 1)));
        ys.push(y_next);
        n += 1;
        // Terminate once past the driving polynomial and the last k_max + 1
        // coefficients vanish; later ones are built only from these.
        if n > k_max {
            let tail_zero = (0..=k_max)
                .all(|back| ys.get((n - back) as usize).map(|d| d.is_zero()).unwrap_or(true));
            if tail_zero {
                break;
            }
        }
        if n as usize > 4 * EXP_TERM_BOUND {
            return Err(Error::Input("flow integration did not terminate".into()));
        }
    }
    let coeffs: BTreeMap<u32, Derivation> = ys
        .into_iter()
        .enumerate()
        .filter(|(_, d)| !d.is_zero())
        .map(|(k, d)| (k as u32, d))
        .collect();
    Ok(FlowPath { eta: DerPoly::from_coeffs(table, 1, coeffs)?, zeta: zeta.clone() })
}

/// The defect family `u(t) = dη + ½[η,η]` and the exact residual of the
/// conservation law `du/dt + [ζ,u] = 0`.
pub struct DefectFlow {
    pub u: DerPoly,
    pub ode_residual: DerPoly,
}

pub fn mc_defect_flow(model: &QuillenModel, path: &FlowPath) -> Result<DefectFlow> {
    let d_const = DerPoly::constant(model.differential.clone());
    let du = d_const.bracket(&path.eta)?; // [d, η]: d applied to each coefficient
    let sq = path.eta.bracket(&path.eta)?.scale(&scalar::ratio(1, 2));
    let u = du.add(&sq)?;
    let residual = u.ddt().add(&path.zeta.bracket(&u)?)?;
    Ok(DefectFlow { u, ode_residual: residual })
}

/// Verifies the flow equation itself, `dη/dt + dζ + [η,ζ] = 0`.
pub fn flow_equation_residual(model: &QuillenModel, path: &FlowPath) -> Result<DerPoly> {
    let d_const = DerPoly::constant(model.differential.clone());
    path.eta.ddt().add(&d_const.bracket(&path.zeta)?)?.add(&path.eta.bracket(&path.zeta)?)
}

/// Normal-form labels for the supported orbit families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm {
    pub label: String,
    pub rank: u32,
    /// Squarefree representative of the discriminant class in ℚ*/(ℚ*)², for
    /// rank-2 quadratic forms.
    pub discriminant_class: Option<BigInt>,
    /// Labels reachable by degeneration (closure order), for the bilinear
    /// family.
    pub degenerates_to: Vec<String>,
}

/// The supported example families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitFamily {
    /// Binary quadratic forms over ℚ up to GL(2) and scaling: the
    /// `S³ ∨ S³ ∨ S⁵`-type classification by rank and discriminant.
    QuadraticForm2,
    /// The 4-plane of bilinear forms `V ⊗ V` (r = 2) with its five normal
    /// forms and their degeneration order.
    BilinearPair2,
}

/// Computes the normal-form label of a point.
///
/// For `QuadraticForm2` the point is `(q11, q12, q22)` of `q11 x² + 2 q12 xy
/// + q22 y²`; the complete invariants are the rank and, for rank 2, the
/// discriminant class in ℚ*/(ℚ*)².  For `BilinearPair2` the point is the
/// matrix `(m11, m12, m21, m22)`.
pub fn orbit_normal_form(family: OrbitFamily, point: &[Scalar]) -> Result<NormalForm> {
    match family {
        OrbitFamily::QuadraticForm2 => {
            if point.len() != 3 {
                return Err(Error::Input("expected (q11, q12, q22)".into()));
            }
            let (a, b, c) = (&point[0], &point[1], &point[2]);
            let det = a * c - b * b;
            let rank = if !num::Zero::is_zero(&det) {
                2
            } else if !num::Zero::is_zero(a) || !num::Zero::is_zero(b) || !num::Zero::is_zero(c) {
                1
            } else {
                0
            };
            let disc = (rank == 2).then(|| scalar::square_class(&det));
            let label = match rank {
                0 => "rank 0".to_string(),
                1 => "rank 1".to_string(),
                _ => format!("rank 2, disc {}", disc.clone().unwrap()),
            };
            Ok(NormalForm { label, rank, discriminant_class: disc, degenerates_to: Vec::new() })
        }
        OrbitFamily::BilinearPair2 => {
            if point.len() != 4 {
                return Err(Error::Input("expected (m11, m12, m21, m22)".into()));
            }
            let (m11, m12, m21, m22) = (&point[0], &point[1], &point[2], &point[3]);
            let half = scalar::ratio(1, 2);
            let s12 = (m12 + m21) * &half; // symmetric part
            let e = (m12 - m21) * &half; // antisymmetric part
            let det = m11 * m22 - &s12 * &s12;
            let sym_rank = if !num::Zero::is_zero(&det) {
                2
            } else if !num::Zero::is_zero(m11)
                || !num::Zero::is_zero(&s12)
                || !num::Zero::is_zero(m22)
            {
                1
            } else {
                0
            };
            let has_e = !num::Zero::is_zero(&e);
            let label = bilinear_label(sym_rank, has_e);
            Ok(NormalForm {
                label: label.to_string(),
                rank: sym_rank,
                discriminant_class: (sym_rank == 2).then(|| scalar::square_class(&det)),
                degenerates_to: bilinear_degenerations(&label)
                    .iter()
                    .map(|s| s.to_string())
                    .collect(),
            })
        }
    }
}

fn bilinear_label(sym_rank: u32, has_antisym: bool) -> String {
    match (sym_rank, has_antisym) {
        (2, true) => "(x1+dx2,1)".to_string(),
        (2, false) => "(x1+dx2,0)".to_string(),
        (1, true) => "(x2,1)".to_string(),
        (1, false) => "(x2,0)".to_string(),
        (0, false) => "(0,0)".to_string(),
        // Not among the five listed normal forms; kept as its own label.
        (0, true) => "(0,1)".to_string(),
        _ => unreachable!(),
    }
}

/// Immediate degeneration arrows among the five labels: an arrow `a -> b`
/// means `b` lies in the closure of `a`.
pub fn bilinear_degenerations(label: &str) -> Vec<&'static str> {
    match label {
        "(x1+dx2,1)" => vec!["(x1+dx2,0)", "(x2,0)", "(x2,1)"],
        "(x1+dx2,0)" => vec!["(x2,0)"],
        "(x2,1)" => vec!["(x2,0)"],
        "(x2,0)" => vec!["(0,0)"],
        _ => vec![],
    }
}
