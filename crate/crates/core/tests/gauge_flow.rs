//! Gauge action and flow integration: exponential orbits, the homotopy flow
//! equation, conservation of the Maurer-Cartan condition, and normal forms.

use std::collections::BTreeMap;
use std::path::Path;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use rhodef::derivation::{bracket_der, exp_ad, Derivation};
use rhodef::gauge::*;
use rhodef::lie::{normalize, Expr, LieElement};
use rhodef::quillen::{build_model, QuillenModel};
use rhodef::scalar::{self};
use rhodef::specfile::load_spec_file;

fn fixture_model(name: &str) -> QuillenModel {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../specs").join(name);
    build_model(&load_spec_file(&path).unwrap()).unwrap()
}

fn der(m: &QuillenModel, expr: &str, target: &str) -> Derivation {
    let v = normalize(&m.table, &Expr::parse(expr).unwrap()).unwrap();
    Derivation::single(m.table.id_of(target).unwrap(), v).unwrap()
}

/// ∨² S² ∨ S⁵ ∨ S⁸: rich degree-0 part with noncommuting gauge directions.
fn k2_model() -> QuillenModel {
    build_model(&rhodef::quillen::CohomologySpec::bouquet(
        "wedge_r2_k2",
        &[("x1", 2), ("x2", 2), ("y", 5), ("z", 8)],
    ))
    .unwrap()
}

#[test]
fn zero_parameter_fixes_every_point() {
    let m = fixture_model("s10_augmented.spec");
    let p = der(&m, "[x1,[x1,x2]]", "y");
    let b = Derivation::zero(m.table.clone(), 0);
    assert_eq!(exp_action(&m, &b, &p).unwrap(), p);
}

#[test]
fn weight_zero_parameter_is_rejected() {
    let m = fixture_model("wedge_s3s3s5_s10.spec");
    // x5 d x5 has weight 0.
    let b = Derivation::single(
        m.table.id_of("x5").unwrap(),
        LieElement::generator(m.table.clone(), m.table.id_of("x5").unwrap()),
    )
    .unwrap();
    match exp_action(&m, &b, &Derivation::zero(m.table.clone(), 1)) {
        Err(rhodef::Error::NilpotenceNotGuaranteed(0)) => {}
        other => panic!("expected nilpotence error, got {other:?}"),
    }
}

/// The sym/antisym/deep coordinates of the `S³∨S³∨S⁵∨S¹⁰` family.
struct UVW {
    m: QuillenModel,
}

impl UVW {
    fn new() -> Self {
        UVW { m: fixture_model("wedge_s3s3s5_s10.spec") }
    }

    /// The derivation of the point (U, v, W): U, W symmetric 2x2 matrices
    /// as quadratic forms, v the antisymmetric coefficient.
    fn point(&self, u: &[[i64; 2]; 2], v: i64, w: &[[i64; 2]; 2]) -> Derivation {
        let m = &self.m;
        let mut p = Derivation::zero(m.table.clone(), 1);
        let word = |i: usize, j: usize, inner: &str| {
            format!("[x{},[x{},{}]]", i + 1, j + 1, inner)
        };
        for i in 0..2 {
            for j in 0..2 {
                if u[i][j] != 0 {
                    p = p
                        .add(&der(m, &word(i, j, "x5"), "x10").scale(&scalar::int(u[i][j])))
                        .unwrap();
                }
                if w[i][j] != 0 {
                    p = p
                        .add(&der(m, &word(i, j, "[x1,x2]"), "x10").scale(&scalar::int(w[i][j])))
                        .unwrap();
                }
            }
        }
        if v != 0 {
            let anti = der(m, "[x1,[x2,x5]]", "x10")
                .sub(&der(m, "[x2,[x1,x5]]", "x10"))
                .unwrap()
                .scale(&scalar::int(v));
            p = p.add(&anti).unwrap();
        }
        p
    }
}

#[test]
fn uvw_action_is_shear_by_t_u() {
    // exp(t · [x1,x2] d x5) sends (u, v, w) to (u, v, tu + w).
    let fam = UVW::new();
    let m = &fam.m;
    let b = der(m, "[x1,x2]", "x5");
    let mut rng = StdRng::seed_from_u64(31);
    for _ in 0..20 {
        let u = [[rng.random_range(-3..=3), rng.random_range(-3..=3)]; 2];
        let u = [[u[0][0], u[0][1]], [u[0][1], rng.random_range(-3..=3)]];
        let w = [[rng.random_range(-3..=3), rng.random_range(-3..=3)]; 2];
        let w = [[w[0][0], w[0][1]], [w[0][1], rng.random_range(-3..=3)]];
        let v = rng.random_range(-3..=3);
        let t = rng.random_range(-4..=4i64);
        let p = fam.point(&u, v, &w);
        let moved = exp_action(m, &b.scale(&scalar::int(t)), &p).unwrap();
        let tu_plus_w = [
            [t * u[0][0] + w[0][0], t * u[0][1] + w[0][1]],
            [t * u[1][0] + w[1][0], t * u[1][1] + w[1][1]],
        ];
        let expected = fam.point(&u, v, &tu_plus_w);
        assert_eq!(moved, expected);
    }
}

#[test]
fn on_shell_points_stay_on_shell() {
    let m = fixture_model("s10_augmented.spec");
    let mut rng = StdRng::seed_from_u64(17);
    let gauge_dirs = [der(&m, "[x1,y]", "x10"), der(&m, "[x2,y]", "x10")];
    // Pure-alpha and pure-beta points are Maurer-Cartan solutions.
    let alphas = [
        der(&m, "[x1,[x1,y]]", "z"),
        der(&m, "[x1,[x2,y]]", "z"),
        der(&m, "[x2,[x1,y]]", "z"),
        der(&m, "[x2,[x2,y]]", "z"),
    ];
    let betas = [der(&m, "[x1,[x1,x2]]", "y"), der(&m, "[x2,[x1,x2]]", "y")];
    for _ in 0..40 {
        let pool: &[Derivation] = if rng.random_bool(0.5) { &alphas } else { &betas };
        let mut p = Derivation::zero(m.table.clone(), 1);
        for theta in pool {
            p = p.add(&theta.scale(&scalar::int(rng.random_range(-5..=5)))).unwrap();
        }
        assert!(defect(&m, &p).unwrap().is_zero());
        let mut b = Derivation::zero(m.table.clone(), 0);
        for dir in &gauge_dirs {
            b = b.add(&dir.scale(&scalar::int(rng.random_range(-3..=3)))).unwrap();
        }
        // exp_action verifies conservation internally; also assert here.
        let q = exp_action(&m, &b, &p).unwrap();
        assert!(defect(&m, &q).unwrap().is_zero());
    }
}

#[test]
fn constant_flow_matches_the_exponential() {
    let m = k2_model();
    let z = der(&m, "[x1,[x1,[x2,y]]]", "z"); // an E-type degree-0 direction
    assert_eq!(z.degree(), 0);
    let p0 = der(&m, "[x1,[x1,[x1,x2]]]", "y"); // wait: degree?
    let _ = p0;
    // Use a B-type point: x²y-words d z have degree 1.
    let p0 = der(&m, "[x1,[x2,y]]", "z");
    assert_eq!(p0.degree(), 1);
    let path = flow_solve(&m, &p0, &DerPoly::constant(z.clone())).unwrap();
    // Coefficient-wise: y_n = (ad z)^n (d + p0) / n!.
    let mut term = m.differential.add(&p0).unwrap();
    let mut factorial = scalar::one();
    for n in 0..=path.eta.max_power() {
        if n > 0 {
            term = bracket_der(&z, &term).unwrap();
            factorial *= scalar::int(n as i64);
        }
        let mut expect = term.scale(&(scalar::one() / factorial.clone()));
        if n == 0 {
            expect = expect.sub(&m.differential).unwrap();
        }
        let got = path
            .eta
            .coeff(n)
            .cloned()
            .unwrap_or_else(|| Derivation::zero(m.table.clone(), 1));
        assert_eq!(got, expect, "coefficient of t^{n}");
    }
    // The flow equation holds identically.
    assert!(flow_equation_residual(&m, &path).unwrap().is_zero());
}

#[test]
fn zero_zeta_gives_a_constant_path() {
    let m = k2_model();
    let p0 = der(&m, "[x1,[x2,y]]", "z");
    let zeta = DerPoly::zero(m.table.clone(), 0);
    let path = flow_solve(&m, &p0, &zeta).unwrap();
    assert_eq!(path.eta.max_power(), 0);
    assert_eq!(path.eta.coeff(0).unwrap(), &p0);
}

#[test]
fn linear_zeta_integrates_to_half_exponential() {
    // ζ = t·φ: η(1) = exp(φ/2)(d + p0) - d.
    let m = k2_model();
    let phi = der(&m, "[x1,[x1,[x2,y]]]", "z");
    let p0 = der(&m, "[x2,[x2,y]]", "z");
    let mut coeffs = BTreeMap::new();
    coeffs.insert(1u32, phi.clone());
    let zeta = DerPoly::from_coeffs(m.table.clone(), 0, coeffs).unwrap();
    let path = flow_solve(&m, &p0, &zeta).unwrap();
    assert!(flow_equation_residual(&m, &path).unwrap().is_zero());
    let at_one = path.eta.eval(&scalar::one()).unwrap();
    let expected = exp_action(&m, &phi.scale(&scalar::ratio(1, 2)), &p0).unwrap();
    assert_eq!(at_one, expected);
}

#[test]
fn composition_law_for_flows() {
    // Acting by ζ₂ after ζ₁ equals acting with the combined path
    // ζ₂ + (exp t ad ζ₂) ζ₁.
    let m = k2_model();
    let delta = der(&m, "[x1,[x1,[x1,x2]]]", "y"); // D-type, degree 0
    assert_eq!(delta.degree(), 0);
    let eps = der(&m, "[x1,[x1,[x2,y]]]", "z"); // E-type, degree 0
    assert_eq!(eps.degree(), 0);
    assert!(!bracket_der(&eps, &delta).unwrap().is_zero());
    let mut rng = StdRng::seed_from_u64(23);
    for _ in 0..10 {
        let p = der(&m, "[x1,[x2,y]]", "z")
            .scale(&scalar::int(rng.random_range(-3..=3)))
            .add(&der(&m, "[x2,[x2,y]]", "z").scale(&scalar::int(rng.random_range(-3..=3))))
            .unwrap();
        let q1 = exp_action(&m, &delta, &p).unwrap();
        let q2 = exp_action(&m, &eps, &q1).unwrap();
        // Combined: ζ₃(t) = ε + exp(t ad ε)(δ), a polynomial in t.
        let mut zeta3: BTreeMap<u32, Derivation> = BTreeMap::new();
        zeta3.insert(0, eps.add(&delta).unwrap());
        let mut term = delta.clone();
        let mut factorial = scalar::one();
        for n in 1..20u32 {
            term = bracket_der(&eps, &term).unwrap();
            if term.is_zero() {
                break;
            }
            factorial *= scalar::int(n as i64);
            zeta3.insert(n, term.scale(&(scalar::one() / factorial.clone())));
        }
        let zeta3 = DerPoly::from_coeffs(m.table.clone(), 0, zeta3).unwrap();
        let path = flow_solve(&m, &p, &zeta3).unwrap();
        assert!(flow_equation_residual(&m, &path).unwrap().is_zero());
        assert_eq!(path.eta.eval(&scalar::one()).unwrap(), q2);
    }
}

#[test]
fn defect_flow_vanishes_on_shell_and_obeys_the_ode_off_shell() {
    let m = fixture_model("s10_augmented.spec");
    let zeta = DerPoly::constant(der(&m, "[x1,y]", "x10"));
    // On shell: pure-beta initial point.
    let p_on = der(&m, "[x1,[x1,x2]]", "y");
    let path = flow_solve(&m, &p_on, &zeta).unwrap();
    let flow = mc_defect_flow(&m, &path).unwrap();
    assert!(flow.u.is_zero());
    assert!(flow.ode_residual.is_zero());
    // Off shell: the obstructed mixed point.
    let p_off = der(&m, "[x1,[x1,x2]]", "y").add(&der(&m, "[x2,[x1,y]]", "z")).unwrap();
    assert!(!defect(&m, &p_off).unwrap().is_zero());
    let path = flow_solve(&m, &p_off, &zeta).unwrap();
    let flow = mc_defect_flow(&m, &path).unwrap();
    assert!(!flow.u.is_zero());
    assert!(flow.ode_residual.is_zero(), "du/dt + [ζ,u] must vanish identically");
}

#[test]
fn fan_family_mixed_point_defect_flow() {
    // In the r=2, k=3 bouquet the degree-0 part acts trivially, so the
    // defect family is constant; the conservation law still holds exactly.
    let m = fixture_model("wedge_r2_k3.spec");
    let p_off = der(&m, "[x1,[x1,y]]", "z").add(&der(&m, "[x1,[x1,x2]]", "y")).unwrap();
    assert!(!defect(&m, &p_off).unwrap().is_zero());
    // Degree-0 negative-weight direction: a six-letter word d z.
    let zeta = DerPoly::constant(der(&m, "[x1,[x1,[x1,[x1,[x1,x2]]]]]", "z"));
    assert_eq!(zeta.coeff(0).unwrap().degree(), 0);
    let path = flow_solve(&m, &p_off, &zeta).unwrap();
    let flow = mc_defect_flow(&m, &path).unwrap();
    assert!(!flow.u.is_zero());
    assert!(flow.ode_residual.is_zero());
}

#[test]
fn quadratic_form_normal_forms() {
    let nf = |a: i64, b: i64, c: i64| {
        orbit_normal_form(
            OrbitFamily::QuadraticForm2,
            &[scalar::int(a), scalar::int(b), scalar::int(c)],
        )
        .unwrap()
    };
    assert_eq!(nf(0, 0, 0).rank, 0);
    assert_eq!(nf(3, 0, 0).rank, 1);
    // x² + y² and 2x² + 2y² have discriminants 1 and 4: the same class.
    let one = nf(1, 0, 1);
    let two = nf(2, 0, 2);
    assert_eq!(one.rank, 2);
    assert_eq!(one.label, two.label);
    assert_eq!(one.discriminant_class, two.discriminant_class);
    // x² - 2y² is a different class.
    let other = nf(1, 0, -2);
    assert_ne!(one.label, other.label);
}

#[test]
fn bilinear_labels_and_degenerations() {
    let nf = |m11: i64, m12: i64, m21: i64, m22: i64| {
        orbit_normal_form(
            OrbitFamily::BilinearPair2,
            &[scalar::int(m11), scalar::int(m12), scalar::int(m21), scalar::int(m22)],
        )
        .unwrap()
    };
    // Rank-1 symmetric part, no antisymmetric part: degenerates to the
    // origin only.
    let r1 = nf(1, 0, 0, 0);
    assert_eq!(r1.label, "(x2,0)");
    assert_eq!(r1.degenerates_to, vec!["(0,0)".to_string()]);
    // Full point.
    let full = nf(1, 2, 0, 3);
    assert_eq!(full.label, "(x1+dx2,1)");
    assert_eq!(full.degenerates_to.len(), 3);
    assert_eq!(nf(0, 0, 0, 0).label, "(0,0)");
    assert_eq!(nf(1, 1, 1, 5).label, "(x1+dx2,0)");
    assert_eq!(nf(1, 1, -1, 0).label, "(x2,1)");
    // A purely antisymmetric point is not among the five listed normal
    // forms; it gets its own label and no degeneration arrows.
    let anti = nf(0, 1, -1, 0);
    assert_eq!(anti.label, "(0,1)");
    assert!(anti.degenerates_to.is_empty());
}

#[test]
fn labels_are_constant_on_gauge_orbits() {
    // In the (u, v, w) family the label of the u-part and the antisymmetric
    // flag are exp-invariants.
    let fam = UVW::new();
    let m = &fam.m;
    let b = der(m, "[x1,x2]", "x5");
    let mut rng = StdRng::seed_from_u64(77);
    for _ in 0..25 {
        let u = {
            let d = rng.random_range(-3..=3);
            let e = rng.random_range(-3..=3);
            let f = rng.random_range(-3..=3);
            [[d, e], [e, f]]
        };
        let v = rng.random_range(-2..=2);
        let w = [[rng.random_range(-2..=2), 0], [0, rng.random_range(-2..=2)]];
        let label_of = |u: &[[i64; 2]; 2], v: i64| {
            orbit_normal_form(
                OrbitFamily::QuadraticForm2,
                &[scalar::int(u[0][0]), scalar::int(u[0][1]), scalar::int(u[1][1])],
            )
            .map(|nf| (nf.label, v != 0))
            .unwrap()
        };
        let before = label_of(&u, v);
        let t = rng.random_range(-5..=5);
        let p = fam.point(&u, v, &w);
        let moved = exp_action(m, &b.scale(&scalar::int(t)), &p).unwrap();
        // Recover the coordinates of the moved point by subtracting the
        // expected shear.
        let tu_plus_w = [
            [t * u[0][0] + w[0][0], t * u[0][1] + w[0][1]],
            [t * u[1][0] + w[1][0], t * u[1][1] + w[1][1]],
        ];
        assert_eq!(moved, fam.point(&u, v, &tu_plus_w));
        let after = label_of(&u, v);
        assert_eq!(before, after);
    }
}

#[test]
fn exp_ad_rejects_non_nilpotent_arguments() {
    // A weight-zero parameter on a generator loops forever without the
    // term bound; the bound turns it into an error.
    let m = k2_model();
    let x1 = m.table.id_of("x1").unwrap();
    let b = Derivation::single(x1, LieElement::generator(m.table.clone(), x1)).unwrap();
    let theta = der(&m, "[x1,[x2,y]]", "z");
    assert!(exp_ad(&b, &theta, 8).is_err());
}
