//! Acceptance suite: one test per criterion, exact arithmetic throughout
//! (tolerance is equality).  Each test prints a PASS line; run with
//! `cargo test --test acceptance -- --nocapture` to see them.

mod common;

use std::collections::BTreeMap;
use std::path::Path;

use num::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use common::*;
use rhodef::complex::assemble_controlling;
use rhodef::derivation::{bracket_der, differential_der, Derivation};
use rhodef::gauge::{self, DerPoly};
use rhodef::lie::{bracket, enumerate_basis, normalize, Expr, LieElement};
use rhodef::mcideal::{self, NamedDerivation};
use rhodef::miniversal;
use rhodef::poly::{Monomial, Polynomial};
use rhodef::quillen::{build_model, CohomologySpec, QuillenModel};
use rhodef::scalar::{self, Scalar};
use rhodef::specfile::load_spec_file;
use rhodef::word::Tree;

fn fixture_model(name: &str) -> QuillenModel {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../specs").join(name);
    build_model(&load_spec_file(&path).unwrap()).unwrap()
}

fn wedge_k3(r: usize) -> QuillenModel {
    let mut classes: Vec<(String, i64)> = (1..=r).map(|i| (format!("x{i}"), 3)).collect();
    classes.push(("y".into(), 8));
    classes.push(("z".into(), 13));
    build_model(&CohomologySpec {
        name: format!("wedge_r{r}_k3"),
        classes,
        products: Default::default(),
    })
    .unwrap()
}

fn der(m: &QuillenModel, expr: &str, target: &str) -> Derivation {
    let v = normalize(&m.table, &Expr::parse(expr).unwrap()).unwrap();
    Derivation::single(m.table.id_of(target).unwrap(), v).unwrap()
}

/// Named a/b basis: a_ij = [x_i,[x_j,y]] dz, b_klm = [x_k,[x_l,x_m]] dy for
/// k >= l < m.
fn ab_basis(model: &QuillenModel, r: usize) -> Vec<NamedDerivation> {
    let t = &model.table;
    let y = t.id_of("y").unwrap();
    let z = t.id_of("z").unwrap();
    let mut basis = Vec::new();
    for i in 1..=r {
        for j in 1..=r {
            let e = Expr::bracket(
                Expr::gen(&format!("x{i}")),
                Expr::bracket(Expr::gen(&format!("x{j}")), Expr::gen("y")),
            );
            basis.push(NamedDerivation {
                name: format!("a{i}{j}"),
                der: Derivation::single(z, normalize(t, &e).unwrap()).unwrap(),
            });
        }
    }
    for l in 1..=r {
        for m_ in (l + 1)..=r {
            for k in l..=r {
                let e = Expr::bracket(
                    Expr::gen(&format!("x{k}")),
                    Expr::bracket(Expr::gen(&format!("x{l}")), Expr::gen(&format!("x{m_}"))),
                );
                basis.push(NamedDerivation {
                    name: format!("b{k}{l}{m_}"),
                    der: Derivation::single(y, normalize(t, &e).unwrap()).unwrap(),
                });
            }
        }
    }
    basis
}

fn poly_from(ideal: &mcideal::McIdeal, terms: &[(i64, &[&str])]) -> Polynomial {
    let mut p = Polynomial::zero(ideal.coords.clone());
    for (c, names) in terms {
        let mono = Monomial::from_pairs(
            names.iter().map(|n| (ideal.coords.index_of(n).unwrap(), 1u32)).collect(),
        );
        p.add_term(mono, scalar::int(*c));
    }
    p
}

/// `a = λ b` with λ nonzero rational.
fn proportional(a: &Polynomial, b: &Polynomial) -> Option<Scalar> {
    if a.is_zero() || b.is_zero() || a.terms.len() != b.terms.len() {
        return None;
    }
    let mut lambda: Option<Scalar> = None;
    for (m, ca) in &a.terms {
        let cb = b.terms.get(m)?;
        let ratio = ca / cb;
        match &lambda {
            None => lambda = Some(ratio),
            Some(l) if *l == ratio => {}
            _ => return None,
        }
    }
    lambda
}

#[test]
fn acceptance_01_quadric_table_reproduction() {
    let m = wedge_k3(2);
    let cx = assemble_controlling(&m, &[0, 1, 2], -2).unwrap();
    let t = &m.table;
    let z = t.id_of("z").unwrap();
    let single = |name: &str, v: LieElement| NamedDerivation {
        name: name.to_string(),
        der: Derivation::single(z, v).unwrap(),
    };
    let hall = vec![
        single("21112", mcideal::hall_simple(t, &[1, 0, 0, 0, 1]).unwrap()),
        single("12|112", mcideal::hall_compound(t, &[0, 1], &[0, 0, 1]).unwrap()),
        single("22112", mcideal::hall_simple(t, &[1, 1, 0, 0, 1]).unwrap()),
        single("12|212", mcideal::hall_compound(t, &[0, 1], &[1, 0, 1]).unwrap()),
        single("11112", mcideal::hall_simple(t, &[0, 0, 0, 0, 1]).unwrap()),
        single("22212", mcideal::hall_simple(t, &[1, 1, 1, 0, 1]).unwrap()),
    ];
    let changed = mcideal::mc_generators_in_basis(&cx, &ab_basis(&m, 2), &hall).unwrap();
    assert_eq!(changed.ideal.generators.len(), 6, "exactly 6 nonzero generators");
    let ideal = &changed.ideal;
    let references: Vec<(&str, Polynomial)> = vec![
        ("21112", poly_from(ideal, &[(1, &["a12", "b112"]), (1, &["a21", "b112"]), (1, &["a11", "b212"])])),
        ("12|112", poly_from(ideal, &[(1, &["a12", "b112"]), (1, &["a11", "b212"])])),
        ("22112", poly_from(ideal, &[(1, &["a12", "b212"]), (1, &["a21", "b212"]), (1, &["a22", "b112"])])),
        ("12|212", poly_from(ideal, &[(1, &["a12", "b212"])])),
        ("11112", poly_from(ideal, &[(1, &["a11", "b112"])])),
        ("22212", poly_from(ideal, &[(1, &["a22", "b212"])])),
    ];
    for (label, reference) in &references {
        let g = ideal.generators.iter().find(|g| g.label == *label).unwrap();
        let lambda = proportional(&g.poly, reference)
            .unwrap_or_else(|| panic!("quadric dual to {label} is not a multiple of the reference"));
        assert!(!lambda.is_zero());
    }
    println!("ACCEPTANCE 01 PASS: six quadrics match the reference list up to nonzero scaling in Hall coordinates");
}

/// Independent Witt oracle: the necklace count (1/n) Σ_{d|n} μ(d) r^{n/d}.
fn witt(r: i64, n: i64) -> i64 {
    fn mobius(mut d: i64) -> i64 {
        let mut mu = 1;
        let mut p = 2;
        while p * p <= d {
            if d % p == 0 {
                d /= p;
                if d % p == 0 {
                    return 0;
                }
                mu = -mu;
            }
            p += 1;
        }
        if d > 1 {
            mu = -mu;
        }
        mu
    }
    let mut total = 0;
    for d in 1..=n {
        if n % d == 0 {
            total += mobius(d) * r.pow((n / d) as u32);
        }
    }
    total / n
}

#[test]
fn acceptance_02_dimension_formulas() {
    for r in 1..=4i64 {
        let m = wedge_k3(r as usize);
        let cx = assemble_controlling(&m, &[1], -1).unwrap();
        let dim = cx.block(1, -1).unwrap().dim() as i64;
        let a = r * r;
        let b = (r + 1) * r * (r - 1) / 3;
        assert_eq!(dim, a + b, "dim A + dim B for r = {r}");
    }
    // dim L² for r = 2 equals the Witt number, by the independent necklace
    // oracle and by brute-force commutator rank.
    let m = wedge_k3(2);
    let cx = assemble_controlling(&m, &[2], -2).unwrap();
    let dim = cx.block(2, -2).unwrap().dim();
    assert_eq!(dim as i64, witt(2, 5));
    assert_eq!(dim, 6);
    let xt =
        rhodef::gens::GeneratorTable::from_triples(&[("x1", -2, 3), ("x2", -2, 3)]).unwrap();
    let mut rows = Vec::new();
    for word in all_words(2, 5) {
        let mut tree = Tree::Leaf(word[4]);
        for i in (0..4).rev() {
            tree = Tree::Node(Box::new(Tree::Leaf(word[i])), Box::new(tree));
        }
        rows.push(expand_tree(&xt, &tree).0);
    }
    assert_eq!(tensor_rank(&rows), 6);
    println!("ACCEPTANCE 02 PASS: dim A = r², dim B = 2·C(r+1,3) for r = 1..4; dim L² (r=2) = 6 by the Witt oracle");
}

fn all_words(r: u32, n: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &out {
            for l in 0..r {
                let mut v = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

#[test]
fn acceptance_03_content_32_table() {
    let m = wedge_k3(2);
    let t = &m.table;
    let simple = mcideal::hall_simple(t, &[1, 0, 0, 0, 1]).unwrap();
    let compound = mcideal::hall_compound(t, &[0, 1], &[0, 0, 1]).unwrap();
    let z = t.id_of("z").unwrap();
    let rows = [
        ("a12*b112", der(&m, "[x1,[x2,y]]", "z"), der(&m, "[x1,[x1,x2]]", "y"), (1, 1)),
        ("a21*b112", der(&m, "[x2,[x1,y]]", "z"), der(&m, "[x1,[x1,x2]]", "y"), (1, 0)),
        ("a11*b212", der(&m, "[x1,[x1,y]]", "z"), der(&m, "[x2,[x1,x2]]", "y"), (1, 1)),
    ];
    // The three brackets span a 2-dimensional space ...
    let mut ech = rhodef::linalg::Echelon::new(false);
    let words = enumerate_basis(t, 5, None).unwrap();
    let index: BTreeMap<_, usize> = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    for (_, a, b, _) in &rows {
        let v = bracket_der(a, b).unwrap().value_on(z);
        let mut sv = rhodef::linalg::SparseVec::new();
        for (w, c) in v.terms() {
            sv.insert(index[w], c.clone());
        }
        ech.insert(&sv);
    }
    assert_eq!(ech.rank(), 2);
    // ... with the stated rows over the Hall basis {21112, 12|112}.
    for (name, a, b, (c1, c2)) in &rows {
        let v = bracket_der(a, b).unwrap().value_on(z);
        let expect = simple.scale(&scalar::int(*c1)).add(&compound.scale(&scalar::int(*c2))).unwrap();
        assert_eq!(v, expect, "row {name}");
    }
    println!("ACCEPTANCE 03 PASS: content-(3,2) rows are (1,1), (1,0), (1,1) in Hall coordinates and span dimension 2");
}

#[test]
fn acceptance_04_nilpotency_sweep() {
    for r in [2usize, 3] {
        let m = wedge_k3(r);
        let cx = assemble_controlling(&m, &[0, 1, 2], -2).unwrap();
        let basis = ab_basis(&m, r);
        let ideal = mcideal::mc_generators(&cx, &basis).unwrap();
        let na = r * r;
        for (ai, a) in basis.iter().take(na).enumerate() {
            for (bi, b) in basis.iter().enumerate().skip(na) {
                let mono = Monomial::var(ai).mul(&Monomial::var(bi));
                let power = mcideal::is_nilpotent_mod(&mono, &ideal, 4).unwrap();
                assert!(
                    power.is_some(),
                    "r = {r}: {}*{} is not nilpotent within the bound",
                    a.name,
                    b.name
                );
            }
        }
        if r == 2 {
            let i_a11 = ideal.coords.index_of("a11").unwrap();
            let i_b212 = ideal.coords.index_of("b212").unwrap();
            let mono = Monomial::var(i_a11).mul(&Monomial::var(i_b212));
            assert_eq!(
                mcideal::is_nilpotent_mod(&mono, &ideal, 4).unwrap(),
                Some(2),
                "(a11 b212)² ∈ I but a11 b212 ∉ I"
            );
        }
    }
    println!("ACCEPTANCE 04 PASS: every mixed product a_ij·b_klm is nilpotent mod I for r = 2, 3; (a11·b212)² ∈ I exactly");
}

#[test]
fn acceptance_05_fan_decomposition() {
    for r in [2usize, 3] {
        let m = wedge_k3(r);
        let cx = assemble_controlling(&m, &[0, 1, 2], -2).unwrap();
        let basis = ab_basis(&m, r);
        let ideal = mcideal::mc_generators(&cx, &basis).unwrap();
        let na = r * r;
        let a: Vec<usize> = (0..na).collect();
        let b: Vec<usize> = (na..basis.len()).collect();
        let report = mcideal::fan_decomposition(&ideal, &a, &b, 4).unwrap();
        assert!(report.success, "fan failed for r = {r}");
        assert!(report.non_mixed_generators.is_empty());
        assert_eq!(report.products.len(), na * (basis.len() - na));
    }
    println!("ACCEPTANCE 05 PASS: fan decomposition certified (A ∪ B ⊆ V(I), all mixed monomials nilpotent) for r = 2, 3");
}

#[test]
fn acceptance_06_obstruction_pair() {
    let theta1 = |m: &QuillenModel| {
        der(m, "[x1,[x1,x2]]", "y").add(&der(m, "[x2,[x1,y]]", "z")).unwrap()
    };
    let m = fixture_model("wedge_r2_k3.spec");
    let cx = assemble_controlling(&m, &[1, 2], -2).unwrap();
    let report = mcideal::primary_obstruction(&cx, &theta1(&m)).unwrap();
    assert!(!report.class_zero, "the wedge obstruction must be nonzero");

    let m2 = fixture_model("s10_augmented.spec");
    let cx2 = assemble_controlling(&m2, &[1, 2], -2).unwrap();
    let t1 = theta1(&m2);
    let report2 = mcideal::primary_obstruction(&cx2, &t1).unwrap();
    assert!(report2.class_zero, "the augmented obstruction must vanish");
    let theta2 = report2.square_witness.expect("θ₂ exists");
    let named = der(&m2, "[x1,[x1,[x1,x2]]]", "x10");
    // θ₂ spans the same line as the named witness and satisfies
    // [d, θ₂] = [θ₁, θ₁] exactly.
    let x10 = m2.table.id_of("x10").unwrap();
    let (w0, c0) = theta2.value_on(x10).terms().next().map(|(w, c)| (w.clone(), c.clone())).unwrap();
    let lambda = &c0 / &named.value_on(x10).coefficient(&w0);
    assert_eq!(theta2, named.scale(&lambda));
    let lhs = differential_der(&cx2.model.differential, &theta2).unwrap();
    let rhs = bracket_der(&t1, &t1).unwrap();
    assert_eq!(lhs, rhs);
    println!("ACCEPTANCE 06 PASS: obstruction nonzero on the wedge, zero with witness θ₂ ∝ [x1,[x1,[x1,x2]]] ∂x10 after augmentation");
}

#[test]
fn acceptance_07_segre_relations() {
    let expectations = [("segre_r2_k3.spec", 2usize, 1usize), ("segre_r3_k3.spec", 8, 28)];
    for (name, c, minors) in expectations {
        let m = fixture_model(name);
        let cx = assemble_controlling(&m, &[1, 2], -3).unwrap();
        let report = mcideal::segre_relations(&cx, None).unwrap();
        assert_eq!(report.c, c, "{name}");
        assert_eq!(report.minor_count, minors, "{name}");
        assert!(report.images_independent, "{name}");
        assert!(report.minors_match, "{name}");
    }
    println!("ACCEPTANCE 07 PASS: Segre component equals the span of the 2x2 minors (c = 2 with 1 minor; c = 8 with 28 minors)");
}

#[test]
fn acceptance_08_examples_cohomology() {
    // (S² ∨ S²) × S³: dim H¹ = 1 with the stated representative.
    let m = fixture_model("prod_s2s2_s3.spec");
    let cx = assemble_controlling(&m, &[0, 1, 2], -4).unwrap();
    let total: usize = (-4..=-1).map(|w| cx.cohomology(1, w).unwrap().dim).sum();
    assert_eq!(total, 1);
    let h = cx.cohomology(1, -1).unwrap();
    assert_eq!(h.dim, 1);
    let rep = cx.from_coords(1, -1, &h.h_reps[0]).unwrap();
    let named = der(&m, "[x1,[x1,x2]]", "x13");
    let diff = rep.sub(&named).unwrap();
    let v = cx.coords(&diff).unwrap().remove(&(1, -1)).unwrap_or_default();
    let cls = h.class_of(&v).expect("difference is a cycle");
    assert!(cls.iter().all(Zero::is_zero));
    // S³ ∨ S³ ∨ S⁷ is intrinsically formal: H¹ = 0.
    let m = fixture_model("wedge_s3s3s7.spec");
    let cx = assemble_controlling(&m, &[0, 1, 2], -6).unwrap();
    let total: usize = (-6..=-1).map(|w| cx.cohomology(1, w).unwrap().dim).sum();
    assert_eq!(total, 0);
    // S³ ∨ S³ ∨ S¹²: the degree-1 part has dimension 6.
    let m = fixture_model("wedge_s3s3s12.spec");
    let cx = assemble_controlling(&m, &[1], -6).unwrap();
    assert_eq!(cx.degree_dim(1), 6);
    println!("ACCEPTANCE 08 PASS: dim H¹ = 1 with the stated representative for (S²∨S²)×S³; H¹ = 0 for S³∨S³∨S⁷; dim L¹ = 6 for S³∨S³∨S¹²");
}

#[test]
fn acceptance_09_gauge_properties_ten_thousand_cases() {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut cases = 0usize;

    // (a) 4000 cases: the shear identity (u,v,w) -> (u,v,tu+w).
    let fam = fixture_model("wedge_s3s3s5_s10.spec");
    let b0 = der(&fam, "[x1,x2]", "x5");
    let uvw_point = |m: &QuillenModel, u: &[[i64; 2]; 2], v: i64, w: &[[i64; 2]; 2]| {
        let mut p = Derivation::zero(m.table.clone(), 1);
        for i in 0..2 {
            for j in 0..2 {
                let wrd = |inner: &str| format!("[x{},[x{},{}]]", i + 1, j + 1, inner);
                if u[i][j] != 0 {
                    p = p.add(&der(m, &wrd("x5"), "x10").scale(&scalar::int(u[i][j]))).unwrap();
                }
                if w[i][j] != 0 {
                    p = p
                        .add(&der(m, &wrd("[x1,x2]"), "x10").scale(&scalar::int(w[i][j])))
                        .unwrap();
                }
            }
        }
        if v != 0 {
            p = p
                .add(
                    &der(m, "[x1,[x2,x5]]", "x10")
                        .sub(&der(m, "[x2,[x1,x5]]", "x10"))
                        .unwrap()
                        .scale(&scalar::int(v)),
                )
                .unwrap();
        }
        p
    };
    for _ in 0..4000 {
        let sym = |rng: &mut StdRng| {
            let (a, b, c) =
                (rng.random_range(-4..=4), rng.random_range(-4..=4), rng.random_range(-4..=4));
            [[a, b], [b, c]]
        };
        let u = sym(&mut rng);
        let w = sym(&mut rng);
        let v = rng.random_range(-4..=4);
        let t = rng.random_range(-6..=6);
        let p = uvw_point(&fam, &u, v, &w);
        let moved = gauge::exp_action(&fam, &b0.scale(&scalar::int(t)), &p).unwrap();
        let shear = [
            [t * u[0][0] + w[0][0], t * u[0][1] + w[0][1]],
            [t * u[1][0] + w[1][0], t * u[1][1] + w[1][1]],
        ];
        assert_eq!(moved, uvw_point(&fam, &u, v, &shear));
        cases += 1;
    }

    // (b) 3000 cases: exp_action preserves a vanishing defect.
    let m = fixture_model("s10_augmented.spec");
    let alphas = [
        der(&m, "[x1,[x1,y]]", "z"),
        der(&m, "[x1,[x2,y]]", "z"),
        der(&m, "[x2,[x1,y]]", "z"),
        der(&m, "[x2,[x2,y]]", "z"),
    ];
    let betas = [der(&m, "[x1,[x1,x2]]", "y"), der(&m, "[x2,[x1,x2]]", "y")];
    let dirs = [der(&m, "[x1,y]", "x10"), der(&m, "[x2,y]", "x10")];
    for _ in 0..3000 {
        let pool: &[Derivation] = if rng.random_bool(0.5) { &alphas } else { &betas };
        let mut p = Derivation::zero(m.table.clone(), 1);
        for theta in pool {
            p = p.add(&theta.scale(&scalar::int(rng.random_range(-6..=6)))).unwrap();
        }
        let mut b = Derivation::zero(m.table.clone(), 0);
        for d0 in &dirs {
            b = b.add(&d0.scale(&scalar::int(rng.random_range(-4..=4)))).unwrap();
        }
        let q = gauge::exp_action(&m, &b, &p).unwrap();
        assert!(gauge::defect(&m, &q).unwrap().is_zero());
        cases += 1;
    }

    // (c) 3000 cases: du/dt + [ζ,u] = 0 identically along integrated flows.
    for _ in 0..3000 {
        let p0 = der(&m, "[x1,[x1,x2]]", "y")
            .scale(&scalar::int(rng.random_range(-4..=4)))
            .add(&der(&m, "[x2,[x1,y]]", "z").scale(&scalar::int(rng.random_range(-4..=4))))
            .unwrap();
        let mut coeffs = BTreeMap::new();
        for k in 0..=1u32 {
            let c = rng.random_range(-3..=3);
            if c != 0 {
                coeffs.insert(k, dirs[rng.random_range(0..2)].scale(&scalar::int(c)));
            }
        }
        let zeta = DerPoly::from_coeffs(m.table.clone(), 0, coeffs).unwrap();
        let path = gauge::flow_solve(&m, &p0, &zeta).unwrap();
        let flow = gauge::mc_defect_flow(&m, &path).unwrap();
        assert!(flow.ode_residual.is_zero());
        assert!(gauge::flow_equation_residual(&m, &path).unwrap().is_zero());
        cases += 1;
    }
    assert_eq!(cases, 10_000);
    println!("ACCEPTANCE 09 PASS: 10000 randomized gauge cases (shear identity, defect preservation, conservation law) hold exactly");
}

#[test]
fn acceptance_10_transfer_master_identity() {
    // Every bundled spec with a nonzero differential.
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../specs");
    let mut nonzero_d = 0usize;
    let mut entries: Vec<_> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().map(|e| e == "spec").unwrap_or(false))
        .collect();
    entries.sort();
    for path in entries {
        let model = build_model(&load_spec_file(&path).unwrap()).unwrap();
        if model.is_bouquet() {
            continue;
        }
        nonzero_d += 1;
        let cx = assemble_controlling(&model, &[0, 1, 2, 3, 4], -4).unwrap();
        let br = miniversal::transfer(&cx, 4).unwrap();
        assert!(br.master_residuals.is_empty(), "{path:?}");
        let residuals = miniversal::master_identity_check(&cx, &br).unwrap();
        assert!(residuals.is_empty(), "{path:?}: {residuals:?}");
        let n1 = br.basis.h1.len() as u32;
        for n in 2..=4u32 {
            let mut tuples = Vec::new();
            tuples_up_to(n1, n as usize, &mut Vec::new(), &mut tuples);
            for (tuple, res) in miniversal::check_n_jacobi(&br, n, &tuples).unwrap() {
                assert!(
                    res.iter().all(Zero::is_zero),
                    "{path:?}: {n}-Jacobi fails on {tuple:?}"
                );
            }
        }
    }
    assert!(nonzero_d >= 2, "at least two bundled specs have nonzero differential");

    // Mutation: injecting a defect into the brackets must flip a residual.
    let m = fixture_model("deep_wedge.spec");
    let cx = assemble_controlling(&m, &[0, 1, 2, 3, 4], -4).unwrap();
    let mut br = miniversal::transfer(&cx, 3).unwrap();
    let (j_star, i_star) = br
        .s_brackets
        .iter()
        .find_map(|((j, mm), v)| {
            (mm.len() == 1 && v.iter().any(|c| !c.is_zero())).then(|| (*j, mm[0]))
        })
        .expect("nonzero mixed bracket");
    let key = vec![0u32, 1];
    let h2len = br.basis.h2.len();
    br.t_brackets
        .entry(key.clone())
        .or_insert_with(|| vec![scalar::zero(); h2len])[j_star as usize] += scalar::ratio(1, 7);
    let mut tuple = key;
    tuple.push(i_star);
    tuple.sort_unstable();
    let residuals = miniversal::check_n_jacobi(&br, 3, &[tuple]).unwrap();
    assert!(residuals[0].1.iter().any(|c| !c.is_zero()), "mutation not detected");
    println!("ACCEPTANCE 10 PASS: master identity and n-Jacobi (n ≤ 4) hold on every nonzero-differential spec; injected defects are detected");
}

fn tuples_up_to(n1: u32, len: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if cur.len() == len {
        out.push(cur.clone());
        return;
    }
    let start = cur.last().copied().unwrap_or(0);
    for i in start..n1 {
        cur.push(i);
        tuples_up_to(n1, len, cur, out);
        cur.pop();
    }
}

#[test]
fn acceptance_11_kernel_oracles() {
    // 1000 random bracket trees, r <= 3, length <= 6: normalization agrees
    // with the associative embedding.
    let mut rng = StdRng::seed_from_u64(0xacce);
    let tables = oracle_tables();
    for round in 0..1000 {
        let table = &tables[round % tables.len()];
        let len = 1 + (round % 6);
        let tree = random_tree(&mut rng, table.len() as u32, len);
        let expr = tree_to_expr(table, &tree);
        let normalized = normalize(table, &expr).unwrap();
        assert_eq!(
            expand_element(&normalized),
            expand_tree(table, &tree).0,
            "tree {expr:?}"
        );
    }
    // Basis counts equal brute-force commutator-span ranks (r <= 3, n <= 5).
    for table in &tables {
        for n in 1..=5usize {
            let mut rows = Vec::new();
            for word in all_words(table.len() as u32, n) {
                let mut tree = Tree::Leaf(word[n - 1]);
                for i in (0..n - 1).rev() {
                    tree = Tree::Node(Box::new(Tree::Leaf(word[i])), Box::new(tree));
                }
                rows.push(expand_tree(table, &tree).0);
            }
            assert_eq!(
                enumerate_basis(table, n, None).unwrap().len(),
                tensor_rank(&rows),
                "length {n}"
            );
        }
    }
    println!("ACCEPTANCE 11 PASS: 1000-tree associative-embedding sweep and brute-force dimension counts agree");
}

#[test]
fn acceptance_smoke_whole_pipeline() {
    // A cross-module sanity pass tying the pieces together: the miniversal
    // ideal of the bouquet family coincides with the direct quadrics, and
    // gauge orbits respect it.
    let m = wedge_k3(2);
    let cx = assemble_controlling(&m, &[0, 1, 2, 3, 4], -2).unwrap();
    let br = miniversal::transfer(&cx, 2).unwrap();
    let ideal = miniversal::miniversal_ideal(&br).unwrap();
    assert_eq!(ideal.generators.len(), 6);
    // A pure-B point solves the ideal; flowing it stays a solution.
    let p = der(&m, "[x1,[x1,x2]]", "y");
    assert!(gauge::defect(&m, &p).unwrap().is_zero());
    let b = der(&m, "[x1,[x1,[x1,[x1,[x1,x2]]]]]", "z");
    let q = gauge::exp_action(&m, &b, &p).unwrap();
    assert!(gauge::defect(&m, &q).unwrap().is_zero());
    let _ = bracket(
        &LieElement::generator(m.table.clone(), 0),
        &LieElement::generator(m.table.clone(), 1),
    )
    .unwrap();
    println!("ACCEPTANCE SMOKE PASS: cross-module pipeline consistent");
}
