//! Python bindings: the main types and operations of the deformation
//! engine, importable as `rhodef_py`.

use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use rhodef::complex::{assemble_controlling, BigradedComplex};
use rhodef::derivation::Derivation;
use rhodef::gauge::{self, OrbitFamily};
use rhodef::lie::{self, Expr};
use rhodef::mcideal::{self, NamedDerivation};
use rhodef::miniversal;
use rhodef::poly::Monomial;
use rhodef::quillen::{build_model, QuillenModel};
use rhodef::scalar;
use rhodef::specfile;

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A Quillen model built from a cohomology spec.
#[pyclass]
struct Model {
    inner: QuillenModel,
}

#[pymethods]
impl Model {
    /// Parses the spec file format and builds the model (validating the
    /// spec and checking d² = 0).
    #[new]
    fn new(spec_text: &str) -> PyResult<Self> {
        let spec = specfile::parse_spec(spec_text).map_err(err)?;
        Ok(Model { inner: build_model(&spec).map_err(err)? })
    }

    #[staticmethod]
    fn from_file(path: &str) -> PyResult<Self> {
        let spec = specfile::load_spec_file(std::path::Path::new(path)).map_err(err)?;
        Ok(Model { inner: build_model(&spec).map_err(err)? })
    }

    fn name(&self) -> String {
        self.inner.spec.name.clone()
    }

    /// `(name, degree, weight)` triples of the suspended-dual generators.
    fn generators(&self) -> Vec<(String, i64, i64)> {
        self.inner
            .table
            .iter()
            .map(|(_, g)| (g.name.clone(), g.degree, g.weight))
            .collect()
    }

    /// The differential on each generator, rendered, omitting zeros.
    fn differential(&self) -> BTreeMap<String, String> {
        self.inner
            .table
            .iter()
            .map(|(id, g)| (g.name.clone(), self.inner.differential.value_on(id)))
            .filter(|(_, v)| !v.is_zero())
            .map(|(n, v)| (n, v.to_string()))
            .collect()
    }

    fn is_bouquet(&self) -> bool {
        self.inner.is_bouquet()
    }

    /// Canonical basis words of the free graded Lie algebra in one bracket
    /// length, optionally restricted to a content vector.
    #[pyo3(signature = (length, content=None))]
    fn enumerate_basis(&self, length: usize, content: Option<Vec<i64>>) -> PyResult<Vec<String>> {
        let basis =
            lie::enumerate_basis(&self.inner.table, length, content.as_deref()).map_err(err)?;
        Ok(basis.iter().map(|w| w.display(&self.inner.table).to_string()).collect())
    }

    /// Normalizes a bracket expression like `[x1,[x2,y]]` into the
    /// canonical basis.
    fn normalize(&self, expr: &str) -> PyResult<String> {
        let e = Expr::parse(expr).map_err(err)?;
        Ok(lie::normalize(&self.inner.table, &e).map_err(err)?.to_string())
    }

    /// The graded bracket of two bracket expressions.
    fn bracket(&self, a: &str, b: &str) -> PyResult<String> {
        let ea = lie::normalize(&self.inner.table, &Expr::parse(a).map_err(err)?).map_err(err)?;
        let eb = lie::normalize(&self.inner.table, &Expr::parse(b).map_err(err)?).map_err(err)?;
        Ok(lie::bracket(&ea, &eb).map_err(err)?.to_string())
    }

    /// Dimensions `(weight, block_dim, dim_H)` of the cohomology of the
    /// controlling algebra in one degree.
    #[pyo3(signature = (degree, weight_min=-6))]
    fn cohomology(&self, degree: i64, weight_min: i64) -> PyResult<Vec<(i64, usize, usize)>> {
        let cx = assemble_controlling(&self.inner, &[degree - 1, degree, degree + 1], weight_min)
            .map_err(err)?;
        let mut out = Vec::new();
        for w in weight_min..=-1 {
            let block = cx.block(degree, w).map_err(err)?.dim();
            let h = cx.cohomology(degree, w).map_err(err)?;
            out.push((w, block, h.dim));
        }
        Ok(out)
    }

    /// Generators of the Maurer-Cartan ideal as `(label, polynomial)`
    /// pairs, over a named basis file text or the canonical block basis.
    #[pyo3(signature = (weight_min=-6, basis_text=None))]
    fn mc_generators(
        &self,
        weight_min: i64,
        basis_text: Option<&str>,
    ) -> PyResult<Vec<(String, String)>> {
        let (cx, basis) = self.ideal_setup(weight_min, basis_text)?;
        let ideal = mcideal::mc_generators(&cx, &basis).map_err(err)?;
        Ok(ideal.generators.iter().map(|g| (g.label.clone(), g.poly.to_string())).collect())
    }

    /// Least power of the named monomial (e.g. `a11*b212`) lying in the
    /// ideal, or None.
    #[pyo3(signature = (monomial, weight_min=-6, max_power=4, basis_text=None))]
    fn nilpotent(
        &self,
        monomial: &str,
        weight_min: i64,
        max_power: u32,
        basis_text: Option<&str>,
    ) -> PyResult<Option<u32>> {
        let (cx, basis) = self.ideal_setup(weight_min, basis_text)?;
        let ideal = mcideal::mc_generators(&cx, &basis).map_err(err)?;
        let mut pairs = Vec::new();
        for factor in monomial.split('*') {
            let factor = factor.trim();
            let (name, e) = match factor.split_once('^') {
                Some((n, e)) => {
                    (n.trim(), e.trim().parse::<u32>().map_err(|_| err("bad exponent"))?)
                }
                None => (factor, 1),
            };
            pairs.push((ideal.coords.index_of(name).map_err(err)?, e));
        }
        mcideal::is_nilpotent_mod(&Monomial::from_pairs(pairs), &ideal, max_power).map_err(err)
    }

    /// The class of `dθ + ½[θ,θ]` in H²: returns `(class_zero, witness)`.
    #[pyo3(signature = (theta_text, weight_min=-6))]
    fn obstruction(&self, theta_text: &str, weight_min: i64) -> PyResult<(bool, Option<String>)> {
        let cx = assemble_controlling(&self.inner, &[1, 2], weight_min).map_err(err)?;
        let theta = specfile::parse_constant_derivation(&self.inner, theta_text).map_err(err)?;
        let report = mcideal::primary_obstruction(&cx, &theta).map_err(err)?;
        Ok((report.class_zero, report.witness.map(|w| w.to_string())))
    }

    /// `(exp ad b)(d + p) - d` for derivation file texts `b` and `p`.
    fn exp_action(&self, b_text: &str, p_text: &str) -> PyResult<String> {
        let b = specfile::parse_constant_derivation(&self.inner, b_text).map_err(err)?;
        let p = specfile::parse_constant_derivation(&self.inner, p_text).map_err(err)?;
        Ok(gauge::exp_action(&self.inner, &b, &p).map_err(err)?.to_string())
    }

    /// The Maurer-Cartan defect `dp + ½[p,p]` of a derivation file text.
    fn defect(&self, p_text: &str) -> PyResult<String> {
        let p = specfile::parse_constant_derivation(&self.inner, p_text).map_err(err)?;
        Ok(gauge::defect(&self.inner, &p).map_err(err)?.to_string())
    }

    /// Transferred structure and miniversal ideal: returns a dict-like
    /// tuple `(h_dims, strict, master_ok, generators)`.
    #[pyo3(signature = (weight_min=-4, cutoff=4))]
    fn miniversal(
        &self,
        weight_min: i64,
        cutoff: u32,
    ) -> PyResult<((usize, usize, usize), bool, bool, Vec<(String, String)>)> {
        let cx =
            assemble_controlling(&self.inner, &[0, 1, 2, 3, 4], weight_min).map_err(err)?;
        let br = miniversal::transfer(&cx, cutoff).map_err(err)?;
        let master = miniversal::master_identity_check(&cx, &br).map_err(err)?;
        let ideal = miniversal::miniversal_ideal(&br).map_err(err)?;
        Ok((
            (br.basis.h1.len(), br.basis.h2.len(), br.basis.h3.len()),
            br.strict,
            master.is_empty(),
            ideal.generators.iter().map(|g| (g.label.clone(), g.poly.to_string())).collect(),
        ))
    }
}

impl Model {
    fn ideal_setup(
        &self,
        weight_min: i64,
        basis_text: Option<&str>,
    ) -> PyResult<(BigradedComplex, Vec<NamedDerivation>)> {
        let cx = assemble_controlling(&self.inner, &[0, 1, 2], weight_min).map_err(err)?;
        let basis = match basis_text {
            Some(text) => specfile::parse_basis_file(&self.inner, text).map_err(err)?,
            None => {
                let mut out = Vec::new();
                for w in weight_min..=-1 {
                    if let Ok(block) = cx.block(1, w) {
                        for elem in block.basis.clone() {
                            let der = Derivation::single(
                                elem.target,
                                rhodef::lie::LieElement::from_basis_word(
                                    self.inner.table.clone(),
                                    elem.word.clone(),
                                ),
                            )
                            .map_err(err)?;
                            out.push(NamedDerivation {
                                name: format!("g{}", out.len() + 1),
                                der,
                            });
                        }
                    }
                }
                out
            }
        };
        Ok((cx, basis))
    }
}

/// Normal-form label of a point in a supported orbit family
/// (`quadratic2` or `bilinear2`).
#[pyfunction]
fn orbit_normal_form(family: &str, point: Vec<String>) -> PyResult<(String, u32, Vec<String>)> {
    let fam = match family {
        "quadratic2" => OrbitFamily::QuadraticForm2,
        "bilinear2" => OrbitFamily::BilinearPair2,
        other => return Err(err(format!("unsupported family `{other}`"))),
    };
    let coords: Vec<_> = point
        .iter()
        .map(|s| scalar::parse(s).ok_or_else(|| err(format!("bad coordinate `{s}`"))))
        .collect::<PyResult<_>>()?;
    let nf = gauge::orbit_normal_form(fam, &coords).map_err(err)?;
    Ok((nf.label, nf.rank, nf.degenerates_to))
}

#[pymodule]
fn rhodef_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Model>()?;
    m.add_function(wrap_pyfunction!(orbit_normal_form, m)?)?;
    Ok(())
}
