//! Generator alphabets of free graded Lie algebras.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};

/// One generator: a name, a (topological) degree and a weight.
///
/// For a generator dual to a cohomology class of degree `s` the suspended-dual
/// convention gives degree `1 - s` and weight `s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
    pub weight: i64,
}

/// An ordered alphabet.  The input order is total and fixed; it is the letter
/// order underlying the canonical word basis.
#[derive(Debug, Clone)]
pub struct GeneratorTable {
    gens: Vec<Generator>,
    by_name: HashMap<String, u32>,
}

impl PartialEq for GeneratorTable {
    fn eq(&self, other: &Self) -> bool {
        self.gens == other.gens
    }
}
impl Eq for GeneratorTable {}

impl GeneratorTable {
    pub fn new(gens: Vec<Generator>) -> Result<Arc<Self>> {
        if gens.is_empty() {
            return Err(Error::Input("empty generator table".into()));
        }
        let mut by_name = HashMap::new();
        for (i, g) in gens.iter().enumerate() {
            if by_name.insert(g.name.clone(), i as u32).is_some() {
                return Err(Error::Input(format!("duplicate generator name `{}`", g.name)));
            }
        }
        Ok(Arc::new(GeneratorTable { gens, by_name }))
    }

    /// Convenience constructor from `(name, degree, weight)` triples.
    pub fn from_triples(triples: &[(&str, i64, i64)]) -> Result<Arc<Self>> {
        Self::new(
            triples
                .iter()
                .map(|(n, d, w)| Generator { name: n.to_string(), degree: *d, weight: *w })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn get(&self, id: u32) -> &Generator {
        &self.gens[id as usize]
    }

    pub fn id_of(&self, name: &str) -> Result<u32> {
        self.by_name
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn name(&self, id: u32) -> &str {
        &self.gens[id as usize].name
    }

    pub fn degree(&self, id: u32) -> i64 {
        self.gens[id as usize].degree
    }

    pub fn weight(&self, id: u32) -> i64 {
        self.gens[id as usize].weight
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &Generator)> {
        self.gens.iter().enumerate().map(|(i, g)| (i as u32, g))
    }

    /// All generator weights strictly positive (needed to bound word
    /// enumeration by weight).
    pub fn weights_positive(&self) -> bool {
        self.gens.iter().all(|g| g.weight > 0)
    }

    pub fn min_weight(&self) -> i64 {
        self.gens.iter().map(|g| g.weight).min().unwrap()
    }
}

pub(crate) fn same_table(a: &Arc<GeneratorTable>, b: &Arc<GeneratorTable>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::MixedTables)
    }
}
