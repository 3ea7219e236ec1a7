//! Elements of a free graded Lie algebra over ℚ and their arithmetic.
//!
//! Normalization rewrites arbitrary bracket expressions into the canonical
//! word basis using graded antisymmetry and the graded Jacobi relation
//! `[[a,b],c] = [a,[b,c]] - (-1)^{|a||b|}[b,[a,c]]` only; the bracket of two
//! standard Lyndon bracketings recurses along the standard factorization of
//! the left factor.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num::Zero;

use crate::error::{Error, Result};
use crate::gens::{same_table, GeneratorTable};
use crate::scalar::{self, Scalar};
use crate::word::{is_lyndon, standard_split, BasisWord, Word};

/// A finite ℚ-linear combination of canonical basis words.  Zero
/// coefficients are never stored; term order is the canonical basis order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieElement {
    table: Arc<GeneratorTable>,
    terms: BTreeMap<BasisWord, Scalar>,
}

/// A bracket expression tree with generator names at the leaves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Gen(String),
    Bracket(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn gen(name: &str) -> Expr {
        Expr::Gen(name.to_string())
    }

    pub fn bracket(a: Expr, b: Expr) -> Expr {
        Expr::Bracket(Box::new(a), Box::new(b))
    }

    /// Parses `[a,[b,c]]`-style nested brackets over generator names.
    pub fn parse(s: &str) -> Result<Expr> {
        let chars: Vec<char> = s.chars().collect();
        let mut pos = 0usize;
        let expr = parse_expr(&chars, &mut pos)?;
        skip_ws(&chars, &mut pos);
        if pos != chars.len() {
            return Err(Error::Input(format!("trailing input in bracket expression `{s}`")));
        }
        Ok(expr)
    }
}

fn skip_ws(s: &[char], pos: &mut usize) {
    while *pos < s.len() && s[*pos].is_whitespace() {
        *pos += 1;
    }
}

fn parse_expr(s: &[char], pos: &mut usize) -> Result<Expr> {
    skip_ws(s, pos);
    let err = |pos: usize, msg: &str| Error::Parse { line: 1, col: pos + 1, msg: msg.into() };
    if *pos >= s.len() {
        return Err(err(*pos, "unexpected end of bracket expression"));
    }
    if s[*pos] == '[' {
        *pos += 1;
        let a = parse_expr(s, pos)?;
        skip_ws(s, pos);
        if *pos >= s.len() || s[*pos] != ',' {
            return Err(err(*pos, "expected `,` in bracket"));
        }
        *pos += 1;
        let b = parse_expr(s, pos)?;
        skip_ws(s, pos);
        if *pos >= s.len() || s[*pos] != ']' {
            return Err(err(*pos, "expected `]`"));
        }
        *pos += 1;
        Ok(Expr::bracket(a, b))
    } else {
        let start = *pos;
        while *pos < s.len() && (s[*pos].is_alphanumeric() || s[*pos] == '_' || s[*pos] == '\'') {
            *pos += 1;
        }
        if *pos == start {
            return Err(err(*pos, "expected generator name or `[`"));
        }
        Ok(Expr::Gen(s[start..*pos].iter().collect()))
    }
}

/// Degree parity used in Koszul signs.
pub fn parity(n: i64) -> u8 {
    n.rem_euclid(2) as u8
}

impl LieElement {
    pub fn zero(table: Arc<GeneratorTable>) -> Self {
        LieElement { table, terms: BTreeMap::new() }
    }

    pub fn generator(table: Arc<GeneratorTable>, id: u32) -> Self {
        Self::from_basis_word(table, BasisWord::Lyndon(vec![id]))
    }

    pub fn from_basis_word(table: Arc<GeneratorTable>, w: BasisWord) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(w, scalar::one());
        LieElement { table, terms }
    }

    pub fn table(&self) -> &Arc<GeneratorTable> {
        &self.table
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisWord, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, w: &BasisWord) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(scalar::zero)
    }

    pub fn add_term(&mut self, w: BasisWord, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &LieElement) -> Result<LieElement> {
        same_table(&self.table, &other.table)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &LieElement) -> Result<LieElement> {
        self.add(&other.scale(&-scalar::one()))
    }

    pub fn scale(&self, c: &Scalar) -> LieElement {
        if c.is_zero() {
            return LieElement::zero(self.table.clone());
        }
        LieElement {
            table: self.table.clone(),
            terms: self.terms.iter().map(|(w, v)| (w.clone(), v * c)).collect(),
        }
    }

    /// Degree if all terms share one (`None` for zero or mixed).
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut it = self.terms.keys().map(|w| w.degree(&self.table));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn homogeneous_weight(&self) -> Option<i64> {
        let mut it = self.terms.keys().map(|w| w.weight(&self.table));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn homogeneous_content(&self) -> Option<Vec<i64>> {
        let mut it = self.terms.keys().map(|w| w.content(&self.table));
        let first = it.next()?;
        it.all(|c| c == first).then_some(first)
    }

    /// Splits into weight-homogeneous parts (zero parts omitted).
    pub fn weight_components(&self) -> BTreeMap<i64, LieElement> {
        let mut out: BTreeMap<i64, LieElement> = BTreeMap::new();
        for (w, c) in &self.terms {
            out.entry(w.weight(&self.table))
                .or_insert_with(|| LieElement::zero(self.table.clone()))
                .add_term(w.clone(), c.clone());
        }
        out
    }
}

impl fmt::Display for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}*{}", scalar::fmt(c), w.display(&self.table))?;
        }
        Ok(())
    }
}

/// The graded bracket of two elements.
pub fn bracket(a: &LieElement, b: &LieElement) -> Result<LieElement> {
    same_table(a.table(), b.table())?;
    let mut rw = Rewriter::new(a.table.clone());
    Ok(rw.bracket_elements(a, b))
}

/// Normalizes a bracket expression tree into the canonical basis.
pub fn normalize(table: &Arc<GeneratorTable>, expr: &Expr) -> Result<LieElement> {
    let mut rw = Rewriter::new(table.clone());
    rw.normalize_expr(expr)
}

/// Rewriting context; memoizes brackets of basis-word pairs.
pub struct Rewriter {
    table: Arc<GeneratorTable>,
    cache: HashMap<(BasisWord, BasisWord), LieElement>,
}

impl Rewriter {
    pub fn new(table: Arc<GeneratorTable>) -> Self {
        Rewriter { table, cache: HashMap::new() }
    }

    pub fn table(&self) -> &Arc<GeneratorTable> {
        &self.table
    }

    pub fn normalize_expr(&mut self, expr: &Expr) -> Result<LieElement> {
        match expr {
            Expr::Gen(name) => {
                let id = self.table.id_of(name)?;
                Ok(LieElement::generator(self.table.clone(), id))
            }
            Expr::Bracket(a, b) => {
                let a = self.normalize_expr(a)?;
                let b = self.normalize_expr(b)?;
                Ok(self.bracket_elements(&a, &b))
            }
        }
    }

    pub fn bracket_elements(&mut self, a: &LieElement, b: &LieElement) -> LieElement {
        let mut out = LieElement::zero(self.table.clone());
        for (u, cu) in &a.terms {
            for (v, cv) in &b.terms {
                let w = self.bracket_words(u, v);
                let c = cu * cv;
                for (bw, k) in &w.terms {
                    out.add_term(bw.clone(), k * &c);
                }
            }
        }
        out
    }

    fn word_parity(&self, w: &BasisWord) -> u8 {
        parity(w.degree(&self.table))
    }

    pub fn bracket_words(&mut self, u: &BasisWord, v: &BasisWord) -> LieElement {
        let key = (u.clone(), v.clone());
        if let Some(hit) = self.cache.get(&key) {
            return hit.clone();
        }
        let result = self.bracket_words_uncached(u, v);
        self.cache.insert(key, result.clone());
        result
    }

    fn bracket_words_uncached(&mut self, u: &BasisWord, v: &BasisWord) -> LieElement {
        match (u, v) {
            // [b(w),[b(w),b(w)]] = 0 in characteristic zero (graded Jacobi),
            // and [[w,w],[w,w]] = 0 since squares are even.
            (BasisWord::Lyndon(a), BasisWord::Square(b))
            | (BasisWord::Square(a), BasisWord::Lyndon(b))
            | (BasisWord::Square(a), BasisWord::Square(b))
                if a == b =>
            {
                LieElement::zero(self.table.clone())
            }
            // [[w,w], y] = 2 [w, [w, y]] for odd w (graded Jacobi).
            (BasisWord::Square(w), _) => {
                let lw = BasisWord::Lyndon(w.clone());
                let inner = self.bracket_words(&lw, v);
                let e = LieElement::from_basis_word(self.table.clone(), lw);
                self.bracket_elements(&e, &inner).scale(&scalar::int(2))
            }
            // [y, [w,w]] = -[[w,w], y]: squares have even degree.
            (_, BasisWord::Square(_)) => self.bracket_words(v, u).scale(&-scalar::one()),
            (BasisWord::Lyndon(wu), BasisWord::Lyndon(wv)) => {
                if wu == wv {
                    return if self.word_parity(u) == 1 {
                        LieElement::from_basis_word(
                            self.table.clone(),
                            BasisWord::Square(wu.clone()),
                        )
                    } else {
                        LieElement::zero(self.table.clone())
                    };
                }
                if wu[..] > wv[..] {
                    // [u,v] = -(-1)^{|u||v|} [v,u]
                    let sign = if self.word_parity(u) * self.word_parity(v) == 1 {
                        scalar::one()
                    } else {
                        -scalar::one()
                    };
                    return self.bracket_words(v, u).scale(&sign);
                }
                self.lyndon_bracket(wu, wv)
            }
        }
    }

    /// `[b(u), b(v)]` for Lyndon words `u < v`.
    fn lyndon_bracket(&mut self, u: &Word, v: &Word) -> LieElement {
        debug_assert!(is_lyndon(u) && is_lyndon(v) && u[..] < v[..]);
        // (u, v) is the standard factorization of uv exactly when u is a
        // letter or the right factor of u's standard factorization is >= v.
        let split = if u.len() >= 2 { Some(standard_split(u)) } else { None };
        let standard = match split {
            None => true,
            Some(k) => u[k..] >= v[..],
        };
        if standard {
            let mut w = u.clone();
            w.extend_from_slice(v);
            debug_assert!(is_lyndon(&w));
            return LieElement::from_basis_word(self.table.clone(), BasisWord::Lyndon(w));
        }
        // u = u1 u2 with u2 < v:
        // [[b(u1),b(u2)],b(v)] = [b(u1),[b(u2),b(v)]] - (-1)^{|u1||u2|}[b(u2),[b(u1),b(v)]]
        let k = split.unwrap();
        let (u1, u2) = (u[..k].to_vec(), u[k..].to_vec());
        let p1 = parity(u1.iter().map(|&l| self.table.degree(l)).sum());
        let p2 = parity(u2.iter().map(|&l| self.table.degree(l)).sum());
        let b1 = BasisWord::Lyndon(u1);
        let b2 = BasisWord::Lyndon(u2);
        let bv = BasisWord::Lyndon(v.clone());
        let e1 = LieElement::from_basis_word(self.table.clone(), b1.clone());
        let e2 = LieElement::from_basis_word(self.table.clone(), b2.clone());

        let inner2v = self.bracket_words(&b2, &bv);
        let t1 = self.bracket_elements(&e1, &inner2v);
        let inner1v = self.bracket_words(&b1, &bv);
        let t2 = self.bracket_elements(&e2, &inner1v);
        let sign = if p1 * p2 == 1 { -scalar::one() } else { scalar::one() };
        t1.sub(&t2.scale(&sign)).expect("same table")
    }
}

/// Enumerates the canonical basis of the given bracket length, optionally
/// restricted to a content vector over the alphabet.
pub fn enumerate_basis(
    table: &Arc<GeneratorTable>,
    length: usize,
    content: Option<&[i64]>,
) -> Result<Vec<BasisWord>> {
    if length == 0 {
        return Err(Error::Input("bracket length must be >= 1".into()));
    }
    if let Some(c) = content {
        if c.len() != table.len() {
            return Err(Error::Input(format!(
                "content vector has {} entries but the alphabet has {}",
                c.len(),
                table.len()
            )));
        }
        if c.iter().any(|&x| x < 0) {
            return Err(Error::Input("content entries must be nonnegative".into()));
        }
        let total: i64 = c.iter().sum();
        if total != length as i64 {
            return Err(Error::Input(format!(
                "content sums to {total}, expected the length {length}"
            )));
        }
    }
    Ok(crate::word::basis_of_length(table, length, content))
}
