//! Canonical basis words of a free graded Lie algebra.
//!
//! Over ℚ the free graded Lie algebra on an alphabet has a basis indexed by
//! Lyndon words in standard (right) bracketing, together with the square
//! `[w, w]` of every Lyndon word of odd degree.

use std::cmp::Ordering;
use std::fmt;

use crate::gens::GeneratorTable;

/// A word is a sequence of generator indices.
pub type Word = Vec<u32>;

/// A canonical basis element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BasisWord {
    /// Standard bracketing of a Lyndon word.
    Lyndon(Word),
    /// `[b(w), b(w)]` for a Lyndon word `w` of odd degree.
    Square(Word),
}

/// Basis words are ordered by bracket length, then by kind, then by letters;
/// this is the deterministic order used everywhere a basis is listed.
impl Ord for BasisWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.length()
            .cmp(&other.length())
            .then_with(|| self.rank().cmp(&other.rank()))
            .then_with(|| self.letters().cmp(other.letters()))
    }
}

impl PartialOrd for BasisWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl BasisWord {
    fn rank(&self) -> u8 {
        match self {
            BasisWord::Lyndon(_) => 0,
            BasisWord::Square(_) => 1,
        }
    }

    pub fn letters(&self) -> &[u32] {
        match self {
            BasisWord::Lyndon(w) | BasisWord::Square(w) => w,
        }
    }

    /// Bracket length (number of letters, squares counted twice).
    pub fn length(&self) -> usize {
        match self {
            BasisWord::Lyndon(w) => w.len(),
            BasisWord::Square(w) => 2 * w.len(),
        }
    }

    pub fn degree(&self, table: &GeneratorTable) -> i64 {
        let d: i64 = self.letters().iter().map(|&l| table.degree(l)).sum();
        match self {
            BasisWord::Lyndon(_) => d,
            BasisWord::Square(_) => 2 * d,
        }
    }

    pub fn weight(&self, table: &GeneratorTable) -> i64 {
        let w: i64 = self.letters().iter().map(|&l| table.weight(l)).sum();
        match self {
            BasisWord::Lyndon(_) => w,
            BasisWord::Square(_) => 2 * w,
        }
    }

    /// Letter multiplicity vector over the whole alphabet.
    pub fn content(&self, table: &GeneratorTable) -> Vec<i64> {
        let mut c = vec![0i64; table.len()];
        let m = match self {
            BasisWord::Lyndon(_) => 1,
            BasisWord::Square(_) => 2,
        };
        for &l in self.letters() {
            c[l as usize] += m;
        }
        c
    }

    /// The canonical bracketing as a binary tree.
    pub fn tree(&self) -> Tree {
        match self {
            BasisWord::Lyndon(w) => lyndon_tree(w),
            BasisWord::Square(w) => {
                let t = lyndon_tree(w);
                Tree::Node(Box::new(t.clone()), Box::new(t))
            }
        }
    }

    pub fn display<'a>(&'a self, table: &'a GeneratorTable) -> BasisWordDisplay<'a> {
        BasisWordDisplay { word: self, table }
    }
}

pub struct BasisWordDisplay<'a> {
    word: &'a BasisWord,
    table: &'a GeneratorTable,
}

impl fmt::Display for BasisWordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn tree(t: &Tree, table: &GeneratorTable, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match t {
                Tree::Leaf(l) => write!(f, "{}", table.name(*l)),
                Tree::Node(a, b) => {
                    write!(f, "[")?;
                    tree(a, table, f)?;
                    write!(f, ",")?;
                    tree(b, table, f)?;
                    write!(f, "]")
                }
            }
        }
        tree(&self.word.tree(), self.table, f)
    }
}

/// Binary bracketing tree over generator indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tree {
    Leaf(u32),
    Node(Box<Tree>, Box<Tree>),
}

/// `w` strictly smaller than all of its proper suffixes.
pub fn is_lyndon(w: &[u32]) -> bool {
    if w.is_empty() {
        return false;
    }
    (1..w.len()).all(|i| w < &w[i..])
}

/// Split point of the standard factorization of a Lyndon word of length >= 2:
/// the right factor is the lexicographically least proper suffix.
pub fn standard_split(w: &[u32]) -> usize {
    debug_assert!(w.len() >= 2 && is_lyndon(w));
    let mut best = 1;
    for i in 2..w.len() {
        if w[i..] < w[best..] {
            best = i;
        }
    }
    best
}

fn lyndon_tree(w: &[u32]) -> Tree {
    if w.len() == 1 {
        Tree::Leaf(w[0])
    } else {
        let k = standard_split(w);
        Tree::Node(Box::new(lyndon_tree(&w[..k])), Box::new(lyndon_tree(&w[k..])))
    }
}

/// All Lyndon words of the exact given length over `r` letters, in
/// lexicographic order (Duval's algorithm).
pub fn lyndon_words(r: usize, len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    if r == 0 || len == 0 {
        return out;
    }
    let n = len;
    let mut w: Vec<u32> = vec![0];
    loop {
        if w.len() == n {
            out.push(w.clone());
        }
        // extend periodically to length n
        let m = w.len();
        while w.len() < n {
            let c = w[w.len() - m];
            w.push(c);
        }
        // increment from the right
        while let Some(&last) = w.last() {
            if last as usize == r - 1 {
                w.pop();
            } else {
                break;
            }
        }
        if w.is_empty() {
            return out;
        }
        *w.last_mut().unwrap() += 1;
    }
}

/// The canonical basis of the free graded Lie algebra in bracket length
/// `len`, optionally restricted to a content vector, in the canonical order.
pub fn basis_of_length(
    table: &GeneratorTable,
    len: usize,
    content: Option<&[i64]>,
) -> Vec<BasisWord> {
    let r = table.len();
    let fits = |bw: &BasisWord| match content {
        None => true,
        Some(c) => bw.content(table) == c,
    };
    let mut out: Vec<BasisWord> = Vec::new();
    for w in lyndon_words(r, len) {
        let bw = BasisWord::Lyndon(w);
        if fits(&bw) {
            out.push(bw);
        }
    }
    if len.is_multiple_of(2) {
        for w in lyndon_words(r, len / 2) {
            let deg: i64 = w.iter().map(|&l| table.degree(l)).sum();
            if deg % 2 != 0 {
                let bw = BasisWord::Square(w);
                if fits(&bw) {
                    out.push(bw);
                }
            }
        }
    }
    out.sort();
    out
}

/// All basis words of the given degree and weight.  Requires all generator
/// weights positive, which bounds the length.
pub fn basis_of_bidegree(table: &GeneratorTable, degree: i64, weight: i64) -> Vec<BasisWord> {
    debug_assert!(table.weights_positive());
    if weight <= 0 {
        return Vec::new();
    }
    let max_len = (weight / table.min_weight()).max(0) as usize;
    let mut out = Vec::new();
    for len in 1..=max_len {
        for bw in basis_of_length(table, len, None) {
            if bw.degree(table) == degree && bw.weight(table) == weight {
                out.push(bw);
            }
        }
    }
    out.sort();
    out
}
