//! The oriented hypercube: vertices are bitmasks standing for subsets of
//! {1,..,n}, every edge is directed from a set to the same set plus one
//! element. Families of vertices are stored as bitsets with a cached
//! per-level histogram.

use std::fmt;

use num_bigint::BigUint;

use crate::error::{Error, Result};

/// Largest dimension for which families are materialized (2^28-bit bitset,
/// about 32 MiB). Formula-only operations go further, see
/// [`MAX_FORMULA_DIM`].
pub const MAX_FAMILY_DIM: u32 = 28;

/// Largest dimension accepted by size formulas and bounds, which never
/// materialize a family.
pub const MAX_FORMULA_DIM: u32 = 200;

/// A validated cube dimension, 1..=28.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Dim(u32);

impl Dim {
    pub fn new(n: u32) -> Result<Dim> {
        if n == 0 || n > MAX_FAMILY_DIM {
            return Err(Error::DimTooLarge(n, MAX_FAMILY_DIM));
        }
        Ok(Dim(n))
    }

    pub fn n(self) -> u32 {
        self.0
    }

    pub fn vertex_count(self) -> usize {
        1usize << self.0
    }

    pub fn full_mask(self) -> u32 {
        if self.0 == 32 {
            u32::MAX
        } else {
            (1u32 << self.0) - 1
        }
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A vertex of the cube: bit i-1 set means element i is in the set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex(u32);

impl Vertex {
    pub fn from_mask(dim: Dim, mask: u32) -> Result<Vertex> {
        if mask > dim.full_mask() {
            return Err(Error::ParamRange(format!(
                "vertex mask {mask:#x} out of range for n = {}",
                dim.n()
            )));
        }
        Ok(Vertex(mask))
    }

    /// Builds a vertex from 1-based elements; rejects out-of-range and
    /// repeated elements.
    pub fn from_set(dim: Dim, elements: &[u32]) -> Result<Vertex> {
        let mut mask = 0u32;
        for &e in elements {
            if e == 0 || e > dim.n() {
                return Err(Error::ElementOutOfRange { element: e, n: dim.n() });
            }
            let bit = 1 << (e - 1);
            if mask & bit != 0 {
                return Err(Error::ParamRange(format!("element {e} repeated in set")));
            }
            mask |= bit;
        }
        Ok(Vertex(mask))
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    /// |F|: the number of elements of the set.
    pub fn level(self) -> u32 {
        self.0.count_ones()
    }

    /// 1-based elements in ascending order.
    pub fn elements(self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.level() as usize);
        let mut m = self.0;
        while m != 0 {
            let b = m.trailing_zeros();
            out.push(b + 1);
            m &= m - 1;
        }
        out
    }

    /// Human notation: `{1,3,5}`, `{}` for the empty set.
    pub fn set_string(self) -> String {
        let parts: Vec<String> = self.elements().iter().map(u32::to_string).collect();
        format!("{{{}}}", parts.join(","))
    }
}

/// Out-neighbors of `v`: one vertex per element not yet in the set,
/// ascending by mask. There are exactly n - level(v) of them.
pub fn out_neighbors(dim: Dim, v: Vertex) -> Vec<Vertex> {
    let mut out = Vec::with_capacity((dim.n() - v.level()) as usize);
    let mut free = dim.full_mask() & !v.mask();
    while free != 0 {
        let bit = free & free.wrapping_neg();
        out.push(Vertex(v.mask() | bit));
        free &= free - 1;
    }
    out
}

/// In-neighbors of `v`: drop one element, ascending by mask.
pub fn in_neighbors(v: Vertex) -> Vec<Vertex> {
    let mut out = Vec::with_capacity(v.level() as usize);
    // Clearing the highest set bit gives the smallest mask, so walk bits
    // from high to low.
    let mut m = v.mask();
    while m != 0 {
        let b = 31 - m.leading_zeros();
        out.push(Vertex(v.mask() & !(1 << b)));
        m &= !(1 << b);
    }
    out
}

/// True when `hi` covers `lo`, i.e. hi = lo plus exactly one element.
pub fn is_cover(lo: u32, hi: u32) -> bool {
    lo & hi == lo && (lo ^ hi).count_ones() == 1
}

/// A set of cube vertices with a cached level histogram. Immutable through
/// the public API; cheap to share between threads.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Family {
    dim: Dim,
    words: Vec<u64>,
    level_hist: Vec<u64>,
    len: u64,
}

impl Family {
    pub fn empty(dim: Dim) -> Family {
        let words = vec![0u64; word_count(dim)];
        Family { dim, words, level_hist: vec![0; dim.n() as usize + 1], len: 0 }
    }

    pub fn full(dim: Dim) -> Family {
        let mut f = Family::empty(dim);
        for mask in 0..dim.vertex_count() as u32 {
            f.insert_mut(Vertex(mask));
        }
        f
    }

    /// The family {F : F in one of `sets`}: duplicate sets are an error.
    pub fn from_sets(dim: Dim, sets: &[Vec<u32>]) -> Result<Family> {
        let mut f = Family::empty(dim);
        for s in sets {
            let v = Vertex::from_set(dim, s)?;
            if f.contains(v) {
                return Err(Error::DuplicateSet(v.set_string()));
            }
            f.insert_mut(v);
        }
        Ok(f)
    }

    /// Builds from raw masks; duplicates are an error.
    pub fn from_masks(dim: Dim, masks: impl IntoIterator<Item = u32>) -> Result<Family> {
        let mut f = Family::empty(dim);
        for m in masks {
            let v = Vertex::from_mask(dim, m)?;
            if f.contains(v) {
                return Err(Error::DuplicateSet(v.set_string()));
            }
            f.insert_mut(v);
        }
        Ok(f)
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// `level_hist[i]` = number of members of level i; length n+1.
    pub fn level_hist(&self) -> &[u64] {
        &self.level_hist
    }

    pub fn contains(&self, v: Vertex) -> bool {
        let m = v.mask() as usize;
        self.words[m >> 6] >> (m & 63) & 1 == 1
    }

    pub(crate) fn insert_mut(&mut self, v: Vertex) {
        let m = v.mask() as usize;
        let w = &mut self.words[m >> 6];
        if *w >> (m & 63) & 1 == 0 {
            *w |= 1 << (m & 63);
            self.level_hist[v.level() as usize] += 1;
            self.len += 1;
        }
    }

    pub(crate) fn remove_mut(&mut self, v: Vertex) {
        let m = v.mask() as usize;
        let w = &mut self.words[m >> 6];
        if *w >> (m & 63) & 1 == 1 {
            *w &= !(1 << (m & 63));
            self.level_hist[v.level() as usize] -= 1;
            self.len -= 1;
        }
    }

    /// Members in ascending mask order.
    pub fn iter(&self) -> FamilyIter<'_> {
        FamilyIter { words: &self.words, word_idx: 0, current: self.words.first().copied().unwrap_or(0) }
    }

    /// The complement family `{[n] \ F : F in self}`. An involution; the
    /// level histogram reverses exactly.
    pub fn complement(&self) -> Family {
        let full = self.dim.full_mask();
        let mut out = Family::empty(self.dim);
        for v in self.iter() {
            out.insert_mut(Vertex(full & !v.mask()));
        }
        out
    }

    pub fn is_subset_of(&self, other: &Family) -> bool {
        self.dim == other.dim
            && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// Members as element lists, ascending mask order.
    pub fn to_sets(&self) -> Vec<Vec<u32>> {
        self.iter().map(Vertex::elements).collect()
    }
}

fn word_count(dim: Dim) -> usize {
    dim.vertex_count().div_ceil(64)
}

pub struct FamilyIter<'a> {
    words: &'a [u64],
    word_idx: usize,
    current: u64,
}

impl Iterator for FamilyIter<'_> {
    type Item = Vertex;

    fn next(&mut self) -> Option<Vertex> {
        loop {
            if self.current != 0 {
                let b = self.current.trailing_zeros();
                self.current &= self.current - 1;
                return Some(Vertex(((self.word_idx as u32) << 6) | b));
            }
            self.word_idx += 1;
            if self.word_idx >= self.words.len() {
                return None;
            }
            self.current = self.words[self.word_idx];
        }
    }
}

/// Exact binomial coefficient, 0 <= i <= n <= 200.
pub fn binomial(n: u32, i: u32) -> Result<BigUint> {
    if n > MAX_FORMULA_DIM {
        return Err(Error::ParamRange(format!("binomial n = {n} exceeds {MAX_FORMULA_DIM}")));
    }
    if i > n {
        return Err(Error::ParamRange(format!("binomial index {i} out of range 0..={n}")));
    }
    let i = i.min(n - i);
    let mut acc = BigUint::from(1u32);
    for j in 0..i {
        acc = acc * (n - j) / (j + 1);
    }
    Ok(acc)
}

/// Row n of Pascal's triangle; caller guarantees n <= 200.
pub(crate) fn binomial_row(n: u32) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut acc = BigUint::from(1u32);
    row.push(acc.clone());
    for j in 0..n {
        acc = acc * (n - j) / (j + 1);
        row.push(acc.clone());
    }
    row
}

/// n! exactly, n <= 200.
pub fn factorial(n: u32) -> BigUint {
    let mut acc = BigUint::from(1u32);
    for j in 2..=n {
        acc *= j;
    }
    acc
}

// ---------------------------------------------------------------------------
// QFAM v1: the on-disk family format.
//
//   #qfam v1
//   n=5
//   -          <- the empty set
//   1,3,5
//   # comment lines and blank lines are ignored after the header
// ---------------------------------------------------------------------------

/// Serializes a family in QFAM v1, members in ascending mask order.
pub fn write_qfam(f: &Family) -> String {
    let mut out = String::from("#qfam v1\n");
    out.push_str(&format!("n={}\n", f.dim().n()));
    for v in f.iter() {
        if v.mask() == 0 {
            out.push_str("-\n");
        } else {
            let parts: Vec<String> = v.elements().iter().map(u32::to_string).collect();
            out.push_str(&parts.join(","));
            out.push('\n');
        }
    }
    out
}

/// Parses QFAM v1 text. Duplicate sets, unsorted or repeated elements, and
/// out-of-range values are all errors.
pub fn parse_qfam(text: &str) -> Result<Family> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, l)) if l.trim_end() == "#qfam v1" => {}
        _ => {
            return Err(Error::Parse { line: 1, msg: "expected `#qfam v1` header".into() });
        }
    }

    let mut dim: Option<Dim> = None;
    let mut family: Option<Family> = None;
    for (idx, raw) in lines {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let lineno = idx + 1;
        match dim {
            None => {
                let n_str = line.strip_prefix("n=").ok_or(Error::Parse {
                    line: lineno,
                    msg: "expected `n=<dim>`".into(),
                })?;
                let n: u32 = n_str.trim().parse().map_err(|_| Error::Parse {
                    line: lineno,
                    msg: format!("bad dimension `{n_str}`"),
                })?;
                let d = Dim::new(n)?;
                dim = Some(d);
                family = Some(Family::empty(d));
            }
            Some(d) => {
                let fam = family.as_mut().unwrap();
                let v = parse_qfam_set(d, line, lineno)?;
                if fam.contains(v) {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!("duplicate set {}", v.set_string()),
                    });
                }
                fam.insert_mut(v);
            }
        }
    }
    family.ok_or(Error::Parse { line: 2, msg: "missing `n=<dim>` line".into() })
}

fn parse_qfam_set(dim: Dim, line: &str, lineno: usize) -> Result<Vertex> {
    if line == "-" {
        return Ok(Vertex(0));
    }
    let mut elems = Vec::new();
    for part in line.split(',') {
        let e: u32 = part.trim().parse().map_err(|_| Error::Parse {
            line: lineno,
            msg: format!("bad element `{part}`"),
        })?;
        if let Some(&prev) = elems.last() {
            if e <= prev {
                return Err(Error::Parse {
                    line: lineno,
                    msg: "elements must be strictly ascending".into(),
                });
            }
        }
        elems.push(e);
    }
    Vertex::from_set(dim, &elems).map_err(|e| Error::Parse { line: lineno, msg: e.to_string() })
}
