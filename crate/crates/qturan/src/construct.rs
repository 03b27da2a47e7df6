//! Lower-bound families built from full levels of the cube: residue-class
//! level selections avoiding the k-vertex directed path, and the layered
//! families avoiding out-stars.

use num_bigint::BigUint;
use num_traits::CheckedSub;

use crate::error::{Error, Result};
use crate::hypercube::{binomial_row, Dim, Family, Vertex, MAX_FORMULA_DIM};
use crate::pattern::Pattern;

/// A subset of the levels {0,..,n}. Valid for any n up to the formula cap;
/// only materializing a family requires n within the family cap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelSet {
    n: u32,
    levels: Vec<u32>,
}

impl LevelSet {
    pub fn new(n: u32, levels: impl IntoIterator<Item = u32>) -> Result<LevelSet> {
        if n > MAX_FORMULA_DIM {
            return Err(Error::ParamRange(format!("n = {n} exceeds {MAX_FORMULA_DIM}")));
        }
        let mut ls: Vec<u32> = levels.into_iter().collect();
        ls.sort_unstable();
        ls.dedup();
        if let Some(&bad) = ls.iter().find(|&&l| l > n) {
            return Err(Error::LevelOutOfRange { level: bad, n });
        }
        Ok(LevelSet { n, levels: ls })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Selected levels, ascending.
    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    pub fn contains(&self, level: u32) -> bool {
        self.levels.binary_search(&level).is_ok()
    }

    /// Sum of binomial(n, i) over the selected levels.
    pub fn size(&self) -> BigUint {
        let row = binomial_row(self.n);
        self.levels.iter().map(|&l| row[l as usize].clone()).sum()
    }

    /// Length of the longest run of consecutive selected levels. Any
    /// pattern embedding covers a run of its height, so a family of full
    /// levels avoids every pattern of height greater than this.
    pub fn longest_consecutive_run(&self) -> u32 {
        let mut best = 0;
        let mut run = 0;
        let mut prev: Option<u32> = None;
        for &l in &self.levels {
            run = match prev {
                Some(p) if p + 1 == l => run + 1,
                _ => 1,
            };
            best = best.max(run);
            prev = Some(l);
        }
        best
    }
}

/// All vertices whose level is selected.
pub fn levels_family(dim: Dim, ls: &LevelSet) -> Result<Family> {
    if ls.n() != dim.n() {
        return Err(Error::ParamRange(format!(
            "level set is for n = {}, family for n = {}",
            ls.n(),
            dim.n()
        )));
    }
    let mut f = Family::empty(dim);
    for &level in ls.levels() {
        for mask in level_masks(dim.n(), level) {
            f.insert_mut(Vertex::from_mask(dim, mask)?);
        }
    }
    Ok(f)
}

/// Masks of one level in ascending order (Gosper's hack).
pub(crate) fn level_masks(n: u32, level: u32) -> impl Iterator<Item = u32> {
    let first = if level == 0 { 0 } else { (1u32 << level) - 1 };
    let limit = 1u64 << n;
    let mut cur = Some(first);
    std::iter::from_fn(move || {
        let out = cur?;
        if out as u64 >= limit {
            cur = None;
            return None;
        }
        cur = if out == 0 {
            None
        } else {
            let c = out & out.wrapping_neg();
            let r = out + c;
            Some(r | (((out ^ r) >> 2) / c))
        };
        Some(out)
    })
}

/// Levels with i not congruent to j mod k: keeping them leaves no k
/// consecutive levels, so the family avoids the k-vertex directed path.
/// j ranges over 1..=k and names the excluded residue class j mod k.
pub fn residue_level_set(n: u32, k: u32, j: u32) -> Result<LevelSet> {
    if k == 0 || k > n {
        return Err(Error::ParamRange(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    if j == 0 || j > k {
        return Err(Error::ParamRange(format!("residue j = {j} outside 1..={k}")));
    }
    LevelSet::new(n, (0..=n).filter(|&i| i % k != j % k))
}

pub fn residue_levels_family(dim: Dim, k: u32, j: u32) -> Result<Family> {
    levels_family(dim, &residue_level_set(dim.n(), k, j)?)
}

/// The excluded residue class whose levels carry the least total weight,
/// ties broken by the smallest j, together with the size of the kept
/// family.
pub fn best_residue(n: u32, k: u32) -> Result<(u32, BigUint)> {
    let mut best: Option<(u32, BigUint)> = None;
    for j in 1..=k {
        let size = residue_level_set(n, k, j)?.size();
        match &best {
            Some((_, s)) if *s >= size => {}
            _ => best = Some((j, size)),
        }
    }
    Ok(best.expect("k >= 1"))
}

/// Levels n-1, n-3, ... plus the top vertex. Size 2^(n-1)+1; no member has
/// two out-neighbors in the family, so it avoids the cherry.
pub fn v2_level_set(n: u32) -> Result<LevelSet> {
    if n < 2 {
        return Err(Error::ParamRange(format!("cherry construction needs n >= 2, got {n}")));
    }
    let mut levels: Vec<u32> = (0..n).filter(|&i| (n - 1 - i).is_multiple_of(2)).collect();
    levels.push(n);
    LevelSet::new(n, levels)
}

pub fn v2_family(dim: Dim) -> Result<Family> {
    let f = levels_family(dim, &v2_level_set(dim.n())?)?;
    debug_assert!(crate::detect::max_out_cover_degree(&f).0 <= 1);
    Ok(f)
}

/// Size of the cherry-free construction, computed from binomial sums.
pub fn v2_size(n: u32) -> Result<BigUint> {
    Ok(v2_level_set(n)?.size())
}

/// The r highest levels, one empty level, then every other level below:
/// every member has at most r-1 out-neighbors in the family.
pub fn vr_level_set(n: u32, r: u32) -> Result<LevelSet> {
    if r < 2 || r > n {
        return Err(Error::ParamRange(format!("need 2 <= r <= n, got r = {r}, n = {n}")));
    }
    let mut levels: Vec<u32> = (n - r + 1..=n).collect();
    let mut l = n as i64 - r as i64 - 1;
    while l >= 0 {
        levels.push(l as u32);
        l -= 2;
    }
    let ls = LevelSet::new(n, levels)?;
    // Out-degrees of a full-level family depend only on which level pairs
    // are adjacent: level i feeds level i+1 with degree n-i.
    debug_assert!((0..n).all(|i| {
        !(ls.contains(i) && ls.contains(i + 1)) || n - i < r
    }));
    Ok(ls)
}

pub fn vr_family(dim: Dim, r: u32) -> Result<Family> {
    let f = levels_family(dim, &vr_level_set(dim.n(), r)?)?;
    debug_assert!(crate::detect::max_out_cover_degree(&f).0 < r);
    Ok(f)
}

pub fn vr_size(n: u32, r: u32) -> Result<BigUint> {
    Ok(vr_level_set(n, r)?.size())
}

/// How far the out-star construction exceeds half the cube.
pub fn vr_excess(n: u32, r: u32) -> Result<BigUint> {
    let size = vr_size(n, r)?;
    let half = BigUint::from(1u32) << (n - 1);
    size.checked_sub(&half).ok_or_else(|| {
        Error::ParamRange(format!("construction for r = {r} stays below 2^{}", n - 1))
    })
}

/// Which specialized construction fits a pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConstructionKind {
    /// Residue-class levels for the k-vertex path; also the fallback for
    /// any pattern of height k, since every copy spans k consecutive
    /// levels.
    Residue { k: u32, j: u32 },
    /// Alternating levels plus the top vertex, for the cherry.
    V2,
    /// Top block of r levels plus alternating lower levels, for the
    /// out-star with r leaves.
    Vr { r: u32 },
}

/// Picks the best construction this library knows for avoiding `p` in
/// dimension `n`, returning its kind, level set, and exact size.
pub fn best_construction(n: u32, p: &Pattern) -> Result<(ConstructionKind, LevelSet)> {
    let info = p.info();
    if let Some(r) = as_out_star(p) {
        if r == 2 && n >= 2 {
            return Ok((ConstructionKind::V2, v2_level_set(n)?));
        }
        if r >= 3 && r <= n {
            return Ok((ConstructionKind::Vr { r }, vr_level_set(n, r)?));
        }
    }
    let k = info.height as u32;
    if k > n {
        return Err(Error::ParamRange(format!(
            "no construction for height {k} in dimension {n}"
        )));
    }
    let (j, _) = best_residue(n, k)?;
    Ok((ConstructionKind::Residue { k, j }, residue_level_set(n, k, j)?))
}

/// Structural freeness certificate for a family of full levels, valid in
/// any dimension. Any copy of a height-h pattern places a longest path on
/// h consecutive levels, all selected; out-star copies additionally need a
/// selected level pair i, i+1 with n-i out-neighbors available. Returns a
/// human-readable reason, or None when structure alone cannot decide.
pub fn certify_levels_free(ls: &LevelSet, p: &Pattern) -> Option<String> {
    let info = p.info();
    if (ls.longest_consecutive_run() as usize) < info.height {
        return Some(format!(
            "no {} consecutive levels are selected",
            info.height
        ));
    }
    if let Some(r) = as_out_star(p) {
        let n = ls.n();
        let capped = (0..n).all(|i| !(ls.contains(i) && ls.contains(i + 1)) || n - i < r);
        if capped {
            return Some(format!(
                "every selected level pair keeps out-degrees below {r}"
            ));
        }
    }
    None
}

/// Detects a pattern that is exactly the out-star with r >= 2 leaves
/// (any single-edge pattern counts as a path instead).
fn as_out_star(p: &Pattern) -> Option<u32> {
    let m = p.vertex_count();
    if m < 3 || p.edges().len() != m - 1 {
        return None;
    }
    let source = p.edges()[0].0;
    p.edges()
        .iter()
        .all(|&(u, _)| u == source)
        .then(|| (m - 1) as u32)
}
