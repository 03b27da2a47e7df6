//! Exact statistics over the n! maximal chains of the Boolean lattice:
//! the Lubell function, the profile C_t = number of chains meeting the
//! family in exactly t members, fat-chain counts, chain weights, and the
//! level-selection bounds for directed paths and trees.
//!
//! All counting is exact. Chain counts fit u128 comfortably at the DP cap
//! (24! < 2^80); results are returned as big integers.

use num_bigint::BigUint;
use num_traits::{CheckedSub, ToPrimitive};

use crate::construct::level_masks;
use crate::error::{Error, Result};
use crate::hypercube::{binomial_row, factorial, Family, MAX_FORMULA_DIM};

/// Dimension cap for the chain dynamic programs (two level slices of
/// per-vertex count vectors).
pub const MAX_CHAIN_DP_DIM: u32 = 24;

/// Exact counts C_0..C_{n+1}: C_t maximal chains contain exactly t family
/// members. Sums to n!.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainStats {
    n: u32,
    counts: Vec<BigUint>,
}

impl ChainStats {
    pub fn n(&self) -> u32 {
        self.n
    }

    /// C_t, indexable up to n+1.
    pub fn count(&self, t: usize) -> &BigUint {
        &self.counts[t]
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    /// Sum of all C_t; always n!.
    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    /// Sum of t * C_t; always the Lubell numerator of the same family.
    pub fn member_chain_incidences(&self) -> BigUint {
        self.counts
            .iter()
            .enumerate()
            .map(|(t, c)| c * BigUint::from(t))
            .sum()
    }
}

/// The Lubell mass of a family: numerator over the implied denominator n!.
/// The value numerator/n! is the average number of family members on a
/// uniformly random maximal chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LubellValue {
    n: u32,
    numerator: BigUint,
}

impl LubellValue {
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Sum of |F|! (n-|F|)! over family members.
    pub fn numerator(&self) -> &BigUint {
        &self.numerator
    }

    pub fn denominator(&self) -> BigUint {
        factorial(self.n)
    }

    pub fn as_f64(&self) -> f64 {
        self.numerator.to_f64().unwrap_or(f64::INFINITY)
            / self.denominator().to_f64().unwrap_or(f64::INFINITY)
    }

    /// The positive part of numerator - (k-1) * n!, i.e. the epsilon mass
    /// by which the family exceeds k-1 chains-per-member on average.
    pub fn excess_over(&self, k_minus_1: u32) -> Option<BigUint> {
        let base = self.denominator() * k_minus_1;
        self.numerator.checked_sub(&base).filter(|e| *e > BigUint::ZERO)
    }
}

/// Exact Lubell numerator from the level histogram.
pub fn lubell(f: &Family) -> LubellValue {
    let n = f.dim().n();
    let mut numerator = BigUint::ZERO;
    for (level, &count) in f.level_hist().iter().enumerate() {
        if count > 0 {
            numerator += factorial(level as u32) * factorial(n - level as u32) * count;
        }
    }
    LubellValue { n, numerator }
}

/// Exact chain profile via a level-by-level DP: for each vertex the vector
/// of cover-path counts from the bottom by number of family members met.
pub fn chain_profile(f: &Family) -> Result<ChainStats> {
    let n = f.dim().n();
    let buckets = chain_dp(f, n as usize + 1)?;
    // Overflow bucket is structurally empty: a chain has n+1 vertices.
    debug_assert_eq!(buckets.last(), Some(&0u128));
    let counts = buckets[..=n as usize + 1].iter().map(|&c| BigUint::from(c)).collect();
    Ok(ChainStats { n, counts })
}

/// Number of maximal chains containing at least k family members. Inside a
/// window of k consecutive levels this equals the count of chains with
/// exactly k members, since no chain can meet more.
pub fn fat_chain_count(f: &Family, k: u32) -> Result<BigUint> {
    let n = f.dim().n();
    if k == 0 {
        return Ok(factorial(n));
    }
    if k > n + 1 {
        return Ok(BigUint::ZERO);
    }
    // Exact buckets up to k, one overflow bucket above; everything from
    // index k on is "at least k".
    let cap = (k as usize + 1).min(n as usize + 1);
    let buckets = chain_dp(f, cap)?;
    Ok(buckets[k as usize..].iter().map(|&c| BigUint::from(c)).sum())
}

/// Total over all maximal chains of the chain weight, where a chain weighs
/// the sum of binomial(n, |F|) over the family members it contains.
/// Always equals |family| * n!.
pub fn total_chain_weight(f: &Family) -> Result<BigUint> {
    let n = f.dim().n();
    check_dp_dim(n)?;
    let row = binomial_row(n);
    let weights: Vec<u128> = row
        .iter()
        .map(|b| b.to_u128().expect("binomial(24, i) fits"))
        .collect();

    // Per vertex: (number of cover paths from bottom, summed path weight).
    let mut prev = vec![(0u128, 0u128); 1];
    let bottom_in = f.level_hist()[0] > 0;
    prev[0] = (1, if bottom_in { weights[0] } else { 0 });

    let scratch_ranks = RankTable::new(n);
    for level in 1..=n {
        let count = scratch_ranks.level_len(level);
        let mut cur = vec![(0u128, 0u128); count];
        for (idx, mask) in level_masks(n, level).enumerate() {
            let mut paths = 0u128;
            let mut wsum = 0u128;
            let mut bits = mask;
            while bits != 0 {
                let b = bits.trailing_zeros();
                bits &= bits - 1;
                let u = mask ^ (1 << b);
                let (p, w) = prev[scratch_ranks.rank(u)];
                paths += p;
                wsum += w;
            }
            if f.contains(crate::hypercube::Vertex::from_mask(f.dim(), mask)?) {
                wsum += weights[level as usize] * paths;
            }
            cur[idx] = (paths, wsum);
        }
        prev = cur;
    }
    Ok(BigUint::from(prev[0].1))
}

/// Closed form for the largest family avoiding the k-vertex directed path:
/// keep every level outside the lightest residue class mod k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PkFormula {
    pub value: BigUint,
    /// Excluded residue j in 1..=k (smallest on ties).
    pub excluded_j: u32,
    /// Total weight of the excluded class.
    pub excluded_sum: BigUint,
}

pub fn formula_pk(n: u32, k: u32) -> Result<PkFormula> {
    if n == 0 || n > MAX_FORMULA_DIM || k == 0 || k > n {
        return Err(Error::ParamRange(format!(
            "need 1 <= k <= n <= {MAX_FORMULA_DIM}, got k = {k}, n = {n}"
        )));
    }
    let row = binomial_row(n);
    let mut class_sums = vec![BigUint::ZERO; k as usize];
    for (i, b) in row.iter().enumerate() {
        class_sums[i % k as usize] += b;
    }
    let (mut best_j, mut best_sum) = (1u32, class_sums[1 % k as usize].clone());
    for j in 2..=k {
        let sum = &class_sums[(j % k) as usize];
        if *sum < best_sum {
            best_sum = sum.clone();
            best_j = j;
        }
    }
    let value = (BigUint::from(1u32) << n) - &best_sum;
    Ok(PkFormula { value, excluded_j: best_j, excluded_sum: best_sum })
}

/// The chain-weight relaxation, solved exactly by dynamic programming over
/// admissible excluded-level sequences: 0 <= a_1 < .. < a_t <= n with
/// a_1 <= k-1, a_t >= n-k+1, and gaps at most k; maximize 2^n minus the
/// total weight of the a_i. Independent route to the same optimum as
/// [`formula_pk`].
pub fn pk_weight_bound(n: u32, k: u32) -> Result<BigUint> {
    if n == 0 || n > MAX_FORMULA_DIM || k == 0 || k > n {
        return Err(Error::ParamRange(format!(
            "need 1 <= k <= n <= {MAX_FORMULA_DIM}, got k = {k}, n = {n}"
        )));
    }
    let row = binomial_row(n);
    // cost[a] = least excluded weight of an admissible prefix ending at a.
    let mut cost: Vec<Option<BigUint>> = vec![None; n as usize + 1];
    for a in 0..=n as usize {
        let mut best: Option<BigUint> = None;
        if (a as u32) < k {
            best = Some(BigUint::ZERO);
        }
        let lo = a.saturating_sub(k as usize);
        for c in cost[lo..a].iter().flatten() {
            if best.as_ref().is_none_or(|b| c < b) {
                best = Some(c.clone());
            }
        }
        cost[a] = best.map(|b| b + &row[a]);
    }
    let mut min_total: Option<BigUint> = None;
    for c in cost[(n + 1 - k) as usize..].iter().flatten() {
        if min_total.as_ref().is_none_or(|m| c < m) {
            min_total = Some(c.clone());
        }
    }
    let excluded = min_total.expect("level n-k+1.. is reachable");
    Ok((BigUint::from(1u32) << n) - excluded)
}

/// Numeric upper estimate for families avoiding a tree pattern of height h
/// on t_size vertices: ceil of
///
///   [ (h-1 + 4 h t_size^2 / n) (2^n + h binomial(n, n/2)) + h tail(n) ] / h
///
/// where tail(n) sums the levels up to n/4 and from 3n/4 up (cutoffs
/// rounded outward). Only meaningful asymptotically; never certified, and
/// reported with certified = false everywhere.
pub fn tree_upper_estimate(n: u32, h: u32, t_size: u32) -> Result<BigUint> {
    if !(2..=16).contains(&t_size) || h < 2 || h > t_size {
        return Err(Error::ParamRange(format!(
            "need 2 <= h <= t_size <= 16, got h = {h}, t_size = {t_size}"
        )));
    }
    if n == 0 || n > MAX_FORMULA_DIM {
        return Err(Error::ParamRange(format!("need 1 <= n <= {MAX_FORMULA_DIM}, got {n}")));
    }
    let row = binomial_row(n);
    // Outward-rounded cutoffs keep the tail an over-estimate.
    let lo_cut = n / 4;
    let hi_cut = (3 * n).div_ceil(4);
    let tail: BigUint = (0..=n)
        .filter(|&i| i <= lo_cut || i >= hi_cut)
        .map(|i| row[i as usize].clone())
        .sum();
    let mid = &row[(n / 2) as usize];
    let base = (BigUint::from(1u32) << n) + mid * h;
    let eps_num = BigUint::from((h - 1) as u64 * n as u64 + 4 * h as u64 * (t_size as u64).pow(2));
    let numerator = eps_num * base + BigUint::from(h as u64 * n as u64) * tail;
    let denominator = BigUint::from(h as u64 * n as u64);
    Ok((&numerator + &denominator - 1u32) / denominator)
}

fn check_dp_dim(n: u32) -> Result<()> {
    if n > MAX_CHAIN_DP_DIM {
        return Err(Error::DpCap { n, max: MAX_CHAIN_DP_DIM });
    }
    Ok(())
}

/// Colex ranks of masks within their level, via a u64 Pascal table.
struct RankTable {
    choose: Vec<Vec<u64>>,
}

impl RankTable {
    fn new(n: u32) -> RankTable {
        let n = n as usize;
        let mut choose = vec![vec![0u64; n + 1]; n + 1];
        for a in 0..=n {
            choose[a][0] = 1;
            for b in 1..=a {
                choose[a][b] = choose[a - 1][b - 1] + if b < a { choose[a - 1][b] } else { 0 };
            }
        }
        RankTable { choose }
    }

    fn level_len(&self, level: u32) -> usize {
        let n = self.choose.len() - 1;
        self.choose[n][level as usize] as usize
    }

    /// Position of `mask` in the ascending enumeration of its level.
    fn rank(&self, mask: u32) -> usize {
        let mut r = 0u64;
        let mut i = 0usize;
        let mut bits = mask;
        while bits != 0 {
            let b = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            i += 1;
            if b >= i {
                r += self.choose[b][i];
            }
        }
        r as usize
    }
}

/// Streaming DP: returns buckets[t] for t in 0..=cap plus one overflow
/// bucket; bucket t < cap counts chains with exactly t members, the last
/// bucket those with more than cap.
fn chain_dp(f: &Family, cap: usize) -> Result<Vec<u128>> {
    let n = f.dim().n();
    check_dp_dim(n)?;
    let width = cap + 2;
    let sat = |t: usize| t.min(width - 1);
    let ranks = RankTable::new(n);

    let mut prev = vec![0u128; width];
    prev[sat(if f.level_hist()[0] > 0 { 1 } else { 0 })] = 1;

    for level in 1..=n {
        let count = ranks.level_len(level);
        let mut cur = vec![0u128; count * width];
        for (idx, mask) in level_masks(n, level).enumerate() {
            let inc = f.contains(crate::hypercube::Vertex::from_mask(f.dim(), mask)?) as usize;
            let out = &mut cur[idx * width..(idx + 1) * width];
            let mut bits = mask;
            while bits != 0 {
                let b = bits.trailing_zeros();
                bits &= bits - 1;
                let u = mask ^ (1 << b);
                let urank = ranks.rank(u);
                let src = &prev[urank * width..(urank + 1) * width];
                for (t, &c) in src.iter().enumerate() {
                    if c != 0 {
                        out[sat(t + inc)] += c;
                    }
                }
            }
            let _ = out;
        }
        prev = cur;
    }
    Ok(prev)
}
