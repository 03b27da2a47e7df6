//! Exact vertex Turán numbers at desk scale. The family question is dual
//! to a hitting-set question: enumerate every copy of the pattern in the
//! whole cube as a hyperedge; a family is pattern-free iff it contains no
//! hyperedge, so the optimum equals 2^n minus a minimum transversal.
//!
//! Brute force scans all vertex subsets for n <= 4 and checks freeness
//! through the detector; branch-and-bound searches transversals directly.
//! Both report deterministic witnesses in single-threaded order. An
//! orbit-branching switch over coordinate permutations is a possible
//! extension point; it is not implemented here.

use serde::Serialize;

use crate::construct;
use crate::detect::{contains_copy, verify_embedding, visit_embeddings, Embedding};
use crate::error::{Error, Result};
use crate::hypercube::{Dim, Family, Vertex};
use crate::pattern::Pattern;
use crate::rng::SplitMix64;

/// Dimension cap for copy enumeration.
pub const MAX_SOLVE_DIM: u32 = 10;

/// Cap on enumerated copies.
pub const DEFAULT_MAX_COPIES: usize = 2_000_000;

/// One hyperedge per distinct embedding image of the pattern in the full
/// cube; images from pattern automorphisms are deduplicated.
#[derive(Clone, Debug)]
pub struct CopyHypergraph {
    dim: Dim,
    pattern_size: usize,
    edges: Vec<Vec<u32>>,
}

impl CopyHypergraph {
    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn pattern_size(&self) -> usize {
        self.pattern_size
    }

    /// Sorted vertex masks per edge, in first-discovery order.
    pub fn edges(&self) -> &[Vec<u32>] {
        &self.edges
    }
}

/// Enumerates every embedding image of `p` in the full cube.
pub fn enumerate_copies(dim: Dim, p: &Pattern) -> Result<CopyHypergraph> {
    enumerate_copies_capped(dim, p, DEFAULT_MAX_COPIES)
}

pub fn enumerate_copies_capped(
    dim: Dim,
    p: &Pattern,
    max_copies: usize,
) -> Result<CopyHypergraph> {
    if dim.n() > MAX_SOLVE_DIM {
        return Err(Error::Guard(format!(
            "copy enumeration supports n <= {MAX_SOLVE_DIM}, got {}",
            dim.n()
        )));
    }
    let full = Family::full(dim);
    let mut seen = std::collections::HashSet::new();
    let mut edges = Vec::new();
    let mut overflow = false;
    visit_embeddings(&full, p, &mut |images| {
        let emb = Embedding { images: images.to_vec() };
        assert!(verify_embedding(&full, p, &emb), "enumerated a non-embedding");
        let mut masks: Vec<u32> = images.iter().map(|v| v.mask()).collect();
        masks.sort_unstable();
        if seen.insert(masks.clone()) {
            if edges.len() == max_copies {
                overflow = true;
                return false;
            }
            edges.push(masks);
        }
        true
    });
    if overflow {
        return Err(Error::Guard(format!("more than {max_copies} copies of {}", p.name())));
    }
    Ok(CopyHypergraph { dim, pattern_size: p.vertex_count(), edges })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveMethod {
    Auto,
    BruteForce,
    BranchAndBound,
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub method: SolveMethod,
    pub timeout_ms: Option<u64>,
    pub node_cap: Option<u64>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { method: SolveMethod::Auto, timeout_ms: Some(300_000), node_cap: None }
    }
}

/// Outcome of an exact search. When `exact` is false the search timed out:
/// `value` (and the witness) is the best certified lower bound found and
/// `upper_bound` the best certified upper bound.
#[derive(Clone, Debug)]
pub struct SearchResult {
    pub value: u64,
    pub witness: Family,
    pub method: &'static str,
    pub exact: bool,
    pub nodes: u64,
    pub elapsed_ms: u64,
    pub upper_bound: u64,
}

/// Computes the exact maximum size of a pattern-free family, with witness.
pub fn exact_exv(dim: Dim, p: &Pattern, opts: &SolveOptions) -> Result<SearchResult> {
    match opts.method {
        SolveMethod::BruteForce => brute_force(dim, p),
        SolveMethod::BranchAndBound => branch_and_bound(dim, p, opts),
        SolveMethod::Auto => {
            if dim.vertex_count() <= 16 {
                brute_force(dim, p)
            } else {
                branch_and_bound(dim, p, opts)
            }
        }
    }
}

/// Scans all subsets of the vertex set; freeness is decided by the
/// detector, independently of the hypergraph route.
fn brute_force(dim: Dim, p: &Pattern) -> Result<SearchResult> {
    if dim.vertex_count() > 16 {
        return Err(Error::Guard(format!(
            "brute force iterates all vertex subsets and needs 2^n <= 16, got n = {}",
            dim.n()
        )));
    }
    let watch = Stopwatch::start();
    let size = dim.vertex_count();
    let mut best: Option<u32> = None;
    let mut best_sub = 0u32;
    let mut nodes = 0u64;
    for sub in 0..(1u64 << size) as u32 {
        let pop = sub.count_ones();
        if best.is_some_and(|b| pop <= b) {
            continue;
        }
        nodes += 1;
        let fam = family_from_subset(dim, sub);
        if contains_copy(&fam, p).is_none() {
            best = Some(pop);
            best_sub = sub;
        }
    }
    let value = best.unwrap_or(0) as u64;
    let witness = family_from_subset(dim, best_sub);
    assert!(contains_copy(&witness, p).is_none());
    Ok(SearchResult {
        value,
        witness,
        method: "bruteforce",
        exact: true,
        nodes,
        elapsed_ms: watch.elapsed_ms(),
        upper_bound: value,
    })
}

fn family_from_subset(dim: Dim, sub: u32) -> Family {
    let mut f = Family::empty(dim);
    let mut bits = sub;
    while bits != 0 {
        let b = bits.trailing_zeros();
        bits &= bits - 1;
        f.insert_mut(Vertex::from_mask(dim, b).expect("subset of vertex set"));
    }
    f
}

fn branch_and_bound(dim: Dim, p: &Pattern, opts: &SolveOptions) -> Result<SearchResult> {
    let watch = Stopwatch::start();
    let graph = enumerate_copies(dim, p)?;
    let size = dim.vertex_count();

    // Incumbent: exclude everything outside the best known construction.
    let mut best = size as u32;
    let mut best_set: Vec<bool> = vec![true; size];
    if let Ok((_, levels)) = construct::best_construction(dim.n(), p) {
        let fam = construct::levels_family(dim, &levels)?;
        if contains_copy(&fam, p).is_none() {
            best = (size as u64 - fam.len()) as u32;
            for v in fam.iter() {
                best_set[v.mask() as usize] = false;
            }
        }
    }

    let mut edges_of = vec![Vec::new(); size];
    for (ei, e) in graph.edges().iter().enumerate() {
        for &v in e {
            edges_of[v as usize].push(ei as u32);
        }
    }
    let mut bnb = Bnb {
        edges: graph.edges(),
        edges_of,
        state: vec![VState::Undecided; size],
        cover_count: vec![0; graph.edges().len()],
        undecided_count: graph.edges().iter().map(|e| e.len() as u32).collect(),
        partial: 0,
        included: Vec::new(),
        best,
        best_set,
        nodes: 0,
        aborted: false,
        deadline_ms: opts.timeout_ms,
        node_cap: opts.node_cap,
        watch: &watch,
        mark: vec![0; size],
        mark_round: 0,
    };
    let root_lb = bnb.disjoint_edges_bound();
    bnb.search();

    let exact = !bnb.aborted;
    let value = size as u64 - bnb.best as u64;
    let mut witness = Family::empty(dim);
    for (mask, &excluded) in bnb.best_set.iter().enumerate() {
        if !excluded {
            witness.insert_mut(Vertex::from_mask(dim, mask as u32)?);
        }
    }
    assert!(contains_copy(&witness, p).is_none());
    assert_eq!(witness.len(), value);
    let upper_bound = if exact { value } else { size as u64 - root_lb as u64 };
    Ok(SearchResult {
        value,
        witness,
        method: "bnb",
        exact,
        nodes: bnb.nodes,
        elapsed_ms: watch.elapsed_ms(),
        upper_bound,
    })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum VState {
    Undecided,
    InTransversal,
    Excluded,
}

struct Bnb<'a> {
    edges: &'a [Vec<u32>],
    edges_of: Vec<Vec<u32>>,
    state: Vec<VState>,
    /// Per edge: how many of its vertices are in the transversal.
    cover_count: Vec<u32>,
    /// Per edge: how many of its vertices are undecided.
    undecided_count: Vec<u32>,
    partial: u32,
    included: Vec<u32>,
    best: u32,
    best_set: Vec<bool>,
    nodes: u64,
    aborted: bool,
    deadline_ms: Option<u64>,
    node_cap: Option<u64>,
    watch: &'a Stopwatch,
    mark: Vec<u32>,
    mark_round: u32,
}

impl Bnb<'_> {
    fn search(&mut self) {
        if self.aborted {
            return;
        }
        self.nodes += 1;
        if self.nodes & 1023 == 0 {
            if let Some(limit) = self.deadline_ms {
                if self.watch.elapsed_ms() > limit {
                    self.aborted = true;
                    return;
                }
            }
        }
        if self.node_cap.is_some_and(|cap| self.nodes > cap) {
            self.aborted = true;
            return;
        }

        // Pick the uncovered edge with fewest undecided vertices.
        let mut pick: Option<usize> = None;
        for (ei, &cc) in self.cover_count.iter().enumerate() {
            if cc > 0 {
                continue;
            }
            let und = self.undecided_count[ei];
            if und == 0 {
                return; // edge can no longer be hit
            }
            if pick.is_none_or(|b| und < self.undecided_count[b]) {
                pick = Some(ei);
            }
        }
        let Some(pick) = pick else {
            // Every edge covered: a feasible transversal.
            if self.partial < self.best {
                self.best = self.partial;
                self.best_set.fill(false);
                for &v in &self.included {
                    self.best_set[v as usize] = true;
                }
            }
            return;
        };

        if self.partial + self.disjoint_edges_bound() >= self.best {
            return;
        }

        // Children ordered by how many uncovered edges each vertex hits.
        let mut cands: Vec<(u32, u32)> = self.edges[pick]
            .iter()
            .filter(|&&v| self.state[v as usize] == VState::Undecided)
            .map(|&v| {
                let gain = self.edges_of[v as usize]
                    .iter()
                    .filter(|&&e| self.cover_count[e as usize] == 0)
                    .count() as u32;
                (gain, v)
            })
            .collect();
        cands.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));

        let mut frame_excluded = Vec::new();
        for &(_, v) in &cands {
            self.include(v);
            self.search();
            self.unwind_include(v);
            if self.aborted {
                break;
            }
            // Later children must not reuse v.
            self.exclude(v);
            frame_excluded.push(v);
        }
        for v in frame_excluded {
            self.unwind_exclude(v);
        }
    }

    fn include(&mut self, v: u32) {
        self.state[v as usize] = VState::InTransversal;
        self.partial += 1;
        self.included.push(v);
        for i in 0..self.edges_of[v as usize].len() {
            let e = self.edges_of[v as usize][i] as usize;
            self.cover_count[e] += 1;
            self.undecided_count[e] -= 1;
        }
    }

    fn unwind_include(&mut self, v: u32) {
        self.state[v as usize] = VState::Undecided;
        self.partial -= 1;
        self.included.pop();
        for i in 0..self.edges_of[v as usize].len() {
            let e = self.edges_of[v as usize][i] as usize;
            self.cover_count[e] -= 1;
            self.undecided_count[e] += 1;
        }
    }

    fn exclude(&mut self, v: u32) {
        self.state[v as usize] = VState::Excluded;
        for i in 0..self.edges_of[v as usize].len() {
            let e = self.edges_of[v as usize][i] as usize;
            self.undecided_count[e] -= 1;
        }
    }

    fn unwind_exclude(&mut self, v: u32) {
        self.state[v as usize] = VState::Undecided;
        for i in 0..self.edges_of[v as usize].len() {
            let e = self.edges_of[v as usize][i] as usize;
            self.undecided_count[e] += 1;
        }
    }

    /// Greedy maximal set of uncovered edges with pairwise disjoint
    /// undecided vertices; each needs its own transversal vertex.
    fn disjoint_edges_bound(&mut self) -> u32 {
        self.mark_round += 1;
        let round = self.mark_round;
        let mut bound = 0;
        for (ei, e) in self.edges.iter().enumerate() {
            if self.cover_count[ei] > 0 {
                continue;
            }
            let undecided =
                e.iter().filter(|&&v| self.state[v as usize] == VState::Undecided);
            if undecided.clone().any(|&v| self.mark[v as usize] == round) {
                continue;
            }
            bound += 1;
            for &v in undecided {
                self.mark[v as usize] = round;
            }
        }
        bound
    }
}

/// Ordering for the greedy completion pass.
#[derive(Clone, Copy, Debug)]
pub enum CompletionOrder {
    Ascending,
    Descending,
    Random(u64),
}

/// Greedily extends a pattern-free family to a maximal one: one pass over
/// the vertices in the given order, keeping any addition that stays free.
/// One pass suffices because freeness is monotone under subsets.
pub fn complete_to_maximal(f: &Family, p: &Pattern, order: CompletionOrder) -> Result<Family> {
    if contains_copy(f, p).is_some() {
        return Err(Error::NotFree(p.name().to_string()));
    }
    let dim = f.dim();
    let mut vertices: Vec<u32> = (0..dim.vertex_count() as u32).collect();
    match order {
        CompletionOrder::Ascending => {}
        CompletionOrder::Descending => vertices.reverse(),
        CompletionOrder::Random(seed) => SplitMix64::new(seed).shuffle(&mut vertices),
    }
    let mut fam = f.clone();
    for mask in vertices {
        let v = Vertex::from_mask(dim, mask)?;
        if fam.contains(v) {
            continue;
        }
        fam.insert_mut(v);
        if contains_copy(&fam, p).is_some() {
            fam.remove_mut(v);
        }
    }
    Ok(fam)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WcnfStats {
    pub variables: u64,
    pub soft_clauses: u64,
    pub hard_clauses: u64,
}

/// Writes the instance in classic WCNF: variable v+1 selects vertex v, one
/// weight-1 soft unit per vertex, one hard clause per copy forbidding the
/// full image. The MaxSAT optimum is the vertex Turán number.
pub fn export_wcnf<W: std::io::Write>(dim: Dim, p: &Pattern, mut sink: W) -> Result<WcnfStats> {
    let graph = enumerate_copies(dim, p)?;
    let nv = dim.vertex_count() as u64;
    let ne = graph.edges().len() as u64;
    let top = nv + 1;
    writeln!(sink, "p wcnf {} {} {}", nv, nv + ne, top)?;
    for v in 0..nv {
        writeln!(sink, "1 {} 0", v + 1)?;
    }
    for e in graph.edges() {
        write!(sink, "{top}")?;
        for &v in e {
            write!(sink, " -{}", v + 1)?;
        }
        writeln!(sink, " 0")?;
    }
    Ok(WcnfStats { variables: nv, soft_clauses: nv, hard_clauses: ne })
}

/// The JSON result schema. Canonical mode omits elapsed_ms so identical
/// invocations are byte-identical.
#[derive(Serialize)]
struct ExactReport<'a> {
    pattern: &'a str,
    n: u32,
    value: u64,
    exact: bool,
    method: &'a str,
    nodes: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    elapsed_ms: Option<u64>,
    witness: Vec<String>,
}

pub fn exact_report_json(pattern: &str, n: u32, r: &SearchResult, canonical: bool) -> String {
    let report = ExactReport {
        pattern,
        n,
        value: r.value,
        exact: r.exact,
        method: r.method,
        nodes: r.nodes,
        elapsed_ms: (!canonical).then_some(r.elapsed_ms),
        witness: r.witness.iter().map(Vertex::set_string).collect(),
    };
    serde_json::to_string(&report).expect("report serializes")
}

#[cfg(not(target_arch = "wasm32"))]
struct Stopwatch(std::time::Instant);

#[cfg(not(target_arch = "wasm32"))]
impl Stopwatch {
    fn start() -> Stopwatch {
        Stopwatch(std::time::Instant::now())
    }

    fn elapsed_ms(&self) -> u64 {
        self.0.elapsed().as_millis() as u64
    }
}

/// No monotonic clock on bare wasm; searches there are bounded by node
/// caps instead.
#[cfg(target_arch = "wasm32")]
struct Stopwatch;

#[cfg(target_arch = "wasm32")]
impl Stopwatch {
    fn start() -> Stopwatch {
        Stopwatch
    }

    fn elapsed_ms(&self) -> u64 {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    fn dim(n: u32) -> Dim {
        Dim::new(n).unwrap()
    }

    fn pat(spec: &str) -> Pattern {
        Pattern::parse(spec).unwrap()
    }

    #[test]
    fn copy_counts_match_closed_forms() {
        // Out-star images: choose a source at level s, then r of its n-s
        // out-neighbors.
        let g = enumerate_copies(dim(3), &pat("V:2")).unwrap();
        assert_eq!(g.edges().len(), 6);

        // Path images: source at level s, then falling-factorial choices.
        let g = enumerate_copies(dim(3), &pat("P:3")).unwrap();
        assert_eq!(g.edges().len(), 12);

        let g = enumerate_copies(dim(5), &pat("P:3")).unwrap();
        assert_eq!(g.edges().len(), 160);

        for e in g.edges() {
            assert_eq!(e.len(), 3);
            assert!(e.windows(2).all(|w| w[0] < w[1]));
        }
    }

    /// Closed-form copy counts for stars and paths.
    fn star_copy_oracle(n: u64, r: u64) -> u64 {
        // sum_s C(n,s) * C(n-s, r)
        let c = |a: u64, b: u64| -> u64 {
            if b > a {
                return 0;
            }
            let mut v = 1u64;
            for i in 0..b {
                v = v * (a - i) / (i + 1);
            }
            v
        };
        (0..=n).map(|s| c(n, s) * c(n - s, r)).sum()
    }

    fn path_copy_oracle(n: u64, k: u64) -> u64 {
        let c = |a: u64, b: u64| -> u64 {
            if b > a {
                return 0;
            }
            let mut v = 1u64;
            for i in 0..b {
                v = v * (a - i) / (i + 1);
            }
            v
        };
        (0..=n)
            .map(|s| {
                let mut falling = 1u64;
                for i in 0..k - 1 {
                    falling *= (n - s).saturating_sub(i);
                }
                c(n, s) * falling
            })
            .sum()
    }

    #[test]
    fn copy_counts_match_oracles() {
        for n in 2..=6u32 {
            for r in 1..=3u64 {
                let g = enumerate_copies(dim(n), &pat(&format!("V:{r}"))).unwrap();
                assert_eq!(g.edges().len() as u64, star_copy_oracle(n as u64, r));
            }
            for k in 2..=4u64 {
                let g = enumerate_copies(dim(n), &pat(&format!("P:{k}"))).unwrap();
                assert_eq!(g.edges().len() as u64, path_copy_oracle(n as u64, k));
            }
        }
    }

    #[test]
    fn brute_force_examples() {
        let r = exact_exv(dim(4), &pat("P:3"), &SolveOptions::default()).unwrap();
        assert_eq!(r.value, 11);
        assert!(r.exact);
        assert_eq!(r.method, "bruteforce");

        let r = exact_exv(dim(3), &pat("V:2"), &SolveOptions::default()).unwrap();
        assert_eq!(r.value, 5);

        let r = exact_exv(dim(4), &pat("C4"), &SolveOptions::default()).unwrap();
        assert_eq!(r.value, 11);
    }

    #[test]
    fn brute_force_guard() {
        let opts =
            SolveOptions { method: SolveMethod::BruteForce, ..SolveOptions::default() };
        assert!(exact_exv(dim(5), &pat("P:3"), &opts).is_err());
    }

    #[test]
    fn methods_agree_small() {
        let bf = SolveOptions { method: SolveMethod::BruteForce, ..SolveOptions::default() };
        let bb =
            SolveOptions { method: SolveMethod::BranchAndBound, ..SolveOptions::default() };
        for spec in ["P:2", "P:3", "P:4", "V:2", "V:3", "C4"] {
            for n in 2..=4u32 {
                let a = exact_exv(dim(n), &pat(spec), &bf).unwrap();
                let b = exact_exv(dim(n), &pat(spec), &bb).unwrap();
                assert_eq!(a.value, b.value, "{spec} at n = {n}");
                assert!(b.exact);
            }
        }
    }

    #[test]
    fn tall_patterns_leave_the_cube_free() {
        let r = exact_exv(dim(3), &pat("P:5"), &SolveOptions::default()).unwrap();
        assert_eq!(r.value, 8);
        let r = exact_exv(dim(2), &pat("V:3"), &SolveOptions::default()).unwrap();
        assert_eq!(r.value, 4);
        // Forbidding a single vertex forbids everything.
        let r = exact_exv(dim(2), &pat("P:1"), &SolveOptions::default()).unwrap();
        assert_eq!(r.value, 0);
    }

    #[test]
    fn bnb_matches_formula_at_n5() {
        let opts =
            SolveOptions { method: SolveMethod::BranchAndBound, ..SolveOptions::default() };
        for (k, expect) in [(2u32, 16u64), (3, 22), (4, 26), (5, 30)] {
            let r = exact_exv(dim(5), &pat(&format!("P:{k}")), &opts).unwrap();
            assert_eq!(r.value, expect, "k = {k}");
            assert!(r.exact);
            let formula = crate::chains::formula_pk(5, k).unwrap().value;
            assert_eq!(BigUint::from(r.value), formula);
        }
        let r = exact_exv(dim(5), &pat("V:2"), &opts).unwrap();
        assert_eq!(r.value, 17);
    }

    #[test]
    fn node_cap_reports_inexact_with_bounds() {
        // Edges have three vertices, so the disjoint-edge bound cannot
        // close the gap at the root and the search must branch.
        let opts = SolveOptions {
            method: SolveMethod::BranchAndBound,
            timeout_ms: None,
            node_cap: Some(1),
        };
        let r = exact_exv(dim(5), &pat("V:2"), &opts).unwrap();
        assert!(!r.exact);
        // The incumbent construction is already optimal here.
        assert_eq!(r.value, 17);
        assert!(r.upper_bound > r.value && r.upper_bound <= 32);
    }

    #[test]
    fn root_bound_can_close_immediately() {
        // Ten disjoint path copies match the incumbent transversal size,
        // so the search is exact within a single node.
        let opts = SolveOptions {
            method: SolveMethod::BranchAndBound,
            timeout_ms: None,
            node_cap: Some(1),
        };
        let r = exact_exv(dim(5), &pat("P:3"), &opts).unwrap();
        assert!(r.exact);
        assert_eq!(r.value, 22);
    }

    #[test]
    fn out_star_small_values_as_data() {
        // Found by search; the three-leaf star has no matching closed
        // form, so these are regression values with the construction as a
        // certified lower bound.
        let opts = SolveOptions::default();
        let r4 = exact_exv(dim(4), &pat("V:3"), &opts).unwrap();
        assert_eq!((r4.value, r4.method), (13, "bruteforce"));
        let r5 = exact_exv(dim(5), &pat("V:3"), &opts).unwrap();
        assert_eq!((r5.value, r5.method), (24, "bnb"));
        assert!(r5.exact);
        for (n, r) in [(4u32, &r4), (5, &r5)] {
            let (_, levels) = construct::best_construction(n, &pat("V:3")).unwrap();
            assert!(levels.size() <= BigUint::from(r.value), "n={n}");
        }
    }

    #[test]
    fn completion_examples() {
        let p = pat("V:2");
        let f = Family::empty(dim(3));
        let done = complete_to_maximal(&f, &p, CompletionOrder::Ascending).unwrap();
        assert!(done.contains(Vertex::from_set(dim(3), &[1, 2, 3]).unwrap()));
        assert!(done.level_hist()[2] >= 1);
        assert!(contains_copy(&done, &p).is_none());

        let v2 = construct::v2_family(dim(4)).unwrap();
        let grown = complete_to_maximal(&v2, &p, CompletionOrder::Ascending).unwrap();
        assert!(v2.is_subset_of(&grown));
        assert!(contains_copy(&grown, &p).is_none());
        // Idempotent on maximal input.
        let again = complete_to_maximal(&grown, &p, CompletionOrder::Ascending).unwrap();
        assert_eq!(again, grown);

        let not_free = Family::full(dim(3));
        assert!(complete_to_maximal(&not_free, &p, CompletionOrder::Ascending).is_err());
    }

    #[test]
    fn completion_is_maximal() {
        let p = pat("V:2");
        for seed in 0..20u64 {
            let done = complete_to_maximal(
                &Family::empty(dim(4)),
                &p,
                CompletionOrder::Random(seed),
            )
            .unwrap();
            // No single vertex can still be added.
            for mask in 0..dim(4).vertex_count() as u32 {
                let v = Vertex::from_mask(dim(4), mask).unwrap();
                if done.contains(v) {
                    continue;
                }
                let mut bigger = done.clone();
                bigger.insert_mut(v);
                assert!(contains_copy(&bigger, &p).is_some(), "seed {seed} mask {mask}");
            }
        }
    }

    #[test]
    fn wcnf_example_bytes() {
        let mut buf = Vec::new();
        let stats = export_wcnf(dim(2), &pat("P:2"), &mut buf).unwrap();
        assert_eq!(stats, WcnfStats { variables: 4, soft_clauses: 4, hard_clauses: 4 });
        let text = String::from_utf8(buf).unwrap();
        let expected = "p wcnf 4 8 5\n\
                        1 1 0\n1 2 0\n1 3 0\n1 4 0\n\
                        5 -1 -2 0\n5 -1 -3 0\n5 -2 -4 0\n5 -3 -4 0\n";
        assert_eq!(text, expected);
    }

    #[test]
    fn wcnf_clause_counts() {
        let mut buf = Vec::new();
        let stats = export_wcnf(dim(3), &pat("V:2"), &mut buf).unwrap();
        assert_eq!(stats.soft_clauses, 8);
        assert_eq!(stats.hard_clauses, 6);

        let mut buf = Vec::new();
        let stats = export_wcnf(dim(3), &pat("P:3"), &mut buf).unwrap();
        assert_eq!(stats.hard_clauses, 12);
    }

    #[test]
    fn duality_of_exact_values() {
        let opts = SolveOptions::default();
        for spec in ["P:2", "P:3", "V:2", "V:3", "C4"] {
            for n in 2..=4u32 {
                let p = pat(spec);
                let a = exact_exv(dim(n), &p, &opts).unwrap();
                let b = exact_exv(dim(n), &p.opposite(), &opts).unwrap();
                assert_eq!(a.value, b.value, "{spec} vs opposite at n = {n}");
            }
        }
    }

    #[test]
    fn report_json_shape() {
        let r = exact_exv(dim(3), &pat("V:2"), &SolveOptions::default()).unwrap();
        let json = exact_report_json("V:2", 3, &r, true);
        assert!(json.starts_with("{\"pattern\":\"V:2\",\"n\":3,\"value\":5,"));
        assert!(!json.contains("elapsed_ms"));
        let full = exact_report_json("V:2", 3, &r, false);
        assert!(full.contains("\"elapsed_ms\":"));
        let parsed: serde_json::Value = serde_json::from_str(&full).unwrap();
        assert_eq!(parsed["witness"].as_array().unwrap().len(), 5);
    }
}
