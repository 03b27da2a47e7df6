//! Decides whether the subgraph of the cube induced by a family contains a
//! copy of a pattern. A copy maps every pattern edge to a cover edge of the
//! cube between family members; non-edges impose no constraint.
//!
//! Backtracking places pattern vertices in a connected order and prunes
//! candidates by level windows. Fast paths cover directed paths
//! ([`longest_directed_path`]) and out-stars ([`max_out_cover_degree`]).

use crate::hypercube::{is_cover, Family, Vertex};
use crate::pattern::Pattern;

/// An injective assignment pattern vertex -> cube vertex whose images all
/// lie in the family and realize every pattern edge as a cover step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    pub(crate) images: Vec<Vertex>,
}

impl Embedding {
    pub fn images(&self) -> &[Vertex] {
        &self.images
    }

    pub fn image_of(&self, pattern_vertex: usize) -> Vertex {
        self.images[pattern_vertex]
    }
}

/// Returns a witness embedding iff the induced subgraph contains the
/// pattern. Candidates are explored in ascending mask order, so the witness
/// is deterministic.
pub fn contains_copy(f: &Family, p: &Pattern) -> Option<Embedding> {
    let mut found = None;
    visit_embeddings(f, p, &mut |images| {
        found = Some(Embedding { images: images.to_vec() });
        false
    });
    found
}

/// Independent witness checker: injectivity, membership, and the cover
/// condition on every pattern edge. Kept separate from the search.
pub fn verify_embedding(f: &Family, p: &Pattern, e: &Embedding) -> bool {
    if e.images.len() != p.vertex_count() {
        return false;
    }
    for (i, &v) in e.images.iter().enumerate() {
        if !f.contains(v) {
            return false;
        }
        if e.images[..i].contains(&v) {
            return false;
        }
    }
    p.edges()
        .iter()
        .all(|&(u, v)| is_cover(e.images[u].mask(), e.images[v].mask()))
}

/// Vertex count of a longest directed path inside the induced subgraph,
/// with one witness path. 0 iff the family is empty; the family avoids the
/// k-vertex directed path iff the returned length is at most k-1.
pub fn longest_directed_path(f: &Family) -> (u32, Vec<Vertex>) {
    let dim = f.dim();
    let size = dim.vertex_count();
    // One byte per cube vertex: path lengths never exceed n+1.
    let mut dp = vec![0u8; size];
    let mut best_len = 0u8;
    let mut best_end = 0u32;
    for v in f.iter() {
        let mask = v.mask();
        let mut here = 1u8;
        let mut bits = mask;
        while bits != 0 {
            let b = bits.trailing_zeros();
            bits &= bits - 1;
            let prev = dp[(mask ^ (1 << b)) as usize];
            if prev >= here {
                here = prev + 1;
            }
        }
        dp[mask as usize] = here;
        if here > best_len {
            best_len = here;
            best_end = mask;
        }
    }
    if best_len == 0 {
        return (0, Vec::new());
    }
    // Walk back down, preferring the smallest in-neighbor at each step.
    let mut path = vec![Vertex::from_mask(dim, best_end).expect("in range")];
    let mut cur = best_end;
    let mut need = best_len - 1;
    while need > 0 {
        let mut chosen = None;
        let mut bits = cur;
        while bits != 0 {
            let b = 31 - bits.leading_zeros();
            bits &= !(1 << b);
            let u = cur ^ (1 << b);
            if dp[u as usize] == need {
                chosen = Some(u);
                break;
            }
        }
        cur = chosen.expect("dp is consistent");
        path.push(Vertex::from_mask(dim, cur).expect("in range"));
        need -= 1;
    }
    path.reverse();
    (best_len as u32, path)
}

/// Maximum over members of the number of out-neighbors inside the family,
/// with the first vertex attaining it. The family avoids the out-star with
/// r leaves iff the returned degree is at most r-1.
pub fn max_out_cover_degree(f: &Family) -> (u32, Option<Vertex>) {
    let full = f.dim().full_mask();
    let mut best = 0u32;
    let mut witness = None;
    for v in f.iter() {
        if witness.is_none() {
            witness = Some(v);
        }
        let mut deg = 0u32;
        let mut free = full & !v.mask();
        while free != 0 {
            let bit = free & free.wrapping_neg();
            free &= free - 1;
            if f.contains(Vertex::from_mask(f.dim(), v.mask() | bit).expect("in range")) {
                deg += 1;
            }
        }
        if deg > best {
            best = deg;
            witness = Some(v);
        }
    }
    (best, witness)
}

/// Calls `visit` with the image list of every embedding, in deterministic
/// order, until `visit` returns false. Used by the first-witness search and
/// by copy enumeration in the solver.
pub(crate) fn visit_embeddings(
    f: &Family,
    p: &Pattern,
    visit: &mut impl FnMut(&[Vertex]) -> bool,
) {
    let n = f.dim().n() as usize;
    let info = p.info();
    if info.height > n + 1 || p.vertex_count() as u64 > f.len() {
        return;
    }
    let plan = Plan::build(p);
    // Cube level range allowed for each slot.
    let windows: Vec<(u32, u32)> = plan
        .order
        .iter()
        .map(|&pv| {
            let w = info.windows[pv];
            (w.down_depth as u32 - 1, (n + 1 - w.up_height) as u32)
        })
        .collect();
    if windows.iter().any(|&(lo, hi)| lo > hi) {
        return;
    }
    let mut images: Vec<Vertex> = Vec::with_capacity(p.vertex_count());
    place(f, &plan, &windows, &mut images, &mut |imgs| visit(imgs));
}

struct Plan {
    /// Pattern vertices in placement order: after the first vertex of a
    /// component, every vertex is adjacent to an earlier one.
    order: Vec<usize>,
    /// Per slot: constraints against earlier slots.
    anchors: Vec<Vec<Anchor>>,
}

#[derive(Clone, Copy)]
struct Anchor {
    slot: usize,
    /// True: edge placed -> new (image one level above the anchor).
    /// False: edge new -> placed.
    upward: bool,
}

impl Plan {
    fn build(p: &Pattern) -> Plan {
        let m = p.vertex_count();
        let mut order = Vec::with_capacity(m);
        let mut placed = vec![false; m];
        let mut slot_of = vec![usize::MAX; m];
        while order.len() < m {
            let next = (0..m)
                .filter(|&v| !placed[v])
                .find(|&v| {
                    p.edges()
                        .iter()
                        .any(|&(a, b)| (a == v && placed[b]) || (b == v && placed[a]))
                })
                .unwrap_or_else(|| (0..m).find(|&v| !placed[v]).expect("some vertex left"));
            slot_of[next] = order.len();
            order.push(next);
            placed[next] = true;
        }
        let anchors = order
            .iter()
            .enumerate()
            .map(|(slot, &v)| {
                let mut list = Vec::new();
                for &(a, b) in p.edges() {
                    if b == v && slot_of[a] < slot {
                        list.push(Anchor { slot: slot_of[a], upward: true });
                    }
                    if a == v && slot_of[b] < slot {
                        list.push(Anchor { slot: slot_of[b], upward: false });
                    }
                }
                list
            })
            .collect();
        Plan { order, anchors }
    }
}

fn place(
    f: &Family,
    plan: &Plan,
    windows: &[(u32, u32)],
    images: &mut Vec<Vertex>,
    visit: &mut dyn FnMut(&[Vertex]) -> bool,
) -> bool {
    let slot = images.len();
    if slot == plan.order.len() {
        // Images are indexed by slot here; report them by pattern vertex.
        let mut by_vertex = vec![images[0]; plan.order.len()];
        for (s, &pv) in plan.order.iter().enumerate() {
            by_vertex[pv] = images[s];
        }
        return visit(&by_vertex);
    }
    let (lo, hi) = windows[slot];
    let anchors = &plan.anchors[slot];
    let try_candidate = |cand: Vertex,
                         images: &mut Vec<Vertex>,
                         visit: &mut dyn FnMut(&[Vertex]) -> bool|
     -> bool {
        let level = cand.level();
        if level < lo || level > hi || !f.contains(cand) || images.contains(&cand) {
            return true;
        }
        let ok = anchors.iter().all(|a| {
            let other = images[a.slot].mask();
            if a.upward {
                is_cover(other, cand.mask())
            } else {
                is_cover(cand.mask(), other)
            }
        });
        if !ok {
            return true;
        }
        images.push(cand);
        let keep_going = place(f, plan, windows, images, visit);
        images.pop();
        keep_going
    };

    match anchors.first() {
        None => {
            for cand in f.iter() {
                if !try_candidate(cand, images, visit) {
                    return false;
                }
            }
        }
        Some(first) => {
            let base = images[first.slot];
            let candidates = if first.upward {
                crate::hypercube::out_neighbors(f.dim(), base)
            } else {
                crate::hypercube::in_neighbors(base)
            };
            for cand in candidates {
                if !try_candidate(cand, images, visit) {
                    return false;
                }
            }
        }
    }
    true
}
