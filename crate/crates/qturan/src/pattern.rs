//! Forbidden directed patterns: small DAGs given as builtins (`P:k`, `V:r`,
//! `C4`) or parsed from QPAT files, plus the poset data derived from them
//! (height, tree/saturation flags, per-vertex level windows).

use crate::error::{Error, Result};

/// Cap on pattern vertices. Copy enumeration in the solver scales with the
/// number of embeddings, so desk-scale patterns are small.
pub const MAX_PATTERN_VERTICES: usize = 24;

/// A directed acyclic pattern on vertices 0..m.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pattern {
    name: String,
    m: usize,
    edges: Vec<(usize, usize)>,
}

impl Pattern {
    /// Validates vertex count, endpoints, multi-edges, self-loops, and
    /// acyclicity.
    pub fn new(name: impl Into<String>, m: usize, edges: Vec<(usize, usize)>) -> Result<Pattern> {
        if m == 0 {
            return Err(Error::PatternSpec("pattern needs at least one vertex".into()));
        }
        if m > MAX_PATTERN_VERTICES {
            return Err(Error::PatternTooLarge { m, max: MAX_PATTERN_VERTICES });
        }
        let mut seen = std::collections::HashSet::new();
        for &(u, v) in &edges {
            if u >= m || v >= m {
                return Err(Error::PatternSpec(format!("edge ({u},{v}) out of range")));
            }
            if u == v {
                return Err(Error::PatternCycle);
            }
            if !seen.insert((u, v)) {
                return Err(Error::PatternSpec(format!("repeated edge ({u},{v})")));
            }
        }
        let p = Pattern { name: name.into(), m, edges };
        if p.topo_order().is_none() {
            return Err(Error::PatternCycle);
        }
        Ok(p)
    }

    /// Parses a pattern spec: `P:<k>` (directed path on k vertices),
    /// `V:<r>` (out-star with r leaves), `C4` (the one orientation of the
    /// 4-cycle that embeds in the cube), or `file:<path>` in QPAT v1.
    pub fn parse(spec: &str) -> Result<Pattern> {
        if let Some(k) = spec.strip_prefix("P:") {
            let k: usize = k
                .parse()
                .map_err(|_| Error::PatternSpec(format!("bad path length `{k}`")))?;
            return Pattern::path(k);
        }
        if let Some(r) = spec.strip_prefix("V:") {
            let r: usize = r
                .parse()
                .map_err(|_| Error::PatternSpec(format!("bad star degree `{r}`")))?;
            return Pattern::out_star(r);
        }
        if spec == "C4" {
            return Pattern::c4();
        }
        if let Some(path) = spec.strip_prefix("file:") {
            let text = std::fs::read_to_string(path)?;
            return Pattern::from_qpat(&text, spec);
        }
        Err(Error::PatternSpec(format!(
            "`{spec}` is not P:<k>, V:<r>, C4, or file:<path>"
        )))
    }

    /// The directed path v_1 -> v_2 -> ... -> v_k.
    pub fn path(k: usize) -> Result<Pattern> {
        if k == 0 {
            return Err(Error::PatternSpec("path length must be positive".into()));
        }
        let edges = (0..k.saturating_sub(1)).map(|i| (i, i + 1)).collect();
        Pattern::new(format!("P:{k}"), k, edges)
    }

    /// The out-star: one source with r out-edges. `V:2` is the cherry.
    pub fn out_star(r: usize) -> Result<Pattern> {
        if r == 0 {
            return Err(Error::PatternSpec("star degree must be positive".into()));
        }
        let edges = (1..=r).map(|leaf| (0, leaf)).collect();
        Pattern::new(format!("V:{r}"), r + 1, edges)
    }

    /// The diamond A -> A+x, A+y -> A+x+y.
    pub fn c4() -> Result<Pattern> {
        Pattern::new("C4", 4, vec![(0, 1), (0, 2), (1, 3), (2, 3)])
    }

    /// Parses QPAT v1 text:
    ///
    ///   #qpat v1
    ///   a -> b
    ///   b -> c      # vertex indices follow first appearance
    pub fn from_qpat(text: &str, name: impl Into<String>) -> Result<Pattern> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, l)) if l.trim_end() == "#qpat v1" => {}
            _ => {
                return Err(Error::Parse { line: 1, msg: "expected `#qpat v1` header".into() });
            }
        }
        let mut ids: Vec<String> = Vec::new();
        let mut edges = Vec::new();
        for (idx, raw) in lines {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let lineno = idx + 1;
            let mut parts = line.split("->");
            let (u, v) = match (parts.next(), parts.next(), parts.next()) {
                (Some(u), Some(v), None) => (u.trim(), v.trim()),
                _ => {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: "expected exactly one `u -> v`".into(),
                    });
                }
            };
            let ui = intern_vertex(&mut ids, u, lineno)?;
            let vi = intern_vertex(&mut ids, v, lineno)?;
            edges.push((ui, vi));
        }
        if ids.is_empty() {
            return Err(Error::PatternSpec("pattern file has no edges".into()));
        }
        Pattern::new(name, ids.len(), edges)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// True when the pattern is exactly a directed path (possibly a single
    /// vertex): m-1 edges forming one chain.
    pub fn is_directed_path(&self) -> bool {
        self.edges.len() == self.m - 1 && self.info().height == self.m
    }

    pub fn vertex_count(&self) -> usize {
        self.m
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// All edges reversed. An involution (the name toggles an `^op`
    /// suffix); height, tree flag, and saturation are preserved.
    pub fn opposite(&self) -> Pattern {
        let name = match self.name.strip_suffix("^op") {
            Some(base) => base.to_string(),
            None => format!("{}^op", self.name),
        };
        Pattern {
            name,
            m: self.m,
            edges: self.edges.iter().map(|&(u, v)| (v, u)).collect(),
        }
    }

    /// Derived poset data; `is_saturated` is only defined for tree posets.
    pub fn info(&self) -> PatternInfo {
        let order = self.topo_order().expect("validated acyclic");
        let mut down = vec![1usize; self.m];
        for &v in &order {
            for &(a, b) in &self.edges {
                if b == v {
                    down[v] = down[v].max(down[a] + 1);
                }
            }
        }
        let mut up = vec![1usize; self.m];
        for &v in order.iter().rev() {
            for &(a, b) in &self.edges {
                if a == v {
                    up[v] = up[v].max(up[b] + 1);
                }
            }
        }
        let height = down.iter().copied().max().unwrap_or(1);
        let is_tree = self.is_tree();
        let is_saturated = if is_tree { Some(self.saturated(height)) } else { None };
        let windows = down
            .iter()
            .zip(&up)
            .map(|(&d, &u)| LevelWindow { down_depth: d, up_height: u })
            .collect();
        PatternInfo { height, is_tree, is_saturated, windows }
    }

    /// Kahn's algorithm; None when a cycle remains.
    fn topo_order(&self) -> Option<Vec<usize>> {
        let mut indeg = vec![0usize; self.m];
        for &(_, v) in &self.edges {
            indeg[v] += 1;
        }
        let mut queue: Vec<usize> = (0..self.m).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(self.m);
        let mut head = 0;
        while head < queue.len() {
            let v = queue[head];
            head += 1;
            order.push(v);
            for &(a, b) in &self.edges {
                if a == v {
                    indeg[b] -= 1;
                    if indeg[b] == 0 {
                        queue.push(b);
                    }
                }
            }
        }
        (order.len() == self.m).then_some(order)
    }

    /// Underlying undirected graph is connected with m-1 edges.
    fn is_tree(&self) -> bool {
        if self.edges.len() != self.m - 1 {
            return false;
        }
        let mut seen = vec![false; self.m];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(a, b) in &self.edges {
                let w = if a == v {
                    b
                } else if b == v {
                    a
                } else {
                    continue;
                };
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// A poset is saturated when all its maximal chains have the full
    /// height. Chains walk cover relations of the reachability order.
    fn saturated(&self, height: usize) -> bool {
        let reach = self.reachability();
        let less = |a: usize, b: usize| reach[a] >> b & 1 == 1;
        // u is covered by v: u < v with nothing strictly between.
        let mut covers = vec![Vec::new(); self.m];
        for (u, above) in covers.iter_mut().enumerate() {
            for v in 0..self.m {
                if less(u, v) && !(0..self.m).any(|w| less(u, w) && less(w, v)) {
                    above.push(v);
                }
            }
        }
        let minimal: Vec<usize> =
            (0..self.m).filter(|&v| !(0..self.m).any(|u| less(u, v))).collect();
        let mut ok = true;
        for &start in &minimal {
            let mut stack = vec![(start, 1usize)];
            while let Some((v, len)) = stack.pop() {
                if covers[v].is_empty() {
                    ok &= len == height;
                } else {
                    for &w in &covers[v] {
                        stack.push((w, len + 1));
                    }
                }
            }
        }
        ok
    }

    /// reach[u] bit v set iff u < v in the poset (strict reachability).
    fn reachability(&self) -> Vec<u32> {
        let mut reach = vec![0u32; self.m];
        for &(u, v) in &self.edges {
            reach[u] |= 1 << v;
        }
        let order = self.topo_order().expect("validated acyclic");
        for &v in order.iter().rev() {
            let mut acc = reach[v];
            let mut m = reach[v];
            while m != 0 {
                let w = m.trailing_zeros() as usize;
                m &= m - 1;
                acc |= reach[w];
            }
            reach[v] = acc;
        }
        reach
    }
}

/// Longest-path spans per vertex: `down_depth` vertices end at it,
/// `up_height` start from it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LevelWindow {
    pub down_depth: usize,
    pub up_height: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternInfo {
    /// Number of vertices on a longest directed path.
    pub height: usize,
    pub is_tree: bool,
    /// Some(..) exactly when the pattern is a tree.
    pub is_saturated: Option<bool>,
    pub windows: Vec<LevelWindow>,
}

fn intern_vertex(ids: &mut Vec<String>, token: &str, lineno: usize) -> Result<usize> {
    if token.is_empty() || !token.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(Error::Parse {
            line: lineno,
            msg: format!("bad vertex name `{token}`"),
        });
    }
    if let Some(pos) = ids.iter().position(|t| t == token) {
        return Ok(pos);
    }
    if ids.len() == MAX_PATTERN_VERTICES {
        return Err(Error::PatternTooLarge { m: ids.len() + 1, max: MAX_PATTERN_VERTICES });
    }
    ids.push(token.to_string());
    Ok(ids.len() - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_shapes() {
        let p3 = Pattern::parse("P:3").unwrap();
        assert_eq!(p3.vertex_count(), 3);
        assert_eq!(p3.edges(), &[(0, 1), (1, 2)]);

        let v2 = Pattern::parse("V:2").unwrap();
        assert_eq!(v2.vertex_count(), 3);
        assert_eq!(v2.edges(), &[(0, 1), (0, 2)]);

        let c4 = Pattern::parse("C4").unwrap();
        assert_eq!(c4.vertex_count(), 4);
        assert_eq!(c4.edges(), &[(0, 1), (0, 2), (1, 3), (2, 3)]);
    }

    #[test]
    fn parse_rejects_degenerate_specs() {
        assert!(Pattern::parse("P:0").is_err());
        assert!(Pattern::parse("V:0").is_err());
        assert!(Pattern::parse("Q:1").is_err());
        assert!(Pattern::parse("P:x").is_err());
    }

    #[test]
    fn qpat_cycle_is_rejected() {
        let text = "#qpat v1\na -> b\nb -> a\n";
        assert!(matches!(Pattern::from_qpat(text, "t"), Err(Error::PatternCycle)));
        assert!(matches!(
            Pattern::from_qpat("#qpat v1\nx -> x\n", "t"),
            Err(Error::PatternCycle)
        ));
    }

    #[test]
    fn qpat_parses_first_appearance_order() {
        let text = "#qpat v1\n# a tree\nroot -> a\nroot->b\na -> leaf_1\n";
        let p = Pattern::from_qpat(text, "t").unwrap();
        assert_eq!(p.vertex_count(), 4);
        assert_eq!(p.edges(), &[(0, 1), (0, 2), (1, 3)]);
        assert!(Pattern::from_qpat("#qpat v1\n", "t").is_err());
        assert!(Pattern::from_qpat("#qpat v1\na - b\n", "t").is_err());
    }

    #[test]
    fn info_examples() {
        let p4 = Pattern::parse("P:4").unwrap().info();
        assert_eq!(p4.height, 4);
        assert!(p4.is_tree);
        assert_eq!(p4.is_saturated, Some(true));

        let v3 = Pattern::parse("V:3").unwrap().info();
        assert_eq!(v3.height, 2);
        assert!(v3.is_tree);
        // All maximal chains of the out-star have two elements.
        assert_eq!(v3.is_saturated, Some(true));

        let c4 = Pattern::parse("C4").unwrap().info();
        assert_eq!(c4.height, 3);
        assert!(!c4.is_tree);
        assert_eq!(c4.is_saturated, None);
    }

    #[test]
    fn unsaturated_tree_detected() {
        // 0 -> 1 -> 2 plus a short branch 0 -> 3.
        let p = Pattern::new("t", 4, vec![(0, 1), (1, 2), (0, 3)]).unwrap();
        let info = p.info();
        assert_eq!(info.height, 3);
        assert!(info.is_tree);
        assert_eq!(info.is_saturated, Some(false));
    }

    #[test]
    fn heights_of_builtin_families() {
        for k in 1..=20 {
            assert_eq!(Pattern::path(k).unwrap().info().height, k);
        }
        for r in 1..=20 {
            assert_eq!(Pattern::out_star(r).unwrap().info().height, 2);
        }
    }

    #[test]
    fn opposite_is_involution_and_preserves_info() {
        for spec in ["P:4", "V:3", "C4"] {
            let p = Pattern::parse(spec).unwrap();
            let q = p.opposite();
            assert_eq!(q.opposite(), p);
            let (pi, qi) = (p.info(), q.info());
            assert_eq!(pi.height, qi.height);
            assert_eq!(pi.is_tree, qi.is_tree);
            assert_eq!(pi.is_saturated, qi.is_saturated);
        }
        let v2 = Pattern::parse("V:2").unwrap().opposite();
        assert_eq!(v2.edges(), &[(1, 0), (2, 0)]);
    }

    /// Exhaustive relabeling check, m <= 8.
    fn isomorphic(a: &Pattern, b: &Pattern) -> bool {
        if a.vertex_count() != b.vertex_count() || a.edges().len() != b.edges().len() {
            return false;
        }
        let m = a.vertex_count();
        let be: std::collections::HashSet<(usize, usize)> = b.edges().iter().copied().collect();
        let mut perm: Vec<usize> = (0..m).collect();
        permute(&mut perm, 0, &mut |p| {
            a.edges().iter().all(|&(u, v)| be.contains(&(p[u], p[v])))
        })
    }

    fn permute(perm: &mut Vec<usize>, k: usize, check: &mut impl FnMut(&[usize]) -> bool) -> bool {
        if k == perm.len() {
            return check(perm);
        }
        for i in k..perm.len() {
            perm.swap(k, i);
            if permute(perm, k + 1, check) {
                perm.swap(k, i);
                return true;
            }
            perm.swap(k, i);
        }
        false
    }

    #[test]
    fn self_dual_patterns_up_to_relabeling() {
        for spec in ["P:2", "P:4", "C4"] {
            let p = Pattern::parse(spec).unwrap();
            assert!(isomorphic(&p, &p.opposite()), "{spec} should be self-dual");
        }
        // The out-star is not: its opposite is the in-star.
        let v2 = Pattern::parse("V:2").unwrap();
        assert!(!isomorphic(&v2, &v2.opposite()));
    }

    /// Brute force every directed path through vertex x.
    fn window_oracle(p: &Pattern, x: usize) -> (usize, usize) {
        fn longest(p: &Pattern, v: usize, forward: bool) -> usize {
            let mut best = 1;
            for &(a, b) in p.edges() {
                let next = if forward && a == v {
                    Some(b)
                } else if !forward && b == v {
                    Some(a)
                } else {
                    None
                };
                if let Some(w) = next {
                    best = best.max(1 + longest(p, w, forward));
                }
            }
            best
        }
        (longest(p, x, false), longest(p, x, true))
    }

    #[test]
    fn level_windows_match_path_enumeration() {
        let patterns = [
            Pattern::parse("P:5").unwrap(),
            Pattern::parse("V:4").unwrap(),
            Pattern::parse("C4").unwrap(),
            Pattern::new("t", 6, vec![(0, 1), (1, 2), (0, 3), (3, 4), (4, 5)]).unwrap(),
        ];
        for p in &patterns {
            let info = p.info();
            for x in 0..p.vertex_count() {
                let (down, up) = window_oracle(p, x);
                assert_eq!(info.windows[x].down_depth, down, "{} v{}", p.name(), x);
                assert_eq!(info.windows[x].up_height, up, "{} v{}", p.name(), x);
                assert!(down + up - 1 <= info.height);
            }
        }
    }
}
