//! Simple undirected graphs on at most 64 vertices.
//!
//! Vertices are `0..n` and adjacency is one `u64` bitmask per vertex, so all
//! structural predicates reduce to word operations. Edges are kept in a
//! sorted list; an edge's position in that list is its *edge index*, and
//! subsets of edges are `u128` masks over edge indices (hosts up to 128
//! edges, which covers every complete graph used by the enumeration
//! machinery).

use std::fmt;

use serde::Serialize;

use crate::error::{capacity, input, Result};

/// Hard cap on vertices: adjacency must fit one machine word per vertex.
pub const MAX_VERTICES: usize = 64;
/// Hard cap on edges addressable by subset masks (`u128`). Graphs may be
/// larger; only the mask-based operations (edge-subgraphs, orbits) are
/// bounded by this.
pub const MAX_MASKED_EDGES: usize = 128;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(u8, u8)>,
    adj: Vec<u64>,
}

impl Graph {
    /// Builds a graph from an edge list. Endpoints are normalized to
    /// `u < v`; loops, duplicates and out-of-range vertices are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Graph> {
        if n > MAX_VERTICES {
            return Err(capacity(format!(
                "graph on {n} vertices exceeds cap {MAX_VERTICES}"
            )));
        }
        let mut list: Vec<(u8, u8)> = Vec::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(input(format!(
                    "edge ({a},{b}) out of range for {n} vertices"
                )));
            }
            if a == b {
                return Err(input(format!("loop at vertex {a}")));
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            list.push((u as u8, v as u8));
        }
        list.sort_unstable();
        list.dedup();
        let mut adj = vec![0u64; n];
        for &(u, v) in &list {
            if adj[u as usize] >> v & 1 == 1 {
                return Err(input(format!("parallel edge ({u},{v})")));
            }
            adj[u as usize] |= 1 << v;
            adj[v as usize] |= 1 << u;
        }
        Ok(Graph {
            n,
            edges: list,
            adj,
        })
    }

    /// The independent set (edgeless graph) on `n` vertices.
    pub fn independent(n: usize) -> Graph {
        Graph {
            n,
            edges: Vec::new(),
            adj: vec![0; n],
        }
    }

    /// The complete graph on `n` vertices.
    pub fn complete(n: usize) -> Result<Graph> {
        Graph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
    }

    /// The cycle `0-1-…-(n-1)-0`; requires `n >= 3`.
    pub fn cycle(n: usize) -> Result<Graph> {
        if n < 3 {
            return Err(input(format!("cycle needs at least 3 vertices, got {n}")));
        }
        Graph::new(n, (0..n).map(|u| (u, (u + 1) % n)))
    }

    /// The path `0-1-…-(n-1)`.
    pub fn path(n: usize) -> Result<Graph> {
        Graph::new(n, (1..n).map(|u| (u - 1, u)))
    }

    /// The complete bipartite graph with sides `a` and `b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Result<Graph> {
        Graph::new(a + b, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))))
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(u8, u8)] {
        &self.edges
    }

    pub fn adjacency(&self) -> &[u64] {
        &self.adj
    }

    pub fn neighbors(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.adj[u] >> v & 1 == 1
    }

    /// Position of `{u,v}` in the sorted edge list.
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let (u, v) = if u < v { (u, v) } else { (v, u) };
        self.edges.binary_search(&(u as u8, v as u8)).ok()
    }

    /// Mask with one bit per edge of this graph; requires at most
    /// [`MAX_MASKED_EDGES`] edges.
    pub fn full_edge_mask(&self) -> u128 {
        assert!(
            self.edges.len() <= MAX_MASKED_EDGES,
            "edge masks support at most {MAX_MASKED_EDGES} edges"
        );
        if self.edges.len() == 128 {
            u128::MAX
        } else {
            (1u128 << self.edges.len()) - 1
        }
    }

    /// Edge-subgraph: same vertices, only the edges selected by `mask`.
    pub fn edge_subgraph(&self, mask: u128) -> Result<Graph> {
        if self.edges.len() > MAX_MASKED_EDGES {
            return Err(capacity(format!(
                "edge-subgraphs need at most {MAX_MASKED_EDGES} host edges, got {}",
                self.edges.len()
            )));
        }
        if mask & !self.full_edge_mask() != 0 {
            return Err(input(format!(
                "edge mask {mask:#x} has bits beyond the {} edges",
                self.edges.len()
            )));
        }
        let mut edges = Vec::with_capacity(mask.count_ones() as usize);
        let mut adj = vec![0u64; self.n];
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            if mask >> i & 1 == 1 {
                edges.push((u, v));
                adj[u as usize] |= 1 << v;
                adj[v as usize] |= 1 << u;
            }
        }
        Ok(Graph {
            n: self.n,
            edges,
            adj,
        })
    }

    /// Subgraph induced by a vertex set, vertices relabeled in ascending order.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<Graph> {
        let mut verts = vertices.to_vec();
        verts.sort_unstable();
        verts.dedup();
        if let Some(&v) = verts.last() {
            if v >= self.n {
                return Err(input(format!("vertex {v} out of range")));
            }
        }
        let mut edges = Vec::new();
        for (i, &u) in verts.iter().enumerate() {
            for (j, &v) in verts.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    edges.push((i, j));
                }
            }
        }
        Graph::new(verts.len(), edges)
    }

    /// Subgraph induced by a vertex bitmask.
    pub fn induced_subgraph_mask(&self, mask: u64) -> Result<Graph> {
        let verts: Vec<usize> = (0..self.n).filter(|&v| mask >> v & 1 == 1).collect();
        self.induced_subgraph(&verts)
    }

    /// The complement graph (no loops).
    pub fn complement(&self) -> Graph {
        let mut edges = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    edges.push((u, v));
                }
            }
        }
        Graph::new(self.n, edges).expect("complement keeps the vertex count")
    }

    /// Disjoint union; `other`'s vertices are shifted past `self`'s.
    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph> {
        let n = self.n + other.n;
        let shifted = other
            .edges
            .iter()
            .map(|&(u, v)| (u as usize + self.n, v as usize + self.n));
        let all: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(u, v)| (u as usize, v as usize))
            .chain(shifted)
            .collect();
        Graph::new(n, all)
    }

    /// Edge mask of `sub` within this graph's edge list; `None` if `sub` is
    /// not an edge-subgraph on the same vertex set.
    pub fn edge_mask_of(&self, sub: &Graph) -> Option<u128> {
        if sub.n != self.n || self.edges.len() > MAX_MASKED_EDGES {
            return None;
        }
        let mut mask = 0u128;
        for &(u, v) in &sub.edges {
            mask |= 1u128 << self.edge_index(u as usize, v as usize)?;
        }
        Some(mask)
    }

    /// Degree sequence in ascending order.
    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = (0..self.n).map(|v| self.degree(v)).collect();
        d.sort_unstable();
        d
    }

    /// `Some(d)` if every vertex has degree `d`.
    pub fn regular_degree(&self) -> Option<usize> {
        if self.n == 0 {
            return None;
        }
        let d = self.degree(0);
        (1..self.n).all(|v| self.degree(v) == d).then_some(d)
    }

    /// Applies a vertex permutation: vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n {
            return Err(input("permutation length mismatch".to_string()));
        }
        Graph::new(
            self.n,
            self.edges
                .iter()
                .map(|&(u, v)| (perm[u as usize], perm[v as usize])),
        )
    }

    /// Whether `perm` maps edges onto edges bijectively.
    pub fn is_automorphism(&self, perm: &[usize]) -> bool {
        perm.len() == self.n
            && self
                .edges
                .iter()
                .all(|&(u, v)| self.has_edge(perm[u as usize], perm[v as usize]))
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges)
    }
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Graph", 2)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("edges", &self.edges)?;
        st.end()
    }
}

// ---------------------------------------------------------------------------
// Text format: line 1 "n m", then m lines "u v", 0-based, u < v.
// ---------------------------------------------------------------------------

impl Graph {
    /// Parses the text format. Blank lines and `#` comments are ignored.
    pub fn from_text(text: &str) -> Result<Graph> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| input("empty graph file"))?;
        let mut it = header.split_whitespace();
        let n: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| input(format!("bad header line {header:?}")))?;
        let m: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| input(format!("bad header line {header:?}")))?;
        if it.next().is_some() {
            return Err(input(format!("trailing tokens in header {header:?}")));
        }
        let mut edges = Vec::with_capacity(m);
        for line in lines {
            let mut it = line.split_whitespace();
            let u: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| input(format!("bad edge line {line:?}")))?;
            let v: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| input(format!("bad edge line {line:?}")))?;
            if it.next().is_some() {
                return Err(input(format!("trailing tokens in edge line {line:?}")));
            }
            if u >= v {
                return Err(input(format!("edge line {line:?} must satisfy u < v")));
            }
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(input(format!(
                "header declares {m} edges, found {}",
                edges.len()
            )));
        }
        Graph::new(n, edges)
    }

    /// Emits the text format bit-exactly: edges sorted ascending, one per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Construction combinators
// ---------------------------------------------------------------------------

/// Inhabited graph: block `i` is `parts[i]`; blocks `i`, `j` are fully
/// connected whenever `{i,j}` is an edge of `c`. The edgeless pattern gives
/// the disjoint union, the complete pattern gives the join.
pub fn inhabited_graph(c: &Graph, parts: &[Graph]) -> Result<Graph> {
    if parts.len() != c.vertex_count() {
        return Err(input(format!(
            "pattern has {} vertices but {} parts were given",
            c.vertex_count(),
            parts.len()
        )));
    }
    let mut offsets = Vec::with_capacity(parts.len());
    let mut n = 0usize;
    for p in parts {
        offsets.push(n);
        n += p.vertex_count();
    }
    if n > MAX_VERTICES {
        return Err(capacity(format!(
            "inhabited graph on {n} vertices exceeds cap"
        )));
    }
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (i, p) in parts.iter().enumerate() {
        for &(u, v) in p.edges() {
            edges.push((offsets[i] + u as usize, offsets[i] + v as usize));
        }
    }
    for &(i, j) in c.edges() {
        let (i, j) = (i as usize, j as usize);
        for u in 0..parts[i].vertex_count() {
            for v in 0..parts[j].vertex_count() {
                edges.push((offsets[i] + u, offsets[j] + v));
            }
        }
    }
    Graph::new(n, edges)
}

/// Disjoint union of several graphs.
pub fn disjoint_union_all(parts: &[Graph]) -> Result<Graph> {
    inhabited_graph(&Graph::independent(parts.len()), parts)
}

/// Join of several graphs (all blocks pairwise fully connected).
pub fn join_all(parts: &[Graph]) -> Result<Graph> {
    inhabited_graph(&Graph::complete(parts.len())?, parts)
}

/// Lexicographic product: vertices are tuples in lexicographic order; a pair
/// is an edge iff at the first coordinate where the tuples differ the two
/// entries are adjacent in that factor, with all earlier coordinates equal.
pub fn lexicographic_product(parts: &[Graph]) -> Result<Graph> {
    if parts.is_empty() {
        return Err(input("lexicographic product needs at least one factor"));
    }
    let mut n = 1usize;
    for p in parts {
        n = n
            .checked_mul(p.vertex_count())
            .filter(|&n| n <= MAX_VERTICES)
            .ok_or_else(|| capacity("lexicographic product exceeds 64 vertices"))?;
    }
    // Tuple index: first coordinate most significant.
    let strides: Vec<usize> = {
        let mut s = vec![1usize; parts.len()];
        for i in (0..parts.len().saturating_sub(1)).rev() {
            s[i] = s[i + 1] * parts[i + 1].vertex_count();
        }
        s
    };
    let decode = |mut idx: usize| -> Vec<usize> {
        strides
            .iter()
            .zip(parts)
            .map(|(&st, p)| {
                let c = idx / st;
                idx %= st;
                debug_assert!(c < p.vertex_count());
                c
            })
            .collect()
    };
    let mut edges = Vec::new();
    for a in 0..n {
        let ta = decode(a);
        for b in a + 1..n {
            let tb = decode(b);
            let i = (0..parts.len()).find(|&i| ta[i] != tb[i]).expect("a != b");
            if parts[i].has_edge(ta[i], tb[i]) {
                edges.push((a, b));
            }
        }
    }
    Graph::new(n, edges)
}

/// Forward revolution of the tuple vertex set `[0,p)^m`:
/// `(a_1,…,a_m) -> (a_m, a_1,…,a_{m-1})`, returned as a permutation of
/// tuple indices (first coordinate most significant).
pub fn forward_revolution(p: usize, m: usize) -> Result<Vec<usize>> {
    let n = p
        .checked_pow(m as u32)
        .filter(|&n| n <= MAX_VERTICES)
        .ok_or_else(|| capacity("p^m exceeds 64"))?;
    if m == 0 {
        return Err(input("forward revolution needs m >= 1"));
    }
    let mut perm = vec![0usize; n];
    for (idx, target) in perm.iter_mut().enumerate() {
        let last = idx % p;
        let rest = idx / p;
        // Moving a_m to the front multiplies its weight up to p^{m-1}.
        *target = last * n / p + rest;
    }
    Ok(perm)
}

// ---------------------------------------------------------------------------
// Isomorphism, bicliques, treewidth
// ---------------------------------------------------------------------------

/// Exhaustive isomorphism test with degree-sequence pruning; capped at 10
/// vertices, which covers everywhere it is needed.
pub fn are_isomorphic(g1: &Graph, g2: &Graph) -> Result<bool> {
    if g1.vertex_count() > 10 || g2.vertex_count() > 10 {
        return Err(capacity("isomorphism search capped at 10 vertices"));
    }
    if g1.vertex_count() != g2.vertex_count() || g1.edge_count() != g2.edge_count() {
        return Ok(false);
    }
    if g1.degree_sequence() != g2.degree_sequence() {
        return Ok(false);
    }
    let n = g1.vertex_count();
    let mut map = vec![usize::MAX; n];
    let mut used = 0u64;
    Ok(extend_isomorphism(g1, g2, 0, &mut map, &mut used))
}

fn extend_isomorphism(g1: &Graph, g2: &Graph, v: usize, map: &mut [usize], used: &mut u64) -> bool {
    let n = g1.vertex_count();
    if v == n {
        return true;
    }
    for w in 0..n {
        if *used >> w & 1 == 1 || g1.degree(v) != g2.degree(w) {
            continue;
        }
        let consistent = (0..v).all(|u| g1.has_edge(u, v) == g2.has_edge(map[u], w));
        if !consistent {
            continue;
        }
        map[v] = w;
        *used |= 1 << w;
        if extend_isomorphism(g1, g2, v + 1, map, used) {
            return true;
        }
        *used &= !(1 << w);
        map[v] = usize::MAX;
    }
    false
}

/// Whether `K_{a,a}` is a (not necessarily induced) subgraph, by exhausting
/// one side and intersecting neighborhoods; brute force is capped at 16
/// vertices. For larger graphs use [`is_biclique_witness`] with sides taken
/// from construction metadata.
pub fn contains_biclique(g: &Graph, a: usize) -> Result<bool> {
    if a == 0 {
        return Ok(true);
    }
    let n = g.vertex_count();
    if n > 16 {
        return Err(capacity("biclique brute force capped at 16 vertices"));
    }
    if 2 * a > n {
        return Ok(false);
    }
    // K_{a,a} <= g  iff  some a-set has >= a common neighbors outside itself.
    fn rec(g: &Graph, a: usize, depth: usize, start: usize, chosen: u64, inter: u64) -> bool {
        if depth == a {
            return (inter & !chosen).count_ones() as usize >= a;
        }
        for v in start..g.vertex_count() {
            let ni = inter & g.neighbors(v);
            // The other side lives inside the running intersection.
            if (ni.count_ones() as usize) < a {
                continue;
            }
            if rec(g, a, depth + 1, v + 1, chosen | 1 << v, ni) {
                return true;
            }
        }
        false
    }
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    Ok(rec(g, a, 0, 0, 0, full))
}

/// Checks an explicit biclique witness: all `left`-`right` pairs must be
/// edges and the sides disjoint. Works at any size.
pub fn is_biclique_witness(g: &Graph, left: &[usize], right: &[usize]) -> bool {
    left.iter().all(|&u| u < g.vertex_count())
        && right.iter().all(|&v| v < g.vertex_count())
        && left
            .iter()
            .all(|&u| right.iter().all(|&v| u != v && g.has_edge(u, v)))
}

/// Exact treewidth via dynamic programming over elimination orderings,
/// capped at 11 vertices.
///
/// For a set `S` of already-eliminated vertices, `tw[S]` is the best width
/// achievable; eliminating `v` after `S` costs the number of vertices
/// outside `S ∪ {v}` reachable from `v` through `S`.
pub fn treewidth_exact(g: &Graph) -> Result<usize> {
    let n = g.vertex_count();
    if n > 11 {
        return Err(capacity("exact treewidth capped at 11 vertices"));
    }
    if n == 0 {
        return Ok(0);
    }
    let full = (1u64 << n) - 1;
    let mut tw = vec![0u32; 1 << n];
    for s in 1..=full {
        let mut best = u32::MAX;
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let prev = s & !(1 << v);
            let cost = elimination_degree(g, prev, v);
            best = best.min(tw[prev as usize].max(cost));
        }
        tw[s as usize] = best;
    }
    Ok(tw[full as usize] as usize)
}

/// Number of vertices outside `s ∪ {v}` reachable from `v` using only
/// intermediate vertices in `s`.
fn elimination_degree(g: &Graph, s: u64, v: usize) -> u32 {
    let inside = s | 1 << v;
    let mut reach = 1u64 << v;
    let mut frontier = reach;
    let mut boundary = 0u64;
    while frontier != 0 {
        let mut nbrs = 0u64;
        let mut f = frontier;
        while f != 0 {
            let u = f.trailing_zeros() as usize;
            f &= f - 1;
            nbrs |= g.neighbors(u);
        }
        boundary |= nbrs & !inside;
        frontier = nbrs & inside & !reach;
        reach |= frontier;
    }
    boundary.count_ones()
}
