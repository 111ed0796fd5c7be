//! Graph properties: an isomorphism-invariant boolean AST over structural
//! atoms, an evaluator that works directly on adjacency bitmasks, and the
//! meta-checks the witness searches depend on (edge-monotonicity
//! verification, triviality on k, negation/complement transforms, and the
//! disjoint-union shift).

mod parser;

pub use parser::parse_property;

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use serde::Serialize;

use crate::error::{capacity, Result};
use crate::graph::Graph;

/// Exact nonnegative rational used by threshold atoms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Ratio {
        debug_assert!(den != 0);
        Ratio { num, den }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Cmp {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Atom {
    Connected,
    Disconnected,
    Bipartite,
    Clique,
    Independent,
    EdgeParity(Parity),
    /// max vertex degree <= q * n
    MaxDegreeLe(Ratio),
    /// diameter >= q * n, with the diameter of a disconnected graph taken
    /// as infinite (so the atom holds).
    DiamGe(Ratio),
    HasIndependentSet(u32),
    NumEdges(Cmp, u64),
    /// True iff the vertex count lies in the given set. Not part of the
    /// surface syntax; used to build properties that change behavior with
    /// size (every atom must stay isomorphism-invariant).
    VertexCountIn(Vec<usize>),
}

/// Source position of a parsed atom (1-based line and column).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl Span {
    pub const SYNTHETIC: Span = Span { line: 0, col: 0 };
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Expr {
    Atom(Atom, Span),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    /// Evaluate the inner expression on the complement graph.
    Complement(Box<Expr>),
    /// Evaluate the inner expression on `g ⊎ h`.
    Shift(Graph, Box<Expr>),
}

impl Expr {
    pub fn atom(a: Atom) -> Expr {
        Expr::Atom(a, Span::SYNTHETIC)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertySpec {
    pub expr: Expr,
    /// Caller-declared edge-monotonicity. Witness searches refuse to trust
    /// this flag until it survives [`is_edge_monotone_upto`] at n <= 6.
    pub declared_edge_monotone: bool,
    /// Label used in reports; defaults to the source text for parsed specs.
    pub name: String,
}

impl PropertySpec {
    pub fn new(expr: Expr, declared_edge_monotone: bool, name: impl Into<String>) -> PropertySpec {
        PropertySpec {
            expr,
            declared_edge_monotone,
            name: name.into(),
        }
    }

    /// Evaluates on a graph (no memoization).
    pub fn eval_graph(&self, g: &Graph) -> bool {
        eval_expr(&self.expr, g.vertex_count(), g.adjacency(), Some(g))
    }

    /// Evaluates on raw adjacency bitmasks. This is the hot path of the
    /// subset-enumeration engines; `Shift` and `Complement` nodes fall back
    /// to materializing a graph.
    pub fn eval_adj(&self, n: usize, adj: &[u64]) -> bool {
        eval_expr(&self.expr, n, adj, None)
    }

    /// `¬Φ`: flips every evaluation. The result is not edge-monotone in
    /// general, so the declared flag is dropped.
    pub fn negate(&self) -> PropertySpec {
        PropertySpec {
            expr: Expr::Not(Box::new(self.expr.clone())),
            declared_edge_monotone: false,
            name: format!("not ({})", self.name),
        }
    }

    /// `Φ̄`: evaluates on the complement graph.
    pub fn complement(&self) -> PropertySpec {
        PropertySpec {
            expr: Expr::Complement(Box::new(self.expr.clone())),
            declared_edge_monotone: false,
            name: format!("complement ({})", self.name),
        }
    }

    /// `(Φ - H)`: true on `g` iff `Φ(g ⊎ h)`. Edge-monotonicity is
    /// preserved, since deleting an edge of `g` deletes an edge of `g ⊎ h`.
    /// Evaluation panics if `|V(g)| + |V(h)|` exceeds the 64-vertex cap.
    pub fn shift(&self, h: &Graph) -> PropertySpec {
        PropertySpec {
            expr: Expr::Shift(h.clone(), Box::new(self.expr.clone())),
            declared_edge_monotone: self.declared_edge_monotone,
            name: format!("({}) shifted by {:?}", self.name, h),
        }
    }
}

fn eval_expr(expr: &Expr, n: usize, adj: &[u64], g: Option<&Graph>) -> bool {
    match expr {
        Expr::Atom(a, _) => eval_atom(a, n, adj),
        Expr::Not(e) => !eval_expr(e, n, adj, g),
        Expr::And(a, b) => eval_expr(a, n, adj, g) && eval_expr(b, n, adj, g),
        Expr::Or(a, b) => eval_expr(a, n, adj, g) || eval_expr(b, n, adj, g),
        Expr::Complement(e) => {
            let g = materialize(n, adj, g).complement();
            eval_expr(e, g.vertex_count(), g.adjacency(), Some(&g))
        }
        Expr::Shift(h, e) => {
            let g = materialize(n, adj, g)
                .disjoint_union(h)
                .expect("shift within vertex cap");
            eval_expr(e, g.vertex_count(), g.adjacency(), Some(&g))
        }
    }
}

fn materialize(n: usize, adj: &[u64], g: Option<&Graph>) -> Graph {
    match g {
        Some(g) => g.clone(),
        None => {
            let edges = (0..n).flat_map(|u| {
                (u + 1..n).filter_map(move |v| (adj[u] >> v & 1 == 1).then_some((u, v)))
            });
            Graph::new(n, edges).expect("adjacency within caps")
        }
    }
}

fn eval_atom(atom: &Atom, n: usize, adj: &[u64]) -> bool {
    match atom {
        Atom::Connected => is_connected(n, adj),
        Atom::Disconnected => !is_connected(n, adj),
        Atom::Bipartite => is_bipartite(n, adj),
        Atom::Clique => (0..n).all(|v| adj[v].count_ones() as usize == n - 1),
        Atom::Independent => adj[..n].iter().all(|&a| a == 0),
        Atom::EdgeParity(p) => {
            let doubled: u32 = adj[..n].iter().map(|a| a.count_ones()).sum();
            match p {
                Parity::Even => (doubled / 2).is_multiple_of(2),
                Parity::Odd => doubled / 2 % 2 == 1,
            }
        }
        Atom::MaxDegreeLe(q) => {
            let max = adj[..n]
                .iter()
                .map(|a| a.count_ones() as u64)
                .max()
                .unwrap_or(0);
            max * q.den <= q.num * n as u64
        }
        Atom::DiamGe(q) => match diameter(n, adj) {
            None => true,
            Some(d) => d as u64 * q.den >= q.num * n as u64,
        },
        Atom::HasIndependentSet(c) => has_independent_set(n, adj, *c as usize),
        Atom::NumEdges(cmp, k) => {
            let doubled: u32 = adj[..n].iter().map(|a| a.count_ones()).sum();
            let e = (doubled / 2) as u64;
            match cmp {
                Cmp::Le => e <= *k,
                Cmp::Ge => e >= *k,
                Cmp::Eq => e == *k,
            }
        }
        Atom::VertexCountIn(set) => set.contains(&n),
    }
}

fn neighborhood(adj: &[u64], set: u64) -> u64 {
    let mut out = 0u64;
    let mut rest = set;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        out |= adj[v];
    }
    out
}

fn is_connected(n: usize, adj: &[u64]) -> bool {
    if n <= 1 {
        return true;
    }
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut visited = 1u64;
    let mut frontier = 1u64;
    while frontier != 0 {
        let next = neighborhood(adj, frontier) & !visited;
        visited |= next;
        frontier = next;
    }
    visited == full
}

fn is_bipartite(n: usize, adj: &[u64]) -> bool {
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    if n == 0 {
        return true;
    }
    let mut colored = 0u64;
    while colored != full {
        let start = (!colored & full).trailing_zeros() as usize;
        let mut side_a = 1u64 << start;
        let mut side_b = 0u64;
        let mut frontier = side_a;
        let mut next_is_b = true;
        while frontier != 0 {
            let next = neighborhood(adj, frontier) & !(side_a | side_b);
            if next_is_b {
                side_b |= next;
            } else {
                side_a |= next;
            }
            frontier = next;
            next_is_b = !next_is_b;
        }
        let mut rest = side_a;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if adj[v] & side_a != 0 {
                return false;
            }
        }
        let mut rest = side_b;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if adj[v] & side_b != 0 {
                return false;
            }
        }
        colored |= side_a | side_b;
    }
    true
}

/// `None` when disconnected (infinite diameter), otherwise the largest
/// pairwise distance; 0 for a single vertex.
fn diameter(n: usize, adj: &[u64]) -> Option<usize> {
    if n <= 1 {
        return Some(0);
    }
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut diam = 0usize;
    for v in 0..n {
        let mut visited = 1u64 << v;
        let mut frontier = visited;
        let mut dist = 0usize;
        while frontier != 0 {
            let next = neighborhood(adj, frontier) & !visited;
            if next != 0 {
                dist += 1;
                visited |= next;
            }
            frontier = next;
        }
        if visited != full {
            return None;
        }
        diam = diam.max(dist);
    }
    Some(diam)
}

fn has_independent_set(n: usize, adj: &[u64], c: usize) -> bool {
    if c == 0 {
        return true;
    }
    if c > n {
        return false;
    }
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    fn rec(adj: &[u64], mut candidates: u64, need: usize) -> bool {
        if need == 0 {
            return true;
        }
        while candidates != 0 {
            if (candidates.count_ones() as usize) < need {
                return false;
            }
            let v = candidates.trailing_zeros() as usize;
            candidates &= candidates - 1;
            if rec(adj, candidates & !adj[v], need - 1) {
                return true;
            }
        }
        false
    }
    rec(adj, full, c)
}

// ---------------------------------------------------------------------------
// Memoizing handle
// ---------------------------------------------------------------------------

/// A property plus a concurrent evaluation cache and the cached result of
/// the edge-monotonicity verification.
pub struct PropertyHandle {
    spec: PropertySpec,
    memo: Mutex<HashMap<(u8, u128), bool>>,
    monotone_verified: OnceLock<bool>,
}

impl PropertyHandle {
    pub fn new(spec: PropertySpec) -> PropertyHandle {
        PropertyHandle {
            spec,
            memo: Mutex::new(HashMap::new()),
            monotone_verified: OnceLock::new(),
        }
    }

    pub fn spec(&self) -> &PropertySpec {
        &self.spec
    }

    pub fn name(&self) -> &str {
        &self.spec.name
    }

    /// Memoized evaluation. Graphs on more than 16 vertices bypass the
    /// cache (their pair masks do not fit the key).
    pub fn evaluate(&self, g: &Graph) -> bool {
        let n = g.vertex_count();
        if n > 16 {
            return self.spec.eval_graph(g);
        }
        let key = (n as u8, pair_mask(g));
        if let Some(&v) = self.memo.lock().unwrap().get(&key) {
            return v;
        }
        let v = self.spec.eval_graph(g);
        self.memo.lock().unwrap().insert(key, v);
        v
    }

    /// Whether the declared edge-monotone flag survives exhaustive
    /// verification on all graphs with at most 6 vertices. Cached.
    pub fn verified_edge_monotone(&self) -> bool {
        *self.monotone_verified.get_or_init(|| {
            self.spec.declared_edge_monotone
                && matches!(
                    is_edge_monotone_upto(&self.spec, 6),
                    Ok(MonotoneOutcome::Pass)
                )
        })
    }
}

/// Bitmask over the `n(n-1)/2` vertex pairs of `K_n` in lexicographic order;
/// the memo key for graphs on at most 16 vertices.
fn pair_mask(g: &Graph) -> u128 {
    let n = g.vertex_count();
    let mut mask = 0u128;
    let mut idx = 0usize;
    for u in 0..n {
        for v in u + 1..n {
            if g.has_edge(u, v) {
                mask |= 1 << idx;
            }
            idx += 1;
        }
    }
    mask
}

// ---------------------------------------------------------------------------
// Meta-checks
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
pub enum MonotoneOutcome {
    Pass,
    /// First violation in canonical order: a graph satisfying the property
    /// and the edge whose deletion falsifies it.
    Counterexample {
        graph: Graph,
        edge_index: usize,
    },
}

/// Exhaustively checks edge-monotonicity on every graph with at most `nmax`
/// vertices (nmax <= 7). Enumeration order: vertex count ascending, then
/// edge mask ascending, then edge index ascending.
pub fn is_edge_monotone_upto(spec: &PropertySpec, nmax: usize) -> Result<MonotoneOutcome> {
    if nmax > 7 {
        return Err(capacity("edge-monotonicity check capped at 7 vertices"));
    }
    for n in 1..=nmax {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        let e = pairs.len();
        // Evaluate once per mask, then compare along single-edge deletions.
        let mut table = vec![false; 1 << e];
        let mut adj = vec![0u64; n];
        for (mask, slot) in table.iter_mut().enumerate() {
            if mask > 0 {
                // Gray-style incremental update is unnecessary here; builds
                // are cheap at n <= 7.
                for v in adj.iter_mut() {
                    *v = 0;
                }
                for (i, &(u, v)) in pairs.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        adj[u] |= 1 << v;
                        adj[v] |= 1 << u;
                    }
                }
            }
            *slot = spec.eval_adj(n, &adj);
        }
        for mask in 0..1usize << e {
            if !table[mask] {
                continue;
            }
            for i in 0..e {
                if mask >> i & 1 == 1 && !table[mask & !(1 << i)] {
                    let edges: Vec<(usize, usize)> = pairs
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| mask >> j & 1 == 1)
                        .map(|(_, &p)| p)
                        .collect();
                    let graph = Graph::new(n, edges)?;
                    let edge = pairs[i];
                    let edge_index = graph.edge_index(edge.0, edge.1).expect("edge present");
                    return Ok(MonotoneOutcome::Counterexample { graph, edge_index });
                }
            }
        }
    }
    Ok(MonotoneOutcome::Pass)
}

/// Whether the property is constant on `k`-vertex graphs.
///
/// With a verified edge-monotone handle this needs only the two extreme
/// graphs: the property is nontrivial iff it holds on the independent set
/// and fails on the clique. The general path enumerates all `k`-vertex
/// graphs and is capped at k <= 7.
pub fn is_trivial_on(h: &PropertyHandle, k: usize) -> Result<bool> {
    if h.verified_edge_monotone() {
        let on_is = h.evaluate(&Graph::independent(k));
        let on_k = h.evaluate(&Graph::complete(k)?);
        return Ok(!(on_is && !on_k));
    }
    if k > 7 {
        return Err(capacity(
            "triviality check needs k <= 7 without a verified edge-monotone flag",
        ));
    }
    let pairs: Vec<(usize, usize)> = (0..k)
        .flat_map(|u| (u + 1..k).map(move |v| (u, v)))
        .collect();
    let e = pairs.len();
    let mut adj = vec![0u64; k];
    let first = h.spec().eval_adj(k, &adj);
    for mask in 1..1usize << e {
        for v in adj.iter_mut() {
            *v = 0;
        }
        for (i, &(u, v)) in pairs.iter().enumerate() {
            if mask >> i & 1 == 1 {
                adj[u] |= 1 << v;
                adj[v] |= 1 << u;
            }
        }
        if h.spec().eval_adj(k, &adj) != first {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// The standing roster of edge-monotone properties used by the verification
// suites. All are expressed in the surface syntax.
// ---------------------------------------------------------------------------

/// Source texts of the built-in edge-monotone properties.
pub const EDGE_MONOTONE_BUILTINS: [&str; 6] = [
    "bipartite",
    "independent",
    "disconnected or diam >= 1/2 n",
    "bipartite or has_independent_set(3)",
    "max_degree <= 3/4 n",
    "has_independent_set(3)",
];

/// Parses one of the built-in texts and marks it edge-monotone.
pub fn builtin(text: &str) -> Result<PropertySpec> {
    let mut spec = parse_property(text)?;
    spec.declared_edge_monotone = true;
    Ok(spec)
}

/// All built-in edge-monotone properties, each behind a fresh handle.
pub fn builtin_handles() -> Vec<PropertyHandle> {
    EDGE_MONOTONE_BUILTINS
        .iter()
        .map(|t| PropertyHandle::new(builtin(t).expect("builtin texts parse")))
        .collect()
}

/// A property that holds on every graph ("num_edges >= 0").
pub fn always_true() -> PropertySpec {
    PropertySpec::new(Expr::atom(Atom::NumEdges(Cmp::Ge, 0)), true, "always-true")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn handle(text: &str) -> PropertyHandle {
        PropertyHandle::new(parse_property(text).unwrap())
    }

    #[test]
    fn atom_evaluations() {
        let bip = handle("bipartite");
        assert!(bip.evaluate(&Graph::cycle(4).unwrap()));
        assert!(!bip.evaluate(&Graph::complete(3).unwrap()));
        let even = handle("edge_parity(even)");
        assert!(even.evaluate(&Graph::complete(4).unwrap()));
        assert!(!even.evaluate(&Graph::cycle(5).unwrap()));
        let conn = handle("connected");
        assert!(conn.evaluate(&Graph::path(4).unwrap()));
        assert!(!conn.evaluate(&Graph::independent(3)));
        assert!(handle("clique").evaluate(&Graph::complete(5).unwrap()));
        assert!(handle("independent").evaluate(&Graph::independent(5)));
        assert!(handle("has_independent_set(3)").evaluate(&Graph::cycle(6).unwrap()));
        assert!(!handle("has_independent_set(3)").evaluate(&Graph::complete(4).unwrap()));
        assert!(handle("num_edges == 5").evaluate(&Graph::cycle(5).unwrap()));
    }

    #[test]
    fn degree_and_diameter_thresholds() {
        // max_degree <= 3/4 n on K_4: 3 <= 3.
        let spec = handle("max_degree <= 3/4 n");
        assert!(spec.evaluate(&Graph::complete(4).unwrap()));
        assert!(!spec.evaluate(&Graph::complete(8).unwrap()));
        // Disconnected graphs have infinite diameter.
        let spec = handle("diam >= 1/2 n");
        assert!(spec.evaluate(&Graph::independent(4)));
        assert!(spec.evaluate(&Graph::path(6).unwrap())); // diameter 5 >= 3
        assert!(!spec.evaluate(&Graph::complete(4).unwrap())); // diameter 1 < 2
    }

    #[test]
    fn negate_and_complement() {
        let clique = handle("clique");
        let not_clique = PropertyHandle::new(clique.spec().negate());
        assert!(!not_clique.evaluate(&Graph::complete(3).unwrap()));

        // complement(independent) agrees with clique on all graphs up to 6
        // vertices, and complement is an involution.
        let comp_indep = parse_property("independent").unwrap().complement();
        let clique_spec = parse_property("clique").unwrap();
        let double = comp_indep.complement().complement();
        for n in 1..=6usize {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .collect();
            for mask in 0..1usize << pairs.len() {
                let edges = pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &p)| p);
                let g = Graph::new(n, edges).unwrap();
                assert_eq!(comp_indep.eval_graph(&g), clique_spec.eval_graph(&g));
                assert_eq!(double.eval_graph(&g), comp_indep.eval_graph(&g));
            }
        }
    }

    #[test]
    fn shift_semantics() {
        let bip = parse_property("bipartite").unwrap();
        let shifted = bip.shift(&Graph::independent(1));
        for g in [
            Graph::cycle(4).unwrap(),
            Graph::complete(3).unwrap(),
            Graph::path(5).unwrap(),
        ] {
            assert_eq!(shifted.eval_graph(&g), bip.eval_graph(&g));
        }
        // Shifting "connected" by an isolated vertex is constantly false.
        let conn = parse_property("connected")
            .unwrap()
            .shift(&Graph::independent(1));
        assert!(!conn.eval_graph(&Graph::complete(3).unwrap()));
        // α(IS_1 ⊎ K_2) = 2 < 3.
        let his = parse_property("has_independent_set(3)")
            .unwrap()
            .shift(&Graph::complete(2).unwrap());
        assert!(!his.eval_graph(&Graph::independent(1)));
        // Shifting by the empty graph is the identity.
        let idshift = bip.shift(&Graph::independent(0));
        assert!(!idshift.eval_graph(&Graph::complete(3).unwrap()));
        assert!(idshift.eval_graph(&Graph::cycle(4).unwrap()));
    }

    #[test]
    fn monotonicity_verification() {
        let bip = parse_property("bipartite").unwrap();
        assert_eq!(
            is_edge_monotone_upto(&bip, 6).unwrap(),
            MonotoneOutcome::Pass
        );

        // Deleting the only edge of K_2 disconnects it; that is the first
        // counterexample in canonical order.
        let conn = parse_property("connected").unwrap();
        match is_edge_monotone_upto(&conn, 4).unwrap() {
            MonotoneOutcome::Counterexample { graph, edge_index } => {
                assert_eq!(graph, Graph::complete(2).unwrap());
                assert_eq!(edge_index, 0);
            }
            MonotoneOutcome::Pass => panic!("connected is not edge-monotone"),
        }

        let parity = parse_property("edge_parity(even)").unwrap();
        assert!(matches!(
            is_edge_monotone_upto(&parity, 5).unwrap(),
            MonotoneOutcome::Counterexample { .. }
        ));
        assert!(is_edge_monotone_upto(&bip, 8).is_err());
    }

    #[test]
    fn triviality_checks() {
        let bip = PropertyHandle::new(builtin("bipartite").unwrap());
        assert!(!is_trivial_on(&bip, 3).unwrap());
        assert!(is_trivial_on(&bip, 2).unwrap());
        // clique is not edge-monotone, so this runs the general path.
        let clique = handle("clique");
        assert!(!is_trivial_on(&clique, 4).unwrap());
        assert!(is_trivial_on(&clique, 1).unwrap());
        // The general path is capped at 7 vertices; the fast path is not.
        assert!(is_trivial_on(&clique, 8).is_err());
        assert!(!is_trivial_on(&bip, 9).unwrap());
    }

    #[test]
    fn monotonicity_check_at_the_cap() {
        let bip = parse_property("bipartite").unwrap();
        assert_eq!(
            is_edge_monotone_upto(&bip, 7).unwrap(),
            MonotoneOutcome::Pass
        );
    }

    #[test]
    fn fast_and_general_triviality_agree() {
        for text in EDGE_MONOTONE_BUILTINS {
            let spec = builtin(text).unwrap();
            let fast = PropertyHandle::new(spec.clone());
            assert!(fast.verified_edge_monotone(), "{text} must verify");
            let mut general_spec = spec;
            general_spec.declared_edge_monotone = false;
            let general = PropertyHandle::new(general_spec);
            for k in 1..=6usize {
                assert_eq!(
                    is_trivial_on(&fast, k).unwrap(),
                    is_trivial_on(&general, k).unwrap(),
                    "{text} at k={k}"
                );
            }
        }
    }

    #[test]
    fn builtins_verify_edge_monotone() {
        for h in builtin_handles() {
            assert!(
                h.verified_edge_monotone(),
                "{} must be edge-monotone",
                h.name()
            );
        }
    }

    #[test]
    fn evaluation_is_isomorphism_invariant() {
        // Random relabelings leave every built-in unchanged, all graphs on
        // up to 5 vertices, a fixed set of permutations.
        let perms5: [[usize; 5]; 4] = [
            [1, 0, 3, 2, 4],
            [4, 3, 2, 1, 0],
            [2, 4, 1, 0, 3],
            [3, 0, 4, 2, 1],
        ];
        for h in builtin_handles() {
            for n in 2..=5usize {
                let pairs: Vec<(usize, usize)> = (0..n)
                    .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                    .collect();
                for mask in 0..1usize << pairs.len() {
                    let edges: Vec<(usize, usize)> = pairs
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, &p)| p)
                        .collect();
                    let g = Graph::new(n, edges).unwrap();
                    let base = h.evaluate(&g);
                    for perm in &perms5 {
                        let perm: Vec<usize> = perm.iter().copied().filter(|&v| v < n).collect();
                        let rg = g.relabel(&perm).unwrap();
                        assert_eq!(h.evaluate(&rg), base, "{} on {:?}", h.name(), g);
                    }
                }
            }
        }
    }

    #[test]
    fn memo_agrees_with_fresh_evaluation() {
        let h = handle("bipartite or has_independent_set(3)");
        let g = Graph::cycle(5).unwrap();
        let first = h.evaluate(&g);
        assert_eq!(h.evaluate(&g), first);
        assert_eq!(h.spec().eval_graph(&g), first);
    }
}
