//! Brute-force reference counters (#IndSub, #Hom, color-prescribed
//! variants, cliques), the inclusion-exclusion reduction for shifted
//! properties, the expansion identity tying #cp-IndSub to #cp-Hom, and the
//! clique-counting gadget built on a biclique inside the pattern.
//!
//! All counters are exact and arbitrary precision; the reduction takes its
//! counting oracle as an injected callback so the call pattern (including
//! the enlarged parameter `k + |V(H)|`) is observable.

use num_bigint::BigInt;
use num_traits::Zero;

use serde::Serialize;

use crate::error::{capacity, input, Result};
use crate::graph::Graph;
use crate::property::PropertyHandle;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CountMethod {
    Direct,
    Reduction,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountResult {
    pub value: BigInt,
    pub method: CountMethod,
}

impl CountResult {
    fn direct(value: BigInt) -> CountResult {
        CountResult {
            value,
            method: CountMethod::Direct,
        }
    }
}

fn binom_u128(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k.min(n - k) {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Number of `k`-vertex induced subgraphs of `g` satisfying the property.
pub fn count_indsub(h: &PropertyHandle, k: usize, g: &Graph) -> Result<CountResult> {
    let n = g.vertex_count();
    if binom_u128(n, k) > 100_000_000 {
        return Err(capacity(format!(
            "binom({n},{k}) exceeds the enumeration cap"
        )));
    }
    if k > n {
        return Ok(CountResult::direct(BigInt::zero()));
    }
    let mut count = BigInt::zero();
    let mut subset: Vec<usize> = (0..k).collect();
    loop {
        let induced = g.induced_subgraph(&subset)?;
        if h.evaluate(&induced) {
            count += 1;
        }
        // Next k-combination in lexicographic order.
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(CountResult::direct(count));
            }
            i -= 1;
            if subset[i] != i + n - k {
                break;
            }
        }
        subset[i] += 1;
        for j in i + 1..k {
            subset[j] = subset[j - 1] + 1;
        }
    }
}

/// Counting oracle signature used by the reduction: `(parameter, graph)`.
pub type CountOracle<'a> = dyn FnMut(usize, &Graph) -> Result<BigInt> + 'a;

/// Counts `k`-vertex induced subgraphs of `g` satisfying the shifted
/// property `(Φ - H)` using only an oracle for the unshifted count: one
/// call per subset `X ⊆ V(H)` on `g ⊎ (H \ X)`, every call with parameter
/// exactly `k + |V(H)|`, combined by inclusion-exclusion.
pub fn count_indsub_shifted(
    hgraph: &Graph,
    k: usize,
    g: &Graph,
    oracle: &mut CountOracle<'_>,
) -> Result<CountResult> {
    let hv = hgraph.vertex_count();
    if hv > 4 {
        return Err(capacity(format!(
            "shift graphs capped at 4 vertices, got {hv}"
        )));
    }
    let mut total = BigInt::zero();
    for mask in 0u64..1 << hv {
        let keep: Vec<usize> = (0..hv).filter(|&v| mask >> v & 1 == 0).collect();
        let remainder = hgraph.induced_subgraph(&keep)?;
        let extended = g.disjoint_union(&remainder)?;
        let term = oracle(k + hv, &extended)?;
        if mask.count_ones() % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    Ok(CountResult {
        value: total,
        method: CountMethod::Reduction,
    })
}

/// Number of homomorphisms (adjacency-preserving vertex maps) from
/// `pattern` into `g`.
pub fn count_hom(pattern: &Graph, g: &Graph) -> Result<CountResult> {
    let hp = pattern.vertex_count();
    let n = g.vertex_count();
    if hp > 5 || n > 12 {
        return Err(capacity("homomorphism counting capped at 5 -> 12 vertices"));
    }
    let mut count = BigInt::zero();
    let mut image = vec![0usize; hp];
    fn rec(pattern: &Graph, g: &Graph, v: usize, image: &mut [usize], count: &mut BigInt) {
        if v == pattern.vertex_count() {
            *count += 1;
            return;
        }
        'targets: for t in 0..g.vertex_count() {
            for (u, &iu) in image.iter().enumerate().take(v) {
                if pattern.has_edge(u, v) && !g.has_edge(iu, t) {
                    continue 'targets;
                }
            }
            image[v] = t;
            rec(pattern, g, v + 1, image, count);
        }
    }
    rec(pattern, g, 0, &mut image, &mut count);
    Ok(CountResult::direct(count))
}

// ---------------------------------------------------------------------------
// Colored graphs and color-prescribed counting
// ---------------------------------------------------------------------------

/// A graph colored by the vertices of a pattern; the coloring must be a
/// homomorphism (edges of `g` join color classes that are adjacent in the
/// pattern).
#[derive(Clone, Debug, Serialize)]
pub struct ColoredGraph {
    g: Graph,
    pattern: Graph,
    coloring: Vec<usize>,
}

impl ColoredGraph {
    pub fn new(g: Graph, pattern: Graph, coloring: Vec<usize>) -> Result<ColoredGraph> {
        if coloring.len() != g.vertex_count() {
            return Err(input("coloring length does not match vertex count"));
        }
        if coloring.iter().any(|&c| c >= pattern.vertex_count()) {
            return Err(input("color out of range of the pattern"));
        }
        for &(u, v) in g.edges() {
            let (cu, cv) = (coloring[u as usize], coloring[v as usize]);
            if !pattern.has_edge(cu, cv) {
                return Err(input(format!(
                    "edge ({u},{v}) joins classes {cu},{cv} that are not adjacent in the pattern"
                )));
            }
        }
        Ok(ColoredGraph {
            g,
            pattern,
            coloring,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.g
    }

    pub fn pattern(&self) -> &Graph {
        &self.pattern
    }

    pub fn coloring(&self) -> &[usize] {
        &self.coloring
    }

    /// Vertices of each color class, ascending.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut classes = vec![Vec::new(); self.pattern.vertex_count()];
        for (v, &c) in self.coloring.iter().enumerate() {
            classes[c].push(v);
        }
        classes
    }
}

fn check_transversal_cap(classes: &[Vec<usize>]) -> Result<()> {
    let mut prod: u128 = 1;
    for c in classes {
        prod = prod.saturating_mul(c.len() as u128);
        if prod > 100_000_000 {
            return Err(capacity("product of color-class sizes exceeds the cap"));
        }
    }
    Ok(())
}

/// Number of color-prescribed homomorphisms from the pattern into the
/// colored graph: homomorphisms mapping every pattern vertex into its own
/// color class.
pub fn count_cp_hom(cg: &ColoredGraph) -> Result<CountResult> {
    count_cp_hom_of_pattern(cg.pattern(), cg)
}

/// Same, but for an arbitrary edge set on the pattern's vertices (used by
/// the expansion identity, which varies the pattern's edges while keeping
/// the classes).
fn count_cp_hom_of_pattern(pattern: &Graph, cg: &ColoredGraph) -> Result<CountResult> {
    let classes = cg.classes();
    check_transversal_cap(&classes)?;
    let mut count = BigInt::zero();
    let mut choice = vec![0usize; classes.len()];
    fn rec(
        pattern: &Graph,
        g: &Graph,
        classes: &[Vec<usize>],
        v: usize,
        choice: &mut [usize],
        count: &mut BigInt,
    ) {
        if v == classes.len() {
            *count += 1;
            return;
        }
        'cands: for &cand in &classes[v] {
            for (u, &cu) in choice.iter().enumerate().take(v) {
                if pattern.has_edge(u, v) && !g.has_edge(cu, cand) {
                    continue 'cands;
                }
            }
            choice[v] = cand;
            rec(pattern, g, classes, v + 1, choice, count);
        }
    }
    rec(pattern, cg.graph(), &classes, 0, &mut choice, &mut count);
    Ok(CountResult::direct(count))
}

/// Number of induced subgraphs with exactly one vertex of each color that
/// satisfy the property.
pub fn count_cp_indsub(h: &PropertyHandle, cg: &ColoredGraph) -> Result<CountResult> {
    let classes = cg.classes();
    check_transversal_cap(&classes)?;
    let mut count = BigInt::zero();
    let mut choice = vec![0usize; classes.len()];
    fn rec(
        h: &PropertyHandle,
        cg: &ColoredGraph,
        classes: &[Vec<usize>],
        v: usize,
        choice: &mut [usize],
        count: &mut BigInt,
    ) -> Result<()> {
        if v == classes.len() {
            let induced = cg.graph().induced_subgraph(choice)?;
            if h.evaluate(&induced) {
                *count += 1;
            }
            return Ok(());
        }
        for &cand in &classes[v] {
            choice[v] = cand;
            rec(h, cg, classes, v + 1, choice, count)?;
        }
        Ok(())
    }
    rec(h, cg, &classes, 0, &mut choice, &mut count)?;
    Ok(CountResult::direct(count))
}

/// Verifies the expansion identity
/// `#cpIndSub(Φ,H)(G) = Σ_{S⊆E(H)} Φ(H[S]) Σ_{J⊆E(H)∖S} (-1)^{|J|} #cpHom(H[S∪J] → G)`
/// by computing both sides, and additionally checks that the coefficient of
/// the full-pattern term has the same absolute value as the alternating
/// enumerator.
pub fn verify_cpindsub_identity(h: &PropertyHandle, cg: &ColoredGraph) -> Result<bool> {
    let pattern = cg.pattern();
    let e = pattern.edge_count();
    if e > 10 {
        return Err(capacity("identity check capped at 10 pattern edges"));
    }
    let lhs = count_cp_indsub(h, cg)?.value;
    let mut rhs = BigInt::zero();
    let mut full_coefficient = BigInt::zero();
    let full = pattern.full_edge_mask();
    for s in 0u128..=full {
        if !h.evaluate(&pattern.edge_subgraph(s)?) {
            continue;
        }
        // Sum over J ⊆ E \ S via submask enumeration of the complement.
        let comp = full & !s;
        let mut j = comp;
        loop {
            let sub = pattern.edge_subgraph(s | j)?;
            let term = count_cp_hom_of_pattern(&sub, cg)?.value;
            let sign_pos = j.count_ones().is_multiple_of(2);
            if sign_pos {
                rhs += &term;
            } else {
                rhs -= &term;
            }
            if s | j == full {
                if sign_pos {
                    full_coefficient += 1;
                } else {
                    full_coefficient -= 1;
                }
            }
            if j == 0 {
                break;
            }
            j = (j - 1) & comp;
        }
    }
    // |coefficient of #cpHom(H → G)| = |Σ_S Φ(H[S]) (-1)^{|E|-|S|}|, the
    // alternating enumerator up to a global sign.
    let ae = crate::altenum::alt_enum_naive(h, pattern)?;
    if full_coefficient.magnitude() != ae.magnitude() {
        return Ok(false);
    }
    Ok(lhs == rhs)
}

/// Number of cliques of size `ell`.
pub fn count_cliques(g: &Graph, ell: usize) -> Result<CountResult> {
    let n = g.vertex_count();
    if binom_u128(n, ell) > 100_000_000 {
        return Err(capacity(format!(
            "binom({n},{ell}) exceeds the enumeration cap"
        )));
    }
    let mut count = BigInt::zero();
    fn rec(g: &Graph, start: usize, need: usize, common: u64, count: &mut BigInt) {
        if need == 0 {
            *count += 1;
            return;
        }
        for v in start..g.vertex_count() {
            if common >> v & 1 == 1 {
                rec(g, v + 1, need - 1, common & g.neighbors(v), count);
            }
        }
    }
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    rec(g, 0, ell, full, &mut count);
    Ok(CountResult::direct(count))
}

// ---------------------------------------------------------------------------
// Clique gadget
// ---------------------------------------------------------------------------

/// Builds an `f`-colored graph `G'` on `2·ell·|V(g)| + (|V(f)| - 2·ell)`
/// vertices such that the color-prescribed homomorphisms from `f` into `G'`
/// are in bijection with the `ell`-cliques of `g`. Requires `f` to contain
/// `K_{ell,ell}` as a subgraph; the lexicographically first side pair is
/// used.
///
/// Edges are added only between color classes that are adjacent in `f`, so
/// the coloring stays a homomorphism; pairs whose colors are not adjacent
/// can never be used by a color-prescribed homomorphism.
pub fn clique_gadget(f: &Graph, ell: usize, g: &Graph) -> Result<ColoredGraph> {
    if ell < 2 {
        return Err(input("gadget needs ell >= 2"));
    }
    if f.vertex_count() > 6 || g.vertex_count() > 8 {
        return Err(capacity("gadget capped at |V(f)| <= 6 and |V(g)| <= 8"));
    }
    let (side_a, side_b) = find_biclique_sides(f, ell)
        .ok_or_else(|| input(format!("pattern contains no K_{ell},{ell}")))?;
    let n = g.vertex_count();
    let fv = f.vertex_count();
    let rest: Vec<usize> = (0..fv)
        .filter(|v| !side_a.contains(v) && !side_b.contains(v))
        .collect();

    // Vertex layout of G': u_{i,j} for i in 0..ell, j in 0..n, then w_{i,j},
    // then y_k for the leftover pattern vertices.
    let u = |i: usize, j: usize| i * n + j;
    let w = |i: usize, j: usize| ell * n + i * n + j;
    let y = |k: usize| 2 * ell * n + k;
    let total = 2 * ell * n + rest.len();

    let mut coloring = vec![0usize; total];
    for i in 0..ell {
        for j in 0..n {
            coloring[u(i, j)] = side_a[i];
            coloring[w(i, j)] = side_b[i];
        }
    }
    for (k, &x) in rest.iter().enumerate() {
        coloring[y(k)] = x;
    }

    let mut edges: Vec<(usize, usize)> = Vec::new();
    // u-w edges encode clique membership and the ordering of the tuple.
    for i in 0..ell {
        for j in 0..n {
            for i2 in 0..ell {
                for j2 in 0..n {
                    let keep = (i == i2 && j == j2)
                        || (i < i2 && j < j2 && g.has_edge(j, j2))
                        || (i > i2 && j > j2 && g.has_edge(j, j2));
                    if keep {
                        edges.push((u(i, j), w(i2, j2)));
                    }
                }
            }
        }
    }
    // Same-side edges wherever the pattern joins the corresponding colors.
    for i in 0..ell {
        for i2 in i + 1..ell {
            if f.has_edge(side_a[i], side_a[i2]) {
                for j in 0..n {
                    for j2 in 0..n {
                        edges.push((u(i, j), u(i2, j2)));
                    }
                }
            }
            if f.has_edge(side_b[i], side_b[i2]) {
                for j in 0..n {
                    for j2 in 0..n {
                        edges.push((w(i, j), w(i2, j2)));
                    }
                }
            }
        }
    }
    // Leftover vertices connect to every vertex of every class their color
    // is adjacent to.
    for (k, &x) in rest.iter().enumerate() {
        for i in 0..ell {
            for j in 0..n {
                if f.has_edge(x, side_a[i]) {
                    edges.push((y(k), u(i, j)));
                }
                if f.has_edge(x, side_b[i]) {
                    edges.push((y(k), w(i, j)));
                }
            }
        }
        for (k2, &x2) in rest.iter().enumerate().skip(k + 1) {
            if f.has_edge(x, x2) {
                edges.push((y(k), y(k2)));
            }
        }
    }
    ColoredGraph::new(Graph::new(total, edges)?, f.clone(), coloring)
}

/// Lexicographically first pair of disjoint `ell`-sets `(A, B)` with every
/// cross pair adjacent.
fn find_biclique_sides(f: &Graph, ell: usize) -> Option<(Vec<usize>, Vec<usize>)> {
    let n = f.vertex_count();
    let sets = k_subsets(n, ell);
    for a in &sets {
        for b in &sets {
            if a.iter().any(|v| b.contains(v)) {
                continue;
            }
            if a.iter().all(|&x| b.iter().all(|&y| f.has_edge(x, y))) {
                return Some((a.clone(), b.clone()));
            }
        }
    }
    None
}

fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - k {
                break;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}
