//! Permutation groups given by generators, their edge orbits, and fixed
//! points as orbit unions.
//!
//! Groups are never enumerated: the Sylow group on `p^m` points has order
//! `p^1 · p^p · … · p^{p^{m-1}}`, far too large, but orbit closure under the
//! generators is tiny. Fixed points are enumerated as orbit subsets, never
//! as raw edge subsets.

use serde::Serialize;

use crate::error::{capacity, falsified, input, Result};
use crate::gf::{FieldElem, FieldSpec};
use crate::graph::{inhabited_graph, lexicographic_product, Graph};

/// A permutation group on `0..degree` described by its generators.
#[derive(Clone, Debug)]
pub struct GeneratedGroup {
    degree: usize,
    generators: Vec<Vec<u16>>,
    /// For the built-in constructions, the prime `p` such that the generated
    /// group is a `p`-group. Verified structurally at construction.
    p_power: Option<u32>,
}

impl GeneratedGroup {
    pub fn new(
        degree: usize,
        generators: Vec<Vec<u16>>,
        p_power: Option<u32>,
    ) -> Result<GeneratedGroup> {
        for g in &generators {
            if g.len() != degree {
                return Err(input("generator length does not match degree"));
            }
            let mut seen = vec![false; degree];
            for &img in g {
                let img = img as usize;
                if img >= degree || seen[img] {
                    return Err(input("generator is not a bijection"));
                }
                seen[img] = true;
            }
        }
        Ok(GeneratedGroup {
            degree,
            generators,
            p_power,
        })
    }

    /// The trivial group on `degree` points.
    pub fn trivial(degree: usize) -> GeneratedGroup {
        GeneratedGroup {
            degree,
            generators: Vec::new(),
            p_power: None,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Vec<u16>] {
        &self.generators
    }

    pub fn p_power(&self) -> Option<u32> {
        self.p_power
    }

    /// Group order by breadth-first closure over composition; errors once
    /// more than `cap` elements are found.
    pub fn closure_order(&self, cap: usize) -> Result<usize> {
        let id: Vec<u16> = (0..self.degree as u16).collect();
        let mut seen = std::collections::HashSet::new();
        seen.insert(id.clone());
        let mut queue = vec![id];
        while let Some(elem) = queue.pop() {
            for g in &self.generators {
                let composed: Vec<u16> = elem.iter().map(|&v| g[v as usize]).collect();
                if seen.insert(composed.clone()) {
                    if seen.len() > cap {
                        return Err(capacity(format!("group closure exceeds {cap} elements")));
                    }
                    queue.push(composed);
                }
            }
        }
        Ok(seen.len())
    }
}

/// The rotation group of `K_{p^m}`: all translations `x -> x + c` of the
/// field, generated by the `m` basis translations. Order `p^m`.
pub fn rotation_group(spec: &FieldSpec) -> GeneratedGroup {
    let n = spec.order();
    let mut generators = Vec::with_capacity(spec.m() as usize);
    for i in 0..spec.m() {
        // The basis element with coefficient 1 at position i has canonical
        // index p^{m-1-i}.
        let basis = spec.elem_of_index((spec.p() as usize).pow(spec.m() - 1 - i));
        let perm: Vec<u16> = (0..n)
            .map(|v| spec.index_of(&spec.add(&spec.elem_of_index(v), &basis)) as u16)
            .collect();
        generators.push(perm);
    }
    let group = GeneratedGroup {
        degree: n,
        generators,
        p_power: Some(spec.p()),
    };
    debug_assert_eq!(group.closure_order(n + 1).ok(), Some(n));
    group
}

/// Coordinate `c` (0-based, most significant first) of tuple index `v` in
/// `[0,p)^m`.
fn tuple_coord(v: usize, c: usize, p: usize, m: usize) -> usize {
    v / p.pow((m - 1 - c) as u32) % p
}

/// The Sylow `p`-subgroup of the symmetric group on `[0,p)^m`, generated by
/// prefix-conditioned unit increments: for each coordinate `j` and each
/// prefix `w` of length `j`, the bijection that adds 1 (mod p) to
/// coordinate `j` exactly on tuples whose first `j` coordinates equal `w`.
/// There are `1 + p + … + p^{m-1}` generators.
pub fn sylow_group(p: u32, m: u32) -> Result<GeneratedGroup> {
    if !crate::gf::is_prime(p) {
        return Err(input(format!("{p} is not prime")));
    }
    if m == 0 {
        return Err(input("sylow group needs m >= 1"));
    }
    let n = (p as u64)
        .checked_pow(m)
        .filter(|&n| n <= 64)
        .ok_or_else(|| capacity("p^m exceeds 64"))? as usize;
    let (p, m) = (p as usize, m as usize);
    let mut generators = Vec::new();
    for j in 0..m {
        let prefix_count = p.pow(j as u32);
        let suffix = p.pow((m - 1 - j) as u32);
        for w in 0..prefix_count {
            let perm: Vec<u16> = (0..n)
                .map(|v| {
                    if v / (p * suffix) == w {
                        let c = tuple_coord(v, j, p, m);
                        (v - c * suffix + (c + 1) % p * suffix) as u16
                    } else {
                        v as u16
                    }
                })
                .collect();
            generators.push(perm);
        }
    }
    // Every generator has order p, so the closure is a p-group.
    for g in &generators {
        let mut acc: Vec<u16> = g.clone();
        for _ in 1..p {
            acc = acc.iter().map(|&v| g[v as usize]).collect();
        }
        if acc.iter().enumerate().any(|(i, &v)| i != v as usize) {
            return Err(falsified("sylow generator does not have order p"));
        }
    }
    GeneratedGroup::new(n, generators, Some(p as u32))
}

/// Product group acting on the disjoint union of the factors' point sets;
/// each factor's generators are extended by the identity elsewhere.
pub fn product_group(parts: &[&GeneratedGroup]) -> GeneratedGroup {
    let degree: usize = parts.iter().map(|g| g.degree()).sum();
    let mut generators = Vec::new();
    let mut offset = 0usize;
    for part in parts {
        for g in part.generators() {
            let mut perm: Vec<u16> = (0..degree as u16).collect();
            for (v, &img) in g.iter().enumerate() {
                perm[offset + v] = (offset + img as usize) as u16;
            }
            generators.push(perm);
        }
        offset += part.degree();
    }
    let p_power = match parts {
        [] => None,
        [first, rest @ ..] => {
            let p = first.p_power();
            if rest.iter().all(|g| g.p_power() == p) {
                p
            } else {
                None
            }
        }
    };
    GeneratedGroup {
        degree,
        generators,
        p_power,
    }
}

// ---------------------------------------------------------------------------
// Edge orbits and fixed points
// ---------------------------------------------------------------------------

/// One orbit of the edge action `g·{u,v} = {g(u), g(v)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeOrbit {
    /// Mask over the host's edge indices.
    pub edges: u128,
    /// Lowest edge index of the orbit.
    pub representative: usize,
}

/// Orbits of the edge set of `g` under the group, sorted by representative.
/// Every generator must be an automorphism of `g`.
pub fn edge_orbits(group: &GeneratedGroup, g: &Graph) -> Result<Vec<EdgeOrbit>> {
    if group.degree() != g.vertex_count() {
        return Err(input(format!(
            "group degree {} does not match vertex count {}",
            group.degree(),
            g.vertex_count()
        )));
    }
    if g.edge_count() > crate::graph::MAX_MASKED_EDGES {
        return Err(capacity(format!(
            "orbit masks support at most {} edges, got {}",
            crate::graph::MAX_MASKED_EDGES,
            g.edge_count()
        )));
    }
    for (i, perm) in group.generators().iter().enumerate() {
        let perm: Vec<usize> = perm.iter().map(|&v| v as usize).collect();
        if !g.is_automorphism(&perm) {
            return Err(input(format!(
                "generator {i} is not an automorphism of the graph"
            )));
        }
    }
    let m = g.edge_count();
    let mut seen = vec![false; m];
    let mut orbits = Vec::new();
    for start in 0..m {
        if seen[start] {
            continue;
        }
        let mut mask = 0u128;
        let mut queue = vec![start];
        seen[start] = true;
        mask |= 1 << start;
        while let Some(idx) = queue.pop() {
            let (u, v) = g.edges()[idx];
            for perm in group.generators() {
                let iu = perm[u as usize] as usize;
                let iv = perm[v as usize] as usize;
                let img = g
                    .edge_index(iu, iv)
                    .expect("automorphism maps edges to edges");
                if !seen[img] {
                    seen[img] = true;
                    mask |= 1 << img;
                    queue.push(img);
                }
            }
        }
        orbits.push(EdgeOrbit {
            edges: mask,
            representative: start,
        });
    }
    Ok(orbits)
}

/// A fixed point of the group acting on edge-subgraphs of the host: a union
/// of orbits, identified by its orbit-index set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FixedPoint {
    pub orbit_set: u32,
    /// Mask over the host's edge indices (union of the selected orbits).
    pub edges: u128,
    /// Number of selected orbits.
    pub level: u32,
}

/// Serializable form of a fixed point.
#[derive(Clone, Debug, Serialize)]
pub struct FixedPointRecord {
    pub orbits: Vec<usize>,
    pub level: u32,
    pub edges: Vec<(u8, u8)>,
}

/// The full lattice of fixed points of a group in a host graph. Enumeration
/// is over orbit subsets in ascending bitmask order; capped at 20 orbits.
#[derive(Clone, Debug)]
pub struct FixedPointLattice {
    host: Graph,
    orbits: Vec<EdgeOrbit>,
    p: Option<u32>,
}

impl FixedPointLattice {
    pub fn new(group: &GeneratedGroup, host: &Graph) -> Result<FixedPointLattice> {
        let orbits = edge_orbits(group, host)?;
        if orbits.len() > 20 {
            return Err(capacity(format!(
                "{} orbits exceeds the 20-orbit cap",
                orbits.len()
            )));
        }
        Ok(FixedPointLattice {
            host: host.clone(),
            orbits,
            p: group.p_power(),
        })
    }

    pub fn host(&self) -> &Graph {
        &self.host
    }

    pub fn orbits(&self) -> &[EdgeOrbit] {
        &self.orbits
    }

    pub fn orbit_count(&self) -> usize {
        self.orbits.len()
    }

    /// The prime for which the acting group is a verified p-group, if any.
    pub fn p(&self) -> Option<u32> {
        self.p
    }

    pub fn point_count(&self) -> usize {
        1usize << self.orbits.len()
    }

    pub fn point(&self, orbit_set: u32) -> FixedPoint {
        debug_assert!((orbit_set as usize) < self.point_count());
        let mut edges = 0u128;
        let mut rest = orbit_set;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            edges |= self.orbits[i].edges;
        }
        FixedPoint {
            orbit_set,
            edges,
            level: orbit_set.count_ones(),
        }
    }

    /// All fixed points in ascending orbit-set order.
    pub fn points(&self) -> impl Iterator<Item = FixedPoint> + '_ {
        (0..self.point_count() as u32).map(|s| self.point(s))
    }

    /// Fixed points of one level, ascending orbit-set order.
    pub fn points_of_level(&self, level: u32) -> impl Iterator<Item = FixedPoint> + '_ {
        self.points().filter(move |fp| fp.level == level)
    }

    /// Number of fixed points per level `0..=orbit_count`.
    pub fn level_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.orbits.len() + 1];
        for fp in self.points() {
            counts[fp.level as usize] += 1;
        }
        counts
    }

    /// `b ⊆ a` in the sub-point order (orbit-set containment).
    pub fn is_sub_point(&self, b: &FixedPoint, a: &FixedPoint) -> bool {
        b.orbit_set & !a.orbit_set == 0
    }

    /// All sub-points of `fp` (including itself), ascending orbit-set order.
    pub fn sub_points(&self, fp: &FixedPoint) -> Vec<FixedPoint> {
        let set = fp.orbit_set;
        let mut subs: Vec<FixedPoint> = Vec::with_capacity(1 << fp.level);
        // Enumerate submasks ascending by iterating all points of the
        // power set of `set`'s bits.
        let mut s = 0u32;
        loop {
            subs.push(self.point(s));
            if s == set {
                break;
            }
            s = (s.wrapping_sub(set)) & set;
        }
        subs
    }

    /// The edge-subgraph of the host selected by a fixed point.
    pub fn graph_of(&self, fp: &FixedPoint) -> Graph {
        self.host
            .edge_subgraph(fp.edges)
            .expect("orbit masks lie within the host")
    }

    pub fn record(&self, fp: &FixedPoint) -> FixedPointRecord {
        let orbits = (0..self.orbits.len())
            .filter(|i| fp.orbit_set >> i & 1 == 1)
            .collect();
        FixedPointRecord {
            orbits,
            level: fp.level,
            edges: self.graph_of(fp).edges().to_vec(),
        }
    }

    /// Locates a graph in the lattice: it must be an edge-subgraph of the
    /// host whose edge set is exactly a union of orbits.
    pub fn locate(&self, g: &Graph) -> Option<FixedPoint> {
        let mask = self.host.edge_mask_of(g)?;
        let mut orbit_set = 0u32;
        let mut covered = 0u128;
        for (i, orbit) in self.orbits.iter().enumerate() {
            if orbit.edges & mask != 0 {
                if orbit.edges & !mask != 0 {
                    return None;
                }
                orbit_set |= 1 << i;
                covered |= orbit.edges;
            }
        }
        (covered == mask).then(|| self.point(orbit_set))
    }
}

// ---------------------------------------------------------------------------
// Difference graphs (fixed points of the rotation group)
// ---------------------------------------------------------------------------

fn check_subset_of_plus(spec: &FieldSpec, a: &[FieldElem]) -> Result<()> {
    let plus = spec.plus_set();
    for x in a {
        if !plus.contains(x) {
            return Err(input(format!(
                "element {} is not in F^+",
                x.display_plain()
            )));
        }
    }
    Ok(())
}

/// The difference graph `C^A`: vertices are the field elements in canonical
/// order, with an edge `{u,v}` iff `u - v ∈ A ∪ (-A)`.
pub fn difference_graph(spec: &FieldSpec, a: &[FieldElem]) -> Result<Graph> {
    check_subset_of_plus(spec, a)?;
    let n = spec.order();
    let mut edges = Vec::new();
    for u in 0..n {
        let eu = spec.elem_of_index(u);
        for v in u + 1..n {
            let ev = spec.elem_of_index(v);
            let d = spec.sub(&eu, &ev);
            let rep = spec.plus_representative(&d);
            if a.contains(&rep) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges)
}

/// Search order for scalars: the half-set first, then the negatives.
fn scalar_order(spec: &FieldSpec) -> Vec<FieldElem> {
    let plus = spec.plus_set();
    let negs: Vec<FieldElem> = plus
        .iter()
        .map(|x| spec.neg(x))
        .filter(|x| !plus.contains(x))
        .collect();
    plus.into_iter().chain(negs).collect()
}

/// A nonzero scalar `λ` with `λ·(A ∪ -A) = B ∪ -B`, if one exists; such a
/// scalar certifies that the two difference graphs are isomorphic.
pub fn difference_iso(
    spec: &FieldSpec,
    a: &[FieldElem],
    b: &[FieldElem],
) -> Result<Option<FieldElem>> {
    check_subset_of_plus(spec, a)?;
    check_subset_of_plus(spec, b)?;
    let symm = |set: &[FieldElem]| -> std::collections::BTreeSet<FieldElem> {
        set.iter().flat_map(|x| [x.clone(), spec.neg(x)]).collect()
    };
    let sa = symm(a);
    let sb = symm(b);
    for lambda in scalar_order(spec) {
        let image: std::collections::BTreeSet<FieldElem> =
            sa.iter().map(|x| spec.mul(&lambda, x)).collect();
        if image == sb {
            return Ok(Some(lambda));
        }
    }
    Ok(None)
}

/// An embedding produced by [`embed_small_set`]: the scalar and the image
/// of `b` inside the half-set.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub lambda: FieldElem,
    pub image: Vec<FieldElem>,
}

#[derive(Clone, Debug)]
pub struct EmbedOutcome {
    /// Whether `a ⊊ F^+` and `|b| · (|F^+| - |a|) < |F^+|` both hold; under
    /// this hypothesis an embedding is guaranteed to exist.
    pub hypothesis_met: bool,
    pub embedding: Option<Embedding>,
}

/// Searches all nonzero scalars for a `λ` with `rep(λ·b) ⊆ a`, where `rep`
/// maps each element to its half-set representative. Under the hypothesis
/// recorded in the outcome an embedding must exist; failing to find one
/// then aborts loudly.
pub fn embed_small_set(spec: &FieldSpec, a: &[FieldElem], b: &[FieldElem]) -> Result<EmbedOutcome> {
    check_subset_of_plus(spec, a)?;
    check_subset_of_plus(spec, b)?;
    let plus_len = spec.plus_set().len();
    let hypothesis_met = a.len() < plus_len && b.len() * (plus_len - a.len()) < plus_len;
    for lambda in scalar_order(spec) {
        let mut image: Vec<FieldElem> = b
            .iter()
            .map(|x| spec.plus_representative(&spec.mul(&lambda, x)))
            .collect();
        image.sort();
        if image.iter().all(|x| a.contains(x)) {
            return Ok(EmbedOutcome {
                hypothesis_met,
                embedding: Some(Embedding { lambda, image }),
            });
        }
    }
    if hypothesis_met {
        return Err(falsified(
            "no scaled copy of b lies inside a although the size bound holds",
        ));
    }
    Ok(EmbedOutcome {
        hypothesis_met,
        embedding: None,
    })
}

// ---------------------------------------------------------------------------
// Sylow fixed points (lexicographic products of prime difference graphs)
// ---------------------------------------------------------------------------

/// Values of the half-set of the prime field `F_p`: `1..=⌊p/2⌋`.
pub fn prime_plus_values(p: u32) -> Vec<u32> {
    (1..=p / 2).collect()
}

fn check_prime_subsets(p: u32, a_lists: &[Vec<u32>]) -> Result<()> {
    for a in a_lists {
        for &x in a {
            if x == 0 || x > p / 2 {
                return Err(input(format!("{x} is not in the half-set of F_{p}")));
            }
        }
    }
    Ok(())
}

/// The fixed point of the Sylow group determined by the difference sets
/// `A_1, …, A_m ⊆ F_p^+`: the lexicographic product of their difference
/// graphs. Its level in the lattice is `Σ |A_i|`.
pub fn sylow_fixed_point(p: u32, m: u32, a_lists: &[Vec<u32>]) -> Result<Graph> {
    if a_lists.len() != m as usize {
        return Err(input(format!(
            "expected {m} difference sets, got {}",
            a_lists.len()
        )));
    }
    check_prime_subsets(p, a_lists)?;
    let fp_field = FieldSpec::new(p, 1)?;
    let factors: Vec<Graph> = a_lists
        .iter()
        .map(|a| {
            let elems: Vec<FieldElem> = a.iter().map(|&x| fp_field.from_u32(x)).collect();
            difference_graph(&fp_field, &elems)
        })
        .collect::<Result<_>>()?;
    lexicographic_product(&factors)
}

/// The empty-prefix of a Sylow fixed point: the smallest index `i` (1-based)
/// with `A_i` nonempty, minus one. All-empty lists are a domain error.
pub fn empty_prefix(a_lists: &[Vec<u32>]) -> Result<usize> {
    a_lists
        .iter()
        .position(|a| !a.is_empty())
        .ok_or_else(|| input("empty-prefix of the all-empty list is undefined"))
}

/// Explicit sides of a `K_{p^{m-1-w},p^{m-1-w}}` inside the Sylow fixed
/// point with difference sets `a_lists` and empty-prefix `w`: fix the first
/// `w` coordinates to zero, put one realizable difference across coordinate
/// `w+1`, and let the remaining coordinates range freely. The sides are
/// construction metadata for biclique checks at any size.
pub fn sylow_biclique_sides(
    p: u32,
    m: u32,
    a_lists: &[Vec<u32>],
) -> Result<(Vec<usize>, Vec<usize>)> {
    let w = empty_prefix(a_lists)?;
    let x = *a_lists[w].iter().min().expect("nonempty by empty_prefix") as usize;
    let (p, m) = (p as usize, m as usize);
    let suffix = p.pow((m - 1 - w) as u32);
    // Tuples (0,…,0, c, *) with the first w coordinates zero: the base
    // index of the block with coordinate w+1 equal to c is c * p^{m-1-w}.
    let left: Vec<usize> = (0..suffix).map(|t| x * suffix + t).collect();
    let right: Vec<usize> = (0..suffix).collect();
    Ok((left, right))
}

/// Identifies an orbit of the Sylow lattice on `K_{p^m}` by which
/// coordinate it lives in (0-based) and which half-set difference it
/// realizes, read off the representative edge.
pub fn sylow_orbit_signature(p: u32, m: u32, host: &Graph, orbit: &EdgeOrbit) -> (usize, u32) {
    let (u, v) = host.edges()[orbit.representative];
    let (p, m) = (p as usize, m as usize);
    let (u, v) = (u as usize, v as usize);
    let coord = (0..m)
        .find(|&c| tuple_coord(u, c, p, m) != tuple_coord(v, c, p, m))
        .expect("distinct vertices differ somewhere");
    let a = tuple_coord(u, coord, p, m) as i64;
    let b = tuple_coord(v, coord, p, m) as i64;
    let d = (a - b).rem_euclid(p as i64) as u32;
    (coord, d.min(p as u32 - d))
}

/// Decomposes a fixed point of the Sylow lattice into its difference sets
/// `A_1, …, A_m`.
pub fn sylow_decompose(
    p: u32,
    m: u32,
    lattice: &FixedPointLattice,
    fp: &FixedPoint,
) -> Vec<Vec<u32>> {
    let mut a_lists = vec![Vec::new(); m as usize];
    for (i, orbit) in lattice.orbits().iter().enumerate() {
        if fp.orbit_set >> i & 1 == 1 {
            let (coord, diff) = sylow_orbit_signature(p, m, lattice.host(), orbit);
            a_lists[coord].push(diff);
        }
    }
    for a in &mut a_lists {
        a.sort_unstable();
    }
    a_lists
}

// ---------------------------------------------------------------------------
// Product fixed points (inhabited graphs of difference graphs)
// ---------------------------------------------------------------------------

/// The fixed point of the product rotation group determined by a connection
/// graph on the blocks and one difference set per block: the inhabited
/// graph of the difference graphs. Its level is `|E(c)| + Σ |A_i|`.
pub fn product_fixed_point(
    spec: &FieldSpec,
    c: &Graph,
    a_lists: &[Vec<FieldElem>],
) -> Result<Graph> {
    if a_lists.len() != c.vertex_count() {
        return Err(input(format!(
            "connection graph has {} blocks but {} difference sets were given",
            c.vertex_count(),
            a_lists.len()
        )));
    }
    let parts: Vec<Graph> = a_lists
        .iter()
        .map(|a| difference_graph(spec, a))
        .collect::<Result<_>>()?;
    inhabited_graph(c, &parts)
}

/// How one orbit of the product lattice on `K_{p^m}^d` sits in the block
/// structure: a full bipartite cross orbit between two blocks, or a
/// difference orbit inside one block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProductOrbitKind {
    Cross { i: usize, j: usize },
    Within { block: usize, diff: FieldElem },
}

pub fn product_orbit_signature(
    spec: &FieldSpec,
    host: &Graph,
    orbit: &EdgeOrbit,
) -> ProductOrbitKind {
    let q = spec.order();
    let (u, v) = host.edges()[orbit.representative];
    let (bu, bv) = (u as usize / q, v as usize / q);
    if bu != bv {
        ProductOrbitKind::Cross { i: bu, j: bv }
    } else {
        let eu = spec.elem_of_index(u as usize % q);
        let ev = spec.elem_of_index(v as usize % q);
        ProductOrbitKind::Within {
            block: bu,
            diff: spec.plus_representative(&spec.sub(&eu, &ev)),
        }
    }
}

/// Decomposes a fixed point of the product lattice into its connection
/// graph on the blocks and per-block difference sets.
pub fn product_decompose(
    spec: &FieldSpec,
    d: usize,
    lattice: &FixedPointLattice,
    fp: &FixedPoint,
) -> Result<(Graph, Vec<Vec<FieldElem>>)> {
    let mut cross = Vec::new();
    let mut a_lists = vec![Vec::new(); d];
    for (idx, orbit) in lattice.orbits().iter().enumerate() {
        if fp.orbit_set >> idx & 1 == 1 {
            match product_orbit_signature(spec, lattice.host(), orbit) {
                ProductOrbitKind::Cross { i, j } => cross.push((i, j)),
                ProductOrbitKind::Within { block, diff } => a_lists[block].push(diff),
            }
        }
    }
    for a in &mut a_lists {
        a.sort();
    }
    Ok((Graph::new(d, cross)?, a_lists))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_group_shapes() {
        let f5 = FieldSpec::new(5, 1).unwrap();
        let rot5 = rotation_group(&f5);
        assert_eq!(rot5.generators().len(), 1);
        assert_eq!(rot5.closure_order(10).unwrap(), 5);

        // The additive group of F_4 is Z_2 x Z_2.
        let f4 = FieldSpec::new(2, 2).unwrap();
        let rot4 = rotation_group(&f4);
        assert_eq!(rot4.generators().len(), 2);
        assert_eq!(rot4.closure_order(10).unwrap(), 4);
    }

    #[test]
    fn sylow_group_rejects_composite_characteristic() {
        assert!(sylow_group(4, 1).is_err());
        assert!(sylow_group(6, 1).is_err());
    }

    #[test]
    fn sylow_group_shapes() {
        // One generator on two points: the swap.
        let s2 = sylow_group(2, 1).unwrap();
        assert_eq!(s2.generators(), &[vec![1, 0]]);
        // j=0 gives one generator, j=1 gives two prefix-conditioned ones.
        let s4 = sylow_group(2, 2).unwrap();
        assert_eq!(s4.generators().len(), 3);
        assert_eq!(s4.degree(), 4);
        // Orders match p^1 · p^{p^1} · … · p^{p^{m-1}}.
        assert_eq!(s4.closure_order(20).unwrap(), 8);
        assert_eq!(sylow_group(2, 3).unwrap().closure_order(200).unwrap(), 128);
        assert_eq!(sylow_group(3, 2).unwrap().closure_order(200).unwrap(), 81);
    }

    #[test]
    fn rot11_orbits_and_lattice() {
        let f11 = FieldSpec::new(11, 1).unwrap();
        let k11 = Graph::complete(11).unwrap();
        let lattice = FixedPointLattice::new(&rotation_group(&f11), &k11).unwrap();
        assert_eq!(lattice.orbit_count(), 5);
        for orbit in lattice.orbits() {
            assert_eq!(orbit.edges.count_ones(), 11);
        }
        assert_eq!(lattice.level_counts(), vec![1, 5, 10, 10, 5, 1]);
        // Level 0 is the independent set, the full set is the clique.
        assert_eq!(lattice.graph_of(&lattice.point(0)), Graph::independent(11));
        assert_eq!(lattice.graph_of(&lattice.point(0b11111)), k11);
    }

    #[test]
    fn rot5_orbits_are_five_cycles() {
        let f5 = FieldSpec::new(5, 1).unwrap();
        let k5 = Graph::complete(5).unwrap();
        let lattice = FixedPointLattice::new(&rotation_group(&f5), &k5).unwrap();
        assert_eq!(lattice.orbit_count(), 2);
        for i in 0..2u32 {
            let g = lattice.graph_of(&lattice.point(1 << i));
            assert!(crate::graph::are_isomorphic(&g, &Graph::cycle(5).unwrap()).unwrap());
        }
    }

    #[test]
    fn trivial_group_gives_singleton_orbits() {
        let k3 = Graph::complete(3).unwrap();
        let orbits = edge_orbits(&GeneratedGroup::trivial(3), &k3).unwrap();
        assert_eq!(orbits.len(), 3);
        assert!(orbits.iter().all(|o| o.edges.count_ones() == 1));
    }

    #[test]
    fn orbits_partition_edges_and_points_are_closed() {
        for (p, m) in [(2u32, 2u32), (3, 1), (5, 1), (7, 1), (2, 3), (3, 2)] {
            let f = FieldSpec::new(p, m).unwrap();
            let host = Graph::complete(f.order()).unwrap();
            let group = rotation_group(&f);
            let lattice = FixedPointLattice::new(&group, &host).unwrap();
            let mut union = 0u128;
            let mut total = 0u32;
            for o in lattice.orbits() {
                assert_eq!(union & o.edges, 0, "orbits must be disjoint");
                union |= o.edges;
                total += o.edges.count_ones();
            }
            assert_eq!(total as usize, host.edge_count());
            // Applying any generator to a fixed point reproduces it.
            for fp in lattice.points() {
                let g = lattice.graph_of(&fp);
                for perm in group.generators() {
                    let perm: Vec<usize> = perm.iter().map(|&v| v as usize).collect();
                    let image = g.relabel(&perm).unwrap();
                    assert_eq!(image, g);
                }
            }
        }
    }

    #[test]
    fn orbit_sizes_divide_group_order() {
        for (p, m) in [
            (3u32, 1u32),
            (2, 2),
            (5, 1),
            (7, 1),
            (2, 3),
            (3, 2),
            (11, 1),
        ] {
            let f = FieldSpec::new(p, m).unwrap();
            let host = Graph::complete(f.order()).unwrap();
            let order = f.order();
            let lattice = FixedPointLattice::new(&rotation_group(&f), &host).unwrap();
            for o in lattice.orbits() {
                assert_eq!(order % o.edges.count_ones() as usize, 0);
            }
        }
        for (p, m, order) in [(2u32, 2u32, 8usize), (2, 3, 128), (3, 2, 81)] {
            let host = Graph::complete((p as usize).pow(m)).unwrap();
            let lattice = FixedPointLattice::new(&sylow_group(p, m).unwrap(), &host).unwrap();
            for o in lattice.orbits() {
                assert_eq!(order % o.edges.count_ones() as usize, 0);
            }
        }
    }

    #[test]
    fn rejects_non_automorphism_generators() {
        let path = Graph::path(5).unwrap();
        let f5 = FieldSpec::new(5, 1).unwrap();
        assert!(edge_orbits(&rotation_group(&f5), &path).is_err());
    }

    #[test]
    fn difference_graph_cases() {
        let f5 = FieldSpec::new(5, 1).unwrap();
        let one = vec![f5.from_u32(1)];
        let c = difference_graph(&f5, &one).unwrap();
        assert!(crate::graph::are_isomorphic(&c, &Graph::cycle(5).unwrap()).unwrap());
        // A = F^+ gives the complete graph.
        let full = f5.plus_set();
        assert_eq!(
            difference_graph(&f5, &full).unwrap(),
            Graph::complete(5).unwrap()
        );
        // Characteristic 2: x = -x, so a singleton gives a perfect matching.
        let f4 = FieldSpec::new(2, 2).unwrap();
        let x1 = vec![f4.elem_of_index(1)];
        let m = difference_graph(&f4, &x1).unwrap();
        assert_eq!(m.degree_sequence(), vec![1, 1, 1, 1]);
        // Not in the half-set: rejected.
        let bad = vec![f5.from_u32(3)];
        assert!(difference_graph(&f5, &bad).is_err());
    }

    #[test]
    fn difference_graph_regularity() {
        // 2|A|-regular for odd p, |A|-regular for p = 2.
        for (p, m) in [
            (3u32, 1u32),
            (5, 1),
            (7, 1),
            (11, 1),
            (3, 2),
            (2, 2),
            (2, 3),
        ] {
            let f = FieldSpec::new(p, m).unwrap();
            let plus = f.plus_set();
            for size in 0..=plus.len().min(3) {
                let a: Vec<FieldElem> = plus.iter().take(size).cloned().collect();
                let g = difference_graph(&f, &a).unwrap();
                let expected = if p == 2 { size } else { 2 * size };
                assert_eq!(g.regular_degree(), Some(expected), "p={p} m={m} |A|={size}");
            }
        }
    }

    #[test]
    fn difference_iso_cases() {
        let f5 = FieldSpec::new(5, 1).unwrap();
        let a = vec![f5.from_u32(1)];
        let b = vec![f5.from_u32(2)];
        // 2 · {1,4} = {2,3}.
        assert_eq!(difference_iso(&f5, &a, &b).unwrap(), Some(f5.from_u32(2)));
        assert_eq!(difference_iso(&f5, &a, &a).unwrap(), Some(f5.from_u32(1)));
        let f7 = FieldSpec::new(7, 1).unwrap();
        let a7 = vec![f7.from_u32(1)];
        let b7 = vec![f7.from_u32(1), f7.from_u32(2)];
        assert_eq!(difference_iso(&f7, &a7, &b7).unwrap(), None);
    }

    #[test]
    fn difference_iso_implies_graph_isomorphism() {
        // All subset pairs for the fields where the generic isomorphism
        // checker runs (hosts up to 8 vertices).
        for (p, m) in [(3u32, 1u32), (2, 2), (5, 1), (7, 1), (2, 3)] {
            let f = FieldSpec::new(p, m).unwrap();
            let plus = f.plus_set();
            let subsets: Vec<Vec<FieldElem>> = (0..1usize << plus.len())
                .map(|mask| {
                    (0..plus.len())
                        .filter(|i| mask >> i & 1 == 1)
                        .map(|i| plus[i].clone())
                        .collect()
                })
                .collect();
            for a in &subsets {
                for b in &subsets {
                    if difference_iso(&f, a, b).unwrap().is_some() {
                        let ga = difference_graph(&f, a).unwrap();
                        let gb = difference_graph(&f, b).unwrap();
                        assert!(
                            crate::graph::are_isomorphic(&ga, &gb).unwrap(),
                            "{p}^{m}: {a:?} vs {b:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn embed_small_set_cases() {
        let f11 = FieldSpec::new(11, 1).unwrap();
        let a: Vec<FieldElem> = [1u32, 2, 3, 4].iter().map(|&x| f11.from_u32(x)).collect();
        let b = vec![f11.from_u32(5)];
        let out = embed_small_set(&f11, &a, &b).unwrap();
        assert!(out.hypothesis_met);
        let emb = out.embedding.unwrap();
        assert!(emb.image.iter().all(|x| a.contains(x)));

        // Empty b embeds trivially.
        let out = embed_small_set(&f11, &a, &[]).unwrap();
        assert_eq!(out.embedding.unwrap().image, Vec::<FieldElem>::new());

        // |b| = 3 >= |F^+|/(|F^+|-|a|) = 3: hypothesis fails.
        let f7 = FieldSpec::new(7, 1).unwrap();
        let a7: Vec<FieldElem> = [1u32, 2].iter().map(|&x| f7.from_u32(x)).collect();
        let b7: Vec<FieldElem> = [1u32, 2, 3].iter().map(|&x| f7.from_u32(x)).collect();
        let out = embed_small_set(&f7, &a7, &b7).unwrap();
        assert!(!out.hypothesis_met);
    }

    #[test]
    fn sylow_fixed_point_cases() {
        // (2,2,[{1},∅]) is K_2 ∘ IS_2 = K_{2,2}.
        let g = sylow_fixed_point(2, 2, &[vec![1], vec![]]).unwrap();
        assert!(
            crate::graph::are_isomorphic(&g, &Graph::complete_bipartite(2, 2).unwrap()).unwrap()
        );
        let g = sylow_fixed_point(2, 2, &[vec![], vec![]]).unwrap();
        assert_eq!(g, Graph::independent(4));
        // Differences ±1 cover all of F_3*.
        let g = sylow_fixed_point(3, 1, &[vec![1]]).unwrap();
        assert_eq!(g, Graph::complete(3).unwrap());
        assert!(sylow_fixed_point(3, 1, &[vec![2]]).is_err());
    }

    #[test]
    fn sylow_biclique_sides_are_witnesses() {
        // A fixed point with empty-prefix w contains a biclique with sides
        // of size p^{m-1-w}, located purely from the construction data.
        for (p, m) in [(2u32, 2u32), (2, 3), (3, 2)] {
            let plus = prime_plus_values(p);
            for a_lists in all_a_lists(&plus, m as usize) {
                if a_lists.iter().all(|a| a.is_empty()) {
                    continue;
                }
                let g = sylow_fixed_point(p, m, &a_lists).unwrap();
                let w = empty_prefix(&a_lists).unwrap();
                let (left, right) = sylow_biclique_sides(p, m, &a_lists).unwrap();
                let expect = (p as usize).pow(m - 1 - w as u32);
                assert_eq!(left.len(), expect);
                assert_eq!(right.len(), expect);
                assert!(crate::graph::is_biclique_witness(&g, &left, &right));
            }
        }
    }

    #[test]
    fn orbit_sign_law() {
        // (-1)^{|E(F)|} = (-1)^{level(F)} mod p on every fixed point: each
        // orbit has p-power size, so edge parity matches level parity for
        // odd p and is immaterial for p = 2.
        for (p, m) in [(3u32, 1u32), (5, 1), (7, 1), (3, 2), (11, 1)] {
            let f = FieldSpec::new(p, m).unwrap();
            let host = Graph::complete(f.order()).unwrap();
            let lattice = FixedPointLattice::new(&rotation_group(&f), &host).unwrap();
            for fp in lattice.points() {
                let edge_sign: i64 = if fp.edges.count_ones() % 2 == 0 {
                    1
                } else {
                    -1
                };
                let level_sign: i64 = if fp.level % 2 == 0 { 1 } else { -1 };
                assert_eq!(
                    edge_sign.rem_euclid(p as i64),
                    level_sign.rem_euclid(p as i64),
                    "{p}^{m} point {:#b}",
                    fp.orbit_set
                );
            }
        }
    }

    #[test]
    fn empty_prefix_cases() {
        assert_eq!(empty_prefix(&[vec![1], vec![]]).unwrap(), 0);
        assert_eq!(empty_prefix(&[vec![], vec![1]]).unwrap(), 1);
        assert_eq!(
            empty_prefix(&[vec![], vec![], vec![1], vec![1]]).unwrap(),
            2
        );
        assert!(empty_prefix(&[vec![], vec![]]).is_err());
    }

    #[test]
    fn sylow_lattice_matches_closed_form() {
        // Every fixed point of the Sylow lattice on K_4 is a lexicographic
        // product of prime difference graphs, and decomposition round-trips.
        let host = Graph::complete(4).unwrap();
        let lattice = FixedPointLattice::new(&sylow_group(2, 2).unwrap(), &host).unwrap();
        assert_eq!(lattice.orbit_count(), 2);
        for fp in lattice.points() {
            let a_lists = sylow_decompose(2, 2, &lattice, &fp);
            let g = sylow_fixed_point(2, 2, &a_lists).unwrap();
            assert_eq!(g, lattice.graph_of(&fp));
            assert_eq!(
                fp.level as usize,
                a_lists.iter().map(|a| a.len()).sum::<usize>()
            );
        }
    }

    #[test]
    fn sylow_orbit_count_k9() {
        let host = Graph::complete(9).unwrap();
        let lattice = FixedPointLattice::new(&sylow_group(3, 2).unwrap(), &host).unwrap();
        assert_eq!(lattice.orbit_count(), 2);
    }

    #[test]
    fn product_group_and_orbits() {
        let f3 = FieldSpec::new(3, 1).unwrap();
        let rot3 = rotation_group(&f3);
        let prod = product_group(&[&rot3, &rot3]);
        assert_eq!(prod.degree(), 6);
        assert_eq!(prod.closure_order(20).unwrap(), 9);
        assert_eq!(prod.p_power(), Some(3));
        // K_3 ▽ K_3 = K_6: one orbit per block plus one cross orbit.
        let k6 = Graph::complete(6).unwrap();
        let lattice = FixedPointLattice::new(&prod, &k6).unwrap();
        assert_eq!(lattice.orbit_count(), 3);
        // product of a single group is the group itself.
        let single = product_group(&[&rot3]);
        assert_eq!(single.degree(), 3);
        assert_eq!(single.closure_order(10).unwrap(), 3);
    }

    #[test]
    fn product_fixed_point_cases() {
        let f3 = FieldSpec::new(3, 1).unwrap();
        let one = vec![f3.from_u32(1)];
        // (IS_2, [{1},∅]) → K_3 ⊎ IS_3.
        let g = product_fixed_point(&f3, &Graph::independent(2), &[one.clone(), vec![]]).unwrap();
        let expected = Graph::complete(3)
            .unwrap()
            .disjoint_union(&Graph::independent(3))
            .unwrap();
        assert_eq!(g, expected);
        // (K_2, [∅,∅]) → K_{3,3}.
        let g = product_fixed_point(&f3, &Graph::complete(2).unwrap(), &[vec![], vec![]]).unwrap();
        assert_eq!(g, Graph::complete_bipartite(3, 3).unwrap());
    }

    #[test]
    fn product_decompose_round_trips() {
        let f3 = FieldSpec::new(3, 1).unwrap();
        let rot3 = rotation_group(&f3);
        let prod = product_group(&[&rot3, &rot3]);
        let k6 = Graph::complete(6).unwrap();
        let lattice = FixedPointLattice::new(&prod, &k6).unwrap();
        for fp in lattice.points() {
            let (c, a_lists) = product_decompose(&f3, 2, &lattice, &fp).unwrap();
            let g = product_fixed_point(&f3, &c, &a_lists).unwrap();
            assert_eq!(g, lattice.graph_of(&fp));
            let level = c.edge_count() + a_lists.iter().map(|a| a.len()).sum::<usize>();
            assert_eq!(fp.level as usize, level);
        }
    }

    #[test]
    fn locate_round_trips() {
        let f7 = FieldSpec::new(7, 1).unwrap();
        let host = Graph::complete(7).unwrap();
        let lattice = FixedPointLattice::new(&rotation_group(&f7), &host).unwrap();
        for fp in lattice.points() {
            let g = lattice.graph_of(&fp);
            assert_eq!(lattice.locate(&g), Some(fp));
        }
        assert_eq!(lattice.locate(&Graph::path(7).unwrap()), None);
    }

    #[test]
    fn forward_revolution_embeds_sylow_points() {
        // Shifting the difference sets right by j and applying the forward
        // revolution j times lands inside the original fixed point.
        for (p, m) in [(2u32, 2u32), (2, 3), (3, 2)] {
            let plus = prime_plus_values(p);
            let m_us = m as usize;
            let all_lists = all_a_lists(&plus, m_us);
            for a_lists in &all_lists {
                let original = sylow_fixed_point(p, m, a_lists).unwrap();
                for j in 1..m_us {
                    let mut shifted: Vec<Vec<u32>> = vec![Vec::new(); j];
                    shifted.extend(a_lists[..m_us - j].iter().cloned());
                    let pushed = sylow_fixed_point(p, m, &shifted).unwrap();
                    // Apply the forward revolution j times to the original.
                    let perm = crate::graph::forward_revolution(p as usize, m_us).unwrap();
                    let mut image = original.clone();
                    for _ in 0..j {
                        image = image.relabel(&perm).unwrap();
                    }
                    for &(u, v) in pushed.edges() {
                        assert!(
                            image.has_edge(u as usize, v as usize),
                            "p={p} m={m} a={a_lists:?} j={j}"
                        );
                    }
                }
            }
        }
    }

    fn all_a_lists(plus: &[u32], m: usize) -> Vec<Vec<Vec<u32>>> {
        let subsets: Vec<Vec<u32>> = (0..1usize << plus.len())
            .map(|mask| {
                (0..plus.len())
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| plus[i])
                    .collect()
            })
            .collect();
        let mut out: Vec<Vec<Vec<u32>>> = vec![Vec::new()];
        for _ in 0..m {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    subsets.iter().map(move |s| {
                        let mut next = prefix.clone();
                        next.push(s.clone());
                        next
                    })
                })
                .collect();
        }
        out
    }
}
