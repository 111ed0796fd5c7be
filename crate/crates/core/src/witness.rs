//! Witness searches: the avalanche closure over difference graphs, the
//! square-root win-win witness on prime powers, the Sylow biclique witness,
//! and the trivial/concentrated/scattered classification with its shifted
//! property extraction.
//!
//! Every theorem hypothesis is checked at run time, every certificate is
//! re-derived by an independent checker, and a hypothesis-satisfied search
//! that finds nothing aborts loudly: these searches double as machine
//! verification of the constructions they implement.

use num_bigint::BigInt;
use serde::Serialize;

use crate::altenum::{
    alt_enum_modp, alt_enum_naive, duality_witness, exact_mod_p, MAX_NAIVE_EDGES,
};
use crate::error::{capacity, falsified, hypothesis, input, Result};
use crate::gf::{FieldElem, FieldSpec};
use crate::graph::{contains_biclique, disjoint_union_all, treewidth_exact, Graph};
use crate::group::{
    difference_graph, embed_small_set, product_decompose, product_group, rotation_group,
    sylow_decompose, sylow_group, Embedding, FixedPoint, FixedPointLattice, FixedPointRecord,
};
use crate::property::{PropertyHandle, PropertySpec};

/// Largest prime-power divisor of `n`, with `q(1) = 1`.
pub fn q_largest_prime_power(n: u64) -> u64 {
    debug_assert!(n >= 1);
    let mut best = 1u64;
    let mut rest = n;
    let mut p = 2u64;
    while p * p <= rest {
        if rest.is_multiple_of(p) {
            let mut power = 1u64;
            while rest.is_multiple_of(p) {
                rest /= p;
                power *= p;
            }
            best = best.max(power);
        }
        p += 1;
    }
    if rest > 1 {
        best = best.max(rest);
    }
    best
}

fn isqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    while r * r > n {
        r -= 1;
    }
    r
}

fn require_verified_monotone(h: &PropertyHandle) -> Result<()> {
    if !h.verified_edge_monotone() {
        return Err(hypothesis(format!(
            "property {:?} is not verified edge-monotone at n <= 6",
            h.name()
        )));
    }
    Ok(())
}

/// Nontriviality of a verified edge-monotone property on `k`, by the
/// two-extremes criterion.
fn nontrivial_on(h: &PropertyHandle, k: usize) -> Result<bool> {
    Ok(h.evaluate(&Graph::independent(k)) && !h.evaluate(&Graph::complete(k)?))
}

// ---------------------------------------------------------------------------
// Avalanche closure
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct AvalancheEntry {
    pub b: Vec<FieldElem>,
    pub embedding: Embedding,
}

/// Result of a verified avalanche: from one satisfied difference graph
/// `C^a`, every `C^b` with `|b|` below the bound `t = |F^+|/(|F^+|-|a|)` is
/// confirmed satisfied, each with an explicit scaled embedding of `b` into
/// `a`.
#[derive(Clone, Debug)]
pub struct AvalancheReport {
    pub bound_num: usize,
    pub bound_den: usize,
    pub entries: Vec<AvalancheEntry>,
}

pub fn avalanche_closure(
    h: &PropertyHandle,
    spec: &FieldSpec,
    a: &[FieldElem],
) -> Result<AvalancheReport> {
    require_verified_monotone(h)?;
    let plus = spec.plus_set();
    if plus.len() > 20 {
        return Err(capacity(
            "avalanche enumeration capped at 20 half-set elements",
        ));
    }
    if a.len() >= plus.len() {
        return Err(input(
            "the seed set must be a proper subset of the half-set",
        ));
    }
    let seed = difference_graph(spec, a)?;
    if !h.evaluate(&seed) {
        return Err(hypothesis(format!(
            "property {:?} fails on the seed difference graph",
            h.name()
        )));
    }
    let bound_num = plus.len();
    let bound_den = plus.len() - a.len();
    let mut entries = Vec::new();
    for mask in 0u64..1 << plus.len() {
        let b: Vec<FieldElem> = (0..plus.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| plus[i].clone())
            .collect();
        if b.len() * bound_den >= bound_num {
            continue;
        }
        if !h.evaluate(&difference_graph(spec, &b)?) {
            return Err(falsified(format!(
                "edge-monotone property {:?} holds on C^a but fails below the avalanche bound",
                h.name()
            )));
        }
        let outcome = embed_small_set(spec, a, &b)?;
        debug_assert!(outcome.hypothesis_met);
        let embedding = outcome
            .embedding
            .ok_or_else(|| falsified("guaranteed embedding missing"))?;
        entries.push(AvalancheEntry { b, embedding });
    }
    Ok(AvalancheReport {
        bound_num,
        bound_den,
        entries,
    })
}

// ---------------------------------------------------------------------------
// Witness reports
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessKind {
    Duality,
    AvalancheMinimal,
    SylowBiclique,
    Concentrated,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", content = "value", rename_all = "kebab-case")]
pub enum Certificate {
    RegularDegree(usize),
    Biclique(usize),
    ExactTreewidth(usize),
}

fn serialize_opt_bigint<S: serde::Serializer>(
    v: &Option<BigInt>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(b) => s.serialize_some(&b.to_string()),
        None => s.serialize_none(),
    }
}

/// A nonvanishing fixed point together with its machine-checked structural
/// certificate.
#[derive(Clone, Debug, Serialize)]
pub struct WitnessReport {
    pub kind: WitnessKind,
    pub property: String,
    pub p: u32,
    pub host_vertices: usize,
    pub fixed_point: FixedPointRecord,
    #[serde(skip)]
    pub graph: Graph,
    pub level: u32,
    /// Nonzero residue of the alternating enumerator mod p.
    pub residue: u32,
    pub certificate: Certificate,
    pub claimed_treewidth_lower_bound: usize,
    /// Exact value from the naive engine, present whenever the witness has
    /// at most 25 edges; always congruent to `residue` mod p.
    #[serde(serialize_with = "serialize_opt_bigint")]
    pub naive_value: Option<BigInt>,
    /// For Sylow witnesses: the empty-prefix of the difference-set list.
    pub empty_prefix: Option<usize>,
    /// For Sylow witnesses: the difference sets `A_1, …, A_m` as sorted
    /// element strings.
    pub sylow_sets: Option<Vec<Vec<String>>>,
}

#[allow(clippy::too_many_arguments)]
fn build_report(
    kind: WitnessKind,
    h: &PropertyHandle,
    lattice: &FixedPointLattice,
    fp: FixedPoint,
    residue: u32,
    certificate: Certificate,
    claimed_treewidth_lower_bound: usize,
    empty_prefix: Option<usize>,
    sylow_sets: Option<Vec<Vec<String>>>,
) -> Result<WitnessReport> {
    let p = lattice
        .p()
        .ok_or_else(|| input("witness lattice must be a p-group lattice"))?;
    if residue == 0 {
        return Err(falsified("witness residue vanishes"));
    }
    let graph = lattice.graph_of(&fp);
    let naive_value = if graph.edge_count() <= MAX_NAIVE_EDGES {
        let exact = alt_enum_naive(h, &graph)?;
        if exact_mod_p(&exact, p) != residue {
            return Err(falsified(format!(
                "naive engine disagrees with the mod-{p} engine on a witness"
            )));
        }
        Some(exact)
    } else {
        None
    };
    match certificate {
        Certificate::RegularDegree(d) => {
            if graph.regular_degree() != Some(d) {
                return Err(falsified(format!("witness is not {d}-regular")));
            }
        }
        Certificate::Biclique(a) => {
            if !contains_biclique(&graph, a)? {
                return Err(falsified(format!(
                    "witness contains no biclique of size {a}"
                )));
            }
        }
        Certificate::ExactTreewidth(t) => {
            if treewidth_exact(&graph)? != t {
                return Err(falsified("witness treewidth certificate is wrong"));
            }
        }
    }
    Ok(WitnessReport {
        kind,
        property: h.name().to_string(),
        p,
        host_vertices: lattice.host().vertex_count(),
        fixed_point: lattice.record(&fp),
        graph,
        level: fp.level,
        residue,
        certificate,
        claimed_treewidth_lower_bound,
        naive_value,
        empty_prefix,
        sylow_sets,
    })
}

impl WitnessReport {
    /// Confirms the claimed treewidth lower bound with the exact algorithm
    /// when the witness is small enough; aborts if the claim is wrong.
    pub fn confirm_treewidth(&self) -> Result<Option<usize>> {
        if self.graph.vertex_count() > 11 {
            return Ok(None);
        }
        let tw = treewidth_exact(&self.graph)?;
        if tw < self.claimed_treewidth_lower_bound {
            return Err(falsified(format!(
                "exact treewidth {tw} is below the claimed bound {}",
                self.claimed_treewidth_lower_bound
            )));
        }
        Ok(Some(tw))
    }
}

/// Minimal failing level of a lattice and the smallest failing point there:
/// the first level at which some fixed point fails the property, all lower
/// levels passing. `None` when every point satisfies the property.
fn minimal_failing_point(
    h: &PropertyHandle,
    lattice: &FixedPointLattice,
) -> Option<(u32, FixedPoint)> {
    for level in 0..=lattice.orbit_count() as u32 {
        for fp in lattice.points_of_level(level) {
            if !h.evaluate(&lattice.graph_of(&fp)) {
                return Some((level, fp));
            }
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Prime-power win-win witness
// ---------------------------------------------------------------------------

/// Produces a nonvanishing fixed point of the rotation lattice on
/// `K_{p^m}` of level at least `⌊|F^+|^{1/2}⌋`, for any verified
/// edge-monotone property nontrivial on `p^m`.
///
/// Win-win: if some high-level fixed point satisfies the property, the
/// avalanche forces all low levels true and the minimal failing point is
/// both deep and nonvanishing; otherwise the duality transform guarantees a
/// nonvanishing point above the threshold directly.
pub fn prime_power_witness(h: &PropertyHandle, p: u32, m: u32) -> Result<WitnessReport> {
    require_verified_monotone(h)?;
    let spec = FieldSpec::new(p, m)?;
    let k = spec.order();
    if k > 13 {
        return Err(capacity(
            "prime-power witness verification capped at p^m <= 13",
        ));
    }
    if !nontrivial_on(h, k)? {
        return Err(hypothesis(format!(
            "property {:?} is trivial on {k}",
            h.name()
        )));
    }
    let host = Graph::complete(k)?;
    let lattice = FixedPointLattice::new(&rotation_group(&spec), &host)?;
    let n = lattice.orbit_count();
    let d = isqrt(n);
    let high_satisfied = lattice
        .points()
        .filter(|fp| fp.level as usize >= n - d)
        .any(|fp| h.evaluate(&lattice.graph_of(&fp)));
    let (kind, fp, residue) = if high_satisfied {
        let (level, fp) = minimal_failing_point(h, &lattice)
            .ok_or_else(|| falsified("nontrivial property satisfies every fixed point"))?;
        if (level as usize) < d {
            return Err(falsified(format!(
                "avalanche bound violated: minimal failing level {level} below {d}"
            )));
        }
        let residue = alt_enum_modp(h, &lattice, &fp)?;
        (WitnessKind::AvalancheMinimal, fp, residue)
    } else {
        let (fp, residue) = duality_witness(h, &lattice, d)?;
        (WitnessKind::Duality, fp, residue)
    };
    let degree = lattice
        .graph_of(&fp)
        .regular_degree()
        .ok_or_else(|| falsified("difference-graph fixed point is not regular"))?;
    build_report(
        kind,
        h,
        &lattice,
        fp,
        residue,
        Certificate::RegularDegree(degree),
        fp.level as usize,
        None,
        None,
    )
}

// ---------------------------------------------------------------------------
// Sylow biclique witness
// ---------------------------------------------------------------------------

/// Produces a nonvanishing fixed point of the Sylow lattice on `K_{p^m}`
/// (`m >= 2`) whose empty-prefix is zero, hence containing
/// `K_{p^{m-1},p^{m-1}}` as a subgraph, for any verified edge-monotone
/// property nontrivial on `p^m`.
pub fn sylow_biclique_witness(h: &PropertyHandle, p: u32, m: u32) -> Result<WitnessReport> {
    require_verified_monotone(h)?;
    if m < 2 {
        return Err(input("the biclique witness needs m >= 2"));
    }
    let k = (p as u64)
        .checked_pow(m)
        .filter(|&k| k <= 16)
        .ok_or_else(|| capacity("sylow witness capped at p^m <= 16"))? as usize;
    if !nontrivial_on(h, k)? {
        return Err(hypothesis(format!(
            "property {:?} is trivial on {k}",
            h.name()
        )));
    }
    let host = Graph::complete(k)?;
    let lattice = FixedPointLattice::new(&sylow_group(p, m)?, &host)?;
    let (level, _) = minimal_failing_point(h, &lattice)
        .ok_or_else(|| falsified("nontrivial property satisfies every fixed point"))?;
    // Among failing points at the minimal level there must be one whose
    // empty-prefix is zero: otherwise the forward revolution would push
    // every failing point onto a satisfied one of the same level, which is
    // impossible for an edge-monotone property.
    let chosen = lattice
        .points_of_level(level)
        .find(|fp| {
            let a_lists = sylow_decompose(p, m, &lattice, fp);
            !h.evaluate(&lattice.graph_of(fp))
                && matches!(crate::group::empty_prefix(&a_lists), Ok(0))
        })
        .ok_or_else(|| falsified("no failing point of minimal level has empty-prefix zero"))?;
    let a_lists = sylow_decompose(p, m, &lattice, &chosen);
    let residue = alt_enum_modp(h, &lattice, &chosen)?;
    let biclique = (p as usize).pow(m - 1);
    build_report(
        WitnessKind::SylowBiclique,
        h,
        &lattice,
        chosen,
        residue,
        Certificate::Biclique(biclique),
        biclique,
        Some(crate::group::empty_prefix(&a_lists)?),
        Some(
            a_lists
                .iter()
                .map(|a| a.iter().map(|x| x.to_string()).collect())
                .collect(),
        ),
    )
}

// ---------------------------------------------------------------------------
// Classification: trivial / concentrated / scattered
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize)]
pub enum KVerdict {
    Trivial,
    Concentrated(WitnessReport),
    Scattered {
        /// The extracted graph on `k - q(k)` vertices.
        h: Graph,
        /// `(Φ - H)`, nontrivial on `q(k)`.
        shifted: PropertySpec,
    },
}

#[derive(Debug, Serialize)]
pub struct KClassification {
    pub k: usize,
    pub q: usize,
    pub verdict: KVerdict,
}

/// Splits a prime power into `(p, a)`; `None` if the input is not one.
pub fn prime_power_parts(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q)
        .find(|d| q.is_multiple_of(*d))
        .expect("q >= 2 has a divisor");
    let mut rest = q;
    let mut a = 0u32;
    while rest.is_multiple_of(p) {
        rest /= p;
        a += 1;
    }
    (rest == 1).then_some((p, a))
}

/// Classifies a verified edge-monotone property on `k`: trivial,
/// concentrated (a nonvanishing fixed point containing `K_{q(k),q(k)}`), or
/// scattered (a graph `H` on `k - q(k)` vertices with `(Φ - H)` nontrivial
/// on `q(k)`).
///
/// The decision follows the minimal failing point of the product rotation
/// lattice on `K_{q(k)}^{k/q(k)}` (ascending level, then smallest orbit
/// set): a connection edge there gives the concentrated witness, no
/// connection edge gives the scattered extraction.
pub fn classify_k(h: &PropertyHandle, k: usize) -> Result<KClassification> {
    require_verified_monotone(h)?;
    if k == 0 {
        return Err(input("classification needs k >= 1"));
    }
    let q = q_largest_prime_power(k as u64) as usize;
    let d = k / q;
    if k > 12 || q > 5 || d > 3 {
        return Err(capacity(format!(
            "classification capped at k <= 12, q(k) <= 5, k/q(k) <= 3; got k={k}, q={q}, d={d}"
        )));
    }
    if !nontrivial_on(h, k)? {
        return Ok(KClassification {
            k,
            q,
            verdict: KVerdict::Trivial,
        });
    }
    let (p, a) = prime_power_parts(q as u64).expect("q(k) is a prime power for k >= 2");
    let spec = FieldSpec::new(p as u32, a)?;
    let rot = rotation_group(&spec);
    let factors: Vec<&crate::group::GeneratedGroup> = (0..d).map(|_| &rot).collect();
    let group = product_group(&factors);
    let host = Graph::complete(k)?;
    let lattice = FixedPointLattice::new(&group, &host)?;
    let (_, fp) = minimal_failing_point(h, &lattice)
        .ok_or_else(|| falsified("nontrivial property satisfies every fixed point"))?;
    let (connection, a_lists) = product_decompose(&spec, d, &lattice, &fp)?;
    if connection.edge_count() > 0 {
        let residue = alt_enum_modp(h, &lattice, &fp)?;
        let report = build_report(
            WitnessKind::Concentrated,
            h,
            &lattice,
            fp,
            residue,
            Certificate::Biclique(q),
            q,
            None,
            None,
        )?;
        return Ok(KClassification {
            k,
            q,
            verdict: KVerdict::Concentrated(report),
        });
    }
    // No connection edges: the failing point is a disjoint union of
    // difference graphs. Pull the first nonempty block to the front and
    // shift by the union of the others.
    let x = a_lists
        .iter()
        .position(|a| !a.is_empty())
        .ok_or_else(|| falsified("failing point of positive level has no nonempty block"))?;
    let rest: Vec<Graph> = a_lists
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != x)
        .map(|(_, a)| difference_graph(&spec, a))
        .collect::<Result<_>>()?;
    let hgraph = disjoint_union_all(&rest)?;
    let shifted = h.spec().shift(&hgraph);
    let shifted_handle = PropertyHandle::new(shifted.clone());
    if !shifted_handle.evaluate(&Graph::independent(q)) {
        return Err(falsified(
            "shifted property fails on the independent set although all lower levels pass",
        ));
    }
    if shifted_handle.evaluate(&Graph::complete(q)?) {
        return Err(falsified("shifted property holds on the clique"));
    }
    Ok(KClassification {
        k,
        q,
        verdict: KVerdict::Scattered { h: hgraph, shifted },
    })
}

/// For a property scattered on `k`, the shifted property `(Φ - H_m)` for
/// the lexicographically first graph `H_m` (order on sorted edge lists) on
/// `q?(m) - m` vertices making the shift nontrivial on `m = q(k)`, where
/// `q?(m)` is the smallest scattered integer whose largest prime-power
/// divisor is `m`. Returns `None` when `k` is not scattered.
pub fn scattered_property_probe(
    h: &PropertyHandle,
    k: usize,
) -> Result<Option<(Graph, PropertySpec)>> {
    let classification = classify_k(h, k)?;
    if !matches!(classification.verdict, KVerdict::Scattered { .. }) {
        return Ok(None);
    }
    let m = classification.q;
    let q_inverse = (m..=k)
        .filter(|&kp| q_largest_prime_power(kp as u64) as usize == m)
        .find(|&kp| {
            matches!(
                classify_k(h, kp),
                Ok(KClassification {
                    verdict: KVerdict::Scattered { .. },
                    ..
                })
            )
        })
        .ok_or_else(|| falsified("k is scattered but no scattered k' <= k was found"))?;
    let hv = q_inverse - m;
    if hv > 4 {
        return Err(capacity(format!(
            "probe shift graphs capped at 4 vertices, got {hv}"
        )));
    }
    for hgraph in graphs_in_lex_edge_order(hv) {
        let shifted = h.spec().shift(&hgraph);
        let handle = PropertyHandle::new(shifted.clone());
        // The shift of a verified edge-monotone property is edge-monotone,
        // so nontriviality needs only the two extremes.
        if handle.evaluate(&Graph::independent(m)) && !handle.evaluate(&Graph::complete(m)?) {
            return Ok(Some((hgraph, shifted)));
        }
    }
    Err(falsified(
        "scattered verdict but no shift graph yields a nontrivial property",
    ))
}

/// All labeled graphs on `n` vertices, ordered by their sorted edge lists
/// compared as sequences of pairs.
fn graphs_in_lex_edge_order(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let mut graphs: Vec<Graph> = (0..1usize << pairs.len())
        .map(|mask| {
            let edges = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &p)| p);
            Graph::new(n, edges).expect("within caps")
        })
        .collect();
    graphs.sort_by(|a, b| a.edges().cmp(b.edges()));
    graphs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::property::{builtin, parse_property, Atom, Expr, PropertyHandle};

    fn monotone_handle(text: &str) -> PropertyHandle {
        PropertyHandle::new(builtin(text).unwrap())
    }

    #[test]
    fn q_values() {
        assert_eq!(q_largest_prime_power(1), 1);
        assert_eq!(q_largest_prime_power(12), 4);
        assert_eq!(q_largest_prime_power(360), 9);
        assert_eq!(q_largest_prime_power(7), 7);
        assert_eq!(q_largest_prime_power(100), 25);
    }

    #[test]
    fn avalanche_on_degree_bound() {
        // max_degree <= 3/4 n holds on every 8-regular difference graph of
        // F_11, so any size-4 seed starts a full avalanche with bound 5.
        let h = monotone_handle("max_degree <= 3/4 n");
        let f11 = FieldSpec::new(11, 1).unwrap();
        let plus = f11.plus_set();
        let a: Vec<FieldElem> = plus[..4].to_vec();
        let report = avalanche_closure(&h, &f11, &a).unwrap();
        assert_eq!((report.bound_num, report.bound_den), (5, 1));
        // Every proper subset of the half-set is below the bound.
        assert_eq!(report.entries.len(), 31);
        for entry in &report.entries {
            assert!(entry.embedding.image.iter().all(|x| a.contains(x)));
        }
    }

    #[test]
    fn avalanche_trivial_bounds() {
        // Empty seed over F_5: bound 2/2 = 1, only b = ∅ qualifies.
        let h = monotone_handle("bipartite");
        let f5 = FieldSpec::new(5, 1).unwrap();
        let report = avalanche_closure(&h, &f5, &[]).unwrap();
        assert_eq!((report.bound_num, report.bound_den), (2, 2));
        assert_eq!(report.entries.len(), 1);
        assert!(report.entries[0].b.is_empty());

        // A property holding everywhere closes every set below the bound.
        let h = PropertyHandle::new(crate::property::always_true());
        let f7 = FieldSpec::new(7, 1).unwrap();
        let a: Vec<FieldElem> = f7.plus_set()[..2].to_vec();
        let report = avalanche_closure(&h, &f7, &a).unwrap();
        assert_eq!((report.bound_num, report.bound_den), (3, 1));
        // All subsets of the 3-element half-set with size < 3.
        assert_eq!(report.entries.len(), 7);
    }

    #[test]
    fn avalanche_hypothesis_failures() {
        let h = monotone_handle("bipartite or has_independent_set(3)");
        let f11 = FieldSpec::new(11, 1).unwrap();
        let a: Vec<FieldElem> = f11.plus_set()[..4].to_vec();
        // C^a on 11 vertices is neither bipartite nor has three pairwise
        // nonadjacent vertices, so the seed hypothesis fails.
        assert!(matches!(
            avalanche_closure(&h, &f11, &a),
            Err(crate::Error::Hypothesis(_))
        ));
        // Seed must be a proper subset.
        let full = f11.plus_set();
        let h2 = monotone_handle("max_degree <= 3/4 n");
        assert!(matches!(
            avalanche_closure(&h2, &f11, &full),
            Err(crate::Error::Input(_))
        ));
    }

    #[test]
    fn prime_power_witness_independent() {
        // Only the empty fixed point is independent, so the duality branch
        // fires; the witness must reach level >= isqrt(2) = 1 on K_5.
        let h = monotone_handle("independent");
        let report = prime_power_witness(&h, 5, 1).unwrap();
        assert_eq!(report.kind, WitnessKind::Duality);
        assert!(report.level >= 1);
        assert_ne!(report.residue, 0);
        assert!(report.confirm_treewidth().unwrap().is_some());
    }

    #[test]
    fn prime_power_witness_levels() {
        for text in ["bipartite", "max_degree <= 3/4 n"] {
            let h = monotone_handle(text);
            for (p, m) in [(5u32, 1u32), (7, 1), (3, 2)] {
                let n = FieldSpec::new(p, m).unwrap().plus_set().len();
                let report = prime_power_witness(&h, p, m).unwrap();
                assert!(
                    report.level as usize >= isqrt(n),
                    "{text} on {p}^{m}: level {} < floor(sqrt({n}))",
                    report.level
                );
                report.confirm_treewidth().unwrap();
            }
        }
    }

    #[test]
    fn prime_power_witness_rejects_trivial() {
        // max_degree <= 3/4 n is trivial on 4.
        let h = monotone_handle("max_degree <= 3/4 n");
        assert!(matches!(
            prime_power_witness(&h, 2, 2),
            Err(crate::Error::Hypothesis(_))
        ));
        // clique is not edge-monotone at all.
        let h = PropertyHandle::new(parse_property("clique").unwrap());
        assert!(matches!(
            prime_power_witness(&h, 5, 1),
            Err(crate::Error::Hypothesis(_))
        ));
    }

    #[test]
    fn sylow_witness_bipartite_k4() {
        let h = monotone_handle("bipartite");
        let report = sylow_biclique_witness(&h, 2, 2).unwrap();
        assert_eq!(report.empty_prefix, Some(0));
        assert_ne!(report.residue, 0);
        assert!(matches!(report.certificate, Certificate::Biclique(2)));
        assert!(report.naive_value.is_some());
        report.confirm_treewidth().unwrap();
    }

    #[test]
    fn sylow_witness_needs_composite_power() {
        let h = monotone_handle("bipartite");
        assert!(sylow_biclique_witness(&h, 5, 1).is_err());
    }

    #[test]
    fn classify_bipartite_on_six() {
        // The minimal failing point of the K_3^2 lattice for bipartite is
        // K_3 ⊎ IS_3 (no connection edge): scattered with H = IS_3.
        let h = monotone_handle("bipartite");
        let c = classify_k(&h, 6).unwrap();
        assert_eq!(c.q, 3);
        match c.verdict {
            KVerdict::Scattered { h: hgraph, shifted } => {
                assert_eq!(hgraph.vertex_count(), 3);
                assert_eq!(hgraph.edge_count(), 0);
                let sh = PropertyHandle::new(shifted);
                assert!(sh.evaluate(&Graph::independent(3)));
                assert!(!sh.evaluate(&Graph::complete(3).unwrap()));
            }
            other => panic!("expected scattered, got {other:?}"),
        }
    }

    #[test]
    fn classify_independent_sets_on_six() {
        // α(K_{3,3}) = 3, so has_independent_set(3) survives every level-1
        // point and first fails on K_3 ⊎ K_3: scattered with H = K_3.
        let h = monotone_handle("has_independent_set(3)");
        let c = classify_k(&h, 6).unwrap();
        match c.verdict {
            KVerdict::Scattered { h: hgraph, .. } => {
                assert_eq!(hgraph, Graph::complete(3).unwrap());
            }
            other => panic!("expected scattered, got {other:?}"),
        }
        // has_independent_set(4) already fails on K_{3,3}, whose connection
        // edge makes it concentrated.
        let h = monotone_handle("has_independent_set(4)");
        let c = classify_k(&h, 6).unwrap();
        match c.verdict {
            KVerdict::Concentrated(report) => {
                assert!(matches!(report.certificate, Certificate::Biclique(3)));
                assert_ne!(report.residue, 0);
                assert_eq!(report.level, 1);
            }
            other => panic!("expected concentrated, got {other:?}"),
        }
    }

    #[test]
    fn classify_single_block() {
        // k = 4 = q(4): one block, no connection edges possible, so a
        // nontrivial property is always scattered with an empty H.
        let h = monotone_handle("bipartite");
        let c = classify_k(&h, 4).unwrap();
        match c.verdict {
            KVerdict::Scattered { h: hgraph, .. } => {
                assert_eq!(hgraph.vertex_count(), 0);
            }
            other => panic!("expected scattered, got {other:?}"),
        }
    }

    #[test]
    fn classify_trivial_verdicts() {
        let h = monotone_handle("max_degree <= 3/4 n");
        assert!(matches!(
            classify_k(&h, 4).unwrap().verdict,
            KVerdict::Trivial
        ));
        assert!(classify_k(&h, 14).is_err());
    }

    #[test]
    fn scattered_probe_finds_first_shift() {
        // A property that is true on every graph with at most 3 vertices
        // and bipartite beyond: trivial on 3, scattered on 6, so the first
        // scattered integer mapping to q = 3 is 6 and H has 3 vertices.
        let spec = PropertySpec::new(
            Expr::Or(
                Box::new(Expr::atom(Atom::VertexCountIn(vec![1, 2, 3]))),
                Box::new(Expr::atom(Atom::Bipartite)),
            ),
            true,
            "small or bipartite",
        );
        let h = PropertyHandle::new(spec);
        assert!(h.verified_edge_monotone());
        let (hgraph, shifted) = scattered_property_probe(&h, 6).unwrap().unwrap();
        assert_eq!(hgraph.vertex_count(), 3);
        assert_eq!(hgraph.edge_count(), 0, "IS_3 is lexicographically first");
        let sh = PropertyHandle::new(shifted);
        assert!(sh.evaluate(&Graph::independent(3)));
        assert!(!sh.evaluate(&Graph::complete(3).unwrap()));

        // bipartite is already scattered at 3, so its probe shift is empty.
        let h = monotone_handle("bipartite");
        let (hgraph, _) = scattered_property_probe(&h, 6).unwrap().unwrap();
        assert_eq!(hgraph.vertex_count(), 0);

        // Non-scattered input gives nothing.
        let h = monotone_handle("has_independent_set(4)");
        assert!(scattered_property_probe(&h, 6).unwrap().is_none());
    }

    #[test]
    fn lex_graph_order_starts_empty() {
        let graphs = graphs_in_lex_edge_order(3);
        assert_eq!(graphs.len(), 8);
        assert_eq!(graphs[0].edge_count(), 0);
        assert_eq!(graphs[1].edges(), &[(0, 1)]);
        assert_eq!(graphs[2].edges(), &[(0, 1), (0, 2)]);
    }
}
