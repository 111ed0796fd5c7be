//! Two independent engines for the alternating enumerator
//! `Σ_{S ⊆ E(H)} Φ(H[S]) (-1)^{|S|}`, the per-level count vectors they
//! induce, and the binomial transformation matrices relating those vectors.
//!
//! The naive engine walks all `2^{|E|}` edge subsets in Gray-code order and
//! is exact; the mod-p engine sums only over sub-points of a fixed point in
//! a p-group lattice. Their agreement mod p is the master oracle of the
//! whole crate and is enforced wherever both are feasible.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{capacity, falsified, hypothesis, input, Result};
use crate::graph::Graph;
use crate::group::{FixedPoint, FixedPointLattice};
use crate::property::PropertyHandle;

/// Hard cap on the naive engine: `2^25` subsets.
pub const MAX_NAIVE_EDGES: usize = 25;

/// Exact alternating enumerator by exhaustive edge-subset enumeration.
pub fn alt_enum_naive(h: &PropertyHandle, g: &Graph) -> Result<BigInt> {
    alt_enum_naive_with_cap(h, g, MAX_NAIVE_EDGES)
}

/// As [`alt_enum_naive`] with a caller-lowered cap (never above the hard cap).
pub fn alt_enum_naive_with_cap(h: &PropertyHandle, g: &Graph, cap: usize) -> Result<BigInt> {
    if cap > MAX_NAIVE_EDGES {
        return Err(capacity(format!(
            "naive edge cap {cap} exceeds hard cap {MAX_NAIVE_EDGES}"
        )));
    }
    let e = g.edge_count();
    if e > cap {
        return Err(capacity(format!(
            "{e} edges exceeds the naive engine cap {cap}"
        )));
    }
    let total: u64 = 1u64 << e;
    let threads = if total >= 1 << 18 {
        worker_threads()
    } else {
        1
    };
    let sum: i64 = if threads <= 1 {
        scan_range(h, g, 0, total)
    } else {
        // Contiguous chunks with exact integer partial sums reduce
        // deterministically regardless of the thread count.
        let chunk = total.div_ceil(threads as u64);
        std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for t in 0..threads as u64 {
                let lo = t * chunk;
                let hi = total.min(lo + chunk);
                if lo < hi {
                    handles.push(scope.spawn(move || scan_range(h, g, lo, hi)));
                }
            }
            handles
                .into_iter()
                .map(|j| j.join().expect("worker panicked"))
                .sum()
        })
    };
    Ok(BigInt::from(sum))
}

/// Sums `Φ(H[S])(-1)^{|S|}` over the Gray-code positions `lo..hi`.
fn scan_range(h: &PropertyHandle, g: &Graph, lo: u64, hi: u64) -> i64 {
    let n = g.vertex_count();
    let spec = h.spec();
    let mut adj = vec![0u64; n];
    let start_mask = lo ^ (lo >> 1);
    for (i, &(u, v)) in g.edges().iter().enumerate() {
        if start_mask >> i & 1 == 1 {
            adj[u as usize] |= 1 << v;
            adj[v as usize] |= 1 << u;
        }
    }
    let mut parity = start_mask.count_ones() & 1;
    let mut sum = 0i64;
    if spec.eval_adj(n, &adj) {
        sum += if parity == 0 { 1 } else { -1 };
    }
    for s in lo + 1..hi {
        let bit = s.trailing_zeros() as usize;
        let (u, v) = g.edges()[bit];
        adj[u as usize] ^= 1 << v;
        adj[v as usize] ^= 1 << u;
        parity ^= 1;
        if spec.eval_adj(n, &adj) {
            sum += if parity == 0 { 1 } else { -1 };
        }
    }
    sum
}

/// Worker count: `INDSUB_MAX_THREADS` if set, otherwise the hardware
/// parallelism.
fn worker_threads() -> usize {
    static THREADS: std::sync::OnceLock<usize> = std::sync::OnceLock::new();
    *THREADS.get_or_init(|| {
        std::env::var("INDSUB_MAX_THREADS")
            .ok()
            .and_then(|s| s.parse::<usize>().ok())
            .filter(|&t| t >= 1)
            .unwrap_or_else(|| {
                std::thread::available_parallelism()
                    .map(|p| p.get())
                    .unwrap_or(1)
            })
    })
}

/// Alternating enumerator of a fixed point, mod p: sums
/// `Φ(B)(-1)^{level(B)}` over the sub-points `B` of `target`. Requires the
/// lattice's group to be a verified p-group.
pub fn alt_enum_modp(
    h: &PropertyHandle,
    lattice: &FixedPointLattice,
    target: &FixedPoint,
) -> Result<u32> {
    let p = lattice
        .p()
        .ok_or_else(|| input("mod-p engine requires a verified p-group"))?;
    if target.orbit_set as usize >= lattice.point_count()
        || lattice.point(target.orbit_set).edges != target.edges
    {
        return Err(input("target is not a fixed point of this lattice"));
    }
    let mut sum = 0i64;
    for b in lattice.sub_points(target) {
        if h.evaluate(&lattice.graph_of(&b)) {
            sum += if b.level % 2 == 0 { 1 } else { -1 };
        }
    }
    Ok(sum.rem_euclid(p as i64) as u32)
}

/// Per-level vectors over the whole lattice, both mod p:
/// `w[i]` counts the level-i fixed points satisfying the property and
/// `ŵ[i]` sums their alternating enumerators (each from the mod-p engine).
pub fn level_vectors(
    h: &PropertyHandle,
    lattice: &FixedPointLattice,
) -> Result<(Vec<u32>, Vec<u32>)> {
    let p = lattice
        .p()
        .ok_or_else(|| input("level vectors require a verified p-group"))? as i64;
    let n = lattice.orbit_count();
    let mut w = vec![0i64; n + 1];
    let mut what = vec![0i64; n + 1];
    for fp in lattice.points() {
        let level = fp.level as usize;
        if h.evaluate(&lattice.graph_of(&fp)) {
            w[level] += 1;
        }
        what[level] += alt_enum_modp(h, lattice, &fp)? as i64;
    }
    let reduce = |v: Vec<i64>| v.into_iter().map(|x| x.rem_euclid(p) as u32).collect();
    Ok((reduce(w), reduce(what)))
}

// ---------------------------------------------------------------------------
// Transformation matrices
// ---------------------------------------------------------------------------

/// The binomial transformation matrix `C_n` with entries
/// `(C_n)_{i,j} = (-1)^j · binom(n-j, i-j)` (lower triangular), or its
/// c-restriction: the first `n-c+1` columns and last `n-c+1` rows.
#[derive(Clone, Debug)]
pub struct TransformMatrix {
    pub n: usize,
    pub c: usize,
    dim: usize,
    entries: Vec<i128>,
}

fn binom_i128(n: i64, k: i64) -> i128 {
    if k < 0 || k > n {
        return 0;
    }
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc
}

impl TransformMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> i128 {
        self.entries[i * self.dim + j]
    }

    pub fn rows(&self) -> Vec<Vec<i128>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j)).collect())
            .collect()
    }

    /// Exact determinant by fraction-free elimination.
    pub fn det(&self) -> BigInt {
        let d = self.dim;
        let mut m: Vec<Vec<BigInt>> = (0..d)
            .map(|i| (0..d).map(|j| BigInt::from(self.get(i, j))).collect())
            .collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..d.saturating_sub(1) {
            if m[k][k].is_zero() {
                let swap = (k + 1..d).find(|&r| !m[r][k].is_zero());
                match swap {
                    Some(r) => {
                        m.swap(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..d {
                for j in k + 1..d {
                    let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = num / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        sign * m[d - 1][d - 1].clone()
    }
}

/// The full matrix `C_n`.
pub fn transform_matrix(n: usize) -> Result<TransformMatrix> {
    restrict_matrix(n, 0)
}

/// The restricted matrix `C_{n;c}` (`c = 0` gives `C_n`).
pub fn restrict_matrix(n: usize, c: usize) -> Result<TransformMatrix> {
    if n > 64 || c > n {
        return Err(input(format!(
            "restriction requires 0 <= c <= n <= 64, got n={n} c={c}"
        )));
    }
    let dim = n - c + 1;
    let mut entries = vec![0i128; dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            let sign: i128 = if j % 2 == 0 { 1 } else { -1 };
            entries[i * dim + j] = sign * binom_i128((n - j) as i64, (i + c) as i64 - j as i64);
        }
    }
    Ok(TransformMatrix { n, c, dim, entries })
}

/// Checks `ŵ ≡ C_n · w (mod p)` componentwise.
pub fn verify_duality(w: &[u32], what: &[u32], n: usize, p: u32) -> Result<bool> {
    if w.len() != n + 1 || what.len() != n + 1 {
        return Err(input(format!(
            "level vectors must have length {}, got {} and {}",
            n + 1,
            w.len(),
            what.len()
        )));
    }
    let c = transform_matrix(n)?;
    let p = p as i128;
    for (i, &expected) in what.iter().enumerate() {
        let mut acc: i128 = 0;
        for (j, &wj) in w.iter().enumerate() {
            acc = (acc + c.get(i, j).rem_euclid(p) * wj as i128) % p;
        }
        if acc.rem_euclid(p) != expected as i128 {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Lattice searches
// ---------------------------------------------------------------------------

/// All fixed points that fail the property while every proper sub-point
/// satisfies it, paired with their mod-p residues. Such points are
/// guaranteed nonvanishing (residue `(-1)^{level+1}` mod p); a zero residue
/// aborts. Returns the empty list when the level-0 point already fails.
pub fn minimal_failing_fixed_points(
    h: &PropertyHandle,
    lattice: &FixedPointLattice,
) -> Result<Vec<(FixedPoint, u32)>> {
    if !h.evaluate(&lattice.graph_of(&lattice.point(0))) {
        return Ok(Vec::new());
    }
    let phi: Vec<bool> = lattice
        .points()
        .map(|fp| h.evaluate(&lattice.graph_of(&fp)))
        .collect();
    let mut out = Vec::new();
    for fp in lattice.points() {
        if phi[fp.orbit_set as usize] {
            continue;
        }
        let minimal = lattice
            .sub_points(&fp)
            .iter()
            .all(|b| b.orbit_set == fp.orbit_set || phi[b.orbit_set as usize]);
        if minimal {
            let residue = alt_enum_modp(h, lattice, &fp)?;
            if residue == 0 {
                return Err(falsified(format!(
                    "minimal failing point {:#b} has vanishing residue",
                    fp.orbit_set
                )));
            }
            out.push((fp, residue));
        }
    }
    Ok(out)
}

/// A fixed point with nonzero mod-p alternating enumerator and level at
/// least `c`, under the hypothesis that the property holds on the empty
/// fixed point and fails on every fixed point of level above
/// `orbit_count - c`. The hypothesis is verified, a violation is reported
/// distinctly, and an empty search under a satisfied hypothesis aborts (it
/// would falsify the duality argument).
pub fn duality_witness(
    h: &PropertyHandle,
    lattice: &FixedPointLattice,
    c: usize,
) -> Result<(FixedPoint, u32)> {
    let n = lattice.orbit_count();
    if c > n {
        return Err(input(format!(
            "level demand c={c} exceeds the {n}-orbit lattice"
        )));
    }
    if !h.evaluate(&lattice.graph_of(&lattice.point(0))) {
        return Err(hypothesis(
            "property fails on the level-0 fixed point".to_string(),
        ));
    }
    for fp in lattice.points() {
        if fp.level as usize > n - c && h.evaluate(&lattice.graph_of(&fp)) {
            return Err(hypothesis(format!(
                "property holds on a fixed point of level {} > {}",
                fp.level,
                n - c
            )));
        }
    }
    // Ascending level, then smallest orbit set.
    for level in c..=n {
        let mut best: Option<(FixedPoint, u32)> = None;
        for fp in lattice.points_of_level(level as u32) {
            if best.is_some() {
                break;
            }
            let residue = alt_enum_modp(h, lattice, &fp)?;
            if residue != 0 {
                best = Some((fp, residue));
            }
        }
        if let Some(found) = best {
            return Ok(found);
        }
    }
    Err(falsified(format!(
        "hypothesis satisfied but no fixed point of level >= {c} has nonzero residue"
    )))
}

/// Formats an exact enumerator value for JSON transport (decimal string).
pub fn exact_to_string(v: &BigInt) -> String {
    v.to_string()
}

/// Reduces an exact enumerator value mod p into `0..p`.
pub fn exact_mod_p(v: &BigInt, p: u32) -> u32 {
    let m = v % p;
    let m = if m.is_negative() { m + p } else { m };
    m.try_into().expect("residue fits u32")
}
