//! Ground truth at desk scale: exact maximum subchromatic sets by branch and
//! bound, naive full-subset enumeration for oracle-vs-oracle checks, and
//! exhaustive small-instance streams.

use crate::bits::BitSet;
use crate::coloring::{ColorSet, EdgeColoring, Witness};
use crate::error::{Error, Result};

/// Default vertex cap for [`g_exact`].
pub const DEFAULT_CAP: usize = 200;

/// Result of an exact maximum-subchromatic-set computation.
#[derive(Clone, Debug)]
pub struct OracleResult {
    pub colors: ColorSet,
    pub witness: Witness,
    pub size: usize,
    /// True when the search ran to completion (always, under the cap).
    pub optimal: bool,
}

/// Exact maximum clique, deterministic. Vertices are ordered by degree
/// descending (ties by index); candidate sets are bounded by greedy coloring.
///
/// With `stop_above = Some(b)` the search returns as soon as a clique larger
/// than `b` is found (the result is then just a witness of that fact, not
/// necessarily maximum).
pub fn max_clique(adj: &[BitSet], stop_above: Option<usize>) -> Vec<usize> {
    let n = adj.len();
    if n == 0 {
        return Vec::new();
    }
    let deg: Vec<usize> = adj.iter().map(|a| a.count()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(deg[v]), v));

    let mut best: Vec<usize> = Vec::new();
    let mut cur: Vec<usize> = Vec::new();
    let cand = BitSet::full(n);
    expand(adj, &order, cand, &mut cur, &mut best, stop_above);
    best.sort_unstable();
    best
}

fn expand(
    adj: &[BitSet],
    order: &[usize],
    cand: BitSet,
    cur: &mut Vec<usize>,
    best: &mut Vec<usize>,
    stop_above: Option<usize>,
) {
    if let Some(b) = stop_above {
        if best.len() > b {
            return;
        }
    }
    if cand.is_empty() {
        if cur.len() > best.len() {
            *best = cur.clone();
        }
        return;
    }
    // Greedy coloring of the candidates in global order; class index + 1 is
    // an upper bound on any clique inside the first i+1 listed vertices.
    let mut classes: Vec<BitSet> = Vec::new();
    let mut listed: Vec<(usize, usize)> = Vec::new(); // (vertex, color)
    for &v in order {
        if !cand.contains(v) {
            continue;
        }
        let mut placed = false;
        for (ci, class) in classes.iter_mut().enumerate() {
            if class.and(&adj[v]).is_empty() {
                class.insert(v);
                listed.push((v, ci + 1));
                placed = true;
                break;
            }
        }
        if !placed {
            let mut c = BitSet::new(adj.len());
            c.insert(v);
            classes.push(c);
            listed.push((v, classes.len()));
        }
    }
    listed.sort_by_key(|&(v, c)| (c, v));
    let mut cand = cand;
    for i in (0..listed.len()).rev() {
        let (v, color) = listed[i];
        if cur.len() + color <= best.len() {
            return;
        }
        cur.push(v);
        let next = cand.and(&adj[v]);
        expand(adj, order, next, cur, best, stop_above);
        cur.pop();
        if let Some(b) = stop_above {
            if best.len() > b {
                return;
            }
        }
        cand.remove(v);
    }
}

/// Exact maximum-weight clique with nonnegative integer weights.
pub fn max_weight_clique(adj: &[BitSet], weights: &[u64]) -> (Vec<usize>, u64) {
    let n = adj.len();
    if n == 0 {
        return (Vec::new(), 0);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(weights[v]), v));
    let mut best: (Vec<usize>, u64) = (Vec::new(), 0);
    let mut cur: Vec<usize> = Vec::new();
    fn go(
        adj: &[BitSet],
        order: &[usize],
        weights: &[u64],
        cand: BitSet,
        cur_w: u64,
        cur: &mut Vec<usize>,
        best: &mut (Vec<usize>, u64),
    ) {
        // Bound: current weight plus greedy color classes' max weights.
        let mut classes: Vec<BitSet> = Vec::new();
        let mut class_max: Vec<u64> = Vec::new();
        let mut listed: Vec<usize> = Vec::new();
        for &v in order {
            if !cand.contains(v) {
                continue;
            }
            listed.push(v);
            let mut placed = false;
            for (ci, class) in classes.iter_mut().enumerate() {
                if class.and(&adj[v]).is_empty() {
                    class.insert(v);
                    class_max[ci] = class_max[ci].max(weights[v]);
                    placed = true;
                    break;
                }
            }
            if !placed {
                let mut c = BitSet::new(adj.len());
                c.insert(v);
                classes.push(c);
                class_max.push(weights[v]);
            }
        }
        if cur_w + class_max.iter().sum::<u64>() <= best.1 && !cur.is_empty() {
            return;
        }
        if listed.is_empty() {
            if cur_w > best.1 || (cur_w == best.1 && best.0.is_empty() && !cur.is_empty()) {
                *best = (cur.clone(), cur_w);
            }
            return;
        }
        let mut cand = cand;
        for &v in listed.iter().rev() {
            cur.push(v);
            go(adj, order, weights, cand.and(&adj[v]), cur_w + weights[v], cur, best);
            cur.pop();
            cand.remove(v);
        }
        // The empty extension is covered by recursion bottoming out.
        if cur_w > best.1 {
            *best = (cur.clone(), cur_w);
        }
    }
    go(adj, &order, weights, BitSet::full(n), 0, &mut cur, &mut best);
    best.0.sort_unstable();
    best
}

/// Adjacency of the "agreement graph": `u ~ v` iff the edge color is in `S`.
/// An `S`-subchromatic set is exactly a clique here (equivalently, an
/// independent set in the complement, the graph of edges colored outside `S`).
pub fn agreement_adjacency(f: &EdgeColoring, s: ColorSet) -> Vec<BitSet> {
    let n = f.n();
    let mut adj = vec![BitSet::new(n); n];
    for u in 0..n {
        for v in u + 1..n {
            if s.contains(f.color(u, v)) {
                adj[u].insert(v);
                adj[v].insert(u);
            }
        }
    }
    adj
}

/// Exact `g(F, S)`: size of the largest `S`-subchromatic set, with witness.
pub fn g_exact(f: &EdgeColoring, s: ColorSet) -> Result<OracleResult> {
    g_exact_capped(f, s, DEFAULT_CAP)
}

pub fn g_exact_capped(f: &EdgeColoring, s: ColorSet, cap: usize) -> Result<OracleResult> {
    if f.n() > cap {
        return Err(Error::ScaleCap(format!(
            "g_exact cap {cap} exceeded by n={}",
            f.n()
        )));
    }
    if s.is_empty() {
        // No internal edge is allowed, so any single vertex is maximum
        // (n >= 1 always).
        return Ok(OracleResult {
            colors: s,
            witness: Witness::new(vec![0], s),
            size: 1,
            optimal: true,
        });
    }
    let adj = agreement_adjacency(f, s);
    let clique = max_clique(&adj, None);
    let size = clique.len();
    Ok(OracleResult {
        colors: s,
        witness: Witness::new(clique, s),
        size,
        optimal: true,
    })
}

/// Naive full-subset enumeration; the independent cross-check for `g_exact`.
pub fn naive_g_exact(f: &EdgeColoring, s: ColorSet) -> Result<usize> {
    let n = f.n();
    if n > 20 {
        return Err(Error::ScaleCap("naive_g_exact limited to n <= 20".into()));
    }
    let mut best = 0usize;
    'outer: for mask in 0u32..(1u32 << n) {
        let count = mask.count_ones() as usize;
        if count <= best {
            continue;
        }
        let verts: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        for (i, &u) in verts.iter().enumerate() {
            for &v in &verts[i + 1..] {
                if !s.contains(f.color(u, v)) {
                    continue 'outer;
                }
            }
        }
        best = count;
    }
    Ok(best.max(1).min(n)) // the empty set is beaten by any single vertex
}

/// Streams all `r`-colorings of `K_n` that are Gallai, in lexicographic order
/// of their flat color arrays.
pub fn enumerate_gallai(n: usize, r: u32) -> Result<impl Iterator<Item = EdgeColoring>> {
    let edges = n * (n - 1) / 2;
    let total = (r as f64).powi(edges as i32);
    if total > 1e8 {
        return Err(Error::ScaleCap(format!(
            "enumeration of {r}^{edges} colorings exceeds the 1e8 cap"
        )));
    }
    let mut current: Option<Vec<u8>> = Some(vec![1u8; edges]);
    Ok(std::iter::from_fn(move || {
        loop {
            let cur = current.as_mut()?;
            let candidate = EdgeColoring::from_flat(n, r, cur.clone()).expect("valid by construction");
            // advance the odometer
            let mut i = edges;
            loop {
                if i == 0 {
                    current = None;
                    break;
                }
                i -= 1;
                if (cur[i] as u32) < r {
                    cur[i] += 1;
                    for c in cur[i + 1..].iter_mut() {
                        *c = 1;
                    }
                    break;
                }
            }
            if candidate.is_gallai() {
                return Some(candidate);
            }
        }
    }))
}

/// Exhaustive Theorem-6-style check at tiny scale: for every Gallai
/// 3-coloring of `K_n`, both the constructive triple extraction and the
/// oracle's three exact values have product at least `n`.
pub fn exhaustive_theorem6_check(n: usize) -> Result<bool> {
    if n > 5 {
        return Err(Error::ScaleCap("exhaustive check limited to n <= 5".into()));
    }
    for f in enumerate_gallai(n, 3)? {
        let fam = crate::extraction::extract_triple(&f)?;
        let mut product: u128 = 1;
        for w in fam.witnesses() {
            if !crate::coloring::check_witness(&f, w)? {
                return Ok(false);
            }
            product *= w.size() as u128;
        }
        if product < n as u128 {
            return Ok(false);
        }
        let mut oracle_product: u128 = 1;
        for s in ColorSet::all_of_size(3, 2) {
            oracle_product *= g_exact(&f, s)?.size as u128;
        }
        if oracle_product < n as u128 {
            return Ok(false);
        }
    }
    Ok(true)
}
