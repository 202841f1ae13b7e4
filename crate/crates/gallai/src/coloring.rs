//! Edge colorings of complete graphs, rainbow-triangle detection, witness
//! checking, and the `.gal` text / JSON serialization formats.
//!
//! Colors are 1-based integers in `[r]`; vertices are 0-based. Edge colors
//! are stored in a flat row-major upper-triangular array, pairs ordered
//! `(0,1), (0,2), ..., (0,n-1), (1,2), ..., (n-2,n-1)`.

use serde::{Deserialize, Serialize};

use crate::bits::BitSet;
use crate::error::{Error, Result};

/// A subset of the palette `[r]`, as a bitmask (color `c` at bit `c-1`).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ColorSet(pub u32);

impl ColorSet {
    pub fn empty() -> Self {
        ColorSet(0)
    }

    pub fn single(c: u8) -> Self {
        ColorSet(1 << (c - 1))
    }

    pub fn pair(a: u8, b: u8) -> Self {
        debug_assert_ne!(a, b);
        ColorSet(1 << (a - 1) | 1 << (b - 1))
    }

    pub fn from_colors<I: IntoIterator<Item = u8>>(colors: I) -> Self {
        let mut m = 0u32;
        for c in colors {
            m |= 1 << (c - 1);
        }
        ColorSet(m)
    }

    /// All colors `1..=r`.
    pub fn full(r: u32) -> Self {
        debug_assert!(r <= 32);
        ColorSet(if r == 32 { !0 } else { (1 << r) - 1 })
    }

    #[inline]
    pub fn contains(&self, c: u8) -> bool {
        self.0 >> (c - 1) & 1 == 1
    }

    pub fn insert(&mut self, c: u8) {
        self.0 |= 1 << (c - 1);
    }

    pub fn len(&self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(&self, other: &ColorSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(&self, other: &ColorSet) -> ColorSet {
        ColorSet(self.0 | other.0)
    }

    pub fn intersect(&self, other: &ColorSet) -> ColorSet {
        ColorSet(self.0 & other.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        (1..=32u8).filter(|&c| self.contains(c))
    }

    /// All subsets of `1..=r` of the given size, in lexicographic order of
    /// their sorted color lists.
    pub fn all_of_size(r: u32, s: u32) -> Vec<ColorSet> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(start: u8, r: u8, left: u32, cur: &mut Vec<u8>, out: &mut Vec<ColorSet>) {
            if left == 0 {
                out.push(ColorSet::from_colors(cur.iter().copied()));
                return;
            }
            for c in start..=r {
                if (r - c + 1) as u32 >= left {
                    cur.push(c);
                    rec(c + 1, r, left - 1, cur, out);
                    cur.pop();
                }
            }
        }
        rec(1, r as u8, s, &mut cur, &mut out);
        out
    }
}

impl std::fmt::Debug for ColorSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        for c in self.iter() {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
            first = false;
        }
        write!(f, "}}")
    }
}

/// An `r`-coloring of the edges of the complete graph on `n` vertices.
///
/// Immutable after construction; all operations take `&self` and are safe
/// for concurrent use. The palette size `r` is declared, not inferred, so
/// constructions with unused colors remain valid `r`-colorings.
#[derive(Clone, PartialEq, Eq)]
pub struct EdgeColoring {
    n: usize,
    r: u32,
    colors: Vec<u8>,
}

impl std::fmt::Debug for EdgeColoring {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "EdgeColoring(n={}, r={})", self.n, self.r)
    }
}

#[inline]
fn pair_count(n: usize) -> usize {
    n * (n - 1) / 2
}

impl EdgeColoring {
    /// Builds a coloring from a closure on ordered pairs `u < v`.
    pub fn from_fn(n: usize, r: u32, mut f: impl FnMut(usize, usize) -> u8) -> Result<Self> {
        Self::validate_dims(n, r)?;
        let mut colors = Vec::with_capacity(pair_count(n));
        for u in 0..n {
            for v in u + 1..n {
                let c = f(u, v);
                if c == 0 || c as u32 > r {
                    return Err(Error::invalid(format!(
                        "color {c} out of range [1,{r}] for edge ({u},{v})"
                    )));
                }
                colors.push(c);
            }
        }
        Ok(EdgeColoring { n, r, colors })
    }

    /// Builds from the flat upper-triangular color array.
    pub fn from_flat(n: usize, r: u32, colors: Vec<u8>) -> Result<Self> {
        Self::validate_dims(n, r)?;
        if colors.len() != pair_count(n) {
            return Err(Error::invalid(format!(
                "expected {} colors for n={n}, got {}",
                pair_count(n),
                colors.len()
            )));
        }
        for (idx, &c) in colors.iter().enumerate() {
            if c == 0 || c as u32 > r {
                return Err(Error::invalid(format!(
                    "color {c} out of range [1,{r}] at entry {idx}"
                )));
            }
        }
        Ok(EdgeColoring { n, r, colors })
    }

    /// The one-vertex coloring.
    pub fn k1(r: u32) -> Self {
        EdgeColoring { n: 1, r, colors: Vec::new() }
    }

    /// Monochromatic complete graph.
    pub fn monochromatic(n: usize, r: u32, color: u8) -> Result<Self> {
        Self::from_fn(n, r, |_, _| color)
    }

    fn validate_dims(n: usize, r: u32) -> Result<()> {
        if n < 1 {
            return Err(Error::invalid("vertex count must be >= 1"));
        }
        if r < 1 || r > 32 {
            return Err(Error::invalid("palette size must be in [1, 32]"));
        }
        Ok(())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn r(&self) -> u32 {
        self.r
    }

    #[inline]
    fn index(&self, u: usize, v: usize) -> usize {
        debug_assert!(u < v && v < self.n);
        u * self.n - u * (u + 1) / 2 + (v - u - 1)
    }

    /// Color of the edge `{u, v}`, `u != v`.
    #[inline]
    pub fn color(&self, u: usize, v: usize) -> u8 {
        if u < v {
            self.colors[self.index(u, v)]
        } else {
            self.colors[self.index(v, u)]
        }
    }

    pub fn flat_colors(&self) -> &[u8] {
        &self.colors
    }

    /// Set of colors actually used.
    pub fn used_colors(&self) -> ColorSet {
        ColorSet::from_colors(self.colors.iter().copied())
    }

    /// Applies a color relabeling; `map[c-1]` is the new color of `c`.
    pub fn map_colors(&self, r_new: u32, map: impl Fn(u8) -> u8) -> Result<Self> {
        Self::from_flat(self.n, r_new, self.colors.iter().map(|&c| map(c)).collect())
    }

    /// The induced coloring on a vertex subset (indices are re-numbered in
    /// the order given, which must be strictly increasing).
    pub fn restrict(&self, vertices: &[usize]) -> Result<Self> {
        if vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("restriction vertices must be strictly increasing"));
        }
        if let Some(&last) = vertices.last() {
            if last >= self.n {
                return Err(Error::invalid("restriction vertex out of range"));
            }
        }
        EdgeColoring::from_fn(vertices.len().max(1), self.r, |u, v| {
            self.color(vertices[u], vertices[v])
        })
    }

    /// Per-color adjacency bitmasks: `masks[c-1][u]` holds `w` iff the edge
    /// `{u, w}` has color `c`.
    pub fn color_masks(&self) -> Vec<Vec<BitSet>> {
        let mut masks =
            vec![vec![BitSet::new(self.n); self.n]; self.r as usize];
        for u in 0..self.n {
            for v in u + 1..self.n {
                let c = (self.color(u, v) - 1) as usize;
                masks[c][u].insert(v);
                masks[c][v].insert(u);
            }
        }
        masks
    }

    /// Lexicographically least rainbow triangle `(u, v, w)`, `u < v < w`, or
    /// `None` — `None` iff this is a Gallai coloring.
    ///
    /// Triples are scanned in lexicographic order (the scan over the third
    /// vertex is word-parallel) and the first hit is returned.
    pub fn find_rainbow_triangle(&self) -> Option<(usize, usize, usize)> {
        if self.n < 3 || self.r < 3 {
            return None;
        }
        let masks = self.color_masks();
        for u in 0..self.n {
            for v in u + 1..self.n {
                let c = (self.color(u, v) - 1) as usize;
                // w > v with F(u,w) != c, F(v,w) != c, F(u,w) != F(v,w).
                let mut cand = BitSet::full(self.n);
                cand.clear_below(v + 1);
                cand.and_not_assign(&masks[c][u]);
                cand.and_not_assign(&masks[c][v]);
                if cand.is_empty() {
                    continue;
                }
                for d in 0..self.r as usize {
                    if d != c {
                        let same = masks[d][u].and(&masks[d][v]);
                        cand.and_not_assign(&same);
                    }
                }
                if let Some(w) = cand.min() {
                    return Some((u, v, w));
                }
            }
        }
        None
    }

    pub fn is_gallai(&self) -> bool {
        self.find_rainbow_triangle().is_none()
    }
}

/// A vertex set certified (or to be checked) subchromatic for a color set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    /// Sorted, distinct vertex ids.
    pub vertices: Vec<usize>,
    /// The colors the internal edges are allowed to use.
    pub colors: ColorSet,
}

impl Witness {
    pub fn new(mut vertices: Vec<usize>, colors: ColorSet) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        Witness { vertices, colors }
    }

    pub fn size(&self) -> usize {
        self.vertices.len()
    }
}

/// True iff every edge internal to the witness has color in its color set.
pub fn check_witness(f: &EdgeColoring, w: &Witness) -> Result<bool> {
    for &v in &w.vertices {
        if v >= f.n() {
            return Err(Error::invalid(format!("witness vertex {v} out of range")));
        }
    }
    for (i, &u) in w.vertices.iter().enumerate() {
        for &v in &w.vertices[i + 1..] {
            if !w.colors.contains(f.color(u, v)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// .gal text format and JSON mirror
// ---------------------------------------------------------------------------

/// Canonical `.gal` text: line 1 `"n r"`, line 2 the flat colors.
pub fn encode(f: &EdgeColoring) -> String {
    let body: Vec<String> = f.colors.iter().map(|c| c.to_string()).collect();
    format!("{} {}\n{}\n", f.n, f.r, body.join(" "))
}

/// Parses the `.gal` text format.
pub fn decode(text: &str) -> Result<EdgeColoring> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty input".into()))?;
    let mut it = header.split_whitespace();
    let n: usize = it
        .next()
        .ok_or_else(|| Error::Parse("missing n".into()))?
        .parse()
        .map_err(|e| Error::Parse(format!("bad n: {e}")))?;
    let r: u32 = it
        .next()
        .ok_or_else(|| Error::Parse("missing r".into()))?
        .parse()
        .map_err(|e| Error::Parse(format!("bad r: {e}")))?;
    if it.next().is_some() {
        return Err(Error::Parse("trailing tokens in header".into()));
    }
    let rest: String = lines.collect::<Vec<_>>().join(" ");
    let mut colors = Vec::new();
    for tok in rest.split_whitespace() {
        let c: u32 = tok.parse().map_err(|e| Error::Parse(format!("bad color: {e}")))?;
        if c == 0 || c > r {
            return Err(Error::Parse(format!("color {c} exceeds r={r}")));
        }
        colors.push(c as u8);
    }
    if n >= 1 && colors.len() != pair_count(n) {
        return Err(Error::Parse(format!(
            "expected {} colors for n={n}, got {}",
            pair_count(n),
            colors.len()
        )));
    }
    EdgeColoring::from_flat(n, r, colors)
}

#[derive(Serialize, Deserialize)]
struct ColoringJson {
    n: usize,
    r: u32,
    colors: Vec<u8>,
}

/// JSON mirror `{n, r, colors: [...]}` with the same pair ordering.
pub fn encode_json(f: &EdgeColoring) -> String {
    serde_json::to_string(&ColoringJson {
        n: f.n,
        r: f.r,
        colors: f.colors.clone(),
    })
    .expect("serialization cannot fail")
}

pub fn decode_json(text: &str) -> Result<EdgeColoring> {
    let raw: ColoringJson =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("bad json: {e}")))?;
    EdgeColoring::from_flat(raw.n, raw.r, raw.colors)
}

#[cfg(test)]
pub(crate) fn e1() -> EdgeColoring {
    // K4: {0,1} internally color 1, {2,3} internally color 2, cross color 3.
    decode("4 3\n1 3 3 3 3 2\n").unwrap()
}
