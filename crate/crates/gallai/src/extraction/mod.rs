//! Lower-bound extraction algorithms: the cograph cascade, the three-pair
//! product recursion, the general weak bound, the tight three-color
//! recursion, and the certificate-producing general recursion.

use num_bigint::BigUint;
use num_traits::One;
use std::collections::BTreeMap;

use crate::coloring::{check_witness, ColorSet, EdgeColoring, Witness};
use crate::decomposition::{
    cograph_edge_partition, cotree_max_clique, cotree_max_independent, find_gallai_partition,
    GallaiPartition, PAIRS3,
};
use crate::error::{Error, Result};
use crate::exact::{binomial, ceil_cbrt};

mod general;
mod tight3;

pub use general::{
    extract_general, validate_certificate, Certificate, CertificateReport, ConstantsGeneral,
};
pub use tight3::{extract_tight3, ConstantsTight3, Tight3Flag, Tight3Outcome, TraceStep};

/// One witness per color set, keyed by the set.
#[derive(Clone, Debug, Default)]
pub struct WitnessFamily {
    map: BTreeMap<ColorSet, Witness>,
}

impl WitnessFamily {
    pub fn new() -> Self {
        WitnessFamily { map: BTreeMap::new() }
    }

    pub fn insert(&mut self, w: Witness) {
        self.map.insert(w.colors, w);
    }

    pub fn get(&self, s: ColorSet) -> Option<&Witness> {
        self.map.get(&s)
    }

    pub fn witnesses(&self) -> impl Iterator<Item = &Witness> {
        self.map.values()
    }

    pub fn sets(&self) -> impl Iterator<Item = ColorSet> + '_ {
        self.map.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn product_of_sizes(&self) -> BigUint {
        let mut acc = BigUint::one();
        for w in self.map.values() {
            acc *= BigUint::from(w.size());
        }
        acc
    }

    /// Largest witness (ties broken by smaller color set).
    pub fn best(&self) -> Option<&Witness> {
        self.map.values().max_by_key(|w| (w.size(), std::cmp::Reverse(w.colors)))
    }

    /// Re-validates every witness against the coloring.
    pub fn validate_all(&self, f: &EdgeColoring) -> Result<bool> {
        for w in self.map.values() {
            if !check_witness(f, w)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Pointwise size maximum of two families over the union of their keys.
    pub fn pointwise_max(mut self, other: WitnessFamily) -> WitnessFamily {
        for (s, w) in other.map {
            match self.map.get(&s) {
                Some(cur) if cur.size() >= w.size() => {}
                _ => {
                    self.map.insert(s, w);
                }
            }
        }
        self
    }
}

fn witness_from_global(vertices: Vec<usize>, pair: (u8, u8)) -> Witness {
    Witness::new(vertices, ColorSet::pair(pair.0, pair.1))
}

/// A 2-colored set of size at least `ceil(n^(1/3))` in a Gallai 3-coloring,
/// through the cograph cascade: either the first cograph has a large clique,
/// or its large independent set restricts the second cograph to one with a
/// large clique or a large independent set, the latter being a clique of the
/// third cograph.
pub fn extract_two_colored(f: &EdgeColoring) -> Result<Witness> {
    if f.r() != 3 {
        return Err(Error::invalid("two-colored extraction requires r = 3"));
    }
    let n = f.n();
    if n == 1 {
        return Ok(Witness::new(vec![0], ColorSet::pair(1, 2)));
    }
    let trees = cograph_edge_partition(f)?;
    let k = ceil_cbrt(&BigUint::from(n));
    let big = |len: usize| BigUint::from(len) >= k;

    let c1 = cotree_max_clique(&trees[0]);
    if big(c1.len()) {
        return Ok(witness_from_global(c1, PAIRS3[0]));
    }
    let i1: std::collections::BTreeSet<usize> =
        cotree_max_independent(&trees[0]).into_iter().collect();
    let t2 = trees[1]
        .restrict(&i1)
        .expect("independent set is nonempty");
    let c2 = cotree_max_clique(&t2);
    if big(c2.len()) {
        return Ok(witness_from_global(c2, PAIRS3[1]));
    }
    let i2 = cotree_max_independent(&t2);
    if !big(i2.len()) {
        return Err(Error::PropertyViolation(format!(
            "cograph cascade produced only {} < ceil(n^(1/3)) vertices",
            i2.len()
        )));
    }
    Ok(witness_from_global(i2, PAIRS3[2]))
}

fn partition_of(f: &EdgeColoring) -> Result<GallaiPartition> {
    find_gallai_partition(f)?
        .ok_or_else(|| Error::invalid("not a Gallai coloring: no partition found"))
}

/// Witnesses for the three color pairs of a Gallai 3-coloring whose sizes
/// multiply to at least `n`: the quotient-pair witness is the union of the
/// children's, the other two are the best single-child witnesses.
pub fn extract_triple(f: &EdgeColoring) -> Result<WitnessFamily> {
    if f.r() != 3 {
        return Err(Error::invalid("triple extraction requires r = 3"));
    }
    let ids: Vec<usize> = (0..f.n()).collect();
    let fam = triple_rec(f, &ids)?;
    let product = fam.product_of_sizes();
    if product < BigUint::from(f.n()) {
        return Err(Error::PropertyViolation(format!(
            "triple product {product} below n={}",
            f.n()
        )));
    }
    Ok(fam)
}

fn triple_rec(f: &EdgeColoring, ids: &[usize]) -> Result<WitnessFamily> {
    let mut fam = WitnessFamily::new();
    if f.n() == 1 {
        for pair in PAIRS3 {
            fam.insert(witness_from_global(vec![ids[0]], pair));
        }
        return Ok(fam);
    }
    let p = partition_of(f)?;
    let mut children = Vec::with_capacity(p.parts.len());
    for part in &p.parts {
        let sub = f.restrict(part)?;
        let sub_ids: Vec<usize> = part.iter().map(|&v| ids[v]).collect();
        children.push(triple_rec(&sub, &sub_ids)?);
    }
    for pair in PAIRS3 {
        let s = ColorSet::pair(pair.0, pair.1);
        let w = if p.q.is_subset(&s) {
            let mut verts = Vec::new();
            for c in &children {
                verts.extend(c.get(s).expect("child families are total").vertices.iter());
            }
            Witness::new(verts, s)
        } else {
            children
                .iter()
                .map(|c| c.get(s).expect("child families are total"))
                .max_by_key(|w| w.size())
                .expect("t >= 2 children")
                .clone()
        };
        fam.insert(w);
    }
    Ok(fam)
}

/// Outcome of the general weak extraction: the full witness family plus the
/// color set carrying the largest witness.
#[derive(Clone, Debug)]
pub struct WeakOutcome {
    pub family: WitnessFamily,
    pub best: ColorSet,
}

/// Witnesses for every color set of size `s` in a Gallai `r`-coloring, with
/// `prod_S |W_S| >= n^C(r-2, s-2)` for `1 < s < r` (endpoints `s = 1` and
/// `s = r` are handled directly). The best witness then has at least
/// `n^(C(s,2)/C(r,2))` vertices.
pub fn extract_weak_general(f: &EdgeColoring, s: u32) -> Result<WeakOutcome> {
    let r = f.r();
    if s < 1 || s > r {
        return Err(Error::invalid(format!("s={s} out of range [1, {r}]")));
    }
    let n = f.n();
    if s == r {
        let mut fam = WitnessFamily::new();
        fam.insert(Witness::new((0..n).collect(), ColorSet::full(r)));
        return Ok(WeakOutcome { family: fam, best: ColorSet::full(r) });
    }
    if s == 1 {
        let fam = majority_color_family(f);
        let best = fam.best().expect("nonempty").colors;
        return Ok(WeakOutcome { family: fam, best });
    }
    let sets = ColorSet::all_of_size(r, s);
    let ids: Vec<usize> = (0..n).collect();
    let fam = weak_rec(f, &ids, &sets)?;
    // prod |W_S| >= n^C(r-2, s-2), exactly.
    let b = binomial((r - 2) as u64, (s - 2) as u64);
    let product = fam.product_of_sizes();
    let bound = BigUint::from(n).pow(b.try_into().map_err(|_| Error::ScaleCap("exponent too large".into()))?);
    if product < bound {
        return Err(Error::PropertyViolation(format!(
            "weak product {product} below n^C(r-2,s-2)={bound}"
        )));
    }
    let best = fam.best().expect("nonempty");
    // best^C(r,2) >= n^C(s,2) follows; assert it exactly.
    let lhs = BigUint::from(best.size()).pow(binomial(r as u64, 2).try_into().unwrap());
    let rhs = BigUint::from(n).pow(binomial(s as u64, 2).try_into().unwrap());
    if lhs < rhs {
        return Err(Error::PropertyViolation(
            "best witness below n^(C(s,2)/C(r,2))".into(),
        ));
    }
    let best = best.colors;
    Ok(WeakOutcome { family: fam, best })
}

fn weak_rec(f: &EdgeColoring, ids: &[usize], sets: &[ColorSet]) -> Result<WitnessFamily> {
    let mut fam = WitnessFamily::new();
    if f.n() == 1 {
        for &s in sets {
            fam.insert(Witness::new(vec![ids[0]], s));
        }
        return Ok(fam);
    }
    let p = partition_of(f)?;
    let mut children = Vec::with_capacity(p.parts.len());
    for part in &p.parts {
        let sub = f.restrict(part)?;
        let sub_ids: Vec<usize> = part.iter().map(|&v| ids[v]).collect();
        children.push(weak_rec(&sub, &sub_ids, sets)?);
    }
    for &s in sets {
        let w = if p.q.is_subset(&s) {
            let mut verts = Vec::new();
            for c in &children {
                verts.extend(c.get(s).expect("total").vertices.iter());
            }
            Witness::new(verts, s)
        } else {
            children
                .iter()
                .map(|c| c.get(s).expect("total"))
                .max_by_key(|w| w.size())
                .expect("t >= 2")
                .clone()
        };
        fam.insert(w);
    }
    Ok(fam)
}

/// Majority-color pivot chain: each pivot keeps its largest color class, and
/// the pivots of each color form monochromatic cliques.
fn majority_color_family(f: &EdgeColoring) -> WitnessFamily {
    let n = f.n();
    let r = f.r();
    let mut by_color: BTreeMap<u8, Vec<usize>> = BTreeMap::new();
    let mut live: Vec<usize> = (0..n).collect();
    while let Some((&v, rest)) = live.split_first() {
        if rest.is_empty() {
            by_color.entry(1).or_default().push(v);
            break;
        }
        let mut classes: BTreeMap<u8, Vec<usize>> = BTreeMap::new();
        for &u in rest {
            classes.entry(f.color(v, u)).or_default().push(u);
        }
        let (&c, class) = classes.iter().max_by_key(|(c, v)| (v.len(), std::cmp::Reverse(**c))).expect("nonempty");
        by_color.entry(c).or_default().push(v);
        live = class.clone();
    }
    let mut fam = WitnessFamily::new();
    for c in 1..=r as u8 {
        let verts = by_color.get(&c).cloned().unwrap_or_default();
        let verts = if verts.is_empty() { vec![0] } else { verts };
        fam.insert(Witness::new(verts, ColorSet::single(c)));
    }
    fam
}
