//! The tight three-color recursion: a dominant-part regrouping with an
//! AM-GM gain in the dense cases, and dyadic size classes driving the
//! weighted Ramsey engine in the sparse case.
//!
//! The recursion-driving function is
//! `f(n) = c log^2(Cn)` on `(0, m^{4/9}]`,
//! `c^2 log^2(m^{4/9}) log^2(Cn m^{-4/9})` on `(m^{4/9}, m^{8/9}]`,
//! `c^3 log^4(m^{4/9}) log^2(Cn m^{-8/9})` on `(m^{8/9}, m]`,
//! with `C` a power of two and `c = 1/(4 log^2 C)`, so `f(n) <= 1` exactly
//! when `n <= C`. Two constant profiles ship: the literal paper-scale one
//! (every asserted bound is vacuous at feasible sizes but the arithmetic is
//! exact in log form) and a small desk profile that makes every branch
//! execute.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;

use super::{partition_of, triple_rec, WitnessFamily};
use crate::coloring::{ColorSet, EdgeColoring, Witness};
use crate::error::{Error, Result};
use crate::exact::{self, ge_coef_sq_log};
use crate::ramsey::{weighted_ramsey, WeightedVertex};

/// Constants for the tight three-color recursion. `C` and `D` are powers of
/// two carried as exponents; `c` is the dyadic rational `1/(4 log^2 C)`.
#[derive(Clone, Debug)]
pub struct ConstantsTight3 {
    /// `log2 D`
    pub log2_d: u64,
    /// `kappa = log2 C` (a big integer: the paper value is `2^16384`)
    pub kappa: BigUint,
    /// `c = 1/(4 kappa^2)`
    pub c: BigRational,
    /// Minimum class size for invoking the weighted Ramsey engine.
    pub m_threshold: usize,
}

impl ConstantsTight3 {
    fn derive_c(kappa: &BigUint) -> BigRational {
        let k = BigRational::from_integer(BigInt::from(kappa.clone()));
        BigRational::one() / (exact::rat_int(4) * &k * &k)
    }

    /// Literal paper-scale constants: `D = 2^2048`, `C = 2^(D^8)`,
    /// `c = D^-16/4`, threshold `2^16`.
    pub fn paper() -> Self {
        let kappa = BigUint::one() << 16384u32; // D^8 = 2^(8*2048)
        let c = Self::derive_c(&kappa);
        ConstantsTight3 {
            log2_d: 2048,
            kappa,
            c,
            m_threshold: 1 << 16,
        }
    }

    /// Small surrogates: `D = 4`, `C = 16`, `c = 1/64`, threshold `4`.
    pub fn desk() -> Self {
        let kappa = BigUint::from(4u32);
        let c = Self::derive_c(&kappa);
        ConstantsTight3 {
            log2_d: 2,
            kappa,
            c,
            m_threshold: 4,
        }
    }

    /// `f(n) <= 1` exactly when `n <= C`.
    pub fn f_le_1(&self, n: usize) -> bool {
        le_pow2(&BigUint::from(n), &self.kappa)
    }
}

/// `x <= 2^e` for big `e`.
fn le_pow2(x: &BigUint, e: &BigUint) -> bool {
    if x.bits() == 0 {
        return true;
    }
    let top = BigUint::from(x.bits() - 1);
    top < *e || (top == *e && x.count_ones() == 1)
}

/// `x >= 2^e` for big `e`.
fn ge_pow2(x: &BigUint, e: &BigUint) -> bool {
    if x.bits() == 0 {
        return false;
    }
    BigUint::from(x.bits() - 1) >= *e
}

/// Exact verdict for `product >= n * f(n)` at the given constants.
pub fn product_meets_nf(
    product: &BigUint,
    n: usize,
    k: &ConstantsTight3,
    log2_m: &BigUint,
) -> Result<bool> {
    let n_big = BigUint::from(n);
    let x = BigRational::new(BigInt::from(product.clone()), BigInt::from(n));
    let kappa_r = BigRational::from_integer(BigInt::from(k.kappa.clone()));
    let q = BigRational::new(BigInt::from(4u32) * BigInt::from(log2_m.clone()), BigInt::from(9u32));
    // interval selection: n <= m^{4/9} iff n^9 <= 2^{4 log2m}, etc.
    let n9 = n_big.pow(9);
    let (coef, shift) = if le_pow2(&n9, &(log2_m * 4u32)) {
        (k.c.clone(), kappa_r)
    } else if le_pow2(&n9, &(log2_m * 8u32)) {
        (&k.c * &k.c * &q * &q, kappa_r - &q)
    } else {
        let c3 = &k.c * &k.c * &k.c;
        let q4 = &q * &q * &q * &q;
        (c3 * q4, kappa_r - &q * exact::rat_int(2))
    };
    ge_coef_sq_log(&x, &coef, &shift, &n_big)
}

/// `8 * w >= m^{7/18}`, i.e. `(8w)^18 >= 2^{7 log2 m}`, exactly.
fn meets_max_exit(w: usize, log2_m: &BigUint) -> bool {
    let lhs = (BigUint::from(w) << 3u32).pow(18);
    ge_pow2(&lhs, &(log2_m * 7u32))
}

/// Which disjunct of the tight bound a run certifies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tight3Flag {
    /// Some witness reached `m^{7/18} / 8`.
    MaxWitness { colors: ColorSet },
    /// The witness-size product reached `n * f(n)`.
    ProductTight,
    /// Only the unconditional product bound `>= n` is certified (the case
    /// machinery's preconditions failed at this scale; the run is flagged).
    ProductWeakOnly,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct TraceStep {
    pub depth: usize,
    pub n: usize,
    /// 0 = base case, 1/2/3 the recursion cases.
    pub case: u8,
    /// Whether the two neighbor groups were swapped to restore size order.
    pub swapped: bool,
}

#[derive(Clone, Debug)]
pub struct Tight3Outcome {
    pub family: WitnessFamily,
    pub flag: Tight3Flag,
    pub trace: Vec<TraceStep>,
}

struct RecOut {
    fam: WitnessFamily,
    max_exit: bool,
}

/// The tight three-color extraction. `m = 2^log2_m` is the ambient scale
/// (a power of two, so every threshold evaluates exactly); `n <= m` required.
/// The result is never worse than `extract_triple` (pointwise maximum).
pub fn extract_tight3(
    f: &EdgeColoring,
    k: &ConstantsTight3,
    log2_m: &BigUint,
) -> Result<Tight3Outcome> {
    if f.r() != 3 {
        return Err(Error::invalid("tight extraction requires r = 3"));
    }
    let n = f.n();
    if !le_pow2(&BigUint::from(n), log2_m) {
        return Err(Error::invalid(format!("n={n} exceeds m=2^{log2_m}")));
    }
    let ids: Vec<usize> = (0..n).collect();
    let mut trace = Vec::new();
    let rec = tight_rec(f, &ids, k, log2_m, 0, &mut trace)?;
    let triple = triple_rec(f, &ids)?;
    let family = rec.fam.pointwise_max(triple);

    let best = family.best().expect("three pairs").clone();
    let flag = if rec.max_exit || meets_max_exit(best.size(), log2_m) {
        Tight3Flag::MaxWitness { colors: best.colors }
    } else {
        let product = family.product_of_sizes();
        if product < BigUint::from(n) {
            return Err(Error::PropertyViolation(format!(
                "tight family product {product} below n={n}"
            )));
        }
        if product_meets_nf(&product, n, k, log2_m)? {
            Tight3Flag::ProductTight
        } else {
            Tight3Flag::ProductWeakOnly
        }
    };
    Ok(Tight3Outcome { family, flag, trace })
}

fn union_pair(fams: &[&WitnessFamily], s: ColorSet) -> Witness {
    let mut verts = Vec::new();
    for fam in fams {
        if let Some(w) = fam.get(s) {
            verts.extend(w.vertices.iter());
        }
    }
    Witness::new(verts, s)
}

fn best_pair<'a>(fams: &[&'a WitnessFamily], s: ColorSet) -> Option<&'a Witness> {
    fams.iter().filter_map(|f| f.get(s)).max_by_key(|w| w.size())
}

fn tight_rec(
    f: &EdgeColoring,
    ids: &[usize],
    k: &ConstantsTight3,
    log2_m: &BigUint,
    depth: usize,
    trace: &mut Vec<TraceStep>,
) -> Result<RecOut> {
    let n = f.n();
    if k.f_le_1(n) || n == 1 {
        trace.push(TraceStep { depth, n, case: 0, swapped: false });
        return Ok(RecOut { fam: triple_rec(f, ids)?, max_exit: false });
    }
    let p = partition_of(f)?;
    let mut order: Vec<usize> = (0..p.parts.len()).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(p.parts[i].len()), i));

    let mut qit = p.q.iter();
    let (qa, qb) = (qit.next().expect("pair"), qit.next().expect("pair"));
    let red = (1..=3u8).find(|c| !p.q.contains(*c)).expect("third color");
    let chi = |i: usize, j: usize| f.color(p.parts[i][0], p.parts[j][0]);

    // Dominant-part regrouping.
    let lead = order[0];
    let mut grp_a: Vec<usize> = Vec::new(); // parts joined to the lead by qa
    let mut grp_b: Vec<usize> = Vec::new();
    for &j in &order[1..] {
        if chi(lead, j) == qa {
            grp_a.push(j);
        } else {
            grp_b.push(j);
        }
    }
    let size_of = |group: &[usize]| -> usize { group.iter().map(|&j| p.parts[j].len()).sum() };
    let (mut yellow, mut blue) = (qa, qb);
    let mut swapped = false;
    if size_of(&grp_b) > size_of(&grp_a) {
        std::mem::swap(&mut grp_a, &mut grp_b);
        std::mem::swap(&mut yellow, &mut blue);
        swapped = true;
    }
    let n1 = p.parts[lead].len();
    let n2 = size_of(&grp_a);
    let g_set = p.q;
    let o_set = ColorSet::pair(red, yellow);
    let p_set = ColorSet::pair(red, blue);

    // alpha >= (log C)^(-1/4)  <=>  part^4 * kappa >= n^4
    let thresh = |part: usize| -> bool {
        BigUint::from(part).pow(4) * &k.kappa >= BigUint::from(n).pow(4)
    };
    let case = if !thresh(n1) {
        3
    } else if thresh(n2) {
        1
    } else {
        2
    };
    trace.push(TraceStep { depth, n, case, swapped });

    if case == 1 || case == 2 {
        let mut group_fams: Vec<Option<WitnessFamily>> = Vec::with_capacity(3);
        for group in [vec![lead], grp_a, grp_b] {
            if group.is_empty() {
                group_fams.push(None);
                continue;
            }
            let mut verts: Vec<usize> = group.iter().flat_map(|&j| p.parts[j].iter().copied()).collect();
            verts.sort_unstable();
            let sub = f.restrict(&verts)?;
            let sub_ids: Vec<usize> = verts.iter().map(|&v| ids[v]).collect();
            let out = tight_rec(&sub, &sub_ids, k, log2_m, depth + 1, trace)?;
            if out.max_exit {
                return Ok(out);
            }
            group_fams.push(Some(out.fam));
        }
        let fams: Vec<&WitnessFamily> = group_fams.iter().flatten().collect();
        let f1 = group_fams[0].as_ref();
        let f2 = group_fams[1].as_ref();
        let f3 = group_fams[2].as_ref();

        let mut fam = WitnessFamily::new();
        fam.insert(union_pair(&fams, g_set));
        // o: the lead and its yellow group connect by yellow; p dually.
        let o_union = union_pair(&[f1, f2].into_iter().flatten().collect::<Vec<_>>(), o_set);
        let o_single = f3.and_then(|x| x.get(o_set));
        fam.insert(bigger(o_union, o_single));
        let p_union = union_pair(&[f1, f3].into_iter().flatten().collect::<Vec<_>>(), p_set);
        let p_single = f2.and_then(|x| x.get(p_set));
        fam.insert(bigger(p_union, p_single));

        let max_exit = fam.witnesses().any(|w| meets_max_exit(w.size(), log2_m));
        return Ok(RecOut { fam, max_exit });
    }

    // Case 3: every part is small. Recurse into all parts.
    let mut part_fams: Vec<WitnessFamily> = Vec::with_capacity(p.parts.len());
    for part in &p.parts {
        let sub = f.restrict(part)?;
        let sub_ids: Vec<usize> = part.iter().map(|&v| ids[v]).collect();
        let out = tight_rec(&sub, &sub_ids, k, log2_m, depth + 1, trace)?;
        if out.max_exit {
            return Ok(out);
        }
        part_fams.push(out.fam);
    }
    let all: Vec<&WitnessFamily> = part_fams.iter().collect();
    let g_union = union_pair(&all, g_set);
    if meets_max_exit(g_union.size(), log2_m) {
        let mut fam = WitnessFamily::new();
        fam.insert(g_union);
        fam.insert(best_pair(&all, o_set).expect("total").clone());
        fam.insert(best_pair(&all, p_set).expect("total").clone());
        return Ok(RecOut { fam, max_exit: true });
    }
    let mut o_best = best_pair(&all, o_set).expect("total").clone();
    let mut p_best = best_pair(&all, p_set).expect("total").clone();

    // Order parts by o_j * p_j ascending, stable.
    let mut op_order: Vec<usize> = (0..p.parts.len()).collect();
    op_order.sort_by_key(|&j| {
        (part_fams[j].get(o_set).unwrap().size() * part_fams[j].get(p_set).unwrap().size(), j)
    });

    // tau = floor(log2(2n/D^2)); dyadic classes live below it.
    let log2_2n = (BigUint::from(2 * n).bits() - 1) as i64;
    let tau = log2_2n - 2 * k.log2_d as i64;
    if tau >= 0 {
        let tau = tau as u64;
        let mut classes: std::collections::BTreeMap<u64, Vec<usize>> = Default::default();
        for &j in &op_order {
            let sz = p.parts[j].len();
            let i = (BigUint::from(sz).bits() - 1) as u64;
            if i <= tau {
                classes.entry(i).or_default().push(j);
            }
        }
        for (&i, class) in &classes {
            // B': |class| <= 2D * 2^{(7/8)(tau - i)}
            let lhs = BigUint::from(class.len()).pow(8);
            let rhs_exp = BigUint::from(8 + 8 * k.log2_d + 7 * (tau - i));
            if le_pow2(&lhs, &rhs_exp) {
                continue;
            }
            // B'': i <= log2(n m^{-7/18})  <=>  2^{18i + 7 log2m} <= n^18
            let b2_exp = BigUint::from(18 * i) + log2_m * 7u32;
            let n18 = BigUint::from(n).pow(18);
            if ge_pow2(&n18, &b2_exp) {
                continue; // i in B''
            }
            let half_pos = class.len() / 2;
            let slice = &class[half_pos..];
            if slice.len() < k.m_threshold.max(2) {
                continue;
            }
            // Weighted Ramsey on the quotient restricted to the slice.
            let sub_q = EdgeColoring::from_fn(slice.len(), 2, |x, y| {
                if chi(slice[x], slice[y]) == yellow {
                    1
                } else {
                    2
                }
            })?;
            let weights: Vec<WeightedVertex> = slice
                .iter()
                .map(|&j| {
                    WeightedVertex::new(
                        exact::rat_int(part_fams[j].get(o_set).unwrap().size() as i64),
                        exact::rat_int(part_fams[j].get(p_set).unwrap().size() as i64),
                    )
                })
                .collect();
            let wr = weighted_ramsey(&sub_q, 1, 2, &weights)?;
            let o_cand = union_pair(
                &wr.red.iter().map(|&x| &part_fams[slice[x]]).collect::<Vec<_>>(),
                o_set,
            );
            let p_cand = union_pair(
                &wr.blue.iter().map(|&x| &part_fams[slice[x]]).collect::<Vec<_>>(),
                p_set,
            );
            if o_cand.size() > o_best.size() {
                o_best = o_cand;
            }
            if p_cand.size() > p_best.size() {
                p_best = p_cand;
            }
        }
    }

    let mut fam = WitnessFamily::new();
    fam.insert(g_union);
    fam.insert(o_best);
    fam.insert(p_best);
    let max_exit = fam.witnesses().any(|w| meets_max_exit(w.size(), log2_m));
    Ok(RecOut { fam, max_exit })
}

fn bigger(a: Witness, b: Option<&Witness>) -> Witness {
    match b {
        Some(b) if b.size() > a.size() => b.clone(),
        _ => a,
    }
}
