//! Exact comparison machinery: big rationals, outward-rounded interval
//! arithmetic for logarithms, and integer-power comparisons.
//!
//! Every inequality this crate asserts against a quantity involving `log2`
//! goes through one of two exact routes:
//!
//! * pure integer/rational comparisons after clearing denominators (used
//!   whenever all inputs are powers of two or the exponents are small), or
//! * outward-rounded interval brackets of `log2`/`2^x` refined until the two
//!   sides separate. Refinement is deterministic; if a comparison fails to
//!   separate at the precision cap the caller gets an error instead of a
//!   silently rounded verdict.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

use crate::error::{Error, Result};

pub fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

pub fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Binomial coefficient as an exact big integer.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Largest `e` with `2^e <= v`; requires `v > 0`.
pub fn floor_log2_rational(v: &BigRational) -> i64 {
    assert!(v.is_positive(), "floor_log2 of non-positive value");
    let p = v.numer().magnitude();
    let q = v.denom().magnitude();
    let mut e = p.bits() as i64 - q.bits() as i64;
    // 2^e <= p/q  <=>  q << e <= p (for e >= 0), or q <= p << -e.
    let le = |e: i64| -> bool {
        if e >= 0 {
            q << (e as u64) <= *p
        } else {
            *q <= p << ((-e) as u64)
        }
    };
    while !le(e) {
        e -= 1;
    }
    while le(e + 1) {
        e += 1;
    }
    e
}

/// If `v` is an exact power of two, its exponent.
pub fn exact_log2_rational(v: &BigRational) -> Option<i64> {
    if !v.is_positive() {
        return None;
    }
    let p = v.numer().magnitude();
    let q = v.denom().magnitude();
    let pow2 = |x: &BigUint| x.count_ones() == 1;
    if pow2(p) && pow2(q) {
        Some(p.bits() as i64 - q.bits() as i64)
    } else {
        None
    }
}

/// Closed rational interval with outward rounding conventions.
#[derive(Clone, Debug)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Interval {
    pub fn point(v: BigRational) -> Self {
        Interval { hi: v.clone(), lo: v }
    }

    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        Interval {
            lo: &self.lo - &o.hi,
            hi: &self.hi - &o.lo,
        }
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
        }
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let cands = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = cands.iter().min().unwrap().clone();
        let hi = cands.iter().max().unwrap().clone();
        Interval { lo, hi }
    }

    pub fn scale(&self, c: &BigRational) -> Interval {
        self.mul(&Interval::point(c.clone()))
    }

    pub fn square(&self) -> Interval {
        // Tighter than mul(self, self) when the interval straddles 0.
        if !self.lo.is_negative() {
            Interval {
                lo: &self.lo * &self.lo,
                hi: &self.hi * &self.hi,
            }
        } else if !self.hi.is_positive() {
            Interval {
                lo: &self.hi * &self.hi,
                hi: &self.lo * &self.lo,
            }
        } else {
            let a = &self.lo * &self.lo;
            let b = &self.hi * &self.hi;
            Interval {
                lo: BigRational::zero(),
                hi: a.max(b),
            }
        }
    }

    /// Sign of every value in the interval, if uniform.
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }
}

/// Brackets `log2(v)` within `2^{1-out_bits}` for rational `v > 0`.
///
/// Exact (a point interval) when `v` is a power of two.
pub fn log2_interval(v: &BigRational, out_bits: u32) -> Interval {
    assert!(v.is_positive());
    if let Some(e) = exact_log2_rational(v) {
        return Interval::point(rat_int(e));
    }
    let e = floor_log2_rational(v);
    // x = v / 2^e in [1, 2)
    let x = if e >= 0 {
        v / BigRational::from_integer(BigInt::from(1) << e as u64)
    } else {
        v * BigRational::from_integer(BigInt::from(1) << (-e) as u64)
    };
    // Fixed-point mantissas at F fraction bits; each squaring is truncated
    // outward so [m_lo, m_hi] always brackets the true mantissa.
    let f: u64 = out_bits as u64 + 32;
    let scale: BigUint = BigUint::one() << f;
    let p = x.numer().magnitude().clone();
    let q = x.denom().magnitude().clone();
    let mut m_lo: BigUint = &p * &scale / &q;
    let mut m_hi: BigUint = (&p * &scale + &q - BigUint::one()) / &q;

    let mut acc = BigUint::zero();
    let mut produced: u64 = 0;
    let two_scale: BigUint = BigUint::one() << (f + 1);
    for _ in 0..out_bits {
        m_lo = (&m_lo * &m_lo) >> f;
        m_hi = ((&m_hi * &m_hi) + (&scale - BigUint::one())) >> f;
        if m_hi < two_scale {
            acc <<= 1;
        } else if m_lo >= two_scale {
            acc = (acc << 1) + BigUint::one();
            m_lo >>= 1;
            m_hi = (&m_hi + BigUint::one()) >> 1;
        } else {
            // Truncation noise straddles the bit boundary; stop with what we
            // have, the bracket below stays outward-correct.
            break;
        }
        produced += 1;
    }
    let denom = BigInt::from(1) << produced;
    let lo = rat_int(e) + BigRational::new(BigInt::from(acc.clone()), denom.clone());
    let hi = rat_int(e) + BigRational::new(BigInt::from(acc + big(2)), denom);
    Interval::new(lo, hi)
}

/// Brackets `2^e` for rational `e`.
pub fn pow2_interval(e: &BigRational, out_bits: u32) -> Interval {
    if e.is_integer() {
        let n = e.to_integer();
        return Interval::point(pow2_int(&n));
    }
    let n = e.floor().to_integer();
    let frac = e - BigRational::from_integer(n.clone()); // in (0, 1)
    let f: u64 = out_bits as u64 + 16;
    let scale: BigUint = BigUint::one() << f;

    // Binary digits of frac.
    let mut digits = Vec::with_capacity(out_bits as usize);
    let mut p = frac.numer().magnitude().clone();
    let q = frac.denom().magnitude().clone();
    for _ in 0..out_bits {
        p <<= 1;
        if p >= q {
            digits.push(true);
            p -= &q;
        } else {
            digits.push(false);
        }
    }

    // Iterated square roots of 2 as outward fixed-point brackets.
    let mut roots: Vec<(BigUint, BigUint)> = Vec::with_capacity(digits.len());
    let mut r_lo: BigUint = BigUint::from(2u32) << f; // 2.0
    let mut r_hi: BigUint = r_lo.clone();
    for _ in 0..digits.len() {
        // sqrt(m / 2^F) = isqrt(m * 2^F) / 2^F, floor for lo / +1 for hi.
        r_lo = (&r_lo << f).sqrt();
        r_hi = (&r_hi << f).sqrt() + BigUint::one();
        roots.push((r_lo.clone(), r_hi.clone()));
    }

    let mut prod_lo = scale.clone();
    let mut prod_hi = scale.clone();
    for (i, &d) in digits.iter().enumerate() {
        if d {
            prod_lo = (&prod_lo * &roots[i].0) >> f;
            prod_hi = ((&prod_hi * &roots[i].1) >> f) + BigUint::one();
        }
    }
    // Account for the truncated tail of the exponent: the true fractional
    // part exceeds the digits used by < 2^-out_bits, so multiply the upper
    // end by 2^{2^-out_bits} < 1 + 2^{1-out_bits} (for out_bits >= 1).
    let tail_num = BigUint::one() << (out_bits as u64);
    let hi_adj = BigRational::new(
        BigInt::from((tail_num.clone() + big(2)) * prod_hi),
        BigInt::from(tail_num << f),
    );
    let lo = BigRational::new(BigInt::from(prod_lo), BigInt::from(BigUint::one() << f));
    let base = pow2_int(&n);
    Interval::new(&base * lo, base * hi_adj)
}

fn pow2_int(n: &BigInt) -> BigRational {
    if n.is_negative() {
        BigRational::new(BigInt::one(), BigInt::one() << (-n).to_u64().unwrap())
    } else {
        BigRational::from_integer(BigInt::one() << n.to_u64().unwrap())
    }
}

/// Raises a positive rational to a rational power, as an interval.
pub fn pow_rational_interval(base: &BigRational, exp: &BigRational, out_bits: u32) -> Interval {
    assert!(base.is_positive());
    if exp.is_integer() {
        let e = exp.to_integer();
        return Interval::point(pow_rational_int(base, &e));
    }
    // base^exp = 2^(exp * log2 base)
    let lg = log2_interval(base, out_bits + 8);
    let e_iv = lg.scale(exp);
    // 2^interval: monotone.
    let lo = pow2_interval(&e_iv.lo, out_bits).lo;
    let hi = pow2_interval(&e_iv.hi, out_bits).hi;
    Interval::new(lo, hi)
}

pub fn pow_rational_int(base: &BigRational, e: &BigInt) -> BigRational {
    let mag = e.magnitude().to_u32().expect("exponent too large");
    let p = base.numer().pow(mag);
    let q = base.denom().pow(mag);
    if e.is_negative() {
        BigRational::new(q, p)
    } else {
        BigRational::new(p, q)
    }
}

/// Refinement driver: evaluates `expr` at growing precision until its sign is
/// determined. `expr` must return outward-correct brackets of one fixed real
/// number.
pub fn resolve_sign<F: FnMut(u32) -> Interval>(mut expr: F, max_bits: u32) -> Result<Ordering> {
    let mut bits = 24u32;
    loop {
        let iv = expr(bits);
        if let Some(s) = iv.sign() {
            return Ok(s);
        }
        if iv.lo.is_zero() && iv.hi.is_zero() {
            return Ok(Ordering::Equal);
        }
        if bits >= max_bits {
            return Err(Error::ScaleCap(format!(
                "interval comparison unresolved at {bits} bits (bracket [{}, {}])",
                iv.lo, iv.hi
            )));
        }
        bits = (bits * 2).min(max_bits);
    }
}

pub const DEFAULT_MAX_BITS: u32 = 4096;

/// Exact verdict for `x >= coef * (shift + log2(v))^2` with rational
/// `x, coef >= 0, shift` and integer `v >= 1`.
pub fn ge_coef_sq_log(x: &BigRational, coef: &BigRational, shift: &BigRational, v: &BigUint) -> Result<bool> {
    if coef.is_zero() {
        return Ok(!x.is_negative());
    }
    let vr = BigRational::from_integer(BigInt::from(v.clone()));
    let sign = resolve_sign(
        |bits| {
            let lg = log2_interval(&vr, bits);
            let term = lg.add(&Interval::point(shift.clone())).square().scale(coef);
            Interval::point(x.clone()).sub(&term)
        },
        DEFAULT_MAX_BITS,
    )?;
    Ok(sign != Ordering::Less)
}

/// Exact verdict for `x >= coef * log2(v)^2` with rational `v > 0`
/// (`v` may be a non-integer ratio, e.g. `t / (m1*m2)`).
pub fn ge_coef_sq_log_rational(x: &BigRational, coef: &BigRational, v: &BigRational) -> Result<bool> {
    if coef.is_zero() {
        return Ok(!x.is_negative());
    }
    let sign = resolve_sign(
        |bits| {
            let lg = log2_interval(v, bits);
            let term = lg.square().scale(coef);
            Interval::point(x.clone()).sub(&term)
        },
        DEFAULT_MAX_BITS,
    )?;
    Ok(sign != Ordering::Less)
}

/// A value of the form `rat + sum_i coeff_i * log2(arg_i)` with positive
/// rational `arg_i`. Closed under addition and scaling; sign determination is
/// exact: a cleared-denominator big-integer comparison when the exponents are
/// affordable, outward-rounded interval refinement otherwise.
#[derive(Clone, Debug, Default)]
pub struct LogVal {
    pub rat: BigRational,
    pub terms: Vec<(BigRational, BigRational)>,
}

impl LogVal {
    pub fn zero() -> Self {
        LogVal::default()
    }

    pub fn from_rat(rat: BigRational) -> Self {
        LogVal { rat, terms: Vec::new() }
    }

    /// `coeff * log2(arg)`, `arg > 0`.
    pub fn log_term(coeff: BigRational, arg: BigRational) -> Self {
        assert!(arg.is_positive(), "log of non-positive value");
        LogVal { rat: BigRational::zero(), terms: vec![(coeff, arg)] }
    }

    pub fn add(&self, o: &LogVal) -> LogVal {
        let mut terms = self.terms.clone();
        terms.extend(o.terms.iter().cloned());
        LogVal { rat: &self.rat + &o.rat, terms }
    }

    pub fn sub(&self, o: &LogVal) -> LogVal {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> LogVal {
        LogVal {
            rat: -self.rat.clone(),
            terms: self.terms.iter().map(|(c, a)| (-c.clone(), a.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> LogVal {
        LogVal {
            rat: &self.rat * c,
            terms: self.terms.iter().map(|(t, a)| (t * c, a.clone())).collect(),
        }
    }

    fn simplified(&self) -> LogVal {
        let mut rat = self.rat.clone();
        let mut merged: std::collections::BTreeMap<BigRational, BigRational> = Default::default();
        for (c, a) in &self.terms {
            if c.is_zero() || a.is_one() {
                continue;
            }
            // exact powers of two fold into the rational part
            if let Some(e) = exact_log2_rational(a) {
                rat += c * rat_int(e);
            } else {
                *merged.entry(a.clone()).or_insert_with(BigRational::zero) += c;
            }
        }
        let terms = merged
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(a, c)| (c, a))
            .collect();
        LogVal { rat, terms }
    }

    /// Exact sign of the value.
    pub fn sign(&self) -> Result<Ordering> {
        let s = self.simplified();
        if s.terms.is_empty() {
            return Ok(s.rat.cmp(&BigRational::zero()));
        }
        // Fast path: clear denominators, compare prod arg^(c*N) with 2^(-rat*N).
        let mut n: BigUint = s.rat.denom().magnitude().clone();
        for (c, _) in &s.terms {
            n = n.lcm(c.denom().magnitude());
        }
        if let Some(nn) = n.to_u64() {
            let nr = rat_int(nn as i64);
            let rat_n = (&s.rat * &nr).to_integer();
            let mut cost: u64 = rat_n.magnitude().to_u64().unwrap_or(u64::MAX / 4);
            let mut ok = true;
            let mut powed: Vec<(BigInt, &BigRational)> = Vec::new();
            for (c, a) in &s.terms {
                let e = (c * &nr).to_integer();
                let bits = a.numer().magnitude().bits() + a.denom().magnitude().bits();
                match e.magnitude().to_u64() {
                    Some(em) if em.saturating_mul(bits) < (1 << 14) => {
                        cost = cost.saturating_add(em.saturating_mul(bits));
                        powed.push((e, a));
                    }
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok && cost < (1 << 14) {
                let mut lhs = BigRational::one();
                for (e, a) in powed {
                    lhs *= pow_rational_int(a, &e);
                }
                let rhs = pow2_int(&(-rat_n));
                return Ok(lhs.cmp(&rhs));
            }
        }
        // Interval path.
        resolve_sign(
            |bits| {
                let mut iv = Interval::point(s.rat.clone());
                for (c, a) in &s.terms {
                    iv = iv.add(&log2_interval(a, bits).scale(c));
                }
                iv
            },
            DEFAULT_MAX_BITS,
        )
    }

    pub fn is_ge(&self, other: &LogVal) -> Result<bool> {
        Ok(self.sub(other).sign()? != Ordering::Less)
    }

    /// The pointwise larger of the two values.
    pub fn max(self, other: LogVal) -> Result<LogVal> {
        if self.is_ge(&other)? {
            Ok(self)
        } else {
            Ok(other)
        }
    }
}

/// `ceil(v^(1/3))`, the least `k` with `k^3 >= v`.
pub fn ceil_cbrt(v: &BigUint) -> BigUint {
    if v.is_zero() {
        return BigUint::zero();
    }
    let r = v.nth_root(3);
    if &(&r * &r * &r) >= v {
        r
    } else {
        r + BigUint::one()
    }
}

/// Compares `m^me * k^le` against the positive integer `w`, exactly, where
/// `me` and `le` are rationals with small denominators. Used for realizing
/// symbolic weights `m^{a/b} (log m)^{c/d}` as integers.
pub fn cmp_pow_product(m: &BigUint, k: &BigUint, me: &BigRational, le: &BigRational, w: &BigUint) -> Ordering {
    // Raise both sides to N = lcm(denoms); move negative powers across.
    let bd = me.denom().magnitude().to_u64().unwrap();
    let ld = le.denom().magnitude().to_u64().unwrap();
    let n = bd.lcm(&ld);
    let me_n = (me * rat_int(n as i64)).to_integer();
    let le_n = (le * rat_int(n as i64)).to_integer();
    let mut lhs = BigUint::one();
    let mut rhs = w.pow(n as u32);
    for (base, e) in [(m, me_n), (k, le_n)] {
        let mag = e.magnitude().to_u32().expect("exponent too large");
        if e.is_negative() {
            rhs *= base.pow(mag);
        } else {
            lhs *= base.pow(mag);
        }
    }
    lhs.cmp(&rhs)
}

/// `ceil(m^me * k^le)` for positive integers `m, k` and small-denominator
/// rational exponents.
pub fn ceil_pow_product(m: &BigUint, k: &BigUint, me: &BigRational, le: &BigRational) -> BigUint {
    // Bracket with intervals, then pin the boundary with the exact comparator.
    let m_r = BigRational::from_integer(BigInt::from(m.clone()));
    let k_r = BigRational::from_integer(BigInt::from(k.clone()));
    let mut bits = 32;
    loop {
        let iv = pow_rational_interval(&m_r, me, bits).mul(&pow_rational_interval(&k_r, le, bits));
        let lo_c = iv.lo.ceil().to_integer().magnitude().clone();
        let hi_c = iv.hi.ceil().to_integer().magnitude().clone();
        if lo_c == hi_c {
            return lo_c;
        }
        if &hi_c - &lo_c == BigUint::one() {
            // value in (lo_c - 1, hi_c]; it exceeds lo_c iff m^me k^le > lo_c
            return match cmp_pow_product(m, k, me, le, &lo_c) {
                Ordering::Greater => hi_c,
                _ => lo_c,
            };
        }
        bits *= 2;
        assert!(bits <= DEFAULT_MAX_BITS, "ceil_pow_product failed to converge");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floor_log2_basics() {
        assert_eq!(floor_log2_rational(&rat_int(1)), 0);
        assert_eq!(floor_log2_rational(&rat_int(2)), 1);
        assert_eq!(floor_log2_rational(&rat_int(1023)), 9);
        assert_eq!(floor_log2_rational(&rat_int(1024)), 10);
        assert_eq!(floor_log2_rational(&rat(1, 3)), -2);
        assert_eq!(floor_log2_rational(&rat(3, 4)), -1);
    }

    #[test]
    fn log2_exact_powers() {
        let iv = log2_interval(&rat_int(8), 64);
        assert_eq!(iv.lo, iv.hi);
        assert_eq!(iv.lo, rat_int(3));
        let iv = log2_interval(&rat(1, 4), 64);
        assert_eq!(iv.lo, rat_int(-2));
    }

    #[test]
    fn log2_ten_bracket() {
        let iv = log2_interval(&rat_int(10), 40);
        // log2(10) = 3.321928...
        assert!(iv.lo < rat(33220, 10000));
        assert!(iv.hi > rat(33219, 10000));
        assert!(&iv.hi - &iv.lo < rat(1, 1_000_000));
    }

    #[test]
    fn pow2_half_brackets_sqrt2() {
        let iv = pow2_interval(&rat(1, 2), 40);
        // sqrt(2) = 1.41421356...
        assert!(iv.lo < rat(1414214, 1000000));
        assert!(iv.hi > rat(1414213, 1000000));
    }

    #[test]
    fn resolve_simple_signs() {
        // log2(6)^2 vs 7: 2.585^2 = 6.68 < 7
        assert!(ge_coef_sq_log_rational(&rat_int(7), &rat_int(1), &rat_int(6)).unwrap());
        // log2(6)^2 vs 6.5: 6.68 > 6.5
        assert!(!ge_coef_sq_log_rational(&rat(13, 2), &rat_int(1), &rat_int(6)).unwrap());
    }

    #[test]
    fn kl_quarter_log_sq() {
        // k*l >= 1/4 log2(t)^2 for t=6, k=l=1: 1 >= 1.67? No.
        assert!(!ge_coef_sq_log_rational(&rat_int(1), &rat(1, 4), &rat_int(6)).unwrap());
        // k*l = 2: 2 >= 1.67 yes.
        assert!(ge_coef_sq_log_rational(&rat_int(2), &rat(1, 4), &rat_int(6)).unwrap());
    }

    #[test]
    fn ceil_cbrt_examples() {
        assert_eq!(ceil_cbrt(&big(27)), big(3));
        assert_eq!(ceil_cbrt(&big(28)), big(4));
        assert_eq!(ceil_cbrt(&big(1)), big(1));
        assert_eq!(ceil_cbrt(&big(2)), big(2));
    }

    #[test]
    fn ceil_pow_product_known_values() {
        // 2^40 * 40: ceil((2^40*40)^(1/5)) computed per the triangle-weight
        // formula m^{1/r} (log m)^{(r-3)/2r} with r=5, m=2^40.
        let w = ceil_pow_product(&(BigUint::one() << 40u32), &big(40), &rat(1, 5), &rat(1, 5));
        assert_eq!(w, big(536));
        // matching weight m^{2/r} (log m)^{-3/r}: 2^16 * 40^{-3/5}
        let w = ceil_pow_product(&(BigUint::one() << 40u32), &big(40), &rat(2, 5), &rat(-3, 5));
        assert_eq!(w, big(7166));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 3), big(20));
        assert_eq!(binomial(5, 0), big(1));
        assert_eq!(binomial(4, 5), big(0));
    }

    #[test]
    fn logval_rational_paths() {
        // 3 + 2*log2(1/8) = 3 - 6 = -3
        let v = LogVal::from_rat(rat_int(3)).add(&LogVal::log_term(rat_int(2), rat(1, 8)));
        assert_eq!(v.sign().unwrap(), Ordering::Less);
        // log2(9) - 2 log2(3) = 0
        let v = LogVal::log_term(rat_int(1), rat_int(9)).sub(&LogVal::log_term(rat_int(2), rat_int(3)));
        assert_eq!(v.sign().unwrap(), Ordering::Equal);
        // 2 - log2(3) > 0
        let v = LogVal::from_rat(rat_int(2)).sub(&LogVal::log_term(rat_int(1), rat_int(3)));
        assert_eq!(v.sign().unwrap(), Ordering::Greater);
        // fractional coefficient: (1/2) log2(2^31) - 15 = 0.5 > 0
        let v = LogVal::log_term(rat(1, 2), BigRational::from_integer(BigInt::from(1u64 << 31)))
            .sub(&LogVal::from_rat(rat_int(15)));
        assert_eq!(v.sign().unwrap(), Ordering::Greater);
    }

    #[test]
    fn logval_interval_fallback() {
        // huge exponent denominators force the interval route:
        // (1/2^35) * log2(3) vs (1/2^35) * log2(5): negative difference
        let tiny = BigRational::new(BigInt::one(), BigInt::one() << 35u32);
        let v = LogVal::log_term(tiny.clone(), rat_int(3)).sub(&LogVal::log_term(tiny, rat_int(5)));
        assert_eq!(v.sign().unwrap(), Ordering::Less);
    }
}
