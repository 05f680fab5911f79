//! Exponent sequences along a single axis.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exponents::{Axis, Exponent, LexExponent};
use crate::rat::{gcd_q, is_int, lcm_q, pow_q, q, to_f64, to_i64, Q};
use crate::supcomp::Cut;

/// An increasing rational sequence `s(n)` giving the coordinate of the n-th point on an axis.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Seq {
    /// `lim - a/n` for `n >= 1`.
    Harm { lim: Q, a: Q },
    /// `lim - a·r^n` for `n ∈ ℤ`, `0 < r < 1`, normalised so `r < a <= 1`.
    Geo { lim: Q, a: Q, r: Q },
    /// `off + a·n` for `n ∈ ℤ`, normalised so `0 <= off < a`.
    Arith { off: Q, a: Q },
    /// `off - m·x_n/y_n` for `n >= 1`, where `x_n + y_n√d` are powers of the fundamental unit.
    Pell { off: Q, m: Q, d: u64 },
}

/// Index map `n ↦ α·n + β` into a unified sequence.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Reindex {
    pub alpha: i64,
    pub beta: i64,
}

impl Reindex {
    pub const ID: Reindex = Reindex { alpha: 1, beta: 0 };

    pub fn apply(&self, n: i64) -> i64 {
        self.alpha * n + self.beta
    }
}

/// Fundamental solution of `x² - d·y² = 1`.
pub fn pell_fundamental(d: u64) -> (BigInt, BigInt) {
    // Continued fraction expansion of √d.
    let a0 = (d as f64).sqrt() as u64;
    let a0 = if (a0 + 1) * (a0 + 1) <= d { a0 + 1 } else if a0 * a0 > d { a0 - 1 } else { a0 };
    let (mut m, mut dd, mut a) = (0i128, 1i128, a0 as i128);
    let (mut p0, mut p1) = (BigInt::one(), BigInt::from(a0));
    let (mut q0, mut q1) = (BigInt::zero(), BigInt::one());
    loop {
        if &p1 * &p1 - BigInt::from(d) * &q1 * &q1 == BigInt::one() {
            return (p1, q1);
        }
        m = dd * a - m;
        dd = (d as i128 - m * m) / dd;
        a = (a0 as i128 + m) / dd;
        let p2 = BigInt::from(a) * &p1 + &p0;
        let q2 = BigInt::from(a) * &q1 + &q0;
        p0 = p1;
        p1 = p2;
        q0 = q1;
        q1 = q2;
    }
}

/// `(x_n, y_n)` with `x_n + y_n√d = (x_1 + y_1√d)^n`.
pub fn pell_power(d: u64, n: u64) -> (BigInt, BigInt) {
    let (x1, y1) = pell_fundamental(d);
    let dd = BigInt::from(d);
    let mul = |a: &(BigInt, BigInt), b: &(BigInt, BigInt)| {
        (&a.0 * &b.0 + &dd * &a.1 * &b.1, &a.0 * &b.1 + &a.1 * &b.0)
    };
    let mut result = (BigInt::one(), BigInt::zero());
    let mut base = (x1, y1);
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            result = mul(&result, &base);
        }
        base = mul(&base, &base);
        e >>= 1;
    }
    result
}

impl Seq {
    pub fn harm(lim: Q, a: Q) -> Seq {
        Seq::Harm { lim, a }
    }

    pub fn is_pell(&self) -> bool {
        matches!(self, Seq::Pell { .. })
    }

    /// Smallest valid index, if bounded below.
    pub fn min_index(&self) -> Option<i64> {
        match self {
            Seq::Harm { .. } | Seq::Pell { .. } => Some(1),
            _ => None,
        }
    }

    pub fn valid(&self, n: i64) -> bool {
        self.min_index().map_or(true, |m| n >= m)
    }

    pub fn value(&self, n: i64) -> Q {
        match self {
            Seq::Harm { lim, a } => lim - a / q(n),
            Seq::Geo { lim, a, r } => lim - a * pow_q(r, n),
            Seq::Arith { off, a } => off + a * q(n),
            Seq::Pell { off, m, d } => {
                let (x, y) = pell_power(*d, n.max(0) as u64);
                off - m * Q::new(x, y)
            }
        }
    }

    pub fn value_f64(&self, n: i64) -> f64 {
        match self {
            Seq::Harm { lim, a } => to_f64(lim) - to_f64(a) / n as f64,
            Seq::Geo { lim, a, r } => to_f64(lim) - to_f64(a) * to_f64(r).powf(n as f64),
            Seq::Arith { off, a } => to_f64(off) + to_f64(a) * n as f64,
            Seq::Pell { off, m, d } => to_f64(off) - to_f64(m) * (*d as f64).sqrt(),
        }
    }

    /// The limit as an exponent component along generator `gen`; `None` if unbounded.
    pub fn limit(&self, gen: u64) -> Option<Exponent> {
        match self {
            Seq::Harm { lim, .. } | Seq::Geo { lim, .. } => Some(Exponent::term(gen, lim.clone())),
            Seq::Arith { .. } => None,
            Seq::Pell { off, m, d } => {
                Some(Exponent::term(gen, off.clone()).add(&Exponent::term(*d, -m.clone())))
            }
        }
    }

    /// The supremum cut contributed by this factor on its axis, in a group of rank `rank`.
    pub fn limit_cut(&self, axis: Axis, rank: usize) -> Cut {
        let mut vals = vec![Exponent::zero(); axis.level];
        match self.limit(axis.gen) {
            Some(l) => {
                vals.push(l);
                Cut::below(vals)
            }
            None => {
                let _ = rank;
                Cut::above(vals)
            }
        }
    }

    /// Shifts every value by `c`.
    pub fn shifted(&self, c: &Q) -> Seq {
        match self {
            Seq::Harm { lim, a } => Seq::Harm { lim: lim + c, a: a.clone() },
            Seq::Geo { lim, a, r } => Seq::Geo { lim: lim + c, a: a.clone(), r: r.clone() },
            Seq::Arith { off, a } => Seq::Arith { off: off + c, a: a.clone() },
            Seq::Pell { off, m, d } => Seq::Pell { off: off + c, m: m.clone(), d: *d },
        }
    }

    /// Normal form of the parameters together with the index map into it.
    pub fn canonical(&self) -> (Seq, Reindex) {
        match self {
            Seq::Geo { lim, a, r } => {
                let mut a = a.clone();
                let mut k = 0i64;
                while a > Q::one() {
                    a *= r;
                    k += 1;
                }
                while a <= *r {
                    a /= r;
                    k -= 1;
                }
                (Seq::Geo { lim: lim.clone(), a, r: r.clone() }, Reindex { alpha: 1, beta: -k })
            }
            Seq::Arith { off, a } => {
                let k = (off / a).floor();
                let k_i = to_i64(&k).expect("arith offset fits i64");
                let off2 = off - a * k.clone();
                (Seq::Arith { off: off2, a: a.clone() }, Reindex { alpha: 1, beta: k_i })
            }
            _ => (self.clone(), Reindex::ID),
        }
    }

    /// The index whose value is `x`, if any.
    pub fn index_of(&self, x: &Q) -> Option<i64> {
        match self {
            Seq::Harm { lim, a } => {
                let d = lim - x;
                if !d.is_positive() {
                    return None;
                }
                let n = a / d;
                if is_int(&n) {
                    to_i64(&n)
                } else {
                    None
                }
            }
            Seq::Geo { lim, a, r } => {
                let d = lim - x;
                if !d.is_positive() {
                    return None;
                }
                let ratio = d / a;
                let est = (to_f64(&ratio).ln() / to_f64(r).ln()).round();
                if !est.is_finite() {
                    return None;
                }
                let est = est as i64;
                (est - 2..=est + 2).find(|&n| pow_q(r, n) == ratio)
            }
            Seq::Arith { off, a } => {
                let n = (x - off) / a;
                if is_int(&n) {
                    to_i64(&n)
                } else {
                    None
                }
            }
            Seq::Pell { .. } => {
                let target = to_f64(x);
                let mut n = 1;
                loop {
                    let v = self.value(n);
                    if &v == x {
                        return Some(n);
                    }
                    if v > *x || n > 200 {
                        return None;
                    }
                    let _ = target;
                    n += 1;
                }
            }
        }
    }

    /// Smallest index `n >= start` with `pred(n)`, for a predicate monotone in `n`.
    pub fn first_index(start: i64, limit: i64, mut pred: impl FnMut(i64) -> bool) -> Option<i64> {
        if pred(start) {
            return Some(start);
        }
        let mut lo = start;
        let mut step = 1i64;
        let hi;
        loop {
            let cand = lo.checked_add(step)?;
            if cand - start > limit {
                if pred(start + limit) {
                    hi = start + limit;
                    break;
                }
                return None;
            }
            if pred(cand) {
                hi = cand;
                break;
            }
            lo = cand;
            step = step.saturating_mul(2);
        }
        let (mut lo, mut hi) = (lo, hi);
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if pred(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Some(hi)
    }

    /// Point `base + s(n)·e_axis`.
    pub fn point(&self, base: &LexExponent, axis: Axis, n: i64) -> LexExponent {
        let mut p = base.clone();
        let v = p.c[axis.level].coef(axis.gen) + self.value(n);
        p.c[axis.level].set_coef(axis.gen, v);
        p
    }
}

fn prime_exponents(mut n: BigInt) -> Option<BTreeMap<u64, i64>> {
    let mut out = BTreeMap::new();
    n = n.abs();
    let mut p = 2u64;
    while BigInt::from(p) * BigInt::from(p) <= n {
        if p > 2_000_000 {
            return None;
        }
        let bp = BigInt::from(p);
        while (&n % &bp).is_zero() {
            n /= &bp;
            *out.entry(p).or_insert(0) += 1;
        }
        p += 1;
    }
    if n > BigInt::one() {
        out.insert(n.to_u64()?, 1);
    }
    Some(out)
}

fn vector_of(x: &Q) -> Option<BTreeMap<u64, i64>> {
    let mut v = prime_exponents(x.numer().clone())?;
    for (p, e) in prime_exponents(x.denom().clone())? {
        *v.entry(p).or_insert(0) -= e;
    }
    v.retain(|_, e| *e != 0);
    Some(v)
}

/// Writes `r = ρ^p`, `r' = ρ^p'` and `ratio = ρ^k` for a common rational `ρ`.
fn common_root(r: &Q, r2: &Q, ratio: &Q) -> Option<(Q, i64, i64, i64)> {
    let v1 = vector_of(r)?;
    let v2 = vector_of(r2)?;
    let vr = vector_of(ratio)?;
    let g1 = v1.values().fold(0i64, |g, e| g.gcd(e));
    let u: BTreeMap<u64, i64> = v1.iter().map(|(p, e)| (*p, e / g1)).collect();
    let mult = |v: &BTreeMap<u64, i64>| -> Option<i64> {
        if v.is_empty() {
            return Some(0);
        }
        if v.keys().collect::<Vec<_>>() != u.keys().collect::<Vec<_>>() {
            return None;
        }
        let (p0, e0) = v.iter().next().unwrap();
        let k = e0 / u[p0];
        if v.iter().all(|(p, e)| *e == k * u[p]) {
            Some(k)
        } else {
            None
        }
    };
    let p2 = mult(&v2)?;
    let k = mult(&vr)?;
    let mut rho = Q::one();
    for (p, e) in &u {
        rho *= pow_q(&q(*p as i64), *e);
    }
    Some((rho, g1, p2, k))
}

/// Finds a sequence `u` with `s(n) = u(α·n+β)` and `t(m) = u(α'·m+β')`, when the two
/// sequences can share infinitely many values.
pub fn unify(s: &Seq, t: &Seq) -> Option<(Seq, Reindex, Reindex)> {
    if s == t {
        return Some((s.clone(), Reindex::ID, Reindex::ID));
    }
    match (s, t) {
        (Seq::Harm { lim: l1, a: a1 }, Seq::Harm { lim: l2, a: a2 }) if l1 == l2 => {
            let g = lcm_q(a1, a2);
            let al1 = to_i64(&(&g / a1))?;
            let al2 = to_i64(&(&g / a2))?;
            Some((
                Seq::Harm { lim: l1.clone(), a: g },
                Reindex { alpha: al1, beta: 0 },
                Reindex { alpha: al2, beta: 0 },
            ))
        }
        (Seq::Geo { lim: l1, a: a1, r: r1 }, Seq::Geo { lim: l2, a: a2, r: r2 }) if l1 == l2 => {
            let (rho, p1, p2, k) = common_root(r1, r2, &(a2 / a1))?;
            if p1 <= 0 || p2 <= 0 {
                return None;
            }
            let u = Seq::Geo { lim: l1.clone(), a: a1.clone(), r: rho };
            let (uc, ri) = u.canonical();
            Some((
                uc,
                Reindex { alpha: p1, beta: ri.beta },
                Reindex { alpha: p2, beta: k + ri.beta },
            ))
        }
        (Seq::Arith { off: o1, a: a1 }, Seq::Arith { off: o2, a: a2 }) => {
            let d = o2 - o1;
            let g = gcd_q(&gcd_q(a1, a2), &d);
            let u = Seq::Arith { off: o1.clone(), a: g.clone() };
            let (uc, ri) = u.canonical();
            Some((
                uc,
                Reindex { alpha: to_i64(&(a1 / &g))?, beta: ri.beta },
                Reindex { alpha: to_i64(&(a2 / &g))?, beta: to_i64(&(d / &g))? + ri.beta },
            ))
        }
        _ => None,
    }
}

/// Restricting `s` to indices `α·N + β` gives another sequence of the same family, if possible.
pub fn coarsen(s: &Seq, alpha: i64, beta: i64) -> Option<Seq> {
    match s {
        Seq::Harm { lim, a } => {
            if beta.rem_euclid(alpha) != 0 {
                return None;
            }
            // Only β = 0 keeps the harmonic shape a/(αN).
            if beta != 0 {
                return None;
            }
            Some(Seq::Harm { lim: lim.clone(), a: a / q(alpha) })
        }
        Seq::Geo { lim, a, r } => Some(Seq::Geo {
            lim: lim.clone(),
            a: a * pow_q(r, beta),
            r: pow_q(r, alpha),
        }),
        Seq::Arith { off, a } => Some(Seq::Arith { off: off + a * q(beta), a: a * q(alpha) }),
        Seq::Pell { .. } => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::qf;

    #[test]
    fn pell_units() {
        assert_eq!(pell_fundamental(2), (BigInt::from(3), BigInt::from(2)));
        assert_eq!(pell_power(2, 2), (BigInt::from(17), BigInt::from(12)));
        assert_eq!(pell_power(2, 3), (BigInt::from(99), BigInt::from(70)));
        assert_eq!(pell_fundamental(7), (BigInt::from(8), BigInt::from(3)));
    }

    #[test]
    fn harmonic_unification() {
        let s = Seq::harm(q(0), q(1));
        let t = Seq::harm(q(0), qf(1, 2));
        let (u, ms, mt) = unify(&s, &t).unwrap();
        for n in 1..20 {
            assert_eq!(s.value(n), u.value(ms.apply(n)));
            assert_eq!(t.value(n), u.value(mt.apply(n)));
        }
    }

    #[test]
    fn geometric_unification() {
        let s = Seq::Geo { lim: q(0), a: q(1), r: qf(1, 2) };
        let t = Seq::Geo { lim: q(0), a: qf(1, 2), r: qf(1, 4) };
        let (u, ms, mt) = unify(&s, &t).unwrap();
        for n in -3..10 {
            assert_eq!(s.value(n), u.value(ms.apply(n)));
            assert_eq!(t.value(n), u.value(mt.apply(n)));
        }
        let w = Seq::Geo { lim: q(0), a: q(1), r: qf(1, 3) };
        assert!(unify(&s, &w).is_none());
    }

    #[test]
    fn arithmetic_unification() {
        let s = Seq::Arith { off: q(0), a: q(2) };
        let t = Seq::Arith { off: q(1), a: q(3) };
        let (u, ms, mt) = unify(&s, &t).unwrap();
        for n in -5..5 {
            assert_eq!(s.value(n), u.value(ms.apply(n)));
            assert_eq!(t.value(n), u.value(mt.apply(n)));
        }
    }

    #[test]
    fn geometric_canonical() {
        let s = Seq::Geo { lim: q(-1), a: q(3), r: qf(1, 2) };
        let (c, m) = s.canonical();
        for n in -3..6 {
            assert_eq!(s.value(n), c.value(m.apply(n)));
        }
    }

    #[test]
    fn index_search() {
        let s = Seq::harm(q(0), q(1));
        assert_eq!(s.index_of(&qf(-1, 7)), Some(7));
        assert_eq!(s.index_of(&qf(-2, 7)), None);
        let found = Seq::first_index(1, 1 << 40, |n| s.value(n) >= qf(-1, 1000)).unwrap();
        assert_eq!(found, 1000);
    }
}
