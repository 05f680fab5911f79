//! Irreducibility and primality certificates over the real exponent group.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exponents::{Exponent, LexExponent};
use crate::factor::{div_by_poly, p_of_series, split_product, Certificate, Criterion, Verdict};
use crate::grpalg::{divide, gcd, FracPoly, Lattice, Units};
use crate::ordinal::Ordinal;
use crate::rat::{q_root, Q};
use crate::rvcore::prv::prv_coordinates;
use crate::series::closed::ClosedSeries;
use crate::supcomp::Cut;

/// Whether `o = ω + k` for a finite `k`.
pub fn is_omega_plus_finite(o: &Ordinal) -> bool {
    let t = o.terms();
    !t.is_empty()
        && t[0].0 == Ordinal::one()
        && t[0].1.is_one()
        && t[1..].iter().all(|(e, _)| e.is_zero())
}

fn sup_point(b: &ClosedSeries) -> Option<LexExponent> {
    b.sup().and_then(|c| c.as_point())
}

/// Divisors of a positive integer, when it is small enough to enumerate.
fn small_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n == 0 || n > 1_000_000_000_000 {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
        if d > 1_000_000 {
            return None;
        }
    }
    Some(out)
}

fn eval_poly(coeffs: &[Q], y: &Q) -> Q {
    let mut acc = Q::zero();
    for c in coeffs.iter().rev() {
        acc = acc * y + c;
    }
    acc
}

/// A rational root of `Σ coeffs[k]·Y^k`.
fn rational_root(coeffs: &[Q]) -> Option<Q> {
    let mut l = BigInt::one();
    for c in coeffs {
        l = l.lcm(c.denom());
    }
    let ints: Vec<BigInt> = coeffs.iter().map(|c| (c * Q::from_integer(l.clone())).to_integer()).collect();
    let lo = ints.iter().position(|c| !c.is_zero())?;
    if lo > 0 {
        return Some(Q::zero());
    }
    let a0 = &ints[0];
    let an = ints.last()?;
    let ps = small_divisors(a0)?;
    let qs = small_divisors(an)?;
    for p in &ps {
        for q in &qs {
            for s in [1, -1] {
                let r = Q::new(p * BigInt::from(s), q.clone());
                if eval_poly(coeffs, &r).is_zero() {
                    return Some(r);
                }
            }
        }
    }
    None
}

/// A proper factorisation `f = g·h` of a finite-support series with supremum zero, found by
/// a rational root in a single lattice variable or by a root of a binomial.
pub fn finite_factor(f: &FracPoly) -> Option<(FracPoly, FracPoly)> {
    let rank = f.rank;
    let check = |g: FracPoly| -> Option<(FracPoly, FracPoly)> {
        let h = divide(&g, f, Units::Monomials).ok()??;
        if g.is_constant() || h.is_constant() || h.sup().is_some_and(|s| !s.is_zero()) {
            return None;
        }
        Some((g, h))
    };
    let xs: Vec<LexExponent> = f.terms.keys().cloned().collect();
    let l = Lattice::of(rank, &xs);
    if l.axes.len() == 1 {
        let (axis, step) = l.axes[0].clone();
        let mut coeffs: Vec<Q> = Vec::new();
        for (x, c) in &f.terms {
            let k = (-x.coord(axis) / &step).to_integer().to_usize()?;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, Q::zero());
            }
            coeffs[k] = c.clone();
        }
        if coeffs.len() >= 3 {
            if let Some(r) = rational_root(&coeffs) {
                let y = LexExponent::unit(rank, axis, &-step.clone());
                let g = FracPoly::from_terms(rank, &[(y, Q::one()), (LexExponent::zero(rank), -r)]);
                if let Some(pair) = check(g) {
                    return Some(pair);
                }
            }
        }
    }
    if f.terms.len() == 2 {
        let zero = LexExponent::zero(rank);
        let u = f.coef(&zero);
        let (x, v) = f.terms.iter().find(|(x, _)| !x.is_zero()).map(|(x, c)| (x.clone(), c.clone()))?;
        if u.is_zero() {
            return None;
        }
        let ratio = &v / &u;
        for r in [3u32, 5, 7, 9, 11, 13] {
            if let Some(k) = q_root(&ratio, r) {
                let x_r = x.scale(&Q::new(1.into(), (r as i64).into()));
                let g = FracPoly::from_terms(rank, &[(zero.clone(), Q::one()), (x_r, k)]);
                if let Some(pair) = check(g) {
                    return Some(pair);
                }
            }
        }
        if let Some(k) = q_root(&-ratio, 2) {
            let x_2 = x.scale(&Q::new(1.into(), 2.into()));
            let g = FracPoly::from_terms(rank, &[(zero, Q::one()), (x_2, -k)]);
            if let Some(pair) = check(g) {
                return Some(pair);
            }
        }
    }
    None
}

/// Irreducibility in the ring of series with non-positive real exponents.
pub fn certify_irreducible(b: &ClosedSeries) -> Certificate {
    if b.rank != 1 {
        return Certificate::unknown(Criterion::NotArchimedean).with("rank", b.rank);
    }
    if b.is_zero() {
        return Certificate::refuted(Criterion::Zero);
    }
    let ot = b.order_type();
    if let Some(terms) = b.finite_terms() {
        if terms.len() == 1 {
            let (x, _) = &terms[0];
            if x.is_zero() {
                return Certificate::refuted(Criterion::Unit).with("ot", &ot);
            }
            let half = x.scale(&Q::new(1.into(), 2.into()));
            return Certificate::refuted(Criterion::MonomialDivisor)
                .with("ot", &ot)
                .with("divisor", format!("t^({half})"))
                .with("cofactor", format!("t^({half})"));
        }
        let f = FracPoly::from_terms(b.rank, &terms);
        let s = f.sup().cloned().expect("nonzero");
        if !s.is_zero() {
            return Certificate::refuted(Criterion::MonomialDivisor)
                .with("ot", &ot)
                .with("divisor", format!("t^({s})"))
                .with("cofactor", f.shift(&s.neg()));
        }
        return match finite_factor(&f) {
            Some((g, h)) => Certificate::refuted(Criterion::FiniteFactor)
                .with("ot", &ot)
                .with("factor", &g)
                .with("cofactor", &h),
            None => Certificate::unknown(Criterion::OutsideCriteria).with("ot", &ot),
        };
    }
    let Some(s) = sup_point(b) else {
        return Certificate::unknown(Criterion::OutsideCriteria).with("ot", &ot);
    };
    if !s.is_zero() {
        let cof = b.shift(&s.neg()).map(|c| c.to_string()).unwrap_or_default();
        return Certificate::refuted(Criterion::MonomialDivisor)
            .with("ot", &ot)
            .with("sup", &s)
            .with("divisor", format!("t^({s})"))
            .with("cofactor", cof);
    }
    if is_omega_plus_finite(&ot) {
        return Certificate::certified(Criterion::ThmE).with("ot", &ot).with("sup", 0);
    }
    let p = match p_of_series(b) {
        Ok(p) => p,
        Err(e) => return Certificate::unknown(Criterion::OutsideCriteria).with("ot", &ot).with("error", e),
    };
    if p != FracPoly::one(b.rank) {
        let mut c = Certificate::refuted(Criterion::FiniteDivisor).with("ot", &ot).with("p", &p);
        if let Ok(cof) = div_by_poly(b, &p) {
            c = c.with("cofactor", cof);
        }
        return c;
    }
    if let Some((k, fs)) = split_product(b) {
        let mut c = Certificate::refuted(Criterion::ProductSplit).with("ot", &ot).with("unit", crate::rat::fmt_q(&k));
        for (i, f) in fs.iter().enumerate() {
            c = c.with(&format!("factor{}", i + 1), f);
        }
        return c;
    }
    let deg = b.degree();
    if deg.fin() == Some(&Ordinal::one()) {
        return Certificate::certified(Criterion::DegPrincipal).with("ot", &ot).with("deg", &deg).with("p", 1);
    }
    Certificate::unknown(Criterion::OutsideCriteria).with("ot", &ot).with("deg", &deg).with("p", 1)
}

/// `a / b` when it is rational.
fn rational_ratio(a: &Exponent, b: &Exponent) -> Option<Q> {
    let (d, bc) = b.coords().iter().next()?;
    let k = a.coef(*d) / bc;
    if a.sub(&b.scale(&k)).is_zero() {
        Some(k)
    } else {
        None
    }
}

/// The degree-one fraction-field criterion: the leading class divided by its finite part is
/// a single principal class, or a trinomial `B_1 t^{x_1} + B_2 t^{x_2} + B_3` with
/// ℤ-independent `x_1, x_2` whose coefficients are not all proportional.
fn deg1_frac(b: &ClosedSeries) -> Option<Certificate> {
    let dec = prv_coordinates(b).ok()?;
    let mut p = FracPoly::zero(b.rank);
    for c in &dec.coords {
        p = gcd(&p, c, Units::Constants).ok()?;
    }
    let mut by_shift: BTreeMap<LexExponent, Vec<Q>> = BTreeMap::new();
    for (j, c) in dec.coords.iter().enumerate() {
        let q = divide(&p, c, Units::Monomials).ok()??;
        for (x, k) in &q.terms {
            by_shift.entry(x.clone()).or_insert_with(|| vec![Q::zero(); dec.coords.len()])[j] = k.clone();
        }
    }
    let shifts: Vec<LexExponent> = by_shift.keys().cloned().collect();
    let base = Certificate::certified(Criterion::Deg1Frac)
        .with("p_rv", &p)
        .with("terms", shifts.len())
        .with("prv_basis", dec.basis.len());
    if shifts.len() == 1 && shifts[0].is_zero() {
        return Some(base);
    }
    if shifts.len() != 3 || dec.basis.len() < 2 || !shifts.iter().any(|x| x.is_zero()) {
        return None;
    }
    let nz: Vec<&Exponent> = shifts.iter().filter(|x| !x.is_zero()).map(|x| &x.c[0]).collect();
    if rational_ratio(nz[0], nz[1]).is_some() {
        return None;
    }
    let vecs: Vec<&Vec<Q>> = by_shift.values().collect();
    let proportional = |a: &Vec<Q>, b: &Vec<Q>| {
        (0..a.len()).all(|i| (0..a.len()).all(|j| &a[i] * &b[j] == &a[j] * &b[i]))
    };
    if proportional(vecs[0], vecs[1]) && proportional(vecs[0], vecs[2]) {
        return None;
    }
    Some(base.with("x1", nz[0]).with("x2", nz[1]))
}

/// Primality in the ring of series with non-positive real exponents.
pub fn certify_prime(b: &ClosedSeries) -> Certificate {
    if b.rank != 1 {
        return Certificate::unknown(Criterion::NotArchimedean).with("rank", b.rank);
    }
    let irr = certify_irreducible(b);
    if irr.verdict == Verdict::Refuted {
        let mut c = Certificate::refuted(Criterion::Reducible).with("irreducibility", irr.criterion);
        c.witnesses.extend(irr.witnesses);
        return c;
    }
    let ot = b.order_type();
    if b.is_finite() {
        return Certificate::unknown(Criterion::OutsideCriteria).with("ot", &ot);
    }
    if sup_point(b).is_some_and(|s| s.is_zero()) && is_omega_plus_finite(&ot) {
        return Certificate::certified(Criterion::ThmF).with("ot", &ot).with("sup", 0);
    }
    if irr.verdict == Verdict::Certified && b.max_dim() == Some(1) {
        if let Some(c) = deg1_frac(b) {
            return c.with("ot", &ot).with("irreducibility", irr.criterion);
        }
    }
    Certificate::unknown(Criterion::OutsideCriteria).with("ot", &ot).with("irreducibility", irr.verdict)
}

/// Whether the supremum of `b` is zero in the real exponent group.
pub fn sup_is_zero(b: &ClosedSeries) -> bool {
    b.sup() == Some(Cut::zero(b.rank))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::Axis;
    use crate::rat::{q, qf};
    use crate::series::block::Block;
    use crate::series::seq::Seq;
    use crate::series::tensor::Tensor;

    fn x(v: Q) -> LexExponent {
        LexExponent::from_rats(&[v])
    }

    fn harm(lim: Q) -> ClosedSeries {
        let l = Block::ladder(LexExponent::zero(1), Axis { level: 0, gen: 1 }, Seq::harm(lim, q(1)), 1, Tensor::constant(1, q(1)));
        ClosedSeries::from_blocks(1, vec![l]).unwrap()
    }

    fn geo(lim: Q) -> ClosedSeries {
        let l = Block::ladder(
            LexExponent::zero(1),
            Axis { level: 0, gen: 1 },
            Seq::Geo { lim, a: q(1), r: qf(1, 2) },
            0,
            Tensor::constant(1, q(1)),
        );
        ClosedSeries::from_blocks(1, vec![l]).unwrap()
    }

    #[test]
    fn named_irreducible_and_prime() {
        let b = harm(q(-1)).add(&ClosedSeries::one(1)).unwrap();
        assert_eq!(certify_irreducible(&b).criterion, Criterion::ThmE);
        assert_eq!(certify_prime(&b).criterion, Criterion::ThmF);
        let l = harm(q(0));
        assert_eq!(certify_prime(&l).verdict, Verdict::Certified);
    }

    #[test]
    fn cyclotomic_refutation() {
        let f = FracPoly::from_terms(1, &[(x(q(0)), q(1)), (x(q(-1)), q(1))]);
        let c = certify_irreducible(&f.to_series());
        assert_eq!(c.verdict, Verdict::Refuted);
        assert_eq!(c.criterion, Criterion::FiniteFactor);
        let (g, h) = finite_factor(&f).unwrap();
        assert_eq!(g.mul(&h), f);
        assert_eq!(g.to_string(), "1 + t^(-1/3)");
    }

    #[test]
    fn rational_root_factor() {
        let f = FracPoly::from_terms(1, &[(x(q(0)), q(-2)), (x(qf(-1, 2)), q(1)), (x(q(-1)), q(1))]);
        let (g, h) = finite_factor(&f).unwrap();
        assert_eq!(g.mul(&h), f);
    }

    #[test]
    fn monomial_divisor_refutation() {
        let b = harm(q(0)).shift(&x(qf(-1, 2))).unwrap();
        let c = certify_irreducible(&b);
        assert_eq!((c.verdict, c.criterion), (Verdict::Refuted, Criterion::MonomialDivisor));
    }

    #[test]
    fn three_term_degree_one_prime() {
        let s2 = LexExponent { c: vec![Exponent::term(2, q(-1))] };
        let b = harm(q(0))
            .shift(&s2)
            .unwrap()
            .add(&geo(q(0)).shift(&x(q(-1))).unwrap())
            .unwrap()
            .add(&harm(q(0)))
            .unwrap();
        assert_eq!(certify_irreducible(&b).criterion, Criterion::DegPrincipal);
        let c = certify_prime(&b);
        assert_eq!((c.verdict, c.criterion), (Verdict::Certified, Criterion::Deg1Frac));
    }

    #[test]
    fn product_plus_one_is_unknown() {
        let a = harm(q(0));
        let mut blk = harm(q(0)).blocks[0].clone();
        blk.factors[0].axis = Axis { level: 0, gen: 2 };
        let c = ClosedSeries::from_blocks(1, vec![blk]).unwrap();
        let ac = a.mul_closed(&c).unwrap().unwrap();
        assert_eq!(certify_irreducible(&ac).criterion, Criterion::ProductSplit);
        let b = ac.add(&ClosedSeries::one(1)).unwrap();
        assert_eq!(certify_prime(&b).verdict, Verdict::Unknown);
    }
}
