//! Concrete valued rings: integers and rationals with a p-adic valuation, and series with
//! the natural valuation or with the degree.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{HahnError, Result};
use crate::exponents::LexExponent;
use crate::ordinal::{Ordinal, OrdinalExt};
use crate::rat::Q;
use crate::rvcore::{Polarity, ValuedRing};
use crate::series::block::Block;
use crate::series::closed::ClosedSeries;
use crate::series::enumerate::leading_term;

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn split_p(n: &BigInt, p: &BigInt) -> (i64, BigInt) {
    let mut v = 0;
    let mut u = n.clone();
    while (&u % p).is_zero() {
        u /= p;
        v += 1;
    }
    (v, u)
}

/// `(ℤ, v_p)`.
#[derive(Clone, Debug)]
pub struct IntPadic {
    pub p: u64,
}

impl IntPadic {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(HahnError::pre("p-adic valuation needs a prime"));
        }
        Ok(IntPadic { p })
    }

    /// Residue digit of a class: `b = p^v·u` gives `u mod p`.
    pub fn digit(&self, b: &BigInt) -> u64 {
        if b.is_zero() {
            return 0;
        }
        let p = BigInt::from(self.p);
        let (_, u) = split_p(b, &p);
        u.mod_floor(&p).try_into().expect("digit below p")
    }
}

impl ValuedRing for IntPadic {
    type Elem = BigInt;
    type Val = i64;

    fn polarity(&self) -> Polarity {
        Polarity::Min
    }
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn is_zero(&self, b: &BigInt) -> bool {
        b.is_zero()
    }
    fn add(&self, b: &BigInt, c: &BigInt) -> Result<BigInt> {
        Ok(b + c)
    }
    fn neg(&self, b: &BigInt) -> BigInt {
        -b
    }
    fn mul(&self, b: &BigInt, c: &BigInt) -> Result<BigInt> {
        Ok(b * c)
    }
    fn w(&self, b: &BigInt) -> Result<Option<i64>> {
        if b.is_zero() {
            return Ok(None);
        }
        Ok(Some(split_p(b, &BigInt::from(self.p)).0))
    }
    fn val_add(&self, m: &i64, n: &i64) -> i64 {
        m + n
    }
    fn val_zero(&self) -> i64 {
        0
    }
    /// `p^v·d` with `d ∈ {1, …, p-1}`.
    fn canon(&self, b: &BigInt) -> Result<BigInt> {
        if b.is_zero() {
            return Ok(BigInt::zero());
        }
        let p = BigInt::from(self.p);
        let (v, u) = split_p(b, &p);
        Ok(num_traits::pow(p.clone(), v as usize) * u.mod_floor(&p))
    }
}

/// `(ℚ, v_p)`.
#[derive(Clone, Debug)]
pub struct RatPadic {
    pub p: u64,
}

impl RatPadic {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(HahnError::pre("p-adic valuation needs a prime"));
        }
        Ok(RatPadic { p })
    }

    fn parts(&self, b: &Q) -> (i64, u64) {
        let p = BigInt::from(self.p);
        let (vn, un) = split_p(b.numer(), &p);
        let (vd, ud) = split_p(b.denom(), &p);
        let inv = ud.mod_floor(&p).modpow(&(&p - 2u32), &p);
        let d = (un * inv).mod_floor(&p);
        (vn - vd, d.try_into().expect("digit below p"))
    }

    /// Residue digit of a class.
    pub fn digit(&self, b: &Q) -> u64 {
        if b.is_zero() {
            0
        } else {
            self.parts(b).1
        }
    }
}

impl ValuedRing for RatPadic {
    type Elem = Q;
    type Val = i64;

    fn polarity(&self) -> Polarity {
        Polarity::Min
    }
    fn zero(&self) -> Q {
        Q::zero()
    }
    fn one(&self) -> Q {
        Q::one()
    }
    fn is_zero(&self, b: &Q) -> bool {
        b.is_zero()
    }
    fn add(&self, b: &Q, c: &Q) -> Result<Q> {
        Ok(b + c)
    }
    fn neg(&self, b: &Q) -> Q {
        -b
    }
    fn mul(&self, b: &Q, c: &Q) -> Result<Q> {
        Ok(b * c)
    }
    fn w(&self, b: &Q) -> Result<Option<i64>> {
        Ok(if b.is_zero() { None } else { Some(self.parts(b).0) })
    }
    fn val_add(&self, m: &i64, n: &i64) -> i64 {
        m + n
    }
    fn val_zero(&self) -> i64 {
        0
    }
    /// `p^v·d` with `d ∈ {1, …, p-1}`.
    fn canon(&self, b: &Q) -> Result<Q> {
        if b.is_zero() {
            return Ok(Q::zero());
        }
        let (v, d) = self.parts(b);
        Ok(crate::rat::pow_q(&Q::from_integer(self.p.into()), v) * Q::from_integer(d.into()))
    }
}

fn closed_mul(b: &ClosedSeries, c: &ClosedSeries) -> Result<ClosedSeries> {
    b.mul_closed(c)?.ok_or_else(|| HahnError::closure("product leaves the closed family"))
}

/// Series with the natural valuation: the least exponent of the support.
#[derive(Clone, Debug)]
pub struct SeriesLeading {
    pub rank: usize,
}

impl ValuedRing for SeriesLeading {
    type Elem = ClosedSeries;
    type Val = LexExponent;

    fn polarity(&self) -> Polarity {
        Polarity::Min
    }
    fn zero(&self) -> ClosedSeries {
        ClosedSeries::zero(self.rank)
    }
    fn one(&self) -> ClosedSeries {
        ClosedSeries::one(self.rank)
    }
    fn is_zero(&self, b: &ClosedSeries) -> bool {
        b.is_zero()
    }
    fn add(&self, b: &ClosedSeries, c: &ClosedSeries) -> Result<ClosedSeries> {
        b.add(c)
    }
    fn neg(&self, b: &ClosedSeries) -> ClosedSeries {
        b.neg()
    }
    fn mul(&self, b: &ClosedSeries, c: &ClosedSeries) -> Result<ClosedSeries> {
        closed_mul(b, c)
    }
    fn w(&self, b: &ClosedSeries) -> Result<Option<LexExponent>> {
        if b.is_zero() {
            return Ok(None);
        }
        Ok(Some(leading_term(b)?.0))
    }
    fn val_add(&self, m: &LexExponent, n: &LexExponent) -> LexExponent {
        m.add(n)
    }
    fn val_zero(&self) -> LexExponent {
        LexExponent::zero(self.rank)
    }
    /// The leading monomial.
    fn canon(&self, b: &ClosedSeries) -> Result<ClosedSeries> {
        if b.is_zero() {
            return Ok(b.clone());
        }
        let (x, c) = leading_term(b)?;
        Ok(ClosedSeries::monomial(x, c))
    }
}

/// Series with the degree of the order type, ordered in reverse.
#[derive(Clone, Debug)]
pub struct SeriesDegree {
    pub rank: usize,
}

/// The blocks of maximal dimension, each restarted at a fixed index.
pub fn degree_class_rep(b: &ClosedSeries) -> Result<ClosedSeries> {
    if b.is_zero() || b.is_finite() {
        return Ok(b.clone());
    }
    let mut blocks = Vec::new();
    for blk in b.top_blocks() {
        blocks.push(restart(&blk)?);
    }
    ClosedSeries::from_blocks(b.rank, blocks)
}

/// Degree of a closed series as a plain ordinal, `None` at zero.
pub fn degree_of(b: &ClosedSeries) -> Option<Ordinal> {
    match b.degree() {
        OrdinalExt::Fin(o) => Some(o),
        OrdinalExt::MinusInfinity => None,
    }
}

impl ValuedRing for SeriesDegree {
    type Elem = ClosedSeries;
    type Val = Ordinal;

    fn polarity(&self) -> Polarity {
        Polarity::Max
    }
    fn zero(&self) -> ClosedSeries {
        ClosedSeries::zero(self.rank)
    }
    fn one(&self) -> ClosedSeries {
        ClosedSeries::one(self.rank)
    }
    fn is_zero(&self, b: &ClosedSeries) -> bool {
        b.is_zero()
    }
    fn add(&self, b: &ClosedSeries, c: &ClosedSeries) -> Result<ClosedSeries> {
        b.add(c)
    }
    fn neg(&self, b: &ClosedSeries) -> ClosedSeries {
        b.neg()
    }
    fn mul(&self, b: &ClosedSeries, c: &ClosedSeries) -> Result<ClosedSeries> {
        closed_mul(b, c)
    }
    fn w(&self, b: &ClosedSeries) -> Result<Option<Ordinal>> {
        Ok(degree_of(b))
    }
    fn val_add(&self, m: &Ordinal, n: &Ordinal) -> Ordinal {
        m.nat_sum(n)
    }
    fn val_zero(&self) -> Ordinal {
        Ordinal::zero()
    }
    fn canon(&self, b: &ClosedSeries) -> Result<ClosedSeries> {
        degree_class_rep(b)
    }
}

/// A block restarted at its first admissible index.
pub fn restart(blk: &Block) -> Result<Block> {
    let mut b = blk.clone();
    for f in &mut b.factors {
        f.n0 = f.seq.min_index().unwrap_or(0);
    }
    b.advance()?;
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::Axis;
    use crate::rat::{q, qf};
    use crate::rvcore::{residue_project, rv, rv_add, rv_eq, rv_equiv};
    use crate::series::seq::Seq;
    use crate::series::tensor::Tensor;

    fn ladder(lim: Q, a: Q) -> ClosedSeries {
        let b = Block::ladder(LexExponent::zero(1), Axis { level: 0, gen: 1 }, Seq::harm(lim, a), 1, Tensor::constant(1, q(1)));
        ClosedSeries::from_blocks(1, vec![b]).unwrap()
    }

    fn mono(x: Q, c: i64) -> ClosedSeries {
        ClosedSeries::monomial(LexExponent::from_rats(&[x]), q(c))
    }

    #[test]
    fn rational_padic() {
        let r = RatPadic::new(3).unwrap();
        assert_eq!(r.canon(&qf(5, 9)).unwrap(), qf(2, 9));
        assert_eq!(r.w(&qf(5, 9)).unwrap(), Some(-2));
        assert_eq!(r.canon(&qf(1, 2)).unwrap(), q(2));
        assert!(RatPadic::new(4).is_err());
    }

    #[test]
    fn degree_classes() {
        let r = SeriesDegree { rank: 1 };
        let b = ladder(q(0), q(1));
        let c = b.add(&mono(qf(-1, 2), 1)).unwrap();
        assert!(rv_equiv(&r, &b, &c).unwrap());
        assert!(!rv_equiv(&r, &b, &b.scale(&q(2))).unwrap());
        assert!(rv_eq(&r, &rv(&r, &b).unwrap(), &rv(&r, &c).unwrap()).unwrap());
        assert_eq!(rv(&r, &b).unwrap().rep, rv(&r, &c).unwrap().rep);
        let f = mono(q(-1), 1);
        let s = rv_add(&r, &rv(&r, &f).unwrap(), &rv(&r, &mono(q(-2), 1)).unwrap(), &Ordinal::zero()).unwrap();
        assert_eq!(s.rep, f.add(&mono(q(-2), 1)).unwrap());
        assert_eq!(residue_project(&r, &f).unwrap().rep, f);
        assert!(residue_project(&r, &b).is_err());
    }

    #[test]
    fn leading_classes() {
        let r = SeriesLeading { rank: 1 };
        let b = ladder(q(0), q(1)).add(&mono(q(-3), 2)).unwrap();
        assert_eq!(rv(&r, &b).unwrap().rep, mono(q(-3), 2));
        assert_eq!(residue_project(&r, &ClosedSeries::constant(1, q(4))).unwrap().rep, ClosedSeries::constant(1, q(4)));
    }
}
