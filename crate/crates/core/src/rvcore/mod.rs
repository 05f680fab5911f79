//! Leading-term classes of a valued ring: the relation `b ∼ c`, the slices `RV_m`, the
//! residue ring and the graded ring generated by the classes.

pub mod instances;
pub mod prv;
pub mod table1;

use std::collections::BTreeMap;
use std::fmt::Debug;

use crate::error::{HahnError, Result};

pub use instances::{IntPadic, RatPadic, SeriesDegree, SeriesLeading};
pub use prv::{prv_coordinates, PrvDecomposition};

/// Direction in which values improve: `Min` for valuations such as `v_p` where larger
/// values mean smaller elements, `Max` for degree-like maps where smaller values do.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Polarity {
    Min,
    Max,
}

/// A commutative ring with a multiplicative value map. Values are `None` exactly at zero.
pub trait ValuedRing {
    type Elem: Clone + Debug + PartialEq;
    type Val: Clone + Ord + Debug;

    fn polarity(&self) -> Polarity;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, b: &Self::Elem) -> bool;
    fn add(&self, b: &Self::Elem, c: &Self::Elem) -> Result<Self::Elem>;
    fn neg(&self, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, b: &Self::Elem, c: &Self::Elem) -> Result<Self::Elem>;
    fn w(&self, b: &Self::Elem) -> Result<Option<Self::Val>>;
    fn val_add(&self, m: &Self::Val, n: &Self::Val) -> Self::Val;
    fn val_zero(&self) -> Self::Val;
    /// A fixed representative of the class of `b`.
    fn canon(&self, b: &Self::Elem) -> Result<Self::Elem>;

    fn sub(&self, b: &Self::Elem, c: &Self::Elem) -> Result<Self::Elem> {
        self.add(b, &self.neg(c))
    }
}

/// `m` lies strictly beyond `n` in the polarity order, with the value of zero on top.
pub fn beyond<V: Ord>(pol: Polarity, m: &Option<V>, n: &Option<V>) -> bool {
    match (m, n) {
        (_, None) => false,
        (None, Some(_)) => true,
        (Some(a), Some(b)) => match pol {
            Polarity::Min => a > b,
            Polarity::Max => a < b,
        },
    }
}

/// `w(b - c)` lies beyond `w(b)`; zero is related only to itself.
pub fn rv_equiv<R: ValuedRing>(r: &R, b: &R::Elem, c: &R::Elem) -> Result<bool> {
    let d = r.sub(b, c)?;
    if r.is_zero(&d) {
        return Ok(true);
    }
    Ok(beyond(r.polarity(), &r.w(&d)?, &r.w(b)?))
}

/// A class, stored as a canonical representative together with its value.
#[derive(Clone, Debug, PartialEq)]
pub struct RvElem<E, V> {
    pub rep: E,
    pub val: Option<V>,
}

pub type Rv<R> = RvElem<<R as ValuedRing>::Elem, <R as ValuedRing>::Val>;

pub fn rv<R: ValuedRing>(r: &R, b: &R::Elem) -> Result<Rv<R>> {
    Ok(RvElem { rep: r.canon(b)?, val: r.w(b)? })
}

pub fn rv_zero<R: ValuedRing>(r: &R) -> Rv<R> {
    RvElem { rep: r.zero(), val: None }
}

pub fn rv_eq<R: ValuedRing>(r: &R, x: &Rv<R>, y: &Rv<R>) -> Result<bool> {
    Ok(x.val == y.val && rv_equiv(r, &x.rep, &y.rep)?)
}

pub fn rv_mul<R: ValuedRing>(r: &R, x: &Rv<R>, y: &Rv<R>) -> Result<Rv<R>> {
    rv(r, &r.mul(&x.rep, &y.rep)?)
}

pub fn rv_neg<R: ValuedRing>(r: &R, x: &Rv<R>) -> Result<Rv<R>> {
    rv(r, &r.neg(&x.rep))
}

/// Sum inside `RV_m`: the class of `b + c` when it keeps value `m`, the zero class otherwise.
pub fn rv_add<R: ValuedRing>(r: &R, x: &Rv<R>, y: &Rv<R>, m: &R::Val) -> Result<Rv<R>> {
    for z in [x, y] {
        if let Some(v) = &z.val {
            if v != m {
                return Err(HahnError::pre("classes of different values cannot be added"));
            }
        }
    }
    let s = r.add(&x.rep, &y.rep)?;
    match r.w(&s)? {
        Some(v) if &v == m => rv(r, &s),
        _ => Ok(rv_zero(r)),
    }
}

/// The residue map from the valuation ring onto `RV_0`.
pub fn residue_project<R: ValuedRing>(r: &R, b: &R::Elem) -> Result<Rv<R>> {
    let zero = Some(r.val_zero());
    let w = r.w(b)?;
    if w == zero {
        rv(r, b)
    } else if beyond(r.polarity(), &w, &zero) {
        Ok(rv_zero(r))
    } else {
        Err(HahnError::pre("element lies outside the valuation ring"))
    }
}

/// A finite sum of classes of distinct values.
#[derive(Clone, Debug, PartialEq)]
pub struct HatRv<E, V: Ord> {
    pub grades: BTreeMap<V, RvElem<E, V>>,
}

pub type Hat<R> = HatRv<<R as ValuedRing>::Elem, <R as ValuedRing>::Val>;

impl<E: Clone, V: Ord + Clone> HatRv<E, V> {
    pub fn zero() -> Self {
        HatRv { grades: BTreeMap::new() }
    }
}

pub fn hat_from<R: ValuedRing>(x: &Rv<R>) -> Hat<R> {
    let mut h = HatRv::zero();
    if let Some(v) = &x.val {
        h.grades.insert(v.clone(), x.clone());
    }
    h
}

fn hat_insert<R: ValuedRing>(r: &R, h: &mut Hat<R>, x: Rv<R>) -> Result<()> {
    let Some(v) = x.val.clone() else { return Ok(()) };
    let s = match h.grades.remove(&v) {
        Some(y) => rv_add(r, &y, &x, &v)?,
        None => x,
    };
    if s.val.is_some() {
        h.grades.insert(v, s);
    }
    Ok(())
}

pub fn hat_add<R: ValuedRing>(r: &R, x: &Hat<R>, y: &Hat<R>) -> Result<Hat<R>> {
    let mut h = x.clone();
    for e in y.grades.values() {
        hat_insert(r, &mut h, e.clone())?;
    }
    Ok(h)
}

/// Graded convolution: grade `m` of the product collects `B_n · C_o` over `n + o = m`.
pub fn hat_mul<R: ValuedRing>(r: &R, x: &Hat<R>, y: &Hat<R>) -> Result<Hat<R>> {
    let mut h = HatRv::zero();
    for b in x.grades.values() {
        for c in y.grades.values() {
            hat_insert(r, &mut h, rv_mul(r, b, c)?)?;
        }
    }
    Ok(h)
}

pub fn hat_eq<R: ValuedRing>(r: &R, x: &Hat<R>, y: &Hat<R>) -> Result<bool> {
    if x.grades.len() != y.grades.len() {
        return Ok(false);
    }
    for (v, b) in &x.grades {
        match y.grades.get(v) {
            Some(c) if rv_eq(r, b, c)? => {}
            _ => return Ok(false),
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn z(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn three_adic_classes() {
        let r = IntPadic::new(3).unwrap();
        assert!(rv_equiv(&r, &z(6), &z(15)).unwrap());
        assert!(!rv_equiv(&r, &z(6), &z(12)).unwrap());
        assert!(!rv_equiv(&r, &z(5), &z(10)).unwrap());
        let p = rv_mul(&r, &rv(&r, &z(3)).unwrap(), &rv(&r, &z(6)).unwrap()).unwrap();
        assert!(rv_eq(&r, &p, &rv(&r, &z(18)).unwrap()).unwrap());
        let s = rv_add(&r, &rv(&r, &z(4)).unwrap(), &rv(&r, &z(-4)).unwrap(), &0).unwrap();
        assert_eq!(s, rv_zero(&r));
        assert!(rv_add(&r, &rv(&r, &z(3)).unwrap(), &rv(&r, &z(1)).unwrap(), &0).is_err());
        assert_eq!(residue_project(&r, &z(7)).unwrap().rep, z(1));
        assert_eq!(residue_project(&r, &z(6)).unwrap(), rv_zero(&r));
    }

    #[test]
    fn graded_product() {
        let r = IntPadic::new(3).unwrap();
        let b0 = hat_from::<IntPadic>(&rv(&r, &z(2)).unwrap());
        let b1 = hat_from::<IntPadic>(&rv(&r, &z(3)).unwrap());
        let c1 = hat_from::<IntPadic>(&rv(&r, &z(6)).unwrap());
        let b = hat_add(&r, &b0, &b1).unwrap();
        let p = hat_mul(&r, &b, &c1).unwrap();
        assert_eq!(p.grades.len(), 2);
        assert_eq!(p.grades[&1].rep, z(3));
        assert_eq!(p.grades[&2].rep, z(18));
        let one = hat_from::<IntPadic>(&rv(&r, &z(1)).unwrap());
        assert!(hat_eq(&r, &hat_mul(&r, &one, &b).unwrap(), &b).unwrap());
    }
}
