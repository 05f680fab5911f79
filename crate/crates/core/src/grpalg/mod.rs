//! Finite-support series (fractional Laurent polynomials): lattices, divisibility, GCD
//! and divisors supported on a subgroup.

pub mod mpoly;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{HahnError, Result};
use crate::exponents::{Axis, GroupSpec, LexExponent};
use crate::rat::{gcd_q, is_int, to_i64, Q};
use crate::series::closed::ClosedSeries;
use mpoly::{laurent_gcd, MPoly};

/// A ℤ-basis for a finite set of exponents: one step per axis, so every exponent is an
/// integer combination of `step_i·e_{axis_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    pub rank: usize,
    pub axes: Vec<(Axis, Q)>,
}

impl Lattice {
    /// Smallest lattice containing `xs`.
    pub fn of(rank: usize, xs: &[LexExponent]) -> Lattice {
        let mut steps: BTreeMap<Axis, Q> = BTreeMap::new();
        for x in xs {
            for a in x.axes() {
                let v = x.coord(a);
                let s = steps.entry(a).or_insert_with(Q::zero);
                *s = gcd_q(s, &v);
            }
        }
        Lattice { rank, axes: steps.into_iter().collect() }
    }

    pub fn coords(&self, x: &LexExponent) -> Option<Vec<i64>> {
        let mut rest = x.clone();
        let mut out = Vec::with_capacity(self.axes.len());
        for (a, s) in &self.axes {
            let k = x.coord(*a) / s;
            if !is_int(&k) {
                return None;
            }
            out.push(to_i64(&k)?);
            rest.set_coord(*a, Q::zero());
        }
        if rest.is_zero() {
            Some(out)
        } else {
            None
        }
    }

    pub fn point(&self, v: &[i64]) -> LexExponent {
        let mut x = LexExponent::zero(self.rank);
        for ((a, s), k) in self.axes.iter().zip(v) {
            let c = x.coord(*a) + s * Q::from_integer((*k).into());
            x.set_coord(*a, c);
        }
        x
    }
}

/// Exponents and integer coordinates in the smallest lattice containing them.
pub fn lattice_basis(rank: usize, xs: &[LexExponent]) -> (Lattice, Vec<Vec<i64>>) {
    let l = Lattice::of(rank, xs);
    let coords = xs.iter().map(|x| l.coords(x).expect("lattice contains its generators")).collect();
    (l, coords)
}

/// Which elements count as units for divisibility.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Units {
    /// Nonzero constants: divisibility among series with non-positive exponents.
    Constants,
    /// Nonzero constants times monomials: divisibility among all finite-support series.
    Monomials,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct FracPoly {
    pub rank: usize,
    pub terms: BTreeMap<LexExponent, Q>,
}

impl FracPoly {
    pub fn zero(rank: usize) -> Self {
        FracPoly { rank, terms: BTreeMap::new() }
    }

    pub fn one(rank: usize) -> Self {
        FracPoly::monomial(LexExponent::zero(rank), Q::one())
    }

    pub fn monomial(x: LexExponent, c: Q) -> Self {
        let mut p = FracPoly::zero(x.rank());
        p.add_term(x, c);
        p
    }

    pub fn from_terms(rank: usize, terms: &[(LexExponent, Q)]) -> Self {
        let mut p = FracPoly::zero(rank);
        for (x, c) in terms {
            p.add_term(x.promote(rank), c.clone());
        }
        p
    }

    pub fn from_series(s: &ClosedSeries) -> Option<Self> {
        Some(FracPoly::from_terms(s.rank, &s.finite_terms()?))
    }

    pub fn to_series(&self) -> ClosedSeries {
        let terms: Vec<_> = self.terms.iter().map(|(x, c)| (x.clone(), c.clone())).collect();
        ClosedSeries::from_terms(self.rank, &terms)
    }

    pub fn add_term(&mut self, x: LexExponent, c: Q) {
        if c.is_zero() {
            return;
        }
        let x = x.promote(self.rank.max(x.rank()));
        let v = self.terms.entry(x.clone()).or_insert_with(Q::zero);
        *v += c;
        if v.is_zero() {
            self.terms.remove(&x);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms.keys().all(|x| x.is_zero())
    }

    pub fn sup(&self) -> Option<&LexExponent> {
        self.terms.keys().next_back()
    }

    pub fn min_exponent(&self) -> Option<&LexExponent> {
        self.terms.keys().next()
    }

    pub fn coef(&self, x: &LexExponent) -> Q {
        self.terms.get(x).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add(&self, o: &FracPoly) -> FracPoly {
        let mut r = self.clone();
        r.rank = r.rank.max(o.rank);
        for (x, c) in &o.terms {
            r.add_term(x.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> FracPoly {
        self.scale(&-Q::one())
    }

    pub fn sub(&self, o: &FracPoly) -> FracPoly {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &Q) -> FracPoly {
        if k.is_zero() {
            return FracPoly::zero(self.rank);
        }
        FracPoly { rank: self.rank, terms: self.terms.iter().map(|(x, c)| (x.clone(), c * k)).collect() }
    }

    pub fn shift(&self, y: &LexExponent) -> FracPoly {
        let rank = self.rank.max(y.rank());
        FracPoly { rank, terms: self.terms.iter().map(|(x, c)| (x.promote(rank).add(&y.promote(rank)), c.clone())).collect() }
    }

    pub fn mul(&self, o: &FracPoly) -> FracPoly {
        let mut r = FracPoly::zero(self.rank.max(o.rank));
        for (x, a) in &self.terms {
            for (y, b) in &o.terms {
                r.add_term(x.add(y), a * b);
            }
        }
        r
    }

    pub fn pow(&self, n: u32) -> FracPoly {
        let mut r = FracPoly::one(self.rank);
        for _ in 0..n {
            r = r.mul(self);
        }
        r
    }

    /// Scales so the coefficient at the largest exponent is one.
    pub fn monic_at_sup(&self) -> Result<FracPoly> {
        let c = self.sup().map(|x| self.coef(x)).ok_or_else(|| HahnError::pre("zero has no leading coefficient"))?;
        Ok(self.scale(&(Q::one() / c)))
    }

    /// Shifts the largest exponent to zero and scales its coefficient to one.
    pub fn monic_at_zero(&self) -> Result<FracPoly> {
        let s = self.sup().cloned().ok_or_else(|| HahnError::pre("zero cannot be normalised"))?;
        self.shift(&s.neg()).monic_at_sup()
    }

    /// Product with a closed series: a finite sum of scaled shifts.
    pub fn mul_series(&self, s: &ClosedSeries) -> Result<ClosedSeries> {
        let mut blocks = Vec::new();
        for (x, c) in &self.terms {
            for b in &s.blocks {
                blocks.push(b.scale(c).shift(&x.promote(s.rank.max(self.rank))));
            }
        }
        ClosedSeries::from_blocks(s.rank.max(self.rank), blocks)
    }

    /// Joint lattice of several polynomials and their coordinates in it.
    pub fn to_mpolys(ps: &[&FracPoly]) -> (Lattice, Vec<MPoly>) {
        let rank = ps.iter().map(|p| p.rank).max().unwrap_or(1);
        let xs: Vec<LexExponent> = ps.iter().flat_map(|p| p.terms.keys().map(|x| x.promote(rank))).collect();
        let l = Lattice::of(rank, &xs);
        let n = l.axes.len();
        let ms = ps
            .iter()
            .map(|p| {
                let mut m = MPoly::zero(n);
                for (x, c) in &p.terms {
                    m.add_term(l.coords(&x.promote(rank)).expect("in lattice"), c.clone());
                }
                m
            })
            .collect();
        (l, ms)
    }

    pub fn from_mpoly(l: &Lattice, m: &MPoly) -> FracPoly {
        let mut p = FracPoly::zero(l.rank);
        for (e, c) in &m.terms {
            p.add_term(l.point(e), c.clone());
        }
        p
    }
}

impl fmt::Display for FracPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (x, c) in self.terms.iter().rev() {
            let neg = *c < Q::zero();
            let a = if neg { -c.clone() } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let cs = crate::rat::fmt_q(&a);
            if x.is_zero() {
                write!(f, "{cs}")?;
            } else if a.is_one() {
                write!(f, "t^({x})")?;
            } else {
                write!(f, "{cs}*t^({x})")?;
            }
        }
        Ok(())
    }
}

/// Exact quotient `q / p`, if it exists for the given units.
pub fn divide(p: &FracPoly, q: &FracPoly, units: Units) -> Result<Option<FracPoly>> {
    if p.is_zero() {
        return Err(HahnError::pre("division by zero"));
    }
    if q.is_zero() {
        return Ok(Some(FracPoly::zero(q.rank)));
    }
    if units == Units::Constants && p.sup() < q.sup() {
        return Ok(None);
    }
    let (l, ms) = FracPoly::to_mpolys(&[p, q]);
    Ok(ms[1].div_laurent(&ms[0]).map(|m| FracPoly::from_mpoly(&l, &m)))
}

pub fn divides(p: &FracPoly, q: &FracPoly, units: Units) -> Result<bool> {
    Ok(divide(p, q, units)?.is_some())
}

/// `p` divides `t^x·q` for some exponent `x`.
pub fn almost_divides(p: &FracPoly, q: &FracPoly) -> Result<bool> {
    divides(p, q, Units::Monomials)
}

/// A greatest common divisor, monic at its largest exponent. With `Units::Constants` the
/// result is the divisor among series with non-positive exponents; with `Units::Monomials`
/// it is normalised to have largest exponent zero.
pub fn gcd(p: &FracPoly, q: &FracPoly, units: Units) -> Result<FracPoly> {
    if p.is_zero() && q.is_zero() {
        return Ok(FracPoly::zero(p.rank.max(q.rank)));
    }
    if p.is_zero() || q.is_zero() {
        let r = if p.is_zero() { q } else { p };
        return match units {
            Units::Constants => r.monic_at_sup(),
            Units::Monomials => r.monic_at_zero(),
        };
    }
    let (l, ms) = FracPoly::to_mpolys(&[p, q]);
    let g = FracPoly::from_mpoly(&l, &laurent_gcd(&ms[0], &ms[1])).monic_at_zero()?;
    Ok(match units {
        Units::Monomials => g,
        Units::Constants => {
            let top = p.sup().max(q.sup()).expect("nonzero").clone();
            g.shift(&top)
        }
    })
}

/// Largest divisor of `p` supported on the axes of `sub`, monic at zero.
pub fn p_g(p: &FracPoly, sub: &GroupSpec) -> Result<FracPoly> {
    if p.is_zero() {
        return Ok(FracPoly::zero(p.rank));
    }
    let (l, ms) = FracPoly::to_mpolys(&[p]);
    let inside: Vec<bool> = l.axes.iter().map(|(a, _)| sub.contains_axis(*a)).collect();
    // Coefficients of p as a polynomial in the complement variables.
    let mut coeffs: BTreeMap<Vec<i64>, MPoly> = BTreeMap::new();
    for (e, c) in &ms[0].terms {
        let outer: Vec<i64> = e.iter().zip(&inside).map(|(x, i)| if *i { 0 } else { *x }).collect();
        let inner: Vec<i64> = e.iter().zip(&inside).map(|(x, i)| if *i { *x } else { 0 }).collect();
        coeffs.entry(outer).or_insert_with(|| MPoly::zero(l.axes.len())).add_term(inner, c.clone());
    }
    let mut g = MPoly::zero(l.axes.len());
    for c in coeffs.values() {
        g = laurent_gcd(&g, c);
        if g.is_constant() {
            break;
        }
    }
    FracPoly::from_mpoly(&l, &g).monic_at_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::Exponent;
    use crate::rat::{q, qf};

    fn x(v: Q) -> LexExponent {
        LexExponent::from_rats(&[v])
    }

    fn fp(t: &[(Q, i64)]) -> FracPoly {
        FracPoly::from_terms(1, &t.iter().map(|(e, c)| (x(e.clone()), q(*c))).collect::<Vec<_>>())
    }

    fn sq2(k: i64) -> LexExponent {
        LexExponent::scalar(Exponent::term(2, q(k)))
    }

    #[test]
    fn lattices() {
        let (l, c) = lattice_basis(1, &[x(qf(-1, 2)), x(qf(-1, 3))]);
        assert_eq!(l.axes, vec![(Axis { level: 0, gen: 1 }, qf(1, 6))]);
        assert_eq!(c, vec![vec![-3], vec![-2]]);
        let (l, c) = lattice_basis(1, &[sq2(-1), sq2(-2)]);
        assert_eq!(l.axes, vec![(Axis { level: 0, gen: 2 }, q(1))]);
        assert_eq!(c, vec![vec![-1], vec![-2]]);
        let (l, _) = lattice_basis(1, &[x(q(-1)), sq2(-1)]);
        assert_eq!(l.axes.len(), 2);
    }

    #[test]
    fn gcd_examples() {
        let a = fp(&[(q(-1), 1), (q(-2), -1)]);
        let b = fp(&[(q(-2), 1), (q(-3), -1)]);
        assert_eq!(gcd(&a, &b, Units::Constants).unwrap(), a);
        assert_eq!(gcd(&a, &FracPoly::zero(1), Units::Constants).unwrap(), a);
        let c = fp(&[(q(0), 1), (q(-1), 1)]);
        let d = fp(&[(q(0), 1), (q(-1), -1)]);
        assert_eq!(gcd(&c, &d, Units::Constants).unwrap(), FracPoly::one(1));
    }

    #[test]
    fn divisibility_examples() {
        assert!(divides(&fp(&[(qf(-1, 2), 1)]), &fp(&[(q(-1), 1)]), Units::Constants).unwrap());
        assert!(!divides(&fp(&[(q(-1), 1)]), &fp(&[(qf(-1, 2), 1)]), Units::Constants).unwrap());
        let d = fp(&[(q(0), 1), (q(-1), 1)]);
        assert!(almost_divides(&d, &fp(&[(q(-1), 1), (q(-2), 1)])).unwrap());
        assert!(!almost_divides(&d, &fp(&[(q(0), 1), (q(-2), 1)])).unwrap());
        assert!(divide(&FracPoly::zero(1), &d, Units::Constants).is_err());
    }

    #[test]
    fn subgroup_divisor() {
        let a = fp(&[(q(0), 1), (q(-1), 1)]);
        let b = FracPoly::from_terms(1, &[(LexExponent::zero(1), q(1)), (sq2(-1), q(1))]);
        let g = GroupSpec::rationals(1);
        assert_eq!(p_g(&a.mul(&b), &g).unwrap(), a);
        assert_eq!(p_g(&b, &g).unwrap(), FracPoly::one(1));
        assert_eq!(p_g(&a.scale(&q(3)).shift(&x(q(-2))), &g).unwrap(), a);
        assert_eq!(fp(&[(q(-1), 2), (q(0), 2)]).monic_at_sup().unwrap(), a);
        assert_eq!(fp(&[(q(-2), 3)]).monic_at_sup().unwrap(), fp(&[(q(-2), 1)]));
    }
}
