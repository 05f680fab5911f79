//! Two coarsely irreducible series in `ℤ + K((G^{<0}))` without a greatest common divisor.

use std::fmt;

use num_traits::One;

use crate::error::{HahnError, Result};
use crate::exponents::{Axis, Domination, GroupSpec, LexExponent};
use crate::factor::coarse::{coarse_factor, unit_ladder};
use crate::factor::{p_of_series, Certificate, Criterion, Verdict, ZRing};
use crate::grpalg::FracPoly;
use crate::rat::{q, Q};
use crate::series::block::{Block, Factor};
use crate::series::closed::ClosedSeries;
use crate::series::enumerate::natural_valuation;
use crate::series::seq::Seq;
use crate::series::tensor::{Key, Tensor};

const TOP: Axis = Axis { level: 0, gen: 1 };
const LOW: Axis = Axis { level: 1, gen: 1 };

fn lex(a: Q, b: Q) -> LexExponent {
    LexExponent::from_rats(&[a, b])
}

/// `Σ_{n>=1} t^{(-a/n, 0)}`.
pub fn harmonic_top(a: Q) -> ClosedSeries {
    unit_ladder(2, LexExponent::zero(2), TOP, Seq::harm(q(0), a)).expect("ladder")
}

/// `Σ_{n>=1} t^{(-a/n, 0)} · Σ_{k>=1} stream(k)·t^{(0, j·k)}` with a lower-level stream.
fn grid_cofactor(a: &Q, step: i64, stream: Vec<(Key, Q)>) -> Result<ClosedSeries> {
    let mut t = Tensor { periods: vec![1, 1], terms: Default::default() };
    for (k, c) in stream {
        t.add_term(vec![Key::unit(), k], c);
    }
    let blk = Block {
        base: LexExponent::zero(2),
        factors: vec![
            Factor { axis: TOP, seq: Seq::harm(q(0), a.clone()), n0: 1 },
            Factor { axis: LOW, seq: Seq::Arith { off: q(0), a: q(step) }, n0: 1 },
        ],
        tensor: t,
    };
    ClosedSeries::from_blocks(2, vec![blk])
}

/// Outcome of a divisibility test of one sampled `d` against `b` and `c`.
#[derive(Clone, Debug, PartialEq)]
pub struct OzSample {
    pub d: ClosedSeries,
    pub divides_b: bool,
    pub divides_c: bool,
    /// Whether `v(d)` lies in a strictly smaller Archimedean class than `v(b)`.
    pub dominated: bool,
    pub witness: String,
}

impl OzSample {
    pub fn consistent(&self) -> bool {
        self.divides_b == self.dominated && self.divides_c == self.dominated
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OzVerdict {
    NoGcd,
    Inconsistent,
}

impl fmt::Display for OzVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OzVerdict::NoGcd => write!(f, "NoGCD"),
            OzVerdict::Inconsistent => write!(f, "Inconsistent"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OzReport {
    pub b: ClosedSeries,
    pub c: ClosedSeries,
    pub b_certificate: Certificate,
    pub c_certificate: Certificate,
    pub d: ClosedSeries,
    /// Cofactors of `d` and `d²` in `b` and in `c`, each checked by multiplication.
    pub cofactors: Vec<(String, ClosedSeries)>,
    /// `1/d`, which has positive exponents, so `d² ∤ d`.
    pub d_inverse: ClosedSeries,
    pub samples: Vec<OzSample>,
    pub verdict: OzVerdict,
}

fn check_product(x: &ClosedSeries, y: &ClosedSeries, want: &ClosedSeries) -> Result<bool> {
    Ok(x.mul_closed(y)?.is_some_and(|p| p == *want))
}

fn coarse_certificate(b: &ClosedSeries) -> Result<Certificate> {
    let cf = coarse_factor(b, ZRing::Integers, &GroupSpec::real(2))?;
    let f = &cf.factorisation;
    if f.factors.len() == 1 && f.p.is_finite() && f.p.blocks.iter().all(|blk| blk.base.is_zero()) {
        Ok(f.factors[0].1.clone())
    } else {
        Ok(Certificate::unknown(Criterion::OutsideCriteria))
    }
}

/// `b / (u + w·t^{(0,-j)})` as a closed grid.
fn binomial_cofactor(a: &Q, u: &Q, w: &Q, j: i64) -> Result<ClosedSeries> {
    let ratio = -(u / w);
    grid_cofactor(a, j, vec![(Key { r: 0, w: ratio, j: 0 }, -(Q::one() / u))])
}

fn sample_binomial(b: &ClosedSeries, c: &ClosedSeries, u: i64, w: i64, j: i64) -> Result<OzSample> {
    let d = ClosedSeries::from_terms(2, &[(lex(q(0), q(0)), q(u)), (lex(q(0), q(-j)), q(w))]);
    let fb = binomial_cofactor(&q(1), &q(u), &q(w), j)?;
    let fc = binomial_cofactor(&q(2), &q(u), &q(w), j)?;
    let divides_b = fb.is_nonpositive() && check_product(&d, &fb, b)?;
    let divides_c = fc.is_nonpositive() && check_product(&d, &fc, c)?;
    Ok(OzSample { dominated: dominated(&d, b)?, d, divides_b, divides_c, witness: "explicit geometric cofactor".into() })
}

fn sample_monomial(b: &ClosedSeries, c: &ClosedSeries, x: LexExponent) -> Result<OzSample> {
    let d = ClosedSeries::monomial(x.clone(), q(1));
    let qb = b.shift(&x.neg())?;
    let qc = c.shift(&x.neg())?;
    let witness = if qb.is_nonpositive() { "shifted cofactor".into() } else { "quotient has a positive exponent".into() };
    Ok(OzSample {
        dominated: dominated(&d, b)?,
        d,
        divides_b: qb.is_nonpositive(),
        divides_c: qc.is_nonpositive(),
        witness,
    })
}

/// `1 + t^{(-a, 0)}` cannot divide: the coarse readings of `b` and `c` have trivial
/// finite part, and `p` is multiplicative.
fn sample_top_binomial(b: &ClosedSeries, c: &ClosedSeries, a: Q) -> Result<OzSample> {
    let d = ClosedSeries::from_terms(2, &[(lex(q(0), q(0)), q(1)), (lex(-a.clone(), q(0)), q(1))]);
    let dt = FracPoly::from_terms(1, &[(LexExponent::from_rats(&[q(0)]), q(1)), (LexExponent::from_rats(&[-a]), q(1))]);
    let top = |s: &ClosedSeries| -> Result<FracPoly> {
        let blocks = s
            .blocks
            .iter()
            .map(|blk| Block {
                base: LexExponent { c: vec![blk.base.c[0].clone()] },
                factors: blk.factors.clone(),
                tensor: blk.tensor.clone(),
            })
            .collect();
        p_of_series(&ClosedSeries::from_blocks(1, blocks)?)
    };
    let pb = top(b)?;
    let pc = top(c)?;
    let pd = p_of_series(&dt.to_series())?;
    let blocked = |p: &FracPoly| p == &FracPoly::one(1) && pd != FracPoly::one(1);
    Ok(OzSample {
        dominated: dominated(&d, b)?,
        divides_b: !blocked(&pb),
        divides_c: !blocked(&pc),
        witness: format!("coarse p(b) = {pb}, coarse p(c) = {pc}, p(d) = {pd}"),
        d,
    })
}

fn dominated(d: &ClosedSeries, b: &ClosedSeries) -> Result<bool> {
    let vd = natural_valuation(d)?;
    let vb = natural_valuation(b)?;
    Ok(vd.is_zero() || LexExponent::domination(&vd, &vb)? == Domination::StrictlyDominated)
}

/// Builds the pair, certifies both coarsely irreducible, checks divisibility by sampled `d`,
/// and exhibits `d` and `d²` as common divisors with `d² ∤ d`.
pub fn oz_gcd_demo() -> Result<OzReport> {
    let b = harmonic_top(q(1));
    let c = harmonic_top(q(2));
    let b_certificate = coarse_certificate(&b)?;
    let c_certificate = coarse_certificate(&c)?;
    let d = ClosedSeries::from_terms(2, &[(lex(q(0), q(0)), q(1)), (lex(q(0), q(-1)), q(1))]);
    let d2 = d.mul_closed(&d)?.ok_or_else(|| HahnError::closure("d² leaves the closed family"))?;
    let m1 = Q::from_integer((-1).into());
    let d_stream = vec![(Key { r: 0, w: m1.clone(), j: 0 }, m1.clone())];
    let d2_stream = vec![(Key { r: 0, w: m1.clone(), j: 1 }, q(1)), (Key { r: 0, w: m1.clone(), j: 0 }, m1.clone())];
    let mut cofactors = Vec::new();
    let mut ok = true;
    for (name, target, a) in [("b", &b, q(1)), ("c", &c, q(2))] {
        let e1 = grid_cofactor(&a, 1, d_stream.clone())?;
        let e2 = grid_cofactor(&a, 1, d2_stream.clone())?;
        ok &= e1.is_nonpositive() && check_product(&d, &e1, target)?;
        ok &= e2.is_nonpositive() && check_product(&d2, &e2, target)?;
        cofactors.push((format!("{name}/d"), e1));
        cofactors.push((format!("{name}/d^2"), e2));
    }
    let inv = Block::ladder(
        LexExponent::zero(2),
        LOW,
        Seq::Arith { off: q(0), a: q(1) },
        1,
        Tensor::stream(1, vec![(Key { r: 0, w: m1.clone(), j: 0 }, m1)]),
    );
    let d_inverse = ClosedSeries::from_blocks(2, vec![inv])?;
    ok &= check_product(&d, &d_inverse, &ClosedSeries::one(2))? && !d_inverse.is_nonpositive();
    let mut samples = Vec::new();
    for (u, w, j) in [(1, 1, 1), (2, -3, 1), (1, 2, 2), (-5, 1, 3)] {
        samples.push(sample_binomial(&b, &c, u, w, j)?);
    }
    for j in 1..=3 {
        samples.push(sample_monomial(&b, &c, lex(q(0), q(-j)))?);
    }
    for a in [q(1), Q::new(1.into(), 2.into()), q(2)] {
        samples.push(sample_monomial(&b, &c, lex(-a.clone(), q(0)))?);
        samples.push(sample_top_binomial(&b, &c, a)?);
    }
    ok &= samples.iter().all(OzSample::consistent);
    ok &= [&b_certificate, &c_certificate].iter().all(|c| c.verdict == Verdict::Certified);
    let verdict = if ok { OzVerdict::NoGcd } else { OzVerdict::Inconsistent };
    Ok(OzReport { b, c, b_certificate, c_certificate, d, cofactors, d_inverse, samples, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn demo_reports_no_gcd() {
        let r = oz_gcd_demo().unwrap();
        assert_eq!(r.b_certificate.criterion, Criterion::CoarseThmE);
        for s in &r.samples {
            assert!(s.consistent(), "{} {s:?}", s.d);
        }
        assert_eq!(r.verdict, OzVerdict::NoGcd);
    }

    #[test]
    fn top_monomial_divides_neither() {
        let r = oz_gcd_demo().unwrap();
        let s = r.samples.iter().find(|s| s.d == ClosedSeries::monomial(lex(q(-1), q(0)), q(1))).unwrap();
        assert!(!s.divides_b && !s.divides_c && !s.dominated);
    }
}
