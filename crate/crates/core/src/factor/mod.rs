//! Factorisation pipelines: maximal finite-support divisors, extraction of factorisations,
//! irreducibility and primality certificates, and the coarse machinery over lexicographic
//! exponent groups.

pub mod certify;
pub mod coarse;
pub mod oz;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{HahnError, Result};
use crate::exponents::{GroupSpec, LexExponent};
use crate::grpalg::{divide, gcd, FracPoly, Units};
use crate::ordinal::Ordinal;
use crate::rat::{is_int, Q};
use crate::rvcore::prv::{prv_coordinates, PrvDecomposition};
use crate::rvcore::RvElem;
use crate::series::block::Block;
use crate::series::closed::ClosedSeries;
use crate::series::enumerate::prefix;
use crate::series::lazy::{prefix_len_from_env, LazySeries};
use crate::supcomp::Tail;

pub use certify::{certify_irreducible, certify_prime};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Verdict {
    Certified,
    Refuted,
    Unknown,
}

impl Verdict {
    /// Process exit status for this verdict.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Certified => 0,
            Verdict::Refuted => 1,
            Verdict::Unknown => 2,
        }
    }

    pub fn parse(s: &str) -> Option<Verdict> {
        match s {
            "Certified" => Some(Verdict::Certified),
            "Refuted" => Some(Verdict::Refuted),
            "Unknown" => Some(Verdict::Unknown),
            _ => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// The criterion behind a verdict.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Criterion {
    /// Order type `ω + k` and supremum zero: irreducible.
    ThmE,
    /// Order type `ω + k` and supremum zero: prime.
    ThmF,
    /// Degree principal and no nontrivial finite-support divisor.
    DegPrincipal,
    /// Degree one with an irreducible leading class in the fraction-field extension.
    Deg1Frac,
    /// Order-type criterion applied to the coarse reading.
    CoarseThmE,
    /// Degree criterion applied to the coarse reading.
    CoarseDegPrincipal,
    /// A monomial `t^x` with `x < 0` divides the series.
    MonomialDivisor,
    /// A non-constant finite-support series divides the series.
    FiniteDivisor,
    /// The series is a product of ladders on distinct axes.
    ProductSplit,
    /// An explicit factorisation of a finite-support series.
    FiniteFactor,
    /// An irreducibility refutation carried over to primality.
    Reducible,
    Zero,
    Unit,
    /// The exponent group is not Archimedean.
    NotArchimedean,
    /// None of the implemented criteria applies.
    OutsideCriteria,
}

impl Criterion {
    pub const ALL: [Criterion; 15] = [
        Criterion::ThmE,
        Criterion::ThmF,
        Criterion::DegPrincipal,
        Criterion::Deg1Frac,
        Criterion::CoarseThmE,
        Criterion::CoarseDegPrincipal,
        Criterion::MonomialDivisor,
        Criterion::FiniteDivisor,
        Criterion::ProductSplit,
        Criterion::FiniteFactor,
        Criterion::Reducible,
        Criterion::Zero,
        Criterion::Unit,
        Criterion::NotArchimedean,
        Criterion::OutsideCriteria,
    ];

    pub fn parse(s: &str) -> Option<Criterion> {
        Criterion::ALL.iter().copied().find(|c| c.to_string() == s)
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// A tri-state verdict with the criterion used and supporting data.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Certificate {
    pub verdict: Verdict,
    pub criterion: Criterion,
    pub witnesses: BTreeMap<String, String>,
    /// Number of terms compared when the verdict rests on a lazy prefix.
    pub prefix_checked: Option<usize>,
}

impl Certificate {
    pub fn new(verdict: Verdict, criterion: Criterion) -> Self {
        Certificate { verdict, criterion, witnesses: BTreeMap::new(), prefix_checked: None }
    }

    pub fn certified(c: Criterion) -> Self {
        Self::new(Verdict::Certified, c)
    }

    pub fn refuted(c: Criterion) -> Self {
        Self::new(Verdict::Refuted, c)
    }

    pub fn unknown(c: Criterion) -> Self {
        Self::new(Verdict::Unknown, c)
    }

    pub fn with(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.witnesses.insert(key.to_string(), value.to_string());
        self
    }
}

/// Which elements may be used as coefficients at exponent zero.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ZRing {
    Integers,
    Rationals,
}

impl ZRing {
    pub fn contains(self, x: &Q) -> bool {
        match self {
            ZRing::Integers => is_int(x),
            ZRing::Rationals => true,
        }
    }
}

/// The ring in which a factorisation takes place.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum RingContext {
    /// Series with non-positive real exponents.
    Real,
    /// Series with non-positive exponents in a subgroup.
    Group(GroupSpec),
    /// `Z + K((G^{<0}))`.
    Omnific { z: ZRing, group: GroupSpec },
}

impl fmt::Display for RingContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingContext::Real => write!(f, "K((R<=0))"),
            RingContext::Group(_) => write!(f, "K((G<=0))"),
            RingContext::Omnific { z: ZRing::Integers, .. } => write!(f, "Z+K((G<0))"),
            RingContext::Omnific { z: ZRing::Rationals, .. } => write!(f, "Q+K((G<0))"),
        }
    }
}

/// `b = unit · p · Π factors`.
#[derive(Clone, PartialEq, Debug)]
pub struct Factorisation {
    pub p: ClosedSeries,
    pub unit: Q,
    pub factors: Vec<(ClosedSeries, Certificate)>,
    pub context: RingContext,
    /// Upper bound on the number of infinite factors, when one is known.
    pub count_bound: Option<u64>,
    pub notes: BTreeMap<String, String>,
}

/// How a factorisation was checked against its input.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Check {
    Exact,
    Prefix(usize),
    Failed,
}

impl Factorisation {
    /// The finite part as a finite-support series, when it has finite support.
    pub fn finite_part(&self) -> Option<FracPoly> {
        FracPoly::from_series(&self.p)
    }

    /// Compares `unit · p · Π factors` with `b`, exactly when the product stays closed and
    /// on an initial segment of the support otherwise.
    pub fn verify(&self, b: &ClosedSeries) -> Result<Check> {
        let mut parts = vec![self.p.scale(&self.unit)];
        parts.extend(self.factors.iter().map(|(f, _)| f.clone()));
        let mut acc = ClosedSeries::one(b.rank);
        let mut closed = true;
        for f in &parts {
            match acc.mul_closed(f)? {
                Some(x) => acc = x,
                None => {
                    closed = false;
                    break;
                }
            }
        }
        if closed {
            return Ok(if acc == *b { Check::Exact } else { Check::Failed });
        }
        let n = prefix_len_from_env();
        let mut lazy = LazySeries::from_closed(&parts[0]);
        for f in &parts[1..] {
            lazy = LazySeries::product(&lazy, &LazySeries::from_closed(f));
        }
        let mut lazy = lazy.with_prefix_len(n);
        let got = lazy.prefix()?.to_vec();
        let want = prefix(b, n)?;
        Ok(if got == want { Check::Prefix(got.len()) } else { Check::Failed })
    }
}

fn gcd_all(rank: usize, ps: &[FracPoly]) -> Result<FracPoly> {
    let mut g = FracPoly::zero(rank);
    for p in ps {
        g = gcd(&g, p, Units::Constants)?;
    }
    Ok(g)
}

/// Maximal finite-support divisor of a degree class, given by a representative: the gcd of
/// its principal coordinates.
pub fn p_of_class(b: &ClosedSeries) -> Result<FracPoly> {
    if b.is_zero() {
        return Ok(FracPoly::zero(b.rank));
    }
    let dec = prv_coordinates(b)?;
    gcd_all(b.rank, &dec.coords)
}

/// Maximal finite-support divisor of an element of the degree `RV` monoid.
pub fn p_of_rv(x: &RvElem<ClosedSeries, Ordinal>) -> Result<FracPoly> {
    p_of_class(&x.rep)
}

/// `Σ (coords_i / p) · basis_i`, or `None` when `p` does not divide every coordinate.
fn quotient_top(dec: &PrvDecomposition, p: &FracPoly, rank: usize) -> Result<Option<ClosedSeries>> {
    let mut s = ClosedSeries::zero(rank);
    for (c, e) in dec.coords.iter().zip(&dec.basis) {
        let Some(q) = divide(p, c, Units::Monomials)? else { return Ok(None) };
        s = s.add(&q.mul_series(e)?)?;
    }
    Ok(Some(s))
}

fn degree_dropped(next: &ClosedSeries, cur: &ClosedSeries) -> Result<()> {
    if !next.is_zero() && next.max_dim() >= cur.max_dim() {
        return Err(HahnError::closure("remainder did not drop in degree"));
    }
    Ok(())
}

/// Maximal finite-support divisor `p(b)`, monic at its largest exponent; `p(0) = 0`.
pub fn p_of_series(b: &ClosedSeries) -> Result<FracPoly> {
    let rank = b.rank;
    let mut acc = FracPoly::zero(rank);
    let mut cur = b.clone();
    while !cur.is_zero() {
        if cur.is_finite() {
            let f = FracPoly::from_series(&cur).expect("finite");
            acc = gcd(&acc, &f, Units::Constants)?;
            break;
        }
        let dec = prv_coordinates(&cur)?;
        let pb = gcd_all(rank, &dec.coords)?;
        let top = quotient_top(&dec, &pb, rank)?.expect("the gcd divides every coordinate");
        let next = cur.sub(&pb.mul_series(&top)?)?;
        degree_dropped(&next, &cur)?;
        acc = gcd(&acc, &pb, Units::Constants)?;
        if acc == FracPoly::one(rank) {
            break;
        }
        cur = next;
    }
    if acc.is_zero() {
        return Ok(acc);
    }
    acc.monic_at_sup()
}

/// Exact quotient `b / p` for a finite-support divisor `p`.
pub fn div_by_poly(b: &ClosedSeries, p: &FracPoly) -> Result<ClosedSeries> {
    if p.is_zero() {
        return Err(HahnError::pre("division by zero"));
    }
    let rank = b.rank.max(p.rank);
    let mut out = ClosedSeries::zero(rank);
    let mut cur = b.clone();
    while !cur.is_zero() {
        if cur.is_finite() {
            let f = FracPoly::from_series(&cur).expect("finite");
            let q = divide(p, &f, Units::Monomials)?.ok_or_else(|| HahnError::pre("the divisor does not divide the series"))?;
            out = out.add(&q.to_series())?;
            break;
        }
        let dec = prv_coordinates(&cur)?;
        let top = quotient_top(&dec, p, rank)?.ok_or_else(|| HahnError::pre("the divisor does not divide the series"))?;
        let next = cur.sub(&p.mul_series(&top)?)?;
        degree_dropped(&next, &cur)?;
        out = out.add(&top)?;
        cur = next;
    }
    if !out.is_nonpositive() {
        return Err(HahnError::pre("the quotient has positive exponents"));
    }
    Ok(out)
}

/// Shift putting the supremum of a block at zero, when that supremum is a group element.
fn sup_point(b: &Block) -> Option<LexExponent> {
    let c = b.limit_cut();
    if c.tail == Tail::Above || c.vals.len() != b.rank() {
        return None;
    }
    Some(LexExponent { c: c.vals })
}

/// Splits a single block whose coefficients have rank one across all axes into ladders,
/// each shifted to have supremum zero: `c = unit · t^rest · Π ladders`. The residual shift
/// is folded into the first ladder.
pub fn split_product(c: &ClosedSeries) -> Option<(Q, Vec<ClosedSeries>)> {
    if c.blocks.len() != 1 || c.blocks[0].dim() < 2 {
        return None;
    }
    let blk = &c.blocks[0];
    let mut rest = blk.tensor.clone();
    let mut streams = Vec::new();
    for _ in 0..blk.dim() - 1 {
        let (a, r) = rest.split_rank_one(&[0])?;
        streams.push(a);
        rest = r;
    }
    let unit_key = rest.terms.keys().next()?.clone();
    let lead = rest.terms[&unit_key].clone();
    streams.push(rest.scale(&(Q::one() / &lead)));
    let mut total = blk.base.clone();
    let mut ladders = Vec::new();
    for (f, t) in blk.factors.iter().zip(streams) {
        let l = Block::ladder(LexExponent::zero(c.rank), f.axis, f.seq.clone(), f.n0, t);
        let x = sup_point(&l)?;
        total = total.add(&x);
        ladders.push(ClosedSeries::from_blocks(c.rank, vec![l.shift(&x.neg())]).ok()?);
    }
    if !total.is_zero() {
        ladders[0] = ladders[0].shift(&total).ok()?;
    }
    Some((lead, ladders))
}

/// Extraction of the finite part and the infinite factors exhibited by the closed form,
/// with certificates, over the real exponent group.
pub fn factor_theorem_a(b: &ClosedSeries) -> Result<Factorisation> {
    if b.rank != 1 {
        return Err(HahnError::domain("an Archimedean exponent group is required"));
    }
    if b.is_zero() {
        return Err(HahnError::pre("zero has no factorisation"));
    }
    let p = p_of_series(b)?;
    let cof = div_by_poly(b, &p)?;
    let (unit, parts) = if cof.is_finite() {
        let k = cof.coefficient_at(&LexExponent::zero(b.rank));
        if cof != ClosedSeries::constant(b.rank, k.clone()) {
            return Err(HahnError::closure("finite cofactor is not a constant"));
        }
        (k, Vec::new())
    } else {
        match split_product(&cof) {
            Some((k, fs)) => (k, fs),
            None => (Q::one(), vec![cof]),
        }
    };
    let factors = parts.into_iter().map(|f| {
        let c = certify_irreducible(&f);
        (f, c)
    });
    let count_bound = match b.degree().fin() {
        Some(d) => d.coefficient_sum().try_into().ok(),
        None => None,
    };
    Ok(Factorisation {
        p: p.to_series(),
        unit,
        factors: factors.collect(),
        context: RingContext::Real,
        count_bound,
        notes: BTreeMap::new(),
    })
}

/// Whether two finite-support series agree up to a nonzero scalar.
pub fn equal_up_to_scalar(p: &FracPoly, q: &FracPoly) -> bool {
    match (p.sup(), q.sup()) {
        (None, None) => true,
        (Some(x), Some(y)) if x == y => {
            let k = q.coef(y) / p.coef(x);
            !k.is_zero() && p.scale(&k) == *q
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::Axis;
    use crate::rat::{q, qf};
    use crate::series::seq::Seq;
    use crate::series::tensor::Tensor;

    fn x(v: Q) -> LexExponent {
        LexExponent::from_rats(&[v])
    }

    fn ladder(lim: Q, a: Q, gen: u64) -> ClosedSeries {
        let l = Block::ladder(LexExponent::zero(1), Axis { level: 0, gen }, Seq::harm(lim, a), 1, Tensor::constant(1, q(1)));
        ClosedSeries::from_blocks(1, vec![l]).unwrap()
    }

    fn one_plus_inv() -> FracPoly {
        FracPoly::from_terms(1, &[(x(q(0)), q(1)), (x(q(-1)), q(1))])
    }

    #[test]
    fn p_of_products() {
        let l = ladder(q(0), q(1), 1);
        assert_eq!(p_of_series(&l).unwrap(), FracPoly::one(1));
        let b = one_plus_inv().mul_series(&l).unwrap();
        assert_eq!(p_of_series(&b).unwrap(), one_plus_inv().monic_at_sup().unwrap());
        let f = FracPoly::from_terms(1, &[(x(q(-2)), q(3)), (x(q(-1)), q(6))]);
        assert_eq!(p_of_series(&f.to_series()).unwrap(), f.monic_at_sup().unwrap());
        assert!(p_of_series(&ClosedSeries::zero(1)).unwrap().is_zero());
    }

    #[test]
    fn division_recovers_cofactor() {
        let l = ladder(q(-1), q(1), 1).add(&ClosedSeries::one(1)).unwrap();
        let p = one_plus_inv();
        let b = p.mul_series(&l).unwrap();
        assert_eq!(div_by_poly(&b, &p).unwrap(), l);
    }

    #[test]
    fn theorem_a_extraction() {
        let c = ladder(q(-1), q(1), 1).add(&ClosedSeries::one(1)).unwrap();
        let b = one_plus_inv().mul_series(&c).unwrap();
        let f = factor_theorem_a(&b).unwrap();
        assert!(equal_up_to_scalar(&f.finite_part().unwrap(), &one_plus_inv()));
        assert_eq!(f.factors.len(), 1);
        assert_eq!(f.factors[0].1.verdict, Verdict::Certified);
        assert_eq!(f.verify(&b).unwrap(), Check::Exact);
        let fin = factor_theorem_a(&one_plus_inv().to_series()).unwrap();
        assert!(fin.factors.is_empty());
        assert_eq!(fin.verify(&one_plus_inv().to_series()).unwrap(), Check::Exact);
    }

    #[test]
    fn product_block_splits() {
        let a = ladder(q(0), q(1), 1);
        let c = ladder(q(0), qf(1, 2), 2);
        let ac = a.mul_closed(&c).unwrap().unwrap().scale(&q(3));
        let (k, fs) = split_product(&ac).unwrap();
        assert_eq!(k, q(3));
        assert_eq!(fs.len(), 2);
        let prod = fs[0].mul_closed(&fs[1]).unwrap().unwrap().scale(&k);
        assert_eq!(prod, ac);
    }
}
