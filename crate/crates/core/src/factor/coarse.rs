//! The coarse reading of a series over a lexicographic group: `μ`, `μ_σ`, `M_σ`, `λ`,
//! standard parts, coarse supports, and coarse factorisation.

use num_traits::{One, Zero};

use crate::error::{HahnError, Result};
use crate::exponents::{Axis, Exponent, GroupSpec, LexExponent};
use crate::factor::{
    certify_irreducible, div_by_poly, p_of_series, split_product, Certificate, Criterion, Factorisation, RingContext,
    Verdict, ZRing,
};
use crate::grpalg::{p_g, FracPoly};
use crate::rat::Q;
use crate::series::block::Block;
use crate::series::closed::ClosedSeries;
use crate::series::enumerate::{leading_term, natural_valuation};
use crate::series::tensor::Tensor;
use crate::supcomp::{Cut, SetPart, StructuredSet};

/// Coefficient at zero.
pub fn mu(b: &ClosedSeries) -> Q {
    b.coefficient_at(&LexExponent::zero(b.rank))
}

/// The level of the natural valuation; fails for constants.
pub fn sigma_of(b: &ClosedSeries) -> Result<usize> {
    let v = natural_valuation(b)?;
    v.c.iter().position(|e| !e.is_zero()).ok_or_else(|| HahnError::pre("constant series have no coarse level"))
}

/// Terms whose coordinate at `level` equals `target`.
pub fn restrict_coord(b: &ClosedSeries, level: usize, target: &Exponent) -> Result<ClosedSeries> {
    let mut out = Vec::new();
    'blocks: for blk in &b.blocks {
        let mut gens: Vec<u64> = target.gens().collect();
        gens.extend(blk.base.c.get(level).map(|e| e.gens().collect::<Vec<_>>()).unwrap_or_default());
        gens.extend(blk.factors.iter().filter(|f| f.axis.level == level).map(|f| f.axis.gen));
        gens.sort();
        gens.dedup();
        let mut cur = blk.clone();
        for gen in gens {
            let axis = Axis { level, gen };
            let want = target.coef(gen);
            match cur.factors.iter().position(|f| f.axis == axis) {
                Some(i) => {
                    let f = &cur.factors[i];
                    let Some(n) = f.seq.index_of(&(want - cur.base.coord(axis))) else { continue 'blocks };
                    if n < f.n0 || !f.seq.valid(n) {
                        continue 'blocks;
                    }
                    cur = cur.slice(i, n);
                }
                None => {
                    if cur.base.coord(axis) != want {
                        continue 'blocks;
                    }
                }
            }
        }
        out.push(cur);
    }
    ClosedSeries::from_blocks(b.rank, out)
}

fn restrict_top_levels(b: &ClosedSeries, levels: usize) -> Result<ClosedSeries> {
    let mut s = b.clone();
    for l in 0..levels.min(b.rank) {
        s = restrict_coord(&s, l, &Exponent::zero())?;
    }
    Ok(s)
}

/// `μ_σ(b)`: the terms whose exponent is of class below level `sigma`.
pub fn mu_sigma(b: &ClosedSeries, sigma: usize) -> Result<ClosedSeries> {
    restrict_top_levels(b, sigma + 1)
}

/// `M_σ(b)`: the terms whose exponent is of class at most level `sigma`.
pub fn big_m_sigma(b: &ClosedSeries, sigma: usize) -> Result<ClosedSeries> {
    restrict_top_levels(b, sigma)
}

/// The level-`sigma` subgroup of `g` as a rank-one group.
pub fn h_sigma(g: &GroupSpec, sigma: usize) -> GroupSpec {
    GroupSpec { levels: vec![g.levels.get(sigma).cloned().unwrap_or(None)] }
}

/// Coarse projection of a block and its complement: `blk = coarse ⊗ fine`, with the
/// coarse block of rank one.
fn split_block(blk: &Block, l: usize) -> Option<(Block, Block)> {
    let coarse_ix: Vec<usize> = (0..blk.dim()).filter(|&i| blk.factors[i].axis.level == l).collect();
    let (tc, tf) = blk.tensor.split_rank_one(&coarse_ix)?;
    let mut fine_base = blk.base.clone();
    let h = fine_base.c[l].clone();
    fine_base.c[l] = Exponent::zero();
    let coarse = Block {
        base: LexExponent { c: vec![h] },
        factors: coarse_ix
            .iter()
            .map(|&i| {
                let mut f = blk.factors[i].clone();
                f.axis.level = 0;
                f
            })
            .collect(),
        tensor: tc,
    };
    let fine = Block {
        base: fine_base,
        factors: (0..blk.dim()).filter(|i| !coarse_ix.contains(i)).map(|i| blk.factors[i].clone()).collect(),
        tensor: tf,
    };
    Some((coarse, fine))
}

/// Lifts a rank-one series to level `l` of a rank-`rank` group.
pub fn embed_coarse(s: &ClosedSeries, l: usize, rank: usize) -> Result<ClosedSeries> {
    let blocks = s
        .blocks
        .iter()
        .map(|b| Block {
            base: LexExponent::embed(&b.base.c[0], l, rank),
            factors: b
                .factors
                .iter()
                .map(|f| {
                    let mut f = f.clone();
                    f.axis.level = l;
                    f
                })
                .collect(),
            tensor: b.tensor.clone(),
        })
        .collect();
    ClosedSeries::from_blocks(rank, blocks)
}

/// The coarse support as a rank-one structured set.
pub fn osupp(b: &ClosedSeries, l: usize) -> StructuredSet {
    let parts = b
        .blocks
        .iter()
        .map(|blk| {
            let base = LexExponent { c: vec![blk.base.c[l].clone()] };
            let factors: Vec<_> = blk
                .factors
                .iter()
                .filter(|f| f.axis.level == l)
                .map(|f| {
                    let mut f = f.clone();
                    f.axis.level = 0;
                    f
                })
                .collect();
            if factors.is_empty() {
                SetPart::Finite(vec![base])
            } else {
                SetPart::Grid { base, factors }
            }
        })
        .collect();
    StructuredSet { rank: 1, parts }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoarseData {
    pub sigma: usize,
    pub support: StructuredSet,
    /// Supremum of the coarse support in the completion of `H_σ`.
    pub sup: Cut,
    pub sup_in_h: bool,
    pub infinite: bool,
    pub mu: Q,
    pub mu_sigma: ClosedSeries,
    pub m_sigma: ClosedSeries,
    pub lambda: Option<ClosedSeries>,
}

pub fn coarse_support(b: &ClosedSeries, g: &GroupSpec) -> Result<CoarseData> {
    let sigma = sigma_of(b)?;
    let h = h_sigma(&g.with_rank(b.rank), sigma);
    let support = osupp(b, sigma);
    let sup = support.sup(&h).ok_or_else(|| HahnError::pre("empty support"))?;
    let sup_in_h = sup.is_point();
    let infinite = support.parts.iter().any(|p| matches!(p, SetPart::Grid { .. }));
    let lambda = match sup.as_point() {
        Some(r) => Some(restrict_coord(b, sigma, &r.c[0])?),
        None => None,
    };
    Ok(CoarseData {
        sigma,
        support,
        sup,
        sup_in_h,
        infinite,
        mu: mu(b),
        mu_sigma: mu_sigma(b, sigma)?,
        m_sigma: big_m_sigma(b, sigma)?,
        lambda,
    })
}

/// `λ(b)`, defined when the supremum of the coarse support lies in `H_σ`.
pub fn lambda_coeff(b: &ClosedSeries, g: &GroupSpec) -> Result<Option<ClosedSeries>> {
    Ok(coarse_support(b, g)?.lambda)
}

/// A standard part: an exact value, or a quotient of two exponents outside the represented
/// reals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StValue {
    Exact(Exponent),
    Ratio { num: Exponent, den: Exponent },
}

impl std::fmt::Display for StValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StValue::Exact(x) => write!(f, "{x}"),
            StValue::Ratio { num, den } => write!(f, "({num})/({den})"),
        }
    }
}

/// `st_b(x) = inf{q ∈ ℚ : |x| <= q·|v(b)|}` for `v(b) <= x <= 0`.
pub fn st(b: &ClosedSeries, x: &LexExponent) -> Result<StValue> {
    let v = natural_valuation(b)?;
    let l = v.c.iter().position(|e| !e.is_zero()).ok_or_else(|| HahnError::pre("constant series"))?;
    let x = x.promote(b.rank);
    if x < v || x > LexExponent::zero(b.rank) {
        return Err(HahnError::domain("st requires v(b) <= x <= 0"));
    }
    if x.c[..=l].iter().all(|e| e.is_zero()) {
        return Ok(StValue::Exact(Exponent::zero()));
    }
    let num = x.c[l].neg();
    let den = v.c[l].neg();
    if let Some(d) = den.as_rational() {
        return Ok(StValue::Exact(num.scale(&(Q::one() / d))));
    }
    let (g, c) = den.coords().iter().next().map(|(g, c)| (*g, c.clone())).expect("nonzero");
    let k = num.coef(g) / c;
    if num.sub(&den.scale(&k)).is_zero() {
        return Ok(StValue::Exact(Exponent::rat(k)));
    }
    Ok(StValue::Ratio { num, den })
}

/// Result of coarse factorisation, with the data of the coarse reading.
#[derive(Clone, Debug, PartialEq)]
pub struct CoarseFactorisation {
    pub factorisation: Factorisation,
    pub sigma: usize,
    /// The common coefficient series of the coarse reading.
    pub phi: ClosedSeries,
    /// Finite part of the coarse reading, as a rank-one finite-support series.
    pub coarse_p: FracPoly,
    pub up_to_monomials: bool,
}

fn in_ring(s: &ClosedSeries, z: ZRing) -> bool {
    s.is_nonpositive() && z.contains(&mu(s))
}

fn coarse_certificate(f: &ClosedSeries, up_to_monomials: bool) -> Certificate {
    let sup = f.sup().and_then(|c| c.as_point());
    let shifted = match &sup {
        Some(x) if !x.is_zero() => f.shift(&x.neg()).unwrap_or_else(|_| f.clone()),
        _ => f.clone(),
    };
    let inner = certify_irreducible(&shifted);
    let criterion = match (inner.verdict, inner.criterion) {
        (Verdict::Certified, Criterion::ThmE) => Criterion::CoarseThmE,
        (Verdict::Certified, Criterion::DegPrincipal) => Criterion::CoarseDegPrincipal,
        (_, c) => c,
    };
    let mut c = Certificate::new(inner.verdict, criterion);
    c.witnesses = inner.witnesses;
    c.with("up_to_monomials", up_to_monomials)
}

fn regroup(b: &ClosedSeries, l: usize) -> Result<(ClosedSeries, ClosedSeries)> {
    let mut groups: Vec<(Block, Vec<Block>)> = Vec::new();
    for blk in &b.blocks {
        let (cb, fb) =
            split_block(blk, l).ok_or_else(|| HahnError::closure("coefficients do not separate into coarse and fine parts"))?;
        let Some(cb) = cb.normalize()? else { continue };
        let k = cb.tensor.terms.values().next().cloned().expect("nonzero");
        let cb = cb.scale(&(Q::one() / &k));
        let fb = fb.scale(&k);
        match groups.iter_mut().find(|(c, _)| *c == cb) {
            Some((_, v)) => v.push(fb),
            None => groups.push((cb, vec![fb])),
        }
    }
    let mut phi: Option<(ClosedSeries, Q)> = None;
    let mut coarse = Vec::new();
    for (cb, fbs) in groups {
        let fine = ClosedSeries::from_blocks(b.rank, fbs)?;
        if fine.is_zero() {
            continue;
        }
        let (x, c) = leading_term(&fine)?;
        let ratio = match &phi {
            None => {
                phi = Some((fine.clone(), c.clone()));
                Q::one()
            }
            Some((p, c0)) => {
                let r = &c / c0;
                if leading_term(p)?.0 != x || p.scale(&r) != fine {
                    return Err(HahnError::closure("fine coefficients are not proportional"));
                }
                r
            }
        };
        coarse.push(cb.scale(&ratio));
    }
    let (phi, _) = phi.ok_or_else(|| HahnError::pre("zero series"))?;
    Ok((phi, ClosedSeries::from_blocks(1, coarse)?))
}

fn supported_in(s: &ClosedSeries, h: &GroupSpec) -> bool {
    s.blocks.iter().all(|b| h.contains(&b.base) && b.factors.iter().all(|f| h.contains_axis(f.axis)))
}

/// Factorisation in `Z + K((G^{<0}))` through the coarse reading at the level of `v(b)`.
pub fn coarse_factor(b: &ClosedSeries, z: ZRing, g: &GroupSpec) -> Result<CoarseFactorisation> {
    if b.is_zero() {
        return Err(HahnError::pre("zero has no factorisation"));
    }
    let rank = b.rank;
    let g = g.with_rank(rank);
    let context = RingContext::Omnific { z, group: g.clone() };
    if !in_ring(b, z) {
        return Err(HahnError::domain("the series is not in Z + K((G<0))"));
    }
    let zero = LexExponent::zero(rank);
    if b.is_finite() && b.blocks.iter().all(|blk| blk.base == zero) {
        let f = Factorisation {
            p: b.clone(),
            unit: Q::one(),
            factors: Vec::new(),
            context,
            count_bound: Some(0),
            notes: Default::default(),
        };
        return Ok(CoarseFactorisation {
            factorisation: f,
            sigma: 0,
            phi: ClosedSeries::one(rank),
            coarse_p: FracPoly::one(1),
            up_to_monomials: false,
        });
    }
    let l = sigma_of(b)?;
    let h = h_sigma(&g, l);
    let (phi, bt) = regroup(b, l)?;
    let p_r = p_of_series(&bt)?;
    let p_h = p_g(&p_r, &h)?;
    let sup = bt.sup_in(&h).ok_or_else(|| HahnError::pre("zero series"))?;
    let sup_point = sup.as_point();
    let up_to_monomials = sup_point.is_none();
    let p_t = match &sup_point {
        Some(x) => p_h.shift(x),
        None => p_h.clone(),
    };
    let cof = div_by_poly(&bt, &p_t)?;
    let (unit, parts) = if cof.is_finite() {
        (cof.coefficient_at(&LexExponent::zero(1)), Vec::new())
    } else {
        match split_product(&cof) {
            Some((k, fs)) if fs.iter().all(|f| supported_in(f, &h)) => (k, fs),
            _ => (Q::one(), vec![cof]),
        }
    };
    let mut p = phi.mul_closed(&embed_coarse(&p_t.to_series(), l, rank)?)?.ok_or_else(|| HahnError::closure("finite part leaves the closed family"))?;
    p = p.scale(&unit);
    let mut cs: Vec<ClosedSeries> = parts.iter().map(|f| embed_coarse(f, l, rank)).collect::<Result<_>>()?;
    let certs: Vec<Certificate> = parts.iter().map(|f| coarse_certificate(f, up_to_monomials)).collect();
    if !(in_ring(&p, z) && cs.iter().all(|c| in_ring(c, z))) {
        let coarse_sup_zero = sup_point.as_ref().is_some_and(|x| x.is_zero());
        if !coarse_sup_zero {
            match &sup_point {
                Some(x) if !cs.is_empty() => {
                    let y = LexExponent::embed(&x.c[0].scale(&Q::new(1.into(), 2.into())), l, rank);
                    p = p.shift(&y.neg())?;
                    let step = y.scale(&Q::new(1.into(), (cs.len() as i64).into()));
                    for c in cs.iter_mut() {
                        *c = c.shift(&step)?;
                    }
                }
                _ => {
                    let s = mu(&p);
                    if !s.is_zero() && !cs.is_empty() {
                        p = p.scale(&(Q::one() / &s));
                        cs[0] = cs[0].scale(&s);
                    }
                }
            }
        } else {
            let mus: Vec<Q> = parts.iter().map(|f| f.coefficient_at(&LexExponent::zero(1))).collect();
            match mus.iter().position(|m| m.is_zero()) {
                Some(j) => {
                    let mut k = unit.clone();
                    for (i, m) in mus.iter().enumerate() {
                        if i != j {
                            k *= m;
                            cs[i] = cs[i].scale(&(Q::one() / m));
                        }
                    }
                    cs[j] = cs[j]
                        .mul_closed(&phi.scale(&k))?
                        .ok_or_else(|| HahnError::closure("unit redistribution leaves the closed family"))?;
                    p = embed_coarse(&p_t.to_series(), l, rank)?;
                }
                None => {
                    let mut k = Q::one();
                    for (i, m) in mus.iter().enumerate() {
                        k *= m;
                        cs[i] = cs[i].scale(&(Q::one() / m));
                    }
                    p = p.scale(&k);
                }
            }
        }
        if !(in_ring(&p, z) && cs.iter().all(|c| in_ring(c, z))) {
            return Err(HahnError::closure("unit redistribution did not reach Z + K((G<0))"));
        }
    }
    let mut notes = std::collections::BTreeMap::new();
    notes.insert("sigma".to_string(), (l + 1).to_string());
    notes.insert("phi".to_string(), phi.to_string());
    notes.insert("coarse_p".to_string(), p_t.to_string());
    notes.insert("up_to_monomials".to_string(), up_to_monomials.to_string());
    let factorisation = Factorisation {
        p,
        unit: Q::one(),
        factors: cs.into_iter().zip(certs).collect(),
        context,
        count_bound: bt.degree().fin().and_then(|d| d.coefficient_sum().try_into().ok()),
        notes,
    };
    Ok(CoarseFactorisation { factorisation, sigma: l, phi, coarse_p: p_t, up_to_monomials })
}

/// A rank-one ladder on `axis` with constant coefficient one.
pub fn unit_ladder(rank: usize, base: LexExponent, axis: Axis, seq: crate::series::seq::Seq) -> Result<ClosedSeries> {
    let n0 = seq.min_index().unwrap_or(0);
    ClosedSeries::from_blocks(rank, vec![Block::ladder(base, axis, seq, n0, Tensor::constant(1, Q::one()))])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::Check;
    use crate::rat::{q, qf};
    use crate::series::seq::Seq;

    fn lex(a: Q, b: Q) -> LexExponent {
        LexExponent::from_rats(&[a, b])
    }

    fn top_harm(a: Q) -> ClosedSeries {
        unit_ladder(2, LexExponent::zero(2), Axis { level: 0, gen: 1 }, Seq::harm(q(0), a)).unwrap()
    }

    #[test]
    fn st_example() {
        let b = ClosedSeries::from_terms(2, &[(lex(q(-1), q(0)), q(1)), (lex(q(0), q(0)), q(1))]);
        assert_eq!(st(&b, &lex(qf(-1, 2), q(-7))).unwrap(), StValue::Exact(Exponent::rat(qf(1, 2))));
        assert_eq!(st(&b, &lex(q(0), q(-7))).unwrap(), StValue::Exact(Exponent::zero()));
        assert!(st(&b, &lex(q(-2), q(0))).is_err());
    }

    #[test]
    fn mu_maps() {
        let f = FracPoly::from_terms(1, &[(LexExponent::from_rats(&[q(0)]), q(1)), (LexExponent::from_rats(&[q(-1)]), q(1))]);
        assert_eq!(mu(&f.to_series()), q(1));
        let lower = ClosedSeries::from_terms(2, &[(lex(q(0), q(-1)), q(2)), (lex(q(0), q(0)), q(1))]);
        assert_eq!(mu_sigma(&lower, 0).unwrap(), lower);
        let b = top_harm(q(1)).add(&lower).unwrap();
        assert_eq!(mu_sigma(&b, 0).unwrap(), lower);
        assert_eq!(big_m_sigma(&b, 0).unwrap(), b);
        assert_eq!(mu_sigma(&b, 1).unwrap(), ClosedSeries::one(2));
    }

    #[test]
    fn coarse_factor_recovers_finite_part() {
        let phi = ClosedSeries::from_terms(2, &[(lex(q(0), q(0)), q(2)), (lex(q(0), q(-1)), q(1))]);
        let b = phi.mul_closed(&top_harm(q(1))).unwrap().unwrap();
        let cf = coarse_factor(&b, ZRing::Integers, &GroupSpec::real(2)).unwrap();
        assert_eq!(cf.factorisation.p, phi);
        assert_eq!(cf.factorisation.factors.len(), 1);
        assert_eq!(cf.factorisation.factors[0].1.criterion, Criterion::CoarseThmE);
        assert_eq!(cf.factorisation.verify(&b).unwrap(), Check::Exact);
        assert!(!cf.up_to_monomials);
    }

    #[test]
    fn integer_input_is_its_own_finite_part() {
        let b = ClosedSeries::constant(2, q(6));
        let cf = coarse_factor(&b, ZRing::Integers, &GroupSpec::real(2)).unwrap();
        assert_eq!(cf.factorisation.p, b);
        assert!(cf.factorisation.factors.is_empty());
    }

    #[test]
    fn pell_ladder_is_irreducible_up_to_monomials() {
        let b = unit_ladder(1, LexExponent::zero(1), Axis { level: 0, gen: 1 }, Seq::Pell { off: q(0), m: q(1), d: 2 }).unwrap();
        let cf = coarse_factor(&b, ZRing::Integers, &GroupSpec::rationals(1)).unwrap();
        assert!(cf.up_to_monomials);
        assert_eq!(cf.factorisation.p, ClosedSeries::one(1));
        assert_eq!(cf.factorisation.factors.len(), 1);
        let c = &cf.factorisation.factors[0].1;
        assert_eq!((c.verdict, c.criterion), (Verdict::Certified, Criterion::CoarseThmE));
    }

    #[test]
    fn redistribution_moves_scalars() {
        let c = top_harm(q(1)).add(&ClosedSeries::constant(2, qf(1, 2))).unwrap();
        let b = c.scale(&q(2));
        let cf = coarse_factor(&b, ZRing::Integers, &GroupSpec::real(2)).unwrap();
        assert_eq!(cf.factorisation.verify(&b).unwrap(), Check::Exact);
        for (f, _) in &cf.factorisation.factors {
            assert!(ZRing::Integers.contains(&mu(f)));
        }
    }
}
