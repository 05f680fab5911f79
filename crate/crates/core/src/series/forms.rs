//! Weak normal form, normal form, principality and the order value relative to the
//! monomial ideal.

use num_traits::Zero;

use crate::error::{HahnError, Result};
use crate::exponents::{GroupSpec, LexExponent};
use crate::ordinal::Ordinal;
use crate::series::closed::ClosedSeries;
use crate::series::truncate::split;
use crate::supcomp::{Cut, Tail};

/// Raw cut separating the points below a normalised supremum from those at or above it.
pub fn split_cut(sup: &Cut) -> Cut {
    match sup.tail {
        Tail::Exact => Cut::below(sup.vals.clone()),
        _ => sup.clone(),
    }
}

/// Decomposition into weakly principal pieces with increasing supports and non-increasing
/// order types.
pub fn weak_normal_form(b: &ClosedSeries) -> Result<Vec<ClosedSeries>> {
    weak_normal_form_in(b, &GroupSpec::real(b.rank))
}

pub fn weak_normal_form_in(b: &ClosedSeries, g: &GroupSpec) -> Result<Vec<ClosedSeries>> {
    let stages = b.ot_stages_in(g);
    let mut out = Vec::new();
    let mut rest = b.clone();
    for (_, sups) in &stages.levels {
        for s in sups {
            let (lo, hi) = split(&rest, &split_cut(s))?;
            if !lo.is_zero() {
                out.push(lo);
            }
            rest = hi;
        }
    }
    let terms = rest
        .finite_terms()
        .ok_or_else(|| HahnError::closure("weak normal form left an infinite remainder"))?;
    for (x, c) in terms {
        out.push(ClosedSeries::monomial(x, c));
    }
    Ok(out)
}

/// A normal-form component: a principal series and the exponent it is shifted by, or a
/// weakly principal piece whose supremum lies outside the group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NfComponent {
    Shifted { principal: ClosedSeries, shift: LexExponent },
    NotInGroup { component: ClosedSeries, sup: Cut },
}

impl NfComponent {
    pub fn reconstruct(&self) -> Result<ClosedSeries> {
        match self {
            NfComponent::Shifted { principal, shift } => principal.shift(shift),
            NfComponent::NotInGroup { component, .. } => Ok(component.clone()),
        }
    }
}

pub fn normal_form(b: &ClosedSeries) -> Result<Vec<NfComponent>> {
    normal_form_in(b, &GroupSpec::real(b.rank))
}

pub fn normal_form_in(b: &ClosedSeries, g: &GroupSpec) -> Result<Vec<NfComponent>> {
    let mut out = Vec::new();
    for c in weak_normal_form_in(b, g)? {
        let sup = c.sup_in(g).expect("components are nonzero");
        match sup.as_point() {
            Some(x) if g.contains(&x) => {
                out.push(NfComponent::Shifted { principal: c.shift(&x.neg())?, shift: x });
            }
            _ => out.push(NfComponent::NotInGroup { component: c, sup }),
        }
    }
    Ok(out)
}

/// Sum of the components of a normal form.
pub fn reconstruct(rank: usize, nf: &[NfComponent]) -> Result<ClosedSeries> {
    let mut s = ClosedSeries::zero(rank);
    for c in nf {
        s = s.add(&c.reconstruct()?)?;
    }
    Ok(s)
}

pub fn is_weakly_principal(b: &ClosedSeries) -> bool {
    !b.is_zero() && b.order_type().is_principal()
}

pub fn is_principal(b: &ClosedSeries) -> bool {
    is_weakly_principal(b) && b.sup() == Some(Cut::zero(b.rank))
}

/// Membership in the ideal generated by the monomials `t^x` with `x < 0`.
pub fn in_monomial_ideal(b: &ClosedSeries) -> bool {
    b.sup().map_or(true, |s| s < Cut::zero(b.rank))
}

/// Smallest order type of a series congruent to `b` modulo the monomial ideal plus constants.
pub fn v_j(b: &ClosedSeries) -> Result<Ordinal> {
    if b.rank != 1 {
        return Err(HahnError::pre("the order value needs an Archimedean exponent group"));
    }
    if in_monomial_ideal(b) {
        return Ok(Ordinal::zero());
    }
    let mu = b.coefficient_at(&LexExponent::zero(1));
    let rest = if mu.is_zero() { b.clone() } else { b.sub(&ClosedSeries::constant(1, mu))? };
    if in_monomial_ideal(&rest) {
        return Ok(Ordinal::one());
    }
    let zero = Cut::zero(1);
    let g = GroupSpec::real(1);
    let d = rest
        .blocks
        .iter()
        .filter(|blk| blk.limit_cut().normalize(&g) == zero)
        .map(|blk| blk.dim())
        .max()
        .expect("a block reaches zero");
    Ok(Ordinal::omega_nat(d as u64, 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::{Axis, Exponent};
    use crate::rat::{q, Q};
    use crate::series::block::Block;
    use crate::series::seq::Seq;
    use crate::series::tensor::Tensor;

    fn harm(base: i64) -> ClosedSeries {
        let l = Block::ladder(
            LexExponent::from_rats(&[q(base)]),
            Axis { level: 0, gen: 1 },
            Seq::Harm { lim: q(0), a: q(1) },
            1,
            Tensor::constant(1, q(1)),
        );
        ClosedSeries::from_blocks(1, vec![l]).unwrap()
    }

    fn mono(x: Q) -> ClosedSeries {
        ClosedSeries::monomial(LexExponent::from_rats(&[x]), q(1))
    }

    #[test]
    fn shifted_ladder_plus_one() {
        let b = harm(-1).add(&ClosedSeries::one(1)).unwrap();
        let w = weak_normal_form(&b).unwrap();
        assert_eq!(w, vec![harm(-1), ClosedSeries::one(1)]);
        let nf = normal_form(&b).unwrap();
        assert_eq!(
            nf,
            vec![
                NfComponent::Shifted { principal: harm(0), shift: LexExponent::from_rats(&[q(-1)]) },
                NfComponent::Shifted { principal: ClosedSeries::one(1), shift: LexExponent::zero(1) },
            ]
        );
        assert_eq!(reconstruct(1, &nf).unwrap(), b);
        assert_eq!(normal_form(&harm(0)).unwrap().len(), 1);
    }

    #[test]
    fn principality() {
        assert!(is_principal(&harm(0)));
        assert!(!is_principal(&harm(0).add(&ClosedSeries::one(1)).unwrap()));
        assert!(is_weakly_principal(&mono(q(-1))));
        assert!(!is_principal(&mono(q(-1))));
    }

    #[test]
    fn order_values() {
        assert_eq!(v_j(&mono(q(-1))).unwrap(), Ordinal::zero());
        assert_eq!(v_j(&mono(q(-1)).add(&ClosedSeries::one(1)).unwrap()).unwrap(), Ordinal::one());
        assert_eq!(v_j(&harm(0)).unwrap(), Ordinal::omega());
        assert_eq!(v_j(&harm(0).add(&ClosedSeries::one(1)).unwrap()).unwrap(), Ordinal::omega());
    }

    #[test]
    fn supremum_outside_rationals() {
        // Rational exponents increasing to -sqrt(2).
        let l = Block::ladder(
            LexExponent::zero(1),
            Axis { level: 0, gen: 1 },
            Seq::Pell { off: q(0), m: q(1), d: 2 },
            1,
            Tensor::constant(1, q(1)),
        );
        let b = ClosedSeries::from_blocks(1, vec![l]).unwrap();
        let g = GroupSpec::rationals(1);
        assert_eq!(weak_normal_form_in(&b, &g).unwrap(), vec![b.clone()]);
        let nf = normal_form_in(&b, &g).unwrap();
        match &nf[0] {
            NfComponent::NotInGroup { sup, .. } => {
                assert_eq!(*sup, Cut::below(vec![Exponent::term(2, q(-1))]).normalize(&g));
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
