//! Cut completion of exponent groups: cofinal comparison of structured sets, suprema of
//! series, coarse equality and membership in the monomial ideal.

pub mod cut;

pub use cut::{element_between, Cut, Tail};

use std::cmp::Ordering;

use crate::exponents::{Axis, Exponent, GroupSpec, LexExponent};
use crate::ordinal::OrdinalExt;
use crate::rat::q;
use crate::series::block::{Block, Factor};
use crate::series::seq::Seq;
use crate::series::tensor::Tensor;
use crate::series::closed::ClosedSeries;

/// One piece of a structured set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetPart {
    Finite(Vec<LexExponent>),
    /// The points `base + Σ s_i(n_i)·e_{axis_i}` with `n_i >= n0_i`.
    Grid { base: LexExponent, factors: Vec<Factor> },
}

/// A nonempty finite union of finite sets and grids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructuredSet {
    pub rank: usize,
    pub parts: Vec<SetPart>,
}

impl SetPart {
    fn raw_sup(&self, rank: usize) -> Option<Cut> {
        match self {
            SetPart::Finite(xs) => xs.iter().max().map(|x| Cut::point(&x.promote(rank))),
            SetPart::Grid { base, factors } => {
                let mut c = Cut::point(&base.promote(rank));
                for f in factors {
                    c = c.add(&f.seq.limit_cut(f.axis, rank));
                }
                Some(c)
            }
        }
    }
}

impl StructuredSet {
    pub fn finite(rank: usize, xs: Vec<LexExponent>) -> Self {
        StructuredSet { rank, parts: vec![SetPart::Finite(xs)] }
    }

    /// The support of a closed series.
    pub fn support_of(b: &ClosedSeries) -> Self {
        let parts = b
            .blocks
            .iter()
            .map(|blk| {
                if blk.dim() == 0 {
                    SetPart::Finite(vec![blk.base.clone()])
                } else {
                    SetPart::Grid { base: blk.base.clone(), factors: blk.factors.clone() }
                }
            })
            .collect();
        StructuredSet { rank: b.rank, parts }
    }

    pub fn is_empty(&self) -> bool {
        self.parts.iter().all(|p| matches!(p, SetPart::Finite(xs) if xs.is_empty()))
    }

    fn raw_sup(&self) -> Option<Cut> {
        self.parts.iter().filter_map(|p| p.raw_sup(self.rank)).max()
    }

    /// Supremum in the completion of `g`.
    pub fn sup(&self, g: &GroupSpec) -> Option<Cut> {
        self.raw_sup().map(|c| c.normalize(g))
    }

    /// Whether some element exceeds `u`.
    pub fn exceeds(&self, u: &LexExponent) -> bool {
        self.raw_sup().is_some_and(|c| Cut::point(&u.promote(self.rank)) < c)
    }

    pub fn union(&self, o: &StructuredSet) -> StructuredSet {
        let mut parts = self.parts.clone();
        parts.extend(o.parts.iter().cloned());
        StructuredSet { rank: self.rank.max(o.rank), parts }
    }
}

/// Cofinal comparison: every element of `a` is approached from below by elements of `b`.
pub fn leq_cof(a: &StructuredSet, b: &StructuredSet, g: &GroupSpec) -> bool {
    match (a.sup(g), b.sup(g)) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(x), Some(y)) => x <= y,
    }
}

pub fn cut_add(x: &Cut, y: &Cut, g: &GroupSpec) -> Cut {
    x.add(y).normalize(g)
}

pub fn cut_compare(x: &Cut, y: &Cut, g: &GroupSpec) -> Ordering {
    x.normalize(g).cmp(&y.normalize(g))
}

/// Coarse equality: any two group elements between the cuts agree up to a dominated
/// difference.
pub fn coarsely_equal(xi: &Cut, zeta: &Cut, g: &GroupSpec) -> bool {
    let (a, b) = (xi.normalize(g), zeta.normalize(g));
    let (lo, hi) = match a.cmp(&b) {
        Ordering::Equal => return true,
        Ordering::Less => (a, b),
        Ordering::Greater => (b, a),
    };
    let Some(x0) = element_between(&lo, &hi, g) else { return false };
    let Some(level) = x0.c.iter().position(|e| !e.is_zero()) else { return false };
    let prefix: Vec<Exponent> = x0.c[..=level].to_vec();
    Cut::below(prefix.clone()).normalize(g) <= lo && hi <= Cut::above(prefix).normalize(g)
}

/// Supremum of the support of a nonzero series.
pub fn sup_of_series(b: &ClosedSeries, g: &GroupSpec) -> Option<Cut> {
    b.sup_in(g)
}

/// Whether `b` is divisible by some `t^x` with `x < 0`.
pub fn j_membership(b: &ClosedSeries, g: &GroupSpec) -> bool {
    b.sup_in(g).map_or(true, |s| s < Cut::zero(b.rank).normalize(g))
}

/// Data of the non-Archimedean example `b·c = t^y`, where the supremum drops strictly and
/// the degree of the product is below the natural sum of the degrees.
#[derive(Clone, Debug, PartialEq)]
pub struct LexCounterexample {
    pub b: ClosedSeries,
    pub c: ClosedSeries,
    pub bc: ClosedSeries,
    pub sup_b: Cut,
    pub sup_c: Cut,
    pub sup_bc: Cut,
    pub deg_b: OrdinalExt,
    pub deg_c: OrdinalExt,
    pub deg_bc: OrdinalExt,
}

impl LexCounterexample {
    /// Whether `sup(bc) < sup(b) + sup(c)` and `deg(bc) ≠ deg(b) ⊕ deg(c)`.
    pub fn holds(&self, g: &GroupSpec) -> bool {
        cut_compare(&self.sup_bc, &cut_add(&self.sup_b, &self.sup_c, g), g) == Ordering::Less
            && self.deg_bc != self.deg_b.nat_sum(&self.deg_c)
    }
}

/// `b = -Σ_{n>=1} t^{(-1, n)}` and `c = 1 - t^{(0, -1)}` over a rank-two group, with
/// `b·c = t^{(-1, 0)}`.
pub fn lex_counterexample() -> crate::error::Result<LexCounterexample> {
    let axis = Axis { level: 1, gen: 1 };
    let base = LexExponent::from_rats(&[q(-1), q(0)]);
    let ladder = Block::ladder(base, axis, Seq::Arith { off: q(0), a: q(1) }, 1, Tensor::constant(1, q(-1)));
    let b = ClosedSeries::from_blocks(2, vec![ladder])?;
    let c = ClosedSeries::from_terms(
        2,
        &[(LexExponent::zero(2), q(1)), (LexExponent::from_rats(&[q(0), q(-1)]), q(-1))],
    );
    let bc = b
        .mul_closed(&c)?
        .ok_or_else(|| crate::error::HahnError::closure("product leaves the closed family"))?;
    let g = GroupSpec::real(2);
    let sup = |s: &ClosedSeries| s.sup_in(&g).ok_or_else(|| crate::error::HahnError::pre("zero series"));
    Ok(LexCounterexample {
        sup_b: sup(&b)?,
        sup_c: sup(&c)?,
        sup_bc: sup(&bc)?,
        deg_b: b.degree(),
        deg_c: c.degree(),
        deg_bc: bc.degree(),
        b,
        c,
        bc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::Axis;
    use crate::rat::{q, qf};
    use crate::series::block::Block;
    use crate::series::seq::Seq;
    use crate::series::tensor::Tensor;

    fn pt(v: &[crate::rat::Q]) -> LexExponent {
        LexExponent::from_rats(v)
    }

    fn harmonic_set() -> StructuredSet {
        StructuredSet {
            rank: 1,
            parts: vec![SetPart::Grid {
                base: LexExponent::zero(1),
                factors: vec![Factor { axis: Axis { level: 0, gen: 1 }, seq: Seq::Harm { lim: q(0), a: q(1) }, n0: 1 }],
            }],
        }
    }

    #[test]
    fn cofinal_comparisons() {
        let g = GroupSpec::real(1);
        let a = StructuredSet::finite(1, vec![pt(&[q(-1)])]);
        let b = StructuredSet::finite(1, vec![pt(&[qf(-1, 2)])]);
        assert!(leq_cof(&a, &b, &g) && !leq_cof(&b, &a, &g));
        assert!(leq_cof(&a, &a, &g));
        let zero = StructuredSet::finite(1, vec![LexExponent::zero(1)]);
        let h = harmonic_set();
        assert!(leq_cof(&h, &zero, &g) && leq_cof(&zero, &h, &g));
    }

    #[test]
    fn cut_arithmetic() {
        let g = GroupSpec::real(1);
        let x = Cut::point(&pt(&[q(-1)]));
        let y = Cut::point(&pt(&[qf(-1, 3)]));
        assert_eq!(cut_add(&x, &y, &g), Cut::point(&pt(&[qf(-4, 3)])));
        let s = harmonic_set().sup(&g).unwrap();
        assert_eq!(cut_compare(&s, &Cut::zero(1), &g), Ordering::Equal);
        let shifted = StructuredSet {
            rank: 1,
            parts: vec![SetPart::Grid {
                base: pt(&[q(-1)]),
                factors: vec![Factor { axis: Axis { level: 0, gen: 1 }, seq: Seq::Harm { lim: q(0), a: q(1) }, n0: 1 }],
            }],
        };
        assert_eq!(cut_add(&s, &x, &g), shifted.sup(&g).unwrap());
    }

    #[test]
    fn coarse_equality() {
        let g = GroupSpec::real(2);
        let p = |a: i64, b: i64| Cut::point(&pt(&[q(a), q(b)]));
        assert!(coarsely_equal(&p(-1, 0), &p(-1, -5), &g));
        assert!(!coarsely_equal(&p(-1, 0), &p(-2, 0), &g));
        assert!(!coarsely_equal(&p(0, -1), &p(0, 0), &g));
        assert!(coarsely_equal(&p(0, 0), &p(0, 0), &g));
    }

    #[test]
    fn ideal_membership() {
        let g = GroupSpec::real(1);
        let l = Block::ladder(LexExponent::zero(1), Axis { level: 0, gen: 1 }, Seq::Harm { lim: q(0), a: q(1) }, 1, Tensor::constant(1, q(1)));
        let b = ClosedSeries::from_blocks(1, vec![l]).unwrap();
        assert_eq!(sup_of_series(&b, &g), Some(Cut::zero(1)));
        assert!(!j_membership(&b, &g));
        let f = ClosedSeries::from_terms(1, &[(pt(&[q(-1)]), q(1)), (pt(&[q(-2)]), q(1))]);
        assert_eq!(sup_of_series(&f, &g), Some(Cut::point(&pt(&[q(-1)]))));
        assert!(j_membership(&f, &g));
        let g2 = GroupSpec::real(2);
        let lex = Block::ladder(pt(&[q(-1), q(0)]), Axis { level: 1, gen: 1 }, Seq::Arith { off: q(0), a: q(1) }, 0, Tensor::constant(1, q(1)));
        let lb = ClosedSeries::from_blocks(2, vec![lex]).unwrap();
        assert!(j_membership(&lb, &g2));
    }

    #[test]
    fn lex_example_drops_sup() {
        let e = lex_counterexample().unwrap();
        assert_eq!(e.bc, ClosedSeries::monomial(LexExponent::from_rats(&[q(-1), q(0)]), q(1)));
        assert_eq!(e.deg_bc, OrdinalExt::zero());
        assert_eq!(e.deg_b, OrdinalExt::nat(1));
        assert!(e.holds(&GroupSpec::real(2)));
    }
}
