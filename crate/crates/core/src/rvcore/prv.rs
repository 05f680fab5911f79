//! Decomposition of a degree class into principal components with finite-support
//! coordinates.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{HahnError, Result};
use crate::exponents::{Axis, LexExponent};
use crate::grpalg::FracPoly;
use crate::rat::Q;
use crate::series::block::Block;
use crate::series::closed::ClosedSeries;
use crate::series::seq::{unify, Reindex, Seq};
use crate::series::tensor::Key;
use crate::supcomp::Tail;

/// `B = Σ coords_i · basis_i` modulo series of lower degree.
#[derive(Clone, Debug, PartialEq)]
pub struct PrvDecomposition {
    pub degree: usize,
    pub basis: Vec<ClosedSeries>,
    pub coords: Vec<FracPoly>,
}

impl PrvDecomposition {
    /// `Σ coords_i · basis_i`, a representative of the decomposed class.
    pub fn recombine(&self, rank: usize) -> Result<ClosedSeries> {
        let mut s = ClosedSeries::zero(rank);
        for (p, e) in self.coords.iter().zip(&self.basis) {
            s = s.add(&p.mul_series(e)?)?;
        }
        Ok(s)
    }
}

struct Class {
    base: LexExponent,
    axes: Vec<Axis>,
    seqs: Vec<Seq>,
    members: Vec<(usize, Vec<Reindex>)>,
}

fn compose(outer: Reindex, inner: Reindex) -> Reindex {
    Reindex { alpha: outer.alpha * inner.alpha, beta: outer.alpha * inner.beta + outer.beta }
}

/// Shift putting the supremum of a block at zero.
fn tail_shift(b: &Block) -> Result<LexExponent> {
    let c = b.limit_cut();
    if c.tail == Tail::Above || c.vals.len() != b.rank() {
        return Err(HahnError::closure("block supremum is not a group element"));
    }
    Ok(LexExponent { c: c.vals })
}

type Coord = BTreeMap<(usize, Vec<Key>), Q>;

/// Coordinates of principal tails on a common grid; tails agree modulo lower degree exactly
/// when their coordinates agree.
fn tail_coordinates(tails: &[Block]) -> Vec<Coord> {
    let mut classes: Vec<Class> = Vec::new();
    'outer: for (i, t) in tails.iter().enumerate() {
        for cl in classes.iter_mut() {
            if cl.base != t.base || cl.axes != t.axes() {
                continue;
            }
            let mut unified = Vec::new();
            for (s, f) in cl.seqs.iter().zip(&t.factors) {
                match unify(s, &f.seq) {
                    Some(u) => unified.push(u),
                    None => break,
                }
            }
            if unified.len() != cl.seqs.len() {
                continue;
            }
            for (_, maps) in cl.members.iter_mut() {
                for (m, (_, ru, _)) in maps.iter_mut().zip(&unified) {
                    *m = compose(*ru, *m);
                }
            }
            cl.seqs = unified.iter().map(|(u, _, _)| u.clone()).collect();
            cl.members.push((i, unified.iter().map(|(_, _, rt)| *rt).collect()));
            continue 'outer;
        }
        classes.push(Class {
            base: t.base.clone(),
            axes: t.axes(),
            seqs: t.factors.iter().map(|f| f.seq.clone()).collect(),
            members: vec![(i, vec![Reindex::ID; t.dim()])],
        });
    }
    let mut out = vec![Coord::new(); tails.len()];
    for (ci, cl) in classes.iter().enumerate() {
        let mut tensors: Vec<_> = cl
            .members
            .iter()
            .map(|(i, maps)| {
                let mut t = tails[*i].tensor.clone();
                for (ax, m) in maps.iter().enumerate() {
                    t = t.reindex(ax, m.alpha, m.beta);
                }
                (*i, t)
            })
            .collect();
        for ax in 0..cl.axes.len() {
            let l = tensors.iter().fold(1u32, |acc, (_, t)| num_integer::lcm(acc, t.periods[ax]));
            for (_, t) in tensors.iter_mut() {
                *t = t.lift_to(ax, l);
            }
        }
        for (i, t) in tensors {
            for (k, c) in t.terms {
                out[i].insert((ci, k), c);
            }
        }
    }
    out
}

/// Principal components of the top-degree part of `b` and finite-support coordinates.
///
/// Basis elements are the first-seen independent tails, each scaled so that its first
/// nonzero grid coordinate is one.
pub fn prv_coordinates(b: &ClosedSeries) -> Result<PrvDecomposition> {
    if b.is_zero() {
        return Err(HahnError::pre("the zero class has no decomposition"));
    }
    let d = b.max_dim().unwrap_or(0);
    if d == 0 {
        let p = FracPoly::from_series(b).expect("finite");
        return Ok(PrvDecomposition { degree: 0, basis: vec![ClosedSeries::one(b.rank)], coords: vec![p] });
    }
    let top = b.top_blocks();
    let mut shifts = Vec::new();
    let mut tails = Vec::new();
    for blk in &top {
        let x = tail_shift(blk)?;
        let t = blk.shift(&x.neg()).normalize()?.ok_or_else(|| HahnError::closure("vanishing block"))?;
        shifts.push(x);
        tails.push(t);
    }
    let vecs = tail_coordinates(&tails);
    // Echelon rows with pivot, row vector and its expression in the chosen basis.
    let mut rows: Vec<((usize, Vec<Key>), Coord, Vec<Q>)> = Vec::new();
    let mut basis_idx: Vec<(usize, Q)> = Vec::new();
    let mut lambdas: Vec<Vec<Q>> = Vec::new();
    for v in &vecs {
        let mut r = v.clone();
        let mut expr = vec![Q::zero(); basis_idx.len()];
        for (piv, row, rexpr) in &rows {
            let c = r.get(piv).cloned().unwrap_or_else(Q::zero);
            if c.is_zero() {
                continue;
            }
            for (k, x) in row {
                let e = r.entry(k.clone()).or_insert_with(Q::zero);
                *e -= &c * x;
                if e.is_zero() {
                    r.remove(k);
                }
            }
            for (j, x) in rexpr.iter().enumerate() {
                expr[j] += &c * x;
            }
        }
        if r.is_empty() {
            lambdas.push(expr);
            continue;
        }
        let lead = v.values().next().cloned().expect("nonzero tail");
        let j = basis_idx.len();
        basis_idx.push((lambdas.len(), lead.clone()));
        for e in &mut lambdas {
            e.push(Q::zero());
        }
        for (_, _, e) in &mut rows {
            e.push(Q::zero());
        }
        // r = lead·E_j - Σ expr·E, scaled to a unit pivot.
        let (piv, pv) = r.iter().next().map(|(k, c)| (k.clone(), c.clone())).expect("nonzero");
        let mut rexpr: Vec<Q> = expr.iter().map(|x| -x).collect();
        rexpr.push(lead.clone());
        let inv = Q::one() / &pv;
        let row: Coord = r.into_iter().map(|(k, c)| (k, c * &inv)).collect();
        let rexpr: Vec<Q> = rexpr.into_iter().map(|x| x * &inv).collect();
        let mut e = vec![Q::zero(); j + 1];
        e[j] = lead;
        lambdas.push(e);
        rows.push((piv, row, rexpr));
    }
    let basis: Vec<ClosedSeries> = basis_idx
        .iter()
        .map(|(i, lead)| ClosedSeries::from_blocks(b.rank, vec![tails[*i].scale(&(Q::one() / lead))]))
        .collect::<Result<_>>()?;
    let mut coords = vec![FracPoly::zero(b.rank); basis.len()];
    for (lam, x) in lambdas.iter().zip(&shifts) {
        for (j, c) in lam.iter().enumerate() {
            coords[j].add_term(x.clone(), c.clone());
        }
    }
    Ok(PrvDecomposition { degree: d, basis, coords })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{q, qf};
    use crate::series::tensor::Tensor;

    fn ladder(lim: Q, a: Q, w: Q) -> ClosedSeries {
        let t = Tensor::stream(1, vec![(Key { r: 0, w, j: 0 }, q(1))]);
        let b = Block::ladder(LexExponent::zero(1), Axis { level: 0, gen: 1 }, Seq::harm(lim, a), 1, t);
        ClosedSeries::from_blocks(1, vec![b]).unwrap()
    }

    fn x(v: Q) -> LexExponent {
        LexExponent::from_rats(&[v])
    }

    #[test]
    fn single_ladder() {
        let b = ladder(q(0), q(1), q(1));
        let d = prv_coordinates(&b).unwrap();
        assert_eq!(d.basis.len(), 1);
        assert_eq!(d.coords, vec![FracPoly::one(1)]);
        assert!(d.recombine(1).unwrap().sub(&b).unwrap().max_dim().unwrap_or(0) < 1);
    }

    #[test]
    fn shifted_copies_collect() {
        let b = ladder(q(0), q(1), q(1));
        let p = FracPoly::from_terms(1, &[(x(q(0)), q(1)), (x(q(-1)), q(1))]);
        let d = prv_coordinates(&p.mul_series(&b).unwrap()).unwrap();
        assert_eq!(d.basis.len(), 1);
        assert_eq!(d.coords, vec![p]);
    }

    #[test]
    fn independent_streams() {
        let b = ladder(q(0), q(1), q(1)).add(&ladder(q(0), q(1), qf(1, 2)).shift(&x(q(-1))).unwrap()).unwrap();
        let d = prv_coordinates(&b).unwrap();
        assert_eq!(d.basis.len(), 2);
        let diff = d.recombine(1).unwrap().sub(&b).unwrap();
        assert!(diff.max_dim().unwrap_or(0) < 1);
    }

    #[test]
    fn merged_harmonic_grids_are_dependent() {
        let b1 = ladder(q(0), q(1), q(1));
        let b2 = ladder(q(0), qf(1, 2), q(1));
        let s = b1.add(&b2.shift(&x(q(-2))).unwrap()).unwrap();
        let d = prv_coordinates(&s).unwrap();
        assert_eq!(d.basis.len(), 2);
        let s2 = b1.scale(&q(3)).add(&b1.shift(&x(q(-2))).unwrap()).unwrap();
        let d2 = prv_coordinates(&s2).unwrap();
        assert_eq!(d2.basis.len(), 1);
        assert_eq!(d2.coords[0], FracPoly::from_terms(1, &[(x(q(0)), q(3)), (x(q(-2)), q(1))]));
    }
}
