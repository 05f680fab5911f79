//! Seeded random generators of exponents, closed series, finite-support series and
//! structured sets.

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::exponents::{Axis, Exponent, LexExponent};
use crate::grpalg::FracPoly;
use crate::rat::{q, qf, Q};
use crate::series::block::{Block, Factor};
use crate::series::closed::ClosedSeries;
use crate::series::seq::Seq;
use crate::series::tensor::{Key, Tensor};
use crate::supcomp::{SetPart, StructuredSet};

/// A rational `k/d` with `|k| <= num` and `d` in `1..=den`.
pub fn small_q<R: Rng>(rng: &mut R, num: i64, den: i64) -> Q {
    qf(rng.gen_range(-num..=num), rng.gen_range(1..=den))
}

pub fn nonzero_q<R: Rng>(rng: &mut R, num: i64, den: i64) -> Q {
    loop {
        let x = small_q(rng, num, den);
        if !x.is_zero() {
            return x;
        }
    }
}

/// A nonpositive scalar exponent using the generators in `gens`.
pub fn nonpositive_exponent<R: Rng>(rng: &mut R, gens: &[u64]) -> Exponent {
    let mut e = Exponent::zero();
    for &g in gens {
        if rng.gen_bool(if g == 1 { 0.8 } else { 0.3 }) {
            e = e.add(&Exponent::term(g, -qf(rng.gen_range(0..=4), rng.gen_range(1..=3))));
        }
    }
    e
}

/// An increasing sequence anchored at zero; unbounded ones only when `unbounded` is set.
pub fn random_seq<R: Rng>(rng: &mut R, unbounded: bool) -> Seq {
    let k = rng.gen_range(0..if unbounded { 4 } else { 3 });
    match k {
        0 => Seq::harm(q(0), [q(1), qf(1, 2), q(2), q(3)].choose(rng).unwrap().clone()),
        1 => {
            let r = [qf(1, 2), qf(1, 3), qf(2, 3)].choose(rng).unwrap().clone();
            Seq::Geo { lim: q(0), a: q(1), r }
        }
        2 => Seq::Pell { off: q(0), m: [q(1), qf(1, 2)].choose(rng).unwrap().clone(), d: *[2u64, 3, 5].choose(rng).unwrap() },
        _ => Seq::Arith { off: q(0), a: [q(1), qf(1, 2), q(2)].choose(rng).unwrap().clone() },
    }
}

/// A one-axis coefficient stream: mostly constant, sometimes periodic or geometric.
pub fn random_stream<R: Rng>(rng: &mut R) -> Tensor {
    match rng.gen_range(0..4) {
        0 | 1 => Tensor::constant(1, nonzero_q(rng, 3, 2)),
        2 => Tensor::stream(
            2,
            vec![(Key { r: 0, w: q(1), j: 0 }, nonzero_q(rng, 3, 1)), (Key { r: 1, w: q(1), j: 0 }, nonzero_q(rng, 3, 1))],
        ),
        _ => Tensor::stream(1, vec![(Key { r: 0, w: [q(-1), qf(1, 2), q(2)].choose(rng).unwrap().clone(), j: rng.gen_range(0..2) }, nonzero_q(rng, 2, 1))]),
    }
}

fn start_for<R: Rng>(rng: &mut R, s: &Seq) -> i64 {
    s.min_index().unwrap_or(0) + rng.gen_range(0..3)
}

/// A ladder on `axis` whose support stays nonpositive. Lower levels may use unbounded
/// steps because the top coordinate of the base is negative.
pub fn random_ladder<R: Rng>(rng: &mut R, rank: usize, axis: Axis, gens: &[u64]) -> ClosedSeries {
    let mut base = LexExponent::zero(rank);
    for l in 0..rank {
        base.c[l] = nonpositive_exponent(rng, gens);
    }
    if axis.level > 0 && !base.c[0].is_negative() {
        base.c[0] = base.c[0].sub(&Exponent::rat(q(1)));
    }
    base.set_coord(axis, Q::zero());
    let seq = random_seq(rng, axis.level > 0);
    let n0 = start_for(rng, &seq);
    let blk = Block::ladder(base, axis, seq, n0, random_stream(rng));
    ClosedSeries::from_blocks(rank, vec![blk]).expect("valid ladder")
}

/// A two-dimensional grid on two distinct axes.
pub fn random_grid<R: Rng>(rng: &mut R, rank: usize, a: Axis, b: Axis, gens: &[u64]) -> ClosedSeries {
    let x = random_ladder(rng, rank, a, gens);
    let y = random_ladder(rng, rank, b, gens);
    x.mul_closed(&y).ok().flatten().expect("distinct axes multiply in closed form")
}

/// A finite-support series with at most `terms` terms on the given generators, nonzero
/// unless `terms` is zero.
pub fn random_poly<R: Rng>(rng: &mut R, rank: usize, gens: &[u64], terms: usize) -> FracPoly {
    if terms == 0 {
        return FracPoly::zero(rank);
    }
    loop {
        let mut p = FracPoly::zero(rank);
        for _ in 0..terms {
            let mut x = LexExponent::zero(rank);
            for l in 0..rank {
                x.c[l] = nonpositive_exponent(rng, gens);
            }
            p.add_term(x, nonzero_q(rng, 4, 2));
        }
        if !p.is_zero() {
            return p;
        }
    }
}

/// Axes available to a series in the given rank, levels first.
pub fn axes(rank: usize, gens: &[u64]) -> Vec<Axis> {
    let mut v = Vec::new();
    for level in 0..rank {
        for &gen in gens {
            v.push(Axis { level, gen });
        }
    }
    v
}

/// A closed series of degree at most `max_dim` whose infinite blocks use only `allowed`.
pub fn random_series<R: Rng>(rng: &mut R, rank: usize, gens: &[u64], allowed: &[Axis], max_dim: usize) -> ClosedSeries {
    loop {
        let n = rng.gen_range(0..3);
        let mut s = random_poly(rng, rank, gens, n).to_series();
        let blocks = rng.gen_range(0..3);
        for _ in 0..blocks {
            let a = *allowed.choose(rng).unwrap();
            let part = if max_dim >= 2 && allowed.len() >= 2 && rng.gen_bool(0.3) {
                let b = loop {
                    let b = *allowed.choose(rng).unwrap();
                    if b != a {
                        break b;
                    }
                };
                random_grid(rng, rank, a, b, gens)
            } else if max_dim >= 1 {
                random_ladder(rng, rank, a, gens)
            } else {
                continue;
            };
            if let Ok(t) = s.add(&part) {
                s = t;
            }
        }
        if !s.is_zero() && s.is_nonpositive() {
            return s;
        }
    }
}

/// A structured set of rank `rank` made of finite parts and one-dimensional grids.
pub fn random_structured_set<R: Rng>(rng: &mut R, rank: usize) -> StructuredSet {
    let gens = [1u64, 2];
    let mut parts = Vec::new();
    for _ in 0..rng.gen_range(1..4) {
        if rng.gen_bool(0.4) {
            let xs = (0..rng.gen_range(1..3))
                .map(|_| {
                    let mut x = LexExponent::zero(rank);
                    for l in 0..rank {
                        x.c[l] = nonpositive_exponent(rng, &gens);
                    }
                    x
                })
                .collect();
            parts.push(SetPart::Finite(xs));
        } else {
            let level = rng.gen_range(0..rank);
            let axis = Axis { level, gen: *gens.choose(rng).unwrap() };
            let s = random_ladder(rng, rank, axis, &gens);
            let blk = &s.blocks[0];
            let factors: Vec<Factor> = blk.factors.clone();
            parts.push(SetPart::Grid { base: blk.base.clone(), factors });
        }
    }
    StructuredSet { rank, parts }
}

/// A ladder with supremum zero and constant coefficients, on `axis`.
pub fn sup_zero_ladder<R: Rng>(rng: &mut R, rank: usize, axis: Axis) -> ClosedSeries {
    let seq = random_seq(rng, false);
    let n0 = seq.min_index().unwrap_or(0);
    let mut base = LexExponent::zero(rank);
    if let Seq::Pell { m, d, .. } = &seq {
        base.c[axis.level] = Exponent::term(*d, m.clone());
    }
    let blk = Block::ladder(base, axis, seq, n0, Tensor::constant(1, q(1)));
    ClosedSeries::from_blocks(rank, vec![blk]).expect("valid ladder")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_series_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for rank in 1..=2 {
            let ax = axes(rank, &[1, 2]);
            for _ in 0..50 {
                let s = random_series(&mut rng, rank, &[1, 2], &ax, 2);
                s.validate().unwrap();
                assert!(s.is_nonpositive());
            }
        }
        for _ in 0..50 {
            let s = sup_zero_ladder(&mut rng, 1, Axis { level: 0, gen: 1 });
            assert_eq!(s.sup().unwrap(), crate::supcomp::Cut::zero(1), "{s}");
        }
    }
}
