//! Blocks: grids of points `base + Σ s_i(n_i)·e_{axis_i}` carrying a coefficient tensor.

use num_integer::Integer;
use num_traits::Zero;

use crate::error::{HahnError, Result};
use crate::exponents::{Axis, LexExponent};
use crate::rat::Q;
use crate::series::seq::{coarsen, unify, Reindex, Seq};
use crate::series::tensor::{Key, Tensor};
use crate::supcomp::Cut;

/// Largest number of grid lines materialised when a block is cut or realigned.
pub const STRIP_LIMIT: i64 = 200_000;

#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Factor {
    pub axis: Axis,
    pub seq: Seq,
    pub n0: i64,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Block {
    pub base: LexExponent,
    pub factors: Vec<Factor>,
    pub tensor: Tensor,
}

impl Block {
    pub fn monomial(x: LexExponent, c: Q) -> Block {
        Block { base: x, factors: Vec::new(), tensor: Tensor::scalar(c) }
    }

    /// One-dimensional block `Σ_{n>=n0} coef(n)·t^{base + s(n)·e_axis}`.
    pub fn ladder(base: LexExponent, axis: Axis, seq: Seq, n0: i64, coef: Tensor) -> Block {
        Block { base, factors: vec![Factor { axis, seq, n0 }], tensor: coef }
    }

    pub fn dim(&self) -> usize {
        self.factors.len()
    }

    pub fn rank(&self) -> usize {
        self.base.rank()
    }

    pub fn axes(&self) -> Vec<Axis> {
        self.factors.iter().map(|f| f.axis).collect()
    }

    pub fn start(&self) -> Vec<i64> {
        self.factors.iter().map(|f| f.n0).collect()
    }

    pub fn point(&self, idx: &[i64]) -> LexExponent {
        let mut p = self.base.clone();
        for (f, &n) in self.factors.iter().zip(idx) {
            let v = p.coord(f.axis) + f.seq.value(n);
            p.set_coord(f.axis, v);
        }
        p
    }

    pub fn coef(&self, idx: &[i64]) -> Q {
        self.tensor.eval(idx)
    }

    /// Scalar coefficient of a monomial block.
    pub fn mono_coef(&self) -> Q {
        self.tensor.eval(&[])
    }

    /// Supremum of the support as an unnormalised cut.
    pub fn limit_cut(&self) -> Cut {
        let rank = self.rank();
        let mut c = Cut::point(&self.base);
        for f in &self.factors {
            c = c.add(&f.seq.limit_cut(f.axis, rank));
        }
        c
    }

    /// Cut approached along `axis_index` with the other indices fixed at `idx`.
    pub fn partial_limit(&self, idx: &[i64], axis_index: usize) -> Cut {
        let mut p = self.base.clone();
        for (i, (f, &n)) in self.factors.iter().zip(idx).enumerate() {
            if i != axis_index {
                let v = p.coord(f.axis) + f.seq.value(n);
                p.set_coord(f.axis, v);
            }
        }
        let f = &self.factors[axis_index];
        Cut::point(&p).add(&f.seq.limit_cut(f.axis, self.rank()))
    }

    /// First accumulation point of the grid: below it the points are enumerated exactly
    /// by increasing index.
    pub fn first_limit(&self) -> Option<Cut> {
        let start = self.start();
        (0..self.dim()).map(|i| self.partial_limit(&start, i)).min()
    }

    /// Block with index `n` fixed on factor `i`.
    pub fn slice(&self, i: usize, n: i64) -> Block {
        let f = &self.factors[i];
        let mut base = self.base.clone();
        let v = base.coord(f.axis) + f.seq.value(n);
        base.set_coord(f.axis, v);
        let mut factors = self.factors.clone();
        factors.remove(i);
        Block { base, factors, tensor: self.tensor.slice(i, n) }
    }

    pub fn scale(&self, k: &Q) -> Block {
        Block { base: self.base.clone(), factors: self.factors.clone(), tensor: self.tensor.scale(k) }
    }

    pub fn shift(&self, x: &LexExponent) -> Block {
        Block { base: self.base.add(x), factors: self.factors.clone(), tensor: self.tensor.clone() }
    }

    /// Normal form of a single block, or `None` when its coefficients vanish.
    pub fn normalize(mut self) -> Result<Option<Block>> {
        if self.tensor.is_zero() {
            return Ok(None);
        }
        for i in 0..self.factors.len() {
            let axis = self.factors[i].axis;
            let c = self.base.coord(axis);
            if !c.is_zero() {
                self.factors[i].seq = self.factors[i].seq.shifted(&c);
                self.base.set_coord(axis, Q::zero());
            }
            self.recanon(i);
        }
        self.tensor = self.tensor.separate_signs();
        for i in 0..self.factors.len() {
            self.coarsen_axis(i);
            self.tensor = self.tensor.reduce_period(i);
        }
        if self.tensor.is_zero() {
            return Ok(None);
        }
        self.advance()?;
        Ok(Some(self))
    }

    fn recanon(&mut self, i: usize) {
        let (s, ri) = self.factors[i].seq.canonical();
        if ri != Reindex::ID {
            self.tensor = self.tensor.reindex(i, ri.alpha, ri.beta);
            self.factors[i].n0 = ri.apply(self.factors[i].n0);
        }
        self.factors[i].seq = s;
    }

    fn coarsen_axis(&mut self, i: usize) {
        let res = self.tensor.residues(i);
        let p = self.tensor.periods[i] as i64;
        if p == 1 || res.is_empty() {
            return;
        }
        let r0 = res[0] as i64;
        let mut g = p;
        for r in &res {
            g = g.gcd(&(*r as i64 - r0));
        }
        if g <= 1 {
            return;
        }
        let beta = r0.rem_euclid(g);
        let Some(seq) = coarsen(&self.factors[i].seq, g, beta) else { return };
        let mut t = Tensor { periods: self.tensor.periods.clone(), terms: Default::default() };
        t.periods[i] = (p / g) as u32;
        for (key, c) in &self.tensor.terms {
            let mut nk = key.clone();
            let k = &key[i];
            nk[i] = Key { r: ((k.r as i64 - beta) / g) as u32, w: k.w.clone(), j: k.j };
            t.add_term(nk, c.clone());
        }
        self.tensor = t;
        let n0 = self.factors[i].n0;
        self.factors[i].n0 = (n0 - beta + g - 1).div_euclid(g);
        self.factors[i].seq = seq;
        self.recanon(i);
    }

    /// Moves each start index past vanishing slices.
    pub fn advance(&mut self) -> Result<()> {
        for i in 0..self.factors.len() {
            let mut steps = 0;
            while self.tensor.slice(i, self.factors[i].n0).is_zero() {
                self.factors[i].n0 += 1;
                steps += 1;
                if steps > STRIP_LIMIT {
                    return Err(HahnError::closure("start index search did not terminate"));
                }
            }
        }
        Ok(())
    }

    /// Lower-dimensional blocks covering indices below `target`, after which this block
    /// starts at `target`.
    pub fn explode_to(&mut self, target: &[i64]) -> Result<Vec<Block>> {
        let mut strips = Vec::new();
        let start = self.start();
        let total: i64 = target.iter().zip(&start).map(|(t, s)| t - s).sum();
        if total > STRIP_LIMIT {
            return Err(HahnError::closure("grid realignment exceeds the strip limit"));
        }
        for i in 0..self.dim() {
            for n in start[i]..target[i] {
                let mut b = self.clone();
                for (j, f) in b.factors.iter_mut().enumerate() {
                    if j < i {
                        f.n0 = target[j];
                    }
                }
                let s = b.slice(i, n);
                if !s.tensor.is_zero() {
                    strips.push(s);
                }
            }
        }
        for (f, &t) in self.factors.iter_mut().zip(target) {
            f.n0 = t;
        }
        Ok(strips)
    }
}

/// Merges two blocks with the same base and axes when their sequences unify.
pub fn try_merge(x: &Block, y: &Block) -> Option<Result<(Block, Vec<Block>)>> {
    let mut maps = Vec::new();
    for (fx, fy) in x.factors.iter().zip(&y.factors) {
        maps.push(unify(&fx.seq, &fy.seq)?);
    }
    Some((|| {
        let mut xb = x.clone();
        let mut yb = y.clone();
        for (i, (u, mx, my)) in maps.iter().enumerate() {
            xb.tensor = xb.tensor.reindex(i, mx.alpha, mx.beta);
            xb.factors[i].n0 = mx.apply(xb.factors[i].n0);
            xb.factors[i].seq = u.clone();
            yb.tensor = yb.tensor.reindex(i, my.alpha, my.beta);
            yb.factors[i].n0 = my.apply(yb.factors[i].n0);
            yb.factors[i].seq = u.clone();
        }
        let target: Vec<i64> = xb.start().iter().zip(yb.start()).map(|(a, b)| (*a).max(b)).collect();
        let mut strips = xb.explode_to(&target)?;
        strips.extend(yb.explode_to(&target)?);
        xb.tensor = xb.tensor.add(&yb.tensor);
        Ok((xb, strips))
    })())
}
