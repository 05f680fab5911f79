//! Coefficient functions on index grids.
//!
//! A one-variable stream is a finite sum of terms `c·[n ≡ r mod P]·k^j·w^k` with
//! `k = (n - r)/P`. A tensor is a finite sum of products of such terms, one per axis.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::rat::{pow_q, q, Q};

/// One axis component of a tensor term: residue `r`, base `w`, polynomial degree `j`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Key {
    pub r: u32,
    pub w: Q,
    pub j: u32,
}

impl Key {
    pub fn unit() -> Key {
        Key { r: 0, w: Q::one(), j: 0 }
    }

    /// Value of this component at index `n` for period `p`.
    pub fn eval(&self, p: u32, n: i64) -> Q {
        let p = p as i64;
        if n.rem_euclid(p) != self.r as i64 {
            return Q::zero();
        }
        let k = (n - self.r as i64).div_euclid(p);
        let mut v = pow_q(&self.w, k);
        if self.j > 0 {
            v *= pow_q(&q(k), self.j as i64);
        }
        v
    }
}

fn binom(n: u32, k: u32) -> Q {
    let mut r = Q::one();
    for i in 0..k {
        r = r * q((n - i) as i64) / q((i + 1) as i64);
    }
    r
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Tensor {
    pub periods: Vec<u32>,
    pub terms: BTreeMap<Vec<Key>, Q>,
}

impl Tensor {
    pub fn scalar(c: Q) -> Tensor {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        Tensor { periods: Vec::new(), terms }
    }

    /// A one-axis stream.
    pub fn stream(period: u32, keys: Vec<(Key, Q)>) -> Tensor {
        let mut t = Tensor { periods: vec![period], terms: BTreeMap::new() };
        for (k, c) in keys {
            t.add_term(vec![k], c);
        }
        t
    }

    pub fn constant(dim: usize, c: Q) -> Tensor {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![Key::unit(); dim], c);
        }
        Tensor { periods: vec![1; dim], terms }
    }

    pub fn dim(&self) -> usize {
        self.periods.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, key: Vec<Key>, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(key.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn eval(&self, idx: &[i64]) -> Q {
        let mut s = Q::zero();
        for (key, c) in &self.terms {
            let mut v = c.clone();
            for (i, k) in key.iter().enumerate() {
                v *= k.eval(self.periods[i], idx[i]);
                if v.is_zero() {
                    break;
                }
            }
            s += v;
        }
        s
    }

    pub fn scale(&self, k: &Q) -> Tensor {
        if k.is_zero() {
            return Tensor { periods: self.periods.clone(), terms: BTreeMap::new() };
        }
        Tensor {
            periods: self.periods.clone(),
            terms: self.terms.iter().map(|(key, c)| (key.clone(), c * k)).collect(),
        }
    }

    /// Multiplies the period on `axis` by `m`.
    pub fn lift(&self, axis: usize, m: u32) -> Tensor {
        if m == 1 {
            return self.clone();
        }
        let p = self.periods[axis];
        let mut out = Tensor { periods: self.periods.clone(), terms: BTreeMap::new() };
        out.periods[axis] = p * m;
        for (key, c) in &self.terms {
            let k = &key[axis];
            let wm = pow_q(&k.w, m as i64);
            for i in 0..m {
                let wi = pow_q(&k.w, i as i64);
                for l in 0..=k.j {
                    let coef = c
                        * &wi
                        * binom(k.j, l)
                        * pow_q(&q(m as i64), l as i64)
                        * pow_q(&q(i as i64), (k.j - l) as i64);
                    if coef.is_zero() {
                        continue;
                    }
                    let mut nk = key.clone();
                    nk[axis] = Key { r: k.r + p * i, w: wm.clone(), j: l };
                    out.add_term(nk, coef);
                }
            }
        }
        out
    }

    /// Lifts `axis` to period `target` (a multiple of the current period).
    pub fn lift_to(&self, axis: usize, target: u32) -> Tensor {
        self.lift(axis, target / self.periods[axis])
    }

    /// The tensor `g` with `g(.., α·n+β, ..) = f(.., n, ..)` and zero off that lattice.
    pub fn reindex(&self, axis: usize, alpha: i64, beta: i64) -> Tensor {
        if alpha == 1 && beta == 0 {
            return self.clone();
        }
        let p = self.periods[axis] as i64;
        let np = alpha * p;
        let mut out = Tensor { periods: self.periods.clone(), terms: BTreeMap::new() };
        out.periods[axis] = np as u32;
        for (key, c) in &self.terms {
            let k = &key[axis];
            for big_r in 0..np {
                if (big_r - beta).rem_euclid(alpha) != 0 {
                    continue;
                }
                let q0 = (big_r - beta).div_euclid(alpha);
                if q0.rem_euclid(p) != k.r as i64 {
                    continue;
                }
                let delta = (q0 - k.r as i64).div_euclid(p);
                let wd = pow_q(&k.w, delta);
                for l in 0..=k.j {
                    let coef = c * &wd * binom(k.j, l) * pow_q(&q(delta), (k.j - l) as i64);
                    if coef.is_zero() {
                        continue;
                    }
                    let mut nk = key.clone();
                    nk[axis] = Key { r: big_r as u32, w: k.w.clone(), j: l };
                    out.add_term(nk, coef);
                }
            }
        }
        out
    }

    /// Fixes index `n` on `axis`, removing that axis.
    pub fn slice(&self, axis: usize, n: i64) -> Tensor {
        let mut periods = self.periods.clone();
        let p = periods.remove(axis);
        let mut out = Tensor { periods, terms: BTreeMap::new() };
        for (key, c) in &self.terms {
            let v = key[axis].eval(p, n);
            if v.is_zero() {
                continue;
            }
            let mut nk = key.clone();
            nk.remove(axis);
            out.add_term(nk, c * v);
        }
        out
    }

    /// Sum of two tensors of the same dimension, lifting periods to their lcm.
    pub fn add(&self, o: &Tensor) -> Tensor {
        if self.terms.is_empty() && self.periods.len() == o.periods.len() {
            return o.clone();
        }
        let mut a = self.clone();
        let mut b = o.clone();
        for i in 0..a.dim() {
            let l = a.periods[i].lcm(&b.periods[i]);
            a = a.lift_to(i, l);
            b = b.lift_to(i, l);
        }
        for (k, c) in b.terms {
            a.add_term(k, c);
        }
        a
    }

    /// Outer product; `order[i] = (from_other, index)` selects the source of output axis `i`.
    pub fn outer(&self, o: &Tensor, order: &[(bool, usize)]) -> Tensor {
        let periods = order
            .iter()
            .map(|&(other, i)| if other { o.periods[i] } else { self.periods[i] })
            .collect();
        let mut out = Tensor { periods, terms: BTreeMap::new() };
        for (ka, ca) in &self.terms {
            for (kb, cb) in &o.terms {
                let key = order
                    .iter()
                    .map(|&(other, i)| if other { kb[i].clone() } else { ka[i].clone() })
                    .collect();
                out.add_term(key, ca * cb);
            }
        }
        out
    }

    /// Factors as `left ⊗ right`, where `left` carries the listed axes (in increasing order)
    /// and `right` the others, when the coefficient function has rank one across that split.
    /// The first term of `left` has coefficient one.
    pub fn split_rank_one(&self, left: &[usize]) -> Option<(Tensor, Tensor)> {
        let right: Vec<usize> = (0..self.dim()).filter(|i| !left.contains(i)).collect();
        let pick = |k: &[Key], ix: &[usize]| -> Vec<Key> { ix.iter().map(|&i| k[i].clone()).collect() };
        let mut m: BTreeMap<Vec<Key>, BTreeMap<Vec<Key>, Q>> = BTreeMap::new();
        for (k, c) in &self.terms {
            m.entry(pick(k, left)).or_default().insert(pick(k, &right), c.clone());
        }
        let (l0, row0) = m.iter().next()?;
        let (r0, c0) = row0.iter().next()?;
        let cols: Vec<&Vec<Key>> = {
            let mut v: Vec<&Vec<Key>> = m.values().flat_map(|r| r.keys()).collect();
            v.sort();
            v.dedup();
            v
        };
        let get = |l: &Vec<Key>, r: &Vec<Key>| m.get(l).and_then(|row| row.get(r)).cloned().unwrap_or_else(Q::zero);
        for l in m.keys() {
            for r in &cols {
                if get(l, r) * c0 != get(l, r0) * get(l0, r) {
                    return None;
                }
            }
        }
        let mut a = Tensor { periods: left.iter().map(|&i| self.periods[i]).collect(), terms: BTreeMap::new() };
        let mut b = Tensor { periods: right.iter().map(|&i| self.periods[i]).collect(), terms: BTreeMap::new() };
        for l in m.keys() {
            a.add_term(l.clone(), get(l, r0) / c0);
        }
        for r in cols {
            b.add_term(r.clone(), get(l0, r));
        }
        Some((a, b))
    }

    /// Residues used on `axis`.
    pub fn residues(&self, axis: usize) -> Vec<u32> {
        let mut v: Vec<u32> = self.terms.keys().map(|k| k[axis].r).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Lifts axes where one residue carries both `w` and `-w`, so that every
    /// residue class of a nonzero tensor has only finitely many zeros.
    pub fn separate_signs(&self) -> Tensor {
        let mut t = self.clone();
        for axis in 0..t.dim() {
            for _ in 0..4 {
                let mut clash = false;
                let mut seen: BTreeMap<u32, Vec<Q>> = BTreeMap::new();
                for k in t.terms.keys() {
                    let e = seen.entry(k[axis].r).or_default();
                    let w = &k[axis].w;
                    if e.iter().any(|x| *x == -w.clone()) {
                        clash = true;
                    }
                    if !e.contains(w) {
                        e.push(w.clone());
                    }
                }
                if !clash {
                    break;
                }
                t = t.lift(axis, 2);
            }
        }
        t
    }

    /// Tries to shrink the period on `axis` without changing the function.
    pub fn reduce_period(&self, axis: usize) -> Tensor {
        let mut cur = self.clone();
        loop {
            let p = cur.periods[axis];
            let mut improved = false;
            for d in (2..=p).filter(|d| p % d == 0) {
                let np = p / d;
                if let Some(cand) = cur.try_period(axis, np) {
                    cur = cand;
                    improved = true;
                    break;
                }
            }
            if !improved {
                return cur;
            }
        }
    }

    fn try_period(&self, axis: usize, np: u32) -> Option<Tensor> {
        let p = self.periods[axis];
        let m = p / np;
        let mut cand = Tensor { periods: self.periods.clone(), terms: BTreeMap::new() };
        cand.periods[axis] = np;
        for (key, c) in &self.terms {
            let k = &key[axis];
            if k.r >= np {
                continue;
            }
            let w = crate::rat::q_root(&k.w, m)?;
            let mut nk = key.clone();
            nk[axis] = Key { r: k.r, w, j: k.j };
            cand.add_term(nk, c / pow_q(&q(m as i64), k.j as i64));
        }
        if cand.lift(axis, m) == *self {
            Some(cand)
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::qf;

    fn sample(t: &Tensor, range: std::ops::Range<i64>) -> Vec<Q> {
        range.map(|n| t.eval(&[n])).collect()
    }

    #[test]
    fn lift_preserves_values() {
        let t = Tensor::stream(
            1,
            vec![(Key { r: 0, w: qf(1, 2), j: 0 }, q(3)), (Key { r: 0, w: q(-1), j: 1 }, q(1))],
        );
        let l = t.lift(0, 3);
        assert_eq!(sample(&t, -4..12), sample(&l, -4..12));
        assert_eq!(l.reduce_period(0), t);
    }

    #[test]
    fn reindex_places_values() {
        let t = Tensor::stream(2, vec![(Key { r: 1, w: q(2), j: 1 }, q(1))]);
        let g = t.reindex(0, 3, 1);
        for n in -4..10 {
            assert_eq!(g.eval(&[3 * n + 1]), t.eval(&[n]));
            assert_eq!(g.eval(&[3 * n + 2]), Q::zero());
        }
    }

    #[test]
    fn slices_and_outer() {
        let a = Tensor::stream(1, vec![(Key { r: 0, w: qf(1, 2), j: 0 }, q(1))]);
        let b = Tensor::stream(2, vec![(Key { r: 1, w: q(1), j: 0 }, q(5))]);
        let ab = a.outer(&b, &[(false, 0), (true, 0)]);
        assert_eq!(ab.eval(&[2, 3]), qf(5, 4));
        assert_eq!(ab.slice(0, 2).eval(&[3]), qf(5, 4));
        assert_eq!(ab.slice(1, 3).eval(&[2]), qf(5, 4));
    }

    #[test]
    fn rank_one_split() {
        let a = Tensor::stream(2, vec![(Key { r: 1, w: q(3), j: 0 }, q(2)), (Key { r: 0, w: q(1), j: 1 }, q(1))]);
        let b = Tensor::stream(1, vec![(Key { r: 0, w: q(-1), j: 0 }, q(5))]);
        let ab = a.outer(&b, &[(false, 0), (true, 0)]);
        let (x, y) = ab.split_rank_one(&[0]).unwrap();
        for i in 0..6 {
            for j in 0..4 {
                assert_eq!(x.eval(&[i]) * y.eval(&[j]), ab.eval(&[i, j]));
            }
        }
        let mut sum = ab.clone();
        sum.add_term(vec![Key::unit(), Key::unit()], q(1));
        assert!(sum.split_rank_one(&[0]).is_none());
    }

    #[test]
    fn sign_separation() {
        let t = Tensor::stream(1, vec![(Key { r: 0, w: q(1), j: 0 }, q(1)), (Key { r: 0, w: q(-1), j: 0 }, q(1))]);
        let s = t.separate_signs();
        assert_eq!(sample(&t, -5..5), sample(&s, -5..5));
        assert_eq!(s.residues(0), vec![0]);
    }
}
