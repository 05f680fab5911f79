//! Multivariate Laurent polynomials over ℚ with integer exponent vectors.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::rat::Q;

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct MPoly {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<i64>, Q>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        let mut p = MPoly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn monomial(e: Vec<i64>, c: Q) -> Self {
        let mut p = MPoly::zero(e.len());
        p.add_term(e, c);
        p
    }

    pub fn add_term(&mut self, e: Vec<i64>, c: Q) {
        if c.is_zero() {
            return;
        }
        let v = self.terms.entry(e.clone()).or_insert_with(Q::zero);
        *v += c;
        if v.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn add(&self, o: &MPoly) -> MPoly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> MPoly {
        self.scale(&-Q::one())
    }

    pub fn sub(&self, o: &MPoly) -> MPoly {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &Q) -> MPoly {
        if k.is_zero() {
            return MPoly::zero(self.nvars);
        }
        MPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect() }
    }

    pub fn mul(&self, o: &MPoly) -> MPoly {
        let mut r = MPoly::zero(self.nvars.max(o.nvars));
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<i64> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                r.add_term(e, c1 * c2);
            }
        }
        r
    }

    pub fn shift(&self, m: &[i64]) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.iter().zip(m).map(|(a, b)| a + b).collect(), c.clone())).collect(),
        }
    }

    /// Lexicographically largest term.
    pub fn leading(&self) -> Option<(&Vec<i64>, &Q)> {
        self.terms.iter().next_back()
    }

    /// Componentwise minimum of the exponents.
    pub fn min_exponents(&self) -> Vec<i64> {
        let mut m = vec![i64::MAX; self.nvars];
        for e in self.terms.keys() {
            for (a, b) in m.iter_mut().zip(e) {
                *a = (*a).min(*b);
            }
        }
        if self.terms.is_empty() {
            vec![0; self.nvars]
        } else {
            m
        }
    }

    /// Shifts so every variable has minimum exponent zero.
    pub fn to_polynomial(&self) -> MPoly {
        let m: Vec<i64> = self.min_exponents().iter().map(|x| -x).collect();
        self.shift(&m)
    }

    /// Scales so the leading coefficient is one.
    pub fn monic(&self) -> MPoly {
        match self.leading() {
            Some((_, c)) => self.scale(&(Q::one() / c)),
            None => self.clone(),
        }
    }

    fn degree_in(&self, v: usize) -> i64 {
        self.terms.keys().map(|e| e[v]).max().unwrap_or(i64::MIN)
    }

    fn uses(&self, v: usize) -> bool {
        self.terms.keys().any(|e| e[v] != 0)
    }

    /// Coefficients with respect to variable `v`.
    fn coeffs_in(&self, v: usize) -> BTreeMap<i64, MPoly> {
        let mut out: BTreeMap<i64, MPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2[v] = 0;
            out.entry(e[v]).or_insert_with(|| MPoly::zero(self.nvars)).add_term(e2, c.clone());
        }
        out
    }

    /// Exact quotient of polynomials with non-negative exponents, if `d` divides `self`.
    pub fn div_poly(&self, d: &MPoly) -> Option<MPoly> {
        let (de, dc) = d.leading()?;
        let (de, dc) = (de.clone(), dc.clone());
        let mut r = self.clone();
        let mut q = MPoly::zero(self.nvars);
        while let Some((e, c)) = r.leading() {
            if e.iter().zip(&de).any(|(a, b)| a < b) {
                return None;
            }
            let m: Vec<i64> = e.iter().zip(&de).map(|(a, b)| a - b).collect();
            let k = c / &dc;
            let t = MPoly::monomial(m, k);
            r = r.sub(&t.mul(d));
            q = q.add(&t);
        }
        Some(q)
    }

    /// Quotient in the Laurent ring, if `d` divides `self` there.
    pub fn div_laurent(&self, d: &MPoly) -> Option<MPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(MPoly::zero(self.nvars));
        }
        let (a, b) = (self.to_polynomial(), d.to_polynomial());
        let q = a.div_poly(&b)?;
        let sa = self.min_exponents();
        let sb = d.min_exponents();
        let m: Vec<i64> = sa.iter().zip(&sb).map(|(x, y)| x - y).collect();
        Some(q.shift(&m))
    }

    fn content_in(&self, v: usize) -> MPoly {
        let mut g = MPoly::zero(self.nvars);
        for c in self.coeffs_in(v).values() {
            g = poly_gcd(&g, c);
            if g.is_constant() {
                return MPoly::constant(self.nvars, Q::one());
            }
        }
        g
    }

    fn primitive_in(&self, v: usize) -> MPoly {
        let c = self.content_in(v);
        self.div_poly(&c).expect("content divides").monic()
    }
}

/// Pseudo-remainder of `a` by `b` with respect to variable `v`.
fn prem(a: &MPoly, b: &MPoly, v: usize) -> MPoly {
    let db = b.degree_in(v);
    let lb = b.coeffs_in(v).remove(&db).expect("nonzero");
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v) >= db {
        let dr = r.degree_in(v);
        let lr = r.coeffs_in(v).remove(&dr).expect("nonzero");
        let mut xs = vec![0; a.nvars];
        xs[v] = dr - db;
        r = r.mul(&lb).sub(&lr.mul(&b.shift(&xs)));
    }
    r
}

/// Greatest common divisor of polynomials with non-negative exponents, monic.
pub fn poly_gcd(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    let n = a.nvars.max(b.nvars);
    let Some(v) = (0..n).rev().find(|&v| a.uses(v) || b.uses(v)) else {
        return MPoly::constant(n, Q::one());
    };
    if !a.uses(v) {
        return poly_gcd(a, &b.content_in(v));
    }
    if !b.uses(v) {
        return poly_gcd(&a.content_in(v), b);
    }
    let c = poly_gcd(&a.content_in(v), &b.content_in(v));
    let (mut p, mut q) = (a.primitive_in(v), b.primitive_in(v));
    if p.degree_in(v) < q.degree_in(v) {
        std::mem::swap(&mut p, &mut q);
    }
    while !q.is_zero() && q.uses(v) {
        let r = prem(&p, &q, v);
        p = q;
        q = if r.is_zero() { r } else { r.primitive_in(v) };
    }
    let g = if q.is_zero() { p.primitive_in(v) } else { MPoly::constant(n, Q::one()) };
    g.mul(&c).monic()
}

/// Greatest common divisor in the Laurent ring, as a polynomial with no monomial factor.
pub fn laurent_gcd(a: &MPoly, b: &MPoly) -> MPoly {
    poly_gcd(&a.to_polynomial(), &b.to_polynomial()).to_polynomial()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::q;

    fn p(n: usize, t: &[(&[i64], i64)]) -> MPoly {
        let mut r = MPoly::zero(n);
        for (e, c) in t {
            r.add_term(e.to_vec(), q(*c));
        }
        r
    }

    #[test]
    fn univariate_gcd() {
        // (x-1)(x+2) and (x-1)(x-3)
        let a = p(1, &[(&[2], 1), (&[1], 1), (&[0], -2)]);
        let b = p(1, &[(&[2], 1), (&[1], -4), (&[0], 3)]);
        assert_eq!(poly_gcd(&a, &b), p(1, &[(&[1], 1), (&[0], -1)]));
        let c = p(1, &[(&[1], 1), (&[0], 1)]);
        let d = p(1, &[(&[1], 1), (&[0], -1)]);
        assert!(poly_gcd(&c, &d).is_constant());
    }

    #[test]
    fn bivariate_gcd_and_division() {
        let f = p(2, &[(&[1, 0], 1), (&[0, 1], 1)]); // x + y
        let g = p(2, &[(&[1, 0], 1), (&[0, 0], 2)]); // x + 2
        let h = p(2, &[(&[0, 1], 1), (&[0, 0], -3)]); // y - 3
        let a = f.mul(&g);
        let b = f.mul(&h);
        assert_eq!(poly_gcd(&a, &b), f.monic());
        assert_eq!(a.div_poly(&f), Some(g.clone()));
        assert_eq!(a.div_poly(&h), None);
        let shifted = a.shift(&[-2, -1]);
        assert_eq!(laurent_gcd(&shifted, &b), f.monic());
        assert_eq!(shifted.div_laurent(&g), Some(f.shift(&[-2, -1])));
    }
}
