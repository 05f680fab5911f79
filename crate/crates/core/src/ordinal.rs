//! Countable ordinals in hereditary Cantor normal form.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{HahnError, Result};

/// Default cap on the nesting depth of exponents.
pub const DEPTH_CAP: usize = 64;

/// An ordinal `ω^e1·c1 + ... + ω^ek·ck` with strictly decreasing exponents.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Ordinal {
    terms: Vec<(Ordinal, BigUint)>,
}

/// An ordinal or the bottom element `-∞`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum OrdinalExt {
    MinusInfinity,
    Fin(Ordinal),
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::nat(1)
    }

    pub fn nat(n: u64) -> Self {
        if n == 0 {
            Self::zero()
        } else {
            Ordinal { terms: vec![(Ordinal::zero(), BigUint::from(n))] }
        }
    }

    pub fn omega() -> Self {
        Ordinal { terms: vec![(Ordinal::one(), BigUint::one())] }
    }

    /// `ω^e`, rejecting exponents whose nesting would exceed the depth cap.
    pub fn omega_pow(e: Ordinal) -> Result<Self> {
        if e.depth() + 1 > DEPTH_CAP {
            return Err(HahnError::DepthExceeded(DEPTH_CAP));
        }
        Ok(Ordinal { terms: vec![(e, BigUint::one())] })
    }

    /// `ω^e·c` for a finite exponent.
    pub fn omega_nat(e: u64, c: u64) -> Self {
        if c == 0 {
            return Self::zero();
        }
        Ordinal { terms: vec![(Ordinal::nat(e), BigUint::from(c))] }
    }

    /// Builds an ordinal from arbitrary (exponent, coefficient) pairs, sorting and merging.
    pub fn from_terms(mut terms: Vec<(Ordinal, BigUint)>) -> Result<Self> {
        terms.retain(|(_, c)| !c.is_zero());
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Ordinal, BigUint)> = Vec::new();
        for (e, c) in terms {
            match out.last_mut() {
                Some((le, lc)) if *le == e => *lc += c,
                _ => out.push((e, c)),
            }
        }
        let o = Ordinal { terms: out };
        if o.depth() > DEPTH_CAP {
            return Err(HahnError::DepthExceeded(DEPTH_CAP));
        }
        Ok(o)
    }

    pub fn terms(&self) -> &[(Ordinal, BigUint)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nesting depth: 0 for 0, 1 for naturals, 1 + max exponent depth otherwise.
    pub fn depth(&self) -> usize {
        self.terms.iter().map(|(e, _)| e.depth() + 1).max().unwrap_or(0)
    }

    pub fn is_finite(&self) -> bool {
        self.terms.iter().all(|(e, _)| e.is_zero())
    }

    pub fn to_u64(&self) -> Option<u64> {
        if self.is_zero() {
            return Some(0);
        }
        if self.terms.len() == 1 && self.terms[0].0.is_zero() {
            return self.terms[0].1.to_u64();
        }
        None
    }

    /// True for ω-powers `ω^e` (coefficient one, single term).
    pub fn is_principal(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].1.is_one()
    }

    /// Leading exponent, or `None` for zero.
    pub fn leading_exponent(&self) -> Option<&Ordinal> {
        self.terms.first().map(|(e, _)| e)
    }

    /// Sum of the CNF coefficients.
    pub fn coefficient_sum(&self) -> BigUint {
        self.terms.iter().fold(BigUint::zero(), |acc, (_, c)| acc + c)
    }

    pub fn ord_add(&self, b: &Ordinal) -> Ordinal {
        let Some((be, bc)) = b.terms.first() else { return self.clone() };
        let mut terms: Vec<(Ordinal, BigUint)> = Vec::new();
        let mut merged = None;
        for (e, c) in &self.terms {
            match e.cmp(be) {
                Ordering::Greater => terms.push((e.clone(), c.clone())),
                Ordering::Equal => merged = Some(c.clone()),
                Ordering::Less => break,
            }
        }
        let lead = match merged {
            Some(c) => c + bc,
            None => bc.clone(),
        };
        terms.push((be.clone(), lead));
        terms.extend(b.terms[1..].iter().cloned());
        Ordinal { terms }
    }

    pub fn ord_mul(&self, b: &Ordinal) -> Ordinal {
        if self.is_zero() || b.is_zero() {
            return Ordinal::zero();
        }
        let (ae, ac) = &self.terms[0];
        let mut acc = Ordinal::zero();
        for (be, bc) in &b.terms {
            let piece = if be.is_zero() {
                let mut terms = self.terms.clone();
                terms[0].1 = ac * bc;
                Ordinal { terms }
            } else {
                Ordinal { terms: vec![(ae.ord_add(be), bc.clone())] }
            };
            acc = acc.ord_add(&piece);
        }
        acc
    }

    /// Hessenberg natural sum.
    pub fn nat_sum(&self, b: &Ordinal) -> Ordinal {
        let mut terms = Vec::with_capacity(self.terms.len() + b.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < b.terms.len() {
            if j == b.terms.len() {
                terms.push(self.terms[i].clone());
                i += 1;
            } else if i == self.terms.len() {
                terms.push(b.terms[j].clone());
                j += 1;
            } else {
                match self.terms[i].0.cmp(&b.terms[j].0) {
                    Ordering::Greater => {
                        terms.push(self.terms[i].clone());
                        i += 1;
                    }
                    Ordering::Less => {
                        terms.push(b.terms[j].clone());
                        j += 1;
                    }
                    Ordering::Equal => {
                        terms.push((self.terms[i].0.clone(), &self.terms[i].1 + &b.terms[j].1));
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
        Ordinal { terms }
    }

    /// Hessenberg natural product.
    pub fn nat_prod(&self, b: &Ordinal) -> Ordinal {
        let mut acc = Ordinal::zero();
        for (ae, ac) in &self.terms {
            for (be, bc) in &b.terms {
                let t = Ordinal { terms: vec![(ae.nat_sum(be), ac * bc)] };
                acc = acc.nat_sum(&t);
            }
        }
        acc
    }

    /// Leading exponent as an extended ordinal; `-∞` for zero.
    pub fn degree(&self) -> OrdinalExt {
        match self.terms.first() {
            Some((e, _)) => OrdinalExt::Fin(e.clone()),
            None => OrdinalExt::MinusInfinity,
        }
    }

    /// Parses the text syntax `w^2*3 + w + 1`.
    pub fn parse(s: &str) -> Result<Ordinal> {
        let toks: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut p = OrdParser { s: &toks, i: 0, depth: 0 };
        let o = p.sum()?;
        if p.i != toks.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(o)
    }

    /// Random ordinal with nesting depth at most `depth`.
    pub fn random<R: Rng>(rng: &mut R, depth: usize) -> Ordinal {
        if depth <= 1 {
            return Ordinal::nat(rng.gen_range(0..5));
        }
        let n = rng.gen_range(0..4);
        let terms = (0..n)
            .map(|_| (Ordinal::random(rng, depth - 1), BigUint::from(rng.gen_range(1u64..4))))
            .collect();
        Ordinal::from_terms(terms).expect("bounded depth")
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(other.terms.iter()) {
            let c = a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1));
            if c != Ordering::Equal {
                return c;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let base = if e.is_zero() {
                    return c.to_string();
                } else if e.is_one_ord() {
                    "w".to_string()
                } else if let Some(n) = e.to_u64() {
                    format!("w^{n}")
                } else {
                    format!("w^({e})")
                };
                if c.is_one() {
                    base
                } else {
                    format!("{base}*{c}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Ordinal {
    fn is_one_ord(&self) -> bool {
        self.to_u64() == Some(1)
    }
}

struct OrdParser<'a> {
    s: &'a [char],
    i: usize,
    depth: usize,
}

impl OrdParser<'_> {
    fn err(&self, msg: &str) -> HahnError {
        HahnError::Parse { line: 1, column: self.i + 1, message: msg.to_string() }
    }

    fn peek(&self) -> Option<char> {
        self.s.get(self.i).copied()
    }

    fn number(&mut self) -> Result<BigUint> {
        let start = self.i;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.i += 1;
        }
        if start == self.i {
            return Err(self.err("expected a natural number"));
        }
        let t: String = self.s[start..self.i].iter().collect();
        t.parse().map_err(|_| self.err("bad number"))
    }

    fn sum(&mut self) -> Result<Ordinal> {
        self.depth += 1;
        if self.depth > DEPTH_CAP {
            return Err(HahnError::DepthExceeded(DEPTH_CAP));
        }
        let mut acc = self.term()?;
        while self.peek() == Some('+') {
            self.i += 1;
            let t = self.term()?;
            acc = acc.ord_add(&t);
        }
        self.depth -= 1;
        Ok(acc)
    }

    fn term(&mut self) -> Result<Ordinal> {
        match self.peek() {
            Some('w') => {
                self.i += 1;
                let e = if self.peek() == Some('^') {
                    self.i += 1;
                    match self.peek() {
                        Some('(') => {
                            self.i += 1;
                            let e = self.sum()?;
                            if self.peek() != Some(')') {
                                return Err(self.err("expected ')'"));
                            }
                            self.i += 1;
                            e
                        }
                        Some('w') => {
                            self.i += 1;
                            Ordinal::omega()
                        }
                        _ => {
                            let n = self.number()?;
                            Ordinal::from_terms(vec![(Ordinal::zero(), n)])?
                        }
                    }
                } else {
                    Ordinal::one()
                };
                let c = if self.peek() == Some('*') {
                    self.i += 1;
                    self.number()?
                } else {
                    BigUint::one()
                };
                if e.depth() + 1 > DEPTH_CAP {
                    return Err(HahnError::DepthExceeded(DEPTH_CAP));
                }
                Ordinal::from_terms(vec![(e, c)])
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.number()?;
                Ordinal::from_terms(vec![(Ordinal::zero(), n)])
            }
            _ => Err(self.err("expected 'w' or a natural number")),
        }
    }
}

impl OrdinalExt {
    pub fn zero() -> Self {
        OrdinalExt::Fin(Ordinal::zero())
    }

    pub fn nat(n: u64) -> Self {
        OrdinalExt::Fin(Ordinal::nat(n))
    }

    pub fn fin(&self) -> Option<&Ordinal> {
        match self {
            OrdinalExt::Fin(o) => Some(o),
            OrdinalExt::MinusInfinity => None,
        }
    }

    pub fn nat_sum(&self, b: &OrdinalExt) -> OrdinalExt {
        match (self, b) {
            (OrdinalExt::Fin(x), OrdinalExt::Fin(y)) => OrdinalExt::Fin(x.nat_sum(y)),
            _ => OrdinalExt::MinusInfinity,
        }
    }

    pub fn nat_prod(&self, b: &OrdinalExt) -> OrdinalExt {
        match (self, b) {
            (OrdinalExt::Fin(x), OrdinalExt::Fin(y)) => OrdinalExt::Fin(x.nat_prod(y)),
            _ => OrdinalExt::MinusInfinity,
        }
    }

    pub fn degree(&self) -> OrdinalExt {
        match self {
            OrdinalExt::Fin(o) => o.degree(),
            OrdinalExt::MinusInfinity => OrdinalExt::MinusInfinity,
        }
    }
}

impl fmt::Display for OrdinalExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrdinalExt::MinusInfinity => write!(f, "-inf"),
            OrdinalExt::Fin(o) => write!(f, "{o}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let o = Ordinal::parse("w^2*3 + w + 1").unwrap();
        assert_eq!(o.to_string(), "w^2*3 + w + 1");
        assert_eq!(Ordinal::parse("w^(w+2)").unwrap().to_string(), "w^(w + 2)");
    }

    #[test]
    fn compare_examples() {
        let a = Ordinal::parse("w*2+1").unwrap();
        let b = Ordinal::parse("w^2").unwrap();
        assert!(a < b);
        assert!(Ordinal::parse("w^w").unwrap() > Ordinal::parse("w^3").unwrap());
    }

    #[test]
    fn add_examples() {
        let w = Ordinal::omega();
        assert_eq!(w.ord_add(&Ordinal::one()).to_string(), "w + 1");
        assert_eq!(Ordinal::one().ord_add(&w), w);
        let a = Ordinal::parse("w^2 + w").unwrap();
        let b = Ordinal::parse("w^2").unwrap();
        assert_eq!(a.ord_add(&b).to_string(), "w^2*2");
    }

    #[test]
    fn mul_examples() {
        let w = Ordinal::omega();
        let w1 = Ordinal::parse("w+1").unwrap();
        assert_eq!(w1.ord_mul(&w1).to_string(), "w^2 + w + 1");
        assert_eq!(Ordinal::nat(2).ord_mul(&w), w);
        assert_eq!(w.ord_mul(&Ordinal::nat(2)).to_string(), "w*2");
    }

    #[test]
    fn natural_ops() {
        let a = Ordinal::parse("w^2+w").unwrap();
        let b = Ordinal::parse("w+1").unwrap();
        assert_eq!(a.nat_sum(&b).to_string(), "w^2 + w*2 + 1");
        assert_eq!(b.nat_prod(&b).to_string(), "w^2 + w*2 + 1");
        assert_eq!(Ordinal::nat(2).nat_prod(&Ordinal::nat(3)), Ordinal::nat(6));
        let ww = Ordinal::parse("w^w").unwrap();
        assert_eq!(ww.nat_prod(&Ordinal::parse("w^2").unwrap()).to_string(), "w^(w + 2)");
        let w = OrdinalExt::Fin(Ordinal::omega());
        assert_eq!(w.nat_sum(&OrdinalExt::MinusInfinity), OrdinalExt::MinusInfinity);
    }

    #[test]
    fn degrees() {
        assert_eq!(Ordinal::parse("w^2*3+w").unwrap().degree(), OrdinalExt::nat(2));
        assert_eq!(Ordinal::nat(5).degree(), OrdinalExt::zero());
        assert_eq!(Ordinal::zero().degree(), OrdinalExt::MinusInfinity);
    }

    #[test]
    fn depth_cap_enforced() {
        let mut o = Ordinal::one();
        for _ in 0..DEPTH_CAP - 1 {
            o = Ordinal::omega_pow(o).unwrap();
        }
        assert!(Ordinal::omega_pow(o).is_err());
    }
}
