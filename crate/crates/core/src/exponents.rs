//! Exponent groups: ℚ-combinations of square roots with exact order, and finite
//! lexicographic products of such groups.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{HahnError, Result};
use crate::rat::{fmt_q, largest_prime_factor, parse_q, q, squarefree_split, to_f64, Q};

/// A real number `Σ q_d·√d` with `d` squarefree (`d = 1` is the rational part).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Exponent {
    coords: BTreeMap<u64, Q>,
}

impl Exponent {
    pub fn zero() -> Self {
        Exponent { coords: BTreeMap::new() }
    }

    pub fn rat(x: Q) -> Self {
        Self::term(1, x)
    }

    /// `c·√d` for an arbitrary positive integer `d`.
    pub fn term(d: u64, c: Q) -> Self {
        let mut e = Exponent::zero();
        if d == 0 || c.is_zero() {
            return e;
        }
        let (s, f) = squarefree_split(d);
        e.coords.insert(f, c * q(s as i64));
        e
    }

    pub fn int(n: i64) -> Self {
        Self::rat(q(n))
    }

    pub fn coef(&self, d: u64) -> Q {
        self.coords.get(&d).cloned().unwrap_or_else(Q::zero)
    }

    pub fn set_coef(&mut self, d: u64, c: Q) {
        if c.is_zero() {
            self.coords.remove(&d);
        } else {
            self.coords.insert(d, c);
        }
    }

    pub fn coords(&self) -> &BTreeMap<u64, Q> {
        &self.coords
    }

    pub fn gens(&self) -> impl Iterator<Item = u64> + '_ {
        self.coords.keys().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.coords.keys().all(|&d| d == 1)
    }

    pub fn as_rational(&self) -> Option<Q> {
        if self.is_rational() {
            Some(self.coef(1))
        } else {
            None
        }
    }

    pub fn add(&self, o: &Exponent) -> Exponent {
        let mut r = self.clone();
        for (d, c) in &o.coords {
            let v = r.coef(*d) + c;
            r.set_coef(*d, v);
        }
        r
    }

    pub fn sub(&self, o: &Exponent) -> Exponent {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Exponent {
        Exponent { coords: self.coords.iter().map(|(d, c)| (*d, -c)).collect() }
    }

    pub fn scale(&self, k: &Q) -> Exponent {
        if k.is_zero() {
            return Exponent::zero();
        }
        Exponent { coords: self.coords.iter().map(|(d, c)| (*d, c * k)).collect() }
    }

    /// Field product; used internally by sign determination.
    fn mul(&self, o: &Exponent) -> Exponent {
        let mut r = Exponent::zero();
        for (a, x) in &self.coords {
            for (b, y) in &o.coords {
                let g = num_integer::gcd(*a, *b);
                let d = (a / g) * (b / g);
                let c = x * y * q(g as i64);
                let v = r.coef(d) + c;
                r.set_coef(d, v);
            }
        }
        r
    }

    /// Exact sign: -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        if self.coords.len() > 1 {
            let terms: Vec<f64> = self.coords.iter().map(|(d, c)| to_f64(c) * (*d as f64).sqrt()).collect();
            let sum: f64 = terms.iter().sum();
            let mag: f64 = terms.iter().map(|t| t.abs()).sum();
            if sum.is_finite() && mag.is_finite() && mag > 0.0 && sum.abs() > 1e-9 * mag {
                return if sum > 0.0 { 1 } else { -1 };
            }
        }
        let p =self.coords.keys().map(|&d| largest_prime_factor(d)).max().unwrap_or(1);
        if p == 1 {
            return match self.coef(1).cmp(&Q::zero()) {
                Ordering::Less => -1,
                Ordering::Equal => 0,
                Ordering::Greater => 1,
            };
        }
        let mut a = Exponent::zero();
        let mut b = Exponent::zero();
        for (d, c) in &self.coords {
            if d % p == 0 {
                b.coords.insert(d / p, c.clone());
            } else {
                a.coords.insert(*d, c.clone());
            }
        }
        let sa = a.signum();
        let sb = b.signum();
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return if sa == 0 { sb } else { sa };
        }
        let disc = a.mul(&a).sub(&b.mul(&b).scale(&q(p as i64)));
        let sd = disc.signum();
        if sa > 0 {
            sd
        } else {
            -sd
        }
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn to_f64(&self) -> f64 {
        self.coords.iter().map(|(d, c)| to_f64(c) * (*d as f64).sqrt()).sum()
    }

    /// Parses literals such as `-3/4`, `-1/2*sqrt(2)`, `1 - sqrt(3)`.
    pub fn parse(s: &str) -> Result<Exponent> {
        let chars: Vec<char> = s.chars().collect();
        let mut p = ScalarParser { s: &chars, i: 0 };
        let e = p.scalar()?;
        p.ws();
        if p.i != chars.len() {
            return Err(p.err("unexpected trailing input in exponent"));
        }
        Ok(e)
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sub(other).signum().cmp(&0)
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.is_empty() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (i, (d, c)) in self.coords.iter().enumerate() {
            let t = if *d == 1 {
                fmt_q(c)
            } else if c.is_one() {
                format!("sqrt({d})")
            } else if *c == -Q::one() {
                format!("-sqrt({d})")
            } else {
                format!("{}*sqrt({d})", fmt_q(c))
            };
            if i == 0 {
                out.push_str(&t);
            } else if let Some(rest) = t.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&t);
            }
        }
        write!(f, "{out}")
    }
}

pub(crate) struct ScalarParser<'a> {
    pub s: &'a [char],
    pub i: usize,
}

impl ScalarParser<'_> {
    pub fn err(&self, msg: &str) -> HahnError {
        HahnError::Parse { line: 1, column: self.i + 1, message: msg.to_string() }
    }

    pub fn ws(&mut self) {
        while matches!(self.s.get(self.i), Some(c) if c.is_whitespace()) {
            self.i += 1;
        }
    }

    pub fn peek(&mut self) -> Option<char> {
        self.ws();
        self.s.get(self.i).copied()
    }

    pub fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    pub fn keyword(&mut self, k: &str) -> bool {
        self.ws();
        let kc: Vec<char> = k.chars().collect();
        if self.s.len() >= self.i + kc.len() && self.s[self.i..self.i + kc.len()] == kc[..] {
            self.i += kc.len();
            true
        } else {
            false
        }
    }

    pub fn rational(&mut self) -> Result<Q> {
        self.ws();
        let start = self.i;
        while matches!(self.s.get(self.i), Some(c) if c.is_ascii_digit()) {
            self.i += 1;
        }
        if start == self.i {
            return Err(self.err("expected a number"));
        }
        let save = self.i;
        if self.s.get(self.i) == Some(&'/') {
            self.i += 1;
            let ds = self.i;
            while matches!(self.s.get(self.i), Some(c) if c.is_ascii_digit()) {
                self.i += 1;
            }
            if ds == self.i {
                self.i = save;
            }
        }
        let t: String = self.s[start..self.i].iter().collect();
        parse_q(&t).ok_or_else(|| self.err("bad rational literal"))
    }

    fn sqrt(&mut self) -> Result<u64> {
        if !self.eat('(') {
            return Err(self.err("expected '(' after sqrt"));
        }
        let r = self.rational()?;
        if !self.eat(')') {
            return Err(self.err("expected ')'"));
        }
        match crate::rat::to_i64(&r) {
            Some(n) if n > 0 => Ok(n as u64),
            _ => Err(self.err("sqrt argument must be a positive integer")),
        }
    }

    fn sterm(&mut self) -> Result<Exponent> {
        if self.keyword("sqrt") {
            let d = self.sqrt()?;
            let mut c = q(1);
            if self.eat('*') {
                c = self.rational()?;
            }
            return Ok(Exponent::term(d, c));
        }
        let c = self.rational()?;
        let save = self.i;
        if self.eat('*') {
            if self.keyword("sqrt") {
                let d = self.sqrt()?;
                return Ok(Exponent::term(d, c));
            }
            self.i = save;
        }
        Ok(Exponent::rat(c))
    }

    pub fn scalar(&mut self) -> Result<Exponent> {
        let mut neg = false;
        if self.eat('-') {
            neg = true;
        } else {
            self.eat('+');
        }
        let mut acc = self.sterm()?;
        if neg {
            acc = acc.neg();
        }
        loop {
            let save = self.i;
            if self.eat('+') {
                acc = acc.add(&self.sterm()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.sterm()?);
            } else {
                self.i = save;
                break;
            }
        }
        Ok(acc)
    }

    /// Either a scalar or a bracketed lexicographic vector.
    pub fn lex(&mut self) -> Result<Vec<Exponent>> {
        if self.eat('[') {
            let mut v = vec![self.scalar()?];
            while self.eat(',') {
                v.push(self.scalar()?);
            }
            if !self.eat(']') {
                return Err(self.err("expected ']'"));
            }
            Ok(v)
        } else {
            Ok(vec![self.scalar()?])
        }
    }
}

/// Archimedean class: `-∞` or a level index (0 is the highest level).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum ArchClass {
    MinusInfinity,
    Level(usize),
}

impl Ord for ArchClass {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ArchClass::MinusInfinity, ArchClass::MinusInfinity) => Ordering::Equal,
            (ArchClass::MinusInfinity, _) => Ordering::Less,
            (_, ArchClass::MinusInfinity) => Ordering::Greater,
            (ArchClass::Level(a), ArchClass::Level(b)) => b.cmp(a),
        }
    }
}

impl PartialOrd for ArchClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ArchClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArchClass::MinusInfinity => write!(f, "-inf"),
            ArchClass::Level(l) => write!(f, "level {}", l + 1),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Domination {
    StrictlyDominated,
    Comparable,
    Dominates,
}

/// A coordinate axis: a level and a squarefree generator at that level.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Axis {
    pub level: usize,
    pub gen: u64,
}

/// Element of a finite lexicographic product; index 0 is the most significant level.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct LexExponent {
    pub c: Vec<Exponent>,
}

impl LexExponent {
    pub fn zero(rank: usize) -> Self {
        LexExponent { c: vec![Exponent::zero(); rank] }
    }

    pub fn scalar(x: Exponent) -> Self {
        LexExponent { c: vec![x] }
    }

    pub fn from_rats(v: &[Q]) -> Self {
        LexExponent { c: v.iter().map(|x| Exponent::rat(x.clone())).collect() }
    }

    /// Unit vector along an axis.
    pub fn unit(rank: usize, axis: Axis, k: &Q) -> Self {
        let mut e = Self::zero(rank);
        e.c[axis.level] = Exponent::term(axis.gen, k.clone());
        e
    }

    pub fn rank(&self) -> usize {
        self.c.len()
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    /// Pads with zero lower levels up to `rank`.
    pub fn promote(&self, rank: usize) -> Self {
        let mut c = self.c.clone();
        while c.len() < rank {
            c.push(Exponent::zero());
        }
        LexExponent { c }
    }

    pub fn add(&self, o: &LexExponent) -> LexExponent {
        let n = self.rank().max(o.rank());
        let a = self.promote(n);
        let b = o.promote(n);
        LexExponent { c: a.c.iter().zip(b.c.iter()).map(|(x, y)| x.add(y)).collect() }
    }

    pub fn sub(&self, o: &LexExponent) -> LexExponent {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> LexExponent {
        LexExponent { c: self.c.iter().map(|x| x.neg()).collect() }
    }

    pub fn scale(&self, k: &Q) -> LexExponent {
        LexExponent { c: self.c.iter().map(|x| x.scale(k)).collect() }
    }

    pub fn coord(&self, axis: Axis) -> Q {
        self.c.get(axis.level).map(|x| x.coef(axis.gen)).unwrap_or_else(Q::zero)
    }

    pub fn set_coord(&mut self, axis: Axis, v: Q) {
        self.c[axis.level].set_coef(axis.gen, v);
    }

    /// Nonzero axes of this exponent.
    pub fn axes(&self) -> Vec<Axis> {
        let mut v = Vec::new();
        for (level, x) in self.c.iter().enumerate() {
            for gen in x.gens() {
                v.push(Axis { level, gen });
            }
        }
        v
    }

    pub fn signum(&self) -> i32 {
        for x in &self.c {
            let s = x.signum();
            if s != 0 {
                return s;
            }
        }
        0
    }

    pub fn ord_arch(&self) -> ArchClass {
        match self.c.iter().position(|x| !x.is_zero()) {
            Some(l) => ArchClass::Level(l),
            None => ArchClass::MinusInfinity,
        }
    }

    /// Compares `g` with `h` by Archimedean class.
    pub fn domination(g: &LexExponent, h: &LexExponent) -> Result<Domination> {
        if g.is_zero() && h.is_zero() {
            return Err(HahnError::pre("domination of two zero exponents"));
        }
        Ok(match g.ord_arch().cmp(&h.ord_arch()) {
            Ordering::Less => Domination::StrictlyDominated,
            Ordering::Equal => Domination::Comparable,
            Ordering::Greater => Domination::Dominates,
        })
    }

    /// Splits `g` into its level-`sigma` component and the lower part.
    pub fn project_sigma(&self, sigma: usize) -> Result<(Exponent, LexExponent)> {
        if self.ord_arch() > ArchClass::Level(sigma) {
            return Err(HahnError::pre(format!(
                "projection at level {} of an exponent of class {}",
                sigma + 1,
                self.ord_arch()
            )));
        }
        let h = self.c.get(sigma).cloned().unwrap_or_default();
        let mut i = self.clone();
        if sigma < i.c.len() {
            i.c[sigma] = Exponent::zero();
        }
        Ok((h, i))
    }

    /// Embeds a level-`sigma` component back into the group.
    pub fn embed(h: &Exponent, sigma: usize, rank: usize) -> LexExponent {
        let mut e = LexExponent::zero(rank);
        e.c[sigma] = h.clone();
        e
    }

    pub fn to_f64_top(&self) -> f64 {
        self.c.first().map(|x| x.to_f64()).unwrap_or(0.0)
    }

    /// Parses a scalar or a bracketed vector.
    pub fn parse(s: &str) -> Result<LexExponent> {
        let chars: Vec<char> = s.chars().collect();
        let mut p = ScalarParser { s: &chars, i: 0 };
        let v = p.lex()?;
        p.ws();
        if p.i != chars.len() {
            return Err(p.err("unexpected trailing input in exponent"));
        }
        Ok(LexExponent { c: v })
    }
}

impl Ord for LexExponent {
    fn cmp(&self, other: &Self) -> Ordering {
        let n = self.rank().max(other.rank());
        for i in 0..n {
            let a = self.c.get(i).cloned().unwrap_or_default();
            let b = other.c.get(i).cloned().unwrap_or_default();
            let o = a.cmp(&b);
            if o != Ordering::Equal {
                return o;
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for LexExponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for LexExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.len() == 1 {
            write!(f, "{}", self.c[0])
        } else {
            let parts: Vec<String> = self.c.iter().map(|x| x.to_string()).collect();
            write!(f, "[{}]", parts.join(", "))
        }
    }
}

/// Exact comparison of two exponents of the same presentation.
pub fn exp_compare(x: &LexExponent, y: &LexExponent) -> Result<Ordering> {
    if x.rank() != y.rank() {
        return Err(HahnError::domain("exponents of different ranks compared"));
    }
    Ok(x.cmp(y))
}

/// An exponent group: per level either all represented quadratic reals or the span of
/// an explicit set of square-root generators.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupSpec {
    pub levels: Vec<Option<BTreeSet<u64>>>,
}

impl GroupSpec {
    pub fn real(rank: usize) -> Self {
        GroupSpec { levels: vec![None; rank] }
    }

    pub fn rationals(rank: usize) -> Self {
        GroupSpec { levels: vec![Some([1].into_iter().collect()); rank] }
    }

    pub fn rank(&self) -> usize {
        self.levels.len()
    }

    pub fn is_archimedean(&self) -> bool {
        self.levels.len() == 1
    }

    pub fn contains_axis(&self, a: Axis) -> bool {
        match self.levels.get(a.level) {
            Some(None) => true,
            Some(Some(g)) => g.contains(&a.gen),
            None => false,
        }
    }

    pub fn contains(&self, x: &LexExponent) -> bool {
        x.axes().into_iter().all(|a| self.contains_axis(a))
    }

    pub fn contains_at(&self, level: usize, x: &Exponent) -> bool {
        x.gens().all(|gen| self.contains_axis(Axis { level, gen }))
    }

    /// Parses `R`, `Q`, or per-level lists like `1,2;R` separated by `;`.
    pub fn parse(s: &str) -> Result<GroupSpec> {
        let mut levels = Vec::new();
        for part in s.split(';') {
            let part = part.trim();
            if part.eq_ignore_ascii_case("R") {
                levels.push(None);
            } else if part.eq_ignore_ascii_case("Q") {
                levels.push(Some([1].into_iter().collect()));
            } else {
                let mut set = BTreeSet::new();
                for g in part.split(',') {
                    let n: u64 = g
                        .trim()
                        .parse()
                        .map_err(|_| HahnError::domain(format!("bad group generator '{g}'")))?;
                    let (_, f) = squarefree_split(n);
                    set.insert(f);
                }
                levels.push(Some(set));
            }
        }
        Ok(GroupSpec { levels })
    }

    /// Same group with the rank adjusted by repeating the last level description.
    pub fn with_rank(&self, rank: usize) -> GroupSpec {
        let mut levels = self.levels.clone();
        let fill = levels.last().cloned().unwrap_or(None);
        while levels.len() < rank {
            levels.push(fill.clone());
        }
        levels.truncate(rank.max(1));
        GroupSpec { levels }
    }
}

pub fn abs_q(x: &Q) -> Q {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::qf;

    fn e(s: &str) -> Exponent {
        Exponent::parse(s).unwrap()
    }

    #[test]
    fn exact_sign_examples() {
        assert_eq!(e("1/2*sqrt(2)").cmp(&e("3/4")), Ordering::Less);
        assert_eq!(e("-sqrt(2)").cmp(&e("-3/2")), Ordering::Greater);
        assert_eq!(e("sqrt(2) + sqrt(3)").cmp(&e("sqrt(10)")), Ordering::Less);
        assert_eq!(e("sqrt(2) + sqrt(3) - sqrt(6)").signum(), 1);
        assert_eq!(e("2*sqrt(8)"), Exponent::term(2, q(4)));
    }

    #[test]
    fn print_parse_round_trip() {
        for s in ["-3/4", "-1/2*sqrt(2)", "1 - sqrt(3)", "0", "sqrt(5)"] {
            assert_eq!(e(s).to_string(), s);
        }
    }

    #[test]
    fn arch_and_projection() {
        let g = LexExponent::from_rats(&[q(0), qf(-1, 2)]);
        assert_eq!(g.ord_arch(), ArchClass::Level(1));
        assert_eq!(LexExponent::zero(2).ord_arch(), ArchClass::MinusInfinity);
        let a = LexExponent::from_rats(&[q(0), q(-1)]);
        let b = LexExponent::from_rats(&[q(-1), q(0)]);
        assert_eq!(LexExponent::domination(&a, &b).unwrap(), Domination::StrictlyDominated);
        assert_eq!(LexExponent::domination(&b, &a).unwrap(), Domination::Dominates);
        assert!(LexExponent::domination(&LexExponent::zero(2), &LexExponent::zero(2)).is_err());
        let g = LexExponent::from_rats(&[q(-1), q(-2)]);
        let (h, i) = g.project_sigma(0).unwrap();
        assert_eq!(h, Exponent::int(-1));
        assert_eq!(i, LexExponent::from_rats(&[q(0), q(-2)]));
        assert_eq!(LexExponent::embed(&h, 0, 2).add(&i), g);
        assert!(b.project_sigma(1).is_err());
    }
}
