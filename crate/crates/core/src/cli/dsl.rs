//! The series expression language.
//!
//! ```text
//! expr  := ['-'] term (('+' | '-') term)*
//! term  := rational? ('*'? atom)*
//! atom  := 't^(' exp ')' | ladder(...) | grid(...) | shift(exp, expr) | '(' expr ')'
//! exp   := scalar | '[' scalar (',' scalar)* ']' | scalar (',' scalar)+
//! ```
//!
//! Ladders take `limit=` (or `base=`), `step=harm(a)|geo(a, r)|arith(a)|pell(m, d)`,
//! optional `start=`, `level=`, `gen=`, and `coef=const(c)|stream(P: r, w, j, c | ...)`.
//! Grids take `base=`, one `factor=(level, gen, step, start[, anchor])` per axis and
//! `coef=const(c)|tensor(P1, ..., Pk: r1, w1, j1, ..., rk, wk, jk, c | ...)`.

use num_traits::{One, Zero};

use crate::error::{HahnError, Result};
use crate::exponents::{Axis, Exponent, LexExponent, ScalarParser};
use crate::rat::{to_i64, Q};
use crate::series::block::{Block, Factor};
use crate::series::closed::ClosedSeries;
use crate::series::seq::Seq;
use crate::series::tensor::{Key, Tensor};

/// Parses an expression; the rank is the largest one mentioned.
pub fn parse_series(text: &str) -> Result<ClosedSeries> {
    parse_series_rank(text, 1)
}

/// Parses an expression into a group of rank at least `rank`.
pub fn parse_series_rank(text: &str, rank: usize) -> Result<ClosedSeries> {
    let chars: Vec<char> = text.chars().collect();
    let mut p = Dsl { sp: ScalarParser { s: &chars, i: 0 }, text: &chars };
    let s = p.expr()?;
    if p.sp.peek().is_some() {
        return Err(p.err("unexpected trailing input"));
    }
    let s = promote(&s, rank)?;
    if !s.is_nonpositive() {
        return Err(p.err_at(0, "positive exponent outside K((G^{<=0}))"));
    }
    Ok(s)
}

/// The same series over a group of rank at least `rank`.
pub fn promote(s: &ClosedSeries, rank: usize) -> Result<ClosedSeries> {
    if s.rank >= rank {
        return Ok(s.clone());
    }
    ClosedSeries::from_blocks(rank, s.blocks.clone())
}

fn align(a: &ClosedSeries, b: &ClosedSeries) -> Result<(ClosedSeries, ClosedSeries)> {
    let r = a.rank.max(b.rank);
    Ok((promote(a, r)?, promote(b, r)?))
}

struct Dsl<'a> {
    sp: ScalarParser<'a>,
    text: &'a [char],
}

enum StepSpec {
    Harm(Q),
    Geo(Q, Q),
    Arith(Q),
    Pell(Q, u64),
}

enum CoefSpec {
    Const(Q),
    Terms { periods: Vec<u32>, terms: Vec<(Vec<Key>, Q)> },
}

impl Dsl<'_> {
    fn err_at(&self, i: usize, msg: &str) -> HahnError {
        let upto = &self.text[..i.min(self.text.len())];
        let line = upto.iter().filter(|&&c| c == '\n').count() + 1;
        let column = upto.iter().rev().take_while(|&&c| c != '\n').count() + 1;
        HahnError::Parse { line, column, message: msg.to_string() }
    }

    fn err(&self, msg: &str) -> HahnError {
        self.err_at(self.sp.i, msg)
    }

    fn relocate(&self, e: HahnError) -> HahnError {
        match e {
            HahnError::Parse { message, .. } => self.err(&message),
            other => self.err(&other.to_string()),
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.sp.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{c}'")))
        }
    }

    fn ident(&mut self) -> String {
        self.sp.ws();
        let start = self.sp.i;
        while matches!(self.text.get(self.sp.i), Some(c) if c.is_ascii_alphanumeric() || *c == '_') {
            self.sp.i += 1;
        }
        self.text[start..self.sp.i].iter().collect()
    }

    fn signed_rational(&mut self) -> Result<Q> {
        let neg = self.sp.eat('-');
        let r = self.sp.rational().map_err(|e| self.relocate(e))?;
        Ok(if neg { -r } else { r })
    }

    fn int(&mut self) -> Result<i64> {
        let r = self.signed_rational()?;
        to_i64(&r).ok_or_else(|| self.err("expected an integer"))
    }

    fn scalar(&mut self) -> Result<Exponent> {
        self.sp.scalar().map_err(|e| self.relocate(e))
    }

    /// An exponent; `allow_bare` accepts `a, b` without brackets.
    fn exp(&mut self, allow_bare: bool) -> Result<LexExponent> {
        if self.sp.peek() == Some('[') {
            let v = self.sp.lex().map_err(|e| self.relocate(e))?;
            return Ok(LexExponent { c: v });
        }
        let mut v = vec![self.scalar()?];
        while allow_bare && self.sp.eat(',') {
            v.push(self.scalar()?);
        }
        Ok(LexExponent { c: v })
    }

    fn expr(&mut self) -> Result<ClosedSeries> {
        let neg = self.sp.eat('-');
        let mut acc = self.term()?;
        if neg {
            acc = acc.neg();
        }
        loop {
            if self.sp.eat('+') {
                let t = self.term()?;
                let (a, b) = align(&acc, &t)?;
                acc = a.add(&b)?;
            } else if self.sp.eat('-') {
                let t = self.term()?;
                let (a, b) = align(&acc, &t)?;
                acc = a.sub(&b)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn atom_next(&mut self) -> bool {
        let Some(c) = self.sp.peek() else { return false };
        if c == '(' {
            return true;
        }
        let rest: String = self.text[self.sp.i..].iter().take(7).collect();
        ["t^", "ladder", "grid", "shift"].iter().any(|k| rest.starts_with(k))
    }

    fn term(&mut self) -> Result<ClosedSeries> {
        let mut coef = Q::one();
        let mut have = false;
        if matches!(self.sp.peek(), Some(c) if c.is_ascii_digit()) {
            coef = self.sp.rational().map_err(|e| self.relocate(e))?;
            have = true;
        }
        let mut acc: Option<ClosedSeries> = None;
        loop {
            let star = self.sp.eat('*');
            if !self.atom_next() {
                if star {
                    return Err(self.err("expected a factor after '*'"));
                }
                break;
            }
            let at = self.sp.i;
            let a = self.atom()?;
            acc = Some(match acc {
                None => a,
                Some(x) => {
                    let (x, a) = align(&x, &a)?;
                    x.mul_closed(&a)?.ok_or_else(|| self.err_at(at, "product leaves the closed family"))?
                }
            });
        }
        match acc {
            Some(s) => Ok(s.scale(&coef)),
            None if have => Ok(ClosedSeries::constant(1, coef)),
            None => Err(self.err("expected a term")),
        }
    }

    fn atom(&mut self) -> Result<ClosedSeries> {
        let at = self.sp.i;
        if self.sp.eat('(') {
            let e = self.expr()?;
            self.expect(')')?;
            return Ok(e);
        }
        if self.sp.keyword("t^") {
            self.expect('(')?;
            let x = self.exp(true)?;
            self.expect(')')?;
            if x > LexExponent::zero(x.rank()) {
                return Err(self.err_at(at, "positive exponent outside K((G^{<=0}))"));
            }
            return Ok(ClosedSeries::monomial(x, Q::one()));
        }
        if self.sp.keyword("shift") {
            self.expect('(')?;
            let x = self.exp(false)?;
            self.expect(',')?;
            let e = self.expr()?;
            self.expect(')')?;
            let r = e.rank.max(x.rank());
            return promote(&e, r)?.shift(&x.promote(r));
        }
        if self.sp.keyword("ladder") {
            return self.ladder();
        }
        if self.sp.keyword("grid") {
            return self.grid();
        }
        Err(self.err("expected t^(..), ladder(..), grid(..), shift(..) or '('"))
    }

    fn step(&mut self) -> Result<StepSpec> {
        self.sp.ws();
        let at = self.sp.i;
        let name = self.ident();
        self.expect('(')?;
        let s = match name.as_str() {
            "harm" => StepSpec::Harm(self.signed_rational()?),
            "arith" => StepSpec::Arith(self.signed_rational()?),
            "geo" => {
                let a = self.signed_rational()?;
                self.expect(',')?;
                StepSpec::Geo(a, self.signed_rational()?)
            }
            "pell" => {
                let m = self.signed_rational()?;
                self.expect(',')?;
                let d = self.int()?;
                if d <= 1 || is_square(d as u64) {
                    return Err(self.err("pell needs a non-square d > 1"));
                }
                StepSpec::Pell(m, d as u64)
            }
            _ => return Err(self.err_at(at, &format!("unknown step '{name}'"))),
        };
        self.expect(')')?;
        match &s {
            StepSpec::Harm(a) | StepSpec::Arith(a) | StepSpec::Pell(a, _) if *a <= Q::zero() => {
                Err(self.err("step scale must be positive"))
            }
            StepSpec::Geo(a, r) if *a <= Q::zero() || *r <= Q::zero() || *r >= Q::one() => {
                Err(self.err("geo needs a > 0 and 0 < r < 1"))
            }
            _ => Ok(s),
        }
    }

    fn coef(&mut self) -> Result<CoefSpec> {
        let name = self.ident();
        self.expect('(')?;
        if name == "const" {
            let c = self.signed_rational()?;
            self.expect(')')?;
            return Ok(CoefSpec::Const(c));
        }
        if name != "stream" && name != "tensor" {
            return Err(self.err(&format!("unknown coefficient form '{name}'")));
        }
        let mut periods = vec![self.int()?];
        while self.sp.eat(',') {
            periods.push(self.int()?);
        }
        if periods.iter().any(|&p| p <= 0 || p > u32::MAX as i64) {
            return Err(self.err("periods must be positive"));
        }
        let periods: Vec<u32> = periods.into_iter().map(|p| p as u32).collect();
        self.expect(':')?;
        let mut terms = Vec::new();
        loop {
            let mut key = Vec::new();
            for p in &periods {
                let r = self.int()?;
                self.expect(',')?;
                let w = self.signed_rational()?;
                self.expect(',')?;
                let j = self.int()?;
                self.expect(',')?;
                if r < 0 || r >= *p as i64 || j < 0 || w.is_zero() {
                    return Err(self.err("stream keys need 0 <= r < P, j >= 0 and w != 0"));
                }
                key.push(Key { r: r as u32, w, j: j as u32 });
            }
            terms.push((key, self.signed_rational()?));
            if !self.sp.eat('|') {
                break;
            }
        }
        self.expect(')')?;
        Ok(CoefSpec::Terms { periods, terms })
    }

    fn tensor(&self, spec: CoefSpec, dim: usize, at: usize) -> Result<Tensor> {
        match spec {
            CoefSpec::Const(c) => Ok(Tensor::constant(dim, c)),
            CoefSpec::Terms { periods, terms } => {
                if periods.len() != dim {
                    return Err(self.err_at(at, "coefficient arity does not match the number of axes"));
                }
                let mut t = Tensor { periods, terms: Default::default() };
                for (k, c) in terms {
                    t.add_term(k, c);
                }
                Ok(t)
            }
        }
    }

    fn build_seq(step: StepSpec, anchor: Q) -> Seq {
        match step {
            StepSpec::Harm(a) => Seq::harm(anchor, a),
            StepSpec::Geo(a, r) => Seq::Geo { lim: anchor, a, r },
            StepSpec::Arith(a) => Seq::Arith { off: anchor, a },
            StepSpec::Pell(m, d) => Seq::Pell { off: anchor, m, d },
        }
    }

    fn start_for(&self, seq: &Seq, start: Option<i64>) -> Result<i64> {
        let n0 = start.unwrap_or_else(|| seq.min_index().unwrap_or(0));
        if !seq.valid(n0) {
            return Err(self.err("start index below the first valid index"));
        }
        Ok(n0)
    }

    fn ladder(&mut self) -> Result<ClosedSeries> {
        let at = self.sp.i;
        self.expect('(')?;
        let (mut base, mut step, mut start, mut level, mut gen, mut coef) = (None, None, None, 1i64, 1i64, None);
        loop {
            let key = self.ident();
            self.expect('=')?;
            match key.as_str() {
                "limit" | "base" => base = Some(self.exp(false)?),
                "step" => step = Some(self.step()?),
                "start" => start = Some(self.int()?),
                "level" => level = self.int()?,
                "gen" => gen = self.int()?,
                "coef" => coef = Some(self.coef()?),
                _ => return Err(self.err(&format!("unknown ladder key '{key}'"))),
            }
            if !self.sp.eat(';') {
                break;
            }
        }
        self.expect(')')?;
        if level < 1 || gen < 1 {
            return Err(self.err_at(at, "level and gen must be positive"));
        }
        if !is_squarefree(gen as u64) {
            return Err(self.err_at(at, "gen must be squarefree"));
        }
        let step = step.ok_or_else(|| self.err_at(at, "ladder needs step="))?;
        let coef = coef.unwrap_or(CoefSpec::Const(Q::one()));
        let mut base = base.unwrap_or_else(|| LexExponent::zero(1));
        let rank = base.rank().max(level as usize);
        base = base.promote(rank);
        let axis = Axis { level: level as usize - 1, gen: gen as u64 };
        let a = base.coord(axis);
        base.set_coord(axis, Q::zero());
        let seq = Self::build_seq(step, a);
        let n0 = self.start_for(&seq, start)?;
        let t = self.tensor(coef, 1, at)?;
        ClosedSeries::from_blocks(rank, vec![Block::ladder(base, axis, seq, n0, t)]).map_err(|e| self.relocate(e))
    }

    fn grid(&mut self) -> Result<ClosedSeries> {
        let at = self.sp.i;
        self.expect('(')?;
        let mut base = None;
        let mut factors: Vec<(Axis, StepSpec, Option<i64>, Option<Q>)> = Vec::new();
        let mut coef = None;
        loop {
            let key = self.ident();
            self.expect('=')?;
            match key.as_str() {
                "base" | "limit" => base = Some(self.exp(false)?),
                "factor" => {
                    self.expect('(')?;
                    let level = self.int()?;
                    self.expect(',')?;
                    let gen = self.int()?;
                    self.expect(',')?;
                    let step = self.step()?;
                    let mut start = None;
                    let mut anchor = None;
                    if self.sp.eat(',') {
                        start = Some(self.int()?);
                        if self.sp.eat(',') {
                            anchor = Some(self.signed_rational()?);
                        }
                    }
                    self.expect(')')?;
                    if level < 1 || gen < 1 || !is_squarefree(gen as u64) {
                        return Err(self.err("factor needs a positive level and a squarefree gen"));
                    }
                    factors.push((Axis { level: level as usize - 1, gen: gen as u64 }, step, start, anchor));
                }
                "coef" => coef = Some(self.coef()?),
                _ => return Err(self.err(&format!("unknown grid key '{key}'"))),
            }
            if !self.sp.eat(';') {
                break;
            }
        }
        self.expect(')')?;
        if factors.is_empty() {
            return Err(self.err_at(at, "grid needs at least one factor="));
        }
        let rank = factors.iter().map(|f| f.0.level + 1).max().unwrap_or(1);
        let mut base = base.unwrap_or_else(|| LexExponent::zero(1));
        let rank = rank.max(base.rank());
        base = base.promote(rank);
        let dim = factors.len();
        let mut built = Vec::new();
        let mut seen: Vec<Axis> = Vec::new();
        for (axis, step, start, anchor) in factors {
            let a = match anchor {
                Some(a) => a,
                None if !seen.contains(&axis) => {
                    let a = base.coord(axis);
                    base.set_coord(axis, Q::zero());
                    a
                }
                None => Q::zero(),
            };
            seen.push(axis);
            let seq = Self::build_seq(step, a);
            let n0 = self.start_for(&seq, start)?;
            built.push(Factor { axis, seq, n0 });
        }
        let t = self.tensor(coef.unwrap_or(CoefSpec::Const(Q::one())), dim, at)?;
        ClosedSeries::from_blocks(rank, vec![Block { base, factors: built, tensor: t }]).map_err(|e| self.relocate(e))
    }
}

fn is_square(n: u64) -> bool {
    let r = (n as f64).sqrt().round() as u64;
    (r.saturating_sub(1)..=r + 1).any(|k| k * k == n)
}

fn is_squarefree(n: u64) -> bool {
    let mut k = 2u64;
    while k * k <= n {
        if n % (k * k) == 0 {
            return false;
        }
        k += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{q, qf};

    #[test]
    fn parses_ladder_plus_one() {
        let s = parse_series("1 + ladder(limit=0; step=harm(1); coef=const(1))").unwrap();
        assert!(!s.is_finite());
        assert_eq!(s.coefficient_at(&LexExponent::from_rats(&[qf(-1, 2)])), q(1));
        assert_eq!(s.coefficient_at(&LexExponent::zero(1)), q(1));
    }

    #[test]
    fn irrational_monomial() {
        let s = parse_series("2*t^(-1/2*sqrt(2))").unwrap();
        let x = LexExponent::scalar(Exponent::term(2, qf(-1, 2)));
        assert_eq!(s, ClosedSeries::monomial(x, q(2)));
    }

    #[test]
    fn positive_exponent_rejected() {
        assert!(matches!(parse_series("t^(1)"), Err(HahnError::Parse { .. })));
    }

    #[test]
    fn error_positions() {
        match parse_series("1 +\n  ladder(step=foo(1))") {
            Err(HahnError::Parse { line, column, .. }) => assert_eq!((line, column), (2, 15)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn lex_vectors_and_shift() {
        let a = parse_series("t^([0, -1]) + t^(-1, 0)").unwrap();
        assert_eq!(a.rank, 2);
        let b = parse_series("shift([0, -1], 1 + t^([-1, 0]))").unwrap();
        assert_eq!(b.coefficient_at(&LexExponent::from_rats(&[q(-1), q(-1)])), q(1));
    }

    #[test]
    fn products_and_subtraction() {
        let a = parse_series("(1 + t^(-1))*(1 - t^(-1))").unwrap();
        let b = parse_series("1 - t^(-2)").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn printed_forms_round_trip() {
        for text in [
            "1 + ladder(limit=-1; step=harm(1); coef=const(1))",
            "ladder(limit=0; step=geo(1, 1/2); coef=stream(2: 0, 1, 0, 1 | 1, -1, 1, 3))",
            "ladder(base=[-1, 0]; step=arith(1); start=1; level=2; coef=const(-1))",
            "ladder(limit=0; step=pell(1, 2))",
            "ladder(limit=0; step=harm(1)) * ladder(limit=0; step=harm(1); gen=2)",
            "grid(base=[-1, 0]; factor=(1, 1, harm(1), 1); factor=(2, 1, arith(1), 1); coef=tensor(1, 2: 0, 1, 0, 0, -1, 0, 1))",
        ] {
            let s = parse_series(text).unwrap_or_else(|e| panic!("{text}: {e}"));
            let back = parse_series_rank(&s.to_string(), s.rank).unwrap_or_else(|e| panic!("{s}: {e}"));
            assert_eq!(back, s, "{text} printed as {s}");
        }
    }
}
