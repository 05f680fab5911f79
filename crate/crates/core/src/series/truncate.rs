//! Truncations `b_{<y}`, `b_{<=y}`, `b_{>=y}`, `b_{>y}` and splitting at arbitrary cuts.

use crate::error::{HahnError, Result};
use crate::exponents::LexExponent;
use crate::series::block::{Block, STRIP_LIMIT};
use crate::series::closed::ClosedSeries;
use crate::series::seq::Seq;
use crate::supcomp::Cut;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TruncMode {
    Less,
    LessEq,
    GreaterEq,
    Greater,
}

impl TruncMode {
    pub fn parse(s: &str) -> Option<TruncMode> {
        match s {
            "<" | "lt" => Some(TruncMode::Less),
            "<=" | "le" => Some(TruncMode::LessEq),
            ">=" | "ge" => Some(TruncMode::GreaterEq),
            ">" | "gt" => Some(TruncMode::Greater),
            _ => None,
        }
    }
}

/// Support filtered by comparison with `y`.
pub fn truncate(b: &ClosedSeries, y: &LexExponent, mode: TruncMode) -> Result<ClosedSeries> {
    let y = y.promote(b.rank);
    let (c, keep_lower) = match mode {
        TruncMode::Less => (Cut::below(y.c.clone()), true),
        TruncMode::GreaterEq => (Cut::below(y.c.clone()), false),
        TruncMode::LessEq => (Cut::above(y.c.clone()), true),
        TruncMode::Greater => (Cut::above(y.c.clone()), false),
    };
    let (lo, hi) = split(b, &c)?;
    Ok(if keep_lower { lo } else { hi })
}

/// Parts of `b` with support below and above the cut `c`.
pub fn split(b: &ClosedSeries, c: &Cut) -> Result<(ClosedSeries, ClosedSeries)> {
    let mut lo = Vec::new();
    let mut hi = Vec::new();
    for blk in &b.blocks {
        split_block(blk, c, &mut lo, &mut hi)?;
    }
    Ok((ClosedSeries::from_blocks(b.rank, lo)?, ClosedSeries::from_blocks(b.rank, hi)?))
}

fn below(b: &Block, idx: &[i64], c: &Cut) -> bool {
    Cut::point(&b.point(idx)) < *c
}

fn budget(n: i64) -> Result<()> {
    if n > STRIP_LIMIT {
        Err(HahnError::closure("truncation needs too many pieces"))
    } else {
        Ok(())
    }
}

fn search(start: i64, pred: impl FnMut(i64) -> bool) -> Result<i64> {
    Seq::first_index(start, i64::MAX / 4, pred)
        .ok_or_else(|| HahnError::closure("truncation index search failed"))
}

/// Splits one block at `c`, pushing the pieces with points `< c` to `lo` and the rest to `hi`.
pub fn split_block(b: &Block, c: &Cut, lo: &mut Vec<Block>, hi: &mut Vec<Block>) -> Result<()> {
    if b.limit_cut() <= *c {
        lo.push(b.clone());
        return Ok(());
    }
    if !below(b, &b.start(), c) {
        hi.push(b.clone());
        return Ok(());
    }
    match b.dim() {
        0 => unreachable!("a monomial lies on one side of every cut"),
        1 => {
            let n0 = b.factors[0].n0;
            let n = search(n0, |n| !below(b, &[n], c))?;
            budget(n - n0)?;
            for i in n0..n {
                lo.push(b.slice(0, i));
            }
            let mut up = b.clone();
            up.factors[0].n0 = n;
            hi.push(up);
            Ok(())
        }
        2 => split_grid(b, c, lo, hi),
        _ => Err(HahnError::closure("truncation of blocks of dimension three or more through their interior")),
    }
}

fn split_grid(b: &Block, c: &Cut, lo: &mut Vec<Block>, hi: &mut Vec<Block>) -> Result<()> {
    let (r0, c0) = (b.factors[0].n0, b.factors[1].n0);
    // First row (index on factor 0) reaching past the cut, and likewise for columns.
    let r = search(r0, |n| b.partial_limit(&[n, c0], 1) > *c)?;
    let col = search(c0, |m| b.partial_limit(&[r0, m], 0) > *c)?;
    budget((r - r0) + (col - c0))?;
    for n in r0..r {
        lo.push(b.slice(0, n));
    }
    for m in c0..col {
        let mut s = b.slice(1, m);
        s.factors[0].n0 = r;
        lo.push(s);
    }
    // Within the quadrant every row and column crosses the cut.
    let g = search(r, |n| !below(b, &[n, col], c))?;
    budget(g - r)?;
    let mut cells = 0i64;
    for n in r..g {
        let f = search(col, |m| !below(b, &[n, m], c))?;
        cells += f - col;
        budget(cells)?;
        for m in col..f {
            let mut p = Block::monomial(b.point(&[n, m]), b.coef(&[n, m]));
            p.base = b.point(&[n, m]);
            lo.push(p);
        }
        let mut row = b.slice(0, n);
        row.factors[0].n0 = f;
        hi.push(row);
    }
    let mut up = b.clone();
    up.factors[0].n0 = g;
    up.factors[1].n0 = col;
    hi.push(up);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::Axis;
    use crate::ordinal::Ordinal;
    use crate::rat::{q, qf, Q};
    use crate::series::enumerate::prefix;
    use crate::series::tensor::Tensor;

    fn harm_ladder(base: LexExponent, axis: Axis, a: Q) -> Block {
        Block::ladder(base, axis, Seq::Harm { lim: q(0), a }, 1, Tensor::constant(1, q(1)))
    }

    #[test]
    fn ladder_truncations() {
        let top = Axis { level: 0, gen: 1 };
        let l = ClosedSeries::from_blocks(1, vec![harm_ladder(LexExponent::zero(1), top, q(1))]).unwrap();
        let one = ClosedSeries::one(1);
        let s = l.add(&one).unwrap();
        assert_eq!(truncate(&s, &LexExponent::zero(1), TruncMode::Less).unwrap(), l);
        let le = truncate(&l, &LexExponent::from_rats(&[q(-1)]), TruncMode::LessEq).unwrap();
        assert_eq!(le, ClosedSeries::monomial(LexExponent::from_rats(&[q(-1)]), q(1)));
        let z = ClosedSeries::zero(1);
        assert!(truncate(&z, &LexExponent::zero(1), TruncMode::Greater).unwrap().is_zero());
    }

    #[test]
    fn grid_split_reassembles() {
        let a1 = Axis { level: 0, gen: 1 };
        let a2 = Axis { level: 0, gen: 2 };
        let x = harm_ladder(LexExponent::zero(1), a1, q(1));
        let y = harm_ladder(LexExponent::zero(1), a2, qf(1, 2));
        let b = crate::series::closed::block_product(&x, &y).unwrap();
        let s = ClosedSeries::from_blocks(1, vec![b]).unwrap();
        for y in [qf(-1, 3), qf(-3, 4), q(-1)] {
            let y = LexExponent::from_rats(&[y]);
            let lo = truncate(&s, &y, TruncMode::Less).unwrap();
            let hi = truncate(&s, &y, TruncMode::GreaterEq).unwrap();
            assert_eq!(lo.add(&hi).unwrap(), s);
            assert_eq!(lo.order_type().ord_add(&hi.order_type()), s.order_type());
            for (p, _) in prefix(&lo, 50).unwrap() {
                assert!(p < y);
            }
            for (p, _) in prefix(&hi, 50).unwrap() {
                assert!(p >= y);
            }
        }
        assert_eq!(s.order_type(), Ordinal::omega_nat(2, 1));
    }
}
