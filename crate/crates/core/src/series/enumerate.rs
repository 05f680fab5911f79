//! Increasing enumeration of the support of a closed series.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_traits::Zero;

use crate::error::{HahnError, Result};
use crate::exponents::LexExponent;
use crate::rat::Q;
use crate::series::block::Block;
use crate::series::closed::ClosedSeries;
use crate::supcomp::Cut;

/// Upper bound on grid points visited while looking for the next nonzero term.
pub const POP_LIMIT: usize = 200_000;

#[derive(PartialEq, Eq, PartialOrd, Ord)]
struct Entry {
    point: LexExponent,
    block: usize,
    idx: Vec<i64>,
    last: usize,
}

/// Yields `(exponent, coefficient)` pairs of a closed series in increasing exponent order,
/// summing coincident points across blocks and skipping cancelled ones.
pub struct TermStream {
    blocks: Vec<Block>,
    heap: BinaryHeap<Reverse<Entry>>,
}

impl TermStream {
    pub fn new(s: &ClosedSeries) -> Self {
        let mut heap = BinaryHeap::new();
        for (i, b) in s.blocks.iter().enumerate() {
            let idx = b.start();
            heap.push(Reverse(Entry { point: b.point(&idx), block: i, idx, last: 0 }));
        }
        TermStream { blocks: s.blocks.clone(), heap }
    }

    fn push_successors(&mut self, e: &Entry) {
        let b = &self.blocks[e.block];
        for j in e.last..b.dim() {
            let mut idx = e.idx.clone();
            idx[j] += 1;
            self.heap.push(Reverse(Entry { point: b.point(&idx), block: e.block, idx, last: j }));
        }
    }

    /// Exponent of the next grid point without consuming it.
    pub fn peek_point(&self) -> Option<&LexExponent> {
        self.heap.peek().map(|Reverse(e)| &e.point)
    }

    pub fn next_term(&mut self) -> Result<Option<(LexExponent, Q)>> {
        let mut pops = 0usize;
        loop {
            let Some(Reverse(first)) = self.heap.pop() else { return Ok(None) };
            let mut c = self.blocks[first.block].coef(&first.idx);
            self.push_successors(&first);
            pops += 1;
            while self.heap.peek().is_some_and(|Reverse(e)| e.point == first.point) {
                let Reverse(e) = self.heap.pop().expect("peeked");
                c += self.blocks[e.block].coef(&e.idx);
                self.push_successors(&e);
                pops += 1;
            }
            if !c.is_zero() {
                return Ok(Some((first.point, c)));
            }
            if pops > POP_LIMIT {
                return Err(HahnError::closure("no nonzero term found within the enumeration limit"));
            }
        }
    }

    /// All terms with exponent strictly below `bound`, at most `max` of them.
    pub fn take_below(&mut self, bound: Option<&Cut>, max: usize) -> Result<Vec<(LexExponent, Q)>> {
        let mut out = Vec::new();
        while out.len() < max {
            match (self.peek_point(), bound) {
                (None, _) => break,
                (Some(p), Some(b)) if Cut::point(p) >= *b => break,
                _ => {}
            }
            match self.next_term()? {
                Some(t) => out.push(t),
                None => break,
            }
        }
        Ok(out)
    }
}

/// The first accumulation point of the support; every term below it is reached after
/// finitely many steps of [`TermStream`].
pub fn exact_bound(s: &ClosedSeries) -> Option<Cut> {
    s.blocks.iter().filter_map(|b| b.first_limit()).min()
}

/// Least element of the support.
pub fn natural_valuation(s: &ClosedSeries) -> Result<LexExponent> {
    leading_term(s).map(|(x, _)| x)
}

/// Least support element together with its coefficient.
pub fn leading_term(s: &ClosedSeries) -> Result<(LexExponent, Q)> {
    if s.is_zero() {
        return Err(HahnError::pre("the zero series has no valuation"));
    }
    TermStream::new(s)
        .next_term()?
        .ok_or_else(|| HahnError::closure("nonzero canonical series produced no terms"))
}

/// The first `n` terms of the support in increasing order.
pub fn prefix(s: &ClosedSeries, n: usize) -> Result<Vec<(LexExponent, Q)>> {
    let mut ts = TermStream::new(s);
    let mut out = Vec::new();
    while out.len() < n {
        match ts.next_term()? {
            Some(t) => out.push(t),
            None => break,
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::Axis;
    use crate::rat::{q, qf};
    use crate::series::seq::Seq;
    use crate::series::tensor::Tensor;

    #[test]
    fn harmonic_ladder_plus_monomials() {
        let l = Block::ladder(
            LexExponent::from_rats(&[q(-1)]),
            Axis { level: 0, gen: 1 },
            Seq::Harm { lim: q(0), a: q(1) },
            1,
            Tensor::constant(1, q(1)),
        );
        let s = ClosedSeries::from_blocks(
            1,
            vec![l, Block::monomial(LexExponent::from_rats(&[qf(-3, 2)]), q(-1)), Block::monomial(LexExponent::zero(1), q(1))],
        )
        .unwrap();
        // -2 and -3/2 are the first points; the monomial at -3/2 cancels the ladder there.
        let p = prefix(&s, 3).unwrap();
        assert_eq!(p[0], (LexExponent::from_rats(&[q(-2)]), q(1)));
        assert_eq!(p[1], (LexExponent::from_rats(&[qf(-4, 3)]), q(1)));
        assert_eq!(natural_valuation(&s).unwrap(), LexExponent::from_rats(&[q(-2)]));
        assert_eq!(exact_bound(&s), Some(Cut::below(vec![crate::exponents::Exponent::int(-1)])));
        assert!(natural_valuation(&ClosedSeries::zero(1)).is_err());
    }
}
