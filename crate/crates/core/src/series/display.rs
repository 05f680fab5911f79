//! Textual form of closed series in the expression language.

use std::fmt;

use num_traits::{One, Zero};

use crate::exponents::LexExponent;
use crate::rat::{fmt_q, Q};
use crate::series::block::Block;
use crate::series::closed::ClosedSeries;
use crate::series::seq::Seq;
use crate::series::tensor::Tensor;

/// The limit or offset of a sequence.
pub fn anchor(s: &Seq) -> Q {
    match s {
        Seq::Harm { lim, .. } | Seq::Geo { lim, .. } => lim.clone(),
        Seq::Arith { off, .. } | Seq::Pell { off, .. } => off.clone(),
    }
}

/// Whether factor `i` is the first of the block on its axis.
pub fn first_on_axis(b: &Block, i: usize) -> bool {
    b.factors[..i].iter().all(|f| f.axis != b.factors[i].axis)
}

/// Base point with the anchor of the first factor on each axis added in.
fn anchored_base(b: &Block) -> LexExponent {
    let mut x = b.base.clone();
    for (i, f) in b.factors.iter().enumerate() {
        if first_on_axis(b, i) {
            x.set_coord(f.axis, x.coord(f.axis) + anchor(&f.seq));
        }
    }
    x
}

fn step_text(s: &Seq) -> String {
    match s {
        Seq::Harm { a, .. } => format!("harm({})", fmt_q(a)),
        Seq::Geo { a, r, .. } => format!("geo({}, {})", fmt_q(a), fmt_q(r)),
        Seq::Arith { a, .. } => format!("arith({})", fmt_q(a)),
        Seq::Pell { m, d, .. } => format!("pell({}, {d})", fmt_q(m)),
    }
}

fn default_start(s: &Seq) -> i64 {
    s.min_index().unwrap_or(0)
}

fn tensor_text(t: &Tensor) -> String {
    if t.periods.iter().all(|p| *p == 1) && t.terms.len() == 1 {
        let (k, c) = t.terms.iter().next().expect("one term");
        if k.iter().all(|k| k.w.is_one() && k.j == 0) {
            return format!("const({})", fmt_q(c));
        }
    }
    let periods: Vec<String> = t.periods.iter().map(|p| p.to_string()).collect();
    let terms: Vec<String> = t
        .terms
        .iter()
        .map(|(key, c)| {
            let mut parts: Vec<String> =
                key.iter().map(|k| format!("{}, {}, {}", k.r, fmt_q(&k.w), k.j)).collect();
            parts.push(fmt_q(c));
            parts.join(", ")
        })
        .collect();
    let name = if t.dim() == 1 { "stream" } else { "tensor" };
    format!("{name}({}: {})", periods.join(", "), terms.join(" | "))
}

fn factor_text(b: &Block, i: usize) -> String {
    let f = &b.factors[i];
    let head = format!("{}, {}, {}, {}", f.axis.level + 1, f.axis.gen, step_text(&f.seq), f.n0);
    let a = anchor(&f.seq);
    if first_on_axis(b, i) || a.is_zero() {
        format!("({head})")
    } else {
        format!("({head}, {})", fmt_q(&a))
    }
}

fn block_text(b: &Block, rank: usize) -> String {
    if b.dim() == 0 {
        let c = b.mono_coef();
        if b.base.is_zero() {
            return fmt_q(&c);
        }
        let mono = format!("t^({})", b.base);
        return if c.is_one() { mono } else { format!("{}*{mono}", fmt_q(&c)) };
    }
    let base = anchored_base(b);
    if b.dim() == 1 {
        let f = &b.factors[0];
        let key = match f.seq {
            Seq::Harm { .. } | Seq::Geo { .. } => "limit",
            _ => "base",
        };
        let mut parts = vec![format!("{key}={base}"), format!("step={}", step_text(&f.seq))];
        if f.n0 != default_start(&f.seq) {
            parts.push(format!("start={}", f.n0));
        }
        if f.axis.level != 0 || rank > 1 {
            parts.push(format!("level={}", f.axis.level + 1));
        }
        if f.axis.gen != 1 {
            parts.push(format!("gen={}", f.axis.gen));
        }
        parts.push(format!("coef={}", tensor_text(&b.tensor)));
        return format!("ladder({})", parts.join("; "));
    }
    let mut parts = vec![format!("base={base}")];
    for i in 0..b.dim() {
        parts.push(format!("factor={}", factor_text(b, i)));
    }
    parts.push(format!("coef={}", tensor_text(&b.tensor)));
    format!("grid({})", parts.join("; "))
}

impl fmt::Display for ClosedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.blocks.is_empty() {
            return write!(f, "0");
        }
        let mut blocks: Vec<&Block> = self.blocks.iter().collect();
        blocks.sort_by(|a, b| b.limit_cut().cmp(&a.limit_cut()).then(a.dim().cmp(&b.dim())));
        for (i, b) in blocks.iter().enumerate() {
            let neg = b.dim() == 0 && b.mono_coef() < Q::zero();
            let text = if neg { block_text(&b.scale(&-Q::one()), self.rank) } else { block_text(b, self.rank) };
            match (i, neg) {
                (0, true) => write!(f, "-{text}")?,
                (0, false) => write!(f, "{text}")?,
                (_, true) => write!(f, " - {text}")?,
                (_, false) => write!(f, " + {text}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::Axis;
    use crate::rat::q;

    #[test]
    fn prints_ladder_and_constant() {
        let l = Block::ladder(
            LexExponent::zero(1),
            Axis { level: 0, gen: 1 },
            Seq::harm(q(-1), q(1)),
            1,
            Tensor::constant(1, q(1)),
        );
        let s = ClosedSeries::from_blocks(1, vec![l, Block::monomial(LexExponent::zero(1), q(1))]).unwrap();
        assert_eq!(s.to_string(), "1 + ladder(limit=-1; step=harm(1); coef=const(1))");
    }
}
