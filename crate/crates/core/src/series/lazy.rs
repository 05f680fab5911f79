//! Series given by an expression over closed series, evaluated as an exact ordered term stream.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::Result;
use crate::exponents::LexExponent;
use crate::ordinal::OrdinalExt;
use crate::rat::Q;
use crate::series::closed::ClosedSeries;
use crate::series::enumerate::TermStream;
use crate::supcomp::Cut;

pub const DEFAULT_PREFIX_LEN: usize = 64;
const MAX_INPUT_TERMS: usize = 4096;

/// Prefix length from `HAHN_PREFIX_LEN`, or the default.
pub fn prefix_len_from_env() -> usize {
    std::env::var("HAHN_PREFIX_LEN")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .filter(|&n: &usize| n > 0)
        .unwrap_or(DEFAULT_PREFIX_LEN)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LazyExpr {
    Closed(ClosedSeries),
    Add(Arc<LazyExpr>, Arc<LazyExpr>),
    Mul(Arc<LazyExpr>, Arc<LazyExpr>),
    Scale(Q, Arc<LazyExpr>),
}

/// How a degree certificate was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Computed from a closed form.
    Exact,
    /// Natural sum of the factor degrees.
    ProductLaw,
    /// Maximum of the summand degrees; the true degree may be smaller.
    UpperBound,
    /// Supplied by the caller.
    Declared,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Provenance::Exact => "exact",
            Provenance::ProductLaw => "product-law",
            Provenance::UpperBound => "upper-bound",
            Provenance::Declared => "declared",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeCert {
    pub degree: OrdinalExt,
    pub provenance: Provenance,
}

/// Terms of an expression: every term with exponent below `bound` (all terms if `None`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    pub terms: Vec<(LexExponent, Q)>,
    pub bound: Option<Cut>,
}

impl Window {
    fn lower(&self) -> Option<Cut> {
        match self.terms.first() {
            Some((x, _)) => Some(Cut::point(x)),
            None => self.bound.clone(),
        }
    }

    fn cap(mut self, max: usize) -> Window {
        if self.terms.len() > max {
            let next = self.terms[max].0.clone();
            self.terms.truncate(max);
            self.bound = Some(Cut::below(next.c));
        }
        self
    }
}

fn min_bound(a: Option<Cut>, b: Option<Cut>) -> Option<Cut> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(x.min(y)),
    }
}

fn below(x: &LexExponent, bound: &Option<Cut>) -> bool {
    bound.as_ref().map_or(true, |b| Cut::point(x) < *b)
}

impl LazyExpr {
    /// Exact window of terms, using at most `depth` terms from each closed leaf.
    pub fn window(&self, depth: usize) -> Result<Window> {
        match self {
            LazyExpr::Closed(s) => {
                let mut ts = TermStream::new(s);
                let terms = ts.take_below(None, depth)?;
                let bound = ts.peek_point().map(|p| Cut::below(p.c.clone()));
                Ok(Window { terms, bound })
            }
            LazyExpr::Scale(k, a) => {
                let w = a.window(depth)?;
                if k.is_zero() {
                    return Ok(Window { terms: Vec::new(), bound: None });
                }
                Ok(Window { terms: w.terms.into_iter().map(|(x, c)| (x, c * k)).collect(), bound: w.bound })
            }
            LazyExpr::Add(a, b) => {
                let (wa, wb) = (a.window(depth)?, b.window(depth)?);
                let bound = min_bound(wa.bound.clone(), wb.bound.clone());
                let mut acc: BTreeMap<LexExponent, Q> = BTreeMap::new();
                for (x, c) in wa.terms.into_iter().chain(wb.terms) {
                    if below(&x, &bound) {
                        *acc.entry(x).or_insert_with(Q::zero) += c;
                    }
                }
                let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
                Ok(Window { terms, bound }.cap(depth))
            }
            LazyExpr::Mul(a, b) => {
                let (wa, wb) = (a.window(depth)?, b.window(depth)?);
                let (la, lb) = (wa.lower(), wb.lower());
                if la.is_none() || lb.is_none() {
                    return Ok(Window { terms: Vec::new(), bound: None });
                }
                let (la, lb) = (la.expect("checked"), lb.expect("checked"));
                let ra = wa.bound.as_ref().map(|x| x.add(&lb));
                let rb = wb.bound.as_ref().map(|x| la.add(x));
                let bound = min_bound(ra, rb);
                let mut acc: BTreeMap<LexExponent, Q> = BTreeMap::new();
                for (y, cy) in &wa.terms {
                    for (z, cz) in &wb.terms {
                        let x = y.add(z);
                        if !below(&x, &bound) {
                            // Terms of b are increasing, so later z only grow.
                            break;
                        }
                        *acc.entry(x).or_insert_with(Q::zero) += cy * cz;
                    }
                }
                let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
                Ok(Window { terms, bound }.cap(depth))
            }
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            LazyExpr::Closed(s) => s.rank,
            LazyExpr::Scale(_, a) => a.rank(),
            LazyExpr::Add(a, b) | LazyExpr::Mul(a, b) => a.rank().max(b.rank()),
        }
    }
}

/// A series known through an exact increasing term stream and a degree certificate.
///
/// The memoised prefix belongs to this handle; clones start with an empty cache.
#[derive(Debug)]
pub struct LazySeries {
    pub expr: Arc<LazyExpr>,
    pub cert: DegreeCert,
    pub prefix_len: usize,
    memo: Option<Window>,
}

impl Clone for LazySeries {
    fn clone(&self) -> Self {
        LazySeries { expr: self.expr.clone(), cert: self.cert.clone(), prefix_len: self.prefix_len, memo: None }
    }
}

impl LazySeries {
    pub fn from_closed(s: &ClosedSeries) -> Self {
        LazySeries {
            expr: Arc::new(LazyExpr::Closed(s.clone())),
            cert: DegreeCert { degree: s.degree(), provenance: Provenance::Exact },
            prefix_len: prefix_len_from_env(),
            memo: None,
        }
    }

    pub fn product(a: &LazySeries, b: &LazySeries) -> Self {
        let provenance = match (a.cert.provenance, b.cert.provenance) {
            (Provenance::UpperBound, _) | (_, Provenance::UpperBound) => Provenance::UpperBound,
            (Provenance::Declared, _) | (_, Provenance::Declared) => Provenance::Declared,
            _ => Provenance::ProductLaw,
        };
        LazySeries {
            expr: Arc::new(LazyExpr::Mul(a.expr.clone(), b.expr.clone())),
            cert: DegreeCert { degree: a.cert.degree.nat_sum(&b.cert.degree), provenance },
            prefix_len: a.prefix_len.max(b.prefix_len),
            memo: None,
        }
    }

    pub fn sum(a: &LazySeries, b: &LazySeries) -> Self {
        LazySeries {
            expr: Arc::new(LazyExpr::Add(a.expr.clone(), b.expr.clone())),
            cert: DegreeCert { degree: a.cert.degree.clone().max(b.cert.degree.clone()), provenance: Provenance::UpperBound },
            prefix_len: a.prefix_len.max(b.prefix_len),
            memo: None,
        }
    }

    pub fn scale(&self, k: &Q) -> Self {
        let degree = if k.is_zero() { OrdinalExt::MinusInfinity } else { self.cert.degree.clone() };
        LazySeries {
            expr: Arc::new(LazyExpr::Scale(k.clone(), self.expr.clone())),
            cert: DegreeCert { degree, provenance: self.cert.provenance },
            prefix_len: self.prefix_len,
            memo: None,
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Q::one())
    }

    /// Replaces the certificate with a caller-supplied degree.
    pub fn declare_degree(mut self, d: OrdinalExt) -> Self {
        self.cert = DegreeCert { degree: d, provenance: Provenance::Declared };
        self
    }

    pub fn with_prefix_len(mut self, n: usize) -> Self {
        self.prefix_len = n;
        self.memo = None;
        self
    }

    /// The first `prefix_len` terms (fewer if the series is shorter), exact.
    pub fn prefix(&mut self) -> Result<&[(LexExponent, Q)]> {
        if self.memo.is_none() {
            let want = self.prefix_len;
            let mut depth = want.max(8);
            let w = loop {
                let w = self.expr.window(depth)?;
                if w.terms.len() >= want || w.bound.is_none() || depth >= MAX_INPUT_TERMS {
                    break w;
                }
                depth *= 2;
            };
            self.memo = Some(w.cap(want));
        }
        Ok(&self.memo.as_ref().expect("filled").terms)
    }

    /// Whether the memoised prefix is the whole series.
    pub fn prefix_is_complete(&mut self) -> Result<bool> {
        self.prefix()?;
        Ok(self.memo.as_ref().expect("filled").bound.is_none())
    }
}

/// Result of a ring operation on closed series.
#[derive(Clone, Debug)]
pub enum SeriesValue {
    Closed(ClosedSeries),
    Lazy(LazySeries),
}

impl SeriesValue {
    pub fn degree(&self) -> OrdinalExt {
        match self {
            SeriesValue::Closed(s) => s.degree(),
            SeriesValue::Lazy(l) => l.cert.degree.clone(),
        }
    }

    pub fn as_closed(&self) -> Option<&ClosedSeries> {
        match self {
            SeriesValue::Closed(s) => Some(s),
            SeriesValue::Lazy(_) => None,
        }
    }

    pub fn to_lazy(&self) -> LazySeries {
        match self {
            SeriesValue::Closed(s) => LazySeries::from_closed(s),
            SeriesValue::Lazy(l) => l.clone(),
        }
    }
}

/// Product of closed series: closed when every pair of infinite blocks lies on disjoint
/// axes, otherwise a lazy stream certified by the degree product law.
pub fn mul(b: &ClosedSeries, c: &ClosedSeries) -> Result<SeriesValue> {
    if let Some(p) = b.mul_closed(c)? {
        return Ok(SeriesValue::Closed(p));
    }
    Ok(SeriesValue::Lazy(LazySeries::product(&LazySeries::from_closed(b), &LazySeries::from_closed(c))))
}

/// Degree of a product read off its block structure: the largest sum of dimensions over
/// pairs of blocks.
pub fn structural_product_degree(b: &ClosedSeries, c: &ClosedSeries) -> OrdinalExt {
    let mut best: Option<usize> = None;
    for x in &b.blocks {
        for y in &c.blocks {
            best = best.max(Some(x.dim() + y.dim()));
        }
    }
    match best {
        None => OrdinalExt::MinusInfinity,
        Some(d) => OrdinalExt::nat(d as u64),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::Axis;
    use crate::rat::{q, qf};
    use crate::series::block::Block;
    use crate::series::seq::Seq;
    use crate::series::tensor::Tensor;

    fn harm() -> ClosedSeries {
        let l = Block::ladder(
            LexExponent::zero(1),
            Axis { level: 0, gen: 1 },
            Seq::Harm { lim: q(0), a: q(1) },
            1,
            Tensor::constant(1, q(1)),
        );
        ClosedSeries::from_blocks(1, vec![l]).unwrap()
    }

    #[test]
    fn ladder_square_matches_brute_force() {
        let h = harm();
        let SeriesValue::Lazy(mut p) = mul(&h, &h).unwrap() else { panic!("expected lazy") };
        assert_eq!(p.cert.degree, OrdinalExt::nat(2));
        assert_eq!(p.cert.provenance, Provenance::ProductLaw);
        let got: Vec<_> = p.prefix().unwrap().iter().take(20).cloned().collect();
        assert_eq!(got.len(), 20);
        // Brute force over n, m <= 100. A sum involving n > 100 exceeds -1 - 1/100, while the
        // first 20 exponents all lie below -1 - 1/21.
        let mut acc: BTreeMap<Q, Q> = BTreeMap::new();
        for n in 1..=100i64 {
            for m in 1..=100i64 {
                *acc.entry(-qf(1, n) - qf(1, m)).or_insert_with(Q::zero) += q(1);
            }
        }
        let want: Vec<_> = acc.into_iter().take(20).map(|(x, c)| (LexExponent::from_rats(&[x]), c)).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn clone_resets_cursor() {
        let h = harm();
        let mut a = LazySeries::from_closed(&h).with_prefix_len(5);
        a.prefix().unwrap();
        let b = a.clone();
        assert!(b.memo.is_none());
        assert_eq!(prefix_len_from_env() > 0, true);
    }
}
