//! Finitely presented series in canonical form.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::error::{HahnError, Result};
use crate::exponents::{Axis, GroupSpec, LexExponent};
use crate::ordinal::{Ordinal, OrdinalExt};
use crate::rat::Q;
use crate::series::block::{try_merge, Block, Factor};
use crate::supcomp::Cut;

/// A finite sum of blocks in canonical form. `rank` is the number of exponent levels.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ClosedSeries {
    pub rank: usize,
    pub blocks: Vec<Block>,
}

fn block_sort_key(b: &Block) -> (Cut, usize, Vec<Factor>, LexExponent) {
    (b.limit_cut(), b.dim(), b.factors.clone(), b.base.clone())
}

/// Brings a list of blocks into canonical form.
pub fn canonicalize(rank: usize, blocks: Vec<Block>) -> Result<Vec<Block>> {
    let mut work: Vec<Block> =
        blocks.into_iter().map(|b| Block { base: b.base.promote(rank), ..b }).collect();
    let mut grids: BTreeMap<(Vec<Axis>, String), Vec<Block>> = BTreeMap::new();
    let mut iterations = 0usize;
    while let Some(b) = work.pop() {
        iterations += 1;
        if iterations > 1_000_000 {
            return Err(HahnError::closure("canonicalisation did not converge"));
        }
        let Some(b) = b.normalize()? else { continue };
        let key = (b.axes(), format!("{:?}", b.base));
        let list = grids.entry(key).or_default();
        let mut merged = None;
        for i in 0..list.len() {
            if let Some(res) = try_merge(&list[i], &b) {
                merged = Some((i, res?));
                break;
            }
        }
        match merged {
            Some((i, (m, strips))) => {
                list.remove(i);
                work.extend(strips);
                work.push(m);
            }
            None => list.push(b),
        }
    }
    let mut out: Vec<Block> = grids.into_values().flatten().collect();
    fold_strips(&mut out)?;
    out.sort_by(|a, b| {
        block_sort_key(a).cmp(&block_sort_key(b)).then_with(|| a.tensor.cmp(&b.tensor))
    });
    Ok(out)
}

/// Edge slices of a block: the slice just before the start on each axis (absorbable by
/// extension) and the negated first slice (absorbable by cancellation).
fn edge_slices(b: &Block) -> Result<Vec<(Block, usize, bool)>> {
    let mut out = Vec::new();
    for i in 0..b.dim() {
        let f = &b.factors[i];
        if f.seq.valid(f.n0 - 1) {
            if let Some(e) = b.slice(i, f.n0 - 1).normalize()? {
                out.push((e, i, true));
            }
        }
        if let Some(c) = b.slice(i, f.n0).scale(&-Q::one()).normalize()? {
            out.push((c, i, false));
        }
    }
    Ok(out)
}

/// Absorbs lower-dimensional blocks that continue a block backwards along one axis or
/// cancel its first slice.
fn fold_strips(blocks: &mut Vec<Block>) -> Result<()> {
    let mut alive: Vec<Option<Block>> = blocks.drain(..).map(Some).collect();
    let mut by_value: HashMap<Block, Vec<usize>> = HashMap::new();
    let mut edges: HashMap<Block, Vec<(usize, usize, bool)>> = HashMap::new();
    let mut owned: HashMap<usize, Vec<Block>> = HashMap::new();
    for (k, b) in alive.iter().enumerate() {
        by_value.entry(b.clone().expect("fresh")).or_default().push(k);
    }
    fn index(
        k: usize,
        b: &Block,
        edges: &mut HashMap<Block, Vec<(usize, usize, bool)>>,
        owned: &mut HashMap<usize, Vec<Block>>,
    ) -> Result<Vec<Block>> {
        let mut keys = Vec::new();
        for (e, i, ext) in edge_slices(b)? {
            edges.entry(e.clone()).or_default().push((k, i, ext));
            keys.push(e);
        }
        owned.insert(k, keys.clone());
        Ok(keys)
    }
    fn unindex(k: usize, edges: &mut HashMap<Block, Vec<(usize, usize, bool)>>, owned: &mut HashMap<usize, Vec<Block>>) {
        for key in owned.remove(&k).unwrap_or_default() {
            if let Some(v) = edges.get_mut(&key) {
                v.retain(|(o, _, _)| *o != k);
            }
        }
    }
    for k in 0..alive.len() {
        let b = alive[k].clone().expect("fresh");
        index(k, &b, &mut edges, &mut owned)?;
    }
    let mut queue: Vec<usize> = (0..alive.len()).collect();
    let mut steps = 0usize;
    while let Some(k) = queue.pop() {
        steps += 1;
        if steps > 1_000_000 {
            return Err(HahnError::closure("strip folding did not converge"));
        }
        let Some(s) = alive[k].clone() else { continue };
        let Some(&(owner, i, ext)) = edges
            .get(&s)
            .and_then(|v| v.iter().find(|(o, _, _)| *o != k && alive[*o].is_some()))
        else {
            continue;
        };
        alive[k] = None;
        unindex(k, &mut edges, &mut owned);
        if let Some(v) = by_value.get_mut(&s) {
            v.retain(|x| *x != k);
        }
        let old = alive[owner].take().expect("alive owner");
        if let Some(v) = by_value.get_mut(&old) {
            v.retain(|x| *x != owner);
        }
        unindex(owner, &mut edges, &mut owned);
        let mut b = old;
        if ext {
            b.factors[i].n0 -= 1;
        } else {
            b.factors[i].n0 += 1;
            b.advance()?;
        }
        by_value.entry(b.clone()).or_default().push(owner);
        let keys = index(owner, &b, &mut edges, &mut owned)?;
        alive[owner] = Some(b);
        queue.push(owner);
        for key in keys {
            if let Some(v) = by_value.get(&key) {
                queue.extend(v.iter().copied());
            }
        }
    }
    *blocks = alive.into_iter().flatten().collect();
    Ok(())
}

impl ClosedSeries {
    pub fn zero(rank: usize) -> Self {
        ClosedSeries { rank, blocks: Vec::new() }
    }

    pub fn one(rank: usize) -> Self {
        Self::monomial(LexExponent::zero(rank), Q::one())
    }

    pub fn monomial(x: LexExponent, c: Q) -> Self {
        let rank = x.rank();
        if c.is_zero() {
            return Self::zero(rank);
        }
        ClosedSeries { rank, blocks: vec![Block::monomial(x, c)] }
    }

    pub fn constant(rank: usize, c: Q) -> Self {
        Self::monomial(LexExponent::zero(rank), c)
    }

    pub fn from_blocks(rank: usize, blocks: Vec<Block>) -> Result<Self> {
        Ok(ClosedSeries { rank, blocks: canonicalize(rank, blocks)? })
    }

    /// Finite-support series from exponent/coefficient pairs.
    pub fn from_terms(rank: usize, terms: &[(LexExponent, Q)]) -> Self {
        let blocks = terms.iter().map(|(x, c)| Block::monomial(x.promote(rank), c.clone())).collect();
        Self::from_blocks(rank, blocks).expect("monomial sums always close")
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.blocks.iter().all(|b| b.dim() == 0)
    }

    /// Monomial terms (exponent, coefficient) of a finite series.
    pub fn finite_terms(&self) -> Option<Vec<(LexExponent, Q)>> {
        if !self.is_finite() {
            return None;
        }
        Some(self.blocks.iter().map(|b| (b.base.clone(), b.mono_coef())).collect())
    }

    pub fn add(&self, o: &ClosedSeries) -> Result<ClosedSeries> {
        let rank = self.rank.max(o.rank);
        let mut blocks = self.blocks.clone();
        blocks.extend(o.blocks.iter().cloned());
        Self::from_blocks(rank, blocks)
    }

    pub fn neg(&self) -> ClosedSeries {
        self.scale(&-Q::one())
    }

    pub fn sub(&self, o: &ClosedSeries) -> Result<ClosedSeries> {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &Q) -> ClosedSeries {
        if k.is_zero() {
            return Self::zero(self.rank);
        }
        ClosedSeries { rank: self.rank, blocks: self.blocks.iter().map(|b| b.scale(k)).collect() }
    }

    /// Multiplication by the monomial `t^x`.
    pub fn shift(&self, x: &LexExponent) -> Result<ClosedSeries> {
        let blocks = self.blocks.iter().map(|b| b.shift(x)).collect();
        Self::from_blocks(self.rank.max(x.rank()), blocks)
    }

    /// Product when every pair of infinite blocks lives on disjoint axes; `None` otherwise.
    pub fn mul_closed(&self, o: &ClosedSeries) -> Result<Option<ClosedSeries>> {
        let rank = self.rank.max(o.rank);
        let mut out = Vec::new();
        for x in &self.blocks {
            for y in &o.blocks {
                match block_product(x, y) {
                    Some(b) => out.push(b),
                    None => return Ok(None),
                }
            }
        }
        Ok(Some(Self::from_blocks(rank, out)?))
    }

    pub fn max_dim(&self) -> Option<usize> {
        self.blocks.iter().map(|b| b.dim()).max()
    }

    /// Degree of the support's order type.
    pub fn degree(&self) -> OrdinalExt {
        match self.max_dim() {
            None => OrdinalExt::MinusInfinity,
            Some(d) => OrdinalExt::Fin(Ordinal::nat(d as u64)),
        }
    }

    /// Order type of the support.
    pub fn order_type(&self) -> Ordinal {
        let stages = self.ot_stages();
        let mut terms = Vec::new();
        for (d, sups) in &stages.levels {
            terms.push((Ordinal::nat(*d as u64), num_bigint::BigUint::from(sups.len())));
        }
        terms.push((Ordinal::zero(), num_bigint::BigUint::from(stages.tail_points.len())));
        Ordinal::from_terms(terms).expect("finite degrees")
    }

    /// The stage decomposition underlying the order type: for decreasing dimensions, the
    /// distinct limit cuts of the blocks that reach beyond all earlier stages, then the
    /// monomials above the last cut.
    pub fn ot_stages(&self) -> OtStages {
        let g = GroupSpec::real(self.rank);
        self.ot_stages_in(&g)
    }

    pub fn ot_stages_in(&self, g: &GroupSpec) -> OtStages {
        let cuts: Vec<(usize, Cut)> = self
            .blocks
            .iter()
            .filter(|b| b.dim() > 0)
            .map(|b| (b.dim(), b.limit_cut().normalize(g)))
            .collect();
        let mut tau: Option<Cut> = None;
        let mut levels = Vec::new();
        loop {
            let cands: Vec<&(usize, Cut)> =
                cuts.iter().filter(|(_, c)| tau.as_ref().map_or(true, |t| c > t)).collect();
            let Some(d) = cands.iter().map(|(d, _)| *d).max() else { break };
            let mut sups: Vec<Cut> = cands.iter().filter(|(dd, _)| *dd == d).map(|(_, c)| c.clone()).collect();
            sups.sort();
            sups.dedup();
            tau = sups.last().cloned();
            levels.push((d, sups));
        }
        let mut tail_points: Vec<LexExponent> = self
            .blocks
            .iter()
            .filter(|b| b.dim() == 0)
            .filter(|b| tau.as_ref().map_or(true, |t| Cut::point(&b.base).normalize(g) >= *t))
            .map(|b| b.base.clone())
            .collect();
        tail_points.sort();
        OtStages { levels, tail_points }
    }

    /// Supremum of the support as a normalised cut in `g`.
    pub fn sup_in(&self, g: &GroupSpec) -> Option<Cut> {
        self.blocks.iter().map(|b| b.limit_cut().normalize(g)).max()
    }

    pub fn sup(&self) -> Option<Cut> {
        self.sup_in(&GroupSpec::real(self.rank))
    }

    /// Coefficient at exponent `x`, summed over all blocks containing it.
    pub fn coefficient_at(&self, x: &LexExponent) -> Q {
        let mut s = Q::zero();
        for b in &self.blocks {
            if let Some(idx) = membership(b, x) {
                s += b.coef(&idx);
            }
        }
        s
    }

    /// True when every support element is `<= 0`.
    pub fn is_nonpositive(&self) -> bool {
        let zero = Cut::zero(self.rank);
        self.blocks.iter().all(|b| b.limit_cut() <= zero)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.is_nonpositive() {
            return Err(HahnError::domain("positive exponent outside the ring of non-positive exponents"));
        }
        for b in &self.blocks {
            for f in &b.factors {
                if let Some(m) = f.seq.min_index() {
                    if f.n0 < m {
                        return Err(HahnError::domain("ladder start index below 1"));
                    }
                }
                if matches!(f.seq, crate::series::seq::Seq::Arith { .. }) && f.axis.level == 0 {
                    return Err(HahnError::domain("arithmetic steps are unbounded at the top level"));
                }
            }
        }
        Ok(())
    }

    /// Multiplies by a scalar and a monomial.
    pub fn scale_shift(&self, k: &Q, x: &LexExponent) -> Result<ClosedSeries> {
        self.scale(k).shift(x)
    }

    /// Blocks of maximal dimension only.
    pub fn top_blocks(&self) -> Vec<Block> {
        let d = self.max_dim().unwrap_or(0);
        self.blocks.iter().filter(|b| b.dim() == d).cloned().collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OtStages {
    pub levels: Vec<(usize, Vec<Cut>)>,
    pub tail_points: Vec<LexExponent>,
}

/// Index vector at which block `b` has the point `x`, if any.
pub fn membership(b: &Block, x: &LexExponent) -> Option<Vec<i64>> {
    let mut rest = x.sub(&b.base);
    let mut idx = Vec::new();
    for f in &b.factors {
        let v = rest.coord(f.axis);
        let n = f.seq.index_of(&v)?;
        if n < f.n0 {
            return None;
        }
        rest.set_coord(f.axis, Q::zero());
        idx.push(n);
    }
    if rest.is_zero() {
        Some(idx)
    } else {
        None
    }
}

/// Product of two blocks when their axes are disjoint or one is a monomial.
pub fn block_product(x: &Block, y: &Block) -> Option<Block> {
    if x.dim() == 0 {
        return Some(Block {
            base: x.base.add(&y.base),
            factors: y.factors.clone(),
            tensor: y.tensor.scale(&x.mono_coef()),
        });
    }
    if y.dim() == 0 {
        return block_product(y, x);
    }
    let ax = x.axes();
    if y.axes().iter().any(|a| ax.contains(a)) {
        return None;
    }
    let mut tagged: Vec<(Axis, bool, usize)> = ax.iter().enumerate().map(|(i, a)| (*a, false, i)).collect();
    tagged.extend(y.axes().iter().enumerate().map(|(i, a)| (*a, true, i)));
    tagged.sort();
    let order: Vec<(bool, usize)> = tagged.iter().map(|(_, o, i)| (*o, *i)).collect();
    let factors = tagged
        .iter()
        .map(|(_, o, i)| if *o { y.factors[*i].clone() } else { x.factors[*i].clone() })
        .collect();
    Some(Block { base: x.base.add(&y.base), factors, tensor: x.tensor.outer(&y.tensor, &order) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{q, qf};
    use crate::series::seq::Seq;
    use crate::series::tensor::{Key, Tensor};

    fn top() -> Axis {
        Axis { level: 0, gen: 1 }
    }

    fn harm(lim: Q, a: Q, c: Q) -> Block {
        Block::ladder(LexExponent::zero(1), top(), Seq::Harm { lim, a }, 1, Tensor::constant(1, c))
    }

    fn series(blocks: Vec<Block>) -> ClosedSeries {
        ClosedSeries::from_blocks(1, blocks).unwrap()
    }

    /// Coefficients of the first support points, enumerated by brute force over the blocks.
    fn brute(s: &ClosedSeries, n: i64) -> BTreeMap<LexExponent, Q> {
        let mut m: BTreeMap<LexExponent, Q> = BTreeMap::new();
        for b in &s.blocks {
            if b.dim() == 0 {
                *m.entry(b.base.clone()).or_insert_with(Q::zero) += b.mono_coef();
                continue;
            }
            let f = &b.factors[0];
            for i in f.n0..f.n0 + n {
                *m.entry(b.point(&[i])).or_insert_with(Q::zero) += b.coef(&[i]);
            }
        }
        m.retain(|_, c| !c.is_zero());
        m
    }

    #[test]
    fn cancellation_and_monomials() {
        let a = series(vec![harm(q(0), q(1), q(1))]);
        assert!(a.sub(&a).unwrap().is_zero());
        let x = ClosedSeries::from_terms(1, &[(LexExponent::from_rats(&[q(0)]), q(1)), (LexExponent::from_rats(&[q(-1)]), q(1))]);
        let y = x.add(&ClosedSeries::constant(1, q(-1))).unwrap();
        assert_eq!(y, ClosedSeries::monomial(LexExponent::from_rats(&[q(-1)]), q(1)));
    }

    #[test]
    fn merging_harmonic_ladders() {
        let a = series(vec![harm(q(0), q(1), q(1))]);
        let b = series(vec![harm(q(0), qf(1, 2), q(1))]);
        let s = a.add(&b).unwrap();
        assert_eq!(s.blocks.len(), 1);
        for m in 1..100 {
            let x = LexExponent::from_rats(&[qf(-1, 2 * m)]);
            assert_eq!(s.coefficient_at(&x), q(2));
        }
        // Stream merge oracle over the first hundred terms of each summand.
        let mut want: BTreeMap<LexExponent, Q> = BTreeMap::new();
        for n in 1..=100 {
            *want.entry(LexExponent::from_rats(&[qf(-1, n)])).or_insert_with(Q::zero) += q(1);
            *want.entry(LexExponent::from_rats(&[qf(-1, 2 * n)])).or_insert_with(Q::zero) += q(1);
        }
        for (x, c) in want.iter().filter(|(x, _)| **x <= LexExponent::from_rats(&[qf(-1, 100)])) {
            assert_eq!(&s.coefficient_at(x), c);
        }
        assert_eq!(s.order_type(), Ordinal::omega());
    }

    #[test]
    fn geometric_minus_harmonic_is_nonzero() {
        let g = Block::ladder(
            LexExponent::zero(1),
            top(),
            Seq::Geo { lim: q(0), a: q(1), r: qf(1, 2) },
            0,
            Tensor::constant(1, q(1)),
        );
        let s = series(vec![g, harm(q(0), q(1), q(-1))]);
        assert!(!s.is_zero());
        // -1 = -1/1 and -1/2 = -1/2 coincide; -1/4 appears in both as well.
        let b = brute(&s, 40);
        assert!(!b.contains_key(&LexExponent::from_rats(&[q(-1)])));
        assert_eq!(b.get(&LexExponent::from_rats(&[qf(-1, 3)])), Some(&q(-1)));
    }

    #[test]
    fn order_type_of_shifted_ladder_plus_one() {
        let l = Block::ladder(
            LexExponent::from_rats(&[q(-1)]),
            top(),
            Seq::Harm { lim: q(0), a: q(1) },
            1,
            Tensor::constant(1, q(1)),
        );
        let s = series(vec![l, Block::monomial(LexExponent::zero(1), q(1))]);
        assert_eq!(s.order_type(), Ordinal::omega().ord_add(&Ordinal::one()));
        assert_eq!(s.degree(), OrdinalExt::nat(1));
        assert_eq!(s.sup(), Some(Cut::zero(1)));
    }

    #[test]
    fn monomial_extends_ladder() {
        let tail = Block::ladder(
            LexExponent::zero(1),
            top(),
            Seq::Harm { lim: q(0), a: q(1) },
            2,
            Tensor::stream(1, vec![(Key { r: 0, w: qf(1, 2), j: 0 }, q(1))]),
        );
        let head = Block::monomial(LexExponent::from_rats(&[q(-1)]), qf(1, 2));
        let s = series(vec![tail, head]);
        assert_eq!(s.blocks.len(), 1);
        assert_eq!(s.blocks[0].factors[0].n0, 1);
    }
}
