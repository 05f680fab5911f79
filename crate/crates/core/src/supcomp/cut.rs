use std::cmp::Ordering;
use std::fmt;


use crate::exponents::{Exponent, GroupSpec, LexExponent};
use crate::rat::{q, qf, Q};

/// How a cut sits relative to its value prefix.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Tail {
    Below,
    Exact,
    Above,
}

/// A Dedekind-style position in a lexicographic group.
///
/// `vals` is a prefix of levels. `Below` means "just below every element with this
/// prefix", `Above` "just above every element with this prefix"; `Exact` requires a full
/// vector and denotes the group element itself. Comparison is lexicographic on the
/// prefix, with the tail breaking ties (see [`Cut::cmp`]).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Cut {
    pub vals: Vec<Exponent>,
    pub tail: Tail,
}

impl Cut {
    pub fn point(x: &LexExponent) -> Cut {
        Cut { vals: x.c.clone(), tail: Tail::Exact }
    }

    pub fn below(vals: Vec<Exponent>) -> Cut {
        Cut { vals, tail: Tail::Below }
    }

    pub fn above(vals: Vec<Exponent>) -> Cut {
        Cut { vals, tail: Tail::Above }
    }

    pub fn zero(rank: usize) -> Cut {
        Cut::point(&LexExponent::zero(rank))
    }

    pub fn is_point(&self) -> bool {
        self.tail == Tail::Exact
    }

    pub fn as_point(&self) -> Option<LexExponent> {
        if self.tail == Tail::Exact {
            Some(LexExponent { c: self.vals.clone() })
        } else {
            None
        }
    }

    /// Sum of the underlying sets' suprema.
    pub fn add(&self, o: &Cut) -> Cut {
        let n = self.vals.len().min(o.vals.len());
        let vals: Vec<Exponent> = (0..n).map(|i| self.vals[i].add(&o.vals[i])).collect();
        let tail = match self.vals.len().cmp(&o.vals.len()) {
            Ordering::Less => self.tail,
            Ordering::Greater => o.tail,
            Ordering::Equal => {
                if self.tail == Tail::Below || o.tail == Tail::Below {
                    Tail::Below
                } else if self.tail == Tail::Above || o.tail == Tail::Above {
                    Tail::Above
                } else {
                    Tail::Exact
                }
            }
        };
        Cut { vals, tail }
    }

    pub fn add_point(&self, x: &LexExponent) -> Cut {
        self.add(&Cut::point(x))
    }

    /// Canonical representative of the cut in `Sup(G)`.
    pub fn normalize(&self, g: &GroupSpec) -> Cut {
        let rank = g.rank();
        let mut c = self.clone();
        if c.vals.len() > rank {
            c.vals.truncate(rank);
        }
        if c.tail == Tail::Exact && c.vals.len() < rank {
            c.vals.resize(rank, Exponent::zero());
        }
        let all_in = c.vals.iter().enumerate().all(|(l, v)| g.contains_at(l, v));
        if !all_in {
            // No group element carries this prefix, so both tails describe the same cut;
            // strip to the first level leaving the group.
            let l = c.vals.iter().enumerate().position(|(l, v)| !g.contains_at(l, v)).unwrap();
            c.vals.truncate(l + 1);
            c.tail = Tail::Below;
            return c;
        }
        if c.vals.len() == rank && c.tail != Tail::Exact {
            c.tail = Tail::Exact;
        }
        c
    }

    pub fn to_f64_top(&self) -> f64 {
        self.vals.first().map(|v| v.to_f64()).unwrap_or(0.0)
    }
}

impl Ord for Cut {
    fn cmp(&self, o: &Self) -> Ordering {
        let n = self.vals.len().min(o.vals.len());
        for i in 0..n {
            let c = self.vals[i].cmp(&o.vals[i]);
            if c != Ordering::Equal {
                return c;
            }
        }
        match self.vals.len().cmp(&o.vals.len()) {
            Ordering::Equal => self.tail.cmp(&o.tail),
            Ordering::Less => match self.tail {
                Tail::Below => Ordering::Less,
                Tail::Above => Ordering::Greater,
                Tail::Exact => {
                    if o.vals[n..].iter().all(|v| v.is_zero()) {
                        Tail::Exact.cmp(&o.tail)
                    } else if o.vals[n..].iter().find(|v| !v.is_zero()).unwrap().is_negative() {
                        Ordering::Greater
                    } else {
                        Ordering::Less
                    }
                }
            },
            Ordering::Greater => o.cmp(self).reverse(),
        }
    }
}

impl PartialOrd for Cut {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Cut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.vals.iter().map(|x| x.to_string()).collect();
        let body = if v.len() == 1 { v[0].clone() } else { format!("[{}]", v.join(", ")) };
        match self.tail {
            Tail::Exact => write!(f, "{body}"),
            Tail::Below => write!(f, "{body}-"),
            Tail::Above => write!(f, "{body}+"),
        }
    }
}

/// An element of the group at `level` strictly between `lo` and `hi` (either may be open).
pub fn between_at(lo: Option<&Exponent>, hi: Option<&Exponent>, level: usize, g: &GroupSpec) -> Exponent {
    let unit_gen = match g.levels.get(level) {
        Some(Some(set)) => *set.iter().next().unwrap_or(&1),
        _ => 1,
    };
    let unit = Exponent::term(unit_gen, q(1));
    let ok = |x: &Exponent| {
        lo.map_or(true, |l| l < x) && hi.map_or(true, |h| x < h) && g.contains_at(level, x)
    };
    match (lo, hi) {
        (None, None) => Exponent::zero(),
        (Some(l), None) => {
            if g.contains_at(level, l) {
                return l.add(&unit);
            }
            approx_between(l.to_f64(), l.to_f64() + 2.0, &unit, ok)
        }
        (None, Some(h)) => {
            if g.contains_at(level, h) {
                return h.sub(&unit);
            }
            approx_between(h.to_f64() - 2.0, h.to_f64(), &unit, ok)
        }
        (Some(l), Some(h)) => {
            if g.contains_at(level, l) && g.contains_at(level, h) {
                return l.add(h).scale(&qf(1, 2));
            }
            approx_between(l.to_f64(), h.to_f64(), &unit, ok)
        }
    }
}

fn approx_between(lo: f64, hi: f64, unit: &Exponent, ok: impl Fn(&Exponent) -> bool) -> Exponent {
    let u = unit.to_f64();
    let target = (lo + hi) / 2.0 / u;
    for k in 1..80 {
        let den = 1i64 << k.min(60);
        let num = (target * den as f64).round() as i64;
        for d in [0, -1, 1] {
            let cand = unit.scale(&Q::new((num + d).into(), den.into()));
            if ok(&cand) {
                return cand;
            }
        }
    }
    unit.scale(&Q::new(((target * 1e9).round() as i64).into(), 1_000_000_000i64.into()))
}

/// A group element `x` with `a <= ι(x) < b`, for normalized cuts with `a < b`.
pub fn element_between(a: &Cut, b: &Cut, g: &GroupSpec) -> Option<LexExponent> {
    if a >= b {
        return None;
    }
    let rank = g.rank();
    if let Some(x) = a.as_point() {
        return Some(x);
    }
    let m = a.vals.len().min(b.vals.len());
    let mut prefix: Vec<Exponent> = Vec::new();
    for i in 0..m {
        if a.vals[i] != b.vals[i] {
            let v = between_at(Some(&a.vals[i]), Some(&b.vals[i]), i, g);
            prefix.push(v);
            prefix.resize(rank, Exponent::zero());
            return Some(LexExponent { c: prefix });
        }
        prefix.push(a.vals[i].clone());
    }
    let pad = |mut p: Vec<Exponent>| {
        p.resize(rank, Exponent::zero());
        LexExponent { c: p }
    };
    if a.vals.len() == b.vals.len() {
        return Some(pad(prefix));
    }
    if a.vals.len() < b.vals.len() {
        let l = a.vals.len();
        prefix.push(between_at(None, Some(&b.vals[l]), l, g));
        return Some(pad(prefix));
    }
    let l = b.vals.len();
    prefix.push(between_at(Some(&a.vals[l]), None, l, g));
    Some(pad(prefix))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(v: &[i64]) -> Vec<Exponent> {
        v.iter().map(|&x| Exponent::int(x)).collect()
    }

    #[test]
    fn ordering_of_tails() {
        let below = Cut::below(e(&[0]));
        let exact = Cut::point(&LexExponent::from_rats(&[q(0)]));
        assert!(below < exact);
        let g = GroupSpec::real(1);
        assert_eq!(below.normalize(&g), exact);
        let lex_below = Cut::below(e(&[0]));
        let zero2 = Cut::zero(2);
        assert!(lex_below < zero2);
        assert!(lex_below.normalize(&GroupSpec::real(2)) < zero2);
        let above = Cut::above(e(&[-1]));
        assert!(above > Cut::point(&LexExponent::from_rats(&[q(-1), q(100)])));
        assert!(above < Cut::point(&LexExponent::from_rats(&[qf(-1, 2), q(0)])));
    }

    #[test]
    fn addition_and_between() {
        let g = GroupSpec::real(1);
        let s = Cut::below(e(&[0])).add_point(&LexExponent::from_rats(&[q(-1)]));
        assert_eq!(s, Cut::below(e(&[-1])));
        let a = Cut::point(&LexExponent::from_rats(&[q(-1)]));
        let b = Cut::point(&LexExponent::from_rats(&[q(0)]));
        let x = element_between(&a, &b, &g).unwrap();
        assert!(a <= Cut::point(&x) && Cut::point(&x) < b);
        let gq = GroupSpec::rationals(1);
        let r2 = Cut::below(vec![Exponent::term(2, q(-1))]).normalize(&gq);
        let x = element_between(&r2, &b, &gq).unwrap();
        assert!(gq.contains(&x));
        assert!(r2 <= Cut::point(&x));
    }
}
