//! Root data, the invariant form and normal orderings.
//!
//! Weights are exact rational vectors in the simple-root basis. The form is
//! normalized so that simply-laced roots and the short roots of B2 have
//! square length 2; the odd simple root of osp(1|2) has square length 1.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = Rational64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlgebraId {
    A1,
    A2,
    A3,
    B2,
    Osp12,
}

impl AlgebraId {
    pub const ALL: [AlgebraId; 5] = [
        AlgebraId::A1,
        AlgebraId::A2,
        AlgebraId::A3,
        AlgebraId::B2,
        AlgebraId::Osp12,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AlgebraId::A1 => "A1",
            AlgebraId::A2 => "A2",
            AlgebraId::A3 => "A3",
            AlgebraId::B2 => "B2",
            AlgebraId::Osp12 => "OSP12",
        }
    }

    pub fn rank(self) -> usize {
        match self {
            AlgebraId::A1 | AlgebraId::Osp12 => 1,
            AlgebraId::A2 | AlgebraId::B2 => 2,
            AlgebraId::A3 => 3,
        }
    }
}

impl fmt::Display for AlgebraId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgebraId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a1" | "sl2" => Ok(AlgebraId::A1),
            "a2" | "sl3" => Ok(AlgebraId::A2),
            "a3" | "sl4" => Ok(AlgebraId::A3),
            "b2" | "so5" => Ok(AlgebraId::B2),
            "osp12" | "osp" | "osp(1|2)" => Ok(AlgebraId::Osp12),
            _ => Err(Error::UnknownAlgebra(s.to_string())),
        }
    }
}

/// A weight `Σ c_i α_i`, stored by its coordinates `c_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight(pub Vec<Q>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![Q::zero(); rank])
    }

    pub fn simple(rank: usize, i: usize) -> Self {
        let mut w = Weight::zero(rank);
        w.0[i] = Q::from_integer(1);
        w
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Weight(c.iter().map(|&x| Q::from_integer(x)).collect())
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn height(&self) -> Q {
        self.0.iter().copied().sum()
    }

    pub fn scale(&self, c: Q) -> Self {
        Weight(self.0.iter().map(|&x| x * c).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    /// True when the weight lies in the positive root cone `Q⁺` (integral, non-negative).
    pub fn in_positive_cone(&self) -> bool {
        self.0.iter().all(|x| x.is_integer() && *x >= Q::zero())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0
            .iter()
            .map(|x| x.to_f64().unwrap_or(f64::NAN))
            .collect()
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }
}

/// A total order on the positive roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalOrdering {
    pub sequence: Vec<Weight>,
}

impl NormalOrdering {
    pub fn position(&self, root: &Weight) -> Option<usize> {
        self.sequence.iter().position(|r| r == root)
    }

    pub fn reversed(&self) -> Self {
        NormalOrdering {
            sequence: self.sequence.iter().rev().cloned().collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RootSystem {
    pub algebra: AlgebraId,
    pub rank: usize,
    pub cartan: Vec<Vec<i64>>,
    pub sym: Vec<Vec<Q>>,
    pub positive_roots: Vec<Weight>,
    /// Z₂ degree of each entry of `positive_roots`.
    pub parity: Vec<u8>,
    pub orderings: Vec<NormalOrdering>,
}

pub fn build_root_system(id: AlgebraId) -> RootSystem {
    let (cartan, d): (Vec<Vec<i64>>, Vec<Q>) = match id {
        AlgebraId::A1 => (vec![vec![2]], vec![Q::from_integer(1)]),
        AlgebraId::A2 => (vec![vec![2, -1], vec![-1, 2]], vec![Q::from_integer(1); 2]),
        AlgebraId::A3 => (
            vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]],
            vec![Q::from_integer(1); 3],
        ),
        AlgebraId::B2 => (
            vec![vec![2, -1], vec![-2, 2]],
            vec![Q::from_integer(2), Q::from_integer(1)],
        ),
        AlgebraId::Osp12 => (vec![vec![2]], vec![Q::new(1, 2)]),
    };
    let rank = cartan.len();
    let sym: Vec<Vec<Q>> = (0..rank)
        .map(|i| {
            (0..rank)
                .map(|j| d[i] * Q::from_integer(cartan[i][j]))
                .collect()
        })
        .collect();

    let (positive_roots, parity) = if id == AlgebraId::Osp12 {
        (
            vec![Weight::from_ints(&[1]), Weight::from_ints(&[2])],
            vec![1, 0],
        )
    } else {
        let roots = close_roots(rank, &sym);
        let n = roots.len();
        (roots, vec![0; n])
    };

    let mut rs = RootSystem {
        algebra: id,
        rank,
        cartan,
        sym,
        positive_roots,
        parity,
        orderings: Vec::new(),
    };
    let def = default_normal_ordering(&rs);
    let rev = def.reversed();
    rs.orderings.push(def);
    if validate_normal_ordering(&rev, &rs) == Ok(true) && rev != rs.orderings[0] {
        rs.orderings.push(rev);
    }
    rs
}

// α-string closure: β + α_i is a root iff p − ⟨β, α_i^∨⟩ > 0.
fn close_roots(rank: usize, sym: &[Vec<Q>]) -> Vec<Weight> {
    let pair = |a: &Weight, b: &Weight| form(sym, a, b);
    let mut roots: Vec<Weight> = (0..rank).map(|i| Weight::simple(rank, i)).collect();
    let mut k = 0;
    while k < roots.len() {
        let beta = roots[k].clone();
        for i in 0..rank {
            let ai = Weight::simple(rank, i);
            let mut p = 0i64;
            let mut w = &beta - &ai;
            while roots.contains(&w) {
                p += 1;
                w = &w - &ai;
            }
            let coroot = Q::from_integer(2) * pair(&beta, &ai) / pair(&ai, &ai);
            let q = Q::from_integer(p) - coroot;
            let next = &beta + &ai;
            if q > Q::zero() && !roots.contains(&next) {
                roots.push(next);
            }
        }
        k += 1;
    }
    roots.sort_by(|a, b| a.height().cmp(&b.height()).then(a.cmp(b)));
    roots
}

fn form(sym: &[Vec<Q>], a: &Weight, b: &Weight) -> Q {
    let mut s = Q::zero();
    for (i, ai) in a.0.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.0.iter().enumerate() {
            s += ai * sym[i][j] * bj;
        }
    }
    s
}

pub fn pairing(w1: &Weight, w2: &Weight, rs: &RootSystem) -> Result<Q> {
    for w in [w1, w2] {
        if w.rank() != rs.rank {
            return Err(Error::DimensionMismatch {
                expected: rs.rank,
                got: w.rank(),
            });
        }
    }
    Ok(form(&rs.sym, w1, w2))
}

impl RootSystem {
    /// Unchecked pairing for weights already known to have the right rank.
    pub fn pair(&self, a: &Weight, b: &Weight) -> Q {
        form(&self.sym, a, b)
    }

    pub fn pair_f64(&self, a: &Weight, b: &Weight) -> f64 {
        self.pair(a, b).to_f64().unwrap_or(f64::NAN)
    }

    pub fn simple_root(&self, i: usize) -> Weight {
        Weight::simple(self.rank, i)
    }

    pub fn is_root(&self, w: &Weight) -> bool {
        self.positive_roots.contains(w)
    }

    pub fn root_parity(&self, root: &Weight) -> u8 {
        self.positive_roots
            .iter()
            .position(|r| r == root)
            .map(|k| self.parity[k])
            .unwrap_or(0)
    }

    pub fn simple_parity(&self, i: usize) -> u8 {
        self.root_parity(&self.simple_root(i))
    }

    /// Roots of the form 2β with β odd carry no factor of their own in R̂.
    pub fn is_doubled_odd(&self, root: &Weight) -> bool {
        let half = root.scale(Q::new(1, 2));
        half.0.iter().all(|c| c.is_integer()) && self.is_root(&half) && self.root_parity(&half) == 1
    }

    pub fn ordering(&self, index: usize) -> Result<&NormalOrdering> {
        self.orderings.get(index).ok_or_else(|| {
            Error::InvalidOrdering(format!(
                "{} ships {} ordering(s), index {index} requested",
                self.algebra,
                self.orderings.len()
            ))
        })
    }

    pub fn weyl_vector(&self) -> Weight {
        let mut s = Weight::zero(self.rank);
        for r in &self.positive_roots {
            s = &s + r;
        }
        s.scale(Q::new(1, 2))
    }
}

/// Convex ordering by the slope `Σ c_i w_i / ht` with `w_i = 1 − 2^{−i}`.
pub fn default_normal_ordering(rs: &RootSystem) -> NormalOrdering {
    let w: Vec<Q> = (0..rs.rank)
        .map(|i| Q::from_integer(1) - Q::new(1, 1i64 << i))
        .collect();
    let slope = |a: &Weight| {
        let s: Q = a.0.iter().zip(&w).map(|(c, x)| c * x).sum();
        s / a.height()
    };
    let mut seq = rs.positive_roots.clone();
    seq.sort_by(|a, b| {
        slope(a)
            .cmp(&slope(b))
            .then(a.height().cmp(&b.height()))
            .then(a.cmp(b))
    });
    NormalOrdering { sequence: seq }
}

pub fn validate_normal_ordering(ord: &NormalOrdering, rs: &RootSystem) -> Result<bool> {
    let seq = &ord.sequence;
    let is_perm = seq.len() == rs.positive_roots.len()
        && rs
            .positive_roots
            .iter()
            .all(|r| seq.iter().filter(|s| *s == r).count() == 1);
    if !is_perm {
        return Err(Error::NotAPermutation);
    }
    for (i, a) in seq.iter().enumerate() {
        for (j, b) in seq.iter().enumerate().skip(i) {
            let s = a + b;
            if let Some(k) = ord.position(&s)
                && !(i < k && (k < j || i == j))
            {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The summand pair `(β, γ)`, β not after γ, with the smallest ordering interval.
pub fn decomposition_pair(alpha: &Weight, ord: &NormalOrdering) -> Result<(Weight, Weight)> {
    let mut best: Option<(usize, usize, usize)> = None;
    for (i, b) in ord.sequence.iter().enumerate() {
        for (j, c) in ord.sequence.iter().enumerate().skip(i) {
            if &(b + c) == alpha {
                let gap = j - i;
                if best.is_none_or(|(g, _, _)| gap < g) {
                    best = Some((gap, i, j));
                }
            }
        }
    }
    match best {
        Some((_, i, j)) => Ok((ord.sequence[i].clone(), ord.sequence[j].clone())),
        None => Err(Error::NotDecomposable(alpha.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(c: &[i64]) -> Weight {
        Weight::from_ints(c)
    }

    #[test]
    fn a2_roots_and_form() {
        let rs = build_root_system(AlgebraId::A2);
        assert_eq!(rs.positive_roots, vec![w(&[0, 1]), w(&[1, 0]), w(&[1, 1])]);
        assert_eq!(
            pairing(&w(&[1, 0]), &w(&[0, 1]), &rs).unwrap(),
            Q::from_integer(-1)
        );
        assert_eq!(
            pairing(&w(&[1, 1]), &w(&[1, 1]), &rs).unwrap(),
            Q::from_integer(2)
        );
        assert_eq!(
            pairing(&w(&[1, 0]), &w(&[1]), &rs),
            Err(Error::DimensionMismatch {
                expected: 2,
                got: 1
            })
        );
    }

    #[test]
    fn root_counts() {
        let counts: Vec<usize> = AlgebraId::ALL
            .iter()
            .map(|&a| build_root_system(a).positive_roots.len())
            .collect();
        assert_eq!(counts, vec![1, 3, 6, 4, 2]);
        let b2 = build_root_system(AlgebraId::B2);
        assert_eq!(b2.sym[0][0], Q::from_integer(4));
        assert_eq!(b2.sym[0][1], Q::from_integer(-2));
        assert!(b2.is_root(&w(&[1, 2])));
    }

    #[test]
    fn default_orderings() {
        let a2 = build_root_system(AlgebraId::A2);
        assert_eq!(
            a2.orderings[0].sequence,
            vec![w(&[1, 0]), w(&[1, 1]), w(&[0, 1])]
        );
        assert_eq!(a2.orderings.len(), 2);
        let osp = build_root_system(AlgebraId::Osp12);
        assert_eq!(osp.orderings[0].sequence, vec![w(&[1]), w(&[2])]);
        assert_eq!(osp.orderings.len(), 1);
        assert!(matches!(osp.ordering(1), Err(Error::InvalidOrdering(_))));
        for id in AlgebraId::ALL {
            let rs = build_root_system(id);
            for o in &rs.orderings {
                assert_eq!(validate_normal_ordering(o, &rs), Ok(true), "{id}");
            }
        }
    }

    #[test]
    fn validation_examples() {
        let a2 = build_root_system(AlgebraId::A2);
        let bad = NormalOrdering {
            sequence: vec![w(&[1, 0]), w(&[0, 1]), w(&[1, 1])],
        };
        assert_eq!(validate_normal_ordering(&bad, &a2), Ok(false));
        let short = NormalOrdering {
            sequence: vec![w(&[1, 0])],
        };
        assert_eq!(
            validate_normal_ordering(&short, &a2),
            Err(Error::NotAPermutation)
        );
        let osp = build_root_system(AlgebraId::Osp12);
        let rev = osp.orderings[0].reversed();
        assert_eq!(validate_normal_ordering(&rev, &osp), Ok(false));
    }

    #[test]
    fn decompositions() {
        let a2 = build_root_system(AlgebraId::A2);
        let p = decomposition_pair(&w(&[1, 1]), &a2.orderings[0]).unwrap();
        assert_eq!(p, (w(&[1, 0]), w(&[0, 1])));
        assert!(matches!(
            decomposition_pair(&w(&[1, 0]), &a2.orderings[0]),
            Err(Error::NotDecomposable(_))
        ));
        let osp = build_root_system(AlgebraId::Osp12);
        assert_eq!(
            decomposition_pair(&w(&[2]), &osp.orderings[0]).unwrap(),
            (w(&[1]), w(&[1]))
        );

        // both pairs span four steps here; the earlier β wins the tie
        let a3 = build_root_system(AlgebraId::A3);
        let ord = NormalOrdering {
            sequence: vec![
                w(&[1, 0, 0]),
                w(&[1, 1, 0]),
                w(&[1, 1, 1]),
                w(&[0, 1, 0]),
                w(&[0, 1, 1]),
                w(&[0, 0, 1]),
            ],
        };
        assert_eq!(validate_normal_ordering(&ord, &a3), Ok(true));
        let p = decomposition_pair(&w(&[1, 1, 1]), &ord).unwrap();
        assert_eq!(p, (w(&[1, 0, 0]), w(&[0, 1, 1])));
        let p = decomposition_pair(&w(&[1, 1, 0]), &ord).unwrap();
        assert_eq!(p, (w(&[1, 0, 0]), w(&[0, 1, 0])));
    }

    #[test]
    fn doubled_odd_root() {
        let osp = build_root_system(AlgebraId::Osp12);
        assert!(osp.is_doubled_odd(&w(&[2])));
        assert!(!osp.is_doubled_odd(&w(&[1])));
        let a1 = build_root_system(AlgebraId::A1);
        assert!(!a1.is_doubled_odd(&w(&[2])));
    }

    #[test]
    fn parse_ids() {
        assert_eq!("sl3".parse::<AlgebraId>().unwrap(), AlgebraId::A2);
        assert_eq!("OSP12".parse::<AlgebraId>().unwrap(), AlgebraId::Osp12);
        assert!(matches!(
            "E8".parse::<AlgebraId>(),
            Err(Error::UnknownAlgebra(_))
        ));
    }
}
