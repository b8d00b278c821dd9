//! Weight sequences `(a; b)` defining the `G_m`-action
//! `t . (x, y) = (t^a x, t^-b y)` and everything that can be read off
//! them directly: normalization to a well-formed sequence, the flip/flop
//! classification and the canonical-bundle extension.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The pair `(a; b)` of positive weight tuples.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightSequence {
    a: Vec<i64>,
    b: Vec<i64>,
}

impl WeightSequence {
    pub fn new(a: Vec<i64>, b: Vec<i64>) -> Result<Self> {
        if a.is_empty() && b.is_empty() {
            return Err(Error::InvalidSequence("m + n must be at least 1".into()));
        }
        if let Some(w) = a.iter().chain(&b).find(|&&w| w < 1) {
            return Err(Error::InvalidSequence(format!("weight {w} is not positive")));
        }
        Ok(WeightSequence { a, b })
    }

    pub fn a(&self) -> &[i64] {
        &self.a
    }

    pub fn b(&self) -> &[i64] {
        &self.b
    }

    pub fn m(&self) -> usize {
        self.a.len()
    }

    pub fn n(&self) -> usize {
        self.b.len()
    }

    pub fn sum_a(&self) -> i64 {
        self.a.iter().sum()
    }

    pub fn sum_b(&self) -> i64 {
        self.b.iter().sum()
    }

    /// `sum(a) - sum(b)`, the difference of the pulled-back canonical classes.
    pub fn klevel(&self) -> i64 {
        self.sum_a() - self.sum_b()
    }

    /// Exchanges the roles of `x` and `y`; `X^-(b; a) = X^+(a; b)`.
    pub fn swap(&self) -> WeightSequence {
        WeightSequence { a: self.b.clone(), b: self.a.clone() }
    }

    /// All weights in input order, `a` first.
    pub fn all_weights(&self) -> Vec<i64> {
        self.a.iter().chain(&self.b).copied().collect()
    }

    fn with_weights(&self, all: &[i64]) -> WeightSequence {
        let (a, b) = all.split_at(self.m());
        WeightSequence { a: a.to_vec(), b: b.to_vec() }
    }

    /// `gcd` of all weights except the `k`-th (0-based over `a` then `b`).
    /// An empty list counts as 1.
    pub fn omit_one_gcds(&self) -> Vec<i64> {
        omit_one_gcds(&self.all_weights())
    }

    pub fn global_gcd(&self) -> i64 {
        self.all_weights().iter().fold(0, |g, &w| g.gcd(&w))
    }

    pub fn is_well_formed(&self) -> bool {
        self.global_gcd() == 1 && self.omit_one_gcds().iter().all(|&c| c == 1)
    }

    /// True when the two sequences agree as a pair of multisets, possibly
    /// after exchanging the sides.
    pub fn is_permutation_of(&self, other: &WeightSequence) -> bool {
        let sorted = |v: &[i64]| {
            let mut v = v.to_vec();
            v.sort_unstable();
            v
        };
        let (sa, sb) = (sorted(&self.a), sorted(&self.b));
        let (oa, ob) = (sorted(&other.a), sorted(&other.b));
        (sa == oa && sb == ob) || (sa == ob && sb == oa)
    }
}

fn omit_one_gcds(all: &[i64]) -> Vec<i64> {
    (0..all.len())
        .map(|k| {
            let g = all.iter().enumerate().filter(|&(i, _)| i != k).fold(0i64, |g, (_, &w)| g.gcd(&w));
            if g == 0 {
                1
            } else {
                g
            }
        })
        .collect()
}

impl fmt::Display for WeightSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[i64]| v.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
        write!(f, "{};{}", join(&self.a), join(&self.b))
    }
}

impl FromStr for WeightSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = |reason: &str| Error::Parse { input: s.to_string(), reason: reason.to_string() };
        let (left, right) = s.split_once(';').ok_or_else(|| err("missing ';'"))?;
        if right.contains(';') {
            return Err(err("more than one ';'"));
        }
        let side = |part: &str| -> Result<Vec<i64>> {
            if part.is_empty() {
                return Ok(Vec::new());
            }
            part.split(',').map(|tok| tok.parse::<i64>().map_err(|_| err(&format!("bad entry {tok:?}")))).collect()
        };
        let seq = WeightSequence::new(side(left)?, side(right)?);
        seq.map_err(|e| err(&e.to_string()))
    }
}

/// The reduction steps applied by [`normalize`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizationTrace {
    pub input: WeightSequence,
    pub global_gcd: i64,
    /// `c_k` of the globally reduced sequence.
    pub omit_one_gcds: Vec<i64>,
    /// `d_k`; the `k`-th reduced weight is divided by `d_k`.
    pub lcm_factors: Vec<i64>,
    pub output: WeightSequence,
}

/// Divides out the global gcd, then divides each weight by the lcm of the
/// other omit-one gcds. The pass is repeated until the result is
/// well-formed, and `lcm_factors` accumulates over passes.
pub fn normalize(seq: &WeightSequence) -> NormalizationTrace {
    let global_gcd = seq.global_gcd();
    let mut current: Vec<i64> = seq.all_weights().iter().map(|w| w / global_gcd).collect();
    let first_gcds = omit_one_gcds(&current);
    let mut factors = vec![1i64; current.len()];
    loop {
        let c = omit_one_gcds(&current);
        if c.iter().all(|&ci| ci == 1) {
            break;
        }
        for k in 0..current.len() {
            let d = c.iter().enumerate().filter(|&(i, _)| i != k).fold(1i64, |l, (_, &ci)| l.lcm(&ci));
            current[k] /= d;
            factors[k] *= d;
        }
    }
    NormalizationTrace {
        input: seq.clone(),
        global_gcd,
        omit_one_gcds: first_gcds,
        lcm_factors: factors,
        output: seq.with_weights(&current),
    }
}

pub fn is_well_formed(seq: &WeightSequence) -> bool {
    seq.is_well_formed()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kind {
    WeightedProjectiveSpace,
    DivisorialContraction,
    Flip,
    Flop,
    Empty,
}

impl Kind {
    /// The kind seen from the other side of the wall.
    pub fn swapped(self) -> Kind {
        match self {
            Kind::WeightedProjectiveSpace => Kind::Empty,
            Kind::Empty => Kind::WeightedProjectiveSpace,
            k => k,
        }
    }
}

/// Which derived category embeds into which.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FfDirection {
    MinusIntoPlus,
    PlusIntoMinus,
    Equivalence,
}

impl FfDirection {
    pub fn swapped(self) -> FfDirection {
        match self {
            FfDirection::MinusIntoPlus => FfDirection::PlusIntoMinus,
            FfDirection::PlusIntoMinus => FfDirection::MinusIntoPlus,
            FfDirection::Equivalence => FfDirection::Equivalence,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub kind: Kind,
    pub klevel: i64,
    pub ff_direction: Option<FfDirection>,
    /// Classical name of the transformation, when it has one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

/// Atiyah's flop `(1,1;1,1)` and Francia's flip `(2,1;1,1)`, up to
/// reordering and exchanging the sides.
pub fn classical_name(seq: &WeightSequence) -> Option<&'static str> {
    let known = [("1,1;1,1", "Atiyah flop"), ("2,1;1,1", "Francia flip")];
    known
        .iter()
        .find(|(s, _)| s.parse::<WeightSequence>().is_ok_and(|k| seq.is_permutation_of(&k)))
        .map(|(_, name)| *name)
}

pub fn classify(seq: &WeightSequence) -> ClassificationReport {
    let (m, n) = (seq.m(), seq.n());
    let klevel = seq.klevel();
    let kind = match (m, n) {
        (0, _) => Kind::Empty,
        (_, 0) => Kind::WeightedProjectiveSpace,
        (1, _) | (_, 1) => Kind::DivisorialContraction,
        _ if klevel == 0 => Kind::Flop,
        _ => Kind::Flip,
    };
    let ff_direction = match kind {
        Kind::Flop => Some(FfDirection::Equivalence),
        Kind::Flip if klevel < 0 => Some(FfDirection::MinusIntoPlus),
        Kind::Flip => Some(FfDirection::PlusIntoMinus),
        _ => None,
    };
    ClassificationReport { kind, klevel, ff_direction, name: classical_name(seq).map(str::to_string) }
}

/// `(a; b) -> (a; b, c)` with `c = sum(a) - sum(b) > 0`: the weights of the
/// total space of the canonical bundle of `X^-`.
pub fn canonical_extension(seq: &WeightSequence) -> Result<WeightSequence> {
    let c = seq.klevel();
    if c <= 0 {
        return Err(Error::NonPositiveKLevel(c));
    }
    let mut b = seq.b.clone();
    b.push(c);
    WeightSequence::new(seq.a.clone(), b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &str) -> WeightSequence {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display_roundtrip() {
        for s in ["1,2;1,1,1", "1,2,3;", ";4,5", "7;1"] {
            assert_eq!(seq(s).to_string(), s);
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("1,2".parse::<WeightSequence>().is_err());
        assert!(";".parse::<WeightSequence>().is_err());
        assert!("1,0;1".parse::<WeightSequence>().is_err());
        assert!("1,,2;1".parse::<WeightSequence>().is_err());
        assert!("1;2;3".parse::<WeightSequence>().is_err());
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize(&seq("2,4;2,2")).output, seq("1,2;1,1"));
        let t = normalize(&seq("2,3;2,2"));
        assert_eq!(t.output, seq("1,3;1,1"));
        assert_eq!(t.omit_one_gcds, vec![1, 2, 1, 1]);
        assert_eq!(t.lcm_factors, vec![2, 1, 2, 2]);
        assert_eq!(normalize(&seq("1,2;1,1,1")).output, seq("1,2;1,1,1"));
    }

    #[test]
    fn well_formedness() {
        assert!(is_well_formed(&seq("1,2;1,1,1")));
        assert!(!is_well_formed(&seq("2,3;2,2")));
        assert!(is_well_formed(&seq("1,1;1,1")));
        assert!(!is_well_formed(&seq("5;")));
        assert!(is_well_formed(&seq("1;")));
    }

    #[test]
    fn classify_examples() {
        let r = classify(&seq("1,1;1,1"));
        assert_eq!((r.kind, r.klevel), (Kind::Flop, 0));
        let r = classify(&seq("2,1;1,1"));
        assert_eq!((r.kind, r.klevel), (Kind::Flip, 1));
        assert_eq!(r.ff_direction, Some(FfDirection::PlusIntoMinus));
        assert_eq!(classify(&seq("1,2,3;")).kind, Kind::WeightedProjectiveSpace);
        assert_eq!(classify(&seq(";1,2")).kind, Kind::Empty);
        assert_eq!(classify(&seq("1,2;3")).kind, Kind::DivisorialContraction);
        assert_eq!(classify(&seq("3;1,2")).kind, Kind::DivisorialContraction);
    }

    #[test]
    fn canonical_extension_examples() {
        assert_eq!(canonical_extension(&seq("1,2,3;1")).unwrap(), seq("1,2,3;1,5"));
        assert_eq!(canonical_extension(&seq("1,5;2,3")).unwrap(), seq("1,5;2,3,1"));
        assert_eq!(canonical_extension(&seq("1,1;1,1")), Err(Error::NonPositiveKLevel(0)));
    }

    #[test]
    fn classical_names() {
        assert_eq!(classify(&seq("1,1;1,1")).name.as_deref(), Some("Atiyah flop"));
        assert_eq!(classify(&seq("1,2;1,1")).name.as_deref(), Some("Francia flip"));
        assert_eq!(classify(&seq("1,1;2,1")).kind, Kind::Flip);
        assert_eq!(classify(&seq("1,2;1,1,1")).name, None);
    }

    #[test]
    fn five_flip_cases_extend_to_the_same_flop() {
        let target = seq("1,2,3;1,5");
        for s in ["1,2,3;5", "1,2,3;1", "1,5;2,3", "1,5;1,2", "1,5;1,3"] {
            let ext = canonical_extension(&seq(s)).unwrap();
            assert!(ext.is_permutation_of(&target), "{s} -> {ext}");
            assert_eq!(ext.klevel(), 0);
        }
    }
}
