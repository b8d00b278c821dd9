//! Torus characters, monomial bases of twisted sections and finite strand
//! complexes.
//!
//! All three spaces are modelled by their Cox rings. `X^-` and `X^+` share
//! `C[x_1..x_m, y_1..y_n]` graded by `deg^-(x_i) = a_i`, `deg^-(y_j) = -b_j`
//! (`deg^+ = -deg^-`). `Y` has the extra coordinate `e` cutting out the
//! exceptional divisor, with `Z^2`-grading `deg x_i = (a_i, 0)`,
//! `deg y_j = (0, b_j)`, `deg e = (-1, -1)`. A Laurent monomial of degree
//! zero is a character of the dense torus, and the same degree-zero
//! lattice serves all three spaces via `e = sum(a alpha) = sum(b beta)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use crate::sheaf::{Space, TwistClass};
use crate::weights::WeightSequence;

/// Exponent vector of a Laurent monomial `x^alpha y^beta e^e`; `e` stays 0
/// off `Y`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Character {
    pub alpha: Vec<i64>,
    pub beta: Vec<i64>,
    pub e: i64,
}

impl Character {
    pub fn new(alpha: Vec<i64>, beta: Vec<i64>, e: i64) -> Self {
        Character { alpha, beta, e }
    }

    pub fn zero(m: usize, n: usize) -> Self {
        Character { alpha: vec![0; m], beta: vec![0; n], e: 0 }
    }

    pub fn x(m: usize, n: usize, i: usize) -> Self {
        let mut c = Character::zero(m, n);
        c.alpha[i] = 1;
        c
    }

    pub fn y(m: usize, n: usize, j: usize) -> Self {
        let mut c = Character::zero(m, n);
        c.beta[j] = 1;
        c
    }

    pub fn add(&self, other: &Character) -> Character {
        Character {
            alpha: self.alpha.iter().zip(&other.alpha).map(|(a, b)| a + b).collect(),
            beta: self.beta.iter().zip(&other.beta).map(|(a, b)| a + b).collect(),
            e: self.e + other.e,
        }
    }

    pub fn sub(&self, other: &Character) -> Character {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, k: i64) -> Character {
        Character {
            alpha: self.alpha.iter().map(|v| v * k).collect(),
            beta: self.beta.iter().map(|v| v * k).collect(),
            e: self.e * k,
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        self.alpha.iter().chain(&self.beta).all(|&v| v >= 0) && self.e >= 0
    }

    /// `alpha ++ beta ++ [e]`.
    pub fn flat(&self) -> Vec<i64> {
        let mut v = Vec::with_capacity(self.alpha.len() + self.beta.len() + 1);
        v.extend_from_slice(&self.alpha);
        v.extend_from_slice(&self.beta);
        v.push(self.e);
        v
    }

    pub fn from_flat(v: &[i64], m: usize, n: usize) -> Character {
        Character { alpha: v[..m].to_vec(), beta: v[m..m + n].to_vec(), e: v[m + n] }
    }

    pub fn weighted_x(&self, seq: &WeightSequence) -> i64 {
        self.alpha.iter().zip(seq.a()).map(|(v, w)| v * w).sum()
    }

    pub fn weighted_y(&self, seq: &WeightSequence) -> i64 {
        self.beta.iter().zip(seq.b()).map(|(v, w)| v * w).sum()
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, &v) in self.alpha.iter().enumerate() {
            if v != 0 {
                parts.push(if v == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, v) });
            }
        }
        for (j, &v) in self.beta.iter().enumerate() {
            if v != 0 {
                parts.push(if v == 1 { format!("y{}", j + 1) } else { format!("y{}^{}", j + 1, v) });
            }
        }
        if self.e != 0 {
            parts.push(if self.e == 1 { "e".into() } else { format!("e^{}", self.e) });
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

/// A nonzero integer multiple of a monomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Monomial {
    pub exponent: Character,
    pub coeff: i64,
}

impl Monomial {
    pub fn new(exponent: Character, coeff: i64) -> Result<Self> {
        if coeff == 0 {
            return Err(Error::InconsistentDegrees("zero monomial coefficient".into()));
        }
        Ok(Monomial { exponent, coeff })
    }
}

/// Degree of a character as the twist class it is a section of.
pub fn degree(seq: &WeightSequence, space: Space, ch: &Character) -> TwistClass {
    let ax = ch.weighted_x(seq);
    let by = ch.weighted_y(seq);
    match space {
        Space::Minus => TwistClass::Minus(ax - by),
        Space::Plus => TwistClass::Plus(by - ax),
        Space::Y => TwistClass::Y(ax - ch.e, by - ch.e),
    }
}

/// Which Cox coordinates are inverted: the sections over an intersection
/// of coordinate charts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Localization {
    pub inv_x: u32,
    pub inv_y: u32,
}

impl Localization {
    pub const NONE: Localization = Localization { inv_x: 0, inv_y: 0 };

    pub fn x_chart(i: usize) -> Self {
        Localization { inv_x: 1 << i, inv_y: 0 }
    }

    pub fn y_chart(j: usize) -> Self {
        Localization { inv_x: 0, inv_y: 1 << j }
    }

    pub fn union(self, other: Localization) -> Localization {
        Localization { inv_x: self.inv_x | other.inv_x, inv_y: self.inv_y | other.inv_y }
    }
}

/// Whether `x^c` lies in the localization of the Cox ring (exponents of
/// non-inverted coordinates nonnegative, `e` never inverted).
pub fn in_localization(c: &Character, loc: Localization) -> bool {
    c.alpha.iter().enumerate().all(|(i, &v)| v >= 0 || loc.inv_x & (1 << i) != 0)
        && c.beta.iter().enumerate().all(|(j, &v)| v >= 0 || loc.inv_y & (1 << j) != 0)
        && c.e >= 0
}

/// Characters in `[-bound, bound]^{m+n}` whose monomial is a global section
/// of `twist`, in lexicographic order. On `Y` the exponent of `e` is the
/// one forced by the twist.
pub fn section_basis(seq: &WeightSequence, twist: TwistClass, bound: i64) -> Vec<Character> {
    let (m, n) = (seq.m(), seq.n());
    let mut out = Vec::new();
    for_each_in_box(m + n, bound, |v| {
        let mut c = Character::new(v[..m].to_vec(), v[m..].to_vec(), 0);
        let ok = match twist {
            TwistClass::Minus(_) => {
                // H^0 of X^- is R when m >= 2 and R[1/x_1] when m == 1
                let loc = if m == 1 { Localization::x_chart(0) } else { Localization::NONE };
                in_localization(&c, loc) && degree(seq, Space::Minus, &c) == twist
            }
            TwistClass::Plus(_) => {
                let loc = if n == 1 { Localization::y_chart(0) } else { Localization::NONE };
                in_localization(&c, loc) && degree(seq, Space::Plus, &c) == twist
            }
            TwistClass::Y(k1, k2) => {
                c.e = c.weighted_x(seq) - k1;
                in_localization(&c, Localization::NONE) && c.weighted_y(seq) - c.e == k2
            }
        };
        if ok {
            out.push(c);
        }
    });
    out
}

/// Visits every vector of `[-bound, bound]^len` in lexicographic order.
pub fn for_each_in_box(len: usize, bound: i64, mut f: impl FnMut(&[i64])) {
    if bound < 0 {
        return;
    }
    let mut v = vec![-bound; len];
    loop {
        f(&v);
        let mut k = len;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            if v[k] < bound {
                v[k] += 1;
                for t in &mut v[k + 1..] {
                    *t = -bound;
                }
                break;
            }
        }
    }
}

/// Degree-zero characters `(alpha, beta)` with all entries in
/// `[-bound, bound]`, i.e. `sum(a alpha) = sum(b beta)`; on `Y` the
/// `e`-exponent is that common value. Lexicographic order.
pub fn torus_characters(seq: &WeightSequence, space: Space, bound: i64) -> Vec<Character> {
    let (m, n) = (seq.m(), seq.n());
    let weights: Vec<i64> = seq.a().iter().copied().chain(seq.b().iter().map(|b| -b)).collect();
    let len = m + n;
    let mut out = Vec::new();
    if len == 0 {
        return out;
    }
    let last = weights[len - 1];
    for_each_in_box(len - 1, bound, |head| {
        let partial: i64 = head.iter().zip(&weights).map(|(v, w)| v * w).sum();
        if partial % last != 0 {
            return;
        }
        let tail = -partial / last;
        if tail.abs() > bound {
            return;
        }
        let mut flat = head.to_vec();
        flat.push(tail);
        let mut c = Character::new(flat[..m].to_vec(), flat[m..].to_vec(), 0);
        if space == Space::Y {
            c.e = c.weighted_x(seq);
        }
        out.push(c);
    });
    out
}

/// Number of candidate points [`torus_characters`] scans.
pub fn box_candidates(seq: &WeightSequence, bound: i64) -> u64 {
    let side = (2 * bound.max(0) + 1) as u64;
    side.saturating_pow((seq.m() + seq.n()).saturating_sub(1) as u32)
}

/// A bounded complex of finite-dimensional rational vector spaces with
/// integer differentials, cohomologically indexed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrandComplex {
    /// Cohomological degree of `dims[0]`.
    pub start: i32,
    pub dims: Vec<usize>,
    /// `maps[t]` goes from position `t` to `t + 1` (`dims[t+1] x dims[t]`).
    pub maps: Vec<IntMatrix>,
}

impl StrandComplex {
    pub fn new(start: i32, dims: Vec<usize>, maps: Vec<IntMatrix>) -> Result<Self> {
        if maps.len() + 1 != dims.len().max(1) {
            return Err(Error::InconsistentDegrees("strand map count mismatch".into()));
        }
        for (t, d) in maps.iter().enumerate() {
            if d.rows() != dims[t + 1] || d.cols() != dims[t] {
                return Err(Error::InconsistentDegrees(format!("strand map {t} has wrong shape")));
            }
        }
        for t in 1..maps.len() {
            if !maps[t].mul(&maps[t - 1]).is_zero() {
                return Err(Error::NotAComplex(start + t as i32 - 1));
            }
        }
        Ok(StrandComplex { start, dims, maps })
    }

    pub fn empty() -> Self {
        StrandComplex { start: 0, dims: Vec::new(), maps: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    pub fn euler_characteristic(&self) -> i64 {
        alternating(self.start, &self.dims)
    }
}

fn alternating(start: i32, dims: &[usize]) -> i64 {
    dims.iter()
        .enumerate()
        .map(|(t, &d)| if (start + t as i32).rem_euclid(2) == 0 { d as i64 } else { -(d as i64) })
        .sum()
}

/// Homology dimensions, one per position of the strand.
pub fn homology_dims(strand: &StrandComplex) -> Vec<usize> {
    let ranks: Vec<usize> = strand.maps.iter().map(IntMatrix::rank).collect();
    (0..strand.dims.len())
        .map(|t| {
            let out_rank = if t < ranks.len() { ranks[t] } else { 0 };
            let in_rank = if t > 0 { ranks[t - 1] } else { 0 };
            strand.dims[t] - out_rank - in_rank
        })
        .collect()
}

/// Euler characteristic of a homology vector laid out like the strand.
pub fn homology_euler(start: i32, h: &[usize]) -> i64 {
    alternating(start, h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &str) -> WeightSequence {
        s.parse().unwrap()
    }

    #[test]
    fn degree_conventions() {
        let s = seq("1,2;1,1,1");
        let x1 = Character::x(2, 3, 0);
        assert_eq!(degree(&s, Space::Minus, &x1), TwistClass::Minus(1));
        let x2y1 = Character::x(2, 3, 1).add(&Character::y(2, 3, 0));
        assert_eq!(degree(&s, Space::Minus, &x2y1), TwistClass::Minus(1));
        assert_eq!(degree(&s, Space::Plus, &x2y1), TwistClass::Plus(-1));
        let mut ch = x2y1.clone();
        ch.e = 1;
        assert_eq!(degree(&s, Space::Y, &ch), TwistClass::Y(1, 0));
    }

    #[test]
    fn section_basis_examples() {
        let s = seq("1,2;1,1,1");
        assert!(section_basis(&s, TwistClass::Minus(0), 1).contains(&Character::zero(2, 3)));
        let p112 = seq("1,1,2;");
        let got: Vec<String> = section_basis(&p112, TwistClass::Minus(2), 2).iter().map(|c| c.to_string()).collect();
        assert_eq!(got, vec!["x3", "x2^2", "x1*x2", "x1^2"]);
        let ys = section_basis(&s, TwistClass::Y(1, 1), 2);
        assert!(!ys.is_empty());
        for c in &ys {
            assert_eq!(c.weighted_x(&s), c.weighted_y(&s));
            assert!(c.weighted_x(&s) >= 1);
            assert_eq!(degree(&s, Space::Y, c), TwistClass::Y(1, 1));
        }
        let x1y1 = Character::new(vec![1, 0], vec![1, 0, 0], 0);
        assert!(ys.iter().any(|c| c.alpha == x1y1.alpha && c.beta == x1y1.beta));
    }

    #[test]
    fn torus_characters_have_degree_zero() {
        let s = seq("1,2;1,1,1");
        let chars = torus_characters(&s, Space::Y, 2);
        assert!(chars.contains(&Character::new(vec![0, 0], vec![0, 0, 0], 0)));
        for c in &chars {
            assert_eq!(degree(&s, Space::Y, c), TwistClass::Y(0, 0));
        }
        let brute = {
            let mut count = 0;
            for_each_in_box(5, 2, |v| {
                if v[0] + 2 * v[1] == v[2] + v[3] + v[4] {
                    count += 1;
                }
            });
            count
        };
        assert_eq!(chars.len(), brute);
    }

    #[test]
    fn strand_homology() {
        let single = StrandComplex::new(0, vec![3], vec![]).unwrap();
        assert_eq!(homology_dims(&single), vec![3]);
        let exact = StrandComplex::new(
            -1,
            vec![1, 2, 1],
            vec![IntMatrix::from_rows(&[vec![1], vec![-1]]), IntMatrix::from_rows(&[vec![1, 1]])],
        )
        .unwrap();
        assert_eq!(homology_dims(&exact), vec![0, 0, 0]);
        let bad = StrandComplex::new(
            0,
            vec![1, 1, 1],
            vec![IntMatrix::from_rows(&[vec![1]]), IntMatrix::from_rows(&[vec![1]])],
        );
        assert_eq!(bad, Err(Error::NotAComplex(0)));
        assert!(homology_dims(&StrandComplex::empty()).is_empty());
    }
}
