//! Twist classes, divisors, canonical classes, pullback and pushforward on
//! the three spaces, the Serre functor, and the line-bundle models of
//! `O_{E^+}(d)` and `Omega^1_{E^+}(d)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::complex::{MonomialComplex, Term};
use crate::error::{Error, Result};
use crate::graded::{degree, Character};
use crate::resolution::ThresholdIdeal;
use crate::weights::WeightSequence;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Space {
    Minus,
    Plus,
    Y,
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Space::Minus => "X-",
            Space::Plus => "X+",
            Space::Y => "Y",
        })
    }
}

/// `O(k)` on `X^-` or `X^+`, `O(k1, k2)` on `Y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TwistClass {
    Minus(i64),
    Plus(i64),
    Y(i64, i64),
}

impl TwistClass {
    pub fn space(&self) -> Space {
        match self {
            TwistClass::Minus(_) => Space::Minus,
            TwistClass::Plus(_) => Space::Plus,
            TwistClass::Y(..) => Space::Y,
        }
    }

    pub fn on(space: Space, k: i64) -> Result<TwistClass> {
        match space {
            Space::Minus => Ok(TwistClass::Minus(k)),
            Space::Plus => Ok(TwistClass::Plus(k)),
            Space::Y => Err(Error::WrongSide { what: "a single-integer twist".into(), space }),
        }
    }

    pub fn combine(self, other: TwistClass) -> Result<TwistClass> {
        match (self, other) {
            (TwistClass::Minus(a), TwistClass::Minus(b)) => Ok(TwistClass::Minus(a + b)),
            (TwistClass::Plus(a), TwistClass::Plus(b)) => Ok(TwistClass::Plus(a + b)),
            (TwistClass::Y(a, b), TwistClass::Y(c, d)) => Ok(TwistClass::Y(a + c, b + d)),
            _ => Err(Error::WrongSide { what: format!("{other}"), space: self.space() }),
        }
    }
}

impl fmt::Display for TwistClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TwistClass::Minus(k) => write!(f, "O-({k})"),
            TwistClass::Plus(k) => write!(f, "O+({k})"),
            TwistClass::Y(p, q) => write!(f, "O_Y({p},{q})"),
        }
    }
}

/// Prime divisors: `A(i)` and `B(j)` are 1-based coordinate hyperplanes,
/// `Ebar` the exceptional divisor of `Y`, `Eminus`/`Eplus` the exceptional
/// loci of `X^-`/`X^+` (divisors only when they are a coordinate hyperplane).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DivisorId {
    A(usize),
    B(usize),
    Ebar,
    Eminus,
    Eplus,
}

pub fn class_of_divisor(seq: &WeightSequence, space: Space, divisor: DivisorId) -> Result<TwistClass> {
    let wrong = || Error::WrongSide { what: format!("{divisor:?}"), space };
    match divisor {
        DivisorId::A(i) => {
            let a = *seq.a().get(i.wrapping_sub(1)).ok_or(Error::IndexOutOfRange { index: i, len: seq.m() })?;
            Ok(match space {
                Space::Minus => TwistClass::Minus(a),
                Space::Plus => TwistClass::Plus(-a),
                Space::Y => TwistClass::Y(a, 0),
            })
        }
        DivisorId::B(j) => {
            let b = *seq.b().get(j.wrapping_sub(1)).ok_or(Error::IndexOutOfRange { index: j, len: seq.n() })?;
            Ok(match space {
                Space::Minus => TwistClass::Minus(-b),
                Space::Plus => TwistClass::Plus(b),
                Space::Y => TwistClass::Y(0, b),
            })
        }
        DivisorId::Ebar if space == Space::Y => Ok(TwistClass::Y(-1, -1)),
        DivisorId::Eminus if space == Space::Minus && seq.n() == 1 => Ok(TwistClass::Minus(-seq.b()[0])),
        DivisorId::Eplus if space == Space::Plus && seq.m() == 1 => Ok(TwistClass::Plus(-seq.a()[0])),
        _ => Err(wrong()),
    }
}

/// Dimension of each of the three spaces.
pub fn dimension(seq: &WeightSequence) -> i32 {
    (seq.m() + seq.n()) as i32 - 1
}

pub fn dualizing_class(seq: &WeightSequence, space: Space) -> TwistClass {
    let (sa, sb) = (seq.sum_a(), seq.sum_b());
    match space {
        Space::Minus => TwistClass::Minus(sb - sa),
        Space::Plus => TwistClass::Plus(sa - sb),
        Space::Y => TwistClass::Y(1 - sa, 1 - sb),
    }
}

/// Multiplier `r` with `omega_{Y/X} = O(r Ebar)` for `X = X^-` or `X^+`.
pub fn relative_dualizing_ebar(seq: &WeightSequence, base: Space) -> Result<i64> {
    match base {
        Space::Plus => Ok(seq.sum_a() - 1),
        Space::Minus => Ok(seq.sum_b() - 1),
        Space::Y => Err(Error::WrongSide { what: "relative dualizing sheaf".into(), space: base }),
    }
}

pub fn pullback(seq: &WeightSequence, side: Space, k: i64) -> Result<TwistClass> {
    let _ = seq;
    match side {
        Space::Minus => Ok(TwistClass::Y(k, 0)),
        Space::Plus => Ok(TwistClass::Y(0, k)),
        Space::Y => Err(Error::WrongSide { what: "pullback source".into(), space: side }),
    }
}

/// `R mu_* O_Y(p, q)` along `mu^-` or `mu^+`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PushforwardResult {
    LineTwist(i64),
    /// `I_q(s)`.
    IdealTwist {
        q: i64,
        s: i64,
    },
    NotClosedForm,
}

/// Writes `O_Y(p, q) = mu^* O(t) (x) O(-r Ebar)` and applies the vanishing
/// ranges for `r`; the plus side is the minus rule for the swapped sequence.
pub fn pushforward_rule(seq: &WeightSequence, side: Space, p: i64, q: i64) -> Result<PushforwardResult> {
    if seq.m() < 2 || seq.n() < 2 {
        return Err(Error::TooFewVariables { needed: 2, m: seq.m(), n: seq.n() });
    }
    let (r, t, fiber) = match side {
        Space::Minus => (q, p - q, seq.sum_b()),
        Space::Plus => (p, q - p, seq.sum_a()),
        Space::Y => return Err(Error::WrongSide { what: "pushforward target".into(), space: side }),
    };
    Ok(if r >= 1 {
        PushforwardResult::IdealTwist { q: r, s: t }
    } else if r > -fiber {
        PushforwardResult::LineTwist(t)
    } else {
        PushforwardResult::NotClosedForm
    })
}

/// A fixed vector `w` with `deg^-(w) = 1`: a coordinate of weight one when
/// there is one, else a Bezout combination.
pub fn unit_anchor(seq: &WeightSequence) -> Result<Character> {
    let (m, n) = (seq.m(), seq.n());
    if let Some(i) = seq.a().iter().position(|&a| a == 1) {
        return Ok(Character::x(m, n, i));
    }
    if let Some(j) = seq.b().iter().position(|&b| b == 1) {
        return Ok(Character::y(m, n, j).scale(-1));
    }
    let weights: Vec<i64> = seq.a().iter().copied().chain(seq.b().iter().map(|b| -b)).collect();
    let mut g = 0i64;
    let mut coeffs = vec![0i64; weights.len()];
    for (idx, &w) in weights.iter().enumerate() {
        let (d, u, v) = ext_gcd(g, w);
        for c in &mut coeffs[..idx] {
            *c *= u;
        }
        coeffs[idx] = v;
        g = d;
    }
    if g.abs() != 1 {
        return Err(Error::InvalidSequence(format!("weights of {seq} share the factor {}", g.abs())));
    }
    if g == -1 {
        coeffs.iter_mut().for_each(|c| *c = -*c);
    }
    Ok(Character::new(coeffs[..m].to_vec(), coeffs[m..].to_vec(), 0))
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1, mut s0, mut s1, mut t0, mut t1) = (a, b, 1, 0, 0, 1);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0, s0, t0)
}

/// The anchor used for `O(twist)`: multiples of [`unit_anchor`] on `X^-`,
/// their negatives on `X^+`, and `mu^-`-pullbacks twisted by `Ebar` on `Y`.
pub fn anchor(seq: &WeightSequence, twist: TwistClass) -> Result<Character> {
    let w = unit_anchor(seq)?;
    Ok(match twist {
        TwistClass::Minus(k) => w.scale(k),
        TwistClass::Plus(k) => w.scale(-k),
        TwistClass::Y(p, q) => {
            let mut c = pullback_anchor(seq, Space::Minus, &w.scale(p - q))?;
            c.e -= q;
            c
        }
    })
}

/// Anchor of the dualizing sheaf: minus the sum of all Cox coordinates.
pub fn omega_anchor(seq: &WeightSequence, space: Space) -> Character {
    let (m, n) = (seq.m(), seq.n());
    Character::new(vec![-1; m], vec![-1; n], if space == Space::Y { -1 } else { 0 })
}

/// Anchor of the pullback along `mu^-` (`e = sum(b beta)`) or `mu^+`
/// (`e = sum(a alpha)`).
pub fn pullback_anchor(seq: &WeightSequence, side: Space, s: &Character) -> Result<Character> {
    let e = match side {
        Space::Minus => s.weighted_y(seq),
        Space::Plus => s.weighted_x(seq),
        Space::Y => return Err(Error::WrongSide { what: "pullback source".into(), space: side }),
    };
    if s.e != 0 {
        return Err(Error::InconsistentDegrees(format!("anchor {s} carries an e-exponent off Y")));
    }
    Ok(Character::new(s.alpha.clone(), s.beta.clone(), e))
}

/// Pushes a `Y` term forward: the anchor drops `e`, and a positive
/// `Ebar`-power becomes a threshold ideal on the fibre coordinates.
pub fn pushforward_term(seq: &WeightSequence, side: Space, term: &Term) -> Result<(Term, PushforwardResult)> {
    if term.ideal.is_some() {
        return Err(Error::Unsupported("pushforward of an ideal term".into()));
    }
    let TwistClass::Y(p, q) = degree(seq, Space::Y, &term.anchor) else { unreachable!() };
    let rule = pushforward_rule(seq, side, p, q)?;
    let anchor = Character::new(term.anchor.alpha.clone(), term.anchor.beta.clone(), 0);
    let ideal = match rule {
        PushforwardResult::NotClosedForm => {
            let q_ebar = if side == Space::Minus { q } else { p };
            return Err(Error::PushforwardNotClosedForm { side, p, q, q_ebar });
        }
        PushforwardResult::LineTwist(_) => None,
        PushforwardResult::IdealTwist { q: r, .. } => {
            Some(if side == Space::Minus { ThresholdIdeal::on_y(seq, r)? } else { ThresholdIdeal::on_x(seq, r)? })
        }
    };
    Ok((Term { anchor, ideal }, rule))
}

/// An object together with a cohomological shift `[shift]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shifted<T> {
    pub object: T,
    pub shift: i32,
}

/// `S(O(k)) = O(k) (x) omega [dim]`.
pub fn serre_twist(seq: &WeightSequence, twist: TwistClass) -> Result<Shifted<TwistClass>> {
    Ok(Shifted { object: twist.combine(dualizing_class(seq, twist.space()))?, shift: dimension(seq) })
}

/// `S(u) = u (x) omega [dim]` on a complex.
pub fn serre_twist_complex(u: &MonomialComplex) -> MonomialComplex {
    u.twisted(&omega_anchor(u.seq(), u.space())).shifted(dimension(u.seq()))
}

/// Koszul resolution of `O_E(d)` for the exceptional locus `E^+ = {x = 0}`
/// on `X^+` (or `E^- = {y = 0}` on `X^-`): the term for a subset `S` has
/// twist `d + sum_S` and sits in degree `-|S|`.
pub fn exceptional_koszul(seq: &WeightSequence, side: Space, d: i64) -> Result<MonomialComplex> {
    if seq.m() < 2 || seq.n() < 2 {
        return Err(Error::TooFewVariables { needed: 2, m: seq.m(), n: seq.n() });
    }
    let base = match side {
        Space::Plus => anchor(seq, TwistClass::Plus(d))?,
        Space::Minus => anchor(seq, TwistClass::Minus(d))?,
        Space::Y => return Err(Error::WrongSide { what: "exceptional locus".into(), space: side }),
    };
    let mut out = MonomialComplex::new(seq, side);
    koszul_into(&mut out, seq, side, &base, 0, |_| 0)?;
    Ok(out)
}

/// Appends the Koszul complex over `base` (on the x block for `Plus`, the y
/// block for `Minus`) with degrees moved by `offset` and differential signs
/// multiplied by `sign(|S|)`. Returns the term index of each subset.
fn koszul_into(
    out: &mut MonomialComplex,
    seq: &WeightSequence,
    side: Space,
    base: &Character,
    offset: i32,
    sign_exp: impl Fn(u32) -> u32,
) -> Result<Vec<usize>> {
    let (m, n) = (seq.m(), seq.n());
    let len = if side == Space::Plus { m } else { n };
    let coord = |i: usize| if side == Space::Plus { Character::x(m, n, i) } else { Character::y(m, n, i) };
    let mut index = vec![0usize; 1 << len];
    let mut subsets: Vec<u32> = (0..(1u32 << len)).collect();
    subsets.sort_by_key(|s| (s.count_ones(), *s));
    for &s in &subsets {
        let mut a = base.clone();
        for i in 0..len {
            if s & (1 << i) != 0 {
                a = a.sub(&coord(i));
            }
        }
        index[s as usize] = out.push(offset - s.count_ones() as i32, Term::line(a));
    }
    for &s in &subsets {
        let size = s.count_ones();
        let outer = if sign_exp(size).is_multiple_of(2) { 1 } else { -1 };
        let mut sign = 1;
        for i in 0..len {
            if s & (1 << i) != 0 {
                let t = s & !(1 << i);
                out.connect(offset - size as i32, index[t as usize], index[s as usize], outer * sign)?;
                sign = -sign;
            }
        }
    }
    Ok(index)
}

/// `Omega^1_{E^+}(d)` on `X^+` for `E^+ = P(1,..,1)`: the Euler complex
/// `O_E(d-1)^n -> O_E(d)` (degrees 0, 1, maps `y_j`) with every `O_E(t)`
/// replaced by its Koszul resolution.
pub fn euler_cotangent_complex(seq: &WeightSequence, d: i64) -> Result<MonomialComplex> {
    if seq.m() < 2 || seq.n() < 2 {
        return Err(Error::TooFewVariables { needed: 2, m: seq.m(), n: seq.n() });
    }
    if seq.b().iter().any(|&b| b != 1) {
        return Err(Error::UnsupportedWeights(format!("Euler sequence needs b = (1,..,1), got {seq}")));
    }
    let (m, n) = (seq.m(), seq.n());
    let base = anchor(seq, TwistClass::Plus(d))?;
    let mut out = MonomialComplex::new(seq, Space::Plus);
    // D = h + (-1)^{|S|} v, h the Koszul differential, v the Euler map
    let top = koszul_into(&mut out, seq, Space::Plus, &base, 1, |_| 0)?;
    let mut lower = Vec::with_capacity(n);
    for j in 0..n {
        lower.push(koszul_into(&mut out, seq, Space::Plus, &base.sub(&Character::y(m, n, j)), 0, |_| 0)?);
    }
    for idx in &lower {
        for s in 0..(1u32 << m) {
            let size = s.count_ones();
            let sign = if size % 2 == 0 { 1 } else { -1 };
            out.connect(-(size as i32), top[s as usize], idx[s as usize], sign)?;
        }
    }
    Ok(out)
}

/// A skyscraper at the origin of a cyclic quotient chart, carrying a
/// character of the chart group and placed in one cohomological degree.
/// Its twist signature: `H^*(- (x) O(s))` is one-dimensional in `degree`
/// when `s = character mod order` and vanishes otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SkyscraperPattern {
    pub chart: usize,
    pub order: i64,
    pub character: i64,
    pub degree: i32,
}

impl SkyscraperPattern {
    pub fn new(chart: usize, order: i64, character: i64, degree: i32) -> Result<Self> {
        if order < 1 {
            return Err(Error::InconsistentDegrees(format!("group order {order}")));
        }
        Ok(SkyscraperPattern { chart, order, character: character.rem_euclid(order), degree })
    }

    /// Expected `(degree, dimension)` of the total cohomology after
    /// twisting by `O(s)`; `None` when it vanishes.
    pub fn signature(&self, s: i64) -> Option<(i32, usize)> {
        (s.rem_euclid(self.order) == self.character).then_some((self.degree, 1))
    }
}
