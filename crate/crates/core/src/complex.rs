//! Bounded complexes whose terms are twisted line bundles (optionally cut
//! down by a threshold ideal) and whose differentials are monomial.
//!
//! A term with anchor `s` stands for the fine-graded module `x^{-s} R`
//! (times `I` when an ideal is attached), which is `O(deg s)`. The monomial
//! on an entry is always `s_target - s_source`, so only coefficients are
//! stored and every twist operation keeps the differentials valid.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graded::{degree, Character, Localization, Monomial, StrandComplex};
use crate::linalg::IntMatrix;
use crate::resolution::ThresholdIdeal;
use crate::sheaf::{Space, TwistClass};
use crate::weights::WeightSequence;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Term {
    pub anchor: Character,
    pub ideal: Option<ThresholdIdeal>,
}

impl Term {
    pub fn line(anchor: Character) -> Self {
        Term { anchor, ideal: None }
    }

    /// Whether `x^chi` is a section of this term over the localization.
    pub fn contains(&self, chi: &Character, loc: Localization) -> bool {
        let a = &self.anchor;
        for (i, (c, s)) in chi.alpha.iter().zip(&a.alpha).enumerate() {
            if c + s < 0 && loc.inv_x & (1 << i) == 0 {
                return false;
            }
        }
        for (j, (c, s)) in chi.beta.iter().zip(&a.beta).enumerate() {
            if c + s < 0 && loc.inv_y & (1 << j) == 0 {
                return false;
            }
        }
        if chi.e + a.e < 0 {
            return false;
        }
        match &self.ideal {
            None => true,
            Some(ideal) => ideal.contains_shifted(chi, a, loc),
        }
    }
}

/// One nonzero coefficient of a differential `C^p -> C^{p+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Entry {
    pub target: usize,
    pub source: usize,
    pub coeff: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialComplex {
    seq: WeightSequence,
    space: Space,
    terms: BTreeMap<i32, Vec<Term>>,
    diffs: BTreeMap<i32, Vec<Entry>>,
}

impl MonomialComplex {
    pub fn new(seq: &WeightSequence, space: Space) -> Self {
        MonomialComplex { seq: seq.clone(), space, terms: BTreeMap::new(), diffs: BTreeMap::new() }
    }

    /// A single term in degree 0.
    pub fn single(seq: &WeightSequence, space: Space, term: Term) -> Self {
        let mut c = MonomialComplex::new(seq, space);
        c.push(0, term);
        c
    }

    pub fn seq(&self) -> &WeightSequence {
        &self.seq
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn push(&mut self, p: i32, term: Term) -> usize {
        let v = self.terms.entry(p).or_default();
        v.push(term);
        v.len() - 1
    }

    /// Adds `coeff * x^(s_target - s_source)` from term `source` in degree
    /// `p` to term `target` in degree `p + 1`.
    pub fn connect(&mut self, p: i32, target: usize, source: usize, coeff: i64) -> Result<()> {
        let src =
            self.terms(p).get(source).ok_or(Error::IndexOutOfRange { index: source, len: self.terms(p).len() })?;
        let tgt = self
            .terms(p + 1)
            .get(target)
            .ok_or(Error::IndexOutOfRange { index: target, len: self.terms(p + 1).len() })?;
        let mono = tgt.anchor.sub(&src.anchor);
        if !mono.is_nonnegative() {
            return Err(Error::InconsistentDegrees(format!(
                "entry {source} -> {target} at degree {p} needs the Laurent monomial {mono}"
            )));
        }
        if coeff != 0 {
            let list = self.diffs.entry(p).or_default();
            match list.iter_mut().find(|e| e.target == target && e.source == source) {
                Some(e) => e.coeff += coeff,
                None => list.push(Entry { target, source, coeff }),
            }
            list.retain(|e| e.coeff != 0);
        }
        Ok(())
    }

    pub fn terms(&self, p: i32) -> &[Term] {
        self.terms.get(&p).map_or(&[], Vec::as_slice)
    }

    pub fn entries(&self, p: i32) -> &[Entry] {
        self.diffs.get(&p).map_or(&[], Vec::as_slice)
    }

    /// Differential entry as a monomial.
    pub fn monomial(&self, p: i32, e: &Entry) -> Monomial {
        let exp = self.terms(p + 1)[e.target].anchor.sub(&self.terms(p)[e.source].anchor);
        Monomial { exponent: exp, coeff: e.coeff }
    }

    /// Lowest and highest degree holding a term.
    pub fn range(&self) -> Option<(i32, i32)> {
        let mut it = self.terms.iter().filter(|(_, v)| !v.is_empty()).map(|(p, _)| *p);
        let lo = it.next()?;
        Some((lo, it.next_back().unwrap_or(lo)))
    }

    pub fn is_zero(&self) -> bool {
        self.range().is_none()
    }

    pub fn has_ideals(&self) -> bool {
        self.terms.values().flatten().any(|t| t.ideal.is_some())
    }

    pub fn term_count(&self) -> usize {
        self.terms.values().map(Vec::len).sum()
    }

    pub fn twist_of(&self, term: &Term) -> TwistClass {
        degree(&self.seq, self.space, &term.anchor)
    }

    /// Twists per degree, in term order.
    pub fn twists(&self) -> BTreeMap<i32, Vec<TwistClass>> {
        self.terms
            .iter()
            .filter(|(_, v)| !v.is_empty())
            .map(|(p, v)| (*p, v.iter().map(|t| self.twist_of(t)).collect()))
            .collect()
    }

    /// Checks `d o d = 0` on coefficients; monomials compose automatically.
    pub fn validate(&self) -> Result<()> {
        for (&p, first) in &self.diffs {
            let second = self.entries(p + 1);
            if second.is_empty() {
                continue;
            }
            let mut acc: BTreeMap<(usize, usize), i64> = BTreeMap::new();
            for e1 in first {
                for e2 in second.iter().filter(|e2| e2.source == e1.target) {
                    *acc.entry((e2.target, e1.source)).or_default() += e1.coeff * e2.coeff;
                }
            }
            if acc.values().any(|&v| v != 0) {
                return Err(Error::NotAComplex(p));
            }
        }
        Ok(())
    }

    /// Same differentials, every anchor moved by `delta` (tensoring with the
    /// line bundle of degree `deg delta`).
    pub fn twisted(&self, delta: &Character) -> MonomialComplex {
        let mut out = self.clone();
        for t in out.terms.values_mut().flatten() {
            t.anchor = t.anchor.add(delta);
        }
        out
    }

    /// `C[n]`: degree `p` of the result is degree `p + n` of `self`, with the
    /// differential multiplied by `(-1)^n`.
    pub fn shifted(&self, n: i32) -> MonomialComplex {
        let sign = if n.rem_euclid(2) == 0 { 1 } else { -1 };
        MonomialComplex {
            seq: self.seq.clone(),
            space: self.space,
            terms: self.terms.iter().map(|(p, v)| (p - n, v.clone())).collect(),
            diffs: self
                .diffs
                .iter()
                .map(|(p, v)| (p - n, v.iter().map(|e| Entry { coeff: sign * e.coeff, ..*e }).collect()))
                .collect(),
        }
    }

    /// Rebuilds the complex on another space (or sequence) with every term
    /// passed through `f`, keeping the coefficients.
    pub fn map_terms(
        &self,
        seq: &WeightSequence,
        space: Space,
        mut f: impl FnMut(i32, &Term) -> Result<Term>,
    ) -> Result<MonomialComplex> {
        let mut out = MonomialComplex::new(seq, space);
        for (&p, v) in &self.terms {
            for t in v {
                let mapped = f(p, t)?;
                out.push(p, mapped);
            }
        }
        for (&p, v) in &self.diffs {
            for e in v {
                out.connect(p, e.target, e.source, e.coeff)?;
            }
        }
        Ok(out)
    }

    /// `RHom(a, b)` for `a` without ideal terms: terms `(sigma, tau)` with
    /// anchor `s_tau - s_sigma` in degree `q - p`, and
    /// `d f = d_b f - (-1)^{deg f} f d_a`.
    pub fn hom(a: &MonomialComplex, b: &MonomialComplex) -> Result<MonomialComplex> {
        if a.space != b.space {
            return Err(Error::InconsistentDegrees("Hom between different spaces".into()));
        }
        if a.has_ideals() {
            return Err(Error::Unsupported("Hom out of a complex with ideal terms".into()));
        }
        let mut out = MonomialComplex::new(&a.seq, a.space);
        let mut index: BTreeMap<(i32, usize, i32, usize), (i32, usize)> = BTreeMap::new();
        for (&p, ta) in &a.terms {
            for (i, s) in ta.iter().enumerate() {
                for (&q, tb) in &b.terms {
                    for (j, t) in tb.iter().enumerate() {
                        let term = Term { anchor: t.anchor.sub(&s.anchor), ideal: t.ideal.clone() };
                        let k = out.push(q - p, term);
                        index.insert((p, i, q, j), (q - p, k));
                    }
                }
            }
        }
        for (&(p, i, q, j), &(deg, k)) in &index {
            for e in b.entries(q).iter().filter(|e| e.source == j) {
                let (_, t) = index[&(p, i, q + 1, e.target)];
                out.connect(deg, t, k, e.coeff)?;
            }
            let sign = if deg.rem_euclid(2) == 0 { -1 } else { 1 };
            for e in a.entries(p - 1).iter().filter(|e| e.target == i) {
                let (_, t) = index[&(p - 1, e.source, q, j)];
                out.connect(deg, t, k, sign * e.coeff)?;
            }
        }
        Ok(out)
    }

    /// The strand of sections `x^chi` over a localization: positions run over
    /// the degree range of the complex.
    pub fn strand(&self, chi: &Character, loc: Localization) -> Result<StrandComplex> {
        let Some((lo, hi)) = self.range() else { return Ok(StrandComplex::empty()) };
        let bases: Vec<Vec<usize>> = (lo..=hi)
            .map(|p| self.terms(p).iter().enumerate().filter(|(_, t)| t.contains(chi, loc)).map(|(i, _)| i).collect())
            .collect();
        let mut maps = Vec::with_capacity(bases.len().saturating_sub(1));
        for (t, p) in (lo..hi).enumerate() {
            let (src, tgt) = (&bases[t], &bases[t + 1]);
            let mut mat = IntMatrix::zeros(tgt.len(), src.len());
            for e in self.entries(p) {
                let Some(c) = src.iter().position(|&i| i == e.source) else { continue };
                match tgt.iter().position(|&i| i == e.target) {
                    Some(r) => mat.add_to(r, c, e.coeff),
                    None => {
                        return Err(Error::InconsistentDegrees(format!(
                            "degree {p}: section {chi} leaves the target of entry {} -> {}",
                            e.source, e.target
                        )))
                    }
                }
            }
            maps.push(mat);
        }
        StrandComplex::new(lo, bases.iter().map(Vec::len).collect(), maps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::homology_dims;

    fn koszul_two() -> MonomialComplex {
        // 0 -> O(-2) -> O(-1)^2 -> O -> 0 on P(1,1) data, (x1,x2)
        let s: WeightSequence = "1,1;".parse().unwrap();
        let mut c = MonomialComplex::new(&s, Space::Minus);
        let z = Character::zero(2, 0);
        let x1 = Character::x(2, 0, 0);
        let x2 = Character::x(2, 0, 1);
        c.push(-2, Term::line(z.sub(&x1).sub(&x2)));
        c.push(-1, Term::line(z.sub(&x1)));
        c.push(-1, Term::line(z.sub(&x2)));
        c.push(0, Term::line(z));
        c.connect(-2, 0, 0, -1).unwrap();
        c.connect(-2, 1, 0, 1).unwrap();
        c.connect(-1, 0, 0, 1).unwrap();
        c.connect(-1, 0, 1, 1).unwrap();
        c
    }

    #[test]
    fn koszul_strand_is_exact_in_positive_degree() {
        let c = koszul_two();
        c.validate().unwrap();
        let chi = Character::new(vec![1, 1], vec![], 0);
        let st = c.strand(&chi, Localization::NONE).unwrap();
        assert_eq!(st.dims, vec![1, 2, 1]);
        assert_eq!(homology_dims(&st), vec![0, 0, 0]);
        let st0 = c.strand(&Character::zero(2, 0), Localization::NONE).unwrap();
        assert_eq!(homology_dims(&st0), vec![0, 0, 1]);
    }

    #[test]
    fn broken_signs_are_rejected() {
        let mut c = koszul_two();
        c.connect(-2, 0, 0, 2).unwrap();
        assert_eq!(c.validate(), Err(Error::NotAComplex(-2)));
    }

    #[test]
    fn laurent_entries_are_rejected() {
        let s: WeightSequence = "1,1;".parse().unwrap();
        let mut c = MonomialComplex::new(&s, Space::Minus);
        c.push(0, Term::line(Character::x(2, 0, 0)));
        c.push(1, Term::line(Character::zero(2, 0)));
        assert!(matches!(c.connect(0, 0, 0, 1), Err(Error::InconsistentDegrees(_))));
    }

    #[test]
    fn shift_and_hom() {
        let c = koszul_two();
        let sh = c.shifted(1);
        assert_eq!(sh.range(), Some((-3, -1)));
        sh.validate().unwrap();
        let h = MonomialComplex::hom(&c, &c).unwrap();
        h.validate().unwrap();
        assert_eq!(h.term_count(), 16);
        let zero = MonomialComplex::new(c.seq(), Space::Minus);
        assert!(zero.strand(&Character::zero(2, 0), Localization::NONE).unwrap().is_empty());
    }
}
