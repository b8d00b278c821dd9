//! Čech hypercohomology of monomial complexes, one torus character at a time.
//!
//! Each space is covered by its coordinate charts (`x_i != 0` on `X^-`,
//! `y_j != 0` on `X^+`, both on `Y`); sections over an intersection are the
//! Cox-ring monomials with the chart coordinates inverted. For a fixed
//! character every term contributes a 0/1 membership per intersection, so
//! the Čech double complex is a finite integer complex.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::{MonomialComplex, Term};
use crate::error::{Error, Result};
use crate::graded::{box_candidates, homology_dims, torus_characters, Character, Localization, StrandComplex};
use crate::linalg::IntMatrix;
use crate::sheaf::{anchor, Space, TwistClass};
use crate::weights::WeightSequence;

/// Default cap on the number of box points scanned in one sweep.
pub const MAX_BOX_CANDIDATES: u64 = 5_000_000;

/// Affine charts covering `space`.
pub fn cover(seq: &WeightSequence, space: Space) -> Vec<Localization> {
    match space {
        Space::Minus => (0..seq.m()).map(Localization::x_chart).collect(),
        Space::Plus => (0..seq.n()).map(Localization::y_chart).collect(),
        Space::Y => (0..seq.m())
            .flat_map(|i| (0..seq.n()).map(move |j| Localization::x_chart(i).union(Localization::y_chart(j))))
            .collect(),
    }
}

/// Charts of `Y` covering the preimage of the `i`-th (0-based) chart of
/// `side` under `mu^-` or `mu^+`.
pub fn relative_cover(seq: &WeightSequence, side: Space, i: usize) -> Result<Vec<Localization>> {
    match side {
        Space::Minus if i < seq.m() => {
            Ok((0..seq.n()).map(|j| Localization::x_chart(i).union(Localization::y_chart(j))).collect())
        }
        Space::Plus if i < seq.n() => {
            Ok((0..seq.m()).map(|j| Localization::y_chart(i).union(Localization::x_chart(j))).collect())
        }
        Space::Y => Err(Error::WrongSide { what: "relative cover base".into(), space: side }),
        _ => Err(Error::IndexOutOfRange { index: i + 1, len: if side == Space::Minus { seq.m() } else { seq.n() } }),
    }
}

/// Nonempty subsets of the cover with the localization of each intersection.
fn intersections(cover: &[Localization]) -> Vec<(u32, Localization)> {
    let k = cover.len();
    let mut subsets: Vec<u32> = (1..(1u32 << k)).collect();
    subsets.sort_by_key(|s| (s.count_ones(), *s));
    subsets
        .into_iter()
        .map(|s| {
            let loc = (0..k).filter(|i| s & (1 << i) != 0).fold(Localization::NONE, |l, i| l.union(cover[i]));
            (s, loc)
        })
        .collect()
}

/// Total complex of the Čech double complex at `chi`, with
/// `D = d + (-1)^p delta` on a section in complex degree `p`.
pub fn cech_strand(complex: &MonomialComplex, chi: &Character, cover: &[Localization]) -> Result<StrandComplex> {
    let Some((lo, hi)) = complex.range() else { return Ok(StrandComplex::empty()) };
    let subsets = intersections(cover);
    let span = (hi - lo + cover.len() as i32) as usize;
    let mut basis: Vec<Vec<(u32, i32, usize)>> = vec![Vec::new(); span];
    for &(s, loc) in &subsets {
        let r = s.count_ones() as i32 - 1;
        for p in lo..=hi {
            for (i, t) in complex.terms(p).iter().enumerate() {
                if t.contains(chi, loc) {
                    basis[(p + r - lo) as usize].push((s, p, i));
                }
            }
        }
    }
    let last = basis.iter().rposition(|b| !b.is_empty());
    let Some(last) = last else { return Ok(StrandComplex::empty()) };
    basis.truncate(last + 1);
    let index: Vec<HashMap<(u32, i32, usize), usize>> =
        basis.iter().map(|b| b.iter().enumerate().map(|(k, &key)| (key, k)).collect()).collect();
    let mut maps = Vec::with_capacity(basis.len().saturating_sub(1));
    for t in 0..basis.len().saturating_sub(1) {
        let mut mat = IntMatrix::zeros(basis[t + 1].len(), basis[t].len());
        for (col, &(s, p, i)) in basis[t].iter().enumerate() {
            for e in complex.entries(p).iter().filter(|e| e.source == i) {
                let row = index[t + 1].get(&(s, p + 1, e.target)).ok_or_else(|| {
                    Error::InconsistentDegrees(format!("section {chi} leaves the target of a differential"))
                })?;
                mat.add_to(*row, col, e.coeff);
            }
            let sign_p = if p.rem_euclid(2) == 0 { 1 } else { -1 };
            for j in 0..cover.len() {
                if s & (1 << j) != 0 {
                    continue;
                }
                let bigger = s | (1 << j);
                let pos = (bigger & ((1 << j) - 1)).count_ones();
                let sign = if pos % 2 == 0 { sign_p } else { -sign_p };
                if let Some(&row) = index[t + 1].get(&(bigger, p, i)) {
                    mat.add_to(row, col, sign);
                } else {
                    return Err(Error::InconsistentDegrees(format!("restriction of {chi} is not a section")));
                }
            }
        }
        maps.push(mat);
    }
    StrandComplex::new(lo, basis.iter().map(Vec::len).collect(), maps)
}

/// Hypercohomology at one character: nonzero dimensions by degree.
pub fn hypercohomology_at(
    complex: &MonomialComplex,
    chi: &Character,
    cover: &[Localization],
) -> Result<BTreeMap<i32, usize>> {
    let full = cover.iter().fold(Localization::NONE, |l, c| l.union(*c));
    let any = complex
        .range()
        .is_some_and(|(lo, hi)| (lo..=hi).any(|p| complex.terms(p).iter().any(|t: &Term| t.contains(chi, full))));
    if !any {
        return Ok(BTreeMap::new());
    }
    let st = cech_strand(complex, chi, cover)?;
    Ok(homology_dims(&st)
        .into_iter()
        .enumerate()
        .filter(|(_, d)| *d > 0)
        .map(|(t, d)| (st.start + t as i32, d))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterCohomology {
    pub character: Character,
    /// Nonzero dimensions by cohomological degree.
    pub h: BTreeMap<i32, usize>,
}

/// Per-character hypercohomology over a box; characters with vanishing
/// cohomology are omitted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyTable {
    pub space: Space,
    pub twist: Option<TwistClass>,
    pub bound: i64,
    pub entries: Vec<CharacterCohomology>,
}

/// One JSON row: `{"twist", "character", "h"}` with `h[i]` the dimension in
/// degree `min_degree + i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyRow {
    pub twist: String,
    pub character: Vec<i64>,
    pub min_degree: i32,
    pub h: Vec<usize>,
}

impl CohomologyTable {
    /// Summed dimensions per degree.
    pub fn totals(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for e in &self.entries {
            for (&d, &v) in &e.h {
                *out.entry(d).or_insert(0) += v;
            }
        }
        out
    }

    pub fn total(&self, degree: i32) -> usize {
        self.totals().get(&degree).copied().unwrap_or(0)
    }

    /// `character -> h` for comparisons.
    pub fn by_character(&self) -> BTreeMap<Character, BTreeMap<i32, usize>> {
        self.entries.iter().map(|e| (e.character.clone(), e.h.clone())).collect()
    }

    pub fn rows(&self) -> Vec<CohomologyRow> {
        let twist = self.twist.map_or_else(|| "complex".to_string(), |t| t.to_string());
        self.entries
            .iter()
            .map(|e| {
                let min = e.h.keys().next().copied().unwrap_or(0).min(0);
                let max = e.h.keys().last().copied().unwrap_or(0);
                let h = (min..=max).map(|d| e.h.get(&d).copied().unwrap_or(0)).collect();
                CohomologyRow { twist: twist.clone(), character: e.character.flat(), min_degree: min, h }
            })
            .collect()
    }
}

pub fn check_box(seq: &WeightSequence, bound: i64, limit: u64) -> Result<()> {
    let c = box_candidates(seq, bound);
    if c > limit {
        return Err(Error::BoxTooLarge(c));
    }
    Ok(())
}

/// Hypercohomology of `complex` for every torus character in the box
/// `|alpha_i|, |beta_j| <= bound`, using `cover` (the standard cover when
/// `None`).
pub fn hypercohomology_table(
    complex: &MonomialComplex,
    bound: i64,
    cover_override: Option<&[Localization]>,
) -> Result<CohomologyTable> {
    let seq = complex.seq();
    check_box(seq, bound, MAX_BOX_CANDIDATES)?;
    let standard = cover(seq, complex.space());
    let cov = cover_override.unwrap_or(&standard);
    let chars = torus_characters(seq, complex.space(), bound);
    let entries: Vec<CharacterCohomology> = chars
        .par_iter()
        .map(|chi| hypercohomology_at(complex, chi, cov).map(|h| CharacterCohomology { character: chi.clone(), h }))
        .filter(|r| r.as_ref().map_or(true, |c| !c.h.is_empty()))
        .collect::<Result<_>>()?;
    Ok(CohomologyTable { space: complex.space(), twist: None, bound, entries })
}

/// Cohomology of the line bundle `O(twist)`.
pub fn cech_cohomology(seq: &WeightSequence, twist: TwistClass, bound: i64) -> Result<CohomologyTable> {
    let complex = MonomialComplex::single(seq, twist.space(), Term::line(anchor(seq, twist)?));
    let mut table = hypercohomology_table(&complex, bound, None)?;
    table.twist = Some(twist);
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &str) -> WeightSequence {
        s.parse().unwrap()
    }

    #[test]
    fn projective_line() {
        let p1 = seq("1,1;");
        let t = cech_cohomology(&p1, TwistClass::Minus(-2), 4).unwrap();
        assert_eq!(t.totals(), BTreeMap::from([(1, 1)]));
        let t = cech_cohomology(&p1, TwistClass::Minus(3), 4).unwrap();
        assert_eq!(t.totals(), BTreeMap::from([(0, 4)]));
    }

    #[test]
    fn weighted_plane() {
        let t = cech_cohomology(&seq("1,1,2;"), TwistClass::Minus(2), 4).unwrap();
        assert_eq!(t.totals(), BTreeMap::from([(0, 4)]));
        let t = cech_cohomology(&seq("1,1,2;"), TwistClass::Minus(-4), 6).unwrap();
        assert_eq!(t.totals(), BTreeMap::from([(2, 1)]));
    }

    #[test]
    fn no_higher_cohomology_on_the_flop_side() {
        let s = seq("1,2;1,1,1");
        for k in 0..=3 {
            let t = cech_cohomology(&s, TwistClass::Minus(k), 2).unwrap();
            assert!(t.totals().keys().all(|&d| d == 0), "k = {k}: {:?}", t.totals());
        }
    }

    #[test]
    fn oversized_box_is_refused() {
        let s = seq("1,1,1,1,1;1,1,1,1,1");
        assert!(matches!(cech_cohomology(&s, TwistClass::Minus(0), 100), Err(Error::BoxTooLarge(_))));
    }

    #[test]
    fn json_rows() {
        let t = cech_cohomology(&seq("1,1;"), TwistClass::Minus(-2), 2).unwrap();
        let rows = t.rows();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].h, vec![0, 1]);
        assert_eq!(rows[0].twist, "O-(-2)");
    }
}
