//! Threshold ideals `I_k = (x^alpha : sum(w alpha) >= k)` and their minimal
//! multigraded free resolutions.
//!
//! Betti multidegrees come from Koszul homology `Tor_l(R/I_k, C)_mu`; the
//! differentials are then built level by level from strand kernels and
//! certified against those Betti numbers and by strand exactness.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::complex::{MonomialComplex, Term};
use crate::error::{Error, Result};
use crate::graded::{homology_dims, Character, Localization, StrandComplex};
use crate::linalg::{kernel_basis, IntMatrix};
use crate::sheaf::Space;
use crate::weights::WeightSequence;

/// Largest threshold accepted by the resolution builder.
pub const MAX_THRESHOLD: i64 = 64;

/// Which Cox coordinates an ideal lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Block {
    X,
    Y,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ThresholdIdeal {
    pub block: Block,
    pub weights: Vec<i64>,
    pub threshold: i64,
}

impl ThresholdIdeal {
    pub fn new(block: Block, weights: Vec<i64>, threshold: i64) -> Result<Self> {
        if threshold < 0 {
            return Err(Error::InconsistentDegrees(format!("threshold {threshold} is negative")));
        }
        Ok(ThresholdIdeal { block, weights, threshold })
    }

    /// `I_k` on the x block of `seq`.
    pub fn on_x(seq: &WeightSequence, threshold: i64) -> Result<Self> {
        ThresholdIdeal::new(Block::X, seq.a().to_vec(), threshold)
    }

    /// `I_k` on the y block of `seq`.
    pub fn on_y(seq: &WeightSequence, threshold: i64) -> Result<Self> {
        ThresholdIdeal::new(Block::Y, seq.b().to_vec(), threshold)
    }

    /// Membership of a nonnegative exponent vector of the block.
    pub fn contains(&self, exps: &[i64]) -> bool {
        exps.iter().zip(&self.weights).map(|(v, w)| v * w).sum::<i64>() >= self.threshold
    }

    /// Membership of `x^(chi + anchor)` in the localized ideal, assuming the
    /// monomial already lies in the localized ring. Inverting any block
    /// coordinate makes the ideal the unit ideal.
    pub fn contains_shifted(&self, chi: &Character, anchor: &Character, loc: Localization) -> bool {
        if self.threshold <= 0 {
            return true;
        }
        let (c, s, inv) = match self.block {
            Block::X => (&chi.alpha, &anchor.alpha, loc.inv_x),
            Block::Y => (&chi.beta, &anchor.beta, loc.inv_y),
        };
        if inv != 0 {
            return true;
        }
        c.iter().zip(s).zip(&self.weights).map(|((c, s), w)| (c + s) * w).sum::<i64>() >= self.threshold
    }
}

/// Minimal monomial generators of `I_k`, lexicographically descending.
pub fn threshold_generators(weights: &[i64], k: i64) -> Vec<Vec<i64>> {
    if k <= 0 {
        return vec![vec![0; weights.len()]];
    }
    let caps: Vec<i64> = weights.iter().map(|w| (k + w - 1) / w).collect();
    let inside = |v: &[i64]| v.iter().zip(weights).map(|(a, w)| a * w).sum::<i64>() >= k;
    let mut out = Vec::new();
    for_each_below(&caps, |v| {
        if inside(v) {
            let minimal = (0..v.len()).all(|i| {
                if v[i] == 0 {
                    return true;
                }
                let mut u = v.to_vec();
                u[i] -= 1;
                !inside(&u)
            });
            if minimal {
                out.push(v.to_vec());
            }
        }
    });
    out.sort_by(|a, b| b.cmp(a));
    out
}

/// Visits every `v` with `0 <= v_i <= caps_i`.
fn for_each_below(caps: &[i64], mut f: impl FnMut(&[i64])) {
    if caps.iter().any(|&c| c < 0) {
        return;
    }
    let mut v = vec![0; caps.len()];
    loop {
        f(&v);
        let mut i = v.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if v[i] < caps[i] {
                v[i] += 1;
                for t in &mut v[i + 1..] {
                    *t = 0;
                }
                break;
            }
        }
    }
}

fn wdeg(weights: &[i64], v: &[i64]) -> i64 {
    v.iter().zip(weights).map(|(a, w)| a * w).sum()
}

/// Koszul complex `K(x) (x) R/I_k` in multidegree `mu`, positions `0..=m`
/// read as cohomological degrees `-m..=0`.
fn koszul_strand(weights: &[i64], k: i64, mu: &[i64]) -> StrandComplex {
    let m = weights.len();
    let standard = |s: u32| -> bool {
        let mut d = 0;
        for i in 0..m {
            let e = mu[i] - ((s >> i) & 1) as i64;
            if e < 0 {
                return false;
            }
            d += e * weights[i];
        }
        d < k
    };
    let mut by_size: Vec<Vec<u32>> = vec![Vec::new(); m + 1];
    for s in 0..(1u32 << m) {
        if standard(s) {
            by_size[s.count_ones() as usize].push(s);
        }
    }
    // position t holds subsets of size m - t
    let dims: Vec<usize> = (0..=m).map(|t| by_size[m - t].len()).collect();
    let mut maps = Vec::with_capacity(m);
    for t in 0..m {
        let (src, tgt) = (&by_size[m - t], &by_size[m - t - 1]);
        let mut mat = IntMatrix::zeros(tgt.len(), src.len());
        for (c, &s) in src.iter().enumerate() {
            let mut sign = 1;
            for i in 0..m {
                if s & (1 << i) != 0 {
                    if let Some(r) = tgt.iter().position(|&u| u == s & !(1 << i)) {
                        mat.set(r, c, sign);
                    }
                    sign = -sign;
                }
            }
        }
        maps.push(mat);
    }
    StrandComplex::new(-(m as i32), dims, maps).expect("Koszul differential squares to zero")
}

/// Multidegrees of `Tor_l(R/I_k, C)` for `l = 1..=m`, each list sorted by
/// weighted degree then lexicographically descending, with multiplicity.
/// Every `mu` that can carry Tor (below the lcm of all generators) is
/// examined.
pub fn betti_multidegrees(weights: &[i64], k: i64) -> Vec<Vec<Vec<i64>>> {
    let m = weights.len();
    if k <= 0 {
        return vec![vec![vec![0; m]]];
    }
    let caps: Vec<i64> = weights.iter().map(|w| (k + w - 1) / w).collect();
    let mut levels: Vec<Vec<Vec<i64>>> = vec![Vec::new(); m];
    for_each_below(&caps, |mu| {
        let h = homology_dims(&koszul_strand(weights, k, mu));
        // h[t] is Tor_{m - t}
        for l in 1..=m {
            for _ in 0..h[m - l] {
                levels[l - 1].push(mu.to_vec());
            }
        }
    });
    for lv in &mut levels {
        lv.sort_by(|a, b| wdeg(weights, a).cmp(&wdeg(weights, b)).then(b.cmp(a)));
    }
    while levels.last().is_some_and(Vec::is_empty) {
        levels.pop();
    }
    levels
}

/// The twists `e^(l)_lambda` of a minimal resolution of `I_k`, position
/// `l = 1..` stored at index `l - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionDegrees {
    pub k: i64,
    pub weight_sum: i64,
    pub degrees: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiRow {
    pub l: usize,
    pub degrees: Vec<i64>,
}

impl ResolutionDegrees {
    pub fn betti_table(&self) -> Vec<BettiRow> {
        self.degrees.iter().enumerate().map(|(i, d)| BettiRow { l: i + 1, degrees: d.clone() }).collect()
    }

    pub fn as_map(&self) -> BTreeMap<usize, Vec<i64>> {
        self.betti_table().into_iter().map(|r| (r.l, r.degrees)).collect()
    }
}

pub fn minimal_resolution_degrees(weights: &[i64], k: i64) -> ResolutionDegrees {
    let degrees = betti_multidegrees(weights, k)
        .iter()
        .map(|lv| {
            let mut d: Vec<i64> = lv.iter().map(|mu| wdeg(weights, mu)).collect();
            d.sort_unstable();
            d
        })
        .collect();
    ResolutionDegrees { k: k.max(0), weight_sum: weights.iter().sum(), degrees }
}

/// Whether every twist lies in `[k, k + sum(w))`.
pub fn verify_degree_bounds(res: &ResolutionDegrees) -> bool {
    if res.k == 0 {
        return res.degrees.iter().flatten().all(|&e| e == 0);
    }
    res.degrees.iter().flatten().all(|&e| res.k <= e && e < res.k + res.weight_sum)
}

/// A minimal free resolution `F_m -> ... -> F_1 -> I_k` with generators
/// given by multidegree. `maps[l]` lists `(target, source, coeff)` of
/// `F_{l+2} -> F_{l+1}`; `F_1 -> I_k` sends each generator to its monomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedResolution {
    pub weights: Vec<i64>,
    pub k: i64,
    pub generators: Vec<Vec<Vec<i64>>>,
    pub maps: Vec<Vec<(usize, usize, i64)>>,
}

fn leq(a: &[i64], b: &[i64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

impl GradedResolution {
    /// Strand of `F_top -> ... -> F_1` at `mu`, positions `-(len-1)..=0`.
    pub fn strand(&self, mu: &[i64]) -> StrandComplex {
        let len = self.generators.len();
        let bases: Vec<Vec<usize>> =
            self.generators.iter().map(|g| (0..g.len()).filter(|&i| leq(&g[i], mu)).collect()).collect();
        // position t holds F_{len - t}
        let dims: Vec<usize> = (0..len).map(|t| bases[len - 1 - t].len()).collect();
        let mut maps = Vec::new();
        for t in 0..len.saturating_sub(1) {
            let l = len - 1 - t; // F_{l+1} -> F_l at indices l, l - 1
            let (src, tgt) = (&bases[l], &bases[l - 1]);
            let mut mat = IntMatrix::zeros(tgt.len(), src.len());
            for &(ti, si, c) in &self.maps[l - 1] {
                if let (Some(cc), Some(r)) = (src.iter().position(|&i| i == si), tgt.iter().position(|&i| i == ti)) {
                    mat.add_to(r, cc, c);
                }
            }
            maps.push(mat);
        }
        StrandComplex { start: -(len as i32 - 1), dims, maps }
    }

    pub fn degrees(&self) -> ResolutionDegrees {
        let degrees = self
            .generators
            .iter()
            .map(|lv| {
                let mut d: Vec<i64> = lv.iter().map(|g| wdeg(&self.weights, g)).collect();
                d.sort_unstable();
                d
            })
            .collect();
        ResolutionDegrees { k: self.k.max(0), weight_sum: self.weights.iter().sum(), degrees }
    }
}

/// Matrix of `F_l -> F_{l-1}` restricted to multidegree `nu` (`F_0 = R`).
fn level_matrix(res: &GradedResolution, l: usize, nu: &[i64]) -> (Vec<usize>, IntMatrix) {
    let src: Vec<usize> = (0..res.generators[l - 1].len()).filter(|&i| leq(&res.generators[l - 1][i], nu)).collect();
    if l == 1 {
        let mut mat = IntMatrix::zeros(1, src.len());
        for c in 0..src.len() {
            mat.set(0, c, 1);
        }
        return (src, mat);
    }
    let tgt: Vec<usize> = (0..res.generators[l - 2].len()).filter(|&i| leq(&res.generators[l - 2][i], nu)).collect();
    let mut mat = IntMatrix::zeros(tgt.len(), src.len());
    for &(ti, si, c) in &res.maps[l - 2] {
        if let (Some(cc), Some(r)) = (src.iter().position(|&i| i == si), tgt.iter().position(|&i| i == ti)) {
            mat.add_to(r, cc, c);
        }
    }
    (src, mat)
}

fn construct(weights: &[i64], k: i64) -> Result<GradedResolution> {
    let m = weights.len();
    let mut res = GradedResolution {
        weights: weights.to_vec(),
        k,
        generators: vec![threshold_generators(weights, k)],
        maps: Vec::new(),
    };
    if k <= 0 {
        return Ok(res);
    }
    let betti = betti_multidegrees(weights, k);
    let mut gens = res.generators[0].clone();
    let mut first = betti.first().cloned().unwrap_or_default();
    gens.sort();
    first.sort();
    if gens != first {
        return Err(Error::ResolutionConstructionFailure("first Betti level differs from the generators".into()));
    }
    res.generators[0] = betti[0].clone();
    for l in 1..betti.len() {
        // new generators of F_{l+1} at each Betti multidegree of level l+1
        let mut gens: Vec<Vec<i64>> = Vec::new();
        let mut entries: Vec<(usize, usize, i64)> = Vec::new();
        let mut targets: Vec<Vec<i64>> = betti[l].clone();
        targets.dedup();
        for nu in &targets {
            let want = betti[l].iter().filter(|v| *v == nu).count();
            let (basis, mat) = level_matrix(&res, l, nu);
            let kernel = kernel_basis(&mat);
            let mut span: Vec<Vec<i64>> = Vec::new();
            for (g, mu) in gens.iter().enumerate() {
                if leq(mu, nu) {
                    let mut col = vec![0; basis.len()];
                    for &(t, s, c) in &entries {
                        if s == g {
                            let pos = basis.iter().position(|&i| i == t).ok_or_else(|| {
                                Error::ResolutionConstructionFailure("image escapes its strand".into())
                            })?;
                            col[pos] += c;
                        }
                    }
                    span.push(col);
                }
            }
            let mut rank = IntMatrix::from_rows(&span).rank();
            let mut added = 0;
            for v in kernel {
                span.push(v.clone());
                let r = IntMatrix::from_rows(&span).rank();
                if r > rank {
                    rank = r;
                    let g = gens.len();
                    gens.push(nu.clone());
                    for (pos, &c) in v.iter().enumerate() {
                        if c != 0 {
                            entries.push((basis[pos], g, c));
                        }
                    }
                    added += 1;
                } else {
                    span.pop();
                }
            }
            if added != want {
                return Err(Error::ResolutionConstructionFailure(format!(
                    "level {} at {:?}: found {added} syzygies, Koszul homology predicts {want}",
                    l + 1,
                    nu
                )));
            }
        }
        res.generators.push(gens);
        res.maps.push(entries);
    }
    debug_assert!(res.generators.len() <= m);
    verify_exactness(&res)?;
    Ok(res)
}

/// Checks every strand up to weighted degree `k + sum(w) + 10`: exact except
/// at `F_1`, where the homology is the strand of `I_k`.
fn verify_exactness(res: &GradedResolution) -> Result<()> {
    let w = &res.weights;
    let top = res.k + w.iter().sum::<i64>() + 10;
    let caps: Vec<i64> = w.iter().map(|wi| top / wi).collect();
    let mut failure = None;
    for_each_below(&caps, |mu| {
        if failure.is_some() || wdeg(w, mu) > top {
            return;
        }
        let st = res.strand(mu);
        if StrandComplex::new(st.start, st.dims.clone(), st.maps.clone()).is_err() {
            failure = Some(format!("d o d != 0 at {mu:?}"));
            return;
        }
        let h = homology_dims(&st);
        let expect_top = usize::from(wdeg(w, mu) >= res.k);
        let ok = h.iter().enumerate().all(|(t, &d)| if t + 1 == h.len() { d == expect_top } else { d == 0 });
        if !ok {
            failure = Some(format!("strand {mu:?} has homology {h:?}"));
        }
    });
    match failure {
        Some(msg) => Err(Error::ResolutionConstructionFailure(msg)),
        None => Ok(()),
    }
}

type CacheKey = (Vec<i64>, i64);

fn cache() -> &'static Mutex<HashMap<CacheKey, Arc<GradedResolution>>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Arc<GradedResolution>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Minimal resolution of `I_k`, memoized per `(weights, k)`.
pub fn minimal_resolution(weights: &[i64], k: i64) -> Result<Arc<GradedResolution>> {
    if !(0..=MAX_THRESHOLD).contains(&k) {
        return Err(Error::Unsupported(format!("threshold {k} outside 0..={MAX_THRESHOLD}")));
    }
    if weights.is_empty() || weights.iter().any(|&w| w <= 0) {
        return Err(Error::InvalidSequence(format!("weights {weights:?}")));
    }
    let key = (weights.to_vec(), k);
    if let Some(r) = cache().lock().expect("cache lock").get(&key) {
        return Ok(r.clone());
    }
    let res = Arc::new(construct(weights, k)?);
    cache().lock().expect("cache lock").insert(key, res.clone());
    Ok(res)
}

/// Resolution of `x^{-base} I` (the ideal twisted by `deg base`) as a complex
/// of line bundles: a generator of `F_l` in multidegree `mu` becomes the term
/// with anchor `base - mu` in degree `-(l-1)`.
pub fn build_resolution(
    seq: &WeightSequence,
    space: Space,
    ideal: &ThresholdIdeal,
    base: &Character,
) -> Result<MonomialComplex> {
    let res = minimal_resolution(&ideal.weights, ideal.threshold)?;
    let (m, n) = (seq.m(), seq.n());
    let lift = |mu: &[i64]| -> Character {
        let mut c = Character::zero(m, n);
        match ideal.block {
            Block::X => c.alpha.copy_from_slice(mu),
            Block::Y => c.beta.copy_from_slice(mu),
        }
        base.sub(&c)
    };
    let mut out = MonomialComplex::new(seq, space);
    for (l, gens) in res.generators.iter().enumerate() {
        for mu in gens {
            out.push(-(l as i32), Term::line(lift(mu)));
        }
    }
    for (l, entries) in res.maps.iter().enumerate() {
        // F_{l+2} at degree -(l+1) maps to F_{l+1} at degree -l
        for &(t, s, c) in entries {
            out.connect(-(l as i32) - 1, t, s, c)?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_examples() {
        assert_eq!(threshold_generators(&[1, 1], 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(threshold_generators(&[1, 2], 2), vec![vec![2, 0], vec![0, 1]]);
        assert_eq!(threshold_generators(&[1, 2], 3), vec![vec![3, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(threshold_generators(&[1, 2], 0), vec![vec![0, 0]]);
    }

    #[test]
    fn degree_examples() {
        let d = minimal_resolution_degrees(&[1, 1], 2);
        assert_eq!(d.degrees, vec![vec![2, 2, 2], vec![3, 3]]);
        assert!(verify_degree_bounds(&d));
        let d = minimal_resolution_degrees(&[1, 2], 2);
        assert_eq!(d.degrees, vec![vec![2, 2], vec![4]]);
        assert!(verify_degree_bounds(&d));
        let d = minimal_resolution_degrees(&[1, 1, 1], 1);
        assert_eq!(d.degrees, vec![vec![1, 1, 1], vec![2, 2, 2], vec![3]]);
        assert_eq!(minimal_resolution_degrees(&[1, 1], 0).degrees, vec![vec![0]]);
        let bad = ResolutionDegrees { k: 2, weight_sum: 2, degrees: vec![vec![4]] };
        assert!(!verify_degree_bounds(&bad));
    }

    #[test]
    fn koszul_strand_of_maximal_ideal() {
        // K(x1,x2,x3) (x) R/(x1,x2,x3) at mu = x1: only e_{1} and the unit
        let st = koszul_strand(&[1, 1, 1], 1, &[1, 0, 0]);
        assert_eq!(homology_dims(&st), vec![0, 0, 1, 0]);
    }

    #[test]
    fn constructed_resolutions_match_betti() {
        for (w, k) in [(vec![1, 1], 2), (vec![1, 2], 2), (vec![1, 2], 3), (vec![1, 1, 1], 1), (vec![1, 2, 3], 4)] {
            let r = minimal_resolution(&w, k).unwrap();
            assert_eq!(r.degrees(), minimal_resolution_degrees(&w, k));
        }
        let r = minimal_resolution(&[1, 1], 0).unwrap();
        assert_eq!(r.degrees().degrees, vec![vec![0]]);
        assert!(minimal_resolution(&[1], MAX_THRESHOLD + 1).is_err());
    }

    #[test]
    fn plus_side_build() {
        let seq: WeightSequence = "1,2;1,1,1".parse().unwrap();
        let ideal = ThresholdIdeal::on_x(&seq, 2).unwrap();
        let c = build_resolution(&seq, Space::Plus, &ideal, &Character::zero(2, 3)).unwrap();
        c.validate().unwrap();
        let tw = c.twists();
        use crate::sheaf::TwistClass::Plus;
        assert_eq!(tw[&0], vec![Plus(2), Plus(2)]);
        assert_eq!(tw[&-1], vec![Plus(4)]);
    }
}
