//! Oracle-backed checks of the pushforward rule and of Serre duality.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use rayon::prelude::*;

use crate::cech::{cech_cohomology, hypercohomology_at, hypercohomology_table, relative_cover, CohomologyTable};
use crate::complex::{MonomialComplex, Term};
use crate::error::{Error, Result};
use crate::functors::{compare_tables, StrandMismatch, VerificationReport};
use crate::graded::{torus_characters, Localization};
use crate::sheaf::{anchor, pushforward_rule, pushforward_term, serre_twist, PushforwardResult, Space, TwistClass};
use crate::weights::WeightSequence;

/// `O_Y(p, q)` written as `mu^* O(s)` twisted by `-t Ebar` for `mu = mu^-`
/// (`(s + t, t)`) or `mu^+` (`(t, s + t)`).
pub fn y_class(side: Space, s: i64, t: i64) -> TwistClass {
    if side == Space::Minus {
        TwistClass::Y(s + t, t)
    } else {
        TwistClass::Y(t, s + t)
    }
}

fn fibre_sum(seq: &WeightSequence, side: Space) -> i64 {
    if side == Space::Minus {
        seq.sum_b()
    } else {
        seq.sum_a()
    }
}

fn chart_count(seq: &WeightSequence, side: Space) -> usize {
    if side == Space::Minus {
        seq.m()
    } else {
        seq.n()
    }
}

fn chart_loc(side: Space, i: usize) -> Localization {
    if side == Space::Minus {
        Localization::x_chart(i)
    } else {
        Localization::y_chart(i)
    }
}

/// Torus characters of `Y` and of `X^-`, `X^+` agree once `e` is dropped.
fn forget_e(mut table: CohomologyTable) -> CohomologyTable {
    for entry in &mut table.entries {
        entry.character.e = 0;
    }
    table
}

/// Compares the closed-form pushforward of `O_Y(y_class(side, s, t))` with
/// the Čech oracle, for `t` in `[1 - fibre, fibre]` and `s` in `twists`:
/// globally (per character on `Y` against the image on the base) and chart
/// by chart (Čech on the preimage of each chart against the sections of the
/// image there). Then checks that `t = -fibre` has no closed form and that
/// the oracle finds a nonzero higher direct image for it.
pub fn pushforward_agreement(
    seq: &WeightSequence,
    side: Space,
    twists: RangeInclusive<i64>,
    bound: i64,
) -> Result<VerificationReport> {
    let fibre = fibre_sum(seq, side);
    let chars = torus_characters(seq, Space::Y, bound);
    let mut children = Vec::new();
    for t in 1 - fibre..=fibre {
        let mut r = VerificationReport::new(format!("push {side} E-power {}", -t), seq);
        r.target = "Cech tables of the closed form".into();
        for s in twists.clone() {
            let class = y_class(side, s, t);
            let TwistClass::Y(p, q) = class else { unreachable!() };
            let on_y = MonomialComplex::single(seq, Space::Y, Term::line(anchor(seq, class)?));
            let (image, rule) = pushforward_term(seq, side, &on_y.terms(0)[0])?;
            if rule == PushforwardResult::NotClosedForm {
                return Err(Error::PushforwardNotClosedForm { side, p, q, q_ebar: t });
            }
            let base = MonomialComplex::single(seq, side, image.clone());
            let upstairs = forget_e(hypercohomology_table(&on_y, bound, None)?);
            let (n, bad) = compare_tables(&upstairs, &hypercohomology_table(&base, bound, None)?);
            r.compared += n;
            r.record_all(bad);
            for i in 0..chart_count(seq, side) {
                let rel = relative_cover(seq, side, i)?;
                let loc = chart_loc(side, i);
                let found: Vec<Result<Option<StrandMismatch>>> = chars
                    .par_iter()
                    .map(|chi| {
                        let got = hypercohomology_at(&on_y, chi, &rel)?;
                        let mut flat = chi.clone();
                        flat.e = 0;
                        let expected: BTreeMap<i32, usize> =
                            if image.contains(&flat, loc) { BTreeMap::from([(0, 1)]) } else { BTreeMap::new() };
                        Ok((got != expected).then(|| StrandMismatch {
                            chart: i + 1,
                            character: chi.flat(),
                            got,
                            expected,
                        }))
                    })
                    .collect();
                r.compared += chars.len();
                let mut bad = Vec::new();
                for f in found {
                    bad.extend(f?);
                }
                r.record_all(bad);
            }
        }
        children.push(r);
    }
    children.push(higher_direct_image(seq, side, bound)?);
    Ok(VerificationReport::aggregate(format!("pushforward {side}"), seq, children))
}

/// `t = -fibre`: the rule gives no closed form and some chart preimage has
/// nonzero Čech cohomology in positive degree.
pub fn higher_direct_image(seq: &WeightSequence, side: Space, bound: i64) -> Result<VerificationReport> {
    let fibre = fibre_sum(seq, side);
    let class = y_class(side, 0, -fibre);
    let TwistClass::Y(p, q) = class else { unreachable!() };
    let mut r = VerificationReport::new(format!("push {side} E-power {fibre}"), seq);
    r.target = "no closed form, nonzero higher direct image".into();
    let rule = pushforward_rule(seq, side, p, q)?;
    r.notes.push(format!("rule: {rule:?}"));
    let on_y = MonomialComplex::single(seq, Space::Y, Term::line(anchor(seq, class)?));
    let chars = torus_characters(seq, Space::Y, bound);
    let mut witness = None;
    'outer: for i in 0..chart_count(seq, side) {
        let rel = relative_cover(seq, side, i)?;
        for chi in &chars {
            r.compared += 1;
            let h = hypercohomology_at(&on_y, chi, &rel)?;
            if let Some((&d, &v)) = h.iter().find(|(&d, _)| d > 0) {
                witness = Some(format!("chart {} character {chi}: h^{d} = {v}", i + 1));
                break 'outer;
            }
        }
    }
    match witness {
        Some(w) if rule == PushforwardResult::NotClosedForm => r.notes.push(w),
        Some(w) => {
            r.notes.push(w);
            r.verdict = false;
        }
        None => {
            r.notes.push("no higher direct image found in the box".into());
            r.verdict = false;
        }
    }
    Ok(r)
}

/// Box large enough to hold every monomial contributing to `O(k)` and its
/// Serre dual on a weighted projective space.
pub fn serre_bound(seq: &WeightSequence, k: i64) -> Result<i64> {
    let w = anchor(seq, TwistClass::Minus(1))?;
    let wmax = w.alpha.iter().map(|v| v.abs()).max().unwrap_or(0);
    let reach = k.abs() + seq.sum_a();
    Ok(reach * (1 + wmax) + 1)
}

/// `h^i(O(k)) = h^{dim - i}(O(-sum(a) - k))` on `P(a)` for every `k` in
/// `ks`, with the dual twist taken from the Serre functor.
pub fn serre_duality_check(seq: &WeightSequence, ks: RangeInclusive<i64>) -> Result<VerificationReport> {
    if seq.n() != 0 || seq.m() == 0 {
        return Err(Error::Unsupported(format!("Serre duality check needs a weighted projective space, got {seq}")));
    }
    let mut r = VerificationReport::new("serre duality", seq);
    r.target = "h^i(O(k)) = h^(dim-i)(S(O(-k)))".into();
    for k in ks {
        let bound = serre_bound(seq, k)?;
        let dual = serre_twist(seq, TwistClass::Minus(-k))?;
        let left = cech_cohomology(seq, TwistClass::Minus(k), bound)?.totals();
        let right = cech_cohomology(seq, dual.object, bound)?.totals();
        let mirrored: BTreeMap<i32, usize> = right.iter().map(|(&d, &v)| (dual.shift - d, v)).collect();
        r.compared += 1;
        if left != mirrored {
            r.record_all(vec![StrandMismatch { chart: 0, character: vec![k], got: left, expected: mirrored }]);
        }
    }
    Ok(r)
}
