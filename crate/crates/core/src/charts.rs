//! Cyclic-quotient descriptions of the affine charts `U_i^-`, `U_j^+` and
//! `U_{i,j}` and the smallness test for their group actions.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sheaf::Space;
use crate::weights::WeightSequence;

/// Upper bound on the number of group elements [`is_small`] enumerates.
pub const MAX_GROUP_ORDER: u64 = 1_000_000;

/// `A^{ambient_dim} / (Z_{r_1} x ... x Z_{r_t})`, one weight row per factor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicQuotientChart {
    pub ambient_dim: usize,
    pub group_orders: Vec<i64>,
    /// Row `t` holds the weights of the generator of `Z_{r_t}`, reduced to `[0, r_t)`.
    pub weight_rows: Vec<Vec<i64>>,
}

impl CyclicQuotientChart {
    pub fn new(group_orders: Vec<i64>, rows: Vec<Vec<i64>>, ambient_dim: usize) -> Self {
        let weight_rows = rows
            .into_iter()
            .zip(&group_orders)
            .map(|(row, &r)| row.into_iter().map(|w| w.rem_euclid(r)).collect())
            .collect();
        CyclicQuotientChart { ambient_dim, group_orders, weight_rows }
    }

    pub fn order(&self) -> u64 {
        self.group_orders.iter().map(|&r| r as u64).product()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    /// Collapses the group to a single cyclic factor when that is possible
    /// (trivial factors dropped, coprime factors merged by CRT).
    pub fn as_cyclic(&self) -> Option<(i64, Vec<i64>)> {
        let mut order = 1i64;
        let mut weights = vec![0i64; self.ambient_dim];
        for (row, &r) in self.weight_rows.iter().zip(&self.group_orders) {
            if r == 1 {
                continue;
            }
            if order.gcd(&r) != 1 {
                return None;
            }
            // generator (1, 1) of Z_order x Z_r acts by w/order + v/r
            weights = weights.iter().zip(row).map(|(&w, &v)| (w * r + v * order).rem_euclid(order * r)).collect();
            order *= r;
        }
        Some((order, weights))
    }

    /// Normal form of the action when the group is cyclic.
    pub fn normal_form(&self) -> Option<QuotientTypeNormalForm> {
        self.as_cyclic().map(|(r, w)| QuotientTypeNormalForm::new(r, &w))
    }

    /// `"A1"` for a transversal `1/2(1,1)` singularity, `"smooth"` for the
    /// trivial group, otherwise the rendered normal form.
    pub fn singularity_label(&self) -> String {
        match self.normal_form() {
            Some(nf) if nf.order == 1 => "smooth".to_string(),
            Some(nf) if nf.order == 2 && nf.weights.iter().filter(|&&w| w != 0).count() == 2 => "A1".to_string(),
            Some(nf) => nf.to_string(),
            None => self.to_string(),
        }
    }
}

impl fmt::Display for CyclicQuotientChart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.group_orders.iter().zip(&self.weight_rows).map(|(r, row)| render(*r, row)).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

fn render(order: i64, weights: &[i64]) -> String {
    let w: Vec<String> = weights.iter().map(i64::to_string).collect();
    format!("1/{}({})", order, w.join(","))
}

/// Sorted weights after rescaling by the unit that makes them
/// lexicographically smallest.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuotientTypeNormalForm {
    pub order: i64,
    pub weights: Vec<i64>,
}

impl QuotientTypeNormalForm {
    pub fn new(order: i64, weights: &[i64]) -> Self {
        let best = (1..order.max(2))
            .filter(|u| u.gcd(&order) == 1)
            .map(|u| {
                let mut v: Vec<i64> = weights.iter().map(|w| (w * u).rem_euclid(order)).collect();
                v.sort_unstable();
                v
            })
            .min()
            .unwrap_or_else(|| vec![0; weights.len()]);
        QuotientTypeNormalForm { order, weights: best }
    }
}

impl fmt::Display for QuotientTypeNormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self.order, &self.weights))
    }
}

fn check_index(index: usize, len: usize) -> Result<()> {
    if index == 0 || index > len {
        return Err(Error::IndexOutOfRange { index, len });
    }
    Ok(())
}

/// Chart `U_i^-` (1-based `i`): `Z_{a_i}` with weights
/// `(-a_1, ..., ^a_i, ..., -a_m, b_1, ..., b_n) / a_i`.
pub fn minus_chart(seq: &WeightSequence, i: usize) -> Result<CyclicQuotientChart> {
    check_index(i, seq.m())?;
    let r = seq.a()[i - 1];
    let row: Vec<i64> = seq
        .a()
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != i - 1)
        .map(|(_, &a)| -a)
        .chain(seq.b().iter().copied())
        .collect();
    let dim = row.len();
    Ok(CyclicQuotientChart::new(vec![r], vec![row], dim))
}

pub fn plus_chart(seq: &WeightSequence, j: usize) -> Result<CyclicQuotientChart> {
    minus_chart(&seq.swap(), j)
}

/// Chart `U_{i,j}` of `Y`: `Z_{a'_i} x Z_{b'_j}` acting on the coordinates
/// (x omitting `i`, the `x_i y_j` slot, y omitting `j`).
pub fn y_chart(seq: &WeightSequence, i: usize, j: usize) -> Result<CyclicQuotientChart> {
    check_index(i, seq.m())?;
    check_index(j, seq.n())?;
    let ga = seq.a().iter().fold(0i64, |g, &w| g.gcd(&w));
    let gb = seq.b().iter().fold(0i64, |g, &w| g.gcd(&w));
    let ap: Vec<i64> = seq.a().iter().map(|w| w / ga).collect();
    let bp: Vec<i64> = seq.b().iter().map(|w| w / gb).collect();
    let others_a = || ap.iter().enumerate().filter(move |&(k, _)| k != i - 1).map(|(_, &w)| w);
    let others_b = || bp.iter().enumerate().filter(move |&(k, _)| k != j - 1).map(|(_, &w)| w);
    let row_a: Vec<i64> = others_a().map(|w| -w).chain(std::iter::once(gb)).chain(others_b().map(|_| 0)).collect();
    let row_b: Vec<i64> = others_a().map(|_| 0).chain(std::iter::once(ga)).chain(others_b().map(|w| -w)).collect();
    let dim = row_a.len();
    Ok(CyclicQuotientChart::new(vec![ap[i - 1], bp[j - 1]], vec![row_a, row_b], dim))
}

/// Enumerates the group and checks that every non-identity element moves
/// at least two coordinates.
pub fn is_small(chart: &CyclicQuotientChart) -> Result<bool> {
    let order = chart.order();
    if order > MAX_GROUP_ORDER {
        return Err(Error::TooLargeGroup { order, limit: MAX_GROUP_ORDER });
    }
    let mut element = vec![0i64; chart.group_orders.len()];
    for _ in 1..order {
        // odometer increment
        for (g, &r) in element.iter_mut().zip(&chart.group_orders) {
            *g += 1;
            if *g < r {
                break;
            }
            *g = 0;
        }
        let moved = (0..chart.ambient_dim)
            .filter(|&c| {
                let mut num = 0i64;
                let mut den = 1i64;
                for ((g, &r), row) in element.iter().zip(&chart.group_orders).zip(&chart.weight_rows) {
                    // num/den + g*row[c]/r
                    let l = den.lcm(&r);
                    num = num * (l / den) + g * row[c] * (l / r);
                    den = l;
                }
                num.rem_euclid(den) != 0
            })
            .count();
        if moved < 2 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One row of [`atlas_report`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtlasEntry {
    pub space: Space,
    /// 1-based chart indices: `[i]` on `X^-`, `[j]` on `X^+`, `[i, j]` on `Y`.
    pub index: Vec<usize>,
    pub chart: CyclicQuotientChart,
    pub rendered: String,
    pub small: bool,
    pub normal_form: Option<QuotientTypeNormalForm>,
    pub label: String,
}

impl AtlasEntry {
    fn new(space: Space, index: Vec<usize>, chart: CyclicQuotientChart) -> Result<Self> {
        Ok(AtlasEntry {
            space,
            index,
            rendered: chart.to_string(),
            small: is_small(&chart)?,
            normal_form: chart.normal_form(),
            label: chart.singularity_label(),
            chart,
        })
    }
}

/// All charts of `X^-`, `X^+` and `Y` that exist for the sequence.
pub fn atlas_report(seq: &WeightSequence) -> Result<Vec<AtlasEntry>> {
    let mut out = Vec::new();
    for i in 1..=seq.m() {
        out.push(AtlasEntry::new(Space::Minus, vec![i], minus_chart(seq, i)?)?);
    }
    for j in 1..=seq.n() {
        out.push(AtlasEntry::new(Space::Plus, vec![j], plus_chart(seq, j)?)?);
    }
    for i in 1..=seq.m() {
        for j in 1..=seq.n() {
            out.push(AtlasEntry::new(Space::Y, vec![i, j], y_chart(seq, i, j)?)?);
        }
    }
    Ok(out)
}
