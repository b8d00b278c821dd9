//! Exact integer linear algebra: ranks by fraction-free elimination and
//! rational kernels with primitive integer bases.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Dense row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = IntMatrix::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            m.data[r * cols..(r + 1) * cols].copy_from_slice(row);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] += v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn row(&self, r: usize) -> &[i64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<i64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    /// `self * other`, panicking on overflow.
    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b != 0 {
                        let v = out.get(i, j).checked_add(a.checked_mul(b).expect("overflow")).expect("overflow");
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        rank(self)
    }
}

/// Rank over the rationals. Runs fraction-free elimination in `i128` and falls
/// back to big integers on overflow.
pub fn rank(m: &IntMatrix) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    let rows: Vec<Vec<i128>> = (0..m.rows)
        .map(|r| m.row(r).iter().map(|&v| v as i128).collect())
        .filter(|row: &Vec<i128>| row.iter().any(|&v| v != 0))
        .collect();
    match ff_rank_i128(rows) {
        Some(r) => r,
        None => {
            let rows = (0..m.rows).map(|r| m.row(r).iter().map(|&v| BigInt::from(v)).collect()).collect();
            ff_rank_big(rows)
        }
    }
}

fn ff_rank_i128(mut a: Vec<Vec<i128>>) -> Option<usize> {
    let rows = a.len();
    if rows == 0 {
        return Some(0);
    }
    let cols = a[0].len();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, p);
        let pivot = a[r][c];
        for i in r + 1..rows {
            let lead = a[i][c];
            if lead == 0 {
                continue;
            }
            let g = pivot.gcd(&lead);
            let (pm, lm) = (pivot / g, lead / g);
            for j in c..cols {
                a[i][j] = pm.checked_mul(a[i][j])?.checked_sub(lm.checked_mul(a[r][j])?)?;
            }
            let content = a[i][c + 1..].iter().fold(0i128, |g, &v| g.gcd(&v));
            if content > 1 {
                for v in &mut a[i][c + 1..] {
                    *v /= content;
                }
            }
        }
        r += 1;
    }
    Some(r)
}

fn ff_rank_big(mut a: Vec<Vec<BigInt>>) -> usize {
    let rows = a.len();
    if rows == 0 {
        return 0;
    }
    let cols = a[0].len();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        for i in r + 1..rows {
            if a[i][c].is_zero() {
                continue;
            }
            let pivot = a[r][c].clone();
            let lead = a[i][c].clone();
            for j in c..cols {
                let v = &pivot * &a[i][j] - &lead * &a[r][j];
                a[i][j] = v;
            }
            let g = a[i][c + 1..].iter().fold(BigInt::zero(), |g, v| g.gcd(v));
            if g > BigInt::one() {
                for v in &mut a[i][c + 1..] {
                    *v /= &g;
                }
            }
        }
        r += 1;
    }
    r
}

/// Basis of the right kernel `{v : m v = 0}`, each vector scaled to a
/// primitive integer vector with positive leading entry. The basis is the
/// reduced-echelon one, so it depends only on `m`.
pub fn kernel_basis(m: &IntMatrix) -> Vec<Vec<i64>> {
    let rows = m.rows;
    let cols = m.cols;
    let mut a: Vec<Vec<BigRational>> =
        (0..rows).map(|r| m.row(r).iter().map(|&v| BigRational::from_integer(v.into())).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for v in &mut a[r] {
            *v *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let d = &f * &a[r][j];
                    a[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); cols];
            v[f] = BigRational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[row][f].clone();
            }
            primitive(&v)
        })
        .collect()
}

/// Scales a rational vector to a primitive integer vector.
pub fn primitive(v: &[BigRational]) -> Vec<i64> {
    let den = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&den / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    let sign = ints.iter().find(|x| !x.is_zero()).map_or(BigInt::one(), |x| x.signum());
    ints.iter()
        .map(|x| {
            let y = if g.is_zero() { x.clone() } else { x / &g * &sign };
            y.to_i64().expect("kernel entry exceeds i64")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_ranks() {
        assert_eq!(IntMatrix::zeros(3, 4).rank(), 0);
        assert_eq!(IntMatrix::from_rows(&[vec![1, 2], vec![2, 4]]).rank(), 1);
        assert_eq!(IntMatrix::from_rows(&[vec![1, 2], vec![3, 4]]).rank(), 2);
        let m = IntMatrix::from_rows(&[vec![0, 0, 1], vec![0, 0, 2], vec![1, 1, 0]]);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn rank_survives_large_entries() {
        let big = i64::MAX / 3;
        let m = IntMatrix::from_rows(&[vec![big, big - 1, 7], vec![big - 5, big, 11], vec![big - 1, big - 1, 7]]);
        assert_eq!(m.rank(), 3);
        let m = IntMatrix::from_rows(&[vec![big, big - 1], vec![big, big - 1]]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernel_is_annihilated() {
        let m = IntMatrix::from_rows(&[vec![1, 2, 3, 4], vec![2, 4, 6, 9]]);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 2);
        for v in &k {
            for r in 0..m.rows() {
                let s: i64 = m.row(r).iter().zip(v).map(|(a, b)| a * b).sum();
                assert_eq!(s, 0);
            }
        }
    }
}
