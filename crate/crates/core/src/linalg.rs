//! Small dense matrices: exact rational arithmetic for transition-matrix
//! powers and `f64` helpers for spectral quantities.

use alloc::vec;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Square matrix of big rationals, row major.
#[derive(Debug, Clone, PartialEq)]
pub struct RatMatrix {
    n: usize,
    data: Vec<BigRational>,
}

impl RatMatrix {
    pub fn from_rows(rows: &[Vec<BigRational>]) -> Self {
        let n = rows.len();
        let data = rows.iter().flat_map(|r| r.iter().cloned()).collect();
        Self { n, data }
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![BigRational::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = BigRational::one();
        }
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.n + j]
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        let n = self.n;
        let mut data = vec![BigRational::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = &self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.data[k * n + j];
                    if !b.is_zero() {
                        data[i * n + j] += a * b;
                    }
                }
            }
        }
        RatMatrix { n, data }
    }

    /// `self^e` by repeated squaring.
    pub fn pow(&self, mut e: u64) -> RatMatrix {
        let mut base = self.clone();
        let mut acc = RatMatrix::identity(self.n);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// The successive powers `self^1, ..., self^count`.
    pub fn powers(&self, count: usize) -> Vec<RatMatrix> {
        let mut out = Vec::with_capacity(count);
        let mut cur = self.clone();
        for _ in 0..count {
            let next = cur.mul(self);
            out.push(cur);
            cur = next;
        }
        out
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| crate::rational::to_f64(self.get(i, j))).collect())
            .collect()
    }
}

/// Solves `pi P = pi`, `sum(pi) = 1` exactly by Gaussian elimination.
pub fn stationary_vector(p: &RatMatrix) -> Result<Vec<BigRational>> {
    let n = p.dim();
    // Rows of the augmented system: (P^T - I) pi = 0 with the last equation
    // replaced by the normalization.
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = (0..n)
                .map(|j| {
                    let mut v = p.get(j, i).clone();
                    if i == j {
                        v -= BigRational::one();
                    }
                    v
                })
                .collect();
            row.push(BigRational::zero());
            row
        })
        .collect();
    a[n - 1] = vec![BigRational::one(); n + 1];
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or_else(|| Error::InvalidModel("stationary system is singular".into()))?;
        a.swap(col, pivot);
        let inv = BigRational::one() / a[col][col].clone();
        for v in a[col].iter_mut() {
            *v *= &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in col..=n {
                    let delta = &factor * &a[col][c];
                    a[r][c] -= delta;
                }
            }
        }
    }
    Ok(a.into_iter().map(|row| row[n].clone()).collect())
}

/// True if some power `P^m`, `m <= max_power`, has every entry positive.
pub fn is_primitive(positive: &[Vec<bool>], max_power: usize) -> bool {
    let n = positive.len();
    let mut cur: Vec<Vec<bool>> = positive.to_vec();
    for _ in 0..max_power {
        if cur.iter().all(|r| r.iter().all(|&b| b)) {
            return true;
        }
        let mut next = vec![vec![false; n]; n];
        for i in 0..n {
            for k in 0..n {
                if cur[i][k] {
                    for j in 0..n {
                        if positive[k][j] {
                            next[i][j] = true;
                        }
                    }
                }
            }
        }
        cur = next;
    }
    cur.iter().all(|r| r.iter().all(|&b| b))
}

fn mat_mul_f64(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += x * b[k * n + j];
            }
        }
    }
    out
}

fn max_abs_row_sum(a: &[f64], n: usize) -> f64 {
    (0..n)
        .map(|i| a[i * n..(i + 1) * n].iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Spectral radius of a square matrix via Gelfand's formula
/// `rho(A) = lim ||A^(2^j)||^(1/2^j)`, tracking the norm in log scale so the
/// repeated squares neither overflow nor underflow.
pub fn spectral_radius(a: &[f64], n: usize) -> f64 {
    let norm0 = max_abs_row_sum(a, n);
    if norm0 == 0.0 {
        return 0.0;
    }
    let mut cur: Vec<f64> = a.iter().map(|x| x / norm0).collect();
    // log_rate = log ||A^(2^j)|| / 2^j
    let mut log_rate = libm::log(norm0);
    let mut weight = 1.0f64;
    for _ in 0..64 {
        cur = mat_mul_f64(&cur, &cur, n);
        weight *= 0.5;
        let nu = max_abs_row_sum(&cur, n);
        if nu < 1e-300 {
            return 0.0;
        }
        for x in cur.iter_mut() {
            *x /= nu;
        }
        let step = weight * libm::log(nu);
        log_rate += step;
        if log_rate < -745.0 {
            return 0.0;
        }
        if step.abs() < 1e-17 {
            break;
        }
    }
    libm::exp(log_rate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::parse_rational;

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn stationary_of_two_state_chain() {
        let p = RatMatrix::from_rows(&[vec![q("0.9"), q("0.1")], vec![q("0.2"), q("0.8")]]);
        let pi = stationary_vector(&p).unwrap();
        assert_eq!(pi, vec![q("2/3"), q("1/3")]);
    }

    #[test]
    fn powers_agree_with_pow() {
        let p = RatMatrix::from_rows(&[vec![q("3/4"), q("1/4")], vec![q("1/4"), q("3/4")]]);
        let ps = p.powers(5);
        assert_eq!(ps[4], p.pow(5));
        assert_eq!(p.pow(0), RatMatrix::identity(2));
    }

    #[test]
    fn spectral_radius_two_state() {
        // P - 1 pi for P = ((0.9,0.1),(0.2,0.8)); eigenvalues 0 and 0.7.
        let pi = [2.0 / 3.0, 1.0 / 3.0];
        let a = [0.9 - pi[0], 0.1 - pi[1], 0.2 - pi[0], 0.8 - pi[1]];
        let r = spectral_radius(&a, 2);
        assert!((r - 0.7).abs() < 1e-12, "{r}");
    }

    #[test]
    fn spectral_radius_rotation_like() {
        // Complex pair 0.5 e^{+-i pi/2}: [[0,-0.5],[0.5,0]].
        let r = spectral_radius(&[0.0, -0.5, 0.5, 0.0], 2);
        assert!((r - 0.5).abs() < 1e-12, "{r}");
        assert_eq!(spectral_radius(&[0.0; 4], 2), 0.0);
        // Nilpotent.
        assert!(spectral_radius(&[0.0, 1.0, 0.0, 0.0], 2) < 1e-6);
    }

    #[test]
    fn primitivity() {
        assert!(is_primitive(&[vec![true, true], vec![true, false]], 4));
        assert!(!is_primitive(&[vec![false, true], vec![true, false]], 4));
        assert!(!is_primitive(&[vec![true, false], vec![false, true]], 4));
    }
}
