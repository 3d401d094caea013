use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{to_f64, Rational};
use crate::poly::{horner, roots};

use super::BorelTransform;

/// `P(ζ)/Q(ζ)` with `deg P <= m`, `deg Q <= k`, `Q(0) = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalApproximant {
    m: usize,
    k: usize,
    num: Vec<Rational>,
    den: Vec<Rational>,
    num_f64: Vec<f64>,
    den_f64: Vec<f64>,
}

impl RationalApproximant {
    pub fn order(&self) -> (usize, usize) {
        (self.m, self.k)
    }

    pub fn numerator(&self) -> &[Rational] {
        &self.num
    }

    pub fn denominator(&self) -> &[Rational] {
        &self.den
    }

    pub fn eval(&self, z: f64) -> f64 {
        horner(&self.num_f64, z) / horner(&self.den_f64, z)
    }

    pub fn eval_denominator(&self, z: f64) -> f64 {
        horner(&self.den_f64, z)
    }

    /// Poles on the positive real axis, ascending.
    pub fn positive_real_poles(&self) -> Vec<f64> {
        let mut poles: Vec<f64> = roots(&self.den_f64)
            .into_iter()
            .filter(|z| z.re > 0.0 && z.im.abs() <= 1e-8 * z.norm())
            .map(|z| z.re)
            .collect();
        poles.sort_by(f64::total_cmp);
        poles
    }

    /// `S` with `P - T_n Q = ζ^{n+1} S`, where `T_n` is the degree-`n` Taylor
    /// polynomial of the transform (`n <= m + k`).
    pub fn remainder_numerator(&self, series: &[Rational], n: usize) -> Result<Vec<Rational>> {
        if n > self.m + self.k || n > series.len() {
            return Err(Error::precondition(format!(
                "remainder order {n} exceeds the matched order {}",
                self.m + self.k
            )));
        }
        let len = self.num.len().max(n + self.den.len());
        let mut d = vec![Rational::zero(); len];
        for (i, p) in self.num.iter().enumerate() {
            d[i] += p;
        }
        for (i, c) in series.iter().take(n).enumerate() {
            for (j, q) in self.den.iter().enumerate() {
                d[i + 1 + j] -= c * q;
            }
        }
        debug_assert!(d[..=n].iter().all(Zero::is_zero));
        Ok(d.split_off(n + 1))
    }
}

/// Solves `Σ_{j=1}^{k} q_j c_{i-j} = -c_i` for `i = m+1..m+k` exactly (`c_0 = 0`).
fn solve_denominator(c: &dyn Fn(usize) -> Rational, m: usize, k: usize) -> Option<Vec<Rational>> {
    let mut a: Vec<Vec<Rational>> = (0..k)
        .map(|r| {
            let i = m + 1 + r;
            let mut row: Vec<Rational> =
                (1..=k).map(|j| if j <= i { c(i - j) } else { Rational::zero() }).collect();
            row.push(-c(i));
            row
        })
        .collect();
    for col in 0..k {
        let pivot = (col..k).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let inv = a[col][col].recip();
        let pivot_row = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let factor = &row[col] * &inv;
                for (x, p) in row[col..=k].iter_mut().zip(&pivot_row[col..=k]) {
                    *x -= &factor * p;
                }
            }
        }
    }
    let mut q = vec![Rational::one()];
    q.extend((0..k).map(|r| &a[r][k] / &a[r][r]));
    Some(q)
}

/// Near-diagonal Padé approximant of the transform, matching its Maclaurin series
/// through order `m + k`.
pub fn pade_continuation(transform: &BorelTransform, m: usize, k: usize) -> Result<RationalApproximant> {
    let n_max = transform.coeffs().len();
    if m + k > n_max {
        return Err(Error::precondition(format!("m + k = {} exceeds the {n_max} available coefficients", m + k)));
    }
    let coeffs = transform.coeffs();
    let c = |i: usize| if i == 0 { Rational::zero() } else { coeffs[i - 1].clone() };
    let den = solve_denominator(&c, m, k).ok_or(Error::DegeneratePade { m, k })?;
    let num: Vec<Rational> = (0..=m)
        .map(|i| (0..=i.min(k)).map(|j| &den[j] * c(i - j)).sum())
        .collect();
    let num_f64 = num.iter().map(to_f64).collect();
    let den_f64 = den.iter().map(to_f64).collect();
    Ok(RationalApproximant { m, k, num, den, num_f64, den_f64 })
}
