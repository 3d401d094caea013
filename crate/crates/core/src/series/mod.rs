//! Exact coefficient families of the formal solutions of the cube-root Loewner flow.
//!
//! Every recurrence runs in arbitrary-precision rationals (or in `Q(t0^{1/3})` for the
//! branch families); floating point only enters in [`eval_series`].

mod bounds;
pub mod residual;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{int, rat, CubicField, Rational, Surd};

pub use bounds::{coefficient_bounds, BoundReport};

/// Default ceiling on series orders accepted from user input.
pub const DEFAULT_ORDER_CAP: usize = 500;

/// Exponent step of the power basis: `x^{n·step}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisStep {
    /// `τ^n`
    Whole,
    /// `(t - t0)^{n/2}`
    Half,
    /// `t^{n/3}`
    Third,
}

impl BasisStep {
    pub fn as_rational(self) -> Rational {
        match self {
            BasisStep::Whole => int(1),
            BasisStep::Half => rat(1, 2),
            BasisStep::Third => rat(1, 3),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    SingularPlus,
    SingularMinus,
    CubeRootTaylor,
    BranchPlus,
    BranchMinus,
    Holomorphic,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::SingularPlus => "plus",
            Family::SingularMinus => "minus",
            Family::CubeRootTaylor => "cuberoot",
            Family::BranchPlus => "branch-plus",
            Family::BranchMinus => "branch-minus",
            Family::Holomorphic => "holomorphic",
        }
    }
}

/// Sign choice `b_{1/2} = ±2` of the branch expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BranchSign {
    Plus,
    Minus,
}

impl BranchSign {
    pub fn factor(self) -> f64 {
        match self {
            BranchSign::Plus => 1.0,
            BranchSign::Minus => -1.0,
        }
    }
}

/// Truncated formal series `offset + Σ_{n=1}^{n_max} coeffs[n-1] · x^{n·step}`.
///
/// Coefficients live in the cubic field attached to the anchor (`Q` itself when there
/// is no anchor).
#[derive(Clone, Debug, PartialEq)]
pub struct ExactSeries {
    family: Family,
    step: BasisStep,
    offset: Surd,
    coeffs: Vec<Surd>,
    anchor: Option<Rational>,
    field: CubicField,
}

impl ExactSeries {
    fn new(
        family: Family,
        step: BasisStep,
        offset: Surd,
        coeffs: Vec<Surd>,
        anchor: Option<Rational>,
    ) -> Result<Self> {
        if anchor.is_some() != (step == BasisStep::Half) {
            return Err(Error::precondition("an anchor is required exactly for half-power series"));
        }
        let field = match &anchor {
            Some(t0) => CubicField::new(t0.clone())?,
            None => CubicField::trivial(),
        };
        Ok(ExactSeries { family, step, offset, coeffs, anchor, field })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn step(&self) -> BasisStep {
        self.step
    }

    pub fn offset(&self) -> &Surd {
        &self.offset
    }

    pub fn anchor(&self) -> Option<&Rational> {
        self.anchor.as_ref()
    }

    pub fn field(&self) -> &CubicField {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of index `n` (1-based).
    pub fn coeff(&self, n: usize) -> &Surd {
        &self.coeffs[n - 1]
    }

    pub fn coeffs(&self) -> &[Surd] {
        &self.coeffs
    }

    /// Coefficients as plain rationals when no `t0^{1/3}` factor is present.
    pub fn rational_coeffs(&self) -> Option<Vec<Rational>> {
        self.coeffs.iter().map(|c| c.as_rational().cloned()).collect()
    }

    pub fn coeff_f64(&self, n: usize) -> f64 {
        self.field.to_f64(self.coeff(n))
    }

    /// The opposite branch of a half-power series: `(t - t0)^{n/2}` flips sign for odd `n`.
    pub fn other_branch(&self) -> ExactSeries {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if (i + 1) % 2 == 1 { c.neg() } else { c.clone() })
            .collect();
        let family = match self.family {
            Family::BranchPlus => Family::BranchMinus,
            Family::BranchMinus => Family::BranchPlus,
            f => f,
        };
        ExactSeries { family, coeffs, ..self.clone() }
    }
}

fn rational_series(family: Family, step: BasisStep, offset: Rational, coeffs: Vec<Rational>) -> ExactSeries {
    let coeffs = coeffs.into_iter().map(Surd::rational).collect();
    ExactSeries::new(family, step, Surd::rational(offset), coeffs, None)
        .expect("unanchored series are always valid")
}

/// `a_n^+`: `a_1 = 1`, `a_2 = 6`, `a_n = -Σ_{k=2}^{n-1} k a_k a_{n+1-k}`.
pub fn singular_plus_coeffs(n_max: usize) -> ExactSeries {
    let a = singular_plus_integers(n_max);
    rational_series(
        Family::SingularPlus,
        BasisStep::Whole,
        Rational::zero(),
        a.into_iter().map(Rational::from_integer).collect(),
    )
}

/// The `a_n^+` family as integers.
pub fn singular_plus_integers(n_max: usize) -> Vec<BigInt> {
    let mut a: Vec<BigInt> = Vec::with_capacity(n_max + 1);
    a.push(BigInt::zero());
    for n in 1..=n_max {
        let next = match n {
            1 => BigInt::one(),
            2 => BigInt::from(6),
            _ => -(2..n).map(|k| BigInt::from(k) * &a[k] * &a[n + 1 - k]).sum::<BigInt>(),
        };
        a.push(next);
    }
    a.remove(0);
    a
}

/// `a_n^-`: `a_1 = 0`, `a_2 = -3`, `a_n = (1/n) Σ_{k=2}^{n-1} k a_k a_{n+1-k}`.
pub fn singular_minus_coeffs(n_max: usize) -> ExactSeries {
    let mut a: Vec<Rational> = vec![Rational::zero()];
    for n in 1..=n_max {
        let next = match n {
            1 => Rational::zero(),
            2 => int(-3),
            _ => {
                let s: Rational = (2..n).map(|k| int(k as i64) * &a[k] * &a[n + 1 - k]).sum();
                s / int(n as i64)
            }
        };
        a.push(next);
    }
    a.remove(0);
    rational_series(Family::SingularMinus, BasisStep::Whole, Rational::zero(), a)
}

/// `binom(1/3, k) = (-1)^{k-1} 2·5···(3k-4) / (3^k k!)`.
fn third_binomial(k: usize) -> Rational {
    if k == 0 {
        return int(1);
    }
    let mut num = BigInt::one();
    for j in 1..k {
        num *= BigInt::from(3 * j as i64 - 1);
    }
    let den = num_traits::pow(BigInt::from(3), k) * crate::exact::factorial(k as u64);
    let value = Rational::new(num, den);
    if k.is_multiple_of(2) {
        -value
    } else {
        value
    }
}

fn check_anchor(t0: &Rational) -> Result<()> {
    if !t0.is_positive() {
        return Err(Error::precondition(
            "expansion point t0 must be a positive singular time (t0 > 0)",
        ));
    }
    Ok(())
}

/// Taylor expansion of `t^{1/3}` at `t0` in powers of `(t - t0)^{1/2}`.
///
/// Index `2k` holds `c_k = t0^{1/3} binom(1/3,k) / t0^k`; odd indices are zero.
pub fn cube_root_taylor(t0: &Rational, k_max: usize) -> Result<ExactSeries> {
    check_anchor(t0)?;
    let field = CubicField::new(t0.clone())?;
    let s = field.generator();
    let mut coeffs = Vec::with_capacity(2 * k_max);
    let mut inv_power = int(1);
    for k in 1..=k_max {
        inv_power /= t0;
        coeffs.push(Surd::zero());
        coeffs.push(s.scale(&(third_binomial(k) * &inv_power)));
    }
    ExactSeries::new(Family::CubeRootTaylor, BasisStep::Half, s, coeffs, Some(t0.clone()))
}

/// Branch solution through the algebraic critical point `(∛t0, t0)`:
/// `f = ∛t0 + Σ b_{n/2} (t - t0)^{n/2}`, `b_{1/2} = ±2`.
pub fn branch_half_coeffs(t0: &Rational, n_max: usize, sign: BranchSign) -> Result<ExactSeries> {
    check_anchor(t0)?;
    let cube = cube_root_taylor(t0, n_max / 2 + 1)?;
    let field = cube.field().clone();
    let c = |i: usize| -> Surd {
        if i <= cube.len() {
            cube.coeff(i).clone()
        } else {
            Surd::zero()
        }
    };
    // b[0] unused; b[n] = b_{n/2}
    let mut b: Vec<Surd> = vec![Surd::zero()];
    for n in 1..=n_max {
        let next = if n == 1 {
            Surd::rational(int(2))
        } else {
            let mut acc = Surd::zero();
            for k in 2..n {
                let diff = b[n + 1 - k].sub(&c(n + 1 - k));
                acc = acc.add(&field.mul(&b[k], &diff).scale(&int(k as i64)));
            }
            c(n).sub(&acc.scale(&rat(1, 2))).scale(&rat(1, n as i64 + 1))
        };
        b.push(next);
    }
    b.remove(0);
    let offset = field.generator();
    let plus = ExactSeries::new(Family::BranchPlus, BasisStep::Half, offset, b, Some(t0.clone()))?;
    Ok(match sign {
        BranchSign::Plus => plus,
        BranchSign::Minus => plus.other_branch(),
    })
}

/// Holomorphic solution from the real point `ε`: `f = ε + Σ a_n(ε) t^{n/3}`.
///
/// With `ε = p/q` the scaled values `c_n = n!·q^{n-1}·ε^{n-2}·a_n` are integers obeying
/// `c_n = (n-1)q·c_{n-1} - p·Σ_{k=3}^{n-3} C(n-1, k)·c_{n-k}·c_k`, `c_n = 6(n-1)!q^{n-1}`
/// for `n = 3, 4, 5`; the recurrence runs in integers and each `a_n` is reduced once.
pub fn holomorphic_coeffs(eps: &Rational, n_max: usize) -> Result<ExactSeries> {
    if eps.is_zero() {
        return Err(Error::precondition(
            "eps = 0 is the singular point of indefinite character; holomorphic solutions need eps != 0",
        ));
    }
    let (p, q) = (eps.numer(), eps.denom());
    let mut c: Vec<BigInt> = vec![BigInt::zero(); n_max + 1];
    let mut factorial = BigInt::one();
    let mut q_pow = BigInt::one();
    let mut binom: Vec<BigInt> = vec![BigInt::one()];
    let mut a = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        // factorial = (n-1)!, q_pow = q^{n-1}, binom = row n-1 of Pascal's triangle
        if n > 1 {
            factorial *= n - 1;
            q_pow *= q;
            let mut next = vec![BigInt::one(); n];
            for k in 1..n - 1 {
                next[k] = &binom[k - 1] + &binom[k];
            }
            binom = next;
        }
        c[n] = match n {
            1 | 2 => BigInt::zero(),
            3..=5 => BigInt::from(6) * &factorial * &q_pow,
            _ => {
                let conv: BigInt = (3..=n - 3).map(|k| &binom[k] * &c[n - k] * &c[k]).sum();
                BigInt::from(n - 1) * q * &c[n - 1] - p * conv
            }
        };
        // a_n = c_n / (n!·q^{n-1}·ε^{n-2}) = c_n / (n!·q·p^{n-2})
        a.push(if n < 3 {
            Rational::zero()
        } else {
            Rational::new(c[n].clone(), &factorial * n * q * num_traits::pow(p.clone(), n - 2))
        });
    }
    Ok(rational_series(Family::Holomorphic, BasisStep::Third, eps.clone(), a))
}

/// Truncated evaluation `offset + Σ_{n=1}^{n_trunc} c_n x^{n·step}` in `f64`.
pub fn eval_series(series: &ExactSeries, x: f64, n_trunc: usize) -> Result<f64> {
    if n_trunc > series.len() {
        return Err(Error::precondition(format!(
            "n_trunc = {n_trunc} exceeds the {} available coefficients",
            series.len()
        )));
    }
    let y = match series.step() {
        BasisStep::Whole => x,
        BasisStep::Half | BasisStep::Third if x < 0.0 => {
            return Err(Error::precondition("fractional power basis needs x >= 0"));
        }
        BasisStep::Half => x.sqrt(),
        BasisStep::Third => x.cbrt(),
    };
    let field = series.field();
    let mut acc = 0.0;
    for n in (1..=n_trunc).rev() {
        acc = (acc + field.to_f64(series.coeff(n))) * y;
    }
    Ok(field.to_f64(series.offset()) + acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::to_f64;

    #[test]
    fn plus_family_known_values() {
        let a = singular_plus_integers(5);
        let want: Vec<BigInt> = [1, 6, -72, 2160, -93312].iter().map(|&v| BigInt::from(v)).collect();
        assert_eq!(a, want);
        assert_eq!(singular_plus_coeffs(2).rational_coeffs().unwrap(), vec![int(1), int(6)]);
    }

    #[test]
    fn minus_family_known_values() {
        let a = singular_minus_coeffs(4).rational_coeffs().unwrap();
        assert_eq!(a, vec![int(0), int(-3), int(6), rat(-45, 2)]);
    }

    #[test]
    fn cube_root_taylor_at_one() {
        let s = cube_root_taylor(&int(1), 3).unwrap();
        assert_eq!(s.coeff(2).as_rational(), Some(&rat(1, 3)));
        assert_eq!(s.coeff(4).as_rational(), Some(&rat(-1, 9)));
        // third derivative of t^{1/3} at 1 is 10/27, divided by 3!
        assert_eq!(s.coeff(6).as_rational(), Some(&rat(5, 81)));
        for odd in [1, 3, 5] {
            assert!(s.coeff(odd).is_zero());
        }
        assert!(cube_root_taylor(&int(0), 2).is_err());
        assert!(cube_root_taylor(&int(-1), 2).is_err());
    }

    #[test]
    fn cube_root_taylor_keeps_surd_symbolic() {
        let s = cube_root_taylor(&int(2), 2).unwrap();
        // c_1 = 2^{1/3} / 6, stored as (1/6)·s
        assert_eq!(s.coeff(2).parts[1], rat(1, 6));
        assert!(s.coeff(2).parts[0].is_zero());
        assert!((s.coeff_f64(2) - 2f64.powf(-2.0 / 3.0) / 3.0).abs() < 1e-16);
    }

    #[test]
    fn branch_leading_coefficients() {
        let plus = branch_half_coeffs(&int(1), 4, BranchSign::Plus).unwrap();
        assert_eq!(plus.coeff(1).as_rational(), Some(&int(2)));
        assert_eq!(plus.coeff(2).as_rational(), Some(&rat(1, 9)));
        let minus = branch_half_coeffs(&rat(1, 1000), 4, BranchSign::Minus).unwrap();
        assert_eq!(minus.coeff(1).as_rational(), Some(&int(-2)));
        assert_eq!(minus.family(), Family::BranchMinus);
        assert_eq!(minus.other_branch().coeffs(), branch_half_coeffs(&rat(1, 1000), 4, BranchSign::Plus).unwrap().coeffs());
    }

    /// Direct rational form of the holomorphic recurrence.
    fn holomorphic_reference(eps: &Rational, n_max: usize) -> Vec<Rational> {
        let mut a: Vec<Rational> = vec![Rational::zero(); n_max + 1];
        for n in 3..=n_max {
            a[n] = if n <= 5 {
                int(6) / (int(n as i64) * num_traits::pow(eps.clone(), n - 2))
            } else {
                let conv: Rational = (3..=n - 3).map(|k| int((n - k) as i64) * &a[n - k] * &a[k]).sum();
                (int(n as i64 - 1) * &a[n - 1] - conv) / (int(n as i64) * eps)
            };
        }
        a.remove(0);
        a
    }

    #[test]
    fn holomorphic_integer_recurrence_matches_rational_form() {
        for eps in [int(1), rat(-2, 7), rat(1, 10), rat(3, 2), rat(-1, 1000)] {
            let fast = holomorphic_coeffs(&eps, 40).unwrap().rational_coeffs().unwrap();
            assert_eq!(fast, holomorphic_reference(&eps, 40), "eps = {eps}");
        }
    }

    #[test]
    fn holomorphic_onset_and_sixth() {
        let a = holomorphic_coeffs(&int(1), 6).unwrap().rational_coeffs().unwrap();
        assert_eq!(a, vec![int(0), int(0), int(2), rat(3, 2), rat(6, 5), int(-1)]);
        let b = holomorphic_coeffs(&rat(-2, 7), 3).unwrap().rational_coeffs().unwrap();
        assert!(b[0].is_zero() && b[1].is_zero());
        let err = holomorphic_coeffs(&int(0), 6).unwrap_err();
        assert!(err.to_string().contains("indefinite character"));
    }

    #[test]
    fn evaluation_edge_cases() {
        let plus = singular_plus_coeffs(4);
        assert_eq!(eval_series(&plus, 0.0, 4).unwrap(), 0.0);
        let v = eval_series(&plus, 1e-4, 2).unwrap();
        assert!((v - (1e-4 + 6e-8)).abs() < 1e-20);
        assert!(eval_series(&plus, 1.0, 5).is_err());

        let branch = branch_half_coeffs(&int(1), 6, BranchSign::Plus).unwrap();
        assert_eq!(eval_series(&branch, 0.0, 6).unwrap(), 1.0);
        let d = 1e-6;
        let v = eval_series(&branch, d, 6).unwrap();
        assert!((v - (1.0 + 2.0 * d.sqrt())).abs() < 2.0 * d);
        assert!(eval_series(&branch, -1.0, 2).is_err());
        let hol = holomorphic_coeffs(&int(1), 6).unwrap();
        assert!(eval_series(&hol, -1e-3, 2).is_err());
        assert_eq!(eval_series(&hol, 0.0, 6).unwrap(), 1.0);
    }

    #[test]
    fn anchor_only_for_half_step() {
        let r = ExactSeries::new(Family::Holomorphic, BasisStep::Third, Surd::zero(), vec![], Some(int(1)));
        assert!(r.is_err());
        let r = ExactSeries::new(Family::BranchPlus, BasisStep::Half, Surd::zero(), vec![], None);
        assert!(r.is_err());
        assert_eq!(to_f64(&BasisStep::Half.as_rational()), 0.5);
    }
}
