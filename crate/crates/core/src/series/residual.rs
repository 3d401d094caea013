//! Substitution oracles: plug a truncated series back into its defining functional
//! equation by plain polynomial multiplication and inspect the leftover coefficients.
//!
//! Nothing here reuses the recurrences, so a vanishing low-order residual is an
//! independent confirmation of the coefficients.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{int, rat, CubicField, Rational, Surd};

use super::{cube_root_taylor, BasisStep, ExactSeries, Family};

/// Coefficients `r_j` of a residual polynomial in the series variable, `j = 0, 1, ...`.
#[derive(Clone, Debug, PartialEq)]
pub struct Residual {
    pub coeffs: Vec<Surd>,
}

impl Residual {
    pub fn first_nonzero(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// True when every coefficient of order `0..=order` is exactly zero.
    pub fn vanishes_through(&self, order: usize) -> bool {
        self.coeffs.len() > order && self.coeffs[..=order].iter().all(Surd::is_zero)
    }
}

fn poly_mul(field: &CubicField, a: &[Surd], b: &[Surd]) -> Vec<Surd> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Surd::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] = out[i + j].add(&field.mul(x, y));
            }
        }
    }
    out
}

fn add_at(p: &mut Vec<Surd>, idx: usize, v: &Surd) {
    if p.len() <= idx {
        p.resize(idx + 1, Surd::zero());
    }
    p[idx] = p[idx].add(v);
}

/// Derivative polynomial `Σ n c_n x^{n-1}` (index = power).
fn derivative(coeffs: &[Surd]) -> Vec<Surd> {
    coeffs.iter().enumerate().map(|(i, c)| c.scale(&int(i as i64 + 1))).collect()
}

/// Value polynomial `Σ c_n x^n` with a leading zero constant.
fn values(coeffs: &[Surd]) -> Vec<Surd> {
    std::iter::once(Surd::zero()).chain(coeffs.iter().cloned()).collect()
}

/// `(Σ n a_n τ^{n-1})(Σ a_n τ^n - τ) - 6τ^2` for the singular families.
pub fn singular_residual(series: &ExactSeries) -> Result<Residual> {
    if !matches!(series.family(), Family::SingularPlus | Family::SingularMinus) {
        return Err(Error::precondition("singular residual needs the a_n^± families"));
    }
    let field = CubicField::trivial();
    let mut g = values(series.coeffs());
    add_at(&mut g, 1, &Surd::rational(int(-1)));
    let mut r = poly_mul(&field, &derivative(series.coeffs()), &g);
    add_at(&mut r, 2, &Surd::rational(int(-6)));
    Ok(Residual { coeffs: r })
}

/// Branch residual in `u = (t - t0)^{1/2}`:
/// `(Σ (n/2) b_n u^{n-2})(Σ (b_m - c_m) u^m) - 2`, returned from `u^0` upward.
pub fn branch_residual(series: &ExactSeries) -> Result<Residual> {
    if !matches!(series.family(), Family::BranchPlus | Family::BranchMinus) {
        return Err(Error::precondition("branch residual needs a branch family"));
    }
    let t0 = series.anchor().expect("branch series are anchored");
    let n = series.len();
    let cube = cube_root_taylor(t0, n / 2 + 1)?;
    let field = series.field();
    // u · (Σ (n/2) b_n u^{n-2}) = Σ (n/2) b_n u^{n-1}
    let half_deriv: Vec<Surd> = derivative(series.coeffs()).iter().map(|c| c.scale(&rat(1, 2))).collect();
    let gap: Vec<Surd> = (1..=n).map(|m| series.coeff(m).sub(cube.coeff(m))).collect();
    let mut r = poly_mul(field, &half_deriv, &values(&gap));
    add_at(&mut r, 1, &Surd::rational(int(-2)));
    // divide by u: the constant term of the product is structurally zero
    debug_assert!(r[0].is_zero());
    r.remove(0);
    Ok(Residual { coeffs: r })
}

/// `(∛t0 + Σ c_k u^{2k})^3 - (t0 + u^2)`: exactness of the cube-root expansion itself.
pub fn cube_root_residual(series: &ExactSeries) -> Result<Residual> {
    if series.family() != Family::CubeRootTaylor {
        return Err(Error::precondition("cube-root residual needs the Taylor family"));
    }
    let field = series.field();
    let mut p = values(series.coeffs());
    p[0] = series.offset().clone();
    let cube = poly_mul(field, &poly_mul(field, &p, &p), &p);
    let mut r = cube;
    let t0 = series.anchor().expect("anchored").clone();
    add_at(&mut r, 0, &Surd::rational(-t0));
    add_at(&mut r, 2, &Surd::rational(int(-1)));
    Ok(Residual { coeffs: r })
}

/// `(Σ n a_n τ^{n-1})(ε - τ + Σ a_n τ^n) - 6τ^2` for the holomorphic family.
pub fn holomorphic_residual(series: &ExactSeries) -> Result<Residual> {
    if series.family() != Family::Holomorphic || series.step() != BasisStep::Third {
        return Err(Error::precondition("holomorphic residual needs the a_n(eps) family"));
    }
    let field = CubicField::trivial();
    let eps: Rational = series.offset().as_rational().cloned().unwrap_or_else(Rational::zero);
    let mut g = values(series.coeffs());
    add_at(&mut g, 0, &Surd::rational(eps));
    add_at(&mut g, 1, &Surd::rational(int(-1)));
    let mut r = poly_mul(&field, &derivative(series.coeffs()), &g);
    add_at(&mut r, 2, &Surd::rational(int(-6)));
    Ok(Residual { coeffs: r })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::*;

    #[test]
    fn plus_and_minus_residuals_vanish() {
        for s in [singular_plus_coeffs(12), singular_minus_coeffs(12)] {
            let r = singular_residual(&s).unwrap();
            assert!(r.vanishes_through(12));
            assert_eq!(r.first_nonzero(), Some(13));
        }
    }

    #[test]
    fn perturbed_coefficient_is_caught() {
        let mut s = singular_plus_coeffs(6);
        s.coeffs[3] = Surd::rational(int(2161));
        let r = singular_residual(&s).unwrap();
        assert_eq!(r.first_nonzero(), Some(4));
    }

    #[test]
    fn branch_residual_vanishes_for_irrational_anchor() {
        let s = branch_half_coeffs(&rat(1, 1000), 10, BranchSign::Minus).unwrap();
        let r = branch_residual(&s).unwrap();
        assert!(r.vanishes_through(9), "{:?}", r.first_nonzero());
        let s = branch_half_coeffs(&int(2), 10, BranchSign::Plus).unwrap();
        assert!(branch_residual(&s).unwrap().vanishes_through(9));
    }

    #[test]
    fn cube_root_expansion_cubes_back() {
        let s = cube_root_taylor(&int(2), 5).unwrap();
        let r = cube_root_residual(&s).unwrap();
        assert!(r.vanishes_through(11));
    }

    #[test]
    fn holomorphic_residual_vanishes() {
        for eps in [int(1), rat(-1, 3), rat(7, 2)] {
            let s = holomorphic_coeffs(&eps, 15).unwrap();
            assert!(holomorphic_residual(&s).unwrap().vanishes_through(14));
        }
    }

    #[test]
    fn families_are_checked() {
        assert!(singular_residual(&holomorphic_coeffs(&int(1), 4).unwrap()).is_err());
        assert!(branch_residual(&singular_plus_coeffs(4)).is_err());
    }
}
