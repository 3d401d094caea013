use num_bigint::BigInt;
use num_traits::Signed;
use crate::exact::{factorial, Rational};

use super::singular_plus_integers;

/// Exact check of `6^{n-1}(n-1)! <= |a_n^+| <= 12^{n-1} n^{n-3}` for one index.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub n: usize,
    pub lower: Rational,
    pub value: Rational,
    pub upper: Rational,
    pub ok: bool,
}

impl BoundReport {
    pub fn lower_is_tight(&self) -> bool {
        self.lower == self.value
    }
}

fn upper_bound(n: usize) -> Rational {
    let twelve = Rational::from_integer(num_traits::pow(BigInt::from(12), n - 1));
    let base = Rational::from_integer(BigInt::from(n));
    // n^{n-3} is 1/n at n = 2
    let pow = if n >= 3 {
        num_traits::pow(base, n - 3)
    } else {
        num_traits::pow(base, 3 - n).recip()
    };
    twelve * pow
}

/// Reports for `n = 2..=n_max`; empty when `n_max < 2`.
pub fn coefficient_bounds(n_max: usize) -> Vec<BoundReport> {
    let a = singular_plus_integers(n_max);
    (2..=n_max)
        .map(|n| {
            let lower = Rational::from_integer(
                num_traits::pow(BigInt::from(6), n - 1) * factorial(n as u64 - 1),
            );
            let value = Rational::from_integer(a[n - 1].abs());
            let upper = upper_bound(n);
            let ok = lower <= value && value <= upper;
            BoundReport { n, lower, value, upper, ok }
        })
        .collect()
}
