//! Root-test sequences on coefficient tails, working from `ln|c_k|` so that huge
//! exact coefficients never have to fit in a double.

/// Default sup-window for an `n`-term tail.
pub fn default_window(n: usize) -> usize {
    (n / 10).max(4)
}

/// `max_{end-w < k <= end} ln|c_k| / k`, coefficients indexed from 1 (`ln_abs[k-1]`).
///
/// The sup over a window smooths out sign patterns and isolated zeros. Returns
/// `-inf` when every coefficient in the window vanishes.
pub fn windowed_root(ln_abs: &[f64], end: usize, window: usize) -> f64 {
    let start = end.saturating_sub(window).max(1);
    (start..=end)
        .map(|k| ln_abs[k - 1] / k as f64)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `(n, L_n)` for `n = window..=ln_abs.len()`.
pub fn root_sequence(ln_abs: &[f64], window: usize) -> Vec<(usize, f64)> {
    (window.max(1)..=ln_abs.len()).map(|n| (n, windowed_root(ln_abs, n, window))).collect()
}

/// Ordinary least squares `y = a + b x`; returns `(a, b)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<(f64, f64)> {
    let n = xs.len() as f64;
    if xs.len() < 2 {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let b = sxy / sxx;
    Some((my - b * mx, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_tail_recovers_ratio() {
        let ln: Vec<f64> = (1..=40).map(|k| k as f64 * 3f64.ln()).collect();
        assert!((windowed_root(&ln, 40, 4) - 3f64.ln()).abs() < 1e-14);
        let seq = root_sequence(&ln, 4);
        assert_eq!(seq.first().map(|p| p.0), Some(4));
        assert_eq!(seq.len(), 37);
    }

    #[test]
    fn zeros_are_skipped() {
        let ln = [f64::NEG_INFINITY, f64::NEG_INFINITY, 2.0, f64::NEG_INFINITY];
        assert_eq!(windowed_root(&ln, 4, 4), 2.0 / 3.0);
        assert_eq!(windowed_root(&ln[..2], 2, 2), f64::NEG_INFINITY);
    }

    #[test]
    fn fit_is_exact_on_lines() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 - 0.5 * x).collect();
        let (a, b) = linear_fit(&xs, &ys).unwrap();
        assert!((a - 2.0).abs() < 1e-15 && (b + 0.5).abs() < 1e-15);
        assert!(linear_fit(&[1.0], &[1.0]).is_none());
    }
}
