//! Small dense-polynomial helpers (ascending coefficient order).

use num_complex::Complex64;

pub fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

pub fn horner_c(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

fn trimmed(coeffs: &[f64]) -> &[f64] {
    let end = coeffs.iter().rposition(|&c| c != 0.0).map_or(0, |i| i + 1);
    &coeffs[..end]
}

/// All complex roots by Durand–Kerner iteration followed by Newton polishing.
pub fn roots(coeffs: &[f64]) -> Vec<Complex64> {
    let p = trimmed(coeffs);
    if p.len() < 2 {
        return Vec::new();
    }
    let deg = p.len() - 1;
    let lead = p[deg];
    let monic: Vec<f64> = p.iter().map(|c| c / lead).collect();
    // Cauchy bound on the root moduli
    let bound = 1.0 + monic[..deg].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..deg).map(|j| seed.powu(j as u32) * (0.5 * bound)).collect();
    for _ in 0..1000 {
        let mut moved = 0.0f64;
        for i in 0..deg {
            let num = horner_c(&monic, z[i]);
            let den = (0..deg).filter(|&j| j != i).fold(Complex64::new(1.0, 0.0), |acc, j| acc * (z[i] - z[j]));
            if den.norm() == 0.0 {
                z[i] += Complex64::new(1e-8, 1e-8) * bound;
                moved = f64::INFINITY;
                continue;
            }
            let step = num / den;
            z[i] -= step;
            moved = moved.max(step.norm() / z[i].norm().max(1e-300));
        }
        if moved < 1e-15 {
            break;
        }
    }
    let deriv: Vec<f64> = monic.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect();
    for r in &mut z {
        for _ in 0..3 {
            let d = horner_c(&deriv, *r);
            if d.norm() == 0.0 {
                break;
            }
            *r -= horner_c(&monic, *r) / d;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_and_cubic_roots() {
        // (x - 2)(x + 3) = x^2 + x - 6
        let mut r: Vec<f64> = roots(&[-6.0, 1.0, 1.0]).iter().map(|z| z.re).collect();
        r.sort_by(f64::total_cmp);
        assert!((r[0] + 3.0).abs() < 1e-12 && (r[1] - 2.0).abs() < 1e-12);
        // x^3 + 1 has roots -1 and exp(±iπ/3)
        let r = roots(&[1.0, 0.0, 0.0, 1.0]);
        assert_eq!(r.len(), 3);
        for z in r {
            assert!((z.powu(3) + 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn constants_have_no_roots() {
        assert!(roots(&[3.0]).is_empty());
        assert!(roots(&[3.0, 0.0, 0.0]).is_empty());
        assert_eq!(horner(&[1.0, 2.0, 3.0], 2.0), 17.0);
    }
}
