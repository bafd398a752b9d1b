//! Complex log-gamma.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `log Γ(z)`.
///
/// For `Re z >= 1/2` this is the continuous branch that is real on the
/// positive axis. For `Re z < 1/2` the value comes from the reflection
/// formula and is determined modulo `2πi`, which leaves `exp(log_gamma(z))`
/// unaffected.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::InvalidInput(format!("log_gamma argument {z} is not finite")));
    }
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return Err(Error::Domain(format!("Γ has a pole at {}", z.re)));
    }
    if z.re < 0.5 {
        let log_sin = log_sin_pi(z);
        Ok(Complex64::new(PI.ln(), 0.0) - log_sin - lanczos(Complex64::new(1.0, 0.0) - z))
    } else {
        Ok(lanczos(z))
    }
}

/// `Γ(z)` through [`log_gamma`].
pub fn gamma(z: Complex64) -> Result<Complex64> {
    log_gamma(z).map(|v| v.exp())
}

fn lanczos(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut sum = Complex64::new(LANCZOS_COEF[0], 0.0);
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        sum += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + sum.ln()
}

// log sin(πz) without overflow for large |Im z|.
fn log_sin_pi(z: Complex64) -> Complex64 {
    if z.im.abs() < 5.0 {
        return (PI * z).sin().ln();
    }
    let i = Complex64::i();
    if z.im > 0.0 {
        // sin(πz) = (i/2) e^{-iπz} (1 − e^{2iπz})
        (0.5 * i).ln() - i * PI * z + (1.0 - (2.0 * i * PI * z).exp()).ln()
    } else {
        (-0.5 * i).ln() + i * PI * z + (1.0 - (-2.0 * i * PI * z).exp()).ln()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn classical_values() {
        assert!(log_gamma(c(1.0, 0.0)).unwrap().norm() < 1e-14);
        assert!(log_gamma(c(2.0, 0.0)).unwrap().norm() < 1e-14);
        let half = log_gamma(c(0.5, 0.0)).unwrap();
        assert!((half - c(PI.sqrt().ln(), 0.0)).norm() < 1e-14);
        let g = gamma(c(5.0, 0.0)).unwrap();
        assert!((g - c(24.0, 0.0)).norm() < 24.0 * 1e-13);
        let g = gamma(c(-0.5, 0.0)).unwrap();
        assert!((g - c(-2.0 * PI.sqrt(), 0.0)).norm() < 1e-13);
    }

    #[test]
    fn poles_are_rejected() {
        for n in [0.0, -1.0, -7.0] {
            assert!(matches!(log_gamma(c(n, 0.0)), Err(Error::Domain(_))));
        }
    }

    #[test]
    fn imaginary_axis_modulus() {
        for nu in [0.5, 0.1, 1.0, 2.5, -0.7] {
            let g = gamma(c(0.0, nu)).unwrap();
            let expected = PI / (nu * (PI * nu).sinh());
            assert!(((g.norm_sqr() - expected) / expected).abs() < 1e-12, "nu = {nu}");
        }
    }

    #[test]
    fn stirling_agreement_far_out() {
        // log Γ(z) ≈ (z−½) log z − z + ½ log 2π + 1/(12z) − 1/(360 z³)
        let z = c(9.0, 6.0);
        let stirling = (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln() + 1.0 / (12.0 * z) - 1.0 / (360.0 * z * z * z)
            + 1.0 / (1260.0 * z.powi(5))
            - 1.0 / (1680.0 * z.powi(7));
        assert!((log_gamma(z).unwrap() - stirling).norm() < 1e-11);
    }

    #[test]
    fn large_imaginary_part_does_not_overflow() {
        let v = gamma(c(0.2, 40.0)).unwrap();
        assert!(v.norm().is_finite() && v.norm() > 0.0);
        let w = gamma(c(0.2, -40.0)).unwrap();
        assert!((v.conj() - w).norm() <= 1e-10 * v.norm());
    }

    proptest! {
        #[test]
        fn recurrence(re in -9.5f64..9.5, im in -10.0f64..10.0) {
            let z = c(re, im);
            prop_assume!(z.norm() >= 0.1 && (z + 1.0).norm() >= 0.1);
            let lhs = log_gamma(z + 1.0).unwrap().exp();
            let rhs = z * log_gamma(z).unwrap().exp();
            prop_assert!((lhs - rhs).norm() <= 1e-10 * lhs.norm().max(1e-300));
        }

        #[test]
        fn conjugate_symmetry(re in 0.5f64..9.5, im in 0.0f64..10.0) {
            let z = c(re, im);
            let a = log_gamma(z).unwrap();
            let b = log_gamma(z.conj()).unwrap();
            prop_assert!((a.conj() - b).norm() <= 1e-12 * (1.0 + a.norm()));
        }
    }
}
