//! Modified Bessel function of the second kind for real order.
//!
//! The fractional part μ ∈ [-1/2, 1/2] of the order is handled by Temme's
//! series (x <= 2) or Steed's continued fraction CF2 (x > 2); the integer
//! part is reached by forward recurrence, which is stable for K. Values are
//! carried as mantissa plus log-scale so large orders at small arguments do
//! not overflow.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const EPS: f64 = 1e-16;
const MAX_ITER: usize = 100_000;
const RESCALE: f64 = 1e280;

// Taylor coefficients of 1/Γ(1 + z) about z = 0.
const RGAMMA_1P: [f64; 25] = [
    1.0,
    5.7721566490153286061e-1,
    -6.5587807152025388108e-1,
    -4.2002635034095235529e-2,
    1.665386113822914895e-1,
    -4.2197734555544336748e-2,
    -9.6219715278769735621e-3,
    7.2189432466630995424e-3,
    -1.1651675918590651121e-3,
    -2.1524167411495097282e-4,
    1.2805028238811618615e-4,
    -2.0134854780788238656e-5,
    -1.2504934821426706573e-6,
    1.1330272319816958824e-6,
    -2.0563384169776071035e-7,
    6.1160951044814158179e-9,
    5.0020076444692229301e-9,
    -1.1812745704870201446e-9,
    1.0434267116911005105e-10,
    7.782263439905071254e-12,
    -3.6968056186422057082e-12,
    5.100370287454475979e-13,
    -2.0583260535665067832e-14,
    -5.3481225394230179824e-15,
    1.2267786282382607902e-15,
];

/// K_ν(x) for real ν and x > 0. Underflows to zero for very large `x`.
pub fn bessel_k(nu: f64, x: f64) -> Result<f64> {
    Ok(ln_bessel_k(nu, x)?.exp())
}

/// e^x K_ν(x), representable far beyond the underflow point of K itself.
pub fn bessel_k_scaled(nu: f64, x: f64) -> Result<f64> {
    Ok((ln_bessel_k(nu, x)? + x).exp())
}

/// ln K_ν(x); finite wherever K_ν(x) is positive, including under- and
/// overflowing regions of the linear value.
pub fn ln_bessel_k(nu: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain("bessel_k", format!("x must be positive and finite, got {x}")));
    }
    if !nu.is_finite() {
        return Err(Error::domain("bessel_k", format!("order must be finite, got {nu}")));
    }
    let nu = nu.abs();
    let nl = (nu + 0.5).floor();
    let mu = nu - nl;
    let (mut k_mu, mut k_mu1, mut ln_scale) = if x <= 2.0 {
        let (a, b) = temme_series(mu, x)?;
        (a, b, 0.0)
    } else {
        let (a, b) = steed_cf2(mu, x)?;
        (a, b, -x)
    };
    let two_over_x = 2.0 / x;
    let steps = nl as u64;
    for i in 1..=steps {
        let factor = (mu + i as f64) * two_over_x;
        // At tiny x a single step can overflow, so rescale ahead of it.
        if k_mu1 * factor.max(1.0) > RESCALE {
            let r = k_mu1;
            k_mu /= r;
            k_mu1 = 1.0;
            ln_scale += r.ln();
        }
        let next = factor * k_mu1 + k_mu;
        k_mu = k_mu1;
        k_mu1 = next;
    }
    if !(k_mu > 0.0) || !k_mu.is_finite() {
        return Err(Error::accuracy("bessel_k", format!("non-positive value at nu={nu}, x={x}")));
    }
    Ok(k_mu.ln() + ln_scale)
}

fn rgamma_parts(mu: f64) -> (f64, f64, f64, f64) {
    // gam1 = (1/Γ(1-μ) - 1/Γ(1+μ)) / (2μ), gam2 = (1/Γ(1-μ) + 1/Γ(1+μ)) / 2
    let mut gam1 = 0.0;
    let mut gam2 = 0.0;
    let mu2 = mu * mu;
    let mut p_even = 1.0;
    let mut p_odd = 1.0;
    for (j, c) in RGAMMA_1P.iter().enumerate() {
        if j % 2 == 0 {
            gam2 += c * p_even;
            p_even *= mu2;
        } else {
            gam1 -= c * p_odd;
            p_odd *= mu2;
        }
    }
    let gampl = gam2 - mu * gam1;
    let gammi = gam2 + mu * gam1;
    (gam1, gam2, gampl, gammi)
}

/// K_μ(x), K_{μ+1}(x) for |μ| <= 1/2 and 0 < x <= 2.
fn temme_series(mu: f64, x: f64) -> Result<(f64, f64)> {
    let x2 = 0.5 * x;
    let pimu = PI * mu;
    let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
    let d = -x2.ln();
    let e = mu * d;
    let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
    let (gam1, gam2, gampl, gammi) = rgamma_parts(mu);
    let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
    let mut sum = ff;
    let ee = e.exp();
    let mut p = 0.5 * ee / gampl;
    let mut q = 0.5 / (ee * gammi);
    let mut c = 1.0;
    let dd = x2 * x2;
    let mut sum1 = p;
    let mu2 = mu * mu;
    for i in 1..=MAX_ITER {
        let fi = i as f64;
        ff = (fi * ff + p + q) / (fi * fi - mu2);
        c *= dd / fi;
        p /= fi - mu;
        q /= fi + mu;
        let del = c * ff;
        sum += del;
        sum1 += c * (p - fi * ff);
        if del.abs() < sum.abs() * EPS {
            return Ok((sum, sum1 * 2.0 / x));
        }
    }
    Err(Error::accuracy("bessel_k", format!("Temme series did not converge at x={x}")))
}

/// e^x K_μ(x), e^x K_{μ+1}(x) for |μ| <= 1/2 and x > 2.
fn steed_cf2(mu: f64, x: f64) -> Result<(f64, f64)> {
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut h = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25 - mu * mu;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..=MAX_ITER {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < EPS {
            let h = a1 * h;
            let k_mu = (PI / (2.0 * x)).sqrt() / s;
            let k_mu1 = k_mu * (mu + x + 0.5 - h) / x;
            return Ok((k_mu, k_mu1));
        }
    }
    Err(Error::accuracy("bessel_k", format!("continued fraction did not converge at x={x}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn half_integer_closed_form() {
        let want = (PI / 2.0).sqrt() * (-1.0f64).exp();
        assert!(rel(bessel_k(0.5, 1.0).unwrap(), want) < 1e-14);
        assert!((want - 0.461_068_504_4).abs() < 1e-10);
        for &x in &[1e-6, 0.3, 1.9, 2.1, 7.0, 60.0] {
            let k05 = (PI / (2.0 * x)).sqrt() * (-x).exp();
            assert!(rel(bessel_k(0.5, x).unwrap(), k05) < 1e-13, "x = {x}");
            // K_{3/2}(x) = K_{1/2}(x) (1 + 1/x)
            assert!(rel(bessel_k(1.5, x).unwrap(), k05 * (1.0 + 1.0 / x)) < 1e-13, "x = {x}");
        }
    }

    #[test]
    fn reference_values() {
        // mpmath, 30 digits
        let cases = [
            (1.2, 3.7, 0.018580829276912110391),
            (0.3, 0.01, 6.8901026382927697742),
            (3.2, 1.5, 2.4009795063796010817),
            (12.6, 0.2, 3.4908436828359157737e20),
            (0.7, 45.0, 5.3622556157831210598e-21),
            (2.2, 1e-6, 40118043474003.127683),
        ];
        for &(nu, x, want) in &cases {
            assert!(rel(bessel_k(nu, x).unwrap(), want) < 1e-13, "K_{nu}({x})");
        }
        assert!(rel(ln_bessel_k(5.5, 650.0).unwrap(), -652.98963576587477634) < 1e-14);
        assert!(rel(ln_bessel_k(150.8, 0.05).unwrap(), 1159.6073161410484757) < 1e-14);
    }

    #[test]
    fn symmetric_in_order() {
        for &(nu, x) in &[(0.3, 0.2), (2.7, 3.3), (7.25, 40.0)] {
            assert_eq!(bessel_k(-nu, x).unwrap(), bessel_k(nu, x).unwrap());
        }
    }

    #[test]
    fn domain_errors() {
        assert!(bessel_k(1.0, 0.0).is_err());
        assert!(bessel_k(1.0, -2.0).is_err());
        assert!(bessel_k(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn log_domain_survives_underflow_and_overflow() {
        let ln_big_x = ln_bessel_k(5.5, 650.0).unwrap();
        assert!(ln_big_x.is_finite() && ln_big_x < -640.0);
        assert_eq!(bessel_k(5.5, 800.0).unwrap(), 0.0);
        assert!(ln_bessel_k(5.5, 800.0).unwrap().is_finite());
        let ln_large_order = ln_bessel_k(150.8, 0.05).unwrap();
        assert!(ln_large_order > 709.0);
        // one recurrence step multiplies by ~1e110 here
        let tiny = ln_bessel_k(3.2, 1e-110).unwrap();
        let lead = crate::special::ln_gamma(3.2).unwrap() + 3.2 * (2e110f64).ln() - std::f64::consts::LN_2;
        assert!(((tiny - lead) / lead).abs() < 1e-12);
    }

    #[test]
    fn log_and_linear_agree_where_representable() {
        for &(nu, x) in &[(0.0, 0.5), (1.2, 3.7), (4.4, 0.01), (11.0, 20.0), (3.2, 300.0)] {
            let lin = bessel_k(nu, x).unwrap();
            let from_log = ln_bessel_k(nu, x).unwrap().exp();
            assert!(rel(lin, from_log) < 1e-12);
            let scaled = bessel_k_scaled(nu, x).unwrap();
            assert!(rel(scaled, lin * x.exp()) < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn three_term_recurrence(nu in 0.0f64..15.0, x in 0.05f64..80.0) {
            let km = bessel_k(nu - 1.0, x).unwrap();
            let k0 = bessel_k(nu, x).unwrap();
            let kp = bessel_k(nu + 1.0, x).unwrap();
            let rhs = km + 2.0 * nu / x * k0;
            prop_assert!(rel(kp, rhs) < 1e-8, "nu={nu} x={x}: {kp} vs {rhs}");
        }

        #[test]
        fn positive_and_decreasing(nu in -10.0f64..10.0, x in 1e-8f64..600.0) {
            let a = bessel_k(nu, x).unwrap();
            let b = bessel_k(nu, x * 1.01).unwrap();
            prop_assert!(a > 0.0 && b < a);
        }
    }
}
