//! Confluent hypergeometric functions M = ₁F₁ (Kummer) and U (Tricomi).

use super::{gamma::ln_gamma_signed, near_integer, AccuracyBudget};
use crate::error::{Error, Result};
use crate::quadrature;

const EPS: f64 = f64::EPSILON;

/// ₁F₁(a; b; z) with the default budget.
pub fn kummer_1f1(a: f64, b: f64, z: f64) -> Result<f64> {
    kummer_1f1_with(a, b, z, &AccuracyBudget::default())
}

/// ₁F₁(a; b; z) by its power series. Negative arguments go through
/// Kummer's transformation M(a,b,z) = e^z M(b-a,b,-z) so the summed terms
/// do not alternate.
pub fn kummer_1f1_with(a: f64, b: f64, z: f64, budget: &AccuracyBudget) -> Result<f64> {
    let (value, err) = kummer_with_error(a, b, z, budget.max_terms)?;
    if !budget.accepts(err, value) {
        return Err(Error::accuracy(
            "kummer_1f1",
            format!("estimated error {err:e} on {value:e} at a={a}, b={b}, z={z}"),
        ));
    }
    Ok(value)
}

/// Value and absolute rounding-error estimate.
pub(crate) fn kummer_with_error(a: f64, b: f64, z: f64, max_terms: usize) -> Result<(f64, f64)> {
    if !a.is_finite() || !b.is_finite() || !z.is_finite() {
        return Err(Error::domain("kummer_1f1", format!("non-finite argument ({a}, {b}, {z})")));
    }
    if b <= 0.0 && b == b.floor() {
        return Err(Error::domain("kummer_1f1", format!("b = {b} is a non-positive integer")));
    }
    if z == 0.0 || a == 0.0 {
        return Ok((1.0, 0.0));
    }
    if z < 0.0 {
        let (v, err) = series(b - a, b, -z, max_terms)?;
        let scale = z.exp();
        return Ok((scale * v, scale * err));
    }
    series(a, b, z, max_terms)
}

fn series(a: f64, b: f64, z: f64, max_terms: usize) -> Result<(f64, f64)> {
    let mut sum = 1.0f64;
    let mut comp = 0.0f64;
    let mut term = 1.0f64;
    let mut weighted_abs = 1.0f64;
    for n in 0..max_terms {
        let nf = n as f64;
        if a + nf == 0.0 {
            // polynomial case: the series terminates
            return Ok((sum + comp, 3.0 * EPS * weighted_abs));
        }
        term *= (a + nf) / (b + nf) * z / (nf + 1.0);
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
        weighted_abs += (nf + 2.0) * term.abs();
        if !sum.is_finite() || !weighted_abs.is_finite() {
            return Err(Error::accuracy("kummer_1f1", format!("overflow at a={a}, b={b}, z={z}")));
        }
        let ratio = ((a + nf + 1.0) * z / ((b + nf + 1.0) * (nf + 2.0))).abs();
        if term.abs() <= 0.25 * EPS * sum.abs() && ratio < 0.5 {
            return Ok((sum + comp, 3.0 * EPS * weighted_abs));
        }
    }
    Err(Error::accuracy(
        "kummer_1f1",
        format!("series did not converge in {max_terms} terms at a={a}, b={b}, z={z}"),
    ))
}

/// U(a; b; z) with the default budget.
pub fn tricomi_u(a: f64, b: f64, z: f64) -> Result<f64> {
    tricomi_u_with(a, b, z, &AccuracyBudget::default())
}

pub fn tricomi_u_with(a: f64, b: f64, z: f64, budget: &AccuracyBudget) -> Result<f64> {
    let scaled = tricomi_u_scaled_with(a, b, z, budget)?;
    if scaled == 0.0 {
        return Ok(0.0);
    }
    Ok(scaled.signum() * (scaled.abs().ln() - a * z.ln()).exp())
}

/// z^a U(a; b; z), which tends to 1 as z → ∞ and stays representable.
pub fn tricomi_u_scaled(a: f64, b: f64, z: f64) -> Result<f64> {
    tricomi_u_scaled_with(a, b, z, &AccuracyBudget::default())
}

pub(crate) fn tricomi_u_scaled_with(a: f64, b: f64, z: f64, budget: &AccuracyBudget) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::domain("tricomi_u", format!("z must be positive and finite, got {z}")));
    }
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::domain("tricomi_u", format!("non-finite parameters ({a}, {b})")));
    }
    if near_integer(b, 1e-12) {
        return Err(Error::degenerate(
            "tricomi_u",
            format!("b = {b} is an integer; the two-term Kummer form is undefined"),
        ));
    }
    match kummer_pair(a, b, z, budget) {
        Ok(v) => return Ok(v),
        Err(e) if a <= 0.0 => return Err(e),
        Err(_) => {}
    }
    laplace_integral(a, b, z, budget)
}

/// z^a U = Γ(1-b)/Γ(a-b+1) z^a M(a,b,z) + Γ(b-1)/Γ(a) z^{a-b+1} M(a-b+1,2-b,z)
fn kummer_pair(a: f64, b: f64, z: f64, budget: &AccuracyBudget) -> Result<f64> {
    let ln_z = z.ln();
    let first = scaled_term(1.0 - b, a - b + 1.0, a * ln_z, a, b, z, budget.max_terms)?;
    let second = scaled_term(b - 1.0, a, (a - b + 1.0) * ln_z, a - b + 1.0, 2.0 - b, z, budget.max_terms)?;
    let value = first.0 + second.0;
    let err = first.1 + second.1;
    if !budget.accepts(err, value) {
        return Err(Error::accuracy(
            "tricomi_u",
            format!("cancellation in Kummer pair: error {err:e} on {value:e} (z={z})"),
        ));
    }
    Ok(value)
}

/// Γ(num)/Γ(den) e^{ln_pow} M(ma, mb, z), with an absolute error estimate.
fn scaled_term(
    num: f64,
    den: f64,
    ln_pow: f64,
    ma: f64,
    mb: f64,
    z: f64,
    max_terms: usize,
) -> Result<(f64, f64)> {
    if den <= 0.0 && den == den.floor() {
        // 1/Γ(den) = 0
        return Ok((0.0, 0.0));
    }
    let (ln_num, s_num) = ln_gamma_signed(num)?;
    let (ln_den, s_den) = ln_gamma_signed(den)?;
    let (m, m_err) = kummer_with_error(ma, mb, z, max_terms)?;
    if m == 0.0 {
        return Ok((0.0, 0.0));
    }
    let ln_mag = ln_num - ln_den + ln_pow;
    let coef = (ln_mag + m.abs().ln()).exp();
    if !coef.is_finite() {
        return Err(Error::accuracy("tricomi_u", "term overflow"));
    }
    let value = s_num * s_den * m.signum() * coef;
    // Rounding in the log-magnitude is amplified by exp.
    let ln_err = 4.0 * EPS * (ln_num.abs() + ln_den.abs() + ln_pow.abs() + 1.0);
    let err = coef * (ln_err + m_err / m.abs());
    Ok((value, err))
}

/// z^a U(a,b,z) = (1/Γ(a)) ∫_0^∞ e^{-u} u^{a-1} (1 + u/z)^{b-a-1} du, a > 0.
fn laplace_integral(a: f64, b: f64, z: f64, budget: &AccuracyBudget) -> Result<f64> {
    let ln_ga = ln_gamma_signed(a)?.0;
    let p = b - a - 1.0;
    let q = quadrature::exp_sinh(
        |u| (-u + (a - 1.0) * u.ln() + p * (u / z).ln_1p() - ln_ga).exp(),
        0.0,
        1e-14_f64.max(0.01 * budget.rel_tol),
    )
    .map_err(|e| Error::accuracy("tricomi_u", format!("Laplace integral failed: {e}")))?;
    if !budget.accepts(q.error, q.value) {
        return Err(Error::accuracy(
            "tricomi_u",
            format!("Laplace integral error {:e} on {:e}", q.error, q.value),
        ));
    }
    Ok(q.value)
}
