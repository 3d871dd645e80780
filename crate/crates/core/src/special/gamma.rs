use std::f64::consts::PI;

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

// zeta(k) - 1 for k = 2, 3, ...; Taylor coefficients of ln Γ(2 + z).
const ZETA_MINUS_ONE: [f64; 54] = [
    6.4493406684822643647e-1,
    2.020569031595942854e-1,
    8.2323233711138191516e-2,
    3.6927755143369926331e-2,
    1.7343061984449139715e-2,
    8.3492773819228268398e-3,
    4.0773561979443393787e-3,
    2.0083928260822144179e-3,
    9.9457512781808533715e-4,
    4.941886041194645587e-4,
    2.4608655330804829864e-4,
    1.2271334757848914675e-4,
    6.1248135058704829259e-5,
    3.0588236307020493552e-5,
    1.5282259408651871733e-5,
    7.6371976378997622736e-6,
    3.8172932649998398565e-6,
    1.9082127165539389257e-6,
    9.5396203387279611315e-7,
    4.7693298678780646312e-7,
    2.3845050272773299e-7,
    1.1921992596531107307e-7,
    5.9608189051259479612e-8,
    2.9803503514652280186e-8,
    1.4901554828365041235e-8,
    7.450711789835429492e-9,
    3.7253340247884570548e-9,
    1.8626597235130490064e-9,
    9.3132743241966818287e-10,
    4.656629065033784073e-10,
    2.328311833676505492e-10,
    1.1641550172700519776e-10,
    5.8207720879027008892e-11,
    2.9103850444970996869e-11,
    1.4551921891041984236e-11,
    7.2759598350574810145e-12,
    3.6379795473786511902e-12,
    1.8189896503070659476e-12,
    9.0949478402638892825e-13,
    4.5474737830421540268e-13,
    2.2737368458246525152e-13,
    1.1368684076802278493e-13,
    5.6843419876275856093e-14,
    2.8421709768893018555e-14,
    1.421085482803160677e-14,
    7.1054273952108527129e-15,
    3.5527136913371136733e-15,
    1.7763568435791203275e-15,
    8.8817842109308159031e-16,
    4.4408921031438133642e-16,
    2.220446050798041984e-16,
    1.1102230251410661337e-16,
    5.5511151248454812437e-17,
    2.7755575621361241726e-17,
];

/// Natural log of the Gamma function for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || x.is_nan() {
        return Err(Error::domain("ln_gamma", format!("x must be positive, got {x}")));
    }
    if x.is_infinite() {
        return Ok(f64::INFINITY);
    }
    Ok(ln_gamma_pos(x))
}

/// `ln |Γ(x)|` and the sign of `Γ(x)` for any real `x` that is not a pole.
pub fn ln_gamma_signed(x: f64) -> Result<(f64, f64)> {
    if x.is_nan() {
        return Err(Error::domain("ln_gamma_signed", "x is NaN"));
    }
    if x > 0.0 {
        return Ok((ln_gamma_pos(x), 1.0));
    }
    if x == x.floor() {
        return Err(Error::domain("ln_gamma_signed", format!("pole at {x}")));
    }
    // Reflection: Γ(x) Γ(1 - x) = π / sin(πx)
    let s = sin_pi(x);
    let ln = PI.ln() - s.abs().ln() - ln_gamma_pos(1.0 - x);
    Ok((ln, s.signum()))
}

/// Γ(x) for real non-pole `x`; overflows to ±∞ for large arguments.
pub fn gamma_signed(x: f64) -> Result<f64> {
    let (ln, sign) = ln_gamma_signed(x)?;
    Ok(sign * ln.exp())
}

pub(crate) fn ln_gamma_pos(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x < 0.5 {
        return ln_gamma_pos(x + 1.0) - x.ln();
    }
    if x < 1.5 {
        return ln_gamma_1pz(x - 1.0);
    }
    if x <= 2.5 {
        return ln_gamma_2pz(x - 2.0);
    }
    if x < 12.0 {
        // Walk down into [1.5, 2.5]; all factors exceed one so nothing cancels.
        let mut y = x;
        let mut prod = 1.0;
        while y > 2.5 {
            y -= 1.0;
            prod *= y;
        }
        return ln_gamma_2pz(y - 2.0) + prod.ln();
    }
    stirling(x)
}

/// ln Γ(1 + z) for |z| <= 1/2 from its Taylor series about 1; no
/// cancellation as z → 0.
fn ln_gamma_1pz(z: f64) -> f64 {
    let mut sum = -EULER_GAMMA * z;
    let mut zk = -z;
    for (i, c) in ZETA_MINUS_ONE.iter().enumerate() {
        let k = (i + 2) as f64;
        zk *= -z;
        let term = (1.0 + c) * zk / k;
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// ln Γ(2 + z) for |z| <= 1/2 from its Taylor series about 2.
fn ln_gamma_2pz(z: f64) -> f64 {
    let mut sum = (1.0 - EULER_GAMMA) * z;
    // zk runs through (-z)^k
    let mut zk = -z;
    for (i, c) in ZETA_MINUS_ONE.iter().enumerate() {
        let k = (i + 2) as f64;
        zk *= -z;
        let term = c * zk / k;
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

fn stirling(x: f64) -> f64 {
    const B: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360_360.0,
        1.0 / 156.0,
        -3617.0 / 122_400.0,
    ];
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut p = inv;
    for b in B {
        series += b * p;
        p *= inv2;
    }
    (x - 0.5) * x.ln() - x + HALF_LN_2PI + series
}

/// sin(πx) with the argument reduced exactly before multiplying by π.
pub(crate) fn sin_pi(x: f64) -> f64 {
    let mut r = x - 2.0 * (0.5 * x).round();
    if r > 0.5 {
        r = 1.0 - r;
    } else if r < -0.5 {
        r = -1.0 - r;
    }
    (PI * r).sin()
}
