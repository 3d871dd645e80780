//! Modified Bessel K, confluent hypergeometric functions and incomplete gamma.

use fso_linklab::special::{
    bessel_k, kummer_1f1, ln_bessel_k, ln_gamma, lower_incomplete_gamma_regularized, tricomi_u,
    tricomi_u_scaled, AccuracyBudget,
};
use fso_linklab::special::tricomi_u_with;

fn main() -> fso_linklab::Result<()> {
    println!("K_nu(x)");
    for &(nu, x) in &[(0.3, 0.01), (1.2, 3.7), (3.2, 1.5), (0.7, 45.0)] {
        println!("  K_{nu}({x}) = {:.16e}", bessel_k(nu, x)?);
    }
    // far outside the f64 range, only the logarithm is representable
    println!("  ln K_150.8(0.05) = {:.12}", ln_bessel_k(150.8, 0.05)?);

    println!("1F1 and U");
    println!("  1F1(4.2; 2.2; 0.7)   = {:.16}", kummer_1f1(4.2, 2.2, 0.7)?);
    println!("  1F1(0.5; 1.5; -30)   = {:.16}", kummer_1f1(0.5, 1.5, -30.0)?);
    println!("  U(1, 1.5, 2)         = {:.16}", tricomi_u(1.0, 1.5, 2.0)?);
    println!("  z^a U(4.2, 2.2, z=3) = {:.16}", tricomi_u_scaled(4.2, 2.2, 3.0)?);

    // a tight budget is honoured or refused, never silently missed
    let tight = AccuracyBudget::new(1e-15, 0.0, 50)?;
    match tricomi_u_with(4.2, 0.2, 0.3, &tight) {
        Ok(v) => println!("  U(4.2, 0.2, 0.3) within 50 terms = {v:.16e}"),
        Err(e) => println!("  U(4.2, 0.2, 0.3) within 50 terms: {e}"),
    }
    // integer b is a removable singularity of the two-term form
    if let Err(e) = tricomi_u(1.0, 2.0, 1.0) {
        println!("  U(1, 2, 1): {e}");
    }

    println!("gamma family");
    println!("  ln Gamma(4.2) = {:.16}", ln_gamma(4.2)?);
    println!("  P(4.2, 3)     = {:.16}", lower_incomplete_gamma_regularized(4.2, 3.0)?);
    Ok(())
}
