use num_complex::Complex64;

use super::{CycleExpansion, ZetaError};

const SIMPLE_ZERO_TOL: f64 = 1e-12;

fn simple_zero_derivative(
    expansion: &CycleExpansion,
    lambda0: Complex64,
) -> Result<Complex64, ZetaError> {
    let d = expansion.eval(lambda0).d_lambda;
    if d.norm() <= SIMPLE_ZERO_TOL {
        return Err(ZetaError::NonSimpleZero {
            derivative: d.norm(),
        });
    }
    Ok(d)
}

/// Residue at the simple zero `lambda0` of `−∂_ε log D` when every prime
/// weight carries `e^{ε A_p}`; `weights` is aligned with the expansion primes.
pub fn residue(
    expansion: &CycleExpansion,
    lambda0: Complex64,
    weights: &[f64],
) -> Result<Complex64, ZetaError> {
    let d_lambda = simple_zero_derivative(expansion, lambda0)?;
    Ok(-expansion.weight_derivative(lambda0, weights)? / d_lambda)
}

/// Coefficients `c_p` with `residue(A) = Σ_p c_p A_p`, aligned with the
/// expansion primes.
pub fn residue_coefficients(
    expansion: &CycleExpansion,
    lambda0: Complex64,
) -> Result<Vec<Complex64>, ZetaError> {
    let d_lambda = simple_zero_derivative(expansion, lambda0)?;
    Ok(expansion
        .member_sums(lambda0)
        .into_iter()
        .map(|s| -s / d_lambda)
        .collect())
}
