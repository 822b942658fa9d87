//! Dense 5x5 matrix exponential by scaling and squaring.
//!
//! This is the independent check for the closed forms: it knows nothing
//! about the block structure of SE2(3) and simply sums a Taylor series on a
//! scaled-down matrix, then squares back up.

use crate::linalg::Mat5;

const TAYLOR_TERMS: usize = 20;

/// `e^{x t}` for any finite 5x5 matrix.
pub fn expm_dense(x: &Mat5, t: f64) -> Mat5 {
    let a = x.scale(t);
    let norm = a.inf_norm();
    // Scale so that |a / 2^s| <= 1/2; 20 Taylor terms then leave a remainder
    // below 2^-20 / 20! which is far under machine precision.
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let scaled = a.scale(0.5_f64.powi(squarings));

    let mut term = Mat5::identity();
    let mut sum = Mat5::identity();
    for k in 1..=TAYLOR_TERMS {
        term = (term * scaled).scale(1.0 / k as f64);
        sum = sum + term;
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    sum
}
