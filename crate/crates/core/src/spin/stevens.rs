// Copyright 2026 The ctqsim Developers
// SPDX-License-Identifier: Apache-2.0

//! Extended Stevens operator equivalents O_k^q for k = 2, 4, 6.
//!
//! For q != 0 the operators are built as 1/4 {f_kq(Jz), B_q}, with
//! B_q = J+^q + J-^q for q > 0 and (J+^q - J-^q)/i for q < 0; for q = 0 the
//! operator is the polynomial f_k0(Jz) itself.

use crate::error::{Error, Result};
use crate::linalg::{real, CMatrix, I};

use super::angular::AngularMomentumSpec;

pub const SUPPORTED_RANKS: [i32; 3] = [2, 4, 6];

pub fn validate(k: i32, q: i32) -> Result<()> {
    if !SUPPORTED_RANKS.contains(&k) {
        return Err(Error::InvalidStevens { k, q, reason: "rank must be 2, 4 or 6" });
    }
    if q.abs() > k {
        return Err(Error::InvalidStevens { k, q, reason: "|q| must not exceed k" });
    }
    Ok(())
}

/// Diagonal polynomial f_kq(m) with X = J(J+1).
fn polynomial(k: i32, q: u32, m: f64, x: f64) -> f64 {
    let m2 = m * m;
    match (k, q) {
        (2, 0) => 3.0 * m2 - x,
        (2, 1) => m,
        (2, 2) => 1.0,
        (4, 0) => 35.0 * m2 * m2 - (30.0 * x - 25.0) * m2 + 3.0 * x * x - 6.0 * x,
        (4, 1) => 7.0 * m2 * m - (3.0 * x + 1.0) * m,
        (4, 2) => 7.0 * m2 - x - 5.0,
        (4, 3) => m,
        (4, 4) => 1.0,
        (6, 0) => {
            231.0 * m2 * m2 * m2 - (315.0 * x - 735.0) * m2 * m2 + (105.0 * x * x - 525.0 * x + 294.0) * m2
                - 5.0 * x * x * x
                + 40.0 * x * x
                - 60.0 * x
        }
        (6, 1) => 33.0 * m2 * m2 * m - (30.0 * x - 15.0) * m2 * m + (5.0 * x * x - 10.0 * x + 12.0) * m,
        (6, 2) => 33.0 * m2 * m2 - (18.0 * x + 123.0) * m2 + x * x + 10.0 * x + 102.0,
        (6, 3) => 11.0 * m2 * m - (3.0 * x + 59.0) * m,
        (6, 4) => 11.0 * m2 - x - 38.0,
        (6, 5) => m,
        (6, 6) => 1.0,
        _ => unreachable!("validated before use"),
    }
}

pub fn stevens_operator(k: i32, q: i32, spec: AngularMomentumSpec) -> Result<CMatrix> {
    validate(k, q)?;
    let n = spec.dim();
    let x = spec.j() * (spec.j() + 1.0);
    let qa = q.unsigned_abs();
    let f = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        n,
        (0..n).map(|i| real(polynomial(k, qa, spec.m(i), x))),
    ));
    if q == 0 {
        return Ok(f);
    }
    let ops = spec.ops();
    let mut jp_q = CMatrix::identity(n, n);
    for _ in 0..qa {
        jp_q = &ops.jp * jp_q;
    }
    let jm_q = jp_q.adjoint();
    let b = if q > 0 { &jp_q + &jm_q } else { (&jp_q - &jm_q) * (-I) };
    Ok((&f * &b + &b * &f) * real(0.25))
}

/// All supported (k, q) pairs in a fixed order.
pub fn all_indices() -> Vec<(i32, i32)> {
    SUPPORTED_RANKS.iter().flat_map(|&k| (-k..=k).map(move |q| (k, q))).collect()
}
