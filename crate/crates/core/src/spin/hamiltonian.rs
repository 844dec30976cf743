// Copyright 2026 The ctqsim Developers
// SPDX-License-Identifier: Apache-2.0

use crate::error::Result;
use crate::linalg::{kron, real, CMatrix, OperatorMatrix, Spectrum, I};
use crate::units::{MU_B_GHZ_PER_T, MU_N_GHZ_PER_T};

use super::angular::{m_label, AngularOps};
use super::params::{HyperfineMode, ModelKind, SpinSystemParams, TUNNELING_KEY};
use super::stevens::stevens_operator;

/// Electronic angular momentum operators in the model's electronic space.
/// For the effective doublet (basis +m, -m) only Jz survives.
pub fn electronic_ops(params: &SpinSystemParams) -> AngularOps {
    match params.model_kind {
        ModelKind::FullJ => params.electronic.ops(),
        ModelKind::EffectiveDoublet => {
            let m = params.doublet_mj;
            let z = CMatrix::zeros(2, 2);
            let mut jz = CMatrix::zeros(2, 2);
            jz[(0, 0)] = real(m);
            jz[(1, 1)] = real(-m);
            AngularOps { jx: z.clone(), jy: z.clone(), jz, jp: z.clone(), jm: z }
        }
    }
}

/// Electronic projection of electronic basis index `e`.
pub fn electronic_m(params: &SpinSystemParams, e: usize) -> f64 {
    match params.model_kind {
        ModelKind::FullJ => params.electronic.m(e),
        ModelKind::EffectiveDoublet => {
            if e == 0 {
                params.doublet_mj
            } else {
                -params.doublet_mj
            }
        }
    }
}

pub fn basis_labels(params: &SpinSystemParams) -> Vec<String> {
    let ne = params.electronic_dim();
    let ni = params.nuclear.dim();
    let mut out = Vec::with_capacity(ne * ni);
    for e in 0..ne {
        for n in 0..ni {
            out.push(format!("MJ={},MI={}", m_label(electronic_m(params, e)), m_label(params.nuclear.m(n))));
        }
    }
    out
}

/// Crystal-field operator restricted to the electronic space of the model.
/// In the doublet, B_4^{+-4}-type entries act as (x/2) sigma_x / sigma_y,
/// rank-q=0 entries are constants, everything else vanishes.
pub fn crystal_field_operator(params: &SpinSystemParams, k: i32, q: i32) -> Result<CMatrix> {
    match params.model_kind {
        ModelKind::FullJ => stevens_operator(k, q, params.electronic),
        ModelKind::EffectiveDoublet => {
            let mut m = CMatrix::zeros(2, 2);
            if (k, q) == TUNNELING_KEY {
                m[(0, 1)] = real(0.5);
                m[(1, 0)] = real(0.5);
            } else if (k, q) == (TUNNELING_KEY.0, -TUNNELING_KEY.1) {
                m[(0, 1)] = -I * 0.5;
                m[(1, 0)] = I * 0.5;
            } else if q == 0 {
                let full = stevens_operator(k, 0, params.electronic)?;
                let i = params.electronic.index_of(params.doublet_mj).expect("validated doublet");
                m[(0, 0)] = full[(i, i)];
                m[(1, 1)] = full[(i, i)];
            } else {
                crate::spin::stevens::validate(k, q)?;
            }
            Ok(m)
        }
    }
}

/// Electronic operator lifted to the electro-nuclear space (op x 1_I).
pub fn lift_electronic(params: &SpinSystemParams, op: &CMatrix) -> CMatrix {
    kron(op, &CMatrix::identity(params.nuclear.dim(), params.nuclear.dim()))
}

/// Nuclear operator lifted to the electro-nuclear space (1_J x op).
pub fn lift_nuclear(params: &SpinSystemParams, op: &CMatrix) -> CMatrix {
    kron(&CMatrix::identity(params.electronic_dim(), params.electronic_dim()), op)
}

/// Jz x 1_I on the full model space.
pub fn jz_operator(params: &SpinSystemParams) -> CMatrix {
    lift_electronic(params, &electronic_ops(params).jz)
}

/// Spin Hamiltonian (GHz) for `field` (T, molecular frame) and electrode `voltage` (V).
pub fn build_hamiltonian(params: &SpinSystemParams, field: [f64; 3], voltage: f64) -> Result<OperatorMatrix> {
    params.validate()?;
    let j = electronic_ops(params);
    let nuc = params.nuclear.ops();
    let ne = params.electronic_dim();
    let ni = params.nuclear.dim();
    let one_i = CMatrix::identity(ni, ni);

    let mut h_el = CMatrix::zeros(ne, ne);
    for ((k, q), b) in params.cf_at_voltage(voltage).iter() {
        if b != 0.0 {
            h_el += crystal_field_operator(params, k, q)? * real(b);
        }
    }
    let zeeman = params.g_j * MU_B_GHZ_PER_T;
    h_el += (&j.jx * real(field[0]) + &j.jy * real(field[1]) + &j.jz * real(field[2])) * real(zeeman);

    let mut h = kron(&h_el, &one_i);
    h += kron(&j.jz, &nuc.jz) * real(params.a_z);
    if params.hyperfine_mode == HyperfineMode::Isotropic {
        h += (kron(&j.jx, &nuc.jx) + kron(&j.jy, &nuc.jy)) * real(params.a_z);
    }
    if let Some(g_n) = params.nuclear_g {
        let bi = &nuc.jx * real(field[0]) + &nuc.jy * real(field[1]) + &nuc.jz * real(field[2]);
        h -= lift_nuclear(params, &bi) * real(g_n * MU_N_GHZ_PER_T);
    }
    if let Some(p) = params.quadrupole {
        let i = params.nuclear.j();
        let q = &nuc.jz * &nuc.jz - CMatrix::identity(ni, ni) * real(i * (i + 1.0) / 3.0);
        h += lift_nuclear(params, &q) * real(p);
    }
    OperatorMatrix::new(h, basis_labels(params))
}

/// Field along the molecular axis, in mT.
pub fn axial_field(b_mt: f64) -> [f64; 3] {
    [0.0, 0.0, b_mt * 1e-3]
}

/// <Jz> in eigenstate `level`.
pub fn magnetic_moment(params: &SpinSystemParams, spectrum: &Spectrum, level: usize) -> Result<f64> {
    spectrum.expectation(level, &jz_operator(params))
}

/// Amplitudes (alpha, beta) of M_J = +m and -m in eigenstate `level`
/// (summed over nuclear projections), as non-negative reals.
pub fn doublet_admixture(params: &SpinSystemParams, spectrum: &Spectrum, level: usize) -> Result<(f64, f64)> {
    let v = spectrum.state(level)?;
    let ni = params.nuclear.dim();
    let (plus, minus) = match params.model_kind {
        ModelKind::EffectiveDoublet => (0, 1),
        ModelKind::FullJ => (
            params.electronic.index_of(params.doublet_mj).expect("validated"),
            params.electronic.index_of(-params.doublet_mj).expect("validated"),
        ),
    };
    let weight = |e: usize| -> f64 { (0..ni).map(|n| v[e * ni + n].norm_sqr()).sum() };
    Ok((weight(plus).sqrt(), weight(minus).sqrt()))
}
