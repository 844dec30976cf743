// Copyright 2026 The ctqsim Developers
// SPDX-License-Identifier: Apache-2.0

//! Acceptance suite: one line per criterion, all criteria run even when an
//! earlier one fails.

use std::io::Write;
use std::time::{Duration, Instant};

use nalgebra::DVector;
use num_complex::Complex64;

use ctqsim::cli::main_with_args;
use ctqsim::clock::diagram::spectrum_at;
use ctqsim::clock::{find_anticrossings, CtSearch};
use ctqsim::dimer::{delta_f, sector_exchange, DimerSystem};
use ctqsim::linalg::{diagonalize, real, CMatrix, OperatorMatrix, ONE, ZERO};
use ctqsim::open::{
    arrhenius_fit, bath_rate, build_redfield, gibbs_populations, propagate, relaxation_sweep, relaxation_times,
    steady_state, PhononCoupling, RedfieldModel, RelaxationConfig, SpectralDensity,
};
use ctqsim::pulses::{
    bell_protocol, monomer_cancellation_check, monomer_system, operating_system, swap_oscillation, BellOptions, Site,
};
use ctqsim::spin::{magnetic_moment, Preset, SpinSystemParams};
use ctqsim::units::{GHZ_PER_CM1, K_B_GHZ_PER_K, MHZ_PER_GHZ};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(checks: &[(bool, String)]) -> Outcome {
    Outcome {
        pass: checks.iter().all(|c| c.0),
        detail: checks.iter().map(|c| format!("{}{}", if c.0 { "" } else { "!" }, c.1)).collect::<Vec<_>>().join("; "),
    }
}

fn criterion_1() -> Outcome {
    let mut checks = Vec::new();
    for preset in [Preset::Experimental9p1GHz, Preset::Calculated11GHz] {
        let p = SpinSystemParams::preset(preset);
        let cts = find_anticrossings(&p, (7, 8), (0.0, 60.0), &CtSearch::default()).unwrap();
        let ct = cts[0];
        let rel = (ct.f_ct_ghz / preset.ct_frequency_ghz() - 1.0).abs();
        checks.push(((ct.b_min_mt - 24.0).abs() <= 0.2, format!("{} B_min={:.5} mT", preset.name(), ct.b_min_mt)));
        checks.push((rel <= 1e-4, format!("gap={:.8} GHz rel={rel:.1e}", ct.f_ct_ghz)));
    }
    outcome(&checks)
}

fn criterion_2() -> Outcome {
    let p = SpinSystemParams::preset(Preset::Experimental9p1GHz);
    let ct = find_anticrossings(&p, (7, 8), (0.0, 60.0), &CtSearch::default()).unwrap()[0];
    let spec = spectrum_at(&p, ct.b_min_mt, 0.0).unwrap();
    let jz = (magnetic_moment(&p, &spec, 7).unwrap().abs()).max(magnetic_moment(&p, &spec, 8).unwrap().abs());
    let d = DimerSystem::preset(Preset::Experimental9p1GHz);
    let j = sector_exchange(&d, ct.b_min_mt, 0.0, d.operating_sector()).unwrap().abs() * MHZ_PER_GHZ;
    outcome(&[(jz < 1e-3, format!("|<Jz>|={jz:.2e}")), (j < 1e-3, format!("j={j:.2e} MHz"))])
}

/// Deterministic pseudo-random Hermitian matrix.
fn random_hermitian(n: usize, scale: f64, seed: u64) -> CMatrix {
    let mut s = seed;
    let mut next = || {
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
    };
    let m = CMatrix::from_fn(n, n, |_, _| Complex64::new(next(), next()));
    (&m + m.adjoint()) * real(0.5 * scale)
}

fn criterion_3() -> Outcome {
    let sd = SpectralDensity::OhmicCutoff { eta: 0.5, cutoff_ghz: 200.0 };
    let model = |secular| RedfieldModel {
        spectrum: diagonalize(&OperatorMatrix::unlabeled(random_hermitian(6, 30.0, 7))).unwrap(),
        couplings: vec![OperatorMatrix::unlabeled(random_hermitian(6, 0.05, 19))],
        sd: sd.clone(),
        temperature: 0.5,
        secular,
    };
    // trace preservation
    let mut trace_err: f64 = 0.0;
    for secular in [false, true] {
        let tensor = build_redfield(&model(secular)).unwrap();
        let mut rho = CMatrix::zeros(6, 6);
        rho[(5, 5)] = real(0.7);
        rho[(1, 1)] = real(0.3);
        rho[(1, 5)] = real(0.4);
        rho[(5, 1)] = real(0.4);
        let times: Vec<f64> = (0..14).map(|k| 0.5 * 2f64.powi(k)).collect();
        for s in propagate(&rho, &tensor, &times).unwrap().states {
            trace_err = trace_err.max((s.trace() - ONE).norm());
        }
    }
    // Gibbs steady state
    let m = model(true);
    let ss = steady_state(&build_redfield(&m).unwrap()).unwrap();
    let g = gibbs_populations(&m.spectrum.energies, m.temperature);
    let gibbs_err = (0..6)
        .flat_map(|a| (0..6).map(move |b| (a, b)))
        .map(|(a, b)| (ss[(a, b)] - if a == b { real(g[a]) } else { ZERO }).norm())
        .fold(0.0, f64::max);
    // golden rule on a two-level system
    let (nu, v, t) = (9.1, 0.03, 5.0);
    let two = RedfieldModel {
        spectrum: diagonalize(&OperatorMatrix::unlabeled(CMatrix::from_diagonal(&DVector::from_vec(vec![
            real(-nu / 2.0),
            real(nu / 2.0),
        ]))))
        .unwrap(),
        couplings: vec![OperatorMatrix::unlabeled(CMatrix::from_row_slice(2, 2, &[ZERO, real(v), real(v), ZERO]))],
        sd: sd.clone(),
        temperature: t,
        secular: false,
    };
    let r = build_redfield(&two).unwrap();
    let rate_err = (r.population_rate(1, 0) - v * v * bath_rate(&sd, t, nu))
        .abs()
        .max((r.population_rate(0, 1) - v * v * bath_rate(&sd, t, -nu)).abs());
    // transverse-only coupling
    let cfg = RelaxationConfig {
        sd: SpectralDensity::OhmicCutoff { eta: 1e-3, cutoff_ghz: 100.0 },
        couplings: vec![PhononCoupling { k: 4, q: -4, amplitude_ghz: 1.0 }],
        ..Default::default()
    };
    let rt = relaxation_times(&SpinSystemParams::preset(Preset::Experimental9p1GHz), 40.0, 5.0, &cfg).unwrap();
    let ratio = rt.t2_us / (2.0 * rt.t1_us);
    outcome(&[
        (trace_err < 1e-10, format!("trace err {trace_err:.1e}")),
        (gibbs_err < 1e-6, format!("Gibbs err {gibbs_err:.1e}")),
        (rate_err < 1e-10, format!("golden-rule err {rate_err:.1e}")),
        ((ratio - 1.0).abs() < 0.01, format!("T2/2T1={ratio:.5}")),
    ])
}

fn criterion_4() -> Outcome {
    let p = SpinSystemParams::preset(Preset::Experimental9p1GHz);
    let cfg = RelaxationConfig::default();
    let temps: Vec<f64> = (3..=11).map(f64::from).collect();
    let rows = relaxation_sweep(&p, &[24.0], &temps, &cfg).unwrap();
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.temperature_k, r.t1_us.unwrap())).collect();
    let fit = arrhenius_fit(&pts).unwrap();
    let fields: Vec<f64> = (0..=20).map(|k| 4.0 + 2.0 * k as f64).collect();
    let scan = relaxation_sweep(&p, &fields, &[5.0], &cfg).unwrap();
    let argmax =
        |f: &dyn Fn(&ctqsim::open::SweepRow) -> f64| scan.iter().max_by(|a, b| f(a).total_cmp(&f(b))).unwrap().b_mt;
    let (b1, b2) = (argmax(&|r| r.t1_us.unwrap_or(0.0)), argmax(&|r| r.t2_us.unwrap_or(0.0)));
    outcome(&[
        (fit.r_squared > 0.99, format!("R2={:.5}", fit.r_squared)),
        (b1 == 24.0 && b2 == 24.0, format!("T1 max at {b1} mT, T2 max at {b2} mT")),
        (true, format!("U_eff={:.2} cm-1 (reference 34.5, omega0/2 34.2; not a gate)", fit.u_eff_cm1)),
    ])
}

fn criterion_5() -> Outcome {
    let u = 34.5;
    let pts: Vec<(f64, f64)> = (3..=11)
        .map(|t| {
            let t = f64::from(t);
            (t, 2.3e-7 * (u * GHZ_PER_CM1 / (K_B_GHZ_PER_K * t)).exp())
        })
        .collect();
    let fit = arrhenius_fit(&pts).unwrap();
    let rel = (fit.u_eff_cm1 / u - 1.0).abs();
    outcome(&[(rel < 5e-3, format!("U={:.6} cm-1 rel err {rel:.1e}", fit.u_eff_cm1))])
}

fn criterion_6() -> Outcome {
    let mut checks = Vec::new();
    for preset in [Preset::Experimental9p1GHz, Preset::Calculated11GHz] {
        let d = DimerSystem::preset(preset);
        let df = delta_f(&d, 12.0, 0.0).unwrap().delta_f_mhz.abs();
        let at_ct = delta_f(&d, 24.0, 0.0).unwrap().delta_f_mhz.abs();
        checks.push(((df / 0.1 - 1.0).abs() <= 0.2, format!("{} delta f(12 mT)={df:.6} MHz", preset.name())));
        checks.push((at_ct < 1e-6, format!("delta f(24 mT, 0 V)={at_ct:.1e} MHz")));
    }
    outcome(&checks)
}

fn criterion_7() -> Outcome {
    let d = DimerSystem::preset(Preset::Experimental9p1GHz);
    let (sys, _) = operating_system(&d, 12.0, 300.0).unwrap();
    let times: Vec<f64> = (0..=400).map(|k| k as f64 * 50.0).collect();
    let rec = swap_oscillation(&sys, 0.0, "10", "01", &times).unwrap();
    let composed = delta_f(&d, 12.0, 0.0).unwrap().delta_f_mhz.abs();
    let freq_err = (rec.frequency_mhz / composed - 1.0).abs();
    let half_ok = [rec.full_swap_ns, rec.half_rotation_ns].iter().all(|t| *t >= 2500.0 && *t <= 10000.0);
    let bell = bell_protocol(&sys, 300.0, &BellOptions::default(), None).unwrap();
    let mono: Vec<f64> = [Site::A, Site::B]
        .iter()
        .map(|&s| {
            let m = monomer_system(&d, s, 12.0, 300.0).unwrap();
            monomer_cancellation_check(&bell.resolved, &m).unwrap().ground_fidelity
        })
        .collect();
    outcome(&[
        (freq_err < 0.01, format!("swap {:.6} vs composed {composed:.6} MHz", rec.frequency_mhz)),
        (half_ok, format!("1/(2D)={:.0} ns, 1/(4D)={:.0} ns", rec.full_swap_ns, rec.half_rotation_ns)),
        (bell.fidelity > 0.99, format!("Bell F={:.5}", bell.fidelity)),
        (bell.concurrence > 0.98, format!("C={:.5}", bell.concurrence)),
        (mono.iter().all(|f| *f > 0.99), format!("monomer F={:.5}/{:.5}", mono[0], mono[1])),
    ])
}

fn run_cli(args: &[&str]) -> (i32, Vec<u8>) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let mut argv = vec!["ctqsim"];
    argv.extend_from_slice(args);
    let code = main_with_args(argv, &mut out, &mut err);
    (code, out)
}

fn dir_contents(dir: &std::path::Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

fn criterion_8() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let config = tmp.path().join("run.toml");
    std::fs::write(
        &config,
        "preset = \"calculated_11GHz\"\n[spectrum]\nfields_mt = { start = 0.0, stop = 40.0, step = 4.0 }\n[relax]\nfields_mt = [20.0, 24.0, 28.0]\ntemperatures_k = [4.0, 6.0]\n",
    )
    .unwrap();
    let config = config.to_str().unwrap().to_owned();
    let mut checks = Vec::new();
    for cmd in ["spectrum", "ct-find", "calibrate", "relax", "dimer", "pulse", "check"] {
        for json in [false, true] {
            let mut args = vec![cmd, "--threads", "2"];
            if json {
                args.push("--json");
            }
            let (c1, o1) = run_cli(&args);
            args[2] = "3";
            let (c2, o2) = run_cli(&args);
            checks.push((
                c1 == 0 && c2 == 0 && o1 == o2 && !o1.is_empty(),
                format!("{cmd}{}", if json { "/json" } else { "" }),
            ));
        }
        let outs: Vec<_> = (0..2)
            .map(|k| {
                let dir = tmp.path().join(format!("{cmd}-{k}"));
                let d = dir.to_str().unwrap().to_owned();
                let threads = (k + 1).to_string();
                let code = run_cli(&[cmd, "--config", &config, "--out", &d, "--json", "--threads", &threads]).0;
                (code, dir_contents(&dir))
            })
            .collect();
        checks.push((
            outs.iter().all(|o| o.0 == 0) && outs[0].1 == outs[1].1 && !outs[0].1.is_empty(),
            format!("{cmd} --config --out ({} files)", outs[0].1.len()),
        ));
    }
    outcome(&checks)
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome, Duration); 8] = [
        ("CT location and gap", criterion_1, Duration::from_secs(10)),
        ("vanishing moment and exchange at the CT", criterion_2, Duration::from_secs(30)),
        ("Redfield correctness", criterion_3, Duration::from_secs(60)),
        ("Orbach phenomenology", criterion_4, Duration::from_secs(600)),
        ("Arrhenius pipeline", criterion_5, Duration::from_secs(1)),
        ("dimer delta f", criterion_6, Duration::from_secs(60)),
        ("gate suite", criterion_7, Duration::from_secs(120)),
        ("CLI determinism", criterion_8, Duration::from_secs(60)),
    ];
    let mut failed = Vec::new();
    writeln!(std::io::stdout()).unwrap();
    for (k, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let dt = start.elapsed();
        let pass = out.pass && dt <= *limit;
        // straight to the handle so the lines survive output capture
        writeln!(
            std::io::stdout(),
            "criterion {}: {} {name} ({:.2} s of {} s) {}",
            k + 1,
            if pass { "PASS" } else { "FAIL" },
            dt.as_secs_f64(),
            limit.as_secs(),
            out.detail
        )
        .unwrap();
        if !pass {
            failed.push(k + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
