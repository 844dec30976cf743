// Copyright 2026 The ctqsim Developers
// SPDX-License-Identifier: Apache-2.0

//! One function per subcommand; each returns the tables to write.

use serde_json::{json, Value};

use crate::clock::anticrossing::ct_table_csv;
use crate::clock::diagram::spectrum_at;
use crate::clock::{calibrate, find_anticrossings, CalibrationOptions, CalibrationTarget, CtSearch};
use crate::dimer::{delta_f, sector_exchange, CouplingMode};
use crate::error::{Error, Result};
use crate::linalg::{hermiticity_deviation, real, CMatrix, ZERO};
use crate::open::fit::arrhenius_fit;
use crate::open::relaxation::{redfield_model, sweep_csv};
use crate::open::{build_redfield, propagate, relaxation_sweep};
use crate::pulses::init::example_ladder;
use crate::pulses::propagate::{propagate_sequence, GateResult};
use crate::pulses::protocols::middle_splitting;
use crate::pulses::{
    bell_protocol, initialization_transfer, monomer_cancellation_check, monomer_system, operating_system, rabi_pi_time,
    swap_oscillation, BellFamily, BellOptions, Frame, Site,
};
use crate::spin::{axial_field, build_hamiltonian, magnetic_moment};
use crate::units::MHZ_PER_GHZ;

use super::config::{LoadedConfig, Protocol};
use super::output::Artifact;

/// Reference barriers printed next to the Arrhenius fit (cm^-1).
const U_EFF_REFERENCE_CM1: f64 = 34.5;
const U_EFF_HALF_MODE_CM1: f64 = 34.2;

#[derive(Debug, Default)]
pub struct Outcome {
    pub artifacts: Vec<Artifact>,
    pub warnings: Vec<String>,
    /// A check did not pass (exit code 1).
    pub failed: bool,
}

impl Outcome {
    fn of(a: Artifact) -> Self {
        Self { artifacts: vec![a], ..Default::default() }
    }
}

fn f(x: f64) -> String {
    format!("{x:.12e}")
}

pub fn spectrum(cfg: &LoadedConfig) -> Result<Outcome> {
    let sec = cfg.config.spectrum.clone().unwrap_or_default();
    let grid = sec.fields_mt.values()?;
    let diag = crate::clock::diagram::level_diagram_at_voltage(&cfg.params, &grid, sec.voltage)?;
    let a = Artifact::new(
        "spectrum",
        diag.to_csv(),
        json!({ "fields_mt": diag.fields_mt, "energies_ghz": diag.energies, "voltage": sec.voltage }),
    )
    .note(format!("voltage_V={}", sec.voltage))
    .note(format!("min_branch_overlap={:.6}", diag.min_overlap));
    Ok(Outcome::of(a))
}

pub fn ct_find(cfg: &LoadedConfig) -> Result<Outcome> {
    let sec = cfg.config.ct_find.clone().unwrap_or_default();
    let search = CtSearch { voltage: sec.voltage, ..CtSearch::default() };
    let mut points = Vec::new();
    for &pair in &sec.pairs {
        points.extend(find_anticrossings(&cfg.params, pair, sec.range_mt, &search)?);
    }
    let mut out = Outcome::of(Artifact::new(
        "ct_find",
        ct_table_csv(&points),
        Value::Array(
            points
                .iter()
                .map(|p| {
                    json!({"b_min_mt": p.b_min_mt, "f_ct_ghz": p.f_ct_ghz, "lower": p.level_pair.0 + 1,
                           "upper": p.level_pair.1 + 1, "df_db": p.df_db, "d2f_db2": p.d2f_db2})
                })
                .collect(),
        ),
    ));
    if points.is_empty() {
        out.warnings.push("no anticrossing in the searched range".into());
    }
    Ok(out)
}

pub fn calibrate_cmd(cfg: &LoadedConfig) -> Result<Outcome> {
    let sec = cfg.config.calibrate.clone().unwrap_or_default();
    let free = sec.free_params()?;
    let report = calibrate(
        &cfg.params,
        &CalibrationTarget { targets: sec.targets.clone() },
        &free,
        &CalibrationOptions::default(),
    )?;
    let mut csv = String::from("parameter,value\n");
    for (p, v) in &report.free {
        csv.push_str(&format!("{},{}\n", sec.free[free.iter().position(|q| q == p).unwrap_or(0)], f(*v)));
    }
    let mut a = Artifact::new(
        "calibrate",
        csv,
        json!({
            "free": sec.free.iter().zip(&report.free).map(|(n, (_, v))| json!({"name": n, "value": v})).collect::<Vec<_>>(),
            "achieved": report.achieved,
            "residual": report.residual,
            "iterations": report.iterations,
            "history": report.history,
            "params": report.params,
        }),
    );
    for line in report.to_text().lines() {
        a = a.note(line);
    }
    let params = toml::to_string(&report.params).map_err(|e| Error::Config(e.to_string()))?;
    let p = Artifact::new("calibrated_params", params, serde_json::to_value(&report.params).expect("serialisable"));
    Ok(Outcome { artifacts: vec![a, p], ..Default::default() })
}

pub fn relax(cfg: &LoadedConfig) -> Result<Outcome> {
    let sec = cfg.config.relax.clone().unwrap_or_default();
    let (bs, ts) = (sec.fields_mt.values()?, sec.temperatures_k.values()?);
    let rows = relaxation_sweep(&cfg.params, &bs, &ts, &sec.model)?;
    let mut a = Artifact::new("relax", sweep_csv(&rows), serde_json::to_value(&rows).expect("serialisable"));
    let mut fits = Vec::new();
    for &b in &bs {
        let pts: Vec<(f64, f64)> =
            rows.iter().filter(|r| r.b_mt == b).filter_map(|r| r.t1_us.map(|t1| (r.temperature_k, t1))).collect();
        if pts.len() >= 2 {
            let fit = arrhenius_fit(&pts)?;
            a = a.note(format!(
                "arrhenius B_mT={b} U_eff_cm1={:.6} tau0_us={:.6e} R2={:.6} monotonic={} reference_U_eff_cm1={U_EFF_REFERENCE_CM1} half_mode_cm1={U_EFF_HALF_MODE_CM1}",
                fit.u_eff_cm1, fit.tau0, fit.r_squared, fit.monotonic
            ));
            fits.push(json!({"b_mt": b, "fit": fit}));
        }
    }
    a.json = json!({ "rows": a.json, "arrhenius": fits, "reference_u_eff_cm1": U_EFF_REFERENCE_CM1 });
    let flagged = rows.iter().filter(|r| r.t1_us.is_none() || r.note.is_some()).count();
    let mut out = Outcome::of(a);
    if flagged > 0 {
        out.warnings.push(format!("{flagged} of {} points flagged (see note column)", rows.len()));
    }
    Ok(out)
}

pub fn dimer(cfg: &LoadedConfig) -> Result<Outcome> {
    let sec = cfg.config.dimer.clone().unwrap_or_default();
    let d = cfg.dimer(sec.mode, sec.separation_angstrom)?;
    let fields = sec.fields_mt.values()?;
    use rayon::prelude::*;
    let rows: Vec<_> = fields
        .par_iter()
        .map(|&b| -> Result<_> {
            let on = delta_f(&d, b, sec.v_on)?;
            let off = delta_f(&d, b, 0.0)?;
            let j = sector_exchange(&d, b, 0.0, d.operating_sector())? * MHZ_PER_GHZ;
            Ok((b, on, off, j))
        })
        .collect::<Result<_>>()?;
    let mut csv =
        String::from("B_mT,deltaf_Eon_MHz,deltaf_Eoff_MHz,difference_MHz,regime_Eon,regime_Eoff,j_sector_MHz\n");
    let mut js = Vec::new();
    for (b, on, off, j) in &rows {
        let diff = on.delta_f_mhz - off.delta_f_mhz;
        csv.push_str(&format!(
            "{b},{},{},{},{},{},{}\n",
            f(on.delta_f_mhz),
            f(off.delta_f_mhz),
            f(diff),
            on.regime.tag(),
            off.regime.tag(),
            f(*j)
        ));
        js.push(json!({"b_mt": b, "e_on": on, "e_off": off, "difference_mhz": diff, "j_sector_mhz": j}));
    }
    let a = Artifact::new("dimer", csv, Value::Array(js)).note(format!(
        "v_on={} mode={:?} r_angstrom={:.6}",
        sec.v_on,
        sec.mode,
        crate::dimer::geometry::norm(d.geometry.r_angstrom)
    ));
    Ok(Outcome::of(a))
}

fn gate_csv(g: &GateResult) -> String {
    let mut csv = String::from("segment,kind,start_ns,duration_ns,voltage_V,carrier_GHz");
    for l in &g.labels {
        csv.push_str(&format!(",P_{l}"));
    }
    csv.push('\n');
    for s in &g.log {
        csv.push_str(&format!(
            "{},{},{},{},{},{}",
            s.index,
            s.kind,
            f(s.start_ns),
            f(s.duration_ns),
            s.voltage,
            s.carrier_ghz.map(f).unwrap_or_default()
        ));
        for p in &s.populations {
            csv.push_str(&format!(",{}", f(*p)));
        }
        csv.push('\n');
    }
    csv
}

fn gate_json(g: &GateResult) -> Value {
    json!({ "labels": g.labels, "populations": g.populations(), "log": g.log, "total_ns": g.total_ns })
}

pub fn pulse(cfg: &LoadedConfig) -> Result<Outcome> {
    let sec = cfg.config.pulse.clone().unwrap_or_default();
    let d = cfg.dimer(sec.mode, None)?;
    let (b, v_on) = (sec.field_mt, sec.v_on);
    match sec.protocol {
        Protocol::BellPhi | Protocol::BellPsi => {
            let (sys, _) = operating_system(&d, b, v_on)?;
            let family = if sec.protocol == Protocol::BellPhi { BellFamily::Phi } else { BellFamily::Psi };
            let frame = if sec.lab_frame { Frame::Lab } else { Frame::Rwa };
            let opts = BellOptions { family, omega_mhz: sec.omega_mhz, wait_ns: sec.wait_ns, frame };
            let r = bell_protocol(&sys, v_on, &opts, sec.damping.as_ref())?;
            let mut monomers = Vec::new();
            for site in [Site::A, Site::B] {
                let m = monomer_system(&d, site, b, v_on)?;
                monomers.push((site, monomer_cancellation_check(&r.resolved, &m)?));
            }
            let mut a = Artifact::new(
                "pulse",
                gate_csv(&r.gate),
                json!({
                    "protocol": sec.protocol, "fidelity": r.fidelity, "theta_rad": r.theta,
                    "concurrence": r.concurrence, "wait_ns": r.wait_ns, "gap_a_ghz": r.gap_a_ghz,
                    "gate": gate_json(&r.gate), "sequence": r.sequence,
                    "monomers": monomers.iter().map(|(s, m)| json!({"site": format!("{s:?}"), "report": m})).collect::<Vec<_>>(),
                }),
            )
            .note(format!("protocol={:?} fidelity={:.9} theta_rad={:.6} concurrence={:.9} wait_ns={:.3}", family, r.fidelity, r.theta, r.concurrence, r.wait_ns))
            .note(format!("gap_10_00_GHz={:.9} gap_11_01_GHz={:.9}", r.gap_a_ghz[0], r.gap_a_ghz[1]));
            for (s, m) in &monomers {
                a = a.note(format!(
                    "monomer_{s:?} ground_fidelity={:.9} rotation_rad={:.6} compliant={}",
                    m.ground_fidelity, m.rotation_angle_rad, m.compliant
                ));
            }
            Ok(Outcome::of(a))
        }
        Protocol::Swap => {
            let (sys, _) = operating_system(&d, b, v_on)?;
            let split = middle_splitting(&sys, 0.0)?.abs().max(1e-9);
            let t_end = 2.0 / split;
            let times: Vec<f64> = (0..=400).map(|k| k as f64 * t_end / 400.0).collect();
            let rec = swap_oscillation(&sys, 0.0, "10", "01", &times)?;
            let mut csv = String::from("t_ns,P_01\n");
            for (t, p) in rec.times_ns.iter().zip(&rec.population) {
                csv.push_str(&format!("{},{}\n", f(*t), f(*p)));
            }
            let a = Artifact::new("pulse", csv, serde_json::to_value(&rec).expect("serialisable")).note(format!(
                "frequency_MHz={:.9} splitting_MHz={:.9} full_swap_ns={:.3} half_rotation_ns={:.3}",
                rec.frequency_mhz, rec.splitting_mhz, rec.full_swap_ns, rec.half_rotation_ns
            ));
            Ok(Outcome::of(a))
        }
        Protocol::Rabi => {
            let (sys, _) = operating_system(&d, b, v_on)?;
            let t_end = 3.0 / (sec.omega_mhz / MHZ_PER_GHZ);
            let times: Vec<f64> = (0..=150).map(|k| k as f64 * t_end / 150.0).collect();
            let scan = rabi_pi_time(&sys, v_on, "00", "10", sec.omega_mhz, &times)?;
            let mut csv = String::from("duration_ns,P_10\n");
            for (t, p) in scan.durations_ns.iter().zip(&scan.population) {
                csv.push_str(&format!("{},{}\n", f(*t), f(*p)));
            }
            let a = Artifact::new("pulse", csv, serde_json::to_value(&scan).expect("serialisable"))
                .note(format!("rabi_MHz={:.9} pi_time_ns={:.6}", scan.frequency_mhz, scan.pi_time_ns));
            Ok(Outcome::of(a))
        }
        Protocol::Sequence => {
            let seq = sec
                .sequence
                .clone()
                .ok_or_else(|| Error::Config("protocol 'sequence' needs [pulse.sequence] or sequence_file".into()))?;
            let (sys, _) = operating_system(&d, b, v_on)?;
            let g = propagate_sequence(&seq, &sys, sec.damping.as_ref())?;
            let bell = [BellFamily::Phi, BellFamily::Psi].map(|fam| fam.best_fidelity(&g.rho));
            let c = crate::pulses::concurrence(&g.rho)?;
            let a = Artifact::new(
                "pulse",
                gate_csv(&g),
                json!({"gate": gate_json(&g), "concurrence": c, "bell_phi": bell[0], "bell_psi": bell[1]}),
            )
            .note(format!("concurrence={c:.9} best_phi_fidelity={:.9} best_psi_fidelity={:.9}", bell[0].0, bell[1].0));
            Ok(Outcome::of(a))
        }
        Protocol::Init => {
            let ladder = sec.ladder.clone().unwrap_or_else(|| example_ladder(&d, b, v_on, 0.05));
            let r = initialization_transfer(&d, &ladder)?;
            let mut csv = String::from("rung,from,to,carrier_GHz,population_after,pair_shift_MHz,ok\n");
            for (k, (rung, s)) in r.rungs.iter().zip(&r.pair_shift_mhz).enumerate() {
                csv.push_str(&format!(
                    "{k},{},{},{},{},{},{}\n",
                    rung.from,
                    rung.to,
                    f(rung.carrier_ghz),
                    f(rung.population_after),
                    f(*s),
                    rung.ok
                ));
            }
            let failed = r.rungs.iter().any(|x| !x.ok);
            let a = Artifact::new("pulse", csv, serde_json::to_value(&r).expect("serialisable")).note(format!(
                "operating_population={:.9} monomer_population={:.9}",
                r.operating_population, r.monomer_population
            ));
            let mut out = Outcome::of(a);
            if failed {
                out.warnings.push("at least one rung failed to transfer".into());
            }
            Ok(out)
        }
    }
}

struct Check {
    name: &'static str,
    value: f64,
    limit: f64,
    pass: bool,
}

fn below(name: &'static str, value: f64, limit: f64) -> Check {
    Check { name, value, limit, pass: value < limit }
}

fn above(name: &'static str, value: f64, limit: f64) -> Check {
    Check { name, value, limit, pass: value > limit }
}

/// Fast invariant suite on the configured molecule and its dimer.
pub fn check(cfg: &LoadedConfig) -> Result<Outcome> {
    let p = &cfg.params;
    let mut checks = Vec::new();
    let h = build_hamiltonian(p, axial_field(24.0), 300.0)?;
    checks.push(below("hamiltonian_hermiticity", hermiticity_deviation(&h.matrix), 1e-10));
    let cts = find_anticrossings(p, (7, 8), (0.0, 60.0), &CtSearch::default())?;
    let ct = cts.first().ok_or_else(|| Error::NoFit("no clock transition below 60 mT".into()))?;
    checks.push(below("ct_field_offset_mT", (ct.b_min_mt - 24.0).abs(), 0.2));
    checks.push(below("ct_gap_relative_error", (ct.f_ct_ghz / cfg.preset.ct_frequency_ghz() - 1.0).abs(), 1e-4));
    let spec = spectrum_at(p, ct.b_min_mt, 0.0)?;
    let jz = magnetic_moment(p, &spec, 7)?.abs().max(magnetic_moment(p, &spec, 8)?.abs());
    checks.push(below("ct_moment_abs_jz", jz, 1e-3));
    let d = cfg.dimer(CouplingMode::EffectiveScalar, None)?;
    let j = sector_exchange(&d, ct.b_min_mt, 0.0, d.operating_sector())?.abs() * MHZ_PER_GHZ;
    checks.push(below("ct_exchange_MHz", j, 1e-3));
    let cfg_r = crate::open::RelaxationConfig::default();
    let tensor = build_redfield(&redfield_model(p, ct.b_min_mt, 5.0, &cfg_r)?)?;
    let n = tensor.dim();
    // superposition of the two clock levels
    let rho0 = CMatrix::from_fn(n, n, |a, b| if (a == 7 || a == 8) && (b == 7 || b == 8) { real(0.5) } else { ZERO });
    let traj = propagate(&rho0, &tensor, &[0.0, 100.0, 1000.0, 10000.0])?;
    let trace_err = traj.states.iter().map(|r| (r.trace().re - 1.0).abs()).fold(0.0, f64::max);
    checks.push(below("redfield_trace_error", trace_err, 1e-10));
    let df = delta_f(&d, 12.0, 0.0)?.delta_f_mhz.abs();
    checks.push(below("deltaf_12mT_relative_error", (df / 0.1 - 1.0).abs(), 0.2));
    let (sys, _) = operating_system(&d, 12.0, 300.0)?;
    let r = bell_protocol(&sys, 300.0, &BellOptions::default(), None)?;
    let u = r.gate.unitary.clone().expect("closed");
    checks.push(below("gate_unitarity", (u.adjoint() * &u - CMatrix::identity(4, 4)).norm(), 1e-8));
    checks.push(above("bell_phi_fidelity", r.fidelity, 0.99));
    checks.push(above("bell_phi_concurrence", r.concurrence, 0.98));
    let mut csv = String::from("check,value,limit,pass\n");
    for c in &checks {
        csv.push_str(&format!("{},{},{},{}\n", c.name, f(c.value), c.limit, c.pass));
    }
    let json = Value::Array(
        checks.iter().map(|c| json!({"check": c.name, "value": c.value, "limit": c.limit, "pass": c.pass})).collect(),
    );
    let failed = checks.iter().any(|c| !c.pass);
    Ok(Outcome { artifacts: vec![Artifact::new("check", csv, json)], warnings: vec![], failed })
}
