//! Result document, schema version 1.
//!
//! Reals are written in shortest round-trip form, so every value reads back
//! to the same `f64`. State dumps list only non-zero amplitudes as
//! `[q, n_x, n_y, re, im]` rows.

use std::collections::BTreeMap;

use noon_core::{noon_fidelity, HybridState, Program, RunResult};
use serde::Serialize;

pub const SCHEMA: &str = "noonsim.result";
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct ResultDocument {
    pub schema: &'static str,
    pub schema_version: u32,
    /// Canonical text of the executed program.
    pub program: String,
    pub truncation: TruncationRecord,
    pub steps: Vec<StepRecord>,
    #[serde(rename = "final")]
    pub final_diagnostics: FinalDiagnostics,
    pub warnings: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct TruncationRecord {
    pub nmax_x: usize,
    pub nmax_y: usize,
    pub guard: usize,
}

#[derive(Debug, Serialize)]
pub struct StepRecord {
    pub index: usize,
    pub kind: &'static str,
    pub duration: Option<f64>,
    pub predicted_infidelity: Option<f64>,
    pub leakage: f64,
    pub p_excited: f64,
    pub p_ground: f64,
    pub measurement: Option<MeasurementRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub state: Option<Vec<StateRow>>,
}

#[derive(Debug, Serialize)]
pub struct MeasurementRecord {
    pub outcome: &'static str,
    pub probability: f64,
}

/// `(q, n_x, n_y, re, im)`.
#[derive(Debug, Serialize, PartialEq)]
pub struct StateRow(pub &'static str, pub usize, pub usize, pub f64, pub f64);

#[derive(Debug, Serialize)]
pub struct FinalDiagnostics {
    pub noon_n: usize,
    pub noon_fidelity: f64,
    pub chi: f64,
    pub fidelity_chi_0: f64,
    pub fidelity_chi_pi: f64,
    pub noon_level: &'static str,
    pub postselect_probability: f64,
    pub max_leakage: f64,
    pub diagnostics: BTreeMap<String, f64>,
}

pub fn state_rows(state: &HybridState) -> Vec<StateRow> {
    let trunc = state.truncation();
    state
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(_, z)| z.re != 0.0 || z.im != 0.0)
        .map(|(i, z)| {
            let (q, nx, ny) = trunc.unindex(i);
            StateRow(q.symbol(), nx, ny, z.re, z.im)
        })
        .collect()
}

impl ResultDocument {
    pub fn build(
        program: &Program,
        result: &RunResult,
        noon_n: usize,
        dump_states: bool,
    ) -> noon_core::Result<ResultDocument> {
        let steps = result
            .snapshots
            .iter()
            .map(|snap| {
                let pulse = result.pulses.iter().find(|p| p.step == snap.step);
                let meas = result.measurements.iter().find(|m| m.step == snap.step);
                StepRecord {
                    index: snap.step,
                    kind: program.steps[snap.step].kind(),
                    duration: pulse.map(|p| p.duration),
                    predicted_infidelity: pulse.and_then(|p| p.predicted_infidelity),
                    leakage: snap.leakage,
                    p_excited: snap.state.level_population(noon_core::Level::Excited),
                    p_ground: snap.state.level_population(noon_core::Level::Ground),
                    measurement: meas.map(|m| MeasurementRecord {
                        outcome: m.outcome.symbol(),
                        probability: m.probability,
                    }),
                    state: dump_states.then(|| state_rows(&snap.state)),
                }
            })
            .collect();

        let noon = noon_fidelity(&result.final_state, noon_n)?;
        let mut diagnostics = result.diagnostics.clone();
        diagnostics.insert("noon_amp_n0_abs".into(), noon.amp_n0.norm());
        diagnostics.insert("noon_amp_n0_arg".into(), noon.amp_n0.arg());
        diagnostics.insert("noon_amp_0n_abs".into(), noon.amp_0n.norm());
        diagnostics.insert("noon_amp_0n_arg".into(), noon.amp_0n.arg());

        let t = program.trunc;
        Ok(ResultDocument {
            schema: SCHEMA,
            schema_version: SCHEMA_VERSION,
            program: noon_core::serialize(program),
            truncation: TruncationRecord {
                nmax_x: t.n_max_x(),
                nmax_y: t.n_max_y(),
                guard: t.guard(),
            },
            steps,
            final_diagnostics: FinalDiagnostics {
                noon_n,
                noon_fidelity: noon.best,
                chi: noon.chi,
                fidelity_chi_0: noon.fixed.0,
                fidelity_chi_pi: noon.fixed.1,
                noon_level: noon.level.symbol(),
                postselect_probability: result.postselect_probability(),
                max_leakage: result.max_leakage(),
                diagnostics,
            },
            warnings: result.warnings.clone(),
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }
}

/// Fixed 17-significant-digit scientific notation, independent of locale.
pub fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}
