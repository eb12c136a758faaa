//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits nonzero
//! if any criterion fails.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

use noon_core::protocol::superposition_pulse_time;
use noon_core::sideband::four_phonon_hamiltonian;
use noon_core::state::mode_inner;
use noon_core::{
    apply_pulse, build_noon8, closed_form_unitary, coupling_g, expm_oracle, laguerre_assoc,
    noon_fidelity, parse, run_sequence, serialize, AutoDuration, Axis, Drive, Form, HybridState,
    Level, Program, PulseDuration, PulseSpec, RotationSpec, RunResult, Step, Truncation, C64,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ORACLE_TOL: f64 = 1e-9;
const VACUUM_TOL: f64 = 1e-12;
const SECTOR_TOL: f64 = 1e-10;
const NOON_MIN: f64 = 0.999;
const POSTSELECT_TOL: f64 = 1e-3;
const ORTHOGONAL_TOL: f64 = 1e-6;
const CONSERVATION_TOL: f64 = 1e-12;
const RECURRENCE_REL_TOL: f64 = 1e-9;
const ETA: f64 = 0.05;
const OMEGA: f64 = 1.0e6;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn drive(form: Form) -> Drive {
    Drive {
        eta: ETA,
        omega: OMEGA,
        form,
    }
}

fn canonical(form: Form, horizon: u32, outcome: Level) -> RunResult {
    run_sequence(
        &build_noon8(drive(form), drive(form), horizon, outcome),
        &Truncation::default(),
    )
    .unwrap()
}

fn random_safe_state(rng: &mut ChaCha8Rng, trunc: Truncation) -> HybridState {
    let mut s = HybridState::zeros(trunc);
    for q in Level::ALL {
        for nx in 0..=trunc.safe_max(Axis::X) {
            for ny in 0..=trunc.safe_max(Axis::Y) {
                s.set_amp(
                    q,
                    nx,
                    ny,
                    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                );
            }
        }
    }
    s.normalized().unwrap()
}

fn closed_form_vs_oracle() -> Outcome {
    let trunc = Truncation::square(16, 4).unwrap();
    let mut worst = 0.0f64;
    for axis in [Axis::X, Axis::Y] {
        let h = four_phonon_hamiltonian(1.0, axis, &trunc).unwrap();
        for t in [0.1, 0.7, 3.3] {
            let oracle = expm_oracle(&h, t).unwrap();
            let closed = closed_form_unitary(1.0, t, &trunc, axis).unwrap();
            worst = worst.max(closed.max_abs_diff_safe(&oracle, axis));
        }
    }
    check(worst <= ORACLE_TOL, || format!("max deviation {worst:e}"))?;
    Ok(format!("max deviation {worst:.2e}"))
}

fn vacuum_transfer() -> Outcome {
    let trunc = Truncation::default();
    let g = 1.0;
    let t = PI / (2.0 * 24f64.sqrt() * g);
    let s = HybridState::basis(trunc, Level::Excited, 0, 0).unwrap();
    let spec = PulseSpec::four_phonon(Axis::X, 1.0, 24.0, PulseDuration::Seconds(t), Form::Closed);
    check((coupling_g(&spec).unwrap() - g).abs() < 1e-15, || {
        "drive does not give g = 1".into()
    })?;
    let out = apply_pulse(&s, &spec).unwrap().state;
    let pe = out.excited_population();
    let p4 = out.amp(Level::Ground, 4, 0).norm_sqr();
    check(pe <= VACUUM_TOL && p4 >= 1.0 - VACUUM_TOL, || {
        format!("P(e) = {pe:e}, |<g,4,0|psi>|^2 = {p4}")
    })?;
    Ok(format!("P(e) = {pe:.1e}, 1 - P(g,4,0) = {:.1e}", 1.0 - p4))
}

fn fock_product() -> Outcome {
    let r = canonical(Form::Closed, 1000, Level::Ground);
    // steps: prepare, x pulse, reset, y pulse
    let p = r.snapshot(3).unwrap().state.sector_population(4, 4);
    check(p >= 1.0 - SECTOR_TOL, || format!("(4,4) population {p}"))?;
    Ok(format!("1 - P(4,4) = {:.1e}", 1.0 - p))
}

fn end_to_end_noon() -> Outcome {
    let g = canonical(Form::Closed, 1000, Level::Ground);
    let e = canonical(Form::Closed, 1000, Level::Excited);
    let mut parts = Vec::new();
    for (label, r) in [("g", &g), ("e", &e)] {
        let f = noon_fidelity(&r.final_state, 8).unwrap();
        let p = r.postselect_probability();
        check(f.best >= NOON_MIN, || {
            format!("outcome {label}: fidelity {}", f.best)
        })?;
        check((p - 0.5).abs() <= POSTSELECT_TOL, || {
            format!("outcome {label}: probability {p}")
        })?;
        parts.push(format!(
            "F_{label} = {:.7} (chi* = {:+.3}), p_{label} = {p:.6}",
            f.best, f.chi
        ));
    }
    let overlap = mode_inner(
        g.final_state.mode_slice(Level::Ground),
        e.final_state.mode_slice(Level::Excited),
    )
    .norm();
    check(overlap <= ORTHOGONAL_TOL, || format!("overlap {overlap:e}"))?;
    parts.push(format!("|<+|->| = {overlap:.1e}"));
    Ok(parts.join(", "))
}

fn incommensurability() -> Outcome {
    let g = coupling_g(&PulseSpec::four_phonon(
        Axis::X,
        ETA,
        OMEGA,
        PulseDuration::Seconds(0.0),
        Form::Closed,
    ))
    .unwrap();
    let mut prev = f64::INFINITY;
    for m in 10..=1000 {
        let inf = superposition_pulse_time(g, m).unwrap().predicted_infidelity;
        check(inf <= prev, || {
            format!("predicted infidelity rises at M = {m}: {prev:e} -> {inf:e}")
        })?;
        prev = inf;
    }
    let f10 = noon_fidelity(&canonical(Form::Closed, 10, Level::Ground).final_state, 8)
        .unwrap()
        .best;
    let f1000 = noon_fidelity(&canonical(Form::Closed, 1000, Level::Ground).final_state, 8)
        .unwrap()
        .best;
    check(f10 < f1000, || {
        format!("F(M=10) = {f10} not below F(M=1000) = {f1000}")
    })?;
    Ok(format!("F(M=10) = {f10:.6} < F(M=1000) = {f1000:.7}"))
}

fn conservation() -> Outcome {
    let trunc = Truncation::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst = 0.0f64;
    for axis in [Axis::X, Axis::Y] {
        for i in 0..50 {
            let s = random_safe_state(&mut rng, trunc);
            let t = rng.gen_range(0.0..40.0);
            let form = if i % 2 == 0 { Form::Closed } else { Form::Full };
            let spec = PulseSpec::four_phonon(axis, 0.1, 240.0, PulseDuration::Seconds(t), form);
            let out = apply_pulse(&s, &spec).unwrap().state;
            let before = s.mean_phonons(axis) + 4.0 * s.excited_population();
            let after = out.mean_phonons(axis) + 4.0 * out.excited_population();
            worst = worst.max((before - after).abs());
        }
    }
    check(worst <= CONSERVATION_TOL, || format!("drift {worst:e}"))?;
    Ok(format!("max drift {worst:.1e} over 100 states"))
}

fn binomial(a: u64, b: u64) -> u64 {
    (1..=b).fold(1u64, |acc, i| acc * (a - b + i) / i)
}

fn laguerre_suite() -> Outcome {
    let mut worst = 0.0f64;
    for k in 0..=8u32 {
        for x in [0.0, 0.01, 0.04, 1.0, 5.0] {
            for n in 1..=30u32 {
                let (lm, l0, lp) = (
                    laguerre_assoc(n - 1, k, x),
                    laguerre_assoc(n, k, x),
                    laguerre_assoc(n + 1, k, x),
                );
                let lhs = (n + 1) as f64 * lp;
                let a = (2 * n + k + 1) as f64 - x;
                let rhs = a * l0 - (n + k) as f64 * lm;
                let scale = lhs
                    .abs()
                    .max((a * l0).abs())
                    .max(((n + k) as f64 * lm).abs())
                    .max(1.0);
                worst = worst.max((lhs - rhs).abs() / scale);
            }
        }
    }
    check(worst <= RECURRENCE_REL_TOL, || {
        format!("recurrence residual {worst:e}")
    })?;
    for n in 0..=20u32 {
        for k in 0..=20 - n {
            let exact = binomial((n + k) as u64, k as u64);
            let v = laguerre_assoc(n, k, 0.0);
            check(v == exact as f64, || {
                format!("L_{n}^({k})(0) = {v}, expected {exact}")
            })?;
        }
    }
    Ok(format!(
        "recurrence residual {worst:.1e}, 231 values at x = 0 exact"
    ))
}

fn lamb_dicke_consistency() -> Outcome {
    let mut parts = Vec::new();
    for outcome in Level::ALL {
        let fc = noon_fidelity(&canonical(Form::Closed, 1000, outcome).final_state, 8)
            .unwrap()
            .best;
        let ff = noon_fidelity(&canonical(Form::Full, 1000, outcome).final_state, 8)
            .unwrap()
            .best;
        let d = (fc - ff).abs();
        check(d <= 5.0 * ETA * ETA, || {
            format!("outcome {outcome}: closed {fc} vs full {ff}")
        })?;
        parts.push(format!("{outcome}: |dF| = {d:.1e}"));
    }
    Ok(format!(
        "{} (limit {:.1e})",
        parts.join(", "),
        5.0 * ETA * ETA
    ))
}

fn program_strategy() -> impl Strategy<Value = Program> {
    let level = || prop_oneof![Just(Level::Ground), Just(Level::Excited)];
    let real = || prop_oneof![-10.0f64..10.0, proptest::num::f64::NORMAL];
    let positive = || {
        prop_oneof![
            1e-3f64..1e7,
            proptest::num::f64::POSITIVE.prop_filter("finite", |v| v.is_finite())
        ]
    };
    (8usize..20, 8usize..20, 4usize..8).prop_flat_map(move |(nx, ny, guard)| {
        let trunc = Truncation::new(nx, ny, guard).unwrap();
        let duration = prop_oneof![
            positive().prop_map(PulseDuration::Seconds),
            Just(PulseDuration::Auto(AutoDuration::VacuumPi)),
            (1u32..100_000)
                .prop_map(|horizon| PulseDuration::Auto(AutoDuration::SuperpositionPi { horizon })),
        ];
        let axis = prop_oneof![Just(Axis::X), Just(Axis::Y)];
        let form_k = prop_oneof![
            Just((Form::Closed, 4u32)),
            (1..=guard as u32).prop_map(|k| (Form::Full, k))
        ];
        let pulse = (axis, form_k, positive(), positive(), duration).prop_map(
            |(axis, (form, k), eta, omega, duration)| {
                Step::SidebandPulse(PulseSpec {
                    axis,
                    k,
                    eta,
                    omega,
                    duration,
                    form,
                })
            },
        );
        let step = prop_oneof![
            pulse,
            (real(), real()).prop_map(|(theta, phi)| Step::Rotate(RotationSpec { theta, phi })),
            level().prop_map(Step::MeasureQubit),
        ];
        let prep = (
            level(),
            0..=trunc.safe_max(Axis::X),
            0..=trunc.safe_max(Axis::Y),
        )
            .prop_map(|(level, n_x, n_y)| Step::Prepare { level, n_x, n_y });
        (prep, proptest::collection::vec(step, 0..12)).prop_map(move |(p, mut rest)| {
            rest.insert(0, p);
            Program::new(trunc, rest)
        })
    })
}

fn parser_round_trip() -> Outcome {
    let mut runner = TestRunner::new(Config {
        cases: 100,
        failure_persistence: None,
        ..Config::default()
    });
    runner
        .run(&program_strategy(), |p| {
            let text = serialize(&p);
            let back = parse(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
            prop_assert_eq!(&back, &p);
            prop_assert_eq!(serialize(&back), text);
            Ok(())
        })
        .map_err(|e| format!("round trip: {e}"))?;
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/noon8.pp");
    let text = std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
    let program = parse(&text).map_err(|e| format!("noon8.pp: {e}"))?;
    let expected = build_noon8(
        drive(Form::Closed),
        drive(Form::Closed),
        1000,
        Level::Excited,
    );
    check(program.trunc == Truncation::default(), || {
        "noon8.pp truncation differs".into()
    })?;
    check(program.steps == expected, || {
        "noon8.pp steps differ from build_noon8".into()
    })?;
    Ok("100 programs round-trip, noon8.pp matches build_noon8".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("closed form vs expm oracle", closed_form_vs_oracle),
        ("vacuum four-phonon transfer", vacuum_transfer),
        ("intermediate Fock product", fock_product),
        ("end-to-end NOON", end_to_end_noon),
        ("incommensurability gap", incommensurability),
        ("conservation law", conservation),
        ("Laguerre suite", laguerre_suite),
        ("Lamb-Dicke consistency", lamb_dicke_consistency),
        ("parser round trip", parser_round_trip),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match result {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({detail})", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
