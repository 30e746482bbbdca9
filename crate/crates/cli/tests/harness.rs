use std::process::Command;

use proptest::prelude::*;
use tfd_core::{CostKind, DeConfig, VariationalAngles};
use tfd_harness::records::{format_sig, read_records, write_records};
use tfd_harness::sweep::{sweep_beta, sweep_g, sweep_zeta_tau, SweepSettings};
use tfd_harness::{BetaGrid, SweepRecord};

fn quick(workers: usize, seed: u64) -> SweepSettings {
    SweepSettings {
        de: DeConfig {
            population_size: 12,
            max_generations: 30,
            stall_generations: 10,
            seed,
            ..DeConfig::default()
        },
        workers: Some(workers),
    }
}

fn small_grid() -> BetaGrid {
    BetaGrid::custom(vec![1e-3, 0.5, 3.0, 1e3]).unwrap()
}

fn csv_bytes(records: &[SweepRecord]) -> Vec<u8> {
    let mut buf = Vec::new();
    write_records(&mut buf, records).unwrap();
    buf
}

#[test]
fn csv_round_trip_is_byte_identical() {
    let records = sweep_g(
        &[CostKind::FreeEnergy, CostKind::c1_default(), CostKind::C2],
        &[-0.5, 2.0],
        &small_grid(),
        &quick(2, 9),
    )
    .unwrap();
    let first = csv_bytes(&records);
    let parsed = read_records(first.as_slice()).unwrap();
    assert_eq!(parsed.len(), records.len());
    assert_eq!(csv_bytes(&parsed), first);
}

#[test]
fn same_master_seed_gives_identical_csv() {
    let grid = small_grid();
    let a = csv_bytes(&sweep_beta(CostKind::C0, 1.0, &grid, &quick(2, 4)).unwrap());
    let b = csv_bytes(&sweep_beta(CostKind::C0, 1.0, &grid, &quick(2, 4)).unwrap());
    let c = csv_bytes(&sweep_beta(CostKind::C0, 1.0, &grid, &quick(2, 5)).unwrap());
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn worker_count_does_not_change_results() {
    let grid = small_grid();
    let costs = [CostKind::C0, CostKind::C2];
    let serial = sweep_g(&costs, &[1.0, 2.0], &grid, &quick(1, 3)).unwrap();
    let parallel = sweep_g(&costs, &[1.0, 2.0], &grid, &quick(4, 3)).unwrap();
    assert_eq!(serial, parallel);
}

#[test]
fn single_field_sweep_matches_beta_sweep() {
    let grid = small_grid();
    for cost in [CostKind::FreeEnergy, CostKind::C2] {
        let via_g = sweep_g(&[cost], &[1.0], &grid, &quick(2, 8)).unwrap();
        let direct = sweep_beta(cost, 1.0, &grid, &quick(2, 8)).unwrap();
        assert_eq!(via_g, direct);
    }
}

#[test]
fn sweep_records_respect_invariants() {
    let records = sweep_g(&[CostKind::C0, CostKind::C2], &[-0.2, 5.0], &small_grid(), &quick(2, 1)).unwrap();
    assert_eq!(records.len(), 2 * 2 * 4);
    for r in &records {
        assert!(!r.failed());
        assert!((0.0..=1.0).contains(&r.fidelity));
        assert!((0.0..=1.0).contains(&r.trace_distance));
        assert!(r.angles.to_array().iter().all(|a| a.abs() <= std::f64::consts::PI));
        let pair = tfd_core::ProximityPair {
            fidelity: r.fidelity,
            trace_distance: r.trace_distance,
        };
        assert!(pair.fuchs_van_de_graaf_violation() < 1e-9);
    }
    // Canonical order: cost, then g, then beta.
    assert_eq!(records[0].cost_kind, CostKind::C0);
    assert_eq!(records[4].g, 5.0);
    assert!(records[..4].windows(2).all(|w| w[0].beta < w[1].beta));
}

#[test]
fn degenerate_zeta_tau_range() {
    let grid = BetaGrid::custom(vec![0.1, 2.0]).unwrap();
    let s = sweep_zeta_tau(&[1.6], &[1.48], 1.0, &grid, &quick(1, 2)).unwrap();
    assert_eq!(s.records.len(), 1);
    assert_eq!(s.argmin, s.records[0]);
    assert_eq!((s.argmin.zeta, s.argmin.tau), (1.6, 1.48));
    assert!(s.argmin.xi_abs >= 0.0);
}

#[test]
fn zeta_tau_argmin_is_grid_minimum() {
    let grid = BetaGrid::custom(vec![0.3, 3.0]).unwrap();
    let s = sweep_zeta_tau(&[1.4, 1.6], &[1.2, 1.48], 1.0, &grid, &quick(2, 2)).unwrap();
    assert_eq!(s.records.len(), 4);
    assert!(s.records.iter().all(|r| r.xi_abs >= s.argmin.xi_abs));
    assert_eq!((s.records[1].zeta, s.records[1].tau), (1.4, 1.48));
}

fn record_strategy() -> impl Strategy<Value = SweepRecord> {
    let real = -1e6f64..1e6;
    (
        1e-4f64..1e4,
        -10.0f64..10.0,
        prop::sample::select(vec![CostKind::Infidelity, CostKind::FreeEnergy, CostKind::C0, CostKind::c1_default(), CostKind::C2]),
        prop::array::uniform4(-3.2f64..3.2),
        real,
        0.0f64..=1.0,
        0.0f64..=1.0,
        any::<u64>(),
    )
        .prop_map(|(beta, g, cost_kind, a, cost_value, fidelity, trace_distance, seed)| SweepRecord {
            beta,
            g,
            cost_kind,
            angles: VariationalAngles::from_array(a),
            cost_value,
            fidelity,
            trace_distance,
            seed,
        })
}

proptest! {
    #[test]
    fn arbitrary_records_round_trip(records in prop::collection::vec(record_strategy(), 0..20)) {
        let first = csv_bytes(&records);
        let again = csv_bytes(&read_records(first.as_slice()).unwrap());
        prop_assert_eq!(first, again);
    }

    #[test]
    fn formatted_values_keep_twelve_digits(x in -1e12f64..1e12) {
        let s = format_sig(x);
        let back: f64 = s.parse().unwrap();
        prop_assert!((back - x).abs() <= 5e-12 * x.abs().max(1e-300));
    }
}

fn tfd() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tfd"))
}

#[test]
fn invalid_arguments_exit_with_two() {
    for args in [
        vec!["optimize", "--cost", "c9", "--beta", "1"],
        vec!["frobnicate"],
        vec!["optimize", "--beta", "1"],
        vec!["target"],
        vec!["optimize", "--cost", "c0", "--beta", "-1"],
        vec!["sweep-beta", "--cost", "c0", "--pop", "2"],
    ] {
        let out = tfd().args(&args).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn target_prints_density_matrix() {
    let out = tfd().args(["target", "--beta", "1", "--g", "1"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("row,col,re,im"));
    assert_eq!(lines.count(), 256);
}

#[test]
fn config_file_values_are_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "cost = c2\nbeta = 2\ng = 1\nseed = 17\npop = 10\nmax-gen = 20\n").unwrap();
    let run = |extra: &[&str]| {
        let mut args = vec!["optimize", "--config", cfg.to_str().unwrap()];
        args.extend_from_slice(extra);
        let out = tfd().args(&args).output().unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        read_records(out.stdout.as_slice()).unwrap().remove(0)
    };
    let from_file = run(&[]);
    assert_eq!(from_file.cost_kind, CostKind::C2);
    assert_eq!(from_file.seed, 17);
    assert_eq!(from_file.beta, 2.0);
    let overridden = run(&["--seed", "18", "--beta", "3"]);
    assert_eq!(overridden.seed, 18);
    assert_eq!(overridden.beta, 3.0);
    assert_eq!(overridden.cost_kind, CostKind::C2);
}

#[test]
fn sweep_then_plot() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let svg = dir.path().join("sweep.svg");
    let status = tfd()
        .args(["sweep-beta", "--cost", "c0", "--betas", "0.01,1,100", "--pop", "10", "--max-gen", "15"])
        .args(["--workers", "2", "--out", csv.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    let status = tfd()
        .args(["plot", "--input", csv.to_str().unwrap(), "--out", svg.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg"));
    assert_eq!(text.matches("class=\"point\"").count(), 6);

    let missing = tfd().args(["plot", "--input", "/nonexistent.csv", "--out", svg.to_str().unwrap()]).output().unwrap();
    assert_eq!(missing.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("/nonexistent.csv"));
}

#[test]
fn validate_reports_every_check() {
    let out = tfd()
        .args(["validate", "--betas", "0.001,1,1000", "--workers", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 12);
    assert!(text.contains("12 checks, 0 failed"));
}
