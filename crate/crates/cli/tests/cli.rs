use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn tbconc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tbconc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = tbconc(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn sweep_writes_one_row_per_filling() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep");
    ok(&[
        "sweep",
        "--lattice",
        "ring",
        "--size",
        "8",
        "--pop",
        "16",
        "--gens",
        "5",
        "--seed",
        "3",
        "--keep-runs",
        "--out",
        path(&out),
    ]);
    let csv = fs::read_to_string(out.join("sweep.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 1 + 9);
    assert_eq!(lines[0], tbconc::io::SWEEP_CSV_HEADER);
    let doc: tbconc::SweepResult =
        serde_json::from_str(&fs::read_to_string(out.join("sweep.json")).unwrap()).unwrap();
    assert_eq!(doc.rows.len(), 9);
    assert_eq!(fs::read_dir(out.join("runs")).unwrap().count(), 9);
    for row in &doc.rows {
        assert!(row.c_nn_optimized.unwrap() >= 0.0);
    }
}

#[test]
fn ordered_only_sweep_has_empty_ga_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    ok(&[
        "sweep",
        "--lattice",
        "square",
        "--size",
        "4x4",
        "--ordered-only",
        "--stride",
        "5",
        "--out",
        path(&out),
    ]);
    let rows = tbconc::io::read_sweep_csv(out.join("sweep.csv")).unwrap();
    let ns: Vec<usize> = rows.iter().map(|r| r.n).collect();
    assert_eq!(ns, vec![0, 5, 10, 15, 16]);
    assert!(rows.iter().all(|r| r.c_nn_optimized.is_none()));
}

#[test]
fn sweeps_are_byte_identical_across_runs_and_modes() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, serial: bool| {
        let out = dir.path().join(name);
        let mut args = vec![
            "sweep",
            "--lattice",
            "kagome",
            "--size",
            "2x2",
            "--filling",
            "3,4,6",
            "--pop",
            "20",
            "--gens",
            "8",
            "--seed",
            "11",
            "--out",
            path(&out),
        ];
        if serial {
            args.push("--serial");
        }
        ok(&args);
        (
            fs::read(out.join("sweep.csv")).unwrap(),
            fs::read(out.join("sweep.json")).unwrap(),
        )
    };
    let a = run("a", false);
    assert_eq!(a, run("b", false));
    assert_eq!(a, run("c", true));
}

#[test]
fn motif_reports_plaquette_value() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m");
    let stdout = ok(&[
        "motif",
        "--lattice",
        "square",
        "--motif",
        "plaquette",
        "--filling",
        "9",
        "--out",
        path(&out),
    ]);
    assert!(stdout.contains("c_nn 0.250000000000"), "{stdout}");
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("motif.json")).unwrap()).unwrap();
    assert_eq!(doc["kind"], "plaquette_tiling");
    assert_eq!(doc["chromosome"].as_array().unwrap().len(), 72);
    let svg = fs::read_to_string(out.join("motif.svg")).unwrap();
    assert_eq!(svg.matches("class=\"strong\"").count(), 36);
}

#[test]
fn infeasible_motif_fails_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let out = tbconc(&[
        "motif",
        "--lattice",
        "ring",
        "--size",
        "4",
        "--motif",
        "triangle",
        "--out",
        path(dir.path()),
    ]);
    assert!(!out.status.success());
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
}

#[test]
fn optimize_then_render_from_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("opt");
    ok(&[
        "optimize",
        "--lattice",
        "ring",
        "--size",
        "10",
        "--filling",
        "5",
        "--pop",
        "20",
        "--gens",
        "10",
        "--out",
        path(&out),
    ]);
    let record = tbconc::io::read_run_json(out.join("run.json")).unwrap();
    assert_eq!(record.history.len(), 11);
    let svg = dir.path().join("again.svg");
    ok(&[
        "render",
        "--lattice",
        "ring",
        "--size",
        "10",
        "--run",
        path(&out.join("run.json")),
        "--out",
        path(&svg),
    ]);
    assert_eq!(
        fs::read(&svg).unwrap(),
        fs::read(out.join("structure.svg")).unwrap()
    );
}

#[test]
fn render_rejects_wrong_length() {
    let dir = tempfile::tempdir().unwrap();
    let chrom = dir.path().join("c.json");
    fs::write(&chrom, "[-1.0, -2.0, -3.0]").unwrap();
    let out = tbconc(&[
        "render",
        "--lattice",
        "ring",
        "--size",
        "6",
        "--chromosome",
        path(&chrom),
        "--out",
        path(&dir.path().join("x.svg")),
    ]);
    assert!(!out.status.success());
    assert!(!dir.path().join("x.svg").exists());
}

#[test]
fn ssh_sweep_prints_known_values() {
    let dir = tempfile::tempdir().unwrap();
    let stdout = ok(&[
        "ssh-sweep",
        "--cells",
        "512",
        "--points",
        "11",
        "--out",
        path(dir.path()),
    ]);
    assert!(stdout.contains("gamma(0) = 0.3183"), "{stdout}");
    let rows = tbconc::io::read_ssh_csv(dir.path().join("ssh.csv")).unwrap();
    assert_eq!(rows.len(), 11);
    assert_eq!(rows[10].gamma_weak, 0.0);
}

#[test]
fn oracle_check_passes() {
    let stdout = ok(&[
        "oracle-check",
        "--trials",
        "5",
        "--seed",
        "2",
        "--max-sites",
        "7",
    ]);
    assert!(stdout.contains("all 5 cases within"), "{stdout}");
}

#[test]
fn combine_takes_the_pointwise_maximum() {
    let dir = tempfile::tempdir().unwrap();
    for (name, seed) in [("a", "1"), ("b", "2")] {
        ok(&[
            "sweep",
            "--lattice",
            "ring",
            "--size",
            "6",
            "--pop",
            "10",
            "--gens",
            "4",
            "--seed",
            seed,
            "--out",
            path(&dir.path().join(name)),
        ]);
    }
    let out = dir.path().join("both");
    ok(&[
        "combine",
        path(&dir.path().join("a/sweep.json")),
        path(&dir.path().join("b/sweep.json")),
        "--out",
        path(&out),
    ]);
    let read = |p: &Path| tbconc::io::read_sweep_csv(p).unwrap();
    let (a, b, c) = (
        read(&dir.path().join("a/sweep.csv")),
        read(&dir.path().join("b/sweep.csv")),
        read(&out.join("sweep.csv")),
    );
    for k in 0..c.len() {
        let best = a[k]
            .c_nn_optimized
            .unwrap()
            .max(b[k].c_nn_optimized.unwrap());
        assert_eq!(c[k].c_nn_optimized, Some(best));
    }
}

#[test]
fn bad_arguments_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let d = path(dir.path());
    for args in [
        vec![
            "optimize",
            "--lattice",
            "ring",
            "--filling",
            "3",
            "--pop",
            "1",
            "--out",
            d,
        ],
        vec![
            "optimize",
            "--lattice",
            "ring",
            "--filling",
            "40",
            "--out",
            d,
        ],
        vec!["sweep", "--lattice", "nowhere.json", "--out", d],
        vec![
            "optimize",
            "--lattice",
            "ring",
            "--filling",
            "3",
            "--crossover",
            "1.5",
            "--out",
            d,
        ],
        vec!["ssh-sweep", "--points", "1", "--out", d],
    ] {
        let out = tbconc(&args);
        assert!(!out.status.success(), "{args:?} should fail");
    }
}

#[test]
fn config_file_and_flags_combine() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("ga.json");
    fs::write(
        &cfg,
        r#"{"population_size": 12, "generations": 3, "rng_seed": 9}"#,
    )
    .unwrap();
    let out = dir.path().join("r");
    ok(&[
        "optimize",
        "--lattice",
        "ring",
        "--size",
        "6",
        "--filling",
        "3",
        "--config",
        path(&cfg),
        "--gens",
        "2",
        "--out",
        path(&out),
    ]);
    let record = tbconc::io::read_run_json(out.join("run.json")).unwrap();
    assert_eq!(record.config.population_size, 12);
    assert_eq!(record.config.generations, 2);
    assert_eq!(record.config.rng_seed, 9);
    fs::write(&cfg, r#"{"population": 12}"#).unwrap();
    let bad = tbconc(&[
        "optimize",
        "--lattice",
        "ring",
        "--filling",
        "3",
        "--config",
        path(&cfg),
        "--out",
        path(&out),
    ]);
    assert!(!bad.status.success());
}
