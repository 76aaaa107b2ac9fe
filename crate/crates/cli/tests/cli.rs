//! End-to-end tests of the command-line interface: exit-code contract,
//! byte-identical reruns (the CLI half of acceptance criterion 12), and the
//! partner -> verify round trip.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_mannheim")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("binary runs")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

struct TempDir(PathBuf);

impl TempDir {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("mannheim-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        TempDir(dir)
    }

    fn file(&self, name: &str, contents: &str) -> String {
        let p = self.0.join(name);
        std::fs::write(&p, contents).unwrap();
        p.to_string_lossy().into_owned()
    }

    fn path(&self, name: &str) -> String {
        self.0.join(name).to_string_lossy().into_owned()
    }
}

impl Drop for TempDir {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

const HELIX: &str =
    r#"{ "family": "timelike_helix", "params": {"a": 1.0, "b": 1.5}, "domain": [0.0, 5.0] }"#;
const SEED1: &str =
    r#"{ "family": "pair_seed_case1", "params": {"k": 1.0, "lam": -0.4, "c0": 0.5}, "domain": [0.0, 1.0] }"#;
const LINE: &str = r#"{ "family": "line", "params": {"px": 0.0, "py": 0.0, "pz": 0.0, "dx": 1.0, "dy": 0.0, "dz": 0.2}, "domain": [0.0, 2.0] }"#;
const PLANAR: &str =
    r#"{ "family": "planar_spacelike", "params": {"a": 0.8, "b": 0.2}, "domain": [0.0, 2.0] }"#;
const SP_SP_HELIX: &str = r#"{ "family": "spacelike_helix_spacelike_normal", "params": {"a": 1.0, "b": 1.5}, "domain": [0.0, 3.0] }"#;

#[test]
fn frenet_exit_codes() {
    let dir = TempDir::new("frenet");
    let helix = dir.file("helix.json", HELIX);
    let out = run(&["frenet", "--spec", &helix, "--samples", "20"]);
    assert_eq!(exit_code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    // line has no frame: geometric error
    let line = dir.file("line.json", LINE);
    let out = run(&["frenet", "--spec", &line, "--samples", "20"]);
    assert_eq!(exit_code(&out), 3);

    // malformed JSON: config error
    let bad = dir.file("bad.json", "{ not json");
    let out = run(&["frenet", "--spec", &bad]);
    assert_eq!(exit_code(&out), 2);

    // config invariant: too few samples
    let out = run(&["frenet", "--spec", &helix, "--samples", "3"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn frenet_works_under_mpp_signature() {
    let dir = TempDir::new("mpp");
    let helix = dir.file("helix.json", HELIX);
    let out = run(&[
        "frenet",
        "--spec",
        &helix,
        "--samples",
        "20",
        "--signature",
        "mpp",
    ]);
    assert_eq!(exit_code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn partner_exit_codes() {
    let dir = TempDir::new("partner");
    let seed = dir.file("seed.json", SEED1);

    // admissible seed at its design offset: all checks pass
    let out = run(&["partner", "--spec", &seed, "--lambda=-0.4", "--samples", "50"]);
    assert_eq!(exit_code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    // a raw helix is constructible but fails the pair checks
    let helix = dir.file("helix.json", HELIX);
    let out = run(&["partner", "--spec", &helix, "--lambda", "0.3", "--samples", "50"]);
    assert_eq!(exit_code(&out), 1);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("offset-admissibility"), "finding missing:\n{text}");

    // planar curve: zero torsion is a geometric error
    let planar = dir.file("planar.json", PLANAR);
    let out = run(&["partner", "--spec", &planar, "--lambda", "0.3"]);
    assert_eq!(exit_code(&out), 3);

    // offset crossing the null wall: geometric error
    let seed4 = dir.file(
        "seed4.json",
        r#"{ "family": "pair_seed_case4", "params": {"k": 1.0, "lam": 0.35, "c0": 1.7}, "domain": [0.0, 0.9] }"#,
    );
    let out = run(&["partner", "--spec", &seed4, "--lambda", "0.45"]);
    assert_eq!(exit_code(&out), 3);

    // lambda = 0 violates the config invariant
    let out = run(&["partner", "--spec", &seed, "--lambda", "0.0"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn verify_round_trip_and_negative_controls() {
    let dir = TempDir::new("verify");
    let seed = dir.file("seed.json", SEED1);
    let g_path = dir.path("g.json");
    let corr_path = dir.path("corr.json");
    let out = run(&[
        "partner",
        "--spec",
        &seed,
        "--lambda=-0.4",
        "--samples",
        "50",
        "--emit-curve",
        &g_path,
        "--emit-correspondence",
        &corr_path,
    ]);
    assert_eq!(exit_code(&out), 0);

    // the emitted pair verifies with the same verdict set
    let out = run(&[
        "verify",
        "--spec",
        &g_path,
        "--partner-spec",
        &seed,
        "--correspondence",
        &corr_path,
        "--samples",
        "50",
    ]);
    assert_eq!(exit_code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));

    // two unrelated curves fail the checks
    let helix = dir.file("helix.json", HELIX);
    let out = run(&[
        "verify",
        "--spec",
        &g_path,
        "--partner-spec",
        &helix,
        "--samples",
        "50",
    ]);
    assert_eq!(exit_code(&out), 1);

    // both spacelike with spacelike normals: unlisted configuration
    let sp = dir.file("sp.json", SP_SP_HELIX);
    let out = run(&[
        "verify",
        "--spec",
        &sp,
        "--partner-spec",
        &sp,
        "--samples",
        "50",
    ]);
    assert_eq!(exit_code(&out), 3);
}

#[test]
fn wm_check_flat_spot_and_reversal() {
    let dir = TempDir::new("wm");
    let seed = dir.file("seed.json", SEED1);
    let g_path = dir.path("g.json");
    let corr_path = dir.path("corr.json");
    run(&[
        "partner",
        "--spec",
        &seed,
        "--lambda=-0.4",
        "--emit-curve",
        &g_path,
        "--emit-correspondence",
        &corr_path,
    ]);
    let out = run(&[
        "wm-check",
        "--spec",
        &g_path,
        "--partner-spec",
        &seed,
        "--correspondence",
        &corr_path,
        "--samples",
        "100",
    ]);
    assert_eq!(exit_code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));

    // a correspondence with a flat interval is flagged (exit 1)
    let helix = dir.file("helix.json", HELIX);
    let mut rows = Vec::new();
    let n = 400;
    for i in 0..=n {
        let t = 5.0 * i as f64 / n as f64;
        // monotone, flat on [2.0, 2.5]
        let tt = if t < 2.0 {
            t
        } else if t < 2.5 {
            2.0
        } else {
            t - 0.5
        };
        rows.push(format!("[{t}, {tt}]"));
    }
    let corr2 = dir.file(
        "flat.json",
        &format!("{{ \"correspondence\": [{}] }}", rows.join(",")),
    );
    let out = run(&[
        "wm-check",
        "--spec",
        &helix,
        "--partner-spec",
        &helix,
        "--correspondence",
        &corr2,
        "--samples",
        "200",
    ]);
    assert_eq!(exit_code(&out), 1, "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("z_empty_interior=false"), "{text}");

    // reversed correspondence: geometric error
    let mut rows = Vec::new();
    for i in 0..=50 {
        let t = 5.0 * i as f64 / 50.0;
        rows.push(format!("[{t}, {}]", 5.0 - t));
    }
    let rev = dir.file(
        "rev.json",
        &format!("{{ \"correspondence\": [{}] }}", rows.join(",")),
    );
    let out = run(&[
        "wm-check",
        "--spec",
        &helix,
        "--partner-spec",
        &helix,
        "--correspondence",
        &rev,
    ]);
    assert_eq!(exit_code(&out), 3);
}

#[test]
fn sweep_pole_and_empty_range() {
    let dir = TempDir::new("sweep");
    let helix = dir.file(
        "helix.json",
        r#"{ "family": "timelike_helix", "params": {"a": 1.0, "b": 1.4142135623730951}, "domain": [0.0, 6.0] }"#,
    );
    let out_path = dir.path("sweep.csv");
    let out = run(&[
        "sweep",
        "--spec",
        &helix,
        "--lambda-min",
        "0.9",
        "--lambda-max",
        "1.1",
        "--lambda-steps",
        "5",
        "--case",
        "1",
        "--out",
        &out_path,
    ]);
    // the helix is not offset-admissible, so identity residuals flag it
    assert_eq!(exit_code(&out), 1);
    let text = std::fs::read_to_string(&out_path).unwrap();
    let pole_row: Vec<&str> = text
        .lines()
        .find(|l| l.starts_with("1.0000000000000000e0,"))
        .unwrap()
        .split(',')
        .collect();
    assert_eq!(pole_row[2], "1", "pole row must be flagged degenerate");

    // empty range: config error
    let out = run(&[
        "sweep",
        "--spec",
        &helix,
        "--lambda-min",
        "1.0",
        "--lambda-max",
        "0.5",
        "--lambda-steps",
        "5",
    ]);
    assert_eq!(exit_code(&out), 2);

    // a single-offset sweep of an admissible seed agrees with the partner
    // command: constructible, no degeneracy, identities within tolerance
    let seed = dir.file("seed.json", SEED1);
    let out = run(&[
        "sweep",
        "--spec",
        &seed,
        "--lambda-min=-0.4",
        "--lambda-max=-0.3",
        "--lambda-steps",
        "1",
    ]);
    assert_eq!(exit_code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    let row: Vec<&str> = text.lines().last().unwrap().split(',').collect();
    assert_eq!(row[2], "0", "no degeneracy flag");
    assert_eq!(row[4], "1", "constructible");
    let max_id: f64 = row[6].parse().unwrap();
    assert!(max_id < 1e-6, "identity residual {max_id}");
}

/// Acceptance criterion 12 (CLI half): identical invocations produce
/// byte-identical data output for every command.
#[test]
fn criterion_12_determinism_cli() {
    let dir = TempDir::new("det");
    let seed = dir.file("seed.json", SEED1);
    let helix = dir.file("helix.json", HELIX);
    let g_path = dir.path("g.json");
    let corr_path = dir.path("corr.json");
    run(&[
        "partner", "--spec", &seed, "--lambda=-0.4",
        "--emit-curve", &g_path, "--emit-correspondence", &corr_path,
    ]);

    let commands: Vec<Vec<String>> = vec![
        vec!["frenet".into(), "--spec".into(), helix.clone(), "--samples".into(), "40".into()],
        vec!["partner".into(), "--spec".into(), seed.clone(), "--lambda=-0.4".into(), "--samples".into(), "40".into()],
        vec!["partner".into(), "--spec".into(), seed.clone(), "--lambda=-0.4".into(), "--samples".into(), "40".into(), "--format".into(), "json".into()],
        vec![
            "verify".into(), "--spec".into(), g_path.clone(), "--partner-spec".into(), seed.clone(),
            "--correspondence".into(), corr_path.clone(), "--samples".into(), "40".into(),
        ],
        vec![
            "wm-check".into(), "--spec".into(), g_path.clone(), "--partner-spec".into(), seed.clone(),
            "--correspondence".into(), corr_path.clone(), "--samples".into(), "40".into(),
        ],
        vec![
            "sweep".into(), "--spec".into(), seed.clone(), "--lambda-min=-0.5".into(),
            "--lambda-max=-0.3".into(), "--lambda-steps".into(), "3".into(),
        ],
    ];
    for args in &commands {
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        let first = run(&argv);
        let second = run(&argv);
        assert_eq!(
            first.stdout, second.stdout,
            "output of {argv:?} differs between runs"
        );
        assert_eq!(first.status.code(), second.status.code());
    }
    println!(
        "criterion 12: PASS — {} commands produce byte-identical output across reruns",
        commands.len()
    );
}

/// Emitted files are themselves stable across reruns.
#[test]
fn emitted_artifacts_are_deterministic() {
    let dir = TempDir::new("emit");
    let seed = dir.file("seed.json", SEED1);
    let (g1, c1) = (dir.path("g1.json"), dir.path("c1.json"));
    let (g2, c2) = (dir.path("g2.json"), dir.path("c2.json"));
    run(&["partner", "--spec", &seed, "--lambda=-0.4", "--emit-curve", &g1, "--emit-correspondence", &c1]);
    run(&["partner", "--spec", &seed, "--lambda=-0.4", "--emit-curve", &g2, "--emit-correspondence", &c2]);
    assert_eq!(
        std::fs::read(Path::new(&g1)).unwrap(),
        std::fs::read(Path::new(&g2)).unwrap()
    );
    assert_eq!(
        std::fs::read(Path::new(&c1)).unwrap(),
        std::fs::read(Path::new(&c2)).unwrap()
    );
}
