use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spincouple"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    let mut reader = csv::Reader::from_path(path).expect("csv exists");
    reader
        .records()
        .map(|r| r.unwrap().iter().map(str::to_string).collect())
        .collect()
}

fn column(path: &Path, name: &str) -> Vec<String> {
    let mut reader = csv::Reader::from_path(path).expect("csv exists");
    let k = reader
        .headers()
        .unwrap()
        .iter()
        .position(|h| h == name)
        .expect("column exists");
    reader
        .records()
        .map(|r| r.unwrap()[k].to_string())
        .collect()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn two_electron_basis() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["couple", "e,e"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows = csv_rows(&dir.path().join("basis.csv"));
    assert_eq!(rows.len(), 4);
    assert!(rows
        .iter()
        .any(|r| r[1] == "0" && r[3] == "+1/sqrt(2)|1/2 -1/2> -1/sqrt(2)|-1/2 1/2>"));
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["passed"], true);
}

#[test]
fn two_photon_basis_has_chi20() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["couple", "p,p", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows = csv_rows(&dir.path().join("basis.csv"));
    assert_eq!(rows.len(), 9);
    let chi20 = rows
        .iter()
        .find(|r| r[1] == "2" && r[2] == "0")
        .expect("S=2 M=0 row");
    assert_eq!(
        chi20[3],
        "+1/sqrt(6)|1 -1> +2/sqrt(6)|0 0> +1/sqrt(6)|-1 1>"
    );
    assert!(!dir.path().join("basis.json").exists());
}

#[test]
fn three_photon_errata_names_the_missing_state() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["couple", "p,p,p"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = fs::read_to_string(dir.path().join("errata.txt")).unwrap();
    assert!(text.contains("missing listing: [S'=1 S=2 M=2]"));
    assert!(text.contains("eq67 [S'=2 S=1 M=0] amplitude-mismatch"));
    assert!(text.contains("norm^2: 7/10"));
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("errata.json")).unwrap()).unwrap();
    assert_eq!(json["missing"].as_array().unwrap().len(), 1);
    assert!(!json["missing"][0]["terms"].as_array().unwrap().is_empty());
}

#[test]
fn unsupported_system_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["couple", "e,e,e,e"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("two or three"));
    assert_eq!(run(dir.path(), &["couple", "q,q"]).status.code(), Some(2));
}

#[test]
fn classify_listings() {
    let dir = tempfile::tempdir().unwrap();
    let verdicts = |id: &str| {
        let out = dir.path().join(id);
        let o = run(&out, &["classify", "--listing", id]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        csv_rows(&out.join("report.csv"))
    };
    let eq14 = verdicts("eq14");
    assert!(eq14
        .iter()
        .filter(|r| r[0] == "particle")
        .all(|r| r[5] == "entangled"));
    let eq54 = verdicts("eq54");
    assert!(eq54
        .iter()
        .filter(|r| r[0] == "particle")
        .all(|r| r[5] == "separable"));
    let eq79 = verdicts("eq79");
    let pair12 = eq79
        .iter()
        .find(|r| r[0] == "pair" && r[1] == "1 2")
        .unwrap();
    assert_eq!(pair12[5], "entangled");
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("eq79/report.json")).unwrap())
            .unwrap();
    assert_eq!(json["report"]["genuinely_entangled"], false);
}

#[test]
fn zero_amplitude_file_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("zero.txt");
    fs::write(&file, "0\n0\n0\n0\n").unwrap();
    let o = run(
        &dir.path().join("out"),
        &[
            "classify",
            "--amplitudes",
            file.to_str().unwrap(),
            "--system",
            "e,e",
        ],
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("zero vector"));
}

#[test]
fn amplitude_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bell.txt");
    fs::write(&file, "# (|1/2 -1/2> + |-1/2 1/2>)\n0\n1\n1\n0\n").unwrap();
    let out = dir.path().join("out");
    let o = run(
        &out,
        &[
            "classify",
            "--amplitudes",
            file.to_str().unwrap(),
            "--system",
            "e,e",
        ],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let entropy = column(&out.join("report.csv"), "entropy");
    let s: f64 = entropy[0].parse().unwrap();
    assert!((s - std::f64::consts::LN_2).abs() < 1e-12, "{s}");
}

#[test]
fn jc_without_coupling_never_transfers() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["jc", "--g", "0", "--t-max", "50"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let path = dir.path().join("jc_trajectory.csv");
    for col in ["p2", "entropy"] {
        for v in column(&path, col) {
            assert_eq!(v.parse::<f64>().unwrap(), 0.0);
        }
    }
}

#[test]
fn jc_on_resonance_reaches_full_transfer() {
    let dir = tempfile::tempdir().unwrap();
    // delta = omega0 - 2 omega = 0; omega1 = 2 g sqrt(2) for n = 0.
    let g = 0.5;
    let period = 2.0 * std::f64::consts::PI / (2.0 * g * 2f64.sqrt());
    let t_max = format!("{period}");
    let o = run(
        dir.path(),
        &[
            "jc",
            "--omega",
            "1",
            "--omega0",
            "2",
            "--g",
            "0.5",
            "--t-max",
            &t_max,
            "--samples",
            "4001",
        ],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let peak = column(&dir.path().join("jc_trajectory.csv"), "p2")
        .iter()
        .map(|v| v.parse::<f64>().unwrap())
        .fold(0.0, f64::max);
    assert!((peak - 1.0).abs() < 1e-8, "{peak}");
}

#[test]
fn jc_rejects_bad_parameters() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        run(dir.path(), &["jc", "--samples", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(dir.path(), &["jc", "--t-max", "-1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(dir.path(), &["jc", "--sweep-points", "0"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn spatial_coincident_packets() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["spatial", "--sigma", "1", "--d", "0,2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows = csv_rows(&dir.path().join("spatial_scan.csv"));
    assert_eq!(rows.len(), 2);
    assert!((rows[0][1].parse::<f64>().unwrap() - 1.0).abs() < 1e-12);
    // Singlet spin with coincident packets: only the spin part is entangled.
    let s0: f64 = rows[0][2].parse().unwrap();
    assert!((s0 - std::f64::consts::LN_2).abs() < 1e-10);
}

#[test]
fn spatial_pairing_errors() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &[
            "spatial",
            "--sigma",
            "1",
            "--d",
            "1",
            "--symmetry",
            "antisymmetric",
            "--listing",
            "eq15",
        ],
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("space state x spin state"));

    let o = run(
        dir.path(),
        &[
            "spatial",
            "--sigma",
            "1",
            "--d",
            "0,1",
            "--symmetry",
            "antisymmetric",
            "--listing",
            "eq14",
        ],
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("d = 0"));

    let o = run(dir.path(), &["spatial", "--sigma", "1", "--d", "2,1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn cg_table_orthonormal() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["cg-table", "--j1", "1", "--j2", "1/2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows = csv_rows(&dir.path().join("cg_table.csv"));
    assert!(rows
        .iter()
        .any(|r| r[..6] == ["1", "0", "1/2", "1/2", "3/2", "1/2"] && r[6] == "+2/sqrt(6)"));
    assert_eq!(
        run(dir.path(), &["cg-table", "--j1", "7", "--j2", "1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn identical_flags_give_identical_bytes() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [a.path(), b.path()] {
        let o = run(dir, &["jc", "--sweep-points", "8", "--seed", "3"]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    for name in ["jc_sweep.csv", "jc_sweep.json", "manifest.json"] {
        assert_eq!(
            fs::read(a.path().join(name)).unwrap(),
            fs::read(b.path().join(name)).unwrap(),
            "{name}"
        );
    }
}
