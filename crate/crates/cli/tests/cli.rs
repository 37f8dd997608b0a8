use std::process::{Command, Output};

use serde_json::Value;
use torus_ech::complex::{self, ComplexSpec};
use torus_ech::lattice::NSeq;
use torus_ech::spectral;
use torus_ech::KnotParams;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torus-ech"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut v = args.to_vec();
    v.extend(["--format", "json"]);
    serde_json::from_str(&stdout(&v)).unwrap()
}

#[test]
fn generators_csv_matches_library() {
    let out = stdout(&[
        "generators",
        "--p",
        "3",
        "--q",
        "4",
        "--max-degree",
        "20",
        "--format",
        "csv",
    ]);
    let kp = KnotParams::new(3, 4).unwrap();
    let mut gens = complex::enumerate(&ComplexSpec::new(kp, 20).unwrap());
    gens.sort_by(|a, b| (a.degree, a.index, &a.name).cmp(&(b.degree, b.index, &b.name)));
    let mut want = String::from("degree,generator,index\n");
    for g in gens {
        want.push_str(&format!("{},{},{}\n", g.degree, g.name, g.index));
    }
    assert_eq!(out, want);
}

#[test]
fn output_is_deterministic() {
    let args = [
        "spectrum", "--p", "3", "--q", "5", "--k-max", "300", "--format", "json",
    ];
    assert_eq!(stdout(&args), stdout(&args));
    let args = [
        "homology",
        "--p",
        "2",
        "--q",
        "5",
        "--max-index",
        "30",
        "--check-d-squared",
    ];
    assert_eq!(stdout(&args), stdout(&args));
}

#[test]
fn json_carries_metadata() {
    let v = json(&["nseq", "--p", "2", "--q", "3", "--k-max", "5"]);
    let meta = &v["metadata"];
    assert_eq!(meta["p"], 2);
    assert_eq!(meta["q"], 3);
    assert_eq!(meta["deltaMode"], "limit");
    assert_eq!(meta["cutoffs"]["kMax"], 5);
    assert_eq!(meta["toolVersion"], env!("CARGO_PKG_VERSION"));
    let seq = NSeq::with_len(KnotParams::new(2, 3).unwrap(), 6);
    let got: Vec<i64> = v["data"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["N_k"].as_i64().unwrap())
        .collect();
    assert_eq!(got, seq.values());
}

#[test]
fn nseq_csv_columns() {
    let out = stdout(&[
        "nseq", "--p", "3", "--q", "4", "--k-max", "3", "--format", "csv",
    ]);
    assert_eq!(out, "k,N_k,repeats\n0,0,1\n1,3,1\n2,4,1\n3,6,1\n");
}

#[test]
fn spectrum_at_k_zero() {
    let out = stdout(&["spectrum", "--p", "2", "--q", "3", "--k-max", "0", "--csv"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], "k,c_k,c_k_link,e_k");
    assert!(lines[1].starts_with("0,0,0,"));
}

#[test]
fn spectrum_renders_exact_values() {
    let out = stdout(&["spectrum", "--p", "3", "--q", "4", "--k-max", "10", "--csv"]);
    let last = out.lines().last().unwrap();
    assert!(last.starts_with("10,1,12+1*d,"), "{last}");
    let out = stdout(&["spectrum", "--p", "3", "--q", "4", "--k-max", "1", "--csv"]);
    assert!(out.lines().last().unwrap().starts_with("1,1/4,3,"));
}

#[test]
fn obstruct_reports_first_failure() {
    assert_eq!(
        stdout(&["obstruct", "--from", "2,7", "--to", "3,4", "--k-max", "100"]).trim(),
        "obstructed at k=1"
    );
    assert_eq!(
        stdout(&["obstruct", "--from", "3,4", "--to", "2,3", "--k-max", "500"]).trim(),
        "consistent through k=500"
    );
    let v = json(&["obstruct", "--from", "2,3", "--to", "3,4", "--k-max", "5"]);
    assert_eq!(v["data"]["status"], "not_applicable");
}

#[test]
fn validation_errors_exit_nonzero() {
    for args in [
        &["generators", "--p", "2", "--q", "4", "--max-degree", "10"][..],
        &["nseq", "--p", "3"][..],
        &["obstruct", "--from", "2;7", "--to", "3,4", "--k-max", "1"][..],
        &[
            "bounds", "calabi", "--p", "1", "--q", "2", "--d", "0", "--calabi", "1/100",
        ][..],
        &[
            "homology",
            "--p",
            "3",
            "--q",
            "4",
            "--max-index",
            "20",
            "--max-degree",
            "11",
        ][..],
    ] {
        let out = run(args);
        assert!(!out.status.success(), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    let out = run(&[
        "homology",
        "--p",
        "3",
        "--q",
        "4",
        "--max-index",
        "20",
        "--max-degree",
        "11",
    ]);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("11") && err.contains("12"), "{err}");
}

#[test]
fn homology_checks_d_squared() {
    let out = stdout(&[
        "homology",
        "--p",
        "3",
        "--q",
        "4",
        "--max-index",
        "6",
        "--check-d-squared",
    ]);
    assert!(out.ends_with("d^2 = 0: true\n"));
    let v = json(&[
        "homology",
        "--p",
        "3",
        "--q",
        "4",
        "--max-index",
        "6",
        "--check-d-squared",
    ]);
    assert_eq!(v["data"]["dSquaredZero"], true);
    let ranks: Vec<i64> = v["data"]["ranks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["rank"].as_i64().unwrap())
        .collect();
    assert_eq!(ranks, [1, 0, 1, 0, 1, 0, 1]);
}

#[test]
fn knot_filtered_threshold() {
    let below = json(&[
        "knot-filtered",
        "--p",
        "3",
        "--q",
        "4",
        "--max-index",
        "20",
        "--level",
        "12",
    ]);
    let at = json(&[
        "knot-filtered",
        "--p",
        "3",
        "--q",
        "4",
        "--max-index",
        "20",
        "--level",
        "12+d",
    ]);
    assert_eq!(below["data"][20]["rank"], 0);
    assert_eq!(at["data"][20]["rank"], 1);
}

#[test]
fn cz_table_layout() {
    let out = stdout(&[
        "cz-table",
        "--p",
        "3",
        "--q",
        "4",
        "--max-action",
        "1/2",
        "--format",
        "csv",
    ]);
    assert_eq!(out, "orbit,action,cz_orb\nq,1/4,3\np,1/3,5\nq^2,1/2,7\n");
}

#[test]
fn bounds_match_library() {
    let v = json(&[
        "bounds",
        "action-linking",
        "--p",
        "2",
        "--q",
        "3",
        "--delta",
        "1/10",
        "--volume",
        "1/10",
    ]);
    assert_eq!(v["data"]["hypothesisMet"], true);
    assert_eq!(v["data"]["threshold"], "600/3721");
    let lib = spectral::action_linking_bound(
        &KnotParams::new(2, 3).unwrap(),
        &"1/10".parse().unwrap(),
        &"1/10".parse().unwrap(),
        &"1".parse().unwrap(),
    )
    .unwrap();
    assert_eq!(v["data"]["bound"].as_f64(), lib.bound);
    let v = json(&[
        "bounds", "calabi", "--p", "2", "--q", "3", "--d", "-1/20", "--calabi", "1/20",
    ]);
    assert_eq!(v["data"]["threshold"], "49/600");
    assert!((v["data"]["bound"].as_f64().unwrap() - (1.0f64 / 120.0).sqrt()).abs() < 1e-12);
}

#[test]
fn toric_path_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("hpq.svg");
    let out = stdout(&[
        "toric",
        "path",
        "--p",
        "3",
        "--q",
        "4",
        "--current",
        "h p q",
        "--svg",
        svg.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert_eq!(out, "x,y\n0,4\n1,4\n5,1\n6,0\n");
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
    let out = stdout(&[
        "toric",
        "round",
        "--p",
        "3",
        "--q",
        "4",
        "--current",
        "hpq",
        "--format",
        "csv",
    ]);
    assert_eq!(
        out,
        "rounding,generator,index\nlambda_q,p q^5,40\nlambda_p,p^4 q,40\n"
    );
}

#[test]
fn weyl_plot_data_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let plot = dir.path().join("weyl.csv");
    let summary = dir.path().join("summary.json");
    let out = run(&[
        "weyl",
        "--p",
        "2",
        "--q",
        "3",
        "--k-min",
        "100",
        "--k-max",
        "400",
        "--plot-data",
        plot.to_str().unwrap(),
        "--format",
        "json",
        "--output",
        summary.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let rows = std::fs::read_to_string(&plot).unwrap();
    assert_eq!(rows.lines().count(), 302);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&summary).unwrap()).unwrap();
    assert_eq!(v["data"]["envelope"], "1");
}

#[test]
fn thread_cap_does_not_change_output() {
    let args = ["homology", "--p", "3", "--q", "7", "--max-index", "40"];
    let one = Command::new(env!("CARGO_BIN_EXE_torus-ech"))
        .args(args)
        .env("ECH_THREADS", "1")
        .output()
        .unwrap();
    assert!(one.status.success());
    assert_eq!(String::from_utf8(one.stdout).unwrap(), stdout(&args));
}
