use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const CUBE: &str = r#"{"dim":3,"vertices":[[0,0,0],[1,0,0],[0,1,0],[0,0,1],[1,1,0],[1,0,1],[0,1,1],[1,1,1]]}"#;
const BALL: &str = r#"{"dim":3,"analytic":{"kind":"ball","center":[0,0,0],"semi_axes":[1,1,1]}}"#;

fn capflow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_capflow")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn converge_cube_corner_to_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cube = write(dir.path(), "cube.json", CUBE);
    let report = dir.path().join("report.csv");
    let o = capflow(&[
        "converge",
        "--body",
        cube.to_str().unwrap(),
        "--point",
        "1,1,1",
        "--dir",
        "auto",
        "--limit",
        "cone",
        "--schedule",
        "geo:0.2,0.5,15",
        "--out",
        report.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(&report).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,mass,resultant_error,distance"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 15);
    assert!(rows.iter().all(|r| r[3] <= 1e-9));
    assert!(text.ends_with('\n') && !text.contains('\r'));
}

#[test]
fn verify_identities_suite() {
    let o = capflow(&["verify", "--suite", "identities", "--seed", "7", "--n", "200"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("proposition,seed,lhs,rhs,holds"));
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 200);
    assert!(rows.iter().all(|r| r.ends_with(",true")));
    assert!(stderr(&o).contains("identities.resultant: 200/200"));
}

#[test]
fn cut_ball_cap_mass() {
    let dir = tempfile::tempdir().unwrap();
    let ball = write(dir.path(), "ball.json", BALL);
    let o = capflow(&[
        "cut",
        "--body",
        ball.to_str().unwrap(),
        "--point",
        "0,0,1",
        "--dir",
        "0,0,1",
        "--t",
        "0.1",
        "--out",
        "json",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let mass = v["mass"].as_f64().unwrap();
    assert!((mass - 2.0 / 1.9).abs() < 1e-12, "{mass}");
}

#[test]
fn output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cube = write(dir.path(), "cube.json", CUBE);
    let args = ["converge", "--body", cube.to_str().unwrap(), "--point", "1,1,1", "--out", "json"];
    let a = capflow(&args);
    let b = capflow(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v = ["verify", "--suite", "props", "--seed", "3", "--n", "5"];
    assert_eq!(capflow(&v).stdout, capflow(&v).stdout);
}

#[test]
fn cone_reports_limit_at_conical_point() {
    let dir = tempfile::tempdir().unwrap();
    let cube = write(dir.path(), "cube.json", CUBE);
    let o = capflow(&["cone", "--body", cube.to_str().unwrap(), "--point", "1,1,1", "--out", "csv"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("dir_1,dir_2,dir_3,w"));
    assert_eq!(text.lines().count(), 4);
    for l in text.lines().skip(1) {
        let w: f64 = l.rsplit(',').next().unwrap().parse().unwrap();
        assert!((w - 1.0 / 3f64.sqrt()).abs() < 1e-9);
    }
}

#[test]
fn newton_flat_disk() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "flat.json",
        r#"{"domain":{"disk":{"center":[0,0],"radius":1}},"kind":"flat","bound":1,"params":{"c":0}}"#,
    );
    let o = capflow(&["newton", "--function", f.to_str().unwrap(), "--out", "csv"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let r: f64 = text.lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!((r - std::f64::consts::PI).abs() < 1e-12);
}

#[test]
fn oracle_boundary_area_of_cube() {
    let dir = tempfile::tempdir().unwrap();
    let cube = write(dir.path(), "cube.json", CUBE);
    let o = capflow(&["oracle", "--body", cube.to_str().unwrap(), "--n", "40000", "--seed", "2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let est = &v["boundary_area"];
    let (x, s) = (est["value"].as_f64().unwrap(), est["std_error"].as_f64().unwrap());
    assert!((x - 6.0).abs() < 4.0 * s);
}

#[test]
fn errors_map_to_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cube = write(dir.path(), "cube.json", CUBE);
    let cube = cube.to_str().unwrap();
    let cases: [(&[&str], i32, &str); 7] = [
        (&["cut", "--body", "/nonexistent/body.json", "--point", "0,0,1", "--t", "0.1"], 2, "FileNotFound"),
        (&["converge", "--body", cube, "--point", "1,1,1", "--schedule", "lin:1"], 1, "ParseError"),
        (&["cone", "--body", cube, "--point", "1,0.5,1", "--dir", "auto", "--out", "csv"], 0, ""),
        (&["cut", "--body", cube, "--point", "1,0.5,1", "--t", "0.1"], 16, "RidgePoint"),
        (&["cut", "--body", cube, "--point", "0,0,1", "--dir", "0,0,1", "--t", "5"], 11, "EmptyCap"),
        (&["cut", "--body", cube, "--point", "0.5,0.5,0.5", "--dir", "0,0,1", "--t", "0.1"], 14, "PointNotOnBoundary"),
        (&["cut", "--body", cube, "--point", "1,1", "--dir", "0,0,1", "--t", "0.1"], 18, "DimensionMismatch"),
    ];
    for (args, code, name) in cases {
        let o = capflow(args);
        assert_eq!(o.status.code(), Some(code), "{args:?}: {}", stderr(&o));
        assert!(stderr(&o).starts_with(name), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn usage_errors_exit_one() {
    let o = capflow(&["cut", "--bogus"]);
    assert_eq!(o.status.code(), Some(1));
    let o = capflow(&["verify", "--suite", "nope"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("ParseError"));
    assert_eq!(capflow(&["--help"]).status.code(), Some(0));
}
