use std::path::PathBuf;
use std::process::{Command, Output};

use permod::zpoly::ZPoly;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn permod(args: &[&str], file: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_permod"))
        .args(args)
        .arg(data(file))
        .output()
        .expect("spawn permod")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn ok(args: &[&str], file: &str) -> Vec<String> {
    let o = permod(args, file);
    assert!(o.status.success(), "{args:?} {file}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o).lines().map(str::to_string).collect()
}

#[test]
fn permanent() {
    assert_eq!(ok(&["perm", "--k", "2"], "example1.mat"), ["2x^5+2x^4+2x^3"]);
    assert_eq!(ok(&["perm", "--k", "1"], "example2.mat"), ["x^5+x^4+x^2+x"]);
    assert_eq!(ok(&["perm"], "example2.mat"), ["x^5+x^4+2x^3+x^2+x"]);
    assert_eq!(ok(&["perm", "--k", "5"], "example1.mat"), ["2x^5+6x^4+2x^3+12x^2+12x"]);
    assert_eq!(ok(&["perm", "--method", "interpolate"], "example1.mat"), ["2x^5+2x^4+2x^3"]);
}

#[test]
fn polynomial_output_parses_back() {
    for k in ["1", "2", "3", "6"] {
        let line = &ok(&["perm", "--k", k], "example1.mat")[0];
        let p: ZPoly = line.parse().unwrap();
        assert_eq!(&p.to_string(), line);
    }
}

#[test]
fn matchings_and_hafnian() {
    assert_eq!(ok(&["matchings", "--k", "2"], "c6.graph"), ["2"]);
    assert_eq!(ok(&["matchings", "--k", "1"], "c6.graph"), ["0"]);
    assert_eq!(ok(&["hafnian", "--k", "4"], "k4.sym"), ["3"]);
    assert_eq!(ok(&["hafnian", "--k", "1"], "k4.sym"), ["1"]);
}

#[test]
fn cycles() {
    assert_eq!(ok(&["sdc", "--l", "1", "--marked-edge", "0"], "triangle.graph"), ["3"]);
    assert_eq!(
        ok(&["sdc", "--l", "1", "--reconstruct"], "triangle.graph"),
        ["3", "edges: 0-1 1-2 0-2"]
    );
    assert_eq!(
        ok(&["sdc", "--l", "2", "--reconstruct"], "two_triangles.graph"),
        ["9", "edges: 0-1 1-2 2-0 3-4 4-5 5-3"]
    );
    assert_eq!(ok(&["sdc", "--l", "2", "--marked-vertex", "0,4"], "two_triangles.graph"), ["9"]);
    assert_eq!(ok(&["sdc", "--marked-vertex", "0,4"], "two_triangles.graph"), ["none"]);
    assert_eq!(ok(&["sdc", "--marked-edge", "0"], "twoedges.graph"), ["none"]);
}

#[test]
fn paths() {
    assert_eq!(
        ok(&["sdp2", "--terminals", "0,1,3,4", "--reconstruct"], "two_triangles.graph"),
        ["3", "edges: 0-1 3-4"]
    );
    assert_eq!(ok(&["sdp2", "--terminals", "0,3,1,2"], "two_triangles.graph"), ["none"]);
}

#[test]
fn errors() {
    let o = permod(&["perm"], "bad.mat");
    assert!(!o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 4: invalid number `zz`"), "{err}");

    let o = permod(&["sdc", "--l", "2"], "triangle.graph");
    assert!(!o.status.success());

    let o = permod(&["sdp2", "--terminals", "0,1"], "two_triangles.graph");
    assert!(!o.status.success());

    let o = permod(&["perm"], "missing.mat");
    assert!(!o.status.success());
}

#[test]
fn selftest() {
    let o = Command::new(env!("CARGO_BIN_EXE_permod"))
        .args(["selftest", "--seed", "2"])
        .output()
        .unwrap();
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 11);
    assert!(!out.contains("FAIL"));
}
