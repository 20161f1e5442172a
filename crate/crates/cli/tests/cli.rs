use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use graph_barcode::Rational;
use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_graph-barcode"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../testdata/v1")
        .join(name)
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn json(out: &Output) -> Value {
    serde_json::from_str(&stdout(out)).unwrap()
}

#[test]
fn pd_triangle_rows() {
    let tri = golden("triangle.graph");
    let out = run(&["pd", tri.to_str().unwrap(), "vertex:v1"]);
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows, ["0,0,1.5,extended+", "1,1.5,0,extended-"]);
}

#[test]
fn pd_json_and_svg() {
    let tri = golden("triangle.graph");
    let v = json(&run(&["pd", tri.to_str().unwrap(), "vertex:v1", "--format", "json"]));
    assert_eq!(v["basepoint"], "vertex:v1");
    assert_eq!(v["points"][1]["birth"]["exact"], "1.5");
    assert_eq!(v["points"][1]["birth"]["float"], 1.5);
    let svg = stdout(&run(&["pd", tri.to_str().unwrap(), "vertex:v1", "--format", "svg"]));
    assert_eq!(svg.matches("<circle").count(), 2);
}

#[test]
fn pd_errors() {
    let dir = TempDir::new().unwrap();
    let tri = golden("triangle.graph");
    let tri = tri.to_str().unwrap();
    assert_eq!(code(&run(&["pd", tri, "a:2"])), 1);
    assert_eq!(code(&run(&["pd", tri, "nonsense"])), 2);
    assert_eq!(code(&run(&["pd", "/nonexistent/g.graph", "vertex:v1"])), 2);
    let bad = write(&dir, "bad.graph", "v a\nv b\ne x a b oops\n");
    assert_eq!(code(&run(&["pd", &bad, "vertex:a"])), 2);
    let split = write(&dir, "split.graph", "v a\nv b\n");
    assert_eq!(code(&run(&["pd", &split, "vertex:a"])), 1);
}

#[test]
fn pd_one_point_graph() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "point.graph", "v p\n");
    let text = stdout(&run(&["pd", &g, "vertex:p"]));
    assert_eq!(text.lines().skip(1).collect::<Vec<_>>(), ["0,0,0,extended+"]);
}

fn manifest(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

#[test]
fn bt_circle_has_identical_diagrams() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "c.graph", "v o\ne l o o 3\n");
    let out = dir.path().join("bt");
    stdout(&run(&["bt", &g, "--delta", "1/2", "--out", out.to_str().unwrap()]));
    let m = manifest(&out);
    // seven segments of length 3/7
    assert_eq!(m["delta_hat"]["exact"], "3/14");
    let files: Vec<String> = m["basepoints"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| fs::read_to_string(out.join(e["file"].as_str().unwrap())).unwrap())
        .collect();
    assert_eq!(files.len(), 7);
    assert!(files.iter().all(|f| f == &files[0]));
}

#[test]
fn bt_interval_varies_linearly() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "i.graph", "v a\nv b\ne e a b 2\n");
    let out = dir.path().join("bt");
    stdout(&run(&["bt", &g, "--delta", "1/4", "--out", out.to_str().unwrap()]));
    let m = manifest(&out);
    for e in m["basepoints"].as_array().unwrap() {
        let label = e["basepoint"].as_str().unwrap();
        let x: Rational = match label {
            "vertex:a" => Rational::zero(),
            "vertex:b" => Rational::from_integer(2),
            l => l.strip_prefix("e:").unwrap().parse().unwrap(),
        };
        let text = fs::read_to_string(out.join(e["file"].as_str().unwrap())).unwrap();
        let other = Rational::from_integer(2) - &x;
        let (near, far) = (x.clone().min(other.clone()), x.max(other));
        let expected = if near.is_zero() {
            vec![format!("0,0,{far},extended+")]
        } else {
            vec![format!("0,0,{far},extended+"), format!("1,{near},0,relative")]
        };
        assert_eq!(
            text.lines().skip(1).map(String::from).collect::<Vec<_>>(),
            expected,
            "{label}"
        );
    }
}

#[test]
fn bt_tolerance_report_and_errors() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "c.graph", "v o\ne l o o 2\n");
    let out = dir.path().join("bt");
    let out_s = out.to_str().unwrap();
    stdout(&run(&["bt", &g, "--delta", "1", "--out", out_s, "--tol", "0"]));
    let report: Value = serde_json::from_str(&fs::read_to_string(out.join("injectivity.json")).unwrap()).unwrap();
    assert_eq!(report["injective_on_sample"], false);
    assert_eq!(code(&run(&["bt", &g, "--delta", "0", "--out", out_s])), 1);
    assert_eq!(code(&run(&["bt", &g, "--delta=-1", "--out", out_s])), 1);
    assert_eq!(code(&run(&["bt", &g, "--delta", "x", "--out", out_s])), 2);
    assert_eq!(code(&run(&["bt", "/nonexistent", "--delta", "1", "--out", out_s])), 2);
}

#[test]
fn pdist_values() {
    let dir = TempDir::new().unwrap();
    let c2 = write(&dir, "c2.graph", "v o\ne l o o 2\n");
    let c4 = write(&dir, "c4.graph", "v o\ne l o o 4\n");
    let same = json(&run(&["pdist", &c2, &c2, "--delta", "1/2"]));
    assert_eq!(same["estimate"]["exact"], "0");
    let v = json(&run(&["pdist", &c2, &c4, "--delta", "1/2", "--measured", "uniform"]));
    assert_eq!(v["estimate"]["exact"], "1");
    assert_eq!(v["w_infinity"]["exact"], "1");
    for key in ["lower", "upper", "delta_hat_A", "delta_hat_B"] {
        assert!(v[key]["exact"].is_string(), "{key}");
    }
    assert_eq!(
        code(&run(&["pdist", &c2, &c4, "--delta", "1", "--measured", "loop"])),
        2
    );
    assert_eq!(
        code(&run(&["pdist", &c2, &c4, "--delta", "1", "--measured", "zz=1"])),
        1
    );
}

#[test]
fn counterexample_pair_is_close_but_not_isometric() {
    let g = golden("counterexample_g.graph");
    let h = golden("counterexample_h.graph");
    let (g, h) = (g.to_str().unwrap(), h.to_str().unwrap());
    let v = json(&run(&["pdist", g, h, "--delta", "1/4"]));
    let estimate: f64 = v["estimate"]["float"].as_f64().unwrap();
    let slack = v["delta_hat_A"]["float"].as_f64().unwrap() + v["delta_hat_B"]["float"].as_f64().unwrap();
    assert!(estimate <= slack);
    let c = json(&run(&["canon", g, h, "--format", "json"]));
    assert_eq!(c["all_equal"], false);
}

#[test]
fn golden_files_match_the_generator() {
    for side in ["g", "h"] {
        let generated = stdout(&run(&["gen", "counterexample", side]));
        let frozen = fs::read_to_string(golden(&format!("counterexample_{side}.graph"))).unwrap();
        assert_eq!(generated, frozen, "{side}");
    }
}

#[test]
fn canon_rejects_cycles() {
    let tri = golden("triangle.graph");
    assert_eq!(code(&run(&["canon", tri.to_str().unwrap()])), 1);
}

#[test]
fn gen_is_deterministic_and_parseable() {
    let dir = TempDir::new().unwrap();
    let a = stdout(&run(&[
        "gen",
        "random",
        "--vertices",
        "5",
        "--extra",
        "2",
        "--seed",
        "9",
    ]));
    let b = stdout(&run(&[
        "gen",
        "random",
        "--vertices",
        "5",
        "--extra",
        "2",
        "--seed",
        "9",
    ]));
    assert_eq!(a, b);
    let path = write(&dir, "r.graph", &a);
    stdout(&run(&["pd", &path, "vertex:v0"]));
    let tree = stdout(&run(&["gen", "tree", "--vertices", "6", "--seed", "1"]));
    let tree_path = write(&dir, "t.graph", &tree);
    stdout(&run(&["canon", &tree_path]));
    let base = write(&dir, "theta.graph", &stdout(&run(&["gen", "standard", "theta(1,1,2)"])));
    let cactus = stdout(&run(&["gen", "cactus", &base, "--seed", "3"]));
    assert!(cactus.lines().count() > 5);
    assert_eq!(code(&run(&["gen", "standard", "blob(1)"])), 2);
    assert_eq!(code(&run(&["gen", "standard", "circle(0)"])), 1);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let g = golden("counterexample_g.graph");
    let g = g.to_str().unwrap();
    let (x, y) = (dir.path().join("x"), dir.path().join("y"));
    for out in [&x, &y] {
        stdout(&run(&["bt", g, "--delta", "1/2", "--out", out.to_str().unwrap()]));
    }
    let mut names: Vec<_> = fs::read_dir(&x).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    for n in &names {
        assert_eq!(fs::read(x.join(n)).unwrap(), fs::read(y.join(n)).unwrap());
    }
    let a = stdout(&run(&["pd", g, "vertex:a", "--format", "json"]));
    let b = stdout(&run(&["pd", g, "vertex:a", "--format", "json"]));
    assert_eq!(a, b);
}

#[test]
fn verify_reports() {
    let v = json(&run(&["verify", "trees"]));
    assert_eq!(v["suite"], "trees");
    assert_eq!(v["passed"], true);
    assert!(v["details"].as_array().unwrap().len() > 50);
    let oracle = json(&run(&["verify", "oracle", "--seed", "3", "--failures-only"]));
    assert_eq!(oracle["passed"], true);
    assert_eq!(code(&run(&["verify", "unknown"])), 2);
    assert_eq!(code(&run(&["verify", "trees", "--format", "svg"])), 2);
}

#[test]
fn output_file_is_written() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("d.csv");
    let tri = golden("triangle.graph");
    let o = run(&["pd", tri.to_str().unwrap(), "vertex:v2", "--out", out.to_str().unwrap()]);
    assert!(stdout(&o).is_empty());
    assert!(fs::read_to_string(&out).unwrap().contains("1,1.5,0"));
    let blocked = dir.path().join("missing-dir").join("d.csv");
    assert_eq!(
        code(&run(&[
            "pd",
            tri.to_str().unwrap(),
            "vertex:v2",
            "--out",
            blocked.to_str().unwrap()
        ])),
        2
    );
}
