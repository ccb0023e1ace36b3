use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use cfk_core::{psi, SubgraphRootedMap, Word};

fn cfk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cfk"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv_column(text: &str, name: &str) -> Vec<String> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let i = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(i).unwrap().to_string()).collect()
}

#[test]
fn sample_writes_valid_map_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = cfk(&[
        "sample",
        "--q",
        "1",
        "--n",
        "10",
        "--samples",
        "100",
        "--format",
        "structured",
        "--out",
        out,
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let maps: Vec<_> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.file_name().unwrap().to_str().unwrap().starts_with("map_"))
        .collect();
    assert_eq!(maps.len(), 100);
    for p in &maps {
        let sm = SubgraphRootedMap::from_json(&fs::read_to_string(p).unwrap()).unwrap();
        assert_eq!(sm.map.num_edges(), 10);
    }
    let table = fs::read_to_string(dir.path().join("samples.csv")).unwrap();
    assert!(csv_column(&table, "loops_ok").iter().all(|v| v == "true"));
    // every word file encodes to its map file
    let w = Word::from_text(&fs::read_to_string(dir.path().join("word_00007.txt")).unwrap()).unwrap();
    let m = SubgraphRootedMap::from_json(&fs::read_to_string(dir.path().join("map_00007.json")).unwrap())
        .unwrap();
    assert_eq!(psi(&w).unwrap(), m);
}

#[test]
fn extreme_weights_fix_the_loop_number() {
    let o = cfk(&["sample", "--q", "0", "--n", "8", "--samples", "30"]);
    assert!(o.status.success());
    assert!(csv_column(&stdout(&o), "loops").iter().all(|v| v == "1"));
    let o = cfk(&["sample", "--q", "inf", "--n", "8", "--samples", "30"]);
    assert!(o.status.success());
    assert!(csv_column(&stdout(&o), "loops").iter().all(|v| v == "9"));
}

#[test]
fn reruns_are_byte_identical() {
    for args in [
        &[
            "sample",
            "--p",
            "0.5",
            "--n",
            "12",
            "--samples",
            "20",
            "--seed",
            "4",
        ][..],
        &[
            "limit-stats",
            "--samples",
            "100",
            "--walks",
            "3",
            "--steps",
            "40",
            "--p-ladder",
            "0.5",
        ][..],
    ] {
        let a = cfk(args);
        let b = cfk(args);
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout);
    }
    let a = cfk(&["sample", "--n", "12", "--samples", "20", "--seed", "4"]);
    let b = cfk(&["sample", "--n", "12", "--samples", "20", "--seed", "5"]);
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn encode_then_decode() {
    let dir = tempfile::tempdir().unwrap();
    let word_path = dir.path().join("w.txt");
    fs::write(&word_path, "offset=-3\naFbaBAbB\n").unwrap();
    let out = dir.path().join("enc");
    let o = cfk(&[
        "encode",
        word_path.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = cfk(&["decode", out.join("map.json").to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o), "offset=-3\naFbaBAbB\n");
}

#[test]
fn encode_rejects_nonempty_reduction() {
    let dir = tempfile::tempdir().unwrap();
    let word_path = dir.path().join("w.txt");
    fs::write(&word_path, "offset=0\naa\n").unwrap();
    let o = cfk(&["encode", word_path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_single_block() {
    let o = cfk(&["verify", "--only", "duality", "--n", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("psi commutes with duality"));
    assert!(!text.contains("round trip"));
    let o = cfk(&["verify", "--only", "nonsense"]);
    assert_eq!(o.status.code(), Some(2));
}

fn corrupt(path: &Path) {
    let text = fs::read_to_string(path).unwrap();
    fs::write(path, text.replace("\"root_dart\":", "\"root_dart\":999,\"x\":")).unwrap();
}

#[test]
fn verify_reports_a_corrupt_map_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = cfk(&[
        "sample",
        "--n",
        "5",
        "--samples",
        "2",
        "--format",
        "structured",
        "--out",
        out,
    ]);
    assert!(o.status.success());
    let good = dir.path().join("map_00000.json");
    let bad = dir.path().join("map_00001.json");
    corrupt(&bad);
    let o = cfk(&[
        "verify",
        "--only",
        "files",
        "--maps",
        good.to_str().unwrap(),
        bad.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("map_00001.json"), "{err}");
    assert!(err.contains("reproduce with config"), "{err}");
    let o = cfk(&["verify", "--only", "files", "--maps", good.to_str().unwrap()]);
    assert!(o.status.success());
}

#[test]
fn local_convergence_on_the_empty_window() {
    let o = cfk(&[
        "local-convergence",
        "--radius",
        "0",
        "--ladder",
        "2,4",
        "--samples",
        "50",
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("tv vanishes on the empty window,,,,,,,true"));
}

#[test]
fn limit_ball_and_walk_outputs() {
    let o = cfk(&["limit-ball", "--radius", "2", "--seed", "3"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(csv_column(&stdout(&o), "certified"), vec!["true"]);
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = cfk(&[
        "limit-ball",
        "--p",
        "1",
        "--radius",
        "2",
        "--format",
        "structured",
        "--out",
        out,
    ]);
    assert!(o.status.success());
    let ball =
        SubgraphRootedMap::from_json(&fs::read_to_string(dir.path().join("ball.json")).unwrap()).unwrap();
    ball.validate().unwrap();
    let o = cfk(&["limit-ball", "--radius", "40", "--window-cap", "256"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("window cap"));

    let o = cfk(&["walk", "--steps", "200", "--seed", "2"]);
    assert!(o.status.success());
    assert_eq!(csv_column(&stdout(&o), "steps"), vec!["200"]);
}

#[test]
fn rootdeg_rows() {
    let o = cfk(&["rootdeg", "--samples", "25"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let n0 = csv_column(&text, "n0");
    let plus = csv_column(&text, "n0_plus");
    assert_eq!(n0.len(), 25);
    for (a, b) in n0.iter().zip(&plus) {
        if let (Ok(a), Ok(b)) = (a.parse::<usize>(), b.parse::<usize>()) {
            assert!(1 <= b && b <= a);
        }
    }
}

#[test]
fn conflicting_parameters_are_rejected() {
    let o = cfk(&["sample", "--q", "1", "--p", "0.3"]);
    assert!(!o.status.success());
    let o = cfk(&["sample", "--p", "1.5"]);
    assert_eq!(o.status.code(), Some(2));
}
