use std::path::PathBuf;
use std::process::{Command, Output};

fn quantale(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quantale")).args(args).output().expect("run the cli")
}

fn example(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/examples").join(name);
    p.to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn verify_exits_zero_on_every_shipped_example() {
    for name in ["boolean-8.struct", "mo2.struct", "o6.struct", "m3.struct", "luk4.struct", "godel3.struct"] {
        let o = quantale(&["verify", &example(name)]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stdout(&o));
    }
}

#[test]
fn law_failure_exits_one_with_witness() {
    let dir = std::env::temp_dir().join(format!("quantale-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.struct");
    // 3-chain with a product that is not monotone
    std::fs::write(&path, "elements: [0, a, 1]\ncovers: [[0, 1], [1, 2]]\nmul: [[0, 0, 0], [0, 2, 0], [0, 0, 2]]\n").unwrap();
    let o = quantale(&["--format", "machine", "verify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    let line = out.lines().find(|l| l.contains("\tFAIL\t")).expect("a failing line");
    assert!(line.split('\t').nth(2).is_some_and(|w| !w.is_empty()));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn input_errors_exit_two() {
    let o = quantale(&["verify", "/nonexistent/file.struct"]);
    assert_eq!(o.status.code(), Some(2));
    let o = quantale(&["rn", "--dim", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn machine_format_is_tab_separated() {
    let o = quantale(&["--format", "machine", "verify", &example("luk3.struct")]);
    assert_eq!(o.status.code(), Some(0));
    for line in stdout(&o).lines() {
        assert_eq!(line.split('\t').count(), 3, "{line}");
    }
}

#[test]
fn generated_chain_round_trips_through_verify() {
    let o = quantale(&["gen", "lukasiewicz", "--size", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let dir = std::env::temp_dir().join(format!("quantale-gen-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("l4.struct");
    std::fs::write(&path, &o.stdout).unwrap();
    assert_eq!(quantale(&["verify", path.to_str().unwrap()]).status.code(), Some(0));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn export_dot_of_m3_has_six_edges() {
    let o = quantale(&["export-dot", &example("m3.struct")]);
    assert_eq!(stdout(&o).matches("->").count(), 6);
}

#[test]
fn integral_search_on_o6_finds_nothing() {
    let o = quantale(&["search-residuation", &example("o6.struct"), "--mode", "integral"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("found 0  exhausted true"), "{}", stdout(&o));
}

#[test]
fn rn_op_multiplies_coordinate_lines() {
    let o = quantale(&["rn-op", "--dim", "2", "--op", "mul", "--a", "1,0", "--b", "0,1"]);
    assert_eq!(o.status.code(), Some(0));
}
