use std::io::Write;
use std::process::{Command, Output, Stdio};

fn pchordal(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_pchordal"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn generated(kind: &[&str]) -> String {
    let mut args = vec!["generate"];
    args.extend_from_slice(kind);
    let o = pchordal(&args, None);
    assert!(o.status.success());
    stdout(&o)
}

#[test]
fn three_sun_from_stdin_is_rejected() {
    let o = pchordal(&["recognize", "-"], Some(&generated(&["k_sun", "3"])));
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("not proper chordal"));
}

#[test]
fn cevenol_from_stdin_is_accepted() {
    let o = pchordal(&["recognize", "-"], Some(&generated(&["cevenol"])));
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("proper chordal\n"));
}

#[test]
fn figure_nine_pair_is_not_isomorphic() {
    let o = pchordal(&["isomorphic", "fig9_g", "fig9_gprime"], None);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "NOT-ISOMORPHIC\n");
}

#[test]
fn isomorphic_prints_a_bijection() {
    let o = pchordal(&["isomorphic", "k_fan:4", "k_fan:4"], None);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("ISOMORPHIC"));
    assert_eq!(lines.filter(|l| l.contains(" -> ")).count(), 6);
}

#[test]
fn four_fan_has_one_feasible_root() {
    let o = pchordal(&["recognize", "k_fan:4"], None);
    assert_eq!(stdout(&o), "proper chordal\nfeasible roots: v3\n");
    let o = pchordal(&["recognize", "k_fan:4", "--root", "v"], None);
    assert_eq!(o.status.code(), Some(1));
    let o = pchordal(&["recognize", "k_fan:4", "--root", "v3", "--verdict-only"], None);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn certify_output_passes_check_layout() {
    let dir = std::env::temp_dir().join(format!("pchordal-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let layout = dir.join("layout.json");
    let path = layout.to_str().unwrap();
    let o = pchordal(&["certify", "fig8", "--root", "1", "--out", path], None);
    assert_eq!(o.status.code(), Some(0));
    for set in ["proper", "indifference", "int", "chordal"] {
        let o = pchordal(&["check-layout", "fig8", path, "--patterns", set], None);
        assert_eq!(o.status.code(), Some(0), "{set}");
        assert_eq!(stdout(&o), "ok\n");
    }
    let o = pchordal(&["check-layout", "fig8", path, "--patterns", "clique"], None);
    assert_eq!(o.status.code(), Some(1));
    let o = pchordal(&["check-layout", "cevenol", path, "--patterns", "proper"], None);
    assert_eq!(o.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn certify_rejects_infeasible_roots() {
    let o = pchordal(&["certify", "k_sun:3"], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());
}

#[test]
fn enumerate_matches_the_oracle() {
    let fast = pchordal(&["enumerate", "fig10", "--root", "x"], None);
    assert_eq!(fast.status.code(), Some(0));
    assert_eq!(stdout(&fast).lines().count(), 2);
    let fast = pchordal(&["enumerate", "k_fan:4", "--root", "v3"], None);
    let slow = pchordal(&["oracle", "layouts", "k_fan:4", "--root", "v3", "--patterns", "proper"], None);
    let (fast, slow) = (stdout(&fast), stdout(&slow));
    assert!(!fast.is_empty());
    assert!(fast.lines().all(|l| slow.lines().any(|m| m == l)));
    let o = pchordal(&["enumerate", "fig10", "--root", "x", "--limit", "1"], None);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn hierarchy_formats() {
    let text = stdout(&pchordal(&["hierarchy", "fig10", "--root", "x"], None));
    assert!(text.starts_with("T0 "));
    let decorated = stdout(&pchordal(&["hierarchy", "fig10", "--root", "x", "--decorated"], None));
    assert!(decorated.lines().any(|l| l.starts_with("code ")));
    let dot = stdout(&pchordal(&["hierarchy", "fig10", "--root", "x", "--dot"], None));
    assert!(dot.starts_with("digraph hierarchy {"));
    let json = stdout(&pchordal(&["hierarchy", "fig10", "--root", "x", "--json"], None));
    assert!(json.starts_with("{\"trees\":"));
    let both = pchordal(&["hierarchy", "fig10", "--root", "x", "--json", "--dot"], None);
    assert_eq!(both.status.code(), Some(2));
}

#[test]
fn outputs_are_deterministic() {
    for args in [
        &["recognize", "trivially_perfect:3,12"][..],
        &["hierarchy", "cevenol", "--root", "g", "--decorated"],
        &["isomorphic", "proper_interval:5,9", "proper_interval:5,9"],
        &["generate", "proper_interval", "4", "10"],
    ] {
        let a = pchordal(args, None);
        let b = pchordal(args, None);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        let mut seq = args.to_vec();
        seq.push("--sequential");
        assert_eq!(pchordal(&seq, None).stdout, a.stdout, "{args:?}");
    }
}

#[test]
fn oracle_agrees_on_fixtures() {
    assert_eq!(pchordal(&["oracle", "recognize", "k_sun:3"], None).status.code(), Some(1));
    assert_eq!(pchordal(&["oracle", "recognize", "k_fan:4"], None).status.code(), Some(0));
    let o = pchordal(&["oracle", "isomorphic", "path:4", "path:4"], None);
    assert!(stdout(&o).starts_with("ISOMORPHIC\n"));
}

#[test]
fn oracle_budget_comes_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_pchordal"))
        .args(["oracle", "recognize", "path:9"])
        .env("PCHORDAL_MAX_VERTICES", "6")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("exceed"));
}

#[test]
fn input_errors_exit_with_two() {
    assert_eq!(pchordal(&["recognize", "no/such/file"], None).status.code(), Some(2));
    assert_eq!(pchordal(&["recognize", "-"], Some("3 1\n0 5\n")).status.code(), Some(2));
    assert_eq!(pchordal(&["recognize", "-"], Some("2 0\n")).status.code(), Some(2));
    assert_eq!(pchordal(&["generate", "k_sun"], None).status.code(), Some(2));
    assert_eq!(pchordal(&["recognize", "path:3", "--root", "9"], None).status.code(), Some(2));
    assert_eq!(pchordal(&["isomorphic", "k_sun:3", "path:6"], None).status.code(), Some(2));
}

#[test]
fn selftest_passes() {
    let o = pchordal(&["selftest"], None);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("PASS ")).count(), 5);
}
