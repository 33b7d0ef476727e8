use std::path::PathBuf;
use std::process::{Command, Output};

use proptest::prelude::*;
use subsum::constructions::{preset, PresetName};
use subsum_cli::{parse_spec, render_spec, run};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_subsum"));
    c.env_remove("SUBSUM_BUDGET").env_remove("SUBSUM_WITNESSES").env_remove("SUBSUM_CONFIG");
    c
}

fn subsum(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

/// `10^-144`, the atom value of block 12.
fn deep() -> String {
    format!("1/1{}", "0".repeat(144))
}

/// The deep atom once more as a prefix term: that representation closes at
/// once, the twelve in block 12 only after walking every earlier block.
fn blocks_spec(name: &str) -> String {
    let text = format!("prefix = [\"{}\"]\n[tail]\nkind = \"blocks\"\nbase = 10\nsizes = \"n\"\n", deep());
    scratch(name, &text).to_str().unwrap().to_string()
}

fn row(o: &Output, t: &str) -> Option<String> {
    stdout(o).lines().find_map(|l| l.strip_prefix(&format!("{t}\t")).map(str::to_string))
}

#[test]
fn count_continuum() {
    let o = subsum(&["count", "--preset", "EX_2_6", "--target", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l == "1\tcontinuum"), "{}", stdout(&o));
}

#[test]
fn scan_footer() {
    let o = subsum(&["scan", "--preset", "GN_CANTORVAL", "--depth", "8"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l == "# cardinality_set\t{1, 2}"), "{}", stdout(&o));
}

#[test]
fn pretty_uses_glyphs() {
    let o = subsum(&["count", "--preset", "EX_2_6", "--target", "1", "--format", "pretty"]);
    assert!(stdout(&o).contains('𝔠'));
}

#[test]
fn budget_exhaustion_exits_two() {
    let spec = blocks_spec("blocks.spec");
    let t = deep();
    let o = subsum(&["count", "--spec", &spec, "--target", &t, "--budget", "10"]);
    assert_eq!(o.status.code(), Some(2), "{}", stdout(&o));
    assert_eq!(row(&o, &t).as_deref(), Some(">=1"));
    assert!(stdout(&o).lines().any(|l| l == "# budget_limited\ttrue"));
    let o = subsum(&["count", "--spec", &spec, "--target", &t]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(row(&o, &t).as_deref(), Some("13"));
}

#[test]
fn budget_precedence() {
    let spec = blocks_spec("blocks-env.spec");
    let t = deep();
    let args = ["count", "--spec", &spec, "--target", &t];
    let env = bin().args(args).env("SUBSUM_BUDGET", "10").output().unwrap();
    assert_eq!(env.status.code(), Some(2));
    let flag = bin().args(args).args(["--budget", "100000"]).env("SUBSUM_BUDGET", "10").output().unwrap();
    assert_eq!(flag.status.code(), Some(0));
    let cfg = scratch("subsum.toml", "budget = 10\n");
    let from_cfg = bin().args(args).env("SUBSUM_CONFIG", &cfg).output().unwrap();
    assert_eq!(from_cfg.status.code(), Some(2));
    let env_wins = bin().args(args).env("SUBSUM_CONFIG", &cfg).env("SUBSUM_BUDGET", "100000").output().unwrap();
    assert_eq!(env_wins.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        vec!["frobnicate"],
        vec!["count", "--preset", "NO_SUCH", "--target", "1"],
        vec!["count", "--preset", "EX_2_6", "--target", "x"],
        vec!["count", "--target", "1"],
        vec!["scan", "--preset", "EX_2_6", "--depth", "99"],
    ] {
        let o = subsum(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    let bad = scratch("bad-ratio.spec", "[tail]\nkind = \"geometric\"\nc = 1\nq = \"3/2\"\n");
    let o = subsum(&["classify", "--spec", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("ratio not in (0,1)"));
}

#[test]
fn reports_are_deterministic() {
    let args = ["scan", "--preset", "EX_4_7", "--depth", "6"];
    let a = subsum(&args);
    let b = subsum(&args);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn out_flag_writes_file() {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("report.tsv");
    let o = subsum(&["classify", "--preset", "EX_2_6", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("# class\tinterval-union"));
    assert!(text.contains("0\t2"));
}

#[test]
fn construct_output_parses() {
    let o = subsum(&["construct", "--preset", "INTERLEAVED_GEO(1/5)", "--op", "double"]);
    assert_eq!(o.status.code(), Some(0));
    let spec = parse_spec(&stdout(&o)).unwrap();
    assert_eq!(spec.tail.kind(), "multigeometric");
    let file = scratch("constructed.spec", &stdout(&o));
    let o = subsum(&["count", "--spec", file.to_str().unwrap(), "--target", "0"]);
    assert!(stdout(&o).lines().any(|l| l == "0\t1"));
}

#[test]
fn finite_tools() {
    let o = subsum(&["finite-range", "--atoms", "4,4,2,2,2"]);
    assert!(stdout(&o).lines().any(|l| l == "# range\t{1, 3, 5, 7}"), "{}", stdout(&o));
    let o = subsum(&["search-range", "--range", "1,2", "--max-atoms", "2", "--denominators", "2"]);
    assert!(stdout(&o).lines().any(|l| l == "(1,1)"), "{}", stdout(&o));
}

#[test]
fn expansion_and_props() {
    let o = subsum(&["expand", "--preset", "EX_3_5", "--target", "1/3", "--horizon", "6"]);
    assert!(stdout(&o).lines().any(|l| l == "digits\t010101"), "{}", stdout(&o));
    let quarter = scratch("quarter.spec", "[tail]\nkind = \"geometric\"\nc = 1\nq = \"1/4\"\n");
    let o = subsum(&["props", "--spec", quarter.to_str().unwrap()]);
    for want in ["quick\tyes", "property_a\tyes", "property_b\tyes"] {
        assert!(stdout(&o).lines().any(|l| l == want), "{}", stdout(&o));
    }
    let o = subsum(&["props", "--preset", "EX_3_5"]);
    assert!(stdout(&o).lines().any(|l| l == "slow\tfrom 1"), "{}", stdout(&o));
}

#[test]
fn presets_round_trip() {
    for name in PresetName::catalog() {
        let s = preset(&name).unwrap();
        assert_eq!(parse_spec(&render_spec(&s)).unwrap(), s, "{name}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn exit_code_matches_report(idx in 0usize..8, n in 0i64..=8, budget in prop_oneof![Just(3usize), Just(100_000)]) {
        let names = ["EX_2_6", "EX_3_5", "GN_CANTORVAL", "EX_4_7", "EX_3_15", "BLOCKS_2_5", "INTERLEAVED_GEO(1/5)", "REM_3_13"];
        let t = format!("{n}/8");
        let b = budget.to_string();
        let out = run(["subsum", "count", "--preset", names[idx], "--target", &t, "--budget", &b]);
        let partial = out.stdout.lines().any(|l| !l.starts_with('#') && (l.contains(">=") || l.contains("undecided")));
        prop_assert!(out.code == 0 || out.code == 2, "{}", out.stderr);
        prop_assert_eq!(out.code == 2, partial, "{}", out.stdout);
    }
}
