use std::path::PathBuf;
use std::process::Command;

fn run(args: &[&str]) -> (String, String, i32) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("ringinv").chain(args.iter().copied());
    let code = ringinv_cli::run(argv, &mut out, &mut err);
    (
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
        code,
    )
}

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    std::fs::read_to_string(path).unwrap()
}

fn strip_elapsed(s: &str) -> String {
    s.lines()
        .filter(|l| !l.starts_with("elapsed="))
        .map(|l| format!("{l}\n"))
        .collect()
}

fn value<'a>(out: &'a str, key: &str) -> Option<&'a str> {
    out.lines()
        .find_map(|l| l.strip_prefix(key)?.strip_prefix('='))
}

#[test]
fn golden_inverse_along_exists() {
    let (out, err, code) = run(&["inverse-along", "--ring", "Z:6", "5", "2"]);
    assert_eq!((code, err.as_str()), (0, ""));
    assert_eq!(out, golden("inverse_along_z6_5_2.txt"));
}

#[test]
fn golden_inverse_along_absent() {
    let (out, _, code) = run(&["inverse-along", "--ring", "Z:6", "3", "2"]);
    assert_eq!(code, 2);
    assert_eq!(out, golden("inverse_along_z6_3_2.txt"));
}

#[test]
fn golden_verify_pmq() {
    let (out, _, code) = run(&[
        "verify",
        "--theorem",
        "pmq-theorem",
        "--ring",
        "Z:6",
        "--exhaustive",
    ]);
    assert_eq!(code, 0);
    assert!(out.lines().last().unwrap().starts_with("elapsed="));
    assert_eq!(strip_elapsed(&out), golden("verify_pmq_z6.txt"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_ringinv");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    let ok = status(&["inverse-along", "--ring", "Z:6", "5", "2"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(ok.stdout).unwrap(),
        golden("inverse_along_z6_5_2.txt")
    );
    assert_eq!(
        status(&["inverse-along", "--ring", "Z:6", "3", "2"])
            .status
            .code(),
        Some(2)
    );
    let bad = status(&["inverse-along", "--ring", "Z:6", "3x", "2"]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(String::from_utf8(bad.stderr).unwrap().lines().count(), 1);
    assert_eq!(status(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn malformed_literal_reports_line_and_column() {
    let (out, err, code) = run(&[
        "inverse-along",
        "--ring",
        "M:2:Z:2",
        "[[1,0],[0,1]",
        "[[1,0],[0,1]]",
    ]);
    assert_eq!((code, out.as_str()), (1, ""));
    assert_eq!(err, "error: a: 1:13: expected ']' (found end of input)\n");
}

#[test]
fn file_input_with_comments() {
    let dir = std::env::temp_dir().join(format!("ringinv-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("pair.txt");
    std::fs::write(&path, "# a then d\n5  # a\n\n2\n").unwrap();
    let (out, _, code) = run(&[
        "inverse-along",
        "--ring",
        "Z:6",
        "--file",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(out, golden("inverse_along_z6_5_2.txt"));

    std::fs::write(&path, "5\n# d follows\n2/3\n").unwrap();
    let (_, err, code) = run(&[
        "inverse-along",
        "--ring",
        "Z:6",
        "--file",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 1);
    assert!(err.starts_with("error: d: 3:2:"), "{err}");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn negative_literals_are_accepted() {
    let (out, _, code) = run(&["inverse-along", "--ring", "Z:6", "-1", "-4"]);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "a"), Some("5"));
    assert_eq!(value(&out, "inverse"), Some("2"));
}

#[test]
fn wrong_literal_count_is_a_usage_error() {
    let (_, err, code) = run(&["inverse-along", "--ring", "Z:6", "5"]);
    assert_eq!(code, 1);
    assert!(err.contains("expected 2 literal(s)"));
}

#[test]
fn inner_inverse_and_green() {
    let (out, _, code) = run(&["inner-inverse", "--ring", "Z:6", "2"]);
    assert_eq!((code, value(&out, "inner")), (0, Some("2")));
    let (out, _, code) = run(&["inner-inverse", "--ring", "Z:4", "2"]);
    assert_eq!((code, value(&out, "regular")), (2, Some("false")));
    let (out, _, code) = run(&["green", "--relation", "leq-l", "--ring", "Z:6", "2", "4"]);
    assert_eq!((code, value(&out, "left")), (0, Some("2")));
    let (_, _, code) = run(&["green", "--relation", "leq-h", "--ring", "Z:6", "1", "2"]);
    assert_eq!(code, 2);
    let (out, _, code) = run(&["inner-inverse", "--ring", "M:2:Q", "[[1,2],[2,4]]"]);
    assert_eq!(code, 0);
    assert!(value(&out, "reflexive").is_some());
}

#[test]
fn product_inverse() {
    // p = q = 1 reduces to the plain inverse along m
    let (out, _, code) = run(&["inverse-along-product", "--ring", "Z:6", "5", "1", "2", "1"]);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "inverse"), Some("2"));
    assert_eq!(value(&out, "d"), Some("2"));
    // m = 2, p = 3: 2 ≤_L 3·2 = 0 fails
    let (_, err, code) = run(&["inverse-along-product", "--ring", "Z:6", "5", "3", "2", "1"]);
    assert_eq!(code, 1);
    assert!(err.contains("m ≤_L pm"), "{err}");
    let (out, _, code) = run(&["inverse-along-product", "--ring", "Z:4", "1", "1", "2", "1"]);
    assert_eq!(code, 2);
    assert_eq!(value(&out, "reason"), Some("not-regular:2"));
}

#[test]
fn block_commands() {
    let swap = [
        "--a", "0", "--b", "1", "--c", "1", "--d", "0", "--d1", "0", "--d2", "1", "--d3", "1",
    ];
    let mut args = vec!["block-220", "--ring", "Z:2"];
    args.extend(swap);
    let (out, _, code) = run(&args);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "inverse"), Some("[[0,1],[1,0]]"));

    let (out, _, code) = run(&[
        "block-general",
        "--ring",
        "GF:5",
        "--a",
        "1",
        "--b",
        "1",
        "--c",
        "1",
        "--d",
        "2",
        "--d1",
        "1",
        "--d2",
        "0",
        "--d3",
        "0",
        "--d4",
        "1",
    ]);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "inverse"), Some("[[2,4],[4,1]]"));
    assert!(value(&out, "x1").is_some() && value(&out, "x2").is_some());

    let (_, err, code) = run(&["block-general", "--ring", "Z:2", "--a", "1"]);
    assert_eq!(code, 1);
    assert!(err.contains("missing --b"));

    let (_, err, code) = run(&[
        "block-220",
        "--ring",
        "Z:2",
        "--a",
        "1",
        "--b",
        "1",
        "--c",
        "0",
        "--d",
        "1",
        "--d1",
        "1",
        "--d2",
        "1",
        "--d3",
        "1",
    ]);
    assert_eq!(code, 1);
    assert!(err.contains("c^∥d2"), "{err}");
}

#[test]
fn search_question_reports() {
    let (out, _, code) = run(&["search-question", "--ring", "Z:2", "--exhaustive"]);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "theorem"), Some("search-question"));
    assert_eq!(value(&out, "cases_examined"), Some("256"));
    assert!(value(&out, "findings").is_some());
    let (a, _, _) = run(&[
        "search-question",
        "--ring",
        "Z:2",
        "--seed",
        "1",
        "--count",
        "100",
    ]);
    let (b, _, _) = run(&[
        "search-question",
        "--ring",
        "Z:2",
        "--seed",
        "1",
        "--count",
        "100",
    ]);
    assert_eq!(strip_elapsed(&a), strip_elapsed(&b));
    let (_, _, code) = run(&["search-question", "--ring", "Q", "--exhaustive"]);
    assert_eq!(code, 1);
}

#[test]
fn verify_capability_error_names_tuple_space() {
    let (_, err, code) = run(&[
        "verify",
        "--theorem",
        "pmq-theorem",
        "--ring",
        "M:2:Z:3",
        "--exhaustive",
    ]);
    assert_eq!(code, 1);
    assert!(err.contains("43046721"), "{err}");
}

#[test]
fn printed_values_reparse() {
    let (out, _, _) = run(&[
        "block-general",
        "--ring",
        "Z:6",
        "--a",
        "5",
        "--b",
        "0",
        "--c",
        "1",
        "--d",
        "1",
        "--d1",
        "2",
        "--d2",
        "1",
        "--d3",
        "0",
        "--d4",
        "3",
    ]);
    let base: ringinv::Ring = "Z:6".parse().unwrap();
    let m2: ringinv::Ring = "M:2:Z:6".parse().unwrap();
    for line in out.lines() {
        let (k, v) = line.split_once('=').unwrap();
        match k {
            "ring" | "exists" | "reason" => {}
            "A" | "D" | "inverse" => assert!(ringinv::parse_element(&m2, v).is_ok(), "{line}"),
            _ => assert!(ringinv::parse_element(&base, v).is_ok(), "{line}"),
        }
    }
}
