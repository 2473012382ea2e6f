use std::io::Write;
use std::process::{Command, Output, Stdio};

use upcycle::fixtures::{SEVEN_UPCYCLES, U4, U4_TIMES_2, U4_TIMES_2_CROSS_JOINED};

fn upcycle(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_upcycle"))
        .args(args)
        .env_remove("UPCYCLE_THREADS")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn verify_upcycle_from_file() {
    let dir = std::env::temp_dir().join(format!("upcycle-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("upcycle1.txt");
    std::fs::write(
        &path,
        format!("# first binary (2,8,1) upcycle\n{}\n", SEVEN_UPCYCLES[0]),
    )
    .unwrap();
    let o = upcycle(
        &["verify", "--cyclic", "--n", "8", path.to_str().unwrap()],
        "",
    );
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "VALID a=2 n=8 d=1\n");
}

#[test]
fn verify_rejects_non_upcycle() {
    let o = upcycle(&["verify", "--cyclic", "--n", "4"], "(001⋄100⋄)\n");
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("INVALID reason="));
}

#[test]
fn verify_every_line_and_report_worst() {
    let o = upcycle(
        &["verify", "--cyclic", "--n", "4"],
        &format!("{U4}\n(001*100*)\n"),
    );
    assert_eq!(code(&o), 1);
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines[0], "VALID a=2 n=4 d=1");
    assert!(lines[1].starts_with("INVALID"));
}

#[test]
fn verify_necklace_input() {
    let o = upcycle(
        &["verify", "--n", "3"],
        "NECKLACE a=2 n=3 t=3\n(000001010011100101110111)\n",
    );
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "VALID necklace a=2 n=3 t=3\n");
}

#[test]
fn usage_and_parse_errors_exit_2() {
    assert_eq!(code(&upcycle(&["verify", "--n"], "")), 2);
    assert_eq!(code(&upcycle(&["frobnicate"], "")), 2);
    let o = upcycle(&["verify", "--cyclic", "--n", "4", "--a", "2"], "(0012)\n");
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("'2'"));
    // D(n) beyond its cap is refused rather than approximated
    assert_eq!(code(&upcycle(&["dn", "--max", "40"], "")), 2);
}

#[test]
fn dn_table() {
    let o = upcycle(&["dn", "--max", "16"], "");
    assert_eq!(code(&o), 0);
    let values: Vec<usize> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split('\t').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(values, [1, 1, 1, 2, 2, 3, 4, 4, 5, 6, 6, 7, 8, 9, 9, 10]);
}

#[test]
fn search_pipes_into_verify() {
    let found = upcycle(
        &["search", "--a", "2", "--n", "4", "--d", "1", "--exhaustive"],
        "",
    );
    assert_eq!(code(&found), 0);
    let text = stdout(&found);
    assert!(text.starts_with("# provenance: "));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 2);
    let checked = upcycle(&["verify", "--n", "4"], &text);
    assert_eq!(code(&checked), 0);
    assert!(stdout(&checked).lines().all(|l| l == "VALID a=2 n=4 d=1"));
}

#[test]
fn search_threads_env_overrides_flag() {
    let run = |env: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_upcycle"));
        cmd.args([
            "search",
            "--a",
            "2",
            "--n",
            "4",
            "--d",
            "1",
            "--exhaustive",
            "--threads",
            "3",
        ]);
        match env {
            Some(t) => cmd.env("UPCYCLE_THREADS", t),
            None => cmd.env_remove("UPCYCLE_THREADS"),
        };
        let o = cmd.output().unwrap();
        assert!(o.status.success());
        o.stdout
    };
    assert_eq!(run(Some("1")), run(None));
}

#[test]
fn multiply_matches_fixture() {
    let o = upcycle(&["multiply", "--n", "4", "--k", "2"], U4);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with("# provenance: alphabet multiplier"));
    assert_eq!(text.lines().last().unwrap(), U4_TIMES_2);
}

#[test]
fn transformations_refuse_non_upcycles() {
    let o = upcycle(&["multiply", "--n", "4", "--k", "2"], "(001*100*)");
    assert_eq!(code(&o), 1);
    assert!(o.stdout.is_empty());
}

#[test]
fn lift_enumerate_and_fold_back() {
    let o = upcycle(&["lift", "--n", "4", "--enumerate"], U4);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with("# provenance: "));
    let lifts: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(lifts.len(), 2);
    for w in lifts {
        let v = upcycle(&["verify", "--n", "4"], w);
        assert_eq!(stdout(&v), "VALID a=2 n=4 d=0 trivial\n");
    }
}

#[test]
fn fold_recovers_base() {
    let o = upcycle(
        &["fold", "--n", "4", "--delta", "1", "--offsets", "0"],
        "(0010110000111101)",
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("# provenance: "));
    let folded = stdout(&o).lines().last().unwrap().to_string();
    assert_eq!(
        stdout(&upcycle(&["verify", "--n", "4"], &folded)),
        "VALID a=2 n=4 d=1\n"
    );
}

#[test]
fn necklace_commands_emit_certified_necklaces() {
    let cases: [(&[&str], &str); 4] = [
        (&["necklace", "lex", "--a", "2", "--n", "3"], ""),
        (
            &[
                "necklace",
                "euler",
                "--a",
                "2",
                "--n",
                "3",
                "--t",
                "4",
                "--zeros-prefix",
            ],
            "",
        ),
        (&["necklace", "rotate", "--r", "1"], "(00011101)"),
        (&["necklace", "reflect"], "(0011)"),
    ];
    for (args, input) in cases {
        let o = upcycle(args, input);
        assert_eq!(code(&o), 0, "{args:?}");
        let text = stdout(&o);
        assert!(text.starts_with("# provenance: "), "{args:?}");
        let body: String = text
            .lines()
            .filter(|l| !l.starts_with('#'))
            .collect::<Vec<_>>()
            .join("\n");
        let n = args
            .iter()
            .position(|&a| a == "--n")
            .map_or("3", |i| args[i + 1]);
        let n = if args[1] == "reflect" { "2" } else { n };
        assert_eq!(code(&upcycle(&["verify", "--n", n], &body)), 0, "{args:?}");
    }
}

#[test]
fn graph_dot_output() {
    let o = upcycle(&["graph", "--n", "4", "--model", "s"], U4);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with("# provenance: "));
    assert!(text.contains("digraph"));
    assert_eq!(text.matches("->").count(), 20);
}

#[test]
fn feasible_verdicts() {
    let o = upcycle(&["feasible", "--a", "3", "--n", "8", "--d", "1"], "");
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("3\t8\t1\truled-out"));
    assert!(text.contains("# rule=coprime"));
    let o = upcycle(&["feasible", "--a", "2", "--n", "8", "--d", "1"], "");
    assert!(stdout(&o)
        .lines()
        .nth(1)
        .unwrap()
        .contains("known-to-exist"));
    let table = upcycle(&["feasible", "--table", "4", "6"], "");
    assert_eq!(code(&table), 0);
    assert!(stdout(&table).lines().all(|l| l.split('\t').count() == 4));
}

#[test]
fn crossjoin_example() {
    let o = upcycle(
        &[
            "crossjoin",
            "--n",
            "4",
            "--x",
            "3*1",
            "--y",
            "21*",
            "--at",
            "11,18,27,50",
        ],
        U4_TIMES_2,
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.starts_with("# provenance: cross-join"));
    assert_eq!(text.lines().last().unwrap(), U4_TIMES_2_CROSS_JOINED);
    let found = upcycle(
        &["crossjoin", "--n", "4", "--find", "--limit", "3"],
        U4_TIMES_2,
    );
    assert_eq!(stdout(&found).lines().count(), 4);
}

#[test]
fn analyze_report() {
    let o = upcycle(&["analyze", "--n", "4"], U4);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("balance\tbalanced\ttrue\ttarget=3"));
    assert!(text.contains("psd\tholds\ttrue"));
    assert!(text.contains("r3\tholds\tskipped"));
    let o = upcycle(&["analyze", "--n", "4"], "(0010110000111101)");
    assert!(stdout(&o).contains("r3\tholds\tfalse\tfailing="));
}
