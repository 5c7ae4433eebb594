use std::path::Path;
use std::process::{Command, Output};

fn fdsolve(args: &[&str], universe: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_fdsolve"));
    cmd.current_dir(Path::new(env!("CARGO_MANIFEST_DIR"))).args(args);
    match universe {
        Some(u) => cmd.env("FD_DEFAULT_UNIVERSE", u),
        None => cmd.env_remove("FD_DEFAULT_UNIVERSE"),
    };
    cmd.output().expect("fdsolve runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn send_more_money() {
    for range in ["closed", "open", "bits"] {
        for label in ["step", "ff"] {
            // Partial sums reach 99999, beyond the default bitset universe.
            let universe = (range == "bits").then_some("0..131071");
            let o = fdsolve(&["examples/models/send_more.fd", "--range", range, "--label", label, "--all"], universe);
            assert_eq!(o.status.code(), Some(0));
            assert_eq!(stdout(&o), "[9,5,6,7,1,0,8,2]\n", "{range} {label}");
        }
    }
}

#[test]
fn knapsack_optimum() {
    let o = fdsolve(&["examples/models/knapsack.fd", "--stats"], None);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "[0,1,2]\n");
    let err = stderr(&o);
    assert!(err.contains("objective=19"), "{err}");
    assert!(err.lines().any(|l| l.starts_with("restarts=")));
}

#[test]
fn unsatisfiable_exit_status() {
    let o = fdsolve(&["examples/models/unsat.fd"], None);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "");
}

#[test]
fn usage_and_parse_errors() {
    assert_eq!(fdsolve(&[], None).status.code(), Some(2));
    assert_eq!(fdsolve(&["no/such/file.fd"], None).status.code(), Some(2));
    assert_eq!(fdsolve(&["queens", "4", "--label", "random"], None).status.code(), Some(2));
}

#[test]
fn universe_from_environment() {
    let o = fdsolve(&["queens", "5", "--range", "bits"], Some("0..7"));
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "[1,3,5,2,4]\n");
    let o = fdsolve(&["queens", "4", "--range", "bits"], Some("3..7"));
    assert_eq!(o.status.code(), Some(2));
    let o = fdsolve(&["examples/models/knapsack.fd", "--range", "closed"], Some("0..3"));
    assert_eq!(o.status.code(), Some(2), "declared domain 0..4 exceeds the universe");
}

#[test]
fn queens_levels_print_the_same_first_solution() {
    for level in ["clpfd", "fd", "idx", "kernel"] {
        let o = fdsolve(&["queens", "8", "--level", level], None);
        assert_eq!(stdout(&o), "[1,5,8,6,3,7,2,4]\n", "{level}");
    }
}

#[test]
fn queens_bench_table() {
    let o = fdsolve(&["queens", "8", "--bench", "--reps", "1", "--range", "closed"], None);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 5, "{out}");
    assert!(out.lines().nth(4).unwrap().contains("kernel"));
}
