use std::path::PathBuf;
use std::process::{Command, Output};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zetaforge"))
        .args(args)
        .current_dir(root())
        .env_remove("ZETAFORGE_BUDGET")
        .output()
        .expect("binary runs")
}

fn golden(name: &str, args: &[&str]) {
    let out = run(args);
    assert!(
        out.status.success(),
        "{name}: exit {:?}, stderr {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    let expected = std::fs::read_to_string(root().join("golden").join(format!("{name}.txt")))
        .unwrap_or_else(|e| panic!("{name}: {e}"));
    assert_eq!(String::from_utf8_lossy(&out.stdout), expected, "{name}");
}

macro_rules! golden_tests {
    ($($name:ident: [$($arg:expr),* $(,)?];)*) => {
        $(
            #[test]
            fn $name() {
                golden(stringify!($name), &[$($arg),*]);
            }
        )*
    };
}

golden_tests! {
    flags_fn_3: ["flags", "fn", "--n", "3", "--check-funeq"];
    flags_schubert_4: ["flags", "schubert", "--n", "4"];
    flags_count_4_13: ["flags", "count", "--n", "4", "--type", "I=1,3"];
    zeta_grenham_3: ["zeta", "grenham", "--n", "3", "--prime", "2", "--terms", "5", "--check-funeq"];
    zeta_heisenberg: ["zeta", "compute", "--file", "data/heisenberg.json", "--prime", "3", "--terms", "6", "--check-funeq"];
    zeta_sum_of_squares_symbolic: ["zeta", "compute", "--file", "data/sum_of_squares.json", "--check-funeq"];
    zeta_sum_of_squares_p5: ["zeta", "compute", "--file", "data/sum_of_squares.json", "--prime", "5", "--terms", "4"];
    zeta_funeq_grenham4: ["zeta", "funeq", "--n", "4"];
    zeta_shift_heisenberg: ["zeta", "shift", "--file", "data/heisenberg.json", "--r", "2"];
    group_pfaffian_klein: ["group", "pfaffian", "--file", "data/free_class_two_4.json"];
    group_check_sum_of_squares: ["group", "check", "--file", "data/sum_of_squares.json", "--prime", "2", "--assert-irreducible"];
    geom_points_klein: ["geom", "points", "--file", "data/free_class_two_4.json", "--prime", "2"];
    geom_fano_klein: ["geom", "fano", "--file", "data/free_class_two_4.json", "--prime", "2", "--k", "2"];
    geom_smooth_sos_p2: ["geom", "smooth", "--poly", "y1^2+y2^2", "--prime", "2"];
    geom_isotropic: ["geom", "isotropic", "--file", "data/degenerate_pencil.json", "--prime", "2"];
    oracle_compare_heisenberg: ["oracle", "compare", "--file", "data/heisenberg.json", "--prime", "2", "--terms", "5"];
    oracle_compare_sos_p2: ["oracle", "compare", "--file", "data/sum_of_squares.json", "--prime", "2", "--terms", "3"];
    oracle_count_grenham3: ["oracle", "count", "--file", "data/grenham3.json", "--prime", "3", "--terms", "4"];
    oracle_types_2: ["oracle", "types", "--n", "2", "--prime", "3", "--k", "3"];
}

#[test]
fn output_is_stable_across_runs() {
    let args = ["zeta", "compute", "--file", "data/sum_of_squares.json"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn thread_count_does_not_change_counts() {
    let base = ["oracle", "count", "--file", "data/grenham3.json", "--prime", "2", "--terms", "4"];
    let one = run(&[&base[..], &["--threads", "1"]].concat());
    let many = run(&[&base[..], &["--threads", "4"]].concat());
    assert!(one.status.success());
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let out = run(&["flags", "fn", "--n", "3", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
}

#[test]
fn unknown_verb_is_a_usage_error() {
    assert_eq!(run(&["zeta", "nope"]).status.code(), Some(2));
}

#[test]
fn domain_errors_exit_one() {
    assert_eq!(run(&["geom", "points", "--poly", "y1^2+y2", "--prime", "5"]).status.code(), Some(1));
    assert_eq!(run(&["zeta", "compute", "--file", "data/missing.json"]).status.code(), Some(1));
    assert_eq!(run(&["oracle", "count", "--file", "data/heisenberg.json", "--prime", "4", "--terms", "2"]).status.code(), Some(1));
}

#[test]
fn budget_is_enforced() {
    let out = run(&["--budget", "10", "geom", "points", "--file", "data/free_class_two_4.json", "--prime", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn budget_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_zetaforge"))
        .args(["geom", "points", "--file", "data/free_class_two_4.json", "--prime", "2"])
        .current_dir(root())
        .env("ZETAFORGE_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn symbolic_series_is_refused() {
    let out = run(&["zeta", "compute", "--file", "data/sum_of_squares.json", "--prime", "5", "--n-poly", "n", "--terms", "2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn point_count_polynomial_is_accepted() {
    let out = run(&["zeta", "compute", "--file", "data/sum_of_squares.json", "--n-poly", "2", "--prime", "5", "--terms", "4"]);
    let expected = std::fs::read_to_string(root().join("golden/zeta_sum_of_squares_p5.txt")).unwrap();
    assert_eq!(String::from_utf8_lossy(&out.stdout), expected);
}
