//! Command-line golden tests: exact outputs and exit-code contracts.

use std::path::PathBuf;
use std::process::Command;

use cyclorb::cli::{run, CliOutcome};

fn cli(args: &[&str]) -> CliOutcome {
    run(args.iter().map(|s| s.to_string()))
}

fn data(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name]
        .iter()
        .collect();
    path.to_str().unwrap().to_owned()
}

#[test]
fn golden_orbifold_ising_n2() {
    let out = cli(&["orbifold", "--catalog", "Ising", "--n", "2"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let expected = "\
category: Ising
n = 2
mu = 4.00000000
kind       sector         branch  dim         spin   grading
untwisted  (1,1)          0       1.00000000  0      0
untwisted  (1,1)          1       1.00000000  0      0
untwisted  (1,eps)        0       2.00000000  1/2    0
untwisted  (1,sigma)      0       2.82842712  1/16   0
untwisted  (eps,eps)      0       1.00000000  0      0
untwisted  (eps,eps)      1       1.00000000  0      0
untwisted  (eps,sigma)    0       2.82842712  9/16   0
untwisted  (sigma,sigma)  0       2.00000000  1/8    0
untwisted  (sigma,sigma)  1       2.00000000  1/8    0
twisted    1              0       2.00000000  1/32   1
twisted    1              1       2.00000000  17/32  1
twisted    eps            0       2.00000000  9/32   1
twisted    eps            1       2.00000000  25/32  1
twisted    sigma          0       2.82842712  1/16   1
twisted    sigma          1       2.82842712  9/16   1
completeness: sum d^2 = 64.0000000  target n^2*mu^n = 64.0000000  PASS
grading 0: sum d^2 = 32.0000000  target n*mu^n = 32.0000000  PASS
grading 1: sum d^2 = 32.0000000  target n*mu^n = 32.0000000  PASS
branch matching: twisted branch j corresponds to dual automorphism power j*k(1) mod n, k(1) = 1
";
    assert_eq!(out.stdout, expected);
    assert_eq!(out.stderr, "");
}

#[test]
fn golden_validate_trivial() {
    let out = cli(&["validate", "Trivial:0"]);
    assert_eq!(out.code, 0);
    let expected = "\
category: Trivial:0
check unit_law: PASS
check conjugate_pairing: PASS
check conjugation_involution: PASS
check commutativity: PASS
check associativity: PASS
check frobenius_symmetry: PASS
check unit_twist: PASS
check conjugate_twist: PASS
modular: yes (max |S S* - 1| = 0.000e0)
verlinde roundtrip: PASS (max deviation 0.000e0)
gauss sum: PASS
";
    assert_eq!(out.stdout, expected);
}

#[test]
fn golden_orbifold_holomorphic_n3() {
    let out = cli(&["orbifold", "--catalog", "Trivial:24", "--n", "3"]);
    assert_eq!(out.code, 0);
    let expected = "\
category: Trivial:24
n = 3
mu = 1.00000000
kind          sector   branch  dim         spin  grading
untwisted     (1,1,1)  0       1.00000000  0     0
untwisted     (1,1,1)  1       1.00000000  0     0
untwisted     (1,1,1)  2       1.00000000  0     0
twisted       1        0       1.00000000  2/3   1
twisted       1        1       1.00000000  0     1
twisted       1        2       1.00000000  1/3   1
twisted-conj  1        0       1.00000000  2/3   2
twisted-conj  1        1       1.00000000  0     2
twisted-conj  1        2       1.00000000  1/3   2
completeness: sum d^2 = 9.00000000  target n^2*mu^n = 9.00000000  PASS
grading 0: sum d^2 = 3.00000000  target n*mu^n = 3.00000000  PASS
grading 1: sum d^2 = 3.00000000  target n*mu^n = 3.00000000  PASS
grading 2: sum d^2 = 3.00000000  target n*mu^n = 3.00000000  PASS
branch matching: twisted branch j corresponds to dual automorphism power j*k(1) mod n, k(1) = 1
";
    assert_eq!(out.stdout, expected);
}

#[test]
fn validate_ising_reports_full_battery() {
    let out = cli(&["validate", "Ising"]);
    assert_eq!(out.code, 0);
    for line in [
        "category: Ising",
        "check unit_law: PASS",
        "check conjugate_pairing: PASS",
        "check conjugation_involution: PASS",
        "check commutativity: PASS",
        "check associativity: PASS",
        "check frobenius_symmetry: PASS",
        "check unit_twist: PASS",
        "check conjugate_twist: PASS",
        "modular: yes",
        "verlinde roundtrip: PASS",
        "gauss sum: PASS",
    ] {
        assert!(out.stdout.contains(line), "missing '{line}' in {}", out.stdout);
    }
}

#[test]
fn golden_dims_ising() {
    let out = cli(&["dims", "--catalog", "Ising"]);
    assert_eq!(out.code, 0);
    let expected = "\
category: Ising
label  dim
1      1.00000000
eps    1.00000000
sigma  1.41421356
global index mu = 4.00000000
";
    assert_eq!(out.stdout, expected);
}

#[test]
fn golden_smatrix_ising() {
    let out = cli(&["smatrix", "--catalog", "Ising"]);
    assert_eq!(out.code, 0);
    let expected = "\
category: Ising
+0.500000000+0.000000000i  +0.500000000+0.000000000i  +0.707106781+0.000000000i
+0.500000000+0.000000000i  +0.500000000+0.000000000i  -0.707106781+0.000000000i
+0.707106781+0.000000000i  -0.707106781+0.000000000i  +0.000000000+0.000000000i
";
    assert_eq!(out.stdout, expected);
}

#[test]
fn golden_vacuum_channel_ising() {
    let out = cli(&["vacuum-channel", "--catalog", "Ising", "--n", "2"]);
    assert_eq!(out.code, 0);
    let expected = "\
category: Ising
n = 2
vacuum channel: (1,1)+(eps,eps)+(sigma,sigma)
total dim = 4.00000000  target mu^(n-1) = 4.00000000  PASS
cyclic symmetry: PASS
";
    assert_eq!(out.stdout, expected);
}

#[test]
fn golden_solitons_compose() {
    let out = cli(&["solitons", "--catalog", "Ising", "--eval", "pi[sigma] * pi[1]"]);
    assert_eq!(out.code, 0);
    let expected = "\
category: Ising
expr: pi[sigma] * pi[1]
value: (1,sigma)+(eps,sigma)+(sigma,1)+(sigma,eps)
";
    assert_eq!(out.stdout, expected);
}

#[test]
fn golden_info_trivial8() {
    let out = cli(&["info", "--catalog", "Trivial:8"]);
    assert_eq!(out.code, 0);
    let expected = "\
category: Trivial:8
labels: 1
unit: 1
conjugation: 1->1
twists: h(1) = 0
central charge c = 8
global index mu = 1.00000000
modular: yes (max |S S* - 1| = 0.000e0)
gauss sum: PASS
";
    assert_eq!(out.stdout, expected);
}

#[test]
fn golden_wt_dim() {
    let out = cli(&["wt-dim", "--catalog", "Ising", "--n", "4"]);
    assert_eq!(out.code, 0);
    assert_eq!(
        out.stdout,
        "category: Ising\nn = 4\ntwisted soliton space dimension = 15\n"
    );
}

#[test]
fn solitons_hom_expression() {
    let out = cli(&[
        "solitons",
        "--catalog",
        "Ising",
        "--eval",
        "hom(sigma*sigma*sigma; sigma)",
    ]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.ends_with("value: 2\n"), "{}", out.stdout);
}

#[test]
fn orbifold_row_count_matches_spectrum_length() {
    for name in cyclorb::list_builtin() {
        for n in 2..=4usize {
            let out = cli(&["orbifold", "--catalog", &name, "--n", &n.to_string()]);
            assert_eq!(out.code, 0, "{name} n = {n}: {}", out.stderr);
            let md = cyclorb::builtin(&name).unwrap();
            let (sectors, _) = cyclorb::full_spectrum(&md, n).unwrap();
            let rows = out
                .stdout
                .lines()
                .filter(|l| {
                    l.starts_with("untwisted ")
                        || l.starts_with("twisted ")
                        || l.starts_with("twisted-conj ")
                        || l.starts_with("half-diag ")
                        || l.starts_with("half-pair ")
                })
                .count();
            assert_eq!(rows, sectors.len(), "{name} n = {n}");
        }
    }
}

#[test]
fn orbifold_records_format_parses_back() {
    let out = cli(&[
        "orbifold",
        "--catalog",
        "Fibonacci",
        "--n",
        "3",
        "--format",
        "records",
    ]);
    assert_eq!(out.code, 0);
    let mut sector_lines = 0;
    let mut summary_lines = 0;
    for line in out.stdout.lines() {
        let v: serde_json::Value = serde_json::from_str(line).expect("every line is JSON");
        if v.get("summary").is_some() {
            summary_lines += 1;
            assert_eq!(v["pass"], serde_json::Value::Bool(true));
        } else {
            sector_lines += 1;
        }
    }
    let md = cyclorb::builtin("Fibonacci").unwrap();
    let (sectors, _) = cyclorb::full_spectrum(&md, 3).unwrap();
    assert_eq!(sector_lines, sectors.len());
    // completeness plus one line per grading class
    assert_eq!(summary_lines, 1 + 3);
}

#[test]
fn orbifold_n4_prints_dimension_note() {
    let out = cli(&["orbifold", "--catalog", "Ising", "--n", "4"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("alternative index normalization"));
    assert!(out.stdout.contains("half-diag (sigma,sigma): displayed 8.00000000  alternative 16.0000000"));
}

#[test]
fn exit_code_contracts() {
    // 3: twisted spectrum outside n = 2..4
    let out = cli(&["orbifold", "--catalog", "Ising", "--n", "5"]);
    assert_eq!(out.code, 3);
    // 3: soliton construction on degenerate data
    let out = cli(&["orbifold", "--input", &data("degenerate_z2.json"), "--n", "2"]);
    assert_eq!(out.code, 3, "{}", out.stderr);
    // 2: invariant violation in the input file
    let out = cli(&["validate", &data("unequal_conjugate_twists.json")]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("E_INVARIANT"), "{}", out.stderr);
    // 4: schema error names the missing label
    let out = cli(&["validate", &data("missing_twist.json")]);
    assert_eq!(out.code, 4);
    assert!(out.stderr.contains("sigma"), "{}", out.stderr);
    // 4: json syntax error
    let out = cli(&["solitons", "--catalog", "Ising", "--eval", "pi[unknown]"]);
    assert_eq!(out.code, 4);
    assert!(out.stderr.contains("unknown"), "{}", out.stderr);
    // 4: unknown builtin lists the catalog
    let out = cli(&["dims", "--catalog", "Nope"]);
    assert_eq!(out.code, 4);
    assert!(out.stderr.contains("Fibonacci"));
    // 0: degenerate but consistent data still validates
    let out = cli(&["validate", &data("degenerate_z2.json")]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("modular: NO"));
    assert!(out.stdout.contains("verlinde roundtrip: SKIPPED"));
}

#[test]
fn category_files_load_and_run() {
    let toric = data("toric.json");
    let out = cli(&["validate", &toric]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let out = cli(&["orbifold", "--input", &toric, "--n", "2"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    // mu = 4, so sum d^2 = 4 * 16 = 64
    assert!(
        out.stdout
            .contains("completeness: sum d^2 = 64.0000000  target n^2*mu^n = 64.0000000  PASS"),
        "{}",
        out.stdout
    );
}

#[test]
fn untwisted_only_supports_large_n() {
    let out = cli(&[
        "orbifold",
        "--catalog",
        "Fibonacci",
        "--n",
        "6",
        "--untwisted-only",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("untwisted: sum d^2"));
    assert!(out.stdout.contains("PASS"));
}

#[test]
fn k_one_must_be_coprime() {
    let out = cli(&["orbifold", "--catalog", "Ising", "--n", "4", "--k-one", "2"]);
    assert_eq!(out.code, 4);
    let out = cli(&["orbifold", "--catalog", "Ising", "--n", "4", "--k-one", "3"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("k(1) = 3"));
}

#[test]
fn spawned_binary_is_deterministic() {
    let exe = env!("CARGO_BIN_EXE_cyclorb");
    let run_once = || {
        Command::new(exe)
            .args(["orbifold", "--catalog", "Ising", "--n", "2"])
            .output()
            .expect("binary runs")
    };
    let first = run_once();
    let second = run_once();
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first.stderr, second.stderr);
    // and the in-process runner agrees with the binary byte for byte
    let inproc = cli(&["orbifold", "--catalog", "Ising", "--n", "2"]);
    assert_eq!(String::from_utf8(first.stdout).unwrap(), inproc.stdout);
}
