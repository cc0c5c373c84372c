use hallsym::cli::run_with;
use hallsym::hall_classical::{self, HallElement1};
use hallsym::hall_cyclic::{self, HallElementN};
use hallsym::partitions::{MultiPartition, Partition};
use hallsym::symfunc::SymFunc;
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("hallsym").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn ok(args: &[&str]) -> String {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    out
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&ok(args)).unwrap()
}

fn p(s: &str) -> Partition {
    s.parse().unwrap()
}

fn mp(s: &str) -> MultiPartition {
    s.parse().unwrap()
}

#[test]
fn hall_poly_example() {
    assert_eq!(ok(&["hall-poly", "--n", "1", "--lam", "1", "--mu", "1", "--xi", "1,1"]), "T + 1\n");
    // the submodule of a uniserial module is unique
    assert_eq!(ok(&["hall-poly", "--lam", "1", "--mu", "1", "--xi", "2"]), "1\n");
    assert_eq!(ok(&["hall-poly", "--n", "2", "--lam", "1;0", "--mu", "0;1", "--xi", "1;1"]), "1\n");
}

#[test]
fn canon_example() {
    let v = json(&["canon", "--n", "1", "--lam", "2"]);
    let b = HallElement1::from_json(&v).unwrap();
    let want = HallElement1::basis(p("2")).add(&HallElement1::basis(p("1,1")));
    assert_eq!(b, want);
}

#[test]
fn sym_pair_example() {
    assert_eq!(ok(&["sym-pair", "--basis", "c", "--lam", "3", "--mu", "3"]), "1 - t\n");
    assert_eq!(ok(&["sym-pair", "--basis", "s", "--lam", "2,1", "--mu", "2,1", "--plain"]), "1\n");
    assert_eq!(ok(&["sym-pair", "--basis", "h", "--basis2", "m", "--lam", "2,1", "--mu", "3", "--plain"]), "0\n");
}

#[test]
fn json_round_trips() {
    let v = json(&["sym-convert", "--from", "s", "--to", "e", "--lam", "2,2"]);
    let f = SymFunc::from_json(&v).unwrap();
    let s = SymFunc::basis_element(hallsym::symfunc::Basis::S, p("2,2"));
    assert_eq!(f.to_p().unwrap(), s.to_p().unwrap());

    let v = json(&["--n", "2", "hall-mult", "--lam", "1;0", "--mu", "0;1", "--lam-k", "1,0"]);
    let x = HallElementN::from_json(&v).unwrap();
    let k = hall_cyclic::KClass::new(vec![1, 0]);
    let want = HallElementN::basis_k(mp("1;0"), k).multiply(&HallElementN::basis(mp("0;1"))).unwrap();
    assert_eq!(x, want);

    let v = json(&["--n", "3", "centre", "--r", "1"]);
    assert_eq!(HallElementN::from_json(&v).unwrap(), hall_cyclic::central_x(3, 1));

    let v = json(&["--n", "2", "dual-canon", "--lam", "1;1"]);
    assert_eq!(HallElementN::from_json(&v).unwrap(), hall_cyclic::central_x(2, 1));

    let v = json(&["canon", "--deg", "3"]);
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), 3);
    for e in arr {
        let b = HallElement1::from_json(e).unwrap();
        assert_eq!(hall_classical::bar(&b).unwrap(), b);
    }
}

#[test]
fn tsv_tables() {
    let t = ok(&["canon", "--deg", "2", "--format", "tsv"]);
    assert_eq!(t, "(2)\tu(2) + u(1,1)\tũ(2) + q^-1ũ(1,1)\n(1,1)\tqu(1,1)\tũ(1,1)\n");
    let t = ok(&["--n", "2", "conjecture", "--lam", "1", "--format", "tsv"]);
    assert_eq!(t, "(1)\t2\tdual\tEQUAL\n(1)\t2\tprojection\tEQUAL\n");
    let t = ok(&["--n", "2", "centre", "--upto", "2", "--format", "tsv"]);
    assert_eq!(t.lines().count(), 2);
}

#[test]
fn conjecture_json() {
    let v = json(&["--n", "2", "conjecture", "--lam", "1"]);
    assert_eq!(v["dual_side"], "equal");
    assert_eq!(v["projection_side"], "equal");
    assert_eq!(v["n"], 2);
}

#[test]
fn deterministic_output() {
    let cases: Vec<Vec<&str>> = vec![
        vec!["canon", "--deg", "4"],
        vec!["--n", "2", "canon", "--deg", "3", "--format", "tsv"],
        vec!["--n", "2", "centre", "--r", "2"],
        vec!["sym-convert", "--from", "HL", "--to", "s", "--lam", "3,1"],
        vec!["verify", "--suite", "partitions"],
        vec!["--n", "2", "conjecture", "--lam", "2"],
    ];
    for c in cases {
        assert_eq!(ok(&c), ok(&c), "{c:?}");
    }
}

#[test]
fn oracle_counts() {
    assert_eq!(ok(&["oracle-count", "--lam", "1", "--mu", "1", "--xi", "1,1", "--q", "3"]), "4\n");
    assert_eq!(ok(&["oracle-count", "--lam", "1,1", "--q", "2", "--what", "aut"]), "6\n");
    // q^2 - 1 embeddings of the simple, each with q - 1 quotient maps
    let e: u64 = ok(&["oracle-count", "--lam", "1", "--mu", "1", "--xi", "1,1", "--q", "2", "--what", "sequences"]).trim().parse().unwrap();
    assert_eq!(e, 3);
}

#[test]
fn verify_exit_codes() {
    let (code, out, _) = run(&["verify", "--suite", "partitions", "--format", "tsv"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("partitions\tPASS\t"));
    let (code, _, err) = run(&["verify", "--suite", "nonsense"]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown suite"));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["bogus"],
        vec!["hall-poly", "--lam", "x", "--mu", "1", "--xi", "2"],
        vec!["--n", "2", "hall-poly", "--lam", "1", "--mu", "1", "--xi", "2"],
        vec!["sym-pair", "--basis", "zz", "--lam", "1", "--mu", "1"],
        vec!["canon"],
        vec!["oracle-count", "--lam", "1", "--mu", "1", "--xi", "2", "--q", "4"],
        vec!["--n", "2", "hall-mult", "--lam", "1;0", "--mu", "0;1", "--lam-k", "1"],
        vec!["--n", "0", "centre", "--r", "1"],
    ] {
        let (code, _, err) = run(&args);
        assert_eq!(code, 2, "{args:?}: {err}");
    }
}

#[test]
fn bound_errors_exit_3_and_name_the_triple() {
    let (code, _, err) = run(&["--n", "3", "hall-poly", "--lam", "2;1;0", "--mu", "1;1;1", "--xi", "2,1;1,1;1"]);
    assert_eq!(code, 3);
    assert!(err.contains("(2,1;1,1;1)") && err.contains("(2;1;0)") && err.contains("(1;1;1)"), "{err}");
    let (code, _, _) = run(&["sym-convert", "--from", "s", "--to", "e", "--lam", "40"]);
    assert_eq!(code, 3);
}

#[test]
fn cache_warm_writes_the_cache() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let v = json(&["--n", "2", "--cache-dir", d, "cache-warm", "--max-total", "2"]);
    assert_eq!(v["skipped"].as_array().unwrap().len(), 0);
    assert!(v["computed"].as_u64().unwrap() > 0);
    assert!(dir.path().join("hall_polynomials.json").exists());
    // a second run reads back the same entries
    let w = json(&["--n", "2", "--cache-dir", d, "cache-warm", "--max-total", "2"]);
    assert_eq!(v["cache"], w["cache"]);
}

#[test]
fn help_exits_0() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("hall-poly"));
}
