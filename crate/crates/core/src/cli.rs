//! The `hallsym` command line.
//!
//! Exit codes: 0 success, 1 verification failure or internal error, 2 usage
//! error, 3 resource bound exceeded.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fq_oracle::{self, InterpolationCache};
use crate::hall_classical::{self as hc, HallBasis, HallElement1};
use crate::hall_cyclic::{self as hn, HallElementN, KClass};
use crate::hall_engine::HallEngine;
use crate::partitions::{compositions_of, multipartitions_with_dim, MultiPartition, Partition};
use crate::symfunc::{self as sf, Basis, SymFunc};
use crate::verify;

#[derive(Parser, Debug)]
#[command(name = "hallsym", version, about = "Symmetric functions, Hall polynomials and Ringel-Hall algebras of cyclic quivers")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Rank of the cyclic quiver (1 is the Jordan quiver)
    #[arg(long, global = true, default_value_t = 1)]
    n: usize,
    /// Degree cap for symmetric functions and Hall algebra tables
    #[arg(long, global = true)]
    deg_cap: Option<u32>,
    /// Largest prime used by the finite-field oracle
    #[arg(long, global = true)]
    field_bound: Option<u32>,
    /// Interpolation cache directory (default: $HALLSYM_CACHE_DIR or .hallsym-cache)
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Expand a basis element of Λ in another basis
    SymConvert {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long)]
        lam: String,
    },
    /// Pair two basis elements of Λ (t-deformed unless --plain)
    SymPair {
        #[arg(long)]
        basis: String,
        /// Basis of the second argument, if different
        #[arg(long)]
        basis2: Option<String>,
        #[arg(long)]
        lam: String,
        #[arg(long)]
        mu: String,
        /// Use the Hall inner product (t = 0)
        #[arg(long)]
        plain: bool,
    },
    /// The Hall polynomial F^xi_{lam,mu}(T)
    HallPoly {
        #[arg(long)]
        lam: String,
        #[arg(long)]
        mu: String,
        #[arg(long)]
        xi: String,
    },
    /// The product u_lam K_a * u_mu K_b
    HallMult {
        #[arg(long)]
        lam: String,
        #[arg(long)]
        mu: String,
        /// K-class of the first factor, comma separated
        #[arg(long)]
        lam_k: Option<String>,
        /// K-class of the second factor, comma separated
        #[arg(long)]
        mu_k: Option<String>,
    },
    /// Canonical basis elements
    Canon(Select),
    /// Dual canonical basis elements
    DualCanon(Select),
    /// Centre elements x_r or x_lambda
    Centre {
        #[arg(long, conflicts_with = "lam")]
        r: Option<u32>,
        #[arg(long)]
        lam: Option<String>,
        /// All x_1 .. x_R
        #[arg(long, conflicts_with_all = ["r", "lam"])]
        upto: Option<u32>,
    },
    /// Report on both sides of the canonical-basis conjecture for (lam, n)
    Conjecture {
        #[arg(long)]
        lam: String,
    },
    /// Run invariant suites
    Verify {
        #[arg(long, required_unless_present = "all")]
        suite: Vec<String>,
        #[arg(long)]
        all: bool,
    },
    /// Brute-force count over F_q
    OracleCount {
        #[arg(long)]
        lam: String,
        #[arg(long)]
        mu: Option<String>,
        #[arg(long)]
        xi: Option<String>,
        #[arg(long)]
        q: u32,
        #[arg(long, value_enum, default_value_t = Count::Hall)]
        what: Count,
    },
    /// Interpolate Hall polynomials into the cache
    CacheWarm {
        #[arg(long)]
        max_total: u32,
    },
}

#[derive(Args, Debug)]
struct Select {
    #[arg(long, required_unless_present = "deg")]
    lam: Option<String>,
    /// Every label of this total dimension
    #[arg(long, conflicts_with = "lam")]
    deg: Option<u32>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Count {
    /// Hall number F^xi_{lam,mu}
    Hall,
    /// Short exact sequences 0 -> mu -> xi -> lam -> 0
    Sequences,
    /// |Aut lam|
    Aut,
}

/// Runs the command line on `argv` (including the program name), printing to
/// stdout and stderr.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// As `run`, with explicit output streams.
pub fn run_with<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::BoundExceeded(_) => 3,
                Error::Parse(_) | Error::InvalidArgument(_) | Error::RankMismatch(..) | Error::WeightMismatch(..) => 2,
                _ => 1,
            }
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    writeln!(out, "{text}")?;
    Ok(())
}

fn emit_json(out: &mut dyn Write, v: &Value) -> Result<()> {
    emit(out, &serde_json::to_string_pretty(v)?)
}

fn basis(s: &str) -> Result<Basis> {
    s.parse().map_err(|_| Error::InvalidArgument(format!("unknown basis {s:?}")))
}

fn partition(s: &str) -> Result<Partition> {
    s.parse()
}

fn mpart(s: &str, n: usize) -> Result<MultiPartition> {
    let m: MultiPartition = s.parse()?;
    if m.rank() != n {
        return Err(Error::InvalidArgument(format!("{s:?} has {} components but --n is {n}", m.rank())));
    }
    Ok(m)
}

fn kclass(s: Option<&str>, n: usize) -> Result<KClass> {
    let Some(s) = s else { return Ok(KClass::zero(n)) };
    let v = s
        .split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad K-class entry {x:?}"))))
        .collect::<Result<Vec<_>>>()?;
    if v.len() != n {
        return Err(Error::InvalidArgument(format!("K-class {s:?} needs {n} entries")));
    }
    Ok(KClass::new(v))
}

fn labels(sel: &Select, n: usize) -> Result<Vec<MultiPartition>> {
    match (&sel.lam, sel.deg) {
        (Some(l), _) => Ok(vec![mpart(l, n)?]),
        (None, Some(d)) => Ok(compositions_of(d, n).iter().flat_map(multipartitions_with_dim).collect()),
        (None, None) => Err(Error::InvalidArgument("give --lam or --deg".into())),
    }
}

fn apply_global(g: &Global) -> Result<()> {
    if g.n == 0 {
        return Err(Error::InvalidArgument("--n must be at least 1".into()));
    }
    if let Some(d) = g.deg_cap {
        if d == 0 {
            return Err(Error::InvalidArgument("--deg-cap must be positive".into()));
        }
        sf::set_degree_cap(d);
        HallEngine::shared(g.n).set_cap(d);
    }
    if let Some(q) = g.field_bound {
        if q < 2 {
            return Err(Error::InvalidArgument("--field-bound must be at least 2".into()));
        }
        fq_oracle::set_field_bound(q);
    }
    Ok(())
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let g = &cli.global;
    apply_global(g)?;
    let n = g.n;
    let tsv = g.format == Format::Tsv;
    match &cli.cmd {
        Command::SymConvert { from, to, lam } => {
            let (from, to, l) = (basis(from)?, basis(to)?, partition(lam)?);
            let f = SymFunc::basis_element(from, l).convert(to)?;
            if tsv {
                for (k, c) in f.terms() {
                    emit(out, &format!("{k}\t{c}"))?;
                }
            } else {
                emit_json(out, &f.to_json())?;
            }
        }
        Command::SymPair { basis: b, basis2, lam, mu, plain } => {
            let b1 = basis(b)?;
            let b2 = basis(basis2.as_deref().unwrap_or(b))?;
            let f = SymFunc::basis_element(b1, partition(lam)?);
            let h = SymFunc::basis_element(b2, partition(mu)?);
            let p = if *plain { sf::pairing(&f, &h)? } else { sf::pairing_t(&f, &h)? };
            emit(out, &p.to_string())?;
        }
        Command::HallPoly { lam, mu, xi } => {
            let (a, b, x) = (mpart(lam, n)?, mpart(mu, n)?, mpart(xi, n)?);
            let name = |e: Error| match e {
                Error::BoundExceeded(m) => Error::BoundExceeded(format!("F^{x}_{a},{b}: {m}")),
                e => e,
            };
            let f = if n == 1 {
                hc::hall_polynomial(a.component(1), b.component(1), x.component(1))
            } else {
                HallEngine::shared(n).hall_polynomial(&a, &b, &x)
            }
            .map_err(name)?;
            emit(out, &f.display_desc("T"))?;
        }
        Command::HallMult { lam, mu, lam_k, mu_k } => {
            let (a, b) = (mpart(lam, n)?, mpart(mu, n)?);
            let x = HallElementN::basis_k(a, kclass(lam_k.as_deref(), n)?);
            let y = HallElementN::basis_k(b, kclass(mu_k.as_deref(), n)?);
            let p = x.multiply(&y)?;
            if tsv {
                for ((m, k), c) in p.terms() {
                    emit(out, &format!("{m}\t{k}\t{}", hc::coeff_string(c)))?;
                }
            } else {
                emit_json(out, &p.to_json())?;
            }
        }
        Command::Canon(sel) | Command::DualCanon(sel) => {
            let dual = matches!(cli.cmd, Command::DualCanon(_));
            let ls = labels(sel, n)?;
            let mut rows = Vec::new();
            for m in &ls {
                let row = if n == 1 {
                    let l = m.component(1);
                    let b = if dual { hc::dual_canonical_basis(l)? } else { hc::canonical_basis(l)? };
                    canon_row1(l, &b, tsv)?
                } else {
                    let b = if dual { hn::dual_canonical_basis_n(m)? } else { hn::canonical_basis_n(m)? };
                    canon_row_n(m, &b, tsv)
                };
                rows.push(row);
            }
            if tsv {
                for r in rows {
                    emit(out, r.as_str().unwrap_or_default())?;
                }
            } else if sel.lam.is_some() {
                emit_json(out, &rows[0])?;
            } else {
                emit_json(out, &Value::Array(rows))?;
            }
        }
        Command::Centre { r, lam, upto } => {
            let items: Vec<(String, HallElementN)> = match (r, lam, upto) {
                (Some(r), None, None) => vec![(r.to_string(), centre_x(n, *r)?)],
                (None, Some(l), None) => {
                    let l = partition(l)?;
                    vec![(l.to_string(), hn::central_x_lambda(n, &l)?)]
                }
                (None, None, Some(u)) => (1..=*u).map(|r| Ok((r.to_string(), centre_x(n, r)?))).collect::<Result<_>>()?,
                _ => return Err(Error::InvalidArgument("give one of --r, --lam, --upto".into())),
            };
            if tsv {
                for (k, x) in &items {
                    emit(out, &format!("{n}\t{k}\t{x}"))?;
                }
            } else if items.len() == 1 {
                emit_json(out, &items[0].1.to_json())?;
            } else {
                emit_json(out, &Value::Array(items.iter().map(|(_, x)| x.to_json()).collect()))?;
            }
        }
        Command::Conjecture { lam } => {
            let l = partition(lam)?;
            if l.is_empty() {
                return Err(Error::InvalidArgument("--lam must be nonempty".into()));
            }
            let rep = hn::conjecture_report(&l, n);
            if tsv {
                let word = |s: &hn::Side| match s {
                    hn::Side::Equal => "EQUAL".to_string(),
                    hn::Side::Differs(d) => format!("DIFFERS\t{d}"),
                    hn::Side::Failed(e) => format!("FAILED\t{e}"),
                };
                emit(out, &format!("{l}\t{n}\tdual\t{}", word(&rep.dual_side)))?;
                emit(out, &format!("{l}\t{n}\tprojection\t{}", word(&rep.projection_side)))?;
            } else {
                emit_json(out, &rep.to_json())?;
            }
        }
        Command::Verify { suite, all } => {
            let reports = if *all {
                verify::run_all()
            } else {
                suite.iter().map(|s| verify::run_suite(s)).collect::<Result<Vec<_>>>()?
            };
            let ok = reports.iter().all(|r| r.passed());
            for r in &reports {
                // timings vary between runs, so they go to stderr
                let _ = writeln!(err, "{}: {:.1}s", r.name, r.elapsed.as_secs_f64());
            }
            if tsv {
                for r in &reports {
                    let status = if r.passed() { "PASS" } else { "FAIL" };
                    emit(out, &format!("{}\t{status}\t{}\t{}", r.name, r.checks, r.failures.len()))?;
                    for f in &r.failures {
                        emit(out, &format!("{}\tfailure\t{f}", r.name))?;
                    }
                }
            } else {
                emit_json(out, &Value::Array(reports.iter().map(|r| r.to_json()).collect()))?;
            }
            return Ok(if ok { 0 } else { 1 });
        }
        Command::OracleCount { lam, mu, xi, q, what } => {
            if !fq_oracle::PRIMES.contains(q) {
                return Err(Error::InvalidArgument(format!("q = {q} is not a supported prime")));
            }
            let a = mpart(lam, n)?;
            let need = |s: &Option<String>, flag: &str| -> Result<MultiPartition> {
                mpart(s.as_deref().ok_or_else(|| Error::InvalidArgument(format!("{flag} is required")))?, n)
            };
            let count: u128 = match what {
                Count::Aut => fq_oracle::count_automorphisms(&a, *q)?,
                Count::Hall => fq_oracle::count_hall_number(&a, &need(mu, "--mu")?, &need(xi, "--xi")?, *q)? as u128,
                Count::Sequences => fq_oracle::count_exact_sequences(&a, &need(mu, "--mu")?, &need(xi, "--xi")?, *q)? as u128,
            };
            emit(out, &count.to_string())?;
        }
        Command::CacheWarm { max_total } => {
            let dir = g.cache_dir.clone().unwrap_or_else(fq_oracle::default_cache_dir);
            let cache = InterpolationCache::open(&dir)?;
            let rep = fq_oracle::cache_warm(&cache, n, *max_total)?;
            if tsv {
                emit(out, &format!("computed\t{}", rep.computed))?;
                for s in &rep.skipped {
                    emit(out, &format!("skipped\t{s}"))?;
                }
            } else {
                emit_json(out, &json!({ "n": n, "computed": rep.computed, "skipped": rep.skipped, "cache": cache.len() }))?;
            }
        }
    }
    Ok(0)
}

fn centre_x(n: usize, r: u32) -> Result<HallElementN> {
    if r == 0 {
        return Err(Error::InvalidArgument("--r must be positive".into()));
    }
    Ok(hn::central_x(n, r))
}

fn canon_row1(l: &Partition, b: &HallElement1, tsv: bool) -> Result<Value> {
    if tsv {
        let u = b.display_in(HallBasis::U)?;
        let p = b.display_in(HallBasis::Pbw)?;
        Ok(Value::String(format!("{l}\t{u}\t{p}")))
    } else {
        b.to_json_in(HallBasis::U)
    }
}

fn canon_row_n(m: &MultiPartition, b: &HallElementN, tsv: bool) -> Value {
    if tsv {
        Value::String(format!("{m}\t{b}\t{}", b.display_pbw()))
    } else {
        b.to_json()
    }
}

