//! Command-line driver.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::farey::{b_range_search, conjecture_evidence, exact_integral, sign_sum};
use crate::irrational::IrrationalSlope;
use crate::matrep::{aux_matrix, det_exact, factor_matrix, m_from_alpha, reconstruct_sigma, IntMatrix};
use crate::permtool::{pi_direct, FracPermutation};
use crate::sturmian::{factor_set, Intercept, Rounding, WordSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Tsv,
}

#[derive(Debug, Parser)]
#[command(name = "sturmlab", version, about = "Exact Sturmian factor simplices and fractional-part permutations")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Slope expression: phi, e, 1/e, sqrt(D), (A+B*sqrt(D))/C, cf:[a0;a1,...]
    #[arg(long, global = true, default_value = "phi", allow_hyphen_values = true)]
    pub alpha: String,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Refinement rounds allowed per exact decision
    #[arg(long, global = true, env = "SturmLAB_BUDGET", default_value_t = crate::irrational::DEFAULT_REFINEMENT_BUDGET)]
    pub budget: usize,

    /// Seed for randomized checks
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Write output here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Prefix of a Sturmian word
    Word {
        #[arg(long)]
        n: usize,
        /// Rational intercept r/s; the characteristic word when absent
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<String>,
        #[arg(long)]
        ceiling: bool,
    },
    /// Factors of length n in anti-lexicographic order
    Factors {
        #[arg(long)]
        n: usize,
    },
    /// The factor matrix M (or the auxiliary matrix L)
    Matrix {
        #[arg(long)]
        n: Option<usize>,
        /// Use this permutation (one-line, e.g. [5,2,3,1,4]) instead of the slope
        #[arg(long)]
        perm: Option<String>,
        #[arg(long)]
        aux: bool,
    },
    /// The permutation ordering {alpha}, ..., {n alpha}
    Perm {
        #[arg(long)]
        n: usize,
    },
    /// Sign and order for a range of n
    Table {
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
    },
    /// Volume of the factor simplex
    Volume {
        #[arg(long)]
        n: usize,
    },
    /// Exact integral over alpha of the order
    Integral {
        #[arg(long, default_value_t = 1)]
        from: usize,
        #[arg(long)]
        to: usize,
    },
    /// Running sum of signs
    Signsum {
        #[arg(long = "N", default_value_t = 442_412)]
        big_n: u64,
    },
    /// Least k with B_alpha(k) = target
    Brange {
        #[arg(long)]
        target: u64,
        #[arg(long, default_value_t = 1_000_000)]
        kmax: u64,
    },
    /// Congruence of two factor simplices
    Congruence {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long)]
        n: usize,
    },
    /// Quick internal consistency checks
    Selftest,
}

/// Parses `args` (including the program name), runs, and returns the exit status.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    let format = cli.global.format;
    match run(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = report(&e, format, err);
            1
        }
    }
}

fn report(e: &Error, format: Format, err: &mut dyn Write) -> io::Result<()> {
    match format {
        Format::Json => writeln!(
            err,
            "{}",
            json!({"error": {"code": e.code(), "message": e.to_string()}})
        ),
        _ => writeln!(err, "error[{}]: {e}", e.code()),
    }
}

/// Runs a parsed command, writing to `--out` when given and to `out` otherwise.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    let mut buf = Vec::new();
    let status = dispatch(cli, &mut buf);
    let io_err = |e: io::Error| Error::InvalidArgument(format!("cannot write output: {e}"));
    match &cli.global.out {
        Some(path) => File::create(path)
            .and_then(|mut f| f.write_all(&buf))
            .map_err(io_err)?,
        None => out.write_all(&buf).map_err(io_err)?,
    }
    status
}

fn slope(expr: &str, g: &Global) -> Result<IrrationalSlope> {
    Ok(expr.parse::<IrrationalSlope>()?.with_budget(g.budget))
}

fn positive(name: &str, v: usize) -> Result<usize> {
    if v == 0 {
        Err(Error::InvalidArgument(format!("--{name} must be positive")))
    } else {
        Ok(v)
    }
}

fn range(from: usize, to: usize) -> Result<()> {
    if from == 0 || from > to {
        return Err(Error::InvalidArgument(format!("empty range {from}..={to}")));
    }
    Ok(())
}

fn meta(g: &Global) -> serde_json::Value {
    json!({ "budget": g.budget, "version": env!("CARGO_PKG_VERSION") })
}

fn emit_json(w: &mut Vec<u8>, v: &impl Serialize) -> Result<()> {
    let s = serde_json::to_string_pretty(v)
        .map_err(|e| Error::InternalInvariantViolation(format!("json: {e}")))?;
    w.extend_from_slice(s.as_bytes());
    w.push(b'\n');
    Ok(())
}

fn line(w: &mut Vec<u8>, s: impl AsRef<str>) {
    w.extend_from_slice(s.as_ref().as_bytes());
    w.push(b'\n');
}

fn sep(format: Format) -> &'static str {
    if format == Format::Tsv {
        "\t"
    } else {
        ","
    }
}

fn matrix_rows(m: &IntMatrix) -> Vec<Vec<i64>> {
    m.to_rows()
}

fn emit_matrix(w: &mut Vec<u8>, m: &IntMatrix, format: Format, header: serde_json::Value) -> Result<()> {
    match format {
        Format::Json => {
            let mut v = header;
            v["rows"] = json!(matrix_rows(m));
            emit_json(w, &v)
        }
        f => {
            for r in matrix_rows(m) {
                let cells: Vec<String> = r.iter().map(ToString::to_string).collect();
                line(w, cells.join(sep(f)));
            }
            Ok(())
        }
    }
}

/// `value` to `digits` decimal places, truncated toward zero.
pub fn decimal(value: &BigRational, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = (value.abs() * BigRational::from_integer(scale.clone())).to_integer();
    let (int, frac) = scaled.div_rem(&scale);
    let sign = if value.is_negative() && !scaled.is_zero() { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{:0>width$}", frac.to_string(), width = digits as usize)
    }
}

#[derive(Serialize)]
struct PermRecord {
    alpha: String,
    n: usize,
    perm: Vec<usize>,
    cycles: Vec<Vec<usize>>,
    sign: i8,
    order: String,
    meta: serde_json::Value,
}

#[derive(Serialize)]
struct TableRow {
    n: usize,
    sign: i8,
    order: String,
}

/// `(n, sign, order)` for `n` in `from..=to`.
pub fn table_rows(alpha: &IrrationalSlope, from: usize, to: usize) -> Result<Vec<(usize, i8, String)>> {
    range(from, to)?;
    (from..=to)
        .into_par_iter()
        .map(|n| {
            let p = pi_direct(alpha, n)?;
            Ok((n, p.sign(), p.order().to_string()))
        })
        .collect()
}

fn dispatch(cli: &Cli, w: &mut Vec<u8>) -> Result<()> {
    let g = &cli.global;
    let format = g.format;
    match &cli.command {
        Command::Word { n, beta, ceiling } => {
            let alpha = slope(&g.alpha, g)?;
            let intercept = match beta {
                None => Intercept::Slope,
                Some(b) => Intercept::Rational(b.parse::<Rational64>().map_err(|_| {
                    Error::InvalidArgument(format!("--beta expects r/s, got `{b}`"))
                })?),
            };
            let rounding = if *ceiling { Rounding::Ceiling } else { Rounding::Floor };
            let word = WordSpec::new(&alpha, intercept, rounding)?.prefix(*n)?;
            let text: String = word.iter().map(|b| char::from(b'0' + b)).collect();
            match format {
                Format::Json => emit_json(w, &json!({"alpha": g.alpha, "n": n, "word": text, "meta": meta(g)})),
                f => {
                    let cells: Vec<String> = word.iter().map(ToString::to_string).collect();
                    line(w, cells.join(sep(f)));
                    Ok(())
                }
            }
        }
        Command::Factors { n } => {
            let alpha = slope(&g.alpha, g)?;
            let fs = factor_set(&alpha, positive("n", *n)?)?;
            let list: Vec<String> = fs.iter().map(ToString::to_string).collect();
            match format {
                Format::Json => emit_json(w, &json!({"alpha": g.alpha, "n": n, "factors": list, "meta": meta(g)})),
                _ => {
                    for f in list {
                        line(w, f);
                    }
                    Ok(())
                }
            }
        }
        Command::Matrix { n, perm, aux } => {
            let sigma = match (perm, n) {
                (Some(p), _) => p.parse::<FracPermutation>()?,
                (None, Some(n)) => pi_direct(&slope(&g.alpha, g)?, positive("n", *n)?)?,
                (None, None) => return Err(Error::InvalidArgument("give --n or --perm".into())),
            };
            let m = if *aux {
                aux_matrix(&sigma)?.matrix().clone()
            } else {
                factor_matrix(&sigma)?.into_matrix()
            };
            let header = json!({
                "alpha": if perm.is_some() { serde_json::Value::Null } else { json!(g.alpha) },
                "n": sigma.n(),
                "perm": sigma.one_line(),
                "kind": if *aux { "L" } else { "M" },
            });
            emit_matrix(w, &m, format, header)
        }
        Command::Perm { n } => {
            let alpha = slope(&g.alpha, g)?;
            let p = pi_direct(&alpha, positive("n", *n)?)?;
            let cycles = p.cycles();
            let rec = PermRecord {
                alpha: g.alpha.clone(),
                n: *n,
                perm: p.one_line().to_vec(),
                cycles: cycles.cycles().to_vec(),
                sign: p.sign(),
                order: p.order().to_string(),
                meta: meta(g),
            };
            match format {
                Format::Json => emit_json(w, &rec),
                f => {
                    let s = sep(f);
                    line(w, ["n", "perm", "cycles", "sign", "order"].join(s));
                    let (pt, ct) = if f == Format::Csv {
                        (format!("\"{p}\""), format!("\"{cycles}\""))
                    } else {
                        (p.to_string(), cycles.to_string())
                    };
                    line(w, format!("{n}{s}{pt}{s}{ct}{s}{}{s}{}", rec.sign, rec.order));
                    Ok(())
                }
            }
        }
        Command::Table { from, to } => {
            let alpha = slope(&g.alpha, g)?;
            let rows = table_rows(&alpha, *from, *to)?;
            match format {
                Format::Json => {
                    let rows: Vec<TableRow> = rows
                        .into_iter()
                        .map(|(n, sign, order)| TableRow { n, sign, order })
                        .collect();
                    emit_json(w, &json!({"alpha": g.alpha, "rows": rows, "meta": meta(g)}))
                }
                f => {
                    let s = sep(f);
                    line(w, ["n", "sign", "order"].join(s));
                    for (n, sign, order) in rows {
                        line(w, format!("{n}{s}{sign}{s}{order}"));
                    }
                    Ok(())
                }
            }
        }
        Command::Volume { n } => {
            let alpha = slope(&g.alpha, g)?;
            let m = m_from_alpha(&alpha, positive("n", *n)?)?;
            let det = det_exact(m.matrix());
            let fact: BigInt = (1..=*n).map(BigInt::from).product();
            let vol = BigRational::new(det.abs(), fact);
            match format {
                Format::Json => emit_json(
                    w,
                    &json!({"alpha": g.alpha, "n": n, "det": det.to_string(), "volume": vol.to_string(), "meta": meta(g)}),
                ),
                f => {
                    let s = sep(f);
                    line(w, ["n", "det", "volume"].join(s));
                    line(w, format!("{n}{s}{det}{s}{vol}"));
                    Ok(())
                }
            }
        }
        Command::Integral { from, to } => {
            range(*from, *to)?;
            let results = (*from..=*to).map(exact_integral).collect::<Result<Vec<_>>>()?;
            match format {
                Format::Json => {
                    let rows: Vec<_> = results
                        .iter()
                        .map(|r| {
                            json!({
                                "n": r.n,
                                "value": r.value.to_string(),
                                "decimal": decimal(&r.value, 6),
                                "cells": r.cells,
                                "length_sum": r.length_sum.to_string(),
                            })
                        })
                        .collect();
                    emit_json(w, &json!({"rows": rows, "meta": meta(g)}))
                }
                Format::Tsv => {
                    for r in &results {
                        line(w, format!("{}\t{}", r.n, decimal(&r.value, 6)));
                    }
                    Ok(())
                }
                Format::Csv => {
                    line(w, "n,value,decimal,cells,length_sum");
                    for r in &results {
                        line(
                            w,
                            format!("{},{},{},{},{}", r.n, r.value, decimal(&r.value, 6), r.cells, r.length_sum),
                        );
                    }
                    Ok(())
                }
            }
        }
        Command::Signsum { big_n } => {
            let alpha = slope(&g.alpha, g)?;
            let r = sign_sum(&alpha, *big_n)?;
            match format {
                Format::Json => emit_json(
                    w,
                    &json!({"alpha": g.alpha, "N": big_n, "final_sum": r.final_sum, "max_abs": r.max_abs, "argmax": r.argmax, "meta": meta(g)}),
                ),
                f => {
                    let s = sep(f);
                    line(w, ["N", "final_sum", "max_abs", "argmax"].join(s));
                    line(w, format!("{big_n}{s}{}{s}{}{s}{}", r.final_sum, r.max_abs, r.argmax));
                    Ok(())
                }
            }
        }
        Command::Brange { target, kmax } => {
            let alpha = slope(&g.alpha, g)?;
            let found = b_range_search(&alpha, *target, *kmax)?;
            let shown = found.map_or_else(|| "not_found".to_string(), |k| k.to_string());
            match format {
                Format::Json => emit_json(
                    w,
                    &json!({"alpha": g.alpha, "target": target, "kmax": kmax, "k": found, "meta": meta(g)}),
                ),
                f => {
                    let s = sep(f);
                    line(w, ["target", "kmax", "k"].join(s));
                    line(w, format!("{target}{s}{kmax}{s}{shown}"));
                    Ok(())
                }
            }
        }
        Command::Congruence { a, b, n } => {
            let (sa, sb) = (slope(a, g)?, slope(b, g)?);
            let ev = conjecture_evidence(&sa, &sb, positive("n", *n)?)?;
            let verdict = if ev.congruent { "congruent" } else { "not_congruent" };
            match format {
                Format::Json => emit_json(
                    w,
                    &json!({
                        "a": a, "b": b, "n": n,
                        "result": verdict,
                        "equal": ev.equal,
                        "equal_to_complement": ev.equal_to_complement,
                        "conjecture_consistent": ev.consistent(),
                        "meta": meta(g),
                    }),
                ),
                f => {
                    let s = sep(f);
                    line(w, ["n", "result", "equal", "equal_to_complement", "conjecture_consistent"].join(s));
                    line(w, format!("{n}{s}{verdict}{s}{}{s}{}{s}{}", ev.equal, ev.equal_to_complement, ev.consistent()));
                    Ok(())
                }
            }
        }
        Command::Selftest => selftest(g, w),
    }
}

fn selftest(g: &Global, w: &mut Vec<u8>) -> Result<()> {
    let mut failures = 0;
    let mut check = |name: &str, ok: Result<bool>| {
        let ok = matches!(ok, Ok(true));
        if !ok {
            failures += 1;
        }
        line(w, format!("{} {name}", if ok { "PASS" } else { "FAIL" }));
    };
    let phi = IrrationalSlope::phi();
    let e = IrrationalSlope::e();
    check(
        "pi(phi,5) = [5,2,4,1,3]",
        pi_direct(&phi, 5).map(|p| p.one_line() == [5, 2, 4, 1, 3]),
    );
    check(
        "ord(pi(e,123)) = 22383900",
        pi_direct(&e, 123).map(|p| p.order().to_string() == "22383900"),
    );
    check(
        "I(2) = 3/2",
        exact_integral(2).map(|r| r.value == BigRational::new(3.into(), 2.into())),
    );
    check(
        "|det M_n(1/e)| = 1, n <= 20",
        (1..=20).try_fold(true, |acc, n| {
            Ok(acc && det_exact(m_from_alpha(&IrrationalSlope::e_inv(), n)?.matrix()).abs() == BigInt::from(1))
        }),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
    let mut sample = || {
        let mut v: Vec<usize> = (1..=8).collect();
        v.shuffle(&mut rng);
        FracPermutation::new(v)
    };
    check(
        "M_t M_s = M_ts, 100 seeded pairs in S_8",
        (0..100).try_fold(true, |acc, _| {
            let (s, t) = (sample()?, sample()?);
            let lhs = &factor_matrix(&t)? * &factor_matrix(&s)?;
            Ok(acc && lhs == factor_matrix(&t.compose(&s))?.into_matrix())
        }),
    );
    check(
        "reconstruct(M_s) = s, 100 seeded s in S_8",
        (0..100).try_fold(true, |acc, _| {
            let s = sample()?;
            Ok(acc && reconstruct_sigma(factor_matrix(&s)?.matrix())? == s)
        }),
    );
    if failures > 0 {
        return Err(Error::InternalInvariantViolation(format!("{failures} self-test checks failed")));
    }
    Ok(())
}
