//! Command-line frontend: evaluate registered maps at points, run
//! verification suites, run degeneracy sweeps, and sample points.
//!
//! Exit codes: 0 success/pass, 1 verification failure, 2 usage error.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::manifold::{embed7, sample_s6, PointS6};
use crate::maps::{parse_map, MapFamily, NamedMap};
use crate::quat::{PureImaginary, Quaternion};
use crate::verify::{
    degeneracy_sweep, residual_suite, s_grid, sweep_csv_header, sweep_csv_row, SUITE_NAMES,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser)]
#[command(name = "jprocess", about = "Quaternionic J-process laboratory on S^6")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a registered map at a point (or at a seed-sampled point)
    Eval {
        /// Map name: bm, bm_pow:<n>, H:<s>, Q, sigma:<k>, R, inv_sigma,
        /// inv_R, inv_H:<s>
        map: String,
        /// Point literal `(bi+cj+dk, a+bi+cj+dk)`
        #[arg(long)]
        point: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a verification suite (or `all`); reports stream as JSON lines
    Check {
        /// Suite name or `all`
        suite: String,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep determinant/singular-value statistics of J_{alpha_s} over s
    Sweep {
        /// Family name: H, H_pow:<k>, demo_nonequiv
        family: String,
        #[arg(long, default_value_t = 21)]
        grid: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "fd-step", default_value_t = 1e-5)]
        fd_step: f64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print uniform sample points of S^6, deterministic by seed
    Sample {
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parse a quaternion literal `a+bi+cj+dk` with decimal coefficients.
pub fn parse_quat_literal(input: &str) -> Result<Quaternion> {
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty quaternion literal".into()));
    }
    let chars: Vec<char> = s.chars().collect();
    let mut pos = 0;
    let mut q = Quaternion::ZERO;
    while pos < chars.len() {
        let mut sign = 1.0;
        let mut saw_sign = false;
        while pos < chars.len() && (chars[pos] == '+' || chars[pos] == '-') {
            if chars[pos] == '-' {
                sign = -sign;
            }
            saw_sign = true;
            pos += 1;
        }
        let num_start = pos;
        while pos < chars.len() && (chars[pos].is_ascii_digit() || chars[pos] == '.') {
            pos += 1;
        }
        // exponent part
        if pos < chars.len()
            && (chars[pos] == 'e' || chars[pos] == 'E')
            && pos > num_start
            && pos + 1 < chars.len()
            && (chars[pos + 1].is_ascii_digit() || chars[pos + 1] == '+' || chars[pos + 1] == '-')
        {
            pos += 2;
            while pos < chars.len() && chars[pos].is_ascii_digit() {
                pos += 1;
            }
        }
        let num_str: String = chars[num_start..pos].iter().collect();
        let unit = if pos < chars.len() && matches!(chars[pos], 'i' | 'j' | 'k') {
            let u = chars[pos];
            pos += 1;
            Some(u)
        } else {
            None
        };
        if num_str.is_empty() && unit.is_none() {
            return Err(Error::Parse(format!("malformed quaternion literal `{input}`")));
        }
        if num_str.is_empty() && !saw_sign && num_start != 0 {
            // bare unit directly after another term without a sign, e.g. "1i j"
            return Err(Error::Parse(format!("malformed quaternion literal `{input}`")));
        }
        let coef = if num_str.is_empty() {
            1.0
        } else {
            num_str
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad coefficient `{num_str}` in `{input}`")))?
        };
        let v = sign * coef;
        match unit {
            None => q.a += v,
            Some('i') => q.b += v,
            Some('j') => q.c += v,
            Some('k') => q.d += v,
            _ => unreachable!(),
        }
    }
    Ok(q)
}

/// Parse a point literal `(bi+cj+dk, a+bi+cj+dk)`.
pub fn parse_point_literal(input: &str) -> Result<PointS6> {
    let s = input.trim();
    let inner = s
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| Error::Parse(format!("point literal must be parenthesized: `{input}`")))?;
    let (p_str, w_str) = inner
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("point literal needs two components: `{input}`")))?;
    let p = parse_quat_literal(p_str)?;
    if p.a != 0.0 {
        return Err(Error::Parse(format!(
            "first component must be pure imaginary, got scalar part {}",
            p.a
        )));
    }
    let w = parse_quat_literal(w_str)?;
    PointS6::new(PureImaginary::new(p.b, p.c, p.d), w)
}

fn open_out(out: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    match out {
        Some(path) => Ok(Box::new(BufWriter::new(File::create(path)?))),
        None => Ok(Box::new(io::stdout().lock())),
    }
}

fn usage_error(e: impl std::fmt::Display) -> i32 {
    eprintln!("error: {e}");
    EXIT_USAGE
}

fn cmd_eval(map: &str, point: &Option<String>, seed: u64) -> i32 {
    let named = match parse_map(map) {
        Ok(m) => m,
        Err(e) => return usage_error(e),
    };
    let x = match point {
        Some(lit) => match parse_point_literal(lit) {
            Ok(x) => x,
            Err(e) => return usage_error(e),
        },
        None => sample_s6(seed, 1)[0],
    };
    let rendered = match named {
        NamedMap::Group(g) => g.eval(&x).map(|q| serde_json::to_string(&q).unwrap()),
        NamedMap::SelfMap(f) => f.eval(&x).map(|y| serde_json::to_string(&y).unwrap()),
    };
    match rendered {
        Ok(s) => {
            println!("{s}");
            EXIT_OK
        }
        Err(e) => usage_error(e),
    }
}

fn cmd_check(
    suite: &str,
    samples: usize,
    seed: u64,
    format: Format,
    out: &Option<PathBuf>,
) -> i32 {
    if samples < 1 {
        return usage_error("samples must be >= 1");
    }
    let names: Vec<&str> = if suite == "all" {
        SUITE_NAMES.to_vec()
    } else if SUITE_NAMES.contains(&suite) {
        vec![suite]
    } else {
        return usage_error(Error::UnknownSuite(suite.to_string()));
    };
    let mut w = match open_out(out) {
        Ok(w) => w,
        Err(e) => return usage_error(e),
    };
    if format == Format::Csv {
        let _ = writeln!(w, "suite,samples,max_residual,mean_residual,threshold,pass");
    }
    let mut all_pass = true;
    for name in names {
        let report = match residual_suite(name, samples, seed) {
            Ok(r) => r,
            Err(e) => return usage_error(e),
        };
        all_pass &= report.pass;
        let line = match format {
            Format::Json => serde_json::to_string(&report).unwrap(),
            Format::Csv => format!(
                "{},{},{},{},{},{}",
                report.suite,
                report.samples,
                report.max_residual,
                report.mean_residual,
                report.threshold,
                report.pass
            ),
        };
        let _ = writeln!(w, "{line}");
    }
    if all_pass {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

fn cmd_sweep(
    family: &str,
    grid: usize,
    samples: usize,
    seed: u64,
    fd_step: f64,
    format: Format,
    out: &Option<PathBuf>,
) -> i32 {
    if samples < 1 || grid < 1 {
        return usage_error("samples and grid must be >= 1");
    }
    let fam = match MapFamily::parse(family) {
        Ok(f) => f,
        Err(e) => return usage_error(e),
    };
    let grid_vals = s_grid(grid);
    let records = match degeneracy_sweep(fam, &grid_vals, samples, seed, fd_step) {
        Ok(r) => r,
        Err(e) => return usage_error(e),
    };
    let mut w = match open_out(out) {
        Ok(w) => w,
        Err(e) => return usage_error(e),
    };
    match format {
        Format::Csv => {
            let _ = writeln!(w, "{}", sweep_csv_header());
            for r in &records {
                let _ = writeln!(w, "{}", sweep_csv_row(r));
            }
        }
        Format::Json => {
            for r in &records {
                let _ = writeln!(w, "{}", serde_json::to_string(r).unwrap());
            }
        }
    }
    if fam.is_equivariant() && records.iter().any(|r| r.sign_changes > 0) {
        EXIT_FAIL
    } else {
        EXIT_OK
    }
}

fn cmd_sample(n: usize, seed: u64, format: Format, out: &Option<PathBuf>) -> i32 {
    if n < 1 {
        return usage_error("n must be >= 1");
    }
    let mut w = match open_out(out) {
        Ok(w) => w,
        Err(e) => return usage_error(e),
    };
    for x in sample_s6(seed, n) {
        let line = match format {
            Format::Json => serde_json::to_string(&x).unwrap(),
            Format::Csv => {
                let v = embed7(&x);
                v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
            }
        };
        let _ = writeln!(w, "{line}");
    }
    EXIT_OK
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Eval { map, point, seed } => cmd_eval(&map, &point, seed),
        Cmd::Check { suite, samples, seed, format, out } => {
            cmd_check(&suite, samples, seed, format, &out)
        }
        Cmd::Sweep { family, grid, samples, seed, fd_step, format, out } => {
            cmd_sweep(&family, grid, samples, seed, fd_step, format, &out)
        }
        Cmd::Sample { n, seed, format, out } => cmd_sample(n, seed, format, &out),
    }
}
