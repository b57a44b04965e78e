//! Command-line front end.
//!
//! Every global flag can also be set through an environment variable named
//! `LCSOCLE_<FLAG>` (for example `LCSOCLE_JOBS=4`); an explicit flag wins.
//! Exit codes: 0 on success, 1 when a verification fails, 2 on input or
//! configuration errors.

pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::annihilator::{ann_family, build_an, ideal_equal_upto, maximal_minors, GradedIdeal};
use crate::error::{Error, Result};
use crate::field::{Backend, Field, RationalField};
use crate::ring::{CoeffRing, RingDescriptor};
use crate::scenarios::{
    complement_closure_check, delta_matrix_check, vanishing_check, verify_theorem, BackendName, EllRange, Scenario,
    ScenarioSpec, Verdict,
};
use crate::socle::star_socle_table;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "lcsocle", version, about = "Graded pieces, socles and annihilators of top local cohomology of hypersurfaces")]
pub struct Cli {
    /// Field characteristic: a prime below 2^32, or 0 for the rationals.
    #[arg(long = "char", global = true, env = "LCSOCLE_CHAR")]
    pub characteristic: Option<u64>,
    #[arg(long, global = true, value_enum, default_value = "csv", env = "LCSOCLE_FORMAT")]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true, env = "LCSOCLE_OUT")]
    pub out: Option<PathBuf>,
    /// Worker threads for per-ell and per-n work; output does not depend on it.
    #[arg(long, global = true, env = "LCSOCLE_JOBS")]
    pub jobs: Option<usize>,
    /// Exit 0 instead of 1 when a verdict is inconclusive.
    #[arg(long, global = true, env = "LCSOCLE_ALLOW_INCONCLUSIVE")]
    pub allow_inconclusive: bool,
    /// Hard cap on the normalized degree scanned per ell, and on ideal checks.
    #[arg(long, global = true, env = "LCSOCLE_DEG_CAP")]
    pub deg_cap: Option<i64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check hypotheses and star socle nonvanishing over the ell range.
    Verify(ScenarioArgs),
    /// Star socle and socle dimensions per ell.
    Socle {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// One row per (ell, degree) instead of per ell.
        #[arg(long)]
        per_degree: bool,
    },
    /// Compare f mod m against vanishing of every cokernel component.
    Vanish(ScenarioArgs),
    /// Summand bases and the bidiagonal matrix of f for a two-term f, per q.
    Lsummand(ScenarioArgs),
    /// Annihilators and minors of the bidiagonal family, and their running intersection.
    AnnFamily {
        #[arg(long, default_value_t = 10)]
        n_max: usize,
        #[arg(long, default_value_t = 24)]
        cap: u32,
    },
    /// Maximal minors of the bidiagonal matrix A_n.
    Minors {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Debug, Default, Args)]
pub struct ScenarioArgs {
    /// Built-in scenario: hartshorne or example12.
    #[arg(long)]
    pub preset: Option<String>,
    /// TOML scenario file; flags override its keys.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub backend: Option<BackendArg>,
    /// Comma-separated coefficient variables.
    #[arg(long, value_delimiter = ',')]
    pub uvars: Option<Vec<String>>,
    /// Comma-separated monomial generators (semigroup backend).
    #[arg(long, value_delimiter = ',')]
    pub generators: Option<Vec<String>>,
    /// Comma-separated x-variables.
    #[arg(long, value_delimiter = ',')]
    pub xvars: Option<Vec<String>>,
    /// Comma-separated positive x-weights.
    #[arg(long, value_delimiter = ',')]
    pub weights: Option<Vec<u32>>,
    /// The hypersurface, e.g. "u*x + v*y".
    #[arg(long)]
    pub f: Option<String>,
    #[arg(long)]
    pub lmin: Option<u32>,
    #[arg(long)]
    pub lmax: Option<u32>,
    #[arg(long)]
    pub qmin: Option<u32>,
    #[arg(long)]
    pub qmax: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Polynomial,
    Semigroup,
}

impl ScenarioArgs {
    fn spec(&self, cli: &Cli) -> Result<ScenarioSpec> {
        let mut base = match (&self.preset, &self.config) {
            (Some(_), Some(_)) => return Err(Error::Config("give either --preset or --config, not both".into())),
            (Some(p), None) => ScenarioSpec::preset(p)?,
            (None, Some(path)) => {
                let src = std::fs::read_to_string(path)
                    .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
                ScenarioSpec::from_toml(&src)?
            }
            (None, None) => ScenarioSpec::default(),
        };
        let flags = ScenarioSpec {
            name: None,
            characteristic: cli.characteristic,
            backend: self.backend.map(|b| match b {
                BackendArg::Polynomial => BackendName::Polynomial,
                BackendArg::Semigroup => BackendName::Semigroup,
            }),
            uvars: self.uvars.clone(),
            generators: self.generators.clone(),
            xvars: self.xvars.clone(),
            weights: self.weights.clone(),
            f: self.f.clone(),
            ell: None,
            q: None,
            deg_cap: cli.deg_cap,
        };
        base = base.overlay(flags);
        let l_given = self.lmin.is_some() || self.lmax.is_some();
        let q_given = self.qmin.is_some() || self.qmax.is_some();
        if l_given && q_given {
            return Err(Error::Config("give either --lmin/--lmax or --qmin/--qmax, not both".into()));
        }
        let n = base.xvars.as_ref().map_or(1, |x| x.len() as u32);
        if l_given {
            let (lo, hi) = match base.ell {
                Some([a, b]) => (a, b),
                None => (n, n + 10),
            };
            base.ell = Some([self.lmin.unwrap_or(lo), self.lmax.unwrap_or(hi)]);
            base.q = None;
        }
        if q_given {
            let (lo, hi) = match base.q {
                Some([a, b]) => (a, b),
                None => (0, 6),
            };
            base.q = Some([self.qmin.unwrap_or(lo), self.qmax.unwrap_or(hi)]);
            base.ell = None;
        }
        Ok(base)
    }
}

/// Parse `argv` (including the program name), run, and return the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
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
    match execute(&cli, err) {
        Ok((body, code)) => match &cli.out {
            Some(path) => match std::fs::write(path, body) {
                Ok(()) => code,
                Err(e) => {
                    let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
                    2
                }
            },
            None => {
                let _ = out.write_all(body.as_bytes());
                code
            }
        },
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_input_error() {
                2
            } else {
                1
            }
        }
    }
}

fn jobs(cli: &Cli) -> usize {
    cli.jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())).max(1)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn characteristic(cli: &Cli, spec: Option<&ScenarioSpec>) -> u64 {
    cli.characteristic.or_else(|| spec.and_then(|s| s.characteristic)).unwrap_or(crate::field::DEFAULT_CHARACTERISTIC)
}

fn execute(cli: &Cli, err: &mut dyn Write) -> Result<(String, i32)> {
    let scenario_args = match &cli.command {
        Command::Verify(a) | Command::Vanish(a) | Command::Lsummand(a) => Some(a),
        Command::Socle { scenario, .. } => Some(scenario),
        Command::AnnFamily { .. } | Command::Minors { .. } => None,
    };
    let spec = scenario_args.map(|a| a.spec(cli)).transpose()?;
    match Backend::from_characteristic(characteristic(cli, spec.as_ref()))? {
        Backend::Prime(f) => execute_in(cli, spec, f, err),
        Backend::Rational => execute_in(cli, spec, RationalField, err),
    }
}

fn execute_in<F: Field>(cli: &Cli, spec: Option<ScenarioSpec>, field: F, err: &mut dyn Write) -> Result<(String, i32)> {
    let jobs = jobs(cli);
    match &cli.command {
        Command::Verify(_) => {
            let scn = spec.expect("scenario").build(field)?;
            let rep = verify_theorem(&scn, jobs)?;
            let _ = writeln!(
                err,
                "verdict: {} (sop: {}, support: {})",
                rep.verdict.as_str(),
                rep.sop_check.as_str(),
                rep.support_check.as_str()
            );
            for note in &rep.notes {
                let _ = writeln!(err, "note: {note}");
            }
            let code = match rep.verdict {
                Verdict::Pass => 0,
                Verdict::Inconclusive if cli.allow_inconclusive => 0,
                _ => 1,
            };
            let body = match cli.format {
                Format::Csv => report::socle_csv(&rep.socle_table),
                Format::Json => to_json(&rep),
            };
            Ok((body, code))
        }
        Command::Socle { per_degree, .. } => {
            let scn = spec.expect("scenario").build(field)?;
            let table = star_socle_table(&scn.ring, &scn.f, &scn.ells, scn.policy, jobs)?;
            let body = match (cli.format, per_degree) {
                (Format::Csv, false) => report::socle_csv(&table),
                (Format::Csv, true) => report::per_degree_csv(&table),
                (Format::Json, _) => to_json(&table),
            };
            Ok((body, 0))
        }
        Command::Vanish(_) => {
            let scn = spec.expect("scenario").build(field)?;
            let rep = vanishing_check(&scn.ring, &scn.f, &scn.ells, scn.policy, jobs)?;
            let _ = writeln!(
                err,
                "f mod m = {}; all components zero: {}; consistent: {}",
                rep.f_bar, rep.all_zero, rep.consistent
            );
            let body = match cli.format {
                Format::Csv => report::vanish_csv(&rep),
                Format::Json => to_json(&rep),
            };
            Ok((body, if rep.consistent { 0 } else { 1 }))
        }
        Command::Lsummand(_) => {
            let spec = spec.expect("scenario");
            let (lo, hi) = match spec.range()? {
                Some(EllRange::Q(a, b)) => (a, b),
                _ => (0, 6),
            };
            let scn: Scenario<F> = spec.build(field)?;
            let mut rows = Vec::new();
            for q in lo..=hi {
                let delta = delta_matrix_check(&scn.ring, &scn.f, q)?;
                let closure = complement_closure_check(&scn.ring, &scn.f, q)?;
                rows.push((delta, closure));
            }
            let ok = rows.iter().all(|(d, c)| d.ok && *c);
            let body = match cli.format {
                Format::Csv => report::lsummand_csv(&rows),
                Format::Json => {
                    let items: Vec<_> = rows.iter().map(|(d, c)| json!({ "delta": d, "closure_ok": c })).collect();
                    to_json(&items)
                }
            };
            Ok((body, if ok { 0 } else { 1 }))
        }
        Command::AnnFamily { n_max, cap } => {
            let ring = uv_ring(field)?;
            let rows = ann_family(&ring, *n_max, *cap, jobs)?;
            for r in &rows {
                for d in r.ann_discrepancy.iter().chain(&r.minors_discrepancy) {
                    let _ = writeln!(err, "n = {}: discrepancy in degree {}, witness {}", r.n, d.degree, d.witness);
                }
            }
            let ok = rows.iter().all(|r| r.ann_equals_uv_pow_n && r.minors_equal);
            let body = match cli.format {
                Format::Csv => report::ann_family_csv(&rows),
                Format::Json => to_json(&rows),
            };
            Ok((body, if ok { 0 } else { 1 }))
        }
        Command::Minors { n } => {
            let ring = uv_ring(field)?;
            let a = build_an(&ring, *n)?;
            let minors = maximal_minors(&ring, &a)?;
            let cap = 2 * *n as u32 + 2;
            let cmp = ideal_equal_upto(&minors, &GradedIdeal::maximal_power(&ring, *n as u32), &ring, cap);
            let gens: Vec<String> = minors.generators.iter().map(|g| ring.format(g)).collect();
            let body = match cli.format {
                Format::Csv => {
                    let mut s = String::from("generator\n");
                    for g in &gens {
                        s.push_str(g);
                        s.push('\n');
                    }
                    s
                }
                Format::Json => to_json(&json!({ "n": n, "generators": gens, "equals_uv_pow_n": cmp })),
            };
            Ok((body, if cmp.equal { 0 } else { 1 }))
        }
    }
}

fn uv_ring<F: Field>(field: F) -> Result<CoeffRing<F>> {
    CoeffRing::new(RingDescriptor::polynomial(field.characteristic(), &["u", "v"], &["x"]), field)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv: Vec<&str> = std::iter::once("lcsocle").chain(args.iter().copied()).collect();
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn minors_n2() {
        let (code, out, _) = call(&["minors", "--n", "2"]);
        assert_eq!(code, 0);
        assert_eq!(out, "generator\nu^2\nu*v\nv^2\n");
    }

    #[test]
    fn bad_characteristic_is_a_config_error() {
        let (code, _, err) = call(&["verify", "--preset", "hartshorne", "--char", "4"]);
        assert_eq!(code, 2);
        assert!(err.starts_with("error: characteristic 4 is not prime"), "{err}");
        assert_eq!(err.lines().count(), 1);
    }

    #[test]
    fn unknown_flag_and_preset() {
        assert_eq!(call(&["verify", "--colour", "red"]).0, 2);
        assert_eq!(call(&["verify", "--preset", "nope"]).0, 2);
        assert_eq!(call(&["verify", "--preset", "hartshorne", "--lmin", "2", "--qmax", "3"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn verify_small_window() {
        let (code, out, err) = call(&["verify", "--preset", "hartshorne", "--lmax", "6", "--jobs", "2"]);
        assert_eq!(code, 0, "{err}");
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], report::SOCLE_HEADER);
        assert_eq!(lines.len(), 6);
        assert_eq!(lines[1], "2,1,1,1,0,7,true");
        assert!(err.starts_with("verdict: pass"));
    }

    #[test]
    fn failing_verification_exits_one() {
        let (code, _, err) = call(&["verify", "--preset", "hartshorne", "--f", "x + u*y", "--lmax", "5"]);
        assert_eq!(code, 1, "{err}");
        assert!(err.starts_with("verdict: fail"));
    }

    #[test]
    fn ad_hoc_scenario_from_flags() {
        let (code, out, err) = call(&["socle", "--uvars", "u,v", "--xvars", "x,y", "--f", "u^2*x + v^2*y", "--lmin", "2", "--lmax", "3"]);
        assert_eq!(code, 0, "{err}");
        assert_eq!(out.lines().count(), 3);
    }

    #[test]
    fn lsummand_and_vanish() {
        let (code, out, _) = call(&["lsummand", "--preset", "hartshorne", "--qmax", "2"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().nth(2).unwrap(), "1,3,x^-2*y^-1 x^-1*y^-2,true,true,[u v 0; 0 u v]");
        let (code, out, _) = call(&["vanish", "--preset", "hartshorne", "--f", "x + u*y", "--lmax", "4"]);
        assert_eq!(code, 0);
        assert!(out.lines().skip(1).all(|l| l.split(',').nth(1) == Some("0")));
    }

    #[test]
    fn ann_family_rows() {
        let (code, out, _) = call(&["ann-family", "--n-max", "3", "--cap", "8"]);
        assert_eq!(code, 0);
        assert_eq!(out, format!("{}\n1,true,true,1\n2,true,true,2\n3,true,true,3\n", report::ANN_FAMILY_HEADER));
        assert_eq!(call(&["ann-family", "--n-max", "5", "--cap", "4"]).0, 2);
    }

    #[test]
    fn output_file() {
        let dir = std::env::temp_dir().join(format!("lcsocle-cli-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("m.json");
        let (code, out, _) = call(&["minors", "--n", "1", "--format", "json", "--out", path.to_str().unwrap()]);
        assert_eq!((code, out.as_str()), (0, ""));
        let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(v["generators"], json!(["u", "v"]));
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
