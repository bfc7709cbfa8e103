use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hypersplit_core::arith::{parse_rat, Rat};
use hypersplit_core::bigfloat::{bits_for_digits, BigComplex, BigReal};
use hypersplit_core::classical::{mfm_series, rat_real};
use hypersplit_core::ffhyper::ff_hyper;
use hypersplit_core::gfunction::g_eval;
use hypersplit_core::{run_verification, worker_count, Config, Error, FFHyperParams, FiniteField, GParams, Result};

#[derive(Parser)]
#[command(name = "hypersplit", version, about = "Hypergeometric identity checker")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the identity campaigns selected by a TOML config.
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Evaluate a single hypergeometric function.
    #[command(subcommand)]
    Eval(Eval),
}

#[derive(Subcommand)]
enum Eval {
    /// Finite-field function over F_q; characters are `eps`, `phi`, `chi4`,
    /// an exponent of the generator character, or a rational `k/(q-1)`.
    Ff {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        top: Vec<String>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        bottom: Vec<String>,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long)]
        q: u64,
    },
    /// p-adic function G over F_q.
    G {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        a: Vec<String>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        b: Vec<String>,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 6)]
        prec: u32,
    },
    /// Classical series mFm at a complex point.
    Classical(ClassicalArgs),
}

#[derive(Args)]
struct ClassicalArgs {
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    top: Vec<String>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    bottom: Vec<String>,
    /// Real part of z.
    #[arg(long, allow_hyphen_values = true)]
    z: String,
    /// Imaginary part of z.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    z_im: String,
    #[arg(long, default_value_t = 30)]
    digits: u32,
}

fn rat(s: &str) -> Result<Rat> {
    parse_rat(s).ok_or_else(|| Error::ConfigParse(format!("not a rational number: {s:?}")))
}

fn rats(xs: &[String]) -> Result<Vec<Rat>> {
    xs.iter().map(|s| rat(s)).collect()
}

fn character(token: &str, q: u64) -> Result<i64> {
    let n = q as i64 - 1;
    let fraction = |num: i64, den: i64| {
        if (n * num) % den != 0 {
            return Err(Error::ConfigParse(format!("no character of order {den} on F_{q}")));
        }
        Ok((n * num / den).rem_euclid(n))
    };
    match token.trim() {
        "eps" => Ok(0),
        "phi" => fraction(1, 2),
        "chi4" => fraction(1, 4),
        t if t.contains('/') => {
            let r = rat(t)?;
            fraction(*r.numer(), *r.denom())
        }
        t => t
            .parse::<i64>()
            .map(|k| k.rem_euclid(n))
            .map_err(|_| Error::ConfigParse(format!("unknown character {t:?}"))),
    }
}

fn element(f: &FiniteField, s: &str) -> Result<hypersplit_core::FieldElement> {
    let x = rat(s)?;
    f.from_ratio(*x.numer(), *x.denom())
        .ok_or_else(|| Error::NotPIntegral(x.to_string(), f.p()))
}

fn eval(cmd: Eval) -> Result<String> {
    match cmd {
        Eval::Ff { top, bottom, lambda, q } => {
            let f = FiniteField::of_order(q)?;
            let top: Vec<i64> = top.iter().map(|t| character(t, q)).collect::<Result<_>>()?;
            let bottom: Vec<i64> = bottom.iter().map(|t| character(t, q)).collect::<Result<_>>()?;
            let params = FFHyperParams::new(q, &top, &bottom)?;
            Ok(ff_hyper(&f, &params, element(&f, &lambda)?)?.to_string())
        }
        Eval::G { a, b, lambda, q, prec } => {
            let f = FiniteField::of_order(q)?;
            let params = GParams::new(&rats(&a)?, &rats(&b)?)?;
            let v = g_eval(&f, &params, element(&f, &lambda)?, prec)?;
            Ok(v.to_string())
        }
        Eval::Classical(c) => {
            let bits = bits_for_digits(c.digits + 10);
            let z = BigComplex::new(rat_real(rat(&c.z)?, bits), rat_real(rat(&c.z_im)?, bits));
            let v = mfm_series(&rats(&c.top)?, &rats(&c.bottom)?, &z, c.digits)?;
            let re = fixed(&v.re, c.digits);
            if v.im.is_below_decimal(c.digits) {
                return Ok(re);
            }
            let im = fixed(&v.im, c.digits);
            Ok(match im.strip_prefix('-') {
                Some(m) => format!("{re} - {m}i"),
                None => format!("{re} + {im}i"),
            })
        }
    }
}

/// Rounded to `digits` places, trailing zeros dropped.
fn fixed(x: &BigReal, digits: u32) -> String {
    let s = x.to_fixed_string(digits);
    if !s.contains('.') {
        return s;
    }
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

fn verify(config: &PathBuf, out: Option<PathBuf>, csv: Option<PathBuf>) -> Result<bool> {
    let io = |e: std::io::Error| Error::ConfigParse(e.to_string());
    let text = std::fs::read_to_string(config).map_err(io)?;
    let config = Config::parse(&text)?;
    let workers = worker_count(std::env::var("HYPERSPLIT_WORKERS").ok().as_deref())?;
    let report = run_verification(&config, workers)?;
    for s in &report.identities {
        let status = if s.pass { "PASS" } else { "FAIL" };
        println!(
            "{status} {:<24} {} gating passed, {} failed, {} report-only",
            s.id, s.passed, s.failed, s.report_only
        );
    }
    if let Some(path) = out {
        std::fs::write(path, report.to_json()).map_err(io)?;
    }
    if let Some(path) = csv {
        report.write_csv(BufWriter::new(File::create(path).map_err(io)?)).map_err(io)?;
    }
    Ok(report.all_pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Verify { config, out, csv } => verify(&config, out, csv),
        Command::Eval(cmd) => eval(cmd).map(|s| {
            println!("{s}");
            true
        }),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn character_tokens() {
        assert_eq!(character("eps", 13).unwrap(), 0);
        assert_eq!(character("phi", 13).unwrap(), 6);
        assert_eq!(character("chi4", 13).unwrap(), 3);
        assert_eq!(character("-1", 13).unwrap(), 11);
        assert_eq!(character("5/6", 13).unwrap(), 10);
        assert!(character("chi4", 7).is_err());
        assert!(character("1/5", 13).is_err());
        assert!(character("psi", 13).is_err());
    }

    #[test]
    fn fixed_point_output() {
        let x = rat_real(Rat::new(1, 4), 128);
        assert_eq!(fixed(&x, 10), "0.25");
        assert_eq!(fixed(&rat_real(Rat::from_integer(-3), 128), 5), "-3");
    }
}
