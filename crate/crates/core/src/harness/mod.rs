//! Identity registry and verification campaigns.
//!
//! Every identity is a named campaign that expands its options into a list
//! of independent cases. Cases run on a bounded worker pool; the report keeps
//! them in expansion order, so a fixed seed and configuration always produce
//! the same report.

mod campaigns;

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bigfloat::{BigComplex, BigReal};
use crate::cyclotomic::CycNumber;
use crate::error::{Error, Result};
use crate::padic::PAdic;

/// A registered identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IdentityCase {
    pub id: &'static str,
    pub description: &'static str,
    /// Option keys the campaign understands.
    pub options: &'static [&'static str],
}

const REGISTRY: [IdentityCase; 16] = [
    IdentityCase {
        id: "ff-splitting",
        description: "sum of mFm over n-th roots of unity equals one nmFnm at the n-th power",
        options: &["q", "n", "draws"],
    },
    IdentityCase {
        id: "converse-vanishing",
        description: "split nmFnm and nmGnm vanish at every non-n-th power",
        options: &["q", "n", "draws", "digits"],
    },
    IdentityCase {
        id: "character-sum-toolbox",
        description: "Gauss sum conjugation, Hasse-Davenport, orthogonality, Gamma_p product and parity lemmas",
        options: &["q", "draws"],
    },
    IdentityCase {
        id: "g-defined-over-q",
        description: "the defined-over-Q formula for G agrees with the definition",
        options: &["q", "digits"],
    },
    IdentityCase {
        id: "g-splitting",
        description: "sum of mGm over n-th roots of unity equals one nmGnm at the n-th power",
        options: &["q", "n", "draws", "digits"],
    },
    IdentityCase {
        id: "g4-unit-argument-table",
        description: "4G4[1/4,3/4,1/4,3/4; 1,1/2,1,1/2 | 1] in terms of q = x^2 + y^2",
        options: &["q"],
    },
    IdentityCase {
        id: "g6-unit-argument-table",
        description: "6G6[(1/4,3/4)^3; (1,1/2)^3 | 1] in terms of x^2 + y^2 and u^2 + 2v^2",
        options: &["q"],
    },
    IdentityCase {
        id: "g4-modular",
        description: "4G4[... | 1]_p = phi(-1) + a_p(eta^2(4z) eta^2(8z))",
        options: &["q"],
    },
    IdentityCase {
        id: "g6-modular",
        description: "6G6[... | 1]_p = a_p(eta^6(4z)) + phi(2)(a_p(E_8)^2 - p)",
        options: &["q"],
    },
    IdentityCase {
        id: "g3-elliptic-family",
        description: "3G3[1/2^3; 1^3 | (4-t)/4]_p = phi(t^2-4t)(a_p(E_t)^2 - p)",
        options: &["q", "t"],
    },
    IdentityCase {
        id: "g6-two-curve",
        description: "6G6 at 1/64, 64, 1/16, 16 through two elliptic curves each, plus CM closed forms",
        options: &["q", "items"],
    },
    IdentityCase {
        id: "g4-trace-frobenius",
        description: "p 4G4[1/8,5/8,3/8,7/8; 1/6,2/3,1/3,5/6 | 3^6 b^4/(2^4 a^6)]_p = phi(b)(a_p(E_{a,b}) + a_p(E_{-a,b}))",
        options: &["q", "ab"],
    },
    IdentityCase {
        id: "g8-modular",
        description: "8G8[... | 1]_p = a_p(f_8) + a_p(f_32) c(p) + p with the weight-3 factor c(p) calibrated at p = 5",
        options: &["q"],
    },
    IdentityCase {
        id: "ff-reductions",
        description: "n = 2 reduction formulas for 4F4, 6F6 (gating) and 8F8 (report-only)",
        options: &["q", "draws"],
    },
    IdentityCase {
        id: "classical-series",
        description: "classical splitting residual and the n = 2 reduction formulas at z = 1",
        options: &["draws", "digits"],
    },
    IdentityCase {
        id: "property-suites",
        description: "invariance of G, Pochhammer multiplication, Hermite's identity and the Hasse bound",
        options: &["draws"],
    },
];

/// All registered identities, in report order.
pub fn registry() -> &'static [IdentityCase] {
    &REGISTRY
}

pub fn lookup(id: &str) -> Result<&'static IdentityCase> {
    REGISTRY
        .iter()
        .find(|c| c.id == id)
        .ok_or_else(|| Error::UnknownIdentity(id.to_string()))
}

/// Per-identity options. Every field is optional; campaigns fall back to
/// their built-in ranges.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseOptions {
    /// Field sizes or primes.
    pub q: Option<Vec<u64>>,
    /// Splitting orders.
    pub n: Option<Vec<u64>>,
    /// Number of seeded draws.
    pub draws: Option<usize>,
    /// p-adic digits or decimal digits, depending on the identity.
    pub digits: Option<u32>,
    /// Curve parameters as rational strings.
    pub t: Option<Vec<String>>,
    /// `(a, b)` pairs.
    pub ab: Option<Vec<[i64; 2]>>,
    /// Item numbers.
    pub items: Option<Vec<u32>>,
}

impl CaseOptions {
    fn present(&self) -> Vec<&'static str> {
        let mut keys = Vec::new();
        let mut mark = |set: bool, k| {
            if set {
                keys.push(k)
            }
        };
        mark(self.q.is_some(), "q");
        mark(self.n.is_some(), "n");
        mark(self.draws.is_some(), "draws");
        mark(self.digits.is_some(), "digits");
        mark(self.t.is_some(), "t");
        mark(self.ab.is_some(), "ab");
        mark(self.items.is_some(), "items");
        keys
    }
}

/// A verification run: a mandatory seed and one `[case.<id>]` table per
/// selected identity.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub seed: u64,
    /// Records wall-clock time per case. Off by default so that reports are
    /// reproducible byte for byte.
    #[serde(default)]
    pub timing: bool,
    #[serde(default)]
    pub case: BTreeMap<String, CaseOptions>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let c: Config = toml::from_str(text).map_err(|e| Error::ConfigParse(e.message().to_string()))?;
        c.validate()?;
        Ok(c)
    }

    /// Every registered identity with default options.
    pub fn all(seed: u64) -> Self {
        Config {
            seed,
            timing: false,
            case: REGISTRY.iter().map(|c| (c.id.to_string(), CaseOptions::default())).collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.case.is_empty() {
            return Err(Error::ConfigParse("no [case.<id>] tables".into()));
        }
        for (id, opts) in &self.case {
            let entry = lookup(id)?;
            for key in opts.present() {
                if !entry.options.contains(&key) {
                    return Err(Error::ConfigParse(format!("option `{key}` does not apply to {id}")));
                }
            }
        }
        Ok(())
    }
}

/// Outcome of one case.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Check {
    pub lhs: String,
    pub rhs: String,
    pub residual: String,
    pub pass: bool,
}

fn padic_string(x: &PAdic) -> String {
    match x.to_integer() {
        Some(v) => v.to_string(),
        None => x.to_string(),
    }
}

impl Check {
    pub fn new(lhs: impl ToString, rhs: impl ToString, residual: impl ToString, pass: bool) -> Self {
        Check { lhs: lhs.to_string(), rhs: rhs.to_string(), residual: residual.to_string(), pass }
    }

    pub fn ints(lhs: i128, rhs: i128) -> Self {
        Self::new(lhs, rhs, lhs - rhs, lhs == rhs)
    }

    /// p-adic value against an integer.
    pub fn padic_int(lhs: &PAdic, rhs: i128) -> Result<Self> {
        let r = PAdic::from_int(rhs, lhs.p(), lhs.abs_prec())?;
        let d = lhs.sub(&r)?;
        Ok(Self::new(padic_string(lhs), rhs, padic_string(&d), d.is_zero()))
    }

    pub fn padic_pair(lhs: &PAdic, rhs: &PAdic) -> Result<Self> {
        let d = lhs.sub(rhs)?;
        Ok(Self::new(padic_string(lhs), padic_string(rhs), padic_string(&d), d.is_zero()))
    }

    /// A p-adic residual asserted to vanish.
    pub fn padic_zero(res: &PAdic) -> Self {
        Self::new(padic_string(res), 0, padic_string(res), res.is_zero())
    }

    pub fn cyc_pair(lhs: &CycNumber, rhs: &CycNumber) -> Result<Self> {
        let d = lhs.sub(rhs)?;
        Ok(Self::new(lhs, rhs, &d, d.is_zero()))
    }

    /// An exact residual asserted to vanish.
    pub fn cyc_zero(res: &CycNumber) -> Self {
        Self::new(res, 0, res, res.is_zero())
    }

    /// `|lhs - rhs| < 10^-tol`.
    pub fn reals(lhs: &BigReal, rhs: &BigReal, tol: u32) -> Self {
        let d = lhs.sub_ref(rhs).abs();
        Self::new(lhs.to_sci_string(30), rhs.to_sci_string(30), d.to_sci_string(6), d.is_below_decimal(tol))
    }

    pub fn complex_zero(res: &BigComplex, tol: u32) -> Self {
        let mag = res.abs();
        Self::new(format!("{res:.30}"), 0, mag.to_sci_string(6), mag.is_below_decimal(tol))
    }
}

pub(crate) type Job = Box<dyn Fn() -> Result<Check> + Send + Sync>;

pub(crate) struct Case {
    pub q_or_p: u64,
    pub inputs: String,
    /// Report-only cases do not affect the verdict.
    pub gating: bool,
    pub job: Job,
}

impl Case {
    pub fn new(q_or_p: u64, inputs: String, job: impl Fn() -> Result<Check> + Send + Sync + 'static) -> Self {
        Case { q_or_p, inputs, gating: true, job: Box::new(job) }
    }

    pub fn report_only(mut self) -> Self {
        self.gating = false;
        self
    }
}

#[derive(Default)]
pub(crate) struct Campaign {
    pub cases: Vec<Case>,
    pub notes: Vec<String>,
}

/// One line of the report and the CSV table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseRecord {
    pub case_id: String,
    pub identity: String,
    pub q_or_p: u64,
    pub inputs: String,
    pub lhs: String,
    pub rhs: String,
    pub residual: String,
    pub pass: bool,
    pub gating: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_us: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentitySummary {
    pub id: String,
    pub description: String,
    pub cases: usize,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
    pub report_only: usize,
    /// All gating cases pass and there is at least one.
    pub pass: bool,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub version: String,
    pub seed: u64,
    pub all_pass: bool,
    pub identities: Vec<IdentitySummary>,
    pub cases: Vec<CaseRecord>,
}

impl Report {
    pub fn identity(&self, id: &str) -> Option<&IdentitySummary> {
        self.identities.iter().find(|s| s.id == id)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// Columns `case_id, q_or_p, inputs, lhs, rhs, residual, pass`.
    pub fn write_csv<W: Write>(&self, w: W) -> std::io::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["case_id", "q_or_p", "inputs", "lhs", "rhs", "residual", "pass"])?;
        for c in &self.cases {
            let pass = if c.pass { "true" } else { "false" };
            out.write_record([&c.case_id, &c.q_or_p.to_string(), &c.inputs, &c.lhs, &c.rhs, &c.residual, pass])?;
        }
        out.flush()
    }
}

/// Reads a worker count, as given by `HYPERSPLIT_WORKERS`; unset means one
/// worker per available core.
pub fn worker_count(value: Option<&str>) -> Result<usize> {
    match value.map(str::trim) {
        None | Some("") => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
        Some(s) => match s.parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(Error::ConfigParse(format!("HYPERSPLIT_WORKERS must be a positive integer, got {s:?}"))),
        },
    }
}

fn run_case(id: &str, index: usize, case: &Case, timing: bool) -> CaseRecord {
    let start = Instant::now();
    // an arithmetic panic (e.g. an overflow check) fails the case, not the run
    let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| (case.job)())).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| p.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "panic".into());
        Err(Error::Unsupported(format!("internal panic: {msg}")))
    });
    let elapsed_us = timing.then(|| start.elapsed().as_micros() as u64);
    let mut rec = CaseRecord {
        case_id: format!("{id}/{index}"),
        identity: id.to_string(),
        q_or_p: case.q_or_p,
        inputs: case.inputs.clone(),
        lhs: String::new(),
        rhs: String::new(),
        residual: String::new(),
        pass: false,
        gating: case.gating,
        error: None,
        elapsed_us,
    };
    match outcome {
        Ok(c) => {
            rec.lhs = c.lhs;
            rec.rhs = c.rhs;
            rec.residual = c.residual;
            rec.pass = c.pass;
        }
        Err(e) => rec.error = Some(e.to_string()),
    }
    rec
}

/// Runs every selected campaign on `workers` threads.
pub fn run_verification(config: &Config, workers: usize) -> Result<Report> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::ConfigParse(format!("worker pool: {e}")))?;
    let mut identities = Vec::new();
    let mut cases = Vec::new();
    for (stream, entry) in REGISTRY.iter().enumerate() {
        let Some(opts) = config.case.get(entry.id) else { continue };
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(stream as u64);
        let campaign = campaigns::build(entry.id, opts, &mut rng)?;
        let records: Vec<CaseRecord> = pool.install(|| {
            campaign
                .cases
                .par_iter()
                .enumerate()
                .map(|(i, c)| run_case(entry.id, i, c, config.timing))
                .collect()
        });
        let gating: Vec<&CaseRecord> = records.iter().filter(|r| r.gating).collect();
        let passed = gating.iter().filter(|r| r.pass).count();
        let errors = gating.iter().filter(|r| r.error.is_some()).count();
        identities.push(IdentitySummary {
            id: entry.id.to_string(),
            description: entry.description.to_string(),
            cases: records.len(),
            passed,
            failed: gating.len() - passed,
            errors,
            report_only: records.len() - gating.len(),
            pass: !gating.is_empty() && passed == gating.len(),
            notes: campaign.notes,
        });
        cases.extend(records);
    }
    Ok(Report {
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed: config.seed,
        all_pass: identities.iter().all(|s| s.pass),
        identities,
        cases,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_parsing() {
        let c = Config::parse("seed = 7\n[case.g4-modular]\nq = [3, 5]\n").unwrap();
        assert_eq!(c.seed, 7);
        assert_eq!(c.case["g4-modular"].q, Some(vec![3, 5]));
        assert!(matches!(Config::parse("[case.g4-modular]\n"), Err(Error::ConfigParse(_))));
        assert_eq!(
            Config::parse("seed = 1\n[case.\"no.such.identity\"]\n"),
            Err(Error::UnknownIdentity("no.such.identity".into()))
        );
        assert!(matches!(Config::parse("seed = 1\n[case.g4-modular]\nn = [2]\n"), Err(Error::ConfigParse(_))));
        assert!(matches!(Config::parse("seed = 1\n[case.g4-modular]\nbogus = 1\n"), Err(Error::ConfigParse(_))));
        assert!(matches!(Config::parse("seed = 1\n"), Err(Error::ConfigParse(_))));
    }

    #[test]
    fn worker_counts() {
        assert_eq!(worker_count(Some("3")).unwrap(), 3);
        assert!(worker_count(None).unwrap() >= 1);
        assert!(worker_count(Some("0")).is_err());
        assert!(worker_count(Some("many")).is_err());
    }
}
