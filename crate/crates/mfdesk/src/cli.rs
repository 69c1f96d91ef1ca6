//! Command-line front end.
//!
//! Subcommands: `coeff`, `verify`, `density`, `liouville`, `wirsing`.
//! Every report embeds the tool version, the full run configuration
//! (including the seed), the working precision, and the provenance of the
//! gamma/Mertens constants, and contains no timestamps: identical
//! configuration produces byte-identical output.
//!
//! Exit codes: 0 success (soft-bound exceptions only annotate), 1 module
//! error, 2 usage error, 3 hard invariant violation (Deligne, Liouville,
//! integer identities).

use crate::bounds;
use crate::coeff::{self, CoeffTable, EngineLimits, FormSpec, PrimePower};
use crate::density::{self, PrimeSelector, ThresholdKind};
use crate::diophantine::{self, MinimalPolynomial, RationalApprox};
use crate::error::{Error, Result};
use crate::hp::{Ctx, EULER_GAMMA_LITERAL, MERTENS_B_LITERAL};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::Signed;
use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MODULE_ERROR: i32 = 1;
pub const EXIT_HARD_VIOLATION: i32 = 3;

#[derive(Parser)]
#[command(
    name = "mfdesk",
    version = crate::VERSION,
    about = "Desk-scale verification of modular-form coefficient bounds"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Args, Clone)]
struct Common {
    /// Free epsilon wherever the bounds leave it open
    #[arg(long, default_value_t = 0.01)]
    epsilon: f64,
    /// Working precision in bits, >= 64 (env MFDESK_PRECISION sets the default)
    #[arg(long)]
    precision: Option<usize>,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write the report to a file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
    /// Seed for randomized property scans; echoed in every report
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Coefficient-table cap (memory guard)
    #[arg(long)]
    table_cap: Option<u64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact coefficients: a single lambda(n) or a table
    Coeff {
        #[command(flatten)]
        common: Common,
        /// Form selector: delta | ec:a=A,b=B | table:PATH
        #[arg(long, default_value = "delta")]
        form: String,
        /// Weight override for elliptic-curve forms
        #[arg(long)]
        weight: Option<u32>,
        /// Single index n
        #[arg(long, value_parser = parse_limit)]
        n: Option<u64>,
        /// Emit the full table lambda(1..=N)
        #[arg(long, value_parser = parse_limit)]
        table: Option<u64>,
    },
    /// Bound sandwich verification and unimodular gap scans
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "delta")]
        form: String,
        #[arg(long)]
        weight: Option<u32>,
        /// Single-index report (the three-line theorem table)
        #[arg(long, value_parser = parse_limit)]
        n: Option<u64>,
        /// Scan 1..=max-n
        #[arg(long, value_parser = parse_limit)]
        max_n: Option<u64>,
        /// Scan lower limit (default 1)
        #[arg(long, value_parser = parse_limit, default_value = "1")]
        min_n: u64,
        /// Unimodular-gap scan mode
        #[arg(long)]
        gap: bool,
        /// Gap scan: prime p
        #[arg(long, value_parser = parse_limit)]
        p: Option<u64>,
        /// Gap scan: weight k (defaults to the form's weight)
        #[arg(long)]
        k: Option<u32>,
        /// Gap scan: largest exponent m
        #[arg(long, value_parser = parse_limit, default_value = "20")]
        m_max: u64,
    },
    /// Prime classifications, N_f counts, Mertens/harmonic asymptotics
    Density {
        #[command(flatten)]
        common: Common,
        /// Scan limit x (accepts 1e6 notation)
        #[arg(long, value_parser = parse_limit)]
        x: u64,
        #[arg(long, default_value = "delta")]
        form: String,
        /// Classification rule: gt | nonzero (omit for all-primes runs)
        #[arg(long)]
        threshold: Option<String>,
        /// Density tau fed into the asymptotic formulas
        #[arg(long, default_value_t = 1.0)]
        tau: f64,
        /// Mertens product / harmonic sum over all primes with checkpoints
        #[arg(long)]
        mertens: bool,
        /// omega(n) loglog n / log n scan
        #[arg(long)]
        hr: bool,
    },
    /// Heights, convergents, and the explicit Liouville inequality
    Liouville {
        #[command(flatten)]
        common: Common,
        /// Polynomial coefficients, highest degree first (e.g. 1,0,-2)
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        poly: Option<Vec<i64>>,
        /// How many convergents of the selected root to check
        #[arg(long, value_parser = parse_limit, default_value = "10")]
        convergents: u64,
        /// Which real root, ascending (default: the largest)
        #[arg(long)]
        root_index: Option<usize>,
        /// Check one explicit rational p/q instead of convergents
        #[arg(long)]
        rational: Option<String>,
        /// Run the seeded random (polynomial, convergent) property suite
        #[arg(long, value_parser = parse_limit)]
        random_pairs: Option<u64>,
    },
    /// Wirsing asymptotic for a multiplicative function
    Wirsing {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_limit)]
        x: u64,
        /// Function: one | p1mod4 | chi
        #[arg(long, default_value = "one")]
        f: String,
        #[arg(long, default_value_t = 1.0)]
        tau: f64,
        /// Form for f = chi
        #[arg(long, default_value = "delta")]
        form: String,
        /// Classification rule for f = chi: gt | nonzero
        #[arg(long, default_value = "nonzero")]
        threshold: String,
    },
}

/// Accept 100000, 100_000, and 1e5 style limits.
fn parse_limit(s: &str) -> std::result::Result<u64, String> {
    let t = s.replace('_', "");
    if let Ok(v) = t.parse::<u64>() {
        return Ok(v);
    }
    let lower = t.to_ascii_lowercase();
    if lower.contains('e') {
        let v: f64 = lower.parse().map_err(|_| format!("bad limit: {s}"))?;
        if v.is_finite() && v >= 0.0 && v <= 9.0e15 && v.fract() == 0.0 {
            return Ok(v as u64);
        }
    }
    Err(format!("bad limit: {s}"))
}

fn parse_form(sel: &str, weight: Option<u32>) -> Result<FormSpec> {
    if sel == "delta" {
        if let Some(w) = weight {
            if w != 12 {
                return Err(Error::Invalid("delta has weight 12".into()));
            }
        }
        return Ok(FormSpec::delta());
    }
    if let Some(rest) = sel.strip_prefix("ec:") {
        let mut a: Option<i64> = None;
        let mut b: Option<i64> = None;
        for part in rest.split(',') {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Invalid(format!("bad ec parameter: {part}")))?;
            let parsed: i64 = v
                .trim()
                .parse()
                .map_err(|_| Error::Invalid(format!("bad integer: {v}")))?;
            match k.trim() {
                "a" => a = Some(parsed),
                "b" => b = Some(parsed),
                other => return Err(Error::Invalid(format!("unknown ec parameter: {other}"))),
            }
        }
        let (a, b) = (
            a.ok_or_else(|| Error::Invalid("ec form needs a=".into()))?,
            b.ok_or_else(|| Error::Invalid("ec form needs b=".into()))?,
        );
        return match weight {
            Some(w) => FormSpec::elliptic_curve_with_weight(a, b, w),
            None => FormSpec::elliptic_curve(a, b),
        };
    }
    if let Some(_path) = sel.strip_prefix("table:") {
        return FormSpec::user_table(sel, weight.unwrap_or(12));
    }
    Err(Error::Invalid(format!(
        "unknown form selector: {sel} (expected delta | ec:a=..,b=.. | table:PATH)"
    )))
}

fn parse_threshold(s: &str) -> Result<ThresholdKind> {
    match s {
        "gt" => Ok(ThresholdKind::GTLowerBound),
        "nonzero" | "nonvanishing" => Ok(ThresholdKind::Nonvanishing),
        other => Err(Error::Invalid(format!(
            "unknown threshold: {other} (expected gt | nonzero)"
        ))),
    }
}

/// Resolved run configuration, echoed into every report.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub subcommand: String,
    pub epsilon: f64,
    pub precision_bits: usize,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub seed: u64,
    pub limits: EngineLimits,
    /// Subcommand-specific arguments, sorted by key.
    pub args: BTreeMap<String, String>,
}

impl RunConfig {
    fn resolve(subcommand: &str, common: &Common) -> Result<Self> {
        let env_default = std::env::var("MFDESK_PRECISION")
            .ok()
            .and_then(|v| v.parse::<usize>().ok());
        let precision_bits = common.precision.or(env_default).unwrap_or(128);
        if precision_bits < 64 {
            return Err(Error::Invalid(format!(
                "precision must be >= 64 bits, got {precision_bits}"
            )));
        }
        if common.epsilon <= 0.0 {
            return Err(Error::Invalid("epsilon must be > 0".into()));
        }
        let mut limits = EngineLimits::default();
        if let Some(cap) = common.table_cap {
            if cap == 0 {
                return Err(Error::Invalid("table cap must be positive".into()));
            }
            limits.table_cap = cap;
        }
        Ok(RunConfig {
            subcommand: subcommand.into(),
            epsilon: common.epsilon,
            precision_bits,
            format: common.format,
            output: common.output.clone(),
            seed: common.seed,
            limits,
            args: BTreeMap::new(),
        })
    }

    fn arg(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.args.insert(key.into(), value.to_string());
        self
    }

    fn ctx(&self) -> Ctx {
        Ctx::new(self.precision_bits)
    }
}

/// A deterministic report: header key/values, one summary section, and a
/// rectangular row section.
#[derive(Debug, Default)]
pub struct Report {
    pub summary: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Indices that violated a hard invariant (forces exit code 3).
    pub hard_violations: Vec<String>,
}

impl Report {
    fn kv(&mut self, key: &str, value: impl ToString) {
        self.summary.push((key.into(), value.to_string()));
    }

    fn render(&self, config: &RunConfig) -> String {
        match config.format {
            Format::Json => self.render_json(config),
            Format::Csv => self.render_delimited(config, true),
            Format::Table => self.render_delimited(config, false),
        }
    }

    fn header_pairs(&self, config: &RunConfig) -> Vec<(String, String)> {
        let mut h = vec![
            ("tool".to_string(), format!("mfdesk {}", crate::VERSION)),
            ("subcommand".to_string(), config.subcommand.clone()),
            ("precision_bits".to_string(), config.precision_bits.to_string()),
            ("epsilon".to_string(), config.epsilon.to_string()),
            ("seed".to_string(), config.seed.to_string()),
            ("table_cap".to_string(), config.limits.table_cap.to_string()),
            (
                "const_euler_gamma".to_string(),
                format!("literal {EULER_GAMMA_LITERAL}"),
            ),
            (
                "const_mertens_b".to_string(),
                format!("literal {MERTENS_B_LITERAL}"),
            ),
        ];
        for (k, v) in &config.args {
            h.push((format!("arg_{k}"), v.clone()));
        }
        h
    }

    fn render_delimited(&self, config: &RunConfig, csv: bool) -> String {
        let mut out = String::new();
        for (k, v) in self.header_pairs(config) {
            out.push_str(&format!("# {k}: {v}\n"));
        }
        for (k, v) in &self.summary {
            out.push_str(&format!("# {k}: {v}\n"));
        }
        if !self.hard_violations.is_empty() {
            out.push_str(&format!(
                "# HARD VIOLATIONS: {}\n",
                self.hard_violations.join("; ")
            ));
        }
        if self.columns.is_empty() {
            return out;
        }
        if csv {
            out.push_str(&self.columns.join(","));
            out.push('\n');
            for row in &self.rows {
                out.push_str(&row.join(","));
                out.push('\n');
            }
        } else {
            let mut widths: Vec<usize> = self.columns.iter().map(|c| c.len()).collect();
            for row in &self.rows {
                for (i, cell) in row.iter().enumerate() {
                    widths[i] = widths[i].max(cell.len());
                }
            }
            let fmt_row = |cells: &[String], widths: &[usize]| -> String {
                cells
                    .iter()
                    .enumerate()
                    .map(|(i, c)| format!("{:>w$}", c, w = widths[i]))
                    .collect::<Vec<_>>()
                    .join("  ")
            };
            out.push_str(&fmt_row(&self.columns, &widths));
            out.push('\n');
            for row in &self.rows {
                out.push_str(&fmt_row(row, &widths));
                out.push('\n');
            }
        }
        out
    }

    fn render_json(&self, config: &RunConfig) -> String {
        let mut root = serde_json::Map::new();
        root.insert("tool".into(), "mfdesk".into());
        root.insert("version".into(), crate::VERSION.into());
        root.insert("schema_version".into(), 1u32.into());
        let mut cfg = serde_json::Map::new();
        cfg.insert("subcommand".into(), config.subcommand.clone().into());
        cfg.insert("precision_bits".into(), (config.precision_bits as u64).into());
        cfg.insert("epsilon".into(), config.epsilon.into());
        cfg.insert("seed".into(), config.seed.into());
        cfg.insert("table_cap".into(), config.limits.table_cap.into());
        let mut args = serde_json::Map::new();
        for (k, v) in &config.args {
            args.insert(k.clone(), v.clone().into());
        }
        cfg.insert("args".into(), serde_json::Value::Object(args));
        root.insert("config".into(), serde_json::Value::Object(cfg));
        let mut consts = serde_json::Map::new();
        consts.insert("euler_gamma".into(), EULER_GAMMA_LITERAL.into());
        consts.insert("mertens_b".into(), MERTENS_B_LITERAL.into());
        consts.insert("provenance".into(), "50-digit rounded literals".into());
        root.insert("constants".into(), serde_json::Value::Object(consts));
        let mut summary = serde_json::Map::new();
        for (k, v) in &self.summary {
            summary.insert(k.clone(), v.clone().into());
        }
        root.insert("summary".into(), serde_json::Value::Object(summary));
        root.insert(
            "columns".into(),
            serde_json::Value::Array(self.columns.iter().map(|c| c.clone().into()).collect()),
        );
        root.insert(
            "rows".into(),
            serde_json::Value::Array(
                self.rows
                    .iter()
                    .map(|r| serde_json::Value::Array(r.iter().map(|c| c.clone().into()).collect()))
                    .collect(),
            ),
        );
        root.insert(
            "hard_violations".into(),
            serde_json::Value::Array(
                self.hard_violations.iter().map(|v| v.clone().into()).collect(),
            ),
        );
        let mut s = serde_json::to_string_pretty(&serde_json::Value::Object(root))
            .expect("json serialization");
        s.push('\n');
        s
    }
}

fn load_table(form: &FormSpec, sel: &str) -> Result<Option<CoeffTable>> {
    if let Some(path) = sel.strip_prefix("table:") {
        let file = std::fs::File::open(path)?;
        let table = CoeffTable::from_csv(form.clone(), std::io::BufReader::new(file))?;
        return Ok(Some(table));
    }
    Ok(None)
}

fn cmd_coeff(
    config: &mut RunConfig,
    form_sel: &str,
    weight: Option<u32>,
    n: Option<u64>,
    table: Option<u64>,
) -> Result<Report> {
    let form = parse_form(form_sel, weight)?;
    config.arg("form", form.label());
    let user_table = load_table(&form, form_sel)?;
    let mut report = Report::default();
    report.columns = vec!["n".into(), "lambda".into()];
    match (n, table) {
        (Some(n), None) => {
            config.arg("n", n);
            let v = match &user_table {
                Some(t) => t
                    .get(n)
                    .cloned()
                    .ok_or_else(|| Error::Range(format!("n = {n} not in user table")))?,
                None => coeff::coeff_at_with(&form, n, &config.limits)?,
            };
            report.rows.push(vec![n.to_string(), v.to_string()]);
        }
        (None, Some(limit)) => {
            config.arg("table", limit);
            let t = match user_table {
                Some(t) => t,
                None => CoeffTable::build(&form, limit, &config.limits)?,
            };
            for (idx, v) in t.values() {
                if *idx <= limit {
                    report.rows.push(vec![idx.to_string(), v.to_string()]);
                }
            }
            let bad = t.validate()?;
            report.kv("validated", if bad.is_empty() { "ok" } else { "FAILED" });
            if !bad.is_empty() {
                report
                    .hard_violations
                    .push(format!("table invariants failed at n in {bad:?}"));
            }
        }
        _ => {
            return Err(Error::Invalid(
                "coeff: pass exactly one of --n or --table".into(),
            ))
        }
    }
    Ok(report)
}

fn sci_of_log(ctx: &Ctx, log_value: &crate::hp::Real, digits: usize) -> String {
    // exp in high precision, then format
    let v = ctx.exp(log_value);
    ctx.sci(&v, digits)
}

fn cmd_verify(
    config: &mut RunConfig,
    form_sel: &str,
    weight: Option<u32>,
    n: Option<u64>,
    max_n: Option<u64>,
    min_n: u64,
    gap: bool,
    p: Option<u64>,
    k: Option<u32>,
    m_max: u64,
) -> Result<Report> {
    let form = parse_form(form_sel, weight)?;
    config.arg("form", form.label());
    let ctx = config.ctx();
    let mut report = Report::default();

    if gap {
        let p = p.ok_or_else(|| Error::Invalid("--gap needs --p".into()))?;
        let k = k.unwrap_or(form.weight());
        config.arg("p", p).arg("k", k).arg("m_max", m_max);
        let lambda_p = coeff::coeff_at_with(&form, p, &config.limits)?;
        let angle = coeff::frobenius_angle(&lambda_p, p, k, config.precision_bits)?;
        report.columns = vec![
            "m".into(),
            "gap".into(),
            "threshold".into(),
            "satisfied".into(),
            "zero_gap".into(),
        ];
        let mut violations = 0u64;
        for m in 1..=m_max as u32 {
            let rep = diophantine::unimodular_gap_check(&angle, m)?;
            if !rep.satisfied {
                violations += 1;
            }
            let thr = diophantine::corollary_gap(PrimePower::new(p, m)?, k, &ctx)?;
            report.rows.push(vec![
                m.to_string(),
                ctx.sci(&rep.gap_float, 6),
                sci_of_log(&ctx, &thr, 6),
                rep.satisfied.to_string(),
                rep.zero_gap.to_string(),
            ]);
        }
        report.kv("gap_violations", violations);
        // the inequality is the asymptotic claim under test: violations are
        // reported, not fatal
        return Ok(report);
    }

    if let Some(n) = n {
        config.arg("n", n);
        let (thm2, lambda, deligne) = bounds::section4(&form, n, &ctx, &config.limits)?;
        report.kv("n", n);
        report.kv("lower_thm2", sci_of_log(&ctx, &thm2, 3));
        report.kv("abs_coeff_exact", lambda.magnitude().to_string());
        report.kv(
            "abs_coeff",
            ctx.sci(&ctx.from_bigint(&lambda.abs()), 3),
        );
        report.kv("upper_deligne", sci_of_log(&ctx, &deligne, 3));
        report.columns = vec!["quantity".into(), "value".into()];
        report.rows.push(vec![
            "lower_thm2".into(),
            sci_of_log(&ctx, &thm2, 3),
        ]);
        report
            .rows
            .push(vec!["abs_coeff".into(), ctx.sci(&ctx.from_bigint(&lambda.abs()), 3)]);
        report.rows.push(vec![
            "upper_deligne".into(),
            sci_of_log(&ctx, &deligne, 3),
        ]);
        return Ok(report);
    }

    let max_n = max_n.ok_or_else(|| Error::Invalid("verify: pass --n, --max-n, or --gap".into()))?;
    if min_n == 0 || min_n > max_n {
        return Err(Error::EmptyRange(format!("bad range {min_n}..={max_n}")));
    }
    config.arg("min_n", min_n).arg("max_n", max_n);
    let ns: Vec<u64> = (min_n..=max_n).collect();
    let user_table = load_table(&form, form_sel)?;
    let (_reports, summary) = match &user_table {
        Some(t) => bounds::verify_sandwich_table(t, &ns, config.epsilon, &ctx)?,
        None => bounds::verify_sandwich(&form, &ns, config.epsilon, &ctx, &config.limits)?,
    };
    report.kv("checked", summary.checked);
    report.kv("vanishing", summary.vanishing.len());
    report.kv("skipped_bad_reduction", summary.skipped.len());
    report.kv("deligne_violations", summary.deligne_violations.len());
    report.kv("thm2_checked", summary.thm2_checked);
    report.kv("thm2_exceptions", summary.thm2_exceptions.len());
    report.kv(
        "thm2_satisfied_fraction",
        if summary.thm2_checked > 0 {
            format!(
                "{:.6}",
                summary.thm2_satisfied as f64 / summary.thm2_checked as f64
            )
        } else {
            "n/a".into()
        },
    );
    report.kv("gt_exceptions", summary.gt_exceptions.len());
    report.kv("thm1_exceptions", summary.thm1_exceptions.len());
    report.columns = vec!["exception_kind".into(), "n".into()];
    for n in &summary.deligne_violations {
        report.rows.push(vec!["deligne".into(), n.to_string()]);
    }
    for n in &summary.thm2_exceptions {
        report.rows.push(vec!["thm2".into(), n.to_string()]);
    }
    for n in &summary.gt_exceptions {
        report.rows.push(vec!["gt".into(), n.to_string()]);
    }
    for n in &summary.thm1_exceptions {
        report.rows.push(vec!["thm1".into(), n.to_string()]);
    }
    if !summary.deligne_violations.is_empty() {
        report.hard_violations.push(format!(
            "Deligne bound violated at {:?}",
            summary.deligne_violations
        ));
    }
    Ok(report)
}

fn cmd_density(
    config: &mut RunConfig,
    x: u64,
    form_sel: &str,
    threshold: Option<String>,
    tau: f64,
    mertens: bool,
    hr: bool,
) -> Result<Report> {
    let ctx = config.ctx();
    config.arg("x", x);
    let mut report = Report::default();

    if hr {
        config.arg("mode", "hr");
        let r = density::hr_bounds_check(x, config.epsilon)?;
        report.kv("max_ratio", format!("{:.6}", r.max_ratio));
        report.kv("argmax", r.argmax);
        report.kv("threshold_1_plus_eps", format!("{:.6}", 1.0 + r.epsilon));
        report.kv("count_above", r.count_above);
        return Ok(report);
    }

    if mertens || threshold.is_none() {
        config.arg("mode", "all-primes");
        config.arg("tau", tau);
        report.columns = vec![
            "x".into(),
            "mertens_lhs".into(),
            "mertens_rhs".into(),
            "mertens_ratio".into(),
            "harmonic_lhs".into(),
            "harmonic_rhs".into(),
            "harmonic_diff".into(),
        ];
        let mut cp = 1000u64;
        let mut checkpoints = Vec::new();
        while cp < x {
            checkpoints.push(cp);
            cp *= 10;
        }
        checkpoints.push(x);
        for c in checkpoints {
            let m = density::mertens_product(&PrimeSelector::AllPrimes, c, tau, &ctx)?;
            let h = density::harmonic_sum(&PrimeSelector::AllPrimes, c, tau, &ctx)?;
            report.rows.push(vec![
                c.to_string(),
                ctx.sci(&m.lhs, 10),
                ctx.sci(&m.rhs, 10),
                ctx.sci(&m.ratio, 10),
                ctx.sci(&h.lhs, 10),
                ctx.sci(&h.rhs, 10),
                ctx.sci(&h.diff, 4),
            ]);
        }
        return Ok(report);
    }

    let kind = parse_threshold(threshold.as_deref().unwrap())?;
    let form = parse_form(form_sel, None)?;
    config.arg("form", form.label());
    config.arg(
        "threshold",
        match kind {
            ThresholdKind::GTLowerBound => "gt",
            ThresholdKind::Nonvanishing => "nonzero",
        },
    );
    config.arg("tau", tau);
    let cls = density::classify_primes(&form, x, kind, &ctx, &config.limits)?;
    let r = density::density_report_for(&cls, x, tau, &ctx)?;
    report.kv("pi_x", r.pi_x);
    report.kv("count_pf", r.count_pf);
    report.kv("empirical_tau", format!("{:.6}", r.empirical_tau));
    report.kv("asymptotic_tau", format!("{:.6}", r.asymptotic_tau));
    report.kv("nf_count", r.nf_count);
    report.kv("mertens_lhs", ctx.sci(&r.mertens.lhs, 10));
    report.kv("mertens_rhs", ctx.sci(&r.mertens.rhs, 10));
    report.kv("mertens_ratio", ctx.sci(&r.mertens.ratio, 10));
    report.kv("harmonic_lhs", ctx.sci(&r.harmonic.lhs, 10));
    report.kv("harmonic_rhs", ctx.sci(&r.harmonic.rhs, 10));
    report.kv("harmonic_diff", ctx.sci(&r.harmonic.diff, 4));
    report.kv("wirsing_lhs", ctx.sci(&r.wirsing.lhs, 10));
    report.kv("wirsing_rhs", ctx.sci(&r.wirsing.rhs, 10));
    report.kv("wirsing_ratio", ctx.sci(&r.wirsing.ratio, 10));

    // member-fraction checkpoints
    report.columns = vec!["x".into(), "pi_x".into(), "count_pf".into(), "fraction".into()];
    let mut cp = 1000u64.min(x);
    let mut checkpoints = Vec::new();
    while cp < x {
        checkpoints.push(cp);
        cp *= 10;
    }
    checkpoints.push(x);
    for c in checkpoints {
        let total = cls.primes().iter().take_while(|&&p| p <= c).count();
        let members = cls.member_primes().take_while(|&p| p <= c).count();
        report.rows.push(vec![
            c.to_string(),
            total.to_string(),
            members.to_string(),
            if total > 0 {
                format!("{:.6}", members as f64 / total as f64)
            } else {
                "n/a".into()
            },
        ]);
    }
    Ok(report)
}

fn parse_rational(s: &str) -> Result<RationalApprox> {
    let (n, d) = s
        .split_once('/')
        .ok_or_else(|| Error::Invalid(format!("expected p/q, got {s}")))?;
    let num: BigInt = n
        .trim()
        .parse()
        .map_err(|_| Error::Invalid(format!("bad integer {n}")))?;
    let den: BigInt = d
        .trim()
        .parse()
        .map_err(|_| Error::Invalid(format!("bad integer {d}")))?;
    RationalApprox::new(num, den)
}

fn cmd_liouville(
    config: &mut RunConfig,
    poly: Option<Vec<i64>>,
    convergents: u64,
    root_index: Option<usize>,
    rational: Option<String>,
    random_pairs: Option<u64>,
) -> Result<Report> {
    let ctx = config.ctx();
    let mut report = Report::default();

    if let Some(pairs) = random_pairs {
        config.arg("random_pairs", pairs);
        let r = diophantine::random_liouville_suite(config.seed, pairs, config.precision_bits)?;
        report.kv("pairs", r.pairs);
        report.kv("polynomials", r.polynomials);
        report.kv("integer_form_failures", r.integer_form_failures);
        report.kv("liouville_unsatisfied", r.liouville_unsatisfied);
        report.kv("precision_failures", r.precision_failures);
        if r.integer_form_failures > 0 || r.liouville_unsatisfied > 0 {
            report.hard_violations.push(format!(
                "Liouville property failed: {} integer-form, {} unsatisfied",
                r.integer_form_failures, r.liouville_unsatisfied
            ));
        }
        return Ok(report);
    }

    let coeffs_desc = poly.ok_or_else(|| Error::Invalid("liouville: pass --poly or --random-pairs".into()))?;
    config.arg(
        "poly",
        coeffs_desc
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(","),
    );
    let mut coeffs = coeffs_desc.clone();
    coeffs.reverse(); // CLI takes highest-degree-first
    let f = MinimalPolynomial::from_i64(&coeffs)?;
    let mahler = diophantine::mahler_height(&f, config.precision_bits)?;
    report.kv(
        "mahler_interval",
        format!(
            "[{}, {}]",
            ctx.sci(&ctx.from_ratio(&mahler.lo), 10),
            ctx.sci(&ctx.from_ratio(&mahler.hi), 10)
        ),
    );
    if f.degree() >= 2 {
        let c = diophantine::liouville_constant(&f, config.precision_bits)?;
        report.kv("liouville_constant_lo", ctx.sci(&ctx.from_ratio(&c.lo), 10));
    }
    let roots = f.isolate_real_roots();
    report.kv("real_roots", roots.len());
    if roots.is_empty() {
        return Err(Error::Domain("polynomial has no real roots".into()));
    }
    let idx = root_index.unwrap_or(roots.len() - 1);
    config.arg("root_index", idx);

    report.columns = vec![
        "m".into(),
        "p/q".into(),
        "F(p,q)".into(),
        "lhs_lo".into(),
        "rhs_hi".into(),
        "satisfied".into(),
    ];
    let mut unsatisfied = 0u64;
    if let Some(rs) = rational {
        config.arg("rational", &rs);
        let r = parse_rational(&rs)?;
        let fv = diophantine::integer_form(&f, &r)?;
        let rep = diophantine::liouville_check(&f, idx, &r, config.precision_bits)?;
        if !rep.satisfied {
            unsatisfied += 1;
        }
        report.rows.push(vec![
            "0".into(),
            r.to_string(),
            fv.to_string(),
            ctx.sci(&ctx.from_ratio(&rep.lhs_lo), 6),
            ctx.sci(&ctx.from_ratio(&rep.rhs_hi), 6),
            rep.satisfied.to_string(),
        ]);
    } else {
        config.arg("convergents", convergents);
        let seq = diophantine::convergents_of_root(&f, idx, convergents as usize)?;
        let mut enc = f.root_enclosure(idx)?;
        for (m, conv) in seq.convergents.iter().enumerate() {
            let fv = match diophantine::integer_form(&f, conv) {
                Ok(v) => v,
                Err(Error::ZeroForm(_)) => {
                    // exact rational root reached; the inequality is void here
                    report.rows.push(vec![
                        m.to_string(),
                        conv.to_string(),
                        "0".into(),
                        "-".into(),
                        "-".into(),
                        "root".into(),
                    ]);
                    continue;
                }
                Err(e) => return Err(e),
            };
            let rep = diophantine::liouville_check_with(
                &f,
                &mut enc,
                &mahler,
                conv,
                config.precision_bits,
            )?;
            if !rep.satisfied {
                unsatisfied += 1;
            }
            report.rows.push(vec![
                m.to_string(),
                conv.to_string(),
                fv.to_string(),
                ctx.sci(&ctx.from_ratio(&rep.lhs_lo), 6),
                ctx.sci(&ctx.from_ratio(&rep.rhs_hi), 6),
                rep.satisfied.to_string(),
            ]);
        }
    }
    report.kv("unsatisfied", unsatisfied);
    if unsatisfied > 0 {
        report
            .hard_violations
            .push(format!("{unsatisfied} Liouville checks failed"));
    }
    Ok(report)
}

fn cmd_wirsing(
    config: &mut RunConfig,
    x: u64,
    fname: &str,
    tau: f64,
    form_sel: &str,
    threshold: &str,
) -> Result<Report> {
    let ctx = config.ctx();
    config.arg("x", x).arg("f", fname).arg("tau", tau);
    let mut report = Report::default();
    let w = match fname {
        "one" => density::wirsing_eval(&density::OneFn, x, tau, &ctx)?,
        "p1mod4" => density::wirsing_eval(&density::OneModFourFn, x, tau, &ctx)?,
        "chi" => {
            let form = parse_form(form_sel, None)?;
            let kind = parse_threshold(threshold)?;
            config.arg("form", form.label()).arg("threshold", threshold);
            let cls = density::classify_primes(&form, x, kind, &ctx, &config.limits)?;
            report.kv("empirical_tau", format!("{:.6}", cls.empirical_tau()));
            density::wirsing_eval(&density::ChiFn(&cls), x, tau, &ctx)?
        }
        other => {
            return Err(Error::Invalid(format!(
                "unknown function {other} (expected one | p1mod4 | chi)"
            )))
        }
    };
    report.kv("function", &w.function);
    report.kv("growth_c", format!("{:.6}", w.growth_c));
    report.kv("lhs_sum", ctx.sci(&w.lhs, 12));
    report.kv("rhs_formula", ctx.sci(&w.rhs, 12));
    report.kv("ratio_rhs_over_lhs", ctx.sci(&w.ratio, 10));
    Ok(report)
}

fn emit(report: &Report, config: &RunConfig) -> Result<()> {
    let text = report.render(config);
    match &config.output {
        Some(path) => {
            let mut file = std::fs::File::create(path)?;
            file.write_all(text.as_bytes())?;
        }
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

fn configure_threads() {
    if let Ok(v) = std::env::var("MFDESK_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            // ignore failure: the pool may already be initialized (tests)
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn dispatch(cli: Cli) -> Result<Report> {
    match cli.cmd {
        Cmd::Coeff {
            common,
            form,
            weight,
            n,
            table,
        } => {
            let mut config = RunConfig::resolve("coeff", &common)?;
            let r = cmd_coeff(&mut config, &form, weight, n, table)?;
            emit(&r, &config)?;
            Ok(r)
        }
        Cmd::Verify {
            common,
            form,
            weight,
            n,
            max_n,
            min_n,
            gap,
            p,
            k,
            m_max,
        } => {
            let mut config = RunConfig::resolve("verify", &common)?;
            let r = cmd_verify(&mut config, &form, weight, n, max_n, min_n, gap, p, k, m_max)?;
            emit(&r, &config)?;
            Ok(r)
        }
        Cmd::Density {
            common,
            x,
            form,
            threshold,
            tau,
            mertens,
            hr,
        } => {
            let mut config = RunConfig::resolve("density", &common)?;
            let r = cmd_density(&mut config, x, &form, threshold, tau, mertens, hr)?;
            emit(&r, &config)?;
            Ok(r)
        }
        Cmd::Liouville {
            common,
            poly,
            convergents,
            root_index,
            rational,
            random_pairs,
        } => {
            let mut config = RunConfig::resolve("liouville", &common)?;
            let r = cmd_liouville(&mut config, poly, convergents, root_index, rational, random_pairs)?;
            emit(&r, &config)?;
            Ok(r)
        }
        Cmd::Wirsing {
            common,
            x,
            f,
            tau,
            form,
            threshold,
        } => {
            let mut config = RunConfig::resolve("wirsing", &common)?;
            let r = cmd_wirsing(&mut config, x, &f, tau, &form, &threshold)?;
            emit(&r, &config)?;
            Ok(r)
        }
    }
}

/// Entry point for the binary. Returns the process exit code.
pub fn run() -> i32 {
    configure_threads();
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(report) => {
            if report.hard_violations.is_empty() {
                EXIT_OK
            } else {
                eprintln!("hard invariant violation: {}", report.hard_violations.join("; "));
                EXIT_HARD_VIOLATION
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_MODULE_ERROR
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn limit_parser_accepts_scientific() {
        assert_eq!(parse_limit("100000").unwrap(), 100_000);
        assert_eq!(parse_limit("100_000").unwrap(), 100_000);
        assert_eq!(parse_limit("1e6").unwrap(), 1_000_000);
        assert_eq!(parse_limit("2.5e4").unwrap(), 25_000);
        assert!(parse_limit("1e-3").is_err());
        assert!(parse_limit("abc").is_err());
    }

    #[test]
    fn form_parser() {
        assert_eq!(parse_form("delta", None).unwrap().label(), "delta");
        let ec = parse_form("ec:a=0,b=1", None).unwrap();
        assert_eq!(ec.label(), "ec:a=0,b=1");
        assert_eq!(ec.weight(), 2);
        let ec4 = parse_form("ec:a=0,b=1", Some(4)).unwrap();
        assert_eq!(ec4.weight(), 4);
        assert!(parse_form("ec:a=0,b=0", None).is_err()); // singular
        assert!(parse_form("nonsense", None).is_err());
    }

    #[test]
    fn rational_parser() {
        let r = parse_rational("-7/5").unwrap();
        assert_eq!(r.to_string(), "-7/5");
        assert!(parse_rational("3").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn report_rendering_is_deterministic() {
        let common = Common {
            epsilon: 0.01,
            precision: Some(96),
            format: Format::Json,
            output: None,
            seed: 7,
            table_cap: None,
        };
        let mut config = RunConfig::resolve("coeff", &common).unwrap();
        let r1 = cmd_coeff(&mut config, "delta", None, Some(6), None).unwrap();
        let mut config2 = RunConfig::resolve("coeff", &common).unwrap();
        let r2 = cmd_coeff(&mut config2, "delta", None, Some(6), None).unwrap();
        assert_eq!(r1.render(&config), r2.render(&config2));
        assert!(r1.render(&config).contains("\"-6048\""));
    }

    #[test]
    fn precision_floor_enforced() {
        let common = Common {
            epsilon: 0.01,
            precision: Some(32),
            format: Format::Table,
            output: None,
            seed: 0,
            table_cap: None,
        };
        assert!(RunConfig::resolve("coeff", &common).is_err());
    }
}
