//! Batch runs: a [`RunConfig`] selects a mode and its budgets, [`run`]
//! executes it and returns a [`SuiteResult`].

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::algebra::{GradedBackend, Scalar};
use crate::cohomology::{
    check_kahler_package, cohomology_table, harmonic_lefschetz_report, koszul_box, CohomologyReport, TableRanges,
};
use crate::error::{Error, Result};
use crate::fieldops::{build_differential_d, build_n2_family, build_s2alpha_family, N2Realization};
use crate::fock::{enumerate_box, FockBox, FockMonomial};
use crate::report::{Format, SuiteResult};
use crate::sca::{golden_table, n2_bracket, Symbol};
use crate::verify::{
    check_chain_identities, check_d_compatibility, check_relative_derext, check_representation, check_sca_tables,
    check_sl2_triple, check_spectral_flow, extract_central_charge, s2alpha_table, RelationReport,
    RepresentationCheck, SweepContext, Witness,
};

/// Excitation budget of the single-pair Koszul boxes.
pub const KOSZUL_EXCITATIONS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Mode {
    VerifyN2,
    VerifyS2a,
    VerifyChain,
    VerifyRelative,
    ScaTables,
    Cohomology,
    Kahler,
}

impl Mode {
    pub const ALL: [Mode; 7] = [
        Mode::VerifyN2,
        Mode::VerifyS2a,
        Mode::VerifyChain,
        Mode::VerifyRelative,
        Mode::ScaTables,
        Mode::Cohomology,
        Mode::Kahler,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mode::VerifyN2 => "verify-n2",
            Mode::VerifyS2a => "verify-s2a",
            Mode::VerifyChain => "verify-chain",
            Mode::VerifyRelative => "verify-relative",
            Mode::ScaTables => "sca-tables",
            Mode::Cohomology => "cohomology",
            Mode::Kahler => "kahler",
        }
    }

    fn default_backend(self) -> &'static str {
        match self {
            Mode::VerifyN2 => "fmu:0:0",
            _ => "loop:sl2",
        }
    }

    fn default_emax(self) -> i64 {
        match self {
            Mode::Cohomology | Mode::Kahler => 2,
            _ => 3,
        }
    }

    fn default_window(self) -> i64 {
        match self {
            Mode::ScaTables => 3,
            _ => 2,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Mode::ALL.into_iter().find(|m| m.name() == s).ok_or_else(|| Error::Usage(format!("unknown mode `{s}`")))
    }
}

/// Settings of one run; unset budgets fall back to the mode's defaults.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunConfig {
    pub mode: Option<Mode>,
    pub backend: Option<String>,
    pub alpha: Option<String>,
    pub emax: Option<i64>,
    pub b0max: Option<usize>,
    pub window: Option<i64>,
    pub rel: bool,
    pub format: Format,
    pub jobs: Option<usize>,
    /// Records wall-clock milliseconds in reports; off keeps output reproducible.
    pub timing: bool,
}

fn parse_num<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| Error::Usage(format!("`{key}` expects a nonnegative integer, got `{v}`")))
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(Error::Usage(format!("`{key}` expects true or false, got `{v}`"))),
    }
}

impl RunConfig {
    /// Reads `key = value` lines; `#` starts a comment.
    pub fn from_config_text(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Usage(format!("config line {}: expected `key = value`", i + 1)))?;
            cfg.set(k.trim(), v.trim())?;
        }
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, v: &str) -> Result<()> {
        match key {
            "mode" => self.mode = Some(v.parse()?),
            "backend" => self.backend = Some(v.to_string()),
            "alpha" => self.alpha = Some(v.to_string()),
            "emax" => self.emax = Some(parse_num(key, v)?),
            "b0max" => self.b0max = Some(parse_num(key, v)?),
            "window" => self.window = Some(parse_num(key, v)?),
            "rel" => self.rel = parse_bool(key, v)?,
            "format" => self.format = v.parse()?,
            "jobs" => self.jobs = Some(parse_num(key, v)?),
            "timing" => self.timing = parse_bool(key, v)?,
            other => return Err(Error::Usage(format!("unknown config key `{other}`"))),
        }
        Ok(())
    }

    /// Fields set in `over` replace those of `self`.
    pub fn overlay(mut self, over: RunConfig) -> RunConfig {
        self.mode = over.mode.or(self.mode);
        self.backend = over.backend.or(self.backend);
        self.alpha = over.alpha.or(self.alpha);
        self.emax = over.emax.or(self.emax);
        self.b0max = over.b0max.or(self.b0max);
        self.window = over.window.or(self.window);
        self.jobs = over.jobs.or(self.jobs);
        self.rel |= over.rel;
        self.timing |= over.timing;
        if over.format != Format::default() {
            self.format = over.format;
        }
        self
    }

    pub fn resolve(&self) -> Result<Resolved> {
        let mode = self.mode.ok_or_else(|| Error::Usage("no mode given".into()))?;
        let backend: GradedBackend = self.backend.as_deref().unwrap_or(mode.default_backend()).parse()?;
        let alpha: Scalar = match &self.alpha {
            Some(a) => a.parse().map_err(|_| Error::Usage(format!("α must be a fraction, got `{a}`")))?,
            None => Scalar::zero(),
        };
        if !alpha.is_real() {
            return Err(Error::Usage("α must be rational".into()));
        }
        let emax = self.emax.unwrap_or(mode.default_emax());
        let window = self.window.unwrap_or(mode.default_window());
        if emax < 0 || window < 0 {
            return Err(Error::Usage("budgets must be nonnegative".into()));
        }
        if self.jobs == Some(0) {
            return Err(Error::Usage("jobs must be positive".into()));
        }
        Ok(Resolved {
            mode,
            backend,
            alpha,
            emax,
            b0max: self.b0max.unwrap_or(2),
            window,
            rel: self.rel,
            timing: self.timing,
        })
    }
}

/// A validated configuration with every default filled in.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub mode: Mode,
    pub backend: GradedBackend,
    pub alpha: Scalar,
    pub emax: i64,
    pub b0max: usize,
    pub window: i64,
    pub rel: bool,
    pub timing: bool,
}

impl Resolved {
    fn config_map(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("window".into(), self.window.to_string());
        if self.mode == Mode::ScaTables {
            m.insert("alpha".into(), self.alpha.to_string());
            return m;
        }
        m.insert("backend".into(), self.backend.to_string());
        m.insert("emax".into(), self.emax.to_string());
        m.insert("b0max".into(), self.b0max.to_string());
        if self.mode == Mode::VerifyS2a {
            m.insert("alpha".into(), self.alpha.to_string());
        }
        if self.mode == Mode::Cohomology {
            m.insert("rel".into(), self.rel.to_string());
        }
        m
    }

    fn ctx(&self, bx: &FockBox) -> SweepContext {
        let mut c = SweepContext::new(bx.to_string());
        c.timing = self.timing;
        c
    }

    fn absolute_states(&self) -> Result<(FockBox, Vec<FockMonomial>)> {
        let bx = FockBox::absolute(self.emax, self.b0max);
        Ok((bx.clone(), enumerate_box(self.backend.module_dim(), &bx)?))
    }

    fn require_loop(&self) -> Result<()> {
        if self.backend.algebra().is_none() {
            return Err(Error::Usage(format!("mode {} needs a loop backend, got {}", self.mode, self.backend)));
        }
        Ok(())
    }
}

/// Collects results and reports each one as it completes.
struct Collector<'a> {
    result: SuiteResult,
    progress: &'a mut dyn FnMut(&str),
}

impl Collector<'_> {
    fn push(&mut self, r: RelationReport) {
        (self.progress)(&format!("{} {}", if r.passed() { "pass" } else { "FAIL" }, r.check));
        self.result.reports.push(r);
    }

    fn table(&mut self, t: CohomologyReport) {
        (self.progress)(&format!("{} cohomology table {}", if t.audit.passed() { "pass" } else { "FAIL" }, t.backend));
        self.result.tables.push(t);
    }
}

/// A report that passes exactly when `witness` is `None`.
fn verdict(check: &str, ctx: &SweepContext, witness: Option<Witness>, notes: Vec<String>, start: Instant) -> RelationReport {
    let mut r = RelationReport::new(check, &ctx.params, &ctx.box_desc);
    r.relations = 1;
    r.notes = notes;
    r.conclude(witness, start, ctx.timing)
}

fn value_witness(relation: &str, lhs: impl ToString, rhs: impl ToString) -> Witness {
    Witness { relation: relation.to_string(), monomial: String::new(), lhs: lhs.to_string(), rhs: rhs.to_string() }
}

/// Runs the configured suite on the current rayon pool.
pub fn run(config: &RunConfig, progress: &mut dyn FnMut(&str)) -> Result<SuiteResult> {
    let cfg = config.resolve()?;
    let mut col = Collector {
        result: SuiteResult { mode: cfg.mode.to_string(), config: cfg.config_map(), ..Default::default() },
        progress,
    };
    match cfg.mode {
        Mode::VerifyN2 => run_n2(&cfg, &mut col)?,
        Mode::VerifyS2a => run_s2a(&cfg, &mut col)?,
        Mode::VerifyChain => run_chain(&cfg, &mut col)?,
        Mode::VerifyRelative => run_relative(&cfg, &mut col)?,
        Mode::ScaTables => run_sca_tables(&cfg, &mut col)?,
        Mode::Cohomology => run_cohomology(&cfg, &mut col)?,
        Mode::Kahler => run_kahler(&cfg, &mut col)?,
    }
    let mut result = col.result;
    let failures = result.failures();
    result.summary.insert("checks".into(), (result.reports.len() + result.tables.len() + result.koszul.len()).to_string());
    result.summary.insert("failed".into(), failures.len().to_string());
    result.summary.insert("status".into(), if failures.is_empty() { "pass" } else { "fail" }.into());
    Ok(result)
}

/// [`run`] on a dedicated pool of `config.jobs` threads (all cores if unset).
pub fn run_with_jobs(config: &RunConfig, progress: &mut (dyn FnMut(&str) + Send)) -> Result<SuiteResult> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = config.jobs {
        builder = builder.num_threads(j);
    }
    let pool = builder.build().map_err(|e| Error::Structural(e.to_string()))?;
    pool.install(|| run(config, progress))
}

fn central_charge_report(
    check: &str,
    ctx: &SweepContext,
    extracted: Result<Scalar>,
    expected: &Scalar,
    col: &mut Collector<'_>,
) {
    let start = Instant::now();
    let witness = match &extracted {
        Ok(c) if c == expected => None,
        Ok(c) => Some(value_witness("central charge", c, expected)),
        Err(e) => Some(value_witness("central charge", e, expected)),
    };
    if let Ok(c) = &extracted {
        col.result.summary.insert("central_charge".into(), c.to_string());
    }
    col.push(verdict(check, ctx, witness, vec![format!("expected {expected}")], start));
}

fn run_n2(cfg: &Resolved, col: &mut Collector<'_>) -> Result<()> {
    let real = N2Realization::from_backend(&cfg.backend)?;
    let (bx, states) = cfg.absolute_states()?;
    let ctx = cfg.ctx(&bx).param("backend", &cfg.backend);
    let expected = real.central_charge();
    let h = |n| build_n2_family(&real, Symbol::H, n);
    central_charge_report("n2-central-charge", &ctx, extract_central_charge(&h, &FockMonomial::vacuum()), &expected, col);
    let builder = |s, n| build_n2_family(&real, s, n);
    let table = |a: &_, b: &_| n2_bracket(a, b);
    let spec = RepresentationCheck {
        check: "n2-relations".into(),
        symbols: Symbol::ALL.into_iter().filter(|s| s.in_n2()).collect(),
        window: cfg.window,
        table: &table,
        builder: &builder,
        central_value: expected,
    };
    col.push(check_representation(&spec, &states, &ctx)?);
    Ok(())
}

fn run_s2a(cfg: &Resolved, col: &mut Collector<'_>) -> Result<()> {
    cfg.require_loop()?;
    let dim = cfg.backend.module_dim();
    let (bx, states) = cfg.absolute_states()?;
    let ctx = cfg.ctx(&bx).param("backend", &cfg.backend).param("alpha", &cfg.alpha);
    let expected = Scalar::from_i64(3 * dim as i64);
    let alpha = cfg.alpha.clone();
    let h = |n| build_s2alpha_family(dim, &alpha, Symbol::H, n);
    central_charge_report("s2alpha-central-charge", &ctx, extract_central_charge(&h, &FockMonomial::vacuum()), &expected, col);
    let builder = |s, n| build_s2alpha_family(dim, &alpha, s, n);
    let table = s2alpha_table(alpha.clone());
    let spec = RepresentationCheck {
        check: "s2alpha-relations".into(),
        symbols: Symbol::ALL.to_vec(),
        window: cfg.window,
        table: &table,
        builder: &builder,
        central_value: expected,
    };
    col.push(check_representation(&spec, &states, &ctx)?);
    Ok(())
}

fn run_chain(cfg: &Resolved, col: &mut Collector<'_>) -> Result<()> {
    let (bx, states) = cfg.absolute_states()?;
    let ctx = cfg.ctx(&bx);
    for r in check_chain_identities(&cfg.backend, &states, cfg.window, &ctx)? {
        col.push(r);
    }
    if cfg.backend.algebra().is_some() {
        col.push(check_d_compatibility(&cfg.backend, &states, cfg.window, &ctx.param("backend", &cfg.backend))?);
    }
    Ok(())
}

fn run_relative(cfg: &Resolved, col: &mut Collector<'_>) -> Result<()> {
    cfg.require_loop()?;
    let bx = FockBox::relative(cfg.emax, cfg.b0max);
    let states = enumerate_box(cfg.backend.module_dim(), &bx)?;
    let ctx = cfg.ctx(&bx).param("backend", &cfg.backend);
    // the absolute vacuum leaves every mode-0 τ hole empty
    let control = [FockMonomial::vacuum()];
    col.push(check_relative_derext(&cfg.backend, &states, cfg.window, &control, &ctx)?);
    col.push(check_sl2_triple(&cfg.backend, &states, &ctx)?);
    Ok(())
}

fn run_sca_tables(cfg: &Resolved, col: &mut Collector<'_>) -> Result<()> {
    let mut ctx = SweepContext::new(format!("|n|<={}", cfg.window));
    ctx.timing = cfg.timing;
    for r in check_sca_tables(&cfg.alpha, cfg.window, &ctx)? {
        col.push(r);
    }
    col.push(check_spectral_flow(&cfg.alpha, cfg.window, &ctx)?);
    col.result.summary.insert("golden_table_rows".into(), golden_table(&cfg.alpha, cfg.window).len().to_string());
    Ok(())
}

fn run_cohomology(cfg: &Resolved, col: &mut Collector<'_>) -> Result<()> {
    let d = build_differential_d(&cfg.backend)?;
    let ranges = TableRanges { emax: cfg.emax, deg_s_min: -(cfg.b0max as i64), relative: cfg.rel };
    col.table(cohomology_table(&cfg.backend, &d.d, "d", &ranges)?);
    for c in 0..cfg.backend.module_dim() {
        for m in -cfg.window..=cfg.window {
            let k = koszul_box(&cfg.backend, c, m, KOSZUL_EXCITATIONS)?;
            (col.progress)(&format!("{} koszul c={} m={m}", if k.passed() { "pass" } else { "FAIL" }, c + 1));
            col.result.koszul.push(k);
        }
    }
    Ok(())
}

fn run_kahler(cfg: &Resolved, col: &mut Collector<'_>) -> Result<()> {
    cfg.require_loop()?;
    let mut ctx = SweepContext::new(format!("relative E<={}, DegS>={}", cfg.emax, -(cfg.b0max as i64)))
        .param("backend", &cfg.backend);
    ctx.timing = cfg.timing;
    for r in check_kahler_package(&cfg.backend, cfg.emax, -(cfg.b0max as i64), &ctx)? {
        col.push(r);
    }
    let start = Instant::now();
    let h = harmonic_lefschetz_report(&cfg.backend, cfg.emax)?;
    let hctx = SweepContext { box_desc: format!("relative E<={}", cfg.emax), ..ctx.clone() };
    let lef = h.lefschetz.iter().find(|l| !l.sl2_on_cocycles).map(|l| {
        value_witness(&format!("sl2 on cocycles E={} DegS={} degree={}", l.e, l.deg_s, l.degree), "fails", "holds")
    });
    let hodge = h.hodge_failures.first().map(|p| value_witness(&format!("harmonic dim at {p}"), "differs", "coh_dim"));
    let mut r = verdict("harmonic-lefschetz", &hctx, lef.or(hodge), h.notes.clone(), start);
    r.relations = h.lefschetz.len();
    col.push(r);
    let start = Instant::now();
    let eig = (!h.hh_matches_a_plus_b).then(|| {
        let first = h.hh_eigen.iter().find(|x| {
            let vac = h.hh_vacuum.clone().unwrap_or_else(Scalar::zero);
            x.value.as_ref() != Some(&(Scalar::from_i64(x.a + x.b) + vac))
        });
        match first {
            Some(x) => value_witness(
                &format!("HH eigenvalue on C^({},{}) at E={} DegS={}", x.a, x.b, x.e, x.deg_s),
                x.value.as_ref().map(ToString::to_string).unwrap_or_else(|| "not an eigenvector".into()),
                format!("a+b = {}", x.a + x.b),
            ),
            None => value_witness("HH eigenvalue", "mismatch", "a+b"),
        }
    });
    let mut notes = Vec::new();
    if h.hh_matches_a_minus_b {
        notes.push("every eigenvalue equals a-b, with HH·vac_rel = 0".into());
    }
    let mut r = verdict("hh-eigenvalue-a-plus-b", &hctx, eig, notes, start);
    r.relations = h.hh_eigen.len();
    col.push(r);
    col.result.harmonic = Some(h);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_text_round_trip() {
        let cfg = RunConfig::from_config_text("mode = verify-s2a\n# budgets\nemax = 2\nalpha = 1/2 # half\nrel = true\n").unwrap();
        assert_eq!(cfg.mode, Some(Mode::VerifyS2a));
        assert_eq!(cfg.emax, Some(2));
        assert_eq!(cfg.alpha.as_deref(), Some("1/2"));
        assert!(cfg.rel);
        assert!(matches!(RunConfig::from_config_text("bogus = 1"), Err(Error::Usage(_))));
        assert!(matches!(RunConfig::from_config_text("emax 3"), Err(Error::Usage(_))));
    }

    #[test]
    fn invalid_backend_is_a_usage_error() {
        let cfg = RunConfig { mode: Some(Mode::VerifyChain), backend: Some("loop:e8".into()), ..Default::default() };
        assert!(matches!(cfg.resolve(), Err(Error::Usage(_))));
        let cfg = RunConfig { mode: Some(Mode::Kahler), backend: Some("fmu:0:0".into()), ..Default::default() };
        assert!(matches!(run(&cfg, &mut |_| {}), Err(Error::Usage(_))));
    }
}
