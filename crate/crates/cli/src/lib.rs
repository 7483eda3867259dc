//! Configuration, suite dispatch and JSON reporting for `superyang`.

use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt;
use std::time::Instant;
use superyang_core::error::{Error, Result};
use superyang_core::exact::{fmt_rat, parse_rat, Rat};
use superyang_core::gauss::{check_gauss, currents_from_kernel, gauss_decompose, summarize};
use superyang_core::graded::GradedDims;
use superyang_core::hopf::check_hopf;
use superyang_core::lax::{check_rll_kernel, EvalModule, LaxKernel, RllForm, Sign};
use superyang_core::relations::{
    check_gl11, check_relations, check_serre, xplus_m_sign_control, DeltaSign, Relation, RelationConfig,
};
use superyang_core::report::{CheckReport, Summary, SCHEMA_VERSION};
use superyang_core::rmatrix::{check_graded_ybe, check_structure, YbeMode};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Environment variable holding the worker count.
pub const THREADS_ENV: &str = "SUPERYANG_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SuiteName {
    Ybe,
    Rll,
    Gauss,
    Relations,
    Serre,
    Gl11,
    Hopf,
}

impl SuiteName {
    pub const ALL: [SuiteName; 7] = [
        SuiteName::Ybe,
        SuiteName::Rll,
        SuiteName::Gauss,
        SuiteName::Relations,
        SuiteName::Serre,
        SuiteName::Gl11,
        SuiteName::Hopf,
    ];

    pub fn parse(s: &str) -> Result<SuiteName> {
        SuiteName::ALL
            .iter()
            .copied()
            .find(|x| x.to_string() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }

    /// Default truncation order: two-variable checks use 8, the three-
    /// and four-variable ones 6.
    pub fn default_order(self) -> i32 {
        match self {
            SuiteName::Serre | SuiteName::Hopf => 6,
            _ => 8,
        }
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SuiteName::Ybe => "ybe",
            SuiteName::Rll => "rll",
            SuiteName::Gauss => "gauss",
            SuiteName::Relations => "relations",
            SuiteName::Serre => "serre",
            SuiteName::Gl11 => "gl11",
            SuiteName::Hopf => "hopf",
        };
        f.write_str(s)
    }
}

mod rat_str {
    use super::*;
    pub fn one<S: serde::Serializer>(r: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rat(r))
    }
    pub fn many<S: serde::Serializer>(v: &[Rat], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(fmt_rat))
    }
}

/// A validated run.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub m: usize,
    pub n: usize,
    #[serde(serialize_with = "rat_str::one")]
    pub hbar: Rat,
    #[serde(serialize_with = "rat_str::many")]
    pub points: Vec<Rat>,
    /// `None` picks each suite's default.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<i32>,
    pub suites: BTreeSet<SuiteName>,
    pub ybe_mode: YbeMode,
    pub delta_sign: DeltaSign,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub only: Option<Relation>,
    /// Include the per-module Gauss factor dumps.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub dump: bool,
    #[serde(skip)]
    pub timings: bool,
}

impl RunConfig {
    pub fn new(m: usize, n: usize) -> Self {
        RunConfig {
            m,
            n,
            hbar: Rat::new(1.into(), 2.into()),
            points: vec![Rat::from_integer(3.into())],
            order: None,
            suites: SuiteName::ALL.into_iter().collect(),
            ybe_mode: YbeMode::Symbolic,
            delta_sign: DeltaSign::Paper,
            only: None,
            dump: false,
            timings: false,
        }
    }

    pub fn dims(&self) -> Result<GradedDims> {
        GradedDims::new(self.m, self.n)
    }

    pub fn order_for(&self, s: SuiteName) -> i32 {
        self.order.unwrap_or_else(|| s.default_order())
    }

    fn relation_config(&self) -> RelationConfig {
        RelationConfig { delta_sign: self.delta_sign, only: self.only }
    }

    /// Usage-level checks; module admissibility is checked when building.
    pub fn validate(&self) -> Result<()> {
        let dims = self.dims()?;
        if self.hbar.numer() == &0.into() {
            return Err(Error::ZeroHbar);
        }
        if let Some(o) = self.order {
            if !(1..=64).contains(&o) {
                return Err(Error::Config(format!("order must lie in 1..=64, got {o}")));
            }
        }
        let needs_currents = self.suites.iter().any(|s| !matches!(s, SuiteName::Ybe));
        if needs_currents && dims.dim() < 2 {
            return Err(Error::Config("m + n ≥ 2 is needed: no currents exist for a one-dimensional space".into()));
        }
        if needs_currents && self.points.is_empty() {
            return Err(Error::Config("at least one evaluation point is needed".into()));
        }
        let distinct: BTreeSet<&Rat> = self.points.iter().collect();
        if distinct.len() != self.points.len() {
            return Err(Error::Config("evaluation points must be pairwise distinct".into()));
        }
        for p in &self.points {
            EvalModule::new(dims, p.clone(), self.hbar.clone())?;
        }
        Ok(())
    }
}

/// Parses a comma-separated list of rationals.
pub fn parse_points(s: &str) -> Result<Vec<Rat>> {
    s.split(',').map(|x| parse_rat(x.trim())).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub tool_version: &'static str,
    pub config: RunConfig,
    pub summary: Summary,
    pub reports: Vec<CheckReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub dumps: Vec<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

impl SuiteReport {
    pub fn exit_code(&self) -> i32 {
        i32::from(self.reports.iter().any(|r| r.is_failure()))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

/// One module the current-based suites run on.
struct Module {
    tag: String,
    kernel: LaxKernel,
}

fn modules(cfg: &RunConfig) -> Result<Vec<Module>> {
    let dims = cfg.dims()?;
    let evals: Vec<EvalModule> =
        cfg.points.iter().map(|p| EvalModule::new(dims, p.clone(), cfg.hbar.clone())).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for (p, e) in cfg.points.iter().zip(&evals) {
        out.push(Module { tag: format!("a={}", fmt_rat(p)), kernel: LaxKernel::evaluation(e)? });
    }
    if evals.len() >= 2 {
        let tag = format!("a={},b={}", fmt_rat(&cfg.points[0]), fmt_rat(&cfg.points[1]));
        out.push(Module { tag, kernel: LaxKernel::monodromy(&evals[0], &evals[1])? });
    }
    Ok(out)
}

fn tagged(rs: Vec<CheckReport>, tag: &str) -> Vec<CheckReport> {
    rs.into_iter().map(|r| r.param("module", tag)).collect()
}

fn or_error(suite: &str, name: &str, r: Result<Vec<CheckReport>>) -> Vec<CheckReport> {
    r.unwrap_or_else(|e| vec![CheckReport::new(suite, name).errored(&e)])
}

fn run_suite(cfg: &RunConfig, suite: SuiteName, mods: &[Module], dumps: &mut Vec<serde_json::Value>) -> Vec<CheckReport> {
    let dims = cfg.dims().expect("validated");
    let h = &cfg.hbar;
    let order = cfg.order_for(suite);
    let rcfg = cfg.relation_config();
    let per_module = |f: &(dyn Fn(&Module) -> Vec<CheckReport> + Sync)| -> Vec<CheckReport> {
        mods.par_iter().map(|m| tagged(f(m), &m.tag)).collect::<Vec<_>>().into_iter().flatten().collect()
    };
    match suite {
        SuiteName::Ybe => {
            let mut out = or_error("rmatrix", "structure", check_structure(dims, h));
            out.extend(or_error("ybe", "ybe", check_graded_ybe(dims, h, cfg.ybe_mode)));
            out
        }
        SuiteName::Rll => {
            // The two-site monodromy when available, else the evaluation module.
            let m = mods.last().expect("validated");
            tagged(or_error("rll", "rll", check_rll_kernel(&m.kernel, RllForm::All, order)), &m.tag)
        }
        SuiteName::Gauss => {
            if cfg.dump {
                for m in mods {
                    let d = [Sign::Plus, Sign::Minus]
                        .iter()
                        .map(|&s| m.kernel.lax(s, order).and_then(|l| gauss_decompose(&l)).map(|g| summarize(&g, true)))
                        .collect::<Result<Vec<_>>>();
                    if let Ok(d) = d {
                        dumps.push(serde_json::json!({ "module": m.tag, "gauss": d }));
                    }
                }
            }
            per_module(&|m| or_error("gauss", "gauss", check_gauss(&m.kernel, order)))
        }
        SuiteName::Relations => per_module(&|m| {
            let mut out = match currents_from_kernel(&m.kernel, order) {
                Ok(cs) => check_relations(&cs, h, &rcfg),
                Err(e) => vec![CheckReport::new("relations", "currents").errored(&e)],
            };
            if rcfg.only.is_none() {
                out.push(xplus_m_sign_control(&m.kernel, order, &rcfg));
            }
            out
        }),
        SuiteName::Serre => per_module(&|m| match currents_from_kernel(&m.kernel, order) {
            Ok(cs) => check_serre(&cs, h, &rcfg),
            Err(e) => vec![CheckReport::new("serre", "currents").errored(&e)],
        }),
        SuiteName::Gl11 => {
            if (cfg.m, cfg.n) != (1, 1) {
                return vec![CheckReport::new("gl11", "gl11-line").skipped("the gl(1|1) line check needs m = n = 1")];
            }
            per_module(&|m| or_error("gl11", "gl11-line", currents_from_kernel(&m.kernel, order).and_then(|cs| check_gl11(&cs, h, &rcfg))))
        }
        SuiteName::Hopf => {
            if cfg.points.len() < 2 || cfg.points.len() > 3 {
                return vec![CheckReport::new("hopf", "hopf").skipped("needs two or three evaluation points")];
            }
            or_error("hopf", "hopf", check_hopf(dims, h, &cfg.points, order, &rcfg))
        }
    }
}

/// Runs the configured suites; reports keep suite order and, within a
/// suite, module and instance order.
pub fn run(cfg: &RunConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let start = Instant::now();
    let needs_modules = cfg.suites.iter().any(|s| !matches!(s, SuiteName::Ybe));
    let mods = if needs_modules { modules(cfg)? } else { Vec::new() };
    let mut reports = Vec::new();
    let mut dumps = Vec::new();
    for &s in &cfg.suites {
        let t = Instant::now();
        let rs = run_suite(cfg, s, &mods, &mut dumps);
        let el = t.elapsed();
        reports.extend(rs.into_iter().map(|r| r.timed(el, cfg.timings)));
    }
    let summary = Summary::tally(&reports);
    Ok(SuiteReport {
        schema_version: SCHEMA_VERSION,
        tool_version: TOOL_VERSION,
        config: cfg.clone(),
        summary,
        reports,
        dumps,
        runtime_ms: cfg.timings.then(|| start.elapsed().as_millis() as u64),
    })
}

/// Sizes the global worker pool from [`THREADS_ENV`], if set.
pub fn init_threads() -> Result<()> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => {
            let n: usize = v.trim().parse().map_err(|_| Error::Config(format!("{THREADS_ENV} must be a positive integer, got {v:?}")))?;
            if n == 0 {
                return Err(Error::Config(format!("{THREADS_ENV} must be positive")));
            }
            // A second initialization (tests) keeps the existing pool.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            Ok(())
        }
        Err(_) => Ok(()),
    }
}

/// One line per failing check, then the tally.
pub fn human_summary(r: &SuiteReport) -> String {
    let mut out = String::new();
    for c in r.reports.iter().filter(|c| c.is_failure()) {
        let params: Vec<String> = c.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let why = c.reason.clone().or_else(|| c.notes.first().cloned()).unwrap_or_default();
        let status = format!("{:?}", c.status).to_lowercase();
        out.push_str(&format!("{status}\t{}/{}\t[{}]\t{why}\n", c.suite, c.name, params.join(" ")));
    }
    let s = r.summary;
    out.push_str(&format!("pass {} fail {} skipped {} info {}\n", s.pass, s.fail, s.skipped, s.info));
    out
}
