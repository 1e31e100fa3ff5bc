//! Line-oriented `key = value` configuration.
//!
//! ```text
//! # comment
//! regime = fluid
//! grid.nx = 32
//! output.dir = "out/run1"
//! output.snapshots = 0.0, 10.0
//! ```
//!
//! Keys are dotted, values are bare or double-quoted, and `#` starts a
//! comment outside quotes. Parsing reports every problem it finds, each with
//! the line it came from.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::path::PathBuf;

use erpic::integrator::{Regime, Scheme};
use erpic::magnetic::{MagneticModel, Perturbation2D};
use erpic::mesh::{Domain, Grid2D};
use erpic::sampling::InitialDistribution;

/// One configuration problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigIssue {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

/// All problems found in one configuration text.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ConfigErrors(pub Vec<ConfigIssue>);

impl fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, issue) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_char('\n')?;
            }
            write!(f, "{issue}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DistributionSpec {
    TwoBump { eta: f64, k: f64 },
    Diocotron { alpha: f64, l: u32, r_minus: f64, r_plus: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MagneticKind {
    /// `b = b0 + eps (1 + sin x1 sin x2 / 2)`
    Example1,
    /// `b = b0`
    Uniform,
    /// `b = b0 + eps b1`
    CustomConstant,
}

impl MagneticKind {
    fn name(self) -> &'static str {
        match self {
            MagneticKind::Example1 => "example1",
            MagneticKind::Uniform => "uniform",
            MagneticKind::CustomConstant => "custom-constant",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub nx: usize,
    pub ny: usize,
    /// `[x_lo, x_hi, y_lo, y_hi]`; defaults to the distribution's own box.
    pub bounds: Option<[f64; 4]>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InitSpec {
    pub distribution: DistributionSpec,
    pub particles: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MagneticSpec {
    pub model: MagneticKind,
    pub b0: f64,
    pub b1: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputSpec {
    pub dir: PathBuf,
    /// Snapshot times on the stepper clock (`tau` for rescaled regimes).
    pub snapshots: Vec<f64>,
    pub energy: bool,
    /// Also write the kinetic-energy density with each snapshot.
    pub moments: bool,
    /// Also write the velocity marginal with each snapshot.
    pub marginal: bool,
}

/// A validated simulation configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub regime: Regime,
    pub eps: f64,
    /// Step on the stepper clock.
    pub dt: f64,
    /// Physical final time; rescaled regimes run to `t_final / eps`.
    pub t_final: f64,
    pub scheme: Scheme,
    pub grid: GridSpec,
    pub init: InitSpec,
    pub magnetic: MagneticSpec,
    pub output: OutputSpec,
}

const MAX_STEPS: u64 = 1 << 40;

impl SimulationConfig {
    /// Final time on the stepper clock.
    pub fn horizon(&self) -> f64 {
        if self.regime.is_rescaled() {
            self.t_final / self.eps
        } else {
            self.t_final
        }
    }

    /// Whole steps of `dt` that fit in the horizon (round-off tolerant).
    pub fn step_count(&self) -> u64 {
        let r = self.horizon() / self.dt;
        (r + 1e-9 * r.max(1.0)).floor() as u64
    }

    pub fn distribution(&self) -> erpic::Result<InitialDistribution> {
        let mut dist = match self.init.distribution {
            DistributionSpec::TwoBump { eta, k } => InitialDistribution::two_bump(eta, k)?,
            DistributionSpec::Diocotron {
                alpha,
                l,
                r_minus,
                r_plus,
            } => {
                let half = match self.grid.bounds {
                    Some(b) => b.iter().fold(f64::INFINITY, |m, v| m.min(v.abs())),
                    None => 12.0,
                };
                InitialDistribution::diocotron(alpha, l, r_minus, r_plus, half)?
            }
        };
        if let Some([x_lo, x_hi, y_lo, y_hi]) = self.grid.bounds {
            dist.domain = Domain::new(x_lo, x_hi, y_lo, y_hi)?;
        }
        Ok(dist)
    }

    pub fn grid2d(&self) -> erpic::Result<Grid2D> {
        Grid2D::new(self.grid.nx, self.grid.ny, self.distribution()?.domain)
    }

    pub fn magnetic_model(&self) -> MagneticModel {
        let MagneticSpec { model, b0, b1 } = self.magnetic;
        let b1 = match model {
            MagneticKind::Example1 => Perturbation2D::SinSin,
            MagneticKind::Uniform => Perturbation2D::Zero,
            MagneticKind::CustomConstant => Perturbation2D::Constant(b1),
        };
        MagneticModel::Scalar2D { b0, b1 }
    }

    /// Canonical text; `parse_config(&c.render()) == Ok(c)`.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        kv("regime", self.regime.name().into());
        kv("eps", format!("{:?}", self.eps));
        kv("dt", format!("{:?}", self.dt));
        kv("t_final", format!("{:?}", self.t_final));
        kv("scheme", self.scheme.name().into());
        kv("grid.nx", self.grid.nx.to_string());
        kv("grid.ny", self.grid.ny.to_string());
        if let Some(b) = self.grid.bounds {
            for (k, v) in ["grid.x_lo", "grid.x_hi", "grid.y_lo", "grid.y_hi"].iter().zip(b) {
                kv(k, format!("{v:?}"));
            }
        }
        match self.init.distribution {
            DistributionSpec::TwoBump { eta, k } => {
                kv("init.distribution", "two-bump".into());
                kv("init.eta", format!("{eta:?}"));
                kv("init.k", format!("{k:?}"));
            }
            DistributionSpec::Diocotron {
                alpha,
                l,
                r_minus,
                r_plus,
            } => {
                kv("init.distribution", "diocotron".into());
                kv("init.alpha", format!("{alpha:?}"));
                kv("init.l", l.to_string());
                kv("init.r_minus", format!("{r_minus:?}"));
                kv("init.r_plus", format!("{r_plus:?}"));
            }
        }
        kv("init.particles", self.init.particles.to_string());
        kv("init.seed", self.init.seed.to_string());
        kv("magnetic.model", self.magnetic.model.name().into());
        kv("magnetic.b0", format!("{:?}", self.magnetic.b0));
        if self.magnetic.model == MagneticKind::CustomConstant {
            kv("magnetic.b1", format!("{:?}", self.magnetic.b1));
        }
        kv("output.dir", quote(&self.output.dir.to_string_lossy()));
        let snaps: Vec<String> = self.output.snapshots.iter().map(|t| format!("{t:?}")).collect();
        kv("output.snapshots", snaps.join(", "));
        kv("output.energy", self.output.energy.to_string());
        kv("output.moments", self.output.moments.to_string());
        kv("output.marginal", self.output.marginal.to_string());
        s
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

const KEYS: &[&str] = &[
    "regime",
    "eps",
    "dt",
    "t_final",
    "scheme",
    "grid.nx",
    "grid.ny",
    "grid.x_lo",
    "grid.x_hi",
    "grid.y_lo",
    "grid.y_hi",
    "init.distribution",
    "init.particles",
    "init.seed",
    "init.eta",
    "init.k",
    "init.alpha",
    "init.l",
    "init.r_minus",
    "init.r_plus",
    "magnetic.model",
    "magnetic.b0",
    "magnetic.b1",
    "output.dir",
    "output.snapshots",
    "output.energy",
    "output.moments",
    "output.marginal",
];

/// Raw `key -> (line, value)` table.
#[derive(Debug, Default, Clone)]
pub struct RawConfig {
    entries: BTreeMap<String, (usize, String)>,
}

impl RawConfig {
    /// Sets or replaces a key (used for command-line overrides).
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigIssue> {
        if !KEYS.contains(&key) {
            return Err(ConfigIssue {
                line: None,
                message: format!("unknown key `{key}`"),
            });
        }
        let value = unquote(value.trim()).map_err(|m| ConfigIssue { line: None, message: m })?;
        self.entries.insert(key.to_string(), (0, value));
        Ok(())
    }
}

fn unquote(v: &str) -> Result<String, String> {
    let Some(inner) = v.strip_prefix('"') else {
        return Ok(v.to_string());
    };
    let mut out = String::new();
    let mut chars = inner.chars();
    while let Some(c) = chars.next() {
        match c {
            '\\' => match chars.next() {
                Some(e @ ('\\' | '"')) => out.push(e),
                _ => return Err("bad escape in quoted string".into()),
            },
            '"' => {
                return if chars.as_str().trim().is_empty() {
                    Ok(out)
                } else {
                    Err("text after closing quote".into())
                };
            }
            c => out.push(c),
        }
    }
    Err("unterminated quoted string".into())
}

/// Drops a `#` comment that is not inside quotes.
fn strip_comment(line: &str) -> &str {
    let mut in_quotes = false;
    let mut escaped = false;
    for (i, c) in line.char_indices() {
        match c {
            '\\' if in_quotes && !escaped => {
                escaped = true;
                continue;
            }
            '"' if !escaped => in_quotes = !in_quotes,
            '#' if !in_quotes => return &line[..i],
            _ => {}
        }
        escaped = false;
    }
    line
}

/// Splits text into raw entries; syntax problems are appended to `issues`.
pub fn parse_raw(text: &str, issues: &mut Vec<ConfigIssue>) -> RawConfig {
    let mut raw = RawConfig::default();
    for (i, line) in text.lines().enumerate() {
        let n = i + 1;
        let body = strip_comment(line).trim();
        if body.is_empty() {
            continue;
        }
        let issue = |m: String| ConfigIssue { line: Some(n), message: m };
        let Some((key, value)) = body.split_once('=') else {
            issues.push(issue(format!("expected `key = value`, found `{body}`")));
            continue;
        };
        let key = key.trim();
        if !KEYS.contains(&key) {
            issues.push(issue(format!("unknown key `{key}`")));
            continue;
        }
        match unquote(value.trim()) {
            Ok(v) => {
                if let Some((first, _)) = raw.entries.insert(key.to_string(), (n, v)) {
                    issues.push(issue(format!("duplicate key `{key}` (first set on line {first})")));
                }
            }
            Err(m) => issues.push(issue(m)),
        }
    }
    raw
}

struct Reader<'a> {
    raw: &'a RawConfig,
    issues: Vec<ConfigIssue>,
}

impl Reader<'_> {
    fn line(&self, key: &str) -> Option<usize> {
        self.raw.entries.get(key).map(|(l, _)| *l).filter(|&l| l > 0)
    }

    fn fail(&mut self, key: &str, message: String) {
        let line = self.line(key);
        self.issues.push(ConfigIssue { line, message });
    }

    fn get<T>(&mut self, key: &str, what: &str, conv: impl Fn(&str) -> Option<T>) -> Option<T> {
        let (_, v) = self.raw.entries.get(key)?;
        match conv(v) {
            Some(x) => Some(x),
            None => {
                let v = v.clone();
                self.fail(key, format!("`{key}` expects {what}, found `{v}`"));
                None
            }
        }
    }

    fn required<T>(&mut self, key: &str, what: &str, conv: impl Fn(&str) -> Option<T>) -> Option<T> {
        if !self.raw.entries.contains_key(key) {
            self.issues.push(ConfigIssue {
                line: None,
                message: format!("missing required key `{key}`"),
            });
            return None;
        }
        self.get(key, what, conv)
    }

    fn float(&mut self, key: &str, required: bool) -> Option<f64> {
        let conv = |s: &str| s.parse::<f64>().ok().filter(|x| x.is_finite());
        if required {
            self.required(key, "a finite number", conv)
        } else {
            self.get(key, "a finite number", conv)
        }
    }

    fn uint<T: std::str::FromStr>(&mut self, key: &str, required: bool) -> Option<T> {
        let conv = |s: &str| s.parse::<T>().ok();
        if required {
            self.required(key, "a non-negative integer", conv)
        } else {
            self.get(key, "a non-negative integer", conv)
        }
    }

    fn boolean(&mut self, key: &str, default: bool) -> bool {
        self.get(key, "`true` or `false`", |s| s.parse::<bool>().ok())
            .unwrap_or(default)
    }

    fn check(&mut self, key: &str, ok: bool, message: &str) {
        if !ok {
            self.fail(key, message.to_string());
        }
    }
}

fn parse_list(s: &str) -> Option<Vec<f64>> {
    if s.trim().is_empty() {
        return Some(Vec::new());
    }
    s.split(',')
        .map(|t| t.trim().parse::<f64>().ok().filter(|x| x.is_finite()))
        .collect()
}

/// Parses and validates configuration text.
pub fn parse_config(text: &str) -> Result<SimulationConfig, ConfigErrors> {
    let mut issues = Vec::new();
    let raw = parse_raw(text, &mut issues);
    match from_raw(&raw) {
        Ok(c) if issues.is_empty() => Ok(c),
        Ok(_) => Err(ConfigErrors(issues)),
        Err(ConfigErrors(more)) => {
            issues.extend(more);
            Err(ConfigErrors(issues))
        }
    }
}

/// Validates a raw table (after any overrides were applied).
pub fn from_raw(raw: &RawConfig) -> Result<SimulationConfig, ConfigErrors> {
    let mut r = Reader {
        raw,
        issues: Vec::new(),
    };
    let regime = r.required("regime", "one of fluid, larmor, diffusion", Regime::parse);
    let eps = r.float("eps", true);
    if let Some(e) = eps {
        r.check("eps", e > 0.0 && e <= 1.0, &format!("eps = {e} violates 0 < eps <= 1"));
    }
    let dt = r.float("dt", true);
    if let Some(d) = dt {
        r.check("dt", d > 0.0, &format!("dt = {d} must be positive"));
    }
    let t_final = r.float("t_final", true);
    if let Some(t) = t_final {
        r.check("t_final", t > 0.0, &format!("t_final = {t} must be positive"));
    }
    let scheme = r.required("scheme", "one of RS1, RS2, RK4REF", Scheme::parse);

    let nx = r.uint::<usize>("grid.nx", true);
    let ny = r.uint::<usize>("grid.ny", true);
    for (key, n) in [("grid.nx", nx), ("grid.ny", ny)] {
        if let Some(n) = n {
            r.check(key, n >= erpic::mesh::MIN_CELLS, &format!("{key} = {n} must be at least 8"));
        }
    }
    let bound_keys = ["grid.x_lo", "grid.x_hi", "grid.y_lo", "grid.y_hi"];
    let given: Vec<Option<f64>> = bound_keys.iter().map(|k| r.float(k, false)).collect();
    let present = bound_keys.iter().filter(|k| raw.entries.contains_key(**k)).count();
    let bounds = match present {
        0 => None,
        4 => match given[..] {
            [Some(a), Some(b), Some(c), Some(d)] => {
                r.check("grid.x_hi", b > a, "grid.x_hi must exceed grid.x_lo");
                r.check("grid.y_hi", d > c, "grid.y_hi must exceed grid.y_lo");
                Some([a, b, c, d])
            }
            _ => None,
        },
        _ => {
            r.issues.push(ConfigIssue {
                line: None,
                message: "grid bounds need all of grid.x_lo, grid.x_hi, grid.y_lo, grid.y_hi".into(),
            });
            None
        }
    };

    let dist_name = r.required("init.distribution", "two-bump or diocotron", |s| match s {
        "two-bump" | "diocotron" => Some(s.to_string()),
        _ => None,
    });
    let distribution = match dist_name.as_deref() {
        Some("two-bump") => {
            let eta = r.float("init.eta", false).unwrap_or(0.05);
            let k = r.float("init.k", false).unwrap_or(0.5);
            r.check("init.k", k > 0.0, "init.k must be positive");
            Some(DistributionSpec::TwoBump { eta, k })
        }
        Some(_) => {
            let alpha = r.float("init.alpha", false).unwrap_or(0.2);
            let l = r.uint::<u32>("init.l", false).unwrap_or(5);
            let r_minus = r.float("init.r_minus", false).unwrap_or(5.0);
            let r_plus = r.float("init.r_plus", false).unwrap_or(8.0);
            r.check("init.alpha", alpha.abs() <= 1.0, "init.alpha must satisfy |alpha| <= 1");
            r.check(
                "init.r_plus",
                0.0 <= r_minus && r_minus < r_plus,
                "ring radii must satisfy 0 <= init.r_minus < init.r_plus",
            );
            Some(DistributionSpec::Diocotron {
                alpha,
                l,
                r_minus,
                r_plus,
            })
        }
        None => None,
    };
    let particles = r.uint::<usize>("init.particles", true);
    if let Some(n) = particles {
        r.check("init.particles", n >= 1, "init.particles must be at least 1");
    }
    let seed = r.uint::<u64>("init.seed", true);

    let model = r
        .get("magnetic.model", "example1, uniform or custom-constant", |s| match s {
            "example1" => Some(MagneticKind::Example1),
            "uniform" => Some(MagneticKind::Uniform),
            "custom-constant" => Some(MagneticKind::CustomConstant),
            _ => None,
        })
        .unwrap_or(MagneticKind::Example1);
    let b0 = r.float("magnetic.b0", false).unwrap_or(1.0);
    let b1 = r.float("magnetic.b1", false).unwrap_or(0.0);
    if model != MagneticKind::CustomConstant && raw.entries.contains_key("magnetic.b1") {
        r.fail("magnetic.b1", "magnetic.b1 only applies to magnetic.model = custom-constant".into());
    }

    let dir = r
        .get("output.dir", "a path", |s| (!s.is_empty()).then(|| PathBuf::from(s)))
        .unwrap_or_else(|| PathBuf::from("out"));
    let snapshots = r
        .get("output.snapshots", "a comma-separated list of times", parse_list)
        .unwrap_or_default();
    if snapshots.iter().any(|&t| t < 0.0) {
        r.fail("output.snapshots", "snapshot times must be non-negative".into());
    }
    let output = OutputSpec {
        dir,
        snapshots,
        energy: r.boolean("output.energy", true),
        moments: r.boolean("output.moments", false),
        marginal: r.boolean("output.marginal", false),
    };

    let fields = (regime, eps, dt, t_final, scheme, nx, ny, distribution, particles, seed);
    let (
        Some(regime),
        Some(eps),
        Some(dt),
        Some(t_final),
        Some(scheme),
        Some(nx),
        Some(ny),
        Some(distribution),
        Some(particles),
        Some(seed),
    ) = fields
    else {
        return Err(ConfigErrors(r.issues));
    };
    let config = SimulationConfig {
        regime,
        eps,
        dt,
        t_final,
        scheme,
        grid: GridSpec { nx, ny, bounds },
        init: InitSpec {
            distribution,
            particles,
            seed,
        },
        magnetic: MagneticSpec { model, b0, b1 },
        output,
    };
    if r.issues.is_empty() {
        // cross-field invariants, checked once every field is individually valid
        if let Err(e) = config.distribution().and_then(|_| config.grid2d()) {
            r.issues.push(ConfigIssue {
                line: None,
                message: format!("inconsistent domain: {e}"),
            });
        }
        let steps = config.horizon() / config.dt;
        if !(steps < MAX_STEPS as f64) {
            r.fail("dt", format!("run would take {steps:e} steps"));
        }
    }
    if r.issues.is_empty() {
        Ok(config)
    } else {
        Err(ConfigErrors(r.issues))
    }
}
