//! Run configuration: flat `dotted.key = value` lines.
//!
//! ```text
//! # comment
//! problem1.kinetic.kind = salpeter
//! problem1.kinetic.m = 1
//! problem1.potential.kind = coulomb
//! problem1.potential.kappa = 0.5
//! problem1.l = 0, 1
//! problem1.levels = 3
//!
//! [basis]
//! size = 40
//! b = auto
//! ```
//!
//! A `[section]` line prefixes the keys that follow it. `problem` is accepted as
//! a synonym for `problem1`. Without kinetic keys a problem uses `p²/(2μ)`
//! with `μ = 1`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use radcomp::flow::{DEFAULT_GRID_POINTS, DEFAULT_TOLERANCE};
use radcomp::{Derivative, KineticSpec, PotentialSpec};

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub field: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "config line {line}, field `{}`: {}", self.field, self.message),
            None => write!(f, "config field `{}`: {}", self.field, self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

fn fail<T>(line: Option<usize>, field: &str, message: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError {
        line,
        field: field.to_string(),
        message: message.into(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("expected csv or json, got `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Length {
    Auto,
    Fixed(f64),
}

/// One Hamiltonian plus the levels to report.
#[derive(Debug, Clone)]
pub struct Problem {
    pub kinetic: KineticSpec<f64>,
    pub potential: PotentialSpec<f64>,
    pub ls: Vec<usize>,
    pub levels: usize,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub problems: Vec<Problem>,
    pub basis_size: usize,
    pub length: Length,
    pub grid: usize,
    pub derivative: Derivative,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub tolerance: f64,
    /// Every `key = value` pair as written, keys normalized, for the output echo.
    pub entries: BTreeMap<String, String>,
}

struct Entry {
    line: usize,
    value: String,
}

struct Entries(BTreeMap<String, Entry>);

impl Entries {
    fn get(&self, key: &str) -> Option<&Entry> {
        self.0.get(key)
    }

    fn line_of(&self, key: &str) -> Option<usize> {
        self.get(key).map(|e| e.line)
    }

    fn parse<T: FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError>
    where
        T::Err: fmt::Display,
    {
        match self.get(key) {
            None => Ok(None),
            Some(e) => e.value.parse().map(Some).or_else(|err: T::Err| fail(Some(e.line), key, format!("{err}"))),
        }
    }

    fn number(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        match self.get(key) {
            None => Ok(None),
            Some(e) => match e.value.parse::<f64>() {
                Ok(x) if x.is_finite() => Ok(Some(x)),
                _ => fail(Some(e.line), key, format!("expected a finite number, got `{}`", e.value)),
            },
        }
    }

    fn required_number(&self, key: &str, kind_key: &str) -> Result<f64, ConfigError> {
        match self.number(key)? {
            Some(x) => Ok(x),
            None => fail(self.line_of(kind_key), key, "missing"),
        }
    }

    fn positive(&self, key: &str, kind_key: &str) -> Result<f64, ConfigError> {
        let x = self.required_number(key, kind_key)?;
        if x > 0.0 {
            Ok(x)
        } else {
            fail(self.line_of(key), key, format!("must be > 0, got {x}"))
        }
    }
}

const PROBLEM_KEYS: &[&str] = &[
    "kinetic.kind",
    "kinetic.mu",
    "kinetic.m",
    "potential.kind",
    "potential.kappa",
    "potential.lambda",
    "potential.r0",
    "potential.terms",
    "potential.scale",
    "l",
    "levels",
];

const GLOBAL_KEYS: &[&str] = &[
    "basis.size",
    "basis.b",
    "flow.grid",
    "flow.derivative",
    "flow.richardson_levels",
    "output.format",
    "output.path",
    "tolerance.order",
];

fn known_key(key: &str) -> bool {
    if GLOBAL_KEYS.contains(&key) {
        return true;
    }
    ["problem1.", "problem2."]
        .iter()
        .any(|p| key.strip_prefix(p).is_some_and(|rest| PROBLEM_KEYS.contains(&rest)))
}

fn normalize(key: &str) -> String {
    match key.strip_prefix("problem.") {
        Some(rest) => format!("problem1.{rest}"),
        None => key.to_string(),
    }
}

fn tokenize(text: &str) -> Result<Entries, ConfigError> {
    let mut map = BTreeMap::new();
    let mut section = String::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(inner) = content.strip_prefix('[') {
            let Some(name) = inner.strip_suffix(']') else {
                return fail(Some(line), content, "unterminated section header");
            };
            section = name.trim().to_string();
            continue;
        }
        let Some((k, v)) = content.split_once('=') else {
            return fail(Some(line), content, "expected `key = value`");
        };
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || v.is_empty() {
            return fail(Some(line), k, "empty key or value");
        }
        let full = if section.is_empty() {
            k.to_string()
        } else {
            format!("{section}.{k}")
        };
        let key = normalize(&full);
        if !known_key(&key) {
            return fail(Some(line), &full, "unknown key");
        }
        if let Some(prev) = map.get(&key) {
            let Entry { line: first, .. } = prev;
            return fail(Some(line), &full, format!("duplicate key, first set on line {first}"));
        }
        map.insert(
            key,
            Entry {
                line,
                value: v.to_string(),
            },
        );
    }
    Ok(Entries(map))
}

fn kinetic(e: &Entries, p: &str) -> Result<KineticSpec<f64>, ConfigError> {
    let kind_key = format!("{p}.kinetic.kind");
    let kind = e.get(&kind_key).map(|x| x.value.as_str()).unwrap_or("nonrel");
    let (spec, allowed): (KineticSpec<f64>, &[&str]) = match kind {
        "nonrel" => (
            KineticSpec::NonRel {
                mu: match e.get(&format!("{p}.kinetic.mu")) {
                    Some(_) => e.positive(&format!("{p}.kinetic.mu"), &kind_key)?,
                    None => 1.0,
                },
            },
            &["mu"],
        ),
        "nonrel_two_body" => (
            KineticSpec::NonRelTwoBody {
                m: e.positive(&format!("{p}.kinetic.m"), &kind_key)?,
            },
            &["m"],
        ),
        "salpeter" => {
            let key = format!("{p}.kinetic.m");
            let m = e.required_number(&key, &kind_key)?;
            if m < 0.0 {
                return fail(e.line_of(&key), &key, format!("must be >= 0, got {m}"));
            }
            (KineticSpec::Salpeter { m }, &["m"])
        }
        other => {
            return fail(
                e.line_of(&kind_key),
                &kind_key,
                format!("unknown kinetic kind `{other}` (nonrel, nonrel_two_body, salpeter)"),
            )
        }
    };
    for param in ["mu", "m"] {
        let key = format!("{p}.kinetic.{param}");
        if !allowed.contains(&param) && e.get(&key).is_some() {
            return fail(e.line_of(&key), &key, format!("not a parameter of kinetic kind `{kind}`"));
        }
    }
    Ok(spec)
}

fn power_terms(e: &Entries, key: &str, kind_key: &str) -> Result<Vec<(f64, f64)>, ConfigError> {
    let Some(entry) = e.get(key) else {
        return fail(e.line_of(kind_key), key, "missing");
    };
    entry
        .value
        .split(',')
        .map(|term| {
            let parsed = term
                .split_once(':')
                .and_then(|(g, p)| Some((g.trim().parse::<f64>().ok()?, p.trim().parse::<f64>().ok()?)));
            match parsed {
                Some((g, p)) if g.is_finite() && p.is_finite() => Ok((g, p)),
                _ => fail(Some(entry.line), key, format!("expected `coupling:exponent`, got `{}`", term.trim())),
            }
        })
        .collect()
}

fn potential(e: &Entries, p: &str) -> Result<PotentialSpec<f64>, ConfigError> {
    let kind_key = format!("{p}.potential.kind");
    let Some(kind) = e.get(&kind_key).map(|x| x.value.as_str()) else {
        return fail(None, &kind_key, "missing");
    };
    let key = |name: &str| format!("{p}.potential.{name}");
    let (spec, allowed): (PotentialSpec<f64>, &[&str]) = match kind {
        "coulomb" => (
            PotentialSpec::Coulomb {
                kappa: e.positive(&key("kappa"), &kind_key)?,
            },
            &["kappa"],
        ),
        "harmonic" => (
            PotentialSpec::Harmonic {
                lambda: e.positive(&key("lambda"), &kind_key)?,
            },
            &["lambda"],
        ),
        "tangent_harmonic" => (
            PotentialSpec::TangentHarmonic {
                kappa: e.positive(&key("kappa"), &kind_key)?,
                r0: e.positive(&key("r0"), &kind_key)?,
            },
            &["kappa", "r0"],
        ),
        "power" => (
            PotentialSpec::PowerSum {
                terms: power_terms(e, &key("terms"), &kind_key)?,
            },
            &["terms"],
        ),
        other => {
            return fail(
                e.line_of(&kind_key),
                &kind_key,
                format!("unknown potential kind `{other}` (coulomb, harmonic, tangent_harmonic, power)"),
            )
        }
    };
    for param in ["kappa", "lambda", "r0", "terms"] {
        if !allowed.contains(&param) && e.get(&key(param)).is_some() {
            return fail(e.line_of(&key(param)), &key(param), format!("not a parameter of potential kind `{kind}`"));
        }
    }
    match e.number(&key("scale"))? {
        Some(g) => Ok(PotentialSpec::scaled(g, spec)),
        None => Ok(spec),
    }
}

fn problem(e: &Entries, p: &str) -> Result<Problem, ConfigError> {
    let l_key = format!("{p}.l");
    let ls = match e.get(&l_key) {
        None => vec![0],
        Some(entry) => {
            let parsed: Result<Vec<usize>, _> = entry.value.split(',').map(|s| s.trim().parse::<usize>()).collect();
            match parsed {
                Ok(v) if !v.is_empty() => {
                    let mut v = v;
                    v.sort_unstable();
                    v.dedup();
                    v
                }
                _ => return fail(Some(entry.line), &l_key, format!("expected a list of l >= 0, got `{}`", entry.value)),
            }
        }
    };
    let levels_key = format!("{p}.levels");
    let levels = e.parse::<usize>(&levels_key)?.unwrap_or(1);
    if levels == 0 {
        return fail(e.line_of(&levels_key), &levels_key, "must be >= 1");
    }
    let potential = potential(e, p)?;
    let kinetic = kinetic(e, p)?;
    Ok(Problem {
        kinetic,
        potential,
        ls,
        levels,
    })
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let e = tokenize(text)?;
        let has = |p: &str| e.0.keys().any(|k| k.starts_with(&format!("{p}.")));
        let mut problems = vec![problem(&e, "problem1")?];
        if has("problem2") {
            let second = problem(&e, "problem2")?;
            for (name, differs) in [
                ("problem2.l", e.get("problem2.l").is_some() && second.ls != problems[0].ls),
                ("problem2.levels", e.get("problem2.levels").is_some() && second.levels != problems[0].levels),
            ] {
                if differs {
                    return fail(e.line_of(name), name, "must match problem1; levels are compared pairwise");
                }
            }
            problems.push(second);
        }

        let basis_size = e.parse::<usize>("basis.size")?.unwrap_or(40);
        if basis_size < 2 {
            return fail(e.line_of("basis.size"), "basis.size", "need N >= 2");
        }
        if let Some(p) = problems.iter().find(|p| p.levels > basis_size) {
            let key = "problem1.levels";
            return fail(e.line_of(key), key, format!("{} levels exceed basis.size = {basis_size}", p.levels));
        }
        let length = match e.get("basis.b") {
            None => Length::Auto,
            Some(entry) if entry.value == "auto" => Length::Auto,
            Some(entry) => match entry.value.parse::<f64>() {
                Ok(b) if b > 0.0 && b.is_finite() => Length::Fixed(b),
                _ => return fail(Some(entry.line), "basis.b", format!("expected `auto` or b > 0, got `{}`", entry.value)),
            },
        };
        let grid = e.parse::<usize>("flow.grid")?.unwrap_or(DEFAULT_GRID_POINTS);
        if grid < 3 {
            return fail(e.line_of("flow.grid"), "flow.grid", "need at least 3 points");
        }
        let richardson = e.parse::<usize>("flow.richardson_levels")?.unwrap_or(4);
        let derivative = match e.get("flow.derivative").map(|x| x.value.as_str()) {
            None | Some("grid") => Derivative::Grid,
            Some("richardson") if richardson >= 1 => Derivative::Richardson { levels: richardson },
            Some("richardson") => {
                return fail(e.line_of("flow.richardson_levels"), "flow.richardson_levels", "must be >= 1")
            }
            Some(other) => {
                return fail(
                    e.line_of("flow.derivative"),
                    "flow.derivative",
                    format!("expected grid or richardson, got `{other}`"),
                )
            }
        };
        let format = e.parse::<Format>("output.format")?.unwrap_or(Format::Csv);
        let out = e.get("output.path").map(|x| PathBuf::from(&x.value));
        let tolerance = e.number("tolerance.order")?.unwrap_or(DEFAULT_TOLERANCE);
        if tolerance < 0.0 {
            return fail(e.line_of("tolerance.order"), "tolerance.order", "must be >= 0");
        }
        let entries = e.0.iter().map(|(k, v)| (k.clone(), v.value.clone())).collect();
        Ok(RunConfig {
            problems,
            basis_size,
            length,
            grid,
            derivative,
            format,
            out,
            tolerance,
            entries,
        })
    }

    /// Command-line flags win over the file; overridden values are echoed
    /// under their config keys.
    pub fn with_overrides(
        mut self,
        levels: Option<usize>,
        grid: Option<usize>,
        format: Option<Format>,
        out: Option<PathBuf>,
    ) -> Result<Self, ConfigError> {
        if let Some(k) = levels {
            if k == 0 || k > self.basis_size {
                return fail(None, "--levels", format!("need 1 <= k <= basis.size = {}", self.basis_size));
            }
            for (i, p) in self.problems.iter_mut().enumerate() {
                p.levels = k;
                self.entries.insert(format!("problem{}.levels", i + 1), k.to_string());
            }
        }
        if let Some(g) = grid {
            if g < 3 {
                return fail(None, "--grid", "need at least 3 points");
            }
            self.grid = g;
            self.entries.insert("flow.grid".into(), g.to_string());
        }
        if let Some(f) = format {
            self.format = f;
        }
        if out.is_some() {
            self.out = out;
        }
        Ok(self)
    }

    pub fn first(&self) -> &Problem {
        &self.problems[0]
    }

    /// The second problem, required by `compare` and `flow`.
    pub fn pair(&self) -> Result<(&Problem, &Problem), ConfigError> {
        match self.problems.as_slice() {
            [a, b] => Ok((a, b)),
            _ => fail(None, "problem2", "this command needs two problems (problem1.*, problem2.*)"),
        }
    }
}
