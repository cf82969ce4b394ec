//! Seeded static, dynamic and showcase experiments with CSV and SVG output.
//!
//! Every trial draws one graph from a seed derived from (master seed, size,
//! trial) and runs all configured methods on it, so methods are compared on
//! identical instances and results do not depend on execution order.

use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::baselines::{ga_cover, greedy_cover, CostProfile, GaConfig};
use crate::centrality::{CostParams, CostVector};
use crate::dynamic::{growth_sequence, run_dynamic_costed, Attachment, GrowthSchedule, StepRecord, TRACE_HEADER};
use crate::error::{Error, Result};
use crate::generators::{default_er_probability, generate, Family, GeneratorSpec};
use crate::graph::Graph;
use crate::lp::{FractionalSolution, SolverConfig};
use crate::select::{select_with_cost, NexusSet, SelectionParams};

pub const STATIC_HEADER: &str = "method,cost_profile,family,n,trial,runtime_ms,selected_count,total_cost,feasible";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Static,
    Dynamic,
    Showcase,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "static" => Ok(Mode::Static),
            "dynamic" => Ok(Mode::Dynamic),
            "showcase" => Ok(Mode::Showcase),
            other => Err(Error::Config(format!("unknown mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Solver {
    L1,
    Greedy,
    Ga,
}

/// A selection method paired with the cost profile it minimises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Method {
    pub solver: Solver,
    pub profile: CostProfile,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method { solver: Solver::L1, profile: CostProfile::Centrality },
        Method { solver: Solver::L1, profile: CostProfile::Degree },
        Method { solver: Solver::Greedy, profile: CostProfile::Centrality },
        Method { solver: Solver::Greedy, profile: CostProfile::Degree },
        Method { solver: Solver::Ga, profile: CostProfile::Centrality },
        Method { solver: Solver::Ga, profile: CostProfile::Degree },
    ];

    pub fn as_str(self) -> &'static str {
        use CostProfile::*;
        match (self.solver, self.profile) {
            (Solver::L1, Centrality) => "l1-centrality",
            (Solver::L1, Degree) => "l1-degree",
            (Solver::Greedy, Centrality) => "greedy-centrality",
            (Solver::Greedy, Degree) => "greedy-degree",
            (Solver::Ga, Centrality) => "ga-centrality",
            (Solver::Ga, Degree) => "ga-degree",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown method `{s}`")))
    }
}

/// Parses a comma-separated method list.
pub fn parse_methods(s: &str) -> Result<Vec<Method>> {
    let methods = s.split(',').filter(|t| !t.trim().is_empty()).map(str::parse).collect::<Result<Vec<_>>>()?;
    if methods.is_empty() {
        return Err(Error::Config("method list is empty".into()));
    }
    Ok(methods)
}

/// Parses a size list: comma-separated counts or inclusive `lo..hi:step`
/// ranges, e.g. `10,100..1000:100`.
pub fn parse_sizes(s: &str) -> Result<Vec<usize>> {
    let bad = |t: &str| Error::Config(format!("bad size entry `{t}`"));
    let mut out = Vec::new();
    for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        if let Some((lo, rest)) = tok.split_once("..") {
            let (hi, step) = rest.split_once(':').unwrap_or((rest, "1"));
            let lo: usize = lo.trim().parse().map_err(|_| bad(tok))?;
            let hi: usize = hi.trim().parse().map_err(|_| bad(tok))?;
            let step: usize = step.trim().parse().map_err(|_| bad(tok))?;
            if step == 0 || lo > hi {
                return Err(bad(tok));
            }
            out.extend((lo..=hi).step_by(step));
        } else {
            out.push(tok.parse().map_err(|_| bad(tok))?);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub sizes: Vec<usize>,
    pub trials: usize,
    pub methods: Vec<Method>,
    pub family: Family,
    /// Erdős–Rényi edge probability; `None` means `2 ln(n)/n` per size.
    pub er_p: Option<f64>,
    pub ba_m: usize,
    /// Inclusive range of initial sizes for dynamic runs.
    pub dynamic_range: (usize, usize),
    pub steps: usize,
    pub attachment: Attachment,
    pub showcase_n: usize,
    /// Showcase edge probability; `None` means the connectivity threshold
    /// `ln(n)/n`.
    pub showcase_er_p: Option<f64>,
    pub showcase_ba_m: usize,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub delta: f64,
    pub ga_population: usize,
    pub ga_generations: usize,
    /// Simplex pivot budget for L1 methods.
    pub max_iterations: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let mut sizes = vec![10];
        sizes.extend((100..=1000).step_by(100));
        let ga = GaConfig::default();
        Self {
            mode: Mode::Static,
            sizes,
            trials: 20,
            methods: Method::ALL.to_vec(),
            family: Family::ErdosRenyi,
            er_p: None,
            ba_m: 2,
            dynamic_range: (200, 250),
            steps: 10,
            attachment: Attachment::default(),
            showcase_n: 15,
            showcase_er_p: None,
            showcase_ba_m: 1,
            seed: 0,
            out_dir: PathBuf::from("results"),
            delta: SelectionParams::default().delta,
            ga_population: ga.population,
            ga_generations: ga.generations,
            max_iterations: SolverConfig::default().max_iterations,
        }
    }
}

impl ExperimentConfig {
    /// Reads `key = value` lines over the defaults. Blank lines and lines
    /// starting with `#` are skipped; unknown keys are errors.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", i + 1)))?;
            cfg.set(key.trim(), value.trim()).map_err(|e| match e {
                Error::Config(msg) => Error::Config(format!("line {}: {msg}", i + 1)),
                other => other,
            })?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let mut text = String::new();
        File::open(path)
            .and_then(|mut f| f.read_to_string(&mut text))
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Sets one key. Also used for command-line overrides.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: FromStr>(key: &str, value: &str) -> Result<T> {
            value.parse().map_err(|_| Error::Config(format!("`{key}` has invalid value `{value}`")))
        }
        match key {
            "mode" => self.mode = value.parse()?,
            "sizes" => self.sizes = parse_sizes(value)?,
            "trials" => self.trials = num(key, value)?,
            "methods" => self.methods = parse_methods(value)?,
            "family" => self.family = value.parse().map_err(|e: Error| Error::Config(e.to_string()))?,
            "er_p" => self.er_p = if value == "auto" { None } else { Some(num(key, value)?) },
            "ba_m" => self.ba_m = num(key, value)?,
            "dynamic_min" => self.dynamic_range.0 = num(key, value)?,
            "dynamic_max" => self.dynamic_range.1 = num(key, value)?,
            "steps" => self.steps = num(key, value)?,
            "attachment" => {
                let m = match self.attachment {
                    Attachment::UniformAttach(m) | Attachment::PreferentialAttach(m) => m,
                };
                self.attachment = match value {
                    "uniform" => Attachment::UniformAttach(m),
                    "preferential" => Attachment::PreferentialAttach(m),
                    _ => return Err(Error::Config(format!("unknown attachment `{value}`"))),
                }
            }
            "attach_m" => {
                let m = num(key, value)?;
                self.attachment = match self.attachment {
                    Attachment::UniformAttach(_) => Attachment::UniformAttach(m),
                    Attachment::PreferentialAttach(_) => Attachment::PreferentialAttach(m),
                }
            }
            "showcase_n" => self.showcase_n = num(key, value)?,
            "showcase_er_p" => self.showcase_er_p = if value == "auto" { None } else { Some(num(key, value)?) },
            "showcase_ba_m" => self.showcase_ba_m = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            "out" => self.out_dir = PathBuf::from(value),
            "delta" => self.delta = num(key, value)?,
            "ga_population" => self.ga_population = num(key, value)?,
            "ga_generations" => self.ga_generations = num(key, value)?,
            "max_iterations" => self.max_iterations = num(key, value)?,
            _ => return Err(Error::Config(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::Config(msg.into()));
        if self.trials == 0 {
            return fail("trials must be at least 1");
        }
        if self.sizes.is_empty() || self.sizes.contains(&0) {
            return fail("sizes must be a non-empty list of positive counts");
        }
        if self.methods.is_empty() {
            return fail("at least one method is required");
        }
        let (lo, hi) = self.dynamic_range;
        if lo < 2 || lo > hi {
            return fail("dynamic range needs 2 <= dynamic_min <= dynamic_max");
        }
        if self.showcase_n < 2 {
            return fail("showcase_n must be at least 2");
        }
        if [self.er_p, self.showcase_er_p].into_iter().flatten().any(|p| !(p > 0.0 && p <= 1.0)) {
            return fail("edge probabilities must lie in (0, 1]");
        }
        self.selection().validate().map_err(|e| Error::Config(e.to_string()))?;
        self.ga(0).validate().map_err(|e| Error::Config(e.to_string()))?;
        GrowthSchedule::single_nodes(1, self.attachment, 0).validate().map_err(|e| Error::Config(e.to_string()))?;
        Ok(())
    }

    pub fn selection(&self) -> SelectionParams {
        SelectionParams { delta: self.delta, ..SelectionParams::default() }
    }

    pub fn solver(&self) -> SolverConfig {
        SolverConfig { max_iterations: self.max_iterations, ..SolverConfig::default() }
    }

    fn ga(&self, seed: u64) -> GaConfig {
        GaConfig { population: self.ga_population, generations: self.ga_generations, seed, ..GaConfig::default() }
    }

    pub fn generator(&self, family: Family, n: usize, seed: u64) -> GeneratorSpec {
        let mut spec = GeneratorSpec::new(family, n, seed);
        spec.p = self.er_p.unwrap_or_else(|| default_er_probability(n));
        if n > 1 {
            spec.m = self.ba_m.clamp(1, n - 1);
        }
        spec
    }
}

/// Seed for one (size, trial) cell, a SplitMix64-style mix of its inputs.
pub fn derive_seed(master: u64, size: u64, trial: u64) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    mix(mix(mix(master) ^ size) ^ trial)
}

/// Seed for a method's own randomness (only the GA uses it).
fn method_seed(trial_seed: u64, method: Method) -> u64 {
    derive_seed(trial_seed, method.solver as u64, method.profile as u64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    #[serde(with = "as_string")]
    pub method: Method,
    #[serde(with = "as_string")]
    pub cost_profile: CostProfile,
    #[serde(with = "as_string")]
    pub family: Family,
    pub n: usize,
    pub trial: usize,
    pub runtime_ms: f64,
    pub selected_count: usize,
    pub total_cost: f64,
    pub feasible: bool,
}

mod as_string {
    use std::fmt::Display;
    use std::str::FromStr;

    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<T, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        String::deserialize(d)?.parse().map_err(de::Error::custom)
    }
}

/// Result of one method run, with the time spent on costs and selection.
struct Outcome {
    set: NexusSet,
    runtime_ms: f64,
}

fn run_method(g: &Graph, method: Method, cfg: &ExperimentConfig, ga_seed: u64) -> Result<Outcome> {
    let started = Instant::now();
    let cost = method.profile.costs(g, &CostParams::default())?;
    let set = select(g, &cost, method.solver, cfg, ga_seed)?;
    Ok(Outcome { set, runtime_ms: started.elapsed().as_secs_f64() * 1e3 })
}

fn select(g: &Graph, cost: &CostVector, solver: Solver, cfg: &ExperimentConfig, ga_seed: u64) -> Result<NexusSet> {
    match solver {
        Solver::L1 => Ok(select_with_cost(g, cost, &cfg.selection(), &cfg.solver())?.0),
        Solver::Greedy => Ok(greedy_cover(g, cost)),
        Solver::Ga => ga_cover(g, cost, &cfg.ga(ga_seed)),
    }
}

/// Runs the static benchmark, handing each record to `sink` as soon as it
/// exists. A failing method yields a row with `feasible = false` before the
/// error is returned.
pub fn run_static_bench_with(cfg: &ExperimentConfig, mut sink: impl FnMut(&BenchRecord) -> Result<()>) -> Result<()> {
    cfg.validate()?;
    for &n in &cfg.sizes {
        for trial in 0..cfg.trials {
            let seed = derive_seed(cfg.seed, n as u64, trial as u64);
            let g = generate(&cfg.generator(cfg.family, n, seed))?;
            for &method in &cfg.methods {
                let started = Instant::now();
                let outcome = run_method(&g, method, cfg, method_seed(seed, method));
                let record = |runtime_ms, set: Option<&NexusSet>| BenchRecord {
                    method,
                    cost_profile: method.profile,
                    family: cfg.family,
                    n,
                    trial,
                    runtime_ms,
                    selected_count: set.map_or(0, NexusSet::len),
                    total_cost: set.map_or(0.0, |s| s.total_cost),
                    feasible: set.is_some_and(|s| s.feasible),
                };
                match outcome {
                    Ok(o) => sink(&record(o.runtime_ms, Some(&o.set)))?,
                    Err(e) => {
                        sink(&record(started.elapsed().as_secs_f64() * 1e3, None))?;
                        return Err(e);
                    }
                }
            }
        }
    }
    Ok(())
}

pub fn run_static_bench(cfg: &ExperimentConfig) -> Result<Vec<BenchRecord>> {
    let mut out = Vec::new();
    run_static_bench_with(cfg, |r| {
        out.push(r.clone());
        Ok(())
    })?;
    Ok(out)
}

/// One CPU description line, written as a `#` comment above CSV headers.
pub fn hardware_note() -> String {
    let cpu = std::fs::read_to_string("/proc/cpuinfo")
        .ok()
        .and_then(|s| s.lines().find(|l| l.starts_with("model name")).and_then(|l| l.split_once(':')).map(|(_, v)| v.trim().to_owned()))
        .unwrap_or_else(|| "unknown".into());
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    format!("# cpu: {cpu}; logical cpus: {threads}; os: {}; arch: {}", std::env::consts::OS, std::env::consts::ARCH)
}

/// Streaming CSV writer for static records: the hardware comment and header
/// go out first, and every row is flushed so a partial file stays readable.
pub struct StaticCsvWriter<W: Write> {
    inner: csv::Writer<W>,
}

impl<W: Write> StaticCsvWriter<W> {
    pub fn new(mut writer: W) -> Result<Self> {
        writeln!(writer, "{}", hardware_note())?;
        writeln!(writer, "{STATIC_HEADER}")?;
        Ok(Self { inner: csv::WriterBuilder::new().has_headers(false).from_writer(writer) })
    }

    pub fn write(&mut self, record: &BenchRecord) -> Result<()> {
        self.inner.serialize(record)?;
        self.inner.flush()?;
        Ok(())
    }
}

pub fn write_static_csv<W: Write>(writer: W, records: &[BenchRecord]) -> Result<()> {
    let mut w = StaticCsvWriter::new(writer)?;
    records.iter().try_for_each(|r| w.write(r))
}

/// Reads a static CSV, skipping `#` comment lines.
pub fn read_static_csv<R: Read>(reader: R) -> Result<Vec<BenchRecord>> {
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(reader);
    let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    if header.join(",") != STATIC_HEADER {
        return Err(Error::Parse { line: 1, msg: format!("unexpected header `{}`", header.join(",")) });
    }
    Ok(r.deserialize().collect::<std::result::Result<_, _>>()?)
}

/// Mean and sample standard deviation.
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() == 1 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellSummary {
    pub method: String,
    pub n: usize,
    pub trials: usize,
    pub runtime_ms: (f64, f64),
    pub selected_count: (f64, f64),
    pub total_cost: (f64, f64),
    pub all_feasible: bool,
}

/// Groups rows by (method, n) in order of first appearance.
fn summarize_by<T>(
    rows: &[T],
    key: impl Fn(&T) -> (String, usize),
    value: impl Fn(&T) -> (f64, f64, f64, bool),
) -> Vec<CellSummary> {
    let mut keys: Vec<(String, usize)> = Vec::new();
    for r in rows {
        let k = key(r);
        if !keys.contains(&k) {
            keys.push(k);
        }
    }
    keys.into_iter()
        .map(|(method, n)| {
            let cell: Vec<_> = rows.iter().filter(|r| key(r) == (method.clone(), n)).map(&value).collect();
            let col = |f: fn(&(f64, f64, f64, bool)) -> f64| mean_std(&cell.iter().map(f).collect::<Vec<_>>());
            CellSummary {
                method,
                n,
                trials: cell.len(),
                runtime_ms: col(|c| c.0),
                selected_count: col(|c| c.1),
                total_cost: col(|c| c.2),
                all_feasible: cell.iter().all(|c| c.3),
            }
        })
        .collect()
}

pub fn summarize(records: &[BenchRecord]) -> Vec<CellSummary> {
    summarize_by(
        records,
        |r| (r.method.to_string(), r.n),
        |r| (r.runtime_ms, r.selected_count as f64, r.total_cost, r.feasible),
    )
}

pub fn write_summary_csv<W: Write>(writer: W, cells: &[CellSummary]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record([
        "method", "n", "trials", "runtime_ms_mean", "runtime_ms_std", "selected_mean", "selected_std", "cost_mean", "cost_std",
        "all_feasible",
    ])?;
    for c in cells {
        w.write_record([
            c.method.clone(),
            c.n.to_string(),
            c.trials.to_string(),
            c.runtime_ms.0.to_string(),
            c.runtime_ms.1.to_string(),
            c.selected_count.0.to_string(),
            c.selected_count.1.to_string(),
            c.total_cost.0.to_string(),
            c.total_cost.1.to_string(),
            c.all_feasible.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Human-readable `mean ± std` table.
pub fn format_summary(cells: &[CellSummary]) -> String {
    let mut s = format!("{:<20} {:>6} {:>22} {:>18}\n", "method", "n", "runtime ms", "selected");
    for c in cells {
        let rt = format!("{:.3} ± {:.3}", c.runtime_ms.0, c.runtime_ms.1);
        let sel = format!("{:.2} ± {:.2}", c.selected_count.0, c.selected_count.1);
        let n = if c.n == 0 { "-".to_owned() } else { c.n.to_string() };
        s.push_str(&format!("{:<20} {:>6} {:>22} {:>18}\n", c.method, n, rt, sel));
    }
    s
}

/// One trace row of a dynamic run, tagged with its method and trial.
#[derive(Debug, Clone, PartialEq)]
pub struct DynamicBenchRecord {
    pub method: String,
    pub trial: usize,
    pub step: StepRecord,
}

pub fn dynamic_header() -> String {
    format!("method,trial,{TRACE_HEADER}")
}

pub fn write_dynamic_csv<W: Write>(mut writer: W, records: &[DynamicBenchRecord]) -> Result<()> {
    writeln!(writer, "{}", hardware_note())?;
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(dynamic_header().split(','))?;
    for r in records {
        let mut fields = vec![r.method.clone(), r.trial.to_string()];
        fields.extend(r.step.csv_fields());
        w.write_record(fields)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_dynamic_csv<R: Read>(reader: R) -> Result<Vec<DynamicBenchRecord>> {
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(reader);
    if r.headers()?.iter().collect::<Vec<_>>().join(",") != dynamic_header() {
        return Err(Error::Parse { line: 1, msg: "unexpected dynamic header".into() });
    }
    let mut out = Vec::new();
    for (i, row) in r.records().enumerate() {
        let row = row?;
        let line = i + 2;
        let field = |k: usize| row.get(k).ok_or_else(|| Error::Parse { line, msg: format!("missing column {k}") });
        fn num<T: FromStr>(s: &str, line: usize) -> Result<T> {
            s.parse().map_err(|_| Error::Parse { line, msg: format!("bad value `{s}`") })
        }
        let ids = field(5)?;
        let selected = if ids.is_empty() {
            Vec::new()
        } else {
            ids.split(';').map(|v| num(v, line)).collect::<Result<Vec<usize>>>()?
        };
        let count: usize = num(field(4)?, line)?;
        if count != selected.len() {
            return Err(Error::Parse { line, msg: "selected_count disagrees with selected_ids".into() });
        }
        out.push(DynamicBenchRecord {
            method: field(0)?.to_owned(),
            trial: num(field(1)?, line)?,
            step: StepRecord {
                t: num(field(2)?, line)?,
                n: num(field(3)?, line)?,
                selected,
                solve_ms: num(field(6)?, line)?,
                warm: num(field(7)?, line)?,
                objective: num(field(8)?, line)?,
                feasible: num(field(9)?, line)?,
            },
        });
    }
    Ok(out)
}

/// Per-method step statistics over all steps and trials (`n` is 0):
/// runtime is `solve_ms`, cost is `objective`.
pub fn summarize_dynamic(records: &[DynamicBenchRecord]) -> Vec<CellSummary> {
    let mut cells = summarize_by(
        records,
        |r| (r.method.clone(), 0),
        |r| (r.step.solve_ms, r.step.selected.len() as f64, r.step.objective, r.step.feasible),
    );
    for c in &mut cells {
        c.n = 0;
    }
    cells
}

/// Dynamic benchmark. Each trial draws an initial size uniformly from the
/// configured range and a single-node growth schedule. L1 methods run warm
/// (previous solution as start) and cold (`<method>-cold`); their `solve_ms`
/// is the LP solve alone and `objective` the LP optimum. Baselines rerun
/// from scratch on every step; their `solve_ms` is the selection time with
/// costs excluded and `objective` the cover's cost.
pub fn run_dynamic_bench(cfg: &ExperimentConfig) -> Result<Vec<DynamicBenchRecord>> {
    cfg.validate()?;
    let (lo, hi) = cfg.dynamic_range;
    let mut out = Vec::new();
    for trial in 0..cfg.trials {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, 0, trial as u64));
        let n0 = rng.gen_range(lo..=hi);
        let g0 = generate(&cfg.generator(cfg.family, n0, rng.gen()))?;
        let schedule = GrowthSchedule::single_nodes(cfg.steps, cfg.attachment, rng.gen());
        let trial_seed: u64 = rng.gen();
        let graphs = growth_sequence(&g0, &schedule)?;
        let params = cfg.selection();

        for &method in &cfg.methods {
            let costs = |g: &Graph| method.profile.costs(g, &CostParams::default());
            let tag = |name: String, steps: Vec<StepRecord>| {
                steps.into_iter().map(move |step| DynamicBenchRecord { method: name.clone(), trial, step })
            };
            match method.solver {
                Solver::L1 => {
                    let solver = cfg.solver();
                    let (warm, _) = run_dynamic_costed(&g0, &schedule, &params, costs, &solver, true)?;
                    let (cold, _) = run_dynamic_costed(&g0, &schedule, &params, costs, &solver, false)?;
                    out.extend(tag(method.to_string(), warm.records));
                    out.extend(tag(format!("{method}-cold"), cold.records));
                }
                Solver::Greedy | Solver::Ga => {
                    let mut steps = Vec::with_capacity(graphs.len());
                    for (t, g) in graphs.iter().enumerate() {
                        let cost = costs(g)?;
                        let started = Instant::now();
                        let set = select(g, &cost, method.solver, cfg, method_seed(trial_seed, method) ^ t as u64)?;
                        let solve_ms = started.elapsed().as_secs_f64() * 1e3;
                        steps.push(StepRecord {
                            t,
                            n: g.node_count(),
                            objective: set.total_cost,
                            feasible: set.feasible,
                            selected: set.selected,
                            solve_ms,
                            warm: false,
                        });
                    }
                    out.extend(tag(method.to_string(), steps));
                }
            }
        }
    }
    Ok(out)
}

/// One showcase instance and its LP selection.
#[derive(Debug, Clone)]
pub struct ShowcaseEntry {
    pub family: Family,
    pub seed: u64,
    pub graph: Graph,
    pub cost: CostVector,
    pub solution: FractionalSolution,
    pub set: NexusSet,
}

/// Generator for showcase graphs. These are sparser than the benchmark
/// defaults: near the connectivity threshold for Erdős–Rényi and a single
/// edge per arriving node for Barabási–Albert.
pub fn showcase_generator(cfg: &ExperimentConfig, family: Family, seed: u64) -> GeneratorSpec {
    let n = cfg.showcase_n;
    let mut spec = GeneratorSpec::new(family, n, seed);
    spec.p = cfg.showcase_er_p.unwrap_or_else(|| ((n as f64).ln() / n as f64).min(1.0));
    spec.m = cfg.showcase_ba_m.clamp(1, n - 1);
    spec
}

/// Centrality-cost LP selection on one small graph per family.
pub fn showcase_entries(cfg: &ExperimentConfig) -> Result<Vec<ShowcaseEntry>> {
    cfg.validate()?;
    let n = cfg.showcase_n;
    Family::ALL
        .iter()
        .enumerate()
        .map(|(i, &family)| {
            let seed = derive_seed(cfg.seed, n as u64, i as u64);
            let graph = generate(&showcase_generator(cfg, family, seed))?;
            let cost = CostProfile::Centrality.costs(&graph, &CostParams::default())?;
            let (set, solution) = select_with_cost(&graph, &cost, &cfg.selection(), &cfg.solver())?;
            Ok(ShowcaseEntry { family, seed, graph, cost, solution, set })
        })
        .collect()
}

/// Writes `showcase_<family>.svg`, `.csv` and `.edges` for every family into
/// the output directory and returns the entries and the written paths.
pub fn run_showcase(cfg: &ExperimentConfig) -> Result<(Vec<ShowcaseEntry>, Vec<PathBuf>)> {
    let entries = showcase_entries(cfg)?;
    std::fs::create_dir_all(&cfg.out_dir)?;
    let mut paths = Vec::new();
    for e in &entries {
        let stem = cfg.out_dir.join(format!("showcase_{}", e.family));
        let svg = stem.with_extension("svg");
        std::fs::write(&svg, render_svg(&e.graph, &e.set.selected, &format!("{} (n = {}, {} selected)", e.family, e.graph.node_count(), e.set.len())))?;
        let csv_path = stem.with_extension("csv");
        write_selection_csv(BufWriter::new(File::create(&csv_path)?), e)?;
        let edges = stem.with_extension("edges");
        e.graph.write_edge_list(BufWriter::new(File::create(&edges)?))?;
        paths.extend([svg, csv_path, edges]);
    }
    Ok((entries, paths))
}

pub fn write_selection_csv<W: Write>(writer: W, e: &ShowcaseEntry) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["node", "degree", "cost", "x", "selected"])?;
    for v in 0..e.graph.node_count() {
        w.write_record([
            v.to_string(),
            e.graph.neighbors(v).len().to_string(),
            e.cost.values[v].to_string(),
            e.solution.x[v].to_string(),
            e.set.contains(v).to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Circular layout, node 0 at the top, ids increasing clockwise. Selected
/// nodes are filled.
pub fn render_svg(g: &Graph, selected: &[usize], title: &str) -> String {
    const SIZE: f64 = 420.0;
    const RADIUS: f64 = 160.0;
    let n = g.node_count();
    let centre = SIZE / 2.0;
    let pos: Vec<(f64, f64)> = (0..n)
        .map(|v| {
            let a = std::f64::consts::TAU * v as f64 / n as f64 - std::f64::consts::FRAC_PI_2;
            (centre + RADIUS * a.cos(), centre + 20.0 + RADIUS * a.sin())
        })
        .collect();
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{h}\" viewBox=\"0 0 {SIZE} {h}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
         <text x=\"{centre}\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">{}</text>\n",
        escape(title),
        h = SIZE + 20.0,
    );
    for (u, v) in g.edges() {
        let (a, b) = (pos[u], pos[v]);
        s.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#888\" stroke-width=\"1.2\"/>\n",
            a.0, a.1, b.0, b.1
        ));
    }
    for (v, &(x, y)) in pos.iter().enumerate() {
        let (fill, text) = if selected.binary_search(&v).is_ok() { ("#d62728", "white") } else { ("white", "black") };
        s.push_str(&format!(
            "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"13\" fill=\"{fill}\" stroke=\"black\" stroke-width=\"1.5\"/>\n\
             <text x=\"{x:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\" fill=\"{text}\">{v}</text>\n",
            y + 4.0
        ));
    }
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(sizes: &[usize], trials: usize) -> ExperimentConfig {
        ExperimentConfig { sizes: sizes.to_vec(), trials, ga_generations: 20, ..ExperimentConfig::default() }
    }

    #[test]
    fn default_sizes_cover_ten_then_hundreds() {
        let cfg = ExperimentConfig::default();
        assert_eq!(cfg.sizes.len(), 11);
        assert_eq!(cfg.sizes[..3], [10, 100, 200]);
        assert_eq!(cfg.trials * cfg.sizes.len() * cfg.methods.len(), 11 * 20 * 6);
    }

    #[test]
    fn parse_config_and_reject_bad_values() {
        let cfg = ExperimentConfig::parse(
            "# comment\nmode = dynamic\nsizes = 10, 20..40:10\ntrials = 3\nmethods = l1-centrality,ga-degree\nfamily = ba\nseed = 9\n",
        )
        .unwrap();
        assert_eq!(cfg.mode, Mode::Dynamic);
        assert_eq!(cfg.sizes, [10, 20, 30, 40]);
        assert_eq!(cfg.methods.len(), 2);
        assert_eq!(cfg.family, Family::BarabasiAlbert);
        for bad in ["trials = 0", "sizes = 0,10", "sizes =", "colour = red", "delta = 1.5", "nonsense", "methods = l2"] {
            assert!(matches!(ExperimentConfig::parse(bad), Err(Error::Config(_))), "{bad}");
        }
    }

    #[test]
    fn one_size_all_methods_gives_six_feasible_rows() {
        let recs = run_static_bench(&small(&[10], 1)).unwrap();
        assert_eq!(recs.len(), 6);
        assert!(recs.iter().all(|r| r.feasible && r.runtime_ms >= 0.0));
    }

    #[test]
    fn same_seed_same_counts() {
        let cfg = small(&[30, 60], 2);
        let a: Vec<_> = run_static_bench(&cfg).unwrap().iter().map(|r| (r.selected_count, r.total_cost)).collect();
        let b: Vec<_> = run_static_bench(&cfg).unwrap().iter().map(|r| (r.selected_count, r.total_cost)).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn static_csv_round_trips() {
        let recs = run_static_bench(&small(&[12], 2)).unwrap();
        let mut buf = Vec::new();
        write_static_csv(&mut buf, &recs).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# cpu: "));
        assert_eq!(text.lines().nth(1), Some(STATIC_HEADER));
        assert_eq!(read_static_csv(&buf[..]).unwrap(), recs);
    }

    #[test]
    fn summary_groups_cells() {
        let recs = run_static_bench(&small(&[10, 20], 3)).unwrap();
        let cells = summarize(&recs);
        assert_eq!(cells.len(), 12);
        assert!(cells.iter().all(|c| c.trials == 3 && c.all_feasible));
        assert_eq!(mean_std(&[1.0, 3.0]), (2.0, 2f64.sqrt()));
    }

    #[test]
    fn dynamic_without_steps_matches_static_selection() {
        let cfg = ExperimentConfig {
            steps: 0,
            trials: 2,
            dynamic_range: (30, 40),
            methods: vec!["l1-centrality".parse().unwrap(), "greedy-degree".parse().unwrap()],
            ..ExperimentConfig::default()
        };
        let recs = run_dynamic_bench(&cfg).unwrap();
        assert_eq!(recs.len(), 2 * 3);
        for r in &recs {
            assert_eq!(r.step.t, 0);
            assert!(r.step.feasible && (30..=40).contains(&r.step.n));
        }
        let warm: Vec<_> = recs.iter().filter(|r| r.method == "l1-centrality").collect();
        let cold: Vec<_> = recs.iter().filter(|r| r.method == "l1-centrality-cold").collect();
        for (w, c) in warm.iter().zip(&cold) {
            assert_eq!(w.step.selected, c.step.selected);
        }
    }

    #[test]
    fn dynamic_csv_round_trips() {
        let cfg = ExperimentConfig { steps: 2, trials: 1, dynamic_range: (20, 25), ga_generations: 10, ..ExperimentConfig::default() };
        let recs = run_dynamic_bench(&cfg).unwrap();
        assert_eq!(recs.len(), 8 * 3);
        let mut buf = Vec::new();
        write_dynamic_csv(&mut buf, &recs).unwrap();
        assert_eq!(read_dynamic_csv(&buf[..]).unwrap(), recs);
    }

    #[test]
    fn star_like_tree_selects_its_hub() {
        let cfg = ExperimentConfig::default();
        for seed in 0..10 {
            let g = generate(&showcase_generator(&cfg, Family::BarabasiAlbert, seed)).unwrap();
            let hub = (0..15).max_by_key(|&v| (g.neighbors(v).len(), std::cmp::Reverse(v))).unwrap();
            let cost = CostProfile::Centrality.costs(&g, &CostParams::default()).unwrap();
            let (set, _) = select_with_cost(&g, &cost, &cfg.selection(), &SolverConfig::default()).unwrap();
            assert!(set.contains(hub), "seed {seed}: hub {hub} not in {:?}", set.selected);
        }
    }

    #[test]
    fn showcase_writes_three_files_per_family() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = ExperimentConfig { out_dir: dir.path().to_owned(), ..ExperimentConfig::default() };
        let (entries, paths) = run_showcase(&cfg).unwrap();
        assert_eq!(entries.len(), 4);
        assert_eq!(paths.len(), 12);
        for p in &paths {
            assert!(p.exists());
        }
        let svg = std::fs::read_to_string(dir.path().join("showcase_tree.svg")).unwrap();
        assert_eq!(svg.matches("<circle").count(), 15);
        assert_eq!(svg.matches("#d62728").count(), entries[0].set.len());
    }

    #[test]
    fn seeds_differ_across_cells() {
        let a = derive_seed(1, 100, 0);
        assert_ne!(a, derive_seed(1, 100, 1));
        assert_ne!(a, derive_seed(1, 200, 0));
        assert_ne!(a, derive_seed(2, 100, 0));
    }
}
