//! Flat `key = value` configuration documents.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::field::{Bump, InitialData};
use crate::grid::Grid;
use crate::scheme::{Flux, Integrator, SchemeConfig};
use crate::solver::{RunConfig, DEFAULT_ALPHAS};

const KEYS: &[&str] = &[
    "grid.x_min",
    "grid.x_max",
    "grid.n_cells",
    "init.preset",
    "init.amplitude",
    "init.center",
    "init.width",
    "init.amplitude2",
    "init.center2",
    "init.width2",
    "init.height",
    "init.steepness",
    "scheme.flux",
    "scheme.epsilon",
    "scheme.cfl",
    "scheme.v_floor",
    "scheme.integrator",
    "scheme.source",
    "run.T",
    "run.snapshots",
    "diag.alphas",
    "seed",
    "verify.radius",
    "verify.samples",
    "sweep.epsilons",
    "sweep.cells",
];

/// A parsed document: the run plus the options used by the verification subcommands.
#[derive(Debug, Clone)]
pub struct ConfigDocument {
    pub run: RunConfig,
    pub seed: u64,
    /// Half-width `R` of the stability window.
    pub radius: f64,
    /// Number of stability sample times `k T / samples`, `k = 1..=samples`.
    pub samples: usize,
    pub epsilons: Option<Vec<f64>>,
    pub cells: Option<Vec<usize>>,
}

struct Entries {
    map: BTreeMap<String, (usize, String)>,
}

impl Entries {
    fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (key, value) = body
                .split_once('=')
                .ok_or_else(|| Error::config(line, format!("expected `key = value`, got `{body}`")))?;
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(Error::config(line, format!("unknown key `{key}`")));
            }
            if value.is_empty() {
                return Err(Error::config(line, format!("empty value for `{key}`")));
            }
            if let Some((first, _)) = map.insert(key.to_string(), (line, value.to_string())) {
                return Err(Error::config(
                    line,
                    format!("duplicate key `{key}` (first set on line {first})"),
                ));
            }
        }
        Ok(Entries { map })
    }

    fn line(&self, key: &str) -> Option<usize> {
        self.map.get(key).map(|(l, _)| *l)
    }

    fn raw(&self, key: &str) -> Option<(usize, &str)> {
        self.map.get(key).map(|(l, v)| (*l, v.as_str()))
    }

    fn required(&self, key: &str) -> Result<(usize, &str)> {
        self.raw(key)
            .ok_or_else(|| Error::config(None, format!("missing required key `{key}`")))
    }

    fn float(&self, key: &str) -> Result<Option<f64>> {
        self.raw(key).map(|(l, v)| number(l, key, v)).transpose()
    }

    fn float_or(&self, key: &str, default: f64) -> Result<f64> {
        Ok(self.float(key)?.unwrap_or(default))
    }

    fn check(&self, key: &str, ok: bool, what: &str) -> Result<()> {
        if ok {
            Ok(())
        } else {
            let (line, value) = self.raw(key).expect("checked keys are present");
            Err(Error::config(line, format!("`{key} = {value}`: {what}")))
        }
    }
}

fn number(line: usize, key: &str, v: &str) -> Result<f64> {
    let x: f64 = v
        .parse()
        .map_err(|_| Error::config(line, format!("`{key}`: malformed number `{v}`")))?;
    if !x.is_finite() {
        return Err(Error::config(line, format!("`{key}`: value must be finite")));
    }
    Ok(x)
}

fn integer<T: std::str::FromStr>(line: usize, key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::config(line, format!("`{key}`: malformed integer `{v}`")))
}

fn list<T>(line: usize, key: &str, v: &str, f: impl Fn(usize, &str, &str) -> Result<T>) -> Result<Vec<T>> {
    v.split(',').map(|s| f(line, key, s.trim())).collect()
}

fn boolean(line: usize, key: &str, v: &str) -> Result<bool> {
    match v {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(Error::config(line, format!("`{key}`: expected true or false, got `{v}`"))),
    }
}

fn parse_init(e: &Entries) -> Result<InitialData> {
    let preset = e.raw("init.preset").map(|(_, v)| v).unwrap_or("gaussian");
    let allowed: &[&str] = match preset {
        "gaussian" => &["init.amplitude", "init.center", "init.width"],
        "two-bump" => &[
            "init.amplitude",
            "init.center",
            "init.width",
            "init.amplitude2",
            "init.center2",
            "init.width2",
        ],
        "plateau" => &["init.height", "init.width", "init.steepness", "init.center"],
        other => {
            let line = e.line("init.preset");
            return Err(Error::config(
                line,
                format!("unknown preset `{other}` (gaussian, two-bump, plateau)"),
            ));
        }
    };
    for (key, (line, _)) in &e.map {
        if key.starts_with("init.") && key != "init.preset" && !allowed.contains(&key.as_str()) {
            return Err(Error::config(
                *line,
                format!("`{key}` does not apply to preset `{preset}`"),
            ));
        }
    }
    let bump = |suffix: &str| -> Result<Bump> {
        Ok(Bump {
            amplitude: e.float_or(&format!("init.amplitude{suffix}"), 0.0)?,
            center: e.float_or(&format!("init.center{suffix}"), 0.0)?,
            width: e.float_or(&format!("init.width{suffix}"), 1.0)?,
        })
    };
    let init = match preset {
        "gaussian" => InitialData::Gaussian(bump("")?),
        "two-bump" => InitialData::TwoBump(bump("")?, bump("2")?),
        _ => InitialData::Plateau {
            height: e.float_or("init.height", 0.0)?,
            width: e.float_or("init.width", 2.0)?,
            steepness: e.float_or("init.steepness", 4.0)?,
            center: e.float_or("init.center", 0.0)?,
        },
    };
    init.validate()
        .map_err(|err| Error::config(e.line("init.preset"), err.to_string()))?;
    Ok(init)
}

fn parse_scheme(e: &Entries) -> Result<SchemeConfig> {
    let mut s = SchemeConfig::default();
    if let Some((line, v)) = e.raw("scheme.flux") {
        s.flux = match v {
            "godunov" => Flux::Godunov,
            "rusanov" => Flux::Rusanov,
            _ => return Err(Error::config(line, format!("unknown flux `{v}` (godunov, rusanov)"))),
        };
    }
    if let Some((line, v)) = e.raw("scheme.integrator") {
        s.integrator = match v {
            "ssp-rk2" => Integrator::SspRk2,
            "forward-euler" => Integrator::ForwardEuler,
            _ => {
                return Err(Error::config(
                    line,
                    format!("unknown integrator `{v}` (ssp-rk2, forward-euler)"),
                ))
            }
        };
    }
    if let Some((line, v)) = e.raw("scheme.source") {
        s.source = boolean(line, "scheme.source", v)?;
    }
    if let Some(x) = e.float("scheme.epsilon")? {
        e.check("scheme.epsilon", x >= 0.0, "epsilon must be nonnegative")?;
        s.epsilon = x;
    }
    if let Some(x) = e.float("scheme.cfl")? {
        e.check("scheme.cfl", x > 0.0 && x <= 1.0, "cfl must lie in (0, 1]")?;
        s.cfl = x;
    }
    if let Some(x) = e.float("scheme.v_floor")? {
        e.check("scheme.v_floor", x > 0.0, "v_floor must be positive")?;
        s.v_floor = x;
    }
    Ok(s)
}

/// Parse and validate a document. Grid errors keep their own variants.
pub fn parse_config(text: &str) -> Result<ConfigDocument> {
    let e = Entries::parse(text)?;

    let (l, v) = e.required("grid.x_min")?;
    let x_min = number(l, "grid.x_min", v)?;
    let (l, v) = e.required("grid.x_max")?;
    let x_max = number(l, "grid.x_max", v)?;
    let (l, v) = e.required("grid.n_cells")?;
    let n_cells: usize = integer(l, "grid.n_cells", v)?;
    let grid = Grid::new(x_min, x_max, n_cells)?;

    let init = parse_init(&e)?;
    let scheme = parse_scheme(&e)?;

    let (l, v) = e.required("run.T")?;
    let final_time = number(l, "run.T", v)?;
    e.check("run.T", final_time > 0.0, "final time must be positive")?;

    let mut run = RunConfig::new(grid, init, scheme, final_time);
    if let Some((l, v)) = e.raw("run.snapshots") {
        run.snapshot_times = list(l, "run.snapshots", v, number)?;
        let s = &run.snapshot_times;
        e.check(
            "run.snapshots",
            s.iter().all(|t| (0.0..=final_time).contains(t)),
            "snapshot times must lie in [0, run.T]",
        )?;
        e.check(
            "run.snapshots",
            s.windows(2).all(|w| w[0] < w[1]),
            "snapshot times must be sorted and unique",
        )?;
    }
    run.alphas = match e.raw("diag.alphas") {
        Some((l, v)) => {
            let a = list(l, "diag.alphas", v, number)?;
            e.check("diag.alphas", a.iter().all(|x| *x >= 0.0), "alphas must be nonnegative")?;
            a
        }
        None => DEFAULT_ALPHAS.to_vec(),
    };
    run.validate()?;

    let seed = match e.raw("seed") {
        Some((l, v)) => integer(l, "seed", v)?,
        None => 0,
    };
    let radius = e.float_or("verify.radius", 2.0)?;
    if e.line("verify.radius").is_some() {
        e.check("verify.radius", radius > 0.0, "radius must be positive")?;
    }
    let samples = match e.raw("verify.samples") {
        Some((l, v)) => integer(l, "verify.samples", v)?,
        None => 10,
    };
    if e.line("verify.samples").is_some() {
        e.check("verify.samples", samples > 0, "need at least one sample")?;
    }
    let epsilons = e
        .raw("sweep.epsilons")
        .map(|(l, v)| list(l, "sweep.epsilons", v, number))
        .transpose()?;
    if let Some(eps) = &epsilons {
        e.check(
            "sweep.epsilons",
            eps.iter().all(|x| *x > 0.0),
            "ladder values must be positive",
        )?;
    }
    let cells = e
        .raw("sweep.cells")
        .map(|(l, v)| list(l, "sweep.cells", v, integer::<usize>))
        .transpose()?;

    Ok(ConfigDocument {
        run,
        seed,
        radius,
        samples,
        epsilons,
        cells,
    })
}

pub fn read_config(path: &Path) -> Result<ConfigDocument> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text)
}
