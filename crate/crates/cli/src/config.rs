//! `key=value` settings, optionally read from a TOML file first.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use trimspec::assembly::QuadOrders;
use trimspec::experiments::{GeometryId, SweepSpec};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Run,
    Sweep,
    Accept,
    ListGeometries,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Run => "run",
            Command::Sweep => "sweep",
            Command::Accept => "accept",
            Command::ListGeometries => "list-geometries",
        }
    }

    fn keys(&self) -> &'static [&'static str] {
        match self {
            Command::Run => &[
                "geometry", "p", "k", "N", "gamma", "delta", "q", "q_tri", "out", "verbose", "vectors", "matrices",
            ],
            Command::Sweep => &["geometry", "p", "k", "N", "gamma", "deltas", "q", "q_tri", "out", "verbose"],
            Command::Accept => &["criteria", "out", "verbose"],
            Command::ListGeometries => &[],
        }
    }
}

/// Validated settings of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    /// Sweep parameters; for `run` the δ list holds the single δ.
    pub spec: Option<SweepSpec>,
    pub out: Option<PathBuf>,
    pub verbose: bool,
    pub vectors: bool,
    pub matrices: bool,
    pub criteria: Vec<usize>,
}

/// Raw values by key: file first, then flags on top.
pub fn collect(command: Command, file: Option<&Path>, flags: &[String]) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    if let Some(path) = file {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let table: toml::Table = text
            .parse()
            .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
        for (k, v) in table {
            map.insert(k.clone(), toml_to_string(&k, &v)?);
        }
    }
    for f in flags {
        let (k, v) = f
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("expected key=value, got `{f}`")))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    // `n` is accepted as an alias of `N`
    if let Some(v) = map.remove("n") {
        map.entry("N".into()).or_insert(v);
    }
    for k in map.keys() {
        if !command.keys().contains(&k.as_str()) {
            return Err(CliError::Usage(format!("key `{k}` is not accepted by `{}`", command.name())));
        }
    }
    Ok(map)
}

fn toml_to_string(key: &str, v: &toml::Value) -> Result<String, CliError> {
    Ok(match v {
        toml::Value::String(s) => s.clone(),
        toml::Value::Integer(i) => i.to_string(),
        toml::Value::Float(f) => format!("{f:e}"),
        toml::Value::Boolean(b) => b.to_string(),
        toml::Value::Array(a) => a.iter().map(|x| toml_to_string(key, x)).collect::<Result<Vec<_>, _>>()?.join(","),
        _ => return Err(CliError::Usage(format!("key `{key}`: unsupported value type"))),
    })
}

fn parse<T: std::str::FromStr>(map: &BTreeMap<String, String>, key: &str) -> Result<Option<T>, CliError>
where
    T::Err: std::fmt::Display,
{
    map.get(key)
        .map(|v| v.parse::<T>().map_err(|e| CliError::Usage(format!("invalid value `{v}` for `{key}`: {e}"))))
        .transpose()
}

fn parse_list<T: std::str::FromStr>(map: &BTreeMap<String, String>, key: &str) -> Result<Option<Vec<T>>, CliError>
where
    T::Err: std::fmt::Display,
{
    map.get(key)
        .map(|v| {
            v.split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<T>().map_err(|e| CliError::Usage(format!("invalid entry `{s}` in `{key}`: {e}"))))
                .collect()
        })
        .transpose()
}

fn required<T>(v: Option<T>, key: &str, command: Command) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("missing required key `{key}` for `{}`", command.name())))
}

pub fn build(command: Command, map: &BTreeMap<String, String>) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig {
        command,
        spec: None,
        out: map.get("out").map(PathBuf::from),
        verbose: parse(map, "verbose")?.unwrap_or(false),
        vectors: parse(map, "vectors")?.unwrap_or(false),
        matrices: parse(map, "matrices")?.unwrap_or(false),
        criteria: Vec::new(),
    };
    match command {
        Command::Run | Command::Sweep => {
            let name: String = required(parse(map, "geometry")?, "geometry", command)?;
            let geometry = GeometryId::parse(&name).map_err(|e| CliError::Usage(e.to_string()))?;
            let p: usize = parse(map, "p")?.unwrap_or(2);
            let k: i64 = parse(map, "k")?.unwrap_or(p as i64 - 1);
            let mut spec = SweepSpec::new(geometry, p, k);
            if let Some(n) = parse(map, "N")? {
                spec.n = n;
            }
            if let Some(g) = parse(map, "gamma")? {
                spec.gamma = g;
            }
            if command == Command::Run {
                spec.deltas = vec![required(parse(map, "delta")?, "delta", command)?];
            } else if let Some(d) = parse_list(map, "deltas")? {
                spec.deltas = d;
            }
            let q: Option<usize> = parse(map, "q")?;
            let q_tri: Option<usize> = parse(map, "q_tri")?;
            if q.is_some() || q_tri.is_some() {
                let base = QuadOrders::for_degree(p);
                spec.orders = Some(QuadOrders {
                    rect: q.unwrap_or(base.rect),
                    tri: q_tri.unwrap_or(base.tri),
                });
            }
            spec.validate().map_err(|e| CliError::Usage(e.to_string()))?;
            cfg.spec = Some(spec);
        }
        Command::Accept => {
            cfg.criteria = parse_list(map, "criteria")?.unwrap_or_default();
            if let Some(bad) = cfg.criteria.iter().find(|&&c| !(1..=11).contains(&c)) {
                return Err(CliError::Usage(format!("invalid entry `{bad}` in `criteria`: expected 1..=11")));
            }
        }
        Command::ListGeometries => {}
    }
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flags(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn sweep_defaults() {
        let m = collect(Command::Sweep, None, &flags(&["geometry=1d_trim", "p=3", "k=2"])).unwrap();
        let c = build(Command::Sweep, &m).unwrap();
        let s = c.spec.unwrap();
        assert_eq!(s.n, 128);
        assert_eq!(s.deltas, vec![1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8]);
        assert_eq!(s.gamma, 0.5);
    }

    #[test]
    fn errors_name_the_key() {
        let m = collect(Command::Run, None, &flags(&["geometry=plate_hole"])).unwrap();
        let e = build(Command::Run, &m).unwrap_err().to_string();
        assert!(e.contains("`delta`"), "{e}");
        let m = collect(Command::Sweep, None, &flags(&["geometry=1d_trim", "p=3", "k=7"])).unwrap();
        let e = build(Command::Sweep, &m).unwrap_err().to_string();
        assert!(e.contains("`k`"), "{e}");
        let e = collect(Command::Sweep, None, &flags(&["geometry=1d_trim", "delta=1e-3"])).unwrap_err().to_string();
        assert!(e.contains("`delta`"), "{e}");
        let m = collect(Command::Sweep, None, &flags(&["geometry=1d_trim", "gamma=x"])).unwrap();
        assert!(build(Command::Sweep, &m).unwrap_err().to_string().contains("`gamma`"));
    }

    #[test]
    fn flags_override_file() {
        let dir = std::env::temp_dir().join(format!("trimspec-cfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let f = dir.join("c.toml");
        std::fs::write(&f, "geometry = \"square_corner\"\np = 3\nk = 2\ndeltas = [1e-2, 1e-3, 1e-4]\n").unwrap();
        let m = collect(Command::Sweep, Some(&f), &flags(&["k=0"])).unwrap();
        let s = build(Command::Sweep, &m).unwrap().spec.unwrap();
        assert_eq!((s.p, s.k), (3, 0));
        assert_eq!(s.deltas, vec![1e-2, 1e-3, 1e-4]);
        std::fs::remove_dir_all(dir).unwrap();
    }
}
