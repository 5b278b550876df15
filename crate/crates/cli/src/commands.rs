use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use trimspec::experiments::acceptance::{run_acceptance, CRITERIA};
use trimspec::experiments::fit::compare_csv;
use trimspec::experiments::report::{all_judged_pass, render_case, render_report, sweep_fits};
use trimspec::experiments::{run_case, run_sweep, write_csv, GeometryId, SweepSpec};
use trimspec::geometry::TrimConfig;

use crate::config::RunConfig;
use crate::error::CliError;

/// Exit status of a completed command: 0 when every verdict passed or the
/// command does not judge, 2 otherwise.
pub type Status = u8;

/// Writes through a temporary sibling and a rename.
fn write_file(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let io = |source| CliError::Io {
        path: path.display().to_string(),
        source,
    };
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(io)?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, contents).map_err(io)?;
    std::fs::rename(&tmp, path).map_err(io)
}

fn stem(spec: &SweepSpec) -> String {
    format!("{}_p{}_k{}", spec.geometry, spec.p, spec.k)
}

pub fn list_geometries() -> String {
    let mut out = String::new();
    for g in GeometryId::ALL {
        let n = g.default_n();
        let h = 1.0 / n as f64;
        let configs: Vec<&str> = g.configurations().iter().map(TrimConfig::label).collect();
        let _ = writeln!(out, "{}", g.name());
        let _ = writeln!(out, "    {}", g.description());
        let _ = writeln!(
            out,
            "    dimension {}, N = {}{}, delta in (0, {:e}) for the default N, configurations {}",
            g.dimension(),
            n,
            if g.n_is_fixed() { " (fixed)" } else { "" },
            g.delta_limit(h),
            configs.join("+")
        );
        let d = g.default_deltas();
        let _ = writeln!(out, "    default deltas: {} values from {:e} to {:e}", d.len(), d[0], d[d.len() - 1]);
    }
    out
}

pub fn run(cfg: &RunConfig) -> Result<(String, Status), CliError> {
    let spec = cfg.spec.as_ref().expect("validated run config");
    let delta = spec.deltas[0];
    let case = run_case(spec, delta, cfg.vectors)?;
    let report = render_case(spec, &case);
    if let Some(dir) = &cfg.out {
        let base = format!("{}_delta{:e}", stem(spec), delta);
        write_file(&dir.join(format!("{base}.csv")), write_csv(&[case.row.clone()]).as_bytes())?;
        write_file(&dir.join(format!("{base}_report.txt")), report.as_bytes())?;
        if cfg.matrices {
            for (name, m) in [("K", &case.system.k), ("M", &case.system.m)] {
                let mut buf = Vec::new();
                m.write_coordinate(&mut buf).map_err(|source| CliError::Io {
                    path: name.into(),
                    source,
                })?;
                write_file(&dir.join(format!("{base}_{name}.txt")), &buf)?;
            }
            let lumped: String = case.system.lumped.iter().map(|v| format!("{v:.16e}\n")).collect();
            write_file(&dir.join(format!("{base}_lumped.txt")), lumped.as_bytes())?;
            let globals: String = case.system.globals.iter().map(|g| format!("{g}\n")).collect();
            write_file(&dir.join(format!("{base}_globals.txt")), globals.as_bytes())?;
        }
        if cfg.vectors {
            for (name, v) in [("x1", &case.spectrum.x1), ("xn", &case.spectrum.xn)] {
                if let Some(v) = v {
                    let text: String = case
                        .system
                        .globals
                        .iter()
                        .zip(v.iter())
                        .map(|(g, x)| format!("{g} {x:.16e}\n"))
                        .collect();
                    write_file(&dir.join(format!("{base}_{name}.txt")), text.as_bytes())?;
                }
            }
        }
    }
    Ok((report, 0))
}

pub fn sweep(cfg: &RunConfig) -> Result<(String, Status), CliError> {
    let spec = cfg.spec.as_ref().expect("validated sweep config");
    if cfg.verbose {
        eprintln!("sweeping {} over {} values of delta", stem(spec), spec.deltas.len());
    }
    let res = run_sweep(spec)?;
    let fits = sweep_fits(&res)?;
    let report = render_report(&res, &fits);
    let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("."));
    let base = stem(spec);
    write_file(&dir.join(format!("{base}.csv")), write_csv(&res.rows()).as_bytes())?;
    write_file(&dir.join(format!("{base}_fits.csv")), compare_csv(&fits).as_bytes())?;
    write_file(&dir.join(format!("{base}_report.txt")), report.as_bytes())?;
    let status = if all_judged_pass(&fits) { 0 } else { 2 };
    Ok((report, status))
}

pub fn accept(cfg: &RunConfig) -> Result<(String, Status), CliError> {
    let selection = if cfg.criteria.is_empty() {
        CRITERIA.iter().map(|c| c.0).collect()
    } else {
        cfg.criteria.clone()
    };
    let mut out = String::new();
    let mut all = true;
    for r in run_acceptance(&selection)? {
        let _ = writeln!(out, "{}", r.summary());
        if cfg.verbose || !r.passed {
            for d in &r.details {
                let _ = writeln!(out, "    {d}");
            }
        }
        all &= r.passed;
    }
    let _ = writeln!(out, "{}", if all { "acceptance: PASS" } else { "acceptance: FAIL" });
    if let Some(dir) = &cfg.out {
        write_file(&dir.join("acceptance.txt"), out.as_bytes())?;
    }
    Ok((out, if all { 0 } else { 2 }))
}
