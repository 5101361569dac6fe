use std::path::Path;

use spinqcorr::sweep::{detect_critical_points, run_sweep, DetectionConfig, Measure, SweepConfig, SweepPoint};

use crate::manifest::RunManifest;
use crate::output::{fmt_sig, with_suffix, write_atomic};
use crate::{Failure, SweepArgs};

pub const HEADER: [&str; 10] = ["param", "regime", "N", "I", "D", "U", "dN", "dI", "dD", "dU"];
const THREADS_VAR: &str = "SPINQCORR_THREADS";
const EXIT_PARTIAL: u8 = 2;

fn read_manifest(path: &Path) -> Result<RunManifest, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read manifest {}: {e}", path.display())))?;
    let m: RunManifest = serde_json::from_str(&text)
        .map_err(|e| Failure::Usage(format!("malformed manifest {}: {e}", path.display())))?;
    if m.command != "sweep" {
        return Err(Failure::Usage(format!("manifest records command '{}', not sweep", m.command)));
    }
    Ok(m)
}

fn configure(a: &SweepArgs) -> Result<(SweepConfig, DetectionConfig), Failure> {
    if let Some(path) = &a.manifest {
        let m = read_manifest(path)?;
        return Ok((m.config, m.detection));
    }
    let missing = || Failure::Usage("--model, --from, --to and --step are required".into());
    let mut cfg = SweepConfig::new(
        a.model.ok_or_else(missing)?,
        a.r,
        a.from.ok_or_else(missing)?,
        a.to.ok_or_else(missing)?,
        a.step.ok_or_else(missing)?,
    );
    cfg.derivative_step = a.derivative_step;
    cfg.measures = a.measures.clone();
    cfg.measures.sort();
    cfg.measures.dedup();
    cfg.include_boundaries = a.include_boundaries;
    let mut det = DetectionConfig::default();
    if let Some(ratio) = a.ratio {
        if !(ratio > 1.0 && ratio.is_finite()) {
            return Err(Failure::Usage(format!("--ratio must exceed 1, got {ratio}")));
        }
        det.ratio = ratio;
    }
    if let Some(w) = a.window {
        if w == 0 {
            return Err(Failure::Usage("--window must be positive".into()));
        }
        det.window = w;
    }
    Ok((cfg, det))
}

fn thread_pool() -> Result<rayon::ThreadPool, Failure> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_VAR) {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|n| *n > 0)
            .ok_or_else(|| Failure::Usage(format!("{THREADS_VAR} must be a positive integer, got '{v}'")))?;
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| Failure::Compute(format!("cannot start worker threads: {e}")))
}

pub fn render_csv(points: &[SweepPoint], measures: &[Measure]) -> Result<Vec<u8>, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Failure::Compute(format!("CSV encoding failed: {e}"));
    w.write_record(HEADER).map_err(io)?;
    for p in points {
        let mut row = Vec::with_capacity(HEADER.len());
        match p {
            SweepPoint::Ok(rec) => {
                row.push(fmt_sig(rec.param));
                row.push(rec.phase.label().to_string());
                for set in [&rec.values, &rec.derivatives] {
                    for m in Measure::ALL {
                        row.push(if measures.contains(&m) { fmt_sig(m.get(set)) } else { String::new() });
                    }
                }
            }
            SweepPoint::Failed { param, phase, .. } => {
                row.push(fmt_sig(*param));
                row.push(phase.label().to_string());
                for _ in 0..2 {
                    for m in Measure::ALL {
                        row.push(if measures.contains(&m) { "ERR".into() } else { String::new() });
                    }
                }
            }
        }
        w.write_record(&row).map_err(io)?;
    }
    w.into_inner()
        .map_err(|e| Failure::Compute(format!("CSV encoding failed: {e}")))
}

pub fn run(a: SweepArgs) -> Result<u8, Failure> {
    let (cfg, det) = configure(&a)?;
    cfg.validate()?;
    let csv_path = with_suffix(&a.out, ".csv");
    let manifest_path = with_suffix(&a.out, ".manifest.json");

    let pool = thread_pool()?;
    let points = pool.install(|| run_sweep(&cfg))?;
    let bytes = render_csv(&points, &cfg.measures)?;

    let manifest = RunManifest::new(cfg.clone(), det);
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serialises");
    let unwritable = |p: &Path, e: std::io::Error| Failure::Output(format!("cannot write {}: {e}", p.display()));
    write_atomic(&csv_path, &bytes).map_err(|e| unwritable(&csv_path, e))?;
    write_atomic(&manifest_path, json.as_bytes()).map_err(|e| unwritable(&manifest_path, e))?;

    let failures: Vec<&SweepPoint> = points
        .iter()
        .filter(|p| matches!(p, SweepPoint::Failed { .. }))
        .collect();
    for p in &failures {
        if let SweepPoint::Failed { param, error, .. } = p {
            eprintln!("point {param}: {error}");
        }
    }
    println!(
        "{} rows ({} failed) -> {}",
        points.len(),
        failures.len(),
        csv_path.display()
    );
    for r in detect_critical_points(&points, &cfg.measures, &det) {
        println!(
            "critical {} at {} ({}, statistic {:.3e} > {:.3e})",
            r.measure,
            fmt_sig(r.location),
            r.kind.label(),
            r.magnitude,
            r.threshold
        );
    }
    Ok(if failures.is_empty() { 0 } else { EXIT_PARTIAL })
}
