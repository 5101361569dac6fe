use serde::Serialize;
use spinqcorr::validation::{run_suite, Suite, SuiteReport, ValidationOptions};

use crate::output::write_atomic;
use crate::{Failure, ValidateArgs};

const EXIT_FAILED: u8 = 1;

#[derive(Serialize)]
struct Report {
    passed: bool,
    options: ValidationOptions,
    suites: Vec<SuiteReport>,
}

fn suites(name: &str) -> Result<Vec<Suite>, Failure> {
    if name == "all" {
        return Ok(Suite::ALL.to_vec());
    }
    name.split(',')
        .map(|s| s.trim().parse::<Suite>().map_err(Failure::from))
        .collect()
}

fn print_rows(r: &SuiteReport, only_failed: bool) {
    println!("  {:<44} {:>12} {:>10}  status", "check", "residual", "tol");
    for row in r.rows.iter().filter(|row| !only_failed || !row.passed) {
        let status = if row.passed { "ok" } else { "FAIL" };
        println!(
            "  {:<44} {:>12.3e} {:>10.1e}  {status}",
            row.label, row.residual, row.tolerance
        );
        if let Some(e) = &row.error {
            println!("    {e}");
        }
    }
}

fn print_findings(r: &SuiteReport) {
    if r.findings.is_empty() {
        return;
    }
    println!("  FINDING (reported, not a failure): LQU from its defining formula differs from the published 1 - λ");
    println!("  {:<20} {:>14} {:>14} {:>12}", "point", "definitional", "published", "mismatch");
    for f in &r.findings {
        println!(
            "  {:<20} {:>14.10} {:>14.10} {:>12.3e}",
            f.label, f.definitional, f.published, f.mismatch
        );
    }
}

fn print_text(report: &Report, verbose: bool) {
    for r in &report.suites {
        let tag = if r.passed { "PASS" } else { "FAIL" };
        println!(
            "{tag} {}: {} checks, max residual {:.3e}",
            r.suite,
            r.rows.len(),
            r.max_residual()
        );
        if verbose || !r.passed {
            print_rows(r, !verbose);
        }
        print_findings(r);
    }
    println!("{}", if report.passed { "all suites passed" } else { "validation failed" });
}

pub fn run(a: ValidateArgs) -> Result<u8, Failure> {
    let mut opts = ValidationOptions::default();
    if let Some(sizes) = a.sizes {
        opts.ed_sizes = sizes;
    }
    if let Some(n) = a.state_points {
        opts.state_points = n;
    }
    let suites = suites(&a.suite)?;
    let reports = suites
        .iter()
        .map(|s| run_suite(*s, &opts))
        .collect::<spinqcorr::Result<Vec<_>>>()?;
    let report = Report {
        passed: reports.iter().all(|r| r.passed),
        options: opts,
        suites: reports,
    };
    let json = serde_json::to_string_pretty(&report).expect("report serialises");
    if let Some(path) = &a.report {
        write_atomic(path, json.as_bytes())
            .map_err(|e| Failure::Output(format!("cannot write {}: {e}", path.display())))?;
    }
    if a.json {
        println!("{json}");
    } else {
        print_text(&report, a.verbose);
    }
    Ok(if report.passed { 0 } else { EXIT_FAILED })
}
