//! CSV emission with round-trip-exact floats (17 significant digits).

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use burgers_core::{BoundReport, ScenarioReport, Trajectory};

/// Serialize a float with 17 significant digits (round-trip exact).
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_file(path: &Path, contents: &str) -> io::Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, contents)
}

/// time, |u|^2, |u|_V^2, |Au|^2, b(u,u,u), (f,u) per snapshot.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut out = String::from("time,l2_sq,v_sq,h2_sq,b_uuu,f_dot_u\n");
    for (t, d) in traj.times.iter().zip(&traj.diagnostics) {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            fmt_f64(*t),
            fmt_f64(d.l2_sq),
            fmt_f64(d.v_sq),
            fmt_f64(d.h2_sq),
            fmt_f64(d.b_uuu),
            fmt_f64(d.f_dot_u)
        );
    }
    out
}

/// component, mode, coefficient rows of the final state.
pub fn state_csv(traj: &Trajectory) -> String {
    let s = traj.final_state();
    let mut out = String::from("component,mode,coefficient\n");
    for c in 0..s.components() {
        for j in 0..s.truncation() {
            let _ = writeln!(out, "{c},{j},{}", fmt_f64(s.coeff(c, j)));
        }
    }
    out
}

/// time, measured, bound, margin per snapshot.
pub fn bound_csv(report: &BoundReport) -> String {
    let mut out = String::from("time,measured,bound,margin\n");
    for ((t, m), b) in report.times.iter().zip(&report.measured).zip(&report.bound) {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            fmt_f64(*t),
            fmt_f64(*m),
            fmt_f64(*b),
            fmt_f64(b - m)
        );
    }
    out
}

/// time, mean, max_gradient, shock_position (blank when absent).
pub fn scenario_csv(report: &ScenarioReport) -> String {
    let mut out = String::from("time,mean,max_gradient,shock_position\n");
    for i in 0..report.trajectory.times.len() {
        let pos = report.shock_position[i]
            .map(fmt_f64)
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{pos}",
            fmt_f64(report.trajectory.times[i]),
            fmt_f64(report.means[i]),
            fmt_f64(report.max_gradient[i])
        );
    }
    out
}

/// m, error rows from a convergence table.
pub fn converge_csv(table: &[(usize, f64)]) -> String {
    let mut out = String::from("m,error\n");
    for (m, e) in table {
        let _ = writeln!(out, "{m},{}", fmt_f64(*e));
    }
    out
}

/// dt, error rows from an oracle refinement study.
pub fn oracle_csv(table: &[(f64, f64)]) -> String {
    let mut out = String::from("dt,error\n");
    for (dt, e) in table {
        let _ = writeln!(out, "{},{}", fmt_f64(*dt), fmt_f64(*e));
    }
    out
}

/// Write a named CSV into the output directory, returning (name, contents).
pub fn emit(out_dir: &Path, name: &str, contents: &str) -> io::Result<()> {
    write_file(&out_dir.join(name), contents)
        .map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", out_dir.join(name).display())))
}

/// Parse a bound CSV back and recompute the worst margin (serialization
/// round-trip check).
pub fn worst_margin_from_csv(csv: &str) -> Option<f64> {
    let mut worst = f64::INFINITY;
    for line in csv.lines().skip(1) {
        let margin: f64 = line.split(',').nth(3)?.parse().ok()?;
        worst = worst.min(margin);
    }
    if worst.is_finite() {
        Some(worst)
    } else {
        None
    }
}
