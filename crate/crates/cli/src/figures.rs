//! Figure presets: each emits the CSV data behind one published panel, with
//! the original parameters baked in and deterministic file contents.

use std::path::{Path, PathBuf};

use clap::ValueEnum;

use qspec::cd;
use qspec::pseudo::{self, Regime};

use crate::sweep;

#[derive(Clone, Copy, ValueEnum)]
pub enum FigureId {
    /// d_N(lambda) with both approximants, N = 15.
    #[value(name = "fig1_dn")]
    Fig1Dn,
    /// Complex zeros of the denominator polynomial for a ladder of caps.
    #[value(name = "fig2_cdzeros")]
    Fig2CdZeros,
    /// Pseudo-eigenstate wavefunctions, N = 16.
    #[value(name = "fig3_wavefunctions")]
    Fig3Wavefunctions,
    /// Expectation value profile with approximants, N = 16.
    #[value(name = "fig4_expectation")]
    Fig4Expectation,
    /// Dispersion profile with approximants, N = 8 (or --cap).
    #[value(name = "fig5_dispersion")]
    Fig5Dispersion,
}

pub struct FigureOptions {
    pub cap: Option<usize>,
    pub lambda: Option<Vec<f64>>,
    pub animate: bool,
    pub best_effort: bool,
}

fn write(outdir: &Path, name: &str, content: &str, written: &mut Vec<PathBuf>) -> Result<(), String> {
    let path = outdir.join(name);
    std::fs::write(&path, content).map_err(|e| format!("writing {}: {e}", path.display()))?;
    written.push(path);
    Ok(())
}

/// Splits a grid at the regime boundary `sqrt(2N+1)`: the quadratic
/// approximant lives outside the root window, the oscillatory one inside.
fn split_by_regime(grid: &[f64], cap: usize) -> (Vec<f64>, Vec<f64>) {
    let boundary = ((2 * cap + 1) as f64).sqrt();
    let outside = grid.iter().copied().filter(|x| x.abs() > boundary).collect();
    let inside = grid.iter().copied().filter(|x| x.abs() < boundary).collect();
    (outside, inside)
}

fn lambda_tag(lambda: f64) -> String {
    let mut s = format!("{lambda}");
    s = s.replace('-', "m").replace('.', "p");
    s
}

pub fn emit(figure: FigureId, outdir: &Path, opts: &FigureOptions) -> Result<Vec<PathBuf>, String> {
    std::fs::create_dir_all(outdir).map_err(|e| format!("creating {}: {e}", outdir.display()))?;
    let mut written = Vec::new();
    match figure {
        FigureId::Fig1Dn => {
            let cap = opts.cap.unwrap_or(15);
            let grid = sweep::grid(-8.0, 8.0, 1601);
            let (outside, inside) = split_by_regime(&grid, cap);
            let exact = sweep::plain_curve(&grid, |x| pseudo::d_measure(x, cap))?;
            write(outdir, "fig1_dn_exact.csv", &exact, &mut written)?;
            let quad = sweep::plain_curve(&outside, |x| pseudo::d_approx_quadratic(x, cap, 3))?;
            write(outdir, "fig1_dn_quadratic.csv", &quad, &mut written)?;
            let osc = sweep::flagged_curve(&inside, |x| pseudo::d_approx_oscillatory(x, cap))?;
            write(outdir, "fig1_dn_oscillatory.csv", &osc, &mut written)?;
        }
        FigureId::Fig2CdZeros => {
            let mut caps: Vec<usize> = vec![5, 10, 25, 50];
            if let Some(cap) = opts.cap {
                caps = vec![cap];
            }
            for cap in caps {
                emit_zero_set(outdir, cap, false, &mut written)?;
            }
            if opts.best_effort && opts.cap.is_none() {
                for cap in [150usize, 500] {
                    emit_zero_set(outdir, cap, true, &mut written)?;
                }
            }
        }
        FigureId::Fig3Wavefunctions => {
            let cap = opts.cap.unwrap_or(16);
            let xi_grid = sweep::grid(-10.0, 10.0, 1001);
            let lambdas = opts
                .lambda
                .clone()
                .unwrap_or_else(|| vec![-5.0, -2.0, 0.0, 2.0, 5.0, 10.0]);
            for &lambda in &lambdas {
                let mut csv = String::from("xi,psi\n");
                for &xi in &xi_grid {
                    let psi = pseudo::wavefunction(xi, lambda, cap).map_err(|e| e.to_string())?;
                    csv.push_str(&format!("{xi},{psi}\n"));
                }
                let name = format!("fig3_wavefunctions_lambda_{}.csv", lambda_tag(lambda));
                write(outdir, &name, &csv, &mut written)?;
            }
            if opts.animate {
                let mut manifest = String::from("frame,lambda,file\n");
                for (frame, k) in (-60..=110).enumerate() {
                    let lambda = k as f64 * 0.1;
                    let mut csv = String::from("xi,psi\n");
                    for &xi in &xi_grid {
                        let psi =
                            pseudo::wavefunction(xi, lambda, cap).map_err(|e| e.to_string())?;
                        csv.push_str(&format!("{xi},{psi}\n"));
                    }
                    let name = format!("fig3_frame_{frame:04}.csv");
                    manifest.push_str(&format!("{frame},{lambda},{name}\n"));
                    write(outdir, &name, &csv, &mut written)?;
                }
                write(outdir, "fig3_frames.csv", &manifest, &mut written)?;
            }
        }
        FigureId::Fig4Expectation => {
            let cap = opts.cap.unwrap_or(16);
            let grid = sweep::grid(-10.0, 10.0, 1001);
            let (outside, inside) = split_by_regime(&grid, cap);
            let sweep_csv = sweep::moment_sweep(cap, &grid)?;
            write(outdir, "fig4_expectation.csv", &sweep_csv, &mut written)?;
            let quad = sweep::flagged_curve(&outside, |x| {
                pseudo::expectation_approx(x, cap, Regime::Quadratic)
            })?;
            write(outdir, "fig4_expectation_quadratic.csv", &quad, &mut written)?;
            let osc = sweep::flagged_curve(&inside, |x| {
                pseudo::expectation_approx(x, cap, Regime::Oscillatory)
            })?;
            write(outdir, "fig4_expectation_oscillatory.csv", &osc, &mut written)?;
        }
        FigureId::Fig5Dispersion => {
            let cap = opts.cap.unwrap_or(8);
            let grid = sweep::grid(-10.0, 10.0, 1001);
            let (outside, inside) = split_by_regime(&grid, cap);
            let sweep_csv = sweep::moment_sweep(cap, &grid)?;
            write(outdir, "fig5_dispersion.csv", &sweep_csv, &mut written)?;
            let quad = sweep::flagged_curve(&outside, |x| {
                pseudo::variance_full_approx(x, cap, Regime::Quadratic)
            })?;
            write(outdir, "fig5_dispersion_quadratic.csv", &quad, &mut written)?;
            let osc = sweep::flagged_curve(&inside, |x| {
                pseudo::variance_full_approx(x, cap, Regime::Oscillatory)
            })?;
            write(outdir, "fig5_dispersion_oscillatory.csv", &osc, &mut written)?;
        }
    }
    Ok(written)
}

fn emit_zero_set(
    outdir: &Path,
    cap: usize,
    best_effort: bool,
    written: &mut Vec<PathBuf>,
) -> Result<(), String> {
    let (set, unconverged) = if best_effort {
        cd::complex_zeros_relaxed(cap).map_err(|e| e.to_string())?
    } else {
        (cd::complex_zeros(cap).map_err(|e| e.to_string())?, Vec::new())
    };
    let mut csv = String::from("re,im\n");
    for z in &set.roots {
        csv.push_str(&format!("{},{}\n", z.re, z.im));
    }
    write(outdir, &format!("fig2_cdzeros_n{cap}.csv"), &csv, written)?;
    let mut json = set.to_json();
    json.push('\n');
    write(outdir, &format!("fig2_cdzeros_n{cap}.json"), &json, written)?;
    if best_effort && !unconverged.is_empty() {
        let sidecar = serde_json::json!({
            "cap": cap,
            "unconverged_indices": unconverged,
            "max_residual": set.max_residual,
        })
        .to_string();
        write(
            outdir,
            &format!("fig2_cdzeros_n{cap}_unconverged.json"),
            &(sidecar + "\n"),
            written,
        )?;
    }
    Ok(())
}
