//! Deterministic CSV writers. Floats use Rust's shortest round-trip
//! formatting (at most 17 significant digits), so identical inputs give
//! byte-identical files.

use qspec::pseudo::{self, FlaggedValue};

pub fn grid(min: f64, max: f64, points: usize) -> Vec<f64> {
    assert!(points >= 2);
    (0..points)
        .map(|i| min + (max - min) * i as f64 / (points - 1) as f64)
        .collect()
}

fn flag_str(flagged: bool) -> &'static str {
    if flagged {
        "pole"
    } else {
        ""
    }
}

/// Moment sweep in the standard profile layout.
pub fn moment_sweep(cap: usize, lambdas: &[f64]) -> Result<String, String> {
    let boundary = ((2 * cap + 1) as f64).sqrt();
    let mut out = String::from("lambda,d,expectation,var_truncated,var_full,flags\n");
    for &lambda in lambdas {
        let m = pseudo::moment_report(lambda, cap).map_err(|e| e.to_string())?;
        // The pole flag only makes sense inside the oscillatory window.
        let pole = if lambda.abs() < boundary {
            pseudo::d_approx_oscillatory(lambda, cap)
                .map_err(|e| e.to_string())?
                .pole_flag
        } else {
            false
        };
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            m.lambda,
            m.d_value,
            m.expectation,
            m.var_truncated,
            m.var_full,
            flag_str(pole)
        ));
    }
    Ok(out)
}

/// One curve of `lambda,value,flags` rows.
pub fn flagged_curve<F>(lambdas: &[f64], mut eval: F) -> Result<String, String>
where
    F: FnMut(f64) -> qspec::Result<FlaggedValue>,
{
    let mut out = String::from("lambda,value,flags\n");
    for &lambda in lambdas {
        let v = eval(lambda).map_err(|e| e.to_string())?;
        out.push_str(&format!("{},{},{}\n", lambda, v.value, flag_str(v.pole_flag)));
    }
    Ok(out)
}

/// One curve of plain `lambda,value` rows.
pub fn plain_curve<F>(lambdas: &[f64], mut eval: F) -> Result<String, String>
where
    F: FnMut(f64) -> qspec::Result<f64>,
{
    let mut out = String::from("lambda,value\n");
    for &lambda in lambdas {
        let v = eval(lambda).map_err(|e| e.to_string())?;
        out.push_str(&format!("{},{}\n", lambda, v));
    }
    Ok(out)
}
