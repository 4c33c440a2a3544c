use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Points with `p_tot` above this are left out of fits.
pub const FIT_SATURATION: f64 = 0.3;

/// One measured `p_tot` at physical parameter `x` (`p` or `kappa_1/kappa_2`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitPoint {
    pub x: f64,
    pub d: usize,
    pub p_tot: f64,
    pub std_err: f64,
}

/// Parameters of `p_tot = A d (B x)^(C floor((d+1)/2))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "C")]
    pub c: f64,
    /// Covariance of `(A, B, C)`, delta method from the linear fit.
    pub covariance: [[f64; 3]; 3],
    pub points_used: Vec<FitPoint>,
    /// `A` held fixed rather than fitted.
    pub pinned_a: bool,
}

impl FitResult {
    pub fn from_params(a: f64, b: f64, c: f64) -> Self {
        Self { a, b, c, covariance: [[0.0; 3]; 3], points_used: Vec::new(), pinned_a: false }
    }

    /// `p_tot` predicted after `d` rounds.
    pub fn predict_total(&self, x: f64, d: usize) -> f64 {
        d as f64 * extrapolate_pzl(self, x, d)
    }
}

/// `floor((d + 1) / 2)`.
fn t_of(d: usize) -> f64 {
    ((d + 1) / 2) as f64
}

/// Per-round, per-logical-qubit phase-flip probability `A (B x)^(C t)`.
pub fn extrapolate_pzl(fit: &FitResult, x: f64, d: usize) -> f64 {
    fit.a * (fit.b * x).powf(fit.c * t_of(d))
}

/// Per-round, per-logical-qubit bit-flip probability of a code using
/// `n_cx` CNOTs per round, each flipping with `0.5 exp(-2 nbar)`.
pub fn logical_bitflip(nbar: f64, n_cx: usize, k: usize) -> f64 {
    assert!(k > 0, "k must be positive");
    n_cx as f64 * 0.5 * (-2.0 * nbar).exp() / k as f64
}

fn usable(points: &[FitPoint]) -> Vec<FitPoint> {
    points
        .iter()
        .copied()
        .filter(|p| p.p_tot > 0.0 && p.p_tot <= FIT_SATURATION && p.x > 0.0)
        .collect()
}

/// Solves the weighted normal equations; `None` when singular.
fn weighted_least_squares(rows: &[Vec<f64>], y: &[f64], w: &[f64]) -> Option<(Vec<f64>, Vec<Vec<f64>>)> {
    let p = rows[0].len();
    let mut normal = vec![vec![0.0; p]; p];
    let mut rhs = vec![0.0; p];
    for ((r, &yi), &wi) in rows.iter().zip(y).zip(w) {
        for i in 0..p {
            rhs[i] += wi * r[i] * yi;
            for j in 0..p {
                normal[i][j] += wi * r[i] * r[j];
            }
        }
    }
    // Gauss-Jordan inverse with a relative pivot tolerance.
    let scale: f64 = (0..p).map(|i| normal[i][i].abs()).fold(0.0, f64::max);
    let mut a = normal.clone();
    let mut inv: Vec<Vec<f64>> = (0..p).map(|i| (0..p).map(|j| (i == j) as u8 as f64).collect()).collect();
    for col in 0..p {
        let piv = (col..p).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() <= 1e-10 * scale.max(f64::MIN_POSITIVE) {
            return None;
        }
        a.swap(col, piv);
        inv.swap(col, piv);
        let d = a[col][col];
        for j in 0..p {
            a[col][j] /= d;
            inv[col][j] /= d;
        }
        for i in 0..p {
            if i != col {
                let f = a[i][col];
                for j in 0..p {
                    a[i][j] -= f * a[col][j];
                    inv[i][j] -= f * inv[col][j];
                }
            }
        }
    }
    let beta: Vec<f64> = (0..p).map(|i| (0..p).map(|j| inv[i][j] * rhs[j]).sum()).collect();
    let chi2: f64 = rows
        .iter()
        .zip(y)
        .zip(w)
        .map(|((r, &yi), &wi)| {
            let fit: f64 = r.iter().zip(&beta).map(|(a, b)| a * b).sum();
            wi * (yi - fit).powi(2)
        })
        .sum();
    let dof = rows.len().saturating_sub(p);
    let s2 = if dof > 0 { chi2 / dof as f64 } else { 1.0 };
    let cov = inv.iter().map(|r| r.iter().map(|v| v * s2).collect()).collect();
    Some((beta, cov))
}

fn log_weights(points: &[FitPoint]) -> Vec<f64> {
    points
        .iter()
        .map(|p| {
            let rel = p.std_err / p.p_tot;
            if rel > 0.0 { 1.0 / (rel * rel) } else { 1.0 }
        })
        .collect()
}

fn distinct(values: impl Iterator<Item = f64>) -> usize {
    let mut v: Vec<f64> = values.collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v.len()
}

/// Weighted least-squares fit of `ln(p_tot / d) = ln A + C t (ln B + ln x)`
/// with `t = floor((d + 1) / 2)` over points with `0 < p_tot <= 0.3`.
///
/// Needs at least three usable points spanning two values of `t`.
pub fn fit_ansatz(points: &[FitPoint]) -> Result<FitResult> {
    let pts = usable(points);
    if pts.len() < 3 {
        return Err(Error::DegenerateFit(format!(
            "{} usable points (0 < p_tot <= {FIT_SATURATION}); at least 3 are needed",
            pts.len()
        )));
    }
    if distinct(pts.iter().map(|p| t_of(p.d))) < 2 {
        return Err(Error::DegenerateFit(
            "all points share one value of floor((d+1)/2); vary the distance d".into(),
        ));
    }
    let rows: Vec<Vec<f64>> = pts.iter().map(|p| vec![1.0, t_of(p.d) * p.x.ln(), t_of(p.d)]).collect();
    let y: Vec<f64> = pts.iter().map(|p| (p.p_tot / p.d as f64).ln()).collect();
    let (beta, cov) = weighted_least_squares(&rows, &y, &log_weights(&pts)).ok_or_else(|| {
        Error::DegenerateFit("design matrix is singular; vary the physical error rate x".into())
    })?;
    let (a, c) = (beta[0].exp(), beta[1]);
    if c <= 0.0 {
        return Err(Error::DegenerateFit(format!("fitted exponent C = {c} is not positive")));
    }
    let b = (beta[2] / c).exp();
    // Jacobian of (A, B, C) with respect to (ln A, C, C ln B).
    let jac = [[a, 0.0, 0.0], [0.0, -b * beta[2] / (c * c), b / c], [0.0, 1.0, 0.0]];
    Ok(FitResult { a, b, c, covariance: sandwich(&jac, &cov), points_used: pts, pinned_a: false })
}

/// Fit with `A` held at `a`, for a single code (one distance): the
/// remaining `B` and `C` need at least two distinct `x`.
pub fn fit_ansatz_pinned_a(points: &[FitPoint], a: f64) -> Result<FitResult> {
    let pts = usable(points);
    if pts.len() < 2 || distinct(pts.iter().map(|p| p.x)) < 2 {
        return Err(Error::DegenerateFit(
            "pinned-A fits need at least two usable points at distinct x".into(),
        ));
    }
    let rows: Vec<Vec<f64>> = pts.iter().map(|p| vec![t_of(p.d) * p.x.ln(), t_of(p.d)]).collect();
    let y: Vec<f64> = pts.iter().map(|p| (p.p_tot / (a * p.d as f64)).ln()).collect();
    let (beta, cov) = weighted_least_squares(&rows, &y, &log_weights(&pts))
        .ok_or_else(|| Error::DegenerateFit("design matrix is singular; vary x".into()))?;
    let c = beta[0];
    if c <= 0.0 {
        return Err(Error::DegenerateFit(format!("fitted exponent C = {c} is not positive")));
    }
    let b = (beta[1] / c).exp();
    let cov3 = [[0.0, 0.0, 0.0], [0.0, cov[0][0], cov[0][1]], [0.0, cov[1][0], cov[1][1]]];
    let jac = [[0.0, 0.0, 0.0], [0.0, -b * beta[1] / (c * c), b / c], [0.0, 1.0, 0.0]];
    let cov3: Vec<Vec<f64>> = cov3.iter().map(|r| r.to_vec()).collect();
    Ok(FitResult { a, b, c, covariance: sandwich(&jac, &cov3), points_used: pts, pinned_a: true })
}

fn sandwich(j: &[[f64; 3]; 3], cov: &[Vec<f64>]) -> [[f64; 3]; 3] {
    let p = cov.len();
    // The linear parameters occupy the last `p` coordinates.
    let off = 3 - p;
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for k in 0..3 {
            let mut s = 0.0;
            for a in 0..p {
                for b in 0..p {
                    s += j[i][a + off] * cov[a][b] * j[k][b + off];
                }
            }
            out[i][k] = s;
        }
    }
    out
}

/// Where two logical-error curves sampled at the same `xs` cross, by
/// log-log interpolation between the bracketing samples. `None` when they
/// do not cross in range.
pub fn crossing_point(xs: &[f64], low_d: &[f64], high_d: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(low_d.iter().zip(high_d))
        .filter(|(x, (a, b))| **x > 0.0 && **a > 0.0 && **b > 0.0)
        .map(|(x, (a, b))| (x.ln(), b.ln() - a.ln()))
        .collect();
    pts.windows(2).find_map(|w| {
        let ((x0, g0), (x1, g1)) = (w[0], w[1]);
        if g0 == 0.0 {
            return Some(x0.exp());
        }
        (g0.signum() != g1.signum()).then(|| (x0 + (x1 - x0) * g0 / (g0 - g1)).exp())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn extrapolation_values() {
        let fit = FitResult::from_params(0.1, 1613.0, 0.94);
        let p = extrapolate_pzl(&fit, 1e-4, 22);
        // Independent evaluation: t = 11.
        let oracle = 0.1 * f64::exp(0.94 * 11.0 * (0.1613f64).ln());
        assert!((p - oracle).abs() <= 4.0 * f64::EPSILON * oracle);
        assert_eq!(format!("{p:.1e}"), "6.4e-10");
        let rep = FitResult::from_params(0.32, 6.2, 1.0);
        assert!((extrapolate_pzl(&rep, 1e-2, 3) - 0.32 * 0.062f64.powi(2)).abs() < 1e-15);
        let any = FitResult::from_params(0.7, 50.0, 0.8);
        assert!((extrapolate_pzl(&any, 1.0 / 50.0, 9) - 0.7).abs() < 1e-15);
    }

    #[test]
    fn bitflip_term() {
        assert_eq!(logical_bitflip(11.0, 0, 100), 0.0);
        assert!(logical_bitflip(200.0, 1000, 1) < 1e-150);
        // 1276 CNOTs of the planar [429,100,22] code.
        let p = logical_bitflip(11.0, 1276, 100);
        assert_eq!(format!("{p:.1e}"), "1.8e-9");
    }

    #[test]
    fn recovers_synthetic_parameters() {
        let truth = FitResult::from_params(0.12, 23.0, 0.99);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut pts = Vec::new();
        for &d in &[3, 5, 7, 9] {
            for &x in &[1e-3, 2e-3, 4e-3, 8e-3] {
                let noise = 1.0 + 0.05 * (2.0 * rng.random::<f64>() - 1.0);
                let p = truth.predict_total(x, d) * noise;
                pts.push(FitPoint { x, d, p_tot: p, std_err: 0.05 * p });
            }
        }
        let f = fit_ansatz(&pts).unwrap();
        assert!((f.a / 0.12 - 1.0).abs() < 0.1, "{f:?}");
        assert!((f.b / 23.0 - 1.0).abs() < 0.1, "{f:?}");
        assert!((f.c / 0.99 - 1.0).abs() < 0.1, "{f:?}");
        assert!(f.covariance[1][1] > 0.0);
    }

    #[test]
    fn pinned_fit_recovers_b_and_c() {
        let truth = FitResult::from_params(0.1, 1613.0, 0.94);
        let pts: Vec<FitPoint> = [1e-4, 2e-4, 3e-4]
            .iter()
            .map(|&x| FitPoint { x, d: 22, p_tot: truth.predict_total(x, 22), std_err: 0.0 })
            .filter(|p| p.p_tot < FIT_SATURATION)
            .collect();
        let f = fit_ansatz_pinned_a(&pts, 0.1).unwrap();
        assert!((f.b / 1613.0 - 1.0).abs() < 1e-6);
        assert!((f.c - 0.94).abs() < 1e-9);
    }

    #[test]
    fn rejects_single_distance_and_few_points() {
        let one_d: Vec<FitPoint> =
            [1e-3, 2e-3, 3e-3].iter().map(|&x| FitPoint { x, d: 5, p_tot: x, std_err: 0.0 }).collect();
        let err = fit_ansatz(&one_d).unwrap_err().to_string();
        assert!(err.contains("distance"), "{err}");
        assert!(fit_ansatz(&one_d[..2]).is_err());
        let saturated = vec![FitPoint { x: 0.1, d: 3, p_tot: 0.5, std_err: 0.01 }; 4];
        assert!(fit_ansatz(&saturated).is_err());
    }

    #[test]
    fn crossing_of_two_power_laws() {
        // y3 = (x/0.1)^2, y5 = (x/0.1)^3 cross at x = 0.1.
        let xs: Vec<f64> = [0.02, 0.05, 0.08, 0.15, 0.3].to_vec();
        let y3: Vec<f64> = xs.iter().map(|x| (x / 0.1f64).powi(2)).collect();
        let y5: Vec<f64> = xs.iter().map(|x| (x / 0.1f64).powi(3)).collect();
        let c = crossing_point(&xs, &y3, &y5).unwrap();
        assert!((c - 0.1).abs() < 1e-9);
        assert!(crossing_point(&xs[..2], &y3[..2], &y5[..2]).is_none());
    }
}
