use nalgebra::{DMatrix, DVector};

/// Largest componentwise error between `analytic` and the central-difference
/// Jacobian of `f` at `x`, each error scaled by `max(1, |analytic entry|)`.
pub fn finite_diff_check(
    f: impl Fn(&DVector<f64>) -> DVector<f64>,
    analytic: &DMatrix<f64>,
    x: &DVector<f64>,
    step: f64,
) -> f64 {
    assert!(step > 0.0, "finite_diff_check step must be positive");
    let mut worst: f64 = 0.0;
    for j in 0..x.len() {
        let mut plus = x.clone();
        let mut minus = x.clone();
        plus[j] += step;
        minus[j] -= step;
        let col = (f(&plus) - f(&minus)) / (2.0 * step);
        for i in 0..col.len() {
            let a = analytic[(i, j)];
            worst = worst.max((a - col[i]).abs() / a.abs().max(1.0));
        }
    }
    worst
}
