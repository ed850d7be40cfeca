use nalgebra::SVector;

/// One classical fourth-order Runge-Kutta step of `y' = f(t, y)`.
pub fn rk4_step<const N: usize, F>(f: F, t: f64, y: &SVector<f64, N>, h: f64) -> SVector<f64, N>
where
    F: Fn(f64, &SVector<f64, N>) -> SVector<f64, N>,
{
    let half = 0.5 * h;
    let k1 = f(t, y);
    let k2 = f(t + half, &(y + k1 * half));
    let k3 = f(t + half, &(y + k2 * half));
    let k4 = f(t + h, &(y + k3 * h));
    y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
}

/// Integrates `n` fixed steps starting at `t0`.
pub fn rk4_integrate<const N: usize, F>(f: F, t0: f64, y0: &SVector<f64, N>, h: f64, n: usize) -> SVector<f64, N>
where
    F: Fn(f64, &SVector<f64, N>) -> SVector<f64, N>,
{
    let mut y = *y0;
    for i in 0..n {
        y = rk4_step(&f, t0 + h * i as f64, &y, h);
    }
    y
}
