use nalgebra::{Vector2, Vector3};

use super::ParametricPath;

const GOLDEN: f64 = 0.618_033_988_749_894_8;

/// Dense samples of a path over its parameter hint, reused across many
/// distance queries.
#[derive(Debug, Clone)]
pub struct PathSampler {
    path: ParametricPath,
    params: Vec<f64>,
    points: Vec<Vector2<f64>>,
    step: f64,
}

impl PathSampler {
    /// `resolution` is the number of samples and is clamped to at least 2.
    pub fn new(path: &ParametricPath, resolution: usize) -> Self {
        let n = resolution.max(2);
        let (lo, hi) = path.param_hint();
        let step = (hi - lo) / (n - 1) as f64;
        let params: Vec<f64> = (0..n).map(|i| lo + step * i as f64).collect();
        let points = params.iter().map(|&w| path.point(w)).collect();
        Self {
            path: path.clone(),
            params,
            points,
            step,
        }
    }

    /// Minimum over the raw samples, with the parameter that attains it.
    pub fn nearest_sample(&self, q: &Vector2<f64>) -> (f64, f64) {
        let mut best = (f64::INFINITY, self.params[0]);
        for (w, p) in self.params.iter().zip(&self.points) {
            let d = (q - p).norm_squared();
            if d < best.0 {
                best = (d, *w);
            }
        }
        (best.0.sqrt(), best.1)
    }

    /// Sampled distance refined by golden-section search in the bracket of
    /// one sample step around the best sample. Never exceeds the sampled
    /// minimum.
    pub fn distance(&self, q: &Vector2<f64>) -> f64 {
        self.distance_with_param(q).0
    }

    pub fn distance_with_param(&self, q: &Vector2<f64>) -> (f64, f64) {
        let (d0, w0) = self.nearest_sample(q);
        let (d1, w1) = golden_min(|w| (q - self.path.point(w)).norm(), w0 - self.step, w0 + self.step, 60);
        if d1 < d0 {
            (d1, w1)
        } else {
            (d0, w0)
        }
    }
}

/// Distance from `q` to the path, approximated by `resolution` samples over
/// the parameter hint plus local golden-section refinement.
pub fn distance_to_path(q: &Vector2<f64>, path: &ParametricPath, resolution: usize) -> f64 {
    PathSampler::new(path, resolution).distance(q)
}

/// Distance from `p` to the lifted path `{(f1(w), f2(w), w)}` and the
/// parameter of the closest point found.
///
/// The lifted path point at `w` is at least `|p.z - w|` away, so the search
/// only needs the window `|w - p.z| <= ||p - lifted(p.z)||`.
pub fn distance_to_lifted(p: &Vector3<f64>, path: &ParametricPath, resolution: usize) -> (f64, f64) {
    let lifted = |w: f64| {
        let c = path.point(w);
        Vector3::new(c.x, c.y, w)
    };
    let radius = (p - lifted(p.z)).norm();
    if radius == 0.0 {
        return (0.0, p.z);
    }
    let n = resolution.max(2);
    let (lo, hi) = (p.z - radius, p.z + radius);
    let step = (hi - lo) / (n - 1) as f64;
    let mut best = (radius, p.z);
    for i in 0..n {
        let w = lo + step * i as f64;
        let d = (p - lifted(w)).norm();
        if d < best.0 {
            best = (d, w);
        }
    }
    let refined = golden_min(|w| (p - lifted(w)).norm(), best.1 - step, best.1 + step, 60);
    if refined.0 < best.0 {
        refined
    } else {
        best
    }
}

/// Golden-section minimisation on `[a, b]`; returns `(f(x*), x*)`.
pub fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    let mut c = b - GOLDEN * (b - a);
    let mut d = a + GOLDEN * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..iters {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - GOLDEN * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + GOLDEN * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (fc, c)
    } else {
        (fd, d)
    }
}
