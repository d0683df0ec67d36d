//! Gauss–Legendre panels and order-stable reductions.
//!
//! Every parallel reduction in the crate goes through [`pairwise_sum`] on a
//! vector whose order is fixed by the panel layout, so results do not depend
//! on the number of rayon workers.

use num_complex::Complex;
use rayon::prelude::*;

use crate::scalar::Real;

/// Default per-panel order.
pub const DEFAULT_ORDER: usize = 16;

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    /// Builds the `order`-point rule. Nodes are found in `f64` by Newton
    /// iteration on the Legendre recurrence and then narrowed to `T`.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss-Legendre order must be positive");
        let n = order;
        let mut nodes = vec![0.0f64; n];
        let mut weights = vec![0.0f64; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self {
            nodes: nodes.into_iter().map(T::lit).collect(),
            weights: weights.into_iter().map(T::lit).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Nodes and weights mapped onto `[a, b]`.
    pub fn mapped(&self, a: T, b: T) -> impl Iterator<Item = (T, T)> + '_ {
        let half = (b - a) / T::lit(2.0);
        let mid = (a + b) / T::lit(2.0);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    /// Single-panel integral of a complex integrand over `[a, b]`.
    pub fn integrate<F>(&self, a: T, b: T, mut f: F) -> Complex<T>
    where
        F: FnMut(T) -> Complex<T>,
    {
        self.mapped(a, b)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (x, w)| acc + f(x) * w)
    }

    /// Single-panel integral of a real integrand over `[a, b]`.
    pub fn integrate_real<F>(&self, a: T, b: T, mut f: F) -> T
    where
        F: FnMut(T) -> T,
    {
        self.mapped(a, b).fold(T::zero(), |acc, (x, w)| acc + f(x) * w)
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Pairwise (cascade) summation in the order given.
pub fn pairwise_sum<T: Real>(values: &[Complex<T>]) -> Complex<T> {
    const LEAF: usize = 8;
    if values.len() <= LEAF {
        return values
            .iter()
            .fold(Complex::new(T::zero(), T::zero()), |acc, &v| acc + v);
    }
    let (lo, hi) = values.split_at(values.len() / 2);
    pairwise_sum(lo) + pairwise_sum(hi)
}

/// Panel edges covering `[breaks[0], breaks[last]]`: each gap between
/// consecutive break points is split into equal panels no wider than
/// `max_width`.
pub fn panel_edges<T: Real>(breaks: &[T], max_width: T) -> Vec<T> {
    assert!(breaks.len() >= 2, "need at least two break points");
    assert!(max_width > T::zero(), "panel width must be positive");
    let mut edges = vec![breaks[0]];
    for pair in breaks.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let len = b - a;
        if len <= T::zero() {
            continue;
        }
        let count = (len / max_width).ceil().to_usize().unwrap_or(1).max(1);
        let step = len / T::from_count(count);
        for j in 1..count {
            edges.push(a + step * T::from_count(j));
        }
        edges.push(b);
    }
    edges
}

/// Composite integral over consecutive panels, evaluated in parallel and
/// reduced pairwise in panel order.
pub fn par_composite<T, F>(rule: &GaussLegendre<T>, edges: &[T], f: F) -> Complex<T>
where
    T: Real,
    F: Fn(T) -> Complex<T> + Sync,
{
    let panel_sums: Vec<Complex<T>> = edges
        .par_windows(2)
        .map(|w| rule.integrate(w[0], w[1], &f))
        .collect();
    pairwise_sum(&panel_sums)
}

/// Sequential composite integral with `panels` equal panels on `[a, b]`.
pub fn composite<T, F>(rule: &GaussLegendre<T>, a: T, b: T, panels: usize, mut f: F) -> Complex<T>
where
    T: Real,
    F: FnMut(T) -> Complex<T>,
{
    let panels = panels.max(1);
    let step = (b - a) / T::from_count(panels);
    let sums: Vec<Complex<T>> = (0..panels)
        .map(|j| {
            let lo = a + step * T::from_count(j);
            let hi = if j + 1 == panels { b } else { lo + step };
            rule.integrate(lo, hi, &mut f)
        })
        .collect();
    pairwise_sum(&sums)
}
