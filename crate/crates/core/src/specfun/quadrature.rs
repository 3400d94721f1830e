//! Quadrature engines.
//!
//! * [`GaussHermite`]: fixed-order rule for integrands that decay like a
//!   Gaussian. Fast, but converges slowly when the integrand carries a
//!   feature much narrower than the node spacing.
//! * [`TanhSinh`]: double-exponential rule on finite intervals (and a
//!   sinh-sinh variant on the real line) with level-by-level refinement.
//!   Nodes cluster double-exponentially at the endpoints, so a near-singular
//!   feature placed at an endpoint is resolved down to widths of ~1e-100.

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadScheme {
    GaussHermite,
    TanhSinh,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub scheme: QuadScheme,
    /// Node count for Gauss-Hermite (the check rule uses twice as many).
    /// Tanh-sinh refines adaptively and ignores it.
    pub nodes: usize,
    /// Relative tolerance on the node-doubling / level-refinement difference.
    pub tol: f64,
}

impl QuadratureSpec {
    pub fn gauss_hermite(nodes: usize, tol: f64) -> Self {
        Self { scheme: QuadScheme::GaussHermite, nodes, tol }
    }

    pub fn tanh_sinh(tol: f64) -> Self {
        Self { scheme: QuadScheme::TanhSinh, nodes: 200, tol }
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes < 8 {
            return Err(Error::param("nodes", format!("need at least 8 nodes, got {}", self.nodes)));
        }
        if !(self.tol > 0.0) || !self.tol.is_finite() {
            return Err(Error::param("tol", format!("must be positive and finite, got {}", self.tol)));
        }
        Ok(())
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self::tanh_sinh(1e-12)
    }
}

/// A quadrature value with the difference between the last two refinements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadEstimate {
    pub value: f64,
    pub error: f64,
}

// ---------------------------------------------------------------------------
// Gauss-Hermite

/// Gauss-Hermite rule stored with "plain" weights `W_i = w_i e^{x_i²}`, so
/// that `∫ f(x) dx ≈ Σ W_i f(x_i)` for Gaussian-decaying `f`.
#[derive(Debug, Clone)]
pub struct GaussHermite {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussHermite {
    /// Cached rule of order `n`.
    pub fn get(n: usize) -> Arc<GaussHermite> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussHermite>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut map = cache.lock().expect("gauss-hermite cache poisoned");
        map.entry(n).or_insert_with(|| Arc::new(GaussHermite::new(n))).clone()
    }

    /// Nodes from the eigenvalues of the Jacobi matrix (Golub-Welsch), each
    /// polished by Newton steps on the orthonormal Hermite functions
    /// `ψ_k(x) = p_k(x) e^{-x²/2}`; the plain weight is `1/(n ψ_{n-1}(x_i)²)`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let nf = n as f64;
        let jacobi = DMatrix::from_fn(n, n, |i, j| if i.abs_diff(j) == 1 { (i.max(j) as f64 / 2.0).sqrt() } else { 0.0 });
        let mut nodes: Vec<f64> = jacobi.symmetric_eigenvalues().iter().copied().collect();
        nodes.sort_by(|a, b| a.total_cmp(b));
        // exact symmetry; the polish runs on the non-negative half
        for i in 0..n / 2 {
            let z = 0.5 * (nodes[n - 1 - i] - nodes[i]);
            nodes[i] = -z;
            nodes[n - 1 - i] = z;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        let mut weights = vec![0.0; n];
        for i in n / 2..n {
            let mut z = nodes[i];
            for _ in 0..8 {
                let (pn, pn1) = hermite_pair(n, z);
                let dz = pn / ((2.0 * nf).sqrt() * pn1);
                z -= dz;
                if dz.abs() <= 1e-15 * z.abs().max(1.0) {
                    break;
                }
            }
            if n % 2 == 1 && i == n / 2 {
                z = 0.0;
            }
            let (_, pn1) = hermite_pair(n, z);
            let w = 1.0 / (nf * pn1 * pn1);
            nodes[i] = z;
            weights[i] = w;
            nodes[n - 1 - i] = -z;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

// (ψ_n(x), ψ_{n-1}(x)) for the weight-free orthonormal Hermite functions.
fn hermite_pair(n: usize, x: f64) -> (f64, f64) {
    let mut log_scale = -0.5 * x * x;
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25);
    for k in 0..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > 1e150 {
            cur *= 1e-150;
            prev *= 1e-150;
            log_scale += 1e150f64.ln();
        }
    }
    let f = log_scale.exp();
    (cur * f, prev * f)
}

// ---------------------------------------------------------------------------
// Tanh-sinh

/// Evaluation point handed to tanh-sinh integrands. The distances to both
/// endpoints are exact even when they are far below the resolution of `x`.
#[derive(Debug, Clone, Copy)]
pub struct Node {
    pub x: f64,
    pub from_a: f64,
    pub from_b: f64,
}

struct LevelNode {
    /// 1 - tanh(π/2 sinh s)
    offset: f64,
    /// (π/2) cosh s / cosh²(π/2 sinh s)
    weight: f64,
}

const MAX_LEVEL: usize = 12;
const S_MAX: f64 = 6.0;

fn level_table() -> &'static Vec<Vec<LevelNode>> {
    static TABLE: OnceLock<Vec<Vec<LevelNode>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        (0..=MAX_LEVEL)
            .map(|level| {
                let h = 0.5f64.powi(level as i32);
                let (start, step) = if level == 0 { (1usize, 1usize) } else { (1, 2) };
                let mut nodes = Vec::new();
                let mut k = start;
                loop {
                    let s = k as f64 * h;
                    if s > S_MAX {
                        break;
                    }
                    let u = FRAC_PI_2 * s.sinh();
                    let e = (-2.0 * u).exp();
                    let offset = 2.0 * e / (1.0 + e);
                    let weight = FRAC_PI_2 * s.cosh() * 4.0 * e / ((1.0 + e) * (1.0 + e));
                    if weight > 0.0 && offset > 0.0 {
                        nodes.push(LevelNode { offset, weight });
                    }
                    k += step;
                }
                nodes
            })
            .collect()
    })
}

/// Tanh-sinh integrator with a relative tolerance.
#[derive(Debug, Clone, Copy)]
pub struct TanhSinh {
    pub tol: f64,
    pub min_level: usize,
    pub max_level: usize,
}

impl TanhSinh {
    pub fn new(tol: f64) -> Self {
        Self { tol, min_level: 3, max_level: MAX_LEVEL }
    }

    /// Integrates a vector-valued function over `[a, b]`. The closure writes
    /// the `dim` integrand components at the given node into its buffer.
    /// Convergence compares the change between levels with the largest
    /// `∫|f_i|`, so components that integrate to zero do not stall it.
    pub fn integrate_vec(
        &self,
        dim: usize,
        a: f64,
        b: f64,
        mut f: impl FnMut(Node, &mut [f64]),
    ) -> Result<(Vec<f64>, f64)> {
        if !(b > a) {
            return Ok((vec![0.0; dim], 0.0));
        }
        let half = 0.5 * (b - a);
        let mid = a + half;
        let mut buf = vec![0.0; dim];
        let mut sum = vec![0.0; dim];
        let mut abs_sum = vec![0.0; dim];
        let accumulate = |weight: f64, buf: &[f64], sum: &mut [f64], abs_sum: &mut [f64]| {
            for ((s, m), v) in sum.iter_mut().zip(abs_sum.iter_mut()).zip(buf) {
                *s += weight * v;
                *m += weight * v.abs();
            }
        };
        f(Node { x: mid, from_a: half, from_b: half }, &mut buf);
        accumulate(FRAC_PI_2, &buf, &mut sum, &mut abs_sum);
        let mut sample = |offset: f64, weight: f64, sum: &mut [f64], abs_sum: &mut [f64], buf: &mut [f64]| {
            let d = half * offset;
            f(Node { x: a + d, from_a: d, from_b: (b - a) - d }, buf);
            accumulate(weight, buf, sum, abs_sum);
            f(Node { x: b - d, from_a: (b - a) - d, from_b: d }, buf);
            accumulate(weight, buf, sum, abs_sum);
        };
        let table = level_table();
        let mut h = 1.0;
        let mut prev: Option<Vec<f64>> = None;
        let mut err = f64::INFINITY;
        let top = self.max_level.min(MAX_LEVEL);
        for level in 0..=top {
            if level > 0 {
                h *= 0.5;
            }
            for node in &table[level] {
                sample(node.offset, node.weight, &mut sum, &mut abs_sum, &mut buf);
            }
            let est: Vec<f64> = sum.iter().map(|s| s * h * half).collect();
            if let Some(p) = &prev {
                let scale = abs_sum.iter().fold(0.0f64, |m, v| m.max(v * h * half));
                err = est.iter().zip(p).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
                if level >= self.min_level && (err <= self.tol * scale || scale == 0.0) {
                    return Ok((est, err));
                }
            }
            prev = Some(est);
        }
        let est = prev.unwrap_or_default();
        let scale = est.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        Err(Error::QuadratureNotConverged { estimate: scale, error: err, tol: self.tol })
    }

    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(Node) -> f64) -> Result<QuadEstimate> {
        let (v, error) = self.integrate_vec(1, a, b, |node, out| out[0] = f(node))?;
        Ok(QuadEstimate { value: v[0], error })
    }

    /// Sinh-sinh rule on `(-∞, ∞)`: `x = sinh(π/2 sinh s)`.
    pub fn integrate_real_line(&self, f: impl Fn(f64) -> f64) -> Result<QuadEstimate> {
        const S_LINE: f64 = 4.0;
        let point = |s: f64| {
            let u = FRAC_PI_2 * s.sinh();
            let w = FRAC_PI_2 * s.cosh() * u.cosh();
            let x = u.sinh();
            let v = f(x);
            if v == 0.0 {
                (0.0, 0.0)
            } else {
                (w * v, w * v.abs())
            }
        };
        let (mut sum, mut abs_sum) = point(0.0);
        let add = |s: f64, sum: &mut f64, abs_sum: &mut f64| {
            for p in [point(s), point(-s)] {
                *sum += p.0;
                *abs_sum += p.1;
            }
        };
        let mut h = 1.0;
        let mut k = 1;
        while k as f64 <= S_LINE {
            add(k as f64, &mut sum, &mut abs_sum);
            k += 1;
        }
        let mut prev = sum * h;
        let mut err = f64::INFINITY;
        for level in 1..=self.max_level {
            h *= 0.5;
            let mut k = 1usize;
            loop {
                let s = k as f64 * h;
                if s > S_LINE {
                    break;
                }
                add(s, &mut sum, &mut abs_sum);
                k += 2;
            }
            let est = sum * h;
            err = (est - prev).abs();
            if level >= self.min_level && err <= self.tol * abs_sum * h {
                return Ok(QuadEstimate { value: est, error: err });
            }
            prev = est;
        }
        Err(Error::QuadratureNotConverged { estimate: prev, error: err, tol: self.tol })
    }
}

// ---------------------------------------------------------------------------
// Generic entry points over the real line / plane

/// `∫_{-∞}^{∞} f(q) dq` with the scheme selected by `spec`.
///
/// Gauss-Hermite compares `nodes` against `2·nodes` and fails when the two
/// differ by more than `tol` relative; tanh-sinh refines until successive
/// levels agree.
pub fn integrate_1d(f: impl Fn(f64) -> f64, spec: &QuadratureSpec) -> Result<QuadEstimate> {
    spec.validate()?;
    match spec.scheme {
        QuadScheme::GaussHermite => {
            let coarse = GaussHermite::get(spec.nodes).integrate(&f);
            let rule = GaussHermite::get(2 * spec.nodes);
            doubled(coarse, rule.integrate(&f), rule.integrate(|x| f(x).abs()), spec.tol)
        }
        QuadScheme::TanhSinh => TanhSinh::new(spec.tol).integrate_real_line(f),
    }
}

/// `∫∫ f(q, q̄) dq dq̄` over the plane as a tensor product of the 1D rules.
pub fn integrate_2d(f: impl Fn(f64, f64) -> f64, spec: &QuadratureSpec) -> Result<QuadEstimate> {
    spec.validate()?;
    match spec.scheme {
        QuadScheme::GaussHermite => {
            let tensor = |rule: &GaussHermite, g: &dyn Fn(f64, f64) -> f64| {
                rule.nodes
                    .iter()
                    .zip(&rule.weights)
                    .map(|(&y, &wy)| wy * rule.integrate(|x| g(x, y)))
                    .sum::<f64>()
            };
            let coarse = tensor(&GaussHermite::get(spec.nodes), &f);
            let rule = GaussHermite::get(2 * spec.nodes);
            doubled(coarse, tensor(&rule, &f), tensor(&rule, &|x, y| f(x, y).abs()), spec.tol)
        }
        QuadScheme::TanhSinh => {
            let outer = TanhSinh::new(spec.tol);
            let inner = TanhSinh::new(spec.tol * 0.1);
            let failure = std::cell::RefCell::new(None);
            let est = outer.integrate_real_line(|y| match inner.integrate_real_line(|x| f(x, y)) {
                Ok(v) => v.value,
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    f64::NAN
                }
            });
            match (est, failure.into_inner()) {
                (_, Some(e)) => Err(e),
                (r, None) => r,
            }
        }
    }
}

// `magnitude` is `∫|f|` on the fine rule.
fn doubled(coarse: f64, fine: f64, magnitude: f64, tol: f64) -> Result<QuadEstimate> {
    let error = (fine - coarse).abs();
    if error <= tol * magnitude || error == 0.0 {
        Ok(QuadEstimate { value: fine, error })
    } else {
        Err(Error::QuadratureNotConverged { estimate: fine, error, tol })
    }
}
