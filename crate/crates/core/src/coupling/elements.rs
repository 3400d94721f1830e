//! Matrix elements of the potential in the two-mode Fock basis.
//!
//! Reference path: the defining double integral over `(q, q̄)`.
//! Production path: rotate to `(u, v)`; the potential depends on `u` only,
//! so every element reduces to the one-dimensional kernel
//! `J_{a'a}(ε) = ∫ h_{a'}(t) h_a(t) / √(2t² + ε²) dt` over unit-width
//! oscillator functions, combined with the rotation coefficients.

use std::f64::consts::SQRT_2;

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::{product_index, RotatedBasisMap};
use crate::specfun::hermite::hermite_functions;
use crate::specfun::quadrature::{GaussHermite, Node, TanhSinh};
use crate::{Error, ModeParams, QuadScheme, QuadratureSpec, Result, TruncationSpec};

/// A first-order coefficient `γ_{n n̄} = scale · reduced`, with
/// `scale = x²` carrying the whole frequency dependence of the prefactor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaElement {
    pub reduced: f64,
    pub scale: f64,
    /// Quadrature error indicator on `reduced`.
    pub error: f64,
}

impl GammaElement {
    pub fn value(&self) -> f64 {
        self.scale * self.reduced
    }
}

/// Half-width (unit-width coordinate) beyond which products of oscillator
/// functions up to index `a_max` are negligible.
fn cutoff(a_max: usize) -> f64 {
    2.0 * (a_max as f64 + 0.5).sqrt() + 12.0
}

// ---------------------------------------------------------------------------
// One-dimensional kernel

/// `J_{a0}(ε)` for `a = 0..=a_max`; odd entries are exactly zero.
pub fn reduced_kernel_column(eps: f64, a_max: usize, spec: &QuadratureSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    let evens: Vec<usize> = (0..=a_max).step_by(2).collect();
    let mut h = vec![0.0; a_max + 1];
    let vals = kernel_integral(eps, a_max, evens.len(), spec, |t, weight, out| {
        hermite_functions(t, &mut h);
        let w = weight * h[0];
        for (o, &a) in out.iter_mut().zip(&evens) {
            *o = w * h[a];
        }
    })?;
    let mut col = vec![0.0; a_max + 1];
    for (&a, v) in evens.iter().zip(vals) {
        col[a] = v;
    }
    Ok(col)
}

/// Symmetric `J_{a'a}(ε)` for `a, a' ≤ a_max`; entries with odd `a + a'`
/// are exactly zero.
pub fn reduced_kernel_matrix(eps: f64, a_max: usize, spec: &QuadratureSpec) -> Result<DMatrix<f64>> {
    spec.validate()?;
    let pairs: Vec<(usize, usize)> =
        (0..=a_max).flat_map(|i| (i..=a_max).filter(move |j| (i + j) % 2 == 0).map(move |j| (i, j))).collect();
    let mut h = vec![0.0; a_max + 1];
    let vals = kernel_integral(eps, a_max, pairs.len(), spec, |t, weight, out| {
        hermite_functions(t, &mut h);
        for (o, &(i, j)) in out.iter_mut().zip(&pairs) {
            *o = weight * h[i] * h[j];
        }
    })?;
    let mut m = DMatrix::zeros(a_max + 1, a_max + 1);
    for (&(i, j), v) in pairs.iter().zip(vals) {
        m[(i, j)] = v;
        m[(j, i)] = v;
    }
    Ok(m)
}

/// Integrates `fill(t, 1/√(2t² + ε²), out)` over the real line for even
/// integrands, using the scheme in `spec`.
fn kernel_integral(
    eps: f64,
    a_max: usize,
    dim: usize,
    spec: &QuadratureSpec,
    mut fill: impl FnMut(f64, f64, &mut [f64]),
) -> Result<Vec<f64>> {
    let kernel = |t: f64| 1.0 / (SQRT_2 * t).hypot(eps);
    match spec.scheme {
        QuadScheme::TanhSinh => {
            // [0, 1] carries the near-cusp at the origin on an endpoint;
            // the remainder is split into unit panels to resolve oscillations.
            let ts = TanhSinh::new(spec.tol);
            let end = cutoff(a_max).ceil();
            let mut total = vec![0.0; dim];
            let mut lo = 0.0;
            while lo < end {
                let hi = lo + 1.0;
                let (part, _) = ts.integrate_vec(dim, lo, hi, |node: Node, out| {
                    let t = if lo == 0.0 { node.from_a } else { node.x };
                    fill(t, kernel(t), out);
                })?;
                for (acc, p) in total.iter_mut().zip(part) {
                    *acc += 2.0 * p;
                }
                lo = hi;
            }
            Ok(total)
        }
        QuadScheme::GaussHermite => {
            let mut run = |n: usize| {
                let rule = GaussHermite::get(n);
                let mut acc = vec![0.0; dim];
                let mut buf = vec![0.0; dim];
                for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
                    let t = SQRT_2 * x;
                    fill(t, kernel(t), &mut buf);
                    for (a, b) in acc.iter_mut().zip(&buf) {
                        *a += SQRT_2 * w * b;
                    }
                }
                acc
            };
            let coarse = run(spec.nodes);
            let fine = run(2 * spec.nodes);
            check_doubling(&coarse, &fine, spec.tol)?;
            Ok(fine)
        }
    }
}

fn check_doubling(coarse: &[f64], fine: &[f64], tol: f64) -> Result<()> {
    let scale = fine.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let error = coarse.iter().zip(fine).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    if error <= tol * scale {
        Ok(())
    } else {
        Err(Error::QuadratureNotConverged { estimate: scale, error, tol })
    }
}

// ---------------------------------------------------------------------------
// Two-dimensional reference

/// `⟨Θ_{m m̄}|𝒰|Θ_{n n̄}⟩ / ħω` evaluated as the defining double integral.
///
/// With tanh-sinh the inner integral over `t` is split at `t = t̄` so the
/// near-cusp of the potential always sits on an interval endpoint.
/// Gauss-Hermite uses a plain tensor rule with a node-doubling check.
pub fn matrix_element_2d(
    bra: (usize, usize),
    ket: (usize, usize),
    params: &ModeParams,
    spec: &QuadratureSpec,
) -> Result<(f64, f64)> {
    spec.validate()?;
    let eps = params.lc_over_beta();
    let top = bra.0.max(bra.1).max(ket.0).max(ket.1);
    let prefactor = -params.omega * params.omega * SQRT_2;
    if (bra.0 + bra.1 + ket.0 + ket.1) % 2 == 1 {
        return Ok((0.0, 0.0));
    }
    let mut hq = vec![0.0; top + 1];
    let mut hqb = vec![0.0; top + 1];
    let (value, error) = match spec.scheme {
        QuadScheme::TanhSinh => {
            let half = cutoff(top);
            let outer = TanhSinh::new(spec.tol);
            let inner = TanhSinh::new(spec.tol * 0.1);
            let mut h_in = vec![0.0; top + 1];
            let mut failure: Option<Error> = None;
            // the integrand is even under (t, t̄) → (-t, -t̄) once the total
            // parity is even, so the outer integral covers t̄ ≥ 0 only
            let est = outer.integrate(0.0, half, |ob| {
                let tb = ob.x;
                hermite_functions(tb, &mut hqb);
                let clone_part = hqb[bra.1] * hqb[ket.1];
                let mut piece = |lo: f64, hi: f64, left: bool| {
                    inner.integrate(lo, hi, |n| {
                        let dist = if left { n.from_b } else { n.from_a };
                        hermite_functions(n.x, &mut h_in);
                        h_in[bra.0] * h_in[ket.0] / dist.hypot(eps)
                    })
                };
                let sum = piece(-half, tb, true).and_then(|l| piece(tb, half, false).map(|r| l.value + r.value));
                match sum {
                    Ok(v) => clone_part * v,
                    Err(e) => {
                        failure.get_or_insert(e);
                        0.0
                    }
                }
            });
            if let Some(e) = failure {
                return Err(e);
            }
            let est = est?;
            (2.0 * est.value, 2.0 * est.error)
        }
        QuadScheme::GaussHermite => {
            let mut run = |n: usize| {
                let rule = GaussHermite::get(n);
                let mut acc = 0.0;
                for (&y, &wy) in rule.nodes.iter().zip(&rule.weights) {
                    let tb = SQRT_2 * y;
                    hermite_functions(tb, &mut hqb);
                    let clone_part = hqb[bra.1] * hqb[ket.1];
                    for (&x, &wx) in rule.nodes.iter().zip(&rule.weights) {
                        let t = SQRT_2 * x;
                        hermite_functions(t, &mut hq);
                        acc += 2.0 * wx * wy * clone_part * hq[bra.0] * hq[ket.0] / (t - tb).hypot(eps);
                    }
                }
                acc
            };
            let coarse = run(spec.nodes);
            let fine = run(2 * spec.nodes);
            check_doubling(&[coarse], &[fine], spec.tol)?;
            (fine, (fine - coarse).abs())
        }
    };
    Ok((prefactor * value, prefactor.abs() * error))
}

fn shell_of(n: usize, nbar: usize) -> Result<usize> {
    match n + nbar {
        0 => Err(Error::param("(n, nbar)", "the unperturbed ground state has no first-order coefficient")),
        s => Ok(s),
    }
}

/// `γ_{n n̄} = ⟨Θ_{n n̄}|𝒰|Θ₀₀⟩ / (𝒲₀₀ - 𝒲_{n n̄})` from the double integral.
/// The energy denominator is `-ħω(n + n̄)`.
pub fn gamma_element(n: usize, nbar: usize, params: &ModeParams, spec: &QuadratureSpec) -> Result<GammaElement> {
    let shell = shell_of(n, nbar)?;
    let scale = params.omega * params.omega;
    if shell % 2 == 1 {
        return Ok(GammaElement { reduced: 0.0, scale, error: 0.0 });
    }
    let (value, error) = matrix_element_2d((n, nbar), (0, 0), params, spec)?;
    // value = -x²√2 K  ⇒  γ = x² · √2 K / N
    let denom = -(shell as f64) * scale;
    Ok(GammaElement { reduced: value / denom, scale, error: error / denom.abs() })
}

/// Same coefficient through the rotated basis: `γ_{n n̄} = x² √2 R^{(n,n̄)}_{N,0} J_{N0} / N`.
pub fn gamma_element_reduced(
    n: usize,
    nbar: usize,
    params: &ModeParams,
    spec: &QuadratureSpec,
) -> Result<GammaElement> {
    let shell = shell_of(n, nbar)?;
    let scale = params.omega * params.omega;
    if shell % 2 == 1 {
        return Ok(GammaElement { reduced: 0.0, scale, error: 0.0 });
    }
    let map = RotatedBasisMap::new(n.max(nbar));
    let column = reduced_kernel_column(params.lc_over_beta(), shell, spec)?;
    let r = map.coeff(n, nbar, shell, 0);
    Ok(GammaElement { reduced: SQRT_2 * r * column[shell] / shell as f64, scale, error: 0.0 })
}

/// `⟨Θ_{n n̄}|𝒰|Θ₀₀⟩ / (x² ħω)` for every `n, n̄ ≤ n_max`, indexed by
/// [`product_index`]. Multiply by `x²` for the physical value.
pub fn potential_column(params: &ModeParams, n_max: usize, spec: &QuadratureSpec) -> Result<Vec<f64>> {
    let map = RotatedBasisMap::new(n_max);
    let column = reduced_kernel_column(params.lc_over_beta(), 2 * n_max, spec)?;
    let dim = n_max + 1;
    let mut out = vec![0.0; dim * dim];
    for n in 0..dim {
        for k in (0..dim).filter(|k| (n + k) % 2 == 0) {
            let shell = n + k;
            out[product_index(n, k, n_max)] = -SQRT_2 * map.coeff(n, k, shell, 0) * column[shell];
        }
    }
    Ok(out)
}

/// Full `⟨Θ_{m m̄}|𝒰|Θ_{n n̄}⟩ / ħω` on the product basis `{0..=n_max}²`.
///
/// Elements between states of different total parity are skipped and left
/// exactly zero. Each element is a fixed-order sum, so the result does not
/// depend on thread scheduling.
pub fn potential_matrix(params: &ModeParams, trunc: &TruncationSpec, spec: &QuadratureSpec) -> Result<DMatrix<f64>> {
    trunc.validate()?;
    let n_max = trunc.n_max;
    let dim = n_max + 1;
    let map = RotatedBasisMap::new(n_max);
    let kernel = reduced_kernel_matrix(params.lc_over_beta(), 2 * n_max, spec)?;
    let prefactor = -params.omega * params.omega * SQRT_2;
    let states: Vec<(usize, usize)> = (0..dim).flat_map(|n| (0..dim).map(move |k| (n, k))).collect();

    let rows: Vec<Vec<(usize, f64)>> = states
        .par_iter()
        .enumerate()
        .map(|(i, &(m, mb))| {
            let bra_shell = m + mb;
            let bra = map.shell(m, mb);
            let mut row = Vec::new();
            for (j, &(n, nb)) in states.iter().enumerate().skip(i) {
                let ket_shell = n + nb;
                if (bra_shell + ket_shell) % 2 == 1 {
                    continue;
                }
                let ket = map.shell(n, nb);
                // shared v-quantum b: a' = M - b, a = N - b
                let mut acc = 0.0;
                for b in 0..=bra_shell.min(ket_shell) {
                    let ap = bra_shell - b;
                    let a = ket_shell - b;
                    acc += bra[ap] * ket[a] * kernel[(ap, a)];
                }
                row.push((j, prefactor * acc));
            }
            row
        })
        .collect();

    let mut out = DMatrix::zeros(dim * dim, dim * dim);
    for (i, row) in rows.into_iter().enumerate() {
        for (j, v) in row {
            out[(i, j)] = v;
            out[(j, i)] = v;
        }
    }
    Ok(out)
}
