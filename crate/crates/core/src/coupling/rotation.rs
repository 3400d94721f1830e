//! Product states of mode and clone re-expressed in the relative and
//! centre-of-mass coordinates `u = (q - q̄)/√2`, `v = (q + q̄)/√2`.
//!
//! For equal frequencies the rotation maps the shell `n + n̄ = N` onto itself:
//! `φ_n(q) φ_n̄(q̄) = Σ_{a+b=N} R^{(n,n̄)}_{a,b} ψ_a(u) ψ_b(v)`. The
//! coefficients are built by applying the creation operators
//! `a_q† = (a_u† + a_v†)/√2` and `a_q̄† = (a_v† - a_u†)/√2` one quantum at a
//! time, which keeps every intermediate vector normalized.

#[derive(Debug, Clone)]
pub struct RotatedBasisMap {
    n_max: usize,
    // coeffs[n * (n_max + 1) + n̄][a] = R^{(n,n̄)}_{a, n+n̄-a}
    coeffs: Vec<Vec<f64>>,
}

impl RotatedBasisMap {
    pub fn new(n_max: usize) -> Self {
        let dim = n_max + 1;
        let mut coeffs = vec![Vec::new(); dim * dim];
        coeffs[0] = vec![1.0];
        // Raising the smaller index divides by a small norm and amplifies
        // rounding errors exponentially in the shell, so only n ≥ n̄ is built
        // by recurrence and the rest follows from exchange q ↔ q̄ (u → -u).
        for n in 1..=n_max {
            for k in 0..n {
                coeffs[n * dim + k] = raise_mode(&coeffs[(n - 1) * dim + k], n - 1);
            }
            coeffs[n * dim + n] = raise_clone(&coeffs[n * dim + n - 1], n - 1);
            for k in 0..n {
                let swapped = coeffs[n * dim + k].iter().enumerate().map(|(a, &c)| if a % 2 == 0 { c } else { -c }).collect();
                coeffs[k * dim + n] = swapped;
            }
        }
        Self { n_max, coeffs }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// All coefficients `R^{(n,n̄)}_{a, N-a}` for `a = 0..=N`.
    pub fn shell(&self, n: usize, nbar: usize) -> &[f64] {
        &self.coeffs[n * (self.n_max + 1) + nbar]
    }

    /// `R^{(n,n̄)}_{a,b}`; zero off the shell `a + b = n + n̄`.
    pub fn coeff(&self, n: usize, nbar: usize, a: usize, b: usize) -> f64 {
        if a + b != n + nbar {
            return 0.0;
        }
        self.shell(n, nbar)[a]
    }
}

// |n+1, n̄⟩ = (a_u† + a_v†)/√(2(n+1)) |n, n̄⟩
fn raise_mode(src: &[f64], n: usize) -> Vec<f64> {
    let shell = src.len() - 1;
    let norm = (2.0 * (n as f64 + 1.0)).sqrt();
    (0..=shell + 1)
        .map(|a| {
            let from_u = if a >= 1 { (a as f64).sqrt() * src[a - 1] } else { 0.0 };
            let from_v = if a <= shell { ((shell + 1 - a) as f64).sqrt() * src[a] } else { 0.0 };
            (from_u + from_v) / norm
        })
        .collect()
}

// |n, n̄+1⟩ = (a_v† - a_u†)/√(2(n̄+1)) |n, n̄⟩
fn raise_clone(src: &[f64], nbar: usize) -> Vec<f64> {
    let shell = src.len() - 1;
    let norm = (2.0 * (nbar as f64 + 1.0)).sqrt();
    (0..=shell + 1)
        .map(|a| {
            let from_u = if a >= 1 { (a as f64).sqrt() * src[a - 1] } else { 0.0 };
            let from_v = if a <= shell { ((shell + 1 - a) as f64).sqrt() * src[a] } else { 0.0 };
            (from_v - from_u) / norm
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::hermite::hermite_functions;
    use crate::specfun::quadrature::GaussHermite;
    use std::f64::consts::SQRT_2;

    fn ln_binomial(n: usize, k: usize) -> f64 {
        let lf = |m: usize| (1..=m).map(|i| (i as f64).ln()).sum::<f64>();
        lf(n) - lf(k) - lf(n - k)
    }

    #[test]
    fn ground_state_is_invariant() {
        let map = RotatedBasisMap::new(3);
        assert_eq!(map.shell(0, 0), &[1.0]);
    }

    #[test]
    fn orthonormal_within_shells() {
        let n_max = 64;
        let map = RotatedBasisMap::new(n_max);
        for shell in 0..=2 * n_max {
            let lo = shell.saturating_sub(n_max);
            for n in lo..=shell.min(n_max) {
                for m in lo..=shell.min(n_max) {
                    let dot: f64 = map.shell(n, shell - n).iter().zip(map.shell(m, shell - m)).map(|(x, y)| x * y).sum();
                    let want = if n == m { 1.0 } else { 0.0 };
                    assert!((dot - want).abs() < 1e-12, "shell {shell}: ({n},{m}) -> {dot}");
                }
            }
        }
    }

    #[test]
    fn relative_coordinate_top_component() {
        // R^{(n,n̄)}_{N,0} = (-1)^n̄ √C(N,n) 2^{-N/2}
        let n_max = 80;
        let map = RotatedBasisMap::new(n_max);
        for n in 0..=n_max {
            for k in 0..=n_max {
                let shell = n + k;
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                let want = sign * (0.5 * ln_binomial(shell, n) - 0.5 * shell as f64 * 2f64.ln()).exp();
                let got = map.coeff(n, k, shell, 0);
                assert!((got - want).abs() < 1e-12 * want.abs().max(1e-30) + 1e-16, "({n},{k}): {got} vs {want}");
            }
        }
    }

    #[test]
    fn matches_direct_overlap_integrals() {
        // ∫∫ h_n(t) h_n̄(t̄) h_a((t-t̄)/√2) h_b((t+t̄)/√2) dt dt̄ by Gauss-Hermite,
        // exact for these polynomial-times-Gaussian integrands.
        let n_max = 6;
        let map = RotatedBasisMap::new(n_max);
        let rule = GaussHermite::new(40);
        let len = 2 * n_max + 1;
        let mut hq = vec![0.0; len];
        let mut hqb = vec![0.0; len];
        let mut hu = vec![0.0; len];
        let mut hv = vec![0.0; len];
        let mut overlap = vec![0.0; len.pow(4)];
        let at = |i: usize, j: usize, a: usize, b: usize| ((i * len + j) * len + a) * len + b;
        for (&x, &wx) in rule.nodes.iter().zip(&rule.weights) {
            for (&y, &wy) in rule.nodes.iter().zip(&rule.weights) {
                let (t, tb) = (SQRT_2 * x, SQRT_2 * y);
                hermite_functions(t, &mut hq);
                hermite_functions(tb, &mut hqb);
                hermite_functions((t - tb) / SQRT_2, &mut hu);
                hermite_functions((t + tb) / SQRT_2, &mut hv);
                let w = 2.0 * wx * wy;
                for i in 0..=n_max {
                    for j in 0..=n_max {
                        for a in 0..=(i + j) {
                            let b = i + j - a;
                            overlap[at(i, j, a, b)] += w * hq[i] * hqb[j] * hu[a] * hv[b];
                        }
                    }
                }
            }
        }
        for i in 0..=n_max {
            for j in 0..=n_max {
                for a in 0..=(i + j) {
                    let b = i + j - a;
                    let direct = overlap[at(i, j, a, b)];
                    let rec = map.coeff(i, j, a, b);
                    assert!((direct - rec).abs() < 1e-12, "({i},{j})->({a},{b}): {direct} vs {rec}");
                }
            }
        }
    }
}
