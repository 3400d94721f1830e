//! The numerical kernels on their own: scaled Bessel K0, oscillator
//! functions and the two quadrature engines.

use gravdeco::specfun::quadrature::TanhSinh;
use gravdeco::specfun::{bessel_k0_scaled, hermite_functions, integrate_1d, phi_n, QuadratureSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("exp(x) K0(x)");
    for x in [1e-60, 1e-8, 0.25, 1.0, 2.0, 10.0, 1e3] {
        println!("  {x:>8.0e}  {:.16}", bessel_k0_scaled(x)?);
    }

    // h_n(t) for n = 0..=8 at a few points; |h_0|² is the unit normal density
    let mut h = [0.0; 9];
    println!("\noscillator functions h_n(t), n = 0..8");
    for t in [0.0, 1.0, 3.0] {
        hermite_functions(t, &mut h);
        let row: Vec<String> = h.iter().map(|v| format!("{v:+.4}")).collect();
        println!("  t = {t}: {}", row.join(" "));
    }

    println!("\nnorm of phi_n at beta = 0.7");
    for (label, spec) in [("gauss-hermite(60)", QuadratureSpec::gauss_hermite(60, 1e-12)), ("tanh-sinh", QuadratureSpec::tanh_sinh(1e-12))] {
        let norms: Vec<String> = [0, 4, 16]
            .iter()
            .map(|&n| integrate_1d(|q| phi_n(n, q, 0.7).powi(2), &spec).map(|e| format!("{:.15}", e.value)))
            .collect::<Result<_, _>>()?;
        println!("  {label:>18}: {}", norms.join("  "));
    }

    // the near-cusp that defeats Gauss-Hermite: ∫_0^1 dt/√(t² + ε²) = asinh(1/ε)
    let eps: f64 = 1e-40;
    let v = TanhSinh::new(1e-13).integrate(0.0, 1.0, |n| 1.0 / n.from_a.hypot(eps))?;
    println!("\ntanh-sinh with eps = {eps:e}: {:.15} (exact {:.15})", v.value, (1.0 / eps).asinh());
    Ok(())
}
