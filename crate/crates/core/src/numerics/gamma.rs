use std::f64::consts::PI;

use num_complex::Complex64;

// B_{2k} / (2k(2k-1)) for k = 1..10
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
];

const SHIFT: f64 = 15.0;

/// ln Γ(z) up to a multiple of 2πi in the imaginary part.
pub fn lgamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Γ(z)Γ(1−z) = π / sin(πz)
        return Complex64::new(PI.ln(), 0.0) - ln_sin_pi(z) - lgamma(Complex64::new(1.0, 0.0) - z);
    }
    let mut z = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while z.re < SHIFT && z.norm() < 2.0 * SHIFT {
        shift += z.ln();
        z += 1.0;
    }
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut p = inv;
    for c in STIRLING {
        series += p * c;
        p *= inv2;
    }
    (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln() + series - shift
}

/// ln sin(πz), stable for large |Im z|.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    let one = Complex64::new(1.0, 0.0);
    if z.im >= 0.0 {
        // sin(πz) = e^{−iπz}(e^{2πiz} − 1)/(2i)
        -i * PI * z + ((2.0 * PI * i * z).exp() - one).ln() - (2.0 * i).ln()
    } else {
        i * PI * z + (one - (-2.0 * PI * i * z).exp()).ln() - (2.0 * i).ln()
    }
}

pub fn gamma(z: Complex64) -> Complex64 {
    lgamma(z).exp()
}

pub fn gamma_real(x: f64) -> f64 {
    gamma(Complex64::new(x, 0.0)).re
}

/// Upper incomplete gamma Γ(a, x) for complex a and real x > 0.
pub fn upper_gamma(a: Complex64, x: f64) -> Complex64 {
    assert!(x > 0.0, "upper_gamma needs x > 0");
    if x < 1.5 + 0.25 * a.im.abs() {
        gamma(a) - lower_gamma_series(a, x)
    } else {
        upper_gamma_cf(a, x)
    }
}

fn lower_gamma_series(a: Complex64, x: f64) -> Complex64 {
    // γ(a,x) = x^a e^{−x} Σ x^k / (a(a+1)…(a+k))
    let mut term = 1.0 / a;
    let mut sum = term;
    let mut k = 1.0;
    loop {
        term *= x / (a + k);
        sum += term;
        if term.norm() < 1e-17 * sum.norm() || k > 500.0 {
            break;
        }
        k += 1.0;
    }
    (a * x.ln() - x).exp() * sum
}

fn upper_gamma_cf(a: Complex64, x: f64) -> Complex64 {
    // modified Lentz for Γ(a,x) = e^{−x}x^a / (x+1−a− 1(1−a)/(x+3−a− …))
    let tiny = 1e-300;
    let one = Complex64::new(1.0, 0.0);
    let mut b = Complex64::new(x + 1.0, 0.0) - a;
    let mut c = Complex64::new(1.0 / tiny, 0.0);
    let mut d = one / b;
    let mut h = d;
    for i in 1..10_000 {
        let an = -(i as f64) * (Complex64::new(i as f64, 0.0) - a);
        b += 2.0;
        d = an * d + b;
        if d.norm() < tiny {
            d = Complex64::new(tiny, 0.0);
        }
        c = b + an / c;
        if c.norm() < tiny {
            c = Complex64::new(tiny, 0.0);
        }
        d = one / d;
        let del = d * c;
        h *= del;
        if (del - one).norm() < 1e-16 {
            break;
        }
    }
    (a * x.ln() - x).exp() * h
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn factorials_and_half() {
        let mut f = 1.0;
        for k in 1..20 {
            let g = gamma(c(k as f64, 0.0));
            assert!((g.re - f).abs() / f < 1e-13, "Γ({k})");
            assert!(g.im.abs() / f < 1e-13);
            f *= k as f64;
        }
        assert!((gamma_real(0.5) - PI.sqrt()).abs() < 1e-14);
        assert!((gamma_real(-0.5) + 2.0 * PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn recurrence_and_reflection() {
        for &(x, y) in &[(0.3, 0.0), (0.5, 14.1), (-2.7, 3.0), (1.2, -40.0), (0.25, 120.0), (7.5, 2.5)] {
            let z = c(x, y);
            let lhs = lgamma(z + 1.0) - lgamma(z) - z.ln();
            // compare modulo 2πi
            let k = (lhs.im / (2.0 * PI)).round();
            assert!((lhs - c(0.0, 2.0 * PI * k)).norm() < 1e-11, "{z}");
            let refl = gamma(z) * gamma(c(1.0, 0.0) - z) * (PI * z).sin();
            assert!((refl - PI).norm() / PI < 1e-9, "{z}: {refl}");
        }
    }

    #[test]
    fn conjugation() {
        let z = c(0.7, 3.3);
        assert!((gamma(z.conj()) - gamma(z).conj()).norm() < 1e-15);
    }

    // Simpson in t = ln u on [ln x, ln(x + 60)] as an oracle
    fn upper_oracle(a: Complex64, x: f64) -> Complex64 {
        let (lo, hi) = (x.ln(), (x + 60.0).ln());
        let m = 20_000;
        let h = (hi - lo) / m as f64;
        let f = |t: f64| (a * t - t.exp()).exp();
        let mut sum = f(lo) + f(hi);
        for k in 1..m {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            sum += f(lo + k as f64 * h) * w;
        }
        sum * (h / 3.0)
    }

    #[test]
    fn incomplete_gamma_against_quadrature() {
        for &(ar, ai) in &[(0.5, 0.0), (0.5, 5.0), (0.5, -5.0), (2.0, 1.0), (0.5, 20.0)] {
            for &x in &[0.05, 0.7, 1.4, 1.6, 3.0, 10.0, 30.0] {
                let a = c(ar, ai);
                let got = upper_gamma(a, x);
                let want = upper_oracle(a, x);
                let scale = want.norm().max(1e-30);
                assert!((got - want).norm() / scale < 1e-9, "a={a} x={x}: {got} vs {want}");
            }
        }
        // Γ(1, x) = e^{−x}
        for &x in &[0.1, 1.0, 5.0, 25.0] {
            let g = upper_gamma(c(1.0, 0.0), x);
            assert!((g.re - (-x as f64).exp()).abs() < 1e-14 * (1.0 + (-x as f64).exp()));
        }
    }
}
