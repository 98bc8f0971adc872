use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;

use crate::algebra::Field;
use crate::numerics::{lgamma, ComplexVal, Window};
use crate::{Error, Result};

const LINE: f64 = 0.5;
const STEP: f64 = 0.05;
const MAX_HEIGHT: f64 = 3000.0;
/// Relative size of the last sample that still counts as a converged truncation at MAX_HEIGHT.
const TRUNCATION_OK: f64 = 1e-10;

/// The dual weight Ẇ(x) = (1/2πi)∫_{(c)} Ŵ(1−s) Γ(s)/Γ(1−s) B^{2s−1} x^{−s} ds, B = √|d|/(2π),
/// which turns Σ W(𝒩𝔞/M)χ(𝔞) into a sum over the dual side.
///
/// The integrand apart from x^{−s} is sampled once on the line; every evaluation then only
/// rotates the stored samples.
#[derive(Debug)]
pub struct DualKernel {
    window: Window,
    field: Field,
    nodes: Vec<Complex64>,
    /// Bound on the neglected part of the line, before the factor x^{−c}.
    tail: f64,
    decay: Mutex<HashMap<u64, f64>>,
}

impl DualKernel {
    pub fn new(window: Window, field: Field) -> Result<DualKernel> {
        let b = (field.disc_abs() as f64).sqrt() / (2.0 * PI);
        let lb = b.ln();
        let one = Complex64::new(1.0, 0.0);
        let node = |y: f64| {
            let s = Complex64::new(LINE, y);
            let g = (lgamma(s) - lgamma(one - s) + (2.0 * s - 1.0) * lb).exp();
            window.mellin(one - s) * g
        };
        let mut nodes = vec![node(0.0)];
        let scale = nodes[0].norm().max(1e-300);
        let per_unit = (1.0 / STEP).ceil() as usize;
        let mut quiet = 0;
        let mut k = 1;
        loop {
            let y = k as f64 * STEP;
            let v = node(y);
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::Quadrature(format!("dual kernel not finite at height {y}")));
            }
            nodes.push(v);
            quiet = if v.norm() < 1e-17 * scale { quiet + 1 } else { 0 };
            if quiet > per_unit {
                break;
            }
            if y > MAX_HEIGHT {
                if v.norm() > TRUNCATION_OK * scale {
                    return Err(Error::Quadrature(format!("dual kernel still {:.2e} at height {y}", v.norm())));
                }
                break;
            }
            k += 1;
        }
        // the samples decay at least like e^{−c√y}, whose tail integral is below |v_T|·T
        let last = nodes.last().map_or(0.0, |v| v.norm());
        let tail = if quiet > per_unit { 0.0 } else { last * nodes.len() as f64 * STEP / PI };
        Ok(DualKernel { window, field, nodes, tail, decay: Mutex::new(HashMap::new()) })
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Ẇ(x) for x > 0. The error is the step-h versus step-2h difference.
    pub fn eval(&self, x: f64) -> ComplexVal {
        if matches!(self.window, Window::Zero) {
            return ComplexVal::zero();
        }
        let lx = x.ln();
        // x^{−s} = x^{−c}·e^{−iy ln x}; the samples are conjugate symmetric so Ẇ is real
        let rot = Complex64::from_polar(1.0, -STEP * lx);
        let mut r = Complex64::new(1.0, 0.0);
        let mut fine = 0.0;
        let mut coarse = 0.0;
        for (k, v) in self.nodes.iter().enumerate() {
            let w = if k == 0 { 1.0 } else { 2.0 };
            let term = w * (v * r).re;
            fine += term;
            if k % 2 == 0 {
                coarse += term;
            }
            r *= rot;
            if k % 64 == 63 {
                r = Complex64::from_polar(1.0, -STEP * lx * (k + 1) as f64);
            }
        }
        let f = x.powf(-LINE) / (2.0 * PI);
        let fine = fine * STEP * f;
        let coarse = coarse * 2.0 * STEP * f;
        let err = (fine - coarse).abs() + 1e-16 * fine.abs() + self.tail * x.powf(-LINE);
        ComplexVal::new(Complex64::new(fine, 0.0), err)
    }

    pub fn nodes(&self) -> usize {
        self.nodes.len()
    }

    /// A point beyond which |Ẇ| stays below tol on a geometric grid up to 10⁹.
    pub fn decay_point(&self, tol: f64) -> f64 {
        let key = tol.to_bits();
        if let Some(&x) = self.decay.lock().unwrap().get(&key) {
            return x;
        }
        let mut last = 1e-3;
        let mut x = 1e-3;
        while x < 1e9 {
            if self.eval(x).abs() > tol {
                last = x;
            }
            x *= 1.05;
        }
        let out = last * 1.05;
        self.decay.lock().unwrap().insert(key, out);
        out
    }

    /// Closed form for the exponential window: √A·e^{−Ax}, A = 4π²/|d|.
    pub fn exponential_closed_form(field: Field, x: f64) -> f64 {
        let a = 4.0 * PI * PI / field.disc_abs() as f64;
        a.sqrt() * (-a * x).exp()
    }
}

type KernelKey = (Field, u64, u64, u8);

static KERNELS: Mutex<Vec<(KernelKey, Arc<DualKernel>)>> = Mutex::new(Vec::new());

fn key(window: Window, field: Field) -> KernelKey {
    match window {
        Window::Zero => (field, 0, 0, 0),
        Window::Bump { lo, hi } => (field, lo.to_bits(), hi.to_bits(), 1),
        Window::Exponential => (field, 0, 0, 2),
    }
}

/// Shared kernel per (window, field).
pub fn dual_kernel(window: Window, field: Field) -> Result<Arc<DualKernel>> {
    let k = key(window, field);
    if let Some((_, d)) = KERNELS.lock().unwrap().iter().find(|(kk, _)| *kk == k) {
        return Ok(d.clone());
    }
    let d = Arc::new(DualKernel::new(window, field)?);
    KERNELS.lock().unwrap().push((k, d.clone()));
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_kernel_matches_closed_form() {
        for field in [Field::Eisenstein, Field::Gaussian] {
            let k = dual_kernel(Window::Exponential, field).unwrap();
            for &x in &[0.01, 0.1, 0.5, 1.0, 2.0, 5.0] {
                let got = k.eval(x);
                let want = DualKernel::exponential_closed_form(field, x);
                assert!((got.re() - want).abs() < 1e-12, "x={x}: {got:?} vs {want}");
                assert!(got.err < 1e-10);
            }
        }
    }

    // J₀(z) = (1/2π)∫cos(z sin θ)dθ; the periodic trapezoid rule is exact to rounding once the
    // number of points exceeds z comfortably
    fn bessel_j0(z: f64) -> f64 {
        let m = (z.abs() as usize + 40) * 2;
        (0..m).map(|j| (z * (2.0 * PI * j as f64 / m as f64).sin()).cos()).sum::<f64>() / m as f64
    }

    // Ẇ(x) = (1/B)∫W(y)J₀(2√(xy)/B)dy, an independent route around the contour integral
    fn bessel_oracle(w: Window, field: Field, x: f64) -> f64 {
        let (lo, hi) = match w {
            Window::Bump { lo, hi } => (lo, hi),
            _ => unreachable!(),
        };
        let b = (field.disc_abs() as f64).sqrt() / (2.0 * PI);
        let m = 4000;
        let h = (hi - lo) / m as f64;
        (1..m).map(|j| lo + j as f64 * h).map(|y| w.eval(y) * bessel_j0(2.0 * (x * y).sqrt() / b)).sum::<f64>() * h / b
    }

    #[test]
    fn bump_kernel_matches_bessel_form() {
        for field in [Field::Eisenstein, Field::Gaussian] {
            let w = Window::unit_bump();
            let k = dual_kernel(w, field).unwrap();
            for &x in &[0.05, 0.3, 1.0, 4.0, 20.0, 100.0] {
                let got = k.eval(x);
                let want = bessel_oracle(w, field, x);
                assert!((got.re() - want).abs() < 1e-10, "x={x}: {got:?} vs {want}");
                assert!(got.err < 1e-9, "{got:?}");
            }
        }
    }

    #[test]
    fn bump_kernel_decays_faster_than_x_squared() {
        let w = Window::unit_bump();
        let k = dual_kernel(w, Field::Eisenstein).unwrap();
        // the decay sets in late: x²|Ẇ(x)| is still ≈ 3 at x = 10³
        let prof: Vec<f64> = [1e3, 1e4, 1e5].iter().map(|&x| x * x * bessel_oracle(w, Field::Eisenstein, x).abs()).collect();
        assert!(prof[1] < prof[0] && prof[2] < prof[1], "{prof:?}");
        for &x in &[1e3, 1e4] {
            let got = k.eval(x);
            assert!((got.re() - bessel_oracle(w, Field::Eisenstein, x)).abs() < 1e-9 + got.err);
        }
    }
}
